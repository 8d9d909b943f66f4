#include "doctest.h"
#include "ndcut/formula.hpp"
#include "ndcut/subst.hpp"
#include "ndcut/term.hpp"

using namespace ndcut;

namespace {
const Formula A = Formula::atom("A");
const Formula B = Formula::atom("B");
}  // namespace

TEST_CASE("formula basics") {
  CHECK(A == Formula::atom("A"));
  CHECK(A != B);
  CHECK(Formula::neg(A) == Formula::imp(A, Formula::bottom()));
  CHECK(Formula::neg(A).is_neg());
  CHECK_FALSE(Formula::imp(A, B).is_neg());
  CHECK(Formula::imp(A, B).show() == "A -> B");
  CHECK(Formula::neg(A).show() == "~A");
  CHECK(Formula::neg(A).show(false) == "A -> Bot");
  CHECK(Formula::imp(Formula::imp(A, B), A).show() == "(A -> B) -> A");
  CHECK(Formula::imp(A, Formula::imp(B, A)).show() == "A -> B -> A");
  CHECK(Formula::conj(A, Formula::disj(B, A)).show() == "A /\\ (B \\/ A)");
  CHECK(Formula::disj(Formula::conj(A, B), A).show() == "A /\\ B \\/ A");
  CHECK(Formula::neg(Formula::conj(A, B)).show() == "~(A /\\ B)");
  CHECK(Formula::imp(A, B).connectives() == 1);
  CHECK(Formula::neg(A).connectives() == 1);
  CHECK(A.connectives() == 0);
}

TEST_CASE("alpha equivalence") {
  // \x:A. x  vs  \y:A. y
  CHECK(alpha_eq(lam("x", A, ivar("x")), lam("y", A, ivar("y"))));
  // \x:A. x  vs  \x:A. z
  CHECK_FALSE(alpha_eq(lam("x", A, ivar("x")), lam("x", A, ivar("z"))));
  // mu a:A.(a x)  vs  mu b:A.(b x)
  CHECK(alpha_eq(mu("a", A, name("a", ivar("x"))), mu("b", A, name("b", ivar("x")))));
  // annotations matter
  CHECK_FALSE(alpha_eq(lam("x", A, ivar("x")), lam("x", B, ivar("x"))));
  // free variables are matched by name
  CHECK(alpha_eq(ivar("x"), ivar("x")));
  CHECK_FALSE(alpha_eq(ivar("x"), ivar("y")));
  // case binders
  Elim c1 = case_of("x", ivar("x"), "y", ivar("z"));
  Elim c2 = case_of("u", ivar("u"), "v", ivar("z"));
  Elim c3 = case_of("u", ivar("u"), "v", ivar("v"));
  CHECK(alpha_eq(app(ivar("m"), c1), app(ivar("m"), c2)));
  CHECK_FALSE(alpha_eq(app(ivar("m"), c1), app(ivar("m"), c3)));
  // sort separation: mu binder does not capture intuitionistic occurrences
  CHECK_FALSE(alpha_eq(mu("a", A, name("a", ivar("a"))), mu("b", A, name("b", ivar("b")))));
  CHECK(alpha_eq(mu("a", A, name("a", ivar("a"))), mu("b", A, name("b", ivar("a")))));
}

TEST_CASE("alpha hash agrees with alpha_eq") {
  Term t1 = lam("x", A, app(ivar("x"), proj(1)));
  Term t2 = lam("w", A, app(ivar("w"), proj(1)));
  CHECK(alpha_eq(t1, t2));
  CHECK(alpha_hash(t1) == alpha_hash(t2));
  Term t3 = lam("x", A, app(ivar("x"), proj(2)));
  CHECK(alpha_hash(t1) != alpha_hash(t3));  // not guaranteed, but expected
  Term m1 = mu("a", A, name("a", ivar("x")));
  Term m2 = mu("b", A, name("b", ivar("x")));
  CHECK(alpha_hash(m1) == alpha_hash(m2));
}

TEST_CASE("subst_intu basics") {
  // x[x:=y]
  CHECK(alpha_eq(subst_intu(ivar("x"), {{"x", ivar("y")}}), ivar("y")));
  // <x,x>[x:=\y:A.y]
  Term id = lam("y", A, ivar("y"));
  CHECK(alpha_eq(subst_intu(pair(ivar("x"), ivar("x")), {{"x", id}}), pair(id, id)));
  // capture avoidance: (\y:A. x)[x:=y] = \y':A. y
  Term got = subst_intu(lam("y", A, ivar("x")), {{"x", ivar("y")}});
  const LamT* l = got.get<LamT>();
  REQUIRE(l != nullptr);
  CHECK(l->var == "y'");
  CHECK(alpha_eq(l->body, ivar("y")));
  // shadowing: (\x:A. x)[x:=y] unchanged
  CHECK(alpha_eq(subst_intu(lam("x", A, ivar("x")), {{"x", ivar("y")}}), lam("x", A, ivar("x"))));
  // empty substitution is the identity
  Term t = app(lam("x", A, pair(ivar("x"), ivar("z"))), eterm(ivar("z")));
  CHECK(alpha_eq(subst_intu(t, {}), t));
  // simultaneous, not sequential: x[x:=y, y:=z] has image y, not z
  Term sim = subst_intu(pair(ivar("x"), ivar("y")), {{"x", ivar("y")}, {"y", ivar("z")}});
  CHECK(alpha_eq(sim, pair(ivar("y"), ivar("z"))));
}

TEST_CASE("subst_intu under case and mu") {
  // case branch binders shadow
  Elim c = case_of("x", ivar("x"), "y", ivar("x"));
  Elim c2 = subst_intu(c, {{"x", ivar("z")}});
  const CaseE* n = c2.get<CaseE>();
  REQUIRE(n != nullptr);
  CHECK(alpha_eq(n->branch1, ivar("x")));
  CHECK(alpha_eq(n->branch2, ivar("z")));
  // classical binder renamed when image mentions it as a classical free var
  Term body = mu("a", A, name("a", ivar("x")));
  Term img = mu("b", B, name("a", ivar("z")));  // free classical a
  Term out = subst_intu(body, {{"x", img}});
  const MuT* m = out.get<MuT>();
  REQUIRE(m != nullptr);
  CHECK(m->var == "a'");
  VarSet fv = free_vars(out);
  CHECK(fv.contains_cls("a"));
  CHECK(fv.contains_intu("z"));
}

TEST_CASE("subst_class basics") {
  // (a z)[a:=*p1] = (a (z p1))
  Term got = subst_class(name("a", ivar("z")), "a", proj(1));
  CHECK(alpha_eq(got, name("a", app(ivar("z"), proj(1)))));
  // (b z)[a:=*p1] unchanged
  CHECK(alpha_eq(subst_class(name("b", ivar("z")), "a", proj(1)), name("b", ivar("z"))));
  // nested occurrences: (a (a x))[a:=*e] = (a ((a (x e)) e))
  Elim e = proj(1);
  Term nested = name("a", name("a", ivar("x")));
  Term want = name("a", app(name("a", app(ivar("x"), e)), e));
  CHECK(alpha_eq(subst_class(nested, "a", e), want));
  // mu a shadows
  Term sh = mu("a", A, name("a", ivar("x")));
  CHECK(alpha_eq(subst_class(sh, "a", proj(1)), sh));
  // distributes over pairs
  Term p = pair(name("a", ivar("x")), name("a", ivar("y")));
  CHECK(alpha_eq(subst_class(p, "a", e),
                 pair(subst_class(name("a", ivar("x")), "a", e),
                      subst_class(name("a", ivar("y")), "a", e))));
}

TEST_CASE("subst_class avoids capture of eps free variables") {
  // (\z:A. (a z))[a:=* w] must not capture w's intuitionistic occurrence
  Term t = lam("w", A, name("a", ivar("w")));
  Term got = subst_class(t, "a", eterm(ivar("w")));
  const LamT* l = got.get<LamT>();
  REQUIRE(l != nullptr);
  CHECK(l->var == "w'");
  CHECK(alpha_eq(got, lam("u", A, name("a", app(ivar("u"), eterm(ivar("w")))))));
}

TEST_CASE("cxty") {
  CHECK(cxty(ivar("x")) == 1);
  CHECK(cxty(lam("x", A, ivar("x"))) == 2);
  CHECK(cxty(app(ivar("x"), ivar("y"))) == 3);
  CHECK(cxty(pair(ivar("x"), ivar("y"))) == 3);
  CHECK(cxty(app(ivar("x"), proj(1))) == 3);
  CHECK(cxty(app(ivar("m"), case_of("x", ivar("x"), "y", ivar("y")))) == 5);
  CHECK(cxty(mu("a", A, name("a", ivar("x")))) == 3);
  // cxty(M[x:=N]) = cxty(M) + k*(cxty(N)-1)
  Term m = pair(ivar("x"), pair(ivar("x"), ivar("z")));
  Term n = app(ivar("u"), ivar("v"));
  CHECK(cxty(subst_intu(m, {{"x", n}})) == cxty(m) + 2 * (cxty(n) - 1));
}

TEST_CASE("paths") {
  Term t = app(ivar("x"), ivar("y"));
  CHECK(path_str({}) == ".");
  CHECK(path_str({0, 1, 0}) == "0.1.0");
  CHECK(path_parse(".") == Path{});
  CHECK(path_parse("0.1.0") == Path{0, 1, 0});
  CHECK_FALSE(path_parse("0..1").has_value());
  CHECK_FALSE(path_parse("x").has_value());

  TermOrElim root = subterm_at(t, {});
  REQUIRE(std::holds_alternative<Term>(root));
  CHECK(alpha_eq(std::get<Term>(root), t));
  // (x y) at the eliminator child is the wrapper; its own child is y
  TermOrElim el = subterm_at(t, {1});
  REQUIRE(std::holds_alternative<Elim>(el));
  TermOrElim y = subterm_at(t, {1, 0});
  REQUIRE(std::holds_alternative<Term>(y));
  CHECK(alpha_eq(std::get<Term>(y), ivar("y")));
  CHECK_THROWS_AS(subterm_at(lam("x", A, ivar("x")), {1}), bad_path);
  CHECK_THROWS_AS(subterm_at(t, {0, 0}), bad_path);

  // replace round-trip at every path
  Term big = mu("a", A, name("a", app(lam("x", A, ivar("x")),
                                      case_of("u", ivar("u"), "v", pair(ivar("v"), ivar("z"))))));
  std::vector<Path> ps = {{}, {0}, {0, 0}, {0, 0, 0}, {0, 0, 1}, {0, 0, 1, 0}, {0, 0, 1, 1}};
  for (const auto& p : ps) {
    TermOrElim sub = subterm_at(big, p);
    CHECK(alpha_eq(replace_at(big, p, sub), big));
  }
  // replacement actually lands
  Term rep = replace_at(t, {1, 0}, TermOrElim{ivar("w")});
  CHECK(alpha_eq(rep, app(ivar("x"), ivar("w"))));
  // sort mismatch is a path error
  CHECK_THROWS_AS(replace_at(t, {1}, TermOrElim{ivar("w")}), bad_path);
}

TEST_CASE("spine and unspine") {
  Term head = ivar("x");
  std::vector<Elim> es = {proj(1), eterm(ivar("y")), proj(2)};
  Term s = spine(head, es);
  CHECK(cxty(s) == 1 + 3 + 1 + 1 + 1);
  auto [h, back] = unspine(s);
  CHECK(alpha_eq(h, head));
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(alpha_eq(TermOrElim{back[i]}, TermOrElim{es[i]}));
  auto [h2, none] = unspine(ivar("z"));
  CHECK(alpha_eq(h2, ivar("z")));
  CHECK(none.empty());
}

TEST_CASE("free variables") {
  Term t = lam("x", A, app(ivar("x"), eterm(ivar("y"))));
  VarSet fv = free_vars(t);
  CHECK_FALSE(fv.contains_intu("x"));
  CHECK(fv.contains_intu("y"));
  Term m = mu("a", A, name("b", name("a", ivar("x"))));
  VarSet fm = free_vars(m);
  CHECK(fm.contains_cls("b"));
  CHECK_FALSE(fm.contains_cls("a"));
  CHECK(fm.contains_intu("x"));
  Elim c = case_of("x", ivar("x"), "y", ivar("x"));
  VarSet fc = free_vars(c);
  CHECK(fc.contains_intu("x"));  // branch2's x is free
  Term sh = lam("x", A, ivar("x"));
  CHECK(free_vars(sh).intu.empty());
}

TEST_CASE("marked constructors and erasure") {
  Term n = ivar("n");
  Elim e = proj(1);
  Term mk = mark(n);
  Elim bx = box(e);
  CHECK_FALSE(is_plain(mk));
  CHECK_FALSE(is_plain(bx));
  CHECK(is_plain(n));
  CHECK(alpha_eq(erase_marked(mk), n));
  CHECK(alpha_eq(TermOrElim{erase_marked(bx)}, TermOrElim{e}));
  Term t = app(mark(n), box(eterm(ivar("z"))));
  CHECK(alpha_eq(erase_marked(t), app(n, eterm(ivar("z")))));
  // payloads must be plain
  CHECK_THROWS_AS(mark(mk), std::invalid_argument);
  CHECK_THROWS_AS(box(bx), std::invalid_argument);
  // marked payload variables are constants, not free occurrences
  CHECK(free_vars(mk).intu.empty());
  std::set<std::string> names;
  all_names(mk, names);
  CHECK(names.count("n"));
  // cxty counts mark/box as one plus payload
  CHECK(cxty(mk) == 2);
  CHECK(cxty(t) == 5);  // App + (Mark + payload) + (Box + payload)
  // alpha_eq compares payloads as constants
  CHECK(alpha_eq(mark(ivar("n")), mark(ivar("n"))));
  CHECK_FALSE(alpha_eq(mark(ivar("n")), mark(ivar("m"))));
  // binders outside do not touch payload names
  CHECK_FALSE(alpha_eq(lam("n", A, mark(ivar("n"))), lam("m", A, mark(ivar("m")))));
}

TEST_CASE("substitution ignores payloads") {
  Term t = app(mark(ivar("x")), box(eterm(ivar("x"))));
  CHECK(alpha_eq(subst_intu(t, {{"x", ivar("y")}}), t));
  Term u = pair(ivar("x"), mark(ivar("x")));
  CHECK(alpha_eq(subst_intu(u, {{"x", ivar("y")}}), pair(ivar("y"), mark(ivar("x")))));
  Term c = name("a", mark(name("a", ivar("z"))));
  Term cc = subst_class(c, "a", proj(1));
  CHECK(alpha_eq(cc, name("a", app(mark(name("a", ivar("z"))), proj(1)))));
}

TEST_CASE("fresh_name") {
  std::set<std::string> avoid = {"x", "x'"};
  CHECK(fresh_name("x", avoid) == "x''");
  CHECK(fresh_name("y", avoid) == "y'");
}
