#include "ndcut/marked.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "ndcut/graph.hpp"
#include "ndcut/reduction.hpp"
#include "ndcut/subst.hpp"
#include "ndcut/syntax.hpp"
#include "ndcut/visit.hpp"

using namespace ndcut;

namespace {

const ScopeMap& base_scope() {
  static const ScopeMap m = [] {
    ScopeMap s;
    for (const char* n : {"m", "n", "o", "p", "q", "r", "s", "e", "e1", "e2", "w", "k",
                          "u", "v", "x", "y", "z", "m2", "n1", "n2", "q1", "q2", "a1",
                          "a2", "b1", "b2", "f"})
      s[n] = VarSort::Intu;
    return s;
  }();
  return m;
}

Term T(const std::string& s) { return parse_term(s, base_scope()); }
Term Tc(const std::string& s, const ScopeMap& extra) {
  ScopeMap m = base_scope();
  for (const auto& [k, v] : extra) m[k] = v;
  return parse_term(s, m);
}
Elim E(const std::string& s) { return parse_elim(s, base_scope()); }

// All mark occurrences, shallow walk for test bookkeeping.
void marks_of(const Term& t, Path at, std::vector<Path>& out) {
  auto child = [&](const Term& c, std::initializer_list<int> steps) {
    Path p = at;
    p.insert(p.end(), steps.begin(), steps.end());
    marks_of(c, p, out);
  };
  std::visit(overloaded{
                 [&](const IVarT&) {},
                 [&](const LamT& l) { child(l.body, {0}); },
                 [&](const AppT& a) {
                   child(a.fun, {0});
                   std::visit(overloaded{
                                  [&](const ETermE& e) { child(e.term, {1, 0}); },
                                  [&](const ProjE&) {},
                                  [&](const CaseE& c) {
                                    child(c.branch1, {1, 0});
                                    child(c.branch2, {1, 1});
                                  },
                                  [&](const BoxE&) {},
                              },
                              a.elim.node().v);
                 },
                 [&](const PairT& p) {
                   child(p.first, {0});
                   child(p.second, {1});
                 },
                 [&](const InjT& i) { child(i.body, {0}); },
                 [&](const MuT& m) { child(m.body, {0}); },
                 [&](const NameT& n) { child(n.arg, {0}); },
                 [&](const MarkT&) { out.push_back(at); },
             },
             t.node().v);
}

std::vector<Path> marks_of(const Term& t) {
  std::vector<Path> out;
  marks_of(t, {}, out);
  return out;
}

// Payload multiset of the marks, as printed strings.
std::multiset<std::string> mark_payloads(const Term& t) {
  std::multiset<std::string> out;
  for (const Path& p : marks_of(t)) {
    TermOrElim te = subterm_at(t, p);
    out.insert(print_term(std::get<Term>(te).get<MarkT>()->payload));
  }
  return out;
}

bool contains_alpha(const std::vector<Term>& ts, const Term& t) {
  for (const Term& o : ts)
    if (alpha_eq(o, t)) return true;
  return false;
}

// Example A from the translation examples.
const char* kA = "(m [x1.{n} | x2.{o}] [[e]] p)";
// Example B: two independently routed boxes with dead mu branches.
const char* kB =
    "(m [x1.(n [y1.{o} | y2.mu a:Bot. p] [[e1]]) |"
    " x2.((mu b:Bot. (b mu c:Bot. (c (q [z1.mu d:Bot. r | z2.{s}])))) [[e2]])])";
// A box whose mark sits inside the function part of another, inner box.
const char* kEx = "((mu a:Bot. ((mu d:Bot. <(d {m2}), (a {n})> [[e2]]) w)) [[e1]])";

}  // namespace

TEST_CASE("payload modes") {
  CHECK(mode_of(E("m")) == EpsMode::Term);
  CHECK(mode_of(E("p1")) == EpsMode::Proj);
  CHECK(mode_of(E("[u1.p | u2.q]")) == EpsMode::Case);
  CHECK_THROWS_AS(mode_of(E("[[e]]")), std::invalid_argument);

  CHECK(box_mode(T(kA)) == EpsMode::Term);
  CHECK(!box_mode(T("x")).has_value());
  bool mixed = false;
  Term two = T("((m [x1.{n} | x2.{o}] [[e]]) [y1.{q} | y2.{r}] [[p1]])");
  box_mode(two, &mixed);
  CHECK(mixed);
}

TEST_CASE("box-commuting redexes") {
  Term a = T(kA);
  std::vector<Redex> rs = btr_redexes(a);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == RedexKind::Perm);
  CHECK(rs[0].path == Path{0});
  std::vector<Term> next = btr_step(a);
  REQUIRE(next.size() == 1);
  CHECK(alpha_eq(next[0], T("(m [x1.({n} [[e]]) | x2.({o} [[e]])] p)")));

  Term c0 = T("(mu a:Bot. (a {m}) [[e]])");
  std::vector<Term> cn = btr_step(c0);
  REQUIRE(cn.size() == 1);
  CHECK(alpha_eq(cn[0], T("mu a:Bot. (a ({m} [[e]]))")));

  // Annihilation and plain permutation are not box-commuting steps.
  CHECK(btr_redexes(T("({n} [[e]])")).empty());
  CHECK(btr_redexes(T("(m [x1.n | x2.o] e)")).empty());
  CHECK(!redexes(T("({n} [[e]])")).empty());
}

TEST_CASE("acceptable terms") {
  CHECK(acceptable(T("{n}")));
  CHECK(acceptable(T("mu a:Bot. (a {n})")));
  CHECK(acceptable(T("(m [x1.{n} | x2.{o}])")));
  CHECK(acceptable(T("mu a:A. x")));  // no namings at all
  CHECK(acceptable(T("mu a:Bot. (a mu b:Bot. (b {n}))")));
  CHECK_FALSE(acceptable(T("x")));
  CHECK_FALSE(acceptable(T("mu a:Bot. (a x)")));
  CHECK_FALSE(acceptable(T("(m [x1.{n} | x2.y])")));

  // The inner mu rebinds a; its naming does not count against the outer one.
  Term shadow = Tc("mu a:Bot. (b (mu a:Bot. (a x)))", {{"b", VarSort::Cls}});
  CHECK(acceptable(shadow));
  CHECK(st_set(shadow).empty());
}

TEST_CASE("st occurrences") {
  CHECK(st_set(T("{n}")) == std::vector<Path>{{}});
  CHECK(st_set(T("mu a:Bot. (a {n})")) == std::vector<Path>{{0, 0}});
  CHECK(st_set(T("(m [x1.{n} | x2.{o}])")) == std::vector<Path>{{1, 0}, {1, 1}});
  // Dead mu branches contribute nothing.
  CHECK(st_set(T("(m [x1.{n} | x2.mu a:Bot. p])")) == std::vector<Path>{{1, 0}});
  CHECK_THROWS_AS(st_set(T("x")), not_acceptable);
}

TEST_CASE("literal goodness") {
  CHECK_FALSE(good_wrt(T("x"), {}));
  CHECK(good_wrt(T("x"), {{}}));
  CHECK(good_wrt(T("mu a:Bot. (a u)"), {{0, 0}}));
  CHECK_FALSE(good_wrt(T("mu a:Bot. (a u)"), {}));
  CHECK(good_wrt(T("(m [x1.u | x2.v])"), {{1, 0}, {1, 1}}));
  CHECK_FALSE(good_wrt(T("(m [x1.u | x2.v])"), {{1, 0}}));
}

TEST_CASE("correctness") {
  CHECK(correct(T(kA)));
  CHECK(correct(T(kB)));
  CHECK(correct(T(kEx)));
  CHECK(correct(T("x")));
  CHECK(correct(T("(m [x1.n | x2.o] e p)")));

  CHECK_FALSE(correct(T("{n}")));          // no box owns the mark
  CHECK_FALSE(correct(T("(x [[e]])")));    // box over an unacceptable function
  CHECK_FALSE(correct(T("(o {n})")));      // mark in argument position
  CHECK(correct(T(kA), EpsMode::Term));
  CHECK_FALSE(correct(T(kA), EpsMode::Proj));  // payload shape disagrees

  // Mixed payload shapes violate the mode discipline however checked.
  Term two = T("((m [x1.{n} | x2.{o}] [[e]]) [y1.{q} | y2.{r}] [[p1]])");
  CHECK_FALSE(correct(two));
  CHECK_FALSE(correct(two, EpsMode::Term));
  CHECK_FALSE(correct(two, EpsMode::Proj));
}

TEST_CASE("case mode skeleton condition") {
  Term m0 = T("(m [x1.{n} | x2.{o}] [[ [u1.p | u2.q] ]])");
  CHECK(box_mode(m0) == EpsMode::Case);
  CHECK(correct(m0));

  // A case-mode box applied further is exactly what the condition forbids;
  // the same shape with a term payload is fine.
  CHECK_FALSE(correct(T("(m [x1.{n} | x2.{o}] [[ [u1.p | u2.q] ]] w)")));
  CHECK(correct(T("(m [x1.{n} | x2.{o}] [[e]] w)")));

  // Correctness survives the whole commute/annihilate cascade even though
  // the literal skeleton clauses fail once a branch has annihilated.
  std::vector<Term> s1 = btr_step(m0);
  REQUIRE(s1.size() == 1);
  Term m1 = s1[0];
  CHECK(alpha_eq(m1, T("(m [x1.({n} [[ [u1.p | u2.q] ]]) | x2.({o} [[ [u1.p | u2.q] ]])])")));
  CHECK(correct(m1));

  std::vector<Redex> rs = redexes(m1);
  auto it = std::find_if(rs.begin(), rs.end(),
                         [](const Redex& r) { return r.kind == RedexKind::MarkBox; });
  REQUIRE(it != rs.end());
  Term m2 = reduce_at(m1, it->path);
  CHECK(alpha_eq(m2, T("(m [x1.(n [u1.p | u2.q]) | x2.({o} [[ [u1.p | u2.q] ]])])")));
  CHECK(correct(m2));
  CHECK_FALSE(good_wrt(m2, {{1, 1}}));  // the literal clauses reject it

  // The injection route: select, annihilate, done.
  Term c0 = T("(in1[A \\/ B] w [x1.{n} | x2.{o}] [[ [u1.p | u2.q] ]])");
  CHECK(correct(c0));
  for (const Term& s : step_all(c0)) CHECK(correct(s));
}

TEST_CASE("erasure and routing translations") {
  Term a = T(kA);
  CHECK(alpha_eq(t1(a), T("(m [x1.n | x2.o] e p)")));
  CHECK(alpha_eq(t2(a), T("(m [x1.(n e) | x2.(o e)] p)")));

  Term b = T(kB);
  CHECK(alpha_eq(t1(b), T("(m [x1.(n [y1.o | y2.mu a:Bot. p] e1) |"
                          " x2.(mu b:Bot. (b mu c:Bot. (c (q [z1.mu d:Bot. r | z2.s]))) e2)])")));
  CHECK(alpha_eq(t2(b), T("(m [x1.(n [y1.(o e1) | y2.mu a:Bot. p]) |"
                          " x2.mu b:Bot. (b mu c:Bot. (c (q [z1.mu d:Bot. r | z2.(s e2)])))])")));

  // A mark whose box is not inside the argument stays in place.
  CHECK(alpha_eq(t2(T("{n}")), T("{n}")));
  CHECK(alpha_eq(t2(T("({n} [[e]])")), T("(n e)")));
  CHECK(alpha_eq(t2(T("({n} [[ [u1.p | u2.q] ]])")), T("(n [u1.p | u2.q])")));
  Term plain = T("(m [x1.n | x2.o] e p)");
  CHECK(alpha_eq(t2(plain), plain));
  CHECK(alpha_eq(t1(plain), plain));

  // A mark routed through an outer box across an inner box application.
  Term ex = T(kEx);
  CHECK(alpha_eq(t2(ex), T("mu a:Bot. (mu d:Bot. <(d (m2 e2)), (a (n e1))> w)")));
}

TEST_CASE("experimental normal-form translation") {
  for (const char* src : {kA, kB, kEx}) {
    Term m = T(src);
    CHECK(alpha_eq(t2_via_btr(m), t2(m)));
  }
}

TEST_CASE("path weight and box count") {
  CHECK(lg(T("({n} [[e]])")) == 3);
  CHECK(lg(T(kA)) == 8);
  CHECK(lg(T(kEx)) == 14);
  CHECK(nb(T(kA)) == 1);
  CHECK(nb(T(kB)) == 2);
  CHECK(nb(T("x")) == 0);
  CHECK_THROWS_AS(lg(T("{n}")), std::invalid_argument);

  // Every box-commuting step strictly shrinks lg.
  for (const char* src : {kA, kB, kEx, "(mu a:Bot. (a {m}) [[e]])"}) {
    Term m = T(src);
    long before = lg(m);
    std::vector<Term> nexts = btr_step(m);
    CHECK(!nexts.empty());
    for (const Term& n : nexts) CHECK(lg(n) < before);
  }
  CHECK(lg(btr_step(T(kA))[0]) == 6);
  CHECK(lg(T("mu a:Bot. (a ({m} [[e]]))")) == 3);
}

TEST_CASE("lifting one plain step") {
  // The plain redex exists verbatim in the marked term.
  Term a = T(kA);
  std::vector<LiftStep> c1 = lift_step(a, T("(m [x1.(n e) | x2.(o e)] p)"));
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].fired.kind == RedexKind::Perm);
  CHECK(is_btr_redex(a, c1[0].fired));
  CHECK(alpha_eq(c1[0].term, T("(m [x1.({n} [[e]]) | x2.({o} [[e]])] p)")));

  // The plain redex lives inside a payload.
  Term p0 = T("({(\\x:A. x y)} [[e]])");
  std::vector<LiftStep> c2 = lift_step(p0, T("(y e)"));
  REQUIRE(c2.size() == 1);
  CHECK(c2[0].fired.kind == RedexKind::Beta);
  CHECK(c2[0].fired.path == Path{0, 0});
  CHECK(alpha_eq(c2[0].term, T("({y} [[e]])")));

  // The plain redex spans the mark/box seam: annihilate, then fire.
  Term p1 = T("({\\x:A. x} [[y]])");
  std::vector<LiftStep> c3 = lift_step(p1, T("y"));
  REQUIRE(c3.size() == 2);
  CHECK(c3[0].fired.kind == RedexKind::MarkBox);
  CHECK(alpha_eq(erase_marked(c3[1].term), T("y")));

  CHECK_THROWS_AS(lift_step(p1, T("(o y)")), lift_error);
}

TEST_CASE("substitution treats payloads as constants") {
  Term m = T("(k [x1.{n} | x2.{o}])");
  Term inj1 = T("in1[A \\/ B] w");
  Term ms = subst_intu(m, {{"k", inj1}});
  CHECK(acceptable(ms));
  CHECK(mark_payloads(ms) == mark_payloads(m));

  // A substitution aimed at a payload-only name changes nothing.
  CHECK(alpha_eq(subst_intu(m, {{"n", T("w")}}), m));

  Term m3 = Tc("mu a:Bot. <(a {n}), (b w)>", {{"b", VarSort::Cls}});
  Term m3s = subst_class(m3, "b", E("u"));
  CHECK(acceptable(m3s));
  CHECK(mark_payloads(m3s) == mark_payloads(m3));
  CHECK(alpha_eq(m3s, Tc("mu a:Bot. <(a {n}), (b (w u))>", {{"b", VarSort::Cls}})));
}

TEST_CASE("acceptability survives reduction") {
  // A redex beside the marks: st is untouched.
  Term m4 = T("((\\u:A. u) k [x1.{n} | x2.{o}])");
  CHECK(acceptable(m4));
  for (const Term& s : step_all(m4)) {
    CHECK(acceptable(s));
    CHECK(mark_payloads(s) == mark_payloads(m4));
  }
  // Selection discards one branch: st shrinks.
  Term m5 = T("(in2[A \\/ A] w [x1.{n} | x2.{o}])");
  std::vector<Term> next = step_all(m5);
  REQUIRE(next.size() == 1);
  CHECK(acceptable(next[0]));
  auto before = mark_payloads(m5);
  for (const std::string& pl : mark_payloads(next[0])) CHECK(before.count(pl) == 1);
}

TEST_CASE("correctness is preserved by every step") {
  for (const char* src : {kA, kB, kEx, "(in1[A \\/ B] w [x1.{n} | x2.{o}] [[e]])"}) {
    ReductionGraph g = explore(T(src), 10000);
    REQUIRE(g.complete);
    for (const Term& n : g.nodes) CHECK(correct(n));
  }
}

TEST_CASE("translation images advance or the step commutes a box") {
  const char* srcs[] = {kA, kB, kEx, "(m [x1.{n} | x2.{o}] [[((\\u:A. u) w)]] p)",
                        "(in1[A \\/ B] w [x1.{n} | x2.{o}] [[e]])"};
  for (const char* src : srcs) {
    Term m = T(src);
    REQUIRE(correct(m));
    for (const Redex& r : redexes(m)) {
      Term n = reduce_at(m, r.path);
      std::optional<long> k = t2_distance(t2(m), t2(n));
      REQUIRE(k.has_value());
      if (*k == 0) {
        // Stalled images: a box-commuting step (lg shrinks) or annihilation.
        bool ann = r.kind == RedexKind::MarkBox;
        CHECK((is_btr_redex(m, r) || ann));
        if (is_btr_redex(m, r)) CHECK(lg(n) < lg(m));
      }
    }
  }
  // The eliminator payload feeds every routed mark: one payload step maps to
  // one plain step per occurrence.
  Term m = T("(m [x1.{n} | x2.{o}] [[((\\u:A. u) w)]] p)");
  std::vector<Redex> rs = redexes(m);
  auto it = std::find_if(rs.begin(), rs.end(), [&](const Redex& r) {
    return r.kind == RedexKind::Beta && r.path.size() > 1 && r.path[0] == 0;
  });
  REQUIRE(it != rs.end());
  Term n = reduce_at(m, it->path);
  CHECK(t2_distance(t2(m), t2(n)) == 2);
}

TEST_CASE("routing through a box application's function part") {
  // T2 of (N [[e]]) only depends on N through T2(N).
  Term ex = T(kEx);
  TermOrElim fun = subterm_at(ex, {0});
  Term rebuilt = app(t2(std::get<Term>(fun)), box(E("e1")));
  CHECK(alpha_eq(t2(rebuilt), t2(ex)));

  // For a box-free function part, a step inside it maps through T2.
  Term n0 = T("(in1[A \\/ B] w [x1.{n} | x2.{o}])");
  Term m0 = app(n0, box(E("e")));
  REQUIRE(correct(m0));
  std::vector<Term> next = step_all(n0);
  REQUIRE(next.size() == 1);
  Term m1 = app(next[0], box(E("e")));
  std::optional<long> k = t2_distance(t2(m0), t2(m1));
  REQUIRE(k.has_value());
  CHECK(*k == 1);
}

TEST_CASE("mark in argument position is impossible in correct terms") {
  CHECK(car_star_violations(T(kA)).empty());
  CHECK(car_star_violations(T(kB)).empty());
  CHECK(car_star_violations(T(kEx)).empty());
  CHECK(car_star_violations(T("(o {n})")).size() == 1);
  CHECK(car_star_violations(T("({n} w)")).size() == 1);
  CHECK(car_star_violations(T("({n} [[e]])")).empty());
  for (const char* src : {kA, kB, kEx}) {
    ReductionGraph g = explore(T(src), 10000);
    for (const Term& n : g.nodes) CHECK(car_star_violations(n).empty());
  }
}

TEST_CASE("eps routing is unique") {
  Term b = T(kB);
  Path o_at = {1, 0, 0, 1, 0};
  Path s_at = {1, 1, 0, 0, 0, 0, 0, 1, 1};
  REQUIRE(std::get<Term>(subterm_at(b, o_at)).is<MarkT>());
  REQUIRE(std::get<Term>(subterm_at(b, s_at)).is<MarkT>());
  CHECK(alpha_eq(eps_of(b, o_at), E("e1")));
  CHECK(alpha_eq(eps_of(b, s_at), E("e2")));
  CHECK_THROWS_AS(eps_of(b, Path{}), std::invalid_argument);     // not a mark
  CHECK_THROWS_AS(eps_of(T("{n}"), Path{}), std::invalid_argument);  // no owner
}

TEST_CASE("certificates for lifted traces") {
  SUBCASE("term mode, two permutations") {
    AppScenario sc = parse_scenario(
        "ctx m:P, n1:P, n2:P, e:P, p:P; M = m, N1 = n1, N2 = n2, eps = e, V = [p]");
    ScopeMap scope = scope_of(sc.decls);
    std::vector<Term> trace = parse_trace(
        "(m [x1.n1 | x2.n2] e p); (m [x1.(n1 e) | x2.(n2 e)] p);"
        "(m [x1.((n1 e) p) | x2.((n2 e) p)])",
        scope);
    Certificate cert = certify_app(sc, trace);
    CHECK(cert.ok());
    REQUIRE(cert.steps.size() == 2);
    CHECK(cert.steps[0].t2_steps == 0);
    CHECK(cert.steps[0].btr);
    CHECK(cert.steps[0].lg_before == 8);
    CHECK(cert.steps[0].lg_after == 6);
    CHECK(cert.steps[1].t2_steps == 1);
    CHECK_FALSE(cert.steps[1].btr);
    std::string text = render_certificate(cert);
    CHECK(text.find("step 1: kind=Perm lift=1 t2_steps=0 lg=8->6 btr") != std::string::npos);
    CHECK(text.find("certificate: steps=2 stalled=1 violations=0 ok") != std::string::npos);
  }

  SUBCASE("term mode, selection then a seam step") {
    AppScenario sc = parse_scenario(
        "ctx w:P, n2:P, e:P; M = in1[P \\/ Q] w, N1 = \\u:P. u, N2 = n2, eps = e, V = []");
    ScopeMap scope = scope_of(sc.decls);
    std::vector<Term> trace =
        parse_trace("(in1[P \\/ Q] w [x1.\\u:P. u | x2.n2] e); ((\\u:P. u) e); e", scope);
    Certificate cert = certify_app(sc, trace);
    CHECK(cert.ok());
    REQUIRE(cert.steps.size() == 2);
    CHECK(cert.steps[0].lift_len == 1);
    CHECK(cert.steps[0].first_kind == RedexKind::CaseInj);
    CHECK(cert.steps[0].t2_steps == 1);
    CHECK(cert.steps[1].lift_len == 2);  // annihilation unlocked the redex
    CHECK(cert.steps[1].first_kind == RedexKind::MarkBox);
    CHECK(cert.steps[1].t2_steps == 1);
  }

  SUBCASE("proj mode") {
    AppScenario sc = parse_scenario(
        "ctx w:P, a1:P, a2:P, b1:P, b2:P;"
        "M = in2[P \\/ P] w, N1 = <a1, a2>, N2 = <b1, b2>, eps = p1, V = []");
    ScopeMap scope = scope_of(sc.decls);
    std::vector<Term> trace = parse_trace(
        "(in2[P \\/ P] w [x1.<a1, a2> | x2.<b1, b2>] p1);"
        "(in2[P \\/ P] w [x1.(<a1, a2> p1) | x2.(<b1, b2> p1)]);"
        "(in2[P \\/ P] w [x1.(<a1, a2> p1) | x2.b1])",
        scope);
    Certificate cert = certify_app(sc, trace);
    CHECK(cert.ok());
    REQUIRE(cert.steps.size() == 2);
    CHECK(cert.steps[0].t2_steps == 0);
    CHECK(cert.steps[0].btr);
    CHECK(cert.steps[1].lift_len == 2);
  }

  SUBCASE("case mode") {
    AppScenario sc = parse_scenario(
        "ctx w:P, n1:P, n2:P, q1:P, q2:P;"
        "M = in1[P \\/ P] w, N1 = n1, N2 = n2, eps = [u1.q1 | u2.q2], V = []");
    ScopeMap scope = scope_of(sc.decls);
    std::vector<Term> trace = parse_trace(
        "(in1[P \\/ P] w [x1.n1 | x2.n2] [u1.q1 | u2.q2]);"
        "(in1[P \\/ P] w [x1.(n1 [u1.q1 | u2.q2]) | x2.(n2 [u1.q1 | u2.q2])]);"
        "(n1 [u1.q1 | u2.q2])",
        scope);
    Certificate cert = certify_app(sc, trace);
    CHECK(cert.ok());
    REQUIRE(cert.steps.size() == 2);
    CHECK(cert.steps[0].btr);
    CHECK(cert.steps[1].first_kind == RedexKind::CaseInj);
  }

  SUBCASE("case mode rejects a nonempty tail") {
    AppScenario sc = parse_scenario(
        "ctx w:P, n1:P, n2:P, q1:P, q2:P;"
        "M = w, N1 = n1, N2 = n2, eps = [u1.q1 | u2.q2], V = [w]");
    CHECK_THROWS_AS(certify_app(sc, {T("x")}), std::invalid_argument);
  }

  SUBCASE("garbage traces are rejected") {
    AppScenario sc = parse_scenario("ctx m:P, n1:P, n2:P, e:P; M = m, N1 = n1, N2 = n2, eps = e");
    ScopeMap scope = scope_of(sc.decls);
    CHECK_THROWS_AS(certify_app(sc, parse_trace("(m n1)", scope)), std::invalid_argument);
    CHECK_THROWS_AS(
        certify_app(sc, parse_trace("(m [x1.n1 | x2.n2] e); (m [x1.n2 | x2.n1] e)", scope)),
        std::invalid_argument);
  }

  SUBCASE("a selection substituting into a payload cannot be lifted") {
    AppScenario sc = parse_scenario(
        "ctx w:P, f:P -> P, n2:P, e:P;"
        "M = in1[P \\/ P] w, N1 = (f x1), N2 = n2, eps = e, V = []");
    ScopeMap scope = scope_of(sc.decls);
    std::vector<Term> trace =
        parse_trace("(in1[P \\/ P] w [x1.(f x1) | x2.n2] e); ((f w) e)", scope);
    Certificate cert = certify_app(sc, trace);
    CHECK_FALSE(cert.ok());
    REQUIRE(!cert.violations.empty());
    CHECK(cert.violations[0].find("lift_step") != std::string::npos);
  }
}
