#include "ndcut/term.hpp"

#include <algorithm>
#include <functional>

#include "ndcut/visit.hpp"

namespace ndcut {

namespace {
template <class V>
Term make_term(V&& v) {
  return Term(std::make_shared<const Term::Node>(Term::Node{std::forward<V>(v)}));
}
template <class V>
Elim make_elim(V&& v) {
  return Elim(std::make_shared<const Elim::Node>(Elim::Node{std::forward<V>(v)}));
}
void check_side(int side) {
  if (side != 1 && side != 2) throw std::invalid_argument("side must be 1 or 2");
}
}  // namespace

Term ivar(std::string name) { return make_term(IVarT{std::move(name)}); }

Term lam(std::string var, Formula annot, Term body) {
  return make_term(LamT{std::move(var), std::move(annot), std::move(body)});
}

Term app(Term fun, Elim elim) { return make_term(AppT{std::move(fun), std::move(elim)}); }

Term app(Term fun, Term arg) { return app(std::move(fun), eterm(std::move(arg))); }

Term pair(Term first, Term second) { return make_term(PairT{std::move(first), std::move(second)}); }

Term inj(int side, Formula annot, Term body) {
  check_side(side);
  return make_term(InjT{side, std::move(annot), std::move(body)});
}

Term mu(std::string var, Formula annot, Term body) {
  return make_term(MuT{std::move(var), std::move(annot), std::move(body)});
}

Term name(std::string var, Term arg) { return make_term(NameT{std::move(var), std::move(arg)}); }

Term mark(Term payload) {
  if (!is_plain(payload)) throw std::invalid_argument("mark payload must be plain");
  return make_term(MarkT{std::move(payload)});
}

Elim eterm(Term t) { return make_elim(ETermE{std::move(t)}); }

Elim proj(int side) {
  check_side(side);
  return make_elim(ProjE{side});
}

Elim case_of(std::string var1, Term branch1, std::string var2, Term branch2) {
  return make_elim(CaseE{std::move(var1), std::move(branch1), std::move(var2), std::move(branch2)});
}

Elim box(Elim payload) {
  if (!is_plain(payload)) throw std::invalid_argument("box payload must be plain");
  return make_elim(BoxE{std::move(payload)});
}

Term spine(Term head, const std::vector<Elim>& elims) {
  Term t = std::move(head);
  for (const auto& e : elims) t = app(t, e);
  return t;
}

std::pair<Term, std::vector<Elim>> unspine(const Term& t) {
  std::vector<Elim> elims;
  Term cur = t;
  while (const auto* a = cur.get<AppT>()) {
    elims.push_back(a->elim);
    cur = a->fun;
  }
  std::reverse(elims.begin(), elims.end());
  return {cur, elims};
}

std::string path_str(const Path& p) {
  if (p.empty()) return ".";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

std::optional<Path> path_parse(const std::string& s) {
  if (s == ".") return Path{};
  Path p;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    int v = 0;
    while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i] - '0');
      ++i;
    }
    p.push_back(v);
    if (i < s.size()) {
      if (s[i] != '.') return std::nullopt;
      ++i;
      if (i == s.size()) return std::nullopt;
    }
  }
  if (p.empty()) return std::nullopt;
  return p;
}

namespace {

[[noreturn]] void path_fail(const Path& p, std::size_t at) {
  throw bad_path("no child " + std::to_string(p[at]) + " at " +
                 path_str(Path(p.begin(), p.begin() + at)));
}

TermOrElim child_of(const Term& t, int i) {
  return std::visit(
      overloaded{
          [&](const LamT& n) -> TermOrElim {
            if (i != 0) throw 0;
            return n.body;
          },
          [&](const AppT& n) -> TermOrElim {
            if (i == 0) return n.fun;
            if (i == 1) return n.elim;
            throw 0;
          },
          [&](const PairT& n) -> TermOrElim {
            if (i == 0) return n.first;
            if (i == 1) return n.second;
            throw 0;
          },
          [&](const InjT& n) -> TermOrElim {
            if (i != 0) throw 0;
            return n.body;
          },
          [&](const MuT& n) -> TermOrElim {
            if (i != 0) throw 0;
            return n.body;
          },
          [&](const NameT& n) -> TermOrElim {
            if (i != 0) throw 0;
            return n.arg;
          },
          [&](const MarkT& n) -> TermOrElim {
            if (i != 0) throw 0;
            return n.payload;
          },
          [&](const IVarT&) -> TermOrElim { throw 0; },
      },
      t.node().v);
}

TermOrElim child_of(const Elim& e, int i) {
  return std::visit(
      overloaded{
          [&](const ETermE& n) -> TermOrElim {
            if (i != 0) throw 0;
            return n.term;
          },
          [&](const CaseE& n) -> TermOrElim {
            if (i == 0) return n.branch1;
            if (i == 1) return n.branch2;
            throw 0;
          },
          [&](const BoxE& n) -> TermOrElim {
            if (i != 0) throw 0;
            return n.payload;
          },
          [&](const ProjE&) -> TermOrElim { throw 0; },
      },
      e.node().v);
}

}  // namespace

TermOrElim subterm_at(const Term& t, const Path& p) {
  TermOrElim cur = t;
  for (std::size_t k = 0; k < p.size(); ++k) {
    try {
      if (auto* tm = std::get_if<Term>(&cur))
        cur = child_of(*tm, p[k]);
      else
        cur = child_of(std::get<Elim>(cur), p[k]);
    } catch (int) {
      path_fail(p, k);
    }
  }
  return cur;
}

namespace {

Term replace_term(const Term& t, const Path& p, std::size_t k, const TermOrElim& repl);
Elim replace_elim(const Elim& e, const Path& p, std::size_t k, const TermOrElim& repl);

Term as_term(const TermOrElim& x, const Path& p, std::size_t k) {
  if (auto* tm = std::get_if<Term>(&x)) return *tm;
  throw bad_path("eliminator cannot replace term at " + path_str(Path(p.begin(), p.begin() + k)));
}
Elim as_elim(const TermOrElim& x, const Path& p, std::size_t k) {
  if (auto* e = std::get_if<Elim>(&x)) return *e;
  throw bad_path("term cannot replace eliminator at " + path_str(Path(p.begin(), p.begin() + k)));
}

Term replace_term(const Term& t, const Path& p, std::size_t k, const TermOrElim& repl) {
  if (k == p.size()) return as_term(repl, p, k);
  int i = p[k];
  try {
    return std::visit(
        overloaded{
            [&](const LamT& n) -> Term {
              if (i != 0) throw 0;
              return lam(n.var, n.annot, replace_term(n.body, p, k + 1, repl));
            },
            [&](const AppT& n) -> Term {
              if (i == 0) return app(replace_term(n.fun, p, k + 1, repl), n.elim);
              if (i == 1) return app(n.fun, replace_elim(n.elim, p, k + 1, repl));
              throw 0;
            },
            [&](const PairT& n) -> Term {
              if (i == 0) return pair(replace_term(n.first, p, k + 1, repl), n.second);
              if (i == 1) return pair(n.first, replace_term(n.second, p, k + 1, repl));
              throw 0;
            },
            [&](const InjT& n) -> Term {
              if (i != 0) throw 0;
              return inj(n.side, n.annot, replace_term(n.body, p, k + 1, repl));
            },
            [&](const MuT& n) -> Term {
              if (i != 0) throw 0;
              return mu(n.var, n.annot, replace_term(n.body, p, k + 1, repl));
            },
            [&](const NameT& n) -> Term {
              if (i != 0) throw 0;
              return name(n.var, replace_term(n.arg, p, k + 1, repl));
            },
            [&](const MarkT& n) -> Term {
              if (i != 0) throw 0;
              return mark(replace_term(n.payload, p, k + 1, repl));
            },
            [&](const IVarT&) -> Term { throw 0; },
        },
        t.node().v);
  } catch (int) {
    path_fail(p, k);
  }
}

Elim replace_elim(const Elim& e, const Path& p, std::size_t k, const TermOrElim& repl) {
  if (k == p.size()) return as_elim(repl, p, k);
  int i = p[k];
  try {
    return std::visit(
        overloaded{
            [&](const ETermE& n) -> Elim {
              if (i != 0) throw 0;
              return eterm(replace_term(n.term, p, k + 1, repl));
            },
            [&](const CaseE& n) -> Elim {
              if (i == 0)
                return case_of(n.var1, replace_term(n.branch1, p, k + 1, repl), n.var2, n.branch2);
              if (i == 1)
                return case_of(n.var1, n.branch1, n.var2, replace_term(n.branch2, p, k + 1, repl));
              throw 0;
            },
            [&](const BoxE& n) -> Elim {
              if (i != 0) throw 0;
              return box(replace_elim(n.payload, p, k + 1, repl));
            },
            [&](const ProjE&) -> Elim { throw 0; },
        },
        e.node().v);
  } catch (int) {
    path_fail(p, k);
  }
}

}  // namespace

Term replace_at(const Term& t, const Path& p, const TermOrElim& repl) {
  return replace_term(t, p, 0, repl);
}

bool is_plain(const Term& t) {
  return std::visit(overloaded{
                        [](const IVarT&) { return true; },
                        [](const LamT& n) { return is_plain(n.body); },
                        [](const AppT& n) { return is_plain(n.fun) && is_plain(n.elim); },
                        [](const PairT& n) { return is_plain(n.first) && is_plain(n.second); },
                        [](const InjT& n) { return is_plain(n.body); },
                        [](const MuT& n) { return is_plain(n.body); },
                        [](const NameT& n) { return is_plain(n.arg); },
                        [](const MarkT&) { return false; },
                    },
                    t.node().v);
}

bool is_plain(const Elim& e) {
  return std::visit(
      overloaded{
          [](const ETermE& n) { return is_plain(n.term); },
          [](const ProjE&) { return true; },
          [](const CaseE& n) { return is_plain(n.branch1) && is_plain(n.branch2); },
          [](const BoxE&) { return false; },
      },
      e.node().v);
}

int cxty(const Term& t) {
  return std::visit(overloaded{
                        [](const IVarT&) { return 1; },
                        [](const LamT& n) { return 1 + cxty(n.body); },
                        [](const AppT& n) { return 1 + cxty(n.fun) + cxty(n.elim); },
                        [](const PairT& n) { return 1 + cxty(n.first) + cxty(n.second); },
                        [](const InjT& n) { return 1 + cxty(n.body); },
                        [](const MuT& n) { return 1 + cxty(n.body); },
                        [](const NameT& n) { return 1 + cxty(n.arg); },
                        [](const MarkT& n) { return 1 + cxty(n.payload); },
                    },
                    t.node().v);
}

int cxty(const Elim& e) {
  return std::visit(overloaded{
                        [](const ETermE& n) { return cxty(n.term); },
                        [](const ProjE&) { return 1; },
                        [](const CaseE& n) { return 1 + cxty(n.branch1) + cxty(n.branch2); },
                        [](const BoxE& n) { return 1 + cxty(n.payload); },
                    },
                    e.node().v);
}

namespace {

struct FvEnv {
  std::vector<std::string> intu, cls;
  bool bound_intu(const std::string& n) const {
    return std::find(intu.begin(), intu.end(), n) != intu.end();
  }
  bool bound_cls(const std::string& n) const {
    return std::find(cls.begin(), cls.end(), n) != cls.end();
  }
};

void fv_term(const Term& t, FvEnv& env, VarSet& out);
void fv_elim(const Elim& e, FvEnv& env, VarSet& out);

void fv_term(const Term& t, FvEnv& env, VarSet& out) {
  std::visit(overloaded{
                 [&](const IVarT& n) {
                   if (!env.bound_intu(n.name)) out.intu.insert(n.name);
                 },
                 [&](const LamT& n) {
                   env.intu.push_back(n.var);
                   fv_term(n.body, env, out);
                   env.intu.pop_back();
                 },
                 [&](const AppT& n) {
                   fv_term(n.fun, env, out);
                   fv_elim(n.elim, env, out);
                 },
                 [&](const PairT& n) {
                   fv_term(n.first, env, out);
                   fv_term(n.second, env, out);
                 },
                 [&](const InjT& n) { fv_term(n.body, env, out); },
                 [&](const MuT& n) {
                   env.cls.push_back(n.var);
                   fv_term(n.body, env, out);
                   env.cls.pop_back();
                 },
                 [&](const NameT& n) {
                   if (!env.bound_cls(n.var)) out.cls.insert(n.var);
                   fv_term(n.arg, env, out);
                 },
                 [&](const MarkT&) { /* payload variables are constants */ },
             },
             t.node().v);
}

void fv_elim(const Elim& e, FvEnv& env, VarSet& out) {
  std::visit(overloaded{
                 [&](const ETermE& n) { fv_term(n.term, env, out); },
                 [&](const ProjE&) {},
                 [&](const CaseE& n) {
                   env.intu.push_back(n.var1);
                   fv_term(n.branch1, env, out);
                   env.intu.pop_back();
                   env.intu.push_back(n.var2);
                   fv_term(n.branch2, env, out);
                   env.intu.pop_back();
                 },
                 [&](const BoxE&) { /* payload variables are constants */ },
             },
             e.node().v);
}

}  // namespace

VarSet free_vars(const Term& t) {
  VarSet out;
  FvEnv env;
  fv_term(t, env, out);
  return out;
}

VarSet free_vars(const Elim& e) {
  VarSet out;
  FvEnv env;
  fv_elim(e, env, out);
  return out;
}

void all_names(const Term& t, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const IVarT& n) { out.insert(n.name); },
                 [&](const LamT& n) {
                   out.insert(n.var);
                   all_names(n.body, out);
                 },
                 [&](const AppT& n) {
                   all_names(n.fun, out);
                   all_names(n.elim, out);
                 },
                 [&](const PairT& n) {
                   all_names(n.first, out);
                   all_names(n.second, out);
                 },
                 [&](const InjT& n) { all_names(n.body, out); },
                 [&](const MuT& n) {
                   out.insert(n.var);
                   all_names(n.body, out);
                 },
                 [&](const NameT& n) {
                   out.insert(n.var);
                   all_names(n.arg, out);
                 },
                 [&](const MarkT& n) { all_names(n.payload, out); },
             },
             t.node().v);
}

void all_names(const Elim& e, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const ETermE& n) { all_names(n.term, out); },
                 [&](const ProjE&) {},
                 [&](const CaseE& n) {
                   out.insert(n.var1);
                   all_names(n.branch1, out);
                   out.insert(n.var2);
                   all_names(n.branch2, out);
                 },
                 [&](const BoxE& n) { all_names(n.payload, out); },
             },
             e.node().v);
}

namespace {

// Binder pairing for alpha comparison: parallel stacks per sort.
struct AEnv {
  std::vector<std::pair<std::string, std::string>> intu, cls;

  static int find_l(const std::vector<std::pair<std::string, std::string>>& v,
                    const std::string& n) {
    for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
      if (v[static_cast<std::size_t>(i)].first == n) return i;
    return -1;
  }
  static int find_r(const std::vector<std::pair<std::string, std::string>>& v,
                    const std::string& n) {
    for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
      if (v[static_cast<std::size_t>(i)].second == n) return i;
    return -1;
  }
};

bool var_match(const std::vector<std::pair<std::string, std::string>>& stack,
               const std::string& a, const std::string& b) {
  int ia = AEnv::find_l(stack, a);
  int ib = AEnv::find_r(stack, b);
  if (ia != ib) return false;
  return ia >= 0 || a == b;
}

bool aeq_term(const Term& a, const Term& b, AEnv& env);
bool aeq_elim(const Elim& a, const Elim& b, AEnv& env);

bool aeq_term(const Term& a, const Term& b, AEnv& env) {
  if (a.same_node(b) && env.intu.empty() && env.cls.empty()) return true;
  if (a.node().v.index() != b.node().v.index()) return false;
  if (const auto* x = a.get<IVarT>()) {
    return var_match(env.intu, x->name, b.get<IVarT>()->name);
  }
  if (const auto* x = a.get<LamT>()) {
    const auto* y = b.get<LamT>();
    if (x->annot != y->annot) return false;
    env.intu.emplace_back(x->var, y->var);
    bool ok = aeq_term(x->body, y->body, env);
    env.intu.pop_back();
    return ok;
  }
  if (const auto* x = a.get<AppT>()) {
    const auto* y = b.get<AppT>();
    return aeq_term(x->fun, y->fun, env) && aeq_elim(x->elim, y->elim, env);
  }
  if (const auto* x = a.get<PairT>()) {
    const auto* y = b.get<PairT>();
    return aeq_term(x->first, y->first, env) && aeq_term(x->second, y->second, env);
  }
  if (const auto* x = a.get<InjT>()) {
    const auto* y = b.get<InjT>();
    return x->side == y->side && x->annot == y->annot && aeq_term(x->body, y->body, env);
  }
  if (const auto* x = a.get<MuT>()) {
    const auto* y = b.get<MuT>();
    if (x->annot != y->annot) return false;
    env.cls.emplace_back(x->var, y->var);
    bool ok = aeq_term(x->body, y->body, env);
    env.cls.pop_back();
    return ok;
  }
  if (const auto* x = a.get<NameT>()) {
    const auto* y = b.get<NameT>();
    return var_match(env.cls, x->var, y->var) && aeq_term(x->arg, y->arg, env);
  }
  const auto* x = a.get<MarkT>();
  const auto* y = b.get<MarkT>();
  // Payloads never interact with outer binders.
  return alpha_eq(x->payload, y->payload);
}

bool aeq_elim(const Elim& a, const Elim& b, AEnv& env) {
  if (a.node().v.index() != b.node().v.index()) return false;
  if (const auto* x = a.get<ETermE>()) {
    return aeq_term(x->term, b.get<ETermE>()->term, env);
  }
  if (const auto* x = a.get<ProjE>()) {
    return x->side == b.get<ProjE>()->side;
  }
  if (const auto* x = a.get<CaseE>()) {
    const auto* y = b.get<CaseE>();
    env.intu.emplace_back(x->var1, y->var1);
    bool ok1 = aeq_term(x->branch1, y->branch1, env);
    env.intu.pop_back();
    if (!ok1) return false;
    env.intu.emplace_back(x->var2, y->var2);
    bool ok2 = aeq_term(x->branch2, y->branch2, env);
    env.intu.pop_back();
    return ok2;
  }
  const auto* x = a.get<BoxE>();
  return alpha_eq(x->payload, b.get<BoxE>()->payload);
}

struct HEnv {
  std::vector<std::string> intu, cls;
  static std::uint64_t lookup(const std::vector<std::string>& v, const std::string& n) {
    for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
      if (v[static_cast<std::size_t>(i)] == n)
        return 0x8000000000000000ull | static_cast<std::uint64_t>(v.size() - 1 - i);
    return std::hash<std::string>{}(n) & 0x7fffffffffffffffull;
  }
};

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h * 1099511628211ull;
}

std::uint64_t ahash_term(const Term& t, HEnv& env);
std::uint64_t ahash_elim(const Elim& e, HEnv& env);

std::uint64_t ahash_term(const Term& t, HEnv& env) {
  std::uint64_t h = mix(0xcbf29ce484222325ull, t.node().v.index() + 1);
  std::visit(overloaded{
                 [&](const IVarT& n) { h = mix(h, HEnv::lookup(env.intu, n.name)); },
                 [&](const LamT& n) {
                   h = mix(h, n.annot.hash());
                   env.intu.push_back(n.var);
                   h = mix(h, ahash_term(n.body, env));
                   env.intu.pop_back();
                 },
                 [&](const AppT& n) {
                   h = mix(h, ahash_term(n.fun, env));
                   h = mix(h, ahash_elim(n.elim, env));
                 },
                 [&](const PairT& n) {
                   h = mix(h, ahash_term(n.first, env));
                   h = mix(h, ahash_term(n.second, env));
                 },
                 [&](const InjT& n) {
                   h = mix(h, static_cast<std::uint64_t>(n.side));
                   h = mix(h, n.annot.hash());
                   h = mix(h, ahash_term(n.body, env));
                 },
                 [&](const MuT& n) {
                   h = mix(h, n.annot.hash());
                   env.cls.push_back(n.var);
                   h = mix(h, ahash_term(n.body, env));
                   env.cls.pop_back();
                 },
                 [&](const NameT& n) {
                   h = mix(h, HEnv::lookup(env.cls, n.var));
                   h = mix(h, ahash_term(n.arg, env));
                 },
                 [&](const MarkT& n) { h = mix(h, alpha_hash(n.payload)); },
             },
             t.node().v);
  return h;
}

std::uint64_t ahash_elim(const Elim& e, HEnv& env) {
  std::uint64_t h = mix(0x100000001b3ull, e.node().v.index() + 101);
  std::visit(overloaded{
                 [&](const ETermE& n) { h = mix(h, ahash_term(n.term, env)); },
                 [&](const ProjE& n) { h = mix(h, static_cast<std::uint64_t>(n.side)); },
                 [&](const CaseE& n) {
                   env.intu.push_back(n.var1);
                   h = mix(h, ahash_term(n.branch1, env));
                   env.intu.pop_back();
                   env.intu.push_back(n.var2);
                   h = mix(h, ahash_term(n.branch2, env));
                   env.intu.pop_back();
                 },
                 [&](const BoxE& n) {
                   HEnv fresh;
                   h = mix(h, ahash_elim(n.payload, fresh));
                 },
             },
             e.node().v);
  return h;
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  AEnv env;
  return aeq_term(a, b, env);
}

bool alpha_eq(const Elim& a, const Elim& b) {
  AEnv env;
  return aeq_elim(a, b, env);
}

bool alpha_eq(const TermOrElim& a, const TermOrElim& b) {
  if (a.index() != b.index()) return false;
  if (auto* tm = std::get_if<Term>(&a)) return alpha_eq(*tm, std::get<Term>(b));
  return alpha_eq(std::get<Elim>(a), std::get<Elim>(b));
}

std::uint64_t alpha_hash(const Term& t) {
  HEnv env;
  return ahash_term(t, env);
}

Term erase_marked(const Term& t) {
  return std::visit(
      overloaded{
          [&](const IVarT&) { return t; },
          [&](const LamT& n) { return lam(n.var, n.annot, erase_marked(n.body)); },
          [&](const AppT& n) { return app(erase_marked(n.fun), erase_marked(n.elim)); },
          [&](const PairT& n) { return pair(erase_marked(n.first), erase_marked(n.second)); },
          [&](const InjT& n) { return inj(n.side, n.annot, erase_marked(n.body)); },
          [&](const MuT& n) { return mu(n.var, n.annot, erase_marked(n.body)); },
          [&](const NameT& n) { return name(n.var, erase_marked(n.arg)); },
          [&](const MarkT& n) { return n.payload; },
      },
      t.node().v);
}

Elim erase_marked(const Elim& e) {
  return std::visit(
      overloaded{
          [&](const ETermE& n) { return eterm(erase_marked(n.term)); },
          [&](const ProjE&) { return e; },
          [&](const CaseE& n) {
            return case_of(n.var1, erase_marked(n.branch1), n.var2, erase_marked(n.branch2));
          },
          [&](const BoxE& n) { return n.payload; },
      },
      e.node().v);
}

}  // namespace ndcut
