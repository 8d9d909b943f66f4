#include "ndcut/marked.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ndcut/graph.hpp"
#include "ndcut/visit.hpp"

namespace ndcut {

namespace {

Path extend(Path p, const Path& q) {
  p.insert(p.end(), q.begin(), q.end());
  return p;
}

// Free namings (a S) of the classical name `a`, payloads skipped, any binder
// of the same name shadows.  Paths are relative to t.
void namings(const Term& t, const std::string& a, Path at,
             std::vector<std::pair<Path, Term>>& out) {
  std::visit(
      overloaded{
          [&](const IVarT&) {},
          [&](const LamT& l) {
            if (l.var == a) return;
            namings(l.body, a, extend(at, {0}), out);
          },
          [&](const AppT& ap) {
            namings(ap.fun, a, extend(at, {0}), out);
            std::visit(overloaded{
                           [&](const ETermE& e) { namings(e.term, a, extend(at, {1, 0}), out); },
                           [&](const ProjE&) {},
                           [&](const CaseE& c) {
                             if (c.var1 != a) namings(c.branch1, a, extend(at, {1, 0}), out);
                             if (c.var2 != a) namings(c.branch2, a, extend(at, {1, 1}), out);
                           },
                           [&](const BoxE&) {},
                       },
                       ap.elim.node().v);
          },
          [&](const PairT& p) {
            namings(p.first, a, extend(at, {0}), out);
            namings(p.second, a, extend(at, {1}), out);
          },
          [&](const InjT& i) { namings(i.body, a, extend(at, {0}), out); },
          [&](const MuT& m) {
            if (m.var == a) return;
            namings(m.body, a, extend(at, {0}), out);
          },
          [&](const NameT& n) {
            if (n.var == a) out.emplace_back(at, n.arg);
            namings(n.arg, a, extend(at, {0}), out);
          },
          [&](const MarkT&) {},
      },
      t.node().v);
}

// App nodes whose eliminator is a box, as paths.
void box_apps(const Term& t, Path at, std::vector<Path>& out) {
  std::visit(
      overloaded{
          [&](const IVarT&) {},
          [&](const LamT& l) { box_apps(l.body, extend(at, {0}), out); },
          [&](const AppT& ap) {
            if (ap.elim.is<BoxE>()) out.push_back(at);
            box_apps(ap.fun, extend(at, {0}), out);
            std::visit(overloaded{
                           [&](const ETermE& e) { box_apps(e.term, extend(at, {1, 0}), out); },
                           [&](const ProjE&) {},
                           [&](const CaseE& c) {
                             box_apps(c.branch1, extend(at, {1, 0}), out);
                             box_apps(c.branch2, extend(at, {1, 1}), out);
                           },
                           [&](const BoxE&) {},
                       },
                       ap.elim.node().v);
          },
          [&](const PairT& p) {
            box_apps(p.first, extend(at, {0}), out);
            box_apps(p.second, extend(at, {1}), out);
          },
          [&](const InjT& i) { box_apps(i.body, extend(at, {0}), out); },
          [&](const MuT& m) { box_apps(m.body, extend(at, {0}), out); },
          [&](const NameT& n) { box_apps(n.arg, extend(at, {0}), out); },
          [&](const MarkT&) {},
      },
      t.node().v);
}

void mark_occs(const Term& t, Path at, std::vector<Path>& out) {
  std::visit(
      overloaded{
          [&](const IVarT&) {},
          [&](const LamT& l) { mark_occs(l.body, extend(at, {0}), out); },
          [&](const AppT& ap) {
            mark_occs(ap.fun, extend(at, {0}), out);
            std::visit(overloaded{
                           [&](const ETermE& e) { mark_occs(e.term, extend(at, {1, 0}), out); },
                           [&](const ProjE&) {},
                           [&](const CaseE& c) {
                             mark_occs(c.branch1, extend(at, {1, 0}), out);
                             mark_occs(c.branch2, extend(at, {1, 1}), out);
                           },
                           [&](const BoxE&) {},
                       },
                       ap.elim.node().v);
          },
          [&](const PairT& p) {
            mark_occs(p.first, extend(at, {0}), out);
            mark_occs(p.second, extend(at, {1}), out);
          },
          [&](const InjT& i) { mark_occs(i.body, extend(at, {0}), out); },
          [&](const MuT& m) { mark_occs(m.body, extend(at, {0}), out); },
          [&](const NameT& n) { mark_occs(n.arg, extend(at, {0}), out); },
          [&](const MarkT&) { out.push_back(at); },
      },
      t.node().v);
}

bool has_box(const Term& t) {
  std::vector<Path> out;
  box_apps(t, {}, out);
  return !out.empty();
}

void st_rec(const Term& m, Path at, std::vector<Path>& out) {
  if (m.is<MarkT>()) {
    out.push_back(at);
    return;
  }
  if (const MuT* mu_ = m.get<MuT>()) {
    std::vector<std::pair<Path, Term>> ns;
    namings(mu_->body, mu_->var, {}, ns);
    for (const auto& [p, s] : ns) st_rec(s, extend(extend(extend(at, {0}), p), {0}), out);
    return;
  }
  if (const AppT* a = m.get<AppT>())
    if (const CaseE* c = a->elim.get<CaseE>()) {
      st_rec(c->branch1, extend(at, {1, 0}), out);
      st_rec(c->branch2, extend(at, {1, 1}), out);
      return;
    }
  throw not_acceptable("st: term is not acceptable at " + path_str(at));
}

// Goodness with an optional escape for box-free subterms.  The literal
// clauses alone are not preserved by annihilation: a branch whose box has
// annihilated is plain and cannot reach E any more, yet nothing is left in
// it to protect.
bool good_rec(const Term& m, const Path& at, const std::set<Path>& e, bool lenient) {
  if (lenient && !has_box(m)) return true;
  if (e.count(at) != 0) return true;
  if (const MuT* mu_ = m.get<MuT>()) {
    std::vector<std::pair<Path, Term>> ns;
    namings(mu_->body, mu_->var, {}, ns);
    for (const auto& [p, s] : ns)
      if (!good_rec(s, extend(extend(extend(at, {0}), p), {0}), e, lenient)) return false;
    return true;
  }
  if (const AppT* a = m.get<AppT>())
    if (const CaseE* c = a->elim.get<CaseE>())
      return good_rec(c->branch1, extend(at, {1, 0}), e, lenient) &&
             good_rec(c->branch2, extend(at, {1, 1}), e, lenient);
  return false;
}

const AppT* box_app_at(const Term& m, const Path& p) {
  TermOrElim te = subterm_at(m, p);
  const Term* t = std::get_if<Term>(&te);
  if (!t) return nullptr;
  const AppT* a = t->get<AppT>();
  if (!a || !a->elim.is<BoxE>()) return nullptr;
  return a;
}

// Absolute mark paths owned by the box application at p; empty when the
// function part is not acceptable.
std::vector<Path> owned_marks(const Term& m, const Path& p) {
  const AppT* a = box_app_at(m, p);
  if (!a || !acceptable(a->fun)) return {};
  std::vector<Path> rel = st_set(a->fun);
  std::vector<Path> abs;
  abs.reserve(rel.size());
  for (const Path& q : rel) abs.push_back(extend(extend(p, {0}), q));
  return abs;
}

bool correct_impl(const Term& m, EpsMode mode) {
  bool mixed = false;
  std::optional<EpsMode> bm = box_mode(m, &mixed);
  if (mixed) return false;
  if (bm && *bm != mode) return false;
  std::vector<Path> bapps;
  box_apps(m, {}, bapps);
  std::vector<std::vector<Path>> owned;
  owned.reserve(bapps.size());
  for (const Path& p : bapps) {
    const AppT* a = box_app_at(m, p);
    if (!acceptable(a->fun)) return false;
    owned.push_back(owned_marks(m, p));
  }
  std::vector<Path> marks;
  mark_occs(m, {}, marks);
  for (const Path& mp : marks) {
    int owners = 0;
    for (const auto& set : owned)
      owners += static_cast<int>(std::count(set.begin(), set.end(), mp));
    if (owners != 1) return false;
  }
  if (mode == EpsMode::Case) {
    std::set<Path> e(bapps.begin(), bapps.end());
    if (!good_rec(m, {}, e, /*lenient=*/true)) return false;
  }
  return true;
}

TermOrElim child_at(const TermOrElim& cur, int s) {
  if (const Term* t = std::get_if<Term>(&cur)) {
    return std::visit(
        overloaded{
            [&](const IVarT&) -> TermOrElim { throw bad_path("flat_nodes: leaf"); },
            [&](const LamT& l) -> TermOrElim { return l.body; },
            [&](const AppT& a) -> TermOrElim {
              if (s == 0) return a.fun;
              return a.elim;
            },
            [&](const PairT& p) -> TermOrElim { return s == 0 ? p.first : p.second; },
            [&](const InjT& i) -> TermOrElim { return i.body; },
            [&](const MuT& m) -> TermOrElim { return m.body; },
            [&](const NameT& n) -> TermOrElim { return n.arg; },
            [&](const MarkT& mk) -> TermOrElim { return mk.payload; },
        },
        t->node().v);
  }
  const Elim& e = std::get<Elim>(cur);
  return std::visit(overloaded{
                        [&](const ETermE& et) -> TermOrElim { return et.term; },
                        [&](const ProjE&) -> TermOrElim { throw bad_path("flat_nodes: leaf"); },
                        [&](const CaseE& c) -> TermOrElim { return s == 0 ? c.branch1 : c.branch2; },
                        [&](const BoxE& b) -> TermOrElim { return b.payload; },
                    },
                    e.node().v);
}

// Nodes on the path from root to the target, endpoints included, counted on
// the flattened-spine tree: nested application nodes collapse into one spine
// node and the term-eliminator wrapper is transparent.
long flat_nodes(const Term& root, const Path& q) {
  long n = 1;
  TermOrElim cur{root};
  for (int s : q) {
    bool from_app_fun = false;
    if (const Term* t = std::get_if<Term>(&cur)) from_app_fun = t->is<AppT>() && s == 0;
    TermOrElim child = child_at(cur, s);
    bool transparent = false;
    if (const Term* ct = std::get_if<Term>(&child))
      transparent = from_app_fun && ct->is<AppT>();
    else
      transparent = std::get<Elim>(child).is<ETermE>();
    if (!transparent) ++n;
    cur = child;
  }
  return n;
}

Elim t2_elim(const Elim& e);

Term t2_term(const Term& m) {
  return std::visit(
      overloaded{
          [&](const IVarT&) { return m; },
          [&](const LamT& l) { return lam(l.var, l.annot, t2_term(l.body)); },
          [&](const AppT& a) {
            if (const BoxE* b = a.elim.get<BoxE>()) {
              Term u = t2_term(a.fun);
              if (!acceptable(u)) return app(u, a.elim);
              Term r = u;
              for (const Path& q : st_set(u)) {
                TermOrElim te = subterm_at(r, q);
                const Term* mt = std::get_if<Term>(&te);
                const MarkT* mk = mt ? mt->get<MarkT>() : nullptr;
                if (!mk) continue;
                r = replace_at(r, q, TermOrElim{app(mk->payload, b->payload)});
              }
              return r;
            }
            return app(t2_term(a.fun), t2_elim(a.elim));
          },
          [&](const PairT& p) { return pair(t2_term(p.first), t2_term(p.second)); },
          [&](const InjT& i) { return inj(i.side, i.annot, t2_term(i.body)); },
          [&](const MuT& mu_) { return mu(mu_.var, mu_.annot, t2_term(mu_.body)); },
          [&](const NameT& n) { return name(n.var, t2_term(n.arg)); },
          [&](const MarkT&) { return m; },
      },
      m.node().v);
}

Elim t2_elim(const Elim& e) {
  return std::visit(overloaded{
                        [&](const ETermE& et) { return eterm(t2_term(et.term)); },
                        [&](const ProjE&) { return e; },
                        [&](const CaseE& c) {
                          return case_of(c.var1, t2_term(c.branch1), c.var2, t2_term(c.branch2));
                        },
                        [&](const BoxE&) { return e; },
                    },
                    e.node().v);
}

}  // namespace

std::optional<long> t2_distance(const Term& from, const Term& to, int max_depth,
                                int max_nodes) {
  if (alpha_eq(from, to)) return 0;
  std::deque<std::pair<Term, long>> queue;
  std::unordered_multimap<std::uint64_t, Term> seen;
  queue.emplace_back(from, 0);
  seen.emplace(alpha_hash(from), from);
  int visited = 0;
  while (!queue.empty()) {
    auto [t, d] = queue.front();
    queue.pop_front();
    if (d >= max_depth) continue;
    if (++visited > max_nodes) return std::nullopt;
    for (const Term& s : step_all(t)) {
      if (alpha_eq(s, to)) return d + 1;
      std::uint64_t h = alpha_hash(s);
      auto range = seen.equal_range(h);
      bool dup = false;
      for (auto it = range.first; it != range.second; ++it)
        if (alpha_eq(it->second, s)) {
          dup = true;
          break;
        }
      if (!dup) {
        seen.emplace(h, s);
        queue.emplace_back(s, d + 1);
      }
    }
  }
  return std::nullopt;
}

const char* mode_name(EpsMode m) {
  switch (m) {
    case EpsMode::Term: return "term";
    case EpsMode::Proj: return "proj";
    case EpsMode::Case: return "case";
  }
  return "?";
}

EpsMode mode_of(const Elim& e) {
  return std::visit(overloaded{
                        [](const ETermE&) { return EpsMode::Term; },
                        [](const ProjE&) { return EpsMode::Proj; },
                        [](const CaseE&) { return EpsMode::Case; },
                        [](const BoxE&) -> EpsMode {
                          throw std::invalid_argument("mode_of: a box has no mode");
                        },
                    },
                    e.node().v);
}

std::optional<EpsMode> box_mode(const Term& m, bool* mixed) {
  if (mixed) *mixed = false;
  std::vector<Path> bapps;
  box_apps(m, {}, bapps);
  std::optional<EpsMode> md;
  for (const Path& p : bapps) {
    const AppT* a = box_app_at(m, p);
    EpsMode k = mode_of(a->elim.get<BoxE>()->payload);
    if (!md)
      md = k;
    else if (*md != k && mixed)
      *mixed = true;
  }
  return md;
}

bool is_btr_redex(const Term& m, const Redex& r) {
  if (r.kind != RedexKind::Perm && r.kind != RedexKind::Clas) return false;
  TermOrElim te = subterm_at(m, r.path);
  const Term* t = std::get_if<Term>(&te);
  if (!t) return false;
  const AppT* a = t->get<AppT>();
  return a != nullptr && a->elim.is<BoxE>();
}

std::vector<Redex> btr_redexes(const Term& m) {
  std::vector<Redex> out;
  for (const Redex& r : redexes(m))
    if (is_btr_redex(m, r)) out.push_back(r);
  return out;
}

std::vector<Term> btr_step(const Term& m) {
  std::vector<Term> out;
  for (const Redex& r : btr_redexes(m)) {
    Term t = reduce_at(m, r.path);
    bool dup = false;
    for (const Term& o : out)
      if (alpha_eq(o, t)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(t);
  }
  return out;
}

bool acceptable(const Term& m) {
  if (m.is<MarkT>()) return true;
  if (const MuT* mu_ = m.get<MuT>()) {
    std::vector<std::pair<Path, Term>> ns;
    namings(mu_->body, mu_->var, {}, ns);
    for (const auto& [p, s] : ns)
      if (!acceptable(s)) return false;
    return true;
  }
  if (const AppT* a = m.get<AppT>())
    if (const CaseE* c = a->elim.get<CaseE>())
      return acceptable(c->branch1) && acceptable(c->branch2);
  return false;
}

std::vector<Path> st_set(const Term& m) {
  std::vector<Path> out;
  st_rec(m, {}, out);
  return out;
}

bool good_wrt(const Term& m, const std::vector<Path>& e) {
  return good_rec(m, {}, std::set<Path>(e.begin(), e.end()), /*lenient=*/false);
}

bool correct(const Term& m, EpsMode mode) { return correct_impl(m, mode); }

bool correct(const Term& m) {
  bool mixed = false;
  std::optional<EpsMode> bm = box_mode(m, &mixed);
  if (mixed) return false;
  return correct_impl(m, bm.value_or(EpsMode::Term));
}

Elim eps_of(const Term& m, const Path& occ) {
  {
    TermOrElim te = subterm_at(m, occ);
    const Term* t = std::get_if<Term>(&te);
    if (!t || !t->is<MarkT>())
      throw std::invalid_argument("eps_of: occurrence is not a mark");
  }
  std::vector<Path> bapps;
  box_apps(m, {}, bapps);
  std::vector<Path> owners;
  for (const Path& p : bapps) {
    std::vector<Path> set = owned_marks(m, p);
    if (std::find(set.begin(), set.end(), occ) != set.end()) owners.push_back(p);
  }
  if (owners.size() != 1)
    throw std::invalid_argument("eps_of: mark owned by " + std::to_string(owners.size()) +
                                " boxes");
  return box_app_at(m, owners.front())->elim.get<BoxE>()->payload;
}

Term t1(const Term& m) { return erase_marked(m); }

Term t2(const Term& m) { return t2_term(m); }

long lg(const Term& m) {
  if (!correct(m)) throw std::invalid_argument("lg: term is not correct");
  std::vector<Path> bapps;
  box_apps(m, {}, bapps);
  long total = 0;
  for (const Path& p : bapps) {
    TermOrElim te = subterm_at(m, p);
    const Term& bt = std::get<Term>(te);
    for (const Path& q : st_set(bt.get<AppT>()->fun)) total += flat_nodes(bt, extend({0}, q)) + 1;
  }
  return total;
}

long nb(const Term& m) {
  std::vector<Path> bapps;
  box_apps(m, {}, bapps);
  return static_cast<long>(bapps.size());
}

std::vector<LiftStep> lift_step(const Term& m, const Term& target) {
  for (const Redex& r : redexes(m)) {
    Term m1 = reduce_at(m, r.path);
    if (alpha_eq(erase_marked(m1), target)) return {LiftStep{m1, r}};
  }
  // The plain redex sits where a mark meets its box: annihilate, then fire.
  for (const Redex& r : redexes(m)) {
    if (r.kind != RedexKind::MarkBox) continue;
    Term m1 = reduce_at(m, r.path);
    for (const Redex& r2 : redexes(m1)) {
      Term m2 = reduce_at(m1, r2.path);
      if (alpha_eq(erase_marked(m2), target)) return {LiftStep{m1, r}, LiftStep{m2, r2}};
    }
  }
  throw lift_error("lift_step: no marked reduction erases to the target");
}

Term t2_via_btr(const Term& m, int fuel) {
  Term cur = m;
  while (fuel-- > 0) {
    std::vector<Redex> rs = btr_redexes(cur);
    if (rs.empty()) return erase_marked(cur);
    cur = reduce_at(cur, rs.front().path);
  }
  throw std::runtime_error("t2_via_btr: fuel exhausted");
}

Term app_m0(const AppScenario& sc) {
  std::vector<Elim> es;
  es.push_back(case_of("x1", mark(sc.N1), "x2", mark(sc.N2)));
  es.push_back(box(sc.eps));
  for (const Term& v : sc.V) es.push_back(eterm(v));
  return spine(sc.M, es);
}

Certificate certify_app(const AppScenario& sc, const std::vector<Term>& s1_trace) {
  EpsMode mode = mode_of(sc.eps);
  if (mode == EpsMode::Case && !sc.V.empty())
    throw std::invalid_argument("certify_app: case mode requires an empty tail");
  if (s1_trace.empty()) throw std::invalid_argument("certify_app: empty trace");
  Term m0 = app_m0(sc);
  Certificate cert{m0, t2(m0), {}, {}};
  if (!alpha_eq(t1(cert.m0), s1_trace.front()))
    throw std::invalid_argument("certify_app: trace does not start at S1");
  bool cur_ok = correct(cert.m0, mode);
  if (!cur_ok) cert.violations.push_back("M0 is not correct");
  if (!alpha_eq(cert.s2, app_s2(sc))) cert.violations.push_back("T2(M0) differs from S2");
  Term mi = cert.m0;
  for (std::size_t i = 0; i + 1 < s1_trace.size(); ++i) {
    const Term& target = s1_trace[i + 1];
    bool legal = false;
    for (const Term& s : step_all(s1_trace[i]))
      if (alpha_eq(s, target)) {
        legal = true;
        break;
      }
    if (!legal)
      throw std::invalid_argument("certify_app: trace entry " + std::to_string(i + 1) +
                                  " is not a one-step reduct");
    std::vector<LiftStep> chain;
    try {
      chain = lift_step(mi, target);
    } catch (const lift_error& e) {
      cert.violations.push_back("step " + std::to_string(i + 1) + ": " + e.what());
      break;
    }
    Term mnext = chain.back().term;
    bool next_ok = correct(mnext, mode);
    if (!next_ok)
      cert.violations.push_back("step " + std::to_string(i + 1) + ": lifted term is not correct");
    std::optional<long> k = t2_distance(t2(mi), t2(mnext));
    if (!k)
      cert.violations.push_back("step " + std::to_string(i + 1) +
                                ": T2 images are not related by reduction");
    long lgb = cur_ok ? lg(mi) : -1;
    long lga = next_ok ? lg(mnext) : -1;
    bool btr_ok = false;
    if (k && *k == 0) {
      btr_ok = chain.size() == 1 && is_btr_redex(mi, chain.front().fired);
      if (!btr_ok)
        cert.violations.push_back("step " + std::to_string(i + 1) +
                                  ": stalled step is not box-commuting");
      else if (lgb < 0 || lga < 0 || lga >= lgb)
        cert.violations.push_back("step " + std::to_string(i + 1) +
                                  ": lg did not decrease on a stalled step");
    }
    cert.steps.push_back(CertStep{mnext, static_cast<int>(chain.size()),
                                  chain.front().fired.kind, k ? *k : -1, btr_ok, lgb, lga});
    mi = mnext;
    cur_ok = next_ok;
  }
  return cert;
}

std::string render_certificate(const Certificate& c) {
  std::ostringstream os;
  os << "M0: " << print_term(c.m0) << "\n";
  os << "S2: " << print_term(c.s2) << "\n";
  int stalled = 0;
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const CertStep& s = c.steps[i];
    os << "step " << (i + 1) << ": kind=" << kind_name(s.first_kind) << " lift=" << s.lift_len
       << " t2_steps=" << s.t2_steps << " lg=" << s.lg_before << "->" << s.lg_after;
    if (s.t2_steps == 0) {
      os << (s.btr ? " btr" : " STALL-UNJUSTIFIED");
      ++stalled;
    }
    os << "\n";
  }
  for (const std::string& v : c.violations) os << "violation: " << v << "\n";
  os << "certificate: steps=" << c.steps.size() << " stalled=" << stalled
     << " violations=" << c.violations.size() << " " << (c.ok() ? "ok" : "FAILED") << "\n";
  return os.str();
}

std::vector<Path> car_star_violations(const Term& m) {
  std::vector<Path> bad;
  std::vector<Path> apps;
  // reuse the generic walk: collect every App node
  struct Walk {
    std::vector<Path>& out;
    void term(const Term& t, Path at) {
      std::visit(overloaded{
                     [&](const IVarT&) {},
                     [&](const LamT& l) { term(l.body, extend_(at, 0)); },
                     [&](const AppT& a) {
                       out.push_back(at);
                       term(a.fun, extend_(at, 0));
                       std::visit(overloaded{
                                      [&](const ETermE& e) { term(e.term, extend2_(at, 1, 0)); },
                                      [&](const ProjE&) {},
                                      [&](const CaseE& c) {
                                        term(c.branch1, extend2_(at, 1, 0));
                                        term(c.branch2, extend2_(at, 1, 1));
                                      },
                                      [&](const BoxE&) {},
                                  },
                                  a.elim.node().v);
                     },
                     [&](const PairT& p) {
                       term(p.first, extend_(at, 0));
                       term(p.second, extend_(at, 1));
                     },
                     [&](const InjT& i) { term(i.body, extend_(at, 0)); },
                     [&](const MuT& mu_) { term(mu_.body, extend_(at, 0)); },
                     [&](const NameT& n) { term(n.arg, extend_(at, 0)); },
                     [&](const MarkT&) {},
                 },
                 t.node().v);
    }
    static Path extend_(Path p, int s) {
      p.push_back(s);
      return p;
    }
    static Path extend2_(Path p, int s, int u) {
      p.push_back(s);
      p.push_back(u);
      return p;
    }
  } walk{apps};
  walk.term(m, {});
  for (const Path& p : apps) {
    TermOrElim te = subterm_at(m, p);
    const AppT& a = *std::get<Term>(te).get<AppT>();
    if (const ETermE* et = a.elim.get<ETermE>())
      if (et->term.is<MarkT>()) bad.push_back(p);  // a mark in argument position
    if (a.fun.is<MarkT>() && !a.elim.is<BoxE>()) bad.push_back(p);  // a mark met by a non-box
  }
  return bad;
}

}  // namespace ndcut
