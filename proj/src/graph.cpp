#include "ndcut/graph.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <set>
#include <unordered_map>

#include "ndcut/head.hpp"

namespace ndcut {

ReductionGraph explore(const Term& m, long node_limit, const TypingContext* ctx) {
  ReductionGraph g;
  std::unordered_multimap<size_t, int> index;
  std::vector<std::optional<Formula>> types;
  std::deque<int> queue;

  // returns the node id, or -1 once the limit blocks a new node
  auto intern = [&](const Term& t) -> int {
    size_t h = alpha_hash(t);
    auto [lo, hi] = index.equal_range(h);
    for (auto it = lo; it != hi; ++it)
      if (alpha_eq(g.nodes[static_cast<size_t>(it->second)], t)) return it->second;
    if (static_cast<long>(g.nodes.size()) >= node_limit) return -1;
    int id = static_cast<int>(g.nodes.size());
    g.nodes.push_back(t);
    g.succ.emplace_back();
    if (ctx) {
      try {
        types.push_back(check(*ctx, t));
      } catch (const type_error&) {
        types.push_back(std::nullopt);
      }
    }
    index.emplace(h, id);
    queue.push_back(id);
    return id;
  };

  intern(m);
  while (!queue.empty() && g.complete) {
    int u = queue.front();
    queue.pop_front();
    const Term src = g.nodes[static_cast<size_t>(u)];
    std::set<int> outs;
    for (const Redex& r : redexes(src)) {
      Term dst = reduce_at(src, r.path, ctx);
      int v = intern(dst);
      if (v < 0) {
        g.complete = false;
        break;
      }
      g.edges.push_back(GraphEdge{u, v, r.path, r.kind});
      outs.insert(v);
      if (ctx) {
        const auto& tu = types[static_cast<size_t>(u)];
        const auto& tv = types[static_cast<size_t>(v)];
        if (tu && (!tv || !(*tu == *tv)))
          g.sr_violations.push_back(SrViolation{
              r.path, dst, tv ? "type changed across a reduction step" : "reduct is ill-typed"});
      }
    }
    g.succ[static_cast<size_t>(u)].assign(outs.begin(), outs.end());
  }
  return g;
}

std::vector<long> eta_all(const ReductionGraph& g) {
  if (!g.complete) throw graph_incomplete();
  const int n = static_cast<int>(g.nodes.size());
  std::vector<long> val(static_cast<size_t>(n), -1);
  std::vector<char> state(static_cast<size_t>(n), 0);  // 0 new, 1 on stack, 2 done
  for (int s = 0; s < n; ++s) {
    if (state[static_cast<size_t>(s)] == 2) continue;
    std::vector<std::pair<int, size_t>> stack{{s, 0}};
    state[static_cast<size_t>(s)] = 1;
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      const auto& out = g.succ[static_cast<size_t>(u)];
      if (i < out.size()) {
        int v = out[i++];
        if (state[static_cast<size_t>(v)] == 1) throw cycle_found();
        if (state[static_cast<size_t>(v)] == 0) {
          state[static_cast<size_t>(v)] = 1;
          stack.emplace_back(v, 0);
        }
      } else {
        long best = -1;
        for (int v : out) best = std::max(best, val[static_cast<size_t>(v)]);
        val[static_cast<size_t>(u)] = best + 1;
        state[static_cast<size_t>(u)] = 2;
        stack.pop_back();
      }
    }
  }
  return val;
}

long eta(const ReductionGraph& g) { return eta_all(g)[0]; }

namespace {

long eta_naive_rec(const ReductionGraph& g, int u, std::vector<char>& onpath) {
  if (onpath[static_cast<size_t>(u)]) throw cycle_found();
  const auto& out = g.succ[static_cast<size_t>(u)];
  if (out.empty()) return 0;
  onpath[static_cast<size_t>(u)] = 1;
  long best = 0;
  for (int v : out) best = std::max(best, eta_naive_rec(g, v, onpath));
  onpath[static_cast<size_t>(u)] = 0;
  return 1 + best;
}

}  // namespace

long eta_naive(const ReductionGraph& g) {
  if (!g.complete) throw graph_incomplete();
  std::vector<char> onpath(g.nodes.size(), 0);
  return eta_naive_rec(g, 0, onpath);
}

bool is_acyclic(const ReductionGraph& g) {
  try {
    eta_all(g);
    return true;
  } catch (const cycle_found&) {
    return false;
  }
}

std::vector<Term> normal_forms(const ReductionGraph& g) {
  if (!g.complete) throw graph_incomplete();
  std::vector<Term> out;
  for (size_t i = 0; i < g.nodes.size(); ++i)
    if (g.succ[i].empty()) out.push_back(g.nodes[i]);
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

void to_dot(const ReductionGraph& g, std::ostream& os) {
  os << "digraph reduction {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    os << "  n" << i << " [label=\"" << dot_escape(print_term(g.nodes[i])) << "\"";
    if (i == 0) os << ", penwidth=2";
    if (g.succ[i].empty()) os << ", peripheries=2";
    os << "];\n";
  }
  for (const GraphEdge& e : g.edges)
    os << "  n" << e.from << " -> n" << e.to << " [label=\"" << kind_name(e.kind) << " @ "
       << dot_escape(path_str(e.path)) << "\"];\n";
  if (!g.complete) os << "  incomplete [shape=plaintext, label=\"(node limit hit)\"];\n";
  os << "}\n";
}

std::optional<bool> decide_sn(const Term& m, long node_limit, const TypingContext* ctx) {
  ReductionGraph g = explore(m, node_limit, ctx);
  if (!g.complete) return std::nullopt;
  return is_acyclic(g);
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// SN of a classification argument: terms by exhaustion; a projection is
// trivially SN; a case eliminator is SN when both branches are.  Arguments
// may have context-bound variables free, so they are explored untyped.
std::optional<bool> sn_arg(const TermOrElim& a, long node_limit) {
  if (const Term* t = std::get_if<Term>(&a)) return decide_sn(*t, node_limit);
  const Elim& e = std::get<Elim>(a);
  if (const CaseE* c = e.get<CaseE>()) {
    auto b1 = decide_sn(c->branch1, node_limit);
    if (!b1) return std::nullopt;
    if (!*b1) return false;
    return decide_sn(c->branch2, node_limit);
  }
  if (const ETermE* t = e.get<ETermE>()) return decide_sn(t->term, node_limit);
  return true;
}

}  // namespace

Verdict verify_carSN(const Term& m, const TypingContext& ctx, long node_limit) {
  check(ctx, m);  // precondition: typed; throws type_error otherwise
  HeadRow r = classify(m, &ctx);

  std::optional<bool> lhs = decide_sn(m, node_limit, &ctx);
  if (!lhs) return Verdict::Inconclusive;

  bool rhs = true;
  for (const TermOrElim& a : r.args) {
    std::optional<bool> s = sn_arg(a, node_limit);
    if (!s) return Verdict::Inconclusive;
    if (!*s) {
      rhs = false;
      break;
    }
  }
  if (rhs && r.hred) {
    std::optional<bool> s = decide_sn(*r.hred, node_limit, &ctx);
    if (!s) return Verdict::Inconclusive;
    rhs = *s;
  }
  return *lhs == rhs ? Verdict::Pass : Verdict::Fail;
}

Verdict verify_subst(const TypingContext& ctx, const Term& m, const SubstIntu& s,
                     long node_limit) {
  check(ctx, m);
  std::optional<Formula> shared;
  for (const auto& [x, image] : s) {
    const Formula* dx = ctx.find_intu(x);
    if (!dx) throw std::invalid_argument("substituted variable is not declared: " + x);
    if (shared && !(*shared == *dx))
      throw std::invalid_argument("substituted variables do not share one type");
    shared = *dx;
    Formula ti = check(ctx, image);
    if (!(ti == *dx))
      throw std::invalid_argument("image for " + x + " is not of the domain type");
    std::optional<bool> sn = decide_sn(image, node_limit, &ctx);
    if (!sn) return Verdict::Inconclusive;
    if (!*sn) throw std::invalid_argument("image for " + x + " is not strongly normalizing");
  }
  std::optional<bool> sn = decide_sn(subst_intu(m, s), node_limit, &ctx);
  if (!sn) return Verdict::Inconclusive;
  return *sn ? Verdict::Pass : Verdict::Fail;
}

Term app_s1(const AppScenario& sc) {
  std::vector<Elim> es;
  es.push_back(case_of("x1", sc.N1, "x2", sc.N2));
  es.push_back(sc.eps);
  for (const Term& v : sc.V) es.push_back(eterm(v));
  return spine(sc.M, es);
}

Term app_s2(const AppScenario& sc) {
  std::vector<Elim> es;
  es.push_back(case_of("x1", app(sc.N1, sc.eps), "x2", app(sc.N2, sc.eps)));
  for (const Term& v : sc.V) es.push_back(eterm(v));
  return spine(sc.N.value_or(sc.M), es);
}

Verdict verify_app(const AppScenario& sc, long node_limit) {
  std::vector<Elim> tail{sc.eps};
  for (const Term& v : sc.V) tail.push_back(eterm(v));
  if (!is_nice(tail)) throw std::invalid_argument("the sequence eps V is not nice");

  TypingContext ctx = TypingContext::from_decls(sc.decls);
  Term s2 = app_s2(sc);
  check(ctx, s2);  // precondition: S2 typed
  std::optional<bool> sn2 = decide_sn(s2, node_limit, &ctx);
  if (!sn2) return Verdict::Inconclusive;
  if (!*sn2) throw std::invalid_argument("S2 is not strongly normalizing");

  std::optional<bool> sn1 = decide_sn(app_s1(sc), node_limit, &ctx);
  if (!sn1) return Verdict::Inconclusive;
  return *sn1 ? Verdict::Pass : Verdict::Fail;
}

}  // namespace ndcut
