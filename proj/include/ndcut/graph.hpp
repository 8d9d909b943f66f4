#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ndcut/reduction.hpp"
#include "ndcut/subst.hpp"
#include "ndcut/syntax.hpp"
#include "ndcut/typing.hpp"

namespace ndcut {

// One-step reduction graph over alpha-classes.  nodes[0] is the root; edges
// carry the redex that produced them.  Parallel edges with distinct labels
// are kept; succ is deduplicated per node.
struct GraphEdge {
  int from, to;
  Path path;
  RedexKind kind;
};

struct ReductionGraph {
  std::vector<Term> nodes;
  std::vector<GraphEdge> edges;
  std::vector<std::vector<int>> succ;
  bool complete = true;  // false when node_limit stopped the closure
  // populated when explored under a typing context; expected empty
  std::vector<SrViolation> sr_violations;
};

inline constexpr long kDefaultNodeLimit = 1000000;

ReductionGraph explore(const Term& m, long node_limit = kDefaultNodeLimit,
                       const TypingContext* ctx = nullptr);

struct graph_incomplete : std::logic_error {
  graph_incomplete() : std::logic_error("graph incomplete: node limit was reached") {}
};
// A cycle would exhibit an infinite reduction; it must never appear under a
// typing context.
struct cycle_found : std::runtime_error {
  cycle_found() : std::runtime_error("reduction graph has a cycle") {}
};

// Longest ->-path lengths per node (memoized); eta(g) is the root's value.
// Both throw graph_incomplete on a limit-flagged graph and cycle_found on a
// cyclic one.  eta_naive recomputes the root value without memoization.
std::vector<long> eta_all(const ReductionGraph& g);
long eta(const ReductionGraph& g);
long eta_naive(const ReductionGraph& g);

bool is_acyclic(const ReductionGraph& g);
std::vector<Term> normal_forms(const ReductionGraph& g);  // sink nodes
void to_dot(const ReductionGraph& g, std::ostream& os);

// Strong normalization decided by exhaustion: explore completes within the
// limit and the graph is acyclic.  nullopt when the limit was reached.
std::optional<bool> decide_sn(const Term& m, long node_limit = kDefaultNodeLimit,
                              const TypingContext* ctx = nullptr);

enum class Verdict { Pass, Fail, Inconclusive };
const char* verdict_name(Verdict v);

// Checks the head-characterization biconditional on a simple typed term:
// with a head redex, M in SN iff arg(M) in SN and hred(M) in SN; without
// one, M in SN iff arg(M) in SN.
Verdict verify_carSN(const Term& m, const TypingContext& ctx,
                     long node_limit = kDefaultNodeLimit);

// Checks that substituting typed SN terms of the shared domain type into a
// typed term yields an SN term.  Precondition violations throw
// std::invalid_argument.
Verdict verify_subst(const TypingContext& ctx, const Term& m, const SubstIntu& s,
                     long node_limit = kDefaultNodeLimit);

// S1 = (M [x1.N1 | x2.N2] eps V...), S2 = (N [x1.(N1 eps) | x2.(N2 eps)] V...)
// with N defaulting to M.  verify_app checks: S2 typed and SN implies S1 SN.
// Non-nice eps,V sequences and failed preconditions throw.
Term app_s1(const AppScenario& sc);
Term app_s2(const AppScenario& sc);
Verdict verify_app(const AppScenario& sc, long node_limit = kDefaultNodeLimit);

}  // namespace ndcut
