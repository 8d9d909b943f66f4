#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndcut/formula.hpp"
#include "ndcut/marked.hpp"
#include "ndcut/syntax.hpp"
#include "ndcut/term.hpp"
#include "ndcut/typing.hpp"

namespace ndcut {

// Weighted backward proof search over the typing rules.  Everything random is
// drawn from one mt19937_64 seeded from `seed`, so equal configurations give
// byte-identical output.
struct GenConfig {
  std::uint64_t seed = 1;
  int size_budget = 30;                   // max cxty of the produced term
  std::optional<Formula> goal;            // drawn at random when absent
  std::vector<std::string> atom_pool = {"A", "B", "C"};
  std::map<std::string, double> weights;  // per-rule overrides, see default_weights
};

// Rule names accepted in GenConfig::weights with their default values.  The
// classical rules (mu, name) default to nonzero weight.
const std::map<std::string, double>& default_weights();

struct gen_error : std::runtime_error {
  explicit gen_error(const std::string& what) : std::runtime_error(what) {}
};

struct GenResult {
  std::vector<CtxDecl> decls;
  TypingContext ctx;
  Term term;
  Formula type;
};

// Generates a context together with a term it types.  Throws
// std::invalid_argument on a bad configuration and gen_error when the goal is
// budget-infeasible after bounded attempts.
GenResult gen_typed(const GenConfig& cfg);

// Generates a typed application scenario whose eliminator matches `mode`.
// The trailing sequence is nice, and empty in case mode; S1 and S2 both
// typecheck under the scenario context; the conventional case binders x1, x2
// never occur free in the generated branches.
AppScenario gen_app_scenario(const GenConfig& cfg, EpsMode mode);

}  // namespace ndcut
