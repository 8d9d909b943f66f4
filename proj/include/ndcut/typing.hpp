#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndcut/formula.hpp"
#include "ndcut/syntax.hpp"
#include "ndcut/term.hpp"

namespace ndcut {

struct type_error : std::runtime_error {
  Path path;  // offending node
  type_error(Path p, const std::string& msg);
};

// Declarations x:A (intuitionistic) and a:~A (classical, storing A).  The two
// name spaces are disjoint; binders shadow across sorts.
class TypingContext {
 public:
  TypingContext() = default;
  static TypingContext from_decls(const std::vector<CtxDecl>& decls);

  const Formula* find_intu(const std::string& x) const;
  const Formula* find_cls(const std::string& a) const;

  TypingContext with_intu(const std::string& x, const Formula& a) const;
  TypingContext with_cls(const std::string& a, const Formula& f) const;

  std::vector<CtxDecl> to_decls() const;
  ScopeMap scope() const;
  bool empty() const { return intu_.empty() && cls_.empty(); }

 private:
  std::map<std::string, Formula> intu_, cls_;
};

// Syntax-directed typechecker.  Church annotations make the result unique.
// Terms containing marks or boxes are rejected; erase first.
Formula check(const TypingContext& ctx, const Term& t);

// Number of connectives in a formula.
int lgt(const Formula& f);

struct SrViolation {
  Path path;        // redex fired
  Term reduct;
  std::string message;
};

// Typechecks every one-step reduct of t against check(ctx, t).
// (Defined alongside the reduction engine.)
std::vector<SrViolation> subject_reduction_probe(const TypingContext& ctx, const Term& t);

}  // namespace ndcut
