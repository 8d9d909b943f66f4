#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ndcut/formula.hpp"
#include "ndcut/term.hpp"
#include "ndcut/typing.hpp"

namespace ndcut {

// Contexts C := *i | \x C | ini C | <C1,C2> | mu a C, with holes numbered
// 1..n left to right.  Binder and injection annotations are retained so that
// fill(decompose(M)) rebuilds M exactly.  Holes may capture: fill performs
// plain structural replacement under the context's binders.
class ContextC {
 public:
  struct Node;
  explicit ContextC(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node& node() const { return *node_; }
  template <class T> const T* get() const;
  template <class T> bool is() const;

  static ContextC hole(int index);
  static ContextC lam(std::string var, Formula annot, ContextC body);
  static ContextC inj(int side, Formula annot, ContextC body);
  static ContextC pair(ContextC first, ContextC second);
  static ContextC mu(std::string var, Formula annot, ContextC body);

  int holes() const;  // number of hole nodes

 private:
  std::shared_ptr<const Node> node_;
};

struct HoleC { int index; };
struct LamC { std::string var; Formula annot; ContextC body; };
struct InjC { int side; Formula annot; ContextC body; };
struct PairC { ContextC first, second; };
struct MuC { std::string var; Formula annot; ContextC body; };

struct ContextC::Node {
  std::variant<HoleC, LamC, InjC, PairC, MuC> v;
};

template <class T> const T* ContextC::get() const { return std::get_if<T>(&node_->v); }
template <class T> bool ContextC::is() const { return std::holds_alternative<T>(node_->v); }

// Structural equality, binder names and annotations included.
bool ctx_eq(const ContextC& a, const ContextC& b);

// A simple term is a variable, an application, or a naming (a T).
bool is_simple(const Term& m);

// Unique maximal splitting M = C[M1,...,Mn] with every Mi simple.
std::pair<ContextC, std::vector<Term>> decompose(const Term& m);
Term fill(const ContextC& c, const std::vector<Term>& ms);

// A sequence of eliminators is nice when a case appears only in last
// position; the empty sequence is nice.
bool is_nice(const std::vector<Elim>& es);

struct not_simple : std::runtime_error {
  explicit not_simple(const std::string& what) : std::runtime_error(what) {}
};

// The six-row head classification of a simple term:
//   0  (x T...) or (a T)      head = the variable, args = the T's
//   1  (\x N O T...)          head = (\x N O), args = {O}
//   2  (<N1,N2> pi T...)      head = (<N1,N2> pi), args = {N1, N2}
//   3  (ini N [x1.O1|x2.O2])  head = M itself, args = {N, O1, O2}
//   4  (mu a N e T...)        head = (mu a N e), args = {e}
//   5  (N [x1.O1|x2.O2] e T...) head = the permutative redex, args = {}
// Rows 4 and 5 require the trailing sequence to be nice; a spine with a case
// in non-final position is reassigned to row 5, pivoting on the last such
// case.  ETerm arguments are reported as bare terms.
struct HeadRow {
  int row;
  std::variant<std::string, Term> head;
  std::vector<TermOrElim> args;
  std::optional<Term> hred;  // the whole term with its head redex contracted
  Path head_path;            // where the head redex sits (rows 1-5)
};

HeadRow classify(const Term& m, const TypingContext* ctx = nullptr);

}  // namespace ndcut
