#pragma once

#include <memory>
#include <string>

namespace ndcut {

// Propositional formulas over named atoms: atoms, Bot, ->, /\, \/.
// Negation is not a constructor; ~A abbreviates A -> Bot.
// Immutable, structurally shared; equality and hashing are structural.
class Formula {
public:
  enum class Kind { Atom, Bottom, Imp, And, Or };

  static Formula atom(std::string name);
  static Formula bottom();
  static Formula imp(Formula lhs, Formula rhs);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula neg(Formula a) { return imp(std::move(a), bottom()); }

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  const std::string& atom_name() const;  // pre: Atom
  const Formula& left() const;           // pre: binary connective
  const Formula& right() const;

  // True when the formula is X -> Bot for some X (the ~X sugar form).
  bool is_neg() const;

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }
  std::size_t hash() const;

  // Number of connective nodes (Imp/And/Or); atoms and Bot count zero.
  int connectives() const;

  // Concrete syntax. Precedence ~ > /\ > \/ > ->; -> right-assoc,
  // /\ and \/ left-assoc. With sugar_neg, X -> Bot renders as ~X.
  std::string show(bool sugar_neg = true) const;

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace ndcut
