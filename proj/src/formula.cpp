#include "ndcut/formula.hpp"

#include <stdexcept>
#include <vector>

namespace ndcut {

struct Formula::Node {
  Kind kind;
  std::string name;           // Atom only
  std::vector<Formula> kids;  // empty for Atom/Bottom, {lhs, rhs} otherwise
};

Formula Formula::atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula Formula::bottom() {
  static const Formula bot = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Bottom;
    return Formula(std::move(n));
  }();
  return bot;
}

Formula Formula::imp(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Imp;
  n->kids = {std::move(l), std::move(r)};
  return Formula(std::move(n));
}

Formula Formula::conj(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->kids = {std::move(l), std::move(r)};
  return Formula(std::move(n));
}

Formula Formula::disj(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->kids = {std::move(l), std::move(r)};
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const std::string& Formula::atom_name() const {
  if (node_->kind != Kind::Atom) throw std::logic_error("atom_name on non-atom");
  return node_->name;
}

const Formula& Formula::left() const {
  if (node_->kids.empty()) throw std::logic_error("left on leaf formula");
  return node_->kids[0];
}

const Formula& Formula::right() const {
  if (node_->kids.empty()) throw std::logic_error("right on leaf formula");
  return node_->kids[1];
}

bool Formula::is_neg() const {
  return kind() == Kind::Imp && right().kind() == Kind::Bottom;
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Atom: return node_->name == o.node_->name;
    case Kind::Bottom: return true;
    default: return left() == o.left() && right() == o.right();
  }
}

std::size_t Formula::hash() const {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::size_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::size_t>(node_->kind) + 17);
  switch (node_->kind) {
    case Kind::Atom: mix(std::hash<std::string>{}(node_->name)); break;
    case Kind::Bottom: break;
    default:
      mix(left().hash());
      mix(right().hash());
      break;
  }
  return h;
}

int Formula::connectives() const {
  switch (node_->kind) {
    case Kind::Atom:
    case Kind::Bottom: return 0;
    default: return 1 + left().connectives() + right().connectives();
  }
}

namespace {

// Precedence levels: -> 1, \/ 2, /\ 3, ~ 4, atoms 5.
void show_rec(const Formula& f, int min_prec, bool sugar_neg, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom: out += f.atom_name(); return;
    case Formula::Kind::Bottom: out += "Bot"; return;
    case Formula::Kind::Imp: {
      if (sugar_neg && f.is_neg()) {
        out += '~';
        show_rec(f.left(), 4, sugar_neg, out);
        return;
      }
      bool paren = min_prec > 1;
      if (paren) out += '(';
      show_rec(f.left(), 2, sugar_neg, out);
      out += " -> ";
      show_rec(f.right(), 1, sugar_neg, out);
      if (paren) out += ')';
      return;
    }
    case Formula::Kind::Or: {
      bool paren = min_prec > 2;
      if (paren) out += '(';
      show_rec(f.left(), 2, sugar_neg, out);
      out += " \\/ ";
      show_rec(f.right(), 3, sugar_neg, out);
      if (paren) out += ')';
      return;
    }
    case Formula::Kind::And: {
      bool paren = min_prec > 3;
      if (paren) out += '(';
      show_rec(f.left(), 3, sugar_neg, out);
      out += " /\\ ";
      show_rec(f.right(), 4, sugar_neg, out);
      if (paren) out += ')';
      return;
    }
  }
}

}  // namespace

std::string Formula::show(bool sugar_neg) const {
  std::string out;
  show_rec(*this, 0, sugar_neg, out);
  return out;
}

}  // namespace ndcut
