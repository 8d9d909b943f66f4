#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ndcut/formula.hpp"

namespace ndcut {

// Proof terms of classical natural deduction, two-sorted: terms and
// eliminators.  Mark/Box extend the grammar for the marked calculus; plain
// terms contain neither.  Nodes are immutable and structurally shared.
//
//   T ::= x | \x:A.T | (T E) | <T,T> | in_i[F] T | mu a:A.T | (a T) | {T}
//   E ::= T | p_i | [x.T | y.T] | [[E]]

class Term {
public:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node& node() const { return *node_; }
  template <class T> const T* get() const;
  template <class T> bool is() const;
  bool same_node(const Term& o) const { return node_ == o.node_; }

private:
  std::shared_ptr<const Node> node_;
};

class Elim {
public:
  struct Node;
  explicit Elim(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node& node() const { return *node_; }
  template <class T> const T* get() const;
  template <class T> bool is() const;
  bool same_node(const Elim& o) const { return node_ == o.node_; }

private:
  std::shared_ptr<const Node> node_;
};

struct IVarT {  // intuitionistic variable occurrence
  std::string name;
};
struct LamT {
  std::string var;
  Formula annot;
  Term body;
};
struct AppT {
  Term fun;
  Elim elim;
};
struct PairT {
  Term first;
  Term second;
};
struct InjT {
  int side;  // 1 or 2
  Formula annot;
  Term body;
};
struct MuT {
  std::string var;
  Formula annot;
  Term body;
};
struct NameT {  // (a T), classical variable applied to a term
  std::string var;
  Term arg;
};
struct MarkT {  // {T}; payload is plain and inert
  Term payload;
};

struct ETermE {
  Term term;
};
struct ProjE {
  int side;  // 1 or 2
};
struct CaseE {
  std::string var1;
  Term branch1;
  std::string var2;
  Term branch2;
};
struct BoxE {  // [[E]]; payload is plain and inert
  Elim payload;
};

struct Term::Node {
  std::variant<IVarT, LamT, AppT, PairT, InjT, MuT, NameT, MarkT> v;
};
struct Elim::Node {
  std::variant<ETermE, ProjE, CaseE, BoxE> v;
};

template <class T> const T* Term::get() const { return std::get_if<T>(&node_->v); }
template <class T> bool Term::is() const { return std::holds_alternative<T>(node_->v); }
template <class T> const T* Elim::get() const { return std::get_if<T>(&node_->v); }
template <class T> bool Elim::is() const { return std::holds_alternative<T>(node_->v); }

// Constructors.  mark/box reject payloads that already contain marks or boxes.
Term ivar(std::string name);
Term lam(std::string var, Formula annot, Term body);
Term app(Term fun, Elim elim);
Term app(Term fun, Term arg);  // shorthand for app(fun, eterm(arg))
Term pair(Term first, Term second);
Term inj(int side, Formula annot, Term body);
Term mu(std::string var, Formula annot, Term body);
Term name(std::string var, Term arg);
Term mark(Term payload);
Elim eterm(Term t);
Elim proj(int side);
Elim case_of(std::string var1, Term branch1, std::string var2, Term branch2);
Elim box(Elim payload);

// Left-nested application spine (head e1 ... en).
Term spine(Term head, const std::vector<Elim>& elims);
// Inverse: peel App nodes; head is the innermost non-App term.
std::pair<Term, std::vector<Elim>> unspine(const Term& t);

// Paths address subterms by child index:
//   Lam/Inj/Mu/Name/Mark: 0 = body/arg/payload
//   App: 0 = fun, 1 = elim; Pair: 0, 1
//   ETerm: 0 = term; Case: 0, 1 = branches; Box: 0 = payload
using Path = std::vector<int>;
using TermOrElim = std::variant<Term, Elim>;

std::string path_str(const Path& p);                 // "." for the root
std::optional<Path> path_parse(const std::string&);  // inverse of path_str

struct bad_path : std::runtime_error {
  explicit bad_path(const std::string& what) : std::runtime_error(what) {}
};

TermOrElim subterm_at(const Term& t, const Path& p);  // throws bad_path
Term replace_at(const Term& t, const Path& p, const TermOrElim& repl);

// True when the term/eliminator contains no Mark/Box node.
bool is_plain(const Term& t);
bool is_plain(const Elim& e);

// Node count; annotations and binder names count zero, the ETerm wrapper is
// transparent, Mark/Box count one plus their payload.
int cxty(const Term& t);
int cxty(const Elim& e);

// Free variables of the two sorts.  Mark/Box payload variables act as
// constants and are not reported as free.
struct VarSet {
  std::set<std::string> intu, cls;
  bool contains_intu(const std::string& n) const { return intu.count(n) != 0; }
  bool contains_cls(const std::string& n) const { return cls.count(n) != 0; }
};
VarSet free_vars(const Term& t);
VarSet free_vars(const Elim& e);

// Every variable name mentioned anywhere (free, bound, or in payloads);
// used to pick fresh names that cannot collide or capture.
void all_names(const Term& t, std::set<std::string>& out);
void all_names(const Elim& e, std::set<std::string>& out);

// Alpha-equivalence and an alpha-invariant hash.  Annotations participate;
// Mark/Box payloads are compared as closed constants.
bool alpha_eq(const Term& a, const Term& b);
bool alpha_eq(const Elim& a, const Elim& b);
std::uint64_t alpha_hash(const Term& t);

bool alpha_eq(const TermOrElim& a, const TermOrElim& b);

// Erase all marks and boxes: {N} becomes N, [[e]] becomes e.
Term erase_marked(const Term& t);
Elim erase_marked(const Elim& e);

}  // namespace ndcut
