#pragma once

// Concrete syntax.
//
// Formulas:  atoms are uppercase identifiers; `Bot`; `~A` sugar for `A -> Bot`;
//            precedence ~ > /\ > \/ > ->, with -> right-associative.
// Terms:     `\x:A. M`, `mu a:A. M`, `in1[F] M`, `<M, N>`, `{M}` (mark),
//            `x`, and application spines `(M e1 ... en)`.
// Elims:     a term, `p1`, `p2`, `[x.M | y.N]`, `[[e]]` (box).
// Contexts:  `ctx x:A, a:~B;` — a declaration whose whole type is written
//            with a leading `~` is classical; anything else (including an
//            explicit `A -> Bot`) is intuitionistic.
//
// Variables start lowercase; a `(a M)` spine whose head is a classical
// variable is reshaped into a naming node and must carry exactly one term.
// `#` starts a line comment.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndcut/formula.hpp"
#include "ndcut/term.hpp"

namespace ndcut {

struct syntax_error : std::runtime_error {
  int line, col;
  syntax_error(int line_, int col_, const std::string& msg);
};

enum class VarSort { Intu, Cls };
using ScopeMap = std::map<std::string, VarSort>;

// One context declaration.  For classical declarations `a:~A`, type holds A
// (the formula under the negation).
struct CtxDecl {
  std::string name;
  Formula type;
  bool classical = false;
};

struct SourceUnit {
  std::vector<CtxDecl> decls;
  Term term;
  std::optional<Formula> expected;  // trailing `: F` ascription
};

// Scenario file: context block plus bindings M=, N1=, N2=, eps=, V=[...]
// (optional N= defaults to M at the point of use).
struct AppScenario {
  std::vector<CtxDecl> decls;
  Term M, N1, N2;
  Elim eps;
  std::vector<Term> V;
  std::optional<Term> N;
};

Formula parse_formula(const std::string& text);
Term parse_term(const std::string& text, const ScopeMap& scope = {});
Elim parse_elim(const std::string& text, const ScopeMap& scope = {});
SourceUnit parse_unit(const std::string& text);
AppScenario parse_scenario(const std::string& text);
// Reduction trace: terms separated by `;`.
std::vector<Term> parse_trace(const std::string& text, const ScopeMap& scope = {});

ScopeMap scope_of(const std::vector<CtxDecl>& decls);

std::string print_term(const Term& t);
std::string print_elim(const Elim& e);
std::string print_decls(const std::vector<CtxDecl>& decls);
std::string print_unit(const SourceUnit& u);
std::string print_scenario(const AppScenario& s);
std::string print_trace(const std::vector<Term>& ts);

}  // namespace ndcut
