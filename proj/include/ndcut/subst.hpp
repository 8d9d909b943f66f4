#pragma once

#include <map>
#include <set>
#include <string>

#include "ndcut/term.hpp"

namespace ndcut {

// Simultaneous capture-avoiding substitution of terms for intuitionistic
// variables.  Binders are freshened (primes appended) when they would capture
// a free variable of an image.  Mark/Box payloads are never entered.
using SubstIntu = std::map<std::string, Term>;

Term subst_intu(const Term& t, const SubstIntu& s);
Elim subst_intu(const Elim& e, const SubstIntu& s);

// Structural classical substitution t[a :=* eps]: every named subterm (a N)
// becomes (a (N' eps)) where N' is the recursive image.  Binders of t that
// would capture a free variable of eps are freshened first; an inner binder
// mu a shadows the substitution.  Mark/Box payloads are never entered.
Term subst_class(const Term& t, const std::string& a, const Elim& eps);
Elim subst_class(const Elim& e, const std::string& a, const Elim& eps);

// Rename free occurrences of a variable of the given sort.
Term rename_intu(const Term& t, const std::string& from, const std::string& to);
Term rename_cls(const Term& t, const std::string& from, const std::string& to);

// First of base, base', base'', ... not in avoid.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace ndcut
