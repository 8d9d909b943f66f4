#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndcut/term.hpp"
#include "ndcut/typing.hpp"

namespace ndcut {

// Redex families:
//   Beta     (\x M N)            -> M[x:=N]
//   Proj     (<M1,M2> pi)        -> Mi
//   CaseInj  (ini M [x1.N1|x2.N2]) -> Ni[xi:=M]
//   Perm     (M [x1.N1|x2.N2] e) -> (M [x1.(N1 e)|x2.(N2 e)])
//   Clas     (mu a M e)          -> mu a M[a:=*e]
//   MarkBox  ({N} [[e]])         -> (N e)
// The first five fire with any eliminator shape where e appears, boxes
// included; MarkBox is the mark/box annihilation of the marked calculus.
enum class RedexKind { Beta, Proj, CaseInj, Perm, Clas, MarkBox };

const char* kind_name(RedexKind k);

struct Redex {
  Path path;
  RedexKind kind;
};

struct not_a_redex : std::runtime_error {
  explicit not_a_redex(const std::string& what) : std::runtime_error(what) {}
};

// All redex positions in leftmost-outermost (preorder) path order, including
// positions inside case branches and mark/box payloads.
std::vector<Redex> redexes(const Term& t);

// Contract the redex at p.  The ambient context, when supplied, lets the Clas
// rule retype a Mu annotation through a case eliminator (the branch type is
// recomputed by the checker); without it, or when the branch will not
// typecheck, structural retyping falls back to keeping the old annotation.
Term reduce_at(const Term& t, const Path& p, const TypingContext* ctx = nullptr);

// One-step successors mod alpha.
std::vector<Term> step_all(const Term& t, const TypingContext* ctx = nullptr);

enum class Strategy { Head, Leftmost, Random };

struct StepInfo {
  Path path;
  RedexKind kind;
};

struct NormalizeResult {
  Term result;
  std::vector<StepInfo> trace;
  bool exhausted = false;  // step budget hit before reaching a normal form
};

NormalizeResult normalize(const Term& t, Strategy s, int max_steps, std::uint64_t seed = 0,
                          const TypingContext* ctx = nullptr);

// Path of the distinguished head redex of a simple term, per the six-row
// classification; nullopt when the term (or every simple component) is
// head-normal.  Defined with the head-analysis module.
std::optional<Path> head_redex_path(const Term& t);

}  // namespace ndcut
