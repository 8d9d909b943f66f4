#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ndcut/reduction.hpp"
#include "ndcut/syntax.hpp"
#include "ndcut/term.hpp"

namespace ndcut {

// The shape of the box payloads in play: a term eliminator, a projection, or
// a case.  Within one certification run every box payload has the single
// shape fixed by the scenario's eps.
enum class EpsMode { Term, Proj, Case };
const char* mode_name(EpsMode m);
EpsMode mode_of(const Elim& e);

// The single payload shape of all boxes in m; nullopt when m has no boxes.
// *mixed is set when two boxes disagree.
std::optional<EpsMode> box_mode(const Term& m, bool* mixed = nullptr);

// Marked one-step reduction is the plain engine: lifted rules, payload
// congruence and annihilation all fall out of step_all.
inline std::vector<Term> marked_step_all(const Term& m) { return step_all(m); }

// The two box-commuting rules, closed under congruence: a case past a box,
// and a mu absorbing a box into its namings.  Annihilation is not among
// them.
std::vector<Redex> btr_redexes(const Term& m);
std::vector<Term> btr_step(const Term& m);
bool is_btr_redex(const Term& m, const Redex& r);

// Acceptable terms: a mark; a mu whose named subterms are all acceptable; a
// case application with acceptable branches.  Payloads act as constants and
// are never traversed.
bool acceptable(const Term& m);

struct not_acceptable : std::runtime_error {
  explicit not_acceptable(const std::string& what) : std::runtime_error(what) {}
};

// Mark occurrences of an acceptable term, as paths: {mark} itself; the union
// over namings (a S) for a mu; the union over the two branches for a case
// application.
std::vector<Path> st_set(const Term& m);

// Literal goodness: the occurrence is in E, or a mu whose named subterms are
// good, or a case application with good branches.
bool good_wrt(const Term& m, const std::vector<Path>& e);

// Correctness: (1) every box hangs off an acceptable function; (2) every
// mark belongs to the st set of exactly one box application; (3) in case
// mode, the box applications cover the term's naming/branch skeleton.  The
// skeleton check treats box-free subterms as trivially covered; without that
// escape, annihilation would not preserve correctness.  Box payloads must
// all match the mode.
bool correct(const Term& m, EpsMode mode);
bool correct(const Term& m);  // infers the mode; false when shapes are mixed

// The eliminator of the unique box application owning the mark at occ.
// Throws std::invalid_argument when no box or more than one owns it.
Elim eps_of(const Term& m, const Path& occ);

// T1 erases marks and boxes; T2 routes every mark to its box's eliminator
// and drops the box.  Marks owned by a box outside m are left in place, so
// T2 is usable on subterms of a correct term.
Term t1(const Term& m);
Term t2(const Term& m);

// Sum over marks of the number of flattened-tree nodes between the mark and
// its box, endpoints included.  Strictly decreases along the box-commuting
// rules; requires correctness.
long lg(const Term& m);
long nb(const Term& m);  // number of boxes

struct lift_error : std::runtime_error {
  explicit lift_error(const std::string& what) : std::runtime_error(what) {}
};

// One marked step and the redex that produced it.
struct LiftStep {
  Term term;
  Redex fired;
};

// Lifts one plain step T1(M) > target back to the marked world: a single
// marked step when the redex exists in M, otherwise annihilation followed by
// the unlocked step.  The chain end erases to target.
std::vector<LiftStep> lift_step(const Term& m, const Term& target);

// Experimental: the conjectured identity T2(M) = T1(btr-normal-form(M)).
Term t2_via_btr(const Term& m, int fuel = 100000);

// Length of a shortest reduction from `from` to `to`, searched breadth-first
// up to the given bounds; nullopt when none is found within them.
std::optional<long> t2_distance(const Term& from, const Term& to, int max_depth = 24,
                                int max_nodes = 50000);

// Certification of one lifted reduction sequence.
struct CertStep {
  Term m_next;              // the lifted term after this trace step
  int lift_len = 0;         // marked steps used by the lift (1 or 2)
  RedexKind first_kind;     // kind of the first lifted step
  long t2_steps = -1;       // distance T2(M_i) >* T2(M_{i+1}); 0 = stalled
  bool btr = false;         // stalled step certified as a box-commuting step
  long lg_before = -1, lg_after = -1;
};

struct Certificate {
  Term m0;
  Term s2;  // T2(M0)
  std::vector<CertStep> steps;
  std::vector<std::string> violations;  // expected empty
  bool ok() const { return violations.empty(); }
};

// M0 = (M [x1.{N1} | x2.{N2}] [[eps]] V...).
Term app_m0(const AppScenario& sc);

// Lifts the trace step by step, projects through T2, and checks the
// certificate conditions: every lifted term is correct, T2 images are
// related by >*, and every stalled T2 step is a box-commuting step with
// strictly smaller lg.
Certificate certify_app(const AppScenario& sc, const std::vector<Term>& s1_trace);

std::string render_certificate(const Certificate& c);

// Correctness side conditions observable on any correct term: no mark in
// argument position, and a mark's eliminator is always a box.
std::vector<Path> car_star_violations(const Term& m);

}  // namespace ndcut
