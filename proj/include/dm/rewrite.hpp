#pragma once

// Rewrite systems over terms and atomic propositions, equational axioms, and
// the machinery deciding the congruence they generate: normalization, head
// exposure, the localized one-step relation, critical pairs, the 0/S guard
// and the non-confusion check.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dm/syntax.hpp"

namespace dm {

struct TermRule {
  std::string name;
  Term lhs, rhs;  // lhs not a variable, fv(rhs) <= fv(lhs), same sort
};

struct PropRule {
  std::string name;
  Prop lhs;  // an atom
  Prop rhs;  // fv(rhs) <= fv(lhs)
};

enum class Orientation { LeftToRight, RightToLeft, Unoriented };

// A universally closed equation; the quantifier prefix is implicit and covers
// every free variable of both sides.
struct Equation {
  std::string name;
  Term lhs, rhs;
  Orientation orientation = Orientation::Unoriented;
};

struct RewriteSystem {
  Signature sig;
  std::vector<TermRule> term_rules;
  std::vector<PropRule> prop_rules;
  std::vector<Equation> equations;
  // When set, membership atoms whose class argument is headed by a
  // comprehension symbol rewrite to the symbol's body (one schema standing
  // for the infinite rule family).
  bool comprehension_schema = true;

  // First problem found, or empty when every rule is well-formed and
  // well-sorted against `sig`.
  std::vector<std::string> validate() const;

  // term_rules plus the oriented equations, as rules.
  std::vector<TermRule> oriented_term_rules() const;
  bool has_unoriented_equations() const;
};

// Step bounds standing in for the meta-theoretic normalization guarantee.
struct Limits {
  std::uint64_t fuel = 1'000'000;  // max rewrite steps
  unsigned depth = 8;              // max equational search depth
};

// Child path from the root. Props: lhs=0/rhs=1, quantifier body=0, atom
// argument i=i; terms: argument i=i.
using Path = std::vector<int>;
std::string to_text(const Path& p);

struct RewriteStep {
  std::string rule;       // rule or equation name; "comprehension" for schema
  bool backwards = false; // an equation used right-to-left
  Path at;
};

// The proposition-rewriting schema instance for a comprehension symbol:
//   eps_n(x1..xn, C(y1..yp)) -> body.
// `pred` must be the membership predicate of the class arity.
PropRule schema_rule_for(const PredicateSymbol& pred, const ComprehensionSymbol& c);

// True for eps : iota x kappa and eps_k : iota^k x kappa_k.
bool is_membership_pred(const PredicateSymbol& p);

template <typename T>
struct Normalized {
  T value;
  bool normal = false;  // false: fuel ran out, value is the last intermediate
  std::uint64_t steps = 0;
  std::vector<RewriteStep> trace;  // filled when requested
};

Normalized<Term> normalize_term(const RewriteSystem& r, const Term& t, const Limits& lim,
                                bool want_trace = false);
Normalized<Prop> normalize_prop(const RewriteSystem& r, const Prop& p, const Limits& lim,
                                bool want_trace = false);

// Single leftmost-outermost step with the oriented rules; nullopt when normal.
std::optional<std::pair<Term, RewriteStep>> term_step(const RewriteSystem& r, const Term& t);
std::optional<std::pair<Prop, RewriteStep>> prop_step(const RewriteSystem& r, const Prop& p);

// Every one-step successor under the oriented rules, all positions.
std::vector<std::pair<Term, RewriteStep>> all_term_steps(const RewriteSystem& r, const Term& t);

// Every one-step neighbor under rules and equations taken in both directions
// (backward uses are skipped when they would introduce unbound variables).
std::vector<std::pair<Term, RewriteStep>> term_equational_neighbors(const RewriteSystem& r,
                                                                    const Term& t);

// Replays a recorded step; nullopt if it does not apply there.
std::optional<Term> apply_named_step(const RewriteSystem& r, const Term& t, const RewriteStep& s);
std::optional<Prop> apply_named_step(const RewriteSystem& r, const Prop& p, const RewriteStep& s);

// Rewrites a root atom until a connective or quantifier surfaces. Non-atomic
// inputs are exposed already; argument terms are normalized before matching.
enum class Exposure { Exposed, StillAtomic, FuelExhausted };
struct ExposeResult {
  Exposure status;
  Prop prop;
  std::uint64_t steps = 0;
  std::vector<RewriteStep> trace;  // every rewrite applied, relative to the input
};
ExposeResult head_expose(const RewriteSystem& r, const Prop& p, const Limits& lim);

struct CongruenceVerdict {
  enum class Kind { Equivalent, Distinct, Undecided };
  Kind kind = Kind::Undecided;
  std::string reason;  // Undecided explanation / Distinct caveat
  // For Equivalent: step chains from each side to the common form. Replaying
  // them with apply_named_step reproduces the join.
  std::vector<RewriteStep> left_trace, right_trace;
  bool equivalent() const { return kind == Kind::Equivalent; }
};

// Three-valued congruence test. Equivalent is sound unconditionally (it is
// witnessed by the traces); Distinct is sound when the system is terminating
// and confluent. Besides joining normal forms (plus a depth-bounded
// bidirectional search over unoriented equations), the proposition version
// compares head exposures component-wise, which decides pairs like
// N(0) / N(S(0)) whose unfoldings never terminate.
CongruenceVerdict decide_congruence(const RewriteSystem& r, const Term& a, const Term& b,
                                    const Limits& lim);
CongruenceVerdict decide_congruence(const RewriteSystem& r, const Prop& a, const Prop& b,
                                    const Limits& lim);

// One localized step of the proposition rules modulo the term-level
// congruence: an atomic occurrence, the rule, the matching substitution after
// normalizing the atom's arguments, and the resulting proposition.
struct LocalizedStep {
  Path at;
  PropRule rule;
  Substitution sub;
  Prop result;
};
std::vector<LocalizedStep> localized_step(const RewriteSystem& r, const Prop& a,
                                          const Limits& lim);

// Syntactic first-order matching; extends `sub` in place on success.
bool match_term(const Term& pattern, const Term& subject, Substitution& sub);
bool match_atom(const Prop& pattern, const Prop& subject, Substitution& sub);

// Most general unifier of two same-sorted terms.
std::optional<Substitution> unify(const Term& a, const Term& b);

struct CriticalPair {
  Term peak, left, right;
  std::string rule1, rule2;
  Path at;  // overlap position inside rule1's lhs
};

// Standard overlaps between left-hand sides at non-variable positions,
// including root overlaps of distinct rules.
std::vector<CriticalPair> critical_pairs(const std::vector<TermRule>& rules);

// True/false when both sides reach normal forms within fuel; nullopt else.
std::optional<bool> joinable(const RewriteSystem& r, const Term& t, const Term& u,
                             const Limits& lim);

// Bounded bidirectional search for a term with head S in the congruence class
// of 0. NoneFound (violation=false) is a semi-decision, not a proof.
struct GuardReport {
  bool applicable = true;  // signature has 0 and S
  bool violation = false;
  Term witness;             // S-headed term, when violation
  std::vector<Term> chain;  // congruence chain from 0 (or an equation side) to witness
  unsigned depth_searched = 0;
  bool truncated = false;  // node cap hit before the depth bound
  std::vector<std::string> notes;
};
GuardReport guard_zero_succ(const RewriteSystem& r, const Limits& lim);

// Checks the head-and-components discipline on a pair the caller already
// knows to be congruent: same connective or quantifier, components pairwise
// Equivalent, recursively while both sides stay non-atomic.
struct NonConfusion {
  bool ok = true;
  std::string detail;
};
NonConfusion non_confusion_check(const RewriteSystem& r, const Prop& a, const Prop& b,
                                 const Limits& lim);

}  // namespace dm
