#pragma once

// The arithmetic theory: its two-sorted signature, the five proposition
// rules and six term rules, a lazy comprehension schema with the
// predicative/impredicative discipline, numerals and Parigot numerals.

#include <optional>
#include <string>

#include "dm/proofterm.hpp"
#include "dm/rewrite.hpp"

namespace dm {

struct HATheory {
  Signature sig;
  // The four concrete proposition rules; the comprehension schema is the
  // fifth and is handled lazily by the rewrite engine.
  std::vector<PropRule> ha1;
  std::vector<TermRule> ha2;  // the six term rules
  bool impredicative = false;
  std::size_t max_class_arity = 4;

  std::size_t ha1_rule_count() const { return ha1.size() + 1; }  // schema counted once
  RewriteSystem system() const;
};

HATheory build_HA(bool impredicative);

// Fixed symbols of the theory.
FunctionSymbol ha_zero();
FunctionSymbol ha_succ();
FunctionSymbol ha_plus();
FunctionSymbol ha_times();
FunctionSymbol ha_pred_fn();
PredicateSymbol ha_eq();
PredicateSymbol ha_nat();
PredicateSymbol ha_null();
PredicateSymbol ha_eps(std::size_t class_arity);

bool is_class_sort(const Sort& s);

struct ComprehensionRule {
  bool ok = true;
  std::string violation;
  PropRule rule;
};

// The membership-unfolding rule for a class symbol, subject to the theory's
// comprehension discipline: predicative bodies may not quantify over class
// sorts nor test membership in a variable class.
ComprehensionRule comprehension_rule(const HATheory& t, const ComprehensionSymbol& c);

Term numeral(unsigned n);
std::optional<unsigned> term_as_numeral(const Term& t);

// Convenience proposition builders over the HA signature.
Prop nat_of(Term t);
Prop eq_of(Term a, Term b);
Prop eps_of(Term elem, Term cls);

// The canonical normal closed proof of N(numeral(n)). Subterms are shared, so
// construction stays linear in n even though the tree is exponential.
Proof parigot(unsigned n);

struct DecodeResult {
  bool ok = false;
  unsigned value = 0;
  std::string mismatch;  // first structural mismatch
};

// Structural recognition of Parigot numerals in one pass; sharing-aware, so
// it decodes parigot(n) without walking the full tree twice per level.
DecodeResult decode_numeral(const Proof& p);

}  // namespace dm
