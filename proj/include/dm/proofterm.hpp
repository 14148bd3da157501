#pragma once

// The proof-term calculus: fifteen constructors mirroring the natural
// deduction rules, capture-avoiding substitution of proof and term variables,
// and the seven cut-elimination reductions.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dm/syntax.hpp"

namespace dm {

// Immutable handle; shared subterms keep reduction and numeral construction
// cheap (substitution preserves sharing where it changes nothing).
class Proof {
 public:
  enum class Kind {
    Var,       // hypothesis reference
    TopIntro,  // I
    BotElim,   // efq
    Pair,
    Fst,
    Snd,
    Inl,
    Inr,
    Case,
    ImpIntro,  // fun h => body
    App,
    AllIntro,  // fun! x => body
    TApp,
    Pack,   // existential witness
    Unpack  // existential eliminator
  };

  Proof() = default;

  static Proof var(std::string name);
  static Proof top_intro();
  static Proof bot_elim(Proof inner, std::optional<Prop> target = std::nullopt);
  static Proof pair(Proof l, Proof r);
  static Proof fst(Proof inner);
  static Proof snd(Proof inner);
  static Proof inl(Proof inner, std::optional<Prop> disj = std::nullopt);
  static Proof inr(Proof inner, std::optional<Prop> disj = std::nullopt);
  static Proof case_of(Proof scrutinee, std::string left_hyp, Proof left, std::string right_hyp,
                       Proof right);
  static Proof imp_intro(std::string hyp, std::optional<Prop> domain, Proof body);
  static Proof app(Proof fn, Proof arg);
  static Proof all_intro(Var binder, Proof body);
  static Proof tapp(Proof fn, Term arg);
  static Proof pack(Term witness, Proof inner, std::optional<Prop> target = std::nullopt);
  static Proof unpack(Proof scrutinee, Var term_binder, std::string hyp, Proof body);

  bool empty() const { return !n_; }
  Kind kind() const;

  const std::string& pvar() const;             // Var
  const Proof& inner() const;                  // BotElim/Fst/Snd/Inl/Inr/Pack
  const Proof& lhs() const;                    // Pair
  const Proof& rhs() const;                    // Pair
  const Proof& fn() const;                     // App/TApp
  const Proof& arg() const;                    // App
  const Term& targ() const;                    // TApp
  const Proof& scrutinee() const;              // Case/Unpack
  const std::string& left_hyp() const;         // Case
  const Proof& left() const;                   // Case
  const std::string& right_hyp() const;        // Case
  const Proof& right() const;                  // Case
  const std::string& hyp() const;              // ImpIntro/Unpack
  const Proof& body() const;                   // ImpIntro/AllIntro/Unpack
  const Var& binder() const;                   // AllIntro/Unpack term binder
  const Term& witness() const;                 // Pack
  const std::optional<Prop>& annotation() const;  // BotElim/Inl/Inr/ImpIntro/Pack

  const std::vector<std::string>& free_proof_vars() const;  // sorted, unique
  const std::vector<Var>& free_term_vars() const;           // includes annotation vars
  bool closed() const { return free_proof_vars().empty() && free_term_vars().empty(); }

  const void* id() const { return n_.get(); }

 private:
  struct Node;
  static Proof make(Node n);
  explicit Proof(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

Proof subst_proof(const Proof& p, const std::string& var, const Proof& replacement);
Proof subst_term_in_proof(const Proof& p, const Var& var, const Term& t);

// Contracts the leftmost-outermost cut; nullopt when none exists anywhere.
std::optional<Proof> reduce_step(const Proof& p);

struct ReductionResult {
  Proof value;
  bool normal = false;  // false: fuel ran out
  std::uint64_t steps = 0;
};

ReductionResult normalize_proof(const Proof& p, std::uint64_t fuel);

// Axioms and eliminations; introductions are never neutral.
bool is_neutral(const Proof& p);

bool is_introduction(const Proof& p);

struct Uniformity {
  bool precondition_ok = true;
  std::string issue;         // set when the input is open or reducible
  bool introduction = false; // meaningful when precondition_ok
};

// Checks that a closed normal proof ends with an introduction.
Uniformity check_uniformity(const Proof& p);

// Alpha-equivalence of proofs; annotations are checking hints and ignored.
bool alpha_eq(const Proof& a, const Proof& b);
std::size_t alpha_hash(const Proof& p);

std::string to_text(const Proof& p);

}  // namespace dm
