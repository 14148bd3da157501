#pragma once

// Bidirectional proof checking for natural deduction modulo a congruence:
// introductions (and the bottom/case/unpack eliminators) check against a
// target decomposed by head exposure; the other eliminations synthesize.
// Every side condition that Fig-style presentations phrase as "A == B" is
// discharged by decide_congruence, so Undecided is a first-class verdict.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dm/proofterm.hpp"
#include "dm/rewrite.hpp"

namespace dm {

// Ordered declarations: term variables (x : sort) and hypotheses
// (h : proposition). Names are unique across both namespaces of the context.
class Context {
 public:
  struct TermDecl {
    Var v;
  };
  struct HypDecl {
    std::string name;
    Prop prop;
  };
  using Entry = std::variant<TermDecl, HypDecl>;

  Context() = default;

  bool has_name(const std::string& name) const;
  const Prop* hypothesis(const std::string& name) const;
  const Var* term_decl(const std::string& name) const;

  // Throw std::invalid_argument on duplicate names.
  Context with_term(Var v) const;
  Context with_hyp(std::string name, Prop prop) const;

  const std::vector<Entry>& entries() const { return entries_; }

  // Free term variables of the declared hypotheses.
  VarSet free_term_vars() const;

 private:
  std::vector<Entry> entries_;
};

struct CheckResult {
  enum class Kind { Valid, Invalid, Undecided };
  Kind kind = Kind::Invalid;
  Path path;  // into the proof term; child order matches the constructors
  std::string reason;
  bool valid() const { return kind == Kind::Valid; }
};

CheckResult check(const RewriteSystem& r, const Context& ctx, const Proof& p, const Prop& goal,
                  const Limits& lim);

struct SynthResult {
  enum class Kind { Ok, Fail, Undecided };
  Kind kind = Kind::Fail;
  Prop prop;  // set when Ok
  Path path;
  std::string reason;
  bool ok() const { return kind == Kind::Ok; }
};

// Synthesizes a proposition for hypotheses, eliminations and annotated (or
// otherwise self-describing) introductions; plain introductions without an
// annotation fail with "annotation required".
SynthResult synthesize(const RewriteSystem& r, const Context& ctx, const Proof& p,
                       const Limits& lim);

// forall x1 (N(x1) => ... forall xn (N(xn) => exists y N(y)) ...)
Prop program_shape(unsigned arity);

// Checks a closed proof against the n-ary program shape.
CheckResult check_closed_program_shape(const RewriteSystem& r, const Proof& p, unsigned arity,
                                       const Limits& lim);

}  // namespace dm
