#pragma once

// Many-sorted first-order terms and propositions with binders: the shared
// vocabulary of the rewrite engine, the proof checker and the extractor.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dm {

struct Sort {
  std::string name;
  friend bool operator==(const Sort&, const Sort&) = default;
  friend auto operator<=>(const Sort&, const Sort&) = default;
};

// The individual sort and the class sorts reserved by the arithmetic theory.
Sort iota_sort();
Sort class_sort(std::size_t arity);  // kappa, kappa_2, kappa_3, ...

struct Var {
  std::string name;
  Sort sort;
  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

using VarSet = std::set<Var>;

struct FunctionSymbol {
  std::string name;
  std::vector<Sort> arg_sorts;
  Sort result_sort;
  friend bool operator==(const FunctionSymbol&, const FunctionSymbol&) = default;
};

struct PredicateSymbol {
  std::string name;
  std::vector<Sort> arg_sorts;
  friend bool operator==(const PredicateSymbol&, const PredicateSymbol&) = default;
};

class Prop;

// Skolem symbol naming the class of tuples (bound) whose membership unfolds to
// `body`; `params` are the value parameters of the class. Identity is
// alpha-equivalence of (bound, params, body), so two textual occurrences of
// the same class definition denote the same symbol. As a function symbol its
// rank is iota^|params| -> kappa_|bound|.
struct ComprehensionSymbol {
  std::vector<Var> bound;   // all iota, length >= 1
  std::vector<Var> params;  // all iota
  std::shared_ptr<const Prop> body;
};

bool comp_eq(const ComprehensionSymbol& a, const ComprehensionSymbol& b);

using TermHead = std::variant<FunctionSymbol, ComprehensionSymbol>;

bool head_eq(const TermHead& a, const TermHead& b);
std::size_t head_arity(const TermHead& h);
Sort head_result_sort(const TermHead& h);
std::vector<Sort> head_arg_sorts(const TermHead& h);

class Term {
 public:
  Term() = default;

  static Term variable(Var v);
  static Term app(TermHead head, std::vector<Term> args);
  static Term app(FunctionSymbol f, std::vector<Term> args);
  static Term constant(FunctionSymbol f) { return app(std::move(f), {}); }

  bool empty() const { return !n_; }
  bool is_var() const;
  bool is_app() const;
  const Var& var() const;
  const TermHead& head() const;
  const std::vector<Term>& args() const;
  Sort sort() const;
  const std::vector<Var>& free() const;  // sorted, unique

  // Pointer identity; used for sharing-aware memoization, never as equality.
  const void* id() const { return n_.get(); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

class Prop {
 public:
  enum class Kind { Atom, Top, Bottom, And, Or, Implies, Forall, Exists };

  Prop() = default;

  static Prop atom(PredicateSymbol pred, std::vector<Term> args);
  static Prop top();
  static Prop bottom();
  static Prop conj(Prop l, Prop r);
  static Prop disj(Prop l, Prop r);
  static Prop implies(Prop l, Prop r);
  static Prop forall(Var v, Prop body);
  static Prop exists(Var v, Prop body);
  static Prop quant(Kind k, Var v, Prop body);
  static Prop connective(Kind k, Prop l, Prop r);

  bool empty() const { return !n_; }
  Kind kind() const;
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_connective() const;
  bool is_quant() const;

  const PredicateSymbol& pred() const;     // Atom
  const std::vector<Term>& args() const;   // Atom
  const Prop& lhs() const;                 // And/Or/Implies
  const Prop& rhs() const;                 // And/Or/Implies
  const Var& binder() const;               // Forall/Exists
  const Prop& body() const;                // Forall/Exists
  const std::vector<Var>& free() const;

  const void* id() const { return n_.get(); }

 private:
  struct Node;
  explicit Prop(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Sort-preserving finite map from variables to terms.
class Substitution {
 public:
  Substitution() = default;

  // Throws std::invalid_argument when the replacement's sort differs from the
  // variable's.
  void bind(Var v, Term t);
  const Term* lookup(const Var& v) const;
  bool contains(const Var& v) const { return lookup(v) != nullptr; }
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::map<Var, Term>& entries() const { return map_; }
  Substitution without(const Var& v) const;

 private:
  std::map<Var, Term> map_;
};

VarSet free_vars(const Term& t);
VarSet free_vars(const Prop& p);

Term apply_subst(const Substitution& s, const Term& t);
Prop apply_subst(const Substitution& s, const Prop& p);

bool alpha_eq(const Term& a, const Term& b);
bool alpha_eq(const Prop& a, const Prop& b);

// Alpha-invariant structural hashes, consistent with alpha_eq.
std::size_t alpha_hash(const Term& t);
std::size_t alpha_hash(const Prop& p);

// First name of the form base, base', base'', ... not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

struct Signature {
  std::vector<Sort> sorts;
  std::vector<FunctionSymbol> functions;
  std::vector<PredicateSymbol> predicates;

  bool has_sort(const Sort& s) const;
  const FunctionSymbol* function(std::string_view name) const;
  const PredicateSymbol* predicate(std::string_view name) const;

  // Each throws std::invalid_argument on a duplicate name.
  void add_sort(Sort s);
  void add_function(FunctionSymbol f);
  void add_predicate(PredicateSymbol p);
};

struct SortCheck {
  bool ok = true;
  std::string error;  // names the first offending subterm
  explicit operator bool() const { return ok; }
};

SortCheck check_sorting(const Signature& sig, const Term& t);
SortCheck check_sorting(const Signature& sig, const Prop& p);

// Canonical text renderings; the surface parser accepts exactly this output.
std::string to_text(const Term& t);
std::string to_text(const Prop& p);

}  // namespace dm
