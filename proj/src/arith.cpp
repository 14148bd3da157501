#include "dm/arith.hpp"

#include <map>
#include <stdexcept>

namespace dm {

namespace {
const Sort kIota = iota_sort();
const Sort kKappa = class_sort(1);

Term tvar(const char* n, Sort s = kIota) { return Term::variable(Var{n, std::move(s)}); }
}  // namespace

FunctionSymbol ha_zero() { return FunctionSymbol{"0", {}, kIota}; }
FunctionSymbol ha_succ() { return FunctionSymbol{"S", {kIota}, kIota}; }
FunctionSymbol ha_plus() { return FunctionSymbol{"+", {kIota, kIota}, kIota}; }
FunctionSymbol ha_times() { return FunctionSymbol{"*", {kIota, kIota}, kIota}; }
FunctionSymbol ha_pred_fn() { return FunctionSymbol{"Pred", {kIota}, kIota}; }
PredicateSymbol ha_eq() { return PredicateSymbol{"=", {kIota, kIota}}; }
PredicateSymbol ha_nat() { return PredicateSymbol{"N", {kIota}}; }
PredicateSymbol ha_null() { return PredicateSymbol{"Null", {kIota}}; }

PredicateSymbol ha_eps(std::size_t class_arity) {
  std::vector<Sort> args(class_arity, kIota);
  args.push_back(class_sort(class_arity));
  std::string name = class_arity <= 1 ? "eps" : "eps_" + std::to_string(class_arity);
  return PredicateSymbol{std::move(name), std::move(args)};
}

bool is_class_sort(const Sort& s) {
  return s.name == "kappa" || s.name.rfind("kappa_", 0) == 0;
}

Prop nat_of(Term t) { return Prop::atom(ha_nat(), {std::move(t)}); }
Prop eq_of(Term a, Term b) { return Prop::atom(ha_eq(), {std::move(a), std::move(b)}); }
Prop eps_of(Term elem, Term cls) { return Prop::atom(ha_eps(1), {std::move(elem), std::move(cls)}); }

Term numeral(unsigned n) {
  Term t = Term::constant(ha_zero());
  for (unsigned i = 0; i < n; ++i) t = Term::app(ha_succ(), {std::move(t)});
  return t;
}

std::optional<unsigned> term_as_numeral(const Term& t) {
  unsigned n = 0;
  const FunctionSymbol zero = ha_zero();
  const FunctionSymbol succ = ha_succ();
  Term cur = t;
  while (true) {
    if (!cur.is_app()) return std::nullopt;
    const auto* f = std::get_if<FunctionSymbol>(&cur.head());
    if (!f) return std::nullopt;
    if (*f == zero) return n;
    if (*f == succ) {
      ++n;
      cur = cur.args()[0];
      continue;
    }
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// The theory

namespace {

// forall X (eps(0,X) => (forall y (N(y) => eps(y,X) => eps(S(y),X))) => eps(n,X))
Prop induction_unfolding(const Term& n) {
  Var big_x{"X", kKappa};
  Var y{"y", kIota};
  Term x_term = Term::variable(big_x);
  Prop step = Prop::forall(
      y, Prop::implies(nat_of(tvar("y")),
                       Prop::implies(eps_of(tvar("y"), x_term),
                                     eps_of(Term::app(ha_succ(), {tvar("y")}), x_term))));
  return Prop::forall(big_x, Prop::implies(eps_of(numeral(0), x_term),
                                           Prop::implies(step, eps_of(n, x_term))));
}

}  // namespace

HATheory build_HA(bool impredicative) {
  HATheory t;
  t.impredicative = impredicative;

  t.sig.add_sort(kIota);
  for (std::size_t n = 1; n <= t.max_class_arity; ++n) t.sig.add_sort(class_sort(n));
  t.sig.add_function(ha_zero());
  t.sig.add_function(ha_succ());
  t.sig.add_function(ha_plus());
  t.sig.add_function(ha_times());
  t.sig.add_function(ha_pred_fn());
  t.sig.add_predicate(ha_eq());
  t.sig.add_predicate(ha_nat());
  t.sig.add_predicate(ha_null());
  for (std::size_t n = 1; n <= t.max_class_arity; ++n) t.sig.add_predicate(ha_eps(n));

  // Proposition rules: Leibniz equality, the induction unfolding of N, and
  // the two Null rules. The comprehension schema is the fifth, kept lazy.
  Var big_x{"X", kKappa};
  Term x_term = Term::variable(big_x);
  t.ha1.push_back(PropRule{
      "eq-leibniz", eq_of(tvar("y"), tvar("z")),
      Prop::forall(big_x, Prop::implies(eps_of(tvar("y"), x_term), eps_of(tvar("z"), x_term)))});
  t.ha1.push_back(PropRule{"nat-induction", nat_of(tvar("n")), induction_unfolding(tvar("n"))});
  t.ha1.push_back(PropRule{"null-zero", Prop::atom(ha_null(), {numeral(0)}), Prop::top()});
  t.ha1.push_back(PropRule{"null-succ", Prop::atom(ha_null(), {Term::app(ha_succ(), {tvar("x")})}),
                           Prop::bottom()});

  Term x = tvar("x"), y = tvar("y");
  Term sx = Term::app(ha_succ(), {x});
  t.ha2.push_back(TermRule{"pred-zero", Term::app(ha_pred_fn(), {numeral(0)}), numeral(0)});
  t.ha2.push_back(TermRule{"pred-succ", Term::app(ha_pred_fn(), {sx}), x});
  t.ha2.push_back(TermRule{"plus-zero", Term::app(ha_plus(), {numeral(0), y}), y});
  t.ha2.push_back(TermRule{"plus-succ", Term::app(ha_plus(), {sx, y}),
                           Term::app(ha_succ(), {Term::app(ha_plus(), {x, y})})});
  t.ha2.push_back(TermRule{"times-zero", Term::app(ha_times(), {numeral(0), y}), numeral(0)});
  t.ha2.push_back(TermRule{"times-succ", Term::app(ha_times(), {sx, y}),
                           Term::app(ha_plus(), {Term::app(ha_times(), {x, y}), y})});
  return t;
}

RewriteSystem HATheory::system() const {
  RewriteSystem r;
  r.sig = sig;
  r.term_rules = ha2;
  r.prop_rules = ha1;
  r.comprehension_schema = true;
  return r;
}

// ---------------------------------------------------------------------------
// Comprehension discipline

namespace {

// First predicativity offense in a class body, if any.
std::optional<std::string> predicativity_offense(const Prop& p) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      if (is_membership_pred(p.pred()) && p.args().back().is_var())
        return "membership in the variable class " + p.args().back().var().name;
      return std::nullopt;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return std::nullopt;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies: {
      if (auto l = predicativity_offense(p.lhs())) return l;
      return predicativity_offense(p.rhs());
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      if (is_class_sort(p.binder().sort))
        return "quantifier over " + p.binder().name + ":" + p.binder().sort.name;
      return predicativity_offense(p.body());
    }
  }
  return std::nullopt;
}

}  // namespace

ComprehensionRule comprehension_rule(const HATheory& t, const ComprehensionSymbol& c) {
  ComprehensionRule out;
  if (c.bound.empty()) {
    out.ok = false;
    out.violation = "comprehension symbol has no bound variables";
    return out;
  }
  if (c.bound.size() > t.max_class_arity) {
    out.ok = false;
    out.violation = "class arity " + std::to_string(c.bound.size()) + " exceeds the supported bound " +
                    std::to_string(t.max_class_arity);
    return out;
  }
  VarSet allowed(c.bound.begin(), c.bound.end());
  allowed.insert(c.params.begin(), c.params.end());
  for (const Var& v : c.body->free()) {
    if (!allowed.count(v)) {
      out.ok = false;
      out.violation = "stray free variable " + v.name + " in class body";
      return out;
    }
  }
  if (!t.impredicative) {
    if (auto offense = predicativity_offense(*c.body)) {
      out.ok = false;
      out.violation = *offense;
      return out;
    }
  }
  out.rule = schema_rule_for(ha_eps(c.bound.size()), c);
  return out;
}

// ---------------------------------------------------------------------------
// Parigot numerals

namespace {

const char* kClassVar = "X";
const char* kBaseHyp = "a";
const char* kStepHyp = "b";

Prop base_domain(const Term& x_term) { return eps_of(numeral(0), x_term); }

Prop step_domain(const Term& x_term) {
  Var y{"y", kIota};
  return Prop::forall(y, Prop::implies(nat_of(tvar("y")),
                                       Prop::implies(eps_of(tvar("y"), x_term),
                                                     eps_of(Term::app(ha_succ(), {tvar("y")}),
                                                            x_term))));
}

}  // namespace

Proof parigot(unsigned n) {
  Var big_x{kClassVar, kKappa};
  Term x_term = Term::variable(big_x);
  Prop base_dom = base_domain(x_term);
  Prop step_dom = step_domain(x_term);

  std::vector<Proof> rho;
  rho.reserve(n + 1);
  for (unsigned k = 0; k <= n; ++k) {
    // body(0) = a ; body(k) = b k-1 rho(k-1) body(k-1), all under X a b.
    Proof body = Proof::var(kBaseHyp);
    for (unsigned i = 0; i < k; ++i) {
      body = Proof::app(
          Proof::app(Proof::tapp(Proof::var(kStepHyp), numeral(i)), rho[i]), std::move(body));
    }
    rho.push_back(Proof::all_intro(
        big_x, Proof::imp_intro(kBaseHyp, base_dom,
                                Proof::imp_intro(kStepHyp, step_dom, std::move(body)))));
  }
  return rho[n];
}

namespace {

struct Decoder {
  std::map<const void*, DecodeResult> memo;

  DecodeResult fail(const std::string& why) { return DecodeResult{false, 0, why}; }

  DecodeResult decode(const Proof& p) {
    auto it = memo.find(p.id());
    if (it != memo.end()) return it->second;
    DecodeResult r = decode_uncached(p);
    memo.emplace(p.id(), r);
    return r;
  }

  DecodeResult decode_uncached(const Proof& p) {
    if (p.kind() != Proof::Kind::AllIntro)
      return fail("root is not a class abstraction");
    if (!is_class_sort(p.binder().sort))
      return fail("root abstraction does not bind a class variable");
    const Proof& l1 = p.body();
    if (l1.kind() != Proof::Kind::ImpIntro) return fail("missing base-case abstraction");
    const Proof& l2 = l1.body();
    if (l2.kind() != Proof::Kind::ImpIntro) return fail("missing step-case abstraction");
    return walk(l2.body(), l1.hyp(), l2.hyp());
  }

  // body(0) = a ; body(k+1) = ((b k_ rho_k) body(k))
  DecodeResult walk(const Proof& e, const std::string& base, const std::string& step) {
    if (e.kind() == Proof::Kind::Var) {
      if (e.pvar() == base) return DecodeResult{true, 0, ""};
      return fail("leaf references " + e.pvar() + " instead of the base hypothesis");
    }
    if (e.kind() != Proof::Kind::App) return fail("spine node is not an application");
    const Proof& head = e.fn();
    if (head.kind() != Proof::Kind::App) return fail("step application is missing an argument");
    const Proof& thead = head.fn();
    if (thead.kind() != Proof::Kind::TApp) return fail("step head is not a type application");
    if (thead.fn().kind() != Proof::Kind::Var || thead.fn().pvar() != step)
      return fail("step head does not reference the step hypothesis");
    DecodeResult rest = walk(e.arg(), base, step);
    if (!rest.ok) return rest;
    const Proof& sub = head.arg();
    if (!sub.closed()) return fail("embedded numeral is not closed");
    DecodeResult k = decode(sub);
    if (!k.ok) return k;
    if (k.value != rest.value)
      return fail("embedded numeral " + std::to_string(k.value) + " disagrees with spine depth " +
                  std::to_string(rest.value));
    if (!dm::alpha_eq(thead.targ(), numeral(rest.value)))
      return fail("numeral term argument is not " + std::to_string(rest.value));
    return DecodeResult{true, rest.value + 1, ""};
  }
};

}  // namespace

DecodeResult decode_numeral(const Proof& p) {
  Decoder d;
  return d.decode(p);
}

}  // namespace dm
