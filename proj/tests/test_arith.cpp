#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dm/arith.hpp"
#include "dm/rewrite.hpp"

using namespace dm;

namespace {

Term tv(const char* n) { return Term::variable(Var{n, iota_sort()}); }

const TermRule* rule_named(const std::vector<TermRule>& rules, const char* name) {
  for (const TermRule& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

const PropRule* prop_rule_named(const std::vector<PropRule>& rules, const char* name) {
  for (const PropRule& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

ComprehensionSymbol even_class() {
  // {x | | exists w, x = 2 * w}
  Var x{"x", iota_sort()}, w{"w", iota_sort()};
  Prop body = Prop::exists(w, eq_of(tv("x"), Term::app(ha_times(), {numeral(2), tv("w")})));
  return ComprehensionSymbol{{x}, {}, std::make_shared<Prop>(std::move(body))};
}

}  // namespace

TEST_CASE("build_HA rule inventory") {
  HATheory t = build_HA(false);
  CHECK(t.ha2.size() == 6);
  CHECK(t.ha1.size() == 4);
  CHECK(t.ha1_rule_count() == 5);  // comprehension schema counted as one

  const TermRule* pz = rule_named(t.ha2, "plus-zero");
  REQUIRE(pz);
  CHECK(alpha_eq(pz->lhs, Term::app(ha_plus(), {numeral(0), tv("y")})));
  CHECK(alpha_eq(pz->rhs, tv("y")));

  const TermRule* ps = rule_named(t.ha2, "plus-succ");
  REQUIRE(ps);
  CHECK(alpha_eq(ps->rhs, Term::app(ha_succ(), {Term::app(ha_plus(), {tv("x"), tv("y")})})));

  const TermRule* ts = rule_named(t.ha2, "times-succ");
  REQUIRE(ts);
  CHECK(alpha_eq(ts->rhs, Term::app(ha_plus(), {Term::app(ha_times(), {tv("x"), tv("y")}), tv("y")})));

  const PropRule* leib = prop_rule_named(t.ha1, "eq-leibniz");
  REQUIRE(leib);
  Var big_x{"X", class_sort(1)};
  Prop expect = Prop::forall(big_x, Prop::implies(eps_of(tv("y"), Term::variable(big_x)),
                                                  eps_of(tv("z"), Term::variable(big_x))));
  CHECK(alpha_eq(leib->rhs, expect));

  const PropRule* nz = prop_rule_named(t.ha1, "null-zero");
  REQUIRE(nz);
  CHECK(nz->rhs.kind() == Prop::Kind::Top);
  const PropRule* ns = prop_rule_named(t.ha1, "null-succ");
  REQUIRE(ns);
  CHECK(ns->rhs.kind() == Prop::Kind::Bottom);

  // Everything in the theory is well-sorted against its own signature.
  CHECK(t.system().validate().empty());
}

TEST_CASE("comprehension rules and predicativity") {
  HATheory pred = build_HA(false);
  HATheory impred = build_HA(true);

  ComprehensionRule r = comprehension_rule(pred, even_class());
  REQUIRE(r.ok);
  CHECK(r.rule.lhs.is_atom());
  CHECK(r.rule.lhs.pred().name == "eps");
  CHECK(r.rule.rhs.kind() == Prop::Kind::Exists);

  // A class body quantifying over classes is rejected predicatively and
  // accepted impredicatively.
  Var x{"x", iota_sort()};
  Var big_x{"X", class_sort(1)};
  Prop impredicative_body = Prop::forall(big_x, eps_of(tv("x"), Term::variable(big_x)));
  ComprehensionSymbol c{{x}, {}, std::make_shared<Prop>(impredicative_body)};
  ComprehensionRule bad = comprehension_rule(pred, c);
  CHECK_FALSE(bad.ok);
  CHECK(bad.violation.find("quantifier") != std::string::npos);
  ComprehensionRule good = comprehension_rule(impred, c);
  CHECK(good.ok);

  // Membership in a variable class is likewise impredicative.
  Prop var_class_body = eps_of(tv("x"), Term::variable(big_x));
  // ... with the class variable as a parameter it would be stray; use bound-only body.
  ComprehensionSymbol c2{{x}, {}, std::make_shared<Prop>(var_class_body)};
  ComprehensionRule stray = comprehension_rule(pred, c2);
  CHECK_FALSE(stray.ok);

  // The class used to reformulate induction has body N(x): predicative.
  ComprehensionSymbol nat_class{{x}, {}, std::make_shared<Prop>(nat_of(tv("x")))};
  CHECK(comprehension_rule(pred, nat_class).ok);

  // The schema instance fires inside the rewrite engine.
  RewriteSystem sys = pred.system();
  Prop member = eps_of(numeral(4), Term::app(TermHead{even_class()}, {}));
  ExposeResult e = head_expose(sys, member, Limits{1000, 8});
  REQUIRE(e.status == Exposure::Exposed);
  CHECK(e.prop.kind() == Prop::Kind::Exists);
}

TEST_CASE("numerals") {
  CHECK(alpha_eq(numeral(0), Term::constant(ha_zero())));
  CHECK(alpha_eq(numeral(2), Term::app(ha_succ(), {Term::app(ha_succ(), {numeral(0)})})));
  CHECK(term_as_numeral(numeral(7)) == 7u);
  CHECK_FALSE(term_as_numeral(tv("x")).has_value());
  CHECK_FALSE(term_as_numeral(Term::app(ha_plus(), {numeral(1), numeral(1)})).has_value());
}

TEST_CASE("parigot numerals") {
  // rho_0 = fun! X => fun a => fun b => a
  Proof rho0 = parigot(0);
  REQUIRE(rho0.kind() == Proof::Kind::AllIntro);
  Proof expected0 = Proof::all_intro(
      Var{"X", class_sort(1)},
      Proof::imp_intro("a", std::nullopt, Proof::imp_intro("b", std::nullopt, Proof::var("a"))));
  CHECK(alpha_eq(rho0, expected0));
  CHECK(rho0.closed());

  // The defining clause rho_{n+1} = \X \a \b. (b n rho_n (rho_n X a b))
  // normalizes to the constructed numeral: parigot() builds the normal form.
  for (unsigned n = 0; n < 8; ++n) {
    Var big_x{"X", class_sort(1)};
    Proof rho_n = parigot(n);
    Proof display = Proof::all_intro(
        big_x,
        Proof::imp_intro(
            "a", std::nullopt,
            Proof::imp_intro(
                "b", std::nullopt,
                Proof::app(Proof::app(Proof::tapp(Proof::var("b"), numeral(n)), rho_n),
                           Proof::app(Proof::app(Proof::tapp(rho_n, Term::variable(big_x)),
                                                 Proof::var("a")),
                                      Proof::var("b"))))));
    ReductionResult r = normalize_proof(display, 100000);
    REQUIRE(r.normal);
    CHECK(alpha_eq(r.value, parigot(n + 1)));
  }

  // Numerals are closed and normal.
  for (unsigned n : {0u, 1u, 5u, 12u, 20u}) {
    Proof rho = parigot(n);
    CHECK(rho.closed());
    ReductionResult r = normalize_proof(rho, 10);
    CHECK(r.normal);
    CHECK(r.steps == 0);
  }
}

TEST_CASE("decode_numeral") {
  CHECK(decode_numeral(parigot(5)).ok);
  CHECK(decode_numeral(parigot(5)).value == 5);

  // Not a numeral: projects the step hypothesis.
  Proof not_numeral = Proof::all_intro(
      Var{"X", class_sort(1)},
      Proof::imp_intro("a", std::nullopt, Proof::imp_intro("b", std::nullopt, Proof::var("b"))));
  DecodeResult bad = decode_numeral(not_numeral);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.mismatch.empty());

  // Alpha-variants decode identically.
  Var big_y{"Y", class_sort(1)};
  Proof rho1 = parigot(1);
  Proof renamed = Proof::all_intro(
      big_y,
      Proof::imp_intro(
          "base", std::nullopt,
          Proof::imp_intro("step", std::nullopt,
                           Proof::app(Proof::app(Proof::tapp(Proof::var("step"), numeral(0)),
                                                 parigot(0)),
                                      Proof::var("base")))));
  CHECK(alpha_eq(renamed, rho1));
  DecodeResult dr = decode_numeral(renamed);
  CHECK(dr.ok);
  CHECK(dr.value == 1);

  // An embedded numeral term that disagrees with the spine depth fails.
  Proof wrong = Proof::all_intro(
      Var{"X", class_sort(1)},
      Proof::imp_intro(
          "a", std::nullopt,
          Proof::imp_intro("b", std::nullopt,
                           Proof::app(Proof::app(Proof::tapp(Proof::var("b"), numeral(3)),
                                                 parigot(0)),
                                      Proof::var("a")))));
  CHECK_FALSE(decode_numeral(wrong).ok);
}

TEST_CASE("numeral round trip to 50") {
  for (unsigned n = 0; n <= 50; ++n) {
    DecodeResult r = decode_numeral(parigot(n));
    REQUIRE(r.ok);
    CHECK(r.value == n);
  }
}

TEST_CASE("arithmetic against the machine oracle") {
  RewriteSystem ha = build_HA(false).system();
  Limits lim{100000, 8};
  for (unsigned a = 0; a <= 10; ++a) {
    for (unsigned b = 0; b <= 10; ++b) {
      Normalized<Term> n = normalize_term(ha, Term::app(ha_plus(), {numeral(a), numeral(b)}), lim);
      REQUIRE(n.normal);
      CHECK(alpha_eq(n.value, numeral(a + b)));
    }
  }
  for (unsigned a = 0; a <= 6; ++a) {
    for (unsigned b = 0; b <= 6; ++b) {
      Normalized<Term> n = normalize_term(ha, Term::app(ha_times(), {numeral(a), numeral(b)}), lim);
      REQUIRE(n.normal);
      CHECK(alpha_eq(n.value, numeral(a * b)));
    }
  }
}
