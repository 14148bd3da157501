#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dm/syntax.hpp"
#include "support/gen.hpp"

using namespace dm;

namespace {

Sort iota = iota_sort();
Sort kappa = class_sort(1);

FunctionSymbol zero{"0", {}, iota};
FunctionSymbol succ{"S", {iota}, iota};
FunctionSymbol plus{"+", {iota, iota}, iota};
FunctionSymbol times{"*", {iota, iota}, iota};
PredicateSymbol nat{"N", {iota}};
PredicateSymbol eq{"=", {iota, iota}};
PredicateSymbol eps{"eps", {iota, kappa}};

Term tv(const std::string& n, Sort s = iota_sort()) { return Term::variable(Var{n, s}); }
Term c0() { return Term::constant(zero); }
Term s(Term t) { return Term::app(succ, {std::move(t)}); }

Signature mini_sig() {
  Signature sig;
  sig.add_sort(iota);
  sig.add_sort(kappa);
  sig.add_function(zero);
  sig.add_function(succ);
  sig.add_function(plus);
  sig.add_function(times);
  sig.add_predicate(nat);
  sig.add_predicate(eq);
  sig.add_predicate(eps);
  return sig;
}

ComprehensionSymbol comp_of(const std::string& bound_name, Prop body) {
  return ComprehensionSymbol{{Var{bound_name, iota_sort()}},
                             {},
                             std::make_shared<Prop>(std::move(body))};
}

}  // namespace

TEST_CASE("free_vars") {
  // forall x:iota, eps(x, X)  ->  {X}
  Var x{"x", iota}, big_x{"X", kappa};
  Prop p = Prop::forall(x, Prop::atom(eps, {tv("x"), Term::variable(big_x)}));
  CHECK(free_vars(p) == VarSet{big_x});

  // S(x) + y -> {x, y}
  Term t = Term::app(plus, {s(tv("x")), tv("y")});
  CHECK(free_vars(t) == VarSet{Var{"x", iota}, Var{"y", iota}});

  // N(0) closed
  CHECK(free_vars(Prop::atom(nat, {c0()})).empty());
}

TEST_CASE("apply_subst basics") {
  Substitution sub;
  sub.bind(Var{"x", iota}, c0());
  Term t = Term::app(plus, {s(tv("x")), tv("y")});
  Term expect = Term::app(plus, {s(c0()), tv("y")});
  CHECK(alpha_eq(apply_subst(sub, t), expect));

  Substitution sn;
  sn.bind(Var{"n", iota}, s(c0()));
  Prop p = Prop::atom(nat, {tv("n")});
  CHECK(alpha_eq(apply_subst(sn, p), Prop::atom(nat, {s(c0())})));
}

TEST_CASE("apply_subst avoids capture") {
  // {x -> y} on (forall y, x = y) must rename the binder.
  Substitution sub;
  sub.bind(Var{"x", iota}, tv("y"));
  Prop p = Prop::forall(Var{"y", iota}, Prop::atom(eq, {tv("x"), tv("y")}));
  Prop got = apply_subst(sub, p);
  Prop expect = Prop::forall(Var{"w", iota}, Prop::atom(eq, {tv("y"), tv("w")}));
  CHECK(alpha_eq(got, expect));
  CHECK(got.binder().name != "y");
  // The free y stayed free.
  CHECK(free_vars(got) == VarSet{Var{"y", iota}});
}

TEST_CASE("apply_subst sort mismatch rejected") {
  Substitution sub;
  CHECK_THROWS_AS(sub.bind(Var{"x", iota}, Term::variable(Var{"X", kappa})),
                  std::invalid_argument);
}

TEST_CASE("alpha_eq") {
  Prop a = Prop::forall(Var{"x", iota}, Prop::atom(nat, {tv("x")}));
  Prop b = Prop::forall(Var{"y", iota}, Prop::atom(nat, {tv("y")}));
  Prop c = Prop::forall(Var{"x", iota}, Prop::atom(nat, {c0()}));
  CHECK(alpha_eq(a, b));
  CHECK_FALSE(alpha_eq(a, c));

  // Comprehension identity is alpha of (bound, params, body).
  ComprehensionSymbol cz = comp_of("z", Prop::atom(nat, {tv("z")}));
  ComprehensionSymbol cw = comp_of("w", Prop::atom(nat, {tv("w")}));
  Prop pa = Prop::atom(eps, {tv("x"), Term::app(TermHead{cz}, {})});
  Prop pb = Prop::atom(eps, {tv("x"), Term::app(TermHead{cw}, {})});
  CHECK(alpha_eq(pa, pb));
  CHECK(alpha_hash(pa) == alpha_hash(pb));

  ComprehensionSymbol c0sym = comp_of("w", Prop::atom(nat, {c0()}));
  Prop pc = Prop::atom(eps, {tv("x"), Term::app(TermHead{c0sym}, {})});
  CHECK_FALSE(alpha_eq(pa, pc));
}

TEST_CASE("alpha_hash consistent with alpha_eq on renamed quantifiers") {
  Prop a = Prop::exists(Var{"x", iota},
                        Prop::conj(Prop::atom(nat, {tv("x")}), Prop::atom(eq, {tv("x"), c0()})));
  Prop b = Prop::exists(Var{"u", iota},
                        Prop::conj(Prop::atom(nat, {tv("u")}), Prop::atom(eq, {tv("u"), c0()})));
  CHECK(alpha_eq(a, b));
  CHECK(alpha_hash(a) == alpha_hash(b));
}

TEST_CASE("check_sorting") {
  Signature sig = mini_sig();
  CHECK(check_sorting(sig, s(c0())).ok);

  Term bad = Term::app(succ, {Term::variable(Var{"X", kappa})});
  SortCheck r = check_sorting(sig, bad);
  CHECK_FALSE(r.ok);
  CHECK(r.error.find("sort mismatch") != std::string::npos);

  Prop bad_eps = Prop::atom(eps, {c0(), tv("x")});
  CHECK_FALSE(check_sorting(sig, bad_eps).ok);

  Prop unknown = Prop::atom(PredicateSymbol{"Mystery", {iota}}, {c0()});
  SortCheck u = check_sorting(sig, unknown);
  CHECK_FALSE(u.ok);
  CHECK(u.error.find("Mystery") != std::string::npos);
}

TEST_CASE("identity substitution is alpha-identity") {
  testgen::GenConfig cfg{mini_sig(),
                         {Var{"x", iota}, Var{"y", iota}},
                         {Var{"X", kappa}},
                         true,
                         3};
  testgen::Gen gen(cfg, 0xD0);
  Substitution id;
  for (int i = 0; i < 200; ++i) {
    Prop p = gen.prop(3);
    CHECK(alpha_eq(apply_subst(id, p), p));
  }
}

TEST_CASE("substitution composition law") {
  // apply(s, apply(t, x)) == apply(compose, x) where compose maps v to
  // apply(s, t(v)) and falls back to s elsewhere.
  testgen::GenConfig cfg{mini_sig(),
                         {Var{"x", iota}, Var{"y", iota}, Var{"v", iota}},
                         {Var{"X", kappa}},
                         true,
                         3};
  testgen::Gen gen(cfg, 0xC0FFEE);
  for (int i = 0; i < 200; ++i) {
    Prop p = gen.prop(3);
    Substitution t;
    t.bind(Var{"x", iota}, Term::app(plus, {tv("v"), c0()}));
    Substitution su;
    su.bind(Var{"v", iota}, s(tv("y")));

    Substitution composed;
    for (const auto& [v, rep] : t.entries()) composed.bind(v, apply_subst(su, rep));
    for (const auto& [v, rep] : su.entries())
      if (!t.contains(v)) composed.bind(v, rep);

    CHECK(alpha_eq(apply_subst(su, apply_subst(t, p)), apply_subst(composed, p)));
  }
}

TEST_CASE("free variables after substitution") {
  testgen::GenConfig cfg{mini_sig(),
                         {Var{"x", iota}, Var{"y", iota}},
                         {Var{"X", kappa}},
                         true,
                         3};
  testgen::Gen gen(cfg, 42);
  Var v{"x", iota};
  Term rep = Term::app(plus, {tv("y"), s(c0())});
  Substitution sub;
  sub.bind(v, rep);
  for (int i = 0; i < 200; ++i) {
    Prop p = gen.prop(3);
    VarSet before = free_vars(p);
    before.erase(v);
    for (const Var& w : free_vars(rep)) before.insert(w);
    for (const Var& w : free_vars(apply_subst(sub, p))) CHECK(before.count(w) == 1);
  }
}

TEST_CASE("generated propositions are well-sorted") {
  Signature sig = mini_sig();
  testgen::GenConfig cfg{sig, {Var{"x", iota}}, {Var{"X", kappa}}, true, 3};
  testgen::Gen gen(cfg, 7);
  for (int i = 0; i < 100; ++i) {
    Prop p = gen.prop(3);
    SortCheck r = check_sorting(sig, p);
    INFO(to_text(p), " : ", r.error);
    CHECK(r.ok);
  }
}
