#pragma once

// Seeded random generators for well-sorted terms and propositions, shared by
// the property tests. Deterministic across runs for a fixed seed.

#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dm/syntax.hpp"

namespace dm::testgen {

struct GenConfig {
  Signature sig;
  std::vector<Var> iota_vars;   // candidate free variables of sort iota
  std::vector<Var> class_vars;  // candidate free variables of sort kappa
  bool allow_comprehensions = true;
  int max_depth = 3;
};

class Gen {
 public:
  Gen(GenConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) {}

  Term term(const Sort& sort, int depth) {
    if (sort == class_sort(1)) return class_term(depth);
    if (depth <= 0 || pick(4) == 0) return leaf(sort);
    std::vector<const FunctionSymbol*> fits;
    for (const FunctionSymbol& f : cfg_.sig.functions)
      if (f.result_sort == sort && !f.arg_sorts.empty()) fits.push_back(&f);
    if (fits.empty()) return leaf(sort);
    const FunctionSymbol* f = fits[pick(fits.size())];
    std::vector<Term> args;
    for (const Sort& s : f->arg_sorts) args.push_back(term(s, depth - 1));
    return Term::app(*f, std::move(args));
  }

  Prop prop(int depth) {
    int roll = depth <= 0 ? pick(2) : pick(8);
    switch (roll) {
      case 0:
      case 1:
        return atom(depth);
      case 2:
        return Prop::conj(prop(depth - 1), prop(depth - 1));
      case 3:
        return Prop::disj(prop(depth - 1), prop(depth - 1));
      case 4:
        return Prop::implies(prop(depth - 1), prop(depth - 1));
      case 5:
        return pick(8) == 0 ? Prop::top() : atom(depth);
      case 6: {
        Var v{"q" + std::to_string(counter_++), iota_sort()};
        bound_iota_.push_back(v);
        Prop body = prop(depth - 1);
        bound_iota_.pop_back();
        return Prop::quant(pick(2) ? Prop::Kind::Forall : Prop::Kind::Exists, v, body);
      }
      default: {
        Var v{"Q" + std::to_string(counter_++), class_sort(1)};
        bound_class_.push_back(v);
        Prop body = prop(depth - 1);
        bound_class_.pop_back();
        return Prop::forall(v, body);
      }
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  Prop atom(int depth) {
    const auto& preds = cfg_.sig.predicates;
    if (preds.empty()) return Prop::top();
    const PredicateSymbol& p = preds[pick(preds.size())];
    std::vector<Term> args;
    for (const Sort& s : p.arg_sorts) args.push_back(term(s, depth - 1));
    return Prop::atom(p, std::move(args));
  }

  Term leaf(const Sort& sort) {
    if (sort == iota_sort()) {
      std::vector<Var> pool = cfg_.iota_vars;
      pool.insert(pool.end(), bound_iota_.begin(), bound_iota_.end());
      std::vector<const FunctionSymbol*> consts;
      for (const FunctionSymbol& f : cfg_.sig.functions)
        if (f.result_sort == sort && f.arg_sorts.empty()) consts.push_back(&f);
      std::size_t total = pool.size() + consts.size();
      if (total == 0) throw std::logic_error("gen: no iota leaves available");
      std::size_t i = pick(total);
      if (i < pool.size()) return Term::variable(pool[i]);
      return Term::constant(*consts[i - pool.size()]);
    }
    return class_term(0);
  }

  Term class_term(int depth) {
    std::vector<Var> pool = cfg_.class_vars;
    pool.insert(pool.end(), bound_class_.begin(), bound_class_.end());
    if (!cfg_.allow_comprehensions || depth <= 0 || pick(3) != 0) {
      if (pool.empty()) return comprehension(0);
      return Term::variable(pool[pick(pool.size())]);
    }
    return comprehension(depth - 1);
  }

  Term comprehension(int depth) {
    // The body may mention only the comprehension's own binder.
    Var z{"z" + std::to_string(counter_++), iota_sort()};
    std::vector<Var> saved_iota = std::exchange(bound_iota_, {z});
    std::vector<Var> saved_class = std::exchange(bound_class_, {});
    std::vector<Var> saved_cfg_iota = std::exchange(cfg_.iota_vars, {});
    std::vector<Var> saved_cfg_class = std::exchange(cfg_.class_vars, {});
    Prop body = prop(depth);
    bound_iota_ = std::move(saved_iota);
    bound_class_ = std::move(saved_class);
    cfg_.iota_vars = std::move(saved_cfg_iota);
    cfg_.class_vars = std::move(saved_cfg_class);
    ComprehensionSymbol c{{z}, {}, std::make_shared<Prop>(std::move(body))};
    return Term::app(TermHead{std::move(c)}, {});
  }

  GenConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<Var> bound_iota_;
  std::vector<Var> bound_class_;
  int counter_ = 0;
};

}  // namespace dm::testgen
