#pragma once

// Exhaustive enumeration of small proof terms, and an independent
// all-positions reducer. Test oracles only: the enumeration feeds the
// brute-force confluence check, the reducer is written without reference to
// the library's reduce_step.

#include <functional>
#include <map>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "dm/arith.hpp"
#include "dm/proofterm.hpp"

namespace dm::testsupport {

// All proof terms with exactly `size` proof constructors, over two free
// hypotheses a and b, the closed term 0 for term arguments, and canonical
// binder names (so alpha-duplicates are not enumerated twice). Sizes up to
// the memo limit are materialized once; larger sizes stream through a
// callback because the top size runs into the millions.
class ProofEnumerator {
 public:
  static constexpr int kMemoLimit = 5;

  std::vector<Proof> of_size_up_to(int max_size) {
    std::vector<Proof> out;
    for (int s = 1; s <= max_size; ++s)
      for_each(s, 2, 0, [&out](const Proof& p) { out.push_back(p); });
    return out;
  }

  template <typename Fn>
  void for_each_up_to(int max_size, Fn&& fn) {
    for (int s = 1; s <= max_size; ++s) for_each(s, 2, 0, fn);
  }

  template <typename Fn>
  void for_each(int size, int pdepth, int tdepth, Fn&& fn) {
    if (size <= 0) return;
    if (size <= kMemoLimit) {
      for (const Proof& p : memoized(size, pdepth, tdepth)) fn(p);
      return;
    }
    generate(size, pdepth, tdepth, fn);
  }

 private:
  const std::vector<Proof>& memoized(int size, int pdepth, int tdepth) {
    auto key = std::tuple{size, pdepth, tdepth};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<Proof> out;
    generate(size, pdepth, tdepth, [&out](const Proof& p) { out.push_back(p); });
    return memo_.emplace(key, std::move(out)).first->second;
  }

  template <typename Fn>
  void generate(int size, int pdepth, int tdepth, Fn&& fn) {
    if (size == 1) {
      fn(Proof::top_intro());
      for (const std::string& v : pvars(pdepth)) fn(Proof::var(v));
      return;
    }
    std::vector<Term> ts = terms(tdepth);
    // Unary forms.
    for_each(size - 1, pdepth, tdepth, [&](const Proof& inner) {
      fn(Proof::bot_elim(inner));
      fn(Proof::fst(inner));
      fn(Proof::snd(inner));
      fn(Proof::inl(inner));
      fn(Proof::inr(inner));
      for (const Term& t : ts) {
        fn(Proof::tapp(inner, t));
        fn(Proof::pack(t, inner));
      }
    });
    // One new proof binder.
    for_each(size - 1, pdepth + 1, tdepth,
             [&](const Proof& body) { fn(Proof::imp_intro(pvar(pdepth), std::nullopt, body)); });
    // One new term binder.
    for_each(size - 1, pdepth, tdepth + 1,
             [&](const Proof& body) { fn(Proof::all_intro(tvar(tdepth), body)); });
    // Binary forms.
    for (int ls = 1; ls <= size - 2; ++ls) {
      int rs = size - 1 - ls;
      for_each(ls, pdepth, tdepth, [&](const Proof& l) {
        for_each(rs, pdepth, tdepth, [&](const Proof& r) {
          fn(Proof::pair(l, r));
          fn(Proof::app(l, r));
        });
        for_each(rs, pdepth + 1, tdepth + 1, [&](const Proof& body) {
          fn(Proof::unpack(l, tvar(tdepth), pvar(pdepth), body));
        });
      });
    }
    // Case with its two binders.
    for (int s1 = 1; s1 <= size - 3; ++s1) {
      for (int s2 = 1; s2 <= size - 2 - s1; ++s2) {
        int s3 = size - 1 - s1 - s2;
        for_each(s1, pdepth, tdepth, [&](const Proof& scrut) {
          for_each(s2, pdepth + 1, tdepth, [&](const Proof& l) {
            for_each(s3, pdepth + 1, tdepth, [&](const Proof& r) {
              fn(Proof::case_of(scrut, pvar(pdepth), l, pvar(pdepth), r));
            });
          });
        });
      }
    }
  }

  static std::string pvar(int i) { return "h" + std::to_string(i); }
  static Var tvar(int i) { return Var{"t" + std::to_string(i), iota_sort()}; }

  static std::vector<std::string> pvars(int pdepth) {
    std::vector<std::string> vs = {"a", "b"};
    for (int i = 2; i < pdepth; ++i) vs.push_back(pvar(i));
    return vs;
  }

  std::vector<Term> terms(int tdepth) {
    std::vector<Term> ts = {numeral(0)};
    for (int i = 0; i < tdepth; ++i) ts.push_back(Term::variable(tvar(i)));
    return ts;
  }

  std::map<std::tuple<int, int, int>, std::vector<Proof>> memo_;
};

// Independent all-positions single-step reducer (the oracle side of the
// confluence check). Mirrors the seven contractions directly.
inline std::vector<Proof> all_proof_reducts(const Proof& p) {
  std::vector<Proof> out;
  switch (p.kind()) {
    case Proof::Kind::Fst:
      if (p.inner().kind() == Proof::Kind::Pair) out.push_back(p.inner().lhs());
      break;
    case Proof::Kind::Snd:
      if (p.inner().kind() == Proof::Kind::Pair) out.push_back(p.inner().rhs());
      break;
    case Proof::Kind::Case:
      if (p.scrutinee().kind() == Proof::Kind::Inl)
        out.push_back(subst_proof(p.left(), p.left_hyp(), p.scrutinee().inner()));
      else if (p.scrutinee().kind() == Proof::Kind::Inr)
        out.push_back(subst_proof(p.right(), p.right_hyp(), p.scrutinee().inner()));
      break;
    case Proof::Kind::App:
      if (p.fn().kind() == Proof::Kind::ImpIntro)
        out.push_back(subst_proof(p.fn().body(), p.fn().hyp(), p.arg()));
      break;
    case Proof::Kind::TApp:
      if (p.fn().kind() == Proof::Kind::AllIntro)
        out.push_back(subst_term_in_proof(p.fn().body(), p.fn().binder(), p.targ()));
      break;
    case Proof::Kind::Unpack:
      if (p.scrutinee().kind() == Proof::Kind::Pack)
        out.push_back(subst_term_in_proof(
            subst_proof(p.body(), p.hyp(), p.scrutinee().inner()), p.binder(),
            p.scrutinee().witness()));
      break;
    default:
      break;
  }
  auto child = [&out](const Proof& c, const std::function<Proof(Proof)>& rebuild) {
    for (const Proof& r : all_proof_reducts(c)) out.push_back(rebuild(r));
  };
  switch (p.kind()) {
    case Proof::Kind::Var:
    case Proof::Kind::TopIntro:
      break;
    case Proof::Kind::BotElim:
      child(p.inner(), [&](Proof r) { return Proof::bot_elim(std::move(r), p.annotation()); });
      break;
    case Proof::Kind::Pair:
      child(p.lhs(), [&](Proof r) { return Proof::pair(std::move(r), p.rhs()); });
      child(p.rhs(), [&](Proof r) { return Proof::pair(p.lhs(), std::move(r)); });
      break;
    case Proof::Kind::Fst:
      child(p.inner(), [](Proof r) { return Proof::fst(std::move(r)); });
      break;
    case Proof::Kind::Snd:
      child(p.inner(), [](Proof r) { return Proof::snd(std::move(r)); });
      break;
    case Proof::Kind::Inl:
      child(p.inner(), [&](Proof r) { return Proof::inl(std::move(r), p.annotation()); });
      break;
    case Proof::Kind::Inr:
      child(p.inner(), [&](Proof r) { return Proof::inr(std::move(r), p.annotation()); });
      break;
    case Proof::Kind::Case:
      child(p.scrutinee(), [&](Proof r) {
        return Proof::case_of(std::move(r), p.left_hyp(), p.left(), p.right_hyp(), p.right());
      });
      child(p.left(), [&](Proof r) {
        return Proof::case_of(p.scrutinee(), p.left_hyp(), std::move(r), p.right_hyp(), p.right());
      });
      child(p.right(), [&](Proof r) {
        return Proof::case_of(p.scrutinee(), p.left_hyp(), p.left(), p.right_hyp(), std::move(r));
      });
      break;
    case Proof::Kind::ImpIntro:
      child(p.body(), [&](Proof r) { return Proof::imp_intro(p.hyp(), p.annotation(), std::move(r)); });
      break;
    case Proof::Kind::App:
      child(p.fn(), [&](Proof r) { return Proof::app(std::move(r), p.arg()); });
      child(p.arg(), [&](Proof r) { return Proof::app(p.fn(), std::move(r)); });
      break;
    case Proof::Kind::AllIntro:
      child(p.body(), [&](Proof r) { return Proof::all_intro(p.binder(), std::move(r)); });
      break;
    case Proof::Kind::TApp:
      child(p.fn(), [&](Proof r) { return Proof::tapp(std::move(r), p.targ()); });
      break;
    case Proof::Kind::Pack:
      child(p.inner(), [&](Proof r) { return Proof::pack(p.witness(), std::move(r), p.annotation()); });
      break;
    case Proof::Kind::Unpack:
      child(p.scrutinee(), [&](Proof r) { return Proof::unpack(std::move(r), p.binder(), p.hyp(), p.body()); });
      child(p.body(), [&](Proof r) { return Proof::unpack(p.scrutinee(), p.binder(), p.hyp(), std::move(r)); });
      break;
  }
  return out;
}

// Explores every reduction sequence of length <= max_steps and returns the
// distinct normal forms reached (up to alpha).
inline std::vector<Proof> reachable_normal_forms(const Proof& p, int max_steps) {
  std::vector<Proof> normals;
  std::unordered_map<std::size_t, std::vector<Proof>> seen;
  std::function<void(const Proof&, int)> go = [&](const Proof& cur, int left) {
    std::size_t h = alpha_hash(cur);
    auto& bucket = seen[h];
    for (const Proof& q : bucket)
      if (alpha_eq(q, cur)) return;
    bucket.push_back(cur);
    std::vector<Proof> next = all_proof_reducts(cur);
    if (next.empty()) {
      for (const Proof& q : normals)
        if (alpha_eq(q, cur)) return;
      normals.push_back(cur);
      return;
    }
    if (left == 0) return;  // truncated path; "when they terminate" only
    for (const Proof& q : next) go(q, left - 1);
  };
  go(p, max_steps);
  return normals;
}

}  // namespace dm::testsupport
