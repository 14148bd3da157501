#include "dm/rewrite.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace dm {

namespace {

constexpr std::size_t kSeenWindow = 4096;    // forms compared per side while normalizing
constexpr std::size_t kSearchNodeCap = 50000;  // bidirectional search size cap

struct AlphaTermKey {
  Term t;
  std::size_t h;
  explicit AlphaTermKey(Term v) : t(std::move(v)), h(alpha_hash(t)) {}
};
struct AlphaTermHash {
  std::size_t operator()(const AlphaTermKey& k) const { return k.h; }
};
struct AlphaTermEq {
  bool operator()(const AlphaTermKey& a, const AlphaTermKey& b) const {
    return a.h == b.h && alpha_eq(a.t, b.t);
  }
};

struct AlphaPropKey {
  Prop p;
  std::size_t h;
  explicit AlphaPropKey(Prop v) : p(std::move(v)), h(alpha_hash(p)) {}
};
struct AlphaPropHash {
  std::size_t operator()(const AlphaPropKey& k) const { return k.h; }
};
struct AlphaPropEq {
  bool operator()(const AlphaPropKey& a, const AlphaPropKey& b) const {
    return a.h == b.h && alpha_eq(a.p, b.p);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Size accounting: normalization of productive systems (the induction rule
// unfolds forever) is stopped by a growth cap as well as by fuel.

namespace {

constexpr std::size_t kTermGrowthCap = 100000;
constexpr std::size_t kPropGrowthCap = 20000;

void count_nodes_rec(const Term& t, std::size_t cap, std::size_t& n) {
  if (n > cap) return;
  ++n;
  if (t.is_app())
    for (const Term& a : t.args()) count_nodes_rec(a, cap, n);
}

void count_nodes_rec(const Prop& p, std::size_t cap, std::size_t& n) {
  if (n > cap) return;
  ++n;
  switch (p.kind()) {
    case Prop::Kind::Atom:
      for (const Term& a : p.args()) count_nodes_rec(a, cap, n);
      return;
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies:
      count_nodes_rec(p.lhs(), cap, n);
      count_nodes_rec(p.rhs(), cap, n);
      return;
    case Prop::Kind::Forall:
    case Prop::Kind::Exists:
      count_nodes_rec(p.body(), cap, n);
      return;
  }
}

bool term_over_growth_cap(const Term& t) {
  std::size_t n = 0;
  count_nodes_rec(t, kTermGrowthCap, n);
  return n > kTermGrowthCap;
}

bool prop_over_growth_cap(const Prop& p) {
  std::size_t n = 0;
  count_nodes_rec(p, kPropGrowthCap, n);
  return n > kPropGrowthCap;
}

}  // namespace


std::string to_text(const Path& p) {
  std::string s = "root";
  for (int i : p) {
    s += '.';
    s += std::to_string(i);
  }
  return s;
}

// ---------------------------------------------------------------------------
// System validation

std::vector<std::string> RewriteSystem::validate() const {
  std::vector<std::string> problems;
  auto check_term = [&](const Term& t, const std::string& where) {
    SortCheck c = check_sorting(sig, t);
    if (!c.ok) problems.push_back(where + ": " + c.error);
  };
  auto check_prop = [&](const Prop& p, const std::string& where) {
    SortCheck c = check_sorting(sig, p);
    if (!c.ok) problems.push_back(where + ": " + c.error);
  };
  for (const TermRule& r : term_rules) {
    if (r.lhs.is_var()) problems.push_back("rule " + r.name + ": left-hand side is a variable");
    if (!r.lhs.empty() && !r.rhs.empty() && r.lhs.sort() != r.rhs.sort())
      problems.push_back("rule " + r.name + ": sides have different sorts");
    VarSet lv = free_vars(r.lhs);
    for (const Var& v : free_vars(r.rhs))
      if (!lv.count(v))
        problems.push_back("rule " + r.name + ": right-hand side introduces " + v.name);
    check_term(r.lhs, "rule " + r.name);
    check_term(r.rhs, "rule " + r.name);
  }
  for (const PropRule& r : prop_rules) {
    if (r.lhs.empty() || !r.lhs.is_atom())
      problems.push_back("prop-rule " + r.name + ": left-hand side is not an atom");
    else {
      VarSet lv = free_vars(r.lhs);
      for (const Var& v : free_vars(r.rhs))
        if (!lv.count(v))
          problems.push_back("prop-rule " + r.name + ": right-hand side introduces " + v.name);
    }
    check_prop(r.lhs, "prop-rule " + r.name);
    check_prop(r.rhs, "prop-rule " + r.name);
  }
  for (const Equation& e : equations) {
    if (!e.lhs.empty() && !e.rhs.empty() && e.lhs.sort() != e.rhs.sort())
      problems.push_back("equation " + e.name + ": sides have different sorts");
    check_term(e.lhs, "equation " + e.name);
    check_term(e.rhs, "equation " + e.name);
    if (e.orientation == Orientation::LeftToRight) {
      if (e.lhs.is_var())
        problems.push_back("equation " + e.name + ": cannot orient ltr, left side is a variable");
      VarSet lv = free_vars(e.lhs);
      for (const Var& v : free_vars(e.rhs))
        if (!lv.count(v))
          problems.push_back("equation " + e.name + ": cannot orient ltr, right side introduces " +
                             v.name);
    } else if (e.orientation == Orientation::RightToLeft) {
      if (e.rhs.is_var())
        problems.push_back("equation " + e.name + ": cannot orient rtl, right side is a variable");
      VarSet rv = free_vars(e.rhs);
      for (const Var& v : free_vars(e.lhs))
        if (!rv.count(v))
          problems.push_back("equation " + e.name + ": cannot orient rtl, left side introduces " +
                             v.name);
    }
  }
  return problems;
}

std::vector<TermRule> RewriteSystem::oriented_term_rules() const {
  std::vector<TermRule> out = term_rules;
  for (const Equation& e : equations) {
    if (e.orientation == Orientation::LeftToRight)
      out.push_back(TermRule{e.name, e.lhs, e.rhs});
    else if (e.orientation == Orientation::RightToLeft)
      out.push_back(TermRule{e.name, e.rhs, e.lhs});
  }
  return out;
}

bool RewriteSystem::has_unoriented_equations() const {
  for (const Equation& e : equations)
    if (e.orientation == Orientation::Unoriented) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Matching

bool match_term(const Term& pattern, const Term& subject, Substitution& sub) {
  if (pattern.is_var()) {
    const Var& v = pattern.var();
    if (const Term* bound = sub.lookup(v)) return alpha_eq(*bound, subject);
    if (subject.empty() || subject.sort() != v.sort) return false;
    sub.bind(v, subject);
    return true;
  }
  if (!subject.is_app()) return false;
  if (!head_eq(pattern.head(), subject.head())) return false;
  const auto& pa = pattern.args();
  const auto& sa = subject.args();
  if (pa.size() != sa.size()) return false;
  for (std::size_t i = 0; i < pa.size(); ++i)
    if (!match_term(pa[i], sa[i], sub)) return false;
  return true;
}

bool match_atom(const Prop& pattern, const Prop& subject, Substitution& sub) {
  if (!pattern.is_atom() || !subject.is_atom()) return false;
  if (!(pattern.pred() == subject.pred())) return false;
  const auto& pa = pattern.args();
  const auto& sa = subject.args();
  if (pa.size() != sa.size()) return false;
  for (std::size_t i = 0; i < pa.size(); ++i)
    if (!match_term(pa[i], sa[i], sub)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Comprehension schema

bool is_membership_pred(const PredicateSymbol& p) {
  std::size_t n;
  if (p.name == "eps")
    n = 1;
  else if (p.name.rfind("eps_", 0) == 0) {
    try {
      n = std::stoul(p.name.substr(4));
    } catch (...) {
      return false;
    }
    if (n < 2) return false;
  } else {
    return false;
  }
  if (p.arg_sorts.size() != n + 1) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (p.arg_sorts[i] != iota_sort()) return false;
  return p.arg_sorts[n] == class_sort(n);
}

PropRule schema_rule_for(const PredicateSymbol& pred, const ComprehensionSymbol& c) {
  std::vector<Term> lhs_args;
  lhs_args.reserve(c.bound.size() + 1);
  for (const Var& v : c.bound) lhs_args.push_back(Term::variable(v));
  std::vector<Term> head_args;
  head_args.reserve(c.params.size());
  for (const Var& v : c.params) head_args.push_back(Term::variable(v));
  lhs_args.push_back(Term::app(TermHead{c}, std::move(head_args)));
  return PropRule{"comprehension", Prop::atom(pred, std::move(lhs_args)), *c.body};
}

namespace {

// The schema instance that fires on this atom, if any: the atom must be a
// membership atom whose class argument is an application of a comprehension
// symbol of the right class arity.
std::optional<PropRule> schema_instance(const RewriteSystem& r, const Prop& atom) {
  if (!r.comprehension_schema || !atom.is_atom()) return std::nullopt;
  if (!is_membership_pred(atom.pred())) return std::nullopt;
  const Term& cls = atom.args().back();
  if (!cls.is_app()) return std::nullopt;
  const auto* c = std::get_if<ComprehensionSymbol>(&cls.head());
  if (!c) return std::nullopt;
  if (c->bound.size() + 1 != atom.args().size()) return std::nullopt;
  return schema_rule_for(atom.pred(), *c);
}

// ---------------------------------------------------------------------------
// Term-level stepping

std::optional<std::pair<Term, RewriteStep>> rule_at_root(const std::vector<TermRule>& rules,
                                                         const Term& t, bool backwards_tag) {
  for (const TermRule& r : rules) {
    Substitution sub;
    if (match_term(r.lhs, t, sub))
      return std::make_pair(apply_subst(sub, r.rhs), RewriteStep{r.name, backwards_tag, {}});
  }
  return std::nullopt;
}

std::optional<std::pair<Term, RewriteStep>> term_step_with(const std::vector<TermRule>& rules,
                                                           const Term& t) {
  if (auto hit = rule_at_root(rules, t, false)) return hit;
  if (!t.is_app()) return std::nullopt;
  const auto& args = t.args();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (auto inner = term_step_with(rules, args[i])) {
      std::vector<Term> copy = args;
      copy[i] = std::move(inner->first);
      inner->second.at.insert(inner->second.at.begin(), static_cast<int>(i));
      return std::make_pair(Term::app(t.head(), std::move(copy)), std::move(inner->second));
    }
  }
  return std::nullopt;
}

// Collects one-step rewrites of `t` at all positions, where `rebuild`
// reconstructs the whole term from a replacement for `t`.
void collect_steps(const std::vector<TermRule>& rules, const Term& t, const Path& here,
                   const std::function<Term(const Term&)>& rebuild, bool backwards_tag,
                   std::vector<std::pair<Term, RewriteStep>>& out) {
  for (const TermRule& r : rules) {
    Substitution sub;
    if (match_term(r.lhs, t, sub))
      out.emplace_back(rebuild(apply_subst(sub, r.rhs)), RewriteStep{r.name, backwards_tag, here});
  }
  if (!t.is_app()) return;
  const auto& args = t.args();
  for (std::size_t i = 0; i < args.size(); ++i) {
    Path child = here;
    child.push_back(static_cast<int>(i));
    auto rebuild_child = [&, i](const Term& repl) {
      std::vector<Term> copy = args;
      copy[i] = repl;
      return rebuild(Term::app(t.head(), std::move(copy)));
    };
    collect_steps(rules, args[i], child, rebuild_child, backwards_tag, out);
  }
}

std::vector<TermRule> backward_rules(const RewriteSystem& r) {
  // Rules and equations read right-to-left; uses that would introduce
  // variables are dropped.
  std::vector<TermRule> out;
  auto add = [&out](const std::string& name, const Term& l, const Term& r2) {
    VarSet rv = free_vars(r2);
    for (const Var& v : free_vars(l))
      if (!rv.count(v)) return;
    out.push_back(TermRule{name, r2, l});
  };
  for (const TermRule& tr : r.term_rules) add(tr.name, tr.lhs, tr.rhs);
  for (const Equation& e : r.equations) {
    switch (e.orientation) {
      case Orientation::LeftToRight:
        add(e.name, e.lhs, e.rhs);
        break;
      case Orientation::RightToLeft: {
        // Forward direction is rhs->lhs; backward is lhs->rhs.
        VarSet lv = free_vars(e.lhs);
        bool ok = true;
        for (const Var& v : free_vars(e.rhs))
          if (!lv.count(v)) ok = false;
        if (ok) out.push_back(TermRule{e.name, e.lhs, e.rhs});
        break;
      }
      case Orientation::Unoriented:
        add(e.name, e.lhs, e.rhs);
        break;
    }
  }
  return out;
}

std::vector<TermRule> unoriented_forward_rules(const RewriteSystem& r) {
  std::vector<TermRule> out;
  for (const Equation& e : r.equations)
    if (e.orientation == Orientation::Unoriented) out.push_back(TermRule{e.name, e.lhs, e.rhs});
  return out;
}

std::vector<TermRule> unoriented_backward_rules(const RewriteSystem& r) {
  std::vector<TermRule> out;
  for (const Equation& e : r.equations) {
    if (e.orientation != Orientation::Unoriented) continue;
    VarSet rv = free_vars(e.rhs);
    bool ok = true;
    for (const Var& v : free_vars(e.lhs))
      if (!rv.count(v)) ok = false;
    if (ok) out.push_back(TermRule{e.name, e.rhs, e.lhs});
  }
  return out;
}

}  // namespace

std::optional<std::pair<Term, RewriteStep>> term_step(const RewriteSystem& r, const Term& t) {
  return term_step_with(r.oriented_term_rules(), t);
}

std::vector<std::pair<Term, RewriteStep>> all_term_steps(const RewriteSystem& r, const Term& t) {
  std::vector<std::pair<Term, RewriteStep>> out;
  auto identity = [](const Term& x) { return x; };
  collect_steps(r.oriented_term_rules(), t, {}, identity, false, out);
  return out;
}

std::vector<std::pair<Term, RewriteStep>> term_equational_neighbors(const RewriteSystem& r,
                                                                    const Term& t) {
  std::vector<std::pair<Term, RewriteStep>> out;
  auto identity = [](const Term& x) { return x; };
  collect_steps(r.oriented_term_rules(), t, {}, identity, false, out);
  collect_steps(unoriented_forward_rules(r), t, {}, identity, false, out);
  collect_steps(backward_rules(r), t, {}, identity, true, out);
  return out;
}

Normalized<Term> normalize_term(const RewriteSystem& r, const Term& t, const Limits& lim,
                                bool want_trace) {
  std::vector<TermRule> rules = r.oriented_term_rules();
  Normalized<Term> res{t, false, 0, {}};
  while (res.steps < lim.fuel) {
    if (res.steps % 32 == 31 && term_over_growth_cap(res.value)) return res;
    auto next = term_step_with(rules, res.value);
    if (!next) {
      res.normal = true;
      return res;
    }
    res.value = std::move(next->first);
    if (want_trace) res.trace.push_back(std::move(next->second));
    ++res.steps;
  }
  res.normal = !term_step_with(rules, res.value).has_value();
  return res;
}

// ---------------------------------------------------------------------------
// Proposition-level stepping

namespace {

std::optional<std::pair<Prop, RewriteStep>> atom_rule_step(const RewriteSystem& r,
                                                           const Prop& atom) {
  for (const PropRule& pr : r.prop_rules) {
    Substitution sub;
    if (match_atom(pr.lhs, atom, sub))
      return std::make_pair(apply_subst(sub, pr.rhs), RewriteStep{pr.name, false, {}});
  }
  if (auto inst = schema_instance(r, atom)) {
    Substitution sub;
    if (match_atom(inst->lhs, atom, sub))
      return std::make_pair(apply_subst(sub, inst->rhs), RewriteStep{"comprehension", false, {}});
  }
  return std::nullopt;
}

std::optional<std::pair<Prop, RewriteStep>> prop_step_impl(const RewriteSystem& r,
                                                           const std::vector<TermRule>& term_rules,
                                                           const Prop& p) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      if (auto hit = atom_rule_step(r, p)) return hit;
      const auto& args = p.args();
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (auto inner = term_step_with(term_rules, args[i])) {
          std::vector<Term> copy = args;
          copy[i] = std::move(inner->first);
          inner->second.at.insert(inner->second.at.begin(), static_cast<int>(i));
          return std::make_pair(Prop::atom(p.pred(), std::move(copy)), std::move(inner->second));
        }
      }
      return std::nullopt;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return std::nullopt;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies: {
      if (auto l = prop_step_impl(r, term_rules, p.lhs())) {
        l->second.at.insert(l->second.at.begin(), 0);
        return std::make_pair(Prop::connective(p.kind(), std::move(l->first), p.rhs()),
                              std::move(l->second));
      }
      if (auto rr = prop_step_impl(r, term_rules, p.rhs())) {
        rr->second.at.insert(rr->second.at.begin(), 1);
        return std::make_pair(Prop::connective(p.kind(), p.lhs(), std::move(rr->first)),
                              std::move(rr->second));
      }
      return std::nullopt;
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      if (auto b = prop_step_impl(r, term_rules, p.body())) {
        b->second.at.insert(b->second.at.begin(), 0);
        return std::make_pair(Prop::quant(p.kind(), p.binder(), std::move(b->first)),
                              std::move(b->second));
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<Prop, RewriteStep>> prop_step(const RewriteSystem& r, const Prop& p) {
  return prop_step_impl(r, r.oriented_term_rules(), p);
}

Normalized<Prop> normalize_prop(const RewriteSystem& r, const Prop& p, const Limits& lim,
                                bool want_trace) {
  std::vector<TermRule> rules = r.oriented_term_rules();
  Normalized<Prop> res{p, false, 0, {}};
  while (res.steps < lim.fuel) {
    if (res.steps % 32 == 31 && prop_over_growth_cap(res.value)) return res;
    auto next = prop_step_impl(r, rules, res.value);
    if (!next) {
      res.normal = true;
      return res;
    }
    res.value = std::move(next->first);
    if (want_trace) res.trace.push_back(std::move(next->second));
    ++res.steps;
  }
  res.normal = !prop_step_impl(r, rules, res.value).has_value();
  return res;
}

// ---------------------------------------------------------------------------
// Replaying recorded steps

namespace {

std::optional<Term> apply_term_rule_at(const TermRule& rule, const Term& t, const Path& path,
                                       std::size_t idx) {
  if (idx == path.size()) {
    Substitution sub;
    if (!match_term(rule.lhs, t, sub)) return std::nullopt;
    return apply_subst(sub, rule.rhs);
  }
  if (!t.is_app()) return std::nullopt;
  std::size_t i = static_cast<std::size_t>(path[idx]);
  if (i >= t.args().size()) return std::nullopt;
  auto inner = apply_term_rule_at(rule, t.args()[i], path, idx + 1);
  if (!inner) return std::nullopt;
  std::vector<Term> copy = t.args();
  copy[i] = std::move(*inner);
  return Term::app(t.head(), std::move(copy));
}

std::vector<TermRule> candidate_term_rules(const RewriteSystem& r, const RewriteStep& s) {
  std::vector<TermRule> cands;
  for (const TermRule& tr : r.term_rules)
    if (tr.name == s.rule) cands.push_back(s.backwards ? TermRule{tr.name, tr.rhs, tr.lhs} : tr);
  for (const Equation& e : r.equations) {
    if (e.name != s.rule) continue;
    bool forward_is_ltr = e.orientation != Orientation::RightToLeft;
    Term from = forward_is_ltr ? e.lhs : e.rhs;
    Term to = forward_is_ltr ? e.rhs : e.lhs;
    if (s.backwards) std::swap(from, to);
    cands.push_back(TermRule{e.name, from, to});
  }
  return cands;
}

std::optional<Prop> apply_prop_step_at(const RewriteSystem& r, const Prop& p,
                                       const RewriteStep& s, std::size_t idx);

std::optional<Prop> apply_at_atom(const RewriteSystem& r, const Prop& atom, const RewriteStep& s,
                                  std::size_t idx) {
  if (idx == s.at.size()) {
    // A proposition rule (or schema instance) fires at this atom.
    if (s.rule == "comprehension") {
      auto inst = schema_instance(r, atom);
      if (!inst) return std::nullopt;
      Substitution sub;
      if (!match_atom(inst->lhs, atom, sub)) return std::nullopt;
      return apply_subst(sub, inst->rhs);
    }
    for (const PropRule& pr : r.prop_rules) {
      if (pr.name != s.rule) continue;
      Substitution sub;
      if (match_atom(pr.lhs, atom, sub)) return apply_subst(sub, pr.rhs);
    }
    return std::nullopt;
  }
  // The remaining path addresses a term inside one of the atom's arguments.
  std::size_t i = static_cast<std::size_t>(s.at[idx]);
  if (i >= atom.args().size()) return std::nullopt;
  Path term_path(s.at.begin() + static_cast<long>(idx) + 1, s.at.end());
  for (const TermRule& rule : candidate_term_rules(r, s)) {
    if (auto replaced = apply_term_rule_at(rule, atom.args()[i], term_path, 0)) {
      std::vector<Term> copy = atom.args();
      copy[i] = std::move(*replaced);
      return Prop::atom(atom.pred(), std::move(copy));
    }
  }
  return std::nullopt;
}

std::optional<Prop> apply_prop_step_at(const RewriteSystem& r, const Prop& p,
                                       const RewriteStep& s, std::size_t idx) {
  if (p.is_atom()) return apply_at_atom(r, p, s, idx);
  if (idx == s.at.size()) return std::nullopt;
  std::size_t i = static_cast<std::size_t>(s.at[idx]);
  switch (p.kind()) {
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies: {
      if (i > 1) return std::nullopt;
      const Prop& child = i == 0 ? p.lhs() : p.rhs();
      auto inner = apply_prop_step_at(r, child, s, idx + 1);
      if (!inner) return std::nullopt;
      return Prop::connective(p.kind(), i == 0 ? std::move(*inner) : p.lhs(),
                              i == 0 ? p.rhs() : std::move(*inner));
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      if (i != 0) return std::nullopt;
      auto inner = apply_prop_step_at(r, p.body(), s, idx + 1);
      if (!inner) return std::nullopt;
      return Prop::quant(p.kind(), p.binder(), std::move(*inner));
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<Term> apply_named_step(const RewriteSystem& r, const Term& t, const RewriteStep& s) {
  for (const TermRule& rule : candidate_term_rules(r, s))
    if (auto res = apply_term_rule_at(rule, t, s.at, 0)) return res;
  return std::nullopt;
}

std::optional<Prop> apply_named_step(const RewriteSystem& r, const Prop& p, const RewriteStep& s) {
  return apply_prop_step_at(r, p, s, 0);
}

// ---------------------------------------------------------------------------
// Head exposure

ExposeResult head_expose(const RewriteSystem& r, const Prop& p, const Limits& lim) {
  if (p.empty()) throw std::logic_error("head_expose: empty proposition");
  if (!p.is_atom()) return ExposeResult{Exposure::Exposed, p, 0, {}};
  Prop cur = p;
  std::uint64_t steps = 0;
  std::vector<RewriteStep> trace;
  while (true) {
    // Normalize the atom's arguments so that constructor-headed rules match.
    std::vector<Term> args = cur.args();
    bool exhausted = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (steps >= lim.fuel) {
        exhausted = true;
        break;
      }
      Normalized<Term> na = normalize_term(r, args[i], Limits{lim.fuel - steps, lim.depth}, true);
      steps += na.steps;
      if (!na.normal) exhausted = true;
      for (RewriteStep& s : na.trace) {
        s.at.insert(s.at.begin(), static_cast<int>(i));
        trace.push_back(std::move(s));
      }
      args[i] = std::move(na.value);
    }
    Prop atom = Prop::atom(cur.pred(), std::move(args));
    if (exhausted || steps >= lim.fuel)
      return ExposeResult{Exposure::FuelExhausted, atom, steps, std::move(trace)};
    auto hit = atom_rule_step(r, atom);
    if (!hit) return ExposeResult{Exposure::StillAtomic, atom, steps, std::move(trace)};
    ++steps;
    trace.push_back(hit->second);  // applied at the root of the atom
    cur = std::move(hit->first);
    if (!cur.is_atom()) return ExposeResult{Exposure::Exposed, cur, steps, std::move(trace)};
  }
}

// ---------------------------------------------------------------------------
// Congruence decision

namespace {

void append_prefixed(std::vector<RewriteStep>& dst, const std::vector<RewriteStep>& src,
                     const Path& prefix) {
  for (RewriteStep s : src) {
    Path full = prefix;
    full.insert(full.end(), s.at.begin(), s.at.end());
    s.at = std::move(full);
    dst.push_back(std::move(s));
  }
}

CongruenceVerdict verdict_equiv() {
  return CongruenceVerdict{CongruenceVerdict::Kind::Equivalent, "", {}, {}};
}

CongruenceVerdict verdict_undecided(std::string why) {
  return CongruenceVerdict{CongruenceVerdict::Kind::Undecided, std::move(why), {}, {}};
}

CongruenceVerdict verdict_distinct(std::string why) {
  return CongruenceVerdict{CongruenceVerdict::Kind::Distinct, std::move(why), {}, {}};
}

const char* kDistinctCaveat = " (sound when the system is terminating and confluent)";

// Joins leftmost-outermost reduction chains of both sides, detecting a meet
// anywhere along them; when both reach normal forms, falls back to the
// bidirectional search over unoriented equations. Returns nullopt when a side
// got stuck (fuel or growth cap) before reaching a normal form.
template <typename T, typename Key, typename Hash, typename Eq, typename StepFn,
          typename UnorientedFn, typename NormFn, typename CapFn>
std::optional<CongruenceVerdict> join_phase(const RewriteSystem& r, const T& a, const T& b,
                                            const Limits& lim, std::uint64_t budget, StepFn step,
                                            UnorientedFn unoriented_neighbors, NormFn normalize,
                                            CapFn over_growth_cap) {
  struct Side {
    explicit Side(T start) : cur(std::move(start)) {}
    T cur;
    bool normal = false;
    bool stuck = false;
    std::uint64_t steps = 0;
    std::vector<RewriteStep> trace;
    std::unordered_map<Key, std::size_t, Hash, Eq> seen;
    bool done(std::uint64_t max_steps) const { return normal || stuck || steps >= max_steps; }
  };
  Side left(a), right(b);
  left.seen.emplace(Key(a), 0);
  right.seen.emplace(Key(b), 0);

  auto advance = [&](Side& side, Side& other) -> std::optional<CongruenceVerdict> {
    auto next = step(side.cur);
    if (!next) {
      side.normal = true;
      return std::nullopt;
    }
    side.cur = next->first;
    side.trace.push_back(next->second);
    ++side.steps;
    if (side.steps % 32 == 0 && over_growth_cap(side.cur)) side.stuck = true;
    auto hit = other.seen.find(Key(side.cur));
    if (hit != other.seen.end()) {
      CongruenceVerdict v = verdict_equiv();
      std::vector<RewriteStep> theirs(other.trace.begin(),
                                      other.trace.begin() + static_cast<long>(hit->second));
      if (&side == &left) {
        v.left_trace = side.trace;
        v.right_trace = std::move(theirs);
      } else {
        v.left_trace = std::move(theirs);
        v.right_trace = side.trace;
      }
      return v;
    }
    if (side.seen.size() < kSeenWindow) side.seen.emplace(Key(side.cur), side.trace.size());
    return std::nullopt;
  };

  std::uint64_t max_steps = std::min<std::uint64_t>(budget, lim.fuel);
  while (!left.done(max_steps) || !right.done(max_steps)) {
    if (!left.done(max_steps))
      if (auto v = advance(left, right)) return v;
    if (!right.done(max_steps))
      if (auto v = advance(right, left)) return v;
  }

  if (!left.normal || !right.normal) return std::nullopt;  // stuck; caller decides what next

  if (!r.has_unoriented_equations())
    return verdict_distinct(std::string("normal forms differ") + kDistinctCaveat);

  // Bidirectional search over unoriented equations, every node normalized.
  struct NodeRec {
    T form;
    long parent;
    std::vector<RewriteStep> steps_from_parent;
  };
  struct Frontier {
    std::vector<NodeRec> nodes;
    std::unordered_map<Key, std::size_t, Hash, Eq> index;
  };
  auto chain_to = [](const Frontier& f, std::size_t i) {
    std::vector<std::vector<RewriteStep>> segs;
    for (long cur = static_cast<long>(i); cur >= 0;
         cur = f.nodes[static_cast<std::size_t>(cur)].parent)
      segs.push_back(f.nodes[static_cast<std::size_t>(cur)].steps_from_parent);
    std::vector<RewriteStep> out;
    for (auto it = segs.rbegin(); it != segs.rend(); ++it)
      out.insert(out.end(), it->begin(), it->end());
    return out;
  };
  auto meet_verdict = [&](const Frontier& lf, std::size_t li, const Frontier& rf, std::size_t ri) {
    CongruenceVerdict v = verdict_equiv();
    v.left_trace = left.trace;
    auto lseg = chain_to(lf, li);
    v.left_trace.insert(v.left_trace.end(), lseg.begin(), lseg.end());
    v.right_trace = right.trace;
    auto rseg = chain_to(rf, ri);
    v.right_trace.insert(v.right_trace.end(), rseg.begin(), rseg.end());
    return v;
  };

  Frontier lf, rf;
  lf.nodes.push_back(NodeRec{left.cur, -1, {}});
  lf.index.emplace(Key(left.cur), 0);
  rf.nodes.push_back(NodeRec{right.cur, -1, {}});
  rf.index.emplace(Key(right.cur), 0);

  bool truncated = false;
  std::size_t lbegin = 0, rbegin = 0;
  for (unsigned d = 0; d < lim.depth; ++d) {
    auto expand = [&](Frontier& f, std::size_t& begin) {
      std::size_t end = f.nodes.size();
      for (std::size_t i = begin; i < end; ++i) {
        if (f.nodes.size() > kSearchNodeCap) {
          truncated = true;
          break;
        }
        for (auto& [next, estep] : unoriented_neighbors(f.nodes[i].form)) {
          Normalized<T> norm = normalize(next);
          if (!norm.normal) continue;  // cannot canonicalize this neighbor
          if (f.index.count(Key(norm.value))) continue;
          std::vector<RewriteStep> seg;
          seg.push_back(estep);
          seg.insert(seg.end(), norm.trace.begin(), norm.trace.end());
          f.nodes.push_back(NodeRec{norm.value, static_cast<long>(i), std::move(seg)});
          f.index.emplace(Key(norm.value), f.nodes.size() - 1);
        }
      }
      begin = end;
    };
    expand(lf, lbegin);
    for (std::size_t i = 0; i < lf.nodes.size(); ++i) {
      auto hit = rf.index.find(Key(lf.nodes[i].form));
      if (hit != rf.index.end()) return meet_verdict(lf, i, rf, hit->second);
    }
    expand(rf, rbegin);
    for (std::size_t i = 0; i < rf.nodes.size(); ++i) {
      auto hit = lf.index.find(Key(rf.nodes[i].form));
      if (hit != lf.index.end()) return meet_verdict(lf, hit->second, rf, i);
    }
    if (truncated) break;
  }

  std::ostringstream why;
  why << "normal forms differ and no equational join was found within depth " << lim.depth;
  if (truncated) why << " (search truncated at " << kSearchNodeCap << " nodes)";
  return verdict_undecided(why.str());
}

std::vector<std::pair<Prop, RewriteStep>> prop_unoriented_neighbors(const RewriteSystem& r,
                                                                    const Prop& p);

std::vector<std::pair<Term, RewriteStep>> term_unoriented_neighbors(const RewriteSystem& r,
                                                                    const Term& t) {
  std::vector<std::pair<Term, RewriteStep>> out;
  auto identity = [](const Term& x) { return x; };
  collect_steps(unoriented_forward_rules(r), t, {}, identity, false, out);
  collect_steps(unoriented_backward_rules(r), t, {}, identity, true, out);
  return out;
}

// Unoriented equation applications at every term position inside `p`.
void prop_unoriented_collect(const RewriteSystem& r, const Prop& p, Path& here,
                             const std::function<Prop(const Prop&)>& rebuild,
                             std::vector<std::pair<Prop, RewriteStep>>& out) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      const auto& args = p.args();
      for (std::size_t i = 0; i < args.size(); ++i) {
        here.push_back(static_cast<int>(i));
        Path base = here;
        auto rebuild_term = [&, i](const Term& repl) {
          std::vector<Term> copy = args;
          copy[i] = repl;
          return rebuild(Prop::atom(p.pred(), std::move(copy)));
        };
        std::vector<std::pair<Term, RewriteStep>> inner;
        auto identity = [](const Term& x) { return x; };
        collect_steps(unoriented_forward_rules(r), args[i], {}, identity, false, inner);
        collect_steps(unoriented_backward_rules(r), args[i], {}, identity, true, inner);
        for (auto& [term, step] : inner) {
          Path full = base;
          full.insert(full.end(), step.at.begin(), step.at.end());
          step.at = std::move(full);
          out.emplace_back(rebuild_term(term), std::move(step));
        }
        here.pop_back();
      }
      return;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies: {
      here.push_back(0);
      auto rl = [&](const Prop& repl) { return rebuild(Prop::connective(p.kind(), repl, p.rhs())); };
      prop_unoriented_collect(r, p.lhs(), here, rl, out);
      here.back() = 1;
      auto rr = [&](const Prop& repl) { return rebuild(Prop::connective(p.kind(), p.lhs(), repl)); };
      prop_unoriented_collect(r, p.rhs(), here, rr, out);
      here.pop_back();
      return;
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      here.push_back(0);
      auto rb = [&](const Prop& repl) { return rebuild(Prop::quant(p.kind(), p.binder(), repl)); };
      prop_unoriented_collect(r, p.body(), here, rb, out);
      here.pop_back();
      return;
    }
  }
}

std::vector<std::pair<Prop, RewriteStep>> prop_unoriented_neighbors(const RewriteSystem& r,
                                                                    const Prop& p) {
  std::vector<std::pair<Prop, RewriteStep>> out;
  Path here;
  auto identity = [](const Prop& x) { return x; };
  prop_unoriented_collect(r, p, here, identity, out);
  return out;
}

// Component-wise comparison of head exposures, following the non-confusion
// clauses: congruent compound propositions share their head and have
// congruent components. Decides pairs whose plain unfoldings never terminate.
// A revisited pair stops the recursion as Undecided, never Equivalent, so the
// verdict stays witnessed by finite traces.
class ExposureComparer {
 public:
  ExposureComparer(const RewriteSystem& r, const Limits& lim) : r_(r), lim_(lim) {}

  CongruenceVerdict compare(const Prop& a, const Prop& b, const Path& pa, const Path& pb) {
    if (alpha_eq(a, b)) return verdict_equiv();
    if (depth_ > 512) return verdict_undecided("exposure comparison too deep");
    for (const auto& [ka, kb] : stack_)
      if (alpha_eq(ka.p, a) && alpha_eq(kb.p, b))
        return verdict_undecided("cyclic unfolding while comparing " + to_text(a) + " and " +
                                 to_text(b));
    stack_.emplace_back(AlphaPropKey(a), AlphaPropKey(b));
    ++depth_;
    CongruenceVerdict v = compare_inner(a, b, pa, pb);
    --depth_;
    stack_.pop_back();
    return v;
  }

 private:
  CongruenceVerdict compare_inner(const Prop& a, const Prop& b, const Path& pa, const Path& pb) {
    ExposeResult ea = head_expose(r_, a, lim_);
    ExposeResult eb = head_expose(r_, b, lim_);
    if (ea.status == Exposure::FuelExhausted || eb.status == Exposure::FuelExhausted)
      return verdict_undecided("fuel exhausted while exposing an atom");

    CongruenceVerdict out = verdict_equiv();
    append_prefixed(out.left_trace, ea.trace, pa);
    append_prefixed(out.right_trace, eb.trace, pb);

    auto merge = [&out](CongruenceVerdict sub) -> bool {
      if (sub.kind != CongruenceVerdict::Kind::Equivalent) {
        sub.left_trace.clear();
        sub.right_trace.clear();
        out = std::move(sub);
        return false;
      }
      out.left_trace.insert(out.left_trace.end(), sub.left_trace.begin(), sub.left_trace.end());
      out.right_trace.insert(out.right_trace.end(), sub.right_trace.begin(),
                             sub.right_trace.end());
      return true;
    };

    if (ea.status == Exposure::StillAtomic && eb.status == Exposure::StillAtomic) {
      if (!(ea.prop.pred() == eb.prop.pred()))
        return verdict_distinct("atoms " + to_text(ea.prop) + " and " + to_text(eb.prop) +
                                " have different predicates" + kDistinctCaveat);
      for (std::size_t i = 0; i < ea.prop.args().size(); ++i) {
        CongruenceVerdict sub =
            decide_congruence(r_, ea.prop.args()[i], eb.prop.args()[i], lim_);
        Path la = pa, lb = pb;
        la.push_back(static_cast<int>(i));
        lb.push_back(static_cast<int>(i));
        CongruenceVerdict shifted = verdict_equiv();
        shifted.kind = sub.kind;
        shifted.reason = sub.reason;
        append_prefixed(shifted.left_trace, sub.left_trace, la);
        append_prefixed(shifted.right_trace, sub.right_trace, lb);
        if (!merge(std::move(shifted))) return out;
      }
      return out;
    }
    if (ea.status != eb.status) {
      return verdict_distinct("a normal atom cannot match a compound proposition: " +
                              to_text(ea.prop) + " vs " + to_text(eb.prop) + kDistinctCaveat);
    }

    const Prop& xa = ea.prop;
    const Prop& xb = eb.prop;
    if (xa.kind() != xb.kind())
      return verdict_distinct("exposed heads differ: " + to_text(xa) + " vs " + to_text(xb) +
                              kDistinctCaveat);
    switch (xa.kind()) {
      case Prop::Kind::Top:
      case Prop::Kind::Bottom:
        return out;
      case Prop::Kind::And:
      case Prop::Kind::Or:
      case Prop::Kind::Implies: {
        Path la = pa, lb = pb;
        la.push_back(0);
        lb.push_back(0);
        if (!merge(compare(xa.lhs(), xb.lhs(), la, lb))) return out;
        la.back() = 1;
        lb.back() = 1;
        if (!merge(compare(xa.rhs(), xb.rhs(), la, lb))) return out;
        return out;
      }
      case Prop::Kind::Forall:
      case Prop::Kind::Exists: {
        if (xa.binder().sort != xb.binder().sort)
          return verdict_distinct("quantifiers bind different sorts: " + to_text(xa) + " vs " +
                                  to_text(xb) + kDistinctCaveat);
        std::set<std::string> taken;
        for (const Var& v : xa.body().free()) taken.insert(v.name);
        for (const Var& v : xb.body().free()) taken.insert(v.name);
        Var common{fresh_name(xa.binder().name, taken), xa.binder().sort};
        Substitution ra, rb;
        ra.bind(xa.binder(), Term::variable(common));
        rb.bind(xb.binder(), Term::variable(common));
        Path la = pa, lb = pb;
        la.push_back(0);
        lb.push_back(0);
        merge(compare(apply_subst(ra, xa.body()), apply_subst(rb, xb.body()), la, lb));
        return out;
      }
      default:
        return verdict_undecided("unexpected exposure shape");
    }
  }

  const RewriteSystem& r_;
  const Limits& lim_;
  std::vector<std::pair<AlphaPropKey, AlphaPropKey>> stack_;
  int depth_ = 0;
};

}  // namespace

CongruenceVerdict decide_congruence(const RewriteSystem& r, const Term& a, const Term& b,
                                    const Limits& lim) {
  if (!a.empty() && !b.empty() && a.sort() != b.sort())
    return verdict_distinct("different sorts");
  if (alpha_eq(a, b)) return verdict_equiv();
  auto step = [&](const Term& t) { return term_step(r, t); };
  auto un = [&](const Term& t) { return term_unoriented_neighbors(r, t); };
  auto norm = [&](const Term& t) { return normalize_term(r, t, lim, true); };
  auto cap = [](const Term& t) { return term_over_growth_cap(t); };
  auto v = join_phase<Term, AlphaTermKey, AlphaTermHash, AlphaTermEq>(r, a, b, lim, lim.fuel,
                                                                      step, un, norm, cap);
  if (v) return *v;
  return verdict_undecided("fuel exhausted while normalizing");
}

CongruenceVerdict decide_congruence(const RewriteSystem& r, const Prop& a, const Prop& b,
                                    const Limits& lim) {
  if (alpha_eq(a, b)) return verdict_equiv();
  auto step = [&](const Prop& p) { return prop_step(r, p); };
  auto un = [&](const Prop& p) { return prop_unoriented_neighbors(r, p); };
  auto norm = [&](const Prop& p) { return normalize_prop(r, p, lim, true); };
  auto cap = [](const Prop& p) { return prop_over_growth_cap(p); };
  // Productive rules (the induction unfolding) may never normalize, so the
  // join phase runs on a small budget before the exposure comparison.
  std::uint64_t budget = std::min<std::uint64_t>(lim.fuel, 256);
  auto v = join_phase<Prop, AlphaPropKey, AlphaPropHash, AlphaPropEq>(r, a, b, lim, budget, step,
                                                                      un, norm, cap);
  if (v && v->kind != CongruenceVerdict::Kind::Undecided) return *v;
  ExposureComparer cmp(r, lim);
  CongruenceVerdict byhead = cmp.compare(a, b, {}, {});
  if (byhead.kind == CongruenceVerdict::Kind::Undecided && v) return *v;
  return byhead;
}

// ---------------------------------------------------------------------------
// Localized steps

namespace {

void localized_collect(const RewriteSystem& r, const Prop& p, Path& here,
                       const std::function<Prop(const Prop&)>& rebuild, const Limits& lim,
                       std::vector<LocalizedStep>& out) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      // Normalize the atom's arguments under the term-level congruence, then
      // match rule left-hand sides syntactically.
      std::vector<Term> args = p.args();
      for (Term& a : args) {
        Normalized<Term> na = normalize_term(r, a, lim);
        if (!na.normal) return;  // cannot reliably match here
        a = std::move(na.value);
      }
      Prop atom = Prop::atom(p.pred(), std::move(args));
      auto try_rule = [&](const PropRule& pr) {
        Substitution sub;
        if (match_atom(pr.lhs, atom, sub))
          out.push_back(LocalizedStep{here, pr, sub, rebuild(apply_subst(sub, pr.rhs))});
      };
      for (const PropRule& pr : r.prop_rules) try_rule(pr);
      if (auto inst = schema_instance(r, atom)) try_rule(*inst);
      return;
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies: {
      here.push_back(0);
      auto rl = [&](const Prop& repl) { return rebuild(Prop::connective(p.kind(), repl, p.rhs())); };
      localized_collect(r, p.lhs(), here, rl, lim, out);
      here.back() = 1;
      auto rr = [&](const Prop& repl) { return rebuild(Prop::connective(p.kind(), p.lhs(), repl)); };
      localized_collect(r, p.rhs(), here, rr, lim, out);
      here.pop_back();
      return;
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      here.push_back(0);
      auto rb = [&](const Prop& repl) { return rebuild(Prop::quant(p.kind(), p.binder(), repl)); };
      localized_collect(r, p.body(), here, rb, lim, out);
      here.pop_back();
      return;
    }
  }
}

}  // namespace

std::vector<LocalizedStep> localized_step(const RewriteSystem& r, const Prop& a,
                                          const Limits& lim) {
  std::vector<LocalizedStep> out;
  Path here;
  auto identity = [](const Prop& x) { return x; };
  localized_collect(r, a, here, identity, lim, out);
  return out;
}

// ---------------------------------------------------------------------------
// Unification and critical pairs

namespace {

Substitution compose_bind(const Substitution& s, const Var& v, const Term& t) {
  Substitution single;
  single.bind(v, t);
  Substitution out;
  for (const auto& [w, rep] : s.entries()) out.bind(w, apply_subst(single, rep));
  if (!out.contains(v)) out.bind(v, t);
  return out;
}

bool occurs(const Var& v, const Term& t) {
  for (const Var& w : t.free())
    if (w == v) return true;
  return false;
}

bool unify_rec(const Term& a0, const Term& b0, Substitution& s) {
  Term a = apply_subst(s, a0);
  Term b = apply_subst(s, b0);
  if (a.is_var() && b.is_var() && a.var() == b.var()) return true;
  if (a.is_var()) {
    if (occurs(a.var(), b) || a.var().sort != b.sort()) return false;
    s = compose_bind(s, a.var(), b);
    return true;
  }
  if (b.is_var()) {
    if (occurs(b.var(), a) || b.var().sort != a.sort()) return false;
    s = compose_bind(s, b.var(), a);
    return true;
  }
  if (!head_eq(a.head(), b.head()) || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!unify_rec(a.args()[i], b.args()[i], s)) return false;
  return true;
}

void nonvar_positions(const Term& t, Path& here, std::vector<Path>& out) {
  if (!t.is_app()) return;
  out.push_back(here);
  const auto& args = t.args();
  for (std::size_t i = 0; i < args.size(); ++i) {
    here.push_back(static_cast<int>(i));
    nonvar_positions(args[i], here, out);
    here.pop_back();
  }
}

Term subterm_at(const Term& t, const Path& p) {
  Term cur = t;
  for (int i : p) cur = cur.args()[static_cast<std::size_t>(i)];
  return cur;
}

Term graft_at(const Term& t, const Path& p, std::size_t idx, const Term& repl) {
  if (idx == p.size()) return repl;
  std::vector<Term> copy = t.args();
  std::size_t i = static_cast<std::size_t>(p[idx]);
  copy[i] = graft_at(copy[i], p, idx + 1, repl);
  return Term::app(t.head(), std::move(copy));
}

TermRule rename_apart(const TermRule& rule, const VarSet& avoid) {
  std::set<std::string> taken;
  for (const Var& v : avoid) taken.insert(v.name);
  Substitution ren;
  VarSet vars = free_vars(rule.lhs);
  for (const Var& v : free_vars(rule.rhs)) vars.insert(v);
  for (const Var& v : vars) {
    if (!taken.count(v.name)) {
      taken.insert(v.name);
      continue;
    }
    Var fresh{fresh_name(v.name, taken), v.sort};
    taken.insert(fresh.name);
    ren.bind(v, Term::variable(fresh));
  }
  if (ren.empty()) return rule;
  return TermRule{rule.name, apply_subst(ren, rule.lhs), apply_subst(ren, rule.rhs)};
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution s;
  if (!unify_rec(a, b, s)) return std::nullopt;
  return s;
}

std::vector<CriticalPair> critical_pairs(const std::vector<TermRule>& rules) {
  std::vector<CriticalPair> out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const TermRule& r1 = rules[i];
    VarSet avoid = free_vars(r1.lhs);
    for (const Var& v : free_vars(r1.rhs)) avoid.insert(v);
    for (std::size_t j = 0; j < rules.size(); ++j) {
      TermRule r2 = rename_apart(rules[j], avoid);
      std::vector<Path> positions;
      Path scratch;
      nonvar_positions(r1.lhs, scratch, positions);
      for (const Path& pos : positions) {
        if (pos.empty()) {
          if (i == j) continue;        // trivial self overlap at the root
          if (i > j) continue;         // mirror of a pair already reported
        }
        auto mgu = unify(subterm_at(r1.lhs, pos), r2.lhs);
        if (!mgu) continue;
        Term peak = apply_subst(*mgu, r1.lhs);
        Term left = apply_subst(*mgu, r1.rhs);
        Term right = apply_subst(*mgu, graft_at(r1.lhs, pos, 0, r2.rhs));
        if (alpha_eq(left, right)) continue;  // trivially joined
        out.push_back(CriticalPair{peak, left, right, r1.name, rules[j].name, pos});
      }
    }
  }
  return out;
}

std::optional<bool> joinable(const RewriteSystem& r, const Term& t, const Term& u,
                             const Limits& lim) {
  Normalized<Term> nt = normalize_term(r, t, lim);
  Normalized<Term> nu = normalize_term(r, u, lim);
  if (!nt.normal || !nu.normal) return std::nullopt;
  return alpha_eq(nt.value, nu.value);
}

// ---------------------------------------------------------------------------
// The 0/S guard

GuardReport guard_zero_succ(const RewriteSystem& r, const Limits& lim) {
  GuardReport report;
  const FunctionSymbol* zero = r.sig.function("0");
  const FunctionSymbol* succ = r.sig.function("S");
  if (!zero || !zero->arg_sorts.empty() || !succ || succ->arg_sorts.size() != 1) {
    report.applicable = false;
    report.notes.push_back("signature has no 0/S pair; guard skipped");
    return report;
  }

  auto is_succ_headed = [&](const Term& t) {
    if (!t.is_app()) return false;
    const auto* f = std::get_if<FunctionSymbol>(&t.head());
    return f && *f == *succ;
  };

  struct Node {
    Term t;
    long parent;
  };

  // Breadth-first over single rule/equation steps in both directions.
  auto search = [&](const Term& origin, auto&& found,
                    std::vector<Node>& nodes) -> std::optional<std::size_t> {
    std::unordered_set<AlphaTermKey, AlphaTermHash, AlphaTermEq> seen;
    nodes.clear();
    nodes.push_back(Node{origin, -1});
    seen.insert(AlphaTermKey(origin));
    std::size_t begin = 0;
    for (unsigned d = 0; d < lim.depth; ++d) {
      std::size_t end = nodes.size();
      if (begin == end) break;
      for (std::size_t i = begin; i < end; ++i) {
        if (nodes.size() > kSearchNodeCap) {
          report.truncated = true;
          return std::nullopt;
        }
        for (auto& [next, step] : term_equational_neighbors(r, nodes[i].t)) {
          (void)step;
          AlphaTermKey key(next);
          if (seen.count(key)) continue;
          seen.insert(key);
          nodes.push_back(Node{next, static_cast<long>(i)});
          if (found(next)) return nodes.size() - 1;
        }
      }
      begin = end;
      report.depth_searched = std::max(report.depth_searched, d + 1);
    }
    return std::nullopt;
  };

  auto chain_from = [&](const std::vector<Node>& nodes, std::size_t i) {
    std::vector<Term> chain;
    for (long cur = static_cast<long>(i); cur >= 0; cur = nodes[static_cast<std::size_t>(cur)].parent)
      chain.push_back(nodes[static_cast<std::size_t>(cur)].t);
    std::reverse(chain.begin(), chain.end());
    return chain;
  };

  Term zero_term = Term::constant(*zero);
  std::vector<Node> nodes;
  if (auto hit = search(zero_term, is_succ_headed, nodes)) {
    report.violation = true;
    report.chain = chain_from(nodes, *hit);
    report.witness = report.chain.back();
    return report;
  }

  // Companion searches from the S-headed sides of equations: reaching 0 from
  // such a side also identifies 0 with a successor term.
  for (const Equation& e : r.equations) {
    for (const Term& side : {e.lhs, e.rhs}) {
      if (!is_succ_headed(side) || !free_vars(side).empty()) continue;
      auto is_zero = [&](const Term& t) { return alpha_eq(t, zero_term); };
      if (auto hit = search(side, is_zero, nodes)) {
        report.violation = true;
        report.chain = chain_from(nodes, *hit);
        std::reverse(report.chain.begin(), report.chain.end());
        report.witness = side;
        report.notes.push_back("found via companion search from equation " + e.name);
        return report;
      }
      report.notes.push_back("equation " + e.name + " has successor-headed side " + to_text(side) +
                             "; no derivation of 0 = S(t) found up to depth " +
                             std::to_string(lim.depth));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Non-confusion

namespace {

NonConfusion confused(const std::string& what) { return NonConfusion{false, what}; }

NonConfusion non_confusion_rec(const RewriteSystem& r, const Prop& a, const Prop& b,
                               const Limits& lim) {
  // The discipline only constrains pairs where both sides are non-atomic.
  if (a.is_atom() || b.is_atom()) return NonConfusion{};
  if (a.kind() != b.kind())
    return confused("congruent propositions with different heads: " + to_text(a) + " vs " +
                    to_text(b));
  switch (a.kind()) {
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return NonConfusion{};
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies: {
      if (!decide_congruence(r, a.lhs(), b.lhs(), lim).equivalent())
        return confused("left components not equivalent: " + to_text(a.lhs()) + " vs " +
                        to_text(b.lhs()));
      if (!decide_congruence(r, a.rhs(), b.rhs(), lim).equivalent())
        return confused("right components not equivalent: " + to_text(a.rhs()) + " vs " +
                        to_text(b.rhs()));
      NonConfusion l = non_confusion_rec(r, a.lhs(), b.lhs(), lim);
      if (!l.ok) return l;
      return non_confusion_rec(r, a.rhs(), b.rhs(), lim);
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      if (a.binder().sort != b.binder().sort)
        return confused("quantifiers bind different sorts: " + to_text(a) + " vs " + to_text(b));
      // Rename to a common bound variable before comparing bodies.
      std::set<std::string> taken;
      for (const Var& v : a.body().free()) taken.insert(v.name);
      for (const Var& v : b.body().free()) taken.insert(v.name);
      Var common{fresh_name(a.binder().name, taken), a.binder().sort};
      Substitution ra, rb;
      ra.bind(a.binder(), Term::variable(common));
      rb.bind(b.binder(), Term::variable(common));
      Prop ba = apply_subst(ra, a.body());
      Prop bb = apply_subst(rb, b.body());
      if (!decide_congruence(r, ba, bb, lim).equivalent())
        return confused("quantifier bodies not equivalent: " + to_text(ba) + " vs " + to_text(bb));
      return non_confusion_rec(r, ba, bb, lim);
    }
    default:
      return confused("unexpected proposition kind");
  }
}

}  // namespace

NonConfusion non_confusion_check(const RewriteSystem& r, const Prop& a, const Prop& b,
                                 const Limits& lim) {
  if (a.is_atom() || b.is_atom())
    return confused("non-confusion applies to non-atomic propositions");
  return non_confusion_rec(r, a, b, lim);
}

}  // namespace dm
