#include "dm/proofterm.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dm {

namespace {

std::vector<std::string> merge_names(std::vector<std::string> a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::string> erase_name(std::vector<std::string> v, const std::string& n) {
  v.erase(std::remove(v.begin(), v.end(), n), v.end());
  return v;
}

std::vector<Var> merge_vars(std::vector<Var> a, const std::vector<Var>& b) {
  std::vector<Var> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Var> erase_tvar(std::vector<Var> v, const Var& x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
  return v;
}

std::vector<Var> prop_vars(const std::optional<Prop>& p) {
  if (!p) return {};
  return p->free();
}

}  // namespace

struct Proof::Node {
  explicit Node(Kind k) : kind(k) {}
  Kind kind;
  std::string name;   // Var / ImpIntro hyp / Case left hyp / Unpack hyp
  std::string name2;  // Case right hyp
  Var tvar;           // AllIntro / Unpack binder
  Term term;          // TApp argument / Pack witness
  Proof a, b, c;
  std::optional<Prop> ann;
  std::vector<std::string> fpv;
  std::vector<Var> ftv;
};

Proof Proof::make(Node n) { return Proof(std::make_shared<const Node>(std::move(n))); }

Proof Proof::var(std::string name) {
  Node n(Kind::Var);
  n.fpv = {name};
  n.name = std::move(name);
  return make(std::move(n));
}

Proof Proof::top_intro() { return make(Node(Kind::TopIntro)); }

Proof Proof::bot_elim(Proof inner, std::optional<Prop> target) {
  Node n(Kind::BotElim);
  n.fpv = inner.free_proof_vars();
  n.ftv = merge_vars(inner.free_term_vars(), prop_vars(target));
  n.a = std::move(inner);
  n.ann = std::move(target);
  return make(std::move(n));
}

Proof Proof::pair(Proof l, Proof r) {
  Node n(Kind::Pair);
  n.fpv = merge_names(l.free_proof_vars(), r.free_proof_vars());
  n.ftv = merge_vars(l.free_term_vars(), r.free_term_vars());
  n.a = std::move(l);
  n.b = std::move(r);
  return make(std::move(n));
}

Proof Proof::fst(Proof inner) {
  Node n(Kind::Fst);
  n.fpv = inner.free_proof_vars();
  n.ftv = inner.free_term_vars();
  n.a = std::move(inner);
  return make(std::move(n));
}
Proof Proof::snd(Proof inner) {
  Node n(Kind::Snd);
  n.fpv = inner.free_proof_vars();
  n.ftv = inner.free_term_vars();
  n.a = std::move(inner);
  return make(std::move(n));
}
Proof Proof::inl(Proof inner, std::optional<Prop> disj) {
  Node n(Kind::Inl);
  n.fpv = inner.free_proof_vars();
  n.ftv = merge_vars(inner.free_term_vars(), prop_vars(disj));
  n.a = std::move(inner);
  n.ann = std::move(disj);
  return make(std::move(n));
}
Proof Proof::inr(Proof inner, std::optional<Prop> disj) {
  Node n(Kind::Inr);
  n.fpv = inner.free_proof_vars();
  n.ftv = merge_vars(inner.free_term_vars(), prop_vars(disj));
  n.a = std::move(inner);
  n.ann = std::move(disj);
  return make(std::move(n));
}

Proof Proof::case_of(Proof scrutinee, std::string left_hyp, Proof left, std::string right_hyp,
                     Proof right) {
  Node n(Kind::Case);
  n.fpv = merge_names(scrutinee.free_proof_vars(),
                      merge_names(erase_name(left.free_proof_vars(), left_hyp),
                                  erase_name(right.free_proof_vars(), right_hyp)));
  n.ftv = merge_vars(scrutinee.free_term_vars(),
                     merge_vars(left.free_term_vars(), right.free_term_vars()));
  n.a = std::move(scrutinee);
  n.name = std::move(left_hyp);
  n.b = std::move(left);
  n.name2 = std::move(right_hyp);
  n.c = std::move(right);
  return make(std::move(n));
}

Proof Proof::imp_intro(std::string hyp, std::optional<Prop> domain, Proof body) {
  Node n(Kind::ImpIntro);
  n.fpv = erase_name(body.free_proof_vars(), hyp);
  n.ftv = merge_vars(body.free_term_vars(), prop_vars(domain));
  n.name = std::move(hyp);
  n.ann = std::move(domain);
  n.a = std::move(body);
  return make(std::move(n));
}

Proof Proof::app(Proof fn, Proof arg) {
  Node n(Kind::App);
  n.fpv = merge_names(fn.free_proof_vars(), arg.free_proof_vars());
  n.ftv = merge_vars(fn.free_term_vars(), arg.free_term_vars());
  n.a = std::move(fn);
  n.b = std::move(arg);
  return make(std::move(n));
}

Proof Proof::all_intro(Var binder, Proof body) {
  Node n(Kind::AllIntro);
  n.fpv = body.free_proof_vars();
  n.ftv = erase_tvar(body.free_term_vars(), binder);
  n.tvar = std::move(binder);
  n.a = std::move(body);
  return make(std::move(n));
}

Proof Proof::tapp(Proof fn, Term arg) {
  Node n(Kind::TApp);
  n.fpv = fn.free_proof_vars();
  n.ftv = merge_vars(fn.free_term_vars(), arg.free());
  n.a = std::move(fn);
  n.term = std::move(arg);
  return make(std::move(n));
}

Proof Proof::pack(Term witness, Proof inner, std::optional<Prop> target) {
  Node n(Kind::Pack);
  n.fpv = inner.free_proof_vars();
  n.ftv = merge_vars(merge_vars(inner.free_term_vars(), witness.free()), prop_vars(target));
  n.term = std::move(witness);
  n.a = std::move(inner);
  n.ann = std::move(target);
  return make(std::move(n));
}

Proof Proof::unpack(Proof scrutinee, Var term_binder, std::string hyp, Proof body) {
  Node n(Kind::Unpack);
  n.fpv = merge_names(scrutinee.free_proof_vars(), erase_name(body.free_proof_vars(), hyp));
  n.ftv = merge_vars(scrutinee.free_term_vars(), erase_tvar(body.free_term_vars(), term_binder));
  n.a = std::move(scrutinee);
  n.tvar = std::move(term_binder);
  n.name = std::move(hyp);
  n.b = std::move(body);
  return make(std::move(n));
}

Proof::Kind Proof::kind() const {
  if (!n_) throw std::logic_error("Proof::kind on empty proof");
  return n_->kind;
}

namespace {
[[noreturn]] void bad_access(const char* what) {
  throw std::logic_error(std::string("Proof accessor misuse: ") + what);
}
}  // namespace

const std::string& Proof::pvar() const {
  if (kind() != Kind::Var) bad_access("pvar");
  return n_->name;
}
const Proof& Proof::inner() const {
  switch (kind()) {
    case Kind::BotElim:
    case Kind::Fst:
    case Kind::Snd:
    case Kind::Inl:
    case Kind::Inr:
    case Kind::Pack:
      return n_->a;
    default:
      bad_access("inner");
  }
}
const Proof& Proof::lhs() const {
  if (kind() != Kind::Pair) bad_access("lhs");
  return n_->a;
}
const Proof& Proof::rhs() const {
  if (kind() != Kind::Pair) bad_access("rhs");
  return n_->b;
}
const Proof& Proof::fn() const {
  if (kind() != Kind::App && kind() != Kind::TApp) bad_access("fn");
  return n_->a;
}
const Proof& Proof::arg() const {
  if (kind() != Kind::App) bad_access("arg");
  return n_->b;
}
const Term& Proof::targ() const {
  if (kind() != Kind::TApp) bad_access("targ");
  return n_->term;
}
const Proof& Proof::scrutinee() const {
  if (kind() != Kind::Case && kind() != Kind::Unpack) bad_access("scrutinee");
  return n_->a;
}
const std::string& Proof::left_hyp() const {
  if (kind() != Kind::Case) bad_access("left_hyp");
  return n_->name;
}
const Proof& Proof::left() const {
  if (kind() != Kind::Case) bad_access("left");
  return n_->b;
}
const std::string& Proof::right_hyp() const {
  if (kind() != Kind::Case) bad_access("right_hyp");
  return n_->name2;
}
const Proof& Proof::right() const {
  if (kind() != Kind::Case) bad_access("right");
  return n_->c;
}
const std::string& Proof::hyp() const {
  if (kind() != Kind::ImpIntro && kind() != Kind::Unpack) bad_access("hyp");
  return n_->name;
}
const Proof& Proof::body() const {
  switch (kind()) {
    case Kind::ImpIntro:
    case Kind::AllIntro:
      return n_->a;
    case Kind::Unpack:
      return n_->b;
    default:
      bad_access("body");
  }
}
const Var& Proof::binder() const {
  if (kind() != Kind::AllIntro && kind() != Kind::Unpack) bad_access("binder");
  return n_->tvar;
}
const Term& Proof::witness() const {
  if (kind() != Kind::Pack) bad_access("witness");
  return n_->term;
}
const std::optional<Prop>& Proof::annotation() const {
  switch (kind()) {
    case Kind::BotElim:
    case Kind::Inl:
    case Kind::Inr:
    case Kind::ImpIntro:
    case Kind::Pack:
      return n_->ann;
    default:
      bad_access("annotation");
  }
}
const std::vector<std::string>& Proof::free_proof_vars() const {
  if (!n_) throw std::logic_error("free_proof_vars on empty proof");
  return n_->fpv;
}
const std::vector<Var>& Proof::free_term_vars() const {
  if (!n_) throw std::logic_error("free_term_vars on empty proof");
  return n_->ftv;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

using ProofMap = std::map<std::string, Proof>;

bool touches(const Proof& p, const ProofMap& pm, const Substitution& tm) {
  for (const std::string& v : p.free_proof_vars())
    if (pm.count(v)) return true;
  for (const Var& v : p.free_term_vars())
    if (tm.contains(v)) return true;
  return false;
}

std::optional<Prop> subst_ann(const std::optional<Prop>& ann, const Substitution& tm) {
  if (!ann || tm.empty()) return ann;
  return apply_subst(tm, *ann);
}

Proof substitute(const Proof& p, ProofMap pm, Substitution tm);

// Renames a proof binder when a substituted proof would capture it.
std::string guard_proof_binder(const std::string& hyp, const Proof& body, ProofMap& pm) {
  pm.erase(hyp);
  std::set<std::string> danger;
  for (const std::string& v : body.free_proof_vars()) {
    auto it = pm.find(v);
    if (it == pm.end()) continue;
    for (const std::string& w : it->second.free_proof_vars()) danger.insert(w);
  }
  if (!danger.count(hyp)) return hyp;
  for (const std::string& v : body.free_proof_vars()) danger.insert(v);
  std::string fresh = fresh_name(hyp, danger);
  pm.insert_or_assign(hyp, Proof::var(fresh));
  return fresh;
}

// Renames a term binder when a substituted proof or term would capture it.
Var guard_term_binder(const Var& x, const std::vector<const Proof*>& bodies,
                      const ProofMap& pm, Substitution& tm) {
  tm = tm.without(x);
  std::set<std::string> danger;
  for (const Proof* body : bodies) {
    for (const Var& v : body->free_term_vars()) {
      if (const Term* t = tm.lookup(v))
        for (const Var& w : t->free()) danger.insert(w.name);
    }
    for (const std::string& v : body->free_proof_vars()) {
      auto it = pm.find(v);
      if (it == pm.end()) continue;
      for (const Var& w : it->second.free_term_vars()) danger.insert(w.name);
    }
  }
  if (!danger.count(x.name)) return x;
  for (const Proof* body : bodies)
    for (const Var& v : body->free_term_vars()) danger.insert(v.name);
  Var fresh{fresh_name(x.name, danger), x.sort};
  tm.bind(x, Term::variable(fresh));
  return fresh;
}

Proof substitute(const Proof& p, ProofMap pm, Substitution tm) {
  if (!touches(p, pm, tm)) return p;
  switch (p.kind()) {
    case Proof::Kind::Var: {
      auto it = pm.find(p.pvar());
      return it == pm.end() ? p : it->second;
    }
    case Proof::Kind::TopIntro:
      return p;
    case Proof::Kind::BotElim:
      return Proof::bot_elim(substitute(p.inner(), pm, tm), subst_ann(p.annotation(), tm));
    case Proof::Kind::Pair:
      return Proof::pair(substitute(p.lhs(), pm, tm), substitute(p.rhs(), pm, tm));
    case Proof::Kind::Fst:
      return Proof::fst(substitute(p.inner(), pm, tm));
    case Proof::Kind::Snd:
      return Proof::snd(substitute(p.inner(), pm, tm));
    case Proof::Kind::Inl:
      return Proof::inl(substitute(p.inner(), pm, tm), subst_ann(p.annotation(), tm));
    case Proof::Kind::Inr:
      return Proof::inr(substitute(p.inner(), pm, tm), subst_ann(p.annotation(), tm));
    case Proof::Kind::Case: {
      Proof scrut = substitute(p.scrutinee(), pm, tm);
      ProofMap pml = pm;
      std::string lh = guard_proof_binder(p.left_hyp(), p.left(), pml);
      Proof l = substitute(p.left(), std::move(pml), tm);
      ProofMap pmr = pm;
      std::string rh = guard_proof_binder(p.right_hyp(), p.right(), pmr);
      Proof r = substitute(p.right(), std::move(pmr), tm);
      return Proof::case_of(std::move(scrut), std::move(lh), std::move(l), std::move(rh),
                            std::move(r));
    }
    case Proof::Kind::ImpIntro: {
      std::optional<Prop> dom = subst_ann(p.annotation(), tm);
      ProofMap pmb = pm;
      std::string h = guard_proof_binder(p.hyp(), p.body(), pmb);
      return Proof::imp_intro(std::move(h), std::move(dom),
                              substitute(p.body(), std::move(pmb), tm));
    }
    case Proof::Kind::App:
      return Proof::app(substitute(p.fn(), pm, tm), substitute(p.arg(), pm, tm));
    case Proof::Kind::AllIntro: {
      Substitution tmb = tm;
      Var x = guard_term_binder(p.binder(), {&p.body()}, pm, tmb);
      return Proof::all_intro(std::move(x), substitute(p.body(), pm, std::move(tmb)));
    }
    case Proof::Kind::TApp:
      return Proof::tapp(substitute(p.fn(), pm, tm), apply_subst(tm, p.targ()));
    case Proof::Kind::Pack:
      return Proof::pack(apply_subst(tm, p.witness()), substitute(p.inner(), pm, tm),
                         subst_ann(p.annotation(), tm));
    case Proof::Kind::Unpack: {
      Proof scrut = substitute(p.scrutinee(), pm, tm);
      ProofMap pmb = pm;
      std::string h = guard_proof_binder(p.hyp(), p.body(), pmb);
      Substitution tmb = tm;
      Var x = guard_term_binder(p.binder(), {&p.body()}, pmb, tmb);
      return Proof::unpack(std::move(scrut), std::move(x), std::move(h),
                           substitute(p.body(), std::move(pmb), std::move(tmb)));
    }
  }
  throw std::logic_error("substitute: unreachable");
}

}  // namespace

Proof subst_proof(const Proof& p, const std::string& var, const Proof& replacement) {
  ProofMap pm;
  pm.emplace(var, replacement);
  return substitute(p, std::move(pm), {});
}

Proof subst_term_in_proof(const Proof& p, const Var& var, const Term& t) {
  Substitution tm;
  tm.bind(var, t);
  return substitute(p, {}, std::move(tm));
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

// The seven cut-elimination contractions, at the root only.
std::optional<Proof> contract_root(const Proof& p) {
  switch (p.kind()) {
    case Proof::Kind::Fst:
      if (p.inner().kind() == Proof::Kind::Pair) return p.inner().lhs();
      return std::nullopt;
    case Proof::Kind::Snd:
      if (p.inner().kind() == Proof::Kind::Pair) return p.inner().rhs();
      return std::nullopt;
    case Proof::Kind::Case: {
      const Proof& s = p.scrutinee();
      if (s.kind() == Proof::Kind::Inl) return subst_proof(p.left(), p.left_hyp(), s.inner());
      if (s.kind() == Proof::Kind::Inr) return subst_proof(p.right(), p.right_hyp(), s.inner());
      return std::nullopt;
    }
    case Proof::Kind::App:
      if (p.fn().kind() == Proof::Kind::ImpIntro)
        return subst_proof(p.fn().body(), p.fn().hyp(), p.arg());
      return std::nullopt;
    case Proof::Kind::TApp:
      if (p.fn().kind() == Proof::Kind::AllIntro)
        return subst_term_in_proof(p.fn().body(), p.fn().binder(), p.targ());
      return std::nullopt;
    case Proof::Kind::Unpack: {
      const Proof& s = p.scrutinee();
      if (s.kind() != Proof::Kind::Pack) return std::nullopt;
      ProofMap pm;
      pm.emplace(p.hyp(), s.inner());
      Substitution tm;
      tm.bind(p.binder(), s.witness());
      return substitute(p.body(), std::move(pm), std::move(tm));
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<Proof> reduce_step(const Proof& p) {
  if (auto r = contract_root(p)) return r;
  auto descend = [&](const Proof& child, auto rebuild) -> std::optional<Proof> {
    auto r = reduce_step(child);
    if (!r) return std::nullopt;
    return rebuild(std::move(*r));
  };
  switch (p.kind()) {
    case Proof::Kind::Var:
    case Proof::Kind::TopIntro:
      return std::nullopt;
    case Proof::Kind::BotElim:
      return descend(p.inner(), [&](Proof r) { return Proof::bot_elim(std::move(r), p.annotation()); });
    case Proof::Kind::Pair:
      if (auto l = descend(p.lhs(), [&](Proof r) { return Proof::pair(std::move(r), p.rhs()); }))
        return l;
      return descend(p.rhs(), [&](Proof r) { return Proof::pair(p.lhs(), std::move(r)); });
    case Proof::Kind::Fst:
      return descend(p.inner(), [](Proof r) { return Proof::fst(std::move(r)); });
    case Proof::Kind::Snd:
      return descend(p.inner(), [](Proof r) { return Proof::snd(std::move(r)); });
    case Proof::Kind::Inl:
      return descend(p.inner(), [&](Proof r) { return Proof::inl(std::move(r), p.annotation()); });
    case Proof::Kind::Inr:
      return descend(p.inner(), [&](Proof r) { return Proof::inr(std::move(r), p.annotation()); });
    case Proof::Kind::Case:
      if (auto s = descend(p.scrutinee(), [&](Proof r) {
            return Proof::case_of(std::move(r), p.left_hyp(), p.left(), p.right_hyp(), p.right());
          }))
        return s;
      if (auto l = descend(p.left(), [&](Proof r) {
            return Proof::case_of(p.scrutinee(), p.left_hyp(), std::move(r), p.right_hyp(),
                                  p.right());
          }))
        return l;
      return descend(p.right(), [&](Proof r) {
        return Proof::case_of(p.scrutinee(), p.left_hyp(), p.left(), p.right_hyp(), std::move(r));
      });
    case Proof::Kind::ImpIntro:
      return descend(p.body(), [&](Proof r) {
        return Proof::imp_intro(p.hyp(), p.annotation(), std::move(r));
      });
    case Proof::Kind::App:
      if (auto f = descend(p.fn(), [&](Proof r) { return Proof::app(std::move(r), p.arg()); }))
        return f;
      return descend(p.arg(), [&](Proof r) { return Proof::app(p.fn(), std::move(r)); });
    case Proof::Kind::AllIntro:
      return descend(p.body(), [&](Proof r) { return Proof::all_intro(p.binder(), std::move(r)); });
    case Proof::Kind::TApp:
      return descend(p.fn(), [&](Proof r) { return Proof::tapp(std::move(r), p.targ()); });
    case Proof::Kind::Pack:
      return descend(p.inner(), [&](Proof r) {
        return Proof::pack(p.witness(), std::move(r), p.annotation());
      });
    case Proof::Kind::Unpack:
      if (auto s = descend(p.scrutinee(), [&](Proof r) {
            return Proof::unpack(std::move(r), p.binder(), p.hyp(), p.body());
          }))
        return s;
      return descend(p.body(), [&](Proof r) {
        return Proof::unpack(p.scrutinee(), p.binder(), p.hyp(), std::move(r));
      });
  }
  return std::nullopt;
}

ReductionResult normalize_proof(const Proof& p, std::uint64_t fuel) {
  ReductionResult res{p, false, 0};
  while (res.steps < fuel) {
    auto next = reduce_step(res.value);
    if (!next) {
      res.normal = true;
      return res;
    }
    res.value = std::move(*next);
    ++res.steps;
  }
  res.normal = !reduce_step(res.value).has_value();
  return res;
}

bool is_neutral(const Proof& p) {
  switch (p.kind()) {
    case Proof::Kind::Var:
    case Proof::Kind::BotElim:
    case Proof::Kind::Fst:
    case Proof::Kind::Snd:
    case Proof::Kind::Case:
    case Proof::Kind::App:
    case Proof::Kind::TApp:
    case Proof::Kind::Unpack:
      return true;
    default:
      return false;
  }
}

bool is_introduction(const Proof& p) {
  switch (p.kind()) {
    case Proof::Kind::TopIntro:
    case Proof::Kind::Pair:
    case Proof::Kind::Inl:
    case Proof::Kind::Inr:
    case Proof::Kind::ImpIntro:
    case Proof::Kind::AllIntro:
    case Proof::Kind::Pack:
      return true;
    default:
      return false;
  }
}

Uniformity check_uniformity(const Proof& p) {
  if (!p.closed()) return Uniformity{false, "proof is not closed", false};
  if (reduce_step(p)) return Uniformity{false, "proof is not normal", false};
  return Uniformity{true, "", is_introduction(p)};
}

// ---------------------------------------------------------------------------
// Alpha equivalence, ignoring annotations

namespace {

struct ProofAlphaEnv {
  std::vector<std::pair<std::string, std::string>> pvars;
  std::vector<std::pair<Var, Var>> tvars;

  int classify_p(const std::string& a, const std::string& b) const {
    for (auto it = pvars.rbegin(); it != pvars.rend(); ++it) {
      bool ha = it->first == a;
      bool hb = it->second == b;
      if (ha || hb) return ha && hb ? 1 : -1;
    }
    return 0;
  }

  int classify_t(const Var& a, const Var& b) const {
    for (auto it = tvars.rbegin(); it != tvars.rend(); ++it) {
      bool ha = it->first == a;
      bool hb = it->second == b;
      if (ha || hb) return ha && hb ? 1 : -1;
    }
    return 0;
  }
};

bool alpha_term_env(const Term& a, const Term& b, ProofAlphaEnv& env);

bool alpha_term_args(const std::vector<Term>& as, const std::vector<Term>& bs,
                     ProofAlphaEnv& env) {
  if (as.size() != bs.size()) return false;
  for (std::size_t i = 0; i < as.size(); ++i)
    if (!alpha_term_env(as[i], bs[i], env)) return false;
  return true;
}

bool alpha_term_env(const Term& a, const Term& b, ProofAlphaEnv& env) {
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) {
    int c = env.classify_t(a.var(), b.var());
    if (c == 1) return true;
    if (c == -1) return false;
    return a.var() == b.var();
  }
  if (!head_eq(a.head(), b.head())) return false;
  return alpha_term_args(a.args(), b.args(), env);
}

bool alpha_proof(const Proof& a, const Proof& b, ProofAlphaEnv& env) {
  if (a.id() == b.id() && env.pvars.empty() && env.tvars.empty()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Proof::Kind::Var: {
      int c = env.classify_p(a.pvar(), b.pvar());
      if (c == 1) return true;
      if (c == -1) return false;
      return a.pvar() == b.pvar();
    }
    case Proof::Kind::TopIntro:
      return true;
    case Proof::Kind::BotElim:
    case Proof::Kind::Fst:
    case Proof::Kind::Snd:
    case Proof::Kind::Inl:
    case Proof::Kind::Inr:
      return alpha_proof(a.inner(), b.inner(), env);
    case Proof::Kind::Pair:
      return alpha_proof(a.lhs(), b.lhs(), env) && alpha_proof(a.rhs(), b.rhs(), env);
    case Proof::Kind::Case: {
      if (!alpha_proof(a.scrutinee(), b.scrutinee(), env)) return false;
      env.pvars.emplace_back(a.left_hyp(), b.left_hyp());
      bool okl = alpha_proof(a.left(), b.left(), env);
      env.pvars.pop_back();
      if (!okl) return false;
      env.pvars.emplace_back(a.right_hyp(), b.right_hyp());
      bool okr = alpha_proof(a.right(), b.right(), env);
      env.pvars.pop_back();
      return okr;
    }
    case Proof::Kind::ImpIntro: {
      env.pvars.emplace_back(a.hyp(), b.hyp());
      bool ok = alpha_proof(a.body(), b.body(), env);
      env.pvars.pop_back();
      return ok;
    }
    case Proof::Kind::App:
      return alpha_proof(a.fn(), b.fn(), env) && alpha_proof(a.arg(), b.arg(), env);
    case Proof::Kind::AllIntro: {
      if (a.binder().sort != b.binder().sort) return false;
      env.tvars.emplace_back(a.binder(), b.binder());
      bool ok = alpha_proof(a.body(), b.body(), env);
      env.tvars.pop_back();
      return ok;
    }
    case Proof::Kind::TApp:
      return alpha_proof(a.fn(), b.fn(), env) && alpha_term_env(a.targ(), b.targ(), env);
    case Proof::Kind::Pack:
      return alpha_term_env(a.witness(), b.witness(), env) && alpha_proof(a.inner(), b.inner(), env);
    case Proof::Kind::Unpack: {
      if (!alpha_proof(a.scrutinee(), b.scrutinee(), env)) return false;
      if (a.binder().sort != b.binder().sort) return false;
      env.tvars.emplace_back(a.binder(), b.binder());
      env.pvars.emplace_back(a.hyp(), b.hyp());
      bool ok = alpha_proof(a.body(), b.body(), env);
      env.pvars.pop_back();
      env.tvars.pop_back();
      return ok;
    }
  }
  return false;
}

void hash_mix(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

struct ProofHashEnv {
  std::vector<std::string> pvars;
  std::vector<Var> tvars;
};

void hash_term_env(const Term& t, ProofHashEnv& env, std::size_t& h) {
  if (t.is_var()) {
    for (std::size_t i = env.tvars.size(); i-- > 0;) {
      if (env.tvars[i] == t.var()) {
        hash_mix(h, 0xB1);
        hash_mix(h, env.tvars.size() - i);
        return;
      }
    }
    hash_mix(h, 0xF1);
    hash_mix(h, std::hash<std::string>{}(t.var().name));
    return;
  }
  // Head identity matters less than shape here; alpha_hash(Term) is the
  // precise one, this only feeds proof-level hashing.
  hash_mix(h, std::holds_alternative<FunctionSymbol>(t.head())
                  ? std::hash<std::string>{}(std::get<FunctionSymbol>(t.head()).name)
                  : 0xC0);
  for (const Term& a : t.args()) hash_term_env(a, env, h);
}

void hash_proof(const Proof& p, ProofHashEnv& env, std::size_t& h) {
  hash_mix(h, static_cast<std::size_t>(p.kind()));
  switch (p.kind()) {
    case Proof::Kind::Var: {
      for (std::size_t i = env.pvars.size(); i-- > 0;) {
        if (env.pvars[i] == p.pvar()) {
          hash_mix(h, 0xB2);
          hash_mix(h, env.pvars.size() - i);
          return;
        }
      }
      hash_mix(h, std::hash<std::string>{}(p.pvar()));
      return;
    }
    case Proof::Kind::TopIntro:
      return;
    case Proof::Kind::BotElim:
    case Proof::Kind::Fst:
    case Proof::Kind::Snd:
    case Proof::Kind::Inl:
    case Proof::Kind::Inr:
      hash_proof(p.inner(), env, h);
      return;
    case Proof::Kind::Pair:
      hash_proof(p.lhs(), env, h);
      hash_proof(p.rhs(), env, h);
      return;
    case Proof::Kind::Case:
      hash_proof(p.scrutinee(), env, h);
      env.pvars.push_back(p.left_hyp());
      hash_proof(p.left(), env, h);
      env.pvars.pop_back();
      env.pvars.push_back(p.right_hyp());
      hash_proof(p.right(), env, h);
      env.pvars.pop_back();
      return;
    case Proof::Kind::ImpIntro:
      env.pvars.push_back(p.hyp());
      hash_proof(p.body(), env, h);
      env.pvars.pop_back();
      return;
    case Proof::Kind::App:
      hash_proof(p.fn(), env, h);
      hash_proof(p.arg(), env, h);
      return;
    case Proof::Kind::AllIntro:
      env.tvars.push_back(p.binder());
      hash_proof(p.body(), env, h);
      env.tvars.pop_back();
      return;
    case Proof::Kind::TApp:
      hash_proof(p.fn(), env, h);
      hash_term_env(p.targ(), env, h);
      return;
    case Proof::Kind::Pack:
      hash_term_env(p.witness(), env, h);
      hash_proof(p.inner(), env, h);
      return;
    case Proof::Kind::Unpack:
      hash_proof(p.scrutinee(), env, h);
      env.tvars.push_back(p.binder());
      env.pvars.push_back(p.hyp());
      hash_proof(p.body(), env, h);
      env.pvars.pop_back();
      env.tvars.pop_back();
      return;
  }
}

}  // namespace

bool alpha_eq(const Proof& a, const Proof& b) {
  ProofAlphaEnv env;
  return alpha_proof(a, b, env);
}

std::size_t alpha_hash(const Proof& p) {
  ProofHashEnv env;
  std::size_t h = 0x5a17;
  hash_proof(p, env, h);
  return h;
}

}  // namespace dm
