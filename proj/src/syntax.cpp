#include "dm/syntax.hpp"

#include <algorithm>
#include <stdexcept>

namespace dm {

Sort iota_sort() { return Sort{"iota"}; }

Sort class_sort(std::size_t arity) {
  if (arity <= 1) return Sort{"kappa"};
  return Sort{"kappa_" + std::to_string(arity)};
}

// ---------------------------------------------------------------------------
// Nodes

namespace {

std::vector<Var> merge_sorted(std::vector<Var> a, const std::vector<Var>& b) {
  std::vector<Var> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Var> erase_var(std::vector<Var> vs, const Var& v) {
  vs.erase(std::remove(vs.begin(), vs.end(), v), vs.end());
  return vs;
}

}  // namespace

struct Term::Node {
  struct App {
    TermHead head;
    std::vector<Term> args;
  };
  std::variant<Var, App> v;
  Sort sort;
  std::vector<Var> fv;
};

struct Prop::Node {
  struct Atom {
    PredicateSymbol pred;
    std::vector<Term> args;
  };
  struct Conn {
    Prop l, r;
  };
  struct Quant {
    Var binder;
    Prop body;
  };
  Kind kind;
  std::variant<std::monostate, Atom, Conn, Quant> v;
  std::vector<Var> fv;
};

// ---------------------------------------------------------------------------
// Heads

bool comp_eq(const ComprehensionSymbol& a, const ComprehensionSymbol& b) {
  if (a.bound.size() != b.bound.size() || a.params.size() != b.params.size())
    return false;
  // Rename both binder lists onto one canonical list and compare bodies.
  // Bodies are closed over bound+params, so the canonical names cannot clash.
  Substitution ra, rb;
  std::size_t counter = 0;
  auto pair_up = [&](const std::vector<Var>& xs, const std::vector<Var>& ys) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i].sort != ys[i].sort) return false;
      Var canon{"#c" + std::to_string(counter++), xs[i].sort};
      ra.bind(xs[i], Term::variable(canon));
      rb.bind(ys[i], Term::variable(canon));
    }
    return true;
  };
  if (!pair_up(a.bound, b.bound)) return false;
  if (!pair_up(a.params, b.params)) return false;
  return alpha_eq(apply_subst(ra, *a.body), apply_subst(rb, *b.body));
}

bool head_eq(const TermHead& a, const TermHead& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<FunctionSymbol>(a))
    return std::get<FunctionSymbol>(a) == std::get<FunctionSymbol>(b);
  return comp_eq(std::get<ComprehensionSymbol>(a), std::get<ComprehensionSymbol>(b));
}

std::size_t head_arity(const TermHead& h) {
  if (const auto* f = std::get_if<FunctionSymbol>(&h)) return f->arg_sorts.size();
  return std::get<ComprehensionSymbol>(h).params.size();
}

Sort head_result_sort(const TermHead& h) {
  if (const auto* f = std::get_if<FunctionSymbol>(&h)) return f->result_sort;
  return class_sort(std::get<ComprehensionSymbol>(h).bound.size());
}

std::vector<Sort> head_arg_sorts(const TermHead& h) {
  if (const auto* f = std::get_if<FunctionSymbol>(&h)) return f->arg_sorts;
  const auto& c = std::get<ComprehensionSymbol>(h);
  std::vector<Sort> out;
  out.reserve(c.params.size());
  for (const Var& p : c.params) out.push_back(p.sort);
  return out;
}

// ---------------------------------------------------------------------------
// Term construction and accessors

Term Term::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->sort = v.sort;
  n->fv = {v};
  n->v = std::move(v);
  return Term(std::move(n));
}

Term Term::app(TermHead head, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->sort = head_result_sort(head);
  std::vector<Var> fv;
  for (const Term& a : args) fv = merge_sorted(std::move(fv), a.free());
  n->fv = std::move(fv);
  n->v = Node::App{std::move(head), std::move(args)};
  return Term(std::move(n));
}

Term Term::app(FunctionSymbol f, std::vector<Term> args) {
  return app(TermHead{std::move(f)}, std::move(args));
}

bool Term::is_var() const { return n_ && std::holds_alternative<Var>(n_->v); }
bool Term::is_app() const { return n_ && !std::holds_alternative<Var>(n_->v); }

const Var& Term::var() const {
  if (!is_var()) throw std::logic_error("Term::var on non-variable");
  return std::get<Var>(n_->v);
}

const TermHead& Term::head() const {
  if (!is_app()) throw std::logic_error("Term::head on non-application");
  return std::get<Node::App>(n_->v).head;
}

const std::vector<Term>& Term::args() const {
  if (!is_app()) throw std::logic_error("Term::args on non-application");
  return std::get<Node::App>(n_->v).args;
}

Sort Term::sort() const {
  if (!n_) throw std::logic_error("Term::sort on empty term");
  return n_->sort;
}

const std::vector<Var>& Term::free() const {
  if (!n_) throw std::logic_error("Term::free on empty term");
  return n_->fv;
}

// ---------------------------------------------------------------------------
// Prop construction and accessors

Prop Prop::atom(PredicateSymbol pred, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  std::vector<Var> fv;
  for (const Term& a : args) fv = merge_sorted(std::move(fv), a.free());
  n->fv = std::move(fv);
  n->v = Node::Atom{std::move(pred), std::move(args)};
  return Prop(std::move(n));
}

Prop Prop::top() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Top;
  return Prop(std::move(n));
}

Prop Prop::bottom() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bottom;
  return Prop(std::move(n));
}

Prop Prop::connective(Kind k, Prop l, Prop r) {
  if (k != Kind::And && k != Kind::Or && k != Kind::Implies)
    throw std::logic_error("Prop::connective: bad kind");
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->fv = merge_sorted(l.free(), r.free());
  n->v = Node::Conn{std::move(l), std::move(r)};
  return Prop(std::move(n));
}

Prop Prop::conj(Prop l, Prop r) { return connective(Kind::And, std::move(l), std::move(r)); }
Prop Prop::disj(Prop l, Prop r) { return connective(Kind::Or, std::move(l), std::move(r)); }
Prop Prop::implies(Prop l, Prop r) { return connective(Kind::Implies, std::move(l), std::move(r)); }

Prop Prop::quant(Kind k, Var v, Prop body) {
  if (k != Kind::Forall && k != Kind::Exists)
    throw std::logic_error("Prop::quant: bad kind");
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->fv = erase_var(body.free(), v);
  n->v = Node::Quant{std::move(v), std::move(body)};
  return Prop(std::move(n));
}

Prop Prop::forall(Var v, Prop body) { return quant(Kind::Forall, std::move(v), std::move(body)); }
Prop Prop::exists(Var v, Prop body) { return quant(Kind::Exists, std::move(v), std::move(body)); }

Prop::Kind Prop::kind() const {
  if (!n_) throw std::logic_error("Prop::kind on empty prop");
  return n_->kind;
}

bool Prop::is_connective() const {
  Kind k = kind();
  return k == Kind::And || k == Kind::Or || k == Kind::Implies;
}

bool Prop::is_quant() const {
  Kind k = kind();
  return k == Kind::Forall || k == Kind::Exists;
}

const PredicateSymbol& Prop::pred() const {
  if (kind() != Kind::Atom) throw std::logic_error("Prop::pred on non-atom");
  return std::get<Node::Atom>(n_->v).pred;
}

const std::vector<Term>& Prop::args() const {
  if (kind() != Kind::Atom) throw std::logic_error("Prop::args on non-atom");
  return std::get<Node::Atom>(n_->v).args;
}

const Prop& Prop::lhs() const {
  if (!is_connective()) throw std::logic_error("Prop::lhs on non-connective");
  return std::get<Node::Conn>(n_->v).l;
}

const Prop& Prop::rhs() const {
  if (!is_connective()) throw std::logic_error("Prop::rhs on non-connective");
  return std::get<Node::Conn>(n_->v).r;
}

const Var& Prop::binder() const {
  if (!is_quant()) throw std::logic_error("Prop::binder on non-quantifier");
  return std::get<Node::Quant>(n_->v).binder;
}

const Prop& Prop::body() const {
  if (!is_quant()) throw std::logic_error("Prop::body on non-quantifier");
  return std::get<Node::Quant>(n_->v).body;
}

const std::vector<Var>& Prop::free() const {
  if (!n_) throw std::logic_error("Prop::free on empty prop");
  return n_->fv;
}

// ---------------------------------------------------------------------------
// Free variables

VarSet free_vars(const Term& t) { return VarSet(t.free().begin(), t.free().end()); }
VarSet free_vars(const Prop& p) { return VarSet(p.free().begin(), p.free().end()); }

// ---------------------------------------------------------------------------
// Substitution

void Substitution::bind(Var v, Term t) {
  if (t.sort() != v.sort)
    throw std::invalid_argument("substitution binds " + v.name + ":" + v.sort.name +
                                " to a term of sort " + t.sort().name);
  map_.insert_or_assign(std::move(v), std::move(t));
}

const Term* Substitution::lookup(const Var& v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

Substitution Substitution::without(const Var& v) const {
  Substitution s = *this;
  s.map_.erase(v);
  return s;
}

namespace {

bool subst_hits(const Substitution& s, const std::vector<Var>& fv) {
  for (const Var& v : fv)
    if (s.contains(v)) return true;
  return false;
}

std::set<std::string> range_free_names(const Substitution& s, const std::vector<Var>& relevant) {
  std::set<std::string> names;
  for (const Var& v : relevant) {
    if (const Term* t = s.lookup(v))
      for (const Var& w : t->free()) names.insert(w.name);
  }
  return names;
}

}  // namespace

Term apply_subst(const Substitution& s, const Term& t) {
  if (s.empty() || !subst_hits(s, t.free())) return t;
  if (t.is_var()) {
    const Term* r = s.lookup(t.var());
    return r ? *r : t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(apply_subst(s, a));
  // Comprehension bodies are closed over their own binders, so the head is
  // untouched.
  return Term::app(t.head(), std::move(args));
}

Prop apply_subst(const Substitution& s, const Prop& p) {
  if (s.empty() || !subst_hits(s, p.free())) return p;
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(p.args().size());
      for (const Term& a : p.args()) args.push_back(apply_subst(s, a));
      return Prop::atom(p.pred(), std::move(args));
    }
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return p;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies:
      return Prop::connective(p.kind(), apply_subst(s, p.lhs()), apply_subst(s, p.rhs()));
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      Var b = p.binder();
      Substitution inner = s.without(b);
      if (inner.empty() || !subst_hits(inner, p.body().free())) return p;
      std::set<std::string> avoid = range_free_names(inner, p.body().free());
      if (avoid.count(b.name)) {
        for (const Var& v : p.body().free()) avoid.insert(v.name);
        Var fresh{fresh_name(b.name, avoid), b.sort};
        inner.bind(b, Term::variable(fresh));
        return Prop::quant(p.kind(), fresh, apply_subst(inner, p.body()));
      }
      return Prop::quant(p.kind(), b, apply_subst(inner, p.body()));
    }
  }
  throw std::logic_error("apply_subst: unreachable");
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

// Paired binder environments: bound variables are compared by binding depth.
struct AlphaEnv {
  std::vector<std::pair<Var, Var>> pairs;

  void push(const Var& a, const Var& b) { pairs.emplace_back(a, b); }
  void pop() { pairs.pop_back(); }

  // Returns: 0 = both free, 1 = matched bound pair, -1 = mismatch.
  int classify(const Var& a, const Var& b) const {
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
      bool hita = it->first == a;
      bool hitb = it->second == b;
      if (hita || hitb) return (hita && hitb) ? 1 : -1;
    }
    return 0;
  }
};

bool alpha_term(const Term& a, const Term& b, AlphaEnv& env);

bool alpha_args(const std::vector<Term>& as, const std::vector<Term>& bs, AlphaEnv& env) {
  if (as.size() != bs.size()) return false;
  for (std::size_t i = 0; i < as.size(); ++i)
    if (!alpha_term(as[i], bs[i], env)) return false;
  return true;
}

bool alpha_term(const Term& a, const Term& b, AlphaEnv& env) {
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) {
    const Var& va = a.var();
    const Var& vb = b.var();
    int c = env.classify(va, vb);
    if (c == 1) return true;
    if (c == -1) return false;
    return va == vb;
  }
  if (!head_eq(a.head(), b.head())) return false;
  return alpha_args(a.args(), b.args(), env);
}

bool alpha_prop(const Prop& a, const Prop& b, AlphaEnv& env) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Prop::Kind::Atom:
      if (!(a.pred() == b.pred())) return false;
      return alpha_args(a.args(), b.args(), env);
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return true;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies:
      return alpha_prop(a.lhs(), b.lhs(), env) && alpha_prop(a.rhs(), b.rhs(), env);
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      if (a.binder().sort != b.binder().sort) return false;
      env.push(a.binder(), b.binder());
      bool ok = alpha_prop(a.body(), b.body(), env);
      env.pop();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  AlphaEnv env;
  return alpha_term(a, b, env);
}

bool alpha_eq(const Prop& a, const Prop& b) {
  AlphaEnv env;
  return alpha_prop(a, b, env);
}

// ---------------------------------------------------------------------------
// Alpha-invariant hashing

namespace {

void hash_mix(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

std::size_t hash_str(const std::string& s) { return std::hash<std::string>{}(s); }

// Bound variables hash to their binding depth; free ones to their name.
struct HashEnv {
  std::vector<Var> binders;

  std::optional<std::size_t> depth_of(const Var& v) const {
    for (std::size_t i = binders.size(); i-- > 0;)
      if (binders[i] == v) return binders.size() - i;
    return std::nullopt;
  }
};

void hash_term(const Term& t, HashEnv& env, std::size_t& h);
void hash_prop_impl(const Prop& p, HashEnv& env, std::size_t& h);

void hash_head(const TermHead& head, std::size_t& h) {
  if (const auto* f = std::get_if<FunctionSymbol>(&head)) {
    hash_mix(h, 0xF);
    hash_mix(h, hash_str(f->name));
  } else {
    const auto& c = std::get<ComprehensionSymbol>(head);
    hash_mix(h, 0xC);
    hash_mix(h, c.bound.size());
    hash_mix(h, c.params.size());
    // Hash the body with its own environment; outer binders cannot occur.
    HashEnv inner;
    for (const Var& v : c.bound) inner.binders.push_back(v);
    for (const Var& v : c.params) inner.binders.push_back(v);
    std::size_t hb = 0;
    hash_prop_impl(*c.body, inner, hb);
    hash_mix(h, hb);
  }
}

void hash_term(const Term& t, HashEnv& env, std::size_t& h) {
  if (t.is_var()) {
    if (auto d = env.depth_of(t.var())) {
      hash_mix(h, 0xB0);
      hash_mix(h, *d);
    } else {
      hash_mix(h, 0xF0);
      hash_mix(h, hash_str(t.var().name));
      hash_mix(h, hash_str(t.var().sort.name));
    }
    return;
  }
  hash_head(t.head(), h);
  hash_mix(h, t.args().size());
  for (const Term& a : t.args()) hash_term(a, env, h);
}

void hash_prop_impl(const Prop& p, HashEnv& env, std::size_t& h) {
  hash_mix(h, static_cast<std::size_t>(p.kind()));
  switch (p.kind()) {
    case Prop::Kind::Atom:
      hash_mix(h, hash_str(p.pred().name));
      for (const Term& a : p.args()) hash_term(a, env, h);
      return;
    case Prop::Kind::Top:
    case Prop::Kind::Bottom:
      return;
    case Prop::Kind::And:
    case Prop::Kind::Or:
    case Prop::Kind::Implies:
      hash_prop_impl(p.lhs(), env, h);
      hash_prop_impl(p.rhs(), env, h);
      return;
    case Prop::Kind::Forall:
    case Prop::Kind::Exists:
      hash_mix(h, hash_str(p.binder().sort.name));
      env.binders.push_back(p.binder());
      hash_prop_impl(p.body(), env, h);
      env.binders.pop_back();
      return;
  }
}

}  // namespace

std::size_t alpha_hash(const Term& t) {
  HashEnv env;
  std::size_t h = 0x7e47;
  hash_term(t, env, h);
  return h;
}

std::size_t alpha_hash(const Prop& p) {
  HashEnv env;
  std::size_t h = 0x9a0b;
  hash_prop_impl(p, env, h);
  return h;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string name = base;
  while (taken.count(name)) name += '\'';
  return name;
}

// ---------------------------------------------------------------------------
// Signature and sorting

bool Signature::has_sort(const Sort& s) const {
  for (const Sort& t : sorts)
    if (t == s) return true;
  return false;
}

const FunctionSymbol* Signature::function(std::string_view name) const {
  for (const FunctionSymbol& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const PredicateSymbol* Signature::predicate(std::string_view name) const {
  for (const PredicateSymbol& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

void Signature::add_sort(Sort s) {
  if (has_sort(s)) throw std::invalid_argument("duplicate sort " + s.name);
  sorts.push_back(std::move(s));
}

void Signature::add_function(FunctionSymbol f) {
  if (function(f.name)) throw std::invalid_argument("duplicate function symbol " + f.name);
  functions.push_back(std::move(f));
}

void Signature::add_predicate(PredicateSymbol p) {
  if (predicate(p.name)) throw std::invalid_argument("duplicate predicate symbol " + p.name);
  predicates.push_back(std::move(p));
}

namespace {

struct SortChecker {
  explicit SortChecker(const Signature& s) : sig(s) {}
  const Signature& sig;
  std::string error;
  // Sorts of variables seen so far, to reject one name used at two sorts
  // within a scope. Binders shadow.
  std::vector<std::map<std::string, Sort>> scopes{1};

  bool fail(const std::string& msg) {
    if (error.empty()) error = msg;
    return false;
  }

  bool var_ok(const Var& v) {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto hit = it->find(v.name);
      if (hit != it->end()) {
        if (hit->second != v.sort)
          return fail("variable " + v.name + " used at sorts " + hit->second.name + " and " +
                      v.sort.name);
        return true;
      }
    }
    scopes.back().emplace(v.name, v.sort);
    return true;
  }

  bool term_ok(const Term& t) {
    if (t.empty()) return fail("empty term");
    if (t.is_var()) {
      if (!sig.has_sort(t.var().sort))
        return fail("unknown sort " + t.var().sort.name + " of variable " + t.var().name);
      return var_ok(t.var());
    }
    const TermHead& h = t.head();
    if (const auto* f = std::get_if<FunctionSymbol>(&h)) {
      const FunctionSymbol* declared = sig.function(f->name);
      if (!declared) return fail("unknown function symbol " + f->name);
      if (!(*declared == *f))
        return fail("function symbol " + f->name + " disagrees with its declaration");
    } else {
      const auto& c = std::get<ComprehensionSymbol>(h);
      if (c.bound.empty()) return fail("comprehension symbol with no bound variables");
      for (const Var& v : c.bound)
        if (v.sort != iota_sort()) return fail("comprehension binder " + v.name + " not of sort iota");
      for (const Var& v : c.params)
        if (v.sort != iota_sort()) return fail("comprehension parameter " + v.name + " not of sort iota");
      VarSet allowed(c.bound.begin(), c.bound.end());
      allowed.insert(c.params.begin(), c.params.end());
      for (const Var& v : c.body->free())
        if (!allowed.count(v))
          return fail("comprehension body has stray free variable " + v.name);
      scopes.emplace_back();
      for (const Var& v : c.bound) scopes.back().emplace(v.name, v.sort);
      for (const Var& v : c.params) scopes.back().emplace(v.name, v.sort);
      bool ok = prop_ok(*c.body);
      scopes.pop_back();
      if (!ok) return false;
    }
    std::vector<Sort> want = head_arg_sorts(h);
    if (want.size() != t.args().size())
      return fail("arity mismatch at " + to_text(t));
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (!term_ok(t.args()[i])) return false;
      if (t.args()[i].sort() != want[i])
        return fail("sort mismatch at argument " + std::to_string(i + 1) + " of " + to_text(t));
    }
    return true;
  }

  bool prop_ok(const Prop& p) {
    if (p.empty()) return fail("empty proposition");
    switch (p.kind()) {
      case Prop::Kind::Atom: {
        const PredicateSymbol* declared = sig.predicate(p.pred().name);
        if (!declared) return fail("unknown predicate symbol " + p.pred().name);
        if (!(*declared == p.pred()))
          return fail("predicate symbol " + p.pred().name + " disagrees with its declaration");
        if (p.pred().arg_sorts.size() != p.args().size())
          return fail("arity mismatch at " + to_text(p));
        for (std::size_t i = 0; i < p.args().size(); ++i) {
          if (!term_ok(p.args()[i])) return false;
          if (p.args()[i].sort() != p.pred().arg_sorts[i])
            return fail("sort mismatch at argument " + std::to_string(i + 1) + " of " + to_text(p));
        }
        return true;
      }
      case Prop::Kind::Top:
      case Prop::Kind::Bottom:
        return true;
      case Prop::Kind::And:
      case Prop::Kind::Or:
      case Prop::Kind::Implies:
        return prop_ok(p.lhs()) && prop_ok(p.rhs());
      case Prop::Kind::Forall:
      case Prop::Kind::Exists: {
        if (!sig.has_sort(p.binder().sort))
          return fail("unknown sort " + p.binder().sort.name + " of binder " + p.binder().name);
        scopes.emplace_back();
        scopes.back().emplace(p.binder().name, p.binder().sort);
        bool ok = prop_ok(p.body());
        scopes.pop_back();
        return ok;
      }
    }
    return fail("unreachable");
  }
};

}  // namespace

SortCheck check_sorting(const Signature& sig, const Term& t) {
  SortChecker c(sig);
  bool ok = c.term_ok(t);
  return SortCheck{ok, c.error};
}

SortCheck check_sorting(const Signature& sig, const Prop& p) {
  SortChecker c(sig);
  bool ok = c.prop_ok(p);
  return SortCheck{ok, c.error};
}

}  // namespace dm
