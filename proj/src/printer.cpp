#include <sstream>

#include "dm/syntax.hpp"

// Canonical renderings. The parser accepts exactly what these emit, which the
// round-trip tests rely on.
//
// Proposition precedence, loosest first:  quantifiers  =>  \/  /\  atoms.
// Term precedence:                         +  *  atoms.

namespace dm {

namespace {

void print_term(std::ostream& os, const Term& t, int min_level);
void print_prop(std::ostream& os, const Prop& p, int min_level);

void print_args(std::ostream& os, const std::vector<Term>& args) {
  os << '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    print_term(os, args[i], 1);
  }
  os << ')';
}

void print_comp(std::ostream& os, const ComprehensionSymbol& c) {
  os << '{';
  for (std::size_t i = 0; i < c.bound.size(); ++i) {
    if (i) os << ' ';
    os << c.bound[i].name;
  }
  os << " |";
  for (const Var& p : c.params) os << ' ' << p.name;
  os << " | ";
  print_prop(os, *c.body, 0);
  os << '}';
}

void print_term(std::ostream& os, const Term& t, int min_level) {
  if (t.is_var()) {
    os << t.var().name;
    return;
  }
  const TermHead& h = t.head();
  const auto& args = t.args();
  if (const auto* f = std::get_if<FunctionSymbol>(&h)) {
    if (args.size() == 2 && (f->name == "+" || f->name == "*")) {
      int level = f->name == "+" ? 1 : 2;
      bool parens = level < min_level;
      if (parens) os << '(';
      print_term(os, args[0], level);
      os << ' ' << f->name << ' ';
      print_term(os, args[1], level + 1);
      if (parens) os << ')';
      return;
    }
    os << f->name;
    if (!args.empty()) print_args(os, args);
    return;
  }
  print_comp(os, std::get<ComprehensionSymbol>(h));
  if (!args.empty()) print_args(os, args);
}

void print_prop(std::ostream& os, const Prop& p, int min_level) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      const auto& args = p.args();
      if (p.pred().name == "=" && args.size() == 2) {
        print_term(os, args[0], 1);
        os << " = ";
        print_term(os, args[1], 1);
        return;
      }
      os << p.pred().name;
      if (!args.empty()) print_args(os, args);
      return;
    }
    case Prop::Kind::Top:
      os << "top";
      return;
    case Prop::Kind::Bottom:
      os << "bot";
      return;
    case Prop::Kind::Implies:
    case Prop::Kind::Or:
    case Prop::Kind::And: {
      int level = p.kind() == Prop::Kind::Implies ? 1 : p.kind() == Prop::Kind::Or ? 2 : 3;
      const char* op = p.kind() == Prop::Kind::Implies ? "=>" : p.kind() == Prop::Kind::Or ? "\\/" : "/\\";
      bool parens = level < min_level;
      if (parens) os << '(';
      if (p.kind() == Prop::Kind::Implies) {
        // Right-associative.
        print_prop(os, p.lhs(), level + 1);
        os << ' ' << op << ' ';
        print_prop(os, p.rhs(), level);
      } else {
        print_prop(os, p.lhs(), level);
        os << ' ' << op << ' ';
        print_prop(os, p.rhs(), level + 1);
      }
      if (parens) os << ')';
      return;
    }
    case Prop::Kind::Forall:
    case Prop::Kind::Exists: {
      bool parens = min_level > 0;
      if (parens) os << '(';
      os << (p.kind() == Prop::Kind::Forall ? "forall " : "exists ");
      os << p.binder().name << ':' << p.binder().sort.name << ", ";
      print_prop(os, p.body(), 0);
      if (parens) os << ')';
      return;
    }
  }
}

}  // namespace

std::string to_text(const Term& t) {
  std::ostringstream os;
  print_term(os, t, 0);
  return os.str();
}

std::string to_text(const Prop& p) {
  std::ostringstream os;
  print_prop(os, p, 0);
  return os.str();
}

}  // namespace dm
