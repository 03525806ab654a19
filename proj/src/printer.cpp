#include <sstream>

#include "npi/syntax.hpp"

namespace npi {

namespace {

int precedence(const Expr &e) {
  switch (e->op) {
  case Op::Labeled:
    return precedence(e->kids[0]);
  case Op::Iff:
    return 1;
  case Op::Implies:
    return 2;
  case Op::Or:
    return 3;
  case Op::And:
    return 4;
  case Op::Not:
    return 5;
  case Op::Eq:
  case Op::Ne:
  case Op::Lt:
  case Op::Le:
  case Op::Gt:
  case Op::Ge:
    return 6;
  case Op::Add:
  case Op::Sub:
    return 7;
  case Op::Mul:
    return 8;
  case Op::Neg:
    return 9;
  case Op::IntLit:
    return e->value < 0 ? 9 : 10;
  default:
    return 10;
  }
}

const char *cmp_text(Op op) {
  switch (op) {
  case Op::Eq:
    return " == ";
  case Op::Ne:
    return " != ";
  case Op::Lt:
    return " < ";
  case Op::Le:
    return " <= ";
  case Op::Gt:
    return " > ";
  case Op::Ge:
    return " >= ";
  default:
    return " ? ";
  }
}

void print(std::ostream &os, const Expr &e);

void print_at(std::ostream &os, const Expr &e, int min_prec) {
  if (precedence(e) < min_prec) {
    os << '(';
    print(os, e);
    os << ')';
  } else {
    print(os, e);
  }
}

void print_binders(std::ostream &os, const std::vector<Binder> &bs) {
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (i)
      os << ", ";
    os << bs[i].name << ":" << bs[i].sort.str();
  }
}

void print(std::ostream &os, const Expr &e) {
  switch (e->op) {
  case Op::Var:
    os << e->name;
    return;
  case Op::IntLit:
    os << e->value;
    return;
  case Op::BoolLit:
    os << (e->value ? "true" : "false");
    return;
  case Op::Neg:
    os << '-';
    print_at(os, e->kids[0], 9);
    return;
  case Op::Add:
  case Op::Sub:
    print_at(os, e->kids[0], 7);
    os << (e->op == Op::Add ? " + " : " - ");
    print_at(os, e->kids[1], 8);
    return;
  case Op::Mul:
    os << e->value << " * ";
    print_at(os, e->kids[0], 9);
    return;
  case Op::App:
    os << e->name << '(';
    for (std::size_t i = 0; i < e->kids.size(); ++i) {
      if (i)
        os << ", ";
      print(os, e->kids[i]);
    }
    os << ')';
    return;
  case Op::Select:
    print_at(os, e->kids[0], 10);
    os << '[';
    print(os, e->kids[1]);
    os << ']';
    return;
  case Op::Store:
    print_at(os, e->kids[0], 10);
    os << '[';
    print(os, e->kids[1]);
    os << " := ";
    print(os, e->kids[2]);
    os << ']';
    return;
  case Op::Ite:
    os << "ite(";
    print(os, e->kids[0]);
    os << ", ";
    print(os, e->kids[1]);
    os << ", ";
    print(os, e->kids[2]);
    os << ')';
    return;
  case Op::Eq:
  case Op::Ne:
  case Op::Lt:
  case Op::Le:
  case Op::Gt:
  case Op::Ge:
    print_at(os, e->kids[0], 7);
    os << cmp_text(e->op);
    print_at(os, e->kids[1], 7);
    return;
  case Op::Not:
    os << '!';
    print_at(os, e->kids[0], 10);
    return;
  case Op::And:
  case Op::Or:
    for (std::size_t i = 0; i < e->kids.size(); ++i) {
      if (i)
        os << (e->op == Op::And ? " && " : " || ");
      print_at(os, e->kids[i], precedence(e) + 1);
    }
    return;
  case Op::Implies:
    print_at(os, e->kids[0], 3);
    os << " ==> ";
    print_at(os, e->kids[1], 2);
    return;
  case Op::Iff:
    print_at(os, e->kids[0], 2);
    os << " <==> ";
    print_at(os, e->kids[1], 2);
    return;
  case Op::Forall:
  case Op::Exists:
    os << '(' << (e->op == Op::Forall ? "forall " : "exists ");
    print_binders(os, e->binders);
    os << " :: ";
    if (!e->triggers.empty()) {
      os << '{';
      for (std::size_t i = 0; i < e->triggers.size(); ++i) {
        if (i)
          os << ", ";
        print(os, e->triggers[i]);
      }
      os << "} ";
    }
    print(os, e->kids[0]);
    os << ')';
    return;
  case Op::HoleRef:
    os << '?' << e->name;
    return;
  case Op::Labeled:
    print(os, e->kids[0]);
    return;
  }
}

void indent_to(std::ostream &os, int n) {
  for (int i = 0; i < n; ++i)
    os << "  ";
}

void print_block(std::ostream &os, const std::vector<StmtPtr> &body, int indent) {
  os << "{\n";
  for (const auto &s : body)
    os << to_string(s, indent + 1);
  indent_to(os, indent);
  os << '}';
}

} // namespace

std::string to_string(const Expr &e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

std::string to_string(const StmtPtr &s, int indent) {
  std::ostringstream os;
  indent_to(os, indent);
  switch (s->kind) {
  case StmtKind::Assign:
    os << s->target << " := " << to_string(s->value) << ";\n";
    break;
  case StmtKind::ArrayAssign:
    os << s->target << '[' << to_string(s->index) << "] := " << to_string(s->value) << ";\n";
    break;
  case StmtKind::Havoc:
    os << "havoc " << s->target << ";\n";
    break;
  case StmtKind::Assume:
    os << "assume " << to_string(s->cond) << ";\n";
    break;
  case StmtKind::Assert:
    os << "assert " << to_string(s->cond) << ";\n";
    break;
  case StmtKind::If:
    os << "if (" << to_string(s->cond) << ") ";
    print_block(os, s->then_body, indent);
    if (!s->else_body.empty()) {
      os << " else ";
      print_block(os, s->else_body, indent);
    }
    os << '\n';
    break;
  case StmtKind::While:
    os << "while (" << to_string(s->cond) << ") invariant ?" << s->hole << "; ";
    print_block(os, s->then_body, indent);
    os << '\n';
    break;
  case StmtKind::Cut:
    os << "invariant ?" << s->hole << ";\n";
    break;
  }
  return os.str();
}

std::string to_string(const Program &p) {
  std::ostringstream os;
  for (const auto &[k, v] : p.pragmas)
    os << "// " << k << ": " << v << '\n';
  for (const auto &s : p.sorts)
    os << "type " << s << ";\n";
  for (const auto &[n, s] : p.vars)
    os << "var " << n << ": " << s.str() << ";\n";
  for (const auto &f : p.functions) {
    os << "function " << f.name << '(';
    for (std::size_t i = 0; i < f.args.size(); ++i)
      os << (i ? ", " : "") << f.args[i].str();
    os << "): " << f.result.str() << ";\n";
  }
  for (const auto &a : p.axioms)
    os << "axiom " << to_string(a) << ";\n";
  for (const auto &pp : p.pinned)
    os << "predicate ?" << pp.hole << ' ' << pp.name << " : " << to_string(pp.body) << ";\n";
  os << "procedure " << p.proc_name << "()\n";
  for (const auto &r : p.requires_)
    os << "  requires " << to_string(r) << ";\n";
  for (const auto &r : p.ensures)
    os << "  ensures " << to_string(r) << ";\n";
  print_block(os, p.body, 0);
  os << '\n';
  return os.str();
}

} // namespace npi
