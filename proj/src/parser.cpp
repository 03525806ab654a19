#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "npi/syntax.hpp"

namespace npi {

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

const char *const kPuncts[] = {"<==>", "==>", ":=", "::", "==", "!=", "<=", ">=", "&&", "||", "<", ">", "!",
                               "+",    "-",   "*",  "(",  ")",  "{",  "}",  "[",  "]",  ":",  ";", ",", "?"};

class Lexer {
public:
  Lexer(std::string_view src, std::multimap<std::string, std::string> *pragmas) : src_(src), pragmas_(pragmas) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t b = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                                      src_[pos_] == '\'' || src_[pos_] == '.'))
          advance();
        t.kind = Tok::Ident;
        t.text = std::string(src_.substr(b, pos_ - b));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t b = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          advance();
        t.kind = Tok::Int;
        t.text = std::string(src_.substr(b, pos_ - b));
      } else {
        bool found = false;
        for (const char *p : kPuncts) {
          std::string_view pv(p);
          if (src_.substr(pos_, pv.size()) == pv) {
            t.kind = Tok::Punct;
            t.text = std::string(pv);
            for (std::size_t i = 0; i < pv.size(); ++i)
              advance();
            found = true;
            break;
          }
        }
        if (!found)
          throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
      }
      out.push_back(std::move(t));
    }
  }

private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
        advance();
      if (src_.substr(pos_, 2) == "//") {
        std::size_t b = pos_ + 2;
        while (pos_ < src_.size() && src_[pos_] != '\n')
          advance();
        record_pragma(src_.substr(b, pos_ - b));
        continue;
      }
      if (src_.substr(pos_, 2) == "/*") {
        int l = line_, c = col_;
        advance();
        advance();
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/")
          advance();
        if (pos_ >= src_.size())
          throw ParseError("unterminated comment", l, c);
        advance();
        advance();
        continue;
      }
      return;
    }
  }

  // `// key: value` where key is a single word.
  void record_pragma(std::string_view body) {
    if (!pragmas_)
      return;
    std::size_t i = 0;
    while (i < body.size() && body[i] == ' ')
      ++i;
    std::size_t kb = i;
    while (i < body.size() && (std::isalnum(static_cast<unsigned char>(body[i])) || body[i] == '-' || body[i] == '_'))
      ++i;
    if (i == kb || i >= body.size() || body[i] != ':')
      return;
    std::string key(body.substr(kb, i - kb));
    ++i;
    while (i < body.size() && body[i] == ' ')
      ++i;
    std::string value(body.substr(i));
    while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back())))
      value.pop_back();
    pragmas_->emplace(std::move(key), std::move(value));
  }

  std::string_view src_;
  std::multimap<std::string, std::string> *pragmas_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string> kKeywords = {"var",    "type",   "function", "axiom",  "predicate", "procedure",
                                         "requires", "ensures", "havoc",  "assume", "assert",    "if",
                                         "else",   "while",  "invariant", "forall", "exists",    "true",
                                         "false",  "ite"};

class Parser {
public:
  Parser(std::vector<Token> toks, Program &prog) : toks_(std::move(toks)), prog_(prog) {}

  void parse_program() {
    bool seen_proc = false;
    while (!at_end()) {
      if (accept_kw("type")) {
        std::string n = ident("type name");
        prog_.sorts.push_back(n);
        expect(";");
      } else if (accept_kw("var")) {
        parse_var_decl();
      } else if (accept_kw("function")) {
        parse_function_decl();
      } else if (accept_kw("axiom")) {
        prog_.axioms.push_back(formula("axiom"));
        expect(";");
      } else if (accept_kw("predicate")) {
        expect("?");
        PinnedPredicate pp;
        pp.hole = ident("hole name");
        pp.name = ident("predicate name");
        expect(":");
        pp.body = formula("predicate");
        expect(";");
        prog_.pinned.push_back(std::move(pp));
      } else if (accept_kw("procedure")) {
        if (seen_proc)
          fail("only one procedure is supported");
        seen_proc = true;
        parse_procedure();
      } else {
        fail("expected a declaration, found '" + peek().text + "'");
      }
    }
    if (!seen_proc)
      fail("missing procedure");
    for (const auto &pp : prog_.pinned)
      if (!holes_.count(pp.hole))
        throw ParseError("predicate for unknown hole ?" + pp.hole, 0, 0);
  }

  Expr parse_standalone() {
    Expr e = formula_or_term();
    if (!at_end())
      fail("trailing input '" + peek().text + "'");
    return e;
  }

private:
  // ---- token helpers --------------------------------------------------------
  const Token &peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  const Token &next() {
    const Token &t = peek();
    if (pos_ < toks_.size() - 1)
      ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, peek().line, peek().col); }
  [[noreturn]] void fail_at(const Token &t, const std::string &msg) const { throw ParseError(msg, t.line, t.col); }

  bool is_punct(const char *p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool accept(const char *p) {
    if (is_punct(p)) {
      next();
      return true;
    }
    return false;
  }
  void expect(const char *p) {
    if (!accept(p))
      fail(std::string("expected '") + p + "', found '" + peek().text + "'");
  }
  bool is_kw(const char *k) const { return peek().kind == Tok::Ident && peek().text == k; }
  bool accept_kw(const char *k) {
    if (is_kw(k)) {
      next();
      return true;
    }
    return false;
  }
  void expect_kw(const char *k) {
    if (!accept_kw(k))
      fail(std::string("expected '") + k + "'");
  }
  std::string ident(const char *what) {
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text))
      fail(std::string("expected ") + what + ", found '" + peek().text + "'");
    return next().text;
  }

  // ---- declarations -----------------------------------------------------------
  Sort sort() {
    if (accept("[")) {
      Sort idx = sort();
      expect("]");
      Sort elem = sort();
      if (!idx.is_int() || !elem.is_int())
        fail("only [Int]Int arrays are supported");
      return Sort::array();
    }
    const Token &t = peek();
    std::string n = ident("sort");
    if (n == "Int" || n == "int")
      return Sort::integer();
    if (n == "Bool" || n == "bool")
      return Sort::boolean();
    for (const auto &s : prog_.sorts)
      if (s == n)
        return Sort::uninterpreted(n);
    fail_at(t, "unknown sort '" + n + "'");
  }

  void declare_name(const Token &t, const std::string &n) {
    if (prog_.var_sort(n) || prog_.function(n))
      fail_at(t, "duplicate declaration of '" + n + "'");
  }

  void parse_var_decl() {
    std::vector<std::pair<Token, std::string>> names;
    do {
      const Token &t = peek();
      names.emplace_back(t, ident("variable name"));
    } while (accept(","));
    expect(":");
    Sort s = sort();
    expect(";");
    for (auto &[t, n] : names) {
      declare_name(t, n);
      prog_.vars.emplace_back(n, s);
    }
  }

  void parse_function_decl() {
    const Token &t = peek();
    FunDecl f;
    f.name = ident("function name");
    declare_name(t, f.name);
    expect("(");
    if (!is_punct(")")) {
      do {
        f.args.push_back(sort());
      } while (accept(","));
    }
    expect(")");
    expect(":");
    f.result = sort();
    expect(";");
    prog_.functions.push_back(std::move(f));
  }

  void parse_procedure() {
    prog_.proc_name = ident("procedure name");
    expect("(");
    expect(")");
    for (;;) {
      if (accept_kw("requires")) {
        prog_.requires_.push_back(formula("requires"));
        expect(";");
      } else if (accept_kw("ensures")) {
        prog_.ensures.push_back(formula("ensures"));
        expect(";");
      } else {
        break;
      }
    }
    prog_.body = block();
    prog_.holes = hole_order_;
  }

  // ---- statements -------------------------------------------------------------
  std::vector<StmtPtr> block() {
    expect("{");
    std::vector<StmtPtr> out;
    while (!is_punct("}")) {
      if (at_end())
        fail("unterminated block");
      out.push_back(statement());
    }
    expect("}");
    return out;
  }

  void register_hole(const Token &t, const std::string &h) {
    if (!holes_.insert(h).second)
      fail_at(t, "duplicate hole ?" + h);
    hole_order_.push_back(h);
  }

  StmtPtr statement() {
    auto s = std::make_shared<Stmt>();
    s->line = peek().line;
    s->id = ++stmt_counter_;
    if (accept_kw("havoc")) {
      s->kind = StmtKind::Havoc;
      const Token &t = peek();
      s->target = ident("variable");
      if (!prog_.var_sort(s->target))
        fail_at(t, "unknown variable '" + s->target + "'");
      expect(";");
    } else if (accept_kw("assume")) {
      s->kind = StmtKind::Assume;
      s->cond = formula("assume");
      expect(";");
    } else if (accept_kw("assert")) {
      s->kind = StmtKind::Assert;
      s->cond = formula("assert");
      expect(";");
    } else if (accept_kw("if")) {
      s->kind = StmtKind::If;
      expect("(");
      s->cond = formula("if condition");
      expect(")");
      s->then_body = block();
      if (accept_kw("else")) {
        if (is_kw("if"))
          s->else_body.push_back(statement());
        else
          s->else_body = block();
      }
    } else if (accept_kw("while")) {
      s->kind = StmtKind::While;
      expect("(");
      s->cond = formula("loop condition");
      expect(")");
      expect_kw("invariant");
      expect("?");
      const Token &t = peek();
      s->hole = ident("hole name");
      register_hole(t, s->hole);
      expect(";");
      s->then_body = block();
    } else if (accept_kw("invariant")) {
      s->kind = StmtKind::Cut;
      expect("?");
      const Token &t = peek();
      s->hole = ident("hole name");
      register_hole(t, s->hole);
      expect(";");
    } else {
      const Token &t = peek();
      s->target = ident("statement");
      auto vs = prog_.var_sort(s->target);
      if (!vs)
        fail_at(t, "unknown variable '" + s->target + "'");
      if (accept("[")) {
        if (!vs->is_array())
          fail_at(t, "'" + s->target + "' is not an array");
        s->kind = StmtKind::ArrayAssign;
        s->index = term_checked(Sort::integer(), "array index");
        expect("]");
        expect(":=");
        s->value = term_checked(Sort::integer(), "array element");
      } else {
        s->kind = StmtKind::Assign;
        expect(":=");
        s->value = term_checked(*vs, "assignment");
      }
      expect(";");
    }
    return s;
  }

  // ---- expressions --------------------------------------------------------------
  Expr formula(const char *ctx) {
    const Token &t = peek();
    Expr e = formula_or_term();
    if (!e->sort.is_bool())
      fail_at(t, std::string(ctx) + ": expected a formula, got a term of sort " + e->sort.str());
    return e;
  }

  Expr term_checked(const Sort &s, const char *ctx) {
    const Token &t = peek();
    Expr e = formula_or_term();
    if (!(e->sort == s))
      fail_at(t, std::string(ctx) + ": expected sort " + s.str() + ", got " + e->sort.str());
    return e;
  }

  template <class F> Expr guarded(const Token &t, F &&f) {
    try {
      return f();
    } catch (const SortError &e) {
      fail_at(t, std::string("sort error: ") + e.what());
    }
  }

  Expr formula_or_term() { return iff(); }

  Expr iff() {
    Expr lhs = implies();
    while (is_punct("<==>")) {
      const Token &t = next();
      Expr rhs = implies();
      lhs = guarded(t, [&] { return mk_iff(lhs, rhs); });
    }
    return lhs;
  }

  Expr implies() {
    Expr lhs = disj();
    if (is_punct("==>")) {
      const Token &t = next();
      Expr rhs = implies();
      return guarded(t, [&] { return mk_implies(lhs, rhs); });
    }
    return lhs;
  }

  // Keep the n-ary shape the printer emits: `a || b || c` is one Or node.
  Expr disj() {
    Expr first = conj();
    if (!is_punct("||"))
      return first;
    std::vector<Expr> kids{first};
    const Token &t = peek();
    while (accept("||"))
      kids.push_back(conj());
    return guarded(t, [&] { return nary(Op::Or, std::move(kids)); });
  }

  Expr conj() {
    Expr first = unary();
    if (!is_punct("&&"))
      return first;
    std::vector<Expr> kids{first};
    const Token &t = peek();
    while (accept("&&"))
      kids.push_back(unary());
    return guarded(t, [&] { return nary(Op::And, std::move(kids)); });
  }

  static Expr nary(Op op, std::vector<Expr> kids) {
    for (const auto &k : kids)
      if (!k->sort.is_bool())
        throw SortError(std::string(op == Op::And ? "&&" : "||") + " applied to a term of sort " + k->sort.str());
    Node n;
    n.op = op;
    n.sort = Sort::boolean();
    n.kids = std::move(kids);
    return std::make_shared<const Node>(std::move(n));
  }

  Expr unary() {
    if (is_punct("!")) {
      const Token &t = next();
      Expr k = unary();
      return guarded(t, [&] {
        if (!k->sort.is_bool())
          throw SortError("! applied to a term");
        Node n;
        n.op = Op::Not;
        n.sort = Sort::boolean();
        n.kids = {k};
        return std::make_shared<const Node>(std::move(n));
      });
    }
    if (is_kw("forall") || is_kw("exists"))
      return quantifier();
    return comparison();
  }

  Expr quantifier() {
    bool is_forall = next().text == "forall";
    std::vector<Binder> bs;
    std::vector<std::string> pending;
    do {
      pending.push_back(ident("bound variable"));
      if (accept(":")) {
        Sort s = sort();
        for (auto &n : pending)
          bs.push_back({n, s});
        pending.clear();
      }
    } while (accept(","));
    if (!pending.empty())
      fail("bound variables need a sort");
    expect("::");
    scopes_.push_back(bs);
    std::vector<Expr> triggers;
    if (accept("{")) {
      if (!is_forall)
        fail("triggers are only supported on forall");
      do {
        triggers.push_back(formula_or_term());
      } while (accept(","));
      expect("}");
    }
    Expr body = formula("quantifier body");
    scopes_.pop_back();
    return is_forall ? mk_forall(std::move(bs), body, std::move(triggers)) : mk_exists(std::move(bs), body);
  }

  Expr comparison() {
    Expr lhs = additive();
    static const std::pair<const char *, Op> ops[] = {{"==", Op::Eq}, {"!=", Op::Ne}, {"<=", Op::Le},
                                                      {">=", Op::Ge}, {"<", Op::Lt},  {">", Op::Gt}};
    for (const auto &[p, op] : ops) {
      if (is_punct(p)) {
        const Token &t = next();
        Expr rhs = additive();
        return guarded(t, [&] { return mk_cmp(op, lhs, rhs); });
      }
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = multiplicative();
    while (is_punct("+") || is_punct("-")) {
      const Token &t = next();
      Expr rhs = multiplicative();
      lhs = guarded(t, [&] { return t.text == "+" ? mk_add(lhs, rhs) : mk_sub(lhs, rhs); });
    }
    return lhs;
  }

  Expr multiplicative() {
    Expr lhs = negation();
    while (is_punct("*")) {
      const Token &t = next();
      Expr rhs = negation();
      if (lhs->op == Op::IntLit)
        lhs = guarded(t, [&] { return mk_mul(lhs->value, rhs); });
      else if (rhs->op == Op::IntLit)
        lhs = guarded(t, [&] { return mk_mul(rhs->value, lhs); });
      else
        fail_at(t, "nonlinear multiplication is not supported");
    }
    return lhs;
  }

  Expr negation() {
    if (is_punct("-")) {
      const Token &t = next();
      Expr k = negation();
      if (k->op == Op::IntLit)
        return mk_int(-k->value);
      return guarded(t, [&] { return mk_neg(k); });
    }
    return postfix();
  }

  Expr postfix() {
    Expr e = primary();
    while (is_punct("[")) {
      const Token &t = next();
      Expr idx = formula_or_term();
      if (accept(":=")) {
        Expr val = formula_or_term();
        expect("]");
        e = guarded(t, [&] { return mk_store(e, idx, val); });
      } else {
        expect("]");
        e = guarded(t, [&] { return mk_select(e, idx); });
      }
    }
    return e;
  }

  Expr primary() {
    const Token &t = peek();
    if (t.kind == Tok::Int) {
      next();
      try {
        return mk_int(std::stoll(t.text));
      } catch (const std::out_of_range &) {
        fail_at(t, "integer literal out of range");
      }
    }
    if (accept("(")) {
      Expr e = formula_or_term();
      expect(")");
      return e;
    }
    if (accept("?")) {
      return mk_hole(ident("hole name"));
    }
    if (accept_kw("true"))
      return mk_true();
    if (accept_kw("false"))
      return mk_false();
    if (accept_kw("ite")) {
      expect("(");
      Expr c = formula_or_term();
      expect(",");
      Expr a = formula_or_term();
      expect(",");
      Expr b = formula_or_term();
      expect(")");
      return guarded(t, [&] { return mk_ite(c, a, b); });
    }
    std::string n = ident("expression");
    if (is_punct("(")) {
      const FunDecl *f = prog_.function(n);
      if (!f)
        fail_at(t, "unknown function '" + n + "'");
      next();
      std::vector<Expr> args;
      if (!is_punct(")")) {
        do {
          args.push_back(formula_or_term());
        } while (accept(","));
      }
      expect(")");
      if (args.size() != f->args.size())
        fail_at(t, "function '" + n + "' expects " + std::to_string(f->args.size()) + " arguments");
      for (std::size_t i = 0; i < args.size(); ++i)
        if (!(args[i]->sort == f->args[i]))
          fail_at(t, "sort error: argument " + std::to_string(i + 1) + " of '" + n + "' expects " +
                         f->args[i].str() + ", got " + args[i]->sort.str());
      return mk_app(n, std::move(args), f->result);
    }
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      for (const auto &b : *it)
        if (b.name == n)
          return mk_var(n, b.sort);
    if (auto s = prog_.var_sort(n))
      return mk_var(n, *s);
    fail_at(t, "unknown identifier '" + n + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program &prog_;
  std::vector<std::vector<Binder>> scopes_;
  std::set<std::string> holes_;
  std::vector<std::string> hole_order_;
  int stmt_counter_ = 0;
};

} // namespace

Program parse_program(std::string_view text) {
  Program p;
  Lexer lex(text, &p.pragmas);
  Parser parser(lex.run(), p);
  parser.parse_program();
  return p;
}

Program parse_program_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

Expr parse_expr(std::string_view text, const Program &scope) {
  Program p = scope;
  Lexer lex(text, nullptr);
  Parser parser(lex.run(), p);
  return parser.parse_standalone();
}

} // namespace npi
