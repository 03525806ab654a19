#include "npi/smt.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <sstream>

namespace npi {

// ---- S-expressions --------------------------------------------------------------

std::string SExpr::str() const {
  if (atom)
    return text;
  std::string s = "(";
  for (std::size_t i = 0; i < list.size(); ++i)
    s += (i ? " " : "") + list[i].str();
  return s + ")";
}

std::vector<SExpr> parse_sexprs(const std::string &text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      } else if (text[pos] == ';') {
        while (pos < text.size() && text[pos] != '\n')
          ++pos;
      } else {
        break;
      }
    }
  };
  std::function<SExpr()> parse_one = [&]() -> SExpr {
    skip();
    if (pos >= text.size())
      throw EvalError("s-expression: unexpected end of input");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      SExpr e;
      e.atom = false;
      for (;;) {
        skip();
        if (pos >= text.size())
          throw EvalError("s-expression: unbalanced parenthesis");
        if (text[pos] == ')') {
          ++pos;
          return e;
        }
        e.list.push_back(parse_one());
      }
    }
    if (c == ')')
      throw EvalError("s-expression: unexpected ')'");
    SExpr e;
    if (c == '|') {
      auto end = text.find('|', pos + 1);
      if (end == std::string::npos)
        throw EvalError("s-expression: unterminated |symbol|");
      e.text = text.substr(pos + 1, end - pos - 1);
      pos = end + 1;
      return e;
    }
    if (c == '"') {
      std::size_t end = pos + 1;
      while (end < text.size() && !(text[end] == '"' && !(end + 1 < text.size() && text[end + 1] == '"')))
        end += text[end] == '"' ? 2 : 1;
      if (end >= text.size())
        throw EvalError("s-expression: unterminated string");
      e.text = text.substr(pos, end - pos + 1);
      pos = end + 1;
      return e;
    }
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '(' &&
           text[pos] != ')' && text[pos] != ';')
      ++pos;
    e.text = text.substr(start, pos - start);
    return e;
  };
  std::vector<SExpr> out;
  for (;;) {
    skip();
    if (pos >= text.size())
      break;
    out.push_back(parse_one());
  }
  return out;
}

// ---- values -----------------------------------------------------------------------

struct ArrayValue {
  std::map<std::int64_t, Value> entries;           // explicit overrides (stores)
  std::function<Value(const Value &)> fn;          // lambda / as-array, if any
  Value fallback = Value::integer(0);              // const-array default

  Value select(const Value &idx) const {
    if (idx.kind != Value::Kind::Int)
      throw EvalError("array index is not an integer");
    auto it = entries.find(idx.i);
    if (it != entries.end())
      return it->second;
    return fn ? fn(idx) : fallback;
  }
};

Value Value::integer(std::int64_t v) {
  Value x;
  x.kind = Kind::Int;
  x.i = v;
  return x;
}

Value Value::boolean(bool v) {
  Value x;
  x.kind = Kind::Bool;
  x.b = v;
  return x;
}

Value Value::element(std::string name) {
  Value x;
  x.kind = Kind::Elem;
  x.elem = std::move(name);
  return x;
}

Value Value::array(std::shared_ptr<const ArrayValue> a) {
  Value x;
  x.kind = Kind::Array;
  x.arr = std::move(a);
  return x;
}

std::string Value::str() const {
  switch (kind) {
  case Kind::Int:
    return std::to_string(i);
  case Kind::Bool:
    return b ? "true" : "false";
  case Kind::Elem:
    return elem;
  case Kind::Array: {
    std::string s = "[";
    bool first = true;
    for (const auto &[k, v] : arr->entries) {
      s += (first ? "" : ", ") + std::to_string(k) + ":=" + v.str();
      first = false;
    }
    s += std::string(first ? "" : ", ") + (arr->fn ? "..." : "else:=" + arr->fallback.str());
    return s + "]";
  }
  }
  return "?";
}

Value default_value(const Sort &s) {
  switch (s.kind) {
  case SortKind::Int:
    return Value::integer(0);
  case SortKind::Bool:
    return Value::boolean(false);
  case SortKind::Array:
    return Value::array(std::make_shared<ArrayValue>());
  case SortKind::Uninterpreted:
    return Value::element(s.name + "!default");
  }
  return Value::integer(0);
}

bool values_equal(const Value &a, const Value &b) {
  if (a.kind != b.kind)
    throw EvalError("comparing values of different sorts");
  switch (a.kind) {
  case Value::Kind::Int:
    return a.i == b.i;
  case Value::Kind::Bool:
    return a.b == b.b;
  case Value::Kind::Elem:
    return a.elem == b.elem;
  case Value::Kind::Array: {
    if (a.arr == b.arr)
      return true;
    if (a.arr->fn || b.arr->fn)
      throw EvalError("cannot decide equality of arrays given by functions");
    if (!values_equal(a.arr->fallback, b.arr->fallback))
      return false;
    for (const auto &[k, v] : a.arr->entries)
      if (!values_equal(v, b.arr->select(Value::integer(k))))
        return false;
    for (const auto &[k, v] : b.arr->entries)
      if (!values_equal(v, a.arr->select(Value::integer(k))))
        return false;
    return true;
  }
  }
  return false;
}

// ---- model ------------------------------------------------------------------------

namespace {

using Env = std::map<std::string, Value>;

bool is_numeral(const std::string &s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::int64_t to_int(const std::string &s) {
  errno = 0;
  char *end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno == ERANGE || *end)
    throw EvalError("integer out of range: " + s);
  return v;
}

const Value &expect(const Value &v, Value::Kind k, const char *what) {
  if (v.kind != k)
    throw EvalError(std::string("model evaluation: expected ") + what);
  return v;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  // SMT-LIB div: a = b*q + r with 0 <= r < |b|
  std::int64_t q = a / b, r = a % b;
  if (r < 0)
    q += b > 0 ? -1 : 1;
  return q;
}

class SmtEval {
public:
  explicit SmtEval(const Model &m) : m_(m) {}

  Value eval(const SExpr &e, const Env &env) const {
    if (e.atom)
      return atom(e.text, env);
    if (e.list.empty())
      throw EvalError("model evaluation: empty list");
    const SExpr &head = e.list[0];
    if (!head.atom) {
      // ((as const (Array Int Int)) v)
      if (head.list.size() == 3 && head.list[0].atom && head.list[0].text == "as" && head.list[1].atom &&
          head.list[1].text == "const") {
        auto a = std::make_shared<ArrayValue>();
        a->fallback = eval(arg(e, 1), env);
        return Value::array(a);
      }
      throw EvalError("model evaluation: unsupported form " + e.str());
    }
    const std::string &op = head.text;
    if (op == "_" && e.list.size() == 3 && e.list[1].atom && e.list[1].text == "as-array") {
      std::string fname = e.list[2].text;
      auto a = std::make_shared<ArrayValue>();
      const Model *m = &m_;
      a->fn = [m, fname](const Value &i) { return m->apply(fname, {i}, Sort::integer()); };
      return Value::array(a);
    }
    if (op == "let") {
      Env inner = env;
      for (const auto &b : arg(e, 1).list)
        inner[b.list.at(0).text] = eval(b.list.at(1), env);
      return eval(arg(e, 2), inner);
    }
    if (op == "lambda") {
      const SExpr &params = arg(e, 1);
      if (params.list.size() != 1)
        throw EvalError("model evaluation: only unary lambdas are supported");
      std::string p = params.list[0].list.at(0).text;
      auto body = std::make_shared<const SExpr>(arg(e, 2));
      auto a = std::make_shared<ArrayValue>();
      const Model *m = &m_;
      auto captured = std::make_shared<const Env>(env);
      a->fn = [m, p, body, captured](const Value &i) {
        Env inner = *captured;
        inner[p] = i;
        return SmtEval(*m).eval(*body, inner);
      };
      return Value::array(a);
    }
    if (op == "ite") {
      bool c = expect(eval(arg(e, 1), env), Value::Kind::Bool, "Bool").b;
      return eval(arg(e, c ? 2 : 3), env);
    }
    std::vector<Value> args;
    for (std::size_t i = 1; i < e.list.size(); ++i)
      args.push_back(eval(e.list[i], env));
    return apply(op, args, e);
  }

private:
  static const SExpr &arg(const SExpr &e, std::size_t i) {
    if (i >= e.list.size())
      throw EvalError("model evaluation: missing argument in " + e.str());
    return e.list[i];
  }

  Value atom(const std::string &t, const Env &env) const {
    if (is_numeral(t))
      return Value::integer(to_int(t));
    if (t == "true" || t == "false")
      return Value::boolean(t == "true");
    auto it = env.find(t);
    if (it != env.end())
      return it->second;
    if (m_.defines(t))
      return m_.apply(t, {}, Sort::integer());
    if (t.find("!val!") != std::string::npos)
      return Value::element(t);
    throw EvalError("model evaluation: unknown symbol '" + t + "'");
  }

  Value apply(const std::string &op, const std::vector<Value> &a, const SExpr &e) const {
    auto ints = [&](std::size_t i) { return expect(a.at(i), Value::Kind::Int, "Int").i; };
    auto bools = [&](std::size_t i) { return expect(a.at(i), Value::Kind::Bool, "Bool").b; };
    if (op == "-") {
      if (a.size() == 1)
        return Value::integer(-ints(0));
      std::int64_t v = ints(0);
      for (std::size_t i = 1; i < a.size(); ++i)
        v -= ints(i);
      return Value::integer(v);
    }
    if (op == "+" || op == "*") {
      std::int64_t v = op == "+" ? 0 : 1;
      for (std::size_t i = 0; i < a.size(); ++i)
        v = op == "+" ? v + ints(i) : v * ints(i);
      return Value::integer(v);
    }
    if (op == "div" || op == "mod") {
      std::int64_t x = ints(0), y = ints(1);
      if (y == 0)
        throw EvalError("model evaluation: division by zero");
      std::int64_t q = floor_div(x, y);
      return Value::integer(op == "div" ? q : x - y * q);
    }
    if (op == "abs")
      return Value::integer(std::llabs(ints(0)));
    if (op == "<" || op == "<=" || op == ">" || op == ">=") {
      std::int64_t x = ints(0), y = ints(1);
      bool r = op == "<" ? x < y : op == "<=" ? x <= y : op == ">" ? x > y : x >= y;
      return Value::boolean(r);
    }
    if (op == "=") {
      for (std::size_t i = 1; i < a.size(); ++i)
        if (!values_equal(a[0], a[i]))
          return Value::boolean(false);
      return Value::boolean(true);
    }
    if (op == "distinct") {
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
          if (values_equal(a[i], a[j]))
            return Value::boolean(false);
      return Value::boolean(true);
    }
    if (op == "not")
      return Value::boolean(!bools(0));
    if (op == "and" || op == "or") {
      bool v = op == "and";
      for (std::size_t i = 0; i < a.size(); ++i)
        v = op == "and" ? (v && bools(i)) : (v || bools(i));
      return Value::boolean(v);
    }
    if (op == "=>")
      return Value::boolean(!bools(0) || bools(1));
    if (op == "xor")
      return Value::boolean(bools(0) != bools(1));
    if (op == "select")
      return expect(a.at(0), Value::Kind::Array, "array").arr->select(a.at(1));
    if (op == "store") {
      const auto &base = expect(a.at(0), Value::Kind::Array, "array").arr;
      auto copy = std::make_shared<ArrayValue>(*base);
      copy->entries[ints(1)] = a.at(2);
      return Value::array(copy);
    }
    if (m_.defines(op))
      return m_.apply(op, a, Sort::integer());
    throw EvalError("model evaluation: unsupported operator in " + e.str());
  }

  const Model &m_;
};

} // namespace

Model Model::parse(const std::string &text) {
  Model m;
  std::function<void(const SExpr &)> visit = [&](const SExpr &e) {
    if (e.atom)
      return;
    if (!e.list.empty() && e.list[0].atom) {
      const std::string &h = e.list[0].text;
      if (h == "define-fun") {
        if (e.list.size() != 5)
          throw EvalError("malformed define-fun: " + e.str());
        Definition d;
        for (const auto &p : e.list[2].list)
          d.params.push_back(p.list.at(0).text);
        d.body = e.list[4];
        m.define(e.list[1].text, std::move(d));
        return;
      }
      if (h == "declare-fun" || h == "declare-sort" || h == "forall")
        return;
      if (h == "define-fun-rec" || h == "define-funs-rec")
        throw EvalError("recursive definitions in models are not supported");
      if (h == "error")
        throw EvalError("solver error: " + e.str());
    }
    for (const auto &k : e.list)
      visit(k);
  };
  for (const auto &e : parse_sexprs(text))
    visit(e);
  return m;
}

void Model::define(const std::string &name, Definition d) {
  defs_[name] = std::move(d);
  constants_ = std::make_shared<std::map<std::string, Value>>();
}

bool Model::defines(const std::string &name) const { return defs_.count(name) > 0; }

Value Model::apply(const std::string &name, const std::vector<Value> &args, const Sort &result) const {
  auto it = defs_.find(name);
  if (it == defs_.end())
    return default_value(result);
  const Definition &d = it->second;
  if (d.params.size() != args.size())
    throw EvalError("model evaluation: arity mismatch for '" + name + "'");
  if (args.empty()) {
    auto c = constants_->find(name);
    if (c != constants_->end())
      return c->second;
    Value v = SmtEval(*this).eval(d.body, {});
    constants_->emplace(name, v);
    return v;
  }
  Env env;
  for (std::size_t i = 0; i < args.size(); ++i)
    env[d.params[i]] = args[i];
  return SmtEval(*this).eval(d.body, env);
}

Value Model::eval_smt(const SExpr &e) const { return SmtEval(*this).eval(e, {}); }

Value Model::eval(const Expr &e) const {
  auto ints = [&](const Expr &k) { return expect(eval(k), Value::Kind::Int, "Int").i; };
  auto bools = [&](const Expr &k) { return expect(eval(k), Value::Kind::Bool, "Bool").b; };
  switch (e->op) {
  case Op::Var:
    return apply(e->name, {}, e->sort);
  case Op::IntLit:
    return Value::integer(e->value);
  case Op::Neg:
    return Value::integer(-ints(e->kids[0]));
  case Op::Add:
    return Value::integer(ints(e->kids[0]) + ints(e->kids[1]));
  case Op::Sub:
    return Value::integer(ints(e->kids[0]) - ints(e->kids[1]));
  case Op::Mul:
    return Value::integer(e->value * ints(e->kids[0]));
  case Op::App: {
    std::vector<Value> args;
    for (const auto &k : e->kids)
      args.push_back(eval(k));
    return apply(e->name, args, e->sort);
  }
  case Op::Select:
    return expect(eval(e->kids[0]), Value::Kind::Array, "array").arr->select(eval(e->kids[1]));
  case Op::Store: {
    auto base = expect(eval(e->kids[0]), Value::Kind::Array, "array").arr;
    auto copy = std::make_shared<ArrayValue>(*base);
    copy->entries[ints(e->kids[1])] = eval(e->kids[2]);
    return Value::array(copy);
  }
  case Op::Ite:
    return bools(e->kids[0]) ? eval(e->kids[1]) : eval(e->kids[2]);
  case Op::BoolLit:
    return Value::boolean(e->value != 0);
  case Op::Eq:
    return Value::boolean(values_equal(eval(e->kids[0]), eval(e->kids[1])));
  case Op::Ne:
    return Value::boolean(!values_equal(eval(e->kids[0]), eval(e->kids[1])));
  case Op::Lt:
    return Value::boolean(ints(e->kids[0]) < ints(e->kids[1]));
  case Op::Le:
    return Value::boolean(ints(e->kids[0]) <= ints(e->kids[1]));
  case Op::Gt:
    return Value::boolean(ints(e->kids[0]) > ints(e->kids[1]));
  case Op::Ge:
    return Value::boolean(ints(e->kids[0]) >= ints(e->kids[1]));
  case Op::Not:
    return Value::boolean(!bools(e->kids[0]));
  case Op::And:
    for (const auto &k : e->kids)
      if (!bools(k))
        return Value::boolean(false);
    return Value::boolean(true);
  case Op::Or:
    for (const auto &k : e->kids)
      if (bools(k))
        return Value::boolean(true);
    return Value::boolean(false);
  case Op::Implies:
    return Value::boolean(!bools(e->kids[0]) || bools(e->kids[1]));
  case Op::Iff:
    return Value::boolean(bools(e->kids[0]) == bools(e->kids[1]));
  case Op::Labeled:
    return eval(e->kids[0]);
  case Op::Forall:
  case Op::Exists:
    throw EvalError("model evaluation: quantified formula");
  case Op::HoleRef:
    throw EvalError("model evaluation: unsubstituted hole ?" + e->name);
  }
  throw EvalError("model evaluation: unknown node");
}

bool Model::holds(const Expr &f) const { return expect(eval(f), Value::Kind::Bool, "Bool").b; }

std::string Model::str() const {
  std::string s;
  for (const auto &[name, d] : defs_) {
    s += name;
    if (!d.params.empty()) {
      s += "(";
      for (std::size_t i = 0; i < d.params.size(); ++i)
        s += (i ? "," : "") + d.params[i];
      s += ")";
    }
    s += " = " + d.body.str() + "\n";
  }
  return s;
}

// ---- process ----------------------------------------------------------------------

ProcessResult run_process(const std::vector<std::string> &argv, const std::string &input, double timeout_s) {
  ProcessResult r;
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0)
    throw Error(std::string("pipe: ") + std::strerror(errno));
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw Error(std::string("pipe: ") + std::strerror(errno));
  }
  pid_t pid = fork();
  if (pid < 0)
    throw Error(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(out_pipe[1], STDERR_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    std::vector<char *> args;
    for (const auto &a : argv)
      args.push_back(const_cast<char *>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    std::string msg = "cannot execute " + argv[0] + ": " + std::strerror(errno) + "\n";
    (void)!write(STDERR_FILENO, msg.data(), msg.size());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  int wfd = in_pipe[1], rfd = out_pipe[0];
  fcntl(wfd, F_SETFL, O_NONBLOCK);

  // A solver that exits early must not kill us with SIGPIPE.
  struct sigaction ignore {}, previous {};
  ignore.sa_handler = SIG_IGN;
  sigaction(SIGPIPE, &ignore, &previous);

  auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  std::size_t written = 0;
  if (input.empty()) {
    close(wfd);
    wfd = -1;
  }
  char buf[65536];
  for (;;) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      r.timed_out = true;
      break;
    }
    int ms = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
    pollfd fds[2];
    int n = 0;
    fds[n++] = {rfd, POLLIN, 0};
    if (wfd >= 0)
      fds[n++] = {wfd, POLLOUT, 0};
    int rc = poll(fds, n, ms);
    if (rc < 0) {
      if (errno == EINTR)
        continue;
      break;
    }
    if (wfd >= 0 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t k = write(wfd, input.data() + written, input.size() - written);
      if (k > 0)
        written += static_cast<std::size_t>(k);
      if (k < 0 && errno != EAGAIN && errno != EINTR)
        written = input.size();
      if (written >= input.size()) {
        close(wfd);
        wfd = -1;
      }
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      ssize_t k = read(rfd, buf, sizeof buf);
      if (k > 0) {
        r.output.append(buf, static_cast<std::size_t>(k));
      } else if (k == 0 || (errno != EINTR && errno != EAGAIN)) {
        break;
      }
    }
  }
  if (wfd >= 0)
    close(wfd);
  close(rfd);
  int status = 0;
  if (r.timed_out)
    kill(pid, SIGKILL);
  waitpid(pid, &status, 0);
  sigaction(SIGPIPE, &previous, nullptr);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// ---- solver -----------------------------------------------------------------------

std::string to_string(SolverOutcome o) {
  switch (o) {
  case SolverOutcome::Proved:
    return "Proved";
  case SolverOutcome::Refuted:
    return "Refuted";
  case SolverOutcome::EngineFailure:
    return "EngineFailure";
  }
  return "?";
}

std::string resolve_solver_path(const std::string &explicit_path) {
  if (!explicit_path.empty())
    return explicit_path;
  if (const char *env = std::getenv("NPI_SOLVER"); env && *env)
    return env;
  return "z3";
}

SmtSolver::SmtSolver(SolverConfig cfg) : cfg_(std::move(cfg)) { cfg_.path = resolve_solver_path(cfg_.path); }

SolverResult SmtSolver::check_script(const std::string &body) const {
  ++queries_;
  SolverResult res;
  std::string script = "(set-option :produce-models true)\n(set-logic QF_AUFLIA)\n" + body +
                       "(check-sat)\n(get-model)\n(exit)\n";
  std::vector<std::string> argv{cfg_.path};
  std::string base = cfg_.path.substr(cfg_.path.find_last_of('/') + 1);
  if (base.rfind("z3", 0) == 0) {
    argv.push_back("-smt2");
    argv.push_back("-in");
  }
  ProcessResult pr;
  try {
    pr = run_process(argv, script, cfg_.timeout_s);
  } catch (const Error &e) {
    res.reason = e.what();
    res.transcript = script;
    return res;
  }
  res.transcript = script + ";; ---- response ----\n" + pr.output;
  if (pr.timed_out) {
    res.reason = "solver timed out after " + std::to_string(cfg_.timeout_s) + "s";
    return res;
  }
  if (pr.exit_code == 127 && pr.output.rfind("cannot execute ", 0) == 0) {
    res.reason = pr.output.substr(0, pr.output.find('\n'));
    return res;
  }
  std::vector<SExpr> resp;
  try {
    resp = parse_sexprs(pr.output);
  } catch (const EvalError &e) {
    res.reason = std::string("malformed solver output: ") + e.what();
    return res;
  }
  if (resp.empty() || !resp[0].atom) {
    res.reason = "malformed solver output (exit code " + std::to_string(pr.exit_code) + ")";
    return res;
  }
  const std::string &verdict = resp[0].text;
  if (verdict == "unsat") {
    res.outcome = SolverOutcome::Proved;
    return res;
  }
  if (verdict != "sat") {
    res.reason = "solver answered '" + verdict + "'";
    return res;
  }
  try {
    std::string rest;
    for (std::size_t i = 1; i < resp.size(); ++i)
      rest += resp[i].str() + "\n";
    res.model = Model::parse(rest);
  } catch (const EvalError &e) {
    res.reason = std::string("cannot read model: ") + e.what();
    return res;
  }
  res.outcome = SolverOutcome::Refuted;
  return res;
}

SolverResult SmtSolver::check(const Expr &qf, const Signature &sig, const std::vector<SkolemDecl> &skolems) const {
  if (has_quantifier(qf))
    throw Error("solver query is not quantifier-free");
  SolverResult res = check_script(to_smtlib(qf, sig, skolems));
  if (res.outcome == SolverOutcome::Refuted) {
    ++models_checked_;
    try {
      if (!res.model.holds(qf)) {
        res.outcome = SolverOutcome::EngineFailure;
        res.reason = "model does not satisfy the query";
      }
    } catch (const EvalError &e) {
      res.outcome = SolverOutcome::EngineFailure;
      res.reason = std::string("cannot evaluate query under model: ") + e.what();
    }
    if (res.outcome != SolverOutcome::Refuted)
      ++models_rejected_;
  }
  return res;
}

} // namespace npi
