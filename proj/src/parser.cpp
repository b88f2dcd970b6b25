#include "vccts/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "vccts/error.hpp"

namespace vccts {

TermPtr Module::process(const std::string& name) const {
  for (const auto& [n, t] : processes) {
    if (n == name) return t;
  }
  throw SyntaxError("no process named '" + name + "'");
}

namespace {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

std::vector<Token> lex(const std::string& src) {
  static const char* const multi[] = {"(+)", "->", "--", "==", "!=", "<=", "&&", "||"};
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                src[j] == '\'')) {
        ++j;
      }
      t.kind = Token::Kind::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::Int;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else {
      t.kind = Token::Kind::Punct;
      for (const char* m : multi) {
        if (src.compare(i, std::char_traits<char>::length(m), m) == 0) {
          t.text = m;
          break;
        }
      }
      if (t.text.empty()) {
        if (std::string("(){}[],;:.~|+*=<!-/").find(c) == std::string::npos) {
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const char* const kPlaceholder = "%compose";

struct Pending {
  TermPtr lhs;
  TermPtr rhs;
  bool complete;
};

class Parser {
 public:
  Parser(const std::string& src, DefEnv& env) : toks_(lex(src)), env_(env) {}

  std::vector<Pending> pending;

  bool at_end() const { return peek().kind == Token::Kind::End; }

  // ---- clauses

  void clause(Module& m, std::vector<Definition>& defs,
              std::vector<std::pair<std::string, TermPtr>>& procs) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) fail("expected a clause keyword");
    if (t.text == "symbol") {
      next();
      do {
        const Token& name = ident();
        expect("/");
        const Token& ar = next();
        if (ar.kind != Token::Kind::Int) fail_at(ar, "expected arity");
        try {
          env_.declare_symbol(name.text, std::stoi(ar.text));
        } catch (const SyntaxError& e) {
          fail_at(name, e.what());
        }
      } while (accept(","));
      expect(";");
    } else if (t.text == "def") {
      next();
      Definition d;
      d.name = ident().text;
      if (accept("(")) {
        if (!is(")")) {
          do d.params.push_back(ident().text);
          while (accept(","));
        }
        expect(")");
      }
      expect("=");
      scope_ = {d.params.begin(), d.params.end()};
      d.body = proc();
      scope_.clear();
      expect(";");
      defs.push_back(std::move(d));
    } else if (t.text == "process") {
      next();
      std::string name = ident().text;
      expect("=");
      auto body = proc();
      expect(";");
      procs.emplace_back(std::move(name), std::move(body));
    } else if (t.text == "automaton") {
      next();
      TreeAutomaton a;
      a.name = ident().text;
      expect("{");
      expect_word("states");
      do a.states.push_back(ident().text);
      while (accept(","));
      expect(";");
      while (!accept("}")) {
        AutomatonTransition tr;
        tr.from = ident().text;
        expect(":");
        const Token& f = ident();
        tr.symbol = f.text;
        if (accept("(")) {
          ident();
          expect(")");
        }
        expect("->");
        expect("(");
        if (!is(")")) {
          do tr.targets.push_back(ident().text);
          while (accept(","));
        }
        expect(")");
        expect(";");
        const auto ar = env_.arity(tr.symbol);
        if (!ar) fail_at(f, "undeclared symbol '" + tr.symbol + "'");
        if (static_cast<std::size_t>(*ar) != tr.targets.size()) {
          fail_at(f, "transition on '" + tr.symbol + "' needs " + std::to_string(*ar) + " target states");
        }
        a.transitions.push_back(std::move(tr));
      }
      accept(";");
      m.automata[a.name] = std::move(a);
    } else if (t.text == "tree") {
      next();
      std::string name = ident().text;
      expect("=");
      m.trees[name] = tree();
      expect(";");
    } else {
      fail("unknown clause '" + t.text + "'");
    }
  }

  // ---- processes

  TermPtr proc() {
    TermPtr lhs = sum();
    while (is("|") || is("(+)")) {
      const bool complete = next().text == "|";
      TermPtr rhs = sum();
      pending.push_back({lhs, rhs, complete});
      lhs = term::var(kPlaceholder + std::to_string(pending.size() - 1));
    }
    return lhs;
  }

  TermPtr sum() {
    TermPtr lhs = postfix();
    while (accept("+")) lhs = term::sum(lhs, postfix());
    return lhs;
  }

  TermPtr postfix() {
    TermPtr t = atom();
    while (is_word("restrict")) {
      next();
      expect("{");
      std::set<std::string> names;
      if (!is("}")) {
        do {
          const Token& s = ident();
          if (!env_.arity(s.text)) fail_at(s, "undeclared symbol '" + s.text + "'");
          names.insert(s.text);
        } while (accept(","));
      }
      expect("}");
      t = term::restrict(t, std::move(names));
    }
    return t;
  }

  TermPtr atom() {
    const Token& t = peek();
    if (accept("*")) return term::idle();
    if (t.kind == Token::Kind::Int) {
      if (t.text != "0") fail("only 0 may appear as a process literal");
      next();
      return term::nil();
    }
    if (accept("(")) {
      auto p = proc();
      expect(")");
      return p;
    }
    if (accept("~")) {
      const Token& f = symbol_name();
      expect("(");
      auto payload = expr();
      expect(")");
      expect(".");
      auto kids = continuation();
      check_arity(f, kids.size());
      return term::output(f.text, payload, std::move(kids));
    }
    if (t.kind != Token::Kind::Ident) fail("expected a process");
    if (t.text == "if") {
      next();
      auto guard = expr();
      expect_word("then");
      auto a = sum();
      expect_word("else");
      auto b = sum();
      return term::cond(guard, a, b);
    }
    if (t.text == "graph") return graph();
    if (t.text == "rename") {
      next();
      expect("{");
      std::map<std::string, std::string> sigma;
      if (!is("}")) {
        do {
          std::string from = ident().text;
          expect("->");
          sigma[from] = ident().text;
        } while (accept(","));
      }
      expect("}");
      return term::rename(atom(), std::move(sigma));
    }
    if (env_.arity(t.text)) {
      const Token& f = next();
      expect("(");
      std::string x = ident().text;
      expect(")");
      expect(".");
      const bool had = scope_.count(x);
      scope_.insert(x);
      auto kids = continuation();
      if (!had) scope_.erase(x);
      check_arity(f, kids.size());
      return term::input(f.text, x, std::move(kids));
    }
    const Token& name = next();
    std::vector<ExprPtr> args;
    if (accept("(")) {
      if (!is(")")) {
        do args.push_back(expr());
        while (accept(","));
      }
      expect(")");
    }
    return term::constant(name.text, std::move(args));
  }

  std::vector<TermPtr> continuation() {
    std::vector<TermPtr> kids;
    if (accept("(")) {
      if (!is(")")) {
        do kids.push_back(proc());
        while (accept(","));
      }
      expect(")");
    } else {
      kids.push_back(atom());
    }
    return kids;
  }

  TermPtr graph() {
    next();
    expect("{");
    std::vector<std::string> locs;
    std::vector<TermPtr> comps;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    auto index_of = [&](const Token& tok) {
      for (std::size_t i = 0; i < locs.size(); ++i) {
        if (locs[i] == tok.text) return i;
      }
      fail_at(tok, "unknown location '" + tok.text + "'");
      return std::size_t{0};
    };
    while (!accept("}")) {
      if (is_word("edges")) {
        next();
        expect("{");
        if (!is("}")) {
          do {
            const Token& a = loc_name();
            expect("--");
            const Token& b = loc_name();
            const auto ia = index_of(a), ib = index_of(b);
            if (ia == ib) fail_at(a, "self-loop on location '" + a.text + "'");
            edges.emplace_back(ia, ib);
          } while (accept(","));
        }
        expect("}");
        accept(";");
        continue;
      }
      const Token& l = loc_name();
      for (const auto& existing : locs) {
        if (existing == l.text) fail_at(l, "duplicate location '" + l.text + "'");
      }
      expect(":");
      locs.push_back(l.text);
      comps.push_back(proc());
      if (!is("}")) expect(";");
    }
    return term::graph(std::move(locs), std::move(edges), std::move(comps));
  }

  SigmaTree tree() {
    if (accept("*")) return SigmaTree::leaf();
    if (accept("(")) {
      auto t = tree();
      expect(")");
      return t;
    }
    const Token& f = symbol_name();
    std::string x = "x";
    if (accept("(")) {
      x = ident().text;
      expect(")");
    }
    std::vector<SigmaTree> kids;
    if (accept(".")) {
      if (accept("(")) {
        do kids.push_back(tree());
        while (accept(","));
        expect(")");
      } else {
        kids.push_back(tree());
      }
    }
    check_arity(f, kids.size());
    return SigmaTree::node(f.text, std::move(kids), x);
  }

  // ---- expressions

  ExprPtr expr() {
    auto lhs = and_expr();
    while (accept("||")) lhs = expr::apply(Op::Or, {lhs, and_expr()});
    return lhs;
  }

  ExprPtr and_expr() {
    auto lhs = cmp_expr();
    while (accept("&&")) lhs = expr::apply(Op::And, {lhs, cmp_expr()});
    return lhs;
  }

  ExprPtr cmp_expr() {
    auto lhs = add_expr();
    if (accept("=") || accept("==")) return expr::apply(Op::Eq, {lhs, add_expr()});
    if (accept("!=")) return expr::apply(Op::Ne, {lhs, add_expr()});
    if (accept("<=")) return expr::apply(Op::Le, {lhs, add_expr()});
    if (accept("<")) return expr::apply(Op::Lt, {lhs, add_expr()});
    return lhs;
  }

  ExprPtr add_expr() {
    auto lhs = mul_expr();
    for (;;) {
      if (accept("+")) {
        lhs = expr::apply(Op::Add, {lhs, mul_expr()});
      } else if (accept("-")) {
        lhs = expr::apply(Op::Sub, {lhs, mul_expr()});
      } else {
        return lhs;
      }
    }
  }

  ExprPtr mul_expr() {
    auto lhs = unary_expr();
    while (accept("*")) lhs = expr::apply(Op::Mul, {lhs, unary_expr()});
    return lhs;
  }

  ExprPtr unary_expr() {
    if (accept("!") || accept_word("not")) return expr::apply(Op::Not, {unary_expr()});
    if (accept("-")) {
      if (peek().kind == Token::Kind::Int) {
        return expr::lit(Value::integer(-std::stoll(next().text)));
      }
      return expr::apply(Op::Neg, {unary_expr()});
    }
    return primary_expr();
  }

  ExprPtr primary_expr() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Int) {
      next();
      return expr::lit(Value::integer(std::stoll(t.text)));
    }
    if (accept("(")) {
      auto a = expr();
      if (accept(",")) {
        auto b = expr();
        expect(")");
        return expr::apply(Op::MkPair, {a, b});
      }
      expect(")");
      return a;
    }
    if (accept("[")) {
      std::vector<ExprPtr> items;
      if (!is("]")) {
        do items.push_back(expr());
        while (accept(","));
      }
      expect("]");
      return expr::list(std::move(items));
    }
    if (t.kind != Token::Kind::Ident) fail("expected an expression");
    next();
    if (t.text == "true") return expr::lit(Value::boolean(true));
    if (t.text == "false") return expr::lit(Value::boolean(false));
    static const std::map<std::string, Op> unary = {
        {"fst", Op::Fst}, {"snd", Op::Snd}, {"head", Op::Head}, {"tail", Op::Tail}, {"null", Op::Null}};
    if (!scope_.count(t.text) && is("(")) {
      if (auto it = unary.find(t.text); it != unary.end()) {
        expect("(");
        auto a = expr();
        expect(")");
        return expr::apply(it->second, {a});
      }
      if (t.text == "append") {
        expect("(");
        auto a = expr();
        expect(",");
        auto b = expr();
        expect(")");
        return expr::apply(Op::Append, {a, b});
      }
      fail_at(t, "unknown function '" + t.text + "'");
    }
    if (scope_.count(t.text) || !std::isupper(static_cast<unsigned char>(t.text[0]))) {
      return expr::var(t.text);
    }
    return expr::lit(Value::atom(t.text));
  }

  void ensure_end() const {
    if (!at_end()) fail("unexpected trailing input");
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  DefEnv& env_;
  std::set<std::string> scope_;  // data variables bound at the current point

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Token::Kind::End) ++pos_;
    return t;
  }
  bool is(const char* p) const { return peek().kind == Token::Kind::Punct && peek().text == p; }
  bool is_word(const char* w) const { return peek().kind == Token::Kind::Ident && peek().text == w; }
  bool accept(const char* p) {
    if (!is(p)) return false;
    next();
    return true;
  }
  bool accept_word(const char* w) {
    if (!is_word(w)) return false;
    next();
    return true;
  }
  void expect(const char* p) {
    if (!accept(p)) fail(std::string("expected '") + p + "'");
  }
  void expect_word(const char* w) {
    if (!accept_word(w)) fail(std::string("expected '") + w + "'");
  }
  const Token& ident() {
    if (peek().kind != Token::Kind::Ident) fail("expected an identifier");
    return next();
  }
  const Token& loc_name() {
    if (peek().kind != Token::Kind::Ident && peek().kind != Token::Kind::Int) {
      fail("expected a location name");
    }
    return next();
  }
  const Token& symbol_name() {
    const Token& t = ident();
    if (!env_.arity(t.text)) fail_at(t, "undeclared symbol '" + t.text + "'");
    return t;
  }
  void check_arity(const Token& f, std::size_t n) {
    const int ar = *env_.arity(f.text);
    if (static_cast<std::size_t>(ar) != n) {
      fail_at(f, "symbol '" + f.text + "' has arity " + std::to_string(ar) + " but " +
                     std::to_string(n) + " continuations were given");
    }
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }
  [[noreturn]] static void fail_at(const Token& t, const std::string& msg) {
    std::string what = msg;
    if (t.kind == Token::Kind::End) what += " (at end of input)";
    throw ParseError(what, t.line, t.col);
  }
};

using Rewrite = std::function<TermPtr(const TermPtr&)>;

// Bottom-up rewrite of ProcVar and Const leaves; `leaf` returns nullptr to keep a node.
TermPtr rewrite(const TermPtr& t, const Rewrite& leaf) {
  if (t->kind == Term::Kind::ProcVar || t->kind == Term::Kind::Const) {
    auto r = leaf(t);
    return r ? r : t;
  }
  bool changed = false;
  auto copy = std::make_shared<Term>(*t);
  for (auto& c : copy->children) {
    auto n = rewrite(c, leaf);
    changed = changed || n != c;
    c = std::move(n);
  }
  return changed ? copy : t;
}

// Resolves `|` placeholders and turns undefined argument-less constants into process variables.
class Resolver {
 public:
  Resolver(const std::vector<Pending>& pending, const std::set<std::string>& defined)
      : pending_(pending), defined_(defined) {}

  // Sort-preserving stand-in used before all constants are known.
  TermPtr raw(const TermPtr& t) const {
    return rewrite(t, [this](const TermPtr& leaf) -> TermPtr {
      if (auto idx = placeholder(*leaf)) {
        const auto& p = pending_[*idx];
        return term::graph({"a", "b"}, {}, {raw(p.lhs), raw(p.rhs)});
      }
      return undefined_var(*leaf);
    });
  }

  TermPtr resolve(const TermPtr& t, const DefEnv& env) {
    return rewrite(t, [this, &env](const TermPtr& leaf) -> TermPtr {
      if (auto idx = placeholder(*leaf)) {
        auto it = done_.find(*idx);
        if (it != done_.end()) return it->second;
        const auto& p = pending_[*idx];
        auto r = compose(resolve(p.lhs, env), resolve(p.rhs, env), p.complete, env);
        done_[*idx] = r;
        return r;
      }
      return undefined_var(*leaf);
    });
  }

 private:
  const std::vector<Pending>& pending_;
  const std::set<std::string>& defined_;
  std::map<std::size_t, TermPtr> done_;

  static std::optional<std::size_t> placeholder(const Term& t) {
    if (t.kind != Term::Kind::ProcVar || t.name.rfind(kPlaceholder, 0) != 0) return std::nullopt;
    return std::stoul(t.name.substr(std::char_traits<char>::length(kPlaceholder)));
  }

  TermPtr undefined_var(const Term& t) const {
    if (t.kind == Term::Kind::Const && t.args.empty() && !defined_.count(t.name)) {
      return term::var(t.name);
    }
    return nullptr;
  }
};

}  // namespace

void parse_into(Module& m, const std::string& source) {
  Parser p(source, m.env);
  std::vector<Definition> defs;
  std::vector<std::pair<std::string, TermPtr>> procs;
  while (!p.at_end()) p.clause(m, defs, procs);

  std::set<std::string> defined;
  for (const auto& [name, _] : m.env.definitions()) defined.insert(name);
  for (const auto& d : defs) defined.insert(d.name);

  Resolver r(p.pending, defined);
  for (const auto& d : defs) m.env.define({d.name, d.params, r.raw(d.body)});
  std::vector<Definition> resolved;
  for (const auto& d : defs) resolved.push_back({d.name, d.params, r.resolve(d.body, m.env)});
  for (auto& d : resolved) m.env.define(std::move(d));
  for (auto& [name, body] : procs) m.processes.emplace_back(name, r.resolve(body, m.env));
}

Module parse_module(const std::string& source) {
  Module m;
  parse_into(m, source);
  return m;
}

Module parse_module_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_module(ss.str());
}

TermPtr parse_process(const std::string& source, const DefEnv& env) {
  DefEnv scratch = env;
  Parser p(source, scratch);
  auto t = p.proc();
  p.ensure_end();
  std::set<std::string> defined;
  for (const auto& [name, _] : env.definitions()) defined.insert(name);
  Resolver r(p.pending, defined);
  return r.resolve(t, env);
}

ExprPtr parse_expr(const std::string& source) {
  DefEnv scratch;
  Parser p(source, scratch);
  auto e = p.expr();
  p.ensure_end();
  return e;
}

Value parse_value(const std::string& source) { return eval_expr(*parse_expr(source)); }

std::string to_string(const SigmaTree& t) {
  if (t.is_leaf()) return "*";
  std::string out = t.symbol + "(" + t.var + ").(";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t.children[i]);
  }
  return out + ")";
}

}  // namespace vccts
