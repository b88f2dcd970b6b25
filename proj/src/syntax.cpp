#include "vccts/syntax.hpp"

#include <algorithm>
#include <functional>

#include "vccts/error.hpp"

namespace vccts {

Symbol Symbol::dual() const {
  if (is_idle()) return *this;
  Symbol d = *this;
  d.polarity = polarity == Polarity::Plain ? Polarity::Co : Polarity::Plain;
  return d;
}

std::string Symbol::str() const { return (polarity == Polarity::Co ? "~" : "") + name; }

std::string base_symbol(const std::string& name) {
  const auto pos = name.find('\'');
  return pos == std::string::npos ? name : name.substr(0, pos);
}

namespace term {

namespace {
std::shared_ptr<Term> make(Term::Kind k) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  return t;
}
}  // namespace

TermPtr idle() {
  static const TermPtr t = make(Term::Kind::Idle);
  return t;
}

TermPtr nil() {
  static const TermPtr t = make(Term::Kind::Nil);
  return t;
}

TermPtr var(std::string name) {
  auto t = make(Term::Kind::ProcVar);
  t->name = std::move(name);
  return t;
}

TermPtr input(std::string symbol, std::string binder, std::vector<TermPtr> children) {
  auto t = make(Term::Kind::Input);
  t->name = std::move(symbol);
  t->var = std::move(binder);
  t->children = std::move(children);
  return t;
}

TermPtr output(std::string symbol, ExprPtr payload, std::vector<TermPtr> children) {
  auto t = make(Term::Kind::Output);
  t->name = std::move(symbol);
  t->expr = std::move(payload);
  t->children = std::move(children);
  return t;
}

TermPtr graph(std::vector<std::string> locations,
              std::vector<std::pair<std::size_t, std::size_t>> edges,
              std::vector<TermPtr> components) {
  if (locations.size() != components.size()) {
    throw SyntaxError("graph literal: location/component count mismatch");
  }
  auto t = make(Term::Kind::Graph);
  t->locations = std::move(locations);
  for (auto [a, b] : edges) {
    if (a == b) throw SyntaxError("graph literal: self-loop on " + t->locations.at(a));
    if (a >= t->locations.size() || b >= t->locations.size()) {
      throw SyntaxError("graph literal: edge endpoint out of range");
    }
    t->edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(t->edges.begin(), t->edges.end());
  t->edges.erase(std::unique(t->edges.begin(), t->edges.end()), t->edges.end());
  t->children = std::move(components);
  return t;
}

TermPtr sum(TermPtr lhs, TermPtr rhs) {
  auto t = make(Term::Kind::Sum);
  t->children = {std::move(lhs), std::move(rhs)};
  return t;
}

TermPtr sum(const std::vector<TermPtr>& summands) {
  if (summands.empty()) return nil();
  TermPtr acc = summands.front();
  for (std::size_t i = 1; i < summands.size(); ++i) acc = sum(acc, summands[i]);
  return acc;
}

TermPtr restrict(TermPtr body, std::set<std::string> symbols) {
  auto t = make(Term::Kind::Restrict);
  t->children = {std::move(body)};
  t->symbols.assign(symbols.begin(), symbols.end());
  return t;
}

TermPtr cond(ExprPtr guard, TermPtr then_branch, TermPtr else_branch) {
  auto t = make(Term::Kind::Cond);
  t->expr = std::move(guard);
  t->children = {std::move(then_branch), std::move(else_branch)};
  return t;
}

TermPtr constant(std::string name, std::vector<ExprPtr> args) {
  auto t = make(Term::Kind::Const);
  t->name = std::move(name);
  t->args = std::move(args);
  return t;
}

TermPtr rename(TermPtr body, std::map<std::string, std::string> renaming) {
  for (auto it = renaming.begin(); it != renaming.end();) {
    it = it->first == it->second ? renaming.erase(it) : std::next(it);
  }
  if (renaming.empty()) return body;
  if (body->kind == Term::Kind::Rename) {
    // rename{outer}(rename{inner}(t)) == rename{outer . inner}(t)
    std::map<std::string, std::string> composed;
    for (const auto& [from, to] : body->renaming) {
      auto it = renaming.find(to);
      composed[from] = it == renaming.end() ? to : it->second;
    }
    for (const auto& [from, to] : renaming) {
      if (!body->renaming.count(from)) composed[from] = to;
    }
    return rename(body->children[0], std::move(composed));
  }
  if (body->kind == Term::Kind::Idle || body->kind == Term::Kind::Nil) return body;
  auto t = make(Term::Kind::Rename);
  t->children = {std::move(body)};
  t->renaming = std::move(renaming);
  return t;
}

TermPtr singleton(TermPtr component) {
  return graph({"l0"}, {}, {std::move(component)});
}

}  // namespace term

// ---------------------------------------------------------------------------
// DefEnv

void DefEnv::declare_symbol(const std::string& name, int arity) {
  if (arity < 1) throw SyntaxError("symbol '" + name + "' must have arity >= 1");
  if (name == "*") throw SyntaxError("'*' is the reserved idle symbol");
  auto [it, inserted] = symbols_.emplace(name, arity);
  if (!inserted && it->second != arity) {
    throw SyntaxError("symbol '" + name + "' redeclared with a different arity");
  }
}

std::optional<int> DefEnv::arity(const std::string& name) const {
  if (name == "*") return 0;
  auto it = symbols_.find(name);
  if (it == symbols_.end()) it = symbols_.find(base_symbol(name));
  if (it == symbols_.end()) return std::nullopt;
  return it->second;
}

void DefEnv::define(Definition def) {
  const std::string name = def.name;
  defs_[name] = std::move(def);
  sorts_ready_ = false;
  compute_sorts();
}

const Definition* DefEnv::find(const std::string& name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

const Definition& DefEnv::lookup(const std::string& name) const {
  if (const auto* d = find(name)) return *d;
  throw SyntaxError("unresolved constant '" + name + "'");
}

namespace {

using SortLookup = std::function<const std::set<std::string>*(const std::string&)>;

void sort_into(const Term& t, const SortLookup& consts, std::set<std::string>& out) {
  using K = Term::Kind;
  switch (t.kind) {
    case K::Idle:
    case K::Nil:
    case K::ProcVar: return;
    case K::Input:
    case K::Output:
      out.insert(t.name);
      for (const auto& c : t.children) sort_into(*c, consts, out);
      return;
    case K::Graph:
    case K::Sum:
    case K::Cond:
      for (const auto& c : t.children) sort_into(*c, consts, out);
      return;
    case K::Restrict: {
      std::set<std::string> inner;
      sort_into(*t.children[0], consts, inner);
      for (const auto& s : t.symbols) inner.erase(s);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case K::Rename: {
      std::set<std::string> inner;
      sort_into(*t.children[0], consts, inner);
      for (const auto& s : inner) {
        auto it = t.renaming.find(s);
        out.insert(it == t.renaming.end() ? s : it->second);
      }
      return;
    }
    case K::Const:
      if (const auto* s = consts(t.name)) out.insert(s->begin(), s->end());
      return;
  }
}

}  // namespace

void DefEnv::compute_sorts() const {
  std::map<std::string, std::set<std::string>> table;
  for (const auto& [name, _] : defs_) table[name];
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [name, def] : defs_) {
      std::set<std::string> s;
      sort_into(*def.body,
                [&table](const std::string& n) -> const std::set<std::string>* {
                  auto it = table.find(n);
                  return it == table.end() ? nullptr : &it->second;
                },
                s);
      if (s.size() != table[name].size()) {
        table[name] = std::move(s);
        changed = true;
      }
    }
  }
  sort_cache_ = std::move(table);
  sorts_ready_ = true;
}

const std::set<std::string>& DefEnv::constant_sort(const std::string& name) const {
  if (!sorts_ready_) compute_sorts();
  auto it = sort_cache_.find(name);
  if (it == sort_cache_.end()) throw SyntaxError("unresolved constant '" + name + "'");
  return it->second;
}

std::set<std::string> sort_of(const TermPtr& t, const DefEnv& env) {
  std::set<std::string> out;
  sort_into(*t, [&env](const std::string& n) { return &env.constant_sort(n); }, out);
  return out;
}

// ---------------------------------------------------------------------------
// Canonicity

const char* to_string(CanonClass c) {
  switch (c) {
    case CanonClass::CGS: return "CGS";
    case CanonClass::RCGS: return "RCGS";
    case CanonClass::CP: return "CP";
    case CanonClass::NotCanonical: return "NotCanonical";
  }
  return "?";
}

namespace {

using ClassTable = std::map<std::string, CanonClass>;

int rank(CanonClass c) {
  switch (c) {
    case CanonClass::CGS: return 3;
    case CanonClass::RCGS: return 2;
    case CanonClass::CP: return 1;
    case CanonClass::NotCanonical: return 0;
  }
  return 0;
}

Classification fail(std::string reason, std::vector<std::size_t> path) {
  return {CanonClass::NotCanonical, std::move(reason), std::move(path)};
}

Classification classify(const Term& t, const DefEnv& env, const ClassTable& table,
                        std::vector<std::size_t>& path) {
  using K = Term::Kind;
  switch (t.kind) {
    case K::Idle:
    case K::Nil: return {CanonClass::CGS, {}, {}};
    case K::ProcVar: return {CanonClass::CP, {}, {}};
    case K::Input:
    case K::Output: {
      const auto arity = env.arity(t.name);
      if (!arity) throw SyntaxError("undeclared symbol '" + t.name + "'");
      if (static_cast<std::size_t>(*arity) != t.children.size()) {
        throw SyntaxError("arity mismatch: symbol '" + t.name + "' has arity " +
                          std::to_string(*arity) + " but prefix has " +
                          std::to_string(t.children.size()) + " continuations");
      }
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        path.push_back(i);
        auto c = classify(*t.children[i], env, table, path);
        if (!c.usable_as_process()) return c;
        path.pop_back();
      }
      return {CanonClass::CGS, {}, {}};
    }
    case K::Sum:
    case K::Cond: {
      for (std::size_t i = 0; i < 2; ++i) {
        path.push_back(i);
        auto c = classify(*t.children[i], env, table, path);
        if (!c.canonical()) return c;
        if (c.cls != CanonClass::CGS) {
          return fail(std::string(t.kind == K::Sum ? "sum" : "conditional") +
                          " branch is not a guarded sum (" + to_string(c.cls) + ")",
                      path);
        }
        path.pop_back();
      }
      return {CanonClass::CGS, {}, {}};
    }
    case K::Graph: {
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        path.push_back(i);
        auto c = classify(*t.children[i], env, table, path);
        if (!c.canonical()) return c;
        if (!c.usable_as_component()) {
          return fail("graph component at '" + t.locations[i] +
                          "' is not a recursive canonical guarded sum (" + to_string(c.cls) + ")",
                      path);
        }
        path.pop_back();
      }
      return {CanonClass::CP, {}, {}};
    }
    case K::Restrict: {
      for (const auto& s : t.symbols) {
        if (s == "*") throw SyntaxError("cannot restrict the idle symbol");
      }
      path.push_back(0);
      auto c = classify(*t.children[0], env, table, path);
      if (!c.canonical()) return c;
      path.pop_back();
      return {CanonClass::CP, {}, {}};
    }
    case K::Rename: {
      path.push_back(0);
      auto c = classify(*t.children[0], env, table, path);
      if (!c.canonical()) return c;
      path.pop_back();
      return c;
    }
    case K::Const: {
      const auto& def = env.lookup(t.name);
      if (def.params.size() != t.args.size()) {
        throw SyntaxError("arity mismatch: constant '" + t.name + "' expects " +
                          std::to_string(def.params.size()) + " arguments, got " +
                          std::to_string(t.args.size()));
      }
      auto it = table.find(t.name);
      const CanonClass c = it == table.end() ? CanonClass::RCGS : it->second;
      if (c == CanonClass::NotCanonical) {
        return fail("constant '" + t.name + "' is not canonical", path);
      }
      return {c, {}, {}};
    }
  }
  return fail("malformed term", path);
}

// Follows Rename wrappers to the head of a definition body.
const Term& strip_renames(const Term& t) {
  const Term* cur = &t;
  while (cur->kind == Term::Kind::Rename) cur = cur->children[0].get();
  return *cur;
}

}  // namespace

std::map<std::string, Classification> classify_definitions(const DefEnv& env) {
  // Unguarded recursion: cycles in the "body is a constant" relation.
  std::set<std::string> unguarded;
  for (const auto& [name, def] : env.definitions()) {
    std::set<std::string> seen{name};
    const Term* head = &strip_renames(*def.body);
    while (head->kind == Term::Kind::Const) {
      if (!seen.insert(head->name).second) {
        unguarded.insert(name);
        break;
      }
      const auto* next = env.find(head->name);
      if (!next) break;
      head = &strip_renames(*next->body);
    }
  }

  ClassTable table;
  for (const auto& [name, _] : env.definitions()) {
    table[name] = unguarded.count(name) ? CanonClass::NotCanonical : CanonClass::RCGS;
  }
  std::map<std::string, Classification> detail;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [name, def] : env.definitions()) {
      if (unguarded.count(name)) {
        detail[name] = fail("unguarded recursion through constant '" + name + "'", {});
        continue;
      }
      std::vector<std::size_t> path;
      auto c = classify(*def.body, env, table, path);
      CanonClass as_const = c.cls == CanonClass::CGS ? CanonClass::RCGS : c.cls;
      if (rank(as_const) < rank(table[name])) {
        table[name] = as_const;
        changed = true;
      }
      c.cls = table[name] == CanonClass::NotCanonical ? CanonClass::NotCanonical : c.cls;
      detail[name] = c;
    }
  }
  return detail;
}

Classification check_canonical(const TermPtr& term, const DefEnv& env) {
  const auto defs = classify_definitions(env);
  ClassTable table;
  for (const auto& [name, c] : defs) {
    table[name] = c.cls == CanonClass::CGS ? CanonClass::RCGS : c.cls;
  }
  std::vector<std::size_t> path;
  return classify(*term, env, table, path);
}

// ---------------------------------------------------------------------------
// Substitution

TermPtr subst_value(const TermPtr& t, const std::string& x, const Value& v) {
  using K = Term::Kind;
  switch (t->kind) {
    case K::Idle:
    case K::Nil:
    case K::ProcVar: return t;
    case K::Input:
      if (t->var == x) return t;  // binder shadows x
      break;
    default: break;
  }
  bool changed = false;
  auto copy = std::make_shared<Term>(*t);
  if (copy->expr) {
    copy->expr = subst(t->expr, x, v);
    changed = changed || copy->expr != t->expr;
  }
  for (auto& a : copy->args) {
    auto n = subst(a, x, v);
    changed = changed || n != a;
    a = std::move(n);
  }
  for (auto& c : copy->children) {
    auto n = subst_value(c, x, v);
    changed = changed || n != c;
    c = std::move(n);
  }
  return changed ? copy : t;
}

TermPtr subst_process(const TermPtr& host, const std::string& x, const TermPtr& payload) {
  if (host->kind == Term::Kind::ProcVar) return host->name == x ? payload : host;
  bool changed = false;
  auto copy = std::make_shared<Term>(*host);
  for (auto& c : copy->children) {
    auto n = subst_process(c, x, payload);
    changed = changed || n != c;
    c = std::move(n);
  }
  return changed ? copy : host;
}

TermPtr unfold_constant(const Term& c, const DefEnv& env) {
  const auto& def = env.lookup(c.name);
  if (def.params.size() != c.args.size()) {
    throw SyntaxError("arity mismatch: constant '" + c.name + "' expects " +
                      std::to_string(def.params.size()) + " arguments");
  }
  // Evaluate every argument first so the substitution is simultaneous.
  std::vector<Value> vals;
  vals.reserve(c.args.size());
  for (const auto& a : c.args) vals.push_back(eval_expr(*a));
  TermPtr body = def.body;
  for (std::size_t i = 0; i < vals.size(); ++i) body = subst_value(body, def.params[i], vals[i]);
  return body;
}

namespace {
void data_vars(const Term& t, std::set<std::string>& out) {
  std::set<std::string> inner;
  if (t.expr) {
    auto fv = free_vars(*t.expr);
    inner.insert(fv.begin(), fv.end());
  }
  for (const auto& a : t.args) {
    auto fv = free_vars(*a);
    inner.insert(fv.begin(), fv.end());
  }
  std::set<std::string> below;
  for (const auto& c : t.children) data_vars(*c, below);
  if (t.kind == Term::Kind::Input) below.erase(t.var);
  out.insert(inner.begin(), inner.end());
  out.insert(below.begin(), below.end());
}
}  // namespace

std::set<std::string> free_data_vars(const TermPtr& t) {
  std::set<std::string> out;
  data_vars(*t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

struct Printer {
  const SymbolPrinter* hook;

  std::string sym(const std::string& name, const std::set<std::string>& shadow) const {
    if (!hook || shadow.count(name)) return name;
    return (*hook)(name);
  }

  // level 0: anything; 1: sum operand; 2: atom
  std::string print(const Term& t, int level, const std::set<std::string>& shadow) const {
    using K = Term::Kind;
    auto wrap = [&](std::string s, int own) { return own < level ? "(" + s + ")" : s; };
    switch (t.kind) {
      case K::Idle: return "*";
      case K::Nil: return "0";
      case K::ProcVar: return t.name;
      case K::Input:
      case K::Output: {
        std::string out = t.kind == K::Output ? "~" : "";
        out += sym(t.name, shadow) + "(" + (t.kind == K::Input ? t.var : to_string(*t.expr)) + ").(";
        for (std::size_t i = 0; i < t.children.size(); ++i) {
          if (i) out += ", ";
          out += print(*t.children[i], 0, shadow);
        }
        return out + ")";
      }
      case K::Graph: {
        std::string out = "graph { ";
        for (std::size_t i = 0; i < t.children.size(); ++i) {
          out += t.locations[i] + ": " + print(*t.children[i], 0, shadow) + "; ";
        }
        if (!t.edges.empty()) {
          out += "edges { ";
          for (std::size_t i = 0; i < t.edges.size(); ++i) {
            if (i) out += ", ";
            out += t.locations[t.edges[i].first] + " -- " + t.locations[t.edges[i].second];
          }
          out += " } ";
        }
        return out + "}";
      }
      case K::Sum:
        return wrap(print(*t.children[0], 1, shadow) + " + " + print(*t.children[1], 1, shadow), 1);
      case K::Restrict: {
        auto inner_shadow = shadow;
        inner_shadow.insert(t.symbols.begin(), t.symbols.end());
        std::string out = print(*t.children[0], 2, inner_shadow) + " restrict {";
        for (std::size_t i = 0; i < t.symbols.size(); ++i) {
          if (i) out += ", ";
          out += t.symbols[i];
        }
        return wrap(out + "}", 2);
      }
      case K::Cond:
        return wrap("if " + to_string(*t.expr) + " then " + print(*t.children[0], 1, shadow) +
                        " else " + print(*t.children[1], 0, shadow),
                    0);
      case K::Const: {
        if (t.args.empty()) return t.name;
        std::string out = t.name + "(";
        for (std::size_t i = 0; i < t.args.size(); ++i) {
          if (i) out += ", ";
          out += to_string(*t.args[i]);
        }
        return out + ")";
      }
      case K::Rename: {
        std::string out = "rename {";
        bool first = true;
        auto inner_shadow = shadow;
        for (const auto& [from, to] : t.renaming) {
          if (!first) out += ", ";
          first = false;
          out += from + " -> " + sym(to, shadow);
          inner_shadow.insert(from);
        }
        return out + "} " + print(*t.children[0], 2, inner_shadow);
      }
    }
    return "?";
  }
};

}  // namespace

std::string to_string(const TermPtr& t) { return Printer{nullptr}.print(*t, 0, {}); }

std::string to_string(const TermPtr& t, const SymbolPrinter& print_symbol) {
  return Printer{&print_symbol}.print(*t, 0, {});
}

// ---------------------------------------------------------------------------
// Composition

namespace {

struct GraphForm {
  std::vector<std::string> locations;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<TermPtr> components;
  std::set<std::string> restricted;
};

GraphForm graph_form(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Graph: return {t->locations, t->edges, t->children, {}};
    case Term::Kind::Restrict: {
      auto g = graph_form(t->children[0]);
      g.restricted.insert(t->symbols.begin(), t->symbols.end());
      return g;
    }
    default: return {{"l0"}, {}, {t}, {}};
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (int k = 1;; ++k) {
    std::string candidate = base + "'" + std::to_string(k);
    if (!avoid.count(candidate)) return candidate;
  }
}

std::set<std::string> form_sort(const GraphForm& g, const DefEnv& env) {
  std::set<std::string> s;
  for (const auto& c : g.components) {
    auto cs = sort_of(c, env);
    s.insert(cs.begin(), cs.end());
  }
  for (const auto& r : g.restricted) s.erase(r);
  return s;
}

// Alpha-converts every restricted name of g that is in `clash`.
void freshen(GraphForm& g, const std::set<std::string>& clash, std::set<std::string>& used) {
  std::map<std::string, std::string> sigma;
  for (const auto& r : g.restricted) {
    if (!clash.count(r)) continue;
    auto n = fresh_name(base_symbol(r), used);
    used.insert(n);
    sigma[r] = n;
  }
  if (sigma.empty()) return;
  for (auto& c : g.components) c = term::rename(c, sigma);
  std::set<std::string> renamed;
  for (const auto& r : g.restricted) {
    auto it = sigma.find(r);
    renamed.insert(it == sigma.end() ? r : it->second);
  }
  g.restricted = std::move(renamed);
}

}  // namespace

TermPtr compose(const TermPtr& lhs, const TermPtr& rhs, bool complete, const DefEnv& env) {
  GraphForm a = graph_form(lhs);
  GraphForm b = graph_form(rhs);

  const auto sort_a = form_sort(a, env);
  const auto sort_b = form_sort(b, env);
  std::set<std::string> used = sort_a;
  used.insert(sort_b.begin(), sort_b.end());
  used.insert(a.restricted.begin(), a.restricted.end());
  used.insert(b.restricted.begin(), b.restricted.end());

  std::set<std::string> clash_a;
  for (const auto& r : a.restricted) {
    if (sort_b.count(r) || b.restricted.count(r)) clash_a.insert(r);
  }
  freshen(a, clash_a, used);
  std::set<std::string> clash_b;
  for (const auto& r : b.restricted) {
    if (sort_a.count(r) || a.restricted.count(r)) clash_b.insert(r);
  }
  freshen(b, clash_b, used);

  std::vector<std::string> locations = a.locations;
  std::set<std::string> taken(locations.begin(), locations.end());
  for (const auto& l : b.locations) {
    std::string n = l;
    for (int k = 1; taken.count(n); ++k) n = l + "_" + std::to_string(k);
    taken.insert(n);
    locations.push_back(n);
  }
  const std::size_t offset = a.locations.size();
  auto edges = a.edges;
  for (auto [p, q] : b.edges) edges.emplace_back(p + offset, q + offset);
  if (complete) {
    for (std::size_t p = 0; p < offset; ++p) {
      for (std::size_t q = 0; q < b.locations.size(); ++q) edges.emplace_back(p, q + offset);
    }
  }
  auto components = a.components;
  components.insert(components.end(), b.components.begin(), b.components.end());

  auto g = term::graph(std::move(locations), std::move(edges), std::move(components));
  std::set<std::string> restricted = a.restricted;
  restricted.insert(b.restricted.begin(), b.restricted.end());
  return restricted.empty() ? g : term::restrict(g, restricted);
}

}  // namespace vccts
