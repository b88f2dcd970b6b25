#include "vccts/value.hpp"

#include "vccts/error.hpp"

namespace vccts {

Value Value::integer(std::int64_t v) {
  Value r;
  r.kind_ = Kind::Int;
  r.int_ = v;
  return r;
}

Value Value::boolean(bool v) {
  Value r;
  r.kind_ = Kind::Bool;
  r.int_ = v ? 1 : 0;
  return r;
}

Value Value::atom(std::string name) {
  Value r;
  r.kind_ = Kind::Atom;
  r.atom_ = std::move(name);
  return r;
}

Value Value::pair(Value first, Value second) {
  Value r;
  r.kind_ = Kind::Pair;
  r.items_.reserve(2);
  r.items_.push_back(std::move(first));
  r.items_.push_back(std::move(second));
  return r;
}

Value Value::list(std::vector<Value> items) {
  Value r;
  r.kind_ = Kind::List;
  r.items_ = std::move(items);
  return r;
}

namespace {
const char* kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::Int: return "int";
    case Value::Kind::Bool: return "bool";
    case Value::Kind::Atom: return "atom";
    case Value::Kind::Pair: return "pair";
    case Value::Kind::List: return "list";
  }
  return "?";
}

void expect(const Value& v, Value::Kind k) {
  if (v.kind() != k) {
    throw EvalError(std::string("expected ") + kind_name(k) + ", got " + kind_name(v.kind()) +
                    " " + v.str());
  }
}
}  // namespace

std::int64_t Value::as_int() const {
  expect(*this, Kind::Int);
  return int_;
}

bool Value::as_bool() const {
  expect(*this, Kind::Bool);
  return int_ != 0;
}

const std::string& Value::as_atom() const {
  expect(*this, Kind::Atom);
  return atom_;
}

const Value& Value::first() const {
  expect(*this, Kind::Pair);
  return items_[0];
}

const Value& Value::second() const {
  expect(*this, Kind::Pair);
  return items_[1];
}

const std::vector<Value>& Value::items() const {
  expect(*this, Kind::List);
  return items_;
}

std::string Value::str() const {
  switch (kind_) {
    case Kind::Int: return std::to_string(int_);
    case Kind::Bool: return int_ ? "true" : "false";
    case Kind::Atom: return atom_;
    case Kind::Pair: return "(" + items_[0].str() + ", " + items_[1].str() + ")";
    case Kind::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) out += ", ";
        out += items_[i].str();
      }
      return out + "]";
    }
  }
  return {};
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  switch (a.kind_) {
    case Value::Kind::Int:
    case Value::Kind::Bool: return a.int_ <=> b.int_;
    case Value::Kind::Atom: return a.atom_ <=> b.atom_;
    case Value::Kind::Pair:
    case Value::Kind::List: {
      const std::size_t n = std::min(a.items_.size(), b.items_.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (auto c = a.items_[i] <=> b.items_[i]; c != 0) return c;
      }
      return a.items_.size() <=> b.items_.size();
    }
  }
  return std::strong_ordering::equal;
}

}  // namespace vccts
