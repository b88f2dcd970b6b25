#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace vccts {

/// Data values exchanged over symbols: integers, booleans, atoms, pairs and lists.
class Value {
 public:
  enum class Kind { Int, Bool, Atom, Pair, List };

  Value() = default;

  static Value integer(std::int64_t v);
  static Value boolean(bool v);
  static Value atom(std::string name);
  static Value pair(Value first, Value second);
  static Value list(std::vector<Value> items);

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }

  // Accessors throw EvalError on a kind mismatch.
  std::int64_t as_int() const;
  bool as_bool() const;
  const std::string& as_atom() const;
  const Value& first() const;
  const Value& second() const;
  const std::vector<Value>& items() const;

  std::string str() const;

  friend std::strong_ordering operator<=>(const Value& a, const Value& b);
  friend bool operator==(const Value& a, const Value& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  Kind kind_ = Kind::Int;
  std::int64_t int_ = 0;
  std::string atom_;
  std::vector<Value> items_;  // two entries for pairs
};

}  // namespace vccts
