#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace psw {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Three-valued predicate result: a predicate may be undefined on a tuple.
enum class Tri { True, False, Void };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    default: return "void";
  }
}

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A term string produced under a standard interpretation ("f(q1,a[q2])").
struct TermString {
  std::string text;
  auto operator<=>(const TermString&) const = default;
};

/// A label literal; appears in dispatch machinery of separated loops.
struct LabelLit {
  std::string label;
  auto operator<=>(const LabelLit&) const = default;
};

/// Runtime value: exact integer, exact rational, plain string, term string,
/// or label literal. Arithmetic mixes Int and Rat; everything else compares
/// by kind and payload only.
class Value {
 public:
  Value() : v_(BigInt(0)) {}
  explicit Value(BigInt i) : v_(std::move(i)) {}
  explicit Value(BigRat r) : v_(std::move(r)) {}
  explicit Value(TermString t) : v_(std::move(t)) {}
  explicit Value(LabelLit l) : v_(std::move(l)) {}

  static Value integer(long long i) { return Value(BigInt(i)); }
  static Value integer(BigInt i) { return Value(std::move(i)); }
  static Value rational(BigRat r) { return Value(std::move(r)); }
  static Value rational(long long num, long long den) {
    return Value(BigRat(BigInt(num), BigInt(den)));
  }
  static Value str(std::string s) {
    Value v;
    v.v_ = StrBox{std::move(s)};
    return v;
  }
  static Value term(std::string s) { return Value(TermString{std::move(s)}); }
  static Value label(std::string s) { return Value(LabelLit{std::move(s)}); }

  bool is_int() const { return std::holds_alternative<BigInt>(v_); }
  bool is_rat() const { return std::holds_alternative<BigRat>(v_); }
  bool is_str() const { return std::holds_alternative<StrBox>(v_); }
  bool is_term() const { return std::holds_alternative<TermString>(v_); }
  bool is_label() const { return std::holds_alternative<LabelLit>(v_); }
  bool is_numeric() const { return is_int() || is_rat(); }

  const BigInt& as_int() const { return std::get<BigInt>(v_); }
  BigRat as_rat() const {
    if (is_int()) return BigRat(as_int());
    return std::get<BigRat>(v_);
  }
  const std::string& as_str() const { return std::get<StrBox>(v_).s; }
  const std::string& as_term() const { return std::get<TermString>(v_).text; }
  const std::string& as_label() const { return std::get<LabelLit>(v_).label; }

  std::optional<long long> small_int() const {
    if (!is_int()) return std::nullopt;
    const BigInt& i = as_int();
    if (i < std::numeric_limits<long long>::min() || i > std::numeric_limits<long long>::max())
      return std::nullopt;
    return i.convert_to<long long>();
  }

  /// Canonical textual form; also used when the value flows into a term.
  std::string to_string() const;

  bool operator==(const Value& o) const;
  bool operator<(const Value& o) const;

 private:
  struct StrBox {
    std::string s;
    auto operator<=>(const StrBox&) const = default;
  };
  std::variant<BigInt, BigRat, StrBox, TermString, LabelLit> v_;

  friend struct ValueOrder;
};

Value operator+(const Value& a, const Value& b);
Value operator-(const Value& a, const Value& b);
Value operator*(const Value& a, const Value& b);

/// Parses "12", "-3/4", "\"text\"", "'term", "@label". Throws EvalError.
Value parse_value(const std::string& text);

}  // namespace psw
