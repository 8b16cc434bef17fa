#include "psw/value.hpp"

#include <sstream>

namespace psw {

namespace {

int kind_rank(const Value& v) {
  if (v.is_int()) return 0;
  if (v.is_rat()) return 1;
  if (v.is_str()) return 2;
  if (v.is_term()) return 3;
  return 4;
}

}  // namespace

std::string Value::to_string() const {
  if (is_int()) return as_int().str();
  if (is_rat()) {
    const BigRat& r = std::get<BigRat>(v_);
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1)
      os << "/" << boost::multiprecision::denominator(r);
    return os.str();
  }
  if (is_str()) return "\"" + as_str() + "\"";
  if (is_term()) return as_term();
  return "@" + as_label();
}

bool Value::operator==(const Value& o) const {
  if (is_numeric() && o.is_numeric()) return as_rat() == o.as_rat();
  return v_ == o.v_;
}

bool Value::operator<(const Value& o) const {
  if (is_numeric() && o.is_numeric()) return as_rat() < o.as_rat();
  int ra = kind_rank(*this), rb = kind_rank(o);
  if (ra != rb) return ra < rb;
  return v_ < o.v_;
}

static Value numeric_op(const Value& a, const Value& b, char op) {
  if (!a.is_numeric() || !b.is_numeric())
    throw EvalError("arithmetic on non-numeric value");
  if (a.is_int() && b.is_int()) {
    const BigInt& x = a.as_int();
    const BigInt& y = b.as_int();
    switch (op) {
      case '+': return Value(x + y);
      case '-': return Value(x - y);
      default: return Value(x * y);
    }
  }
  BigRat x = a.as_rat(), y = b.as_rat();
  switch (op) {
    case '+': return Value(BigRat(x + y));
    case '-': return Value(BigRat(x - y));
    default: return Value(BigRat(x * y));
  }
}

Value operator+(const Value& a, const Value& b) { return numeric_op(a, b, '+'); }
Value operator-(const Value& a, const Value& b) { return numeric_op(a, b, '-'); }
Value operator*(const Value& a, const Value& b) { return numeric_op(a, b, '*'); }

Value parse_value(const std::string& text) {
  if (text.empty()) throw EvalError("empty value literal");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') throw EvalError("unterminated string literal");
    return Value::str(text.substr(1, text.size() - 2));
  }
  if (text.front() == '\'') return Value::term(text.substr(1));
  if (text.front() == '@') return Value::label(text.substr(1));
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(text.substr(0, slash));
      BigInt den(text.substr(slash + 1));
      if (den == 0) throw EvalError("zero denominator: " + text);
      return Value(BigRat(num, den));
    }
    return Value(BigInt(text));
  } catch (const std::exception&) {
    throw EvalError("bad value literal: " + text);
  }
}

}  // namespace psw
