#pragma once

#include "psw/value.hpp"

#include <map>
#include <string>
#include <vector>

namespace psw::dep {

/// Sparse multivariate polynomial with integer coefficients. Variables are
/// positional; an exponent vector maps position -> power.
class Poly {
 public:
  Poly() = default;
  static Poly constant(BigInt c);
  static Poly var(size_t index, size_t nvars);

  size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  long long degree() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly negate() const;

  BigInt eval(const std::vector<BigInt>& point) const;

  /// Remaps variables into a wider space: variable i becomes positions[i].
  Poly embed(const std::vector<size_t>& positions, size_t new_nvars) const;

  /// Linear form access: constant term and per-variable coefficient.
  /// Only valid when degree() <= 1.
  BigInt linear_constant() const;
  BigInt linear_coeff(size_t var) const;

  std::string to_string(const std::vector<std::string>& names) const;

  bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

 private:
  void add_term(const std::vector<int>& exps, const BigInt& c);
  size_t nvars_ = 0;
  std::map<std::vector<int>, BigInt> terms_;
};

}  // namespace psw::dep
