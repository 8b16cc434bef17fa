#include "psw/polynomial.hpp"

#include <numeric>
#include <sstream>

namespace psw::dep {

Poly Poly::constant(BigInt c) {
  Poly p;
  if (c != 0) p.terms_[{}] = std::move(c);
  return p;
}

Poly Poly::var(size_t index, size_t nvars) {
  Poly p;
  p.nvars_ = nvars;
  std::vector<int> e(nvars, 0);
  e[index] = 1;
  p.terms_[e] = 1;
  return p;
}

void Poly::add_term(const std::vector<int>& exps, const BigInt& c) {
  if (c == 0) return;
  std::vector<int> e = exps;
  e.resize(nvars_, 0);
  auto [it, fresh] = terms_.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

long long Poly::degree() const {
  long long best = 0;
  for (const auto& [e, _] : terms_)
    best = std::max(best, std::accumulate(e.begin(), e.end(), 0ll));
  return best;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r;
  r.nvars_ = std::max(nvars_, o.nvars_);
  for (const auto& [e, c] : terms_) r.add_term(e, c);
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o.negate(); }

Poly Poly::negate() const {
  Poly r = *this;
  for (auto& [_, c] : r.terms_) c = -c;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  r.nvars_ = std::max(nvars_, o.nvars_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      std::vector<int> e(r.nvars_, 0);
      for (size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
      for (size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

BigInt Poly::eval(const std::vector<BigInt>& point) const {
  BigInt out = 0;
  for (const auto& [e, c] : terms_) {
    BigInt t = c;
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    out += t;
  }
  return out;
}

Poly Poly::embed(const std::vector<size_t>& positions, size_t new_nvars) const {
  Poly r;
  r.nvars_ = new_nvars;
  for (const auto& [e, c] : terms_) {
    std::vector<int> ne(new_nvars, 0);
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i]) ne[positions[i]] += e[i];
    r.add_term(ne, c);
  }
  return r;
}

BigInt Poly::linear_constant() const {
  std::vector<int> zero(nvars_, 0);
  auto it = terms_.find(zero);
  return it == terms_.end() ? BigInt(0) : it->second;
}

BigInt Poly::linear_coeff(size_t var) const {
  std::vector<int> e(nvars_, 0);
  e[var] = 1;
  auto it = terms_.find(e);
  return it == terms_.end() ? BigInt(0) : it->second;
}

std::string Poly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << (c > 0 ? " + " : " - ");
    if (first && c < 0) os << "-";
    first = false;
    BigInt a = boost::multiprecision::abs(c);
    bool printed = false;
    if (a != 1) {
      os << a.str();
      printed = true;
    }
    for (size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (printed) os << "*";
      os << (i < names.size() ? names[i] : "v" + std::to_string(i));
      if (e[i] > 1) os << "^" << e[i];
      printed = true;
    }
    if (!printed) os << a.str();
  }
  return os.str();
}

}  // namespace psw::dep
