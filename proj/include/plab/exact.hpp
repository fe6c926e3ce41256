#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace plab::exact {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// n! as an exact integer. Cached for the small n this library needs.
inline const Int& factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative integer");
  static const std::vector<Int> table = [] {
    std::vector<Int> t(128);
    t[0] = 1;
    for (int i = 1; i < 128; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  if (n < static_cast<int>(table.size())) return table[n];
  throw std::invalid_argument("factorial argument too large");
}

/// Splits n > 0 into (k, s) with n = k^2 * s and s squarefree.
/// Trial division; every value arising here is a product of small primes.
inline std::pair<Int, Int> squarefree_split(Int n) {
  Int k = 1, s = 1;
  for (Int d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) k *= d;
    if (e % 2) s *= d;
  }
  s *= n;  // leftover prime
  return {k, s};
}

/// Exact sum of quadratic surds  sum_i c_i * sqrt(s_i)  with rational c_i and
/// distinct squarefree positive integer radicands s_i. Closed under addition
/// and multiplication, which is all the Clebsch-Gordan algebra needs.
class SurdSum {
public:
  SurdSum() = default;

  static SurdSum of_rational(const Rational& c) {
    SurdSum r;
    if (c != 0) r.terms_[Int(1)] = c;
    return r;
  }

  /// sqrt(q) for q >= 0, as a single reduced term.
  static SurdSum sqrt_of(const Rational& q) {
    if (q < 0) throw std::invalid_argument("sqrt of negative rational");
    SurdSum r;
    if (q == 0) return r;
    // sqrt(n/d) = sqrt(n*d)/d
    const Int nd = numerator(q) * denominator(q);
    auto [k, s] = squarefree_split(nd);
    r.terms_[s] = Rational(k, denominator(q));
    return r;
  }

  bool is_zero() const { return terms_.empty(); }

  /// True when the value lies in Q (single radicand 1 or zero).
  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
  }

  Rational rational_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_rational()) throw std::logic_error("SurdSum is irrational");
    return terms_.begin()->second;
  }

  SurdSum& operator+=(const SurdSum& o) {
    for (const auto& [s, c] : o.terms_) add_term(s, c);
    return *this;
  }
  SurdSum operator+(const SurdSum& o) const {
    SurdSum r = *this;
    r += o;
    return r;
  }
  SurdSum operator-() const {
    SurdSum r = *this;
    for (auto& [s, c] : r.terms_) c = -c;
    return r;
  }
  SurdSum operator-(const SurdSum& o) const { return *this + (-o); }

  SurdSum& operator*=(const Rational& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [s, t] : terms_) t *= c;
    return *this;
  }

  SurdSum operator*(const SurdSum& o) const {
    SurdSum r;
    for (const auto& [s1, c1] : terms_)
      for (const auto& [s2, c2] : o.terms_) {
        // sqrt(s1)*sqrt(s2) = g*sqrt(s1*s2/g^2) with g = gcd(s1, s2)
        const Int g = boost::multiprecision::gcd(s1, s2);
        r.add_term((s1 / g) * (s2 / g), c1 * c2 * g);
      }
    return r;
  }

  /// Multiply in place by sqrt(q), q >= 0.
  SurdSum& mul_sqrt(const Rational& q) {
    *this = *this * sqrt_of(q);
    return *this;
  }

  bool operator==(const SurdSum& o) const = default;

  double to_double() const {
    double v = 0.0;
    for (const auto& [s, c] : terms_) {
      double root = s == 1 ? 1.0 : std::sqrt(s.convert_to<double>());
      v += exact::to_double(c) * root;
    }
    return v;
  }

  const std::map<Int, Rational>& terms() const { return terms_; }

private:
  void add_term(const Int& s, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(s);
    if (it == terms_.end()) {
      terms_.emplace(s, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::map<Int, Rational> terms_;
};

}  // namespace plab::exact
