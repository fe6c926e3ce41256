#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plab/errors.hpp"
#include "plab/exact.hpp"
#include "plab/half_int.hpp"

namespace plab::cg {

/// Exact Clebsch-Gordan coefficient in the Condon-Shortley convention,
/// stored as a sign and the exact rational square of the magnitude. CG
/// values are square roots of rationals, so this representation keeps all
/// downstream algebra (weights, orthogonality sums) exact.
struct ExactCG {
  int sign = 0;  // -1, 0, +1
  exact::Rational magnitude_squared = 0;

  double value() const {
    const double mag = std::sqrt(exact::to_double(magnitude_squared));
    return sign * mag;
  }

  exact::SurdSum surd() const {
    exact::SurdSum s = exact::SurdSum::sqrt_of(magnitude_squared);
    if (sign < 0) s = -s;
    return s;
  }
};

namespace detail {

inline void require_valid_pair(HalfInt j, HalfInt m, const char* which) {
  if (j.twice() < 0)
    throw std::invalid_argument(std::string(which) + ": angular momentum must be >= 0");
  if ((j.twice() - m.twice()) % 2 != 0)
    throw std::invalid_argument(std::string(which) + ": m must differ from j by an integer");
  if (m.twice() < -j.twice() || m.twice() > j.twice())
    throw std::invalid_argument(std::string(which) + ": |m| must not exceed j");
}

}  // namespace detail

/// <j1 m1; j2 m2 | j m> via the Racah closed form, evaluated in exact
/// rational arithmetic. Zero (sign 0) when a selection rule fails.
inline ExactCG clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt j,
                              HalfInt m) {
  detail::require_valid_pair(j1, m1, "j1/m1");
  detail::require_valid_pair(j2, m2, "j2/m2");
  detail::require_valid_pair(j, m, "j/m");

  if (m1.twice() + m2.twice() != m.twice()) return {};
  // Triangle rule, and j1+j2+j must be an integer for the coupling to exist.
  if ((j1.twice() + j2.twice() + j.twice()) % 2 != 0) return {};
  if (j.twice() < std::abs(j1.twice() - j2.twice()) || j.twice() > j1.twice() + j2.twice())
    return {};

  using exact::factorial;
  using exact::Int;
  using exact::Rational;

  // All factorial arguments below are true integers (twice-values are even).
  const auto half = [](int twice) {
    return twice / 2;
  };
  const int a = half(j1.twice() + j2.twice() - j.twice());
  const int b = half(j1.twice() - j2.twice() + j.twice());
  const int c = half(-j1.twice() + j2.twice() + j.twice());
  const int d = half(j1.twice() + j2.twice() + j.twice()) + 1;

  Rational prefactor(j.twice() + 1, 1);  // 2j + 1
  prefactor *= Rational(factorial(a) * factorial(b) * factorial(c), factorial(d));
  prefactor *= Rational(factorial(half(j1.twice() + m1.twice())) *
                            factorial(half(j1.twice() - m1.twice())) *
                            factorial(half(j2.twice() + m2.twice())) *
                            factorial(half(j2.twice() - m2.twice())) *
                            factorial(half(j.twice() + m.twice())) *
                            factorial(half(j.twice() - m.twice())),
                        1);

  const int t1 = half(j1.twice() + j2.twice() - j.twice());  // j1+j2-j
  const int t2 = half(j1.twice() - m1.twice());              // j1-m1
  const int t3 = half(j2.twice() + m2.twice());              // j2+m2
  const int t4 = half(j.twice() - j2.twice() + m1.twice());  // j-j2+m1
  const int t5 = half(j.twice() - j1.twice() - m2.twice());  // j-j1-m2
  const int kmin = std::max({0, -t4, -t5});
  const int kmax = std::min({t1, t2, t3});

  Rational sum(0);
  for (int k = kmin; k <= kmax; ++k) {
    const Int denom = factorial(k) * factorial(t1 - k) * factorial(t2 - k) * factorial(t3 - k) *
                      factorial(t4 + k) * factorial(t5 + k);
    if (k % 2 == 0)
      sum += Rational(1, denom);
    else
      sum -= Rational(1, denom);
  }

  ExactCG out;
  if (sum == 0) return out;
  out.sign = sum > 0 ? +1 : -1;
  out.magnitude_squared = sum * sum * prefactor;
  return out;
}

/// Dark-state weighting of the ground hyperfine coherences for a sigma+
/// signal / sigma+ control lambda system on levels (f_a, f_b) -> f_c.
/// R_m is the ratio of signal to control Clebsch-Gordan coefficients; the
/// normalized weights w_m = R_m^2 / sum R^2 stay exact rationals.
struct DarkStateWeights {
  HalfInt f_a, f_b, f_c;
  int polarization = +1;
  bool connected = false;
  std::optional<HalfInt> unconnected_m;  // first m with infinite R_m

  struct Component {
    HalfInt m;
    int sign = 0;                     // sign of R_m
    exact::Rational r_squared = 0;    // R_m^2
    exact::Rational weight = 0;       // w_m, normalized iff connected
  };
  std::vector<Component> components;  // ascending m

  double r_value(const Component& c) const {
    return c.sign * std::sqrt(exact::to_double(c.r_squared));
  }
  std::vector<double> r_values() const {
    std::vector<double> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(r_value(c));
    return out;
  }
  std::vector<double> w_values() const {
    std::vector<double> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(exact::to_double(c.weight));
    return out;
  }

  std::string fingerprint() const {
    return "Fa=" + f_a.str() + ",Fb=" + f_b.str() + ",Fc=" + f_c.str() +
           ",pol=" + (polarization > 0 ? std::string("+1") : std::to_string(polarization));
  }
};

namespace detail {

inline bool dipole_allowed(HalfInt fg, HalfInt fe) {
  // triangle(fg, 1, fe): also forbids F=0 -> F'=0
  if ((fg.twice() - fe.twice()) % 2 != 0) return false;
  return std::abs(fg.twice() - fe.twice()) <= 2 && fg.twice() + fe.twice() >= 2;
}

}  // namespace detail

inline DarkStateWeights dark_state_weights(HalfInt f_a, HalfInt f_b, HalfInt f_c,
                                           int polarization = +1) {
  if (polarization != +1)
    throw std::invalid_argument(
        "only sigma+ signal/control (polarization = +1) is implemented");
  if ((f_a.twice() - f_b.twice()) % 2 != 0)
    throw std::invalid_argument("f_a and f_b must both be integer or both half-integer");
  if (!detail::dipole_allowed(f_b, f_c))
    throw std::invalid_argument("signal transition F_b <-> F_c is not dipole allowed");
  if (!detail::dipole_allowed(f_a, f_c))
    throw std::invalid_argument("control transition F_a <-> F_c is not dipole allowed");

  const HalfInt one(1);
  DarkStateWeights out;
  out.f_a = f_a;
  out.f_b = f_b;
  out.f_c = f_c;
  out.polarization = polarization;
  out.connected = true;

  // Scan every |b,m> the signal field couples to some existing |c,m+1>.
  // EIT requires each such excited state to be de-excitable by the control
  // to |a,m>; otherwise the lambda is unconnected (R_m infinite).
  for (int tm = -f_b.twice(); tm <= f_b.twice(); tm += 2) {
    const HalfInt m = HalfInt::from_twice(tm);
    const HalfInt me = m + one;
    if (me.twice() < -f_c.twice() || me.twice() > f_c.twice()) continue;  // no target state
    const ExactCG sig = clebsch_gordan(f_b, m, one, one, f_c, me);
    if (sig.sign == 0) continue;  // |b,m> does not absorb the signal
    if (m.twice() < -f_a.twice() || m.twice() > f_a.twice() ||
        clebsch_gordan(f_a, m, one, one, f_c, me).sign == 0) {
      out.connected = false;
      if (!out.unconnected_m) out.unconnected_m = m;
    }
  }

  // R_m over the joint coherence domain, where both coefficients are defined.
  const int tlo = std::max(-f_b.twice(), -f_a.twice());
  const int thi = std::min(f_b.twice(), f_a.twice());
  exact::Rational sum_r2(0);
  for (int tm = tlo; tm <= thi; tm += 2) {
    const HalfInt m = HalfInt::from_twice(tm);
    const HalfInt me = m + one;
    if (me.twice() < -f_c.twice() || me.twice() > f_c.twice()) continue;
    const ExactCG sig = clebsch_gordan(f_b, m, one, one, f_c, me);
    const ExactCG ctl = clebsch_gordan(f_a, m, one, one, f_c, me);
    if (ctl.sign == 0) continue;  // infinite R_m already recorded above
    DarkStateWeights::Component comp;
    comp.m = m;
    comp.sign = sig.sign * ctl.sign;
    comp.r_squared = sig.magnitude_squared / ctl.magnitude_squared;
    sum_r2 += comp.r_squared;
    out.components.push_back(comp);
  }

  if (out.connected && sum_r2 == 0) {
    // Signal couples to nothing at all; there is no polariton to store.
    out.connected = false;
  }
  if (out.connected) {
    for (auto& comp : out.components) comp.weight = comp.r_squared / sum_r2;
  }
  return out;
}

/// Exact value of (sum_m R_m R_{-m} / sum_m R_m^2)^2, the theta = pi/2
/// retrieval efficiency at half the Larmor period. The numerator terms are
/// quadratic surds; their sum squared divided by the rational denominator
/// squared is returned exactly (it collapses to a rational for symmetric
/// configurations such as the 85Rb D1 levels).
inline exact::SurdSum partial_revival_amplitude_exact(const DarkStateWeights& w) {
  if (!w.connected)
    throw ModelError("partial revival amplitude undefined for unconnected lambda");
  exact::SurdSum numerator;
  exact::Rational denominator(0);
  for (const auto& c : w.components) {
    denominator += c.r_squared;
    const auto mirror = std::find_if(w.components.begin(), w.components.end(),
                                     [&](const auto& o) { return o.m == -c.m; });
    if (mirror == w.components.end()) continue;
    exact::SurdSum term = exact::SurdSum::sqrt_of(c.r_squared * mirror->r_squared);
    term *= exact::Rational(c.sign * mirror->sign);
    numerator += term;
  }
  exact::SurdSum ratio_sq = numerator * numerator;
  ratio_sq *= exact::Rational(1) / (denominator * denominator);
  return ratio_sq;
}

inline double partial_revival_amplitude(const DarkStateWeights& w) {
  return partial_revival_amplitude_exact(w).to_double();
}

}  // namespace plab::cg
