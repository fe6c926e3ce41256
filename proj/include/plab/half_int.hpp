#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace plab {

/// Angular momentum quantum number (integer or half-integer), stored as
/// twice its value so that all arithmetic stays exact.
class HalfInt {
public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int whole) : twice_(2 * whole) {}

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  /// Nearest exact half-integer; rejects anything further than 1e-9 from k/2.
  static HalfInt from_double(double v) {
    const double t = 2.0 * v;
    const long long r = static_cast<long long>(t < 0 ? t - 0.5 : t + 0.5);
    if (t - static_cast<double>(r) > 1e-9 || t - static_cast<double>(r) < -1e-9)
      throw std::invalid_argument("not a half-integer: " + std::to_string(v));
    return from_twice(static_cast<int>(r));
  }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double value() const { return 0.5 * static_cast<double>(twice_); }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

private:
  int twice_ = 0;
};

/// Multiplicity 2F+1 of a level with angular momentum f.
constexpr int dimension(HalfInt f) { return f.twice() + 1; }

}  // namespace plab
