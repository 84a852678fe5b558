#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace csp {

// Exact rational on 64-bit numerator/denominator. Utilization sums over a
// core stay tiny (denominator at most the lcm of the periods involved), so
// 64-bit storage with 128-bit intermediates is plenty; anything that would
// not normalize back into 64 bits throws instead of silently degrading.
class Frac {
 public:
  constexpr Frac() : num_(0), den_(1) {}

  Frac(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("Frac: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    num_ = g ? num / g : num;
    den_ = g ? den / g : den;
  }

  static Frac zero() { return Frac(); }
  static Frac one() { return Frac(1, 1); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  Frac operator+(const Frac& o) const {
    const __int128 n =
        static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    const __int128 d = static_cast<__int128>(den_) * o.den_;
    return from_wide(n, d);
  }

  Frac operator-(const Frac& o) const {
    const __int128 n =
        static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_;
    const __int128 d = static_cast<__int128>(den_) * o.den_;
    return from_wide(n, d);
  }

  Frac& operator+=(const Frac& o) { return *this = *this + o; }
  Frac& operator-=(const Frac& o) { return *this = *this - o; }

  bool operator==(const Frac& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Frac& o) const { return !(*this == o); }
  bool operator<(const Frac& o) const {
    return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
  }
  bool operator<=(const Frac& o) const { return !(o < *this); }
  bool operator>(const Frac& o) const { return o < *this; }
  bool operator>=(const Frac& o) const { return !(*this < o); }

 private:
  static Frac from_wide(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const __int128 g = gcd_wide(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 kMax = INT64_MAX;
    if (n > kMax || n < -kMax || d > kMax)
      throw std::overflow_error("Frac: value outside 64-bit range");
    Frac f;
    f.num_ = static_cast<std::int64_t>(n);
    f.den_ = static_cast<std::int64_t>(d);
    return f;
  }

  static __int128 gcd_wide(__int128 a, __int128 b) {
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace csp
