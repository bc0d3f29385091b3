#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "rigel/ring.hpp"

namespace rigel {

namespace detail {
using i128 = __int128;

inline i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}
}  // namespace detail

// Exact rational on 64-bit numerator/denominator, always normalized with a
// positive denominator. Intermediates run through 128 bits; a result that
// does not fit 64 bits throws std::overflow_error instead of wrapping.
class Rat {
 public:
  Rat() = default;
  Rat(long long n) : num_(n) {}
  Rat(long long n, long long d) { *this = make(n, d); }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make(detail::i128(a.num_) * b.den_ + detail::i128(b.num_) * a.den_,
                detail::i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make(detail::i128(a.num_) * b.den_ - detail::i128(b.num_) * a.den_,
                detail::i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make(detail::i128(a.num_) * b.num_, detail::i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("division by zero rational");
    return make(detail::i128(a.num_) * b.den_, detail::i128(a.den_) * b.num_);
  }
  Rat operator-() const {
    Rat r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rat& operator+=(const Rat& b) { return *this = *this + b; }
  Rat& operator-=(const Rat& b) { return *this = *this - b; }
  Rat& operator*=(const Rat& b) { return *this = *this * b; }
  Rat& operator/=(const Rat& b) { return *this = *this / b; }
  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return detail::i128(a.num_) * b.den_ < detail::i128(b.num_) * a.den_;
  }

  Rat inv() const {
    if (num_ == 0) throw std::domain_error("division by zero rational");
    return make(den_, num_);
  }
  double to_double() const { return double(num_) / double(den_); }
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // C(n, k) for n >= 0, exact.
  static Rat binomial(long long n, long long k) {
    if (k < 0 || k > n) return Rat(0);
    detail::i128 r = 1;
    for (long long i = 1; i <= k; ++i) {
      r = r * (n - k + i) / i;
      if (r > INT64_MAX) throw std::overflow_error("binomial overflow");
    }
    return Rat((long long)r);
  }

  static Rat factorial(long long n) {
    detail::i128 r = 1;
    for (long long i = 2; i <= n; ++i) {
      r *= i;
      if (r > INT64_MAX) throw std::overflow_error("factorial overflow");
    }
    return Rat((long long)r);
  }

 private:
  long long num_ = 0;
  long long den_ = 1;

  static Rat make(detail::i128 n, detail::i128 d) {
    if (d == 0) throw std::domain_error("zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    detail::i128 g = detail::gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("rational overflow");
    Rat r;
    r.num_ = (long long)n;
    r.den_ = (long long)d;
    return r;
  }
};

template <>
struct RingTraits<Rat> {
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static bool is_zero(const Rat& x) { return x.is_zero(); }
  static Rat inv(const Rat& x) { return x.inv(); }
  static Rat div_int(const Rat& x, long long k) { return x / Rat(k); }
};

inline Cplx to_cplx(const Rat& x) { return Cplx(x.to_double(), 0.0); }
inline Cplx to_cplx(double x) { return Cplx(x, 0.0); }
inline Cplx to_cplx(const Cplx& x) { return x; }

}  // namespace rigel
