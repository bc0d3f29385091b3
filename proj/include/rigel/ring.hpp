#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>

namespace rigel {

using Cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline const Cplx kTwoPiI = Cplx(0.0, 2.0 * kPi);

// Integer power with exact single-valued semantics for negative exponents.
inline Cplx cplx_ipow(const Cplx& z, long long n) {
  if (n < 0) {
    const Cplx p = cplx_ipow(z, -n);
    if (p == Cplx(0.0, 0.0)) throw std::domain_error("zero to a negative power");
    return 1.0 / p;
  }
  Cplx r(1.0, 0.0);
  Cplx b = z;
  long long e = n;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// Coefficient-ring interface used by the series/polynomial templates.
// Specialized for every ring the templates are instantiated with.
template <class R>
struct RingTraits;

template <>
struct RingTraits<double> {
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static bool is_zero(double x) { return x == 0.0; }
  static double inv(double x) {
    if (x == 0.0) throw std::domain_error("division by zero");
    return 1.0 / x;
  }
  static double div_int(double x, long long k) { return x / double(k); }
};

template <>
struct RingTraits<Cplx> {
  static Cplx zero() { return Cplx(0.0, 0.0); }
  static Cplx one() { return Cplx(1.0, 0.0); }
  static bool is_zero(const Cplx& x) { return x == Cplx(0.0, 0.0); }
  static Cplx inv(const Cplx& x) {
    if (is_zero(x)) throw std::domain_error("division by zero");
    return 1.0 / x;
  }
  static Cplx div_int(const Cplx& x, long long k) { return x / double(k); }
};

}  // namespace rigel
