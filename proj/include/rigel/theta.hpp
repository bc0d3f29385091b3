#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "rigel/poly.hpp"
#include "rigel/qseries.hpp"
#include "rigel/rational.hpp"
#include "rigel/ring.hpp"

namespace rigel {

// Four Jacobi-type theta functions built from infinite products, with
// q = e^{2 pi i tau} and c(q) = prod_{n>=1} (1 - q^n):
//   kind 0: 2 c q^{1/8} sin(pi v) prod (1 - q^n e^{2pi i v})(1 - q^n e^{-2pi i v})
//   kind 1: 2 c q^{1/8} cos(pi v) prod (1 + q^n e^{2pi i v})(1 + q^n e^{-2pi i v})
//   kind 2:   c          prod (1 - q^{n-1/2} e^{2pi i v})(1 - q^{n-1/2} e^{-2pi i v})
//   kind 3:   c          prod (1 + q^{n-1/2} e^{2pi i v})(1 + q^{n-1/2} e^{-2pi i v})
// Half-integer powers of q are always taken through qh = e^{pi i tau} so the
// branch is fixed by tau, never by a complex power of q itself.

namespace theta_detail {

inline constexpr int kMaxFactors = 800;
inline constexpr double kTailTarget = 1e-16;

inline void require_upper_half(const Cplx& tau) {
  if (!(tau.imag() > 0.0))
    throw std::domain_error("tau must lie in the upper half-plane");
}

// Sign of the exponential factors and the q-power lattice for each kind:
// eps = -1 for kinds 0,2 (factors 1 - ...), +1 for kinds 1,3; half = true
// when the powers run over n - 1/2.
inline void kind_layout(int kind, double& eps, bool& half) {
  switch (kind) {
    case 0: eps = -1.0; half = false; return;
    case 1: eps = +1.0; half = false; return;
    case 2: eps = -1.0; half = true; return;
    case 3: eps = +1.0; half = true; return;
    default: throw std::invalid_argument("theta kind must be 0..3");
  }
}

inline Cplx euler_c(const Cplx& q) {
  Cplx c(1.0, 0.0);
  Cplx pw = q;
  for (int n = 1; n <= kMaxFactors; ++n) {
    c *= (Cplx(1.0, 0.0) - pw);
    if (std::abs(pw) < kTailTarget) break;
    pw *= q;
  }
  return c;
}

}  // namespace theta_detail

inline Cplx theta_nome_qh(const Cplx& tau) {
  theta_detail::require_upper_half(tau);
  return std::exp(Cplx(0.0, kPi) * tau);
}

// Evaluation point on the upper half-plane together with the doubled
// half-integer q-series cutoff used for symbolic expansions.
struct ModularPoint {
  Cplx tau;
  int trunc2 = QSeriesC::kDefaultTrunc2;

  ModularPoint(const Cplx& t, int tr2 = QSeriesC::kDefaultTrunc2)
      : tau(t), trunc2(tr2) {
    theta_detail::require_upper_half(tau);
    if (trunc2 < 1) throw std::domain_error("q-series cutoff must be positive");
  }
  Cplx qh() const { return theta_nome_qh(tau); }
};

inline Cplx theta_eval(int kind, const Cplx& v, const Cplx& tau) {
  using namespace theta_detail;
  double eps;
  bool half;
  kind_layout(kind, eps, half);
  const Cplx qh = theta_nome_qh(tau);
  const Cplx q = qh * qh;
  const Cplx e = std::exp(kTwoPiI * v);
  const Cplx einv = 1.0 / e;
  const double grow = std::max(std::abs(e), std::abs(einv));

  Cplx prod(1.0, 0.0);
  Cplx pw = half ? qh : q;  // q^{1/2} or q^1
  for (int n = 1; n <= kMaxFactors; ++n) {
    prod *= (Cplx(1.0, 0.0) + eps * pw * e) * (Cplx(1.0, 0.0) + eps * pw * einv);
    if (std::abs(pw) * grow < kTailTarget) break;
    pw *= q;
  }

  const Cplx c = euler_c(q);
  if (kind == 0)
    return 2.0 * c * std::exp(Cplx(0.0, kPi) * tau / 4.0) *
           std::sin(kPi * v) * prod;
  if (kind == 1)
    return 2.0 * c * std::exp(Cplx(0.0, kPi) * tau / 4.0) *
           std::cos(kPi * v) * prod;
  return c * prod;
}

// theta'(0, tau) for kind 0, equal to 2 pi q^{1/8} c(q)^3.
inline Cplx theta_d0(const Cplx& tau) {
  theta_detail::require_upper_half(tau);
  const Cplx q = std::exp(kTwoPiI * tau);
  const Cplx c = theta_detail::euler_c(q);
  return 2.0 * kPi * std::exp(Cplx(0.0, kPi) * tau / 4.0) * c * c * c;
}

// Taylor jet of theta_kind(v0 + eps, tau) in eps through the given order.
inline Poly<Cplx> theta_taylor(int kind, const Cplx& v0, const Cplx& tau,
                               int order) {
  using namespace theta_detail;
  double eps;
  bool half;
  kind_layout(kind, eps, half);
  const int cap = order + 1;
  const Cplx qh = theta_nome_qh(tau);
  const Cplx q = qh * qh;
  const Cplx e = std::exp(kTwoPiI * v0);
  const Cplx einv = 1.0 / e;
  const double grow = std::max(std::abs(e), std::abs(einv));

  // Jets of e^{+2 pi i eps} and e^{-2 pi i eps}.
  Poly<Cplx> ep(cap), em(cap);
  {
    Cplx cp(1.0, 0.0), cm(1.0, 0.0);
    for (int k = 0; k < cap; ++k) {
      ep[k] = cp;
      em[k] = cm;
      cp *= kTwoPiI / double(k + 1);
      cm *= -kTwoPiI / double(k + 1);
    }
  }

  Poly<Cplx> prod = Poly<Cplx>::constant(cap, Cplx(1.0, 0.0));
  Cplx pw = half ? qh : q;
  for (int n = 1; n <= kMaxFactors; ++n) {
    Poly<Cplx> f1 = Poly<Cplx>::constant(cap, Cplx(1.0, 0.0)) +
                    ep.scaled(eps * pw * e);
    Poly<Cplx> f2 = Poly<Cplx>::constant(cap, Cplx(1.0, 0.0)) +
                    em.scaled(eps * pw * einv);
    prod = prod * f1 * f2;
    if (std::abs(pw) * grow < kTailTarget) break;
    pw *= q;
  }

  const Cplx c = euler_c(q);
  if (kind == 0 || kind == 1) {
    // Jet of sin(pi(v0+eps)) or cos(pi(v0+eps)) by angle addition.
    Poly<Cplx> trig(cap);
    const Cplx s0 = std::sin(kPi * v0);
    const Cplx c0 = std::cos(kPi * v0);
    Cplx pk(1.0, 0.0);  // pi^k / k!
    for (int k = 0; k < cap; ++k) {
      // d^k/dv^k of sin picks the cycle sin, cos, -sin, -cos.
      Cplx base;
      if (kind == 0)
        base = (k % 4 == 0) ? s0 : (k % 4 == 1) ? c0 : (k % 4 == 2) ? -s0 : -c0;
      else
        base = (k % 4 == 0) ? c0 : (k % 4 == 1) ? -s0 : (k % 4 == 2) ? -c0 : s0;
      trig[k] = base * pk;
      pk *= kPi / double(k + 1);
    }
    const Cplx scale = 2.0 * c * std::exp(Cplx(0.0, kPi) * tau / 4.0);
    return (prod * trig).scaled(scale);
  }
  return prod.scaled(c);
}

// Logarithmic derivative theta_kind'(v, tau) / theta_kind(v, tau) at a point.
inline Cplx theta_logderiv_at(int kind, const Cplx& v, const Cplx& tau) {
  using namespace theta_detail;
  double eps;
  bool half;
  kind_layout(kind, eps, half);
  const Cplx qh = theta_nome_qh(tau);
  const Cplx q = qh * qh;
  const Cplx e = std::exp(kTwoPiI * v);
  const Cplx einv = 1.0 / e;
  const double grow = std::max(std::abs(e), std::abs(einv));

  Cplx s(0.0, 0.0);
  Cplx pw = half ? qh : q;
  for (int n = 1; n <= kMaxFactors; ++n) {
    s += eps * pw * e / (Cplx(1.0, 0.0) + eps * pw * e) -
         eps * pw * einv / (Cplx(1.0, 0.0) + eps * pw * einv);
    if (std::abs(pw) * grow < kTailTarget) break;
    pw *= q;
  }
  s *= kTwoPiI;
  if (kind == 0) s += kPi * std::cos(kPi * v) / std::sin(kPi * v);
  if (kind == 1) s -= kPi * std::sin(kPi * v) / std::cos(kPi * v);
  return s;
}

// Jet of y theta'(0) / theta(y) around y = 0 (the lowest jet coefficient is
// 1; theta(y)/y is inverted as a polynomial).
inline Poly<Cplx> theta_pair_jet(const Cplx& tau, int order) {
  Poly<Cplx> th = theta_taylor(0, Cplx(0.0, 0.0), tau, order + 1);
  Poly<Cplx> shifted(order + 1);
  for (int k = 0; k <= order; ++k) shifted[k] = th[k + 1];  // theta(y)/y
  return shifted.inverse().scaled(theta_d0(tau));
}

// Jet of theta'(0) / theta(v0 + eps); v0 must avoid the zero set.
inline Poly<Cplx> theta_recip_jet(const Cplx& v0, const Cplx& tau, int order) {
  return theta_taylor(0, v0, tau, order).inverse().scaled(theta_d0(tau));
}

// Jet of theta(v0 + eps) / theta'(0).
inline Poly<Cplx> theta_flat_jet(const Cplx& v0, const Cplx& tau, int order) {
  return theta_taylor(0, v0, tau, order).scaled(1.0 / theta_d0(tau));
}

// Jet of theta_kind(v0 + eps) / theta_kind(0) for kinds 1, 2, 3.
inline Poly<Cplx> theta_ratio_jet(int kind, const Cplx& v0, const Cplx& tau,
                                  int order) {
  if (kind == 0) throw std::invalid_argument("ratio jet needs kind 1, 2 or 3");
  Poly<Cplx> th = theta_taylor(kind, v0, tau, order);
  Cplx denom = theta_eval(kind, Cplx(0.0, 0.0), tau);
  return th.scaled(1.0 / denom);
}

// Jet of pi y / sin(pi y) around y = 0.
inline Poly<Cplx> pair_sin_jet(int order) {
  const int cap = order + 1;
  Poly<Cplx> s(cap);  // sin(pi y)/(pi y)
  double term = 1.0;
  for (int k = 0; 2 * k < cap; ++k) {
    s[2 * k] = Cplx(term, 0.0);
    term *= -kPi * kPi / double((2 * k + 2) * (2 * k + 3));
  }
  return s.inverse();
}

// Jet of pi y / tan(pi y) around y = 0.
inline Poly<Cplx> pair_tan_jet(int order) {
  const int cap = order + 1;
  Poly<Cplx> s(cap), c(cap);  // sin(pi y)/(pi y) and cos(pi y)
  double ts = 1.0, tc = 1.0;
  for (int k = 0; 2 * k < cap; ++k) {
    s[2 * k] = Cplx(ts, 0.0);
    c[2 * k] = Cplx(tc, 0.0);
    ts *= -kPi * kPi / double((2 * k + 2) * (2 * k + 3));
    tc *= -kPi * kPi / double((2 * k + 1) * (2 * k + 2));
  }
  return s.inverse() * c;
}

// Throws when v0 sits on (or numerically near) the theta zero lattice
// Z + Z tau, naming the offending lattice point.
inline void theta_zero_guard(const Cplx& v0, const Cplx& tau) {
  long long n = std::llround(v0.imag() / tau.imag());
  Cplx rem = v0 - double(n) * tau;
  long long m = std::llround(rem.real());
  if (std::abs(theta_eval(0, v0, tau)) <
      1e-8 * std::abs(theta_d0(tau))) {
    throw std::domain_error(
        "theta argument at zero lattice point m + n*tau with m=" +
        std::to_string(m) + " n=" + std::to_string(n));
  }
}

// ---------------------------------------------------------------------------
// Exact rational log-derivative coefficients.
//
// d_{kind,k} := [v^k] (theta_kind'/theta_kind)(v) / (2 pi i)^{k+1} is a
// q^{1/2}-series with rational coefficients; it vanishes for even k, and for
// kind 0 the 1/v pole is removed first (regularized log-derivative).  The
// product factors contribute (2/k!) sum_{n,r>=1} (-1)^{r-1} eps^r r^k
// q^{r s_n}; the sin/cos prefactors contribute the odd Taylor coefficients of
// x B/(4A) (kind 1) or (A - B)/(x B) (kind 0) in x = 2 pi i v, where
// A = cosh(x/2) and B = 2 sinh(x/2)/x.
// ---------------------------------------------------------------------------
inline QSeriesR theta_logderiv_coeff(int kind, int k, int trunc2) {
  double eps;
  bool half;
  theta_detail::kind_layout(kind, eps, half);
  QSeriesR out(trunc2);
  if (k < 1 || k % 2 == 0) return out;

  const Rat two_over_kfac = Rat(2) / Rat::factorial(k);
  for (long long r = 1;; ++r) {
    long long step0 = half ? r : 2 * r;  // doubled exponent of q^{r s_1}
    if (step0 >= trunc2) break;
    long long rk = 1;
    for (int i = 0; i < k; ++i) rk *= r;
    Rat base = two_over_kfac * Rat(rk);
    if (r % 2 == 0) base = -base;             // (-1)^{r-1}
    if (eps < 0.0 && r % 2 == 1) base = -base;  // eps^r
    for (long long e = step0; e < trunc2; e += 2 * r)
      out.add_to((int)e, base);
  }

  if (kind == 0 || kind == 1) {
    const int cap = k + 2;
    Poly<Rat> a(cap), b(cap);
    Rat ta(1), tb(1);
    for (int j = 0; 2 * j < cap; ++j) {
      a[2 * j] = ta;
      b[2 * j] = tb;
      ta = ta / Rat(4LL * (2 * j + 1) * (2 * j + 2));
      tb = tb / Rat(4LL * (2 * j + 2) * (2 * j + 3));
    }
    Rat coef;
    if (kind == 1) {
      Poly<Rat> t = Poly<Rat>::variable(cap) * b * a.inverse();
      coef = t[k] / Rat(4);
    } else {
      Poly<Rat> diff = a - b;  // vanishing constant term
      Poly<Rat> shifted(cap);
      for (int i = 0; i + 1 < cap; ++i) shifted[i] = diff[i + 1];
      coef = (shifted * b.inverse())[k];
    }
    out.add_to(0, coef);
  }
  return out;
}

// Power series of theta_kind'/theta_kind in v around 0 (pole removed for
// kind 0), with numeric-complex q-series coefficients at the pt cutoff.
inline Poly<QSeriesC> theta_logderiv(int kind, int order,
                                     const ModularPoint& pt) {
  Poly<QSeriesC> out(order + 1);
  Cplx scale = kTwoPiI;  // (2 pi i)^{k+1}
  for (int k = 0; k <= order; ++k) {
    scale *= (k == 0) ? Cplx(1.0, 0.0) : kTwoPiI;
    if (k % 2 == 0) {
      out[k] = QSeriesC::zero(pt.trunc2);
      continue;
    }
    QSeriesR d = theta_logderiv_coeff(kind, k, pt.trunc2);
    const Cplx s = scale;
    out[k] = d.transformed([s](const Rat& r) { return to_cplx(r) * s; });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symbolic jets: polynomials in the shift variable with q^{1/2}-series
// coefficients, the q-power kept formal and everything else numeric.
// ---------------------------------------------------------------------------

namespace theta_detail {

// Jets of e^{+2 pi i eps} and e^{-2 pi i eps} through the cap.
inline void exp_jets(int cap, Poly<Cplx>& ep, Poly<Cplx>& em) {
  ep = Poly<Cplx>(cap);
  em = Poly<Cplx>(cap);
  Cplx cp(1.0, 0.0), cm(1.0, 0.0);
  for (int k = 0; k < cap; ++k) {
    ep[k] = cp;
    em[k] = cm;
    cp *= kTwoPiI / double(k + 1);
    cm *= -kTwoPiI / double(k + 1);
  }
}

inline Poly<QSeriesC> lift(const Poly<Cplx>& p, int trunc2) {
  Poly<QSeriesC> r(p.cap());
  for (int k = 0; k < p.cap(); ++k)
    r[k] = QSeriesC::monomial(0, p[k], trunc2);
  return r;
}

// Product over n of the paired theta factors around v0, divided by the same
// factors at v = 0, as a jet with q-series coefficients; the finite product
// is exact because factors beyond the cutoff cannot contribute.
inline Poly<QSeriesC> ratio_product_qjet(double eps, bool half, const Cplx& v0,
                                         int order, int trunc2) {
  const int cap = order + 1;
  const Cplx e0 = std::exp(kTwoPiI * v0);
  const Cplx e0inv = 1.0 / e0;
  Poly<Cplx> ep(cap), em(cap);
  exp_jets(cap, ep, em);

  Poly<QSeriesC> prod = lift(Poly<Cplx>::constant(cap, Cplx(1.0, 0.0)), trunc2);
  for (int n = 1;; ++n) {
    const int s2 = half ? 2 * n - 1 : 2 * n;
    if (s2 >= trunc2) break;
    Poly<QSeriesC> f1(cap), f2(cap);
    for (int k = 0; k < cap; ++k) {
      QSeriesC c1 = QSeriesC::monomial(s2, eps * e0 * ep[k], trunc2);
      QSeriesC c2 = QSeriesC::monomial(s2, eps * e0inv * em[k], trunc2);
      if (k == 0) {
        c1.add_to(0, Cplx(1.0, 0.0));
        c2.add_to(0, Cplx(1.0, 0.0));
      }
      f1[k] = c1;
      f2[k] = c2;
    }
    QSeriesC denom = QSeriesC::one(trunc2);
    denom.add_to(s2, Cplx(eps, 0.0));
    QSeriesC dinv2 = denom.inverse();
    dinv2 = dinv2 * dinv2;
    prod = prod * f1 * f2;
    for (int k = 0; k < cap; ++k) prod[k] = prod[k] * dinv2;
  }
  return prod;
}

// Same paired product but not normalized at v = 0.
inline Poly<QSeriesC> raw_product_qjet(double eps, bool half, const Cplx& v0,
                                       int order, int trunc2) {
  const int cap = order + 1;
  const Cplx e0 = std::exp(kTwoPiI * v0);
  const Cplx e0inv = 1.0 / e0;
  Poly<Cplx> ep(cap), em(cap);
  exp_jets(cap, ep, em);

  Poly<QSeriesC> prod = lift(Poly<Cplx>::constant(cap, Cplx(1.0, 0.0)), trunc2);
  for (int n = 1;; ++n) {
    const int s2 = half ? 2 * n - 1 : 2 * n;
    if (s2 >= trunc2) break;
    Poly<QSeriesC> f1(cap), f2(cap);
    for (int k = 0; k < cap; ++k) {
      QSeriesC c1 = QSeriesC::monomial(s2, eps * e0 * ep[k], trunc2);
      QSeriesC c2 = QSeriesC::monomial(s2, eps * e0inv * em[k], trunc2);
      if (k == 0) {
        c1.add_to(0, Cplx(1.0, 0.0));
        c2.add_to(0, Cplx(1.0, 0.0));
      }
      f1[k] = c1;
      f2[k] = c2;
    }
    prod = prod * f1 * f2;
  }
  return prod;
}

// Jet of sin(pi(v0+eps)) or cos(pi(v0+eps)) by repeated differentiation.
inline Poly<Cplx> trig_jet(bool use_sin, const Cplx& v0, int cap) {
  Poly<Cplx> t(cap);
  const Cplx s0 = std::sin(kPi * v0);
  const Cplx c0 = std::cos(kPi * v0);
  Cplx pk(1.0, 0.0);
  for (int k = 0; k < cap; ++k) {
    Cplx base;
    if (use_sin)
      base = (k % 4 == 0) ? s0 : (k % 4 == 1) ? c0 : (k % 4 == 2) ? -s0 : -c0;
    else
      base = (k % 4 == 0) ? c0 : (k % 4 == 1) ? -s0 : (k % 4 == 2) ? -c0 : s0;
    t[k] = base * pk;
    pk *= kPi / double(k + 1);
  }
  return t;
}

// c(q) = prod (1 - q^n) on the doubled grid, exact finite product.
inline QSeriesC euler_c_qseries(int trunc2) {
  QSeriesC c = QSeriesC::one(trunc2);
  for (int n = 1; 2 * n < trunc2; ++n) {
    QSeriesC f = QSeriesC::one(trunc2);
    f.add_to(2 * n, Cplx(-1.0, 0.0));
    c *= f;
  }
  return c;
}

}  // namespace theta_detail

// Full theta jet around center with q-series coefficients; the q^{1/8}
// prefactor of kinds 0 and 1 is folded in numerically through pt.tau.
inline Poly<QSeriesC> theta_taylor_qjet(int kind, const Cplx& center,
                                        const ModularPoint& pt, int order) {
  using namespace theta_detail;
  double eps;
  bool half;
  kind_layout(kind, eps, half);
  const int cap = order + 1;
  Poly<QSeriesC> prod = raw_product_qjet(eps, half, center, order, pt.trunc2);
  QSeriesC c = euler_c_qseries(pt.trunc2);
  if (kind == 0 || kind == 1) {
    const Cplx pref = 2.0 * std::exp(Cplx(0.0, kPi) * pt.tau / 4.0);
    Poly<QSeriesC> trig = lift(trig_jet(kind == 0, center, cap), pt.trunc2);
    prod = prod * trig;
    for (int k = 0; k < cap; ++k) prod[k] = (prod[k] * c).scaled(pref);
    return prod;
  }
  for (int k = 0; k < cap; ++k) prod[k] = prod[k] * c;
  return prod;
}

// theta'(0, tau) as a q-series on the pt cutoff (value 2 pi q^{1/8} c(q)^3
// with q^{1/8} numeric).
inline QSeriesC theta_d0_qseries(const ModularPoint& pt) {
  QSeriesC c = theta_detail::euler_c_qseries(pt.trunc2);
  const Cplx pref = 2.0 * kPi * std::exp(Cplx(0.0, kPi) * pt.tau / 4.0);
  return (c * c * c).scaled(pref);
}

// Jet of theta_kind(v0 + eps)/theta_kind(0) for kinds 1, 2, 3, with q-series
// coefficients; all tau-dependent prefactors cancel exactly.
inline Poly<QSeriesC> theta_ratio_qjet(int kind, const Cplx& v0,
                                       const ModularPoint& pt, int order) {
  using namespace theta_detail;
  if (kind == 0) throw std::invalid_argument("ratio jet needs kind 1, 2 or 3");
  double eps;
  bool half;
  kind_layout(kind, eps, half);
  Poly<QSeriesC> prod = ratio_product_qjet(eps, half, v0, order, pt.trunc2);
  if (kind == 1) {
    Poly<QSeriesC> trig = lift(trig_jet(false, v0, order + 1), pt.trunc2);
    prod = prod * trig;
  }
  return prod;
}

// Jet of theta(v0 + eps)/theta'(0) with q-series coefficients.
inline Poly<QSeriesC> theta_flat_qjet(const Cplx& v0, const ModularPoint& pt,
                                      int order) {
  using namespace theta_detail;
  Poly<QSeriesC> prod = ratio_product_qjet(-1.0, false, v0, order, pt.trunc2);
  Poly<Cplx> trig = trig_jet(true, v0, order + 1);
  Poly<QSeriesC> t = lift(trig.scaled(Cplx(1.0 / kPi, 0.0)), pt.trunc2);
  return prod * t;
}

// Jet of theta'(0)/theta(v0 + eps); v0 must avoid the zero lattice.
inline Poly<QSeriesC> theta_recip_qjet(const Cplx& v0, const ModularPoint& pt,
                                       int order) {
  theta_zero_guard(v0, pt.tau);
  return theta_flat_qjet(v0, pt, order).inverse();
}

// Jet of y theta'(0)/theta(y) around y = 0 with q-series coefficients.
inline Poly<QSeriesC> theta_pair_qjet(const ModularPoint& pt, int order) {
  using namespace theta_detail;
  const int cap = order + 2;
  Poly<QSeriesC> prod =
      ratio_product_qjet(-1.0, false, Cplx(0.0, 0.0), cap - 1, pt.trunc2);
  // sin(pi eps)/(pi eps) jet
  Poly<Cplx> s(cap);
  double term = 1.0;
  for (int k = 0; 2 * k < cap; ++k) {
    s[2 * k] = Cplx(term, 0.0);
    term *= -kPi * kPi / double((2 * k + 2) * (2 * k + 3));
  }
  Poly<QSeriesC> flat_over_y = prod * lift(s, pt.trunc2);
  Poly<QSeriesC> head(order + 1);
  for (int k = 0; k <= order; ++k) head[k] = flat_over_y[k];
  return head.inverse();
}

}  // namespace rigel
