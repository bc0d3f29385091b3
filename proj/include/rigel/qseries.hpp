#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "rigel/rational.hpp"
#include "rigel/ring.hpp"

namespace rigel {

// Truncated formal series in q^{1/2}. Exponents are stored doubled
// (q^{e/2} under key e) so every key is an exact integer with total order.
// Terms with doubled exponent >= trunc2 are discarded on write.
template <class R>
class QSeries {
 public:
  static constexpr int kDefaultTrunc2 = 13;  // through q^6
  // Truncation tag for exact constants (known to all orders).
  static constexpr int kExactTrunc2 = 1 << 28;

  explicit QSeries(int trunc2 = kDefaultTrunc2) : trunc2_(trunc2) {}

  static QSeries zero(int trunc2 = kDefaultTrunc2) { return QSeries(trunc2); }
  static QSeries one(int trunc2 = kDefaultTrunc2) {
    return monomial(0, RingTraits<R>::one(), trunc2);
  }
  static QSeries monomial(int e2, const R& coef, int trunc2 = kDefaultTrunc2) {
    QSeries s(trunc2);
    s.set(e2, coef);
    return s;
  }

  int trunc2() const { return trunc2_; }
  const std::map<int, R>& coeffs() const { return c_; }
  bool empty() const { return c_.empty(); }

  R at(int e2) const {
    auto it = c_.find(e2);
    return it == c_.end() ? RingTraits<R>::zero() : it->second;
  }
  void set(int e2, const R& v) {
    if (e2 >= trunc2_ || RingTraits<R>::is_zero(v))
      c_.erase(e2);
    else
      c_[e2] = v;
  }
  void add_to(int e2, const R& v) { set(e2, at(e2) + v); }

  // Lowest stored exponent; trunc2 when the series is (known) zero.
  int low2() const { return c_.empty() ? trunc2_ : c_.begin()->first; }

  friend QSeries operator+(const QSeries& a, const QSeries& b) {
    QSeries r(std::min(a.trunc2_, b.trunc2_));
    for (const auto& [e, v] : a.c_) r.add_to(e, v);
    for (const auto& [e, v] : b.c_) r.add_to(e, v);
    return r;
  }
  friend QSeries operator-(const QSeries& a, const QSeries& b) {
    QSeries r(std::min(a.trunc2_, b.trunc2_));
    for (const auto& [e, v] : a.c_) r.add_to(e, v);
    for (const auto& [e, v] : b.c_) r.add_to(e, RingTraits<R>::zero() - v);
    return r;
  }
  friend QSeries operator*(const QSeries& a, const QSeries& b) {
    if (a.low2() < 0 || b.low2() < 0)
      throw std::domain_error("q-series product with negative leading exponent");
    QSeries r(std::min(a.trunc2_, b.trunc2_));
    for (const auto& [ea, va] : a.c_) {
      if (ea >= r.trunc2_) break;
      for (const auto& [eb, vb] : b.c_) {
        if (ea + eb >= r.trunc2_) break;
        r.add_to(ea + eb, va * vb);
      }
    }
    return r;
  }
  QSeries operator-() const {
    QSeries r(trunc2_);
    for (const auto& [e, v] : c_) r.c_[e] = RingTraits<R>::zero() - v;
    return r;
  }
  QSeries& operator+=(const QSeries& b) { return *this = *this + b; }
  QSeries& operator-=(const QSeries& b) { return *this = *this - b; }
  QSeries& operator*=(const QSeries& b) { return *this = *this * b; }

  QSeries scaled(const R& s) const {
    QSeries r(trunc2_);
    for (const auto& [e, v] : c_) r.set(e, v * s);
    return r;
  }

  // Multiplicative inverse; requires an invertible constant term.
  QSeries inverse() const {
    if (low2() != 0)
      throw std::domain_error(
          "singular q-series: constant term not invertible");
    if (trunc2_ >= kExactTrunc2) {
      if (c_.size() == 1)
        return monomial(0, RingTraits<R>::inv(c_.begin()->second), trunc2_);
      throw std::domain_error("inverse of untruncated q-series");
    }
    R i0 = RingTraits<R>::inv(c_.begin()->second);
    QSeries r(trunc2_);
    r.set(0, i0);
    for (int k = 1; k < trunc2_; ++k) {
      R s = RingTraits<R>::zero();
      for (const auto& [e, v] : c_) {
        if (e <= 0 || e > k) continue;
        s = s + v * r.at(k - e);
      }
      if (!RingTraits<R>::is_zero(s)) r.set(k, RingTraits<R>::zero() - i0 * s);
    }
    return r;
  }

  QSeries pow(long long n) const {
    if (n < 0) throw std::domain_error("negative q-series power");
    QSeries r = one(trunc2_);
    QSeries base = *this;
    while (n > 0) {
      if (n & 1) r = r * base;
      base = base * base;
      n >>= 1;
    }
    return r;
  }

  QSeries truncated(int t2) const {
    QSeries r(std::min(t2, trunc2_));
    for (const auto& [e, v] : c_) r.set(e, v);
    return r;
  }

  // Multiply by q^{e2/2}; the knowledge horizon shifts with the series.
  QSeries shifted(int e2) const {
    QSeries r(trunc2_ + e2);
    for (const auto& [e, v] : c_) r.set(e + e2, v);
    return r;
  }

  template <class F>
  auto transformed(F f) const -> QSeries<decltype(f(RingTraits<R>::zero()))> {
    QSeries<decltype(f(RingTraits<R>::zero()))> r(trunc2_);
    for (const auto& [e, v] : c_) r.set(e, f(v));
    return r;
  }

  // Numeric value at qh = e^{pi i tau}, i.e. sum of coef * qh^e2.
  Cplx eval_qh(const Cplx& qh) const {
    Cplx s(0.0, 0.0);
    for (const auto& [e, v] : c_) {
      Cplx p = (e >= 0) ? std::pow(qh, double(e)) : 1.0 / std::pow(qh, double(-e));
      s += to_cplx(v) * p;
    }
    return s;
  }

 private:
  int trunc2_;
  std::map<int, R> c_;
};

template <class R>
struct RingTraits<QSeries<R>> {
  static QSeries<R> zero() { return QSeries<R>::zero(QSeries<R>::kExactTrunc2); }
  static QSeries<R> one() { return QSeries<R>::one(QSeries<R>::kExactTrunc2); }
  static bool is_zero(const QSeries<R>& x) { return x.empty(); }
  static QSeries<R> inv(const QSeries<R>& x) { return x.inverse(); }
  static QSeries<R> div_int(const QSeries<R>& x, long long k) {
    return x.scaled(RingTraits<R>::div_int(RingTraits<R>::one(), k));
  }
};

using QSeriesC = QSeries<Cplx>;
using QSeriesR = QSeries<Rat>;

// Largest coefficient magnitude of a - b, for tolerance comparisons.
inline double max_coeff_dist(const QSeriesC& a, const QSeriesC& b) {
  QSeriesC d = a - b;
  double m = 0.0;
  for (const auto& [e, v] : d.coeffs()) {
    (void)e;
    m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace rigel
