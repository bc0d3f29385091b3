#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "rigel/qseries.hpp"
#include "rigel/rational.hpp"
#include "rigel/theta.hpp"

namespace rigel {

namespace transgression_detail {

inline void require_kind(int kind) {
  if (kind < 1 || kind > 3) {
    throw std::invalid_argument("transgression kind must be 1, 2 or 3");
  }
}

inline void require_odd_degree(int d) {
  if (d < 1 || d % 2 == 0) {
    throw std::domain_error("transgression degree must be odd and positive, got " +
                            std::to_string(d));
  }
}

inline void require_even_rank(int rank_e) {
  if (rank_e < 2 || rank_e % 2 != 0) {
    throw std::domain_error("twist bundle rank must be even and at least 2, got " +
                            std::to_string(rank_e));
  }
}

}  // namespace transgression_detail

// Scalar prefactor carried by the spinor-bearing family: 2^{rank/2} for
// kind 1, and 1 for kinds 2 and 3.
inline Rat transgression_kappa(int kind, int rank_e) {
  transgression_detail::require_kind(kind);
  transgression_detail::require_even_rank(rank_e);
  if (kind != 1) return Rat(1);
  Rat k(1);
  for (int i = 0; i < rank_e / 2; ++i) k = k * Rat(2);
  return k;
}

// Exact coefficient series lambda_{kind,d} multiplying the degree-d odd
// Chern class of the gauge map in the transgressed character form.  With
// k = (d-1)/2 the series is
//   kappa * (k!)^2 / (2 (2k+1)!) * [v^k] theta_kind'(v) / theta_kind(v)
// where the log-derivative coefficient is taken on the q^{1/2} lattice.
// Even k gives the zero series, so every degree d = 1 mod 4 vanishes.
inline QSeriesR transgression_coeff(int kind, int d, int rank_e,
                                    int trunc2 = QSeriesR::kDefaultTrunc2) {
  transgression_detail::require_kind(kind);
  transgression_detail::require_odd_degree(d);
  const Rat kappa = transgression_kappa(kind, rank_e);
  const int k = (d - 1) / 2;
  if (k % 2 == 0) return QSeriesR::zero(trunc2);
  const Rat weight =
      kappa * Rat::factorial(k) * Rat::factorial(k) /
      (Rat(2) * Rat::factorial(2 * k + 1));
  return theta_logderiv_coeff(kind, k, trunc2).scaled(weight);
}

// Table of all odd-degree coefficient series up to degree_cap.
struct TransgressionTable {
  int kind = 0;
  int rank_e = 0;
  int degree_cap = 0;
  int trunc2 = 0;
  std::map<int, QSeriesR> lambda;

  const QSeriesR& at(int d) const {
    auto it = lambda.find(d);
    if (it == lambda.end()) {
      throw std::domain_error("no transgression entry of degree " +
                              std::to_string(d));
    }
    return it->second;
  }
};

inline TransgressionTable transgression_coeffs(int kind, int degree_cap,
                                               int trunc2, int rank_e) {
  transgression_detail::require_kind(kind);
  transgression_detail::require_even_rank(rank_e);
  if (degree_cap < 1) throw std::domain_error("degree cap must be positive");
  TransgressionTable table;
  table.kind = kind;
  table.rank_e = rank_e;
  table.degree_cap = degree_cap;
  table.trunc2 = trunc2;
  for (int d = 1; d <= degree_cap; d += 2) {
    table.lambda.emplace(d, transgression_coeff(kind, d, rank_e, trunc2));
  }
  return table;
}

// Numeric evaluation of a rational coefficient series at a modular point.
inline Cplx transgression_eval(const QSeriesR& series, const ModularPoint& pt) {
  return series.transformed([](const Rat& r) { return to_cplx(r); })
      .eval_qh(pt.qh());
}

// Direct numeric route to the same coefficient through the theta Taylor
// jet at the given tau.  Unlike the truncated q expansion this stays
// accurate for small imaginary part, as produced by fractional linear
// maps with a nonzero lower left entry.
inline Cplx transgression_coeff_eval(int kind, int d, int rank_e,
                                     const Cplx& tau) {
  transgression_detail::require_kind(kind);
  transgression_detail::require_odd_degree(d);
  const Rat kappa = transgression_kappa(kind, rank_e);
  const int k = (d - 1) / 2;
  if (k % 2 == 0) return Cplx(0.0, 0.0);
  const Poly<Cplx> jet = theta_taylor(kind, Cplx(0.0, 0.0), tau, k + 2);
  Poly<Cplx> value(k + 1);
  Poly<Cplx> slope(k + 1);
  for (int i = 0; i <= k; ++i) {
    value[i] = jet[i];
    slope[i] = double(i + 1) * jet[i + 1];
  }
  const Cplx logderiv_k = (slope * value.inverse())[k];
  const Rat weight = kappa * Rat::factorial(k) * Rat::factorial(k) /
                     (Rat(2) * Rat::factorial(2 * k + 1));
  return to_cplx(weight) * logderiv_k / cplx_ipow(kTwoPiI, k + 1);
}

}  // namespace rigel
