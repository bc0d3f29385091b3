#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rigel/graded.hpp"
#include "rigel/poly.hpp"
#include "rigel/qseries.hpp"
#include "rigel/rational.hpp"

namespace rigel {

namespace oddchern_detail {

inline void require_odd_positive(int degree) {
  if (degree < 1 || degree % 2 == 0) {
    throw std::domain_error("odd class degree must be odd and positive, got " +
                            std::to_string(degree));
  }
}

inline QSeriesC rat_scalar(const Rat& r) {
  return QSeriesC::monomial(0, to_cplx(r), QSeriesC::kExactTrunc2);
}

// Coefficients of phi^p in the k-th derivative at 0 of the logistic
// generating function h(z) = t e^z / (1 + t e^z), written in powers of
// phi = h(0) = t / (1 + t).  The function satisfies h' = h - h^2, so each
// step sends phi^p to p (phi^p - phi^{p+1}).
inline std::map<int, Rat> logistic_chain(int k) {
  std::map<int, Rat> cur{{1, Rat(1)}};
  for (int step = 0; step < k; ++step) {
    std::map<int, Rat> nxt;
    for (const auto& [p, c] : cur) {
      nxt[p] = nxt[p] + c * Rat(p);
      nxt[p + 1] = nxt[p + 1] - c * Rat(p);
    }
    cur = nxt;
  }
  return cur;
}

}  // namespace oddchern_detail

// Container of odd Chern class forms keyed by odd degree.  Each entry is a
// graded element over the class's generator table, typically a single odd
// generator or a numeric multiple of one.
class OddClassVector {
 public:
  explicit OddClassVector(GenTablePtr table) : tab_(std::move(table)) {
    if (!tab_) throw std::invalid_argument("odd class vector needs a table");
  }

  void set(int degree, GradedC value) {
    oddchern_detail::require_odd_positive(degree);
    if (value.table() != tab_) {
      throw std::invalid_argument("odd class entry uses a different table");
    }
    classes_.insert_or_assign(degree, std::move(value));
  }

  const std::map<int, GradedC>& classes() const { return classes_; }
  GenTablePtr table() const { return tab_; }

 private:
  GenTablePtr tab_;
  std::map<int, GradedC> classes_;
};

// Weighted odd character sum: the degree 2n+1 class enters with weight
// n! / (2n+1)!.  The degree-1 term is included by default; setting
// with_degree_one to false starts the sum at degree 3, which agrees with
// the default whenever the degree-1 class vanishes (as it does for
// special orthogonal gauge maps, where tr[g^{-1}dg] = d log det g = 0).
inline GradedC odd_ch_form(const OddClassVector& c, bool with_degree_one = true) {
  GradedC out(c.table());
  for (const auto& [degree, value] : c.classes()) {
    oddchern_detail::require_odd_positive(degree);
    if (degree == 1 && !with_degree_one) continue;
    const int n = (degree - 1) / 2;
    const Rat weight = Rat::factorial(n) / Rat::factorial(2 * n + 1);
    out = out + value.scaled(oddchern_detail::rat_scalar(weight));
  }
  return out;
}

// Rank-weighted character of a tensor product: each factor contributes its
// character times the product of the other factors' ranks.
inline GradedC tensor_odd_ch(
    const std::vector<std::pair<long long, GradedC>>& factors) {
  if (factors.empty()) {
    throw std::domain_error("tensor character needs at least one factor");
  }
  long long total = 1;
  for (const auto& [rank, ch] : factors) {
    if (rank <= 0) {
      throw std::domain_error("tensor factor ranks must be positive, got " +
                              std::to_string(rank));
    }
    total *= rank;
  }
  GradedC out(factors.front().second.table());
  for (const auto& [rank, ch] : factors) {
    out = out + ch.scaled(oddchern_detail::rat_scalar(Rat(total / rank)));
  }
  return out;
}

// Multiple of the degree 2j-1 odd class carried by the exterior-power
// family: the polynomial P(t) with
//   c_{2j-1}(Lambda_t(V), h, d) = P(t) c_{2j-1}(V, h, d)
// together with its t^m coefficient, the Lambda^m multiple.  With
// k = j - 1 the polynomial is
//   P(t) = sum_p c_p t^p (1 + t)^{dim_v - p}
// over the logistic chain coefficients c_p of order k, which requires
// dim_v >= j for the universal reduction to single traces.
struct LambdaTransgression {
  Poly<Rat> poly;
  Rat coeff;
};

inline LambdaTransgression lambda_transgression_poly(int j, int m, int dim_v,
                                                     int degree) {
  if (j < 1) throw std::invalid_argument("class index must be at least 1");
  oddchern_detail::require_odd_positive(degree);
  if (degree != 2 * j - 1) {
    throw std::invalid_argument("class index " + std::to_string(j) +
                                " pairs with degree " + std::to_string(2 * j - 1) +
                                ", got " + std::to_string(degree));
  }
  if (dim_v < j) {
    throw std::domain_error("exterior family needs rank at least " +
                            std::to_string(j) + ", got " + std::to_string(dim_v));
  }
  if (m < 0 || m > dim_v) {
    throw std::domain_error("exterior power " + std::to_string(m) +
                            " out of range for rank " + std::to_string(dim_v));
  }
  Poly<Rat> poly(dim_v + 1);
  for (const auto& [p, c] : oddchern_detail::logistic_chain(j - 1)) {
    for (int i = 0; i + p <= dim_v; ++i) {
      poly[i + p] = poly[i + p] + c * Rat::binomial(dim_v - p, i);
    }
  }
  return LambdaTransgression{poly, poly[m]};
}

}  // namespace rigel
