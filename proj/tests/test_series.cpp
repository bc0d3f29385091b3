#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <complex>
#include <random>
#include <vector>

#include "rigel/poly.hpp"
#include "rigel/qseries.hpp"
#include "rigel/rational.hpp"

using namespace rigel;

namespace {

// Independent convolution of (1 - q^n) factors on plain int arrays.
std::vector<long long> euler_product_oracle(int nmax) {
  std::vector<long long> c(nmax + 1, 0);
  c[0] = 1;
  for (int n = 1; n <= nmax; ++n) {
    std::vector<long long> d(nmax + 1, 0);
    for (int e = 0; e <= nmax; ++e) {
      if (c[e] == 0) continue;
      d[e] += c[e];
      if (e + n <= nmax) d[e + n] -= c[e];
    }
    c = d;
  }
  return c;
}

// Brute-force partition count: partitions of n into parts <= m.
long long partitions_oracle(int n, int m) {
  if (n == 0) return 1;
  if (n < 0 || m == 0) return 0;
  return partitions_oracle(n - m, m) + partitions_oracle(n, m - 1);
}

QSeriesC random_series(std::mt19937& rng, int trunc2) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, trunc2 - 1);
  QSeriesC s(trunc2);
  for (int k = 0; k < 5; ++k)
    s.add_to(pick(rng), Cplx(u(rng), u(rng)));
  return s;
}

}  // namespace

TEST_CASE("rational arithmetic is exact and normalized") {
  Rat a(2, 4);
  CHECK(a.num() == 1);
  CHECK(a.den() == 2);
  Rat b(-3, -6);
  CHECK(b == a);
  CHECK(Rat(1, -2).den() == 2);
  CHECK(Rat(1, -2).num() == -1);

  CHECK(Rat(1, 2) + Rat(1, 3) == Rat(5, 6));
  CHECK(Rat(1, 2) - Rat(1, 3) == Rat(1, 6));
  CHECK(Rat(2, 3) * Rat(9, 4) == Rat(3, 2));
  CHECK(Rat(2, 3) / Rat(4, 3) == Rat(1, 2));
  CHECK(-Rat(1, 2) == Rat(-1, 2));
  CHECK(Rat(3, 7).inv() == Rat(7, 3));
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK(Rat(7, 2).str() == "7/2");
  CHECK(Rat(-4, 2).str() == "-2");
  CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rat(0).inv(), std::domain_error);
}

TEST_CASE("rational binomial and factorial match closed values") {
  CHECK(Rat::binomial(0, 0) == Rat(1));
  CHECK(Rat::binomial(5, 2) == Rat(10));
  CHECK(Rat::binomial(10, 5) == Rat(252));
  CHECK(Rat::binomial(40, 20) == Rat(137846528820LL));
  CHECK(Rat::binomial(5, 7) == Rat(0));
  CHECK(Rat::factorial(0) == Rat(1));
  CHECK(Rat::factorial(7) == Rat(5040));
  CHECK(Rat::factorial(20) == Rat(2432902008176640000LL));
  CHECK_THROWS_AS(Rat::factorial(30), std::overflow_error);
}

TEST_CASE("polynomial inverse and capped product") {
  Poly<Rat> one_minus_t = Poly<Rat>::constant(6, Rat(1)) -
                          Poly<Rat>::variable(6);
  Poly<Rat> inv = one_minus_t.inverse();
  for (int i = 0; i < 6; ++i) CHECK(inv[i] == Rat(1));

  Poly<Rat> prod = one_minus_t * inv;
  CHECK(prod[0] == Rat(1));
  for (int i = 1; i < 6; ++i) CHECK(prod[i] == Rat(0));

  Poly<Rat> t3(3);
  t3[2] = Rat(1);
  Poly<Rat> sq = t3 * t3;  // t^4 exceeds the cap
  for (int i = 0; i < 3; ++i) CHECK(sq[i] == Rat(0));
}

TEST_CASE("euler product coefficients match an independent convolution") {
  const int nmax = 6;
  QSeriesR c = QSeriesR::one(2 * nmax + 1);
  for (int n = 1; n <= nmax; ++n) {
    QSeriesR f = QSeriesR::one(2 * nmax + 1);
    f.add_to(2 * n, Rat(-1));
    c *= f;
  }
  auto oracle = euler_product_oracle(nmax);
  for (int e = 0; e <= nmax; ++e) CHECK(c.at(2 * e) == Rat(oracle[e]));

  const std::array<long long, 7> frozen = {1, -1, -1, 0, 0, 1, 0};
  for (int e = 0; e <= nmax; ++e) CHECK(c.at(2 * e) == Rat(frozen[e]));
}

TEST_CASE("inverse of the euler product counts partitions") {
  const int nmax = 6;
  QSeriesR c = QSeriesR::one(2 * nmax + 1);
  for (int n = 1; n <= nmax; ++n) {
    QSeriesR f = QSeriesR::one(2 * nmax + 1);
    f.add_to(2 * n, Rat(-1));
    c *= f;
  }
  QSeriesR p = c.inverse();
  for (int e = 0; e <= nmax; ++e)
    CHECK(p.at(2 * e) == Rat(partitions_oracle(e, e)));

  const std::array<long long, 7> frozen = {1, 1, 2, 3, 5, 7, 11};
  for (int e = 0; e <= nmax; ++e) CHECK(p.at(2 * e) == Rat(frozen[e]));

  QSeriesR round_trip = c * p;
  CHECK(round_trip.at(0) == Rat(1));
  for (int e = 1; e <= 2 * nmax; ++e) CHECK(round_trip.at(e) == Rat(0));
}

TEST_CASE("geometric series identity through the cutoff") {
  QSeriesR geo(13);
  for (int e = 0; e <= 6; ++e) geo.set(2 * e, Rat(1));
  QSeriesR one_minus_q = QSeriesR::one(13);
  one_minus_q.add_to(2, Rat(-1));
  QSeriesR prod = one_minus_q * geo;
  CHECK(prod.at(0) == Rat(1));
  for (int e = 1; e < 13; ++e) CHECK(prod.at(e) == Rat(0));
  CHECK(max_coeff_dist(QSeriesC::one(13),
                       one_minus_q.transformed([](const Rat& r) {
                         return to_cplx(r);
                       }) * geo.transformed([](const Rat& r) {
                         return to_cplx(r);
                       })) == 0.0);
}

TEST_CASE("half-integer exponents multiply on the doubled grid") {
  QSeriesR h = QSeriesR::monomial(1, Rat(1), 13);  // q^{1/2}
  QSeriesR h2 = h * h;
  CHECK(h2.at(2) == Rat(1));
  CHECK(h2.low2() == 2);

  QSeriesR mixed(13);
  mixed.set(1, Rat(2));
  mixed.set(3, Rat(-1));
  QSeriesR sq = mixed * mixed;
  CHECK(sq.at(2) == Rat(4));    // q from (q^{1/2})^2
  CHECK(sq.at(4) == Rat(-4));   // cross terms at q^2
  CHECK(sq.at(6) == Rat(1));    // q^3

  QSeriesR neg(13);
  neg.set(-1, Rat(1));
  CHECK_THROWS_AS(neg * neg, std::domain_error);
}

TEST_CASE("shift truncate and power behave as exponent bookkeeping") {
  QSeriesR s(9);
  s.set(0, Rat(1));
  s.set(2, Rat(3));
  QSeriesR sh = s.shifted(4);
  CHECK(sh.trunc2() == 13);
  CHECK(sh.at(4) == Rat(1));
  CHECK(sh.at(6) == Rat(3));

  QSeriesR tr = sh.truncated(5);
  CHECK(tr.at(4) == Rat(1));
  CHECK(tr.at(6) == Rat(0));

  QSeriesR base = QSeriesR::one(13);
  base.add_to(2, Rat(1));
  QSeriesR p5 = base.pow(5);
  for (int k = 0; k <= 5; ++k) CHECK(p5.at(2 * k) == Rat::binomial(5, k));
  QSeriesR p5_manual = base * base * base * base * base;
  for (int e = 0; e < 13; ++e) CHECK(p5.at(e) == p5_manual.at(e));
}

TEST_CASE("numeric evaluation matches closed forms") {
  const Cplx qh(0.1, 0.05);
  const int trunc2 = 30;
  QSeriesC geo(trunc2);
  for (int e = 0; 2 * e < trunc2; ++e) geo.set(2 * e, Cplx(1.0, 0.0));
  Cplx q = qh * qh;
  CHECK(std::abs(geo.eval_qh(qh) - 1.0 / (1.0 - q)) < 1e-12);

  QSeriesC half = QSeriesC::monomial(1, Cplx(1.0, 0.0), trunc2);
  CHECK(std::abs(half.eval_qh(qh) - qh) < 1e-15);
}

TEST_CASE("ring axioms hold on random series") {
  std::mt19937 rng(20260814u);
  for (int iter = 0; iter < 20; ++iter) {
    QSeriesC a = random_series(rng, 13);
    QSeriesC b = random_series(rng, 13);
    QSeriesC c = random_series(rng, 13);
    CHECK(max_coeff_dist(a + b, b + a) == 0.0);
    CHECK(max_coeff_dist((a + b) + c, a + (b + c)) < 1e-14);
    CHECK(max_coeff_dist(a * b, b * a) < 1e-14);
    CHECK(max_coeff_dist((a * b) * c, a * (b * c)) < 1e-13);
    CHECK(max_coeff_dist(a * (b + c), a * b + a * c) < 1e-13);
    CHECK(max_coeff_dist(a - a, QSeriesC::zero(13)) == 0.0);
  }
}

TEST_CASE("exact ring constants do not clip truncated operands") {
  QSeriesC a(26);
  a.set(20, Cplx(1.0, 0.0));
  QSeriesC one = RingTraits<QSeriesC>::one();
  QSeriesC prod = one * a;
  CHECK(prod.trunc2() == 26);
  CHECK(std::abs(prod.at(20) - Cplx(1.0, 0.0)) == 0.0);

  QSeriesC two_terms = RingTraits<QSeriesC>::one();
  two_terms.add_to(2, Cplx(1.0, 0.0));
  CHECK_THROWS_AS(two_terms.inverse(), std::domain_error);
  QSeriesC lone = RingTraits<QSeriesC>::one().scaled(Cplx(2.0, 0.0));
  CHECK(std::abs(lone.inverse().at(0) - Cplx(0.5, 0.0)) == 0.0);
}
