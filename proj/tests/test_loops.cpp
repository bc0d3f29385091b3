#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <vector>

#include "rigel/loops.hpp"
#include "rigel/oddchern.hpp"
#include "rigel/rational.hpp"

using rigel::CMatrix;
using rigel::Cplx;
using rigel::LoopDomain;
using rigel::LoopMap;
using rigel::Rat;

namespace {

// Haar-ish unitary from a fixed seed, for conjugation robustness checks.
CMatrix random_unitary(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix q(n);
  for (int c = 0; c < n; ++c) {
    std::vector<Cplx> v(n);
    for (int i = 0; i < n; ++i) v[i] = Cplx(gauss(rng), gauss(rng));
    for (int prev = 0; prev < c; ++prev) {
      Cplx dot(0.0, 0.0);
      for (int i = 0; i < n; ++i) dot += std::conj(q.at(i, prev)) * v[i];
      for (int i = 0; i < n; ++i) v[i] -= dot * q.at(i, prev);
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += std::norm(v[i]);
    norm = std::sqrt(norm);
    for (int i = 0; i < n; ++i) q.at(i, c) = v[i] / norm;
  }
  return q;
}

LoopMap conjugated(const LoopMap& loop, const CMatrix& q) {
  LoopMap out = loop;
  const CMatrix qh = rigel::mat_adjoint(q);
  for (int i = 0; i < loop.node_count(); ++i)
    out.set_matrix(i, rigel::mat_mul(q, rigel::mat_mul(loop.matrix(i), qh)));
  return out;
}

double rat_num(const Rat& r) { return rigel::to_cplx(r).real(); }

}  // namespace

TEST_CASE("matrix helpers behave on small fixtures") {
  CMatrix a(2);
  a.at(0, 0) = Cplx(1.0, 0.0);
  a.at(0, 1) = Cplx(2.0, 0.0);
  a.at(1, 0) = Cplx(3.0, 0.0);
  a.at(1, 1) = Cplx(4.0, 0.0);
  REQUIRE(rigel::mat_det(a).real() == Catch::Approx(-2.0));
  REQUIRE(rigel::mat_trace(a).real() == Catch::Approx(5.0));

  CMatrix b(3);
  for (int i = 0; i < 3; ++i) b.at(i, i) = Cplx(0.0, i + 1.0);
  const CMatrix k = rigel::mat_kron(a, b);
  REQUIRE(k.n == 6);
  REQUIRE(std::abs(rigel::mat_trace(k) - rigel::mat_trace(a) * rigel::mat_trace(b)) <
          1e-14);

  const CMatrix q = random_unitary(4, 11u);
  REQUIRE(rigel::unitary_defect(q) < 1e-13);
  REQUIRE(std::abs(std::abs(rigel::mat_det(q)) - 1.0) < 1e-13);
}

TEST_CASE("diagonal loop windings are near integers") {
  struct Case {
    std::vector<int> charges;
    int rank;
    long long want;
  };
  const std::vector<Case> cases = {
      {{1}, 3, 1}, {{2}, 3, 2}, {{3}, 2, 3}, {{1, 2}, 2, 3}, {{}, 4, 0}};
  for (const auto& c : cases) {
    const auto res = rigel::winding_c1(rigel::circle_diag_loop(c.charges, c.rank, 256));
    INFO("rank " << c.rank);
    REQUIRE(res.nearest == c.want);
    REQUIRE(res.residual < 1e-6);
  }
}

TEST_CASE("winding survives conjugation by a fixed unitary") {
  const LoopMap diag = rigel::circle_diag_loop({2}, 3, 256);
  const auto res = rigel::winding_c1(conjugated(diag, random_unitary(3, 7u)));
  REQUIRE(res.nearest == 2);
  REQUIRE(res.residual < 1e-6);
}

TEST_CASE("product loop winding follows the rank-weighted sum") {
  const LoopMap g1 = rigel::circle_diag_loop({1}, 2, 256);
  const LoopMap g2 = rigel::circle_diag_loop({1, 1}, 3, 256);
  const double w1 = rigel::winding_c1(g1).value;
  const double w2 = rigel::winding_c1(g2).value;
  REQUIRE(std::llround(w1) == 1);
  REQUIRE(std::llround(w2) == 2);

  const auto prod = rigel::winding_c1(rigel::tensor_loop(g1, g2));
  REQUIRE(prod.nearest == 7);
  REQUIRE(prod.residual < 1e-6);
  REQUIRE(prod.value == Catch::Approx(3.0 * w1 + 2.0 * w2).margin(1e-9));
}

TEST_CASE("winding quadrature validation") {
  REQUIRE_THROWS_AS(rigel::winding_c1(rigel::circle_diag_loop({1}, 2, 12)),
                    std::domain_error);
  LoopMap bad = rigel::circle_diag_loop({1}, 2, 64);
  bad.data[5] += Cplx(1e-6, 0.0);
  REQUIRE_THROWS_AS(rigel::winding_c1(bad), std::domain_error);
  REQUIRE_THROWS_AS(rigel::winding_c1(rigel::sphere3_constant_loop(2, 24, 24)),
                    std::domain_error);
  LoopMap short_buf = rigel::circle_diag_loop({1}, 2, 64);
  short_buf.data.pop_back();
  REQUIRE_THROWS_AS(rigel::winding_c1(short_buf), std::domain_error);
}

TEST_CASE("unit quaternion chart scores degree one and refines stably") {
  const auto d24 = rigel::degree_c3(rigel::su2_chart_loop(24, 24));
  REQUIRE(d24.nearest == 1);
  REQUIRE(d24.residual < 2e-3);
  REQUIRE(d24.raw == Catch::Approx(6.0).margin(2e-2));

  const auto d48 = rigel::degree_c3(rigel::su2_chart_loop(48, 48));
  REQUIRE(std::abs(d48.value - d24.value) < 1e-3);
  REQUIRE(d48.residual < d24.residual);
}

TEST_CASE("degree quadrature is stable under block padding and threads") {
  const auto bare = rigel::degree_c3(rigel::su2_chart_loop(24, 24));
  const auto padded = rigel::degree_c3(rigel::su2_chart_loop(24, 24, 2));
  REQUIRE(padded.value == Catch::Approx(bare.value).margin(1e-12));
  const auto threaded = rigel::degree_c3(rigel::su2_chart_loop(24, 24, 2), 3);
  REQUIRE(threaded.value == padded.value);
}

TEST_CASE("constant sphere map has degree zero") {
  const auto res = rigel::degree_c3(rigel::sphere3_constant_loop(3, 24, 24));
  REQUIRE(std::abs(res.value) < 1e-12);
}

TEST_CASE("degree quadrature validation") {
  REQUIRE_THROWS_AS(rigel::degree_c3(rigel::su2_chart_loop(16, 24)),
                    std::domain_error);
  REQUIRE_THROWS_AS(rigel::degree_c3(rigel::su2_chart_loop(24, 16)),
                    std::domain_error);
  REQUIRE_THROWS_AS(rigel::degree_c3(rigel::circle_diag_loop({1}, 2, 64)),
                    std::domain_error);
  LoopMap bad = rigel::su2_chart_loop(24, 24);
  bad.data[17] += Cplx(5e-9, 0.0);
  REQUIRE_THROWS_AS(rigel::degree_c3(bad), std::domain_error);
}

TEST_CASE("exterior powers of a loop wind by the class-one multiples") {
  const std::vector<int> charges = {1, 2, 0, -1};
  const LoopMap g = rigel::circle_diag_loop(charges, 4, 256);
  const double total = rigel::winding_c1(g).value;
  REQUIRE(std::llround(total) == 2);
  for (int m = 0; m <= 4; ++m) {
    const auto row = rigel::lambda_transgression_poly(1, m, 4, 1);
    const auto res = rigel::winding_c1(rigel::compound_loop(g, m));
    INFO("power " << m);
    REQUIRE(res.residual < 1e-6);
    REQUIRE(res.value ==
            Catch::Approx(rat_num(row.coeff) * total).margin(1e-6));
  }
}

TEST_CASE("exterior square of a degree-one map doubles the class-three pairing") {
  const auto mult = rigel::lambda_transgression_poly(2, 2, 4, 3);
  REQUIRE(mult.coeff == Rat(2));
  const LoopMap g = rigel::su2_chart_loop(24, 24, 2);
  const auto base = rigel::degree_c3(g);
  const auto squared = rigel::degree_c3(rigel::compound_loop(g, 2));
  REQUIRE(squared.value / base.value ==
          Catch::Approx(rat_num(mult.coeff)).margin(5e-3));
  REQUIRE(squared.nearest == 2);
}

TEST_CASE("loop csv round trips both domains") {
  const LoopMap circle = rigel::circle_diag_loop({1, -2}, 3, 32);
  std::stringstream buf;
  rigel::write_loop_csv(circle, buf);
  const LoopMap back = rigel::read_loop_csv(buf);
  REQUIRE(back.domain == LoopDomain::circle);
  REQUIRE(back.rank == 3);
  REQUIRE(back.n_phi == 32);
  REQUIRE(back.data == circle.data);

  const LoopMap sphere = rigel::su2_chart_loop(24, 24, 1);
  std::stringstream buf2;
  rigel::write_loop_csv(sphere, buf2);
  const LoopMap back2 = rigel::read_loop_csv(buf2);
  REQUIRE(back2.domain == LoopDomain::sphere3);
  REQUIRE(back2.n_eta == 24);
  REQUIRE(back2.n_xi == 24);
  REQUIRE(back2.data == sphere.data);
}

TEST_CASE("loop csv rejects unclosed and malformed grids") {
  const LoopMap circle = rigel::circle_diag_loop({1}, 2, 32);
  std::stringstream buf;
  rigel::write_loop_csv(circle, buf);
  std::string text = buf.str();

  {
    // Perturb the closing row so it no longer matches node zero.
    const auto cut = text.rfind("\n32,");
    std::string broken = text.substr(0, cut) + "\n32,0.5";
    std::string tail = text.substr(cut + 4);
    broken += tail.substr(tail.find(','));
    std::stringstream in(broken);
    REQUIRE_THROWS_AS(rigel::read_loop_csv(in), std::domain_error);
  }
  {
    std::stringstream in(text.substr(0, text.size() / 2));
    REQUIRE_THROWS_AS(rigel::read_loop_csv(in), std::runtime_error);
  }
  {
    std::stringstream in("circle,2,32\n0,nonsense\n");
    REQUIRE_THROWS_AS(rigel::read_loop_csv(in), std::runtime_error);
  }
  {
    std::stringstream in("cylinder,2,32\n");
    REQUIRE_THROWS_AS(rigel::read_loop_csv(in), std::runtime_error);
  }
}
