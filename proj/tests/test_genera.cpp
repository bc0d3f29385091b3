#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "rigel/genera.hpp"

using rigel::BundleRootData;
using rigel::Cplx;
using rigel::GenTable;
using rigel::Generator;
using rigel::GenusKind;
using rigel::GradedC;
using rigel::ModelManifold;
using rigel::ModularGroup;
using rigel::ModularPoint;
using rigel::Mono;
using rigel::OddClassVector;
using rigel::QSeriesC;

namespace {

rigel::GenTablePtr seven_table() {
  return std::make_shared<GenTable>(
      std::vector<Generator>{{"y", 2, false}, {"c3", 3, true}, {"c7", 7, true}},
      7);
}

// Seven-dimensional model with only zero tangent roots and one degree
// seven class pairing to one.
ModelManifold pure_seven() {
  auto tab = seven_table();
  OddClassVector odd(tab);
  odd.set(7, GradedC::generator(tab, "c7"));
  return ModelManifold{"m7",
                       7,
                       tab,
                       BundleRootData{"tm", 7, true, tab, {}},
                       odd,
                       {{Mono{2}, Cplx(1.0, 0.0)}},
                       true,
                       true};
}

// Seven-dimensional model with one nonzero tangent pair and both odd
// classes present, pairing y^2 c3 and c7.
ModelManifold rich_seven() {
  auto tab = seven_table();
  OddClassVector odd(tab);
  odd.set(3, GradedC::generator(tab, "c3"));
  odd.set(7, GradedC::generator(tab, "c7"));
  return ModelManifold{"m7rich",
                       7,
                       tab,
                       BundleRootData{"tm", 7, true, tab,
                                      {GradedC::generator(tab, "y")}},
                       odd,
                       {{Mono{0, 0, 1}, Cplx(0.7, -0.2)},
                        {Mono{2}, Cplx(1.1, 0.3)}},
                       false,
                       false};
}

ModelManifold three_model(const Cplx& weight) {
  auto tab = std::make_shared<GenTable>(
      std::vector<Generator>{{"c3", 3, true}}, 3);
  OddClassVector odd(tab);
  odd.set(3, GradedC::generator(tab, "c3"));
  return ModelManifold{"m3",
                       3,
                       tab,
                       BundleRootData{"tm", 3, true, tab, {}},
                       odd,
                       {{Mono{0}, weight}},
                       false,
                       true};
}

double dist(const QSeriesC& a, const QSeriesC& b) {
  return rigel::max_coeff_dist(a, b);
}

}  // namespace

TEST_CASE("three dimensional pairing reduces to the degree three series") {
  const ModularPoint pt{Cplx(0.2, 1.1), 13};
  const ModelManifold m = three_model(Cplx(2.5, 0.0));

  const auto w = rigel::genus_pair(GenusKind::witten(), m, 4, pt);
  CHECK(std::abs(w.series.at(0)) < 1e-15);
  CHECK(std::abs(w.series.at(1) - Cplx(-2.5 / 6.0, 0.0)) < 1e-12);
  CHECK(std::abs(w.series.at(2) - Cplx(-2.5 / 3.0, 0.0)) < 1e-12);
  CHECK(std::abs(w.series.at(3) - Cplx(-2.5 * 2.0 / 3.0, 0.0)) < 1e-12);

  const auto l = rigel::genus_pair(GenusKind::landweber(), m, 4, pt);
  CHECK(std::abs(l.series.at(0) - Cplx(2.5 / 6.0, 0.0)) < 1e-12);
  CHECK(std::abs(l.series.at(2) - Cplx(2.5 * 4.0 / 3.0, 0.0)) < 1e-12);
  CHECK(std::abs(l.series.at(1)) < 1e-15);

  const auto wp = rigel::genus_pair(GenusKind::witten_prime(), m, 4, pt);
  CHECK(std::abs(wp.series.at(1) - Cplx(2.5 / 6.0, 0.0)) < 1e-12);
  CHECK(std::abs(wp.series.at(2) - Cplx(-2.5 / 3.0, 0.0)) < 1e-12);
}

TEST_CASE("degree three form component is untouched by tangent roots") {
  const ModularPoint pt{Cplx(0.2, 1.1), 13};
  const ModelManifold m = rich_seven();
  const GradedC form = rigel::ls_witten_form(GenusKind::witten(), m, 4, pt);
  const auto part = form.degree_part(3);
  REQUIRE(part.terms().size() == 1);
  const QSeriesC c3_coeff = part.terms().begin()->second;
  CHECK(part.terms().begin()->first == Mono{1});
  CHECK(std::abs(c3_coeff.at(1) - Cplx(-1.0 / 6.0, 0.0)) < 1e-12);
  CHECK(std::abs(c3_coeff.at(0)) < 1e-15);
}

TEST_CASE("seven dimensional zero-root model hits the frozen multiples") {
  const ModularPoint pt{Cplx(0.2, 1.1), 13};
  const ModelManifold m = pure_seven();

  const auto l = rigel::genus_pair(GenusKind::landweber(), m, 4, pt);
  CHECK(std::abs(l.series.at(0) - Cplx(-8.0 / 3360.0, 0.0)) < 1e-12);
  const QSeriesC expect_l = rigel::transgression_coeff(1, 7, 4, 13)
                                .transformed([](const rigel::Rat& r) {
                                  return rigel::to_cplx(r);
                                })
                                .scaled(Cplx(8.0, 0.0));
  CHECK(dist(l.series, expect_l) < 1e-12);

  const auto w = rigel::genus_pair(GenusKind::witten(), m, 4, pt);
  CHECK(std::abs(w.series.at(1) - Cplx(-1.0 / 840.0, 0.0)) < 1e-12);
  CHECK(std::abs(w.series.at(2) - Cplx(-1.0 / 105.0, 0.0)) < 1e-12);
  CHECK(std::abs(w.series.at(8) - Cplx(-64.0 / 105.0, 0.0)) < 1e-12);

  const auto wp = rigel::genus_pair(GenusKind::witten_prime(), m, 4, pt);
  CHECK(std::abs(wp.series.at(1) - Cplx(1.0 / 840.0, 0.0)) < 1e-12);
  CHECK(std::abs(wp.series.at(2) - Cplx(-1.0 / 105.0, 0.0)) < 1e-12);

  const auto flat = rigel::genus_pair(GenusKind::flat(2), m, 4, pt);
  CHECK(dist(flat.series, w.series) < 1e-15);
}

TEST_CASE("flat model keeps only the constant rank term") {
  const ModularPoint pt{Cplx(0.2, 1.1), 13};
  auto tab = seven_table();
  const ModelManifold m{"flat",
                        7,
                        tab,
                        BundleRootData{"tm", 7, true, tab, {}},
                        OddClassVector(tab),
                        {},
                        true,
                        true};

  const GradedC l = rigel::ls_witten_form(GenusKind::landweber(), m, 4, pt);
  REQUIRE(l.degree_part(0).terms().size() == 1);
  CHECK(std::abs(l.degree_part(0).terms().begin()->second.at(0) -
                 Cplx(32.0, 0.0)) < 1e-12);
  CHECK(l.degree_part(3).empty());

  const GradedC w = rigel::ls_witten_form(GenusKind::witten(), m, 4, pt);
  CHECK(std::abs(w.degree_part(0).terms().begin()->second.at(0) -
                 Cplx(1.0, 0.0)) < 1e-12);

  const GradedC f1 = rigel::ls_witten_form(GenusKind::flat(1), m, 4, pt);
  CHECK(std::abs(f1.degree_part(0).terms().begin()->second.at(0) -
                 Cplx(4.0, 0.0)) < 1e-12);

  const auto zero = rigel::genus_pair(GenusKind::witten(), m, 4, pt);
  CHECK(zero.series.coeffs().empty());
}

TEST_CASE("genus pairing is linear in classes and pairing values") {
  const ModularPoint pt{Cplx(0.2, 1.1), 13};
  const Cplx alpha(1.3, -0.4);

  auto tab = seven_table();
  OddClassVector odd1(tab);
  odd1.set(7, GradedC::generator(tab, "c7"));
  OddClassVector odd2(tab);
  odd2.set(7, GradedC::generator(tab, "c7").scaled(
                  QSeriesC::monomial(0, alpha, QSeriesC::kExactTrunc2)));
  const BundleRootData tm{"tm", 7, true, tab, {}};
  const std::map<Mono, Cplx> pair1{{Mono{2}, Cplx(1.0, 0.0)}};

  const ModelManifold base{"b", 7, tab, tm, odd1, pair1, true, true};
  const ModelManifold scaled{"s", 7, tab, tm, odd2, pair1, true, true};
  const auto vb = rigel::genus_pair(GenusKind::witten(), base, 4, pt);
  const auto vs = rigel::genus_pair(GenusKind::witten(), scaled, 4, pt);
  CHECK(dist(vs.series, vb.series.scaled(alpha)) < 1e-12);

  const Cplx v1(0.9, 0.1), v2(-0.3, 0.8), a(2.0, 0.0), b(0.0, -1.0);
  const ModelManifold p1{"p1", 7, tab, tm, odd1, {{Mono{2}, v1}}, true, true};
  const ModelManifold p2{"p2", 7, tab, tm, odd1, {{Mono{2}, v2}}, true, true};
  const ModelManifold pc{
      "pc", 7, tab, tm, odd1, {{Mono{2}, a * v1 + b * v2}}, true, true};
  const auto g1 = rigel::genus_pair(GenusKind::witten(), p1, 4, pt);
  const auto g2 = rigel::genus_pair(GenusKind::witten(), p2, 4, pt);
  const auto gc = rigel::genus_pair(GenusKind::witten(), pc, 4, pt);
  CHECK(dist(gc.series, g1.series.scaled(a) + g2.series.scaled(b)) < 1e-12);
}

TEST_CASE("numeric genus value matches the q expansion") {
  const Cplx tau(0.1, 1.25);
  const ModularPoint pt{tau, 26};
  const ModelManifold m = rich_seven();
  for (const GenusKind& kind :
       {GenusKind::landweber(), GenusKind::witten(), GenusKind::witten_prime(),
        GenusKind::flat(1), GenusKind::flat(2), GenusKind::flat(3)}) {
    const auto series = rigel::genus_pair(kind, m, 4, pt);
    const Cplx from_series = series.series.eval_qh(pt.qh());
    const Cplx direct = rigel::genus_eval(kind, m, 4, tau);
    REQUIRE(std::abs(from_series - direct) <
            1e-10 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("modularity report passes on the hypothesis-clean model") {
  const ModelManifold m = pure_seven();
  const auto taus = rigel::modular_tau_grid(4);
  const std::pair<GenusKind, ModularGroup> rows[] = {
      {GenusKind::landweber(), ModularGroup::gamma0_2},
      {GenusKind::witten(), ModularGroup::gamma_upper0_2},
      {GenusKind::witten_prime(), ModularGroup::gamma_theta},
      {GenusKind::flat(2), ModularGroup::gamma_upper0_2},
  };
  for (const auto& [kind, group] : rows) {
    const auto report = rigel::genus_modularity(kind, m, 4, taus);
    CHECK(report.hypotheses_met);
    CHECK(report.weight == 4);
    CHECK(report.group == group);
    REQUIRE(report.law.determinate());
    CHECK(report.law.worst_residual() < 1e-8);
    CHECK(report.law.worst_spread() < 1e-8);
    for (const auto& line : report.law.lines) {
      CHECK(std::abs(line.chi - Cplx(1.0, 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("modularity report flags violated hypotheses") {
  const auto taus = rigel::modular_tau_grid(3);
  const ModelManifold rich = rich_seven();
  const auto matched =
      rigel::genus_modularity(GenusKind::witten(), rich, 4, taus);
  CHECK_FALSE(matched.hypotheses_met);
  REQUIRE(matched.violated.size() == 1);
  CHECK(matched.violated[0] == "c3 != 0");

  const auto flat = rigel::genus_modularity(GenusKind::flat(2), rich, 4, taus);
  CHECK(flat.violated.size() == 2);

  auto tab = seven_table();
  const ModelManifold empty{"e",
                            7,
                            tab,
                            BundleRootData{"tm", 7, true, tab, {}},
                            OddClassVector(tab),
                            {},
                            true,
                            true};
  const auto silent =
      rigel::genus_modularity(GenusKind::witten(), empty, 4, taus);
  CHECK(silent.hypotheses_met);
  CHECK(silent.law.worst_residual() == 0.0);
  for (const auto& line : silent.law.lines) {
    CHECK(line.indeterminate);
  }
}

TEST_CASE("genus input validation") {
  const ModularPoint pt{Cplx(0.2, 1.1), 13};

  auto tab5 = std::make_shared<GenTable>(
      std::vector<Generator>{{"c5", 5, true}}, 5);
  OddClassVector odd5(tab5);
  odd5.set(5, GradedC::generator(tab5, "c5"));
  const ModelManifold m5{"m5",
                         5,
                         tab5,
                         BundleRootData{"tm", 5, true, tab5, {}},
                         odd5,
                         {{Mono{0}, Cplx(1.0, 0.0)}},
                         true,
                         true};
  CHECK_THROWS_AS(rigel::genus_pair(GenusKind::witten(), m5, 4, pt),
                  std::domain_error);
  CHECK_NOTHROW(rigel::ls_witten_form(GenusKind::witten(), m5, 4, pt));

  const ModelManifold m7 = pure_seven();
  CHECK_THROWS_AS(rigel::ls_witten_form(GenusKind{1, 2}, m7, 4, pt),
                  std::invalid_argument);
  CHECK_THROWS_AS(rigel::ls_witten_form(GenusKind{0, 4}, m7, 4, pt),
                  std::invalid_argument);
  CHECK_THROWS_AS(rigel::genus_kind_from_name("phi_X"), std::invalid_argument);
  CHECK(rigel::genus_kind_from_name("psi_W_3").twist_kind == 3);
  CHECK(rigel::genus_kind_from_name("phi_W_prime").tangent_kind == 3);

  ModelManifold bad_rank = pure_seven();
  bad_rank.tangent.rank = 5;
  CHECK_THROWS_AS(rigel::validate_model(bad_rank), std::invalid_argument);

  ModelManifold bad_pairing = pure_seven();
  bad_pairing.pairing = {{Mono{0}, Cplx(1.0, 0.0)}};
  CHECK_THROWS_AS(rigel::validate_model(bad_pairing), std::invalid_argument);

  ModelManifold unsorted = rich_seven();
  unsorted.pairing = {{Mono{1, 0, 0}, Cplx(1.0, 0.0)}};
  CHECK_THROWS_AS(rigel::validate_model(unsorted), std::invalid_argument);

  ModelManifold contradicted = rich_seven();
  contradicted.c3_zero = true;
  CHECK_THROWS_AS(rigel::validate_model(contradicted), std::invalid_argument);

  ModelManifold even_dim = pure_seven();
  even_dim.dim = 6;
  CHECK_THROWS_AS(rigel::validate_model(even_dim), std::invalid_argument);
}
