#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rigel/graded.hpp"
#include "rigel/modular.hpp"
#include "rigel/oddchern.hpp"
#include "rigel/qseries.hpp"
#include "rigel/rational.hpp"
#include "rigel/ring.hpp"
#include "rigel/theta.hpp"
#include "rigel/transgression.hpp"
#include "rigel/witten.hpp"

namespace rigel {

// Selects the tangent family and the gauge twist family of a genus.  The
// tangent kind 0 is the flat family, whose characteristic factor reduces
// to the untwisted A-hat jet; kinds 1, 2, 3 pair the tangent with the
// matching twist kind.
struct GenusKind {
  int tangent_kind = 2;
  int twist_kind = 2;

  static GenusKind landweber() { return {1, 1}; }
  static GenusKind witten() { return {2, 2}; }
  static GenusKind witten_prime() { return {3, 3}; }
  static GenusKind flat(int j) { return {0, j}; }

  std::string name() const {
    if (tangent_kind == 1) return "phi_L";
    if (tangent_kind == 2) return "phi_W";
    if (tangent_kind == 3) return "phi_W_prime";
    return "psi_W_" + std::to_string(twist_kind);
  }
};

inline void validate_genus_kind(const GenusKind& kind) {
  if (kind.twist_kind < 1 || kind.twist_kind > 3) {
    throw std::invalid_argument("twist kind must be 1, 2 or 3");
  }
  if (kind.tangent_kind != 0 && kind.tangent_kind != kind.twist_kind) {
    throw std::invalid_argument(
        "tangent kind must be 0 or match the twist kind");
  }
}

inline GenusKind genus_kind_from_name(const std::string& name) {
  if (name == "phi_L") return GenusKind::landweber();
  if (name == "phi_W") return GenusKind::witten();
  if (name == "phi_W_prime") return GenusKind::witten_prime();
  if (name == "psi_W_1") return GenusKind::flat(1);
  if (name == "psi_W_2") return GenusKind::flat(2);
  if (name == "psi_W_3") return GenusKind::flat(3);
  throw std::invalid_argument("unknown genus name: " + name);
}

// The modular subgroup fixing a twist family: translation fixes kind 1,
// and inversion fixes kind 3, so the stabilizers are Gamma_0(2),
// Gamma^0(2) and Gamma_theta in kind order.
inline ModularGroup twist_group(int twist_kind) {
  if (twist_kind == 1) return ModularGroup::gamma0_2;
  if (twist_kind == 2) return ModularGroup::gamma_upper0_2;
  if (twist_kind == 3) return ModularGroup::gamma_theta;
  throw std::invalid_argument("twist kind must be 1, 2 or 3");
}

// A manifold reduced to the data the genera depend on: formal Chern roots
// of the tangent bundle, the odd classes of the gauge pair, and the
// characteristic-number table giving the pairing with the fundamental
// class.  The two flags record hypotheses used by modularity reports.
struct ModelManifold {
  std::string name;
  int dim = 3;
  GenTablePtr table;
  BundleRootData tangent;
  OddClassVector odd_classes;
  std::map<Mono, Cplx> pairing;
  bool c3_zero = false;
  bool p1_zero = false;
};

inline void validate_model(const ModelManifold& m) {
  if (!m.table) throw std::invalid_argument("model needs a generator table");
  if (m.dim < 1 || m.dim % 2 == 0) {
    throw std::invalid_argument("model dimension must be odd and positive");
  }
  if (m.table->degree_cap() < m.dim) {
    throw std::invalid_argument("generator table caps below the dimension");
  }
  validate_root_data(m.tangent);
  if (m.tangent.table.get() != m.table.get()) {
    throw std::invalid_argument("tangent roots use a different table");
  }
  if (!m.tangent.paired) {
    throw std::invalid_argument("tangent roots must be paired");
  }
  if (m.tangent.rank != m.dim) {
    throw std::invalid_argument("tangent rank must equal the dimension");
  }
  if (m.odd_classes.table().get() != m.table.get()) {
    throw std::invalid_argument("odd classes use a different table");
  }
  for (const auto& [d, cls] : m.odd_classes.classes()) {
    if (d > m.dim) {
      throw std::invalid_argument("odd class degree exceeds the dimension");
    }
    if (d == 3 && m.c3_zero && !cls.empty()) {
      throw std::invalid_argument(
          "degree three class recorded nonzero but flagged zero");
    }
  }
  Graded<QSeriesC> probe(m.table);
  for (const auto& [mono, value] : m.pairing) {
    (void)value;
    for (size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] < 0 || mono[i] >= m.table->size()) {
        throw std::invalid_argument("pairing monomial indexes no generator");
      }
      if (i + 1 < mono.size() && mono[i] > mono[i + 1]) {
        throw std::invalid_argument("pairing monomial must be sorted");
      }
    }
    if (probe.mono_degree(mono) != m.dim) {
      throw std::invalid_argument("pairing entry of degree other than dim");
    }
  }
}

// Pairing of the top-degree component of a form against the fundamental
// class; monomials absent from the table integrate to zero.
inline QSeriesC model_integrate(const ModelManifold& m, const GradedC& form,
                                int trunc2) {
  QSeriesC out = QSeriesC::zero(trunc2);
  const GradedC top = form.degree_part(m.dim);
  for (const auto& [mono, coeff] : top.terms()) {
    auto it = m.pairing.find(mono);
    if (it == m.pairing.end()) continue;
    out = out + coeff.scaled(it->second);
  }
  return out;
}

namespace genera_detail {

inline GradedC substitute_jet(const Poly<QSeriesC>& jet, const GradedC& root,
                              GenTablePtr tab, int trunc2) {
  GradedC factor = GradedC::scalar(tab, jet[0]);
  GradedC pw = GradedC::scalar(tab, QSeriesC::one(trunc2));
  for (int k = 1; k < jet.cap(); ++k) {
    pw *= root;
    if (pw.empty()) break;
    factor += pw.scaled(jet[k]);
  }
  return factor;
}

// Common assembly of the characteristic form: the tangent pair jet
// substituted at every stored root, times the transgressed character of
// the twist family, times the dimension prefactor of the Landweber-Stong
// normalization.
inline GradedC assemble(const GenusKind& kind, const ModelManifold& m,
                        int rank_e, int trunc2, const Poly<QSeriesC>& pair_jet,
                        const std::function<QSeriesC(int)>& lambda_of) {
  validate_genus_kind(kind);
  validate_model(m);
  GradedC even = GradedC::scalar(m.table, QSeriesC::one(trunc2));
  for (const auto& root : m.tangent.roots) {
    even *= substitute_jet(pair_jet, root, m.table, trunc2);
  }
  const Rat kappa = transgression_kappa(kind.twist_kind, rank_e);
  GradedC twisted =
      GradedC::scalar(m.table, QSeriesC::monomial(0, to_cplx(kappa), trunc2));
  for (const auto& [d, cls] : m.odd_classes.classes()) {
    twisted += cls.scaled(lambda_of(d));
  }
  GradedC out = even * twisted;
  if (kind.tangent_kind == 1) {
    const Cplx pref = cplx_ipow(Cplx(2.0, 0.0), (m.dim - 1) / 2);
    out = out.scaled(QSeriesC::monomial(0, pref, trunc2));
  }
  return out;
}

inline int jet_order(int dim) { return (dim + 1) / 2; }

}  // namespace genera_detail

// The full characteristic form of the genus as a q-expansion: per tangent
// pair the A-hat times symmetric-family jet, times the matched exterior
// family ratio for kinds 1, 2, 3 (the flat family multiplies to one and
// leaves the bare A-hat jet), times the transgressed character of the
// twist bundle of rank rank_e.
inline GradedC ls_witten_form(const GenusKind& kind, const ModelManifold& m,
                              int rank_e, const ModularPoint& pt) {
  validate_genus_kind(kind);
  const int order = genera_detail::jet_order(m.dim);
  Poly<QSeriesC> jet = kind.tangent_kind == 0
                           ? theta_detail::lift(pair_sin_jet(order), pt.trunc2)
                           : theta_pair_qjet(pt, order) *
                                 theta_ratio_qjet(kind.tangent_kind,
                                                  Cplx(0.0, 0.0), pt, order);
  auto lambda_of = [&](int d) {
    return transgression_coeff(kind.twist_kind, d, rank_e, pt.trunc2)
        .transformed([](const Rat& r) { return to_cplx(r); });
  };
  return genera_detail::assemble(kind, m, rank_e, pt.trunc2, jet, lambda_of);
}

struct GenusValue {
  GenusKind kind;
  QSeriesC series;
};

// Genus of the model: the form paired against the fundamental class.
inline GenusValue genus_pair(const GenusKind& kind, const ModelManifold& m,
                             int rank_e, const ModularPoint& pt) {
  if (m.dim % 4 != 3) {
    throw std::domain_error("genus pairing needs dimension 3 mod 4");
  }
  const GradedC form = ls_witten_form(kind, m, rank_e, pt);
  return GenusValue{kind, model_integrate(m, form, pt.trunc2)};
}

// Direct numeric value of the genus at one point of the upper half plane,
// through the numeric theta jets instead of the q expansion.  Used for
// transformation-law checks whose transformed points have small imaginary
// part.
inline Cplx genus_eval(const GenusKind& kind, const ModelManifold& m,
                       int rank_e, const Cplx& tau) {
  if (m.dim % 4 != 3) {
    throw std::domain_error("genus pairing needs dimension 3 mod 4");
  }
  validate_genus_kind(kind);
  const int order = genera_detail::jet_order(m.dim);
  Poly<Cplx> jet_n = kind.tangent_kind == 0
                         ? pair_sin_jet(order)
                         : theta_pair_jet(tau, order) *
                               theta_ratio_jet(kind.tangent_kind,
                                               Cplx(0.0, 0.0), tau, order);
  const int trunc2 = 1;
  const Poly<QSeriesC> jet = theta_detail::lift(jet_n, trunc2);
  auto lambda_of = [&](int d) {
    return QSeriesC::monomial(
        0, transgression_coeff_eval(kind.twist_kind, d, rank_e, tau), trunc2);
  };
  const GradedC form =
      genera_detail::assemble(kind, m, rank_e, trunc2, jet, lambda_of);
  return model_integrate(m, form, trunc2).at(0);
}

// Transformation-law report for a genus: the weight is (dim + 1)/2 and
// the group is the stabilizer of the twist family.  Hypotheses are
// reported, never asserted: matched families need the degree three class
// to vanish, the flat families additionally need the first Pontryagin
// class to vanish so all contributions share one weight.
struct GenusModularityReport {
  std::string genus;
  int weight = 0;
  ModularGroup group = ModularGroup::sl2z;
  bool hypotheses_met = true;
  std::vector<std::string> violated;
  ModularFormReport law;
};

inline GenusModularityReport genus_modularity(const GenusKind& kind,
                                              const ModelManifold& m,
                                              int rank_e,
                                              const std::vector<Cplx>& taus) {
  validate_genus_kind(kind);
  validate_model(m);
  GenusModularityReport report;
  report.genus = kind.name();
  report.weight = (m.dim + 1) / 2;
  report.group = twist_group(kind.twist_kind);
  if (!m.c3_zero) report.violated.push_back("c3 != 0");
  if (kind.tangent_kind == 0 && !m.p1_zero) {
    report.violated.push_back("p1 != 0");
  }
  report.hypotheses_met = report.violated.empty();
  ModularFunction f = [&kind, &m, rank_e](const Cplx& tau) {
    return genus_eval(kind, m, rank_e, tau);
  };
  report.law = modular_form_check(f, report.weight, report.group, taus);
  return report;
}

}  // namespace rigel
