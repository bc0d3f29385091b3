#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rigel/genera.hpp"
#include "rigel/graded.hpp"
#include "rigel/oddchern.hpp"
#include "rigel/poly.hpp"
#include "rigel/qseries.hpp"
#include "rigel/theta.hpp"
#include "rigel/transgression.hpp"
#include "rigel/witten.hpp"

namespace rigel {

// Fixed-point data of a circle action on an odd-dimensional manifold: each
// component carries its tangent roots, the rotated normal summands, the
// summands of an auxiliary real bundle split by rotation weight, the odd
// classes of the gauge restricted to the component, and the top-degree
// pairing that stands in for integration over the component.

struct NormalSummand {
  int gamma = 0;
  BundleRootData bundle;
};

struct VSummand {
  int nu = 0;
  BundleRootData bundle;
};

struct FixedComponent {
  std::string name;
  int dim = 1;
  GenTablePtr table;
  BundleRootData tangent;
  std::vector<NormalSummand> normal;
  std::vector<VSummand> vbundle;
  OddClassVector odd_classes;
  std::map<Mono, Cplx> pairing;
};

struct EquivariantData {
  std::string name;
  int ambient_dim = 3;
  int rank_e = 2;
  std::vector<FixedComponent> components;
  bool g_star_one = false;
  bool c3_zero = false;
  bool p1_condition = false;
  std::optional<long long> anomaly_n;
};

// Complex rank of the normal bundle of a component.
inline int normal_dim(const FixedComponent& c) {
  int n = 0;
  for (const auto& s : c.normal) n += s.bundle.rank;
  return n;
}

// Real rank of the auxiliary bundle restricted to a component.
inline int v_dim(const FixedComponent& c) {
  int n = 0;
  for (const auto& s : c.vbundle) n += s.nu == 0 ? s.bundle.rank : 2 * s.bundle.rank;
  return n;
}

inline void validate_component(const FixedComponent& c, int ambient_dim) {
  if (!c.table) {
    throw std::invalid_argument("component " + c.name + " needs a generator table");
  }
  if (c.dim < 1 || c.dim % 2 == 0) {
    throw std::invalid_argument("component " + c.name +
                                " dimension must be odd and positive");
  }
  if (c.table->degree_cap() < c.dim) {
    throw std::invalid_argument("generator table caps below the dimension of " +
                                c.name);
  }
  validate_root_data(c.tangent);
  if (c.tangent.table.get() != c.table.get()) {
    throw std::invalid_argument("tangent roots of " + c.name +
                                " use a different table");
  }
  if (!c.tangent.paired || c.tangent.rank != c.dim) {
    throw std::invalid_argument("tangent roots of " + c.name +
                                " must be paired with rank equal to dim");
  }
  for (const auto& s : c.normal) {
    if (s.gamma == 0) {
      throw std::invalid_argument("normal summand with zero weight in " + c.name);
    }
    validate_root_data(s.bundle);
    if (s.bundle.table.get() != c.table.get() || s.bundle.paired) {
      throw std::invalid_argument("normal summands of " + c.name +
                                  " must be complex on the component table");
    }
  }
  for (const auto& s : c.vbundle) {
    validate_root_data(s.bundle);
    if (s.bundle.table.get() != c.table.get()) {
      throw std::invalid_argument("auxiliary summand of " + c.name +
                                  " uses a different table");
    }
    if ((s.nu == 0) != s.bundle.paired) {
      throw std::invalid_argument(
          "auxiliary summands of " + c.name +
          " must be paired at weight zero and complex otherwise");
    }
  }
  if (c.dim + 2 * normal_dim(c) != ambient_dim) {
    throw std::invalid_argument("component " + c.name +
                                " does not fill the ambient dimension");
  }
  if (c.odd_classes.table().get() != c.table.get()) {
    throw std::invalid_argument("odd classes of " + c.name +
                                " use a different table");
  }
  for (const auto& [d, cls] : c.odd_classes.classes()) {
    (void)cls;
    if (d > c.dim) {
      throw std::invalid_argument("odd class degree exceeds the dimension of " +
                                  c.name);
    }
  }
  Graded<QSeriesC> probe(c.table);
  for (const auto& [mono, value] : c.pairing) {
    (void)value;
    for (size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] < 0 || mono[i] >= c.table->size()) {
        throw std::invalid_argument("pairing monomial indexes no generator in " +
                                    c.name);
      }
      if (i + 1 < mono.size() && mono[i] > mono[i + 1]) {
        throw std::invalid_argument("pairing monomial must be sorted in " + c.name);
      }
    }
    if (probe.mono_degree(mono) != c.dim) {
      throw std::invalid_argument("pairing entry of degree other than dim in " +
                                  c.name);
    }
  }
}

struct AnomalyReport {
  bool consistent = false;
  long long n = 0;
  std::vector<std::string> violations;
};

namespace equivariant_detail {

inline double graded_max_abs(const GradedC& g) {
  double m = 0.0;
  for (const auto& [mono, coeff] : g.terms()) {
    (void)mono;
    for (const auto& [e2, z] : coeff.coeffs()) {
      (void)e2;
      m = std::max(m, std::abs(z));
    }
  }
  return m;
}

}  // namespace equivariant_detail

// Checks the three relations tying the auxiliary bundle to the tangent data
// on every component: the root squares balance, the weighted root sums
// balance, and the weighted rank counts agree on a single integer.
inline AnomalyReport anomaly_check(const EquivariantData& data) {
  using equivariant_detail::graded_max_abs;
  AnomalyReport rep;
  bool have_n = false;
  for (const auto& c : data.components) {
    validate_component(c, data.ambient_dim);
    GradedC quad(c.table);
    GradedC lin(c.table);
    long long count = 0;
    for (const auto& s : c.vbundle) {
      for (const auto& r : s.bundle.roots) {
        quad += r * r;
        if (s.nu != 0) {
          lin += r.scaled(QSeriesC::monomial(0, Cplx(double(s.nu), 0.0),
                                             QSeriesC::kDefaultTrunc2));
        }
      }
      count += (long long)s.nu * s.nu * (s.nu == 0 ? 0 : s.bundle.rank);
    }
    for (const auto& r : c.tangent.roots) quad -= r * r;
    for (const auto& s : c.normal) {
      for (const auto& r : s.bundle.roots) {
        quad -= r * r;
        lin -= r.scaled(QSeriesC::monomial(0, Cplx(double(s.gamma), 0.0),
                                           QSeriesC::kDefaultTrunc2));
      }
      count -= (long long)s.gamma * s.gamma * s.bundle.rank;
    }
    if (graded_max_abs(quad) > 1e-12) {
      rep.violations.push_back("component " + c.name + ": root square relation");
    }
    if (graded_max_abs(lin) > 1e-12) {
      rep.violations.push_back("component " + c.name + ": weighted root relation");
    }
    if (!have_n) {
      rep.n = count;
      have_n = true;
    } else if (rep.n != count) {
      rep.violations.push_back("component " + c.name +
                               ": anomaly integer " + std::to_string(count) +
                               " disagrees with " + std::to_string(rep.n));
    }
  }
  if (!have_n) rep.n = data.anomaly_n.value_or(0);
  if (data.anomaly_n && *data.anomaly_n != rep.n) {
    rep.violations.push_back("declared anomaly integer " +
                             std::to_string(*data.anomaly_n) +
                             " differs from computed " + std::to_string(rep.n));
  }
  rep.consistent = rep.violations.empty();
  return rep;
}

inline void validate_equivariant_data(const EquivariantData& d) {
  if (d.ambient_dim < 1 || d.ambient_dim % 2 == 0) {
    throw std::invalid_argument("ambient dimension must be odd and positive");
  }
  if (d.rank_e < 2 || d.rank_e % 2 != 0) {
    throw std::invalid_argument("gauge rank must be even and at least 2");
  }
  int vd = -1;
  for (const auto& c : d.components) {
    validate_component(c, d.ambient_dim);
    if (d.c3_zero) {
      auto it = c.odd_classes.classes().find(3);
      if (it != c.odd_classes.classes().end() && !it->second.empty()) {
        throw std::invalid_argument(
            "degree three class recorded nonzero but flagged zero in " + c.name);
      }
    }
    if (vd < 0) {
      vd = v_dim(c);
    } else if (vd != v_dim(c)) {
      throw std::invalid_argument(
          "auxiliary bundle rank differs between components");
    }
  }
  if (d.anomaly_n) {
    AnomalyReport rep = anomaly_check(d);
    if (!rep.consistent) {
      throw std::invalid_argument("declared anomaly integer fails its relations: " +
                                  rep.violations.front());
    }
  }
}

// Evaluation point for the equivariant series: the circle parameter t and a
// point of the upper half-plane with its q-series cutoff.
struct EvaluationPoint {
  Cplx t;
  ModularPoint tau;
};

// The four families of equivariant index series.
enum class FFamily {
  landweber,
  witten,
  witten_prime,
  de_rham_1,
  de_rham_2,
  de_rham_3,
};

inline const char* f_family_name(FFamily f) {
  switch (f) {
    case FFamily::landweber: return "L";
    case FFamily::witten: return "W";
    case FFamily::witten_prime: return "W_prime";
    case FFamily::de_rham_1: return "dR1";
    case FFamily::de_rham_2: return "dR2";
    case FFamily::de_rham_3: return "dR3";
  }
  throw std::invalid_argument("unknown equivariant family");
}

inline FFamily f_family_from_name(const std::string& name) {
  if (name == "L") return FFamily::landweber;
  if (name == "W") return FFamily::witten;
  if (name == "W_prime") return FFamily::witten_prime;
  if (name == "dR1") return FFamily::de_rham_1;
  if (name == "dR2") return FFamily::de_rham_2;
  if (name == "dR3") return FFamily::de_rham_3;
  throw std::invalid_argument("unknown equivariant family " + name);
}

inline bool f_is_de_rham(FFamily f) {
  return f == FFamily::de_rham_1 || f == FFamily::de_rham_2 ||
         f == FFamily::de_rham_3;
}

// Exterior twist family feeding the transgression table.
inline int f_twist_kind(FFamily f) {
  switch (f) {
    case FFamily::landweber: return 1;
    case FFamily::witten: return 2;
    case FFamily::witten_prime: return 3;
    case FFamily::de_rham_1: return 1;
    case FFamily::de_rham_2: return 2;
    case FFamily::de_rham_3: return 3;
  }
  throw std::invalid_argument("unknown equivariant family");
}

// Theta kind of the auxiliary-bundle factor; 0 selects the flat quotient.
inline int f_v_kind(FFamily f) {
  switch (f) {
    case FFamily::landweber: return 1;
    case FFamily::witten: return 2;
    case FFamily::witten_prime: return 3;
    default: return 0;
  }
}

namespace equivariant_detail {

// Guard modeling a topological generator of the circle: reject t within
// 1e-9 of a rational number with denominator at most 12.
inline void rational_proximity_guard(const Cplx& t) {
  for (int den = 1; den <= 12; ++den) {
    const double num = std::round(t.real() * den);
    const Cplx r(num / den, 0.0);
    if (std::abs(t - r) < 1e-9) {
      throw std::domain_error("t within 1e-9 of the rational " +
                              std::to_string((long long)num) + "/" +
                              std::to_string(den));
    }
  }
}

// Jet of 1/(2 i sin(pi(v0 + eps))) in eps.
inline Poly<Cplx> sine_recip_jet(const Cplx& v0, int order) {
  Poly<Cplx> s = theta_detail::trig_jet(true, v0, order + 1);
  return s.inverse().scaled(Cplx(0.0, -0.5));
}

inline void sine_pole_guard(int gamma, const Cplx& t) {
  const Cplx s = std::sin(kPi * double(gamma) * t);
  if (std::abs(s) < 1e-9) {
    throw std::domain_error("sine pole at gamma=" + std::to_string(gamma) +
                            " t=" + std::to_string(t.real()) +
                            (t.imag() != 0.0 ? "+" + std::to_string(t.imag()) + "i"
                                             : std::string()));
  }
}

inline QSeriesC integrate_component(const FixedComponent& c, const GradedC& form,
                                    int trunc2) {
  QSeriesC out = QSeriesC::zero(trunc2);
  const GradedC top = form.degree_part(c.dim);
  for (const auto& [mono, coeff] : top.terms()) {
    auto it = c.pairing.find(mono);
    if (it == c.pairing.end()) continue;
    out = out + coeff.scaled(it->second);
  }
  return out;
}

// Transgressed character of the exterior twist family on the gauge bundle,
// exact in q on the doubled grid.
inline GradedC twisted_odd_character(int twist_kind, int rank_e,
                                     const OddClassVector& classes, int trunc2) {
  const Rat kappa = transgression_kappa(twist_kind, rank_e);
  GradedC out = GradedC::scalar(classes.table(),
                                QSeriesC::monomial(0, to_cplx(kappa), trunc2));
  for (const auto& [d, cls] : classes.classes()) {
    QSeriesC lam = transgression_coeff(twist_kind, d, rank_e, trunc2)
                       .transformed([](const Rat& r) { return to_cplx(r); });
    out += cls.scaled(lam);
  }
  return out;
}

// Same character with the coefficients evaluated numerically at one tau.
inline GradedC twisted_odd_character_value(int twist_kind, int rank_e,
                                           const OddClassVector& classes,
                                           const Cplx& tau) {
  const Rat kappa = transgression_kappa(twist_kind, rank_e);
  GradedC out = GradedC::scalar(classes.table(),
                                QSeriesC::monomial(0, to_cplx(kappa), 1));
  for (const auto& [d, cls] : classes.classes()) {
    const Cplx lam = transgression_coeff_eval(twist_kind, d, rank_e, tau);
    out += cls.scaled(QSeriesC::monomial(0, lam, 1));
  }
  return out;
}

inline int jet_order(int dim) { return (dim + 1) / 2; }

inline GradedC scalar_form(GenTablePtr tab, const Cplx& z, int trunc2) {
  return GradedC::scalar(tab, QSeriesC::monomial(0, z, trunc2));
}

// Product of the auxiliary-bundle quotient jets over one summand; paired
// data substitutes the jet at both signs of each root and picks up the
// center value once per surplus zero root.
inline GradedC v_summand_product(const VSummand& s, const Poly<QSeriesC>& jet,
                                 GenTablePtr tab, int trunc2) {
  GradedC out = GradedC::scalar(tab, QSeriesC::one(trunc2));
  for (const auto& r : s.bundle.roots) {
    out *= genera_detail::substitute_jet(jet, r, tab, trunc2);
    if (s.bundle.paired) {
      out *= genera_detail::substitute_jet(jet, GradedC(tab) - r, tab, trunc2);
    }
  }
  if (s.bundle.paired) {
    const int extras = s.bundle.rank - 2 * (int)s.bundle.roots.size();
    for (int i = 0; i < extras; ++i) out = out.scaled(jet[0]);
  }
  return out;
}

// Prefactor of the component sum for each family.
inline Cplx family_prefactor(FFamily family, int ndim, int vdim) {
  const Cplx mi_over = Cplx(0.0, -1.0) / (2.0 * kPi);
  switch (family) {
    case FFamily::landweber:
      return -cplx_ipow(Cplx(2.0, 0.0), vdim / 2) * cplx_ipow(mi_over, ndim);
    case FFamily::witten:
    case FFamily::witten_prime:
      return -cplx_ipow(mi_over, ndim);
    default:
      return -cplx_ipow(Cplx(0.0, -1.0), ndim + vdim / 2) *
             cplx_ipow(Cplx(2.0 * kPi, 0.0), vdim / 2 - ndim);
  }
}

}  // namespace equivariant_detail

// One family member as a q-series at the evaluation point: the transgressed
// gauge character times the tangent pair quotients, the inverted theta
// factors of the normal summands centered at gamma t, and the auxiliary
// quotients centered at nu t, paired against every component.
inline QSeriesC f_function(FFamily family, const EquivariantData& data,
                           const EvaluationPoint& ept) {
  using namespace equivariant_detail;
  validate_equivariant_data(data);
  const ModularPoint& pt = ept.tau;
  const int vkind = f_v_kind(family);
  QSeriesC total = QSeriesC::zero(pt.trunc2);
  for (const auto& c : data.components) {
    const int vdim = v_dim(c);
    if (f_is_de_rham(family) && vdim % 2 != 0) {
      throw std::domain_error("auxiliary bundle of odd rank in family " +
                              std::string(f_family_name(family)));
    }
    const int order = jet_order(c.dim);
    GradedC form = twisted_odd_character(f_twist_kind(family), data.rank_e,
                                         c.odd_classes, pt.trunc2);
    const Poly<QSeriesC> pair_jet = theta_pair_qjet(pt, order);
    for (const auto& r : c.tangent.roots) {
      form *= genera_detail::substitute_jet(pair_jet, r, c.table, pt.trunc2);
    }
    for (const auto& s : c.normal) {
      const Cplx v0 = double(s.gamma) * ept.t;
      Poly<QSeriesC> jet(order + 1);
      try {
        jet = theta_recip_qjet(v0, pt, order);
      } catch (const std::domain_error& e) {
        throw std::domain_error("normal summand gamma=" + std::to_string(s.gamma) +
                                " of " + c.name + ": " + e.what());
      }
      for (const auto& r : s.bundle.roots) {
        form *= genera_detail::substitute_jet(jet, r, c.table, pt.trunc2);
      }
    }
    for (const auto& s : c.vbundle) {
      const Cplx v0 = double(s.nu) * ept.t;
      const Poly<QSeriesC> jet = vkind == 0
                                     ? theta_flat_qjet(v0, pt, order)
                                     : theta_ratio_qjet(vkind, v0, pt, order);
      form *= v_summand_product(s, jet, c.table, pt.trunc2);
    }
    const Cplx pref = family_prefactor(family, normal_dim(c), vdim);
    total = total + integrate_component(c, form, pt.trunc2).scaled(pref);
  }
  return total;
}

// Direct numeric value of the same family member through the pointwise
// theta jets; used where the q-expansion converges too slowly.
inline Cplx f_value(FFamily family, const EquivariantData& data, const Cplx& t,
                    const Cplx& tau) {
  using namespace equivariant_detail;
  validate_equivariant_data(data);
  theta_detail::require_upper_half(tau);
  const int vkind = f_v_kind(family);
  Cplx total(0.0, 0.0);
  for (const auto& c : data.components) {
    const int vdim = v_dim(c);
    if (f_is_de_rham(family) && vdim % 2 != 0) {
      throw std::domain_error("auxiliary bundle of odd rank in family " +
                              std::string(f_family_name(family)));
    }
    const int order = jet_order(c.dim);
    GradedC form = twisted_odd_character_value(f_twist_kind(family), data.rank_e,
                                               c.odd_classes, tau);
    const Poly<QSeriesC> pair_jet =
        theta_detail::lift(theta_pair_jet(tau, order), 1);
    for (const auto& r : c.tangent.roots) {
      form *= genera_detail::substitute_jet(pair_jet, r, c.table, 1);
    }
    for (const auto& s : c.normal) {
      const Cplx v0 = double(s.gamma) * t;
      try {
        theta_zero_guard(v0, tau);
      } catch (const std::domain_error& e) {
        throw std::domain_error("normal summand gamma=" + std::to_string(s.gamma) +
                                " of " + c.name + ": " + e.what());
      }
      const Poly<QSeriesC> jet =
          theta_detail::lift(theta_recip_jet(v0, tau, order), 1);
      for (const auto& r : s.bundle.roots) {
        form *= genera_detail::substitute_jet(jet, r, c.table, 1);
      }
    }
    for (const auto& s : c.vbundle) {
      const Cplx v0 = double(s.nu) * t;
      const Poly<QSeriesC> jet = theta_detail::lift(
          vkind == 0 ? theta_flat_jet(v0, tau, order)
                     : theta_ratio_jet(vkind, v0, tau, order),
          1);
      form *= v_summand_product(s, jet, c.table, 1);
    }
    const Cplx pref = family_prefactor(family, normal_dim(c), vdim);
    total += integrate_component(c, form, 1).at(0) * pref;
  }
  return total;
}

// Equivariant Chern character of one twist bundle on one component.  The
// default is the trivial line; the auxiliary-bundle twist realizes the sum
// of weighted root exponentials of the fixed-point index formula.
using TwistCharacter =
    std::function<GradedC(const FixedComponent&, const Cplx&, int)>;

inline TwistCharacter trivial_twist() {
  return [](const FixedComponent& c, const Cplx&, int trunc2) {
    return GradedC::scalar(c.table, QSeriesC::one(trunc2));
  };
}

inline TwistCharacter v_bundle_twist() {
  return [](const FixedComponent& c, const Cplx& t, int trunc2) {
    GradedC out(c.table);
    for (const auto& s : c.vbundle) {
      const Cplx phase = std::exp(kTwoPiI * double(s.nu) * t);
      for (const auto& x :
           witten_detail::root_exponentials(s.bundle, 1.0, trunc2)) {
        out += x.scaled(QSeriesC::monomial(0, phase, trunc2));
      }
    }
    return out;
  };
}

namespace equivariant_detail {

// Shared fixed-point kernel: gauge character times tangent and normal sine
// quotients times the twist character, paired against the component.
inline QSeriesC lefschetz_component(const FixedComponent& c, const GradedC& gauge,
                                    const GradedC& twist, const Cplx& t,
                                    int trunc2) {
  const int order = jet_order(c.dim);
  GradedC form = gauge;
  const Poly<QSeriesC> pair_jet = theta_detail::lift(pair_sin_jet(order), trunc2);
  for (const auto& r : c.tangent.roots) {
    form *= genera_detail::substitute_jet(pair_jet, r, c.table, trunc2);
  }
  for (const auto& s : c.normal) {
    sine_pole_guard(s.gamma, t);
    const Poly<QSeriesC> jet =
        theta_detail::lift(sine_recip_jet(double(s.gamma) * t, order), trunc2);
    for (const auto& r : s.bundle.roots) {
      form *= genera_detail::substitute_jet(jet, r, c.table, trunc2);
    }
  }
  form *= twist;
  return integrate_component(c, form, trunc2);
}

}  // namespace equivariant_detail

// Fixed-point index of the twisted gauge operator at a topological
// generator surrogate: minus the component sum of the sine-quotient pairing
// against the equivariant character of the twist.
inline Cplx lefschetz_index(const EquivariantData& data,
                            const TwistCharacter& twist, const Cplx& t) {
  using namespace equivariant_detail;
  validate_equivariant_data(data);
  rational_proximity_guard(t);
  Cplx total(0.0, 0.0);
  for (const auto& c : data.components) {
    const GradedC gauge =
        scalar_form(c.table, Cplx(double(data.rank_e), 0.0), 1) +
        odd_ch_form(c.odd_classes);
    total += lefschetz_component(c, gauge, twist(c, t, 1), t, 1).at(0);
  }
  return -total;
}

namespace equivariant_detail {

// Exponential of a rotated Chern root: the weight phase is a scalar, the
// nilpotent part exponentiates inside the symbol algebra.
inline GradedC shifted_exponential(const GradedC& root, int weight,
                                   const Cplx& t, const Cplx& scale,
                                   int trunc2) {
  const Cplx phase = std::exp(scale * double(weight) * t);
  return witten_detail::root_exponential(root, scale, trunc2)
      .scaled(QSeriesC::monomial(0, phase, trunc2));
}

// Complexified root exponentials with their real rank, the input to the
// reduced power towers.
struct EquivariantExponentials {
  int rank = 0;
  std::vector<GradedC> exps;
};

inline EquivariantExponentials tangent_exponentials(const FixedComponent& c,
                                                    int ambient_dim,
                                                    const Cplx& t, int trunc2) {
  EquivariantExponentials out;
  out.rank = ambient_dim;
  for (const auto& r : c.tangent.roots) {
    out.exps.push_back(shifted_exponential(r, 0, t, kTwoPiI, trunc2));
    out.exps.push_back(shifted_exponential(r, 0, t, -kTwoPiI, trunc2));
  }
  const int surplus = c.tangent.rank - 2 * (int)c.tangent.roots.size();
  for (int i = 0; i < surplus; ++i) {
    out.exps.push_back(GradedC::scalar(c.table, QSeriesC::one(trunc2)));
  }
  for (const auto& s : c.normal) {
    for (const auto& r : s.bundle.roots) {
      out.exps.push_back(shifted_exponential(r, s.gamma, t, kTwoPiI, trunc2));
      out.exps.push_back(shifted_exponential(r, s.gamma, t, -kTwoPiI, trunc2));
    }
  }
  return out;
}

inline EquivariantExponentials v_exponentials(const FixedComponent& c,
                                              const Cplx& t, int trunc2) {
  EquivariantExponentials out;
  out.rank = v_dim(c);
  for (const auto& s : c.vbundle) {
    for (const auto& r : s.bundle.roots) {
      out.exps.push_back(shifted_exponential(r, s.nu, t, kTwoPiI, trunc2));
      out.exps.push_back(shifted_exponential(r, s.nu, t, -kTwoPiI, trunc2));
    }
    if (s.bundle.paired) {
      const int surplus = s.bundle.rank - 2 * (int)s.bundle.roots.size();
      for (int i = 0; i < surplus; ++i) {
        out.exps.push_back(GradedC::scalar(c.table, QSeriesC::one(trunc2)));
      }
    }
  }
  return out;
}

// q-expansion of the symmetric-power tower of the reduced bundle.
inline GradedC sym_tower_char(const EquivariantExponentials& b, GenTablePtr tab,
                              int trunc2) {
  const int max_i = (trunc2 - 1) / 2;
  auto h = witten_detail::complete_funcs(b.exps, tab, trunc2, max_i);
  GradedC out = GradedC::scalar(tab, QSeriesC::one(trunc2));
  for (int n = 1; 2 * n < trunc2; ++n) {
    const int s2 = 2 * n;
    GradedC level(tab);
    for (int i = 0; i * s2 < trunc2 && i < (int)h.size(); ++i) {
      level += h[i].scaled(QSeriesC::monomial(i * s2, Cplx(1.0, 0.0), trunc2));
    }
    QSeriesC norm = QSeriesC::one(trunc2);
    norm.add_to(s2, Cplx(-1.0, 0.0));
    out *= level.scaled(norm.pow(b.rank));
  }
  return out;
}

// q-expansion of the exterior-power tower of the reduced bundle at the
// level pattern of the selected theta kind.
inline GradedC lambda_tower_char(const EquivariantExponentials& b,
                                 GenTablePtr tab, int vkind, int trunc2) {
  double eps;
  bool half;
  theta_detail::kind_layout(vkind, eps, half);
  const int max_i = half ? trunc2 - 1 : (trunc2 - 1) / 2;
  auto e = witten_detail::elementary_funcs(b.exps, tab, trunc2, max_i);
  GradedC out = GradedC::scalar(tab, QSeriesC::one(trunc2));
  for (int n = 1;; ++n) {
    const int s2 = half ? 2 * n - 1 : 2 * n;
    if (s2 >= trunc2) break;
    GradedC level(tab);
    Cplx sgn(1.0, 0.0);
    for (int i = 0; i * s2 < trunc2 && i < (int)e.size(); ++i) {
      level += e[i].scaled(QSeriesC::monomial(i * s2, sgn, trunc2));
      sgn *= eps;
    }
    QSeriesC norm = QSeriesC::one(trunc2);
    norm.add_to(s2, Cplx(eps, 0.0));
    out *= level.scaled(norm.inverse().pow(b.rank));
  }
  return out;
}

// Half-exponential spinor factors of the auxiliary bundle: the plus sign
// builds the full spinor character with a factor two per surplus zero pair,
// the minus sign builds the difference character that vanishes on any
// surplus zero root.
inline GradedC v_spinor_char(const FixedComponent& c, const Cplx& t, bool plus,
                             int trunc2) {
  GradedC out = GradedC::scalar(c.table, QSeriesC::one(trunc2));
  int surplus = 0;
  for (const auto& s : c.vbundle) {
    for (const auto& r : s.bundle.roots) {
      const GradedC ep = shifted_exponential(r, s.nu, t, kTwoPiI * 0.5, trunc2);
      const GradedC em = shifted_exponential(r, s.nu, t, -kTwoPiI * 0.5, trunc2);
      out *= plus ? ep + em : em - ep;
    }
    if (s.bundle.paired) surplus += s.bundle.rank - 2 * (int)s.bundle.roots.size();
  }
  if (!plus && surplus > 0) return GradedC(c.table);
  for (int i = 0; i < surplus / 2; ++i) {
    out = out.scaled(QSeriesC::monomial(0, Cplx(2.0, 0.0), trunc2));
  }
  return out;
}

}  // namespace equivariant_detail

// Equivariant character of the loop-space twist bundle of one family on one
// component: symmetric towers on the tangent roots, exterior towers on the
// auxiliary roots, and the spinor or difference factor where the family
// carries one.
inline GradedC theta_family_character(FFamily family, const FixedComponent& c,
                                      int ambient_dim, const Cplx& t,
                                      int trunc2) {
  using namespace equivariant_detail;
  const EquivariantExponentials tm =
      tangent_exponentials(c, ambient_dim, t, trunc2);
  const EquivariantExponentials vb = v_exponentials(c, t, trunc2);
  GradedC out = sym_tower_char(tm, c.table, trunc2);
  const int vkind = f_v_kind(family);
  out *= lambda_tower_char(vb, c.table, vkind, trunc2);
  if (family == FFamily::landweber) {
    out *= v_spinor_char(c, t, true, trunc2);
  } else if (f_is_de_rham(family)) {
    out *= v_spinor_char(c, t, false, trunc2);
  }
  return out;
}

// The same family member computed through the fixed-point index route: the
// transgressed gauge character and the q-expanded twist feed the sine-
// quotient kernel instead of the theta jets.
inline QSeriesC lefschetz_series(FFamily family, const EquivariantData& data,
                                 const EvaluationPoint& ept) {
  using namespace equivariant_detail;
  validate_equivariant_data(data);
  rational_proximity_guard(ept.t);
  const int trunc2 = ept.tau.trunc2;
  QSeriesC total = QSeriesC::zero(trunc2);
  for (const auto& c : data.components) {
    if (f_is_de_rham(family) && v_dim(c) % 2 != 0) {
      throw std::domain_error("auxiliary bundle of odd rank in family " +
                              std::string(f_family_name(family)));
    }
    const GradedC gauge = twisted_odd_character(f_twist_kind(family), data.rank_e,
                                                c.odd_classes, trunc2);
    const GradedC twist =
        theta_family_character(family, c, data.ambient_dim, ept.t, trunc2);
    total = total + lefschetz_component(c, gauge, twist, ept.t, trunc2);
  }
  return total.scaled(Cplx(-1.0, 0.0));
}

// Rational function of the signature-operator rigidity argument: the gauge
// character against the tangent cotangent quotients and the two-sided
// normal quotients in the variable z.
inline Cplx signature_rational(const EquivariantData& data, const Cplx& z) {
  using namespace equivariant_detail;
  validate_equivariant_data(data);
  Cplx total(0.0, 0.0);
  for (const auto& c : data.components) {
    const int order = jet_order(c.dim);
    GradedC form = scalar_form(c.table, Cplx(double(data.rank_e), 0.0), 1) +
                   odd_ch_form(c.odd_classes);
    const Poly<QSeriesC> pair_jet = theta_detail::lift(pair_tan_jet(order), 1);
    for (const auto& r : c.tangent.roots) {
      form *= genera_detail::substitute_jet(pair_jet, r, c.table, 1);
    }
    Poly<Cplx> hp(order + 1), hm(order + 1);
    {
      Cplx cp(1.0, 0.0), cm(1.0, 0.0);
      for (int k = 0; k <= order; ++k) {
        hp[k] = cp;
        hm[k] = cm;
        cp *= Cplx(0.0, kPi) / double(k + 1);
        cm *= Cplx(0.0, -kPi) / double(k + 1);
      }
    }
    for (const auto& s : c.normal) {
      Cplx zg;
      try {
        zg = cplx_ipow(z, s.gamma);
      } catch (const std::domain_error&) {
        throw std::domain_error("pole of the normal quotient at gamma=" +
                                std::to_string(s.gamma) + " z=0");
      }
      const Poly<Cplx> num = hp.scaled(zg) + hm;
      const Poly<Cplx> den = hp.scaled(zg) - hm;
      if (std::abs(den[0]) < 1e-9) {
        throw std::domain_error("pole of the normal quotient at gamma=" +
                                std::to_string(s.gamma) +
                                " with z^gamma near one");
      }
      const Poly<QSeriesC> jet = theta_detail::lift(num * den.inverse(), 1);
      for (const auto& r : s.bundle.roots) {
        form *= genera_detail::substitute_jet(jet, r, c.table, 1);
      }
    }
    const Cplx pref = -cplx_ipow(Cplx(2.0, 0.0), (c.dim - 1) / 2);
    total += integrate_component(c, form, 1).at(0) * pref;
  }
  return total;
}

// Low-discrepancy circle parameters surviving the rational-proximity guard.
inline std::vector<double> scan_t_samples(int count) {
  std::vector<double> out;
  double x = 0.5 * (std::sqrt(5.0) - 1.0);
  while ((int)out.size() < count) {
    x += 0.5 * (std::sqrt(5.0) - 1.0);
    x -= std::floor(x);
    const double t = 0.02 + 0.96 * x;
    try {
      equivariant_detail::rational_proximity_guard(Cplx(t, 0.0));
    } catch (const std::domain_error&) {
      continue;
    }
    out.push_back(t);
  }
  return out;
}

struct RigidityScan {
  FFamily family = FFamily::witten;
  std::vector<int> orders;
  std::vector<double> variation;
  std::vector<std::string> notes;
  std::size_t used = 0;

  double worst() const {
    double m = 0.0;
    for (double v : variation) m = std::max(m, v);
    return m;
  }
  bool pass(double tol) const { return used >= 2 && worst() <= tol; }
};

// Sweeps the circle parameter and reports, q-order by q-order, how far the
// series moves from its value at the first usable sample.
inline RigidityScan rigidity_scan(FFamily family, const EquivariantData& data,
                                  const std::vector<double>& t_samples,
                                  const ModularPoint& pt) {
  RigidityScan scan;
  scan.family = family;
  std::map<int, double> var;
  bool have_ref = false;
  QSeriesC ref = QSeriesC::zero(pt.trunc2);
  for (double tr : t_samples) {
    const Cplx t(tr, 0.0);
    QSeriesC cur = QSeriesC::zero(pt.trunc2);
    try {
      equivariant_detail::rational_proximity_guard(t);
      cur = f_function(family, data, EvaluationPoint{t, pt});
    } catch (const std::domain_error& e) {
      scan.notes.push_back("t=" + std::to_string(tr) +
                           " skipped: " + e.what());
      continue;
    }
    ++scan.used;
    if (!have_ref) {
      ref = cur;
      have_ref = true;
      for (const auto& [e2, z] : ref.coeffs()) {
        (void)z;
        var[e2] = 0.0;
      }
      continue;
    }
    const QSeriesC diff = cur - ref;
    for (const auto& [e2, z] : diff.coeffs()) {
      auto it = var.find(e2);
      if (it == var.end()) {
        var[e2] = std::abs(z);
      } else {
        it->second = std::max(it->second, std::abs(z));
      }
    }
  }
  for (const auto& [e2, v] : var) {
    scan.orders.push_back(e2);
    scan.variation.push_back(v);
  }
  return scan;
}

}  // namespace rigel
