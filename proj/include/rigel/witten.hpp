#pragma once

#include <string>
#include <vector>

#include "rigel/graded.hpp"
#include "rigel/kelement.hpp"
#include "rigel/poly.hpp"
#include "rigel/qseries.hpp"
#include "rigel/theta.hpp"

namespace rigel {

using KSeries = QSeries<KElement>;

namespace witten_detail {

// Coefficient of t^i in (1 + s t)^k with s = +-1 and k of either sign.
inline long long binom_power_coeff(long long k, int sign, int i) {
  long long c;
  if (k >= 0) {
    if (i > k) return 0;
    c = Rat::binomial(k, i).num();
  } else {
    c = Rat::binomial(-k + i - 1, i).num();
    if (i % 2 == 1) c = -c;
  }
  if (sign < 0 && i % 2 == 1) c = -c;
  return c;
}

inline Poly<KElement> trivial_series(long long k, int sign, int cap) {
  Poly<KElement> out(cap);
  for (int i = 0; i < cap; ++i)
    out[i] = KElement::trivial(binom_power_coeff(k, sign, i));
  return out;
}

inline Poly<KElement> base_power_series(PowerKind kind, BundleBase b,
                                        int cap) {
  Poly<KElement> out(cap);
  for (int i = 0; i < cap; ++i) out[i] = KElement::power(kind, b, i);
  return out;
}

inline Poly<KElement> poly_pow(const Poly<KElement>& p, long long n) {
  Poly<KElement> r = Poly<KElement>::constant(p.cap(), KElement::trivial(1));
  for (long long i = 0; i < n; ++i) r = r * p;
  return r;
}

// Shared expansion for the exterior and symmetric generating series of a
// combination of base symbols and trivial lines.
inline Poly<KElement> power_series(const KElement& w, int t_trunc, bool sym) {
  if (t_trunc < 0) throw std::domain_error("negative series truncation");
  const int cap = t_trunc + 1;
  Poly<KElement> out = Poly<KElement>::constant(cap, KElement::trivial(1));
  for (const auto& [mono, c] : w.terms()) {
    if (mono.empty()) {
      out = out * (sym ? trivial_series(-c, -1, cap) : trivial_series(c, 1, cap));
      continue;
    }
    const bool single_base = mono.size() == 1 &&
                             mono[0].kind == PowerKind::exterior &&
                             mono[0].power == 1;
    if (!single_base || c < 0) {
      throw std::domain_error(
          "power series needs base symbols and trivial lines, got " + w.str());
    }
    const PowerKind kind = sym ? PowerKind::symmetric : PowerKind::exterior;
    out = out * poly_pow(base_power_series(kind, mono[0].base, cap), c);
  }
  return out;
}

}  // namespace witten_detail

// Exterior-power generating series of a K-element built from base symbols
// and trivial lines; trivial parts of either sign expand to binomials.
inline Poly<KElement> lambda_series(const KElement& w, int t_trunc) {
  return witten_detail::power_series(w, t_trunc, false);
}

// Symmetric-power generating series of the same class of inputs.
inline Poly<KElement> sym_series(const KElement& w, int t_trunc) {
  return witten_detail::power_series(w, t_trunc, true);
}

// Substitute t = sign * q^{s2/2} into a power series in t.
inline KSeries qsubst(const Poly<KElement>& p, int s2, int sign, int trunc2) {
  KSeries out(trunc2);
  for (int i = 0; i < p.cap(); ++i) {
    if (p[i].is_zero()) continue;
    const long long e2 = (long long)i * s2;
    if (e2 >= trunc2) break;
    out.add_to((int)e2, (sign < 0 && i % 2 == 1) ? -p[i] : p[i]);
  }
  return out;
}

// q-expansion of the twisted loop-space bundle built from the tangent class
// and the auxiliary class: symmetric powers at integer levels throughout,
// exterior powers at the level pattern selected by j (0 stands for the plain
// family with parameter -q^n, 1..3 follow the theta kinds).
inline KSeries theta_bundle_qexp(int j, const KElement& tm, const KElement& v,
                                 int trunc2 = QSeriesR::kDefaultTrunc2) {
  double eps;
  bool half;
  theta_detail::kind_layout(j, eps, half);
  KSeries out = KSeries::one(trunc2);
  for (int n = 1; 2 * n < trunc2; ++n) {
    const int s2 = 2 * n;
    out *= qsubst(sym_series(tm, (trunc2 - 1) / s2), s2, +1, trunc2);
  }
  for (int n = 1;; ++n) {
    const int s2 = half ? 2 * n - 1 : 2 * n;
    if (s2 >= trunc2) break;
    out *= qsubst(lambda_series(v, (trunc2 - 1) / s2), s2, (int)eps, trunc2);
  }
  return out;
}

// q-expansion of the exterior-algebra twist family on the auxiliary bundle
// of even rank rank_e; j = 1 carries the spinor factor and integer levels,
// j = 2 and 3 run on half-integer levels with signs -/+.
inline KSeries q_bundle_qexp(int j, int rank_e,
                             int trunc2 = QSeriesR::kDefaultTrunc2) {
  if (j < 1 || j > 3) {
    throw std::invalid_argument("twist family index must be 1, 2 or 3");
  }
  if (rank_e < 2 || rank_e % 2 != 0) {
    throw std::domain_error("twist bundle rank must be even and at least 2, got " +
                            std::to_string(rank_e));
  }
  double eps;
  bool half;
  theta_detail::kind_layout(j, eps, half);
  KSeries out = KSeries::one(trunc2);
  for (int n = 1;; ++n) {
    const int s2 = half ? 2 * n - 1 : 2 * n;
    if (s2 >= trunc2) break;
    const int cap = std::min((trunc2 - 1) / s2, rank_e) + 1;
    Poly<KElement> fac =
        witten_detail::base_power_series(PowerKind::exterior, BundleBase::e, cap);
    out *= qsubst(fac, s2, (int)eps, trunc2);
  }
  if (j == 1) {
    const KElement d = KElement::spinor(BundleBase::e);
    KSeries scaled(trunc2);
    for (const auto& [e2, ke] : out.coeffs()) scaled.add_to(e2, ke * d);
    out = scaled;
  }
  return out;
}

// Scalar q-series relating the plain and the reduced expansions: the plain
// bundle equals the reduced one times this series when the tangent class has
// rank dim_tm and the exterior-side class has rank dim_v.
inline QSeriesR witten_ratio_series(int j, int dim_tm, int dim_v, int trunc2) {
  double eps;
  bool half;
  theta_detail::kind_layout(j, eps, half);
  QSeriesR out = QSeriesR::one(trunc2);
  if (dim_tm > 0) {
    for (int n = 1; 2 * n < trunc2; ++n) {
      QSeriesR f = QSeriesR::one(trunc2);
      f.add_to(2 * n, Rat(-1));
      out *= f.inverse().pow(dim_tm);
    }
  }
  if (dim_v > 0) {
    for (int n = 1;; ++n) {
      const int s2 = half ? 2 * n - 1 : 2 * n;
      if (s2 >= trunc2) break;
      QSeriesR f = QSeriesR::one(trunc2);
      f.add_to(s2, Rat((long long)eps));
      out *= f.pow(dim_v);
    }
  }
  return out;
}

// Chern-root description of a bundle: one stored root per +- pair when
// paired (complexified real bundle, surplus rank counts zero roots), one
// per complex dimension otherwise.  The theta and exponential arguments use
// the stored generator x itself, the 2 pi i scaling being applied at use.
struct BundleRootData {
  std::string name;
  int rank = 0;
  bool paired = true;
  GenTablePtr table;
  std::vector<GradedC> roots;
};

inline void validate_root_data(const BundleRootData& vb) {
  if (!vb.table) throw std::invalid_argument("root data needs a generator table");
  if (vb.paired) {
    if ((int)vb.roots.size() * 2 > vb.rank) {
      throw std::invalid_argument("more paired roots than rank allows in " +
                                  vb.name);
    }
  } else if ((int)vb.roots.size() != vb.rank) {
    throw std::invalid_argument("complex bundle needs rank many roots in " +
                                vb.name);
  }
  for (const auto& r : vb.roots) {
    if (r.table().get() != vb.table.get()) {
      throw std::invalid_argument("root with mismatched generator table in " +
                                  vb.name);
    }
  }
}

namespace witten_detail {

inline GradedC root_exponential(const GradedC& root, const Cplx& scale,
                                int trunc2) {
  return root.scaled(QSeriesC::monomial(0, scale, trunc2)).exp();
}

// All Chern-root exponentials exp(2 pi i scale_mult * x) of the bundle,
// including the zero roots implied by surplus rank on paired data.
inline std::vector<GradedC> root_exponentials(const BundleRootData& vb,
                                              double scale_mult, int trunc2) {
  validate_root_data(vb);
  std::vector<GradedC> out;
  const Cplx up = kTwoPiI * scale_mult;
  for (const auto& r : vb.roots) {
    out.push_back(root_exponential(r, up, trunc2));
    if (vb.paired) out.push_back(root_exponential(r, -up, trunc2));
  }
  const int extras = vb.paired ? vb.rank - 2 * (int)vb.roots.size() : 0;
  for (int i = 0; i < extras; ++i)
    out.push_back(GradedC::scalar(vb.table, QSeriesC::one(trunc2)));
  return out;
}

// Elementary symmetric functions e_0..e_max of the exponentials.
inline std::vector<GradedC> elementary_funcs(const std::vector<GradedC>& a,
                                             GenTablePtr tab, int trunc2,
                                             int max_i) {
  std::vector<GradedC> e;
  e.reserve(max_i + 1);
  e.push_back(GradedC::scalar(tab, QSeriesC::one(trunc2)));
  for (int i = 0; i < max_i; ++i) e.push_back(GradedC(tab));
  for (const auto& x : a) {
    for (int i = std::min((int)e.size() - 1, max_i); i >= 1; --i)
      e[i] += e[i - 1] * x;
  }
  return e;
}

// Complete homogeneous symmetric functions h_0..h_max via the Newton-style
// convolution with the elementary ones.
inline std::vector<GradedC> complete_funcs(const std::vector<GradedC>& a,
                                           GenTablePtr tab, int trunc2,
                                           int max_i) {
  std::vector<GradedC> e = elementary_funcs(a, tab, trunc2, max_i);
  std::vector<GradedC> h;
  h.push_back(GradedC::scalar(tab, QSeriesC::one(trunc2)));
  for (int i = 1; i <= max_i; ++i) {
    GradedC s(tab);
    for (int k = 1; k <= i && k < (int)e.size(); ++k) {
      GradedC term = e[k] * h[i - k];
      s = (k % 2 == 1) ? s + term : s - term;
    }
    h.push_back(s);
  }
  return h;
}

}  // namespace witten_detail

// Root-data counterpart of a K-element: the Chern character form, built
// from symmetric functions of the root exponentials.
struct RootContext {
  GenTablePtr table;
  int trunc2 = QSeriesC::kDefaultTrunc2;
  const BundleRootData* v = nullptr;
  const BundleRootData* e = nullptr;
  const BundleRootData* t = nullptr;
};

inline GradedC kelement_ch(const KElement& ke, const RootContext& ctx) {
  using namespace witten_detail;
  if (!ctx.table) throw std::invalid_argument("root context needs a table");
  GradedC out(ctx.table);
  const QSeriesC one = QSeriesC::one(ctx.trunc2);
  for (const auto& [mono, c] : ke.terms()) {
    GradedC term = GradedC::scalar(ctx.table, one.scaled(Cplx(double(c), 0.0)));
    for (const auto& f : mono) {
      const BundleRootData* vb = (f.base == BundleBase::v)   ? ctx.v
                                 : (f.base == BundleBase::e) ? ctx.e
                                                             : ctx.t;
      if (!vb) {
        throw std::invalid_argument(std::string("no root data for base ") +
                                    bundle_base_letter(f.base));
      }
      if (f.kind == PowerKind::spinor) {
        if (!vb->paired || (vb->rank - 2 * (int)vb->roots.size()) % 2 != 0) {
          throw std::domain_error("spinor factor needs paired even rank in " +
                                  vb->name);
        }
        GradedC fac = GradedC::scalar(ctx.table, one);
        for (const auto& r : vb->roots) {
          fac *= root_exponential(r, kTwoPiI * 0.5, ctx.trunc2) +
                 root_exponential(r, -kTwoPiI * 0.5, ctx.trunc2);
        }
        const int zero_pairs = (vb->rank - 2 * (int)vb->roots.size()) / 2;
        for (int i = 0; i < zero_pairs; ++i)
          fac = fac.scaled(one.scaled(Cplx(2.0, 0.0)));
        term *= fac;
      } else if (f.kind == PowerKind::exterior) {
        auto exps = root_exponentials(*vb, 1.0, ctx.trunc2);
        auto e = elementary_funcs(exps, ctx.table, ctx.trunc2, f.power);
        term *= e[f.power];
      } else {
        auto exps = root_exponentials(*vb, 1.0, ctx.trunc2);
        auto h = complete_funcs(exps, ctx.table, ctx.trunc2, f.power);
        term *= h[f.power];
      }
    }
    out += term;
  }
  return out;
}

// Chern character of a whole K-element q-series, q-order by q-order.
inline GradedC witten_char_series(const KSeries& ks, const RootContext& ctx) {
  GradedC out(ctx.table);
  for (const auto& [e2, ke] : ks.coeffs()) {
    out += kelement_ch(ke, ctx).scaled(
        QSeriesC::monomial(e2, Cplx(1.0, 0.0), ctx.trunc2));
  }
  return out;
}

// Exterior series on root data: coefficient list in t of prod(1 + t e^{x}).
inline std::vector<GradedC> lambda_series(const BundleRootData& vb,
                                          int t_trunc, int trunc2) {
  if (t_trunc < 0) throw std::domain_error("negative series truncation");
  auto exps = witten_detail::root_exponentials(vb, 1.0, trunc2);
  return witten_detail::elementary_funcs(exps, vb.table, trunc2, t_trunc);
}

// Symmetric series on root data: coefficient list in t of prod 1/(1 - t e^{x}).
inline std::vector<GradedC> sym_series(const BundleRootData& vb, int t_trunc,
                                       int trunc2) {
  if (t_trunc < 0) throw std::domain_error("negative series truncation");
  auto exps = witten_detail::root_exponentials(vb, 1.0, trunc2);
  return witten_detail::complete_funcs(exps, vb.table, trunc2, t_trunc);
}

// Convolution and inversion for coefficient lists in t.
inline std::vector<GradedC> graded_poly_mul(const std::vector<GradedC>& a,
                                            const std::vector<GradedC>& b,
                                            GenTablePtr tab, int t_trunc) {
  std::vector<GradedC> r;
  for (int i = 0; i <= t_trunc; ++i) r.push_back(GradedC(tab));
  for (int i = 0; i < (int)a.size() && i <= t_trunc; ++i)
    for (int j = 0; j < (int)b.size() && i + j <= t_trunc; ++j)
      r[i + j] += a[i] * b[j];
  return r;
}

inline std::vector<GradedC> graded_poly_inverse(const std::vector<GradedC>& a,
                                                GenTablePtr tab, int t_trunc) {
  if (a.empty()) throw std::domain_error("inverse of empty coefficient list");
  std::vector<GradedC> r;
  r.push_back(a[0].inverse());
  for (int k = 1; k <= t_trunc; ++k) {
    GradedC s(tab);
    for (int i = 1; i <= k && i < (int)a.size(); ++i) s += a[i] * r[k - i];
    r.push_back(-(r[0] * s));
  }
  return r;
}

// Characteristic form of the reduced exterior twist family on paired root
// data: the product over pairs of theta_j(x)/theta_j(0), doubled for j = 1.
inline GradedC q_char_form(int j, const BundleRootData& vb,
                           const ModularPoint& pt, int degree_cap) {
  validate_root_data(vb);
  if (!vb.paired || 2 * (int)vb.roots.size() != vb.rank) {
    throw std::invalid_argument("char form needs fully paired roots in " +
                                vb.name);
  }
  const int order = degree_cap / 2;
  const Poly<QSeriesC> jet = theta_ratio_qjet(j, Cplx(0.0, 0.0), pt, order);
  GradedC out = GradedC::scalar(vb.table, QSeriesC::one(pt.trunc2));
  for (const auto& r : vb.roots) {
    GradedC factor = GradedC::scalar(vb.table, jet[0]);
    GradedC pw = GradedC::scalar(vb.table, QSeriesC::one(pt.trunc2));
    for (int k = 1; k <= order; ++k) {
      pw *= r;
      if (pw.empty()) break;
      factor += pw.scaled(jet[k]);
    }
    if (j == 1) factor = factor.scaled(QSeriesC::monomial(0, 2.0, pt.trunc2));
    out *= factor;
  }
  return out;
}

}  // namespace rigel
