#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rigel/ring.hpp"

namespace rigel {

// Integer matrix [[a,b],[c,d]] of determinant one acting on the upper half
// plane by fractional linear maps.
struct ModularMatrix {
  long long a = 1;
  long long b = 0;
  long long c = 0;
  long long d = 1;

  long long det() const { return a * d - b * c; }

  static ModularMatrix identity() { return ModularMatrix{1, 0, 0, 1}; }
  static ModularMatrix s() { return ModularMatrix{0, -1, 1, 0}; }
  static ModularMatrix t() { return ModularMatrix{1, 1, 0, 1}; }

  ModularMatrix inverse() const {
    if (det() != 1) throw std::domain_error("matrix determinant is not one");
    return ModularMatrix{d, -b, -c, a};
  }

  friend ModularMatrix operator*(const ModularMatrix& x,
                                 const ModularMatrix& y) {
    return ModularMatrix{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                         x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }

  friend bool operator==(const ModularMatrix& x, const ModularMatrix& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  friend bool operator!=(const ModularMatrix& x, const ModularMatrix& y) {
    return !(x == y);
  }

  std::string str() const {
    return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" +
           std::to_string(c) + "," + std::to_string(d) + "]]";
  }
};

// Product of the letters of a word in the generators S and T, leftmost
// letter applied last under the fractional linear action.
inline ModularMatrix modular_word(const std::string& word) {
  ModularMatrix r = ModularMatrix::identity();
  for (char ch : word) {
    if (ch == 'S') {
      r = r * ModularMatrix::s();
    } else if (ch == 'T') {
      r = r * ModularMatrix::t();
    } else {
      throw std::invalid_argument("generator word may contain only S and T");
    }
  }
  return r;
}

enum class ModularGroup { sl2z, gamma0_2, gamma_upper0_2, gamma_theta };

inline const char* group_name(ModularGroup g) {
  switch (g) {
    case ModularGroup::sl2z:
      return "SL2(Z)";
    case ModularGroup::gamma0_2:
      return "Gamma_0(2)";
    case ModularGroup::gamma_upper0_2:
      return "Gamma^0(2)";
    case ModularGroup::gamma_theta:
      return "Gamma_theta";
  }
  throw std::invalid_argument("unknown modular group");
}

struct NamedMatrix {
  std::string word;
  ModularMatrix m;
};

// Generating sets, given as words in S and T and multiplied out.
inline std::vector<NamedMatrix> group_generators(ModularGroup g) {
  auto named = [](const std::string& w) {
    return NamedMatrix{w, modular_word(w)};
  };
  switch (g) {
    case ModularGroup::sl2z:
      return {named("S"), named("T")};
    case ModularGroup::gamma0_2:
      return {named("T"), named("STTST")};
    case ModularGroup::gamma_upper0_2:
      return {named("STS"), named("TTSTS")};
    case ModularGroup::gamma_theta:
      return {named("S"), named("TT")};
  }
  throw std::invalid_argument("unknown modular group");
}

namespace modular_detail {

inline int parity(long long x) { return int(((x % 2) + 2) % 2); }

}  // namespace modular_detail

// Membership by the defining congruence: lower left entry even for
// Gamma_0(2), upper right entry even for Gamma^0(2), and reduction mod two
// equal to the identity or the antidiagonal for the theta group.
inline bool group_member(ModularGroup g, const ModularMatrix& m) {
  if (m.det() != 1) return false;
  using modular_detail::parity;
  const int a = parity(m.a), b = parity(m.b), c = parity(m.c), d = parity(m.d);
  switch (g) {
    case ModularGroup::sl2z:
      return true;
    case ModularGroup::gamma0_2:
      return c == 0;
    case ModularGroup::gamma_upper0_2:
      return b == 0;
    case ModularGroup::gamma_theta:
      return (a == 1 && b == 0 && c == 0 && d == 1) ||
             (a == 0 && b == 1 && c == 1 && d == 0);
  }
  throw std::invalid_argument("unknown modular group");
}

inline Cplx mobius_tau(const ModularMatrix& g, const Cplx& tau) {
  const Cplx den = double(g.c) * tau + double(g.d);
  if (std::abs(den) == 0.0) throw std::domain_error("mobius pole");
  return (double(g.a) * tau + double(g.b)) / den;
}

inline Cplx mobius_t(const ModularMatrix& g, const Cplx& t, const Cplx& tau) {
  const Cplx den = double(g.c) * tau + double(g.d);
  if (std::abs(den) == 0.0) throw std::domain_error("mobius pole");
  return t / den;
}

// A candidate Jacobi form: a callable on (t, tau) with tau in the upper
// half plane.
using JacobiFunction = std::function<Cplx(const Cplx&, const Cplx&)>;
using ModularFunction = std::function<Cplx(const Cplx&)>;

// Index may be half integral; the lattice of translations is (2Z)^2.
struct JacobiFormSpec {
  double index = 0.0;
  int weight = 0;
  ModularGroup group = ModularGroup::sl2z;
};

// Weighted action of a group element on a candidate form,
//   (F|g)(t, tau) = (c tau + d)^{-l} exp(-2 pi i m c t^2/(c tau + d))
//                   * F(t/(c tau + d), (a tau + b)/(c tau + d)),
// so that F is invariant exactly when it satisfies the first
// transformation law.  The action satisfies (F|g1)|g2 = F|(g1 g2).
inline JacobiFunction jacobi_slash(const JacobiFunction& f,
                                   const JacobiFormSpec& spec,
                                   const ModularMatrix& g) {
  return [f, spec, g](const Cplx& t, const Cplx& tau) {
    const Cplx den = double(g.c) * tau + double(g.d);
    if (std::abs(den) == 0.0) throw std::domain_error("mobius pole");
    const Cplx phase =
        std::exp(-kTwoPiI * spec.index * double(g.c) * t * t / den);
    return cplx_ipow(den, -spec.weight) * phase *
           f(t / den, (double(g.a) * tau + double(g.b)) / den);
  };
}

// Lattice counterpart: (F|(la, mu))(t, tau) =
// exp(2 pi i m (la^2 tau + 2 la t)) F(t + la tau + mu, tau).
inline JacobiFunction jacobi_lattice_slash(const JacobiFunction& f,
                                           double index, long long la,
                                           long long mu) {
  return [f, index, la, mu](const Cplx& t, const Cplx& tau) {
    const Cplx arg = double(la) * double(la) * tau + 2.0 * double(la) * t;
    return std::exp(kTwoPiI * index * arg) *
           f(t + double(la) * tau + double(mu), tau);
  };
}

// One transformation law, measured over a sample set.  Samples where
// either side is non finite or overflows are reported as skipped; the
// residual is the worst relative deviation over the usable samples.
struct LawResidual {
  std::string label;
  double residual = 0.0;
  int used = 0;
  int skipped = 0;
};

struct JacobiLawReport {
  std::vector<LawResidual> modular;
  std::vector<LawResidual> lattice;

  double worst() const {
    double w = 0.0;
    for (const auto& r : modular) w = std::max(w, r.residual);
    for (const auto& r : lattice) w = std::max(w, r.residual);
    return w;
  }
  int skipped() const {
    int n = 0;
    for (const auto& r : modular) n += r.skipped;
    for (const auto& r : lattice) n += r.skipped;
    return n;
  }
  bool pass(double tol) const { return worst() <= tol; }
};

namespace modular_detail {

inline bool usable(const Cplx& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag()) &&
         std::abs(z) < 1e100;
}

inline LawResidual law_residual(const std::string& label,
                                const JacobiFunction& transformed,
                                const JacobiFunction& reference,
                                const std::vector<std::pair<Cplx, Cplx>>& samples) {
  LawResidual out;
  out.label = label;
  for (const auto& [t, tau] : samples) {
    Cplx lhs, rhs;
    try {
      lhs = transformed(t, tau);
      rhs = reference(t, tau);
    } catch (const std::exception&) {
      ++out.skipped;
      continue;
    }
    if (!usable(lhs) || !usable(rhs)) {
      ++out.skipped;
      continue;
    }
    const double dev = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    out.residual = std::max(out.residual, dev);
    ++out.used;
  }
  return out;
}

}  // namespace modular_detail

inline std::vector<std::pair<long long, long long>> default_lattice_shifts() {
  return {{2, 0}, {0, 2}, {-2, 0}, {2, 2}};
}

// Checks both transformation laws of a Jacobi form of the given index and
// weight: invariance under the generators of the group, and the quasi
// periodicity under translations of t by the lattice (2Z)^2.
inline JacobiLawReport jacobi_law_check(
    const JacobiFunction& f, const JacobiFormSpec& spec,
    const std::vector<std::pair<Cplx, Cplx>>& samples,
    const std::vector<std::pair<long long, long long>>& shifts =
        default_lattice_shifts()) {
  JacobiLawReport report;
  for (const auto& gen : group_generators(spec.group)) {
    report.modular.push_back(modular_detail::law_residual(
        gen.word, jacobi_slash(f, spec, gen.m), f, samples));
  }
  for (const auto& [la, mu] : shifts) {
    if (la % 2 != 0 || mu % 2 != 0) {
      throw std::domain_error("lattice shift must lie in (2Z)^2");
    }
    const std::string label =
        "(" + std::to_string(la) + "," + std::to_string(mu) + ")";
    report.lattice.push_back(modular_detail::law_residual(
        label, jacobi_lattice_slash(f, spec.index, la, mu), f, samples));
  }
  return report;
}

// Character estimate for one generator of a modular form check.  The
// character is read off from the first usable sample as
// f(g tau) / ((c tau + d)^k f(tau)) and never assumed trivial; the spread
// measures its consistency across the remaining samples.
struct CharacterEstimate {
  std::string word;
  ModularMatrix m;
  Cplx chi = Cplx(1.0, 0.0);
  double residual = 0.0;
  double spread = 0.0;
  int used = 0;
  int skipped = 0;
  bool indeterminate = true;
};

struct ModularFormReport {
  int weight = 0;
  ModularGroup group = ModularGroup::sl2z;
  std::vector<CharacterEstimate> lines;

  double worst_residual() const {
    double w = 0.0;
    for (const auto& l : lines) w = std::max(w, l.residual);
    return w;
  }
  double worst_spread() const {
    double w = 0.0;
    for (const auto& l : lines) w = std::max(w, l.spread);
    return w;
  }
  bool determinate() const {
    for (const auto& l : lines) {
      if (l.indeterminate) return false;
    }
    return true;
  }
};

// Checks that f transforms with the given weight under the generators of
// the group, up to a constant character per generator.  The character is
// estimated from the samples; a function vanishing at every sample yields
// an indeterminate line rather than a spurious pass with character zero.
inline ModularFormReport modular_form_check(const ModularFunction& f,
                                            int weight, ModularGroup group,
                                            const std::vector<Cplx>& taus) {
  ModularFormReport report;
  report.weight = weight;
  report.group = group;
  for (const auto& gen : group_generators(group)) {
    CharacterEstimate line;
    line.word = gen.word;
    line.m = gen.m;
    std::vector<Cplx> ratios;
    std::vector<std::pair<Cplx, Cplx>> pairs;
    for (const Cplx& tau : taus) {
      Cplx base, moved;
      Cplx den = double(gen.m.c) * tau + double(gen.m.d);
      try {
        base = f(tau);
        moved = f(mobius_tau(gen.m, tau));
      } catch (const std::exception&) {
        ++line.skipped;
        continue;
      }
      if (!modular_detail::usable(base) || !modular_detail::usable(moved)) {
        ++line.skipped;
        continue;
      }
      const Cplx scaled = cplx_ipow(den, weight) * base;
      if (std::abs(scaled) < 1e-120) {
        ++line.skipped;
        continue;
      }
      ratios.push_back(moved / scaled);
      pairs.emplace_back(moved, scaled);
      ++line.used;
    }
    if (!ratios.empty()) {
      line.indeterminate = false;
      line.chi = ratios.front();
      for (const Cplx& r : ratios) {
        line.spread = std::max(line.spread, std::abs(r - line.chi));
      }
      for (const auto& [moved, scaled] : pairs) {
        const double dev = std::abs(moved - line.chi * scaled) /
                           std::max(1.0, std::abs(moved));
        line.residual = std::max(line.residual, dev);
      }
    }
    report.lines.push_back(std::move(line));
  }
  return report;
}

// Deterministic sample grids.  The tau grid walks two arcs with moduli
// between 0.9 and 2, real part within [-0.45, 0.45], imaginary part well
// above 0.4; the t grid uses golden ratio steps inside [0.05, 0.45] to
// stay away from low denominator rationals.
inline std::vector<Cplx> modular_tau_grid(int count) {
  if (count < 1) throw std::domain_error("sample count must be positive");
  std::vector<Cplx> taus;
  taus.reserve(count);
  const double golden = 0.6180339887498949;
  for (int k = 0; k < count; ++k) {
    const double radius = 0.9 + 1.1 * double(k % 5) / 4.0;
    double frac = (k + 1) * golden;
    frac -= std::floor(frac);
    const double re = -0.45 + 0.9 * frac;
    taus.emplace_back(re, std::sqrt(radius * radius - re * re));
  }
  return taus;
}

inline std::vector<double> jacobi_t_grid(int count) {
  if (count < 1) throw std::domain_error("sample count must be positive");
  std::vector<double> ts;
  ts.reserve(count);
  const double golden = 0.6180339887498949;
  for (int k = 0; k < count; ++k) {
    double frac = (k + 1) * golden;
    frac -= std::floor(frac);
    ts.push_back(0.05 + 0.4 * frac);
  }
  return ts;
}

inline std::vector<std::pair<Cplx, Cplx>> jacobi_sample_grid(int t_count,
                                                             int tau_count) {
  std::vector<std::pair<Cplx, Cplx>> samples;
  for (const double t : jacobi_t_grid(t_count)) {
    for (const Cplx& tau : modular_tau_grid(tau_count)) {
      samples.emplace_back(Cplx(t, 0.0), tau);
    }
  }
  return samples;
}

}  // namespace rigel
