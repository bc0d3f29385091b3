#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rigel/ring.hpp"

namespace rigel {

// Dense complex matrices just large enough for sampled gauge loops.
struct CMatrix {
  int n = 0;
  std::vector<Cplx> a;

  CMatrix() = default;
  explicit CMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size) {}

  Cplx& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const Cplx& at(int i, int j) const {
    return a[static_cast<std::size_t>(i) * n + j];
  }

  static CMatrix identity(int size) {
    CMatrix m(size);
    for (int i = 0; i < size; ++i) m.at(i, i) = Cplx(1.0, 0.0);
    return m;
  }
};

inline CMatrix mat_mul(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.n);
  for (int i = 0; i < x.n; ++i) {
    for (int k = 0; k < x.n; ++k) {
      const Cplx s = x.at(i, k);
      if (s == Cplx(0.0, 0.0)) continue;
      for (int j = 0; j < x.n; ++j) out.at(i, j) += s * y.at(k, j);
    }
  }
  return out;
}

inline CMatrix mat_adjoint(const CMatrix& x) {
  CMatrix out(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) out.at(i, j) = std::conj(x.at(j, i));
  return out;
}

inline Cplx mat_trace(const CMatrix& x) {
  Cplx t(0.0, 0.0);
  for (int i = 0; i < x.n; ++i) t += x.at(i, i);
  return t;
}

inline CMatrix mat_kron(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.n * y.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j)
      for (int k = 0; k < y.n; ++k)
        for (int l = 0; l < y.n; ++l)
          out.at(i * y.n + k, j * y.n + l) = x.at(i, j) * y.at(k, l);
  return out;
}

inline Cplx mat_det(CMatrix x) {
  Cplx det(1.0, 0.0);
  for (int c = 0; c < x.n; ++c) {
    int pivot = c;
    for (int r = c + 1; r < x.n; ++r)
      if (std::abs(x.at(r, c)) > std::abs(x.at(pivot, c))) pivot = r;
    if (std::abs(x.at(pivot, c)) == 0.0) return Cplx(0.0, 0.0);
    if (pivot != c) {
      for (int j = 0; j < x.n; ++j) std::swap(x.at(pivot, j), x.at(c, j));
      det = -det;
    }
    det *= x.at(c, c);
    for (int r = c + 1; r < x.n; ++r) {
      const Cplx f = x.at(r, c) / x.at(c, c);
      for (int j = c; j < x.n; ++j) x.at(r, j) -= f * x.at(c, j);
    }
  }
  return det;
}

// Largest absolute entry of g* g - 1.
inline double unitary_defect(const CMatrix& g) {
  const CMatrix p = mat_mul(mat_adjoint(g), g);
  double worst = 0.0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const Cplx want = (i == j) ? Cplx(1.0, 0.0) : Cplx(0.0, 0.0);
      worst = std::max(worst, std::abs(p.at(i, j) - want));
    }
  }
  return worst;
}

enum class LoopDomain { circle, sphere3 };

// Sampled gauge map on a model domain.  Circle samples live at
// phi = 2 pi i / n_phi and wrap periodically.  Sphere samples live on the
// torus-fibred chart (eta, xi1, xi2) with z1 = cos(eta) e^{i xi1},
// z2 = sin(eta) e^{i xi2}: eta at the cell midpoints (i + 1/2) (pi/2) / n_eta
// and both xi angles at 2 pi j / n_xi, periodic.
struct LoopMap {
  LoopDomain domain = LoopDomain::circle;
  int rank = 0;
  int n_phi = 0;
  int n_eta = 0;
  int n_xi = 0;
  std::vector<Cplx> data;

  int node_count() const {
    return domain == LoopDomain::circle ? n_phi : n_eta * n_xi * n_xi;
  }

  CMatrix matrix(int flat) const {
    CMatrix m(rank);
    const std::size_t stride = static_cast<std::size_t>(rank) * rank;
    std::copy_n(data.begin() + stride * flat, stride, m.a.begin());
    return m;
  }

  void set_matrix(int flat, const CMatrix& m) {
    const std::size_t stride = static_cast<std::size_t>(rank) * rank;
    std::copy_n(m.a.begin(), stride, data.begin() + stride * flat);
  }

  int flat_index(int i, int j, int k) const { return (i * n_xi + j) * n_xi + k; }
};

namespace loop_detail {

inline void require_shape(const LoopMap& loop) {
  if (loop.rank < 1) throw std::domain_error("loop rank must be positive");
  const std::size_t want = static_cast<std::size_t>(loop.node_count()) *
                           loop.rank * loop.rank;
  if (loop.data.size() != want) {
    throw std::domain_error("loop sample buffer has " +
                            std::to_string(loop.data.size()) +
                            " entries, expected " + std::to_string(want));
  }
}

inline void require_unitary(const LoopMap& loop, double tol = 1e-10) {
  for (int i = 0; i < loop.node_count(); ++i) {
    const double defect = unitary_defect(loop.matrix(i));
    if (defect > tol) {
      throw std::domain_error("loop sample " + std::to_string(i) +
                              " is not unitary, defect " + std::to_string(defect));
    }
  }
}

// Derivative stencils acting on per-node matrices along one grid line.
inline std::vector<CMatrix> d6_periodic(const std::vector<CMatrix>& f, double h) {
  const int n = static_cast<int>(f.size());
  std::vector<CMatrix> out(n, CMatrix(f[0].n));
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  for (int i = 0; i < n; ++i) {
    CMatrix d(f[0].n);
    for (std::size_t e = 0; e < d.a.size(); ++e) {
      d.a[e] = ((f[wrap(i + 1)].a[e] - f[wrap(i - 1)].a[e]) * (3.0 / 4.0) -
                (f[wrap(i + 2)].a[e] - f[wrap(i - 2)].a[e]) * (3.0 / 20.0) +
                (f[wrap(i + 3)].a[e] - f[wrap(i - 3)].a[e]) * (1.0 / 60.0)) /
               h;
    }
    out[i] = std::move(d);
  }
  return out;
}

inline std::vector<CMatrix> d4_periodic(const std::vector<CMatrix>& f, double h) {
  const int n = static_cast<int>(f.size());
  std::vector<CMatrix> out(n, CMatrix(f[0].n));
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  for (int i = 0; i < n; ++i) {
    CMatrix d(f[0].n);
    for (std::size_t e = 0; e < d.a.size(); ++e) {
      d.a[e] = (f[wrap(i - 2)].a[e] - f[wrap(i - 1)].a[e] * 8.0 +
                f[wrap(i + 1)].a[e] * 8.0 - f[wrap(i + 2)].a[e]) /
               (12.0 * h);
    }
    out[i] = std::move(d);
  }
  return out;
}

// Fourth-order stencils on a bounded line, one-sided near the ends.
inline std::vector<CMatrix> d4_line(const std::vector<CMatrix>& f, double h) {
  const int n = static_cast<int>(f.size());
  std::vector<CMatrix> out(n, CMatrix(f[0].n));
  auto combo = [&](std::initializer_list<std::pair<int, double>> taps) {
    CMatrix d(f[0].n);
    for (const auto& [idx, w] : taps)
      for (std::size_t e = 0; e < d.a.size(); ++e) d.a[e] += f[idx].a[e] * w;
    for (std::size_t e = 0; e < d.a.size(); ++e) d.a[e] /= 12.0 * h;
    return d;
  };
  for (int i = 0; i < n; ++i) {
    if (i >= 2 && i <= n - 3) {
      out[i] = combo({{i - 2, 1.0}, {i - 1, -8.0}, {i + 1, 8.0}, {i + 2, -1.0}});
    } else if (i == 0) {
      out[i] = combo({{0, -25.0}, {1, 48.0}, {2, -36.0}, {3, 16.0}, {4, -3.0}});
    } else if (i == 1) {
      out[i] = combo({{0, -3.0}, {1, -10.0}, {2, 18.0}, {3, -6.0}, {4, 1.0}});
    } else if (i == n - 2) {
      out[i] = combo({{n - 1, 3.0}, {n - 2, 10.0}, {n - 3, -18.0},
                      {n - 4, 6.0}, {n - 5, -1.0}});
    } else {
      out[i] = combo({{n - 1, 25.0}, {n - 2, -48.0}, {n - 3, 36.0},
                      {n - 4, -16.0}, {n - 5, 3.0}});
    }
  }
  return out;
}

inline Cplx pairwise_sum(std::vector<Cplx> v) {
  if (v.empty()) return Cplx(0.0, 0.0);
  while (v.size() > 1) {
    std::size_t out = 0;
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) v[out++] = v[i] + v[i + 1];
    if (v.size() % 2 == 1) v[out++] = v.back();
    v.resize(out);
  }
  return v[0];
}

}  // namespace loop_detail

// Loop builders.

inline LoopMap circle_constant_loop(int rank, int n_phi) {
  LoopMap loop;
  loop.domain = LoopDomain::circle;
  loop.rank = rank;
  loop.n_phi = n_phi;
  loop.data.assign(static_cast<std::size_t>(n_phi) * rank * rank, Cplx(0.0, 0.0));
  for (int i = 0; i < n_phi; ++i) loop.set_matrix(i, CMatrix::identity(rank));
  return loop;
}

// diag(e^{i k_a phi}) with the listed integer charges, padded by ones.
inline LoopMap circle_diag_loop(const std::vector<int>& charges, int rank,
                                int n_phi) {
  if (static_cast<int>(charges.size()) > rank) {
    throw std::domain_error("more winding charges than diagonal slots");
  }
  LoopMap loop = circle_constant_loop(rank, n_phi);
  for (int i = 0; i < n_phi; ++i) {
    const double phi = 2.0 * kPi * i / n_phi;
    CMatrix m = CMatrix::identity(rank);
    for (std::size_t a = 0; a < charges.size(); ++a) {
      m.at(static_cast<int>(a), static_cast<int>(a)) =
          std::exp(Cplx(0.0, charges[a] * phi));
    }
    loop.set_matrix(i, m);
  }
  return loop;
}

// Pointwise Kronecker product of two loops on the same grid.
inline LoopMap tensor_loop(const LoopMap& x, const LoopMap& y) {
  if (x.domain != y.domain || x.node_count() != y.node_count() ||
      x.n_phi != y.n_phi || x.n_eta != y.n_eta || x.n_xi != y.n_xi) {
    throw std::domain_error("tensor product needs loops on the same grid");
  }
  LoopMap out = x;
  out.rank = x.rank * y.rank;
  out.data.assign(static_cast<std::size_t>(out.node_count()) * out.rank * out.rank,
                  Cplx(0.0, 0.0));
  for (int i = 0; i < x.node_count(); ++i)
    out.set_matrix(i, mat_kron(x.matrix(i), y.matrix(i)));
  return out;
}

namespace loop_detail {

inline std::vector<std::vector<int>> subsets_of_size(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(m);
  for (int i = 0; i < m; ++i) pick[i] = i;
  while (true) {
    out.push_back(pick);
    int i = m - 1;
    while (i >= 0 && pick[i] == n - m + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

inline CMatrix compound_matrix(const CMatrix& g,
                               const std::vector<std::vector<int>>& subsets) {
  const int m = static_cast<int>(subsets.empty() ? 0 : subsets[0].size());
  CMatrix out(static_cast<int>(subsets.size()));
  for (std::size_t r = 0; r < subsets.size(); ++r) {
    for (std::size_t c = 0; c < subsets.size(); ++c) {
      CMatrix minor(m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          minor.at(i, j) = g.at(subsets[r][i], subsets[c][j]);
      out.at(static_cast<int>(r), static_cast<int>(c)) = mat_det(minor);
    }
  }
  return out;
}

}  // namespace loop_detail

// Pointwise exterior power: each sample becomes its m-th compound matrix.
inline LoopMap compound_loop(const LoopMap& x, int m) {
  if (m < 0 || m > x.rank) {
    throw std::domain_error("exterior power " + std::to_string(m) +
                            " out of range for rank " + std::to_string(x.rank));
  }
  const auto subsets = loop_detail::subsets_of_size(x.rank, m);
  LoopMap out = x;
  out.rank = static_cast<int>(subsets.size());
  out.data.assign(static_cast<std::size_t>(out.node_count()) * out.rank * out.rank,
                  Cplx(0.0, 0.0));
  for (int i = 0; i < x.node_count(); ++i) {
    if (m == 0) {
      out.set_matrix(i, CMatrix::identity(1));
    } else {
      out.set_matrix(i, loop_detail::compound_matrix(x.matrix(i), subsets));
    }
  }
  return out;
}

// Chart sample of the unit quaternion matrix, optionally padded to a larger
// unitary block diag(g, 1).
inline LoopMap su2_chart_loop(int n_eta, int n_xi, int pad = 0) {
  LoopMap loop;
  loop.domain = LoopDomain::sphere3;
  loop.rank = 2 + pad;
  loop.n_eta = n_eta;
  loop.n_xi = n_xi;
  loop.data.assign(static_cast<std::size_t>(loop.node_count()) * loop.rank *
                       loop.rank,
                   Cplx(0.0, 0.0));
  for (int i = 0; i < n_eta; ++i) {
    const double eta = (i + 0.5) * (kPi / 2.0) / n_eta;
    for (int j = 0; j < n_xi; ++j) {
      const double xi1 = 2.0 * kPi * j / n_xi;
      for (int k = 0; k < n_xi; ++k) {
        const double xi2 = 2.0 * kPi * k / n_xi;
        const Cplx z1 = std::cos(eta) * std::exp(Cplx(0.0, xi1));
        const Cplx z2 = std::sin(eta) * std::exp(Cplx(0.0, xi2));
        CMatrix m = CMatrix::identity(loop.rank);
        m.at(0, 0) = z1;
        m.at(0, 1) = -std::conj(z2);
        m.at(1, 0) = z2;
        m.at(1, 1) = std::conj(z1);
        loop.set_matrix(loop.flat_index(i, j, k), m);
      }
    }
  }
  return loop;
}

inline LoopMap sphere3_constant_loop(int rank, int n_eta, int n_xi) {
  LoopMap loop;
  loop.domain = LoopDomain::sphere3;
  loop.rank = rank;
  loop.n_eta = n_eta;
  loop.n_xi = n_xi;
  loop.data.assign(static_cast<std::size_t>(loop.node_count()) * rank * rank,
                   Cplx(0.0, 0.0));
  for (int i = 0; i < loop.node_count(); ++i)
    loop.set_matrix(i, CMatrix::identity(rank));
  return loop;
}

// Quadrature results carry the raw value next to its distance from the
// nearest integer so callers can assert near-integrality.
struct WindingResult {
  double value = 0.0;
  long long nearest = 0;
  double residual = 0.0;
};

// Winding number of det(g) around the circle: trapezoidal quadrature of
// tr[g^{-1} g'] / (2 pi i) with a sixth-order periodic derivative stencil.
// Unitary samples let g^{-1} be taken as the adjoint.
inline WindingResult winding_c1(const LoopMap& loop) {
  if (loop.domain != LoopDomain::circle) {
    throw std::domain_error("winding quadrature needs a circle loop");
  }
  loop_detail::require_shape(loop);
  if (loop.n_phi < 16) {
    throw std::domain_error("winding quadrature needs at least 16 nodes, got " +
                            std::to_string(loop.n_phi));
  }
  loop_detail::require_unitary(loop);
  const double h = 2.0 * kPi / loop.n_phi;
  std::vector<CMatrix> g(loop.n_phi, CMatrix(loop.rank));
  for (int i = 0; i < loop.n_phi; ++i) g[i] = loop.matrix(i);
  const std::vector<CMatrix> dg = loop_detail::d6_periodic(g, h);
  std::vector<Cplx> cells(loop.n_phi);
  for (int i = 0; i < loop.n_phi; ++i)
    cells[i] = mat_trace(mat_mul(mat_adjoint(g[i]), dg[i]));
  const Cplx total = loop_detail::pairwise_sum(std::move(cells)) * h / kTwoPiI;
  WindingResult out;
  out.value = total.real();
  out.nearest = std::llround(out.value);
  out.residual = std::abs(out.value - static_cast<double>(out.nearest));
  return out;
}

struct DegreeResult {
  double value = 0.0;
  double raw = 0.0;
  long long nearest = 0;
  double residual = 0.0;
};

// Pairing of the degree-3 odd class with the model 3-sphere:
//   raw = (1/2 pi i)^2 integral of tr[(g^{-1} dg)^3]
// on the (eta, xi1, xi2) chart.  The reported value is raw divided by the
// raw pairing of the unit quaternion chart map, which fixes orientation so
// that map scores exactly +1.
inline DegreeResult degree_c3(const LoopMap& loop, int threads = 1) {
  if (loop.domain != LoopDomain::sphere3) {
    throw std::domain_error("degree quadrature needs a sphere loop");
  }
  loop_detail::require_shape(loop);
  if (loop.n_eta < 24 || loop.n_xi < 24) {
    throw std::domain_error("degree quadrature needs at least 24 nodes per angle");
  }
  loop_detail::require_unitary(loop);
  const double h_eta = (kPi / 2.0) / loop.n_eta;
  const double h_xi = 2.0 * kPi / loop.n_xi;

  std::vector<CMatrix> g(loop.node_count(), CMatrix(loop.rank));
  for (int i = 0; i < loop.node_count(); ++i) g[i] = loop.matrix(i);

  std::vector<CMatrix> d_eta(loop.node_count(), CMatrix(loop.rank));
  std::vector<CMatrix> d_xi1(loop.node_count(), CMatrix(loop.rank));
  std::vector<CMatrix> d_xi2(loop.node_count(), CMatrix(loop.rank));
  std::vector<CMatrix> line;
  for (int j = 0; j < loop.n_xi; ++j) {
    for (int k = 0; k < loop.n_xi; ++k) {
      line.assign(loop.n_eta, CMatrix(loop.rank));
      for (int i = 0; i < loop.n_eta; ++i) line[i] = g[loop.flat_index(i, j, k)];
      auto d = loop_detail::d4_line(line, h_eta);
      for (int i = 0; i < loop.n_eta; ++i)
        d_eta[loop.flat_index(i, j, k)] = std::move(d[i]);
    }
  }
  for (int i = 0; i < loop.n_eta; ++i) {
    for (int k = 0; k < loop.n_xi; ++k) {
      line.assign(loop.n_xi, CMatrix(loop.rank));
      for (int j = 0; j < loop.n_xi; ++j) line[j] = g[loop.flat_index(i, j, k)];
      auto d = loop_detail::d4_periodic(line, h_xi);
      for (int j = 0; j < loop.n_xi; ++j)
        d_xi1[loop.flat_index(i, j, k)] = std::move(d[j]);
    }
    for (int j = 0; j < loop.n_xi; ++j) {
      line.assign(loop.n_xi, CMatrix(loop.rank));
      for (int k = 0; k < loop.n_xi; ++k) line[k] = g[loop.flat_index(i, j, k)];
      auto d = loop_detail::d4_periodic(line, h_xi);
      for (int k = 0; k < loop.n_xi; ++k)
        d_xi2[loop.flat_index(i, j, k)] = std::move(d[k]);
    }
  }

  std::vector<Cplx> slice_sums(loop.n_eta, Cplx(0.0, 0.0));
  auto run_slices = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      Cplx acc(0.0, 0.0);
      for (int j = 0; j < loop.n_xi; ++j) {
        for (int k = 0; k < loop.n_xi; ++k) {
          const int f = loop.flat_index(i, j, k);
          const CMatrix gi = mat_adjoint(g[f]);
          const CMatrix pe = mat_mul(gi, d_eta[f]);
          const CMatrix p1 = mat_mul(gi, d_xi1[f]);
          const CMatrix p2 = mat_mul(gi, d_xi2[f]);
          acc += 3.0 * (mat_trace(mat_mul(pe, mat_mul(p1, p2))) -
                        mat_trace(mat_mul(pe, mat_mul(p2, p1))));
        }
      }
      slice_sums[i] = acc;
    }
  };
  const int want = std::max(1, threads);
  if (want == 1) {
    run_slices(0, loop.n_eta);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (loop.n_eta + want - 1) / want;
    for (int t = 0; t < want; ++t) {
      const int lo = t * chunk;
      const int hi = std::min(loop.n_eta, lo + chunk);
      if (lo < hi) pool.emplace_back(run_slices, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  const Cplx integral =
      loop_detail::pairwise_sum(std::move(slice_sums)) * (h_eta * h_xi * h_xi);

  DegreeResult out;
  out.raw = (integral / (kTwoPiI * kTwoPiI)).real();
  out.value = out.raw / 6.0;
  out.nearest = std::llround(out.value);
  out.residual = std::abs(out.value - static_cast<double>(out.nearest));
  return out;
}

// Sampled-loop file format: a header line
//   circle,<rank>,<n_phi>      or      sphere3,<rank>,<n_eta>,<n_xi>
// then one line per grid node holding the node indices followed by the
// matrix entries, row-major, real and imaginary parts interleaved.  Circle
// files repeat node 0 after the last node so closure is part of the data.

namespace loop_detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_num(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("loop csv: bad number '" + s + "'");
  }
  if (used != s.size()) throw std::runtime_error("loop csv: bad number '" + s + "'");
  return v;
}

inline std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace loop_detail

inline void write_loop_csv(const LoopMap& loop, std::ostream& os) {
  loop_detail::require_shape(loop);
  auto emit_row = [&](const std::vector<int>& idx, int flat) {
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
    const std::size_t stride = static_cast<std::size_t>(loop.rank) * loop.rank;
    for (std::size_t e = 0; e < stride; ++e) {
      const Cplx z = loop.data[stride * flat + e];
      os << ',' << loop_detail::format_num(z.real()) << ','
         << loop_detail::format_num(z.imag());
    }
    os << '\n';
  };
  if (loop.domain == LoopDomain::circle) {
    os << "circle," << loop.rank << ',' << loop.n_phi << '\n';
    for (int i = 0; i < loop.n_phi; ++i) emit_row({i}, i);
    emit_row({loop.n_phi}, 0);
  } else {
    os << "sphere3," << loop.rank << ',' << loop.n_eta << ',' << loop.n_xi << '\n';
    for (int i = 0; i < loop.n_eta; ++i)
      for (int j = 0; j < loop.n_xi; ++j)
        for (int k = 0; k < loop.n_xi; ++k)
          emit_row({i, j, k}, loop.flat_index(i, j, k));
  }
}

inline void write_loop_csv(const LoopMap& loop, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("loop csv: cannot write " + path);
  write_loop_csv(loop, os);
}

inline LoopMap read_loop_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("loop csv: empty file");
  const auto head = loop_detail::split_csv(line);
  LoopMap loop;
  if (head.size() == 3 && head[0] == "circle") {
    loop.domain = LoopDomain::circle;
    loop.rank = static_cast<int>(loop_detail::parse_num(head[1]));
    loop.n_phi = static_cast<int>(loop_detail::parse_num(head[2]));
  } else if (head.size() == 4 && head[0] == "sphere3") {
    loop.domain = LoopDomain::sphere3;
    loop.rank = static_cast<int>(loop_detail::parse_num(head[1]));
    loop.n_eta = static_cast<int>(loop_detail::parse_num(head[2]));
    loop.n_xi = static_cast<int>(loop_detail::parse_num(head[3]));
  } else {
    throw std::runtime_error("loop csv: bad header '" + line + "'");
  }
  if (loop.rank < 1 || loop.node_count() < 1) {
    throw std::runtime_error("loop csv: bad grid shape");
  }
  const int index_cols = loop.domain == LoopDomain::circle ? 1 : 3;
  const std::size_t stride = static_cast<std::size_t>(loop.rank) * loop.rank;
  const int rows =
      loop.node_count() + (loop.domain == LoopDomain::circle ? 1 : 0);
  loop.data.assign(stride * loop.node_count(), Cplx(0.0, 0.0));
  std::vector<Cplx> closing(stride);
  for (int row = 0; row < rows; ++row) {
    if (!std::getline(is, line)) {
      throw std::runtime_error("loop csv: truncated at row " + std::to_string(row));
    }
    const auto cols = loop_detail::split_csv(line);
    if (cols.size() != static_cast<std::size_t>(index_cols) + 2 * stride) {
      throw std::runtime_error("loop csv: row " + std::to_string(row) + " has " +
                               std::to_string(cols.size()) + " columns");
    }
    const bool is_closing =
        loop.domain == LoopDomain::circle && row == loop.node_count();
    for (std::size_t e = 0; e < stride; ++e) {
      const double re = loop_detail::parse_num(cols[index_cols + 2 * e]);
      const double im = loop_detail::parse_num(cols[index_cols + 2 * e + 1]);
      if (is_closing) {
        closing[e] = Cplx(re, im);
      } else {
        loop.data[stride * row + e] = Cplx(re, im);
      }
    }
  }
  if (loop.domain == LoopDomain::circle) {
    for (std::size_t e = 0; e < stride; ++e) {
      if (std::abs(closing[e] - loop.data[e]) > 1e-9) {
        throw std::domain_error("loop grid is not closed");
      }
    }
  }
  return loop;
}

inline LoopMap read_loop_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("loop csv: cannot read " + path);
  return read_loop_csv(is);
}

}  // namespace rigel
