#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rigel/qseries.hpp"
#include "rigel/ring.hpp"

namespace rigel {

struct Generator {
  std::string name;
  int degree = 2;
  bool odd = false;
};

// Shared generator declaration for a truncated graded-commutative algebra.
class GenTable {
 public:
  GenTable(std::vector<Generator> gens, int degree_cap)
      : gens_(std::move(gens)), degree_cap_(degree_cap) {}

  int size() const { return (int)gens_.size(); }
  const Generator& gen(int i) const { return gens_[i]; }
  int degree_cap() const { return degree_cap_; }
  int index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
      if (gens_[i].name == name) return i;
    throw std::invalid_argument("unknown generator: " + name);
  }

 private:
  std::vector<Generator> gens_;
  int degree_cap_;
};

using GenTablePtr = std::shared_ptr<const GenTable>;
using Mono = std::vector<int>;  // sorted generator indices, repeats allowed

// Element of the truncated graded-commutative algebra over a GenTable.
// Monomials are kept sorted; products track the Koszul sign of odd swaps.
template <class S>
class Graded {
 public:
  explicit Graded(GenTablePtr tab) : tab_(std::move(tab)) {}

  static Graded scalar(GenTablePtr tab, const S& v) {
    Graded g(std::move(tab));
    g.add_term({}, v);
    return g;
  }
  static Graded generator(GenTablePtr tab, int idx) {
    Graded g(tab);
    g.add_term({idx}, RingTraits<S>::one());
    return g;
  }
  static Graded generator(GenTablePtr tab, const std::string& name) {
    int idx = tab->index_of(name);
    return generator(std::move(tab), idx);
  }

  const GenTablePtr& table() const { return tab_; }
  const std::map<Mono, S>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  int mono_degree(const Mono& m) const {
    int d = 0;
    for (int i : m) d += tab_->gen(i).degree;
    return d;
  }

  void add_term(const Mono& m, const S& v) {
    if (RingTraits<S>::is_zero(v)) return;
    if (mono_degree(m) > tab_->degree_cap()) return;
    for (size_t i = 0; i + 1 < m.size(); ++i)
      if (m[i] == m[i + 1] && tab_->gen(m[i]).odd) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, v);
    } else {
      it->second = it->second + v;
      if (RingTraits<S>::is_zero(it->second)) terms_.erase(it);
    }
  }

  S coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? RingTraits<S>::zero() : it->second;
  }

  friend Graded operator+(const Graded& a, const Graded& b) {
    a.check_same_table(b);
    Graded r(a.tab_);
    for (const auto& [m, v] : a.terms_) r.add_term(m, v);
    for (const auto& [m, v] : b.terms_) r.add_term(m, v);
    return r;
  }
  friend Graded operator-(const Graded& a, const Graded& b) {
    a.check_same_table(b);
    Graded r(a.tab_);
    for (const auto& [m, v] : a.terms_) r.add_term(m, v);
    for (const auto& [m, v] : b.terms_)
      r.add_term(m, RingTraits<S>::zero() - v);
    return r;
  }
  friend Graded operator*(const Graded& a, const Graded& b) {
    a.check_same_table(b);
    Graded r(a.tab_);
    for (const auto& [ma, va] : a.terms_) {
      for (const auto& [mb, vb] : b.terms_) {
        auto [mono, sign, dead] = a.merge(ma, mb);
        if (dead) continue;
        S v = va * vb;
        if (sign < 0) v = RingTraits<S>::zero() - v;
        r.add_term(mono, v);
      }
    }
    return r;
  }
  Graded operator-() const {
    Graded r(tab_);
    for (const auto& [m, v] : terms_) r.add_term(m, RingTraits<S>::zero() - v);
    return r;
  }
  Graded& operator+=(const Graded& b) { return *this = *this + b; }
  Graded& operator-=(const Graded& b) { return *this = *this - b; }
  Graded& operator*=(const Graded& b) { return *this = *this * b; }

  Graded scaled(const S& s) const {
    Graded r(tab_);
    for (const auto& [m, v] : terms_) r.add_term(m, v * s);
    return r;
  }

  // Exponential of a nilpotent element (zero degree-0 part required).
  Graded exp() const {
    if (terms_.count({}))
      throw std::domain_error("exp of element with nonzero constant part");
    Graded r = scalar(tab_, RingTraits<S>::one());
    Graded p = scalar(tab_, RingTraits<S>::one());
    long long kfac = 1;
    int max_k = tab_->degree_cap() / std::max(min_term_degree(), 1) + 1;
    for (int k = 1; k <= max_k; ++k) {
      p = p * (*this);
      if (p.empty()) break;
      kfac *= k;
      Graded t(tab_);
      for (const auto& [m, v] : p.terms_)
        t.add_term(m, RingTraits<S>::div_int(v, kfac));
      r += t;
    }
    return r;
  }

  // Multiplicative inverse; requires an invertible scalar part, the rest is
  // nilpotent.
  Graded inverse() const {
    S s0 = coeff({});
    if (RingTraits<S>::is_zero(s0))
      throw std::domain_error("inverse of a graded element with zero scalar part");
    S i0 = RingTraits<S>::inv(s0);
    Graded m = scaled(i0) - scalar(tab_, RingTraits<S>::one());
    Graded r = scalar(tab_, RingTraits<S>::one());
    Graded p = r;
    int max_k = tab_->degree_cap() / std::max(m.min_term_degree(), 1) + 1;
    for (int k = 1; k <= max_k; ++k) {
      p = p * m;
      if (p.empty()) break;
      r = (k % 2 == 1) ? r - p : r + p;
    }
    return r.scaled(i0);
  }

  // Sum of terms of the given total degree.
  Graded degree_part(int d) const {
    Graded r(tab_);
    for (const auto& [m, v] : terms_)
      if (mono_degree(m) == d) r.add_term(m, v);
    return r;
  }

 private:
  GenTablePtr tab_;
  std::map<Mono, S> terms_;

  int min_term_degree() const {
    int d = tab_->degree_cap() + 1;
    for (const auto& [m, v] : terms_) {
      (void)v;
      d = std::min(d, mono_degree(m));
    }
    return d;
  }

  void check_same_table(const Graded& b) const {
    if (tab_.get() != b.tab_.get())
      throw std::invalid_argument("mismatched generator tables");
  }

  // Merge two sorted monomials; count odd-odd transpositions for the sign;
  // detect a repeated odd generator.
  std::tuple<Mono, int, bool> merge(const Mono& a, const Mono& b) const {
    Mono m;
    m.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    // odd_left[k] = number of odd generators in a[k..]
    std::vector<int> odd_left(a.size() + 1, 0);
    for (int k = (int)a.size() - 1; k >= 0; --k)
      odd_left[k] = odd_left[k + 1] + (tab_->gen(a[k]).odd ? 1 : 0);
    long long swaps = 0;
    while (i < a.size() || j < b.size()) {
      bool take_b = (i == a.size()) ||
                    (j < b.size() && b[j] < a[i]);
      if (take_b) {
        if (tab_->gen(b[j]).odd) swaps += odd_left[i];
        m.push_back(b[j]);
        ++j;
      } else {
        m.push_back(a[i]);
        ++i;
      }
    }
    for (size_t k = 0; k + 1 < m.size(); ++k)
      if (m[k] == m[k + 1] && tab_->gen(m[k]).odd) return {m, 1, true};
    return {m, (swaps % 2 == 0) ? 1 : -1, false};
  }
};

template <class S>
struct RingTraits<Graded<S>> {
  static Graded<S> zero() {
    throw std::domain_error("graded zero requires a generator table");
  }
  static Graded<S> one() {
    throw std::domain_error("graded one requires a generator table");
  }
  static bool is_zero(const Graded<S>& x) { return x.empty(); }
  static Graded<S> inv(const Graded<S>& x) { return x.inverse(); }
  static Graded<S> div_int(const Graded<S>& x, long long k) {
    Graded<S> r(x.table());
    for (const auto& [m, v] : x.terms())
      r.add_term(m, RingTraits<S>::div_int(v, k));
    return r;
  }
};

using GradedC = Graded<QSeriesC>;

}  // namespace rigel
