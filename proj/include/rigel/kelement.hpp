#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rigel/rational.hpp"
#include "rigel/ring.hpp"

namespace rigel {

enum class BundleBase : int { v = 0, e = 1, t = 2 };
enum class PowerKind : int { exterior = 0, symmetric = 1, spinor = 2 };

inline char bundle_base_letter(BundleBase b) {
  switch (b) {
    case BundleBase::v: return 'V';
    case BundleBase::e: return 'E';
    default: return 'T';
  }
}

// One tensor factor of a canonical monomial: an exterior or symmetric power
// of a complexified base bundle, or the spinor bundle of one.
struct BundleFactor {
  BundleBase base = BundleBase::v;
  PowerKind kind = PowerKind::exterior;
  int power = 1;

  friend auto operator<=>(const BundleFactor&, const BundleFactor&) = default;

  std::string str() const {
    const char b = bundle_base_letter(base);
    if (kind == PowerKind::spinor) return std::string("D(") + b + ")";
    if (power == 1) return std::string(1, b);
    const char tag = (kind == PowerKind::exterior) ? 'L' : 'S';
    return tag + std::to_string(power) + "(" + b + ")";
  }
};

using BundleMono = std::vector<BundleFactor>;

// Complex ranks of the three base bundles.
struct BundleDims {
  int dim_v = 0;
  int dim_t = 0;
  int dim_e = 0;
};

inline long long bundle_factor_rank(const BundleFactor& f,
                                    const BundleDims& dims) {
  long long n = 0;
  switch (f.base) {
    case BundleBase::v: n = dims.dim_v; break;
    case BundleBase::e: n = dims.dim_e; break;
    case BundleBase::t: n = dims.dim_t; break;
  }
  switch (f.kind) {
    case PowerKind::exterior: {
      if (f.power > n) return 0;
      return Rat::binomial(n, f.power).num();
    }
    case PowerKind::symmetric:
      return Rat::binomial(n + f.power - 1, f.power).num();
    default: {
      if (n % 2 != 0) {
        throw std::domain_error("spinor bundle needs an even rank, got " +
                                std::to_string(n));
      }
      return 1LL << (n / 2);
    }
  }
}

// Formal integer combination of tensor monomials in the canonical factors,
// with the empty monomial standing for the trivial line.
class KElement {
 public:
  KElement() = default;

  static KElement zero() { return {}; }
  static KElement trivial(long long k) {
    KElement r;
    if (k != 0) r.terms_[{}] = k;
    return r;
  }
  static KElement power(PowerKind kind, BundleBase b, int i) {
    if (i < 0) throw std::domain_error("negative bundle power");
    if (kind == PowerKind::spinor && i != 1) {
      throw std::domain_error("spinor factor carries no power");
    }
    if (i == 0) return trivial(1);
    BundleFactor f{b, kind, i};
    if (i == 1 && kind == PowerKind::symmetric) f.kind = PowerKind::exterior;
    KElement r;
    r.terms_[{f}] = 1;
    return r;
  }
  static KElement base(BundleBase b) {
    return power(PowerKind::exterior, b, 1);
  }
  static KElement spinor(BundleBase b) {
    return power(PowerKind::spinor, b, 1);
  }

  const std::map<BundleMono, long long>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  long long coeff(const BundleMono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
  }

  void add_term(const BundleMono& m, long long c) {
    if (c == 0) return;
    auto it = terms_.try_emplace(m, 0).first;
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  friend bool operator==(const KElement& a, const KElement& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const KElement& a, const KElement& b) {
    return !(a == b);
  }

  friend KElement operator+(const KElement& a, const KElement& b) {
    KElement r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend KElement operator-(const KElement& a, const KElement& b) {
    KElement r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
  }
  friend KElement operator*(const KElement& a, const KElement& b) {
    KElement r;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        BundleMono m = ma;
        m.insert(m.end(), mb.begin(), mb.end());
        std::sort(m.begin(), m.end());
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }
  KElement operator-() const {
    KElement r;
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
  }
  KElement& operator+=(const KElement& b) { return *this = *this + b; }
  KElement& operator-=(const KElement& b) { return *this = *this - b; }
  KElement& operator*=(const KElement& b) { return *this = *this * b; }

  KElement scaled(long long s) const {
    KElement r;
    if (s == 0) return r;
    for (const auto& [m, c] : terms_) r.terms_[m] = c * s;
    return r;
  }

  long long rank(const BundleDims& dims) const {
    long long total = 0;
    for (const auto& [m, c] : terms_) {
      long long r = c;
      for (const auto& f : m) r *= bundle_factor_rank(f, dims);
      total += r;
    }
    return total;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      const long long a = c < 0 ? -c : c;
      if (out.empty()) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      std::string mono;
      for (const auto& f : m) {
        if (!mono.empty()) mono += "*";
        mono += f.str();
      }
      if (mono.empty()) {
        out += std::to_string(a);
      } else {
        if (a != 1) out += std::to_string(a) + "*";
        out += mono;
      }
    }
    return out;
  }

 private:
  std::map<BundleMono, long long> terms_;
};

template <>
struct RingTraits<KElement> {
  static KElement zero() { return KElement::zero(); }
  static KElement one() { return KElement::trivial(1); }
  static bool is_zero(const KElement& a) { return a.is_zero(); }
  static KElement inv(const KElement& a) {
    if (a == KElement::trivial(1) || a == KElement::trivial(-1)) return a;
    throw std::domain_error("K-theory element is not invertible: " + a.str());
  }
  static KElement div_int(const KElement& a, long long n) {
    KElement r;
    for (const auto& [m, c] : a.terms()) {
      if (c % n != 0) {
        throw std::domain_error("coefficient " + std::to_string(c) +
                                " is not divisible by " + std::to_string(n));
      }
      r.add_term(m, c / n);
    }
    return r;
  }
};

}  // namespace rigel
