#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "rigel/ring.hpp"

namespace rigel {

// Dense polynomial truncated at a fixed cap (number of stored powers),
// used for Taylor jets in one nilpotent or small variable.
template <class T>
class Poly {
 public:
  explicit Poly(int cap) : c_(std::max(cap, 0), RingTraits<T>::zero()) {}

  int cap() const { return (int)c_.size(); }
  const T& operator[](int i) const { return c_[i]; }
  T& operator[](int i) { return c_[i]; }

  static Poly constant(int cap, const T& v) {
    Poly p(cap);
    if (cap > 0) p.c_[0] = v;
    return p;
  }
  static Poly variable(int cap) {
    Poly p(cap);
    if (cap > 1) p.c_[1] = RingTraits<T>::one();
    return p;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r(std::min(a.cap(), b.cap()));
    for (int i = 0; i < r.cap(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly r(std::min(a.cap(), b.cap()));
    for (int i = 0; i < r.cap(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r(std::min(a.cap(), b.cap()));
    for (int i = 0; i < std::min(a.cap(), r.cap()); ++i) {
      if (RingTraits<T>::is_zero(a.c_[i])) continue;
      for (int j = 0; i + j < r.cap() && j < b.cap(); ++j)
        r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
    }
    return r;
  }

  Poly scaled(const T& s) const {
    Poly r(cap());
    for (int i = 0; i < cap(); ++i) r.c_[i] = c_[i] * s;
    return r;
  }

  // Multiplicative inverse; requires an invertible constant term.
  Poly inverse() const {
    if (cap() == 0) throw std::domain_error("inverse of empty polynomial");
    Poly r(cap());
    T i0 = RingTraits<T>::inv(c_[0]);
    r.c_[0] = i0;
    for (int k = 1; k < cap(); ++k) {
      T s = RingTraits<T>::zero();
      for (int i = 1; i <= k; ++i) s = s + c_[i] * r.c_[k - i];
      r.c_[k] = RingTraits<T>::zero() - i0 * s;
    }
    return r;
  }

 private:
  std::vector<T> c_;
};

}  // namespace rigel
