#pragma once

// Total Chern classes over an arbitrary commutative algebra E: real twists
// A<th> and inversion of the total class.

#include "hrpair/scalar.hpp"

#include <algorithm>
#include <vector>

namespace hrpair {

/// c_0 = 1, c_1, ..., c_e of a rank-e (possibly formal) bundle.
template <class E>
struct ChernVector {
  int rank = 0;
  std::vector<E> classes;  // classes[k] = c_k, classes[0] is the unit

  ChernVector(int e, std::vector<E> cs) : rank(e), classes(std::move(cs)) {
    if (static_cast<int>(classes.size()) != e + 1) throw DomainError("ChernVector needs c_0..c_e");
  }

  const E& one() const { return classes.front(); }
  const E& operator[](int k) const { return classes.at(static_cast<std::size_t>(k)); }
};

/// c_p(A<th>) = sum_{k<=p} C(e-k, p-k) c_k(A) (th)^{p-k}, where `th` is the
/// already-scaled degree-one class t*h.
template <class E>
ChernVector<E> twistChernBy(const ChernVector<E>& c, const E& th) {
  const int e = c.rank;
  std::vector<E> powers{c.one()};
  for (int k = 1; k <= e; ++k) powers.push_back(powers.back() * th);
  std::vector<E> out;
  out.reserve(e + 1);
  for (int p = 0; p <= e; ++p) {
    E acc = c[p];
    for (int k = 0; k < p; ++k) acc = acc + (c[k] * powers[p - k]) * Rational(binomial(e - k, p - k));
    out.push_back(std::move(acc));
  }
  return ChernVector<E>(e, std::move(out));
}

template <class E, class S>
ChernVector<E> twistChern(const ChernVector<E>& c, const S& t, const E& h) {
  return twistChernBy(c, h * t);
}

/// s_0 = 1, s_k = -sum_{i=1}^{k} c_i s_{k-i}, so that (sum c_i)(sum s_j) = 1
/// through degree truncDegree.
template <class E>
std::vector<E> invertTotalClass(const ChernVector<E>& c, int truncDegree) {
  if (c.rank < 1) throw DomainError("invertTotalClass needs rank >= 1");
  std::vector<E> s{c.one()};
  for (int k = 1; k <= truncDegree; ++k) {
    E acc = c[1] * s[k - 1];
    for (int i = 2; i <= std::min(k, c.rank); ++i) acc = acc + c[i] * s[k - i];
    s.push_back(acc * Rational(-1));
  }
  return s;
}

/// Segre classes in the complete-homogeneous convention used for ample
/// bundles: s_k = h_k(Chern roots) = (-1)^k [c^{-1}]_k. With this sign,
/// s_1 = c_1 and s_2 = c_1^2 - c_2.
template <class E>
std::vector<E> segreClasses(const ChernVector<E>& c, int truncDegree) {
  auto inv = invertTotalClass(c, truncDegree);
  for (std::size_t k = 1; k < inv.size(); k += 2) inv[k] = inv[k] * Rational(-1);
  return inv;
}

}  // namespace hrpair
