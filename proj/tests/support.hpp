#pragma once

// Test-only helpers: a plain multivariate polynomial type used as an
// independent oracle algebra, and seeded random generators.

#include "hrpair/scalar.hpp"

#include <map>
#include <random>
#include <vector>

namespace hrpair::testing {

/// Commutative polynomials in n variables with rational coefficients.
struct MPoly {
  int n = 0;
  std::map<std::vector<int>, Rational> terms;

  MPoly() = default;
  explicit MPoly(int vars) : n(vars) {}
  static MPoly constant(int vars, const Rational& c) {
    MPoly p(vars);
    if (c != 0) p.terms[std::vector<int>(vars, 0)] = c;
    return p;
  }
  static MPoly var(int vars, int i) {
    MPoly p(vars);
    std::vector<int> m(vars, 0);
    m[i] = 1;
    p.terms[m] = 1;
    return p;
  }
  void add(const std::vector<int>& m, const Rational& c) {
    if (c == 0) return;
    auto& slot = terms[m];
    slot += c;
    if (slot == 0) terms.erase(m);
  }
  friend MPoly operator+(MPoly a, const MPoly& b) {
    for (const auto& [m, c] : b.terms) a.add(m, c);
    return a;
  }
  friend MPoly operator-(MPoly a, const MPoly& b) {
    for (const auto& [m, c] : b.terms) a.add(m, -c);
    return a;
  }
  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r(a.n);
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) {
        std::vector<int> m(a.n);
        for (int i = 0; i < a.n; ++i) m[i] = ma[i] + mb[i];
        r.add(m, ca * cb);
      }
    return r;
  }
  friend MPoly operator*(const MPoly& a, const Rational& s) {
    MPoly r(a.n);
    for (const auto& [m, c] : a.terms) r.add(m, c * s);
    return r;
  }
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.terms == b.terms; }

  /// Drop all monomials of total degree above maxDegree.
  MPoly truncated(int maxDegree) const {
    MPoly r(n);
    for (const auto& [m, c] : terms) {
      int deg = 0;
      for (int x : m) deg += x;
      if (deg <= maxDegree) r.terms[m] = c;
    }
    return r;
  }
};

inline Rational randomRational(std::mt19937_64& rng, int maxNum = 9, int maxDen = 5) {
  std::uniform_int_distribution<int> num(-maxNum, maxNum), den(1, maxDen);
  return Rational(num(rng)) / Rational(den(rng));
}

}  // namespace hrpair::testing
