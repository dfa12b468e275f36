#pragma once

// Symmetric polynomials in e variables, stored in the elementary-symmetric
// basis e_1..e_e with exact rational coefficients.

#include "hrpair/partition.hpp"
#include "hrpair/scalar.hpp"
#include "hrpair/upoly.hpp"

#include <concepts>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hrpair {

/// Exponent vector (a_1, ..., a_e) standing for e_1^{a_1} ... e_e^{a_e}.
using EMonomial = std::vector<int>;

class SymPoly {
 public:
  explicit SymPoly(int numVars = 0) : numVars_(numVars) {
    if (numVars < 0) throw DomainError("negative variable count");
  }

  static SymPoly constant(int numVars, const Rational& c) {
    SymPoly p(numVars);
    p.addTerm(EMonomial(numVars, 0), c);
    return p;
  }
  static SymPoly one(int numVars) { return constant(numVars, 1); }

  /// e_k; e_0 = 1 and e_k = 0 for k < 0 or k > numVars.
  static SymPoly elementary(int numVars, int k) {
    if (k == 0) return one(numVars);
    SymPoly p(numVars);
    if (k < 0 || k > numVars) return p;
    EMonomial m(numVars, 0);
    m[k - 1] = 1;
    p.addTerm(m, 1);
    return p;
  }

  int numVars() const { return numVars_; }
  const std::map<EMonomial, Rational>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }

  static int monomialWeight(const EMonomial& m) {
    int w = 0;
    for (std::size_t k = 0; k < m.size(); ++k) w += static_cast<int>(k + 1) * m[k];
    return w;
  }

  /// Weight of the (homogeneous) polynomial; 0 for the zero polynomial.
  int weight() const { return terms_.empty() ? 0 : monomialWeight(terms_.begin()->first); }

  bool isHomogeneous() const {
    if (terms_.empty()) return true;
    int w = weight();
    for (const auto& [m, c] : terms_)
      if (monomialWeight(m) != w) return false;
    return true;
  }

  /// Constant term (coefficient of the empty monomial).
  Rational constantTerm() const {
    auto it = terms_.find(EMonomial(numVars_, 0));
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void addTerm(const EMonomial& m, const Rational& c) {
    if (static_cast<int>(m.size()) != numVars_) throw DomainError("monomial length mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  SymPoly& operator+=(const SymPoly& o) {
    checkCompatible(o);
    for (const auto& [m, c] : o.terms_) addTerm(m, c);
    return *this;
  }
  SymPoly& operator-=(const SymPoly& o) {
    checkCompatible(o);
    for (const auto& [m, c] : o.terms_) addTerm(m, -c);
    return *this;
  }
  SymPoly operator-() const {
    SymPoly r(numVars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  SymPoly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
  friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
  friend SymPoly operator*(SymPoly a, const Rational& s) { return a *= s; }
  friend SymPoly operator*(const Rational& s, SymPoly a) { return a *= s; }

  friend SymPoly operator*(const SymPoly& a, const SymPoly& b) {
    a.checkCompatible(b);
    SymPoly r(a.numVars_);
    EMonomial m(a.numVars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        for (int k = 0; k < a.numVars_; ++k) m[k] = ma[k] + mb[k];
        r.addTerm(m, ca * cb);
      }
    return r;
  }

  friend bool operator==(const SymPoly& a, const SymPoly& b) {
    return a.numVars_ == b.numVars_ && a.terms_ == b.terms_;
  }

  /// Canonical text: monomials in decreasing lexicographic order of their
  /// exponent vectors, e.g. "e1^2 - e2", "3*e1*e2", "0".
  std::string toString() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      Rational mag = c < 0 ? Rational(-c) : c;
      std::string mono;
      for (int k = 0; k < numVars_; ++k) {
        if (m[k] == 0) continue;
        if (!mono.empty()) mono += '*';
        mono += "e" + std::to_string(k + 1);
        if (m[k] > 1) mono += "^" + std::to_string(m[k]);
      }
      std::string term;
      if (mono.empty())
        term = formatScalar(mag);
      else if (mag == 1)
        term = mono;
      else
        term = formatScalar(mag) + "*" + mono;
      if (first)
        out = (c < 0 ? "-" : "") + term;
      else
        out += (c < 0 ? " - " : " + ") + term;
      first = false;
    }
    return out;
  }

 private:
  void checkCompatible(const SymPoly& o) const {
    if (o.numVars_ != numVars_) throw DomainError("symmetric polynomials in different variable counts");
  }

  int numVars_;
  std::map<EMonomial, Rational> terms_;
};

using TPoly = UPoly<SymPoly>;

// ---------------------------------------------------------------------------
// Construction

namespace detail {

template <class R>
R determinant(std::vector<std::vector<R>> m, const R& zero, const R& one) {
  const std::size_t n = m.size();
  if (n == 0) return one;
  if (n == 1) return m[0][0];
  R acc = zero;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<R>> minor;
    minor.reserve(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<R> row;
      row.reserve(n - 1);
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    R term = m[0][j] * determinant(std::move(minor), zero, one);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace detail

/// Schur polynomial s_lambda in e variables via the dual Jacobi-Trudi
/// determinant det(e_{lambda'_i - i + j}). Zero when length(lambda) > e.
inline SymPoly schur(const Partition& lambda, int e) {
  if (lambda.length() > e) return SymPoly(e);
  Partition conj = lambda.conjugate();
  const int n = conj.length();
  std::vector<std::vector<SymPoly>> m(n, std::vector<SymPoly>(n, SymPoly(e)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = SymPoly::elementary(e, conj[i] - i + j);
  return detail::determinant(std::move(m), SymPoly(e), SymPoly::one(e));
}

/// Complete homogeneous h_k in the e-basis: h_k = sum_{i>=1} (-1)^{i+1} e_i h_{k-i}.
inline SymPoly completeHomogeneous(int k, int e) {
  if (k < 0) return SymPoly(e);
  std::vector<SymPoly> h{SymPoly::one(e)};
  for (int n = 1; n <= k; ++n) {
    SymPoly acc(e);
    for (int i = 1; i <= n; ++i) {
      SymPoly term = SymPoly::elementary(e, i) * h[n - i];
      if (i % 2 == 1)
        acc += term;
      else
        acc -= term;
    }
    h.push_back(std::move(acc));
  }
  return h[k];
}

/// Expansion of p(x_1 + t, ..., x_e + t) as sum_i t^i p^{(i)}, truncated
/// after t^maxOrder. Uses e_k(x + t) = sum_j C(e - j, k - j) e_j t^{k - j}.
inline TPoly shift(const SymPoly& p, int maxOrder) {
  if (!p.isHomogeneous()) throw DomainError("shift requires a homogeneous polynomial");
  const int e = p.numVars();
  const auto order = static_cast<std::size_t>(std::max(maxOrder, 0));
  std::vector<TPoly> shifted(e + 1);
  for (int k = 1; k <= e; ++k) {
    TPoly sk;
    for (int j = 0; j <= k; ++j) sk.set(k - j, SymPoly::elementary(e, j) * Rational(binomial(e - j, k - j)));
    shifted[k] = sk.truncated(order);
  }
  TPoly one(SymPoly::one(e));
  TPoly result;
  for (const auto& [m, c] : p.terms()) {
    TPoly term(SymPoly::constant(e, c));
    for (int k = 1; k <= e; ++k)
      for (int a = 0; a < m[k - 1]; ++a) term = TPoly::multiply(term, shifted[k], order);
    result += term;
  }
  if (!result.hasCoefficient(0)) result.set(0, SymPoly(e));
  return result;
}

/// Derived polynomial p^{(i)}: coefficient of t^i in shift(p).
inline SymPoly derived(const SymPoly& p, int i) {
  if (i < 0 || i > p.weight()) throw DomainError("derived order out of range");
  return shift(p, i).coefficient(static_cast<std::size_t>(i), SymPoly(p.numVars()));
}

// ---------------------------------------------------------------------------
// Evaluation

/// Elementary symmetric combinations e_0 = one, e_1, ..., e_n of `vars`
/// (wedge/ring products in whatever algebra E lives in).
template <class E>
std::vector<E> elementarySymmetric(std::span<const E> vars, const E& one) {
  std::vector<E> e{one};
  for (const E& v : vars) {
    e.push_back(e.back() * v);
    for (std::size_t k = e.size() - 2; k >= 1; --k) e[k] = e[k] + e[k - 1] * v;
  }
  return e;
}

template <class E>
concept Graded = requires(const E& x) {
  { x.degree() } -> std::convertible_to<int>;
};

/// Substitutes args[k-1] for e_k. `one` is the unit of the target algebra.
template <class E>
E evaluate(const SymPoly& p, std::span<const E> args, const E& one) {
  const int e = p.numVars();
  if (static_cast<int>(args.size()) != e) throw DomainError("evaluate: expected one argument per elementary generator");
  if constexpr (Graded<E>) {
    for (int k = 1; k <= e; ++k)
      if (args[k - 1].degree() != k)
        throw DomainError("evaluate: argument for e" + std::to_string(k) + " has degree " +
                          std::to_string(args[k - 1].degree()));
  }
  std::optional<E> acc;
  for (const auto& [m, c] : p.terms()) {
    E term = one;
    for (int k = 1; k <= e; ++k)
      for (int a = 0; a < m[k - 1]; ++a) term = term * args[k - 1];
    term = term * c;
    acc = acc ? *acc + term : term;
  }
  if (!acc) return one * Rational(0);
  return *acc;
}

/// Convenience: p(v_1, ..., v_e) where the v_i are "Chern roots" in E.
template <class E>
E evaluateOnRoots(const SymPoly& p, std::span<const E> roots, const E& one) {
  if (static_cast<int>(roots.size()) != p.numVars()) throw DomainError("evaluateOnRoots: root count mismatch");
  std::vector<E> es = elementarySymmetric(roots, one);
  return evaluate<E>(p, std::span<const E>(es.data() + 1, es.size() - 1), one);
}

/// Numeric value at rational roots x_1..x_e (used by oracles).
inline Rational evaluateAtRoots(const SymPoly& p, std::span<const Rational> xs) {
  std::vector<Rational> es{Rational(1)};
  for (const Rational& x : xs) {
    es.push_back(es.back() * x);
    for (std::size_t k = es.size() - 2; k >= 1; --k) es[k] += es[k - 1] * x;
  }
  Rational acc = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational term = c;
    for (int k = 1; k <= p.numVars(); ++k)
      for (int a = 0; a < m[k - 1]; ++a) term *= es[k];
    acc += term;
  }
  return acc;
}

}  // namespace hrpair
