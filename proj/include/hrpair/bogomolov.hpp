#pragma once

// Sheaf-side numerics: slopes, discriminants, Bogomolov values, the
// extension identity, and pointwise curvature-trace positivity (plain and
// Higgs).
//
// Curvature conventions: F is the curvature matrix in a unitary frame, an
// anti-selfadjoint matrix of (1,1)-forms. Chern forms are
//   c1 = (i/2pi) tr F,   c2 = -(1/8pi^2) [(tr F)^2 - tr F^2],
// so that 2r c2 - (r-1) c1^2 = (r/4pi^2) tr(F0^2) with F0 = F - (tr F / r) I.
// The exact backend works with the 2pi-free forms c_k (2pi)^k.

#include "hrpair/form.hpp"
#include "hrpair/hrcheck.hpp"
#include "hrpair/ring.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace hrpair {

// ---------------------------------------------------------------------------
// Numerical sheaf data

template <class T>
struct SheafClassData {
  int rank = 1;
  RingElement<T> c1;
  RingElement<T> c2;

  SheafClassData(int r, RingElement<T> first, RingElement<T> second)
      : rank(r), c1(std::move(first)), c2(std::move(second)) {
    if (rank < 1) throw DomainError("sheaf data needs rank >= 1");
    if (c1.degree() != 1 || c2.degree() != 2) throw DomainError("sheaf data: c1 must have degree 1 and c2 degree 2");
    if (&c1.model() != &c2.model()) throw DomainError("sheaf data: c1 and c2 live in different rings");
  }
};

/// mu(E) = integral(c1 eta) / rank.
template <class T>
T slope(const SheafClassData<T>& e, const RingElement<T>& eta) {
  return (e.c1 * eta).integrate() / T(e.rank);
}

/// Delta(E) = 2r c2 - (r-1) c1^2.
template <class T>
RingElement<T> discriminant(const SheafClassData<T>& e) {
  return e.c2 * T(2 * e.rank) - (e.c1 * e.c1) * T(e.rank - 1);
}

/// integral(Delta(E) eta_{d-2}).
template <class T>
T bogomolovValue(const SheafClassData<T>& e, const RingElement<T>& eta) {
  return (discriminant(e) * eta).integrate();
}

/// Numerical data of an extension 0 -> F -> E -> G -> 0.
template <class T>
SheafClassData<T> extensionData(const SheafClassData<T>& f, const SheafClassData<T>& g) {
  return {f.rank + g.rank, f.c1 + g.c1, f.c2 + g.c2 + f.c1 * g.c1};
}

/// SheafClassData twisted by a line class x.
template <class T>
SheafClassData<T> twistByLine(const SheafClassData<T>& e, const RingElement<T>& x) {
  const int r = e.rank;
  return {r, e.c1 + x * T(r), e.c2 + e.c1 * x * T(r - 1) + x * x * T(r * (r - 1) / 2)};
}

template <class T>
struct ExtensionIdentity {
  RingElement<T> xi;        // c1(F)/rk F - c1(G)/rk G
  RingElement<T> lhs;       // -(rk F rk G / rk E) xi^2
  RingElement<T> rhs;       // Delta(E)/rk E - Delta(F)/rk F - Delta(G)/rk G
  RingElement<T> residual;  // lhs - rhs
};

template <class T>
ExtensionIdentity<T> extensionIdentity(const SheafClassData<T>& f, const SheafClassData<T>& g) {
  if (&f.c1.model() != &g.c1.model()) throw DomainError("extensionIdentity: data in different rings");
  SheafClassData<T> e = extensionData(f, g);
  const T rf(f.rank), rg(g.rank), re(e.rank);
  RingElement<T> xi = f.c1 * (T(1) / rf) - g.c1 * (T(1) / rg);
  RingElement<T> lhs = (xi * xi) * (-(rf * rg) / re);
  RingElement<T> rhs = discriminant(e) * (T(1) / re) - discriminant(f) * (T(1) / rf) - discriminant(g) * (T(1) / rg);
  return {xi, lhs, rhs, lhs - rhs};
}

// ---------------------------------------------------------------------------
// Curvature matrices

template <class T>
class CurvatureMatrix {
 public:
  CurvatureMatrix(int r, int dim) : r_(r), dim_(dim), entries_(r * r, Form<T>::zero(dim, 1, 1)) {
    if (r < 1) throw DomainError("curvature matrix needs size >= 1");
  }

  int size() const { return r_; }
  int dim() const { return dim_; }
  Form<T>& at(int i, int j) { return entries_[i * r_ + j]; }
  const Form<T>& at(int i, int j) const { return entries_[i * r_ + j]; }

  void set(int i, int j, const Form<T>& f) {
    if (f.dim() != dim_ || f.p() != 1 || f.q() != 1) throw DomainError("curvature entries must be (1,1)-forms");
    at(i, j) = f;
  }

  /// Entrywise adjoint: (F*)_{ij} = conj(F_{ji}).
  CurvatureMatrix adjoint() const {
    CurvatureMatrix a(r_, dim_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < r_; ++j) a.at(i, j) = at(j, i).conj();
    return a;
  }

  Form<T> trace() const {
    Form<T> t = Form<T>::zero(dim_, 1, 1);
    for (int i = 0; i < r_; ++i) t = t + at(i, i);
    return t;
  }

  double maxAbsCoefficient() const {
    double m = 0;
    for (const auto& f : entries_) m = std::max(m, f.maxAbsCoefficient());
    return m;
  }

  bool isAntiSelfadjoint(double tol = kDefaultTolerance) const {
    return (*this + adjoint()).isApproxZero(tol, std::max(1.0, maxAbsCoefficient()));
  }
  bool isTraceFree(double tol = kDefaultTolerance) const {
    return trace().approxZero(tol, std::max(1.0, maxAbsCoefficient()));
  }
  bool isApproxZero(double tol = kDefaultTolerance, double scale = 1.0) const {
    for (const auto& f : entries_)
      if (!f.approxZero(tol, scale)) return false;
    return true;
  }

  /// F - (tr F / r) I
  CurvatureMatrix traceFreePart() const {
    CurvatureMatrix out = *this;
    Form<T> t = trace() * Complex<T>(T(1) / T(r_));
    for (int i = 0; i < r_; ++i) out.at(i, i) = out.at(i, i) - t;
    return out;
  }

  friend CurvatureMatrix operator+(CurvatureMatrix a, const CurvatureMatrix& b) {
    a.checkShape(b);
    for (std::size_t k = 0; k < a.entries_.size(); ++k) a.entries_[k] = a.entries_[k] + b.entries_[k];
    return a;
  }
  friend CurvatureMatrix operator-(CurvatureMatrix a, const CurvatureMatrix& b) {
    a.checkShape(b);
    for (std::size_t k = 0; k < a.entries_.size(); ++k) a.entries_[k] = a.entries_[k] - b.entries_[k];
    return a;
  }
  friend CurvatureMatrix operator*(CurvatureMatrix a, const Complex<T>& s) {
    for (auto& f : a.entries_) f = f * s;
    return a;
  }
  friend bool operator==(const CurvatureMatrix& a, const CurvatureMatrix& b) {
    return a.r_ == b.r_ && a.dim_ == b.dim_ && a.entries_ == b.entries_;
  }

  template <class U>
  CurvatureMatrix<U> cast() const {
    CurvatureMatrix<U> out(r_, dim_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < r_; ++j) out.at(i, j) = at(i, j).template cast<U>();
    return out;
  }

 private:
  void checkShape(const CurvatureMatrix& b) const {
    if (r_ != b.r_ || dim_ != b.dim_) throw DomainError("curvature matrices of different shapes");
  }

  int r_;
  int dim_;
  std::vector<Form<T>> entries_;
};

/// 2pi-free Chern forms of a curvature matrix: (2pi) c1 and (2pi)^2 c2.
template <class T>
struct ChernForms {
  Form<T> c1;
  Form<T> c2;
};

template <class T>
ChernForms<T> chernForms(const CurvatureMatrix<T>& f) {
  Form<T> tr = f.trace();
  Form<T> trSq = Form<T>::zero(f.dim(), 2, 2);
  for (int i = 0; i < f.size(); ++i)
    for (int j = 0; j < f.size(); ++j) trSq = trSq + f.at(i, j) * f.at(j, i);
  return {tr * Complex<T>::I(), (tr * tr - trSq) * Complex<T>(T(-1) / T(2))};
}

/// 2pi-free discriminant form (2pi)^2 (2r c2 - (r-1) c1^2) computed from Chern forms.
template <class T>
Form<T> discriminantForm(const CurvatureMatrix<T>& f) {
  auto c = chernForms(f);
  const int r = f.size();
  return c.c2 * Complex<T>(T(2 * r)) - (c.c1 * c.c1) * Complex<T>(T(r - 1));
}

/// r tr(F0^2), equal to discriminantForm(F).
template <class T>
Form<T> traceFreeSquareForm(const CurvatureMatrix<T>& f) {
  CurvatureMatrix<T> f0 = f.traceFreePart();
  Form<T> s = Form<T>::zero(f.dim(), 2, 2);
  for (int i = 0; i < f.size(); ++i)
    for (int j = 0; j < f.size(); ++j) s = s + f0.at(i, j) * f0.at(j, i);
  return s * Complex<T>(T(f.size()));
}

namespace detail {

/// Coefficients w_{jk} of the functional alpha -> integral(alpha Omega) on
/// the monomials dz_j dzbar_k.
template <class T>
std::vector<Complex<T>> constraintFunctional(const Form<T>& omega, int dim) {
  std::vector<Complex<T>> w(dim * dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k)
      w[j * dim + k] = (Form<T>::monomial(dim, IndexMask(1) << j, IndexMask(1) << k, Complex<T>(T(1))) * omega)
                           .integrateTopComplex();
  return w;
}

template <class T>
Complex<T> applyFunctional(const std::vector<Complex<T>>& w, const Form<T>& a, int dim) {
  Complex<T> s;
  for (const auto& [key, c] : a.terms()) {
    const int j = std::countr_zero(key.first), k = std::countr_zero(key.second);
    s += w[j * dim + k] * c;
  }
  return s;
}

}  // namespace detail

/// Admissible curvature from arbitrary input: each entry is projected
/// orthogonally onto {alpha : alpha ^ Omega_{d-1} = 0}, then the matrix is
/// made anti-selfadjoint and trace-free.
template <class T>
CurvatureMatrix<T> constraintProject(const CurvatureMatrix<T>& raw, const Form<T>& omega1) {
  const int d = raw.dim();
  if (omega1.dim() != d || omega1.p() != d - 1 || omega1.q() != d - 1)
    throw DomainError("constraintProject: Omega must be a (d-1,d-1)-form");
  auto w = detail::constraintFunctional(omega1, d);
  T norm2(0);
  for (const auto& c : w) norm2 += c.norm();
  if (norm2 == T(0)) throw DomainError("constraintProject: Omega_{d-1} is zero");
  Form<T> dual = Form<T>::zero(d, 1, 1);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) dual.add(IndexMask(1) << j, IndexMask(1) << k, w[j * d + k].conj());
  CurvatureMatrix<T> out(raw.size(), d);
  for (int i = 0; i < raw.size(); ++i)
    for (int j = 0; j < raw.size(); ++j) {
      const Form<T>& a = raw.at(i, j);
      Complex<T> l = detail::applyFunctional(w, a, d);
      out.at(i, j) = a - dual * (l / Complex<T>(norm2));
    }
  out = (out - out.adjoint()) * Complex<T>(T(1) / T(2));
  return out.traceFreePart();
}

/// Largest |integral(F_ij Omega_{d-1})| relative to the entry size.
template <class T>
double constraintResidual(const CurvatureMatrix<T>& f, const Form<T>& omega1) {
  auto w = detail::constraintFunctional(omega1, f.dim());
  double wn = 0;
  for (const auto& c : w) wn = std::max(wn, c.absApprox());
  double worst = 0;
  for (int i = 0; i < f.size(); ++i)
    for (int j = 0; j < f.size(); ++j) {
      const double size = std::max(f.at(i, j).maxAbsCoefficient(), 1.0) * std::max(wn, 1.0);
      worst = std::max(worst, detail::applyFunctional(w, f.at(i, j), f.dim()).absApprox() / size);
    }
  return worst;
}

template <class T>
struct TraceReport {
  int rank = 0;
  /// terms[i][j] = integral(F0_ij ^ F0_ji ^ Omega_{d-2}).
  std::vector<std::vector<T>> terms;
  T total{};
  double scale = 1.0;
  double tolerance = kDefaultTolerance;
  double minTerm = 0;
  bool allNonnegative = true;
  /// F0 vanishes: the projectively flat equality case.
  bool projectivelyFlat = false;
  double constraintResidual = 0;
  std::optional<Verdict> pairVerdict;

  /// (r / 4 pi^2) total: the pointwise Bogomolov density.
  double normalizedTotal() const { return rank * toDouble(total) / (4 * std::numbers::pi * std::numbers::pi); }
  bool passed() const { return allNonnegative; }

  nlohmann::json toJson() const {
    nlohmann::json j;
    j["rank"] = rank;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : terms) {
      nlohmann::json jr = nlohmann::json::array();
      for (const T& x : row) jr.push_back(formatScalar(x));
      rows.push_back(jr);
    }
    j["terms"] = rows;
    j["total"] = formatScalar(total);
    j["normalized_total"] = normalizedTotal();
    j["scale"] = scale;
    j["tolerance"] = tolerance;
    j["min_term"] = minTerm;
    j["all_nonnegative"] = allNonnegative;
    j["projectively_flat"] = projectivelyFlat;
    j["constraint_residual"] = constraintResidual;
    if (pairVerdict) j["hr_pair"] = pairVerdict->toJson();
    return j;
  }
};

/// Pointwise trace positivity: with F0 anti-selfadjoint, trace-free and
/// F0_ij ^ Omega_{d-1} = 0, every term integral(F0_ij F0_ji Omega_{d-2}) is
/// nonnegative when (Omega_{d-1}, Omega_{d-2}) is a pointwise HR pair.
/// The pair is checked against `omega` (the standard form by default).
template <class T>
TraceReport<T> traceCheck(const CurvatureMatrix<T>& f0, const Form<T>& omega1, const Form<T>& omega2,
                          double tol = kDefaultTolerance, std::optional<Form<T>> omega = std::nullopt,
                          bool checkPair = true) {
  const int d = f0.dim(), r = f0.size();
  if (omega2.dim() != d || omega2.p() != d - 2 || omega2.q() != d - 2)
    throw DomainError("traceCheck: Omega_{d-2} must be a (d-2,d-2)-form");
  if (!f0.isAntiSelfadjoint(tol)) throw DomainError("traceCheck: F0 is not anti-selfadjoint");
  if (!f0.isTraceFree(tol)) throw DomainError("traceCheck: F0 is not trace-free");
  TraceReport<T> rep;
  rep.rank = r;
  rep.tolerance = tol;
  rep.constraintResidual = constraintResidual(f0, omega1);
  if (rep.constraintResidual > tol)
    throw DomainError("traceCheck: constraint F0 ^ Omega_{d-1} = 0 violated (relative residual " +
                      formatScalar(rep.constraintResidual) + ")");
  if (checkPair) rep.pairVerdict = pointwiseHRPair(omega1, omega2, omega.value_or(standardKahler<T>(d)), tol);

  const double fs = f0.maxAbsCoefficient();
  rep.scale = std::max(1.0, fs * fs * omega2.maxAbsCoefficient() * d * d);
  rep.terms.assign(r, std::vector<T>(r, T(0)));
  rep.total = T(0);
  rep.minTerm = std::numeric_limits<double>::infinity();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Complex<T> v = (f0.at(i, j) * f0.at(j, i) * omega2).integrateTopComplex();
      if (!nearZero(v.im, tol, rep.scale)) throw DomainError("traceCheck: non-real term; F0 is not anti-selfadjoint");
      rep.terms[i][j] = v.re;
      rep.total += v.re;
      rep.minTerm = std::min(rep.minTerm, toDouble(v.re));
      if (signOf(v.re, tol, rep.scale) < 0) rep.allNonnegative = false;
    }
  if (signOf(rep.total, tol, rep.scale) < 0) rep.allNonnegative = false;
  rep.projectivelyFlat = f0.isApproxZero(tol, 1.0);
  return rep;
}

// ---------------------------------------------------------------------------
// Higgs fields

template <class T>
class HiggsField {
 public:
  /// Zero field; use set() then validate().
  HiggsField(int r, int dim) : r_(r), dim_(dim), entries_(r * r, Form<T>::zero(dim, 1, 0)) {}

  int size() const { return r_; }
  int dim() const { return dim_; }
  const Form<T>& at(int i, int j) const { return entries_[i * r_ + j]; }
  void set(int i, int j, const Form<T>& f) {
    if (f.dim() != dim_ || f.p() != 1 || f.q() != 0) throw DomainError("Higgs entries must be (1,0)-forms");
    entries_[i * r_ + j] = f;
  }

  /// Entrywise sum_k theta_ik ^ theta_kj.
  std::vector<Form<T>> wedgeSquare() const {
    std::vector<Form<T>> out(r_ * r_, Form<T>::zero(dim_, 2, 0));
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < r_; ++j)
        for (int k = 0; k < r_; ++k) out[i * r_ + j] = out[i * r_ + j] + at(i, k) * at(k, j);
    return out;
  }

  double maxAbsCoefficient() const {
    double m = 0;
    for (const auto& f : entries_) m = std::max(m, f.maxAbsCoefficient());
    return m;
  }

  bool isIntegrable(double tol = kDefaultTolerance) const {
    const double s = std::max(1.0, maxAbsCoefficient() * maxAbsCoefficient());
    for (const auto& f : wedgeSquare())
      if (!f.approxZero(tol, s)) return false;
    return true;
  }

 private:
  int r_;
  int dim_;
  std::vector<Form<T>> entries_;
};

/// [theta, theta*] = theta ^ theta* + theta* ^ theta, theta* the entrywise
/// adjoint. Anti-selfadjoint matrix of (1,1)-forms.
template <class T>
CurvatureMatrix<T> higgsCurvatureTerm(const HiggsField<T>& theta, double tol = kDefaultTolerance) {
  if (!theta.isIntegrable(tol)) throw DomainError("higgsCurvatureTerm: theta ^ theta != 0");
  const int r = theta.size(), d = theta.dim();
  std::vector<Form<T>> adj(r * r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) adj[i * r + j] = theta.at(j, i).conj();
  CurvatureMatrix<T> out(r, d);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Form<T> s = Form<T>::zero(d, 1, 1);
      for (int k = 0; k < r; ++k) s = s + theta.at(i, k) * adj[k * r + j] + adj[i * r + k] * theta.at(k, j);
      out.at(i, j) = s;
    }
  return out;
}

/// Trace check of the trace-free Hitchin-Simpson curvature: the raw metric
/// curvature plus [theta, theta*] is projected onto admissible data.
template <class T>
TraceReport<T> higgsTraceCheck(const CurvatureMatrix<T>& rawCurvature, const HiggsField<T>& theta,
                               const Form<T>& omega1, const Form<T>& omega2, double tol = kDefaultTolerance,
                               bool checkPair = true) {
  auto combined = constraintProject(rawCurvature + higgsCurvatureTerm(theta, tol), omega1);
  return traceCheck<T>(combined, omega1, omega2, tol, std::nullopt, checkPair);
}

// ---------------------------------------------------------------------------
// Random generators (double backend)

inline Form<double> randomComplex11(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Form<double> f(d, 1, 1);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) f.add(IndexMask(1) << j, IndexMask(1) << k, Complex<double>(g(rng), g(rng)));
  return f;
}

inline CurvatureMatrix<double> randomCurvature(std::mt19937_64& rng, int r, int d) {
  CurvatureMatrix<double> f(r, d);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) f.at(i, j) = randomComplex11(rng, d);
  return f;
}

/// theta = sum_m N_m (x) phi_m with N_a N_b = 0 for all a, b: the N_m map a
/// random complement onto a random subspace inside a common kernel.
inline HiggsField<double> randomNilpotentHiggs(std::mt19937_64& rng, int r, int d, int terms = 2) {
  if (r < 2) return HiggsField<double>(r, d);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> split(1, r - 1);
  const int k = split(rng);  // image dimension
  Eigen::MatrixXcd p(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) p(i, j) = {g(rng), g(rng)};
  p += 2.0 * r * Eigen::MatrixXcd::Identity(r, r);
  const Eigen::MatrixXcd pinv = p.inverse();
  HiggsField<double> theta(r, d);
  std::vector<Form<double>> entries(r * r, Form<double>::zero(d, 1, 0));
  for (int m = 0; m < terms; ++m) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(r, r);
    for (int i = 0; i < k; ++i)
      for (int j = k; j < r; ++j) e(i, j) = {g(rng), g(rng)};
    const Eigen::MatrixXcd n = p * e * pinv;
    Form<double> phi(d, 1, 0);
    for (int j = 0; j < d; ++j) phi.add(IndexMask(1) << j, 0, Complex<double>(g(rng), g(rng)));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        entries[i * r + j] = entries[i * r + j] + phi * Complex<double>(n(i, j).real(), n(i, j).imag());
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) theta.set(i, j, entries[i * r + j]);
  return theta;
}

}  // namespace hrpair
