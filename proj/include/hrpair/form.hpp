#pragma once

// Constant-coefficient complex differential forms on C^d, stored as
// sum c_{I,J} dz_I ^ dzbar_J with I, J strictly increasing index sets.
// Index sets are bitmasks: bit j stands for the coordinate z_{j+1}.
//
// Conventions:
//   conj(dz_I ^ dzbar_J) = (-1)^{|I||J|} dz_J ^ dzbar_I, so a (p,p)-form is
//   real iff c_{J,I} = (-1)^{p^2} conj(c_{I,J});
//   prod_{j in I} (i dz_j ^ dzbar_j) = i^{p^2} dz_I ^ dzbar_I;
//   integrateTop reads the coefficient of vol = prod_j (i dz_j ^ dzbar_j).

#include "hrpair/linalg.hpp"
#include "hrpair/scalar.hpp"
#include "hrpair/verdict.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace hrpair {

using IndexMask = std::uint32_t;

inline int maskSize(IndexMask m) { return std::popcount(m); }

/// Ascending p-subsets of {0..d-1} in lexicographic order of their element lists.
inline std::vector<IndexMask> subsetsOfSize(int d, int p) {
  std::vector<IndexMask> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == p) {
      IndexMask m = 0;
      for (int j : cur) m |= IndexMask(1) << j;
      out.push_back(m);
      return;
    }
    for (int j = start; j < d; ++j) {
      cur.push_back(j);
      self(self, j + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline std::vector<int> maskElements(IndexMask m) {
  std::vector<int> out;
  for (int j = 0; m; ++j, m >>= 1)
    if (m & 1) out.push_back(j);
  return out;
}

/// Number of pairs (a in A, b in B) with a > b.
inline int crossInversions(IndexMask a, IndexMask b) {
  int n = 0;
  for (int j : maskElements(b)) n += std::popcount(a & ~((IndexMask(2) << j) - 1));
  return n;
}

template <class T>
class Form {
 public:
  using Coeff = Complex<T>;
  using Key = std::pair<IndexMask, IndexMask>;

  Form() = default;
  Form(int dim, int p, int q) : dim_(dim), p_(p), q_(q) {
    if (dim < 0 || dim > 31) throw DomainError("form dimension out of range");
    if (p < 0 || q < 0) throw DomainError("negative bidegree");
  }

  static Form zero(int dim, int p, int q) { return Form(dim, p, q); }
  static Form one(int dim) { return constant(dim, Coeff(T(1))); }
  static Form constant(int dim, const Coeff& c) {
    Form f(dim, 0, 0);
    f.add(0, 0, c);
    return f;
  }
  static Form monomial(int dim, IndexMask I, IndexMask J, const Coeff& c) {
    Form f(dim, maskSize(I), maskSize(J));
    f.add(I, J, c);
    return f;
  }
  /// dz_j (0-based j)
  static Form dz(int dim, int j) { return monomial(dim, IndexMask(1) << j, 0, Coeff(T(1))); }
  static Form dzbar(int dim, int j) { return monomial(dim, 0, IndexMask(1) << j, Coeff(T(1))); }
  /// i dz_j ^ dzbar_k (0-based)
  static Form idd(int dim, int j, int k) {
    return monomial(dim, IndexMask(1) << j, IndexMask(1) << k, Coeff::I());
  }
  /// prod_j (i dz_j ^ dzbar_j)
  static Form volume(int dim) {
    IndexMask full = dim == 0 ? 0 : ((IndexMask(1) << dim) - 1);
    return monomial(dim, full, full, iPower<T>(dim * dim));
  }

  int dim() const { return dim_; }
  int p() const { return p_; }
  int q() const { return q_; }
  /// p for a (p,p)-form, -1 otherwise.
  int degree() const { return p_ == q_ ? p_ : -1; }
  const std::map<Key, Coeff>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }

  Coeff coefficient(IndexMask I, IndexMask J) const {
    auto it = terms_.find({I, J});
    return it == terms_.end() ? Coeff() : it->second;
  }

  void add(IndexMask I, IndexMask J, const Coeff& c) {
    if (maskSize(I) != p_ || maskSize(J) != q_) throw DomainError("term bidegree mismatch");
    if (dim_ < 32 && ((I | J) >> dim_) != 0) throw DomainError("index beyond form dimension");
    if (c.isZero()) return;
    auto [it, inserted] = terms_.try_emplace({I, J}, c);
    if (!inserted) {
      it->second += c;
      if (it->second.isZero()) terms_.erase(it);
    }
  }

  Form& operator+=(const Form& o) {
    checkSameShape(o);
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
    return *this;
  }
  Form& operator-=(const Form& o) {
    checkSameShape(o);
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, -c);
    return *this;
  }
  Form operator-() const {
    Form r(dim_, p_, q_);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }

  Form scaled(const Coeff& s) const {
    Form r(dim_, p_, q_);
    if (s.isZero()) return r;
    for (const auto& [k, c] : terms_) r.add(k.first, k.second, c * s);
    return r;
  }
  friend Form operator*(const Form& a, const Coeff& s) { return a.scaled(s); }
  friend Form operator*(const Coeff& s, const Form& a) { return a.scaled(s); }
  friend Form operator*(const Form& a, const T& s) { return a.scaled(Coeff(s)); }
  friend Form operator*(const Form& a, int s) { return a.scaled(Coeff(T(s))); }
  template <class R>
    requires(std::is_same_v<R, Rational> && !std::is_same_v<T, Rational>)
  friend Form operator*(const Form& a, const R& s) {
    return a.scaled(Coeff(toDouble(s)));
  }

  /// Wedge product. Terms of total degree beyond dim vanish.
  friend Form operator*(const Form& a, const Form& b) { return wedge(a, b); }

  static Form wedge(const Form& a, const Form& b) {
    if (a.dim_ != b.dim_) throw DomainError("wedge of forms on different spaces");
    Form r(a.dim_, a.p_ + b.p_, a.q_ + b.q_);
    if (r.p_ > r.dim_ || r.q_ > r.dim_) return r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        if ((ka.first & kb.first) || (ka.second & kb.second)) continue;
        int sign = a.q_ * b.p_ + crossInversions(ka.first, kb.first) + crossInversions(ka.second, kb.second);
        Coeff c = ca * cb;
        if (sign % 2) c = -c;
        r.add(ka.first | kb.first, ka.second | kb.second, c);
      }
    return r;
  }

  /// Complex conjugate: a (q,p)-form.
  Form conj() const {
    Form r(dim_, q_, p_);
    const bool flip = (p_ * q_) % 2 == 1;
    for (const auto& [k, c] : terms_) {
      Coeff cc = c.conj();
      r.add(k.second, k.first, flip ? -cc : cc);
    }
    return r;
  }

  double maxAbsCoefficient() const {
    double m = 0;
    for (const auto& [k, c] : terms_) m = std::max(m, c.absApprox());
    return m;
  }
  /// Euclidean norm of the coefficient vector.
  double coefficientNorm() const {
    double s = 0;
    for (const auto& [k, c] : terms_) s += toDouble(c.norm());
    return std::sqrt(s);
  }

  bool approxZero(double tol = kDefaultTolerance, double scale = 1.0) const {
    for (const auto& [k, c] : terms_)
      if (!nearZero(c, tol, scale)) return false;
    return true;
  }

  bool isReal(double tol = kDefaultTolerance) const {
    if (p_ != q_) return false;
    return (*this - conj()).approxZero(tol, std::max(1.0, maxAbsCoefficient()));
  }

  /// Coefficient against vol; complex in general.
  Coeff integrateTopComplex() const {
    if (p_ != dim_ || q_ != dim_) throw DomainError("integrateTop needs a (d,d)-form");
    IndexMask full = dim_ == 0 ? 0 : ((IndexMask(1) << dim_) - 1);
    return coefficient(full, full) / iPower<T>(dim_ * dim_);
  }

  /// Real integral of a (d,d)-form; a nonzero imaginary part means the
  /// input was not real.
  T integrateTop(double tol = kDefaultTolerance) const {
    Coeff v = integrateTopComplex();
    if (!nearZero(v.im, tol, std::max(1.0, std::abs(toDouble(v.re)))))
      throw DomainError("integrateTop: non-real top form (imaginary part " + formatScalar(v.im) + ")");
    return v.re;
  }

  /// Same form viewed on C^{dim+1} (pullback along the projection).
  Form pulledBackToHat() const {
    Form r(dim_ + 1, p_, q_);
    r.terms_ = terms_;
    return r;
  }

  template <class U>
  Form<U> cast() const {
    Form<U> r(dim_, p_, q_);
    for (const auto& [k, c] : terms_) {
      if constexpr (std::is_same_v<U, double>)
        r.add(k.first, k.second, Complex<U>(toDouble(c.re), toDouble(c.im)));
      else
        r.add(k.first, k.second, Complex<U>(U(c.re), U(c.im)));
    }
    return r;
  }

  friend bool operator==(const Form& a, const Form& b) {
    return a.dim_ == b.dim_ && a.p_ == b.p_ && a.q_ == b.q_ && a.terms_ == b.terms_;
  }

 private:
  void checkSameShape(const Form& o) const {
    if (o.dim_ != dim_ || o.p_ != p_ || o.q_ != q_)
      throw DomainError("adding forms of different shapes: (" + std::to_string(p_) + "," + std::to_string(q_) +
                        ") vs (" + std::to_string(o.p_) + "," + std::to_string(o.q_) + ")");
  }

  int dim_ = 0, p_ = 0, q_ = 0;
  std::map<Key, Coeff> terms_;
};

template <class T>
using PPForm = Form<T>;

template <class T>
Form<T> wedge(const Form<T>& a, const Form<T>& b) {
  return Form<T>::wedge(a, b);
}

template <class T>
Form<T> power(const Form<T>& f, int n) {
  Form<T> r = Form<T>::one(f.dim());
  for (int k = 0; k < n; ++k) r = r * f;
  return r;
}

/// Kahler form of the standard metric, sum_j i dz_j ^ dzbar_j.
template <class T>
Form<T> standardKahler(int dim) {
  Form<T> w(dim, 1, 1);
  for (int j = 0; j < dim; ++j) w.add(IndexMask(1) << j, IndexMask(1) << j, Complex<T>::I());
  return w;
}

// ---------------------------------------------------------------------------
// Real bases of (p,p)-forms

/// Real basis of real (p,p)-forms, C(d,p)^2 elements: for each I the
/// positive element i^{p^2} dz_I dzbar_I, and for each I < J the two real
/// forms with c_{I,J} = i^{p^2} and c_{I,J} = i^{p^2} * i.
template <class T>
class RealFormBasis {
 public:
  struct Slot {
    IndexMask I, J;
    bool imaginaryPart;  // second element of an off-diagonal pair
  };

  RealFormBasis(int dim, int p) : dim_(dim), p_(p) {
    auto subsets = subsetsOfSize(dim, p);
    for (std::size_t a = 0; a < subsets.size(); ++a)
      for (std::size_t b = a; b < subsets.size(); ++b) {
        if (a == b) {
          slots_.push_back({subsets[a], subsets[a], false});
        } else {
          slots_.push_back({subsets[a], subsets[b], false});
          slots_.push_back({subsets[a], subsets[b], true});
        }
      }
    for (std::size_t k = 0; k < slots_.size(); ++k) index_[{slots_[k].I, slots_[k].J, slots_[k].imaginaryPart}] = k;
  }

  int dim() const { return dim_; }
  int p() const { return p_; }
  std::size_t size() const { return slots_.size(); }
  const Slot& slot(std::size_t k) const { return slots_[k]; }

  Form<T> element(std::size_t k) const {
    const Slot& s = slots_[k];
    const Complex<T> unit = iPower<T>(p_ * p_);
    Complex<T> w = s.imaginaryPart ? unit * Complex<T>::I() : unit;
    Form<T> f(dim_, p_, p_);
    f.add(s.I, s.J, w);
    if (s.I != s.J) {
      Complex<T> partner = w.conj();
      if ((p_ * p_) % 2) partner = -partner;
      f.add(s.J, s.I, partner);
    }
    return f;
  }

  /// Coordinates of a real (p,p)-form. The caller is responsible for
  /// reality; only the c_{I,J} with I <= J are read.
  Vec<T> coordinates(const Form<T>& f) const {
    if (f.dim() != dim_ || f.p() != p_ || f.q() != p_) throw DomainError("coordinates: wrong bidegree");
    const Complex<T> unitInv = iPower<T>(-(p_ * p_));
    Vec<T> x(slots_.size(), T(0));
    for (const auto& [key, c] : f.terms()) {
      auto [I, J] = key;
      if (I != J && !lexBefore(I, J)) continue;  // determined by reality
      Complex<T> z = c * unitInv;
      if (I == J) {
        x[index_.at({I, J, false})] = z.re;
      } else {
        x[index_.at({I, J, false})] = z.re;
        x[index_.at({I, J, true})] = z.im;
      }
    }
    return x;
  }

  Form<T> combine(const Vec<T>& x) const {
    Form<T> f(dim_, p_, p_);
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k] != 0) f += element(k) * x[k];
    return f;
  }

 private:
  // Ordering of subsets used for the basis (lexicographic element lists).
  bool lexBefore(IndexMask a, IndexMask b) const {
    return maskElements(a) < maskElements(b);
  }

  struct SlotKey {
    IndexMask I, J;
    bool im;
    bool operator<(const SlotKey& o) const { return std::tie(I, J, im) < std::tie(o.I, o.J, o.im); }
  };

  int dim_, p_;
  std::vector<Slot> slots_;
  std::map<SlotKey, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Hermitian matrices and (1,1)-forms

/// alpha = i sum_{j,k} H_{jk} dz_j ^ dzbar_k
template <class T>
Form<T> formFromHermitian(const Matrix<Complex<T>>& h) {
  const int d = static_cast<int>(h.rows());
  Form<T> f(d, 1, 1);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) f.add(IndexMask(1) << j, IndexMask(1) << k, Complex<T>::I() * h(j, k));
  return f;
}

template <class T>
Matrix<Complex<T>> hermitianFrom11(const Form<T>& f, double tol = kDefaultTolerance) {
  if (f.p() != 1 || f.q() != 1) throw DomainError("hermitianFrom11: expected a (1,1)-form");
  if (!f.isReal(tol)) throw DomainError("hermitianFrom11: form is not real");
  const int d = f.dim();
  Matrix<Complex<T>> h(d, d);
  for (const auto& [key, c] : f.terms()) {
    int j = std::countr_zero(key.first), k = std::countr_zero(key.second);
    h(j, k) = c * Complex<T>(T(0), T(-1));
  }
  return h;
}

template <class T>
Signature hermitianInertia(const Matrix<Complex<T>>& h, double tol = kDefaultTolerance) {
  Signature s = inertia(realEmbedding(h), tol);
  return {s.positive / 2, s.zero / 2, s.negative / 2};
}

/// Strict positivity of a real (1,1)-form: positive definite Hermitian matrix.
template <class T>
bool isStrictlyPositive11(const Form<T>& f, double tol = kDefaultTolerance) {
  auto s = hermitianInertia(hermitianFrom11(f, tol), tol);
  return s.positive == f.dim();
}

/// Hermitian matrix M_{jk} = integral of Omega ^ i dz_j ^ dzbar_k for a
/// real (d-1,d-1)-form; Omega is strictly positive iff M is positive definite.
template <class T>
Matrix<Complex<T>> pairingMatrixDminus1(const Form<T>& omega) {
  const int d = omega.dim();
  if (omega.p() != d - 1 || omega.q() != d - 1) throw DomainError("expected a (d-1,d-1)-form");
  Matrix<Complex<T>> m(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) m(j, k) = (omega * Form<T>::idd(d, j, k)).integrateTopComplex();
  return m;
}

/// Strict positivity of a real (d-1,d-1)-form via its pairing matrix.
template <class T>
Verdict positivityDminus1(const Form<T>& omega, double tol = kDefaultTolerance) {
  auto m = pairingMatrixDminus1(omega);
  Verdict v;
  v.check = "positivity (d-1,d-1)";
  v.tolerances["relative_zero"] = tol;
  auto emb = realEmbedding(m);
  auto eig = symmetricEigenvalues(emb);
  for (std::size_t k = 0; k < eig.size(); k += 2) v.eigenvalues.push_back(eig[k]);
  v.signature = hermitianInertia(m, tol);
  const int d = omega.dim();
  if (v.signature.positive == d)
    v.outcome = Outcome::Pass;
  else if (v.signature.negative > 0)
    v.outcome = Outcome::Fail;
  else
    v.outcome = Outcome::Degenerate;
  return v;
}

/// Value of a (p,p)-form on the complex p-plane spanned by `frame`
/// (each vector has d complex entries), normalized so that
/// omega_std^p / p! gives 1 on an orthonormal frame.
template <class T>
T restrictToPlane(const Form<T>& f, const std::vector<std::vector<Complex<T>>>& frame,
                  double tol = kDefaultTolerance) {
  const int p = f.p();
  if (f.q() != p) throw DomainError("restrictToPlane: expected a (p,p)-form");
  if (static_cast<int>(frame.size()) != p) throw DomainError("restrictToPlane: frame must have p vectors");
  const int d = f.dim();
  for (const auto& v : frame)
    if (static_cast<int>(v.size()) != d) throw DomainError("restrictToPlane: frame vector has wrong length");
  // Gram determinant of the frame.
  std::vector<std::vector<Complex<T>>> gram(p, std::vector<Complex<T>>(p));
  double scale = 1.0;
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) {
      Complex<T> s;
      for (int j = 0; j < d; ++j) s += frame[a][j].conj() * frame[b][j];
      gram[a][b] = s;
      if (a == b) scale *= std::max(1e-300, toDouble(s.re));
    }
  if (p > 0 && nearZero(determinant(gram), tol, scale)) throw DomainError("restrictToPlane: degenerate frame");

  auto minor = [&](IndexMask rowsMask) {
    auto rows = maskElements(rowsMask);
    std::vector<std::vector<Complex<T>>> m(p, std::vector<Complex<T>>(p));
    for (int r = 0; r < p; ++r)
      for (int a = 0; a < p; ++a) m[r][a] = frame[a][rows[r]];
    return determinant(m);
  };
  Complex<T> total;
  for (const auto& [key, c] : f.terms()) total += c * minor(key.first) * minor(key.second).conj();
  total = total / iPower<T>(p * p);
  if (!nearZero(total.im, tol, std::max(1.0, std::abs(toDouble(total.re)))))
    throw DomainError("restrictToPlane: non-real value; input form is not real");
  return total.re;
}

/// theta = coeff * i dz_{d+1} ^ dzbar_{d+1} on C^{d+1}.
template <class T>
Form<T> hatTheta(int dim, const T& coeff) {
  return Form<T>::idd(dim + 1, dim, dim) * coeff;
}

/// Pullback of a (1,1)-form on C^d to C^{d+1} = C^d + C, plus coeff * theta.
template <class T>
Form<T> extendHat(const Form<T>& f, const T& coeff) {
  if (f.p() != 1 || f.q() != 1) throw DomainError("extendHat: expected a (1,1)-form");
  return f.pulledBackToHat() + hatTheta<T>(f.dim(), coeff);
}

}  // namespace hrpair
