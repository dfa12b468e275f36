#pragma once

// Finite graded commutative rings with a top-degree integration functional:
// torus form algebras, subrings generated in degree one, rings presented by
// monomial relations, products with P^1 and projective bundles.

#include "hrpair/form.hpp"
#include "hrpair/linalg.hpp"
#include "hrpair/scalar.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hrpair {

template <class T>
class RingModel;
template <class T>
using ModelPtr = std::shared_ptr<const RingModel<T>>;

template <class T>
using SparseVec = std::vector<std::pair<std::size_t, T>>;

/// Element of a RingModel of a fixed degree. Degrees outside 0..d are
/// allowed and have an empty basis (the element is zero).
template <class T>
class RingElement {
 public:
  RingElement(ModelPtr<T> model, int degree, Vec<T> coords)
      : model_(std::move(model)), degree_(degree), coords_(std::move(coords)) {
    if (!model_) throw DomainError("ring element without a model");
    if (coords_.size() != model_->basisSize(degree_))
      throw DomainError("coefficient vector length " + std::to_string(coords_.size()) + " does not match basis size " +
                        std::to_string(model_->basisSize(degree_)) + " in degree " + std::to_string(degree_));
  }

  const RingModel<T>& model() const { return *model_; }
  const ModelPtr<T>& modelPtr() const { return model_; }
  int degree() const { return degree_; }
  const Vec<T>& coords() const { return coords_; }

  bool isZero(double tol = kDefaultTolerance) const {
    double scale = 1.0;
    if constexpr (!is_exact_v<T>)
      for (const T& x : coords_) scale = std::max(scale, std::abs(x));
    for (const T& x : coords_)
      if (!nearZero(x, tol, scale)) return false;
    return true;
  }

  RingElement& operator+=(const RingElement& o) {
    checkCompatible(o, "+");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  RingElement& operator-=(const RingElement& o) {
    checkCompatible(o, "-");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  RingElement operator-() const {
    RingElement r = *this;
    for (auto& x : r.coords_) x = -x;
    return r;
  }
  friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
  friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }

  RingElement scaled(const T& s) const {
    RingElement r = *this;
    for (auto& x : r.coords_) x *= s;
    return r;
  }
  friend RingElement operator*(const RingElement& a, const T& s) { return a.scaled(s); }
  friend RingElement operator*(const T& s, const RingElement& a) { return a.scaled(s); }
  friend RingElement operator*(const RingElement& a, int s) { return a.scaled(T(s)); }
  template <class R>
    requires(std::is_same_v<R, Rational> && !std::is_same_v<T, Rational>)
  friend RingElement operator*(const RingElement& a, const R& s) {
    return a.scaled(toDouble(s));
  }

  friend RingElement operator*(const RingElement& a, const RingElement& b) {
    if (a.model_.get() != b.model_.get()) throw DomainError("product of elements of different ring models");
    return RingElement(a.model_, a.degree_ + b.degree_, a.model_->multiply(a.degree_, a.coords_, b.degree_, b.coords_));
  }

  T integrate() const {
    if (degree_ != model_->dimension())
      throw DomainError("integrate: element has degree " + std::to_string(degree_) + ", expected " +
                        std::to_string(model_->dimension()));
    return model_->integrate(coords_);
  }

  friend bool operator==(const RingElement& a, const RingElement& b) {
    return a.model_.get() == b.model_.get() && a.degree_ == b.degree_ && a.coords_ == b.coords_;
  }

  /// e.g. "2*theta1^2 - 1/3*lambda*theta2"; "0" for zero.
  std::string toString() const {
    std::string out;
    for (std::size_t k = 0; k < coords_.size(); ++k) {
      const T& c = coords_[k];
      if (c == 0) continue;
      const bool neg = c < 0;
      const T mag = neg ? T(-c) : c;
      const std::string& label = model_->basisLabel(degree_, k);
      std::string term = label == "1" ? formatScalar(mag) : (mag == 1 ? label : formatScalar(mag) + "*" + label);
      if (out.empty())
        out = (neg ? "-" : "") + term;
      else
        out += (neg ? " - " : " + ") + term;
    }
    return out.empty() ? "0" : out;
  }

 private:
  void checkCompatible(const RingElement& o, const char* op) const {
    if (o.model_.get() != model_.get()) throw DomainError(std::string("'") + op + "' of elements of different ring models");
    if (o.degree_ != degree_)
      throw DomainError(std::string("'") + op + "' of elements of degrees " + std::to_string(degree_) + " and " +
                        std::to_string(o.degree_));
  }

  ModelPtr<T> model_;
  int degree_;
  Vec<T> coords_;
};

/// Finite graded commutative ring, immutable after construction. Structure
/// constants are stored sparsely for every pair of degrees p + q <= d.
template <class T>
class RingModel : public std::enable_shared_from_this<RingModel<T>> {
 public:
  /// Product of basis element a of degree p with basis element b of degree q,
  /// as a dense coefficient vector in degree p + q (only called for p + q <= d).
  using ProductFn = std::function<Vec<T>(int p, std::size_t a, int q, std::size_t b)>;

  struct Options {
    bool checkAxioms = true;
    bool hasIntegration = true;
    double tolerance = kDefaultTolerance;
  };

  /// Returns a mutable handle so factories can attach names before publishing.
  static std::shared_ptr<RingModel<T>> create(std::string name, int dimension,
                                              std::vector<std::vector<std::string>> basisLabels,
                                              const ProductFn& product, Vec<T> integral, Options options) {
    auto m = std::shared_ptr<RingModel<T>>(new RingModel<T>());
    m->name_ = std::move(name);
    m->dim_ = dimension;
    m->labels_ = std::move(basisLabels);
    m->integral_ = std::move(integral);
    m->hasIntegration_ = options.hasIntegration;
    m->tolerance_ = options.tolerance;
    if (dimension < 0 || static_cast<int>(m->labels_.size()) != dimension + 1)
      throw DomainError("ring model needs one basis per degree 0..d");
    if (m->labels_[0].size() != 1) throw DomainError("degree-0 part must be spanned by the unit");
    if (m->integral_.size() != m->labels_[dimension].size())
      throw DomainError("integration functional has the wrong length");
    m->build(product);
    if (options.checkAxioms) m->checkAxioms();
    return m;
  }
  static std::shared_ptr<RingModel<T>> create(std::string name, int dimension,
                                              std::vector<std::vector<std::string>> basisLabels,
                                              const ProductFn& product, Vec<T> integral) {
    return create(std::move(name), dimension, std::move(basisLabels), product, std::move(integral), Options{});
  }

  const std::string& name() const { return name_; }
  int dimension() const { return dim_; }
  bool hasIntegration() const { return hasIntegration_; }
  double tolerance() const { return tolerance_; }

  std::size_t basisSize(int p) const {
    return (p < 0 || p > dim_) ? 0 : labels_[static_cast<std::size_t>(p)].size();
  }
  const std::string& basisLabel(int p, std::size_t k) const { return labels_.at(static_cast<std::size_t>(p)).at(k); }
  const Vec<T>& integral() const { return integral_; }

  ModelPtr<T> self() const { return this->shared_from_this(); }

  RingElement<T> zero(int p) const { return RingElement<T>(self(), p, Vec<T>(basisSize(p), T(0))); }
  RingElement<T> one() const { return basisElement(0, 0); }
  RingElement<T> basisElement(int p, std::size_t k) const {
    Vec<T> v(basisSize(p), T(0));
    v.at(k) = T(1);
    return RingElement<T>(self(), p, std::move(v));
  }
  RingElement<T> element(int p, Vec<T> coords) const { return RingElement<T>(self(), p, std::move(coords)); }

  /// Named elements (generators, distinguished classes).
  const std::map<std::string, std::pair<int, Vec<T>>>& names() const { return names_; }
  bool hasName(const std::string& n) const { return names_.count(n) > 0; }
  RingElement<T> named(const std::string& n) const {
    auto it = names_.find(n);
    if (it == names_.end()) throw DomainError("ring model '" + name_ + "' has no element named '" + n + "'");
    return element(it->second.first, it->second.second);
  }
  void setName(const std::string& n, const RingElement<T>& x) {
    if (x.modelPtr().get() != this) throw DomainError("named element '" + n + "' belongs to another model");
    names_[n] = {x.degree(), x.coords()};
  }
  /// Copy of this model (same structure constants) with one more named
  /// element; elements of the original do not belong to the copy.
  ModelPtr<T> withName(const std::string& n, int degree, const Vec<T>& coords) const {
    auto m = copy();
    m->names_[n] = {degree, coords};
    return m;
  }
  /// Mutable copy with the same structure constants and names.
  std::shared_ptr<RingModel<T>> copy() const { return std::shared_ptr<RingModel<T>>(new RingModel<T>(*this)); }

  const SparseVec<T>& basisProduct(int p, std::size_t a, int q, std::size_t b) const {
    return tensors_.at(key(p, q)).at(a * basisSize(q) + b);
  }

  Vec<T> multiply(int p, const Vec<T>& x, int q, const Vec<T>& y) const {
    const int r = p + q;
    Vec<T> out(basisSize(r), T(0));
    if (out.empty()) return out;
    for (std::size_t a = 0; a < x.size(); ++a) {
      if (x[a] == 0) continue;
      for (std::size_t b = 0; b < y.size(); ++b) {
        if (y[b] == 0) continue;
        const T ab = x[a] * y[b];
        for (const auto& [k, c] : basisProduct(p, a, q, b)) out[k] += ab * c;
      }
    }
    return out;
  }

  T integrate(const Vec<T>& top) const {
    if (!hasIntegration_) throw DomainError("ring model '" + name_ + "' has no integration functional");
    return dot(integral_, top);
  }

  /// Matrix of (x, y) -> integral(x * y) between degree p and degree d - p.
  Matrix<T> pairingMatrix(int p) const {
    const std::size_t n = basisSize(p), m = basisSize(dim_ - p);
    Matrix<T> out(n, m);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        T s(0);
        for (const auto& [k, c] : basisProduct(p, a, dim_ - p, b)) s += c * integral_[k];
        out(a, b) = s;
      }
    return out;
  }

  /// Same structure constants over another scalar type.
  template <class U>
  ModelPtr<U> cast() const {
    auto convert = [](const T& x) {
      if constexpr (std::is_same_v<U, double>)
        return toDouble(x);
      else
        return U(x);
    };
    std::vector<std::vector<std::string>> labels = labels_;
    Vec<U> integral;
    for (const T& x : integral_) integral.push_back(convert(x));
    auto product = [this, &convert](int p, std::size_t a, int q, std::size_t b) {
      Vec<U> v(basisSize(p + q), U(0));
      for (const auto& [k, c] : basisProduct(p, a, q, b)) v[k] = convert(c);
      return v;
    };
    typename RingModel<U>::Options opts;
    opts.checkAxioms = false;
    opts.hasIntegration = hasIntegration_;
    auto out = RingModel<U>::create(name_, dim_, labels, product, integral, opts);
    for (const auto& [n, val] : names_) {
      Vec<U> v;
      for (const T& x : val.second) v.push_back(convert(x));
      out->setName(n, out->element(val.first, v));
    }
    return out;
  }

 private:
  template <class>
  friend class RingModel;

  RingModel() = default;
  RingModel(const RingModel&) = default;

  static std::pair<int, int> key(int p, int q) { return {p, q}; }

  void build(const ProductFn& product) {
    for (int p = 0; p <= dim_; ++p)
      for (int q = 0; p + q <= dim_; ++q) {
        auto& slot = tensors_[key(p, q)];
        const std::size_t np = basisSize(p), nq = basisSize(q), nr = basisSize(p + q);
        slot.resize(np * nq);
        for (std::size_t a = 0; a < np; ++a)
          for (std::size_t b = 0; b < nq; ++b) {
            Vec<T> v = product(p, a, q, b);
            if (v.size() != nr) throw DomainError("product callback returned a vector of the wrong length");
            SparseVec<T> sv;
            for (std::size_t k = 0; k < nr; ++k)
              if (!nearZero(v[k], tolerance_ * 1e-3)) sv.emplace_back(k, v[k]);
            slot[a * nq + b] = std::move(sv);
          }
      }
  }

  bool approxEqual(const Vec<T>& x, const Vec<T>& y) const {
    double scale = 1.0;
    if constexpr (!is_exact_v<T>)
      for (std::size_t i = 0; i < x.size(); ++i) scale = std::max({scale, std::abs(x[i]), std::abs(y[i])});
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!nearZero(T(x[i] - y[i]), tolerance_, scale)) return false;
    return true;
  }

  void checkAxioms() const {
    // Unit.
    for (int p = 0; p <= dim_; ++p)
      for (std::size_t a = 0; a < basisSize(p); ++a) {
        Vec<T> e(basisSize(p), T(0));
        e[a] = T(1);
        if (!approxEqual(multiply(0, Vec<T>{T(1)}, p, e), e))
          throw DomainError("ring model '" + name_ + "': unit axiom fails on " + basisLabel(p, a));
      }
    // Commutativity.
    for (int p = 1; p <= dim_; ++p)
      for (int q = p; p + q <= dim_; ++q)
        for (std::size_t a = 0; a < basisSize(p); ++a)
          for (std::size_t b = 0; b < basisSize(q); ++b) {
            Vec<T> ea(basisSize(p), T(0)), eb(basisSize(q), T(0));
            ea[a] = T(1);
            eb[b] = T(1);
            if (!approxEqual(multiply(p, ea, q, eb), multiply(q, eb, p, ea)))
              throw DomainError("ring model '" + name_ + "': commutativity fails on (" + basisLabel(p, a) + ", " +
                                basisLabel(q, b) + ")");
          }
    // Associativity on all basis triples of positive degree.
    for (int p = 1; p <= dim_; ++p)
      for (int q = 1; p + q <= dim_; ++q)
        for (int r = 1; p + q + r <= dim_; ++r)
          for (std::size_t a = 0; a < basisSize(p); ++a)
            for (std::size_t b = 0; b < basisSize(q); ++b) {
              Vec<T> ab(basisSize(p + q), T(0));
              for (const auto& [k, c] : basisProduct(p, a, q, b)) ab[k] = c;
              for (std::size_t c = 0; c < basisSize(r); ++c) {
                Vec<T> ec(basisSize(r), T(0)), ea(basisSize(p), T(0));
                ec[c] = T(1);
                ea[a] = T(1);
                Vec<T> bc(basisSize(q + r), T(0));
                for (const auto& [k, x] : basisProduct(q, b, r, c)) bc[k] = x;
                if (!approxEqual(multiply(p + q, ab, r, ec), multiply(p, ea, q + r, bc)))
                  throw DomainError("ring model '" + name_ + "': associativity fails on (" + basisLabel(p, a) + ", " +
                                    basisLabel(q, b) + ", " + basisLabel(r, c) + ")");
              }
            }
  }

  std::string name_;
  int dim_ = 0;
  std::vector<std::vector<std::string>> labels_;
  std::map<std::pair<int, int>, std::vector<SparseVec<T>>> tensors_;
  Vec<T> integral_;
  bool hasIntegration_ = true;
  double tolerance_ = kDefaultTolerance;
  std::map<std::string, std::pair<int, Vec<T>>> names_;
};

// ---------------------------------------------------------------------------
// Monomials and polynomials in named generators

/// Exponent vector over an ordered generator list.
using Monomial = std::vector<int>;
/// Polynomial in generators: monomial -> coefficient.
using GenPoly = std::map<Monomial, Rational>;

struct GeneratorSpec {
  std::string name;
  int degree = 1;
};

inline int monomialDegree(const Monomial& m, const std::vector<GeneratorSpec>& gens) {
  int d = 0;
  for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * gens[i].degree;
  return d;
}

inline std::string monomialLabel(const Monomial& m, const std::vector<GeneratorSpec>& gens) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += gens[i].name;
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

/// All monomials of exactly the given weighted degree, in a fixed order.
inline std::vector<Monomial> monomialsOfDegree(const std::vector<GeneratorSpec>& gens, int degree) {
  std::vector<Monomial> out;
  Monomial cur(gens.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
    if (i == gens.size()) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    const int g = gens[i].degree;
    if (g <= 0) throw DomainError("generator '" + gens[i].name + "' must have positive degree");
    for (int k = remaining / g; k >= 0; --k) {
      cur[i] = k;
      self(self, i + 1, remaining - k * g);
    }
    cur[i] = 0;
  };
  rec(rec, 0, degree);
  return out;
}

/// Evaluates a generator polynomial on ring elements standing for the
/// generators. All monomials must have the same degree.
template <class T>
RingElement<T> evaluatePoly(const GenPoly& poly, const std::vector<RingElement<T>>& gens, const RingModel<T>& model,
                            std::optional<int> degreeIfZero = std::nullopt) {
  std::optional<RingElement<T>> acc;
  for (const auto& [m, c] : poly) {
    if (c == 0) continue;
    RingElement<T> term = model.one();
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int k = 0; k < m[i]; ++k) term = term * gens.at(i);
    term = term * c;
    if (acc && acc->degree() != term.degree()) throw DomainError("polynomial is not homogeneous");
    acc = acc ? *acc + term : term;
  }
  if (acc) return *acc;
  if (!degreeIfZero) throw DomainError("cannot infer the degree of a zero polynomial");
  return model.zero(*degreeIfZero);
}

// ---------------------------------------------------------------------------
// Torus rings: all constant-coefficient real (p,p)-forms on C^d

namespace detail {

inline std::string maskLabel(IndexMask m) {
  std::string s;
  for (int j : maskElements(m)) s += std::to_string(j + 1);
  return s;
}

inline std::vector<std::string> torusLabels(const RealFormBasis<Rational>& b) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const auto& s = b.slot(k);
    if (b.p() == 0)
      out.push_back("1");
    else if (s.I == s.J)
      out.push_back("d[" + maskLabel(s.I) + "]");
    else
      out.push_back(std::string(s.imaginaryPart ? "im" : "re") + "[" + maskLabel(s.I) + "|" + maskLabel(s.J) + "]");
  }
  return out;
}

inline ModelPtr<Rational> buildTorusRing(int d) {
  std::vector<RealFormBasis<Rational>> bases;
  std::vector<std::vector<std::string>> labels;
  for (int p = 0; p <= d; ++p) {
    bases.emplace_back(d, p);
    labels.push_back(torusLabels(bases.back()));
  }
  std::vector<std::vector<Form<Rational>>> elements(d + 1);
  for (int p = 0; p <= d; ++p)
    for (std::size_t k = 0; k < bases[p].size(); ++k) elements[p].push_back(bases[p].element(k));
  auto product = [&](int p, std::size_t a, int q, std::size_t b) {
    Form<Rational> f = elements[p][a] * elements[q][b];
    return bases[p + q].coordinates(f);
  };
  Vec<Rational> integral{Rational(1)};
  return RingModel<Rational>::create("torus(" + std::to_string(d) + ")", d, labels, product, integral);
}

}  // namespace detail

/// Algebra of constant-coefficient real (p,p)-forms on C^d with the
/// integral normalized by vol. Built once per d and cached.
template <class T = Rational>
ModelPtr<T> torusRing(int d) {
  if (d < 1 || d > 6) throw DomainError("torusRing supports 1 <= d <= 6");
  static std::mutex mutex;
  static std::map<int, ModelPtr<T>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  ModelPtr<T> model;
  if constexpr (std::is_same_v<T, Rational>)
    model = detail::buildTorusRing(d);
  else
    model = torusRing<Rational>(d)->template cast<T>();
  cache.emplace(d, model);
  return model;
}

/// Element of torusRing(d) represented by a real (p,p)-form.
template <class T>
RingElement<T> torusElement(const ModelPtr<T>& torus, const Form<T>& f, double tol = kDefaultTolerance) {
  if (f.p() != f.q()) throw DomainError("torusElement: expected a (p,p)-form");
  if (f.dim() != torus->dimension()) throw DomainError("torusElement: form dimension differs from the torus");
  if (!f.isReal(tol)) throw DomainError("torusElement: form is not real");
  RealFormBasis<T> basis(f.dim(), f.p());
  return torus->element(f.p(), basis.coordinates(f));
}

template <class T>
Form<T> torusForm(const RingElement<T>& x) {
  RealFormBasis<T> basis(x.model().dimension(), x.degree());
  return basis.combine(x.coords());
}

// ---------------------------------------------------------------------------
// Subrings generated in degree one

namespace detail {

/// Solves E x = v for E with independent columns; nullopt if v is not in the span.
template <class T>
std::optional<Vec<T>> solveInColumnSpan(const Matrix<T>& e, const Vec<T>& v, double tol) {
  const std::size_t m = e.rows(), n = e.cols();
  Matrix<T> aug(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = e(i, j);
    aug(i, n) = v[i];
  }
  auto pivots = rref(aug, tol);
  if (!pivots.empty() && pivots.back() == n) return std::nullopt;
  Vec<T> x(n, T(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, n);
  return x;
}

}  // namespace detail

template <class T>
struct Subring {
  ModelPtr<T> model;
  ModelPtr<T> ambient;
  /// embedding[p]: ambient coordinates = embedding[p] * subring coordinates.
  std::vector<Matrix<T>> embedding;

  RingElement<T> include(const RingElement<T>& x) const {
    const int p = x.degree();
    if (p < 0 || p > model->dimension()) return ambient->zero(p);
    return ambient->element(p, embedding[p].apply(x.coords()));
  }

  /// Preimage of an ambient element, if it lies in the subring.
  std::optional<RingElement<T>> restrict(const RingElement<T>& x) const {
    const int p = x.degree();
    if (p < 0 || p > model->dimension()) return model->zero(p);
    auto sol = detail::solveInColumnSpan(embedding[p], x.coords(), ambient->tolerance());
    if (!sol) return std::nullopt;
    return model->element(p, *sol);
  }
};

/// Subring of `ambient` generated by the named degree-1 elements.
template <class T>
Subring<T> subring(const ModelPtr<T>& ambient, const std::vector<std::pair<std::string, RingElement<T>>>& generators,
                   const std::string& name = "subring") {
  const int d = ambient->dimension();
  const double tol = ambient->tolerance();
  for (const auto& [n, g] : generators) {
    if (g.degree() != 1) throw DomainError("subring generator '" + n + "' must have degree 1");
    if (g.modelPtr().get() != ambient.get()) throw DomainError("subring generator '" + n + "' lives in another model");
  }
  std::vector<GeneratorSpec> gens;
  for (const auto& [n, g] : generators) gens.push_back({n, 1});

  Subring<T> out;
  out.ambient = ambient;
  std::vector<std::vector<std::string>> labels(d + 1);
  std::vector<std::vector<Vec<T>>> columns(d + 1);
  std::vector<std::vector<Monomial>> monos(d + 1);
  labels[0] = {"1"};
  columns[0] = {ambient->one().coords()};
  monos[0] = {Monomial(gens.size(), 0)};
  for (int p = 1; p <= d; ++p) {
    // Candidates: previous basis monomials times a generator.
    std::vector<std::pair<Monomial, Vec<T>>> cands;
    for (std::size_t a = 0; a < monos[p - 1].size(); ++a)
      for (std::size_t g = 0; g < gens.size(); ++g) {
        Monomial m = monos[p - 1][a];
        ++m[g];
        bool seen = false;
        for (const auto& c : cands) seen = seen || c.first == m;
        if (seen) continue;
        RingElement<T> prev = ambient->element(p - 1, columns[p - 1][a]);
        cands.emplace_back(m, (prev * generators[g].second).coords());
      }
    // Greedy independent selection.
    Matrix<T> acc(ambient->basisSize(p), 0);
    for (const auto& [m, v] : cands) {
      Matrix<T> trial(acc.rows(), acc.cols() + 1);
      for (std::size_t i = 0; i < acc.rows(); ++i) {
        for (std::size_t j = 0; j < acc.cols(); ++j) trial(i, j) = acc(i, j);
        trial(i, acc.cols()) = v[i];
      }
      if (rank(trial, tol) == trial.cols()) {
        acc = trial;
        columns[p].push_back(v);
        monos[p].push_back(m);
        labels[p].push_back(monomialLabel(m, gens));
      }
    }
  }
  for (int p = 0; p <= d; ++p) {
    Matrix<T> e(ambient->basisSize(p), columns[p].size());
    for (std::size_t j = 0; j < columns[p].size(); ++j)
      for (std::size_t i = 0; i < e.rows(); ++i) e(i, j) = columns[p][j][i];
    out.embedding.push_back(e);
  }
  const auto& emb = out.embedding;
  auto product = [&](int p, std::size_t a, int q, std::size_t b) {
    Vec<T> x = ambient->multiply(p, columns[p][a], q, columns[q][b]);
    auto sol = detail::solveInColumnSpan(emb[p + q], x, tol);
    if (!sol)
      throw DomainError("subring '" + name + "' is not closed: " + labels[p][a] + " * " + labels[q][b] +
                        " leaves the span of the degree-" + std::to_string(p + q) + " basis");
    return *sol;
  };
  Vec<T> integral(columns[d].size(), T(0));
  for (std::size_t j = 0; j < columns[d].size(); ++j) integral[j] = dot(ambient->integral(), columns[d][j]);
  typename RingModel<T>::Options opts;
  opts.tolerance = tol;
  opts.hasIntegration = ambient->hasIntegration();
  auto model = RingModel<T>::create(name, d, labels, product, integral, opts);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    auto sol = detail::solveInColumnSpan(emb[1], generators[g].second.coords(), tol);
    model->setName(gens[g].name, model->element(1, *sol));
  }
  out.model = model;
  return out;
}

// ---------------------------------------------------------------------------
// Rings presented by generators and monomial relations

struct RelationSpec {
  Monomial lhs;
  /// Either a rewrite lhs -> polynomial of the same degree ...
  std::optional<GenPoly> rewrite;
  /// ... or, for top-degree monomials, an integral value.
  std::optional<Rational> value;
};

struct RelationRingSpec {
  std::string name = "relation ring";
  int dimension = 0;
  std::vector<GeneratorSpec> generators;
  std::vector<RelationSpec> relations;
  /// Normalization: integral of this top-degree monomial.
  Monomial pointMonomial;
  Rational pointValue = 1;
  std::map<std::string, GenPoly> labels;
};

namespace detail {

class RelationReducer {
 public:
  explicit RelationReducer(const RelationRingSpec& spec) : spec_(spec) {
    for (const auto& r : spec_.relations) {
      if (r.lhs.size() != spec_.generators.size()) throw DomainError("relation monomial has the wrong length");
      if (r.rewrite.has_value() == r.value.has_value())
        throw DomainError("relation for " + monomialLabel(r.lhs, spec_.generators) + " needs exactly one of rewrite/value");
      const int deg = monomialDegree(r.lhs, spec_.generators);
      if (r.value && deg != spec_.dimension)
        throw DomainError("value relation on " + monomialLabel(r.lhs, spec_.generators) + " is not in top degree");
      if (r.rewrite)
        for (const auto& [m, c] : *r.rewrite)
          if (c != 0 && monomialDegree(m, spec_.generators) != deg)
            throw DomainError("rewrite of " + monomialLabel(r.lhs, spec_.generators) + " is not homogeneous");
    }
    if (monomialDegree(spec_.pointMonomial, spec_.generators) != spec_.dimension)
      throw DomainError("integration monomial is not in top degree");
  }

  /// Normal form of m below top degree: combination of irreducible monomials.
  /// In top degree: the integral, stored under the empty key.
  GenPoly reduce(const Monomial& m, int depth = 0) {
    if (depth > 64) throw DomainError("relations do not terminate on " + monomialLabel(m, spec_.generators));
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    const int deg = monomialDegree(m, spec_.generators);
    std::vector<std::pair<std::string, GenPoly>> candidates;
    auto divides = [](const Monomial& a, const Monomial& b) {
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
      return true;
    };
    for (const auto& r : spec_.relations) {
      if (!divides(r.lhs, m)) continue;
      GenPoly cand;
      if (r.value) {
        cand[Monomial{}] = *r.value;
      } else {
        for (const auto& [rm, rc] : *r.rewrite) {
          Monomial prod = rm;
          for (std::size_t i = 0; i < m.size(); ++i) prod[i] += m[i] - r.lhs[i];
          for (const auto& [nm, nc] : reduce(prod, depth + 1)) addTo(cand, nm, rc * nc);
        }
      }
      candidates.emplace_back(monomialLabel(r.lhs, spec_.generators), cand);
    }
    if (deg == spec_.dimension && m == spec_.pointMonomial) {
      GenPoly cand;
      cand[Monomial{}] = spec_.pointValue;
      candidates.emplace_back("integration normalization", cand);
    }
    GenPoly result;
    if (candidates.empty()) {
      if (deg == spec_.dimension)
        throw DomainError("relations do not determine the integral of " + monomialLabel(m, spec_.generators));
      result[m] = 1;
    } else {
      result = candidates.front().second;
      for (std::size_t k = 1; k < candidates.size(); ++k)
        if (candidates[k].second != result)
          throw DomainError("inconsistent relations: " + monomialLabel(m, spec_.generators) + " reduces differently via " +
                            candidates.front().first + " and " + candidates[k].first);
    }
    memo_[m] = result;
    return result;
  }

 private:
  static void addTo(GenPoly& p, const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto& slot = p[m];
    slot += c;
    if (slot == 0) p.erase(m);
  }

  const RelationRingSpec& spec_;
  std::map<Monomial, GenPoly> memo_;
};

}  // namespace detail

/// Ring presented by relations, reduced exhaustively degree by degree. The
/// top degree is one-dimensional, spanned by the class "pt" with integral 1.
inline ModelPtr<Rational> relationRing(const RelationRingSpec& spec) {
  const int d = spec.dimension;
  if (d < 1) throw DomainError("relation ring needs dimension >= 1");
  detail::RelationReducer reducer(spec);
  std::vector<std::vector<Monomial>> basis(d + 1);
  std::vector<std::vector<std::string>> labels(d + 1);
  std::vector<std::map<Monomial, std::size_t>> index(d + 1);
  for (int p = 0; p < d; ++p)
    for (const auto& m : monomialsOfDegree(spec.generators, p)) {
      GenPoly nf = reducer.reduce(m);
      if (nf.size() == 1 && nf.begin()->first == m && nf.begin()->second == 1) {
        index[p][m] = basis[p].size();
        basis[p].push_back(m);
        labels[p].push_back(monomialLabel(m, spec.generators));
      }
    }
  // Every top monomial must have a determined integral.
  for (const auto& m : monomialsOfDegree(spec.generators, d)) reducer.reduce(m);
  labels[d] = {"pt"};

  auto coordsOf = [&](const Monomial& m, int deg) {
    Vec<Rational> v(labels[deg].size(), Rational(0));
    GenPoly nf = reducer.reduce(m);
    if (deg == d) {
      auto it = nf.find(Monomial{});
      if (it != nf.end()) v[0] = it->second;
      return v;
    }
    for (const auto& [nm, c] : nf) v[index[deg].at(nm)] += c;
    return v;
  };
  auto product = [&](int p, std::size_t a, int q, std::size_t b) {
    Monomial ma = p == d ? Monomial{} : basis[p][a];
    Monomial mb = q == d ? Monomial{} : basis[q][b];
    if (p == d) return q == 0 ? Vec<Rational>{Rational(1)} : Vec<Rational>{};
    if (q == d) return p == 0 ? Vec<Rational>{Rational(1)} : Vec<Rational>{};
    Monomial m(spec.generators.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
    return coordsOf(m, p + q);
  };
  auto model = RingModel<Rational>::create(spec.name, d, labels, product, Vec<Rational>{Rational(1)});
  std::vector<RingElement<Rational>> gens;
  for (std::size_t g = 0; g < spec.generators.size(); ++g) {
    Monomial m(spec.generators.size(), 0);
    m[g] = 1;
    const int deg = spec.generators[g].degree;
    if (deg > d) throw DomainError("generator '" + spec.generators[g].name + "' exceeds the ring dimension");
    gens.push_back(model->element(deg, coordsOf(m, deg)));
    model->setName(spec.generators[g].name, gens.back());
  }
  for (const auto& [n, poly] : spec.labels) model->setName(n, evaluatePoly(poly, gens, *model));
  return model;
}

// ---------------------------------------------------------------------------
// Free truncated rings (generic symbolic classes)

/// Q[generators] / (monomials of degree > truncDegree); no integration.
inline ModelPtr<Rational> freeTruncatedRing(const std::vector<GeneratorSpec>& gens, int truncDegree,
                                            const std::string& name = "free") {
  std::vector<std::vector<Monomial>> basis(truncDegree + 1);
  std::vector<std::vector<std::string>> labels(truncDegree + 1);
  std::vector<std::map<Monomial, std::size_t>> index(truncDegree + 1);
  for (int p = 0; p <= truncDegree; ++p)
    for (const auto& m : monomialsOfDegree(gens, p)) {
      index[p][m] = basis[p].size();
      basis[p].push_back(m);
      labels[p].push_back(monomialLabel(m, gens));
    }
  auto product = [&](int p, std::size_t a, int q, std::size_t b) {
    Vec<Rational> v(basis[p + q].size(), Rational(0));
    Monomial m = basis[p][a];
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += basis[q][b][i];
    v[index[p + q].at(m)] = 1;
    return v;
  };
  RingModel<Rational>::Options opts;
  opts.hasIntegration = false;
  opts.checkAxioms = false;  // monomial multiplication is associative by construction
  auto model = RingModel<Rational>::create(name, truncDegree, labels, product,
                                           Vec<Rational>(basis[truncDegree].size(), Rational(0)), opts);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    Monomial m(gens.size(), 0);
    m[g] = 1;
    if (gens[g].degree <= truncDegree)
      model->setName(gens[g].name, model->basisElement(gens[g].degree, index[gens[g].degree].at(m)));
    else
      model->setName(gens[g].name, model->zero(gens[g].degree));
  }
  return model;
}

// ---------------------------------------------------------------------------
// X x P^1

template <class T>
struct P1Product {
  ModelPtr<T> model;
  ModelPtr<T> base;

  /// Pullback of a base class.
  RingElement<T> pullback(const RingElement<T>& x) const {
    Vec<T> v(model->basisSize(x.degree()), T(0));
    for (std::size_t i = 0; i < x.coords().size(); ++i) v[i] = x.coords()[i];
    return model->element(x.degree(), v);
  }
  RingElement<T> tau() const { return model->named("tau"); }

  /// Decomposition x = a + b * tau with a, b pulled back from the base.
  std::pair<RingElement<T>, RingElement<T>> split(const RingElement<T>& x) const {
    const int p = x.degree();
    const std::size_t n0 = base->basisSize(p), n1 = base->basisSize(p - 1);
    Vec<T> a(n0), b(n1);
    for (std::size_t i = 0; i < n0; ++i) a[i] = x.coords()[i];
    for (std::size_t i = 0; i < n1; ++i) b[i] = x.coords()[n0 + i];
    return {base->element(p, a), base->element(p - 1, b)};
  }
};

/// Adjoins tau of degree one with tau^2 = 0 and integral(x * tau) = integral(x).
template <class T>
P1Product<T> productWithP1(const ModelPtr<T>& base) {
  const int d = base->dimension();
  std::vector<std::vector<std::string>> labels(d + 2);
  for (int p = 0; p <= d + 1; ++p) {
    for (std::size_t k = 0; k < base->basisSize(p); ++k) labels[p].push_back(base->basisLabel(p, k));
    for (std::size_t k = 0; k < base->basisSize(p - 1); ++k) {
      const std::string& l = base->basisLabel(p - 1, k);
      labels[p].push_back(l == "1" ? "tau" : l + "*tau");
    }
  }
  auto product = [&](int p, std::size_t a, int q, std::size_t b) {
    const int r = p + q;
    Vec<T> v(base->basisSize(r) + base->basisSize(r - 1), T(0));
    const std::size_t np = base->basisSize(p), nq = base->basisSize(q);
    const bool aTau = a >= np, bTau = b >= nq;
    if (aTau && bTau) return v;
    const int pa = aTau ? p - 1 : p, qb = bTau ? q - 1 : q;
    const std::size_t ia = aTau ? a - np : a, ib = bTau ? b - nq : b;
    if (pa + qb > d) return v;
    const std::size_t offset = (aTau || bTau) ? base->basisSize(r) : 0;
    for (const auto& [k, c] : base->basisProduct(pa, ia, qb, ib)) v[offset + k] = c;
    return v;
  };
  Vec<T> integral(labels[d + 1].size(), T(0));
  for (std::size_t k = 0; k < base->basisSize(d); ++k) integral[k] = base->integral()[k];
  typename RingModel<T>::Options opts;
  opts.hasIntegration = base->hasIntegration();
  opts.tolerance = base->tolerance();
  opts.checkAxioms = base->dimension() <= 4;
  P1Product<T> out;
  out.base = base;
  auto model = RingModel<T>::create(base->name() + " x P1", d + 1, labels, product, integral, opts);
  out.model = model;
  Vec<T> tau(labels[1].size(), T(0));
  tau[base->basisSize(1)] = T(1);
  model->setName("tau", model->element(1, tau));
  for (const auto& [n, val] : base->names()) model->setName(n, out.pullback(base->element(val.first, val.second)));
  return out;
}

// ---------------------------------------------------------------------------
// Projective bundles

/// P(A) -> X for a rank-e class A, with the tautological quotient class xi
/// satisfying xi^e = sum_{i=1}^{e} (-1)^{i+1} c_i(A) xi^{e-i}. With this
/// relation, pushforward(xi^{e-1+k}) = h_k(Chern roots of A).
template <class T>
struct ProjectiveBundle {
  ModelPtr<T> model;
  ModelPtr<T> base;
  int rank = 0;

  /// Degree-k basis: xi^a * b for a = 0..e-1 and b in base degree k - a.
  static std::size_t offset(const RingModel<T>& base, int k, int a) {
    std::size_t off = 0;
    for (int j = 0; j < a; ++j) off += base.basisSize(k - j);
    return off;
  }

  RingElement<T> pullback(const RingElement<T>& x) const {
    Vec<T> v(model->basisSize(x.degree()), T(0));
    for (std::size_t i = 0; i < x.coords().size(); ++i) v[i] = x.coords()[i];
    return model->element(x.degree(), v);
  }
  RingElement<T> xi() const { return model->named("xi"); }

  /// Fiber integration: the xi^{e-1} component, in base degree k - (e-1).
  RingElement<T> pushforward(const RingElement<T>& x) const {
    const int k = x.degree();
    const int bd = k - (rank - 1);
    Vec<T> v(base->basisSize(bd), T(0));
    const std::size_t off = offset(*base, k, rank - 1);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.coords()[off + i];
    return base->element(bd, v);
  }
};

template <class T>
ProjectiveBundle<T> projBundleRing(const ModelPtr<T>& base, const std::vector<RingElement<T>>& chern, int e) {
  if (e < 1) throw DomainError("projective bundle needs rank >= 1");
  if (static_cast<int>(chern.size()) != e) throw DomainError("projBundleRing expects c_1..c_e");
  for (int i = 1; i <= e; ++i) {
    if (chern[i - 1].degree() != i) throw DomainError("c_" + std::to_string(i) + " has the wrong degree");
    if (chern[i - 1].modelPtr().get() != base.get()) throw DomainError("Chern classes live in another model");
  }
  const int d = base->dimension();
  const int D = d + e - 1;
  using PB = ProjectiveBundle<T>;
  std::vector<std::vector<std::string>> labels(D + 1);
  for (int k = 0; k <= D; ++k)
    for (int a = 0; a < e; ++a)
      for (std::size_t j = 0; j < base->basisSize(k - a); ++j) {
        const std::string& l = base->basisLabel(k - a, j);
        std::string xi = a == 0 ? "" : (a == 1 ? "xi" : "xi^" + std::to_string(a));
        labels[k].push_back(a == 0 ? l : (l == "1" ? xi : xi + "*" + l));
      }
  // Reduces sum_a xi^a * comp[a] (comp[a] of base degree k - a) to a < e.
  auto reduce = [&](int k, std::vector<Vec<T>> comp) {
    for (int a = static_cast<int>(comp.size()) - 1; a >= e; --a) {
      const Vec<T>& top = comp[a];
      bool any = false;
      for (const T& x : top) any = any || x != 0;
      if (!any) continue;
      for (int i = 1; i <= e; ++i) {
        const int target = a - i;
        Vec<T> add = base->multiply(i, chern[i - 1].coords(), k - a, top);
        Vec<T>& dst = comp[target];
        if (dst.size() != add.size()) dst.assign(base->basisSize(k - target), T(0));
        for (std::size_t j = 0; j < add.size(); ++j) dst[j] += (i % 2 == 1) ? add[j] : T(-add[j]);
      }
    }
    Vec<T> v(labels[k].size(), T(0));
    for (int a = 0; a < e && a < static_cast<int>(comp.size()); ++a) {
      const std::size_t off = PB::offset(*base, k, a);
      for (std::size_t j = 0; j < comp[a].size(); ++j) v[off + j] = comp[a][j];
    }
    return v;
  };
  auto locate = [&](int k, std::size_t idx) {
    for (int a = 0; a < e; ++a) {
      const std::size_t n = base->basisSize(k - a);
      if (idx < n) return std::pair<int, std::size_t>{a, idx};
      idx -= n;
    }
    throw DomainError("basis index out of range");
  };
  auto product = [&](int p, std::size_t x, int q, std::size_t y) {
    auto [a, i] = locate(p, x);
    auto [b, j] = locate(q, y);
    const int k = p + q;
    std::vector<Vec<T>> comp(a + b + 1);
    for (int c = 0; c <= a + b; ++c) comp[c].assign(base->basisSize(k - c), T(0));
    const int bd = (p - a) + (q - b);
    if (bd <= d)
      for (const auto& [m, c] : base->basisProduct(p - a, i, q - b, j)) comp[a + b][m] = c;
    return reduce(k, std::move(comp));
  };
  Vec<T> integral(labels[D].size(), T(0));
  {
    const std::size_t off = PB::offset(*base, D, e - 1);
    for (std::size_t j = 0; j < base->basisSize(d); ++j) integral[off + j] = base->integral()[j];
  }
  typename RingModel<T>::Options opts;
  opts.hasIntegration = base->hasIntegration();
  opts.tolerance = base->tolerance();
  opts.checkAxioms = false;
  PB out;
  out.base = base;
  out.rank = e;
  auto model = RingModel<T>::create("P(" + base->name() + ")", D, labels, product, integral, opts);
  out.model = model;
  for (const auto& [n, val] : base->names()) model->setName(n, out.pullback(base->element(val.first, val.second)));
  if (e >= 2) {
    Vec<T> xi(labels[1].size(), T(0));
    xi[PB::offset(*base, 1, 1)] = T(1);
    model->setName("xi", model->element(1, xi));
  } else {
    // Rank one: P(A) = X and xi = c_1(A).
    model->setName("xi", out.pullback(chern[0]));
  }
  return out;
}

}  // namespace hrpair
