#pragma once

// Univariate polynomials in a formal parameter t with coefficients in any
// commutative algebra type C. Missing coefficients are zero, so C never needs
// a default "zero" value (ring elements carry their degree and model).

#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace hrpair {

template <class C>
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(C constant) { coeffs_.emplace_back(std::move(constant)); }

  /// c * t^power
  static UPoly monomial(C c, std::size_t power) {
    UPoly p;
    p.coeffs_.resize(power + 1);
    p.coeffs_[power] = std::move(c);
    return p;
  }

  std::size_t size() const { return coeffs_.size(); }
  bool hasCoefficient(std::size_t i) const { return i < coeffs_.size() && coeffs_[i].has_value(); }
  const std::optional<C>& slot(std::size_t i) const {
    static const std::optional<C> none;
    return i < coeffs_.size() ? coeffs_[i] : none;
  }
  /// Coefficient of t^i, or `zero` when absent.
  C coefficient(std::size_t i, const C& zero) const { return hasCoefficient(i) ? *coeffs_[i] : zero; }

  void set(std::size_t i, C c) {
    if (coeffs_.size() <= i) coeffs_.resize(i + 1);
    coeffs_[i] = std::move(c);
  }

  UPoly truncated(std::size_t maxOrder) const {
    UPoly r = *this;
    if (r.coeffs_.size() > maxOrder + 1) r.coeffs_.resize(maxOrder + 1);
    return r;
  }

  UPoly& operator+=(const UPoly& o) {
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
      if (!o.coeffs_[i]) continue;
      if (coeffs_[i])
        *coeffs_[i] = *coeffs_[i] + *o.coeffs_[i];
      else
        coeffs_[i] = o.coeffs_[i];
    }
    return *this;
  }
  UPoly operator-() const {
    UPoly r = *this;
    for (auto& c : r.coeffs_)
      if (c) *c = -*c;
    return r;
  }
  UPoly& operator-=(const UPoly& o) { return *this += -o; }

  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }

  friend UPoly operator*(const UPoly& a, const UPoly& b) { return multiply(a, b, SIZE_MAX); }

  /// Coefficientwise scalar multiplication.
  template <class S>
    requires(!std::is_same_v<std::decay_t<S>, UPoly>)
  friend UPoly operator*(const UPoly& a, const S& s) {
    UPoly r = a;
    for (auto& c : r.coeffs_)
      if (c) *c = *c * s;
    return r;
  }

  static UPoly multiply(const UPoly& a, const UPoly& b, std::size_t maxOrder) {
    UPoly r;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (!a.coeffs_[i]) continue;
      for (std::size_t j = 0; j < b.coeffs_.size() && i + j <= maxOrder; ++j) {
        if (!b.coeffs_[j]) continue;
        C prod = *a.coeffs_[i] * *b.coeffs_[j];
        std::size_t k = i + j;
        if (r.coeffs_.size() <= k) r.coeffs_.resize(k + 1);
        if (r.coeffs_[k])
          *r.coeffs_[k] = *r.coeffs_[k] + prod;
        else
          r.coeffs_[k] = std::move(prod);
      }
    }
    return r;
  }

  /// Apply f to every present coefficient.
  template <class F>
  auto map(F&& f) const {
    using D = decltype(f(std::declval<const C&>()));
    UPoly<D> r;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i]) r.set(i, f(*coeffs_[i]));
    return r;
  }

 private:
  std::vector<std::optional<C>> coeffs_;
};

template <class C>
UPoly<C> pow(const UPoly<C>& base, int n, const UPoly<C>& one, std::size_t maxOrder = SIZE_MAX) {
  if (n < 0) throw std::invalid_argument("negative power");
  UPoly<C> r = one;
  for (int i = 0; i < n; ++i) r = UPoly<C>::multiply(r, base, maxOrder);
  return r;
}

}  // namespace hrpair
