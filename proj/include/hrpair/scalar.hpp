#pragma once

// Scalar backends: exact rationals (GMP through Boost.Multiprecision) and
// double precision, plus a small complex type usable with either.

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace hrpair {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Relative tolerance used by the float backend for every zero test.
inline constexpr double kDefaultTolerance = 1e-9;

template <class T>
inline constexpr bool is_exact_v = !std::is_floating_point_v<T>;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Scalar helpers

template <class T>
double toDouble(const T& x) {
  if constexpr (std::is_floating_point_v<T>)
    return static_cast<double>(x);
  else
    return x.template convert_to<double>();
}

template <class T>
T fromDouble(double x) {
  if constexpr (std::is_floating_point_v<T>)
    return static_cast<T>(x);
  else
    return Rational(x);  // exact binary value of x
}

/// Zero test: exact equality for rationals, |x| <= tol * scale for doubles.
template <class T>
bool nearZero(const T& x, double tol = kDefaultTolerance, double scale = 1.0) {
  if constexpr (std::is_floating_point_v<T>)
    return std::abs(x) <= tol * scale;
  else
    return x == 0;
}

template <class T>
int signOf(const T& x, double tol = kDefaultTolerance, double scale = 1.0) {
  if (nearZero(x, tol, scale)) return 0;
  return x > 0 ? 1 : -1;
}

inline Rational parseRational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  if (s.empty()) throw DomainError("empty number");
  // Accept decimals like "0.1" exactly as 1/10.
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    bool neg = s[0] == '-';
    std::string intPart = s.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
    std::string frac = s.substr(dot + 1);
    if (intPart.empty()) intPart = "0";
    Rational den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational num(intPart + frac);
    Rational r = num / den;
    return neg ? Rational(-r) : r;
  }
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw DomainError("cannot parse number '" + text + "'");
  }
}

template <class T>
T parseScalar(const std::string& text) {
  if constexpr (std::is_floating_point_v<T>)
    return toDouble(parseRational(text));
  else
    return parseRational(text);
}

template <class T>
std::string formatScalar(const T& x) {
  std::ostringstream os;
  if constexpr (std::is_floating_point_v<T>) {
    os.precision(17);
    os << x;
  } else {
    os << x;  // "p/q" or "p"
  }
  return os.str();
}

/// Binomial coefficient; zero whenever k < 0, n < 0 or k > n.
inline long long binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline long long factorial(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// ---------------------------------------------------------------------------
// Complex numbers over an arbitrary real scalar (std::complex is unspecified
// for non-floating types, so Gaussian rationals need their own type).

template <class T>
struct Complex {
  T re{};
  T im{};

  Complex() = default;
  Complex(T r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  static Complex I() { return Complex(T(0), T(1)); }

  Complex conj() const { return {re, -im}; }
  Complex operator-() const { return {-re, -im}; }
  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    T r = re * o.re - im * o.im;
    T i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    T n = o.re * o.re + o.im * o.im;
    if (n == 0) throw DomainError("complex division by zero");
    T r = (re * o.re + im * o.im) / n;
    T i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

  /// |z|^2
  T norm() const { return re * re + im * im; }
  double absApprox() const { return std::hypot(toDouble(re), toDouble(im)); }
  bool isZero() const { return re == 0 && im == 0; }

  friend std::ostream& operator<<(std::ostream& os, const Complex& z) {
    return os << '(' << formatScalar(z.re) << ',' << formatScalar(z.im) << ')';
  }
};

/// i^k for integer k.
template <class T>
Complex<T> iPower(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {T(1), T(0)};
    case 1: return {T(0), T(1)};
    case 2: return {T(-1), T(0)};
    default: return {T(0), T(-1)};
  }
}

template <class T>
bool nearZero(const Complex<T>& z, double tol = kDefaultTolerance, double scale = 1.0) {
  if constexpr (std::is_floating_point_v<T>)
    return z.absApprox() <= tol * scale;
  else
    return z.isZero();
}

}  // namespace hrpair
