#pragma once

// Hodge-Riemann checks: Gram matrices of degree-(d-2) classes, signatures,
// division by eta, HR property and HR pair verdicts (ring level and
// pointwise on forms), the positive cone, and seeded random searches.

#include "hrpair/form.hpp"
#include "hrpair/linalg.hpp"
#include "hrpair/ring.hpp"
#include "hrpair/sympoly.hpp"
#include "hrpair/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace hrpair {

// ---------------------------------------------------------------------------
// Gram form

template <class T>
struct GramForm {
  RingElement<T> eta;
  Matrix<T> q;
};

/// Q(a, b) = integral(alpha_a * eta * alpha_b) over the degree-1 basis.
template <class T>
GramForm<T> gram(const RingElement<T>& eta) {
  const auto& m = eta.model();
  const int d = m.dimension();
  if (eta.degree() != d - 2)
    throw DomainError("gram: eta has degree " + std::to_string(eta.degree()) + ", expected " + std::to_string(d - 2));
  const std::size_t n = m.basisSize(1);
  std::vector<RingElement<T>> partial;
  for (std::size_t b = 0; b < n; ++b) partial.push_back(m.basisElement(1, b) * eta);
  Matrix<T> q(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      T v = (m.basisElement(1, a) * partial[b]).integrate();
      q(a, b) = v;
      q(b, a) = v;
    }
  return {eta, q};
}

template <class T>
Signature signature(const Matrix<T>& q, double zeroTolerance = kDefaultTolerance) {
  return inertia(q, zeroTolerance);
}

namespace detail {

/// Vector v != 0 with Q v = 0 (up to tolerance), if Q is singular.
template <class T>
std::optional<Vec<T>> kernelWitness(const Matrix<T>& q, double tol) {
  auto dg = diagonalize(q);
  const double scale = spectralScale(dg.diagonal);
  for (std::size_t k = 0; k < dg.diagonal.size(); ++k)
    if (signOf(dg.diagonal[k], tol, scale) == 0) return dg.basis.column(k);
  return std::nullopt;
}

/// Basis of {x : sum_i l_i x_i = 0} as columns of a matrix.
template <class T>
Matrix<T> hyperplaneBasis(const Vec<T>& l, double tol) {
  Matrix<T> row(1, l.size());
  for (std::size_t i = 0; i < l.size(); ++i) row(0, i) = l[i];
  auto ns = nullspace(row, tol);
  Matrix<T> k(l.size(), ns.size());
  for (std::size_t j = 0; j < ns.size(); ++j)
    for (std::size_t i = 0; i < l.size(); ++i) k(i, j) = ns[j][i];
  return k;
}

/// Restriction K^T Q K.
template <class T>
Matrix<T> restrictForm(const Matrix<T>& q, const Matrix<T>& k) {
  return k.transpose() * q * k;
}

/// Negative definiteness of a symmetric matrix; on failure returns a
/// direction x (in the matrix's own coordinates) with x^T Q x >= 0.
template <class T>
std::pair<bool, Vec<T>> negativeDefinite(const Matrix<T>& q, double tol) {
  if (q.rows() == 0) return {true, {}};
  auto dg = diagonalize(q);
  const double scale = std::max(spectralScale(dg.diagonal), std::numeric_limits<double>::min());
  for (std::size_t k = 0; k < dg.diagonal.size(); ++k)
    if (signOf(dg.diagonal[k], tol, scale) >= 0) return {false, dg.basis.column(k)};
  return {true, {}};
}

template <class T>
double minRelativeEigenvalue(const std::vector<double>& ev) {
  double mx = 0, mn = std::numeric_limits<double>::infinity();
  for (double x : ev) {
    mx = std::max(mx, std::abs(x));
    mn = std::min(mn, std::abs(x));
  }
  return mx == 0 ? 0 : mn / mx;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// HR property, division, HR pairs

/// eta of degree d-2 has the HR property with respect to h: Q(h, h) > 0 and
/// Q is negative definite on the Q-orthogonal complement of h.
template <class T>
Verdict hasHRProperty(const RingElement<T>& eta, const RingElement<T>& h, double tol = kDefaultTolerance) {
  if (h.degree() != 1) throw DomainError("hasHRProperty: h must have degree 1");
  auto g = gram(eta);
  const Matrix<T>& q = g.q;
  Verdict v;
  v.check = "hodge-riemann property";
  v.tolerances["relative_zero"] = tol;
  v.eigenvalues = symmetricEigenvalues(q);
  v.signature = signature(q, tol);
  v.values["min_relative_eigenvalue"] = formatScalar(detail::minRelativeEigenvalue<T>(v.eigenvalues));
  const T qhh = bilinear(q, h.coords(), h.coords());
  v.values["integral h^2 eta"] = formatScalar(qhh);
  const double scale = std::max(1.0, q.maxAbs() * std::max(1.0, h.model().dimension() * 1.0));
  if (v.signature.zero > 0) {
    v.outcome = Outcome::Degenerate;
    if (auto w = detail::kernelWitness(q, tol)) v.setWitness(*w, "kernel vector of Q (degree-1 coordinates)");
    v.notes.push_back("intersection form has zero eigenvalues");
    return v;
  }
  if (signOf(qhh, tol, scale) <= 0) {
    v.outcome = Outcome::Fail;
    v.setWitness(h.coords(), "h itself: integral h^2 eta is not positive");
    return v;
  }
  Vec<T> l = q.apply(h.coords());
  Matrix<T> k = detail::hyperplaneBasis(l, tol);
  auto [neg, dir] = detail::negativeDefinite(detail::restrictForm(q, k), tol);
  if (!neg) {
    v.outcome = Outcome::Fail;
    v.setWitness(k.apply(dir), "alpha with integral(alpha eta h) = 0 and integral(alpha^2 eta) >= 0");
    return v;
  }
  v.outcome = Outcome::Pass;
  return v;
}

/// Raised when multiplication by eta is not injective on degree 1.
class SingularDivision : public DomainError {
 public:
  SingularDivision(const std::string& what, std::vector<std::string> witness)
      : DomainError(what), witness_(std::move(witness)) {}
  const std::vector<std::string>& witness() const { return witness_; }

 private:
  std::vector<std::string> witness_;
};

/// gamma / eta: the unique degree-1 class beta with beta * eta = gamma.
template <class T>
RingElement<T> divide(const RingElement<T>& gamma, const RingElement<T>& eta, double tol = kDefaultTolerance) {
  const auto& m = eta.model();
  const int d = m.dimension();
  if (gamma.degree() != d - 1 || eta.degree() != d - 2) throw DomainError("divide: expects degrees d-1 and d-2");
  const std::size_t n = m.basisSize(1), r = m.basisSize(d - 1);
  Matrix<T> mult(r, n);
  for (std::size_t b = 0; b < n; ++b) {
    auto col = (m.basisElement(1, b) * eta).coords();
    for (std::size_t i = 0; i < r; ++i) mult(i, b) = col[i];
  }
  auto ker = nullspace(mult, tol);
  if (!ker.empty()) {
    std::vector<std::string> w;
    for (const T& x : ker.front()) w.push_back(formatScalar(x));
    throw SingularDivision("divide: multiplication by eta has a kernel on degree 1", w);
  }
  auto sol = detail::solveInColumnSpan(mult, gamma.coords(), tol);
  if (!sol) throw DomainError("divide: gamma is not a multiple of eta");
  return m.element(1, *sol);
}

/// (eta1, eta2) is an HR pair: (1) eta2 has the HR property w.r.t. h,
/// (2) integral(h eta1) > 0, (3) integral(eta2 beta^2) > 0 with
/// beta = eta1 / eta2. When (2) holds the verdict is cross-checked against
/// negative definiteness of Q on {alpha : integral(alpha eta1) = 0}.
template <class T>
Verdict isHRPair(const RingElement<T>& eta1, const RingElement<T>& eta2, const RingElement<T>& h,
                 double tol = kDefaultTolerance) {
  const auto& m = eta1.model();
  const int d = m.dimension();
  if (eta1.degree() != d - 1) throw DomainError("isHRPair: eta_{d-1} has the wrong degree");
  Verdict v = hasHRProperty(eta2, h, tol);
  v.check = "hodge-riemann pair";
  const T c2 = (h * eta1).integrate();
  v.values["integral h eta_{d-1}"] = formatScalar(c2);
  const double scale = std::max(1.0, std::abs(toDouble(c2)));
  const bool clause2 = signOf(c2, tol, scale) > 0;
  v.values["clause1_hr_property"] = toString(v.outcome);
  v.values["clause2"] = clause2 ? "pass" : "fail";

  const Outcome clause1 = v.outcome;
  std::optional<bool> clause3;
  if (clause1 != Outcome::Degenerate) {
    try {
      RingElement<T> beta = divide(eta1, eta2, tol);
      const T c3 = (eta2 * beta * beta).integrate();
      v.values["integral eta_{d-2} beta^2"] = formatScalar(c3);
      v.values["beta"] = beta.toString();
      clause3 = signOf(c3, tol, std::max(1.0, std::abs(toDouble(c3)))) > 0;
      v.values["clause3"] = *clause3 ? "pass" : "fail";
    } catch (const SingularDivision& e) {
      v.notes.push_back(e.what());
    }
  }

  if (clause1 == Outcome::Degenerate)
    v.outcome = Outcome::Degenerate;
  else if (clause1 == Outcome::Pass && clause2 && clause3.value_or(false))
    v.outcome = Outcome::Pass;
  else
    v.outcome = Outcome::Fail;
  if (v.outcome == Outcome::Fail && clause1 == Outcome::Pass && !clause2) {
    v.setWitness(h.coords(), "h with integral(h eta_{d-1}) <= 0");
  }

  if (clause2) {
    // Kernel characterization.
    const auto g = gram(eta2);
    Vec<T> l(m.basisSize(1));
    for (std::size_t a = 0; a < l.size(); ++a) l[a] = (m.basisElement(1, a) * eta1).integrate();
    Matrix<T> k = detail::hyperplaneBasis(l, tol);
    auto [neg, dir] = detail::negativeDefinite(detail::restrictForm(g.q, k), tol);
    v.values["kernel_characterization"] = neg ? "pass" : "fail";
    const bool defPass = v.outcome == Outcome::Pass;
    if (neg != defPass) {
      v.notes.push_back("definition and kernel characterization disagree");
      v.outcome = Outcome::Fail;
    }
    if (!neg && v.witness.empty())
      v.setWitness(k.apply(dir), "alpha with integral(alpha eta_{d-1}) = 0 and integral(alpha^2 eta_{d-2}) >= 0");
  }
  return v;
}

/// Tries each candidate h in turn; the verdict records which one certified.
template <class T>
Verdict isHRPairSearchingH(const RingElement<T>& eta1, const RingElement<T>& eta2,
                           const std::vector<std::pair<std::string, RingElement<T>>>& candidates,
                           double tol = kDefaultTolerance) {
  if (candidates.empty()) throw DomainError("isHRPairSearchingH: no candidate h");
  std::optional<Verdict> last;
  for (const auto& [name, h] : candidates) {
    Verdict v = isHRPair(eta1, eta2, h, tol);
    v.values["h"] = name;
    if (v.passed()) return v;
    last = v;
  }
  return *last;
}

template <class T>
struct PosConeResult {
  bool contains = false;
  T byH{};      // integral(beta eta h)
  T selfPair{}; // integral(beta^2 eta)
};

/// beta lies in Pos_eta: integral(beta eta h) > 0 and integral(beta^2 eta) > 0.
template <class T>
PosConeResult<T> posConeContains(const RingElement<T>& beta, const RingElement<T>& eta, const RingElement<T>& h,
                                 double tol = kDefaultTolerance) {
  PosConeResult<T> r;
  r.byH = (beta * eta * h).integrate();
  r.selfPair = (beta * beta * eta).integrate();
  auto pos = [&](const T& x) { return signOf(x, tol, std::max(1.0, std::abs(toDouble(x)))) > 0; };
  r.contains = pos(r.byH) && pos(r.selfPair);
  return r;
}

// ---------------------------------------------------------------------------
// Pointwise (form level)

template <class T>
struct WeakPositivityProbe {
  int samples = 32;
  std::uint64_t seed = 1;
};

/// Sampled weak positivity of a real (p,p)-form: minimum of restrictToPlane
/// over random complex p-frames. A negative minimum refutes positivity.
template <class T>
T sampledWeakPositivity(const Form<T>& f, const WeakPositivityProbe<T>& probe) {
  const int d = f.dim(), p = f.p();
  std::mt19937_64 rng(probe.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::optional<T> best;
  for (int s = 0; s < probe.samples; ++s) {
    std::vector<std::vector<Complex<T>>> frame(p, std::vector<Complex<T>>(d));
    for (auto& v : frame)
      for (auto& z : v) z = Complex<T>(fromDouble<T>(g(rng)), fromDouble<T>(g(rng)));
    try {
      T val = restrictToPlane(f, frame);
      if (!best || val < *best) best = val;
    } catch (const DomainError&) {
      // degenerate frame; skip
    }
  }
  if (!best) throw DomainError("sampledWeakPositivity: no usable frame");
  return *best;
}

/// Pointwise HR pair of forms (Omega_{d-1}, Omega_{d-2}) with respect to a
/// strictly positive (1,1)-form omega, evaluated on the algebra of all real
/// (p,p)-forms at a point.
template <class T>
Verdict pointwiseHRPair(const Form<T>& omega1, const Form<T>& omega2, const Form<T>& omega,
                        double tol = kDefaultTolerance, const WeakPositivityProbe<T>* probe = nullptr) {
  const int d = omega.dim();
  if (d < 2) throw DomainError("pointwiseHRPair needs d >= 2");
  if (omega1.dim() != d || omega2.dim() != d) throw DomainError("pointwiseHRPair: forms on different spaces");
  if (omega.p() != 1 || omega.q() != 1 || !isStrictlyPositive11(omega, tol))
    throw DomainError("pointwiseHRPair: omega must be a strictly positive (1,1)-form");
  if (omega1.p() != d - 1 || omega1.q() != d - 1 || omega2.p() != d - 2 || omega2.q() != d - 2)
    throw DomainError("pointwiseHRPair: expected bidegrees (d-1,d-1) and (d-2,d-2)");
  auto torus = torusRing<T>(d);
  auto e1 = torusElement(torus, omega1, tol), e2 = torusElement(torus, omega2, tol), w = torusElement(torus, omega, tol);
  Verdict v = isHRPair(e1, e2, w, tol);
  v.check = "pointwise hodge-riemann pair";
  // Strict weak positivity of Omega_{d-2}: exact in degrees 0 and 1, sampled otherwise.
  bool positive = true;
  if (d - 2 == 0) {
    positive = signOf(omega2.coefficient(0, 0).re, tol) > 0;
  } else if (d - 2 == 1) {
    positive = isStrictlyPositive11(omega2, tol);
  } else if (probe) {
    T minVal = sampledWeakPositivity(omega2, *probe);
    v.values["sampled min restriction of eta_{d-2}"] = formatScalar(minVal);
    positive = minVal > 0;
  }
  if (!positive) {
    v.outcome = Outcome::Fail;
    v.notes.push_back("Omega_{d-2} is not strictly weakly positive");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Random Kahler forms and seeded searches

/// H = A* A + delta I with A standard complex Gaussian (real and imaginary
/// parts N(0, 1/2)).
inline Matrix<Complex<double>> randomKahlerHermitian(std::mt19937_64& rng, int d, double delta = 1e-3) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Matrix<Complex<double>> a(d, d), h(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex<double>(g(rng), g(rng));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Complex<double> s = i == j ? Complex<double>(delta) : Complex<double>();
      for (int k = 0; k < d; ++k) s += a(k, i).conj() * a(k, j);
      h(i, j) = s;
    }
  // Exact Hermitian symmetry.
  for (int i = 0; i < d; ++i) {
    h(i, i).im = 0;
    for (int j = i + 1; j < d; ++j) h(j, i) = h(i, j).conj();
  }
  return h;
}

/// Per-trial generator: independent of thread layout.
inline std::mt19937_64 trialRng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

struct SampleSearchConfig {
  int d = 3;
  int e = 3;
  Partition lambda{std::vector<int>{2}};
  int trials = 100;
  std::uint64_t seed = 7;
  double delta = 1e-3;
  double tolerance = kDefaultTolerance;
  int threads = 0;  // 0: hardware concurrency
};

struct SampleTrial {
  int index = 0;
  Outcome outcome = Outcome::Pass;
  double minRelativeEigenvalue = 0;
  double clause2 = 0;
  double clause3 = 0;
  std::vector<Matrix<Complex<double>>> kahler;  // reproduction data
  Verdict verdict;
};

struct SampleSearchReport {
  SampleSearchConfig config;
  int passes = 0, failures = 0, degenerate = 0;
  double worstMinRelativeEigenvalue = std::numeric_limits<double>::infinity();
  double worstClause2 = std::numeric_limits<double>::infinity();
  double worstClause3 = std::numeric_limits<double>::infinity();
  std::vector<SampleTrial> nonPassing;

  nlohmann::json toJson() const {
    nlohmann::json j;
    j["config"] = {{"d", config.d},         {"e", config.e},        {"lambda", config.lambda.toString()},
                   {"trials", config.trials}, {"seed", config.seed}, {"delta", config.delta},
                   {"tolerance", config.tolerance}};
    j["passes"] = passes;
    j["failures"] = failures;
    j["degenerate"] = degenerate;
    if (config.trials > 0) {
      j["worst"] = {{"min_relative_eigenvalue", worstMinRelativeEigenvalue},
                    {"integral h eta_{d-1}", worstClause2},
                    {"integral eta_{d-2} beta^2", worstClause3}};
    }
    nlohmann::json bad = nlohmann::json::array();
    for (const auto& t : nonPassing) {
      nlohmann::json tj;
      tj["trial"] = t.index;
      tj["outcome"] = toString(t.outcome);
      tj["verdict"] = t.verdict.toJson();
      nlohmann::json ks = nlohmann::json::array();
      for (const auto& h : t.kahler) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < h.rows(); ++i) {
          nlohmann::json row = nlohmann::json::array();
          for (std::size_t k = 0; k < h.cols(); ++k) row.push_back({h(i, k).re, h(i, k).im});
          rows.push_back(row);
        }
        ks.push_back(rows);
      }
      tj["kahler_hermitian_matrices"] = ks;
      bad.push_back(tj);
    }
    j["non_passing"] = bad;
    return j;
  }
};

/// Schur pair (s_lambda, s'_lambda) of e random Kahler forms on C^d, as forms.
inline std::pair<Form<double>, Form<double>> schurPairForms(const Partition& lambda, int e,
                                                            const std::vector<Form<double>>& kahler) {
  const int d = kahler.front().dim();
  SymPoly s = schur(lambda, e);
  Form<double> one = Form<double>::one(d);
  std::span<const Form<double>> roots(kahler);
  auto omega1 = evaluateOnRoots<Form<double>>(s, roots, one);
  auto omega2 = evaluateOnRoots<Form<double>>(derived(s, 1), roots, one);
  return {omega1, omega2};
}

/// Runs one trial of the Schur-pair search.
inline SampleTrial schurPairTrial(const SampleSearchConfig& cfg, int index) {
  auto rng = trialRng(cfg.seed, static_cast<std::uint64_t>(index));
  SampleTrial t;
  t.index = index;
  std::vector<Form<double>> forms;
  for (int k = 0; k < cfg.e; ++k) {
    t.kahler.push_back(randomKahlerHermitian(rng, cfg.d, cfg.delta));
    forms.push_back(formFromHermitian(t.kahler.back()));
  }
  auto [omega1, omega2] = schurPairForms(cfg.lambda, cfg.e, forms);
  WeakPositivityProbe<double> probe{16, static_cast<std::uint64_t>(index) + 1};
  t.verdict = pointwiseHRPair(omega1, omega2, standardKahler<double>(cfg.d), cfg.tolerance, &probe);
  t.outcome = t.verdict.outcome;
  t.minRelativeEigenvalue = detail::minRelativeEigenvalue<double>(t.verdict.eigenvalues);
  auto num = [&](const char* key) {
    auto it = t.verdict.values.find(key);
    return it == t.verdict.values.end() ? std::nan("") : std::stod(it->second);
  };
  t.clause2 = num("integral h eta_{d-1}");
  t.clause3 = num("integral eta_{d-2} beta^2");
  return t;
}

inline void validate(const SampleSearchConfig& cfg) {
  if (cfg.d < 2 || cfg.d > 5) throw DomainError("sample search supports 2 <= d <= 5");
  if (cfg.lambda.weight() != cfg.d - 1)
    throw DomainError("partition " + cfg.lambda.toString() + " has weight " + std::to_string(cfg.lambda.weight()) +
                      ", expected d-1 = " + std::to_string(cfg.d - 1));
  if (cfg.e < cfg.lambda.length()) throw DomainError("rank e is smaller than the length of the partition");
  if (cfg.trials < 0) throw DomainError("negative trial count");
}

/// Seeded search over random Kahler data; trials run concurrently and are
/// merged by trial index, so results depend only on the seed.
inline SampleSearchReport sampleSearch(const SampleSearchConfig& cfg) {
  validate(cfg);
  SampleSearchReport rep;
  rep.config = cfg;
  if (cfg.trials == 0) return rep;
  torusRing<double>(cfg.d);  // build the cache before spawning workers
  std::vector<SampleTrial> results(cfg.trials);
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cfg.trials));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = static_cast<int>(w); i < cfg.trials; i += static_cast<int>(threads)) results[i] = schurPairTrial(cfg, i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& t : results) {
    switch (t.outcome) {
      case Outcome::Pass: ++rep.passes; break;
      case Outcome::Fail: ++rep.failures; break;
      case Outcome::Degenerate: ++rep.degenerate; break;
    }
    rep.worstMinRelativeEigenvalue = std::min(rep.worstMinRelativeEigenvalue, t.minRelativeEigenvalue);
    if (!std::isnan(t.clause2)) rep.worstClause2 = std::min(rep.worstClause2, t.clause2);
    if (!std::isnan(t.clause3)) rep.worstClause3 = std::min(rep.worstClause3, t.clause3);
    if (t.outcome != Outcome::Pass) rep.nonPassing.push_back(std::move(t));
  }
  return rep;
}

}  // namespace hrpair
