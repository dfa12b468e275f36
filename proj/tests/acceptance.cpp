// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include "hrpair/hrpair.hpp"
#include "support.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace hrpair;
using QElt = RingElement<Rational>;
using DElt = RingElement<double>;
using Fourfold = AbelianFourfold<Rational>;

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr int kTrials = 100;

struct Result {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

template <class E>
E power(const E& x, int n) {
  E r = x.model().one();
  for (int k = 0; k < n; ++k) r = r * x;
  return r;
}

QElt randomElement(std::mt19937_64& rng, const ModelPtr<Rational>& m, int p) {
  Vec<Rational> v(m->basisSize(p));
  for (auto& x : v) x = hrpair::testing::randomRational(rng);
  return m->element(p, v);
}

std::vector<GeneratorSpec> chernGenerators(int e) {
  std::vector<GeneratorSpec> gens;
  for (int k = 1; k <= e; ++k) gens.push_back({"c" + std::to_string(k), k});
  return gens;
}

std::vector<QElt> chernOf(const ModelPtr<Rational>& m, int e) {
  std::vector<QElt> c{m->one()};
  for (int k = 1; k <= e; ++k) c.push_back(m->named("c" + std::to_string(k)));
  return c;
}

Result abelianGram() {
  Result r;
  auto sub = Fourfold::numericalRing();
  auto q = gram(sub.model->named("eta")).q;
  Matrix<Rational> expected(3, 3);
  expected(0, 1) = expected(1, 0) = 4;
  expected(2, 2) = -4;
  bool same = true;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) same = same && q(i, k) == expected(i, k);
  r.require(same, "matrix differs");
  r.detail << "Q = [[" << q(0, 0) << "," << q(0, 1) << "," << q(0, 2) << "],[" << q(1, 0) << "," << q(1, 1) << ","
           << q(1, 2) << "],[" << q(2, 0) << "," << q(2, 1) << "," << q(2, 2) << "]]";
  return r;
}

Result abelianKernel() {
  Result r;
  const auto kernelForm = Fourfold::etaKernelForm();
  r.require((Fourfold::eta() * kernelForm).isZero(), "eta ^ kernel form != 0");
  auto full = Fourfold::fullRing();
  auto q = gram(full->named("eta")).q;
  auto sig = inertia(q);
  auto v = torusElement(full, kernelForm).coords();
  bool inKernel = true;
  for (const auto& x : q.apply(v)) inKernel = inKernel && x == 0;
  r.require(sig.zero >= 1, "no zero eigenvalue");
  r.require(inKernel, "form not in kernel");
  r.detail << "16-dim signature (" << sig.positive << "," << sig.zero << "," << sig.negative << "), kernel form killed";
  return r;
}

Result abelianPair() {
  Result r;
  auto sub = Fourfold::numericalRing();
  QElt eta = sub.model->named("eta"), h = sub.model->named("h");
  r.require(eta * h == power(h, 3) * Rational(1, 3), "eta h != h^3/3");
  auto v = isHRPair(eta * h, eta, h);
  r.require(v.passed(), std::string("isHRPair: ") + toString(v.outcome));
  r.detail << "eta h = h^3/3, isHRPair " << toString(v.outcome);
  return r;
}

Result nonHRLimit() {
  Result r;
  auto full = Fourfold::fullRing();
  QElt eta = full->named("eta"), h = full->named("h");
  QElt h2 = h * h, h3 = h2 * h;
  auto pos = isHRPair(h3, eta + h2 * Rational(1, 10), h);
  auto zero = isHRPair(h3, eta, h);
  r.require(pos.passed(), "eps = 1/10 did not pass");
  r.require(zero.outcome != Outcome::Pass, "eps = 0 passed");
  r.detail << "eps=1/10 " << toString(pos.outcome) << ", eps=0 " << toString(zero.outcome);
  return r;
}

Result scrollRing() {
  Result r;
  auto m = relationRing(scrollOverP1Spec());
  QElt xi = m->named("xi"), f = m->named("f");
  r.require((xi * xi * xi).integrate() == -1, "xi^3");
  r.require((xi * xi * f).integrate() == 1, "xi^2 f");
  r.require((f * f).isZero(), "f^2");
  std::vector<QElt> basis;
  for (int p = 0; p <= 3; ++p)
    for (std::size_t k = 0; k < m->basisSize(p); ++k) basis.push_back(m->basisElement(p, k));
  int triples = 0;
  bool assoc = true;
  for (const auto& a : basis)
    for (const auto& b : basis)
      for (const auto& c : basis) {
        if (a.degree() + b.degree() + c.degree() > 3) continue;
        assoc = assoc && (a * b) * c == a * (b * c);
        ++triples;
      }
  r.require(assoc, "associativity");
  r.detail << "xi^3=-1, xi^2 f=1, f^2=0, associative on " << triples << " basis triples";
  return r;
}

Result classicalHR() {
  Result r;
  double worst = std::numeric_limits<double>::infinity();
  int bad = 0;
  for (int d = 2; d <= 4; ++d) {
    auto torus = torusRing<double>(d);
    for (int t = 0; t < kTrials; ++t) {
      auto rng = trialRng(kSeed + 6, static_cast<std::uint64_t>(100 * d + t));
      DElt w = torusElement(torus, formFromHermitian(randomKahlerHermitian(rng, d)));
      auto q = gram(power(w, d - 2)).q;
      auto sig = signature(q, kDefaultTolerance);
      auto ev = symmetricEigenvalues(q);
      double lo = std::numeric_limits<double>::infinity(), hi = 0;
      for (double x : ev) {
        lo = std::min(lo, std::abs(x));
        hi = std::max(hi, std::abs(x));
      }
      const double gap = lo / hi;
      worst = std::min(worst, gap);
      if (!(sig == Signature{1, 0, d * d - 1}) || !(gap > 1e-8)) ++bad;
    }
  }
  r.require(bad == 0, std::to_string(bad) + " trials off");
  r.detail << "3 x " << kTrials << " trials, signature (1,0,d^2-1), worst relative gap " << worst;
  return r;
}

Result schurPairs() {
  Result r;
  int runs = 0, trials = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int d = 2; d <= 4; ++d)
    for (int e = d - 1; e <= 5; ++e)
      for (const auto& lambda : partitionsOf(d - 1)) {
        SampleSearchConfig cfg;
        cfg.d = d;
        cfg.e = e;
        cfg.lambda = lambda;
        cfg.trials = kTrials;
        cfg.seed = kSeed + 7;
        auto rep = sampleSearch(cfg);
        ++runs;
        trials += rep.passes + rep.failures + rep.degenerate;
        worst = std::min(worst, rep.worstMinRelativeEigenvalue);
        if (!rep.nonPassing.empty()) {
          r.require(false, "d=" + std::to_string(d) + " e=" + std::to_string(e) + " lambda=" + lambda.toString());
          std::cerr << rep.toJson().dump(2) << "\n";
        }
      }
  r.detail << runs << " (d,e,lambda) cases, " << trials << " trials, worst min relative eigenvalue " << worst;
  return r;
}

Result hatTrick() {
  Result r;
  int cases = 0;
  for (int n = 1; n <= 3; ++n)
    for (const auto& lambda : partitionsOf(n))
      for (int e = static_cast<int>(lambda.length()); e <= 4; ++e) {
        auto base = freeTruncatedRing(chernGenerators(e), 3);
        auto prod = productWithP1(base);
        auto c = chernOf(prod.model, e);
        auto twisted = twistChern(ChernVector<QElt>(e, c), Rational(1), prod.tau());
        SymPoly s = schur(lambda, e);
        std::vector<QElt> hatArgs(twisted.classes.begin() + 1, twisted.classes.end());
        std::vector<QElt> args(c.begin() + 1, c.end());
        QElt lhs = evaluate<QElt>(s, hatArgs, prod.model->one());
        QElt value = evaluate<QElt>(s, args, prod.model->one());
        QElt deriv = evaluate<QElt>(derived(s, 1), args, prod.model->one());
        r.require(lhs == value + deriv * prod.tau(), "lambda=" + lambda.toString() + " e=" + std::to_string(e));
        ++cases;
      }
  r.detail << cases << " (lambda, e) cases with |lambda| <= 3";
  return r;
}

Result pushforwardSegre() {
  using TP = UPoly<QElt>;
  Result r;
  int cases = 0;
  for (int d = 1; d <= 3; ++d)
    for (int e = 1; e <= 4; ++e) {
      auto gens = chernGenerators(e);
      gens.push_back({"h", 1});
      const int top = std::max(d - 1, 1);
      auto base = freeTruncatedRing(gens, top);
      auto c = chernOf(base, e);
      QElt h = base->named("h");
      auto pb = projBundleRing(base, std::vector<QElt>(c.begin() + 1, c.end()), e);
      const int n = d + e - 2;
      TP xit = TP(pb.xi()) + TP::monomial(pb.pullback(h), 1);
      TP lhs = pow(xit, n, TP(pb.model->one())).map([&](const QElt& x) { return pb.pushforward(x); });

      std::vector<TP> cs;
      for (const auto& x : c) cs.emplace_back(x);
      auto twisted = twistChernBy(ChernVector<TP>(e, cs), TP::monomial(h, 1));
      TP rhs = invertTotalClass(twisted, d - 1)[d - 1] * Rational((d - 1) % 2 == 0 ? 1 : -1);

      const QElt zero = base->zero(d - 1);
      bool same = true;
      for (std::size_t i = 0; i < std::max(lhs.size(), rhs.size()); ++i)
        same = same && lhs.coefficient(i, zero) == rhs.coefficient(i, zero);
      r.require(same, "d=" + std::to_string(d) + " e=" + std::to_string(e));
      ++cases;
    }
  r.detail << cases << " (d,e) cases, exact in t";
  return r;
}

Result extensionIdentities() {
  Result r;
  auto sub = Fourfold::numericalRing();
  auto scroll = relationRing(scrollOverP1Spec());
  std::mt19937_64 rng(kSeed + 10);
  int nonzero = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto& m = t % 2 == 0 ? sub.model : scroll;
    SheafClassData<Rational> f(1 + static_cast<int>(rng() % 6), randomElement(rng, m, 1), randomElement(rng, m, 2));
    SheafClassData<Rational> g(1 + static_cast<int>(rng() % 6), randomElement(rng, m, 1), randomElement(rng, m, 2));
    if (!extensionIdentity(f, g).residual.isZero()) ++nonzero;
  }
  r.require(nonzero == 0, std::to_string(nonzero) + " nonzero residuals");
  auto base = freeTruncatedRing({{"a", 1}, {"b", 1}}, 2);
  QElt a = base->named("a"), b = base->named("b");
  auto ext = extensionData(SheafClassData<Rational>(1, a, base->zero(2)), SheafClassData<Rational>(1, b, base->zero(2)));
  r.require(discriminant(ext) == (a - b) * (a - b) * Rational(-1), "rank-2 closed form");
  r.detail << "1000 random inputs exact, Delta(L_a + L_b) = -(a-b)^2";
  return r;
}

struct PairForms {
  Form<double> omega1, omega2;
};

PairForms randomSchurTwoPair(std::mt19937_64& rng, int e) {
  std::vector<Form<double>> forms;
  for (int k = 0; k < e; ++k) forms.push_back(formFromHermitian(randomKahlerHermitian(rng, 3)));
  auto [a, b] = schurPairForms(Partition({2}), e, forms);
  return {a, b};
}

bool withinTolerance(const TraceReport<double>& rep) {
  const double floor = -1e-9 * rep.scale;
  if (rep.total < floor) return false;
  for (const auto& row : rep.terms)
    for (double x : row)
      if (x < floor) return false;
  return true;
}

Result traceCheckRandom() {
  Result r;
  int bad = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < kTrials; ++t) {
    auto rng = trialRng(kSeed + 11, static_cast<std::uint64_t>(t));
    const int rank = 2 + t % 3, e = 2 + (t / 3) % 3;
    auto pair = randomSchurTwoPair(rng, e);
    auto f0 = constraintProject(randomCurvature(rng, rank, 3), pair.omega1);
    auto rep = traceCheck(f0, pair.omega1, pair.omega2);
    worst = std::min(worst, rep.minTerm / rep.scale);
    if (!withinTolerance(rep) || !rep.passed()) {
      ++bad;
      std::cerr << rep.toJson().dump(2) << "\n";
    }
  }
  r.require(bad == 0, std::to_string(bad) + " negative trials");
  auto rng = trialRng(kSeed + 11, kTrials);
  auto pair = randomSchurTwoPair(rng, 3);
  auto flat = traceCheck(CurvatureMatrix<double>(3, 3), pair.omega1, pair.omega2);
  r.require(flat.projectivelyFlat && flat.passed(), "F0 = 0 not flagged");
  r.detail << kTrials << " trials r in 2..4, d=3, worst relative term " << worst << ", F0=0 flagged projectively flat";
  return r;
}

Result higgsRandom() {
  Result r;
  int bad = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < kTrials; ++t) {
    auto rng = trialRng(kSeed + 12, static_cast<std::uint64_t>(t));
    const int rank = 2 + t % 3;
    auto pair = randomSchurTwoPair(rng, 2 + t % 3);
    auto theta = randomNilpotentHiggs(rng, rank, 3);
    auto raw = randomCurvature(rng, rank, 3);
    auto rep = higgsTraceCheck(raw, theta, pair.omega1, pair.omega2);
    worst = std::min(worst, rep.minTerm / rep.scale);
    if (!withinTolerance(rep) || !rep.passed()) {
      ++bad;
      std::cerr << rep.toJson().dump(2) << "\n";
    }
  }
  r.require(bad == 0, std::to_string(bad) + " negative trials");
  r.detail << kTrials << " nilpotent Higgs fields, worst relative term " << worst;
  return r;
}

Result totalClassInversion() {
  Result r;
  const int trunc = 6;
  auto base = freeTruncatedRing({{"x", 1}, {"y", 1}, {"z", 2}}, trunc);
  std::mt19937_64 rng(kSeed + 13);
  int cases = 0;
  for (int rank = 1; rank <= 5; ++rank)
    for (int t = 0; t < 20; ++t) {
      std::vector<QElt> c{base->one()};
      for (int k = 1; k <= rank; ++k) c.push_back(randomElement(rng, base, k));
      auto s = invertTotalClass(ChernVector<QElt>(rank, c), trunc);
      bool ok = s[0] == base->one();
      for (int k = 1; k <= trunc; ++k) {
        QElt acc = base->zero(k);
        for (int i = 0; i <= std::min(k, rank); ++i) acc = acc + c[i] * s[k - i];
        ok = ok && acc.isZero();
      }
      r.require(ok, "rank " + std::to_string(rank) + " trial " + std::to_string(t));
      ++cases;
    }
  r.detail << cases << " random Chern vectors, ranks 1..5, truncation degree " << trunc;
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"abelian fourfold Gram matrix", abelianGram},
      {"abelian fourfold kernel form", abelianKernel},
      {"abelian fourfold HR pair", abelianPair},
      {"non-HR limit boundary", nonHRLimit},
      {"scroll over P1 relations", scrollRing},
      {"classical Hodge-Riemann (random)", classicalHR},
      {"Schur pairs pointwise (random)", schurPairs},
      {"hat-trick decomposition", hatTrick},
      {"pushforward vs twisted Segre", pushforwardSegre},
      {"extension identity", extensionIdentities},
      {"curvature trace positivity (random)", traceCheckRandom},
      {"Higgs trace positivity (random)", higgsRandom},
      {"total class inversion", totalClassInversion},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Result res;
    try {
      res = criteria[i].second();
    } catch (const std::exception& e) {
      res.ok = false;
      res.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!res.ok) ++failed;
    std::cout << (res.ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << res.detail.str()
              << " (" << std::fixed << std::setprecision(2) << secs << "s)" << std::defaultfloat << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
