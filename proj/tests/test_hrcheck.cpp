#include "hrpair/hrcheck.hpp"
#include "hrpair/known_examples.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hrpair;
using QElt = RingElement<Rational>;
using DElt = RingElement<double>;
using Fourfold = AbelianFourfold<Rational>;

namespace {

QElt pow(const QElt& x, int n) {
  QElt r = x.model().one();
  for (int k = 0; k < n; ++k) r = r * x;
  return r;
}

DElt pow(const DElt& x, int n) {
  DElt r = x.model().one();
  for (int k = 0; k < n; ++k) r = r * x;
  return r;
}

Vec<Rational> parseWitness(const std::vector<std::string>& w) {
  Vec<Rational> v;
  for (const auto& s : w) v.push_back(parseRational(s));
  return v;
}

DElt randomKahlerElement(std::mt19937_64& rng, const ModelPtr<double>& torus, int d) {
  return torusElement(torus, formFromHermitian(randomKahlerHermitian(rng, d)));
}

}  // namespace

TEST(Gram, AbelianFourfoldNumericalRing) {
  auto sub = Fourfold::numericalRing();
  const auto& m = sub.model;
  ASSERT_EQ(m->basisLabel(1, 0), "theta1");
  ASSERT_EQ(m->basisLabel(1, 1), "theta2");
  ASSERT_EQ(m->basisLabel(1, 2), "lambda");
  auto g = gram(m->named("eta"));
  auto expected = Matrix<Rational>::fromRows({{0, 4, 0}, {4, 0, 0}, {0, 0, -4}});
  EXPECT_EQ(g.q, expected);
  EXPECT_EQ(signature(g.q), (Signature{1, 0, 2}));
  auto v = hasHRProperty(m->named("eta"), m->named("h"));
  EXPECT_EQ(v.outcome, Outcome::Pass);
}

TEST(Gram, AgreesWithFormIntegrals) {
  // Entries computed directly by wedging forms.
  auto torus = torusRing(3);
  auto w = standardKahler<Rational>(3);
  auto g = gram(torusElement(torus, w));
  RealFormBasis<Rational> basis(3, 1);
  for (std::size_t a = 0; a < basis.size(); a += 2)
    for (std::size_t b = 0; b < basis.size(); b += 3)
      EXPECT_EQ(g.q(a, b), (basis.element(a) * w * basis.element(b)).integrateTop());
}

TEST(HRPair, AbelianFourfoldNumericalRing) {
  auto sub = Fourfold::numericalRing();
  const auto& m = sub.model;
  QElt eta = m->named("eta"), h = m->named("h");
  auto v = isHRPair(eta * h, eta, h);
  EXPECT_EQ(v.outcome, Outcome::Pass);
  EXPECT_EQ(v.values.at("kernel_characterization"), "pass");
  EXPECT_EQ(divide(eta * h, eta), h);
}

TEST(HRPair, AbelianFourfoldFullAlgebraIsDegenerateAtZero) {
  auto m = Fourfold::fullRing();
  QElt eta = m->named("eta"), h = m->named("h");
  auto hp = hasHRProperty(eta, h);
  EXPECT_EQ(hp.outcome, Outcome::Degenerate);
  EXPECT_GE(hp.signature.zero, 1);
  auto q = gram(eta).q;
  // Witness lies in the kernel.
  auto w = parseWitness(hp.witness);
  for (Rational x : q.apply(w)) EXPECT_EQ(x, 0);
  // The named kernel form is killed by eta.
  QElt k = torusElement(m, Fourfold::etaKernelForm());
  EXPECT_TRUE((k * eta).isZero());
  for (Rational x : q.apply(k.coords())) EXPECT_EQ(x, 0);
  EXPECT_THROW(divide(pow(h, 3), eta), SingularDivision);

  auto zero = isHRPair(pow(h, 3), eta, h);
  EXPECT_NE(zero.outcome, Outcome::Pass);
  auto perturbed = isHRPair(pow(h, 3), eta + (h * h) * Rational(1, 10), h);
  EXPECT_EQ(perturbed.outcome, Outcome::Pass);
  EXPECT_EQ(perturbed.signature, (Signature{1, 0, 15}));
}

TEST(HRPair, ClassicalKahlerPowersOnTorus) {
  for (int d = 2; d <= 4; ++d) {
    auto torus = torusRing<double>(d);
    for (int trial = 0; trial < 5; ++trial) {
      auto rng = trialRng(11, trial);
      DElt w = randomKahlerElement(rng, torus, d);
      DElt h = randomKahlerElement(rng, torus, d);
      auto v = isHRPair(pow(w, d - 1), pow(w, d - 2), h);
      EXPECT_EQ(v.outcome, Outcome::Pass) << "d=" << d;
      EXPECT_EQ(v.signature, (Signature{1, 0, d * d - 1}));
    }
  }
}

TEST(HRPair, ExactClassicalHRInAllDimensions) {
  for (int d = 2; d <= 4; ++d) {
    auto torus = torusRing(d);
    QElt w = torusElement(torus, standardKahler<Rational>(d));
    auto v = isHRPair(pow(w, d - 1), pow(w, d - 2), w);
    EXPECT_EQ(v.outcome, Outcome::Pass);
    EXPECT_EQ(divide(pow(w, d - 1), pow(w, d - 2)), w);
  }
}

TEST(HRPair, FailureCarriesWitness) {
  // -1 in degree 0 on a surface flips the intersection form.
  auto torus = torusRing(2);
  QElt h = torusElement(torus, standardKahler<Rational>(2));
  auto eta = torus->one() * Rational(-1);
  auto v = hasHRProperty(eta, h);
  EXPECT_EQ(v.outcome, Outcome::Fail);
  EXPECT_EQ(v.signature, (Signature{3, 0, 1}));
  auto pair = isHRPair(h * Rational(-1), eta, h);
  EXPECT_EQ(pair.outcome, Outcome::Fail);
}

TEST(HRPair, WitnessViolatesNegativity) {
  // Mixed-sign degree-0 class on a product of curves: eta = 1 but h = theta1 - theta2.
  auto torus = torusRing(2);
  QElt t1 = torusElement(torus, Form<Rational>::idd(2, 0, 0));
  QElt t2 = torusElement(torus, Form<Rational>::idd(2, 1, 1));
  QElt h = t1 - t2;
  auto v = hasHRProperty(torus->one(), h);
  EXPECT_EQ(v.outcome, Outcome::Fail);
  auto q = gram(torus->one()).q;
  auto w = parseWitness(v.witness);
  EXPECT_LE(bilinear(q, h.coords(), h.coords()), 0);
  EXPECT_FALSE(w.empty());
}

TEST(HRPair, InvariantUnderPositiveScaling) {
  auto sub = Fourfold::numericalRing();
  QElt eta = sub.model->named("eta"), h = sub.model->named("h");
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Rational a = abs(hrpair::testing::randomRational(rng)) + Rational(1, 7);
    Rational b = abs(hrpair::testing::randomRational(rng)) + Rational(1, 5);
    auto v = isHRPair(eta * h * a, eta * b, h);
    EXPECT_EQ(v.outcome, Outcome::Pass);
    auto neg = isHRPair(eta * h * (-a), eta * b, h);
    EXPECT_EQ(neg.outcome, Outcome::Fail);
  }
}

TEST(HRPair, IndependentOfAmpleClass) {
  auto sub = Fourfold::numericalRing();
  const auto& m = sub.model;
  QElt eta = m->named("eta"), t1 = m->named("theta1"), t2 = m->named("theta2");
  QElt eta1 = eta * (t1 + t2);
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) {
      QElt h = t1 * Rational(a) + t2 * Rational(b);
      EXPECT_EQ(isHRPair(eta1, eta, h).outcome, Outcome::Pass) << a << "," << b;
    }
}

TEST(HRPair, ReverseCauchySchwarz) {
  // For an HR pair: (integral alpha eta1)^2 >= integral(alpha^2 eta2) integral(eta2 beta^2).
  auto torus = torusRing<double>(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto rng = trialRng(21, trial);
    DElt w1 = randomKahlerElement(rng, torus, 3), w2 = randomKahlerElement(rng, torus, 3);
    DElt eta2 = w1, eta1 = w1 * w2;
    ASSERT_TRUE(isHRPair(eta1, eta2, w2).passed());
    DElt beta = divide(eta1, eta2);
    const double bb = (eta2 * beta * beta).integrate();
    std::normal_distribution<double> g;
    for (int k = 0; k < 20; ++k) {
      Vec<double> c(torus->basisSize(1));
      for (auto& x : c) x = g(rng);
      DElt alpha = torus->element(1, c);
      const double lhs = std::pow((alpha * eta1).integrate(), 2);
      const double rhs = (alpha * alpha * eta2).integrate() * bb;
      EXPECT_GE(lhs - rhs, -1e-9 * std::max(1.0, std::abs(lhs) + std::abs(rhs)));
    }
  }
}

TEST(PosCone, ContainsAmpleNotNegative) {
  auto sub = Fourfold::numericalRing();
  QElt eta = sub.model->named("eta"), h = sub.model->named("h");
  auto r = posConeContains(h, eta, h);
  EXPECT_TRUE(r.contains);
  EXPECT_EQ(r.selfPair, Rational(8));
  EXPECT_FALSE(posConeContains(h * Rational(-1), eta, h).contains);
  EXPECT_FALSE(posConeContains(sub.model->named("lambda"), eta, h).contains);
}

TEST(Pointwise, RejectsNonPositiveOmega) {
  auto w = standardKahler<double>(3);
  EXPECT_THROW(pointwiseHRPair(w * w, w, w * -1.0), DomainError);
  EXPECT_THROW(pointwiseHRPair(w, w, w), DomainError);
}

TEST(Pointwise, KahlerPowersAndNegation) {
  auto w = standardKahler<double>(3);
  EXPECT_TRUE(pointwiseHRPair(w * w, w, w).passed());
  EXPECT_EQ(pointwiseHRPair(w * w, w * -1.0, w).outcome, Outcome::Fail);
}

TEST(Pointwise, SchurPairsOfRandomKahlerForms) {
  SampleSearchConfig cfg;
  cfg.d = 4;
  cfg.e = 3;
  cfg.trials = 6;
  for (const auto& lambda : partitionsOf(3)) {
    cfg.lambda = lambda;
    auto rep = sampleSearch(cfg);
    EXPECT_EQ(rep.passes, cfg.trials) << lambda.toString();
  }
}

TEST(Pointwise, SampledWeakPositivityOfKahlerPower) {
  auto w = standardKahler<double>(4);
  WeakPositivityProbe<double> probe{20, 5};
  EXPECT_GT(sampledWeakPositivity(w * w, probe), 0.0);
  EXPECT_LT(sampledWeakPositivity(w * w * -1.0, probe), 0.0);
}

TEST(SampleSearch, DeterministicAcrossThreadCounts) {
  SampleSearchConfig cfg;
  cfg.d = 3;
  cfg.e = 2;
  cfg.lambda = Partition({1, 1});
  cfg.trials = 8;
  cfg.threads = 1;
  auto a = sampleSearch(cfg);
  cfg.threads = 4;
  auto b = sampleSearch(cfg);
  EXPECT_EQ(a.toJson().dump(), b.toJson().dump());
  cfg.seed += 1;
  EXPECT_NE(a.toJson().dump(), sampleSearch(cfg).toJson().dump());
}

TEST(SampleSearch, ConfigErrors) {
  SampleSearchConfig cfg;
  cfg.d = 3;
  cfg.lambda = Partition({3});
  EXPECT_THROW(sampleSearch(cfg), DomainError);
  cfg.lambda = Partition({1, 1});
  cfg.e = 1;
  EXPECT_THROW(sampleSearch(cfg), DomainError);
}
