#include "hrpair/chern.hpp"
#include "hrpair/known_examples.hpp"
#include "hrpair/ring.hpp"
#include "hrpair/sympoly.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hrpair;
using QElt = RingElement<Rational>;
using Fourfold = AbelianFourfold<Rational>;

namespace {

QElt randomElement(std::mt19937_64& rng, const ModelPtr<Rational>& m, int p) {
  Vec<Rational> v(m->basisSize(p));
  for (auto& x : v) x = hrpair::testing::randomRational(rng);
  return m->element(p, v);
}

ModelPtr<Rational> powersOfH(int d) {
  RelationRingSpec spec;
  spec.dimension = d;
  spec.generators = {{"h", 1}};
  spec.pointMonomial = {d};
  spec.relations.push_back({{d + 1}, GenPoly{}, std::nullopt});
  return relationRing(spec);
}

}  // namespace

TEST(TorusRing, Dimensions) {
  auto t4 = torusRing(4);
  EXPECT_EQ(t4->basisSize(1), 16u);
  EXPECT_EQ(t4->basisSize(2), 36u);
  EXPECT_EQ(t4->basisSize(4), 1u);
  EXPECT_EQ(torusRing(4).get(), t4.get());  // cached
  auto t2 = torusRing(2);
  auto w = torusElement(t2, standardKahler<Rational>(2));
  EXPECT_EQ((w * w).integrate(), Rational(2));
}

TEST(TorusRing, AgreesWithFormIntegration) {
  auto t4 = torusRing(4);
  auto a = torusElement(t4, Fourfold::theta1()), b = torusElement(t4, Fourfold::theta2());
  EXPECT_EQ((a * a * b * b).integrate(), Rational(4));
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    QElt x = randomElement(rng, t4, 1), y = randomElement(rng, t4, 2), z = randomElement(rng, t4, 1);
    Rational viaRing = (x * y * z).integrate();
    Rational viaForms = (torusForm(x) * torusForm(y) * torusForm(z)).integrateTop();
    EXPECT_EQ(viaRing, viaForms);
  }
}

TEST(TorusRing, RejectsNonRealForms) {
  auto t2 = torusRing(2);
  EXPECT_THROW(torusElement(t2, Form<Rational>::idd(2, 0, 1)), DomainError);
}

TEST(Subring, AbelianFourfold) {
  auto sub = Fourfold::numericalRing();
  const auto& m = sub.model;
  EXPECT_EQ(m->basisSize(1), 3u);
  EXPECT_EQ(m->basisSize(4), 1u);
  QElt h = m->named("h"), eta = m->named("eta");
  // eta * h = h^3 / 3
  EXPECT_EQ(eta * h, (h * h * h) * Rational(1, 3));
  // Every degree-4 monomial in the generators integrates as in the forms.
  std::vector<std::string> names{"theta1", "theta2", "lambda"};
  std::vector<Form<Rational>> forms{Fourfold::theta1(), Fourfold::theta2(), Fourfold::poincare()};
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      for (int c = b; c < 3; ++c)
        for (int e = c; e < 3; ++e) {
          Rational viaRing = (m->named(names[a]) * m->named(names[b]) * m->named(names[c]) * m->named(names[e])).integrate();
          Rational viaForms = (forms[a] * forms[b] * forms[c] * forms[e]).integrateTop();
          EXPECT_EQ(viaRing, viaForms);
        }
  EXPECT_EQ((h * h * h * h).integrate(), (Fourfold::h() * Fourfold::h() * Fourfold::h() * Fourfold::h()).integrateTop());
  // Inclusion and restriction are inverse.
  QElt x = m->named("lambda") * m->named("theta1");
  auto back = sub.restrict(sub.include(x));
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, x);
  auto outside = sub.restrict(torusElement(torusRing(4), Fourfold::etaKernelForm()));
  EXPECT_FALSE(outside.has_value());
}

TEST(Subring, SingleGeneratorGivesTruncatedPolynomialRing) {
  auto t3 = torusRing(3);
  auto sub = subring<Rational>(t3, {{"w", torusElement(t3, standardKahler<Rational>(3))}});
  for (int p = 0; p <= 3; ++p) EXPECT_EQ(sub.model->basisSize(p), 1u);
  QElt w = sub.model->named("w");
  EXPECT_EQ((w * w * w).integrate(), Rational(6));
  EXPECT_EQ(sub.model->basisLabel(2, 0), "w^2");
}

TEST(RelationRing, ScrollOverP1) {
  auto m = relationRing(scrollOverP1Spec());
  QElt xi = m->named("xi"), f = m->named("f");
  EXPECT_EQ((xi * xi * xi).integrate(), Rational(-1));
  EXPECT_EQ((xi * xi * f).integrate(), Rational(1));
  EXPECT_TRUE((f * f).isZero());
  QElt s = xi + f;
  EXPECT_EQ((s * s * s).integrate(), Rational(2));
  EXPECT_EQ(m->basisSize(1), 2u);
  EXPECT_EQ(m->basisSize(2), 2u);
  // Degree-2 / degree-1 pairing is nondegenerate.
  auto pm = m->pairingMatrix(1);
  EXPECT_EQ(rank(pm), 2u);
}

TEST(RelationRing, PowersOfH) {
  for (int d = 1; d <= 4; ++d) {
    auto m = powersOfH(d);
    QElt h = m->named("h");
    QElt hd = m->one();
    for (int k = 0; k < d; ++k) hd = hd * h;
    EXPECT_EQ(hd.integrate(), Rational(1));
  }
}

TEST(RelationRing, DetectsInconsistency) {
  RelationRingSpec spec;
  spec.dimension = 2;
  spec.generators = {{"x", 1}};
  spec.relations.push_back({{2}, std::nullopt, Rational(1)});
  spec.pointMonomial = {2};
  spec.pointValue = 2;
  EXPECT_THROW(relationRing(spec), DomainError);

  RelationRingSpec underdetermined;
  underdetermined.dimension = 2;
  underdetermined.generators = {{"x", 1}, {"y", 1}};
  underdetermined.pointMonomial = {1, 1};
  EXPECT_THROW(relationRing(underdetermined), DomainError);
}

TEST(RingModel, RejectsNonAssociativeStructure) {
  // Degree-1 basis {a}, a*a = pt, but (unit) * a returns 2a.
  auto bogus = [](int p, std::size_t, int q, std::size_t) {
    if (p == 0 && q == 1) return Vec<Rational>{Rational(2)};
    return Vec<Rational>{Rational(1)};
  };
  EXPECT_THROW(RingModel<Rational>::create("bogus", 2, {{"1"}, {"a"}, {"pt"}}, bogus, {Rational(1)}), DomainError);
}

TEST(RingModel, CastToDouble) {
  auto sub = Fourfold::numericalRing();
  auto md = sub.model->cast<double>();
  auto h = md->named("h");
  EXPECT_DOUBLE_EQ((h * h * h * h).integrate(), toDouble((sub.model->named("h") * sub.model->named("h") *
                                                          sub.model->named("h") * sub.model->named("h"))
                                                             .integrate()));
}

TEST(ProductWithP1, Basics) {
  for (int d = 1; d <= 4; ++d) {
    auto base = powersOfH(d);
    auto prod = productWithP1(base);
    QElt tau = prod.tau(), h = prod.model->named("h");
    EXPECT_TRUE((tau * tau).isZero());
    QElt s = h + tau, sp = prod.model->one();
    for (int k = 0; k <= d; ++k) sp = sp * s;
    EXPECT_EQ(sp.integrate(), Rational(d + 1));
  }
}

TEST(ProductWithP1, SchurOfTwistSplitsIntoValuePlusDerived) {
  // lambda = (2), rank 3 generic Chern classes on a base of dimension 3.
  const int e = 3;
  auto base = freeTruncatedRing({{"c1", 1}, {"c2", 2}, {"c3", 3}}, 3);
  auto prod = productWithP1(base);
  std::vector<QElt> c{prod.model->one()};
  for (int k = 1; k <= e; ++k) c.push_back(prod.model->named("c" + std::to_string(k)));
  ChernVector<QElt> total(e, c);
  auto twisted = twistChern(total, Rational(1), prod.tau());
  SymPoly s = schur(Partition({2}), e);
  std::vector<QElt> args(twisted.classes.begin() + 1, twisted.classes.end());
  QElt lhs = evaluate<QElt>(s, args, prod.model->one());
  std::vector<QElt> plain(c.begin() + 1, c.end());
  QElt value = evaluate<QElt>(s, plain, prod.model->one());
  QElt deriv = evaluate<QElt>(derived(s, 1), plain, prod.model->one());
  EXPECT_EQ(lhs, value + deriv * prod.tau());
  auto [a, b] = prod.split(lhs);
  EXPECT_EQ(prod.pullback(a), value);
}

TEST(ProjectiveBundle, PushforwardGivesSegreClasses) {
  for (int e = 1; e <= 4; ++e) {
    std::vector<GeneratorSpec> gens;
    for (int k = 1; k <= e; ++k) gens.push_back({"c" + std::to_string(k), k});
    const int d = 3;
    auto base = freeTruncatedRing(gens, d);
    std::vector<QElt> chern;
    for (int k = 1; k <= e; ++k) chern.push_back(base->named("c" + std::to_string(k)));
    auto pb = projBundleRing(base, chern, e);
    std::vector<QElt> cs{base->one()};
    cs.insert(cs.end(), chern.begin(), chern.end());
    auto segre = segreClasses(ChernVector<QElt>(e, cs), d);
    QElt xi = pb.xi(), power = pb.model->one();
    for (int j = 0; j <= e - 1 + d; ++j) {
      QElt pushed = pb.pushforward(power);
      if (j < e - 1)
        EXPECT_TRUE(pushed.isZero());
      else
        EXPECT_EQ(pushed, segre[j - e + 1]) << "e=" << e << " j=" << j;
      power = power * xi;
    }
  }
}

TEST(ProjectiveBundle, ProjectionFormula) {
  std::mt19937_64 rng(5);
  const int e = 3;
  auto base = freeTruncatedRing({{"h", 1}, {"c1", 1}, {"c2", 2}, {"c3", 3}}, 3);
  std::vector<QElt> chern{base->named("c1"), base->named("c2"), base->named("c3")};
  auto pb = projBundleRing(base, chern, e);
  for (int trial = 0; trial < 10; ++trial) {
    const int a = static_cast<int>(rng() % 5), p = static_cast<int>(rng() % 3);
    QElt x = randomElement(rng, base, p);
    QElt xia = pb.model->one();
    for (int k = 0; k < a; ++k) xia = xia * pb.xi();
    EXPECT_EQ(pb.pushforward(xia * pb.pullback(x)), pb.pushforward(xia) * x);
  }
}

TEST(ProjectiveBundle, IntegrationOverTotalSpace) {
  auto base = powersOfH(2);
  auto h = base->named("h");
  // Trivial rank-2 bundle: integral of xi * h^2 over P^1 x X is integral of h^2.
  auto pb = projBundleRing(base, {base->zero(1), base->zero(2)}, 2);
  EXPECT_EQ((pb.xi() * pb.pullback(h * h)).integrate(), Rational(1));
}
