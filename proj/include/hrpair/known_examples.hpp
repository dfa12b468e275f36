#pragma once

// Worked examples with known answers.

#include "hrpair/form.hpp"
#include "hrpair/ring.hpp"

namespace hrpair {

/// Self-product A x A of a principally polarized abelian surface, in flat
/// coordinates z1..z4: the two pulled-back polarizations and the Poincare
/// class. The Poincare class is taken in its real form
/// i(dz1 dzbar3 + dz3 dzbar1 + dz2 dzbar4 + dz4 dzbar2).
template <class T = Rational>
struct AbelianFourfold {
  static Form<T> theta1() { return Form<T>::idd(4, 0, 0) + Form<T>::idd(4, 1, 1); }
  static Form<T> theta2() { return Form<T>::idd(4, 2, 2) + Form<T>::idd(4, 3, 3); }
  static Form<T> poincare() {
    return Form<T>::idd(4, 0, 2) + Form<T>::idd(4, 2, 0) + Form<T>::idd(4, 1, 3) + Form<T>::idd(4, 3, 1);
  }
  /// eta = theta1 * theta2
  static Form<T> eta() { return theta1() * theta2(); }
  /// h = theta1 + theta2
  static Form<T> h() { return theta1() + theta2(); }
  /// A real (1,1)-form killed by eta: i(dz1 dzbar2 + dz2 dzbar1).
  static Form<T> etaKernelForm() { return Form<T>::idd(4, 0, 1) + Form<T>::idd(4, 1, 0); }

  /// The numerical ring: subring of the torus algebra generated by
  /// theta1, theta2, lambda, with eta and h named.
  static Subring<T> numericalRing() {
    auto torus = torusRing<T>(4);
    auto sub = subring<T>(torus,
                          {{"theta1", torusElement(torus, theta1())},
                           {"theta2", torusElement(torus, theta2())},
                           {"lambda", torusElement(torus, poincare())}},
                          "N(AxA)");
    auto m = std::const_pointer_cast<RingModel<T>>(sub.model);
    auto t1 = m->named("theta1"), t2 = m->named("theta2");
    m->setName("eta", t1 * t2);
    m->setName("h", t1 + t2);
    return sub;
  }

  /// The full torus algebra (all real (1,1)-forms in degree one) with
  /// theta1, theta2, lambda, eta and h named.
  static ModelPtr<T> fullRing() {
    auto torus = torusRing<T>(4);
    auto named = torus->withName("theta1", 1, torusElement(torus, theta1()).coords());
    named = named->withName("theta2", 1, torusElement(torus, theta2()).coords());
    named = named->withName("lambda", 1, torusElement(torus, poincare()).coords());
    named = named->withName("eta", 2, torusElement(torus, eta()).coords());
    named = named->withName("h", 1, torusElement(torus, h()).coords());
    return named;
  }
};

/// X = P(O + O + O(-1)) over P^1 with fiber class f and tautological class
/// xi: xi^3 = -1, xi^2 f = 1, f^2 = 0.
inline RelationRingSpec scrollOverP1Spec() {
  RelationRingSpec spec;
  spec.name = "P(O+O+O(-1))";
  spec.dimension = 3;
  spec.generators = {{"xi", 1}, {"f", 1}};
  spec.relations.push_back({{0, 2}, GenPoly{}, std::nullopt});
  spec.relations.push_back({{3, 0}, std::nullopt, Rational(-1)});
  spec.relations.push_back({{2, 1}, std::nullopt, Rational(1)});
  spec.pointMonomial = {2, 1};
  spec.pointValue = 1;
  return spec;
}

}  // namespace hrpair
