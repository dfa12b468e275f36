// Walks through the self-product of an abelian surface: the intersection form
// of eta = theta1 theta2, the pair (eta h, eta), and what happens on the full
// algebra of real (1,1)-forms.

#include "hrpair/hrpair.hpp"

#include <iostream>

using namespace hrpair;

int main() {
  using Fourfold = AbelianFourfold<Rational>;

  auto sub = Fourfold::numericalRing();
  auto eta = sub.model->named("eta");
  auto h = sub.model->named("h");

  auto g = gram(eta);
  std::cout << "intersection form of eta on (theta1, theta2, lambda):\n";
  for (std::size_t i = 0; i < g.q.rows(); ++i) {
    for (std::size_t k = 0; k < g.q.cols(); ++k) std::cout << "  " << g.q(i, k);
    std::cout << "\n";
  }

  auto pair = isHRPair(eta * h, eta, h);
  std::cout << "(eta h, eta) is a Hodge-Riemann pair: " << toString(pair.outcome) << "\n";

  // On all real (1,1)-forms eta has a kernel, so the pair degenerates; adding
  // a little of h^2 restores it.
  auto full = Fourfold::fullRing();
  auto fe = full->named("eta"), fh = full->named("h");
  auto h3 = fh * fh * fh;
  for (Rational eps : {Rational(0), Rational(1, 100), Rational(1, 10)}) {
    auto v = isHRPair(h3, fe + fh * fh * eps, fh);
    std::cout << "eps = " << eps << ": " << toString(v.outcome) << "\n";
  }
}
