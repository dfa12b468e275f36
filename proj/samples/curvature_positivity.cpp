// Random constrained curvature against a Schur pair of Kahler forms on C^3:
// the trace terms integral(F0_ij ^ F0_ji ^ Omega2) are all nonnegative.

#include "hrpair/hrpair.hpp"

#include <iostream>

using namespace hrpair;

int main() {
  const int d = 3, rank = 3, kahlerCount = 3;
  auto rng = trialRng(1, 0);

  std::vector<Form<double>> kahler;
  for (int k = 0; k < kahlerCount; ++k) kahler.push_back(formFromHermitian(randomKahlerHermitian(rng, d)));
  auto [omega1, omega2] = schurPairForms(Partition({2}), kahlerCount, kahler);

  auto f0 = constraintProject(randomCurvature(rng, rank, d), omega1);
  auto report = traceCheck(f0, omega1, omega2);

  std::cout << "terms:\n";
  for (const auto& row : report.terms) {
    for (double x : row) std::cout << "  " << x;
    std::cout << "\n";
  }
  std::cout << "total " << report.total << ", normalized " << report.normalizedTotal() << "\n";
  std::cout << (report.passed() ? "nonnegative" : "NEGATIVE TERM") << "\n";

  auto theta = randomNilpotentHiggs(rng, rank, d);
  auto higgs = higgsTraceCheck(randomCurvature(rng, rank, d), theta, omega1, omega2);
  std::cout << "with a nilpotent Higgs field: total " << higgs.total << (higgs.passed() ? ", nonnegative" : ", NEGATIVE")
            << "\n";
  return report.passed() && higgs.passed() ? 0 : 1;
}
