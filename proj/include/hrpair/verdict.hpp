#pragma once

// Structured outcome of a positivity / signature check.

#include "hrpair/linalg.hpp"
#include "hrpair/scalar.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace hrpair {

enum class Outcome { Pass, Fail, Degenerate };

inline const char* toString(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Degenerate: return "degenerate";
  }
  return "?";
}

struct Verdict {
  std::string check;
  Outcome outcome = Outcome::Pass;
  Signature signature;
  std::vector<double> eigenvalues;
  /// Coordinates of a witness element (kernel vector, violating direction...).
  std::vector<std::string> witness;
  std::string witnessDescription;
  std::map<std::string, double> tolerances;
  /// Named scalars reported alongside the outcome, formatted exactly.
  std::map<std::string, std::string> values;
  std::vector<std::string> notes;

  bool passed() const { return outcome == Outcome::Pass; }

  /// Worse of two outcomes: Fail dominates Degenerate dominates Pass.
  static Outcome combine(Outcome a, Outcome b) {
    if (a == Outcome::Fail || b == Outcome::Fail) return Outcome::Fail;
    if (a == Outcome::Degenerate || b == Outcome::Degenerate) return Outcome::Degenerate;
    return Outcome::Pass;
  }

  template <class T>
  void setWitness(const Vec<T>& v, std::string description) {
    witness.clear();
    for (const T& x : v) witness.push_back(formatScalar(x));
    witnessDescription = std::move(description);
  }

  nlohmann::json toJson() const {
    nlohmann::json j;
    j["check"] = check;
    j["outcome"] = toString(outcome);
    j["signature"] = {signature.positive, signature.zero, signature.negative};
    j["eigenvalues"] = eigenvalues;
    if (!witness.empty()) j["witness"] = {{"description", witnessDescription}, {"coordinates", witness}};
    j["tolerances"] = tolerances;
    j["values"] = values;
    if (!notes.empty()) j["notes"] = notes;
    return j;
  }
};

}  // namespace hrpair
