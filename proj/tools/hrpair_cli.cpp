// hrpair: command-line front end.
//
// Exit status: 0 pass, 1 fail or degenerate verdict, 2 usage or input error.

#include "hrpair/hrpair.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace hrpair;
using json = nlohmann::json;

namespace {

using QElt = RingElement<Rational>;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Common {
  bool json = false;
  std::uint64_t seed = 1;
  int trials = 100;
  double tolerance = kDefaultTolerance;
  std::string backend = "exact";
};

struct Report {
  const Common& opts;
  json j = json::object();
  std::ostringstream text;

  explicit Report(const Common& o) : opts(o) {}
  int finish(int code) {
    if (opts.json)
      std::cout << j.dump(2) << "\n";
    else
      std::cout << text.str();
    return code;
  }
};

std::string upper(Outcome o) {
  std::string s = toString(o);
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

int exitFor(Outcome o) { return o == Outcome::Pass ? kPass : kFail; }

template <class T>
void printMatrix(std::ostream& os, const Matrix<T>& m, const std::vector<std::string>& labels = {}) {
  std::vector<std::vector<std::string>> cells(m.rows(), std::vector<std::string>(m.cols()));
  std::size_t width = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) {
      cells[i][k] = formatScalar(m(i, k));
      width = std::max(width, cells[i][k].size());
    }
  std::size_t lw = 0;
  for (const auto& l : labels) lw = std::max(lw, l.size());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "  ";
    if (!labels.empty()) os << std::left << std::setw(static_cast<int>(lw)) << labels[i] << std::right << " ";
    os << "[";
    for (std::size_t k = 0; k < m.cols(); ++k) os << (k ? " " : "") << std::setw(static_cast<int>(width)) << cells[i][k];
    os << "]\n";
  }
}

template <class T>
json matrixJson(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(formatScalar(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

void printVerdict(std::ostream& os, const Verdict& v) {
  os << v.check << ": " << upper(v.outcome) << "\n";
  os << "  signature (+,0,-): (" << v.signature.positive << ", " << v.signature.zero << ", " << v.signature.negative
     << ")\n";
  if (!v.eigenvalues.empty()) {
    os << "  eigenvalues:";
    for (double x : v.eigenvalues) os << " " << std::setprecision(6) << x;
    os << "\n";
  }
  for (const auto& [k, val] : v.values) os << "  " << k << ": " << val << "\n";
  if (!v.witness.empty()) {
    os << "  witness (" << v.witnessDescription << "): [";
    for (std::size_t i = 0; i < v.witness.size(); ++i) os << (i ? ", " : "") << v.witness[i];
    os << "]\n";
  }
  for (const auto& n : v.notes) os << "  note: " << n << "\n";
}

template <class T>
std::vector<std::string> basisLabels(const RingModel<T>& m, int p) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < m.basisSize(p); ++k) out.push_back(m.basisLabel(p, k));
  return out;
}

json loadJsonArg(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    try {
      return json::parse(arg);
    } catch (const json::parse_error& e) {
      throw SpecError("argument", std::string("invalid JSON (") + e.what() + ")");
    }
  }
  return readJsonFile(arg);
}

/// Runs `body` on the exact model or its double cast.
template <class Fn>
int withBackend(const Common& opts, const ModelPtr<Rational>& model, Fn&& body) {
  if (opts.backend == "exact") return body(model);
  return body(model->cast<double>());
}

// ---------------------------------------------------------------------------
// symfunc verbs

int runSchur(const Common& opts, const std::string& partition, int vars) {
  Report r(opts);
  SymPoly s = schur(Partition::parse(partition), vars);
  r.j = {{"partition", partition}, {"vars", vars}, {"polynomial", s.toString()}};
  r.text << s.toString() << "\n";
  return r.finish(kPass);
}

int runDerived(const Common& opts, const std::string& partition, int vars, int order) {
  Report r(opts);
  SymPoly s = derived(schur(Partition::parse(partition), vars), order);
  r.j = {{"partition", partition}, {"vars", vars}, {"order", order}, {"polynomial", s.toString()}};
  r.text << s.toString() << "\n";
  return r.finish(kPass);
}

std::vector<GeneratorSpec> chernGenerators(int rank) {
  std::vector<GeneratorSpec> gens;
  for (int k = 1; k <= rank; ++k) gens.push_back({"c" + std::to_string(k), k});
  return gens;
}

int runTwist(const Common& opts, int rank) {
  Report r(opts);
  auto gens = chernGenerators(rank);
  gens.push_back({"th", 1});
  auto ring = freeTruncatedRing(gens, rank, "chern classes");
  std::vector<QElt> c{ring->one()};
  for (int k = 1; k <= rank; ++k) c.push_back(ring->named("c" + std::to_string(k)));
  auto tw = twistChern(ChernVector<QElt>(rank, c), Rational(1), ring->named("th"));
  json classes = json::array();
  for (int p = 1; p <= rank; ++p) {
    std::string s = tw[p].toString();
    classes.push_back(s);
    r.text << "c" << p << "(A<th>) = " << s << "\n";
  }
  r.j = {{"rank", rank}, {"twisted_chern_classes", classes}};
  return r.finish(kPass);
}

int runSegre(const Common& opts, int rank, int degree) {
  Report r(opts);
  auto ring = freeTruncatedRing(chernGenerators(rank), degree, "chern classes");
  std::vector<QElt> c{ring->one()};
  for (int k = 1; k <= rank; ++k) c.push_back(ring->named("c" + std::to_string(k)));
  auto s = segreClasses(ChernVector<QElt>(rank, c), degree);
  json classes = json::array();
  for (int k = 1; k <= degree; ++k) {
    classes.push_back(s[k].toString());
    r.text << "s" << k << " = " << s[k].toString() << "\n";
  }
  r.j = {{"rank", rank}, {"degree", degree}, {"segre_classes", classes}};
  return r.finish(kPass);
}

// ---------------------------------------------------------------------------
// ring and hrcheck verbs

int runRingCheck(const Common& opts, const std::string& specPath) {
  Report r(opts);
  auto m = loadRingSpecFile(specPath);
  const int d = m->dimension();
  json sizes = json::array();
  bool duality = true;
  r.text << "ring: " << m->name() << " (dimension " << d << ")\n";
  r.text << "  structure constants: unit, commutativity and associativity verified\n";
  for (int p = 0; p <= d; ++p) {
    sizes.push_back(m->basisSize(p));
    const bool nondeg = rank(m->pairingMatrix(p)) == m->basisSize(p);
    duality = duality && nondeg;
    r.text << "  degree " << p << ": " << m->basisSize(p) << " [";
    auto labels = basisLabels(*m, p);
    for (std::size_t k = 0; k < labels.size(); ++k) r.text << (k ? ", " : "") << labels[k];
    r.text << "]" << (nondeg ? "" : "  (pairing with degree " + std::to_string(d - p) + " degenerate)") << "\n";
  }
  json names = json::object();
  for (const auto& [n, val] : m->names()) names[n] = m->named(n).toString();
  r.text << "  poincare duality: " << (duality ? "yes" : "no") << "\n";
  r.j = {{"name", m->name()}, {"dimension", d}, {"basis_sizes", sizes}, {"poincare_duality", duality}, {"names", names}};
  return r.finish(duality ? kPass : kFail);
}

int runGram(const Common& opts, const std::string& spec, const std::string& eta, bool signatureOnly) {
  auto model = loadRingSpecFile(spec);
  return withBackend(opts, model, [&](auto m) {
    Report r(opts);
    auto e = elementFromText(eta, *m, m->dimension() - 2);
    auto g = gram(e);
    auto sig = signature(g.q, opts.tolerance);
    auto ev = symmetricEigenvalues(g.q);
    r.j = {{"basis", basisLabels(*m, 1)},
           {"gram", matrixJson(g.q)},
           {"signature", {sig.positive, sig.zero, sig.negative}},
           {"eigenvalues", ev},
           {"backend", opts.backend}};
    if (!signatureOnly) {
      r.text << "gram matrix of " << eta << " on degree 1:\n";
      printMatrix(r.text, g.q, basisLabels(*m, 1));
    }
    r.text << "signature (+,0,-): (" << sig.positive << ", " << sig.zero << ", " << sig.negative << ")\n";
    if (signatureOnly) {
      r.text << "eigenvalues:";
      for (double x : ev) r.text << " " << std::setprecision(6) << x;
      r.text << "\n";
    }
    return r.finish(kPass);
  });
}

/// Evaluates a supplied witness against the pair data.
template <class T>
Verdict checkWitness(const RingElement<T>& w, const RingElement<T>& eta1, const RingElement<T>& eta2,
                     const RingElement<T>& h, double tol) {
  Verdict v;
  v.check = "hodge-riemann pair";
  v.tolerances["relative_zero"] = tol;
  auto q = gram(eta2).q;
  v.signature = signature(q, tol);
  Vec<T> qw = q.apply(w.coords());
  double scale = std::max(1.0, q.maxAbs());
  bool zeroQw = !w.isZero();
  for (const T& x : qw) zeroQw = zeroQw && nearZero(x, tol, scale);
  const T qww = bilinear(q, w.coords(), w.coords());
  const T byH = (w * eta2 * h).integrate();
  const T byEta1 = (w * eta1).integrate();
  v.values["integral alpha^2 eta_{d-2}"] = formatScalar(qww);
  v.values["integral alpha eta_{d-2} h"] = formatScalar(byH);
  v.values["integral alpha eta_{d-1}"] = formatScalar(byEta1);
  v.setWitness(w.coords(), "supplied witness");
  if (zeroQw) {
    v.outcome = Outcome::Degenerate;
    v.notes.push_back("witness is in the kernel of the intersection form");
  } else if (signOf(qww, tol, scale) >= 0 && (nearZero(byH, tol, scale) || nearZero(byEta1, tol, scale))) {
    v.outcome = Outcome::Fail;
    v.notes.push_back("witness violates negativity on the constrained hyperplane");
  } else if (w == h && signOf(qww, tol, scale) <= 0) {
    v.outcome = Outcome::Fail;
    v.notes.push_back("integral h^2 eta_{d-2} is not positive");
  } else {
    v.outcome = Outcome::Pass;
    v.notes.push_back("witness does not refute the pair");
  }
  return v;
}

int runHRPair(const Common& opts, const std::string& spec, const std::string& eta1, const std::string& eta2,
              const std::vector<std::string>& hs, const std::string& witness) {
  auto model = loadRingSpecFile(spec);
  return withBackend(opts, model, [&](auto m) {
    Report r(opts);
    const int d = m->dimension();
    auto e1 = elementFromText(eta1, *m, d - 1);
    auto e2 = elementFromText(eta2, *m, d - 2);
    if (hs.empty()) throw DomainError("hr-pair needs --h");
    using Elt = std::decay_t<decltype(e1)>;
    std::vector<std::pair<std::string, Elt>> cands;
    for (const auto& h : hs) cands.emplace_back(h, elementFromText(h, *m, 1));
    std::string w = witness;
    if (auto first = w.find_first_not_of(" \t\n"); first != std::string::npos && w[first] == '{') {
      auto wj = loadJsonArg(w);
      if (!wj.contains("coordinates")) throw SpecError("witness", "expected a coordinates field");
      w = wj["coordinates"].dump();
    }
    Verdict v = !w.empty() ? checkWitness(elementFromText(w, *m, 1), e1, e2, cands.front().second, opts.tolerance)
                : cands.size() == 1 ? isHRPair(e1, e2, cands.front().second, opts.tolerance)
                                    : isHRPairSearchingH(e1, e2, cands, opts.tolerance);
    r.j = v.toJson();
    r.j["backend"] = opts.backend;
    printVerdict(r.text, v);
    return r.finish(exitFor(v.outcome));
  });
}

int runPosCone(const Common& opts, const std::string& spec, const std::string& beta, const std::string& eta,
               const std::string& h) {
  auto model = loadRingSpecFile(spec);
  return withBackend(opts, model, [&](auto m) {
    Report r(opts);
    const int d = m->dimension();
    auto res = posConeContains(elementFromText(beta, *m, 1), elementFromText(eta, *m, d - 2),
                               elementFromText(h, *m, 1), opts.tolerance);
    r.j = {{"contains", res.contains},
           {"integral beta eta h", formatScalar(res.byH)},
           {"integral beta^2 eta", formatScalar(res.selfPair)}};
    r.text << "beta in Pos_eta: " << (res.contains ? "yes" : "no") << "\n"
           << "  integral beta eta h: " << formatScalar(res.byH) << "\n"
           << "  integral beta^2 eta: " << formatScalar(res.selfPair) << "\n";
    return r.finish(res.contains ? kPass : kFail);
  });
}

// ---------------------------------------------------------------------------
// bogomolov verbs

int runSheafVerb(const Common& opts, const std::string& verb, const std::string& spec, const std::string& sheaf,
                 const std::string& eta) {
  auto m = loadRingSpecFile(spec);
  Report r(opts);
  auto e = sheafFromJson(loadJsonArg(sheaf), *m);
  const int d = m->dimension();
  r.j["rank"] = e.rank;
  if (verb == "slope") {
    Rational mu = slope(e, elementFromText(eta, *m, d - 1));
    r.j["slope"] = formatScalar(mu);
    r.text << "slope: " << formatScalar(mu) << "\n";
    return r.finish(kPass);
  }
  if (verb == "discriminant") {
    auto delta = discriminant(e);
    r.j["discriminant"] = delta.toString();
    r.j["coordinates"] = json::array();
    for (const auto& x : delta.coords()) r.j["coordinates"].push_back(formatScalar(x));
    r.text << "discriminant: " << delta.toString() << "\n";
    return r.finish(kPass);
  }
  Rational v = bogomolovValue(e, elementFromText(eta, *m, d - 2));
  r.j["bogomolov_value"] = formatScalar(v);
  r.j["nonnegative"] = v >= 0;
  r.text << "integral Delta eta: " << formatScalar(v) << (v >= 0 ? "  (>= 0)" : "  (NEGATIVE)") << "\n";
  return r.finish(v >= 0 ? kPass : kFail);
}

int runExtensionIdentity(const Common& opts, const std::string& spec, const std::string& sub, const std::string& quot) {
  auto m = loadRingSpecFile(spec);
  Report r(opts);
  if (!sub.empty() || !quot.empty()) {
    if (sub.empty() || quot.empty()) throw DomainError("extension-identity needs both --sub and --quot");
    auto id = extensionIdentity(sheafFromJson(loadJsonArg(sub), *m, "sub"), sheafFromJson(loadJsonArg(quot), *m, "quot"));
    r.j = {{"xi", id.xi.toString()}, {"lhs", id.lhs.toString()}, {"rhs", id.rhs.toString()},
           {"residual", id.residual.toString()}, {"exact_zero", id.residual.isZero()}};
    r.text << "xi = " << id.xi.toString() << "\n"
           << "-(rF rG / rE) xi^2 = " << id.lhs.toString() << "\n"
           << "Delta(E)/rE - Delta(F)/rF - Delta(G)/rG = " << id.rhs.toString() << "\n"
           << "residual: " << id.residual.toString() << "\n";
    return r.finish(id.residual.isZero() ? kPass : kFail);
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<int> rk(1, 6), num(-9, 9), den(1, 7);
  auto rnd = [&](int p) {
    Vec<Rational> v(m->basisSize(p));
    for (auto& x : v) x = Rational(num(rng), den(rng));
    return m->element(p, v);
  };
  int nonzero = 0;
  for (int t = 0; t < opts.trials; ++t) {
    SheafClassData<Rational> f(rk(rng), rnd(1), rnd(2)), g(rk(rng), rnd(1), rnd(2));
    if (!extensionIdentity(f, g).residual.isZero()) ++nonzero;
  }
  r.j = {{"trials", opts.trials}, {"seed", opts.seed}, {"nonzero_residuals", nonzero}};
  r.text << "random extension data: " << opts.trials << " trials (seed " << opts.seed << "), nonzero residuals: "
         << nonzero << "\n";
  return r.finish(nonzero == 0 ? kPass : kFail);
}

struct TraceOptions {
  int dim = 3;
  int rank = 3;
  int kahlerCount = 3;
  bool higgs = false;
  std::string curvature, omega1, omega2;
};

int runTraceCheck(const Common& opts, const TraceOptions& t) {
  Report r(opts);
  if (!t.curvature.empty()) {
    if (t.omega1.empty() || t.omega2.empty()) throw DomainError("trace-check with --curvature needs --omega1 and --omega2");
    auto f = curvatureFromJson(loadJsonArg(t.curvature));
    auto o1 = formFromJson(loadJsonArg(t.omega1), f.dim(), "omega1");
    auto o2 = formFromJson(loadJsonArg(t.omega2), f.dim(), "omega2");
    auto rep = traceCheck(f, o1, o2, opts.tolerance);
    r.j = rep.toJson();
    r.text << "trace check: " << (rep.passed() ? "PASS" : "FAIL") << "\n  total: " << formatScalar(rep.total)
           << "\n  projectively flat: " << (rep.projectivelyFlat ? "yes" : "no") << "\n";
    if (rep.pairVerdict) r.text << "  (Omega_{d-1}, Omega_{d-2}) pair: " << upper(rep.pairVerdict->outcome) << "\n";
    const bool ok = rep.passed() && (!rep.pairVerdict || rep.pairVerdict->passed());
    return r.finish(ok ? kPass : kFail);
  }
  if (t.dim < 2 || t.dim > 5) throw DomainError("--dim must be in 2..5");
  if (t.kahlerCount < t.dim - 1) throw DomainError("--kahler must be at least dim - 1");
  int failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  json bad = json::array();
  for (int trial = 0; trial < opts.trials; ++trial) {
    auto rng = trialRng(opts.seed, static_cast<std::uint64_t>(trial));
    std::vector<Form<double>> forms;
    for (int k = 0; k < t.kahlerCount; ++k) forms.push_back(formFromHermitian(randomKahlerHermitian(rng, t.dim)));
    auto [o1, o2] = schurPairForms(Partition({t.dim - 1}), t.kahlerCount, forms);
    auto raw = randomCurvature(rng, t.rank, t.dim);
    TraceReport<double> rep = t.higgs ? higgsTraceCheck(raw, randomNilpotentHiggs(rng, t.rank, t.dim), o1, o2, opts.tolerance)
                                      : traceCheck(constraintProject(raw, o1), o1, o2, opts.tolerance);
    worst = std::min(worst, rep.minTerm / rep.scale);
    if (!rep.passed()) {
      ++failures;
      json bj = rep.toJson();
      bj["trial"] = trial;
      bad.push_back(bj);
    }
  }
  r.j = {{"trials", opts.trials}, {"seed", opts.seed}, {"dim", t.dim}, {"rank", t.rank}, {"higgs", t.higgs},
         {"failures", failures}, {"worst_relative_term", worst}, {"non_passing", bad}};
  r.text << (t.higgs ? "higgs " : "") << "trace check: " << opts.trials << " trials (seed " << opts.seed << ", d="
         << t.dim << ", r=" << t.rank << "), failures: " << failures << ", worst relative term: " << worst << "\n";
  return r.finish(failures == 0 ? kPass : kFail);
}

int runSampleSearch(const Common& opts, int dim, int rank, const std::string& partition, int threads) {
  Report r(opts);
  SampleSearchConfig cfg;
  cfg.d = dim;
  cfg.e = rank;
  cfg.lambda = partition.empty() ? Partition({dim - 1}) : Partition::parse(partition);
  cfg.trials = opts.trials;
  cfg.seed = opts.seed;
  cfg.tolerance = opts.tolerance;
  cfg.threads = threads;
  auto rep = sampleSearch(cfg);
  r.j = rep.toJson();
  r.text << "schur pair search d=" << dim << " e=" << rank << " lambda=" << cfg.lambda.toString() << " trials="
         << cfg.trials << " seed=" << cfg.seed << "\n"
         << "  pass: " << rep.passes << "  fail: " << rep.failures << "  degenerate: " << rep.degenerate << "\n";
  if (cfg.trials > 0)
    r.text << "  worst min relative eigenvalue: " << rep.worstMinRelativeEigenvalue << "\n"
           << "  worst integral h eta_{d-1}: " << rep.worstClause2 << "\n"
           << "  worst integral eta_{d-2} beta^2: " << rep.worstClause3 << "\n";
  for (const auto& t : rep.nonPassing) r.text << "  trial " << t.index << ": " << upper(t.outcome) << "\n";
  return r.finish(rep.nonPassing.empty() ? kPass : kFail);
}

// ---------------------------------------------------------------------------
// demos (exact)

int demoAbelian(const Common& opts) {
  Report r(opts);
  using Fourfold = AbelianFourfold<Rational>;
  auto sub = Fourfold::numericalRing();
  const auto& m = sub.model;
  QElt eta = m->named("eta"), h = m->named("h");
  auto g = gram(eta);
  auto hr = isHRPair(eta * h, eta, h);
  const bool cubic = eta * h == h * h * h * Rational(1, 3);
  auto full = Fourfold::fullRing();
  auto hpFull = hasHRProperty(full->named("eta"), full->named("h"));
  const bool kernel = (Form<Rational>(Fourfold::eta()) * Fourfold::etaKernelForm()).isZero();
  r.text << "A x A, eta = theta1 theta2, h = theta1 + theta2\n"
         << "intersection form of eta on N^1 (basis theta1, theta2, lambda):\n";
  printMatrix(r.text, g.q);
  r.text << "eta h = h^3/3: " << (cubic ? "yes" : "no") << "\n";
  printVerdict(r.text, hr);
  r.text << "eta ^ i(dz1 dzbar2 + dz2 dzbar1) = 0: " << (kernel ? "yes" : "no") << "\n"
         << "on all real (1,1)-forms: " << upper(hpFull.outcome) << " (zero eigenvalues: " << hpFull.signature.zero
         << ")\n";
  const bool ok = hr.passed() && cubic && kernel && hpFull.outcome == Outcome::Degenerate;
  r.text << (ok ? "PASS" : "FAIL") << "\n";
  r.j = {{"gram", matrixJson(g.q)},   {"eta_h_equals_h3_over_3", cubic}, {"hr_pair", hr.toJson()},
         {"kernel_form_killed", kernel}, {"full_algebra", hpFull.toJson()},   {"outcome", ok ? "pass" : "fail"}};
  return r.finish(ok ? kPass : kFail);
}

int demoScroll(const Common& opts) {
  Report r(opts);
  auto m = relationRing(scrollOverP1Spec());
  QElt xi = m->named("xi"), f = m->named("f");
  const Rational x3 = (xi * xi * xi).integrate(), x2f = (xi * xi * f).integrate();
  const bool f2 = (f * f).isZero();
  QElt h = xi + f * Rational(2);
  auto hr = isHRPair(h * h, h, h);
  r.text << "X = P(O + O + O(-1)) over P^1\n"
         << "  xi^3 = " << formatScalar(x3) << ", xi^2 f = " << formatScalar(x2f) << ", f^2 = " << (f2 ? "0" : "nonzero")
         << "\n  associativity: verified\n"
         << "  (xi + f)^3 = " << formatScalar(((xi + f) * (xi + f) * (xi + f)).integrate()) << "\n"
         << "ample h = xi + 2f:\n";
  printVerdict(r.text, hr);
  // Pos cone membership of curve classes alpha * beta, alpha = h.
  auto pc = posConeContains(xi + f, h, h);
  r.text << "  xi + f in Pos_h: " << (pc.contains ? "yes" : "no") << "\n";
  const bool ok = x3 == -1 && x2f == 1 && f2 && hr.passed();
  r.text << (ok ? "PASS" : "FAIL") << "\n";
  r.j = {{"xi^3", formatScalar(x3)}, {"xi^2 f", formatScalar(x2f)}, {"f^2 is zero", f2},
         {"hr_pair", hr.toJson()},   {"outcome", ok ? "pass" : "fail"}};
  return r.finish(ok ? kPass : kFail);
}

int demoLimit(const Common& opts) {
  Report r(opts);
  auto m = AbelianFourfold<Rational>::fullRing();
  QElt eta = m->named("eta"), h = m->named("h");
  QElt h3 = h * h * h;
  auto at0 = isHRPair(h3, eta, h);
  auto at1 = isHRPair(h3, eta + h * h * Rational(1, 10), h);
  r.text << "pairs (h^3, eta + eps h^2) on all real (1,1)-forms of A x A\n"
         << "eps = 1/10:\n";
  printVerdict(r.text, at1);
  r.text << "eps = 0:\n";
  printVerdict(r.text, at0);
  const bool ok = at1.passed() && !at0.passed();
  r.text << (ok ? "PASS" : "FAIL") << "\n";
  r.j = {{"eps=1/10", at1.toJson()}, {"eps=0", at0.toJson()}, {"outcome", ok ? "pass" : "fail"}};
  return r.finish(ok ? kPass : kFail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hodge-Riemann pairs, Bogomolov values and related numerics"};
  app.require_subcommand(1);
  Common opts;
  auto addCommon = [&](CLI::App* c, bool random) {
    c->add_flag("--json", opts.json, "Machine-readable output");
    c->add_option("--tolerance", opts.tolerance, "Relative zero tolerance (float backend)");
    if (random) {
      c->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
      c->add_option("--trials", opts.trials, "Number of trials")->capture_default_str();
    }
  };
  auto addBackend = [&](CLI::App* c) {
    c->add_option("--backend", opts.backend, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  };

  std::string partition, spec, eta, eta1, eta2, beta, hExpr, sheaf, sub, quot, witness, demoName;
  std::vector<std::string> hs;
  int vars = 0, order = 1, rank = 0, degree = 0, threads = 0;
  TraceOptions trace;

  auto* schurCmd = app.add_subcommand("schur", "Schur polynomial in the e-basis");
  schurCmd->add_option("--partition", partition, "e.g. 2,1")->required();
  schurCmd->add_option("--vars", vars, "number of variables")->required();
  addCommon(schurCmd, false);

  auto* derivedCmd = app.add_subcommand("derived", "Derived Schur polynomial");
  derivedCmd->add_option("--partition", partition)->required();
  derivedCmd->add_option("--vars", vars)->required();
  derivedCmd->add_option("--order", order)->capture_default_str();
  addCommon(derivedCmd, false);

  auto* twistCmd = app.add_subcommand("twist", "Chern classes of A<th> for generic A");
  twistCmd->add_option("--rank", rank)->required()->check(CLI::Range(1, 8));
  addCommon(twistCmd, false);

  auto* segreCmd = app.add_subcommand("segre", "Segre classes of generic Chern classes");
  segreCmd->add_option("--rank", rank)->required()->check(CLI::Range(1, 8));
  segreCmd->add_option("--degree", degree)->required()->check(CLI::Range(1, 8));
  addCommon(segreCmd, false);

  auto* ringCmd = app.add_subcommand("ring", "Ring spec utilities");
  auto* ringCheck = ringCmd->add_subcommand("check", "Build and validate a ring spec");
  ringCheck->add_option("--spec", spec)->required();
  addCommon(ringCheck, false);
  ringCmd->require_subcommand(1);

  auto* gramCmd = app.add_subcommand("gram", "Intersection form of eta on degree 1");
  gramCmd->add_option("--spec", spec)->required();
  gramCmd->add_option("--eta", eta, "degree d-2 class")->required();
  addCommon(gramCmd, false);
  addBackend(gramCmd);

  auto* sigCmd = app.add_subcommand("signature", "Signature of the intersection form of eta");
  sigCmd->add_option("--spec", spec)->required();
  sigCmd->add_option("--eta", eta)->required();
  addCommon(sigCmd, false);
  addBackend(sigCmd);

  auto* hrCmd = app.add_subcommand("hr-pair", "Hodge-Riemann pair check");
  hrCmd->add_option("--spec", spec)->required();
  hrCmd->add_option("--eta1", eta1, "degree d-1 class")->required();
  hrCmd->add_option("--eta2", eta2, "degree d-2 class")->required();
  hrCmd->set_help_flag("--help", "Print this help message and exit");
  hrCmd->add_option("--h", hs, "ample class (repeat to search)")->required();
  hrCmd->add_option("--witness", witness, "re-check a reported witness (coordinate list)");
  addCommon(hrCmd, false);
  addBackend(hrCmd);

  auto* posCmd = app.add_subcommand("pos-cone", "Membership of beta in Pos_eta");
  posCmd->add_option("--spec", spec)->required();
  posCmd->add_option("--beta", beta)->required();
  posCmd->add_option("--eta", eta)->required();
  posCmd->set_help_flag("--help", "Print this help message and exit");
  posCmd->add_option("--h", hExpr)->required();
  addCommon(posCmd, false);
  addBackend(posCmd);

  auto* slopeCmd = app.add_subcommand("slope", "Slope of sheaf data with respect to eta_{d-1}");
  auto* discCmd = app.add_subcommand("discriminant", "Discriminant 2r c2 - (r-1) c1^2");
  auto* bogCmd = app.add_subcommand("bogomolov", "integral Delta eta_{d-2}");
  for (auto* c : {slopeCmd, discCmd, bogCmd}) {
    c->add_option("--spec", spec)->required();
    c->add_option("--sheaf", sheaf, "file or inline JSON {rank, c1, c2}")->required();
    if (c != discCmd) c->add_option("--eta", eta)->required();
    addCommon(c, false);
  }

  auto* extCmd = app.add_subcommand("extension-identity", "Discriminant identity for extensions");
  extCmd->add_option("--spec", spec)->required();
  extCmd->add_option("--sub", sub, "sheaf data of the subsheaf");
  extCmd->add_option("--quot", quot, "sheaf data of the quotient");
  addCommon(extCmd, true);

  auto* traceCmd = app.add_subcommand("trace-check", "Curvature trace positivity");
  traceCmd->add_option("--dim", trace.dim)->capture_default_str();
  traceCmd->add_option("--rank", trace.rank, "bundle rank")->capture_default_str()->check(CLI::Range(1, 6));
  traceCmd->add_option("--kahler", trace.kahlerCount, "number of Kahler forms in the Schur pair")->capture_default_str();
  traceCmd->add_flag("--higgs", trace.higgs, "add a random nilpotent Higgs field");
  traceCmd->add_option("--curvature", trace.curvature, "curvature matrix file (exact)");
  traceCmd->add_option("--omega1", trace.omega1, "(d-1,d-1)-form file");
  traceCmd->add_option("--omega2", trace.omega2, "(d-2,d-2)-form file");
  addCommon(traceCmd, true);

  auto* searchCmd = app.add_subcommand("sample-search", "Random Schur-pair search");
  searchCmd->add_option("--dim", trace.dim)->capture_default_str();
  searchCmd->add_option("--rank", rank, "number of Kahler forms")->required();
  searchCmd->add_option("--partition", partition, "partition of dim-1 (default: dim-1)");
  searchCmd->add_option("--threads", threads, "0 = hardware concurrency")->capture_default_str();
  addCommon(searchCmd, true);

  auto* demoCmd = app.add_subcommand("demo", "Worked examples (exact)");
  demoCmd->add_option("name", demoName, "delv | fulger-lehmann | non-hr-limit")
      ->required()
      ->check(CLI::IsMember({"delv", "fulger-lehmann", "non-hr-limit"}));
  addCommon(demoCmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*schurCmd) return runSchur(opts, partition, vars);
    if (*derivedCmd) return runDerived(opts, partition, vars, order);
    if (*twistCmd) return runTwist(opts, rank);
    if (*segreCmd) return runSegre(opts, rank, degree);
    if (*ringCheck) return runRingCheck(opts, spec);
    if (*gramCmd) return runGram(opts, spec, eta, false);
    if (*sigCmd) return runGram(opts, spec, eta, true);
    if (*hrCmd) return runHRPair(opts, spec, eta1, eta2, hs, witness);
    if (*posCmd) return runPosCone(opts, spec, beta, eta, hExpr);
    if (*slopeCmd) return runSheafVerb(opts, "slope", spec, sheaf, eta);
    if (*discCmd) return runSheafVerb(opts, "discriminant", spec, sheaf, eta);
    if (*bogCmd) return runSheafVerb(opts, "bogomolov", spec, sheaf, eta);
    if (*extCmd) return runExtensionIdentity(opts, spec, sub, quot);
    if (*traceCmd) return runTraceCheck(opts, trace);
    if (*searchCmd) return runSampleSearch(opts, trace.dim, rank, partition, threads);
    if (*demoCmd) {
      if (demoName == "delv") return demoAbelian(opts);
      if (demoName == "fulger-lehmann") return demoScroll(opts);
      return demoLimit(opts);
    }
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
