// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qsmin/construction.hpp"
#include "qsmin/dimension.hpp"
#include "qsmin/errors.hpp"
#include "qsmin/measure.hpp"
#include "qsmin/qsmaps.hpp"

using namespace qsmin;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double dbl(const Real& x) { return x.convert_to<double>(); }

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome exact_construction() {
  const auto t0 = Clock::now();
  const LevelSet level = build_level(middle_thirds(), 12);
  const double secs = seconds_since(t0);
  Integer den = 1;
  for (int i = 0; i < 12; ++i) den *= 3;
  bool dens = true;
  for (std::size_t i = 0; i < level.size(); ++i) {
    dens = dens && den % denominator(level.left(i)) == 0 && den % denominator(level.right(i)) == 0;
  }
  const bool total = level.total_length() == Rational(4096, 531441);
  const bool pass = level.size() == 4096 && dens && total && secs < 1.0;
  return {pass, std::to_string(level.size()) + " intervals, denominators | 3^12: " + (dens ? "yes" : "no") +
                    ", total " + to_string(level.total_length()) + ", " + fmt("%.3f s", secs)};
}

Outcome formula_values() {
  PrecisionScope scope(50);
  // Hand-telescoped partials: argument (gaps + children inside a level-k
  // interval) is delta_k itself, so partial_k = k log n / (k log(1/c)).
  const double thirds = std::log(2.0) / std::log(3.0);
  const double fifths = std::log(3.0) / std::log(5.0);
  double worst = 0;
  for (int K = 2; K <= 40; ++K) {
    const DimensionReport rep = hausdorff_formula_estimate(middle_thirds(), K, std::min(K, 10));
    worst = std::max(worst, std::abs(dbl(rep.estimate) - thirds));
  }
  const DimensionReport five = hausdorff_formula_estimate(uniform_cantor({3}, {Rational(1, 5)}), 25, 10);
  const double err5 = std::abs(dbl(five.estimate) - fifths);
  const bool pass = worst <= 1e-9 && err5 <= 1e-3 && std::abs(dbl(five.estimate) - 0.6826) <= 1e-3;
  return {pass, fmt("middle-thirds max |err| over K=2..40 %.2e", worst) + fmt(", (3,1/5) at K=25 %.10f", dbl(five.estimate)) +
                    fmt(" (|err| %.2e)", err5)};
}

Outcome exponents() {
  PrecisionScope scope(50);
  const PqExponents one = pq_exponents(Real(1));
  const PqExponents three = pq_exponents(Real(3));
  const bool exact_one = one.p == 1 && one.q == 1;
  const bool exact_q = three.q == 2;
  const double perr = std::abs(dbl(three.p) - std::log2(4.0 / 3.0));
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(1.0, 10.0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const Real M(u(rng));
    const PqExponents e = pq_exponents(M);
    worst = std::max(worst, dbl(abs(pow(Real(2), e.p) + pow(Real(2), e.q) - (2 + M + 1 / M))));
  }
  const bool pass = exact_one && exact_q && perr <= 1e-12 && worst <= 1e-12;
  return {pass, std::string("(1,1) exact: ") + (exact_one ? "yes" : "no") + ", q(3) = 2 exact: " + (exact_q ? "yes" : "no") +
                    fmt(", |p(3) - log2(4/3)| %.1e", perr) + fmt(", identity max residual %.1e", worst)};
}

std::vector<NestedPair> random_pairs(std::mt19937_64& rng, int count) {
  // Endpoints on a 2^-24 grid; |I| and |J|/|I| log-uniform.
  const std::int64_t grid = std::int64_t{1} << 24;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<NestedPair> pairs;
  while (static_cast<int>(pairs.size()) < count) {
    const auto outer_len = static_cast<std::int64_t>(std::ldexp(1.0, static_cast<int>(-u(rng) * 16)) * grid);
    if (outer_len < 2) continue;
    const auto a = static_cast<std::int64_t>(u(rng) * static_cast<double>(grid - outer_len));
    const auto inner_len = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::pow(static_cast<double>(outer_len), u(rng))));
    const auto b = a + static_cast<std::int64_t>(u(rng) * static_cast<double>(outer_len - inner_len));
    pairs.push_back({{Rational(b, grid), Rational(b + inner_len, grid)}, {Rational(a, grid), Rational(a + outer_len, grid)}});
  }
  return pairs;
}

QsMap three_piece() {
  return QsMap::piecewise_linear({Rational(1, 3), Rational(2, 3)}, {Rational(1, 2), Rational(2), Rational(1, 2)});
}

Outcome distortion_battery() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, QsMap>> maps = {
      {"identity", QsMap::identity()},
      {"x^1/2", QsMap::power(Rational(1, 2))},
      {"x^4/5", QsMap::power(Rational(4, 5))},
      {"x^2", QsMap::power(Rational(2))},
      {"pl3", three_piece()},
      {"x^4/5 then pl3", QsMap::composition({QsMap::power(Rational(4, 5)), three_piece()})},
  };
  std::mt19937_64 rng(4);
  bool pass = true;
  std::string detail;
  for (const auto& [name, f] : maps) {
    PrecisionScope scope(50);
    const Real M = estimate_M(f, 14).value * Real(1.05);
    const DistortionReport rep = distortion_check(f, M, random_pairs(rng, 10000));
    pass = pass && rep.all_pass;
    detail += name + fmt(" M=%.4f", dbl(M)) + (rep.all_pass ? " ok; " : " FAIL; ");
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 30;
  return {pass, detail + fmt("10^4 pairs per map, %.1f s", secs)};
}

Outcome gap_sequences() {
  PrecisionScope scope(50);
  const int K = 30;
  const GapSequences seq = mlema_checks(dim_one_family(), K, Real(0.5), Real(0.1));
  // Direct evaluation of the three sequences.
  double oracle_err = 0;
  double sum = 0;
  int large = 0;
  for (int k = 1; k <= K; ++k) {
    const double e = 1.0 / ((k + 1.0) * (k + 1.0));
    sum += std::sqrt(e);
    large += e >= 0.1 ? 1 : 0;
    const auto i = static_cast<std::size_t>(k - 1);
    oracle_err = std::max(oracle_err, std::abs(dbl(seq.total_length_root[i]) - std::pow((k + 2.0) / (2.0 * (k + 1.0)), 1.0 / k)));
    oracle_err = std::max(oracle_err, std::abs(dbl(seq.mean_gap_power[i]) - sum / k));
    oracle_err = std::max(oracle_err, std::abs(dbl(seq.large_gap_density[i]) - static_cast<double>(large) / k));
  }
  bool monotone = true;
  for (int k = K - 9; k < K; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    monotone = monotone && seq.total_length_root[i + 1] >= seq.total_length_root[i];
    monotone = monotone && seq.mean_gap_power[i + 1] <= seq.mean_gap_power[i];
    monotone = monotone && seq.large_gap_density[i + 1] <= seq.large_gap_density[i];
  }
  const double root = dbl(seq.total_length_root.back());
  const double mean = dbl(seq.mean_gap_power.back());
  const double dens = dbl(seq.large_gap_density.back());
  const bool pass = root >= 0.90 && mean <= 0.15 && dens <= 0.2 && monotone && oracle_err <= 1e-12;
  return {pass, fmt("(N delta)^(1/k) %.4f", root) + fmt(", mean e^0.5 %.4f", mean) + fmt(", density %.4f", dens) +
                    ", monotone over last 10: " + (monotone ? "yes" : "no") + fmt(", oracle |err| %.1e", oracle_err)};
}

Outcome measure_identities() {
  PrecisionScope scope(50);
  const int depth = 16;
  const ParamSpec e = dim_one_family();
  double worst = 0;
  bool bounds = true;
  std::size_t chains = 0;
  std::mt19937_64 rng(6);
  for (const QsMap& f : {QsMap::identity(), QsMap::power(Rational(4, 5))}) {
    const auto h = std::make_shared<const ImageHierarchy>(build_image_hierarchy(e, f, depth, 50));
    const Real M = estimate_M(f, 14).value * Real(1.05);
    const Real d = choose_d(pq_exponents(M).q, Real(0.5));
    const MassDistribution mu = build_measure(h, d);
    const ProofConstants c = make_proof_constants(e, depth, M, d);
    std::vector<std::vector<int>> tested{std::vector<int>(depth, 1), std::vector<int>(depth, 2)};
    for (int t = 0; t < 256; ++t) {
      std::vector<int> chain;
      for (int i = 0; i < depth; ++i) chain.push_back(1 + static_cast<int>(rng() >> 63));
      tested.push_back(std::move(chain));
    }
    for (const auto& chain : tested) {
      const RProductReport rep = r_products(mu, e, chain, c);
      worst = std::max(worst, dbl(rep.identity_residual));
      bounds = bounds && rep.lower_bound_holds;
      ++chains;
    }
  }
  const bool pass = worst <= 1e-20 && bounds;
  return {pass, std::to_string(chains) + fmt(" chains, max |mu/|J|^d * prod r - 1| %.1e", worst) +
                    ", prod r >= xi*zeta on all: " + (bounds ? "yes" : "no")};
}

Outcome frostman_thirds() {
  PrecisionScope scope(50);
  const auto h = std::make_shared<const ImageHierarchy>(build_image_hierarchy(middle_thirds(), QsMap::identity(), 12, 50));
  const Real d = log(Real(2)) / log(Real(3));
  const MassDistribution mu = build_measure(h, d);
  const auto tests = construction_test_intervals(mu);
  const FrostmanReport rep = frostman_check(mu, d, tests, Real(1));
  const double err = dbl(abs(rep.C_empirical - 1));
  const bool pass = err <= 1e-40 && rep.tested == 8191;
  return {pass, std::to_string(rep.tested) + " construction intervals, C = " + format_real(rep.C_empirical, 30) +
                    fmt(" (|C - 1| %.1e)", err)};
}

Outcome minimality() {
  const auto t0 = Clock::now();
  MinimalityOptions opt;
  opt.depth = 18;
  const std::vector<std::pair<std::string, QsMap>> maps = {
      {"identity", QsMap::identity()},
      {"x^4/5", QsMap::power(Rational(4, 5))},
      {"x^5/4", QsMap::power(Rational(5, 4))},
      {"pl3", three_piece()},
  };
  bool pass = true;
  std::string detail;
  for (const auto& [name, f] : maps) {
    const MinimalitySummary s = minimality_experiment(dim_one_family(), f, opt);
    const double best = s.best_certified_d ? dbl(*s.best_certified_d) : 0.0;
    const bool ok = s.box.slope >= 0.90 && s.box.residual <= 0.05 && best >= 0.75;
    pass = pass && ok;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s slope %.4f rms %.4f (all scales %.4f/%.4f) d* %.4f%s; ", name.c_str(),
                  s.box.slope, s.box.residual, s.box_all_scales.slope, s.box_all_scales.residual, best, ok ? "" : " FAIL");
    detail += buf;
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 300;
  return {pass, detail + fmt("%.1f s", secs)};
}

Outcome negative_control() {
  MinimalityOptions opt;
  opt.depth = 12;
  const MinimalitySummary s = minimality_experiment(middle_thirds(), QsMap::identity(), opt);
  const bool pass = std::abs(s.box.slope - 0.63) <= 0.03 && !s.hypothesis_met;
  return {pass, fmt("slope %.4f", s.box.slope) + fmt(", formula %.4f", dbl(s.formula.estimate)) +
                    ", hypothesis flagged unmet: " + (s.hypothesis_met ? "no" : "yes")};
}

Outcome covering_oracle() {
  std::mt19937_64 rng(10);
  int agree = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    const int count = 1 + static_cast<int>(rng() % 20);
    const long den = 1 + static_cast<long>(rng() % 12);
    std::vector<RationalInterval> set;
    Rational pos(static_cast<long>(rng() % 4), den);
    for (int i = 0; i < count; ++i) {
      const Rational len(static_cast<long>(rng() % 5), den);
      set.push_back({pos, pos + len});
      pos += len + Rational(1 + static_cast<long>(rng() % 6), den);
    }
    const Rational eps(1 + static_cast<long>(rng() % 12), 1 + static_cast<long>(rng() % 6));
    if (covering_count(set, eps) == oracle::min_cover(set, eps)) ++agree;
  }
  return {agree == trials, std::to_string(agree) + "/" + std::to_string(trials) + " instances agree with the exhaustive minimum"};
}

Outcome elementary_inequality() {
  PrecisionScope scope(50);
  std::mt19937_64 rng(11);
  UnitSampler u(11);
  int holds = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const int m = 1 + static_cast<int>(rng() % 10);
    const Real edge = 1 - pow(Real(m) / (m + 1), Real(1) / m);
    Real x = Real(u.next()) * edge;
    if (x == 0) x = edge / 2;
    if (1 - m * x >= pow(1 - x, m + 1)) ++holds;
  }
  return {holds == trials, std::to_string(holds) + "/" + std::to_string(trials) + " pairs (m <= 10, x in the legal range)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact construction", exact_construction},
      {"dimension formula", formula_values},
      {"distortion exponents", exponents},
      {"nested-pair distortion battery", distortion_battery},
      {"gap sequence diagnostics", gap_sequences},
      {"measure identities", measure_identities},
      {"Frostman constant on middle thirds", frostman_thirds},
      {"minimality at desk scale", minimality},
      {"negative control", negative_control},
      {"covering oracle", covering_oracle},
      {"elementary inequality", elementary_inequality},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
