#include "qsmin/measure.hpp"

#include <algorithm>

#include "qsmin/errors.hpp"

namespace qsmin {

namespace {

struct XiZeta {
  SkpReport skp;
  Real xi;
  Real zeta;
};

// Lower bound xi_k * zeta_k for prod_{i<=k} r_{i-1}. It depends on the
// parameters and constants only, not on the chain.
XiZeta xi_zeta(const ParamSpec& params, int k, const ProofConstants& c, int digits) {
  XiZeta out;
  out.skp = skp_set(params, c.p, k, c.a, digits);
  const int in_s = out.skp.size;
  const int out_s = k - in_s;

  Rational total_length = 1;
  out.zeta = 1;
  for (int i = 1; i <= k; ++i) {
    const LevelParams lp = params.level(i);
    total_length *= lp.ratio * lp.branching;
    if (out.skp.member[static_cast<std::size_t>(i - 1)]) {
      const Rational e = *std::max_element(lp.gaps.begin(), lp.gaps.end());
      const Real ep = e > 0 ? Real(exp(c.p * log_of(e))) : Real(0);
      out.zeta *= pow(1 - ep, (4 * lp.branching + 4) * c.d);
    }
  }

  const Real tl = to_real(total_length);
  out.xi = pow(c.alpha2, in_s) * pow(1 + c.M, -2 * c.d * out_s);
  if (c.q <= 1) {
    out.xi *= tl;
  } else {
    out.xi *= pow(tl, c.d * c.q) * pow(Real(c.N), (1 - c.d * c.q) * out_s);
  }
  return out;
}

std::size_t first_meeting(const std::vector<RealInterval>& level, const Real& a) {
  // first interval whose right end is >= a
  auto it = std::lower_bound(level.begin(), level.end(), a,
                             [](const RealInterval& iv, const Real& x) { return iv.right < x; });
  return static_cast<std::size_t>(it - level.begin());
}

std::size_t end_meeting(const std::vector<RealInterval>& level, const Real& b) {
  // one past the last interval whose left end is <= b
  auto it = std::upper_bound(level.begin(), level.end(), b,
                             [](const Real& x, const RealInterval& iv) { return x < iv.left; });
  return static_cast<std::size_t>(it - level.begin());
}

}  // namespace

ImageHierarchy build_image_hierarchy(const ParamSpec& params, const QsMap& map, int depth, int digits,
                                     std::uint64_t cap) {
  if (depth < 0) throw DepthError("negative depth");
  if (count(params, depth) > cap) {
    throw CapacityError("level " + std::to_string(depth) + " exceeds the interval cap " + std::to_string(cap));
  }
  ImageHierarchy h;
  h.map = map;
  h.preimage_lengths.push_back(Rational(1));
  for (int k = 0; k <= depth; ++k) {
    const LevelSet level = build_level(params, k, cap);
    if (k > 0) {
      h.branching.push_back(level.branching().back());
      h.preimage_lengths.push_back(level.length());
    }
    h.levels.push_back(image_levelset(map, level, digits));
  }
  return h;
}

Real MassDistribution::window_mass(const Real& a, const Real& b) const {
  const auto& deepest = images_->levels.back();
  const std::size_t first = first_meeting(deepest, a);
  const std::size_t end = end_meeting(deepest, b);
  if (first >= end) return Real(0);
  return prefix_[end] - prefix_[first];
}

MassDistribution build_measure(std::shared_ptr<const ImageHierarchy> images, const Real& d, int digits) {
  if (!images || images->levels.empty()) throw DegenerateError("empty image hierarchy");
  if (d <= 0 || d >= 1) throw RangeError("measure exponent d must lie in (0,1)");
  PrecisionScope scope(digits);

  MassDistribution m;
  m.d_ = Real(d);
  m.images_ = std::move(images);
  const auto& levels = m.images_->levels;
  const int depth = static_cast<int>(levels.size()) - 1;

  m.powers_.resize(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    auto& pw = m.powers_[k];
    pw.reserve(levels[k].size());
    for (const auto& iv : levels[k]) {
      const Real len = iv.length();
      if (len <= 0) throw DegenerateError("zero-length image interval at level " + std::to_string(k));
      pw.push_back(exp(m.d_ * log(len)));
    }
  }

  m.masses_.resize(levels.size());
  m.norms_.resize(static_cast<std::size_t>(depth));
  m.masses_[0] = {Real(1)};
  for (int k = 1; k <= depth; ++k) {
    const auto n = static_cast<std::size_t>(m.images_->branching[static_cast<std::size_t>(k - 1)]);
    const auto& parents = m.masses_[static_cast<std::size_t>(k - 1)];
    const auto& pw = m.powers_[static_cast<std::size_t>(k)];
    auto& norms = m.norms_[static_cast<std::size_t>(k - 1)];
    auto& masses = m.masses_[static_cast<std::size_t>(k)];
    norms.reserve(parents.size());
    masses.reserve(pw.size());
    for (std::size_t j = 0; j < parents.size(); ++j) {
      Real norm = 0;
      for (std::size_t c = 0; c < n; ++c) norm += pw[j * n + c];
      const Real scale = parents[j] / norm;
      for (std::size_t c = 0; c < n; ++c) masses.push_back(pw[j * n + c] * scale);
      norms.push_back(std::move(norm));
    }
  }

  const auto& leaf = m.masses_.back();
  m.prefix_.reserve(leaf.size() + 1);
  m.prefix_.push_back(Real(0));
  for (const auto& mu : leaf) m.prefix_.push_back(m.prefix_.back() + mu);
  return m;
}

ProofConstants make_proof_constants(const ParamSpec& params, int depth, const Real& M, const Real& d, int digits) {
  PrecisionScope scope(digits);
  ProofConstants c;
  int max_n = 0;
  for (int k = 1; k <= std::max(depth, 1); ++k) max_n = std::max(max_n, params.level(k).branching);
  c.N = 1 + max_n;
  const int m = 4 * c.N + 4;
  c.a = 1 - pow(Real(m) / (m + 1), Real(1) / m);
  const PqExponents pq = pq_exponents(M);
  c.M = pq.M;
  c.p = pq.p;
  c.q = pq.q;
  c.A = 1 / ((1 + c.M) * (1 + c.M)) / pow(Real(2 * c.N), c.q);
  c.d = Real(d);
  c.alpha2 = pow(1 + c.A, 1 - c.d);
  return c;
}

Real choose_d(const Real& q, const Real& fraction) {
  if (q < 1) throw RangeError("q must be at least 1");
  if (fraction <= 0 || fraction >= 1) throw RangeError("d fraction must lie in (0,1)");
  const Real lower = q == 1 ? Real(0) : Real(1 / q);
  return lower + fraction * (1 - lower);
}

SkpReport skp_set(const ParamSpec& params, const Real& p, int k, const Real& a, int digits) {
  if (k < 0) throw DepthError("negative level");
  PrecisionScope scope(digits);
  SkpReport report;
  report.k = k;
  Rational length = 1;
  for (int i = 1; i <= k; ++i) {
    const LevelParams lp = params.level(i);
    length *= lp.ratio;
    const Rational e = *std::max_element(lp.gaps.begin(), lp.gaps.end());
    const Real ep = e > 0 ? Real(exp(p * log_of(e))) : Real(0);
    const Real lp_pow = exp(p * log_of(length));
    const bool in = ep <= a && ep <= lp_pow;
    report.member.push_back(in);
    if (in) ++report.size;
  }
  report.density = k > 0 ? Real(Real(report.size) / k) : Real(0);
  return report;
}

RProductReport r_products(const MassDistribution& measure, const ParamSpec& params, std::span<const int> address,
                          const ProofConstants& constants, int digits) {
  const int k = static_cast<int>(address.size());
  if (k > measure.depth()) {
    throw ChainError("chain of length " + std::to_string(k) + " exceeds measure depth " +
                     std::to_string(measure.depth()));
  }
  PrecisionScope scope(digits);
  const auto& branching = measure.images().branching;

  RProductReport report;
  report.address.assign(address.begin(), address.end());
  std::size_t index = 0;
  Real product = 1;
  for (int i = 0; i < k; ++i) {
    const int digit = address[static_cast<std::size_t>(i)];
    const int n = branching[static_cast<std::size_t>(i)];
    if (digit < 1 || digit > n) {
      throw ChainError("address digit " + std::to_string(digit) + " out of range 1.." + std::to_string(n) +
                       " at level " + std::to_string(i + 1));
    }
    Real r = measure.norm(i, index) / measure.length_power(i, index);
    product *= r;
    report.r.push_back(std::move(r));
    report.running_product.push_back(product);
    index = index * static_cast<std::size_t>(n) + static_cast<std::size_t>(digit - 1);
  }

  report.mass_ratio = measure.mass(k, index) / measure.length_power(k, index);
  report.identity_residual = abs(report.mass_ratio * product - 1);
  report.growth = k > 0 ? Real(exp(log(product) / k)) : Real(1);

  XiZeta bound = xi_zeta(params, k, constants, digits);
  report.skp = std::move(bound.skp);
  report.xi = std::move(bound.xi);
  report.zeta = std::move(bound.zeta);
  report.lower_bound_holds = product >= report.xi * report.zeta * (1 - working_tolerance());
  return report;
}

std::vector<RealInterval> construction_test_intervals(const MassDistribution& measure) {
  std::vector<RealInterval> out;
  for (const auto& level : measure.images().levels) out.insert(out.end(), level.begin(), level.end());
  return out;
}

std::vector<Real> level_sup_ratios(const MassDistribution& measure) {
  std::vector<Real> sups;
  for (int k = 0; k <= measure.depth(); ++k) {
    const auto& masses = measure.masses(k);
    Real best = 0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
      Real ratio = masses[i] / measure.length_power(k, i);
      if (ratio > best) best = std::move(ratio);
    }
    sups.push_back(std::move(best));
  }
  return sups;
}

FrostmanReport frostman_check(const MassDistribution& measure, const Real& d, std::span<const RealInterval> tests,
                              const Real& C_cap) {
  FrostmanReport report;
  report.d = Real(d);
  report.C_cap = Real(C_cap);
  report.C_empirical = 0;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const Real len = tests[i].length();
    if (len <= 0) throw DegenerateError("zero-length test interval");
    Real ratio = measure.window_mass(tests[i].left, tests[i].right) / exp(d * log(len));
    if (ratio > report.C_empirical) {
      report.C_empirical = std::move(ratio);
      report.worst_index = i;
    }
  }
  report.tested = tests.size();
  report.pass = report.C_empirical <= report.C_cap;
  return report;
}

ComponentHits components_meeting(const ImageHierarchy& images, int k, const Real& a, const Real& b) {
  if (k < 0 || k > images.depth()) throw DepthError("level " + std::to_string(k) + " outside the hierarchy");
  const auto& level = images.levels[static_cast<std::size_t>(k)];
  const std::size_t first = first_meeting(level, a);
  const std::size_t end = end_meeting(level, b);
  ComponentHits hits;
  hits.max_length = 0;
  for (std::size_t i = first; i < end; ++i) {
    ++hits.count;
    Real len = level[i].length();
    if (len > hits.max_length) hits.max_length = std::move(len);
  }
  return hits;
}

int window_level(const ImageHierarchy& images, const Real& preimage_length) {
  const int depth = images.depth();
  for (int k = 1; k <= depth; ++k) {
    if (to_real(images.preimage_lengths[static_cast<std::size_t>(k)]) <= preimage_length) return k;
  }
  return depth;
}

UnitSampler::UnitSampler(std::uint64_t seed) : engine_(seed) {}

// The top 53 bits of one draw; avoids the implementation-defined
// uniform_real_distribution so samples match across standard libraries.
double UnitSampler::next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

Step2Report step2_window_check(const MassDistribution& measure, const Real& d, std::size_t samples,
                               std::uint64_t seed, int digits) {
  const ImageHierarchy& images = measure.images();
  const int depth = images.depth();
  if (depth < 2) throw DepthError("window check needs a measure of depth at least 2");
  PrecisionScope scope(digits);

  Step2Report report;
  report.seed = seed;
  report.samples = samples;
  int max_n = 0;
  for (int n : images.branching) max_n = std::max(max_n, n);
  report.count_bound = static_cast<std::size_t>(2 * (1 + max_n));
  report.K_empirical = 0;
  report.C_windows = 0;

  const std::vector<Real> sups = level_sup_ratios(measure);
  report.C_levels = *std::max_element(sups.begin(), sups.end());

  const QsMap inverse = images.map.inverse();
  const Real log_finest = log(to_real(images.preimage_lengths.back()));
  const Real tol = sqrt(working_tolerance());
  UnitSampler sampler(seed);

  for (std::size_t s = 0; s < samples; ++s) {
    const Real length = exp(Real(sampler.next()) * log_finest);
    const Real x = Real(sampler.next()) * (1 - length);
    const RealInterval window = image_interval(images.map, x, Real(x + length));
    if (window.length() <= 0) throw PrecisionError("sampled window collapses under the map");

    const RealInterval pre = image_interval(inverse, window.left, window.right);
    if (abs(pre.length() - length) > tol * length) {
      throw PrecisionError("inverse map does not recover the sampled window at the working precision");
    }

    const int k = window_level(images, pre.length());
    const ComponentHits hits = components_meeting(images, k, window.left, window.right);
    report.max_count = std::max(report.max_count, hits.count);
    if (hits.count > report.count_bound) report.counts_within_bound = false;
    if (hits.count > 0) {
      Real ratio = hits.max_length / window.length();
      if (ratio > report.K_empirical) report.K_empirical = std::move(ratio);
    }

    Real c = measure.window_mass(window.left, window.right) / exp(d * log(window.length()));
    if (c > report.C_windows) report.C_windows = std::move(c);
  }

  report.proof_bound = Real(report.count_bound) * report.C_levels * pow(report.K_empirical, d);
  report.within_proof_bound = report.C_windows <= report.proof_bound * (1 + working_tolerance());
  return report;
}

CertificateRow certify_exponent(const MassDistribution& measure, const MinimalityOptions& options) {
  CertificateRow row;
  row.d = measure.d();
  const std::vector<Real> sups = level_sup_ratios(measure);
  row.C_levels = *std::max_element(sups.begin(), sups.end());

  const int depth = measure.depth();
  const int w = std::max(2, depth / 3);
  const int first = std::max(0, depth - w);
  row.trailing_nonincreasing = true;
  {
    PrecisionScope scope(options.digits);
    const Real ceiling = sups[static_cast<std::size_t>(first)] * (1 + working_tolerance());
    for (int k = first + 1; k <= depth; ++k) {
      if (sups[static_cast<std::size_t>(k)] > ceiling) row.trailing_nonincreasing = false;
    }
  }
  row.windows = step2_window_check(measure, measure.d(), options.samples, options.seed, options.digits);
  row.certified = row.trailing_nonincreasing && row.windows.counts_within_bound && row.windows.within_proof_bound;
  return row;
}

MinimalitySummary minimality_experiment(const ParamSpec& params, const QsMap& map, const MinimalityOptions& options) {
  if (options.depth < 3) throw DepthError("minimality experiment needs depth >= 3");
  PrecisionScope scope(options.digits);
  MinimalitySummary summary;

  int K = options.formula_K;
  if (auto md = params.max_depth()) K = std::min(K, *md - 1);
  const int window = std::min(options.formula_window, K);
  summary.formula = hausdorff_formula_estimate(params, K, window, options.digits);
  summary.hypothesis_met = summary.formula.estimate >= options.hypothesis_threshold;

  auto images = std::make_shared<const ImageHierarchy>(
      build_image_hierarchy(params, map, options.depth, options.digits, options.cap));
  const std::vector<Real> scales = construction_scales(params, options.depth);
  summary.box_all_scales = box_dim_estimate(images->levels.back(), scales);
  const auto skip = std::min(static_cast<std::size_t>(options.depth * options.box_skip_fraction), scales.size() - 3);
  summary.box = box_dim_estimate(images->levels.back(), std::span<const Real>(scales).subspan(skip));

  summary.M_hat = estimate_M(map, options.M_depth, options.digits);
  const Real M = summary.M_hat.value * (1 + Real(options.M_margin));
  const PqExponents pq = pq_exponents(M);
  const Real d_default = choose_d(pq.q, options.d_fraction);
  summary.constants = make_proof_constants(params, options.depth, M, d_default, options.digits);

  const MassDistribution measure = build_measure(images, d_default, options.digits);
  const std::vector<Real> sups = level_sup_ratios(measure);
  Real inf_ratio = measure.mass(options.depth, 0) / measure.length_power(options.depth, 0);
  for (std::size_t i = 0; i < measure.masses(options.depth).size(); ++i) {
    Real r = measure.mass(options.depth, i) / measure.length_power(options.depth, i);
    if (r < inf_ratio) inf_ratio = std::move(r);
  }
  // prod r along a chain equals |J|^d / mu(J).
  const Real min_product = 1 / sups.back();
  summary.r_growth_min = exp(log(min_product) / options.depth);
  summary.r_growth_max = exp(-log(inf_ratio) / options.depth);
  const XiZeta bound = xi_zeta(params, options.depth, summary.constants, options.digits);
  summary.xi_zeta_margin = min_product / (bound.xi * bound.zeta);
  summary.step2 = step2_window_check(measure, d_default, options.samples, options.seed, options.digits);

  for (double fraction : options.d_grid) {
    const Real d = choose_d(pq.q, Real(fraction));
    const MassDistribution m = build_measure(images, d, options.digits);
    CertificateRow row = certify_exponent(m, options);
    if (row.certified && (!summary.best_certified_d || row.d > *summary.best_certified_d)) {
      summary.best_certified_d = row.d;
    }
    summary.certificates.push_back(std::move(row));
  }
  return summary;
}

}  // namespace qsmin
