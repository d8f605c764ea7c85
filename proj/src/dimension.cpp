#include "qsmin/dimension.hpp"

#include <algorithm>
#include <cmath>

namespace qsmin {

PartialQuotient formula_partial(const ParamSpec& params, int k, int digits) {
  if (k < 1) throw DepthError("formula partials start at k = 1");
  PrecisionScope scope(digits);

  const LevelParams next = params.level(k + 1);
  const Rational parent = delta(params, k);
  const Rational child = parent * next.ratio;

  Rational interior = 0;
  for (int l = 1; l < next.branching; ++l) interior += next.gaps[static_cast<std::size_t>(l)];
  const Rational ends = next.gaps.front() + next.gaps.back();

  PartialQuotient pq;
  pq.k = k;
  pq.argument = interior * parent + child * next.branching;
  pq.argument_with_end_gaps = (interior + ends) * parent + child * next.branching;
  if (pq.argument <= 0 || pq.argument >= 1) {
    throw DegenerateError("formula denominator argument " + to_string(pq.argument) + " at k = " + std::to_string(k) +
                          " is outside (0,1)");
  }
  pq.numerator = log_of(count(params, k));
  pq.value = pq.numerator / -log_of(pq.argument);
  pq.value_with_end_gaps = pq.numerator / -log_of(pq.argument_with_end_gaps);
  return pq;
}

Real hausdorff_formula_partial(const ParamSpec& params, int k, int digits) {
  return formula_partial(params, k, digits).value;
}

DimensionReport hausdorff_formula_estimate(const ParamSpec& params, int K, int window, int digits) {
  if (window < 1 || K < window) throw RangeError("need K >= window >= 1");
  PrecisionScope scope(digits);
  DimensionReport report;
  report.window_first = K - window + 1;
  report.window_last = K;
  for (int k = 1; k <= K; ++k) report.partials.push_back(formula_partial(params, k, digits));

  report.raw_estimate = report.partials[static_cast<std::size_t>(K - 1)].value;
  report.raw_estimate_with_end_gaps = report.partials[static_cast<std::size_t>(K - 1)].value_with_end_gaps;
  for (int k = report.window_first; k <= K; ++k) {
    const auto& pq = report.partials[static_cast<std::size_t>(k - 1)];
    if (pq.value < report.raw_estimate) report.raw_estimate = pq.value;
    if (pq.value_with_end_gaps < report.raw_estimate_with_end_gaps) report.raw_estimate_with_end_gaps = pq.value_with_end_gaps;
  }
  report.estimate = report.raw_estimate;
  if (report.estimate > 1) report.estimate = 1;
  if (report.estimate < 0) report.estimate = 0;
  return report;
}

BoxCountReport box_dim_from_counts(std::vector<double> scales, std::vector<std::uint64_t> counts) {
  if (scales.size() < 3 || scales.size() != counts.size()) throw RangeError("box counting needs at least 3 scales");
  BoxCountReport report;
  report.scales = std::move(scales);
  report.counts = std::move(counts);

  const std::size_t m = report.scales.size();
  std::vector<double> xs(m);
  std::vector<double> ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(report.scales[i] > 0)) throw RangeError("box-counting scales must be positive");
    if (report.counts[i] == 0) throw DegenerateError("empty set has no box-counting dimension");
    xs[i] = -std::log(report.scales[i]);
    ys[i] = std::log(static_cast<double>(report.counts[i]));
  }
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0;
  double sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0) throw DegenerateError("box-counting scales are all equal");
  report.slope = sxy / sxx;
  report.intercept = my - report.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ys[i] - (report.intercept + report.slope * xs[i]);
    ss += r * r;
  }
  report.residual = std::sqrt(ss / static_cast<double>(m));
  return report;
}

BoxCountReport box_dim_estimate(std::span<const RealInterval> intervals, std::span<const Real> scales) {
  if (scales.size() < 3) throw RangeError("box counting needs at least 3 scales");
  std::vector<double> eps;
  std::vector<std::uint64_t> counts;
  for (const auto& s : scales) {
    if (!(s > 0)) throw RangeError("box-counting scales must be positive");
    const Real slack = s * pow(Real(10), -static_cast<int>(s.precision()) + 10);
    counts.push_back(covering_count<Real>(intervals, s, slack));
    eps.push_back(s.convert_to<double>());
  }
  return box_dim_from_counts(std::move(eps), std::move(counts));
}

std::vector<Real> construction_scales(const ParamSpec& params, int k) {
  std::vector<Real> out;
  Rational d = 1;
  for (int i = 1; i <= k; ++i) {
    d *= params.level(i).ratio;
    out.push_back(to_real(d));
  }
  return out;
}

std::vector<RealInterval> to_real_intervals(const LevelSet& level) {
  std::vector<RealInterval> out;
  out.reserve(level.size());
  for (std::size_t i = 0; i < level.size(); ++i) out.push_back({to_real(level.left(i)), to_real(level.right(i))});
  return out;
}

std::vector<RealInterval> image_levelset(const QsMap& map, const LevelSet& level, int digits) {
  PrecisionScope scope(digits);
  std::vector<RealInterval> out;
  out.reserve(level.size());
  for (std::size_t i = 0; i < level.size(); ++i) {
    RealInterval img = image_interval(map, to_real(level.left(i)), to_real(level.right(i)));
    if (img.length() <= 0) {
      throw PrecisionError("image of interval " + std::to_string(i) + " at level " + std::to_string(level.level()) +
                           " collapses at the working precision");
    }
    if (!out.empty() && out.back().right > img.left) {
      throw PrecisionError("adjacent image intervals overlap at the working precision");
    }
    out.push_back(std::move(img));
  }
  return out;
}

Rational max_relative_gap(const ParamSpec& params, int i) {
  const LevelParams lp = params.level(i);
  return *std::max_element(lp.gaps.begin(), lp.gaps.end());
}

GapSequences mlema_checks(const ParamSpec& params, int K, const Real& p, const Real& eps, int digits) {
  if (K < 1) throw RangeError("K must be at least 1");
  if (p <= 0 || p > 1) throw RangeError("p must lie in (0,1]");
  if (eps <= 0 || eps >= 1) throw RangeError("eps must lie in (0,1)");
  PrecisionScope scope(digits);

  GapSequences seq;
  Rational total = 1;
  Real power_sum = 0;
  int large = 0;
  for (int k = 1; k <= K; ++k) {
    const LevelParams lp = params.level(k);
    total *= lp.ratio * lp.branching;
    const Rational e = *std::max_element(lp.gaps.begin(), lp.gaps.end());
    if (e > 0) power_sum += exp(p * log_of(e));
    if (to_real(e) >= eps) ++large;

    seq.total_length_root.push_back(exp(log_of(total) / k));
    seq.mean_gap_power.push_back(power_sum / k);
    seq.large_gap_density.push_back(Real(large) / k);
  }
  return seq;
}

}  // namespace qsmin
