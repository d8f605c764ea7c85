#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qsmin/construction.hpp"
#include "qsmin/errors.hpp"
#include "qsmin/qsmaps.hpp"

namespace qsmin {

// One partial quotient of the liminf formula
//   log N_k / -log( sum_{l=1}^{n_{k+1}-1} eta_{k+1,l} + n_{k+1} delta_{k+1} ),
// together with the variant whose denominator also includes the two end gaps
// (that argument telescopes to delta_k).
struct PartialQuotient {
  int k = 0;
  Real numerator;                       // log N_k
  Rational argument;                    // interior gaps only
  Rational argument_with_end_gaps;      // = delta_k
  Real value;
  Real value_with_end_gaps;
};

struct DimensionReport {
  std::vector<PartialQuotient> partials;  // k = 1..K
  int window_first = 0;
  int window_last = 0;
  Real raw_estimate;       // min of partials over the window
  Real estimate;           // raw_estimate clamped to [0,1]
  Real raw_estimate_with_end_gaps;
};

PartialQuotient formula_partial(const ParamSpec& params, int k, int digits = kDefaultDigits);
Real hausdorff_formula_partial(const ParamSpec& params, int k, int digits = kDefaultDigits);
DimensionReport hausdorff_formula_estimate(const ParamSpec& params, int K = 30, int window = 10,
                                           int digits = kDefaultDigits);

// Minimal number of closed intervals of length eps covering the union of the
// given intervals (sorted by left endpoint, disjoint interiors). Greedy sweep:
// each cover starts at the leftmost point not yet covered. `slack` is a
// tolerance for inexact endpoint arithmetic (zero for exact types).
template <typename T>
std::uint64_t covering_count(std::span<const Interval<T>> intervals, const T& eps, const T& slack = T(0)) {
  if (!(eps > 0)) throw RangeError("cover length must be positive");
  std::uint64_t total = 0;
  bool started = false;
  T reach(0);  // right end of the last placed cover
  for (const auto& iv : intervals) {
    if (started && iv.right <= reach + slack) continue;
    T start = (started && iv.left <= reach + slack) ? reach : iv.left;
    T span = iv.right - start;
    std::uint64_t need = span > slack ? ceil_count(T((span - slack) / eps)) : 0;
    if (need == 0) need = 1;
    total += need;
    reach = start + eps * need;
    started = true;
  }
  return total;
}

template <typename T>
std::uint64_t covering_count(const std::vector<Interval<T>>& intervals, const T& eps, const T& slack = T(0)) {
  return covering_count(std::span<const Interval<T>>(intervals), eps, slack);
}

struct BoxCountReport {
  std::vector<double> scales;
  std::vector<std::uint64_t> counts;
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // RMS of the log-count residuals
};

// Least-squares slope of log count against log(1/eps).
BoxCountReport box_dim_estimate(std::span<const RealInterval> intervals, std::span<const Real> scales);
BoxCountReport box_dim_from_counts(std::vector<double> scales, std::vector<std::uint64_t> counts);

// Construction scales delta_1, ..., delta_k as Reals.
std::vector<Real> construction_scales(const ParamSpec& params, int k);

std::vector<RealInterval> to_real_intervals(const LevelSet& level);
std::vector<RealInterval> image_levelset(const QsMap& map, const LevelSet& level, int digits = kDefaultDigits);

struct GapSequences {
  std::vector<Real> total_length_root;   // (N_k delta_k)^(1/k)
  std::vector<Real> mean_gap_power;      // (1/k) sum_{i<=k} e_i^p
  std::vector<Real> large_gap_density;   // (1/k) #{i <= k : e_i >= eps}
};

// e_i = max_l e_{i,l}.
Rational max_relative_gap(const ParamSpec& params, int i);
GapSequences mlema_checks(const ParamSpec& params, int K, const Real& p, const Real& eps,
                               int digits = kDefaultDigits);

}  // namespace qsmin
