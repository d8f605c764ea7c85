#pragma once

// Mass distribution on the image f(E) and the quantities used to bound it
// from above: ratio products r_i, the good-index set S(k,p), the lower bound
// xi_k * zeta_k, Frostman-type certificates and the arbitrary-window check.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qsmin/construction.hpp"
#include "qsmin/dimension.hpp"
#include "qsmin/qsmaps.hpp"

namespace qsmin {

// Images of the fundamental intervals of orders 0..depth. The children of
// interval j at level k-1 are intervals j*n_k .. j*n_k + n_k - 1 at level k.
struct ImageHierarchy {
  QsMap map;
  std::vector<int> branching;                      // n_1..n_depth
  std::vector<Rational> preimage_lengths;          // delta_0..delta_depth
  std::vector<std::vector<RealInterval>> levels;   // levels[k].size() == N_k

  int depth() const { return static_cast<int>(levels.size()) - 1; }
};

ImageHierarchy build_image_hierarchy(const ParamSpec& params, const QsMap& map, int depth,
                                     int digits = kDefaultDigits, std::uint64_t cap = kDefaultIntervalCap);

class MassDistribution {
 public:
  const Real& d() const { return d_; }
  int depth() const { return images_->depth(); }
  const ImageHierarchy& images() const { return *images_; }
  const QsMap& map() const { return images_->map; }

  const Real& mass(int k, std::size_t i) const { return masses_[static_cast<std::size_t>(k)][i]; }
  const std::vector<Real>& masses(int k) const { return masses_[static_cast<std::size_t>(k)]; }
  // |J|^d for the image interval i at level k.
  const Real& length_power(int k, std::size_t i) const { return powers_[static_cast<std::size_t>(k)][i]; }
  // ||J||_d = sum of |child|^d over the children of interval i at level k < depth.
  const Real& norm(int k, std::size_t i) const { return norms_[static_cast<std::size_t>(k)][i]; }

  // Mass of the deepest-level intervals meeting [a,b] (closed), counted in
  // full: an upper bound for the mass of the window.
  Real window_mass(const Real& a, const Real& b) const;

 private:
  friend MassDistribution build_measure(std::shared_ptr<const ImageHierarchy> images, const Real& d, int digits);

  Real d_;
  std::shared_ptr<const ImageHierarchy> images_;
  std::vector<std::vector<Real>> masses_;
  std::vector<std::vector<Real>> powers_;
  std::vector<std::vector<Real>> norms_;
  std::vector<Real> prefix_;  // prefix sums of deepest-level masses
};

// mu(root) = 1; mu(child) = |child|^d / ||parent||_d * mu(parent).
MassDistribution build_measure(std::shared_ptr<const ImageHierarchy> images, const Real& d,
                               int digits = kDefaultDigits);

struct ProofConstants {
  int N = 0;       // 1 + max n_k over the tested prefix
  Real a;          // 1 - ((4N+4)/(4N+5))^(1/(4N+4))
  Real M;
  Real p;
  Real q;
  Real A;          // (1+M)^-2 / (2N)^q
  Real d;
  Real alpha2;     // (1+A)^(1-d)
};

ProofConstants make_proof_constants(const ParamSpec& params, int depth, const Real& M, const Real& d,
                                    int digits = kDefaultDigits);

// Midpoint-style choice inside (0,1) when q = 1 and (1/q, 1) when q > 1.
Real choose_d(const Real& q, const Real& fraction);

struct SkpReport {
  int k = 0;
  std::vector<bool> member;  // member[i-1] for i = 1..k
  int size = 0;
  Real density;
};

// S(k,p) = { i <= k : e_i^p <= min(a, delta_i^p) }.
SkpReport skp_set(const ParamSpec& params, const Real& p, int k, const Real& a, int digits = kDefaultDigits);

struct RProductReport {
  std::vector<int> address;
  std::vector<Real> r;                 // r_0..r_{k-1}
  std::vector<Real> running_product;   // prod_{i<=j} r_{i-1}, j = 1..k
  Real mass_ratio;                     // mu(J) / |J|^d
  Real identity_residual;              // |mass_ratio * prod - 1|
  SkpReport skp;
  Real xi;
  Real zeta;
  bool lower_bound_holds = false;      // prod >= xi * zeta
  Real growth;                         // prod^(1/k)
};

RProductReport r_products(const MassDistribution& measure, const ParamSpec& params, std::span<const int> address,
                          const ProofConstants& constants, int digits = kDefaultDigits);

// Test intervals made of every image fundamental interval of orders 0..depth.
std::vector<RealInterval> construction_test_intervals(const MassDistribution& measure);

// max_i mu(J_i)/|J_i|^d over the image intervals of each level k = 0..depth.
std::vector<Real> level_sup_ratios(const MassDistribution& measure);

struct FrostmanReport {
  Real d;
  Real C_empirical;
  std::size_t worst_index = 0;
  std::size_t tested = 0;
  Real C_cap;
  bool pass = false;
};

FrostmanReport frostman_check(const MassDistribution& measure, const Real& d, std::span<const RealInterval> tests,
                              const Real& C_cap);

// Number of image intervals of order k meeting the closed window [a,b], and
// the largest of their lengths.
struct ComponentHits {
  std::size_t count = 0;
  Real max_length;
};

ComponentHits components_meeting(const ImageHierarchy& images, int k, const Real& a, const Real& b);

// Smallest k in 1..depth with delta_k <= length (so delta_k <= length <= delta_{k-1}).
int window_level(const ImageHierarchy& images, const Real& preimage_length);

struct Step2Report {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t max_count = 0;
  std::size_t count_bound = 0;   // 2 (1 + max n)
  bool counts_within_bound = true;
  Real K_empirical;              // max |J_i| / |J| over hit components
  Real C_windows;                // max mu(J)/|J|^d over windows
  Real C_levels;                 // max over construction intervals
  Real proof_bound;              // count_bound * C_levels * K_empirical^d
  bool within_proof_bound = true;
};

Step2Report step2_window_check(const MassDistribution& measure, const Real& d, std::size_t samples,
                               std::uint64_t seed, int digits = kDefaultDigits);

// Deterministic uniform double in [0,1) from a 64-bit generator stream.
class UnitSampler {
 public:
  explicit UnitSampler(std::uint64_t seed);
  double next();

 private:
  std::mt19937_64 engine_;
};

struct CertificateRow {
  Real d;
  Real C_levels;
  bool trailing_nonincreasing = false;
  Step2Report windows;
  bool certified = false;
};

struct MinimalityOptions {
  int depth = 18;
  int digits = kDefaultDigits;
  Real d_fraction = Real(0.5);
  std::vector<double> d_grid = {0.25, 0.5, 0.75, 0.9, 0.95, 0.99};
  int M_depth = 14;
  double M_margin = 0.05;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  int formula_K = 60;
  int formula_window = 10;
  double hypothesis_threshold = 0.95;
  // Box-counting fit over construction scales delta_k with k > depth * box_skip_fraction.
  double box_skip_fraction = 1.0 / 3.0;
  std::uint64_t cap = kDefaultIntervalCap;
};

struct MinimalitySummary {
  DimensionReport formula;
  bool hypothesis_met = false;
  BoxCountReport box;                  // finer construction scales
  BoxCountReport box_all_scales;       // delta_1..delta_depth
  MEstimate M_hat;
  ProofConstants constants;            // at the default d
  Real r_growth_min;                   // min over leaf chains of prod^(1/depth)
  Real r_growth_max;
  Real xi_zeta_margin;                 // min over leaf chains of prod / (xi zeta)
  std::vector<CertificateRow> certificates;
  std::optional<Real> best_certified_d;
  Step2Report step2;                   // at the default d
};

// Whether d is certified from the level suprema: the trailing third of the
// levels never exceeds the value at its first level, and every sampled
// window stays within the bound assembled from the hit counts.
CertificateRow certify_exponent(const MassDistribution& measure, const MinimalityOptions& options);

MinimalitySummary minimality_experiment(const ParamSpec& params, const QsMap& map, const MinimalityOptions& options);

}  // namespace qsmin
