#pragma once

// Increasing homeomorphisms of [0,1] fixing both endpoints, evaluated in
// configurable-precision arithmetic, together with the dyadic estimate of the
// quasisymmetry constant and the nested-interval distortion bounds
//
//   (1+M)^-2 (|J|/|I|)^q  <=  |f(J)| / |f(I)|  <=  4 (|J|/|I|)^p,
//   p = log2(1 + 1/M),  q = log2(1 + M).

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsmin/numeric.hpp"

namespace qsmin {

template <typename T>
struct Interval {
  T left;
  T right;
  T length() const { return right - left; }
};

using RealInterval = Interval<Real>;
using RationalInterval = Interval<Rational>;

class QsMap {
 public:
  enum class Kind { identity, power, piecewise_linear, composition };

  static QsMap identity();
  static QsMap power(Rational alpha);
  // Breakpoints b_1 < ... < b_m in (0,1) and m+1 positive slopes whose
  // segments rise by exactly 1 in total.
  static QsMap piecewise_linear(std::vector<Rational> breakpoints, std::vector<Rational> slopes);
  // Applied left to right: composition({f, g})(x) = g(f(x)).
  static QsMap composition(std::vector<QsMap> parts);

  Kind kind() const { return kind_; }
  const Rational& alpha() const { return alpha_; }
  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Rational>& slopes() const { return slopes_; }
  const std::vector<QsMap>& parts() const { return parts_; }

  QsMap inverse() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::identity;
  Rational alpha_ = 1;
  std::vector<Rational> breakpoints_;
  std::vector<Rational> slopes_;
  std::vector<QsMap> parts_;
};

QsMap qsmap_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const QsMap& map);

// Evaluates at the current working precision (see PrecisionScope).
Real eval(const QsMap& map, const Real& x);
Real eval(const QsMap& map, const Rational& x, int digits);

RealInterval image_interval(const QsMap& map, const Rational& a, const Rational& b, int digits);
RealInterval image_interval(const QsMap& map, const Real& a, const Real& b);

struct MEstimate {
  Real value;          // max over the sweep, >= 1
  int depth = 0;
  int witness_scale = 0;          // j with pair length 2^-j
  std::uint64_t witness_index = 0;  // I = [i 2^-j, (i+1) 2^-j], J its right neighbour
};

// Max of |f(I)|/|f(J)| and its reciprocal over adjacent dyadic pairs of
// length 2^-j, j = 1..depth.
MEstimate estimate_M(const QsMap& map, int depth, int digits = kDefaultDigits);

struct PqExponents {
  Real M;
  Real p;
  Real q;
};

PqExponents pq_exponents(const Real& M);

struct NestedPair {
  RationalInterval inner;  // J
  RationalInterval outer;  // I
};

struct DistortionRow {
  Real length_ratio;   // |J| / |I|
  Real lower;
  Real image_ratio;    // |f(J)| / |f(I)|
  Real upper;
  Real lower_slack;    // image_ratio - lower
  Real upper_slack;    // upper - image_ratio
  bool pass = false;
};

struct DistortionReport {
  PqExponents exponents;
  std::vector<DistortionRow> rows;
  bool all_pass = true;
  Real min_lower_slack;
  Real min_upper_slack;
};

DistortionReport distortion_check(const QsMap& map, const Real& M, const std::vector<NestedPair>& pairs,
                                  int digits = kDefaultDigits);

}  // namespace qsmin
