#include "qsmin/qsmaps.hpp"

#include <algorithm>
#include <sstream>

#include "qsmin/errors.hpp"

namespace qsmin {

namespace {

void check_unit(const Real& x) {
  if (x < 0 || x > 1) throw DomainError("argument " + format_real(x) + " outside [0,1]");
}

Real clamp_unit(Real y) {
  if (y < 0) return Real(0);
  if (y > 1) return Real(1);
  return y;
}

// Value of a piecewise-linear map at each breakpoint, starting with f(0) = 0.
std::vector<Rational> knot_values(const std::vector<Rational>& breakpoints, const std::vector<Rational>& slopes) {
  std::vector<Rational> values{Rational(0)};
  Rational prev = 0;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    values.push_back(values.back() + slopes[i] * (breakpoints[i] - prev));
    prev = breakpoints[i];
  }
  values.push_back(values.back() + slopes.back() * (Rational(1) - prev));
  return values;
}

}  // namespace

QsMap QsMap::identity() { return QsMap(); }

QsMap QsMap::power(Rational alpha) {
  if (alpha <= 0) throw RangeError("power exponent must be positive, got " + to_string(alpha));
  QsMap m;
  m.kind_ = Kind::power;
  m.alpha_ = std::move(alpha);
  return m;
}

QsMap QsMap::piecewise_linear(std::vector<Rational> breakpoints, std::vector<Rational> slopes) {
  if (slopes.size() != breakpoints.size() + 1) {
    throw RangeError("piecewise-linear map needs one more slope than breakpoints");
  }
  Rational prev = 0;
  for (const auto& b : breakpoints) {
    if (b <= prev || b >= 1) throw RangeError("breakpoints must increase strictly inside (0,1)");
    prev = b;
  }
  for (const auto& s : slopes) {
    if (s <= 0) throw RangeError("piecewise-linear slopes must be positive");
  }
  const auto knots = knot_values(breakpoints, slopes);
  if (knots.back() != 1) {
    throw RangeError("piecewise-linear segments rise by " + to_string(knots.back()) + ", expected 1");
  }
  QsMap m;
  m.kind_ = Kind::piecewise_linear;
  m.breakpoints_ = std::move(breakpoints);
  m.slopes_ = std::move(slopes);
  return m;
}

QsMap QsMap::composition(std::vector<QsMap> parts) {
  if (parts.empty()) return identity();
  QsMap m;
  m.kind_ = Kind::composition;
  m.parts_ = std::move(parts);
  return m;
}

QsMap QsMap::inverse() const {
  switch (kind_) {
    case Kind::identity:
      return identity();
    case Kind::power:
      return power(Rational(1) / alpha_);
    case Kind::piecewise_linear: {
      const auto knots = knot_values(breakpoints_, slopes_);
      std::vector<Rational> bps(knots.begin() + 1, knots.end() - 1);
      std::vector<Rational> slopes;
      for (const auto& s : slopes_) slopes.push_back(Rational(1) / s);
      return piecewise_linear(std::move(bps), std::move(slopes));
    }
    case Kind::composition: {
      std::vector<QsMap> inv;
      for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) inv.push_back(it->inverse());
      return composition(std::move(inv));
    }
  }
  return identity();
}

std::string QsMap::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::identity:
      out << "identity";
      break;
    case Kind::power:
      out << "power(" << to_string(alpha_) << ")";
      break;
    case Kind::piecewise_linear:
      out << "piecewise_linear(" << breakpoints_.size() + 1 << " pieces)";
      break;
    case Kind::composition: {
      out << "composition(";
      for (std::size_t i = 0; i < parts_.size(); ++i) out << (i ? ", " : "") << parts_[i].describe();
      out << ")";
      break;
    }
  }
  return out.str();
}

QsMap qsmap_from_json(const nlohmann::json& doc) {
  if (doc.is_array()) {
    std::vector<QsMap> parts;
    for (const auto& d : doc) parts.push_back(qsmap_from_json(d));
    return QsMap::composition(std::move(parts));
  }
  if (!doc.is_object() || !doc.contains("kind")) throw ConfigError("map must be an object with a \"kind\"");
  const auto kind = doc.at("kind").get<std::string>();
  auto rational = [](const nlohmann::json& v) {
    if (!v.is_string()) throw ConfigError("map parameters must be rational strings, got " + v.dump());
    return parse_rational(v.get<std::string>());
  };
  if (kind == "identity") return QsMap::identity();
  if (kind == "power") return QsMap::power(rational(doc.at("alpha")));
  if (kind == "piecewise_linear") {
    std::vector<Rational> bps;
    std::vector<Rational> slopes;
    for (const auto& v : doc.at("breakpoints")) bps.push_back(rational(v));
    for (const auto& v : doc.at("slopes")) slopes.push_back(rational(v));
    return QsMap::piecewise_linear(std::move(bps), std::move(slopes));
  }
  if (kind == "composition") return qsmap_from_json(doc.at("maps"));
  throw ConfigError("unknown map kind \"" + kind + "\"");
}

nlohmann::json to_json(const QsMap& map) {
  switch (map.kind()) {
    case QsMap::Kind::identity:
      return {{"kind", "identity"}};
    case QsMap::Kind::power:
      return {{"kind", "power"}, {"alpha", to_string(map.alpha())}};
    case QsMap::Kind::piecewise_linear: {
      nlohmann::json bps = nlohmann::json::array();
      nlohmann::json slopes = nlohmann::json::array();
      for (const auto& b : map.breakpoints()) bps.push_back(to_string(b));
      for (const auto& s : map.slopes()) slopes.push_back(to_string(s));
      return {{"kind", "piecewise_linear"}, {"breakpoints", bps}, {"slopes", slopes}};
    }
    case QsMap::Kind::composition: {
      nlohmann::json parts = nlohmann::json::array();
      for (const auto& p : map.parts()) parts.push_back(to_json(p));
      return {{"kind", "composition"}, {"maps", parts}};
    }
  }
  return {};
}

Real eval(const QsMap& map, const Real& x) {
  check_unit(x);
  switch (map.kind()) {
    case QsMap::Kind::identity:
      return x;
    case QsMap::Kind::power:
      if (x == 0) return Real(0);
      return clamp_unit(pow(x, to_real(map.alpha())));
    case QsMap::Kind::piecewise_linear: {
      const auto& bps = map.breakpoints();
      const auto& slopes = map.slopes();
      std::size_t seg = 0;
      while (seg < bps.size() && x > to_real(bps[seg])) ++seg;
      const auto knots = knot_values(bps, slopes);
      const Rational start = seg == 0 ? Rational(0) : bps[seg - 1];
      return clamp_unit(to_real(knots[seg]) + to_real(slopes[seg]) * (x - to_real(start)));
    }
    case QsMap::Kind::composition: {
      Real y = x;
      for (const auto& part : map.parts()) y = eval(part, y);
      return y;
    }
  }
  return x;
}

Real eval(const QsMap& map, const Rational& x, int digits) {
  PrecisionScope scope(digits);
  if (x < 0 || x > 1) throw DomainError("argument " + to_string(x) + " outside [0,1]");
  return eval(map, to_real(x));
}

RealInterval image_interval(const QsMap& map, const Real& a, const Real& b) {
  if (a > b) throw DomainError("interval endpoints out of order");
  return {eval(map, a), eval(map, b)};
}

RealInterval image_interval(const QsMap& map, const Rational& a, const Rational& b, int digits) {
  PrecisionScope scope(digits);
  if (a < 0 || b > 1) throw DomainError("interval outside [0,1]");
  return image_interval(map, to_real(a), to_real(b));
}

MEstimate estimate_M(const QsMap& map, int depth, int digits) {
  if (depth < 1) throw RangeError("sweep depth must be at least 1");
  if (depth > 30) throw RangeError("sweep depth above 30 is not supported");
  PrecisionScope scope(digits);

  // Values on the finest grid; coarser scales are strided views of it.
  const std::uint64_t finest = std::uint64_t{1} << depth;
  std::vector<Real> values(finest + 1);
  const Real step = pow(Real(2), -depth);
  for (std::uint64_t i = 0; i <= finest; ++i) values[i] = eval(map, Real(step * i));

  const Real tol = working_tolerance();
  MEstimate best{Real(1), depth, 0, 0};
  for (int j = 1; j <= depth; ++j) {
    const std::uint64_t stride = std::uint64_t{1} << (depth - j);
    const std::uint64_t pieces = std::uint64_t{1} << j;
    Real prev_len = values[stride] - values[0];
    for (std::uint64_t i = 1; i < pieces; ++i) {
      Real len = values[(i + 1) * stride] - values[i * stride];
      if (len <= tol || prev_len <= tol) {
        throw PrecisionError("image lengths at scale 2^-" + std::to_string(j) +
                             " are indistinguishable at the working precision");
      }
      Real ratio = prev_len > len ? Real(prev_len / len) : Real(len / prev_len);
      if (ratio > best.value) best = {ratio, depth, j, i - 1};
      prev_len = std::move(len);
    }
  }
  return best;
}

PqExponents pq_exponents(const Real& M) {
  if (M < 1) throw RangeError("quasisymmetry constant must be at least 1, got " + format_real(M));
  return {M, log2(1 + 1 / M), log2(1 + M)};
}

DistortionReport distortion_check(const QsMap& map, const Real& M, const std::vector<NestedPair>& pairs, int digits) {
  PrecisionScope scope(digits);
  DistortionReport report;
  report.exponents = pq_exponents(M);
  const Real& p = report.exponents.p;
  const Real& q = report.exponents.q;
  const Real lower_const = 1 / ((1 + M) * (1 + M));
  const Real tol = working_tolerance();
  report.min_lower_slack = Real(1);
  report.min_upper_slack = Real(4);

  report.rows.reserve(pairs.size());
  for (const auto& pair : pairs) {
    const auto& J = pair.inner;
    const auto& I = pair.outer;
    if (I.left < 0 || I.right > 1 || I.length() <= 0) throw GeometryError("outer interval must be a nondegenerate subinterval of [0,1]");
    if (J.left < I.left || J.right > I.right || J.left > J.right) throw GeometryError("inner interval is not contained in the outer one");

    const RealInterval fJ = image_interval(map, to_real(J.left), to_real(J.right));
    const RealInterval fI = image_interval(map, to_real(I.left), to_real(I.right));
    if (fI.length() <= tol) throw PrecisionError("image of the outer interval is indistinguishable from a point");

    DistortionRow row;
    row.length_ratio = to_real(Rational(J.length() / I.length()));
    row.image_ratio = fJ.length() / fI.length();
    row.lower = lower_const * pow(row.length_ratio, q);
    row.upper = 4 * pow(row.length_ratio, p);
    row.lower_slack = row.image_ratio - row.lower;
    row.upper_slack = row.upper - row.image_ratio;
    row.pass = row.lower_slack >= -tol && row.upper_slack >= -tol;
    report.all_pass = report.all_pass && row.pass;
    if (row.lower_slack < report.min_lower_slack) report.min_lower_slack = row.lower_slack;
    if (row.upper_slack < report.min_upper_slack) report.min_upper_slack = row.upper_slack;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace qsmin
