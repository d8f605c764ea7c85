#include "qsmin/numeric.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "qsmin/errors.hpp"

namespace qsmin {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

}  // namespace

PrecisionScope::PrecisionScope(int digits) : previous_(Real::default_precision()) {
  if (digits < 10) throw RangeError("working precision must be at least 10 digits");
  Real::default_precision(static_cast<unsigned>(digits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(previous_); }

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);

  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw ConfigError("expected a rational of the form \"p/q\", got \"" + std::string(text) + "\"");
  }
  const Integer n{std::string(num)};
  const Integer d{std::string(den)};
  if (d == 0) throw ConfigError("zero denominator in \"" + std::string(text) + "\"");
  Rational value(n, d);
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
  std::ostringstream out;
  out << numerator(value) << '/' << denominator(value);
  return out.str();
}

Real to_real(const Rational& value) { return Real(value); }

Real log_of(const Rational& value) {
  if (value <= 0) throw DomainError("logarithm of a nonpositive rational");
  // log p - log q keeps full relative accuracy for tiny arguments.
  return log(Real(numerator(value))) - log(Real(denominator(value)));
}

Real log_of(const Integer& value) {
  if (value <= 0) throw DomainError("logarithm of a nonpositive integer");
  return log(Real(value));
}

std::uint64_t ceil_count(const Rational& value) {
  Integer q;
  Integer r;
  boost::multiprecision::divide_qr(numerator(value), denominator(value), q, r);
  if (r > 0) ++q;
  if (q < 0) return 0;
  return q.convert_to<std::uint64_t>();
}

std::uint64_t ceil_count(const Real& value) {
  const Real c = ceil(value);
  if (c < 0) return 0;
  return c.convert_to<std::uint64_t>();
}

std::uint64_t ceil_count(double value) {
  const double c = std::ceil(value);
  return c < 0 ? 0 : static_cast<std::uint64_t>(c);
}

std::string format_real(const Real& value, int digits) {
  std::ostringstream out;
  out << std::setprecision(digits) << value;
  return out.str();
}

Real working_tolerance() {
  const int digits = static_cast<int>(Real::default_precision());
  return pow(Real(10), -(digits - 8));
}

ConsistencyError::ConsistencyError(int level, Rational residual)
    : Error(ErrorKind::consistency,
            "gap/ratio identity fails at level " + std::to_string(level) + ": residual " + to_string(residual)),
      level_(level),
      residual_(std::move(residual)) {}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::degenerate:
      return 3;
    case ErrorKind::precision:
      return 4;
    default:
      return 2;
  }
}

}  // namespace qsmin
