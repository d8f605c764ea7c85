#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace qsmin {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

inline constexpr int kDefaultDigits = 50;

// Sets the working precision (decimal digits) of newly created Real values
// for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(int digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned previous_;
};

// Parses "p/q" or "p". Decimal notation is rejected so that exact values
// never pass through binary floating point.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);

Real to_real(const Rational& value);
Real log_of(const Rational& value);
Real log_of(const Integer& value);

// Smallest integer >= value, for nonnegative arguments.
std::uint64_t ceil_count(const Rational& value);
std::uint64_t ceil_count(const Real& value);
std::uint64_t ceil_count(double value);

// Fixed-significant-digit rendering; stable across runs.
std::string format_real(const Real& value, int digits = 20);

// Relative tolerance implied by the current working precision, with a
// handful of guard digits given up.
Real working_tolerance();

}  // namespace qsmin
