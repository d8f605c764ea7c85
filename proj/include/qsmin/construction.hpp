#pragma once

// Exact construction of homogeneous perfect sets.
//
// A set is described level by level: at level k every fundamental interval of
// order k-1 contains n_k children of relative length c_k, separated by the
// relative gaps e_{k,0}, ..., e_{k,n_k} (end gaps included). All values are
// exact rationals and satisfy  sum_l e_{k,l} + n_k c_k = 1.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsmin/numeric.hpp"

namespace qsmin {

struct LevelParams {
  int branching = 0;            // n_k
  Rational ratio;               // c_k
  std::vector<Rational> gaps;   // e_{k,0..n_k}, relative to the parent length
};

enum class SequenceMode { finite, periodic };
enum class GapKind { relative, absolute };

// Sources for the three defining sequences. A source is either an explicit
// list (finite or repeated periodically) or a named rule.
struct BranchingSource {
  std::vector<int> values;
  SequenceMode mode = SequenceMode::finite;
};

struct RatioSource {
  enum class Rule { none, dim_one, full };
  std::vector<Rational> values;
  SequenceMode mode = SequenceMode::finite;
  Rule rule = Rule::none;
  int exponent = 2;  // dim_one: c_k = (1 - 1/(k+1)^exponent) / n_k
};

struct GapSource {
  enum class Rule { none, uniform, ends };
  std::vector<std::vector<Rational>> values;
  SequenceMode mode = SequenceMode::finite;
  Rule rule = Rule::none;
};

struct RawParams {
  BranchingSource branching;
  RatioSource ratio;
  GapSource gaps;
  GapKind gap_kind = GapKind::relative;
};

struct TailRule {
  enum class Kind { explicit_finite, periodic, named_family };
  Kind kind = Kind::explicit_finite;
  int depth = 0;      // explicit_finite
  int period = 0;     // periodic
  std::string name;   // named_family
};

// Validated parameter sequences in relative-gap form. Cheap to copy; levels
// are derived on demand from the shared immutable source.
class ParamSpec {
 public:
  // Relative gaps e_{k,l} for level k >= 1. Throws DepthError outside the
  // domain of the tail rule, RangeError / ConsistencyError on invalid data.
  LevelParams level(int k) const;

  // Largest valid level, or nullopt when the sequences are infinite.
  std::optional<int> max_depth() const;
  TailRule tail_rule() const;

  // Parameters of levels offset+1, offset+2, ... (the construction inside a
  // fixed order-offset interval, rescaled to [0,1]).
  ParamSpec shifted(int offset) const;

  const RawParams& raw() const { return *raw_; }
  int offset() const { return offset_; }

 private:
  friend ParamSpec normalize_params(const RawParams& raw, std::optional<int> depth);
  ParamSpec(std::shared_ptr<const RawParams> raw, int offset) : raw_(std::move(raw)), offset_(offset) {}

  LevelParams raw_level(int k) const;

  std::shared_ptr<const RawParams> raw_;
  int offset_ = 0;
};

// Validates levels 1..depth (default: every level of a finite spec, or the
// first 64 levels of an infinite one) and converts absolute gaps to relative.
ParamSpec normalize_params(const RawParams& raw, std::optional<int> depth = std::nullopt);

// Uniform Cantor sets: zero end gaps and equal interior gaps. Constant
// sequences are given as one-element lists with periodic mode.
ParamSpec uniform_cantor(std::vector<int> branching, std::vector<Rational> ratio,
                         SequenceMode mode = SequenceMode::periodic);

ParamSpec middle_thirds();
// n_k = n, c_k = (1 - 1/(k+1)^2)/n with equal interior gaps.
ParamSpec dim_one_family(int n = 2);
// c_k = 1/n_k, no gaps: E = [0,1].
ParamSpec full_set(int n = 2);

Rational delta(const ParamSpec& params, int k);
Integer count(const ParamSpec& params, int k);
// Absolute gaps eta_{k,l} = e_{k,l} * delta_{k-1}.
std::vector<Rational> gap_lengths(const ParamSpec& params, int k);

struct FundamentalInterval {
  int level = 0;
  std::vector<int> address;  // 1-based, address[j] in [1, n_{j+1}]
  Rational left;
  Rational right;
};

// The N_k fundamental intervals of order k, left to right. Only left
// endpoints are stored; every interval has length delta_k.
class LevelSet {
 public:
  LevelSet(int level, Rational length, std::vector<int> branching, std::vector<Rational> lefts);

  int level() const { return level_; }
  std::size_t size() const { return lefts_.size(); }
  const Rational& length() const { return length_; }
  const Rational& left(std::size_t i) const { return lefts_[i]; }
  Rational right(std::size_t i) const { return lefts_[i] + length_; }
  std::span<const Rational> lefts() const { return lefts_; }
  const std::vector<int>& branching() const { return branching_; }

  std::vector<int> address(std::size_t i) const;
  std::size_t index_of(std::span<const int> address) const;
  FundamentalInterval interval(std::size_t i) const;
  Rational total_length() const;

 private:
  int level_;
  Rational length_;
  std::vector<int> branching_;  // n_1..n_level
  std::vector<Rational> lefts_;
};

inline constexpr std::uint64_t kDefaultIntervalCap = std::uint64_t{1} << 24;

LevelSet build_level(const ParamSpec& params, int k, std::uint64_t cap = kDefaultIntervalCap);

}  // namespace qsmin
