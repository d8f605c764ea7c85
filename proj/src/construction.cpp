#include "qsmin/construction.hpp"

#include <algorithm>
#include <numeric>

#include "qsmin/errors.hpp"

namespace qsmin {

namespace {

constexpr int kDefaultValidationDepth = 64;

template <typename T>
const T& pick(const std::vector<T>& values, SequenceMode mode, int k, const char* what) {
  if (values.empty()) throw ConfigError(std::string("empty ") + what + " sequence");
  const auto index = static_cast<std::size_t>(k - 1);
  if (mode == SequenceMode::periodic) return values[index % values.size()];
  if (index >= values.size()) {
    throw DepthError(std::string(what) + " sequence is defined up to level " + std::to_string(values.size()) +
                     ", level " + std::to_string(k) + " requested");
  }
  return values[index];
}

std::optional<int> finite_length(std::size_t size, SequenceMode mode, bool is_rule) {
  if (is_rule || mode == SequenceMode::periodic) return std::nullopt;
  return static_cast<int>(size);
}

void validate(int k, const LevelParams& lp) {
  if (lp.branching < 2) {
    throw RangeError("n_" + std::to_string(k) + " = " + std::to_string(lp.branching) + " must be at least 2");
  }
  if (lp.ratio <= 0 || lp.ratio >= 1) {
    throw RangeError("c_" + std::to_string(k) + " = " + to_string(lp.ratio) + " must lie in (0,1)");
  }
  if (lp.gaps.size() != static_cast<std::size_t>(lp.branching) + 1) {
    throw ConfigError("level " + std::to_string(k) + " needs " + std::to_string(lp.branching + 1) +
                      " gaps, got " + std::to_string(lp.gaps.size()));
  }
  Rational total = lp.ratio * lp.branching;
  for (const auto& e : lp.gaps) {
    if (e < 0) throw RangeError("negative gap at level " + std::to_string(k) + ": " + to_string(e));
    total += e;
  }
  if (total != 1) throw ConsistencyError(k, total - 1);
}

Rational slack(int n, const Rational& c, int k) {
  Rational s = 1 - c * n;
  if (s < 0) {
    throw RangeError("n_k c_k = " + to_string(Rational(c * n)) + " exceeds 1 at level " + std::to_string(k));
  }
  return s;
}

Rational ratio_at(const RawParams& raw, int k, int n) {
  switch (raw.ratio.rule) {
    case RatioSource::Rule::dim_one: {
      Integer base = pow(Integer(k + 1), static_cast<unsigned>(raw.ratio.exponent));
      return (Rational(1) - Rational(Integer(1), base)) / n;
    }
    case RatioSource::Rule::full:
      return Rational(1, n);
    case RatioSource::Rule::none:
      break;
  }
  return pick(raw.ratio.values, raw.ratio.mode, k, "ratio");
}

}  // namespace

LevelParams ParamSpec::raw_level(int k) const {
  const RawParams& raw = *raw_;
  LevelParams lp;
  lp.branching = pick(raw.branching.values, raw.branching.mode, k, "branching");
  lp.ratio = ratio_at(raw, k, lp.branching);

  const int n = lp.branching;
  switch (raw.gaps.rule) {
    case GapSource::Rule::none: {
      lp.gaps = pick(raw.gaps.values, raw.gaps.mode, k, "gaps");
      if (raw.gap_kind == GapKind::absolute) {
        Rational parent = 1;
        for (int i = 1; i < k; ++i) {
          parent *= ratio_at(raw, i, pick(raw.branching.values, raw.branching.mode, i, "branching"));
        }
        for (auto& e : lp.gaps) e /= parent;
      }
      break;
    }
    case GapSource::Rule::uniform: {
      const Rational interior = slack(n, lp.ratio, k) / (n - 1);
      lp.gaps.assign(static_cast<std::size_t>(n) + 1, interior);
      lp.gaps.front() = 0;
      lp.gaps.back() = 0;
      break;
    }
    case GapSource::Rule::ends: {
      const Rational end = slack(n, lp.ratio, k) / 2;
      lp.gaps.assign(static_cast<std::size_t>(n) + 1, Rational(0));
      lp.gaps.front() = end;
      lp.gaps.back() = end;
      break;
    }
  }
  return lp;
}

LevelParams ParamSpec::level(int k) const {
  if (k < 1) throw DepthError("levels start at 1, got " + std::to_string(k));
  if (auto md = max_depth(); md && k > *md) {
    throw DepthError("level " + std::to_string(k) + " beyond explicit depth " + std::to_string(*md));
  }
  LevelParams lp = raw_level(k + offset_);
  validate(k + offset_, lp);
  return lp;
}

std::optional<int> ParamSpec::max_depth() const {
  const RawParams& raw = *raw_;
  std::optional<int> depth;
  auto merge = [&depth](std::optional<int> d) {
    if (d) depth = depth ? std::min(*depth, *d) : *d;
  };
  merge(finite_length(raw.branching.values.size(), raw.branching.mode, false));
  merge(finite_length(raw.ratio.values.size(), raw.ratio.mode, raw.ratio.rule != RatioSource::Rule::none));
  merge(finite_length(raw.gaps.values.size(), raw.gaps.mode, raw.gaps.rule != GapSource::Rule::none));
  if (depth) return std::max(0, *depth - offset_);
  return std::nullopt;
}

TailRule ParamSpec::tail_rule() const {
  const RawParams& raw = *raw_;
  TailRule rule;
  std::string name;
  if (raw.ratio.rule == RatioSource::Rule::dim_one) name += "ratio:dim_one";
  if (raw.ratio.rule == RatioSource::Rule::full) name += "ratio:full";
  if (raw.gaps.rule == GapSource::Rule::uniform) name += std::string(name.empty() ? "" : ",") + "gaps:uniform";
  if (raw.gaps.rule == GapSource::Rule::ends) name += std::string(name.empty() ? "" : ",") + "gaps:ends";

  if (auto md = max_depth()) {
    rule.kind = TailRule::Kind::explicit_finite;
    rule.depth = *md;
  } else if (!name.empty()) {
    rule.kind = TailRule::Kind::named_family;
    rule.name = name;
  } else {
    rule.kind = TailRule::Kind::periodic;
    std::size_t period = 1;
    period = std::lcm(period, raw.branching.values.size());
    if (raw.ratio.rule == RatioSource::Rule::none) period = std::lcm(period, raw.ratio.values.size());
    if (raw.gaps.rule == GapSource::Rule::none) period = std::lcm(period, raw.gaps.values.size());
    rule.period = static_cast<int>(period);
  }
  return rule;
}

ParamSpec ParamSpec::shifted(int offset) const {
  if (offset < 0) throw DepthError("negative shift");
  return ParamSpec(raw_, offset_ + offset);
}

ParamSpec normalize_params(const RawParams& raw, std::optional<int> depth) {
  ParamSpec spec(std::make_shared<const RawParams>(raw), 0);
  int upto = depth.value_or(spec.max_depth().value_or(kDefaultValidationDepth));
  if (auto md = spec.max_depth(); md && upto > *md) {
    throw DepthError("requested depth " + std::to_string(upto) + " exceeds explicit depth " + std::to_string(*md));
  }
  for (int k = 1; k <= upto; ++k) (void)spec.level(k);
  return spec;
}

ParamSpec uniform_cantor(std::vector<int> branching, std::vector<Rational> ratio, SequenceMode mode) {
  if (branching.empty() || ratio.empty()) throw ConfigError("uniform_cantor needs nonempty sequences");
  const std::size_t period = std::max(branching.size(), ratio.size());
  for (std::size_t i = 0; i < period; ++i) {
    if (mode == SequenceMode::finite && (i >= branching.size() || i >= ratio.size())) break;
    const int n = branching[i % branching.size()];
    (void)slack(n, ratio[i % ratio.size()], static_cast<int>(i) + 1);
  }
  RawParams raw;
  raw.branching = {std::move(branching), mode};
  raw.ratio.values = std::move(ratio);
  raw.ratio.mode = mode;
  raw.gaps.rule = GapSource::Rule::uniform;
  return normalize_params(raw);
}

ParamSpec middle_thirds() { return uniform_cantor({2}, {Rational(1, 3)}); }

ParamSpec dim_one_family(int n) {
  RawParams raw;
  raw.branching = {{n}, SequenceMode::periodic};
  raw.ratio.rule = RatioSource::Rule::dim_one;
  raw.gaps.rule = GapSource::Rule::uniform;
  return normalize_params(raw);
}

ParamSpec full_set(int n) {
  RawParams raw;
  raw.branching = {{n}, SequenceMode::periodic};
  raw.ratio.rule = RatioSource::Rule::full;
  raw.gaps.rule = GapSource::Rule::uniform;
  return normalize_params(raw);
}

Rational delta(const ParamSpec& params, int k) {
  if (k < 0) throw DepthError("negative level");
  Rational d = 1;
  for (int i = 1; i <= k; ++i) d *= params.level(i).ratio;
  return d;
}

Integer count(const ParamSpec& params, int k) {
  if (k < 0) throw DepthError("negative level");
  Integer n = 1;
  for (int i = 1; i <= k; ++i) n *= params.level(i).branching;
  return n;
}

std::vector<Rational> gap_lengths(const ParamSpec& params, int k) {
  if (k < 1) throw DepthError("gaps are defined for levels k >= 1");
  const Rational parent = delta(params, k - 1);
  std::vector<Rational> eta = params.level(k).gaps;
  for (auto& e : eta) e *= parent;
  return eta;
}

LevelSet::LevelSet(int level, Rational length, std::vector<int> branching, std::vector<Rational> lefts)
    : level_(level), length_(std::move(length)), branching_(std::move(branching)), lefts_(std::move(lefts)) {}

std::vector<int> LevelSet::address(std::size_t i) const {
  std::vector<int> digits(branching_.size());
  for (std::size_t j = branching_.size(); j-- > 0;) {
    const auto n = static_cast<std::size_t>(branching_[j]);
    digits[j] = static_cast<int>(i % n) + 1;
    i /= n;
  }
  return digits;
}

std::size_t LevelSet::index_of(std::span<const int> address) const {
  if (address.size() != branching_.size()) {
    throw ChainError("address length " + std::to_string(address.size()) + " does not match level " +
                     std::to_string(level_));
  }
  std::size_t index = 0;
  for (std::size_t j = 0; j < address.size(); ++j) {
    if (address[j] < 1 || address[j] > branching_[j]) {
      throw ChainError("address digit " + std::to_string(address[j]) + " out of range at position " +
                       std::to_string(j + 1));
    }
    index = index * static_cast<std::size_t>(branching_[j]) + static_cast<std::size_t>(address[j] - 1);
  }
  return index;
}

FundamentalInterval LevelSet::interval(std::size_t i) const {
  return {level_, address(i), lefts_[i], right(i)};
}

Rational LevelSet::total_length() const { return length_ * static_cast<long>(lefts_.size()); }

LevelSet build_level(const ParamSpec& params, int k, std::uint64_t cap) {
  if (k < 0) throw DepthError("negative level");
  const Integer total = count(params, k);
  if (total > cap) {
    throw CapacityError("level " + std::to_string(k) + " has " + total.str() + " intervals, cap is " +
                        std::to_string(cap));
  }

  std::vector<Rational> lefts{Rational(0)};
  std::vector<int> branching;
  Rational parent_length = 1;
  for (int j = 1; j <= k; ++j) {
    const LevelParams lp = params.level(j);
    const Rational child_length = parent_length * lp.ratio;

    // Offsets of the children inside a parent: end gap, then child/gap pairs.
    std::vector<Rational> offsets;
    offsets.reserve(static_cast<std::size_t>(lp.branching));
    Rational cursor = lp.gaps[0] * parent_length;
    for (int i = 1; i <= lp.branching; ++i) {
      offsets.push_back(cursor);
      cursor += child_length + lp.gaps[static_cast<std::size_t>(i)] * parent_length;
    }

    std::vector<Rational> next;
    next.reserve(lefts.size() * offsets.size());
    for (const auto& parent : lefts) {
      for (const auto& off : offsets) next.push_back(parent + off);
    }
    lefts = std::move(next);
    branching.push_back(lp.branching);
    parent_length = child_length;
  }
  return LevelSet(k, std::move(parent_length), std::move(branching), std::move(lefts));
}

}  // namespace qsmin
