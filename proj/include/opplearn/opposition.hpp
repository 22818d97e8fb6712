#ifndef OPPLEARN_OPPOSITION_HPP
#define OPPLEARN_OPPOSITION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "opplearn/errors.hpp"

namespace opplearn {

namespace detail {
template <typename Scalar>
std::string format_value(Scalar v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}
}  // namespace detail

/// Closed interval [lo, hi] with lo < hi.
template <typename Scalar>
class BasicBounds {
 public:
  BasicBounds(Scalar lo, Scalar hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw DomainError("bounds must be finite");
    if (!(lo < hi))
      throw DomainError("bounds require lo < hi, got [" + detail::format_value(lo) + ", " +
                        detail::format_value(hi) + "]");
  }

  Scalar lo() const { return lo_; }
  Scalar hi() const { return hi_; }
  Scalar width() const { return hi_ - lo_; }
  bool contains(Scalar x) const { return lo_ <= x && x <= hi_; }
  Scalar clamp(Scalar x) const { return std::clamp(x, lo_, hi_); }

  friend bool operator==(const BasicBounds&, const BasicBounds&) = default;

 private:
  Scalar lo_;
  Scalar hi_;
};

using Bounds = BasicBounds<double>;

/// Which oppositeness formula to apply: reflection (T1), modular shift (T2)
/// or reflection about the running mean (T3).
enum class OppositionScheme { T1, T2, T3 };

inline std::string_view to_string(OppositionScheme s) {
  switch (s) {
    case OppositionScheme::T1: return "t1";
    case OppositionScheme::T2: return "t2";
    case OppositionScheme::T3: return "t3";
  }
  return "?";
}

/// Accepts "t1".."t3" in either case. Throws ConfigError otherwise.
inline OppositionScheme parse_scheme(std::string_view text) {
  if (text == "t1" || text == "T1") return OppositionScheme::T1;
  if (text == "t2" || text == "T2") return OppositionScheme::T2;
  if (text == "t3" || text == "T3") return OppositionScheme::T3;
  throw ConfigError("unknown opposition scheme '" + std::string(text) + "', expected t1|t2|t3");
}

/// Min, max and mean of every value observed so far.
///
/// Values are immutable; update_range() returns the extended range.
template <typename Scalar>
struct BasicRunningRange {
  Scalar min_seen = 0;
  Scalar max_seen = 0;
  Scalar mean_seen = 0;
  std::uint64_t count = 0;

  bool empty() const { return count == 0; }
  bool degenerate() const { return count == 0 || !(min_seen < max_seen); }

  /// Builds a range from summary statistics, checking min <= mean <= max.
  static BasicRunningRange from_stats(Scalar min, Scalar max, Scalar mean, std::uint64_t count) {
    if (count == 0) throw RangeError("running range needs count >= 1");
    if (!(min <= mean && mean <= max))
      throw RangeError("running range requires min <= mean <= max");
    return BasicRunningRange{min, max, mean, count};
  }

  friend bool operator==(const BasicRunningRange&, const BasicRunningRange&) = default;
};

using RunningRange = BasicRunningRange<double>;

template <typename Scalar>
BasicRunningRange<Scalar> update_range(const BasicRunningRange<Scalar>& range, Scalar v) {
  if (!std::isfinite(v))
    throw DomainError("cannot observe non-finite value " + detail::format_value(v));
  if (range.count == 0) return BasicRunningRange<Scalar>{v, v, v, 1};
  BasicRunningRange<Scalar> out = range;
  out.count += 1;
  out.min_seen = std::min(range.min_seen, v);
  out.max_seen = std::max(range.max_seen, v);
  out.mean_seen = range.mean_seen + (v - range.mean_seen) / static_cast<Scalar>(out.count);
  // rounding must not push the mean outside the observed interval
  out.mean_seen = std::clamp(out.mean_seen, out.min_seen, out.max_seen);
  return out;
}

template <typename Scalar>
Scalar type1_opposite(Scalar x, const BasicBounds<Scalar>& b) {
  if (!b.contains(x))
    throw DomainError("value " + detail::format_value(x) + " outside bounds [" +
                      detail::format_value(b.lo()) + ", " + detail::format_value(b.hi()) + "]");
  return b.lo() + b.hi() - x;
}

namespace detail {
template <typename Scalar>
Scalar reflect(Scalar v, const BasicRunningRange<Scalar>& r) {
  return r.min_seen + r.max_seen - v;
}

// Real-valued modulo with a result in [0, modulus).
template <typename Scalar>
Scalar positive_fmod(Scalar v, Scalar modulus) {
  Scalar r = std::fmod(v, modulus);
  if (r < 0) {
    r += modulus;
    if (r >= modulus) r = 0;
  }
  return r;
}
}  // namespace detail

/// Opposite of v under the given scheme, relative to the values seen so far.
///
/// T3 falls back to the T1 reflection when 2*mean - v leaves [min, max], so
/// its result always stays inside the observed range. T2 uses the literal
/// `(v + (min + max) / 2) mod max` and is only defined for max > 0.
template <typename Scalar>
Scalar scheme_opposite(Scalar v, OppositionScheme scheme, const BasicRunningRange<Scalar>& range) {
  if (range.empty()) throw RangeError("scheme opposite needs at least one observed value");
  switch (scheme) {
    case OppositionScheme::T1:
      if (range.degenerate()) throw RangeError("degenerate range (min == max) under scheme t1");
      return detail::reflect(v, range);
    case OppositionScheme::T2: {
      if (range.degenerate()) throw RangeError("degenerate range (min == max) under scheme t2");
      if (!(range.max_seen > 0))
        throw DomainError("scheme t2 needs a positive maximum, got " +
                          detail::format_value(range.max_seen));
      const Scalar shifted = v + (range.min_seen + range.max_seen) / 2;
      return detail::positive_fmod(shifted, range.max_seen);
    }
    case OppositionScheme::T3: {
      const Scalar opp = 2 * range.mean_seen - v;
      if (opp < range.min_seen || opp > range.max_seen) return detail::reflect(v, range);
      return opp;
    }
  }
  throw ConfigError("unknown opposition scheme");
}

}  // namespace opplearn

#endif  // OPPLEARN_OPPOSITION_HPP
