#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace artcrack {

using value_type = std::uint64_t;
using row_pos = std::uint64_t;

inline constexpr value_type kValueMin = 0;
inline constexpr value_type kValueMax = std::numeric_limits<value_type>::max();

// A contiguous range of key values. Each end is independently open (bound
// excluded) or closed (bound included). The key domain is [kValueMin,
// kValueMax], so an "unbounded" end is just a closed domain extreme.
struct ValueInterval {
  value_type lo = kValueMin;
  value_type hi = kValueMax;
  bool lo_open = false;
  bool hi_open = false;

  static constexpr ValueInterval all() { return {}; }
  static constexpr ValueInterval closed(value_type lo, value_type hi) {
    return {lo, hi, false, false};
  }
  // values strictly below x
  static constexpr ValueInterval below(value_type x) {
    return {kValueMin, x, false, true};
  }
  // values strictly above x
  static constexpr ValueInterval above(value_type x) {
    return {x, kValueMax, true, false};
  }

  constexpr bool empty() const {
    if (lo_open && lo == kValueMax) return true;
    if (hi_open && hi == kValueMin) return true;
    return (lo_open ? lo + 1 : lo) > (hi_open ? hi - 1 : hi);
  }

  // Tightest closed bounds; meaningful only when !empty().
  constexpr value_type min() const { return lo_open ? lo + 1 : lo; }
  constexpr value_type max() const { return hi_open ? hi - 1 : hi; }

  constexpr bool contains(value_type v) const {
    const bool above_lo = lo_open ? v > lo : v >= lo;
    const bool below_hi = hi_open ? v < hi : v <= hi;
    return above_lo && below_hi;
  }

  // Overlap with the closed range [qlo, qhi].
  constexpr bool intersects(value_type qlo, value_type qhi) const {
    if (empty() || qlo > qhi) return false;
    return min() <= qhi && qlo <= max();
  }

  friend constexpr bool operator==(const ValueInterval&, const ValueInterval&) = default;
};

// Half-open range of column positions.
struct PosRun {
  std::size_t begin = 0;
  std::size_t end = 0;

  constexpr std::size_t size() const { return end - begin; }
  constexpr bool empty() const { return begin >= end; }
  constexpr bool contains(std::size_t pos) const { return pos >= begin && pos < end; }

  friend constexpr bool operator==(const PosRun&, const PosRun&) = default;
};

}  // namespace artcrack
