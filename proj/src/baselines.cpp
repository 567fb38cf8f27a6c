#include "artcrack/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace artcrack {

StandardArt::StandardArt(std::span<const value_type> base) {
  for (value_type v : base) art_.insert(v, next_pos_++);
}

std::vector<value_type> StandardArt::query(value_type lo, value_type hi) const {
  std::vector<value_type> out;
  art_.append_values(lo, hi, out);
  return out;
}

void StandardArt::insert(value_type v) { art_.insert(v, next_pos_++); }

bool StandardArt::erase(value_type v) {
  const auto* positions = art_.lookup(v);
  if (positions == nullptr || positions->empty()) return false;
  return art_.erase(v, positions->back());
}

SortBinarySearch::SortBinarySearch(std::span<const value_type> base)
    : sorted_(base.begin(), base.end()) {
  std::sort(sorted_.begin(), sorted_.end());
}

std::vector<value_type> SortBinarySearch::query(value_type lo, value_type hi) const {
  if (lo > hi) return {};
  auto first = std::lower_bound(sorted_.begin(), sorted_.end(), lo);
  auto last = std::upper_bound(first, sorted_.end(), hi);
  return {first, last};
}

ClassicCracking::ClassicCracking(std::span<const value_type> base)
    : data_(base.begin(), base.end()) {
  if (data_.empty()) throw std::invalid_argument("empty column");
}

std::size_t ClassicCracking::partition_for(value_type v) {
  auto it = bounds_.find(v);
  if (it != bounds_.end()) return it->second;
  // Enclosing uncracked segment.
  std::size_t seg_begin = 0;
  std::size_t seg_end = data_.size();
  auto hi_it = bounds_.upper_bound(v);
  if (hi_it != bounds_.end()) seg_end = hi_it->second;
  if (hi_it != bounds_.begin()) seg_begin = std::prev(hi_it)->second;
  auto mid = std::partition(data_.begin() + static_cast<std::ptrdiff_t>(seg_begin),
                            data_.begin() + static_cast<std::ptrdiff_t>(seg_end),
                            [&](value_type x) { return x < v; });
  const std::size_t pos = static_cast<std::size_t>(mid - data_.begin());
  bounds_[v] = pos;
  return pos;
}

std::vector<value_type> ClassicCracking::query(value_type lo, value_type hi) {
  if (lo > hi) return {};
  const std::size_t first = partition_for(lo);
  const std::size_t last = hi == kValueMax ? data_.size() : partition_for(hi + 1);
  return {data_.begin() + static_cast<std::ptrdiff_t>(first),
          data_.begin() + static_cast<std::ptrdiff_t>(last)};
}

const char* to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::art_cracking: return "art_cracking";
    case EngineKind::standard_art: return "standard_art";
    case EngineKind::binary_search: return "binary_search";
    case EngineKind::classic_cracking: return "classic_cracking";
  }
  return "unknown";
}

EngineKind engine_kind_from_string(const std::string& name) {
  if (name == "art_cracking") return EngineKind::art_cracking;
  if (name == "standard_art") return EngineKind::standard_art;
  if (name == "binary_search") return EngineKind::binary_search;
  if (name == "classic_cracking") return EngineKind::classic_cracking;
  throw std::invalid_argument("unknown engine: " + name);
}

}  // namespace artcrack
