#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "artcrack/value_interval.hpp"

namespace artcrack {

// Value-sorted buffer of pending inserts and deletes, one entry per value
// with a signed net multiplicity: +k means k pending inserts, -k means k
// pending deletes. Same-value resolution: a delete after an insert removes
// both; an insert after a delete covers (replaces) the deletion. The owner
// flushes when the entry count reaches capacity or when a query range
// intersects cached values, so the size never exceeds capacity at a public
// operation boundary.
class UpdateCache {
 public:
  struct PendingOp {
    value_type value;
    std::int64_t net;  // > 0 inserts, < 0 deletes
  };

  explicit UpdateCache(std::size_t capacity) : capacity_(capacity) {}

  void add_insert(value_type v) {
    auto [it, inserted] = entries_.try_emplace(v, 0);
    it->second = it->second < 0 ? 1 : it->second + 1;
  }

  void add_delete(value_type v) {
    auto [it, inserted] = entries_.try_emplace(v, 0);
    it->second -= 1;
    if (it->second == 0) entries_.erase(it);
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool full() const { return entries_.size() >= capacity_; }

  std::int64_t net_for(value_type v) const {
    auto it = entries_.find(v);
    return it == entries_.end() ? 0 : it->second;
  }

  std::optional<std::pair<value_type, value_type>> value_span() const {
    if (entries_.empty()) return std::nullopt;
    return std::make_pair(entries_.begin()->first, entries_.rbegin()->first);
  }

  // Removes and returns entries with value in [lo, hi], ascending.
  std::vector<PendingOp> take_range(value_type lo, value_type hi) {
    std::vector<PendingOp> out;
    auto it = entries_.lower_bound(lo);
    while (it != entries_.end() && it->first <= hi) {
      out.push_back(PendingOp{it->first, it->second});
      it = entries_.erase(it);
    }
    return out;
  }

  std::vector<PendingOp> snapshot() const {
    std::vector<PendingOp> out;
    out.reserve(entries_.size());
    for (const auto& [v, net] : entries_) out.push_back(PendingOp{v, net});
    return out;
  }

 private:
  std::map<value_type, std::int64_t> entries_;
  std::size_t capacity_;
};

}  // namespace artcrack
