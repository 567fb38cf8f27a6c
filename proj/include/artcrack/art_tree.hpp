#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "artcrack/value_interval.hpp"

namespace artcrack {

namespace detail {
struct ArtNode;
}

// Adaptive radix tree over unsigned 64-bit keys. A key is traversed as 8
// bytes, most significant first, so lexicographic byte order equals numeric
// order. Each leaf holds the sorted set of column positions that carry its
// key. Internal nodes move along the 4/16/48/256 capacity ladder: grown
// exactly when an insert would overflow, shrunk when a removal fits the next
// smaller kind. One-child chains fold into the child's prefix and single-key
// subtrees collapse back to a leaf, so the height never exceeds the key
// width. Lookups verify the full key at the leaf, which also covers prefixes
// longer than the in-node buffer.
//
// Single-writer structure: no internal synchronization, concurrent readers
// are allowed only on a quiesced tree.
class ArtTree {
 public:
  struct NodeCensus {
    std::size_t leaves = 0;
    std::size_t node4 = 0;
    std::size_t node16 = 0;
    std::size_t node48 = 0;
    std::size_t node256 = 0;
  };

  ArtTree() = default;
  ~ArtTree();
  ArtTree(ArtTree&& other) noexcept;
  ArtTree& operator=(ArtTree&& other) noexcept;
  ArtTree(const ArtTree&) = delete;
  ArtTree& operator=(const ArtTree&) = delete;

  // Returns true when (key, pos) was not present before; duplicate pairs are
  // idempotent.
  bool insert(value_type key, row_pos pos);
  // Returns false ("not found") when (key, pos) was not present.
  bool erase(value_type key, row_pos pos);
  // Repoints one stored position of `key`; false when (key, from) is absent.
  bool update_position(value_type key, row_pos from, row_pos to);

  // Exact payload; nullptr when the key is absent. The pointer is valid until
  // the next mutation.
  const std::vector<row_pos>* lookup(value_type key) const;
  bool contains(value_type key) const { return lookup(key) != nullptr; }

  // Visits every key in [lo, hi] (both ends inclusive) in ascending order.
  // lo > hi visits nothing.
  void scan_range(value_type lo, value_type hi,
                  const std::function<void(value_type, const std::vector<row_pos>&)>& fn) const;
  std::vector<std::pair<value_type, std::vector<row_pos>>> range_scan(value_type lo,
                                                                      value_type hi) const;
  // Appends each key once per stored position: the multiset view used by
  // range queries.
  void append_values(value_type lo, value_type hi, std::vector<value_type>& out) const;

  std::size_t key_count() const { return key_count_; }
  std::size_t position_count() const { return position_count_; }
  bool empty() const { return root_ == nullptr; }
  void clear();

  NodeCensus census() const { return census_; }
  // Space estimate from the node-kind census plus payload storage.
  std::size_t approx_bytes() const;
  // Maximum root-to-leaf depth in nodes.
  std::size_t height() const;

  // Debug walker: capacity bounds, child ordering, prefix bookkeeping, the
  // height bound, and counter consistency. Throws std::logic_error.
  void validate() const;

 private:
  detail::ArtNode* root_ = nullptr;
  std::size_t key_count_ = 0;
  std::size_t position_count_ = 0;
  NodeCensus census_;
};

}  // namespace artcrack
