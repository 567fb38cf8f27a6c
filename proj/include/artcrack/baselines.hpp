#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "artcrack/art_tree.hpp"
#include "artcrack/value_interval.hpp"

namespace artcrack {

// Reference engines the cracking index is benchmarked against. All of them
// answer query(lo, hi) with the same multiset a sort-then-filter oracle
// produces.

// Complete tree built up front: every key inserted before the first query.
class StandardArt {
 public:
  explicit StandardArt(std::span<const value_type> base);

  std::vector<value_type> query(value_type lo, value_type hi) const;
  void insert(value_type v);
  // Removes one copy when present.
  bool erase(value_type v);

  const ArtTree& art() const { return art_; }

 private:
  ArtTree art_;
  row_pos next_pos_ = 0;
};

// Fully sorted copy probed with binary searches.
class SortBinarySearch {
 public:
  explicit SortBinarySearch(std::span<const value_type> base);

  std::vector<value_type> query(value_type lo, value_type hi) const;

  const std::vector<value_type>& sorted() const { return sorted_; }

 private:
  std::vector<value_type> sorted_;
};

// Conventional cracking: a column copy partitioned in place per query, crack
// positions tracked in a balanced ordered map keyed by the crack value. The
// map entry for v holds the position of the first element >= v.
class ClassicCracking {
 public:
  explicit ClassicCracking(std::span<const value_type> base);

  std::vector<value_type> query(value_type lo, value_type hi);

  const std::vector<value_type>& data() const { return data_; }
  const std::map<value_type, std::size_t>& crack_bounds() const { return bounds_; }
  std::size_t piece_count() const { return bounds_.size() + 1; }

 private:
  // Position of the first element >= v, cracking the enclosing segment when
  // the bound is new.
  std::size_t partition_for(value_type v);

  std::vector<value_type> data_;
  std::map<value_type, std::size_t> bounds_;
};

enum class EngineKind { art_cracking, standard_art, binary_search, classic_cracking };

const char* to_string(EngineKind kind);
EngineKind engine_kind_from_string(const std::string& name);

}  // namespace artcrack
