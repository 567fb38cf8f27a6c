#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "artcrack/cracker_column.hpp"
#include "artcrack/value_interval.hpp"

namespace artcrack {

// Ordered set of merged historical query ranges. Each entry is a closed
// value interval whose contents are fully indexed in the tree, together with
// the column position runs of the pieces it covers (piece references
// compacted to maximal contiguous runs). Entries are pairwise disjoint and
// never integer-adjacent: ranges that touch (hi + 1 == lo') merge, since over
// integer keys they form contiguous coverage.
class RangeLookupTable {
 public:
  struct Entry {
    value_type lo = 0;
    value_type hi = 0;
    std::vector<PosRun> piece_runs;
  };

  struct Hit {
    value_type lo = 0;  // intersection with the probed range, clipped
    value_type hi = 0;
    const std::vector<PosRun>* piece_runs = nullptr;
  };

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // Every entry intersecting [lo, hi], clipped to the intersection,
  // ascending. Requires lo <= hi.
  std::vector<Hit> probe(value_type lo, value_type hi) const;

  bool covers_value(value_type v) const;

  // Records [lo, hi] as indexed, absorbing every entry it overlaps or
  // touches; piece runs are unioned and compacted.
  void insert_and_merge(value_type lo, value_type hi, std::vector<PosRun> new_runs);

  // All piece runs across entries, ascending: the skip ranges handed to the
  // column shuffles.
  std::vector<PosRun> indexed_runs() const;

  // Recomputes every entry's piece runs from the column's current piece
  // layout, after physical reorganization moved positions around.
  void refresh_piece_runs(const CrackerColumn& column);

  std::vector<Entry> entries() const;
  // Number of key values covered by the table.
  value_type covered_length() const;

  // Debug walker: ordering, disjointness, no adjacent entries, compact runs.
  // Throws std::logic_error.
  void validate() const;

 private:
  struct Stored {
    value_type hi;
    std::vector<PosRun> piece_runs;
  };

  std::map<value_type, Stored> entries_;  // keyed by interval lower bound
};

// Sorts, merges overlapping/adjacent runs, drops empty ones.
std::vector<PosRun> compact_runs(std::vector<PosRun> runs);

}  // namespace artcrack
