#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "artcrack/art_tree.hpp"
#include "artcrack/cracker_column.hpp"
#include "artcrack/range_lookup_table.hpp"
#include "artcrack/update_cache.hpp"
#include "artcrack/value_interval.hpp"

namespace artcrack {

// Per-operation counters and phase wall times.
struct QueryStats {
  std::uint64_t init_ns = 0;
  std::uint64_t art_ns = 0;
  std::uint64_t crack_ns = 0;
  std::uint64_t finish_ns = 0;
  std::uint64_t total_ns = 0;
  std::size_t pieces_cracked = 0;  // crack-phase work counter
  std::size_t art_hit_values = 0;  // values served straight from the tree
  std::size_t result_size = 0;
  std::size_t movements = 0;  // element relocations done by updates
};

enum class UpdatePolicy {
  shuffling,    // one relocation per piece boundary, indexed runs as units
  naive_shift,  // shift every trailing element, for comparison runs
};

struct CrackingIndexOptions {
  std::size_t cache_capacity = 1024;
  UpdatePolicy update_policy = UpdatePolicy::shuffling;
};

// Range-query-driven index construction over one integer column. Each query
// runs four phases: lazy initialization of the column copy, a tree scan over
// the already-covered sub-ranges, cracking of the uncovered remainders (each
// result slice is sorted, inserted into the tree, and recorded), and a finish
// phase that merges the query range into the lookup table and flushes cached
// updates the range intersects. Updates to covered values apply immediately;
// everything else waits in the cache until a range hits it or the cache
// fills, at which point an internally issued query spanning the cached values
// drives the cracking and the backlog is applied.
//
// Single-threaded per instance; instances may move between threads when no
// operation is in flight.
class CrackingIndex {
 public:
  explicit CrackingIndex(std::vector<value_type> base, CrackingIndexOptions options = {});

  // Result multiset of visible values in [lo, hi] (unordered). lo > hi gives
  // an empty result.
  std::vector<value_type> query(value_type lo, value_type hi);

  void insert(value_type v);
  // Removes one visible copy of v; a no-op when v is absent from both the
  // column and the cache.
  void erase(value_type v);

  // Applies the whole update backlog now through an internal spanning query.
  void flush_updates();

  // Indexed keys over the committed column length; 0 before the first query.
  double building_rate() const;
  std::size_t committed_size() const { return column_ ? column_->size() : 0; }

  const QueryStats& last_stats() const { return last_; }
  std::size_t total_movements() const { return total_movements_; }
  std::size_t total_pieces_cracked() const { return total_pieces_cracked_; }

  const ArtTree& art() const { return art_; }
  const RangeLookupTable& table() const { return table_; }
  const UpdateCache& cache() const { return cache_; }
  const CrackerColumn* column() const { return column_ ? &*column_ : nullptr; }

  // Cross-module debug walker: per-structure invariants plus tree/column/
  // table consistency. Throws std::logic_error.
  void check_invariants() const;

 private:
  std::vector<value_type> query_impl(value_type lo, value_type hi, QueryStats& stats);
  void apply_insert_now(value_type v, QueryStats& stats);
  bool apply_delete_now(value_type v, QueryStats& stats);
  void apply_relocations(const std::vector<Relocation>& moved);

  std::vector<value_type> base_;
  CrackingIndexOptions options_;
  std::optional<CrackerColumn> column_;
  ArtTree art_;
  RangeLookupTable table_;
  UpdateCache cache_;
  QueryStats last_;
  std::size_t total_movements_ = 0;
  std::size_t total_pieces_cracked_ = 0;
  bool flushing_ = false;
};

}  // namespace artcrack
