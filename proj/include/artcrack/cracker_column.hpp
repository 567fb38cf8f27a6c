#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "artcrack/value_interval.hpp"

namespace artcrack {

struct ColumnEntry {
  value_type value;
  std::uint64_t row_id;  // original tuple identity, stable across reorganization
};

// A contiguous slice of the column holding exactly the values inside its
// interval. Pieces tile the position space; their intervals are pairwise
// disjoint and ascending. `sorted` records whether the slice currently holds
// its values in ascending order; it is set when a slice is emitted sorted and
// dropped when a shuffle rotates elements through the slice.
struct Piece {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  ValueInterval interval;
  bool indexed = false;
  bool sorted = false;

  std::size_t size() const { return end - begin; }
};

// One element relocation performed by an update. `indexed` tells whether the
// element lives in an indexed piece, i.e. whether a tree payload must be
// repointed.
struct Relocation {
  value_type value;
  std::uint64_t row_id;
  std::size_t from;
  std::size_t to;
  bool indexed;
};

struct CrackOutcome {
  std::optional<std::size_t> result_piece;  // index of the [low, high] piece
  std::size_t first_piece = 0;              // replacement pieces occupy
  std::size_t piece_count = 0;              // [first_piece, first_piece + piece_count)
};

struct ShuffleInsertResult {
  std::size_t position = 0;
  std::size_t target_piece = 0;
  bool created_piece = false;  // value fell in a gap; a fresh one-value piece was made
  std::vector<Relocation> moved;

  std::size_t movements() const { return moved.size(); }
};

struct ShuffleDeleteResult {
  value_type value = 0;
  std::uint64_t row_id = 0;
  std::vector<Relocation> moved;

  std::size_t movements() const { return moved.size(); }
};

// Mutable copy of a base column, physically partitioned into pieces by crack
// operations. Cracking is in place: two passes of two-way partitioning give
// the three-way split, bound values land in the middle piece. Updates go
// through shuffling (one boundary relocation per piece, indexed runs hopped
// as a single unit) or through naive shifting for comparison runs.
class CrackerColumn {
 public:
  // Copies the base values, pairs them with row-ids 0..n-1; a single
  // unindexed piece covers the whole value domain. Throws on an empty base.
  static CrackerColumn copy_of(std::span<const value_type> base);

  std::size_t size() const { return data_.size(); }
  const std::vector<ColumnEntry>& data() const { return data_; }
  std::span<const Piece> pieces() const { return pieces_; }
  const Piece& piece(std::size_t idx) const { return pieces_[idx]; }
  std::size_t piece_count() const { return pieces_.size(); }

  std::optional<std::size_t> find_piece_by_value(value_type v) const;
  // Piece holding a position; throws std::out_of_range on an invalid one.
  std::size_t piece_at_position(std::size_t pos) const;
  // Indices of pieces whose interval meets [lo, hi], ascending. Requires
  // lo <= hi.
  std::vector<std::size_t> pieces_intersecting(value_type lo, value_type hi) const;

  // Partitions the piece around [lo, hi]. The middle piece, when any value
  // falls in range, holds exactly the values v with lo <= v <= hi and is
  // reported in the outcome. Throws std::logic_error on an indexed piece and
  // std::invalid_argument when [lo, hi] misses the piece interval.
  CrackOutcome crack(std::size_t piece_idx, value_type lo, value_type hi);

  // Sorts a piece ascending by (value, row_id) and flags it sorted.
  void sort_piece(std::size_t piece_idx);
  // Flags a piece as indexed; it must be sorted (a one-element piece counts).
  void mark_indexed(std::size_t piece_idx);

  // Places `value` inside the piece whose interval contains it (or a fresh
  // one-value piece when it falls in a gap between piece intervals). One
  // element is relocated per piece boundary above the target; position runs
  // in `skip_runs` (disjoint, sorted by begin) are hopped as single units and
  // physically merged into one piece. The array grows by one.
  ShuffleInsertResult shuffle_insert(value_type value, std::span<const PosRun> skip_runs);
  // Symmetric removal: the hole is bubbled toward the column tail, one
  // relocation per piece (or per skip run) above the position.
  ShuffleDeleteResult shuffle_delete(std::size_t pos, std::span<const PosRun> skip_runs);

  // Reference update paths that shift every trailing element by one slot.
  ShuffleInsertResult naive_insert(value_type value);
  ShuffleDeleteResult naive_delete(std::size_t pos);

  std::vector<value_type> values_in(std::size_t piece_idx) const;

  // Debug walker: tiling, interval ordering and disjointness, value
  // containment, sorted flags. Throws std::logic_error.
  void validate() const;

 private:
  CrackerColumn() = default;

  std::size_t target_piece_for(value_type value, bool& created);
  void merge_piece_range(std::size_t first, std::size_t last);

  std::vector<ColumnEntry> data_;
  std::vector<Piece> pieces_;
  std::uint64_t next_row_id_ = 0;
};

}  // namespace artcrack
