#include "artcrack/cracker_column.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace artcrack {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::logic_error("CrackerColumn: " + what); }

// Skip run fully containing the piece's position range, if any. Runs are
// sorted by begin and disjoint.
std::optional<PosRun> covering_run(const Piece& piece, std::span<const PosRun> runs) {
  auto it = std::partition_point(runs.begin(), runs.end(),
                                 [&](const PosRun& r) { return r.end < piece.end; });
  if (it == runs.end()) return std::nullopt;
  if (piece.begin >= it->begin && piece.end <= it->end) return *it;
  return std::nullopt;
}

}  // namespace

CrackerColumn CrackerColumn::copy_of(std::span<const value_type> base) {
  if (base.empty()) throw std::invalid_argument("empty column");
  CrackerColumn col;
  col.data_.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    col.data_.push_back({base[i], static_cast<std::uint64_t>(i)});
  col.pieces_.push_back(Piece{0, base.size(), ValueInterval::all(), false, false});
  col.next_row_id_ = base.size();
  return col;
}

std::optional<std::size_t> CrackerColumn::find_piece_by_value(value_type v) const {
  auto it = std::partition_point(pieces_.begin(), pieces_.end(),
                                 [&](const Piece& p) { return p.interval.max() < v; });
  if (it == pieces_.end() || !it->interval.contains(v)) return std::nullopt;
  return static_cast<std::size_t>(it - pieces_.begin());
}

std::size_t CrackerColumn::piece_at_position(std::size_t pos) const {
  if (pos >= data_.size()) throw std::out_of_range("CrackerColumn: position out of range");
  auto it = std::partition_point(pieces_.begin(), pieces_.end(),
                                 [&](const Piece& p) { return p.end <= pos; });
  return static_cast<std::size_t>(it - pieces_.begin());
}

std::vector<std::size_t> CrackerColumn::pieces_intersecting(value_type lo, value_type hi) const {
  std::vector<std::size_t> out;
  auto it = std::partition_point(pieces_.begin(), pieces_.end(),
                                 [&](const Piece& p) { return p.interval.max() < lo; });
  for (; it != pieces_.end() && it->interval.min() <= hi; ++it)
    out.push_back(static_cast<std::size_t>(it - pieces_.begin()));
  return out;
}

CrackOutcome CrackerColumn::crack(std::size_t piece_idx, value_type lo, value_type hi) {
  const Piece p = pieces_[piece_idx];
  if (p.indexed) fail("crack on an indexed piece");
  if (!p.interval.intersects(lo, hi))
    throw std::invalid_argument("CrackerColumn: crack range misses the piece");

  auto first = data_.begin() + static_cast<std::ptrdiff_t>(p.begin);
  auto last = data_.begin() + static_cast<std::ptrdiff_t>(p.end);
  auto mid_first = std::partition(first, last, [&](const ColumnEntry& e) { return e.value < lo; });
  auto mid_last = std::partition(mid_first, last, [&](const ColumnEntry& e) { return e.value <= hi; });

  const std::size_t left_size = static_cast<std::size_t>(mid_first - first);
  const std::size_t mid_size = static_cast<std::size_t>(mid_last - mid_first);
  const std::size_t right_size = static_cast<std::size_t>(last - mid_last);

  std::vector<Piece> repl;
  std::size_t at = p.begin;
  if (left_size > 0) {
    ValueInterval left = p.interval;
    left.hi = lo;
    left.hi_open = true;
    repl.push_back(Piece{at, at + left_size, left, false, false});
    at += left_size;
  }
  CrackOutcome out;
  out.first_piece = piece_idx;
  if (mid_size > 0) {
    const ValueInterval mid = ValueInterval::closed(std::max(lo, p.interval.min()),
                                                    std::min(hi, p.interval.max()));
    out.result_piece = piece_idx + repl.size();
    repl.push_back(Piece{at, at + mid_size, mid, false, mid_size <= 1});
    at += mid_size;
  }
  if (right_size > 0) {
    ValueInterval right = p.interval;
    right.lo = hi;
    right.lo_open = true;
    repl.push_back(Piece{at, at + right_size, right, false, false});
  }
  out.piece_count = repl.size();

  pieces_.erase(pieces_.begin() + static_cast<std::ptrdiff_t>(piece_idx));
  pieces_.insert(pieces_.begin() + static_cast<std::ptrdiff_t>(piece_idx), repl.begin(),
                 repl.end());
  return out;
}

void CrackerColumn::sort_piece(std::size_t piece_idx) {
  Piece& p = pieces_[piece_idx];
  std::sort(data_.begin() + static_cast<std::ptrdiff_t>(p.begin),
            data_.begin() + static_cast<std::ptrdiff_t>(p.end),
            [](const ColumnEntry& a, const ColumnEntry& b) {
              return a.value != b.value ? a.value < b.value : a.row_id < b.row_id;
            });
  p.sorted = true;
}

void CrackerColumn::mark_indexed(std::size_t piece_idx) {
  Piece& p = pieces_[piece_idx];
  if (p.size() <= 1) p.sorted = true;
  if (!p.sorted) fail("mark_indexed on an unsorted piece");
  p.indexed = true;
}

std::size_t CrackerColumn::target_piece_for(value_type value, bool& created) {
  created = false;
  if (auto idx = find_piece_by_value(value)) return *idx;
  // Gap between piece intervals (or beyond either end): open a fresh
  // one-value piece at the boundary so inter-piece value order holds.
  auto it = std::partition_point(pieces_.begin(), pieces_.end(),
                                 [&](const Piece& p) { return p.interval.max() < value; });
  const std::size_t idx = static_cast<std::size_t>(it - pieces_.begin());
  const std::size_t at = idx < pieces_.size() ? pieces_[idx].begin : data_.size();
  pieces_.insert(pieces_.begin() + static_cast<std::ptrdiff_t>(idx),
                 Piece{at, at, ValueInterval::closed(value, value), false, true});
  created = true;
  return idx;
}

void CrackerColumn::merge_piece_range(std::size_t first, std::size_t last) {
  if (last <= first) return;
  Piece merged = pieces_[first];
  merged.end = pieces_[last].end;
  merged.interval.hi = pieces_[last].interval.hi;
  merged.interval.hi_open = pieces_[last].interval.hi_open;
  merged.indexed = true;
  merged.sorted = merged.size() <= 1;
  pieces_.erase(pieces_.begin() + static_cast<std::ptrdiff_t>(first),
                pieces_.begin() + static_cast<std::ptrdiff_t>(last + 1));
  pieces_.insert(pieces_.begin() + static_cast<std::ptrdiff_t>(first), merged);
}

ShuffleInsertResult CrackerColumn::shuffle_insert(value_type value,
                                                  std::span<const PosRun> skip_runs) {
  ShuffleInsertResult res;
  bool created = false;
  const std::size_t t = target_piece_for(value, created);
  res.created_piece = created;

  data_.push_back(ColumnEntry{0, 0});
  std::size_t hole = data_.size() - 1;

  // Walk pieces above the target from the top down. Pieces covered by one
  // skip run move as a single unit: one boundary element relocates and the
  // run's pieces become one merged piece.
  std::size_t p = pieces_.size();
  while (p-- > t + 1) {
    std::size_t first = p;
    bool is_run = false;
    if (auto run = covering_run(pieces_[p], skip_runs)) {
      is_run = true;
      while (first > t + 1) {
        const Piece& prev = pieces_[first - 1];
        if (prev.begin >= run->begin && prev.end <= run->end)
          --first;
        else
          break;
      }
    }
    const std::size_t head = pieces_[first].begin;
    const ColumnEntry moved = data_[head];
    data_[hole] = moved;
    res.moved.push_back(Relocation{moved.value, moved.row_id, head, hole, pieces_[first].indexed});
    hole = head;
    for (std::size_t i = first; i <= p; ++i) {
      pieces_[i].begin += 1;
      pieces_[i].end += 1;
    }
    if (is_run && p > first) {
      merge_piece_range(first, p);
    } else {
      pieces_[p].sorted = pieces_[p].size() <= 1;
    }
    p = first;
  }

  Piece& target = pieces_[t];
  data_[hole] = ColumnEntry{value, next_row_id_++};
  target.end += 1;
  if (target.size() == 1) {
    target.sorted = true;
  } else if (target.sorted && data_[hole - 1].value > value) {
    target.sorted = false;
  }
  res.position = hole;
  res.target_piece = t;
  return res;
}

ShuffleDeleteResult CrackerColumn::shuffle_delete(std::size_t pos,
                                                  std::span<const PosRun> skip_runs) {
  std::size_t p_idx = piece_at_position(pos);
  ShuffleDeleteResult res;
  res.value = data_[pos].value;
  res.row_id = data_[pos].row_id;

  Piece& p = pieces_[p_idx];
  const std::size_t last = p.end - 1;
  if (pos != last) {
    data_[pos] = data_[last];
    res.moved.push_back(Relocation{data_[pos].value, data_[pos].row_id, last, pos, p.indexed});
    p.sorted = p.size() - 1 <= 1;
  }
  p.end -= 1;
  std::size_t hole = last;
  std::size_t i = p_idx + 1;
  if (p.size() == 0) {
    pieces_.erase(pieces_.begin() + static_cast<std::ptrdiff_t>(p_idx));
    i = p_idx;
  }

  // Bubble the hole toward the tail: one relocation per piece, with skip
  // runs hopped (and merged) as single units.
  while (i < pieces_.size()) {
    std::size_t j = i;
    if (auto run = covering_run(pieces_[i], skip_runs)) {
      while (j + 1 < pieces_.size() && pieces_[j + 1].begin >= run->begin &&
             pieces_[j + 1].end <= run->end)
        ++j;
    }
    const std::size_t tail = pieces_[j].end - 1;
    const ColumnEntry moved = data_[tail];
    data_[hole] = moved;
    res.moved.push_back(Relocation{moved.value, moved.row_id, tail, hole, pieces_[j].indexed});
    hole = tail;
    for (std::size_t k = i; k <= j; ++k) {
      pieces_[k].begin -= 1;
      pieces_[k].end -= 1;
    }
    if (j > i) {
      merge_piece_range(i, j);
    } else {
      pieces_[i].sorted = pieces_[i].size() <= 1;
    }
    i += 1;
  }

  if (hole != data_.size() - 1) fail("delete hole did not reach the column tail");
  data_.pop_back();
  return res;
}

ShuffleInsertResult CrackerColumn::naive_insert(value_type value) {
  ShuffleInsertResult res;
  bool created = false;
  const std::size_t t = target_piece_for(value, created);
  res.created_piece = created;

  const std::size_t slot = pieces_[t].end;
  data_.push_back(ColumnEntry{0, 0});
  // Shift every element behind the slot one place toward the tail.
  for (std::size_t p = pieces_.size(); p-- > t + 1;) {
    Piece& piece = pieces_[p];
    for (std::size_t pos = piece.end; pos-- > piece.begin;) {
      data_[pos + 1] = data_[pos];
      res.moved.push_back(
          Relocation{data_[pos].value, data_[pos].row_id, pos, pos + 1, piece.indexed});
    }
    piece.begin += 1;
    piece.end += 1;
  }
  data_[slot] = ColumnEntry{value, next_row_id_++};
  Piece& target = pieces_[t];
  target.end += 1;
  if (target.size() == 1) {
    target.sorted = true;
  } else if (target.sorted && data_[slot - 1].value > value) {
    target.sorted = false;
  }
  res.position = slot;
  res.target_piece = t;
  return res;
}

ShuffleDeleteResult CrackerColumn::naive_delete(std::size_t pos) {
  std::size_t p_idx = piece_at_position(pos);
  ShuffleDeleteResult res;
  res.value = data_[pos].value;
  res.row_id = data_[pos].row_id;

  {
    Piece& p = pieces_[p_idx];
    for (std::size_t q = pos + 1; q < p.end; ++q) {
      data_[q - 1] = data_[q];
      res.moved.push_back(Relocation{data_[q - 1].value, data_[q - 1].row_id, q, q - 1, p.indexed});
    }
    p.end -= 1;
  }
  for (std::size_t k = p_idx + 1; k < pieces_.size(); ++k) {
    Piece& piece = pieces_[k];
    for (std::size_t q = piece.begin; q < piece.end; ++q) {
      data_[q - 1] = data_[q];
      res.moved.push_back(
          Relocation{data_[q - 1].value, data_[q - 1].row_id, q, q - 1, piece.indexed});
    }
    piece.begin -= 1;
    piece.end -= 1;
  }
  if (pieces_[p_idx].size() == 0)
    pieces_.erase(pieces_.begin() + static_cast<std::ptrdiff_t>(p_idx));
  data_.pop_back();
  return res;
}

std::vector<value_type> CrackerColumn::values_in(std::size_t piece_idx) const {
  const Piece& p = pieces_[piece_idx];
  std::vector<value_type> out;
  out.reserve(p.size());
  for (std::size_t i = p.begin; i < p.end; ++i) out.push_back(data_[i].value);
  return out;
}

void CrackerColumn::validate() const {
  if (pieces_.empty()) {
    if (!data_.empty()) fail("data without pieces");
    return;
  }
  std::size_t expect = 0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (p.begin != expect) fail("piece tiling gap at index " + std::to_string(i));
    if (p.begin >= p.end) fail("empty piece retained at index " + std::to_string(i));
    expect = p.end;
    if (p.interval.empty()) fail("piece with empty interval");
    if (i > 0 && pieces_[i - 1].interval.max() >= p.interval.min())
      fail("piece intervals overlap or are out of order");
    for (std::size_t pos = p.begin; pos < p.end; ++pos) {
      if (!p.interval.contains(data_[pos].value))
        fail("value outside its piece interval at position " + std::to_string(pos));
    }
    if (p.sorted) {
      for (std::size_t pos = p.begin + 1; pos < p.end; ++pos) {
        if (data_[pos - 1].value > data_[pos].value) fail("sorted piece is not ascending");
      }
    }
  }
  if (expect != data_.size()) fail("pieces do not cover the column");
}

}  // namespace artcrack
