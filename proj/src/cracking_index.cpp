#include "artcrack/cracking_index.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace artcrack {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t ns_since(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
}

[[noreturn]] void fail(const std::string& what) { throw std::logic_error("CrackingIndex: " + what); }

// [lo, hi] minus the hit intervals, as closed sub-intervals in ascending
// order. Hits are disjoint, clipped, and ascending.
std::vector<std::pair<value_type, value_type>> uncovered_remainders(
    value_type lo, value_type hi, const std::vector<RangeLookupTable::Hit>& hits) {
  std::vector<std::pair<value_type, value_type>> out;
  value_type cursor = lo;
  bool open = true;
  for (const auto& h : hits) {
    if (open && h.lo > cursor) out.emplace_back(cursor, h.lo - 1);
    if (h.hi == kValueMax) {
      open = false;
      break;
    }
    cursor = h.hi + 1;
    open = cursor > hi ? false : true;
    if (!open) break;
  }
  if (open && cursor <= hi) out.emplace_back(cursor, hi);
  return out;
}

}  // namespace

CrackingIndex::CrackingIndex(std::vector<value_type> base, CrackingIndexOptions options)
    : base_(std::move(base)), options_(options), cache_(options.cache_capacity) {}

std::vector<value_type> CrackingIndex::query(value_type lo, value_type hi) {
  QueryStats stats;
  const auto start = Clock::now();
  auto result = query_impl(lo, hi, stats);
  stats.total_ns = ns_since(start);
  stats.result_size = result.size();
  total_movements_ += stats.movements;
  total_pieces_cracked_ += stats.pieces_cracked;
  last_ = stats;
  return result;
}

std::vector<value_type> CrackingIndex::query_impl(value_type lo, value_type hi,
                                                  QueryStats& stats) {
  std::vector<value_type> result;
  if (lo > hi) return result;

  // Phase 1: lazy initialization. The column copy is charged to the first
  // query, not to index creation.
  auto tick = Clock::now();
  if (!column_) column_.emplace(CrackerColumn::copy_of(base_));
  stats.init_ns += ns_since(tick);

  // Phase 2: serve the already-covered sub-ranges from the tree.
  tick = Clock::now();
  const auto hits = table_.probe(lo, hi);
  for (const auto& h : hits) art_.append_values(h.lo, h.hi, result);
  stats.art_hit_values += result.size();
  stats.art_ns += ns_since(tick);

  // Phase 3: crack the uncovered remainders. Every result slice comes out of
  // the partition unsorted; sorting it first makes the tree insertion run in
  // ascending key order.
  tick = Clock::now();
  std::vector<PosRun> new_runs;
  for (const auto& [rlo, rhi] : uncovered_remainders(lo, hi, hits)) {
    for (;;) {
      const auto intersecting = column_->pieces_intersecting(rlo, rhi);
      std::optional<std::size_t> next;
      for (std::size_t idx : intersecting) {
        if (!column_->piece(idx).indexed) {
          next = idx;
          break;
        }
      }
      if (!next) break;
      const CrackOutcome outcome = column_->crack(*next, rlo, rhi);
      stats.pieces_cracked += 1;
      if (outcome.result_piece) {
        const std::size_t rp = *outcome.result_piece;
        column_->sort_piece(rp);
        const Piece& piece = column_->piece(rp);
        const auto& data = column_->data();
        for (std::size_t pos = piece.begin; pos < piece.end; ++pos) {
          art_.insert(data[pos].value, pos);
          result.push_back(data[pos].value);
        }
        column_->mark_indexed(rp);
        new_runs.push_back(PosRun{piece.begin, piece.end});
      }
    }
  }
  stats.crack_ns += ns_since(tick);

  // Phase 4: record the coverage, then settle cached updates the range
  // touches. The result reflects them (pending inserts appear, pending
  // deletes mask committed copies) before they are applied to storage.
  tick = Clock::now();
  table_.insert_and_merge(lo, hi, std::move(new_runs));
  const auto pending = cache_.take_range(lo, hi);
  if (!pending.empty()) {
    std::map<value_type, std::int64_t> deletes;
    for (const auto& op : pending) {
      if (op.net < 0) deletes[op.value] = op.net;
    }
    if (!deletes.empty()) {
      std::vector<value_type> masked;
      masked.reserve(result.size());
      for (value_type v : result) {
        auto it = deletes.find(v);
        if (it != deletes.end() && it->second < 0) {
          it->second += 1;
          continue;
        }
        masked.push_back(v);
      }
      result.swap(masked);
    }
    for (const auto& op : pending) {
      if (op.net > 0) result.insert(result.end(), static_cast<std::size_t>(op.net), op.value);
    }
    for (const auto& op : pending) {
      if (op.net > 0) {
        for (std::int64_t k = 0; k < op.net; ++k) apply_insert_now(op.value, stats);
      } else {
        for (std::int64_t k = 0; k < -op.net; ++k) {
          if (!apply_delete_now(op.value, stats)) break;
        }
      }
    }
  }
  stats.finish_ns += ns_since(tick);
  return result;
}

void CrackingIndex::apply_relocations(const std::vector<Relocation>& moved) {
  for (const Relocation& r : moved) {
    if (!r.indexed || r.from == r.to) continue;
    if (!art_.update_position(r.value, r.from, r.to))
      fail("relocated element missing from the tree");
  }
}

void CrackingIndex::apply_insert_now(value_type v, QueryStats& stats) {
  const auto runs = table_.indexed_runs();
  ShuffleInsertResult res = options_.update_policy == UpdatePolicy::shuffling
                                ? column_->shuffle_insert(v, runs)
                                : column_->naive_insert(v);
  apply_relocations(res.moved);
  if (res.created_piece) column_->mark_indexed(res.target_piece);
  art_.insert(v, res.position);
  table_.refresh_piece_runs(*column_);
  stats.movements += res.movements();
}

bool CrackingIndex::apply_delete_now(value_type v, QueryStats& stats) {
  const auto* positions = art_.lookup(v);
  if (positions == nullptr || positions->empty()) return false;
  const row_pos pos = positions->back();  // tail-most copy: shortest bubble path
  art_.erase(v, pos);
  const auto runs = table_.indexed_runs();
  ShuffleDeleteResult res = options_.update_policy == UpdatePolicy::shuffling
                                ? column_->shuffle_delete(static_cast<std::size_t>(pos), runs)
                                : column_->naive_delete(static_cast<std::size_t>(pos));
  apply_relocations(res.moved);
  table_.refresh_piece_runs(*column_);
  stats.movements += res.movements();
  return true;
}

void CrackingIndex::insert(value_type v) {
  QueryStats stats;
  const auto start = Clock::now();
  if (table_.covers_value(v)) {
    apply_insert_now(v, stats);
  } else {
    cache_.add_insert(v);
    if (cache_.full() && !flushing_) {
      flushing_ = true;
      const auto span = cache_.value_span();
      (void)query_impl(span->first, span->second, stats);
      flushing_ = false;
    }
  }
  stats.total_ns = ns_since(start);
  total_movements_ += stats.movements;
  total_pieces_cracked_ += stats.pieces_cracked;
  last_ = stats;
}

void CrackingIndex::erase(value_type v) {
  QueryStats stats;
  const auto start = Clock::now();
  if (table_.covers_value(v)) {
    (void)apply_delete_now(v, stats);  // absent values are a no-op
  } else {
    cache_.add_delete(v);
    if (cache_.full() && !flushing_) {
      flushing_ = true;
      const auto span = cache_.value_span();
      (void)query_impl(span->first, span->second, stats);
      flushing_ = false;
    }
  }
  stats.total_ns = ns_since(start);
  total_movements_ += stats.movements;
  total_pieces_cracked_ += stats.pieces_cracked;
  last_ = stats;
}

void CrackingIndex::flush_updates() {
  if (cache_.empty()) return;
  QueryStats stats;
  flushing_ = true;
  const auto span = cache_.value_span();
  (void)query_impl(span->first, span->second, stats);
  flushing_ = false;
  total_movements_ += stats.movements;
  total_pieces_cracked_ += stats.pieces_cracked;
  last_ = stats;
}

double CrackingIndex::building_rate() const {
  if (!column_ || column_->size() == 0) return 0.0;
  return static_cast<double>(art_.key_count()) / static_cast<double>(column_->size());
}

void CrackingIndex::check_invariants() const {
  art_.validate();
  table_.validate();
  if (column_) column_->validate();

  if (cache_.size() > cache_.capacity()) fail("cache exceeds its capacity");
  for (const auto& op : cache_.snapshot()) {
    if (table_.covers_value(op.value)) fail("cached update inside a covered range");
  }

  if (!column_) {
    if (!table_.empty() || !art_.empty()) fail("table or tree populated before the column copy");
    return;
  }

  const auto& data = column_->data();
  std::size_t indexed_values = 0;
  for (const Piece& p : column_->pieces()) {
    if (!p.indexed) {
      // Unindexed intervals must stay clear of covered ranges.
      if (!table_.probe(p.interval.min(), p.interval.max()).empty())
        fail("unindexed piece overlaps a covered range");
      continue;
    }
    indexed_values += p.size();
    for (std::size_t pos = p.begin; pos < p.end; ++pos) {
      const auto* positions = art_.lookup(data[pos].value);
      if (positions == nullptr ||
          !std::binary_search(positions->begin(), positions->end(), static_cast<row_pos>(pos)))
        fail("indexed column position missing from the tree");
    }
  }
  if (art_.position_count() != indexed_values)
    fail("tree payload count disagrees with indexed piece sizes");

  const auto entries = table_.entries();
  std::vector<std::size_t> run_totals(entries.size(), 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (const PosRun& r : entries[i].piece_runs) {
      if (r.end > data.size()) fail("piece run beyond the column");
      run_totals[i] += r.size();
      for (std::size_t pos = r.begin; pos < r.end; ++pos) {
        if (data[pos].value < entries[i].lo || data[pos].value > entries[i].hi)
          fail("piece run holds a value outside its entry interval");
      }
    }
  }
  std::vector<std::size_t> value_totals(entries.size(), 0);
  for (const ColumnEntry& e : data) {
    auto it = std::partition_point(entries.begin(), entries.end(),
                                   [&](const auto& en) { return en.hi < e.value; });
    if (it != entries.end() && e.value >= it->lo) value_totals[it - entries.begin()] += 1;
  }
  if (value_totals != run_totals) fail("entry piece runs do not cover all values in range");
}

}  // namespace artcrack
