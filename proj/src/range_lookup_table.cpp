#include "artcrack/range_lookup_table.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace artcrack {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::logic_error("RangeLookupTable: " + what);
}

// True when [alo, ahi] and [blo, bhi] overlap or touch at integer-adjacent
// bounds. Written without +1/-1 to stay safe at the domain extremes.
bool overlaps_or_touches(value_type alo, value_type ahi, value_type blo, value_type bhi) {
  if (ahi < blo) return blo - ahi <= 1;
  if (bhi < alo) return alo - bhi <= 1;
  return true;
}

}  // namespace

std::vector<PosRun> compact_runs(std::vector<PosRun> runs) {
  std::erase_if(runs, [](const PosRun& r) { return r.empty(); });
  std::sort(runs.begin(), runs.end(),
            [](const PosRun& a, const PosRun& b) { return a.begin < b.begin; });
  std::vector<PosRun> out;
  for (const PosRun& r : runs) {
    if (!out.empty() && r.begin <= out.back().end) {
      out.back().end = std::max(out.back().end, r.end);
    } else {
      out.push_back(r);
    }
  }
  return out;
}

std::vector<RangeLookupTable::Hit> RangeLookupTable::probe(value_type lo, value_type hi) const {
  std::vector<Hit> hits;
  if (entries_.empty()) return hits;
  auto it = entries_.upper_bound(lo);
  if (it != entries_.begin()) {
    auto prev = std::prev(it);
    if (prev->second.hi >= lo) it = prev;
  }
  for (; it != entries_.end() && it->first <= hi; ++it) {
    if (it->second.hi < lo) continue;
    hits.push_back(Hit{std::max(lo, it->first), std::min(hi, it->second.hi),
                       &it->second.piece_runs});
  }
  return hits;
}

bool RangeLookupTable::covers_value(value_type v) const {
  auto it = entries_.upper_bound(v);
  if (it == entries_.begin()) return false;
  --it;
  return it->second.hi >= v;
}

void RangeLookupTable::insert_and_merge(value_type lo, value_type hi,
                                        std::vector<PosRun> new_runs) {
  value_type merged_lo = lo;
  value_type merged_hi = hi;
  std::vector<PosRun> runs = std::move(new_runs);

  auto it = entries_.begin();
  if (!entries_.empty()) {
    it = entries_.upper_bound(lo);
    if (it != entries_.begin()) --it;
  }
  while (it != entries_.end()) {
    if (it->first > hi && !overlaps_or_touches(lo, hi, it->first, it->second.hi)) break;
    if (overlaps_or_touches(lo, hi, it->first, it->second.hi)) {
      merged_lo = std::min(merged_lo, it->first);
      merged_hi = std::max(merged_hi, it->second.hi);
      runs.insert(runs.end(), it->second.piece_runs.begin(), it->second.piece_runs.end());
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
  entries_[merged_lo] = Stored{merged_hi, compact_runs(std::move(runs))};
}

std::vector<PosRun> RangeLookupTable::indexed_runs() const {
  std::vector<PosRun> all;
  for (const auto& [lo, stored] : entries_)
    all.insert(all.end(), stored.piece_runs.begin(), stored.piece_runs.end());
  // Runs of distinct entries may sit position-adjacent; keep them separate so
  // each hops as its own unit.
  std::sort(all.begin(), all.end(),
            [](const PosRun& a, const PosRun& b) { return a.begin < b.begin; });
  return all;
}

void RangeLookupTable::refresh_piece_runs(const CrackerColumn& column) {
  for (auto& [lo, stored] : entries_) stored.piece_runs.clear();
  // Pieces ascend in value exactly as entries do: one merged sweep.
  auto it = entries_.begin();
  for (const Piece& p : column.pieces()) {
    if (!p.indexed) continue;
    const value_type pmin = p.interval.min();
    const value_type pmax = p.interval.max();
    while (it != entries_.end() && it->second.hi < pmin) ++it;
    if (it == entries_.end()) break;
    if (pmin < it->first || pmax > it->second.hi) continue;
    auto& runs = it->second.piece_runs;
    if (!runs.empty() && runs.back().end == p.begin) {
      runs.back().end = p.end;
    } else {
      runs.push_back(PosRun{p.begin, p.end});
    }
  }
}

std::vector<RangeLookupTable::Entry> RangeLookupTable::entries() const {
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& [lo, stored] : entries_) out.push_back(Entry{lo, stored.hi, stored.piece_runs});
  return out;
}

value_type RangeLookupTable::covered_length() const {
  value_type total = 0;
  for (const auto& [lo, stored] : entries_) total += stored.hi - lo + 1;
  return total;
}

void RangeLookupTable::validate() const {
  const Stored* prev = nullptr;
  value_type prev_lo = 0;
  for (const auto& [lo, stored] : entries_) {
    if (stored.hi < lo) fail("entry with hi < lo");
    if (prev != nullptr) {
      if (overlaps_or_touches(prev_lo, prev->hi, lo, stored.hi))
        fail("entries overlap or touch without being merged");
    }
    std::size_t last_end = 0;
    bool first = true;
    for (const PosRun& r : stored.piece_runs) {
      if (r.empty()) fail("empty piece run stored");
      if (!first && r.begin <= last_end) fail("piece runs not compacted");
      last_end = r.end;
      first = false;
    }
    prev = &stored;
    prev_lo = lo;
  }
}

}  // namespace artcrack
