#include "artcrack/cracker_column.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

using artcrack::CrackerColumn;
using artcrack::Piece;
using artcrack::PosRun;
using artcrack::value_type;
using artcrack::ValueInterval;

namespace {

// Figure-style base column used across the cracking walkthrough tests.
const std::vector<value_type> kSmallColumn{13, 16, 4, 9, 2, 12, 7, 1, 19, 3, 14, 11, 8, 6};

std::vector<value_type> column_multiset(const CrackerColumn& col) {
  std::vector<value_type> values;
  for (const auto& e : col.data()) values.push_back(e.value);
  std::sort(values.begin(), values.end());
  return values;
}

// Logical view: per piece, its interval and sorted value multiset. Physical
// layout aside, an update must leave this view identical across strategies.
std::vector<std::pair<ValueInterval, std::vector<value_type>>> piece_contents(
    const CrackerColumn& col) {
  std::vector<std::pair<ValueInterval, std::vector<value_type>>> out;
  for (std::size_t i = 0; i < col.piece_count(); ++i) {
    auto values = col.values_in(i);
    std::sort(values.begin(), values.end());
    out.emplace_back(col.piece(i).interval, std::move(values));
  }
  return out;
}

// The walkthrough state: three range queries have carved the column into
// P1(<80), P2[80,110], P3(110,220), P4[220,300], P5(300,350], P6(>350) with
// the middle four indexed and position-contiguous.
CrackerColumn walkthrough_column() {
  auto col = CrackerColumn::copy_of(
      std::vector<value_type>{13, 100, 55, 150, 260, 320, 400, 72, 95, 500});
  auto crack_and_index = [&](value_type lo, value_type hi) {
    for (;;) {
      bool cracked = false;
      for (std::size_t idx : col.pieces_intersecting(lo, hi)) {
        if (col.piece(idx).indexed) continue;
        auto out = col.crack(idx, lo, hi);
        if (out.result_piece) {
          col.sort_piece(*out.result_piece);
          col.mark_indexed(*out.result_piece);
        }
        cracked = true;
        break;
      }
      if (!cracked) break;
    }
  };
  crack_and_index(80, 110);
  crack_and_index(220, 300);
  crack_and_index(111, 219);
  crack_and_index(301, 350);
  return col;
}

}  // namespace

TEST_CASE("copy_of starts with one all-covering piece") {
  auto col = CrackerColumn::copy_of(std::vector<value_type>{13, 16, 4, 9, 2});
  CHECK(col.size() == 5);
  REQUIRE(col.piece_count() == 1);
  CHECK(col.piece(0).begin == 0);
  CHECK(col.piece(0).end == 5);
  CHECK(col.piece(0).interval == ValueInterval::all());
  CHECK_FALSE(col.piece(0).indexed);
  for (std::size_t i = 0; i < 5; ++i) CHECK(col.data()[i].row_id == i);
  col.validate();
}

TEST_CASE("copy_of rejects an empty base") {
  CHECK_THROWS_AS(CrackerColumn::copy_of(std::vector<value_type>{}), std::invalid_argument);
}

TEST_CASE("copy keeps the base multiset") {
  auto col = CrackerColumn::copy_of(kSmallColumn);
  CHECK(col.size() == 14);
  CHECK(col.piece_count() == 1);
  CHECK(column_multiset(col) == oracle::sorted_copy(kSmallColumn));
}

TEST_CASE("cracking 10 < A < 14 clusters the middle piece") {
  auto col = CrackerColumn::copy_of(kSmallColumn);
  const auto out = col.crack(0, 11, 13);
  CHECK(col.piece_count() == 3);
  REQUIRE(out.result_piece.has_value());
  auto middle = col.values_in(*out.result_piece);
  std::sort(middle.begin(), middle.end());
  CHECK(middle == std::vector<value_type>{11, 12, 13});
  CHECK(column_multiset(col) == oracle::sorted_copy(kSmallColumn));
  CHECK(col.piece(0).interval == ValueInterval::below(11));
  CHECK(col.piece(2).interval == ValueInterval::above(13));
  col.validate();
}

TEST_CASE("a crack covering the whole piece does not split it") {
  auto col = CrackerColumn::copy_of(std::vector<value_type>{15, 12, 18, 10, 20});
  const auto out = col.crack(0, 9, 21);
  CHECK(col.piece_count() == 1);
  REQUIRE(out.result_piece.has_value());
  CHECK(*out.result_piece == 0);
  CHECK(col.piece(0).size() == 5);
  col.validate();
}

TEST_CASE("cracking an indexed piece is a contract violation") {
  auto col = CrackerColumn::copy_of(std::vector<value_type>{5, 1, 9});
  auto out = col.crack(0, 0, 100);
  col.sort_piece(*out.result_piece);
  col.mark_indexed(*out.result_piece);
  CHECK_THROWS_AS(col.crack(0, 2, 3), std::logic_error);
}

TEST_CASE("random cracks hold the invariants and match a filter oracle") {
  std::mt19937_64 rng(7);
  std::vector<value_type> base(1000);
  for (auto& v : base) v = 1 + oracle::bounded(rng, 5000);
  auto col = CrackerColumn::copy_of(base);
  for (int step = 0; step < 200; ++step) {
    value_type a = 1 + oracle::bounded(rng, 5000);
    value_type b = 1 + oracle::bounded(rng, 5000);
    if (a > b) std::swap(a, b);
    const auto intersecting = col.pieces_intersecting(a, b);
    std::size_t target = intersecting.size();
    for (std::size_t idx : intersecting) {
      if (!col.piece(idx).indexed) {
        target = idx;
        break;
      }
    }
    if (target == intersecting.size()) continue;  // range already fully split
    auto before = col.values_in(target);
    const auto out = col.crack(target, a, b);
    std::vector<value_type> expect;
    for (value_type v : before) {
      if (v >= a && v <= b) expect.push_back(v);
    }
    std::sort(expect.begin(), expect.end());
    std::vector<value_type> got;
    if (out.result_piece) got = col.values_in(*out.result_piece);
    std::sort(got.begin(), got.end());
    CHECK(got == expect);
    col.validate();
  }
  CHECK(column_multiset(col) == oracle::sorted_copy(base));
}

TEST_CASE("pieces_intersecting on a fresh column returns the single piece") {
  auto col = CrackerColumn::copy_of(kSmallColumn);
  CHECK(col.pieces_intersecting(3, 7) == std::vector<std::size_t>{0});
  CHECK(col.pieces_intersecting(1000, 2000) == std::vector<std::size_t>{0});
}

TEST_CASE("pieces_intersecting over the walkthrough layout") {
  auto col = walkthrough_column();
  REQUIRE(col.piece_count() == 6);
  // [80, 350] touches the four indexed middles; the open-ended side pieces
  // stay out.
  CHECK(col.pieces_intersecting(80, 350) == std::vector<std::size_t>{1, 2, 3, 4});
  CHECK(col.pieces_intersecting(0, 20) == std::vector<std::size_t>{0});
  CHECK(col.pieces_intersecting(360, 600) == std::vector<std::size_t>{5});
}

TEST_CASE("pieces_intersecting matches a linear interval-overlap oracle") {
  std::mt19937_64 rng(17);
  std::vector<value_type> base(400);
  for (auto& v : base) v = 1 + oracle::bounded(rng, 2000);
  auto col = CrackerColumn::copy_of(base);
  for (int i = 0; i < 30; ++i) {
    value_type a = 1 + oracle::bounded(rng, 2000);
    value_type b = std::min<value_type>(2000, a + oracle::bounded(rng, 100));
    for (std::size_t idx : col.pieces_intersecting(a, b)) {
      if (!col.piece(idx).indexed) {
        col.crack(idx, a, b);
        break;
      }
    }
  }
  for (int i = 0; i < 200; ++i) {
    value_type a = 1 + oracle::bounded(rng, 2200);
    value_type b = a + oracle::bounded(rng, 300);
    std::vector<std::size_t> expect;
    for (std::size_t idx = 0; idx < col.piece_count(); ++idx) {
      if (col.piece(idx).interval.intersects(a, b)) expect.push_back(idx);
    }
    CHECK(col.pieces_intersecting(a, b) == expect);
  }
}

TEST_CASE("shuffled insert into a single-piece column just appends") {
  auto col = CrackerColumn::copy_of(std::vector<value_type>{9, 3, 7});
  const auto res = col.shuffle_insert(5, {});
  CHECK(res.movements() == 0);
  CHECK(res.position == 3);
  CHECK(col.size() == 4);
  CHECK(col.piece(0).end == 4);
  col.validate();
}

TEST_CASE("shuffled insert hops the indexed run as one unit") {
  auto col = walkthrough_column();
  REQUIRE(col.piece_count() == 6);
  // P1 holds three values below 80; the four indexed middles sit at [3, 8).
  REQUIRE(col.piece(0).size() == 3);
  const std::vector<PosRun> runs{PosRun{3, 8}};

  SUBCASE("shuffling needs two movements") {
    const auto res = col.shuffle_insert(45, runs);
    CHECK(res.movements() == 2);
    CHECK_FALSE(res.created_piece);
    CHECK(res.target_piece == 0);
    col.validate();
    // The hopped run collapsed into one merged indexed piece.
    CHECK(col.piece_count() == 3);
    CHECK(col.piece(1).indexed);
    CHECK(col.piece(1).interval == ValueInterval::closed(80, 350));
    auto p1 = col.values_in(0);
    std::sort(p1.begin(), p1.end());
    CHECK(p1 == std::vector<value_type>{13, 45, 55, 72});
  }

  SUBCASE("the naive shift moves every trailing element") {
    const auto res = col.naive_insert(45);
    CHECK(res.movements() == 7);
    CHECK(col.piece_count() == 6);  // piece structure survives, at a price
    col.validate();
    auto p1 = col.values_in(0);
    std::sort(p1.begin(), p1.end());
    CHECK(p1 == std::vector<value_type>{13, 45, 55, 72});
  }
}

TEST_CASE("random shuffled inserts match the naive shift outcome per piece") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 40; ++round) {
    std::vector<value_type> base(200);
    for (auto& v : base) v = 1 + 2 * oracle::bounded(rng, 500);  // odd values
    auto col = CrackerColumn::copy_of(base);
    for (int c = 0; c < 6; ++c) {
      value_type a = 1 + oracle::bounded(rng, 1000);
      value_type b = a + oracle::bounded(rng, 200);
      for (std::size_t idx : col.pieces_intersecting(a, b)) {
        if (!col.piece(idx).indexed) {
          auto out = col.crack(idx, a, b);
          if (out.result_piece && oracle::bounded(rng, 2) == 0) {
            col.sort_piece(*out.result_piece);
            col.mark_indexed(*out.result_piece);
          }
          break;
        }
      }
    }
    // Maximal contiguous indexed position runs.
    std::vector<PosRun> runs;
    for (std::size_t i = 0; i < col.piece_count(); ++i) {
      const Piece& p = col.piece(i);
      if (!p.indexed) continue;
      if (!runs.empty() && runs.back().end == p.begin) {
        runs.back().end = p.end;
      } else {
        runs.push_back(PosRun{p.begin, p.end});
      }
    }

    // Same state through both update strategies.
    auto naive_col = CrackerColumn::copy_of(base);
    {
      // Rebuild the identical piece layout on the copy.
      naive_col = col;
    }
    const value_type v = oracle::bounded(rng, 1100);

    // Expected logical outcome: the value joins the piece whose interval
    // contains it; every piece keeps its multiset otherwise.
    auto expected = piece_contents(col);
    bool placed = false;
    for (auto& [interval, values] : expected) {
      if (interval.contains(v)) {
        values.insert(std::lower_bound(values.begin(), values.end(), v), v);
        placed = true;
        break;
      }
    }

    const auto res = col.shuffle_insert(v, runs);
    const auto naive_res = naive_col.naive_insert(v);
    col.validate();
    naive_col.validate();

    CHECK(res.movements() <= naive_res.movements());
    if (!placed) {
      CHECK(res.created_piece);
      CHECK(naive_res.created_piece);
    }
    // Relocations only rotate within pieces: value multisets per interval
    // match the expectation for the naive path exactly; the shuffled path
    // may have merged run pieces, so compare via the flattened view.
    if (placed) {
      CHECK(piece_contents(naive_col) == expected);
      std::vector<value_type> flat_expect;
      for (const auto& [interval, values] : expected)
        flat_expect.insert(flat_expect.end(), values.begin(), values.end());
      std::vector<value_type> flat_got;
      for (std::size_t i = 0; i < col.piece_count(); ++i) {
        auto values = col.values_in(i);
        std::sort(values.begin(), values.end());
        flat_got.insert(flat_got.end(), values.begin(), values.end());
      }
      CHECK(flat_got == flat_expect);
    }

    // Movement count: one per piece-or-run unit above the target.
    std::size_t units = 0;
    {
      std::size_t i = res.target_piece + 1;
      // Count on the post-insert layout of the naive column, which preserved
      // piece granularity; runs collapse to single units.
      std::size_t k = naive_res.target_piece + 1;
      std::vector<bool> in_run;
      (void)i;
      std::size_t last_run = static_cast<std::size_t>(-1);
      for (; k < naive_col.piece_count(); ++k) {
        const Piece& p = naive_col.piece(k);
        std::size_t run_id = static_cast<std::size_t>(-1);
        for (std::size_t r = 0; r < runs.size(); ++r) {
          // Compare against pre-insert coordinates: the naive shift moved
          // every trailing piece one slot right.
          if (p.begin - 1 >= runs[r].begin && p.end - 1 <= runs[r].end) run_id = r;
        }
        if (run_id != static_cast<std::size_t>(-1) && run_id == last_run) continue;
        last_run = run_id;
        ++units;
      }
    }
    CHECK(res.movements() == units);
  }
}

TEST_CASE("insert into a gap between piece intervals opens a fresh piece") {
  auto col = CrackerColumn::copy_of(std::vector<value_type>{5, 200});
  // Crack out an empty middle: [50, 100] holds no values.
  col.crack(0, 50, 100);
  REQUIRE(col.piece_count() == 2);
  const auto res = col.shuffle_insert(75, {});
  CHECK(res.created_piece);
  REQUIRE(col.piece_count() == 3);
  CHECK(col.piece(res.target_piece).interval == ValueInterval::closed(75, 75));
  CHECK(col.values_in(res.target_piece) == std::vector<value_type>{75});
  col.validate();
}

TEST_CASE("values beyond either end join the outermost pieces") {
  auto col = CrackerColumn::copy_of(std::vector<value_type>{50, 60, 70});
  col.crack(0, 55, 65);
  const auto low = col.shuffle_insert(1, {});
  const auto high = col.shuffle_insert(999, {});
  CHECK_FALSE(low.created_piece);   // open-ended first piece absorbs it
  CHECK_FALSE(high.created_piece);  // open-ended last piece absorbs it
  CHECK(column_multiset(col) == std::vector<value_type>{1, 50, 60, 70, 999});
  col.validate();
}

TEST_CASE("shuffled delete from a single piece swaps with the last element") {
  auto col = CrackerColumn::copy_of(std::vector<value_type>{9, 3, 7});
  const auto res = col.shuffle_delete(0, {});
  CHECK(res.value == 9);
  CHECK(res.movements() == 1);
  CHECK(col.size() == 2);
  CHECK(column_multiset(col) == std::vector<value_type>{3, 7});
  col.validate();

  const auto tail = col.shuffle_delete(1, {});
  CHECK(tail.movements() == 0);  // already the last slot
  CHECK(col.size() == 1);
  col.validate();
}

TEST_CASE("shuffled delete bubbles the hole toward the tail") {
  auto col = CrackerColumn::copy_of(std::vector<value_type>{1, 2, 10, 11, 20, 21});
  col.crack(0, 10, 11);  // three pieces
  REQUIRE(col.piece_count() == 3);
  const std::size_t pos = col.piece(1).begin;  // delete from the middle piece
  const value_type doomed = col.data()[pos].value;
  const auto res = col.shuffle_delete(pos, {});
  CHECK(res.value == doomed);
  // One swap inside the piece, one relocation across the boundary above.
  CHECK(res.movements() == 2);
  CHECK(col.size() == 5);
  col.validate();
}

TEST_CASE("delete then reinsert restores the column multiset") {
  auto col = CrackerColumn::copy_of(kSmallColumn);
  col.crack(0, 5, 9);
  const auto before = column_multiset(col);
  const auto res = col.shuffle_delete(2, {});
  col.shuffle_insert(res.value, {});
  CHECK(column_multiset(col) == before);
  col.validate();
}

TEST_CASE("random shuffled deletes match the naive outcome per piece") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 30; ++round) {
    std::vector<value_type> base(150);
    for (auto& v : base) v = 1 + oracle::bounded(rng, 400);
    auto col = CrackerColumn::copy_of(base);
    for (int c = 0; c < 4; ++c) {
      value_type a = 1 + oracle::bounded(rng, 400);
      value_type b = a + oracle::bounded(rng, 80);
      for (std::size_t idx : col.pieces_intersecting(a, b)) {
        if (!col.piece(idx).indexed) {
          col.crack(idx, a, b);
          break;
        }
      }
    }
    auto naive_col = col;
    const std::size_t pos = oracle::bounded(rng, col.size());
    const auto res = col.shuffle_delete(pos, {});
    const auto naive_res = naive_col.naive_delete(pos);
    CHECK(res.value == naive_res.value);
    CHECK(res.movements() <= naive_res.movements());
    CHECK(piece_contents(col) == piece_contents(naive_col));
    col.validate();
    naive_col.validate();
  }
}

TEST_CASE("invalid delete position throws") {
  auto col = CrackerColumn::copy_of(std::vector<value_type>{1, 2});
  CHECK_THROWS_AS(col.shuffle_delete(5, {}), std::out_of_range);
}
