#include "artcrack/art_tree.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

using artcrack::ArtTree;
using artcrack::value_type;

namespace {

std::vector<value_type> scan_keys(const ArtTree& tree, value_type lo, value_type hi) {
  std::vector<value_type> keys;
  tree.scan_range(lo, hi, [&](value_type k, const auto&) { keys.push_back(k); });
  return keys;
}

}  // namespace

TEST_CASE("key byte order matches numeric order") {
  // Byte-wise traversal is order preserving exactly when scans come back in
  // numeric order.
  std::mt19937_64 rng(11);
  ArtTree tree;
  std::vector<value_type> keys;
  for (int i = 0; i < 2000; ++i) {
    const value_type k = rng();
    if (tree.insert(k, 0)) keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  CHECK(scan_keys(tree, 0, artcrack::kValueMax) == keys);
}

TEST_CASE("single insert into an empty tree") {
  ArtTree tree;
  CHECK(tree.insert(5, 0));
  REQUIRE(tree.lookup(5) != nullptr);
  CHECK(*tree.lookup(5) == std::vector<artcrack::row_pos>{0});
  CHECK(tree.key_count() == 1);
  tree.validate();
}

TEST_CASE("duplicate (key, position) pairs are idempotent") {
  ArtTree tree;
  CHECK(tree.insert(42, 7));
  CHECK_FALSE(tree.insert(42, 7));
  CHECK(tree.key_count() == 1);
  CHECK(tree.position_count() == 1);
  CHECK(tree.insert(42, 8));
  CHECK(tree.position_count() == 2);
  CHECK(*tree.lookup(42) == std::vector<artcrack::row_pos>{7, 8});
}

TEST_CASE("every insertion order of the same keys gives the same scan") {
  std::vector<value_type> keys{1, 2, 3, 4, 5};
  std::vector<value_type> expected{1, 2, 3, 4, 5};
  std::sort(keys.begin(), keys.end());
  int permutations = 0;
  do {
    ArtTree tree;
    for (std::size_t i = 0; i < keys.size(); ++i) tree.insert(keys[i], i);
    CHECK(scan_keys(tree, 0, artcrack::kValueMax) == expected);
    CHECK(tree.key_count() == 5);
    tree.validate();
    ++permutations;
  } while (std::next_permutation(keys.begin(), keys.end()));
  CHECK(permutations == 120);
}

TEST_CASE("random inserts agree with an ordered-map oracle") {
  std::mt19937_64 rng(21);
  ArtTree tree;
  oracle::MapIndex model;
  for (int i = 0; i < 1000; ++i) {
    const value_type k = oracle::bounded(rng, 4000);
    const std::uint64_t pos = oracle::bounded(rng, 64);
    CHECK(tree.insert(k, pos) == model.insert(k, pos));
  }
  CHECK(tree.key_count() == model.key_count());
  for (int i = 0; i < 1000; ++i) {
    const value_type k = oracle::bounded(rng, 4000);
    const auto* got = tree.lookup(k);
    const auto* want = model.lookup(k);
    if (want == nullptr) {
      CHECK(got == nullptr);
    } else {
      REQUIRE(got != nullptr);
      CHECK(std::equal(got->begin(), got->end(), want->begin(), want->end()));
    }
  }
  tree.validate();
}

TEST_CASE("insert then delete restores the empty tree") {
  ArtTree tree;
  tree.insert(5, 0);
  CHECK(tree.erase(5, 0));
  CHECK(tree.empty());
  CHECK(tree.key_count() == 0);
  tree.validate();
}

TEST_CASE("deleting an absent pair reports not found") {
  ArtTree tree;
  CHECK_FALSE(tree.erase(7, 0));
  tree.insert(7, 1);
  CHECK_FALSE(tree.erase(7, 0));
  CHECK_FALSE(tree.erase(8, 1));
  CHECK(tree.key_count() == 1);
}

TEST_CASE("random insert/delete interleavings match the oracle") {
  std::mt19937_64 rng(33);
  ArtTree tree;
  oracle::MapIndex model;
  for (int i = 0; i < 1000; ++i) {
    const value_type k = oracle::bounded(rng, 300);
    const std::uint64_t pos = oracle::bounded(rng, 8);
    if (oracle::bounded(rng, 2) == 0) {
      CHECK(tree.insert(k, pos) == model.insert(k, pos));
    } else {
      CHECK(tree.erase(k, pos) == model.erase(k, pos));
    }
  }
  tree.validate();
  const auto got = tree.range_scan(0, artcrack::kValueMax);
  const auto want = model.scan(0, artcrack::kValueMax);
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].first == want[i].first);
    CHECK(std::equal(got[i].second.begin(), got[i].second.end(), want[i].second.begin(),
                     want[i].second.end()));
  }
}

TEST_CASE("applying an op sequence and its inverse empties the logical map") {
  std::mt19937_64 rng(55);
  ArtTree tree;
  std::vector<std::pair<value_type, std::uint64_t>> applied;
  for (int i = 0; i < 500; ++i) {
    const value_type k = oracle::bounded(rng, 5000);
    const std::uint64_t pos = oracle::bounded(rng, 16);
    if (tree.insert(k, pos)) applied.emplace_back(k, pos);
  }
  std::shuffle(applied.begin(), applied.end(), rng);
  for (const auto& [k, pos] : applied) CHECK(tree.erase(k, pos));
  CHECK(tree.empty());
  CHECK(tree.key_count() == 0);
  CHECK(tree.position_count() == 0);
  tree.validate();
}

TEST_CASE("lookup on an empty tree") {
  ArtTree tree;
  CHECK(tree.lookup(123) == nullptr);
}

TEST_CASE("point lookup after an indexed range insert") {
  ArtTree tree;
  tree.insert(80, 3);
  REQUIRE(tree.lookup(80) != nullptr);
  CHECK(*tree.lookup(80) == std::vector<artcrack::row_pos>{3});
}

TEST_CASE("range scan bounds are inclusive and ordered") {
  ArtTree tree;
  for (value_type v : {80, 95, 100, 110, 150, 260, 320}) tree.insert(v, v);
  CHECK(scan_keys(tree, 80, 110) == std::vector<value_type>{80, 95, 100, 110});
  CHECK(scan_keys(tree, 81, 109) == std::vector<value_type>{95, 100});

  SUBCASE("degenerate single-key range equals lookup") {
    const auto one = tree.range_scan(100, 100);
    REQUIRE(one.size() == 1);
    CHECK(one[0].first == 100);
    CHECK(one[0].second == *tree.lookup(100));
  }
  SUBCASE("inverted bounds give an empty result") {
    CHECK(tree.range_scan(110, 80).empty());
  }
}

TEST_CASE("random range scans match a sort-then-filter oracle") {
  std::mt19937_64 rng(77);
  ArtTree tree;
  std::vector<value_type> values;
  for (int i = 0; i < 10000; ++i) {
    const value_type v = oracle::bounded(rng, 1u << 20);
    values.push_back(v);
    tree.insert(v, i);
  }
  // Distinct keys only for the oracle comparison: payload sizes carry the
  // duplicates.
  std::vector<value_type> distinct = values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  for (int i = 0; i < 500; ++i) {
    value_type a = oracle::bounded(rng, 1u << 20);
    value_type b = oracle::bounded(rng, 1u << 20);
    if (a > b) std::swap(a, b);
    auto lo_it = std::lower_bound(distinct.begin(), distinct.end(), a);
    auto hi_it = std::upper_bound(distinct.begin(), distinct.end(), b);
    CHECK(scan_keys(tree, a, b) == std::vector<value_type>(lo_it, hi_it));
  }
}

TEST_CASE("append_values repeats keys per stored position") {
  ArtTree tree;
  tree.insert(10, 0);
  tree.insert(10, 4);
  tree.insert(11, 2);
  std::vector<value_type> out;
  tree.append_values(0, 100, out);
  CHECK(out == std::vector<value_type>{10, 10, 11});
}

TEST_CASE("node kinds walk the capacity ladder up and down") {
  ArtTree tree;
  // Keys sharing the first 7 bytes: all children hang off one node.
  const value_type base = 0xAABBCCDD11223300ULL;
  for (int i = 0; i < 4; ++i) tree.insert(base + i, i);
  CHECK(tree.census().node4 == 1);
  tree.insert(base + 4, 4);
  CHECK(tree.census().node4 == 0);
  CHECK(tree.census().node16 == 1);
  for (int i = 5; i < 17; ++i) tree.insert(base + i, i);
  CHECK(tree.census().node48 == 1);
  for (int i = 17; i < 49; ++i) tree.insert(base + i, i);
  CHECK(tree.census().node256 == 1);
  for (int i = 49; i < 256; ++i) tree.insert(base + i, i);
  CHECK(tree.key_count() == 256);
  tree.validate();

  // Deleting shrinks at exactly the next-smaller capacity.
  for (int i = 255; i >= 48; --i) tree.erase(base + i, i);
  CHECK(tree.census().node256 == 0);
  CHECK(tree.census().node48 == 1);
  for (int i = 47; i >= 16; --i) tree.erase(base + i, i);
  CHECK(tree.census().node48 == 0);
  CHECK(tree.census().node16 == 1);
  for (int i = 15; i >= 4; --i) tree.erase(base + i, i);
  CHECK(tree.census().node16 == 0);
  CHECK(tree.census().node4 == 1);
  tree.validate();

  // Down to one key: the node collapses to a bare leaf.
  for (int i = 3; i >= 1; --i) tree.erase(base + i, i);
  CHECK(tree.census().node4 == 0);
  CHECK(tree.census().leaves == 1);
  CHECK(tree.lookup(base) != nullptr);
  tree.validate();
}

TEST_CASE("path compression keeps the height within the key width") {
  ArtTree tree;
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20000; ++i) tree.insert(rng(), i);
  CHECK(tree.height() <= 9);  // 8 key bytes plus the leaf level
  tree.validate();
}

TEST_CASE("update_position repoints a payload entry") {
  ArtTree tree;
  tree.insert(50, 3);
  tree.insert(50, 9);
  CHECK(tree.update_position(50, 3, 12));
  CHECK(*tree.lookup(50) == std::vector<artcrack::row_pos>{9, 12});
  CHECK_FALSE(tree.update_position(50, 3, 4));
  CHECK_FALSE(tree.update_position(51, 9, 4));
  // Moving onto an occupied slot leaves the payload unchanged.
  CHECK_FALSE(tree.update_position(50, 9, 12));
  CHECK(*tree.lookup(50) == std::vector<artcrack::row_pos>{9, 12});
}

TEST_CASE("validate runs clean across a random op sequence") {
  std::mt19937_64 rng(123);
  ArtTree tree;
  oracle::MapIndex model;
  for (int i = 0; i < 400; ++i) {
    const value_type k = oracle::bounded(rng, 100000);
    if (oracle::bounded(rng, 3) != 0) {
      tree.insert(k, 0);
      model.insert(k, 0);
    } else {
      tree.erase(k, 0);
      model.erase(k, 0);
    }
    tree.validate();
  }
  CHECK(tree.key_count() == model.key_count());
}

TEST_CASE("census byte estimate grows with the tree") {
  ArtTree tree;
  CHECK(tree.approx_bytes() == 0);
  for (int i = 0; i < 1000; ++i) tree.insert(i, i);
  const auto census = tree.census();
  CHECK(census.leaves == 1000);
  CHECK(tree.approx_bytes() > 1000 * sizeof(value_type));
}
