#include "artcrack/art_tree.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>

namespace artcrack {
namespace detail {

constexpr int kKeyBytes = 8;
constexpr std::uint32_t kMaxStoredPrefix = 8;

enum class NodeKind : std::uint8_t { Leaf, Node4, Node16, Node48, Node256 };

inline std::uint8_t key_byte(value_type key, int depth) {
  return static_cast<std::uint8_t>(key >> (56 - 8 * depth));
}

struct ArtNode {
  NodeKind kind;
  std::uint16_t count = 0;          // children held (internal nodes)
  std::uint32_t prefix_len = 0;     // logical compressed-path length
  std::uint8_t prefix[kMaxStoredPrefix] = {};

  explicit ArtNode(NodeKind k) : kind(k) {}
};

struct LeafNode final : ArtNode {
  value_type key;
  std::vector<row_pos> positions;  // sorted, unique

  explicit LeafNode(value_type k) : ArtNode(NodeKind::Leaf), key(k) {}
};

struct Node4 final : ArtNode {
  std::uint8_t keys[4] = {};
  ArtNode* children[4] = {};

  Node4() : ArtNode(NodeKind::Node4) {}
};

struct Node16 final : ArtNode {
  std::uint8_t keys[16] = {};
  ArtNode* children[16] = {};

  Node16() : ArtNode(NodeKind::Node16) {}
};

struct Node48 final : ArtNode {
  static constexpr std::uint8_t kEmpty = 0xFF;
  std::uint8_t child_index[256];
  ArtNode* children[48] = {};

  Node48() : ArtNode(NodeKind::Node48) { std::memset(child_index, kEmpty, sizeof(child_index)); }
};

struct Node256 final : ArtNode {
  ArtNode* children[256] = {};

  Node256() : ArtNode(NodeKind::Node256) {}
};

inline LeafNode* as_leaf(ArtNode* n) { return static_cast<LeafNode*>(n); }
inline const LeafNode* as_leaf(const ArtNode* n) { return static_cast<const LeafNode*>(n); }

const LeafNode* min_leaf(const ArtNode* n) {
  while (n->kind != NodeKind::Leaf) {
    switch (n->kind) {
      case NodeKind::Node4:
        n = static_cast<const Node4*>(n)->children[0];
        break;
      case NodeKind::Node16:
        n = static_cast<const Node16*>(n)->children[0];
        break;
      case NodeKind::Node48: {
        const auto* n48 = static_cast<const Node48*>(n);
        int b = 0;
        while (n48->child_index[b] == Node48::kEmpty) ++b;
        n = n48->children[n48->child_index[b]];
        break;
      }
      case NodeKind::Node256: {
        const auto* n256 = static_cast<const Node256*>(n);
        int b = 0;
        while (n256->children[b] == nullptr) ++b;
        n = n256->children[b];
        break;
      }
      default:
        break;
    }
  }
  return as_leaf(n);
}

// Byte i of the node's compressed path. Bytes past the stored buffer are
// recovered from any leaf below the node.
inline std::uint8_t prefix_byte(const ArtNode* n, std::uint32_t i, int depth) {
  if (i < kMaxStoredPrefix) return n->prefix[i];
  return key_byte(min_leaf(n)->key, depth + static_cast<int>(i));
}

// First position where the key disagrees with the node prefix, or prefix_len
// when it matches fully.
std::uint32_t prefix_mismatch(const ArtNode* n, value_type key, int depth) {
  const std::uint32_t stored = std::min(n->prefix_len, kMaxStoredPrefix);
  for (std::uint32_t i = 0; i < stored; ++i) {
    if (n->prefix[i] != key_byte(key, depth + static_cast<int>(i))) return i;
  }
  if (n->prefix_len > stored) {
    const value_type probe = min_leaf(n)->key;
    for (std::uint32_t i = stored; i < n->prefix_len; ++i) {
      if (key_byte(probe, depth + static_cast<int>(i)) != key_byte(key, depth + static_cast<int>(i)))
        return i;
    }
  }
  return n->prefix_len;
}

ArtNode** find_child(ArtNode* n, std::uint8_t byte) {
  switch (n->kind) {
    case NodeKind::Node4: {
      auto* n4 = static_cast<Node4*>(n);
      for (int i = 0; i < n4->count; ++i)
        if (n4->keys[i] == byte) return &n4->children[i];
      return nullptr;
    }
    case NodeKind::Node16: {
      auto* n16 = static_cast<Node16*>(n);
      for (int i = 0; i < n16->count; ++i)
        if (n16->keys[i] == byte) return &n16->children[i];
      return nullptr;
    }
    case NodeKind::Node48: {
      auto* n48 = static_cast<Node48*>(n);
      if (n48->child_index[byte] == Node48::kEmpty) return nullptr;
      return &n48->children[n48->child_index[byte]];
    }
    case NodeKind::Node256: {
      auto* n256 = static_cast<Node256*>(n);
      if (n256->children[byte] == nullptr) return nullptr;
      return &n256->children[byte];
    }
    default:
      return nullptr;
  }
}

void destroy(ArtNode* n) {
  if (n == nullptr) return;
  switch (n->kind) {
    case NodeKind::Leaf:
      delete as_leaf(n);
      return;
    case NodeKind::Node4: {
      auto* n4 = static_cast<Node4*>(n);
      for (int i = 0; i < n4->count; ++i) destroy(n4->children[i]);
      delete n4;
      return;
    }
    case NodeKind::Node16: {
      auto* n16 = static_cast<Node16*>(n);
      for (int i = 0; i < n16->count; ++i) destroy(n16->children[i]);
      delete n16;
      return;
    }
    case NodeKind::Node48: {
      auto* n48 = static_cast<Node48*>(n);
      for (int i = 0; i < n48->count; ++i) destroy(n48->children[i]);
      delete n48;
      return;
    }
    case NodeKind::Node256: {
      auto* n256 = static_cast<Node256*>(n);
      for (int b = 0; b < 256; ++b) destroy(n256->children[b]);
      delete n256;
      return;
    }
  }
}

}  // namespace detail

using namespace detail;

namespace {

struct Census {
  ArtTree::NodeCensus* c;

  void add(const ArtNode* n, long delta) {
    switch (n->kind) {
      case NodeKind::Leaf: c->leaves += delta; break;
      case NodeKind::Node4: c->node4 += delta; break;
      case NodeKind::Node16: c->node16 += delta; break;
      case NodeKind::Node48: c->node48 += delta; break;
      case NodeKind::Node256: c->node256 += delta; break;
    }
  }
};

}  // namespace

ArtTree::~ArtTree() { destroy(root_); }

ArtTree::ArtTree(ArtTree&& other) noexcept
    : root_(other.root_),
      key_count_(other.key_count_),
      position_count_(other.position_count_),
      census_(other.census_) {
  other.root_ = nullptr;
  other.key_count_ = 0;
  other.position_count_ = 0;
  other.census_ = {};
}

ArtTree& ArtTree::operator=(ArtTree&& other) noexcept {
  if (this != &other) {
    destroy(root_);
    root_ = other.root_;
    key_count_ = other.key_count_;
    position_count_ = other.position_count_;
    census_ = other.census_;
    other.root_ = nullptr;
    other.key_count_ = 0;
    other.position_count_ = 0;
    other.census_ = {};
  }
  return *this;
}

void ArtTree::clear() {
  destroy(root_);
  root_ = nullptr;
  key_count_ = 0;
  position_count_ = 0;
  census_ = {};
}

namespace {

// Adds a child, growing the node to the next kind when full. Returns the node
// to store in the parent slot (a new node after growth).
ArtNode* add_child(ArtNode* n, std::uint8_t byte, ArtNode* child, ArtTree::NodeCensus& census) {
  switch (n->kind) {
    case NodeKind::Node4: {
      auto* n4 = static_cast<Node4*>(n);
      if (n4->count < 4) {
        int i = 0;
        while (i < n4->count && n4->keys[i] < byte) ++i;
        std::memmove(n4->keys + i + 1, n4->keys + i, n4->count - i);
        std::memmove(n4->children + i + 1, n4->children + i, (n4->count - i) * sizeof(ArtNode*));
        n4->keys[i] = byte;
        n4->children[i] = child;
        ++n4->count;
        return n4;
      }
      auto* n16 = new Node16();
      n16->count = n4->count;
      n16->prefix_len = n4->prefix_len;
      std::memcpy(n16->prefix, n4->prefix, sizeof(n4->prefix));
      std::memcpy(n16->keys, n4->keys, n4->count);
      std::memcpy(n16->children, n4->children, n4->count * sizeof(ArtNode*));
      census.node4 -= 1;
      census.node16 += 1;
      delete n4;
      return add_child(n16, byte, child, census);
    }
    case NodeKind::Node16: {
      auto* n16 = static_cast<Node16*>(n);
      if (n16->count < 16) {
        int i = 0;
        while (i < n16->count && n16->keys[i] < byte) ++i;
        std::memmove(n16->keys + i + 1, n16->keys + i, n16->count - i);
        std::memmove(n16->children + i + 1, n16->children + i, (n16->count - i) * sizeof(ArtNode*));
        n16->keys[i] = byte;
        n16->children[i] = child;
        ++n16->count;
        return n16;
      }
      auto* n48 = new Node48();
      n48->count = n16->count;
      n48->prefix_len = n16->prefix_len;
      std::memcpy(n48->prefix, n16->prefix, sizeof(n16->prefix));
      for (int i = 0; i < n16->count; ++i) {
        n48->child_index[n16->keys[i]] = static_cast<std::uint8_t>(i);
        n48->children[i] = n16->children[i];
      }
      census.node16 -= 1;
      census.node48 += 1;
      delete n16;
      return add_child(n48, byte, child, census);
    }
    case NodeKind::Node48: {
      auto* n48 = static_cast<Node48*>(n);
      if (n48->count < 48) {
        n48->children[n48->count] = child;
        n48->child_index[byte] = static_cast<std::uint8_t>(n48->count);
        ++n48->count;
        return n48;
      }
      auto* n256 = new Node256();
      n256->count = n48->count;
      n256->prefix_len = n48->prefix_len;
      std::memcpy(n256->prefix, n48->prefix, sizeof(n48->prefix));
      for (int b = 0; b < 256; ++b) {
        if (n48->child_index[b] != Node48::kEmpty)
          n256->children[b] = n48->children[n48->child_index[b]];
      }
      census.node48 -= 1;
      census.node256 += 1;
      delete n48;
      return add_child(n256, byte, child, census);
    }
    case NodeKind::Node256: {
      auto* n256 = static_cast<Node256*>(n);
      n256->children[byte] = child;
      ++n256->count;
      return n256;
    }
    default:
      return n;
  }
}

// Sorted insert into a leaf payload; false when pos is already stored.
bool add_position(LeafNode* leaf, row_pos pos) {
  auto it = std::lower_bound(leaf->positions.begin(), leaf->positions.end(), pos);
  if (it != leaf->positions.end() && *it == pos) return false;
  leaf->positions.insert(it, pos);
  return true;
}

struct InsertCtx {
  std::size_t* key_count;
  std::size_t* position_count;
  ArtTree::NodeCensus* census;
};

LeafNode* make_leaf(value_type key, row_pos pos, InsertCtx& ctx) {
  auto* leaf = new LeafNode(key);
  leaf->positions.push_back(pos);
  *ctx.key_count += 1;
  *ctx.position_count += 1;
  ctx.census->leaves += 1;
  return leaf;
}

bool insert_impl(ArtNode*& slot, value_type key, row_pos pos, int depth, InsertCtx& ctx) {
  ArtNode* n = slot;
  if (n == nullptr) {
    slot = make_leaf(key, pos, ctx);
    return true;
  }
  if (n->kind == NodeKind::Leaf) {
    auto* leaf = as_leaf(n);
    if (leaf->key == key) {
      if (!add_position(leaf, pos)) return false;
      *ctx.position_count += 1;
      return true;
    }
    // Split into a Node4 holding the shared path from `depth`.
    int common = 0;
    while (key_byte(key, depth + common) == key_byte(leaf->key, depth + common)) ++common;
    auto* parent = new Node4();
    ctx.census->node4 += 1;
    parent->prefix_len = static_cast<std::uint32_t>(common);
    for (int i = 0; i < common && i < static_cast<int>(kMaxStoredPrefix); ++i)
      parent->prefix[i] = key_byte(key, depth + i);
    ArtNode* grown = add_child(parent, key_byte(leaf->key, depth + common), leaf, *ctx.census);
    grown = add_child(grown, key_byte(key, depth + common), make_leaf(key, pos, ctx), *ctx.census);
    slot = grown;
    return true;
  }
  if (n->prefix_len != 0) {
    const std::uint32_t mismatch = prefix_mismatch(n, key, depth);
    if (mismatch < n->prefix_len) {
      // Split the compressed path at the mismatch byte.
      auto* parent = new Node4();
      ctx.census->node4 += 1;
      parent->prefix_len = mismatch;
      for (std::uint32_t i = 0; i < mismatch && i < kMaxStoredPrefix; ++i)
        parent->prefix[i] = prefix_byte(n, i, depth);
      const std::uint8_t old_byte = prefix_byte(n, mismatch, depth);
      // The old node keeps the tail beyond the split byte.
      const std::uint32_t tail = n->prefix_len - mismatch - 1;
      if (tail > 0 && n->prefix_len > kMaxStoredPrefix) {
        const value_type probe = min_leaf(n)->key;
        for (std::uint32_t i = 0; i < std::min(tail, kMaxStoredPrefix); ++i)
          n->prefix[i] = key_byte(probe, depth + static_cast<int>(mismatch + 1 + i));
      } else {
        std::memmove(n->prefix, n->prefix + mismatch + 1, std::min(tail, kMaxStoredPrefix));
      }
      n->prefix_len = tail;
      ArtNode* grown = add_child(parent, old_byte, n, *ctx.census);
      grown = add_child(grown, key_byte(key, depth + static_cast<int>(mismatch)),
                        make_leaf(key, pos, ctx), *ctx.census);
      slot = grown;
      return true;
    }
    depth += static_cast<int>(n->prefix_len);
  }
  const std::uint8_t byte = key_byte(key, depth);
  if (ArtNode** child = find_child(n, byte)) {
    return insert_impl(*child, key, pos, depth + 1, ctx);
  }
  slot = add_child(n, byte, make_leaf(key, pos, ctx), *ctx.census);
  return true;
}

void remove_child_at(ArtNode*& slot, std::uint8_t byte, ArtTree::NodeCensus& census) {
  ArtNode* n = slot;
  switch (n->kind) {
    case NodeKind::Node4: {
      auto* n4 = static_cast<Node4*>(n);
      int i = 0;
      while (n4->keys[i] != byte) ++i;
      std::memmove(n4->keys + i, n4->keys + i + 1, n4->count - i - 1);
      std::memmove(n4->children + i, n4->children + i + 1,
                   (n4->count - i - 1) * sizeof(ArtNode*));
      --n4->count;
      if (n4->count == 1) {
        // Fold the one-child chain into the child's compressed path.
        ArtNode* child = n4->children[0];
        if (child->kind == NodeKind::Leaf) {
          slot = child;  // leaves carry the full key, no prefix to keep
        } else {
          const std::uint32_t child_stored = std::min(child->prefix_len, kMaxStoredPrefix);
          std::uint8_t merged[kMaxStoredPrefix];
          std::uint32_t len = 0;
          for (std::uint32_t i = 0; i < std::min(n4->prefix_len, kMaxStoredPrefix) && len < kMaxStoredPrefix; ++i)
            merged[len++] = n4->prefix[i];
          if (len < kMaxStoredPrefix && n4->prefix_len <= kMaxStoredPrefix) {
            merged[len++] = n4->keys[0];
            for (std::uint32_t i = 0; i < child_stored && len < kMaxStoredPrefix; ++i)
              merged[len++] = child->prefix[i];
          }
          child->prefix_len = n4->prefix_len + 1 + child->prefix_len;
          std::memcpy(child->prefix, merged, len);
          // Bytes beyond what fits are recovered from a leaf on demand.
          slot = child;
        }
        census.node4 -= 1;
        delete n4;
      }
      return;
    }
    case NodeKind::Node16: {
      auto* n16 = static_cast<Node16*>(n);
      int i = 0;
      while (n16->keys[i] != byte) ++i;
      std::memmove(n16->keys + i, n16->keys + i + 1, n16->count - i - 1);
      std::memmove(n16->children + i, n16->children + i + 1,
                   (n16->count - i - 1) * sizeof(ArtNode*));
      --n16->count;
      if (n16->count == 4) {
        auto* n4 = new Node4();
        n4->count = 4;
        n4->prefix_len = n16->prefix_len;
        std::memcpy(n4->prefix, n16->prefix, sizeof(n16->prefix));
        std::memcpy(n4->keys, n16->keys, 4);
        std::memcpy(n4->children, n16->children, 4 * sizeof(ArtNode*));
        census.node16 -= 1;
        census.node4 += 1;
        delete n16;
        slot = n4;
      }
      return;
    }
    case NodeKind::Node48: {
      auto* n48 = static_cast<Node48*>(n);
      const std::uint8_t idx = n48->child_index[byte];
      n48->child_index[byte] = Node48::kEmpty;
      // Keep the child array dense: move the last slot into the gap.
      const std::uint8_t last = static_cast<std::uint8_t>(n48->count - 1);
      if (idx != last) {
        n48->children[idx] = n48->children[last];
        for (int b = 0; b < 256; ++b) {
          if (n48->child_index[b] == last) {
            n48->child_index[b] = idx;
            break;
          }
        }
      }
      n48->children[last] = nullptr;
      --n48->count;
      if (n48->count == 16) {
        auto* n16 = new Node16();
        n16->count = 0;
        n16->prefix_len = n48->prefix_len;
        std::memcpy(n16->prefix, n48->prefix, sizeof(n48->prefix));
        for (int b = 0; b < 256; ++b) {
          if (n48->child_index[b] != Node48::kEmpty) {
            n16->keys[n16->count] = static_cast<std::uint8_t>(b);
            n16->children[n16->count] = n48->children[n48->child_index[b]];
            ++n16->count;
          }
        }
        census.node48 -= 1;
        census.node16 += 1;
        delete n48;
        slot = n16;
      }
      return;
    }
    case NodeKind::Node256: {
      auto* n256 = static_cast<Node256*>(n);
      n256->children[byte] = nullptr;
      --n256->count;
      if (n256->count == 48) {
        auto* n48 = new Node48();
        n48->count = 0;
        n48->prefix_len = n256->prefix_len;
        std::memcpy(n48->prefix, n256->prefix, sizeof(n256->prefix));
        for (int b = 0; b < 256; ++b) {
          if (n256->children[b] != nullptr) {
            n48->child_index[b] = static_cast<std::uint8_t>(n48->count);
            n48->children[n48->count] = n256->children[b];
            ++n48->count;
          }
        }
        census.node256 -= 1;
        census.node48 += 1;
        delete n256;
        slot = n48;
      }
      return;
    }
    default:
      return;
  }
}

struct EraseCtx {
  std::size_t* key_count;
  std::size_t* position_count;
  ArtTree::NodeCensus* census;
};

bool erase_impl(ArtNode*& slot, value_type key, row_pos pos, int depth, EraseCtx& ctx) {
  ArtNode* n = slot;
  if (n == nullptr) return false;
  if (n->kind == NodeKind::Leaf) {
    auto* leaf = as_leaf(n);
    if (leaf->key != key) return false;
    auto it = std::lower_bound(leaf->positions.begin(), leaf->positions.end(), pos);
    if (it == leaf->positions.end() || *it != pos) return false;
    leaf->positions.erase(it);
    *ctx.position_count -= 1;
    if (leaf->positions.empty()) {
      ctx.census->leaves -= 1;
      *ctx.key_count -= 1;
      delete leaf;
      slot = nullptr;
    }
    return true;
  }
  if (n->prefix_len != 0) {
    if (prefix_mismatch(n, key, depth) < n->prefix_len) return false;
    depth += static_cast<int>(n->prefix_len);
  }
  const std::uint8_t byte = key_byte(key, depth);
  ArtNode** child = find_child(n, byte);
  if (child == nullptr) return false;
  const bool erased = erase_impl(*child, key, pos, depth + 1, ctx);
  if (erased && *child == nullptr) remove_child_at(slot, byte, *ctx.census);
  return erased;
}

inline std::pair<value_type, value_type> subtree_key_range(value_type acc, int depth) {
  if (depth <= 0) return {kValueMin, kValueMax};
  if (depth >= kKeyBytes) return {acc, acc};
  const int rem = 8 * (kKeyBytes - depth);
  const value_type mn = acc << rem;
  return {mn, mn | ((value_type(1) << rem) - 1)};
}

template <typename Fn>
void visit_range(const ArtNode* n, value_type acc, int depth, value_type lo, value_type hi,
                 Fn&& fn) {
  if (n == nullptr) return;
  if (n->kind == NodeKind::Leaf) {
    const auto* leaf = as_leaf(n);
    if (leaf->key >= lo && leaf->key <= hi) fn(*leaf);
    return;
  }
  for (std::uint32_t i = 0; i < n->prefix_len; ++i) {
    acc = (acc << 8) | prefix_byte(n, i, depth);
  }
  depth += static_cast<int>(n->prefix_len);
  const auto [mn, mx] = subtree_key_range(acc, depth);
  if (mx < lo || mn > hi) return;

  auto visit_child = [&](std::uint8_t byte, const ArtNode* child) {
    const value_type child_acc = (acc << 8) | byte;
    const auto [cmn, cmx] = subtree_key_range(child_acc, depth + 1);
    if (cmx < lo || cmn > hi) return;
    visit_range(child, child_acc, depth + 1, lo, hi, fn);
  };

  switch (n->kind) {
    case NodeKind::Node4: {
      const auto* n4 = static_cast<const Node4*>(n);
      for (int i = 0; i < n4->count; ++i) visit_child(n4->keys[i], n4->children[i]);
      return;
    }
    case NodeKind::Node16: {
      const auto* n16 = static_cast<const Node16*>(n);
      for (int i = 0; i < n16->count; ++i) visit_child(n16->keys[i], n16->children[i]);
      return;
    }
    case NodeKind::Node48: {
      const auto* n48 = static_cast<const Node48*>(n);
      for (int b = 0; b < 256; ++b) {
        if (n48->child_index[b] != Node48::kEmpty)
          visit_child(static_cast<std::uint8_t>(b), n48->children[n48->child_index[b]]);
      }
      return;
    }
    case NodeKind::Node256: {
      const auto* n256 = static_cast<const Node256*>(n);
      for (int b = 0; b < 256; ++b) {
        if (n256->children[b] != nullptr)
          visit_child(static_cast<std::uint8_t>(b), n256->children[b]);
      }
      return;
    }
    default:
      return;
  }
}

}  // namespace

bool ArtTree::insert(value_type key, row_pos pos) {
  InsertCtx ctx{&key_count_, &position_count_, &census_};
  return insert_impl(root_, key, pos, 0, ctx);
}

bool ArtTree::erase(value_type key, row_pos pos) {
  EraseCtx ctx{&key_count_, &position_count_, &census_};
  return erase_impl(root_, key, pos, 0, ctx);
}

bool ArtTree::update_position(value_type key, row_pos from, row_pos to) {
  if (from == to) return contains(key);
  if (!erase(key, from)) return false;
  if (!insert(key, to)) {
    insert(key, from);  // target slot already stored: leave the payload as-is
    return false;
  }
  return true;
}

const std::vector<row_pos>* ArtTree::lookup(value_type key) const {
  const ArtNode* n = root_;
  int depth = 0;
  while (n != nullptr) {
    if (n->kind == NodeKind::Leaf) {
      const auto* leaf = as_leaf(n);
      // Full-key verification resolves any optimistic prefix skipping.
      return leaf->key == key ? &leaf->positions : nullptr;
    }
    if (n->prefix_len != 0) {
      if (prefix_mismatch(n, key, depth) < n->prefix_len) return nullptr;
      depth += static_cast<int>(n->prefix_len);
    }
    ArtNode** child = find_child(const_cast<ArtNode*>(n), key_byte(key, depth));
    if (child == nullptr) return nullptr;
    n = *child;
    ++depth;
  }
  return nullptr;
}

void ArtTree::scan_range(
    value_type lo, value_type hi,
    const std::function<void(value_type, const std::vector<row_pos>&)>& fn) const {
  if (lo > hi) return;
  visit_range(root_, 0, 0, lo, hi, [&](const LeafNode& leaf) { fn(leaf.key, leaf.positions); });
}

std::vector<std::pair<value_type, std::vector<row_pos>>> ArtTree::range_scan(value_type lo,
                                                                             value_type hi) const {
  std::vector<std::pair<value_type, std::vector<row_pos>>> out;
  if (lo > hi) return out;
  visit_range(root_, 0, 0, lo, hi,
              [&](const LeafNode& leaf) { out.emplace_back(leaf.key, leaf.positions); });
  return out;
}

void ArtTree::append_values(value_type lo, value_type hi, std::vector<value_type>& out) const {
  if (lo > hi) return;
  visit_range(root_, 0, 0, lo, hi, [&](const LeafNode& leaf) {
    out.insert(out.end(), leaf.positions.size(), leaf.key);
  });
}

std::size_t ArtTree::approx_bytes() const {
  std::size_t total = census_.leaves * sizeof(LeafNode) + census_.node4 * sizeof(Node4) +
                      census_.node16 * sizeof(Node16) + census_.node48 * sizeof(Node48) +
                      census_.node256 * sizeof(Node256);
  total += position_count_ * sizeof(row_pos);
  return total;
}

namespace {

std::size_t height_impl(const ArtNode* n) {
  if (n == nullptr) return 0;
  if (n->kind == NodeKind::Leaf) return 1;
  std::size_t best = 0;
  auto consider = [&](const ArtNode* child) { best = std::max(best, height_impl(child)); };
  switch (n->kind) {
    case NodeKind::Node4: {
      const auto* n4 = static_cast<const Node4*>(n);
      for (int i = 0; i < n4->count; ++i) consider(n4->children[i]);
      break;
    }
    case NodeKind::Node16: {
      const auto* n16 = static_cast<const Node16*>(n);
      for (int i = 0; i < n16->count; ++i) consider(n16->children[i]);
      break;
    }
    case NodeKind::Node48: {
      const auto* n48 = static_cast<const Node48*>(n);
      for (int i = 0; i < n48->count; ++i) consider(n48->children[i]);
      break;
    }
    case NodeKind::Node256: {
      const auto* n256 = static_cast<const Node256*>(n);
      for (int b = 0; b < 256; ++b) consider(n256->children[b]);
      break;
    }
    default:
      break;
  }
  return best + 1;
}

struct ValidateStats {
  std::size_t leaves = 0;
  std::size_t positions = 0;
  ArtTree::NodeCensus census;
};

[[noreturn]] void fail(const std::string& what) { throw std::logic_error("ArtTree: " + what); }

void validate_impl(const ArtNode* n, value_type acc, int depth, ValidateStats& st) {
  if (n->kind == NodeKind::Leaf) {
    const auto* leaf = as_leaf(n);
    st.leaves += 1;
    st.census.leaves += 1;
    st.positions += leaf->positions.size();
    if (leaf->positions.empty()) fail("leaf with empty payload");
    if (!std::is_sorted(leaf->positions.begin(), leaf->positions.end())) fail("unsorted payload");
    if (std::adjacent_find(leaf->positions.begin(), leaf->positions.end()) !=
        leaf->positions.end())
      fail("duplicate position in payload");
    if (depth > 0) {
      const value_type expect = leaf->key >> (8 * (kKeyBytes - depth));
      if (expect != acc) fail("leaf key disagrees with its path");
    }
    return;
  }

  if (depth + static_cast<int>(n->prefix_len) + 1 > kKeyBytes)
    fail("path longer than the key width");
  for (std::uint32_t i = 0; i < n->prefix_len; ++i)
    acc = (acc << 8) | prefix_byte(n, i, depth);
  depth += static_cast<int>(n->prefix_len);

  std::size_t expect_count = 0;
  int prev_byte = -1;
  auto check_child = [&](int byte, const ArtNode* child) {
    if (child == nullptr) fail("null child slot");
    if (byte <= prev_byte) fail("child bytes not strictly ascending");
    prev_byte = byte;
    ++expect_count;
    validate_impl(child, (acc << 8) | static_cast<value_type>(byte), depth + 1, st);
  };

  switch (n->kind) {
    case NodeKind::Node4: {
      const auto* n4 = static_cast<const Node4*>(n);
      st.census.node4 += 1;
      if (n4->count < 2 || n4->count > 4) fail("Node4 count out of range");
      for (int i = 0; i < n4->count; ++i) check_child(n4->keys[i], n4->children[i]);
      break;
    }
    case NodeKind::Node16: {
      const auto* n16 = static_cast<const Node16*>(n);
      st.census.node16 += 1;
      if (n16->count < 5 || n16->count > 16) fail("Node16 count out of range");
      for (int i = 0; i < n16->count; ++i) check_child(n16->keys[i], n16->children[i]);
      break;
    }
    case NodeKind::Node48: {
      const auto* n48 = static_cast<const Node48*>(n);
      st.census.node48 += 1;
      if (n48->count < 17 || n48->count > 48) fail("Node48 count out of range");
      std::size_t mapped = 0;
      for (int b = 0; b < 256; ++b) {
        if (n48->child_index[b] == Node48::kEmpty) continue;
        if (n48->child_index[b] >= n48->count) fail("Node48 index beyond child slots");
        ++mapped;
        check_child(b, n48->children[n48->child_index[b]]);
      }
      if (mapped != n48->count) fail("Node48 index/count mismatch");
      break;
    }
    case NodeKind::Node256: {
      const auto* n256 = static_cast<const Node256*>(n);
      st.census.node256 += 1;
      if (n256->count < 49 || n256->count > 256) fail("Node256 count out of range");
      for (int b = 0; b < 256; ++b) {
        if (n256->children[b] != nullptr) check_child(b, n256->children[b]);
      }
      break;
    }
    default:
      fail("unknown node kind");
  }
  if (expect_count != n->count) fail("stored child count disagrees with slots");
}

}  // namespace

std::size_t ArtTree::height() const { return height_impl(root_); }

void ArtTree::validate() const {
  if (root_ == nullptr) {
    if (key_count_ != 0 || position_count_ != 0) fail("empty tree with nonzero counters");
    return;
  }
  ValidateStats st;
  // A lone leaf or any internal node may sit at the root.
  validate_impl(root_, 0, 0, st);
  if (st.leaves != key_count_) fail("key_count disagrees with reachable leaves");
  if (st.positions != position_count_) fail("position_count disagrees with payloads");
  if (st.census.leaves != census_.leaves || st.census.node4 != census_.node4 ||
      st.census.node16 != census_.node16 || st.census.node48 != census_.node48 ||
      st.census.node256 != census_.node256)
    fail("census counters disagree with a fresh walk");
  if (height() > kKeyBytes + 1) fail("height exceeds the key byte width");
}

}  // namespace artcrack
