#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrrd/types.hpp"

namespace mrrd {

// Cell (i, j) on level `level`; i counts along x, j along y, both from 0.
struct NodeKey {
  std::int32_t i = 0;
  std::int32_t j = 0;
  std::int32_t level = 0;

  NodeKey parent() const { return {i / 2, j / 2, level - 1}; }
  NodeKey son(int e1, int e2) const { return {2 * i + e1, 2 * j + e2, level + 1}; }
  int son_index() const { return (i & 1) + 2 * (j & 1); }
  friend bool operator==(const NodeKey&, const NodeKey&) = default;
};

// Level-major, then i, then j.
bool key_less(const NodeKey& a, const NodeKey& b);

enum class NodeStatus : std::uint8_t { internal, leaf, virtual_leaf };

// east = +x, west = -x, north = +y, south = -y.
enum class Direction : std::uint8_t { east = 0, west = 1, north = 2, south = 3 };

const char* status_name(NodeStatus status);

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

struct Node {
  NodeKey key;
  NodeStatus status = NodeStatus::leaf;
  bool deletable = false;
  NodeId parent = kNoNode;
  // Sons (e1, e2) live at first_son + e1 + 2 * e2. A leaf with sons carries a virtual block.
  NodeId first_son = kNoNode;
  State avg{};
  State detail{};
  // Outward edge-integrated flux per Direction, reused by local time stepping.
  std::array<State, 4> flux_store{};
  State reaction_store{};
  State rate{};
  // Fine-step index at which avg is valid (local time stepping bookkeeping).
  std::int64_t clock = 0;

  bool is_real() const { return status != NodeStatus::virtual_leaf; }
  bool alive() const { return key.level >= 0; }
};

enum class CoarsenOutcome {
  coarsened,
  not_internal,
  sons_not_leaves,
  sons_not_deletable,
  has_virtual_sons,
  grading,
};

const char* coarsen_outcome_name(CoarsenOutcome outcome);

// Graded quadtree over a rectangle tiled by roots_x * roots_y level-0 cells.
// Nodes live in a pool; sons are allocated in blocks of four. Each level keeps a
// direct-address table from (i, j) to pool index, so key lookup is O(1).
// Grading: leaves sharing an edge or a corner differ by at most one level.
// Virtual rule: a leaf carries four virtual sons iff one of its eight same-level
// neighbours is internal. Together with grading this makes every 5x5 same-level
// stencil of a real node available (indices mirrored at the boundary).
class GradedTree {
 public:
  GradedTree(const Domain& domain, int max_level, int species, int roots_x = 1, int roots_y = 1);

  const Domain& domain() const { return domain_; }
  int max_level() const { return max_level_; }
  int species() const { return species_; }
  int roots_x() const { return roots_x_; }
  int roots_y() const { return roots_y_; }
  int cells_x(int level) const { return roots_x_ << level; }
  int cells_y(int level) const { return roots_y_ << level; }
  double cell_size(int level) const { return root_size_ / static_cast<double>(1 << level); }
  double center_x(const NodeKey& key) const;
  double center_y(const NodeKey& key) const;
  bool in_domain(const NodeKey& key) const;

  // kNoNode when absent or outside the domain.
  NodeId find(const NodeKey& key) const;
  NodeId find(int i, int j, int level) const;
  // Mirrors out-of-domain indices back inside (even reflection) before lookup.
  NodeId find_reflected(int i, int j, int level) const;

  Node& node(NodeId id) { return nodes_[static_cast<std::size_t>(id)]; }
  const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  NodeId son(NodeId id, int e1, int e2) const { return node(id).first_son + e1 + 2 * e2; }

  // Turns a leaf into an internal node with four leaf sons. New sons copy the
  // parent average; existing virtual sons keep theirs. Throws RefusalError at the
  // finest level and InternalError when a same-level neighbour is missing.
  std::array<NodeId, 4> split_leaf(const NodeKey& key);
  // Splits after refining coarser neighbours so that grading holds. Returns false
  // when that would require splitting a leaf coarser than min_level.
  bool split_graded(const NodeKey& key, int min_level = 0);
  bool can_split(const NodeKey& key) const;
  // Ids of nodes split since the last call, in split order.
  std::vector<NodeId> take_split_log();
  // Removes the four leaf sons; the node takes their mean.
  CoarsenOutcome coarsen(const NodeKey& key);

  bool needs_virtual_block(NodeId leaf) const;
  // Applies the virtual rule to every leaf.
  void ensure_virtual_cousins();
  // Applies the virtual rule to leaves near topology changes since the last call.
  void refresh_virtual_cousins();

  std::vector<NodeKey> leaves() const;
  std::optional<NodeKey> neighbor(const NodeKey& key, Direction dir, int offset = 1) const;

  // Per-level id lists in pool order, rebuilt lazily after topology changes.
  const std::vector<NodeId>& leaves_at(int level) const;
  const std::vector<NodeId>& internals_at(int level) const;
  const std::vector<NodeId>& virtual_parents_at(int level) const;
  const std::vector<NodeId>& leaf_ids() const;
  std::size_t leaf_count() const { return leaf_ids().size(); }
  std::size_t virtual_count() const;
  int min_leaf_level() const;
  std::uint64_t topology_version() const { return version_; }

  std::size_t pool_size() const { return nodes_.size(); }

  bool check_grading(std::string* why = nullptr) const;
  bool check_completeness(std::string* why = nullptr) const;
  bool check_partition(std::string* why = nullptr) const;
  bool check_virtual_rule(std::string* why = nullptr) const;

  // One line per node: "level i j status avg...". Leaves only when leaves_only.
  void dump(std::ostream& os, bool leaves_only = false) const;

 private:
  NodeId allocate_block();
  void release_block(NodeId first);
  void set_index(const NodeKey& key, NodeId id);
  void touch_neighbourhood(const NodeKey& key);
  void create_virtual_block(NodeId leaf);
  void destroy_virtual_block(NodeId leaf);
  void apply_virtual_rule(NodeId leaf);
  void invalidate();
  void rebuild_lists() const;

  Domain domain_;
  int max_level_;
  int species_;
  int roots_x_;
  int roots_y_;
  double root_size_;
  std::vector<Node> nodes_;
  std::vector<NodeId> free_blocks_;
  std::vector<std::vector<NodeId>> index_;
  std::vector<NodeKey> touched_;
  std::vector<NodeId> split_log_;
  std::uint64_t version_ = 0;

  mutable bool lists_valid_ = false;
  mutable std::vector<std::vector<NodeId>> leaves_by_level_;
  mutable std::vector<std::vector<NodeId>> internals_by_level_;
  mutable std::vector<std::vector<NodeId>> vparents_by_level_;
  mutable std::vector<NodeId> all_leaves_;
  mutable std::size_t virtual_count_ = 0;
};

// Even reflection of an index into [0, n).
inline int reflect_index(int i, int n) {
  while (i < 0 || i >= n) i = i < 0 ? -1 - i : 2 * n - 1 - i;
  return i;
}

}  // namespace mrrd
