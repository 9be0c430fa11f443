#include "mrrd/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace mrrd {

namespace {

constexpr int kNeighbourOffsets[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                         {1, 0},   {-1, 1}, {0, 1},  {1, 1}};

bool fail(std::string* why, const std::string& message) {
  if (why) *why = message;
  return false;
}

std::string key_text(const NodeKey& k) {
  std::ostringstream os;
  os << "(" << k.i << "," << k.j << "," << k.level << ")";
  return os.str();
}

}  // namespace

bool key_less(const NodeKey& a, const NodeKey& b) {
  if (a.level != b.level) return a.level < b.level;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

const char* status_name(NodeStatus status) {
  switch (status) {
    case NodeStatus::internal: return "internal";
    case NodeStatus::leaf: return "leaf";
    case NodeStatus::virtual_leaf: return "virtual";
  }
  return "?";
}

const char* coarsen_outcome_name(CoarsenOutcome outcome) {
  switch (outcome) {
    case CoarsenOutcome::coarsened: return "coarsened";
    case CoarsenOutcome::not_internal: return "node is not internal";
    case CoarsenOutcome::sons_not_leaves: return "sons are not all leaves";
    case CoarsenOutcome::sons_not_deletable: return "sons are not deletable";
    case CoarsenOutcome::has_virtual_sons: return "a son carries virtual sons";
    case CoarsenOutcome::grading: return "coarsening would break grading";
  }
  return "?";
}

GradedTree::GradedTree(const Domain& domain, int max_level, int species, int roots_x, int roots_y)
    : domain_(domain),
      max_level_(max_level),
      species_(species),
      roots_x_(roots_x),
      roots_y_(roots_y) {
  if (max_level < 1 || max_level > 12) throw ConfigError("max level must be in [1, 12]");
  if (species < 1 || species > kMaxSpecies) throw ConfigError("species count must be 1 or 2");
  if (roots_x < 1 || roots_y < 1) throw ConfigError("root grid must be at least 1x1");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) throw ConfigError("empty domain");
  root_size_ = domain.width() / roots_x;
  const double hy = domain.height() / roots_y;
  if (std::abs(root_size_ - hy) > 1e-12 * std::max(root_size_, hy)) {
    throw ConfigError("root cells must be square");
  }
  index_.resize(static_cast<std::size_t>(max_level + 1));
  for (int l = 0; l <= max_level; ++l) {
    index_[l].assign(static_cast<std::size_t>(cells_x(l)) * cells_y(l), kNoNode);
  }
  for (int i = 0; i < roots_x; ++i) {
    for (int j = 0; j < roots_y; ++j) {
      Node root;
      root.key = {i, j, 0};
      root.status = NodeStatus::leaf;
      nodes_.push_back(root);
      set_index(root.key, static_cast<NodeId>(nodes_.size() - 1));
    }
  }
}

double GradedTree::center_x(const NodeKey& key) const {
  return domain_.x_min + (key.i + 0.5) * cell_size(key.level);
}

double GradedTree::center_y(const NodeKey& key) const {
  return domain_.y_min + (key.j + 0.5) * cell_size(key.level);
}

bool GradedTree::in_domain(const NodeKey& key) const {
  return key.level >= 0 && key.level <= max_level_ && key.i >= 0 && key.j >= 0 &&
         key.i < cells_x(key.level) && key.j < cells_y(key.level);
}

NodeId GradedTree::find(const NodeKey& key) const {
  if (!in_domain(key)) return kNoNode;
  return index_[key.level][static_cast<std::size_t>(key.j) * cells_x(key.level) + key.i];
}

NodeId GradedTree::find(int i, int j, int level) const { return find(NodeKey{i, j, level}); }

NodeId GradedTree::find_reflected(int i, int j, int level) const {
  const int nx = cells_x(level);
  const int ny = cells_y(level);
  i = reflect_index(i, nx);
  j = reflect_index(j, ny);
  return index_[level][static_cast<std::size_t>(j) * nx + i];
}

void GradedTree::set_index(const NodeKey& key, NodeId id) {
  index_[key.level][static_cast<std::size_t>(key.j) * cells_x(key.level) + key.i] = id;
}

NodeId GradedTree::allocate_block() {
  if (!free_blocks_.empty()) {
    const NodeId first = free_blocks_.back();
    free_blocks_.pop_back();
    return first;
  }
  const auto first = static_cast<NodeId>(nodes_.size());
  nodes_.resize(nodes_.size() + 4);
  return first;
}

void GradedTree::release_block(NodeId first) {
  for (int e = 0; e < 4; ++e) {
    Node& s = node(first + e);
    set_index(s.key, kNoNode);
    s = Node{};
    s.key.level = -1;
  }
  free_blocks_.push_back(first);
}

void GradedTree::invalidate() {
  ++version_;
  lists_valid_ = false;
}

void GradedTree::touch_neighbourhood(const NodeKey& key) {
  touched_.push_back(key);
  for (const auto& o : kNeighbourOffsets) {
    const NodeKey nb{key.i + o[0], key.j + o[1], key.level};
    if (in_domain(nb)) touched_.push_back(nb);
  }
}

bool GradedTree::can_split(const NodeKey& key) const {
  for (const auto& o : kNeighbourOffsets) {
    const NodeKey nb{key.i + o[0], key.j + o[1], key.level};
    if (!in_domain(nb)) continue;
    const NodeId id = find(nb);
    if (id == kNoNode || !node(id).is_real()) return false;
  }
  return true;
}

std::array<NodeId, 4> GradedTree::split_leaf(const NodeKey& key_ref) {
  // The argument may live in the node pool, which can reallocate below.
  const NodeKey key = key_ref;
  const NodeId id = find(key);
  if (id == kNoNode || node(id).status != NodeStatus::leaf) {
    throw InternalError("split_leaf on a non-leaf " + key_text(key));
  }
  if (key.level >= max_level_) throw RefusalError("cannot split beyond the finest level");
  if (!can_split(key)) {
    throw InternalError("split_leaf would break grading at " + key_text(key));
  }
  NodeId first = node(id).first_son;
  if (first != kNoNode) {
    for (int e = 0; e < 4; ++e) {
      node(first + e).status = NodeStatus::leaf;
      node(first + e).clock = node(id).clock;
    }
  } else {
    first = allocate_block();
    const Node& parent = node(id);
    for (int e2 = 0; e2 < 2; ++e2) {
      for (int e1 = 0; e1 < 2; ++e1) {
        Node& s = nodes_[static_cast<std::size_t>(first + e1 + 2 * e2)];
        s = Node{};
        s.key = key.son(e1, e2);
        s.status = NodeStatus::leaf;
        s.parent = id;
        s.avg = parent.avg;
        s.clock = parent.clock;
        set_index(s.key, first + e1 + 2 * e2);
      }
    }
    node(id).first_son = first;
  }
  node(id).status = NodeStatus::internal;
  split_log_.push_back(id);
  touch_neighbourhood(key);
  for (int e = 0; e < 4; ++e) touched_.push_back(node(first + e).key);
  invalidate();
  return {first, first + 1, first + 2, first + 3};
}

bool GradedTree::split_graded(const NodeKey& key_ref, int min_level) {
  const NodeKey key = key_ref;
  if (key.level >= max_level_ || key.level < min_level) return false;
  // Make every same-level neighbour real, splitting coarser covering leaves first.
  auto ensure_real = [&](auto&& self, const NodeKey& k) -> bool {
    const NodeId id = find(k);
    if (id != kNoNode && node(id).is_real()) return true;
    const NodeKey p = k.parent();
    if (p.level < min_level) return false;
    if (!self(self, p)) return false;
    const NodeId pid = find(p);
    if (node(pid).status != NodeStatus::leaf) return true;
    return split_graded(p, min_level);
  };
  for (const auto& o : kNeighbourOffsets) {
    const NodeKey nb{key.i + o[0], key.j + o[1], key.level};
    if (!in_domain(nb)) continue;
    if (!ensure_real(ensure_real, nb)) return false;
  }
  split_leaf(key);
  return true;
}

std::vector<NodeId> GradedTree::take_split_log() {
  std::vector<NodeId> out;
  out.swap(split_log_);
  return out;
}

CoarsenOutcome GradedTree::coarsen(const NodeKey& key) {
  const NodeId id = find(key);
  if (id == kNoNode || node(id).status != NodeStatus::internal) return CoarsenOutcome::not_internal;
  const NodeId first = node(id).first_son;
  for (int e = 0; e < 4; ++e) {
    if (node(first + e).status != NodeStatus::leaf) return CoarsenOutcome::sons_not_leaves;
  }
  for (int e = 0; e < 4; ++e) {
    if (!node(first + e).deletable) return CoarsenOutcome::sons_not_deletable;
  }
  for (int e = 0; e < 4; ++e) {
    if (node(first + e).first_son != kNoNode) return CoarsenOutcome::has_virtual_sons;
  }
  // After removal the node is adjacent to the ring of cells around its sons.
  const int level = key.level + 1;
  for (int a = 2 * key.i - 1; a <= 2 * key.i + 2; ++a) {
    for (int b = 2 * key.j - 1; b <= 2 * key.j + 2; ++b) {
      if ((a >> 1) == key.i && (b >> 1) == key.j) continue;
      const NodeId nb = find(a, b, level);
      if (nb != kNoNode && node(nb).status == NodeStatus::internal) return CoarsenOutcome::grading;
    }
  }
  State mean{};
  for (int e = 0; e < 4; ++e) {
    for (int s = 0; s < species_; ++s) mean[s] += 0.25 * node(first + e).avg[s];
  }
  const std::int64_t clock = node(first).clock;
  release_block(first);
  Node& n = node(id);
  n.avg = mean;
  n.clock = clock;
  n.first_son = kNoNode;
  n.status = NodeStatus::leaf;
  touch_neighbourhood(key);
  invalidate();
  return CoarsenOutcome::coarsened;
}

bool GradedTree::needs_virtual_block(NodeId leaf) const {
  const NodeKey& key = node(leaf).key;
  if (key.level >= max_level_) return false;
  for (const auto& o : kNeighbourOffsets) {
    const NodeId nb = find(key.i + o[0], key.j + o[1], key.level);
    if (nb != kNoNode && node(nb).status == NodeStatus::internal) return true;
  }
  return false;
}

void GradedTree::create_virtual_block(NodeId leaf) {
  const NodeId first = allocate_block();
  const Node& parent = node(leaf);
  for (int e2 = 0; e2 < 2; ++e2) {
    for (int e1 = 0; e1 < 2; ++e1) {
      Node& s = nodes_[static_cast<std::size_t>(first + e1 + 2 * e2)];
      s = Node{};
      s.key = parent.key.son(e1, e2);
      s.status = NodeStatus::virtual_leaf;
      s.parent = leaf;
      s.avg = parent.avg;
      s.clock = parent.clock;
      set_index(s.key, first + e1 + 2 * e2);
    }
  }
  node(leaf).first_son = first;
}

void GradedTree::destroy_virtual_block(NodeId leaf) {
  release_block(node(leaf).first_son);
  node(leaf).first_son = kNoNode;
}

void GradedTree::apply_virtual_rule(NodeId leaf) {
  const bool need = needs_virtual_block(leaf);
  const bool has = node(leaf).first_son != kNoNode;
  if (need && !has) {
    create_virtual_block(leaf);
    invalidate();
  } else if (!need && has) {
    destroy_virtual_block(leaf);
    invalidate();
  }
}

void GradedTree::ensure_virtual_cousins() {
  touched_.clear();
  const std::size_t n = nodes_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Node& nd = nodes_[k];
    if (nd.alive() && nd.status == NodeStatus::leaf) apply_virtual_rule(static_cast<NodeId>(k));
  }
}

void GradedTree::refresh_virtual_cousins() {
  std::vector<NodeKey> keys;
  keys.swap(touched_);
  for (const NodeKey& k : keys) {
    const NodeId id = find(k);
    if (id != kNoNode && node(id).status == NodeStatus::leaf) apply_virtual_rule(id);
  }
}

std::vector<NodeKey> GradedTree::leaves() const {
  std::vector<NodeKey> out;
  out.reserve(leaf_ids().size());
  for (NodeId id : leaf_ids()) out.push_back(node(id).key);
  std::sort(out.begin(), out.end(), key_less);
  return out;
}

std::optional<NodeKey> GradedTree::neighbor(const NodeKey& key, Direction dir, int offset) const {
  NodeKey nb = key;
  switch (dir) {
    case Direction::east: nb.i += offset; break;
    case Direction::west: nb.i -= offset; break;
    case Direction::north: nb.j += offset; break;
    case Direction::south: nb.j -= offset; break;
  }
  if (find(nb) == kNoNode) return std::nullopt;
  return nb;
}

void GradedTree::rebuild_lists() const {
  const auto levels = static_cast<std::size_t>(max_level_ + 1);
  leaves_by_level_.assign(levels, {});
  internals_by_level_.assign(levels, {});
  vparents_by_level_.assign(levels, {});
  all_leaves_.clear();
  virtual_count_ = 0;
  const std::size_t n = nodes_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Node& nd = nodes_[k];
    if (!nd.alive()) continue;
    const auto id = static_cast<NodeId>(k);
    switch (nd.status) {
      case NodeStatus::leaf:
        leaves_by_level_[nd.key.level].push_back(id);
        all_leaves_.push_back(id);
        if (nd.first_son != kNoNode) vparents_by_level_[nd.key.level].push_back(id);
        break;
      case NodeStatus::internal: internals_by_level_[nd.key.level].push_back(id); break;
      case NodeStatus::virtual_leaf: ++virtual_count_; break;
    }
  }
  lists_valid_ = true;
}

const std::vector<NodeId>& GradedTree::leaves_at(int level) const {
  if (!lists_valid_) rebuild_lists();
  return leaves_by_level_[level];
}

const std::vector<NodeId>& GradedTree::internals_at(int level) const {
  if (!lists_valid_) rebuild_lists();
  return internals_by_level_[level];
}

const std::vector<NodeId>& GradedTree::virtual_parents_at(int level) const {
  if (!lists_valid_) rebuild_lists();
  return vparents_by_level_[level];
}

const std::vector<NodeId>& GradedTree::leaf_ids() const {
  if (!lists_valid_) rebuild_lists();
  return all_leaves_;
}

std::size_t GradedTree::virtual_count() const {
  if (!lists_valid_) rebuild_lists();
  return virtual_count_;
}

int GradedTree::min_leaf_level() const {
  for (int l = 0; l <= max_level_; ++l) {
    if (!leaves_at(l).empty()) return l;
  }
  return max_level_;
}

bool GradedTree::check_grading(std::string* why) const {
  for (NodeId id : leaf_ids()) {
    const NodeKey& k = node(id).key;
    for (const auto& o : kNeighbourOffsets) {
      const NodeKey nb{k.i + o[0], k.j + o[1], k.level};
      if (!in_domain(nb)) continue;
      const NodeId nid = find(nb);
      if (nid != kNoNode && node(nid).is_real()) {
        if (node(nid).status == NodeStatus::leaf) continue;
        // Sons of nb touching k must be leaves.
        for (int e2 = 0; e2 < 2; ++e2) {
          for (int e1 = 0; e1 < 2; ++e1) {
            const NodeKey s = nb.son(e1, e2);
            const int di = (s.i >> 1) - k.i;
            const int dj = (s.j >> 1) - k.j;
            const bool touches_x = di == 0 || (di == 1 && e1 == 0) || (di == -1 && e1 == 1);
            const bool touches_y = dj == 0 || (dj == 1 && e2 == 0) || (dj == -1 && e2 == 1);
            if (!touches_x || !touches_y) continue;
            const NodeId sid = find(s);
            if (sid == kNoNode || node(sid).status != NodeStatus::leaf) {
              return fail(why, "leaf " + key_text(k) + " touches leaves two levels finer");
            }
          }
        }
      } else {
        const NodeId pid = find(nb.parent());
        if (pid == kNoNode || node(pid).status != NodeStatus::leaf) {
          return fail(why, "leaf " + key_text(k) + " touches a leaf two levels coarser");
        }
      }
    }
  }
  return true;
}

bool GradedTree::check_completeness(std::string* why) const {
  const std::size_t n = nodes_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Node& nd = nodes_[k];
    if (!nd.alive()) continue;
    if (find(nd.key) != static_cast<NodeId>(k)) return fail(why, "index mismatch at " + key_text(nd.key));
    if (nd.key.level > 0) {
      if (nd.parent == kNoNode || !(node(nd.parent).key == nd.key.parent())) {
        return fail(why, "bad parent link at " + key_text(nd.key));
      }
      const NodeStatus ps = node(nd.parent).status;
      if (nd.is_real() && ps != NodeStatus::internal) {
        return fail(why, "real node " + key_text(nd.key) + " under a non-internal parent");
      }
      if (!nd.is_real() && ps != NodeStatus::leaf) {
        return fail(why, "virtual node " + key_text(nd.key) + " under a non-leaf parent");
      }
    }
    if (nd.status == NodeStatus::internal) {
      if (nd.first_son == kNoNode) return fail(why, "internal node without sons " + key_text(nd.key));
      for (int e = 0; e < 4; ++e) {
        const Node& s = node(nd.first_son + e);
        if (!s.alive() || !s.is_real() || s.parent != static_cast<NodeId>(k)) {
          return fail(why, "internal node " + key_text(nd.key) + " lacks a real son");
        }
      }
    }
    if (nd.status == NodeStatus::virtual_leaf && nd.first_son != kNoNode) {
      return fail(why, "virtual node with sons " + key_text(nd.key));
    }
  }
  return true;
}

bool GradedTree::check_partition(std::string* why) const {
  std::int64_t covered = 0;
  for (NodeId id : leaf_ids()) {
    const Node& nd = node(id);
    covered += std::int64_t{1} << (2 * (max_level_ - nd.key.level));
    for (NodeId p = nd.parent; p != kNoNode; p = node(p).parent) {
      if (node(p).status != NodeStatus::internal) {
        return fail(why, "leaf " + key_text(nd.key) + " nested in a non-internal node");
      }
    }
  }
  const std::int64_t total = static_cast<std::int64_t>(cells_x(max_level_)) * cells_y(max_level_);
  if (covered != total) return fail(why, "leaves do not tile the domain");
  return true;
}

bool GradedTree::check_virtual_rule(std::string* why) const {
  for (NodeId id : leaf_ids()) {
    const bool has = node(id).first_son != kNoNode;
    if (has != needs_virtual_block(id)) {
      return fail(why, "virtual rule violated at " + key_text(node(id).key));
    }
  }
  return true;
}

void GradedTree::dump(std::ostream& os, bool leaves_only) const {
  std::vector<NodeId> ids;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node& nd = nodes_[k];
    if (!nd.alive()) continue;
    if (leaves_only && nd.status != NodeStatus::leaf) continue;
    ids.push_back(static_cast<NodeId>(k));
  }
  std::sort(ids.begin(), ids.end(),
            [&](NodeId a, NodeId b) { return key_less(node(a).key, node(b).key); });
  const auto old_precision = os.precision(17);
  for (NodeId id : ids) {
    const Node& nd = node(id);
    os << nd.key.level << ' ' << nd.key.i << ' ' << nd.key.j << ' ' << status_name(nd.status);
    for (int s = 0; s < species_; ++s) os << ' ' << nd.avg[s];
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace mrrd
