#pragma once

#include <variant>
#include <vector>

#include "mrrd/models.hpp"
#include "mrrd/quadtree.hpp"

namespace mrrd {

// Two-point flux -(A(uR) - A(uL)) / h.
double diffusive_flux(double uL, double uR, double h, const DiffusionFunction& A);
// Coarse-edge flux as the sum of the two fine fluxes on it.
State compose_interface_flux(const State& fine_a, const State& fine_b);

enum class EdgeKind : std::uint8_t { boundary, same_level, virtual_neighbor, interface };

inline constexpr int kDirDx[4] = {1, -1, 0, 0};
inline constexpr int kDirDy[4] = {0, 0, 1, -1};

// What lies across the edge of a real node; nb is set unless boundary.
inline EdgeKind classify_edge(const GradedTree& tree, const Node& n, Direction dir, NodeId& nb) {
  const int d = static_cast<int>(dir);
  const int l = n.key.level;
  const int i = n.key.i + kDirDx[d];
  const int j = n.key.j + kDirDy[d];
  if (i < 0 || j < 0 || i >= tree.cells_x(l) || j >= tree.cells_y(l)) return EdgeKind::boundary;
  nb = tree.find(i, j, l);
  if (nb == kNoNode) throw InternalError("missing same-level neighbour; virtual pass incomplete");
  switch (tree.node(nb).status) {
    case NodeStatus::leaf: return EdgeKind::same_level;
    case NodeStatus::virtual_leaf: return EdgeKind::virtual_neighbor;
    case NodeStatus::internal: break;
  }
  return EdgeKind::interface;
}

// Level whose time step governs the flux on this edge.
inline int edge_owner_level(EdgeKind kind, int level) {
  return kind == EdgeKind::virtual_neighbor ? level - 1 : level;
}

template <class M>
State scaled_flux(const M& m, const State& lo, const State& hi, double h) {
  State f = edge_flux(m, lo, hi, h);
  f[0] *= h;
  f[1] *= h;
  return f;
}

// Outward edge-integrated flux of a leaf. Fluxes are always evaluated lo -> hi
// so both sides of an edge see bit-identical values.
template <class M>
State outward_flux(const M& m, const GradedTree& tree, const Node& n, Direction dir, EdgeKind kind,
                   NodeId nb) {
  if (kind == EdgeKind::boundary) return State{};
  const bool positive = dir == Direction::east || dir == Direction::north;
  const double h = tree.cell_size(n.key.level);
  State f;
  if (kind != EdgeKind::interface) {
    const State& o = tree.node(nb).avg;
    f = positive ? scaled_flux(m, n.avg, o, h) : scaled_flux(m, o, n.avg, h);
  } else {
    if (n.first_son == kNoNode) throw InternalError("interface edge without virtual sons");
    const Node& other = tree.node(nb);
    const double hf = 0.5 * h;
    const bool along_x = dir == Direction::east || dir == Direction::west;
    State part[2];
    for (int e = 0; e < 2; ++e) {
      // Son offsets of this node and of the neighbour touching the edge.
      const int mine = along_x ? (positive ? 1 : 0) + 2 * e : e + 2 * (positive ? 1 : 0);
      const int theirs = along_x ? (positive ? 0 : 1) + 2 * e : e + 2 * (positive ? 0 : 1);
      const State& a = tree.node(n.first_son + mine).avg;
      const State& b = tree.node(other.first_son + theirs).avg;
      part[e] = positive ? scaled_flux(m, a, b, hf) : scaled_flux(m, b, a, hf);
    }
    f = compose_interface_flux(part[0], part[1]);
  }
  if (!positive) {
    f[0] = -f[0];
    f[1] = -f[1];
  }
  return f;
}

// rate = -(1/h^2) sum of outward fluxes + source.
inline State combine_rate(const std::array<State, 4>& out, double h, const State& source) {
  State r;
  for (int s = 0; s < kMaxSpecies; ++s) {
    r[s] = -(out[0][s] + out[1][s] + out[2][s] + out[3][s]) / (h * h) + source[s];
  }
  return r;
}

// Rate of one leaf. Edges whose owner level is not fresh reuse flux_store.
// fresh == nullptr recomputes every edge.
template <class M>
void leaf_rate(const M& m, GradedTree& tree, NodeId id, const std::vector<char>* fresh) {
  Node& n = tree.node(id);
  for (int d = 0; d < 4; ++d) {
    NodeId nb = kNoNode;
    const Direction dir = static_cast<Direction>(d);
    const EdgeKind kind = classify_edge(tree, n, dir, nb);
    if (fresh && !(*fresh)[static_cast<std::size_t>(edge_owner_level(kind, n.key.level))]) continue;
    n.flux_store[d] = outward_flux(m, tree, n, dir, kind, nb);
  }
  n.reaction_store = source_term(m, n.avg, tree.center_x(n.key), tree.center_y(n.key));
  n.rate = combine_rate(n.flux_store, tree.cell_size(n.key.level), n.reaction_store);
}

// Discrete divergence of the diffusive and chemotactic fluxes at a leaf.
State divergence(const ModelSpec& spec, const GradedTree& tree, const NodeKey& key);
// Fresh rates at every leaf.
void compute_rates(const ModelSpec& spec, GradedTree& tree);
// Rates at leaves of the listed levels; edges owned by levels with fresh == 0 are reused.
void compute_rates(const ModelSpec& spec, GradedTree& tree, const std::vector<int>& levels,
                   const std::vector<char>& fresh);
// Forward Euler on all leaves with one step size.
void march(const ModelSpec& spec, GradedTree& tree, double dt);
// Sum of avg * |cell| over leaves, per species.
State total_mass(const GradedTree& tree);

}  // namespace mrrd
