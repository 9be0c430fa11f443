#include "mrrd/fvcore.hpp"

namespace mrrd {

double diffusive_flux(double uL, double uR, double h, const DiffusionFunction& A) {
  return -(A.value(uR) - A.value(uL)) / h;
}

State compose_interface_flux(const State& fine_a, const State& fine_b) {
  return {fine_a[0] + fine_b[0], fine_a[1] + fine_b[1]};
}

State divergence(const ModelSpec& spec, const GradedTree& tree, const NodeKey& key) {
  const NodeId id = tree.find(key);
  if (id == kNoNode || tree.node(id).status != NodeStatus::leaf) {
    throw InternalError("divergence needs a leaf");
  }
  return std::visit(
      [&](const auto& m) {
        const Node& n = tree.node(id);
        std::array<State, 4> out;
        for (int d = 0; d < 4; ++d) {
          NodeId nb = kNoNode;
          const Direction dir = static_cast<Direction>(d);
          const EdgeKind kind = classify_edge(tree, n, dir, nb);
          out[d] = outward_flux(m, tree, n, dir, kind, nb);
        }
        return combine_rate(out, tree.cell_size(key.level), State{});
      },
      spec);
}

void compute_rates(const ModelSpec& spec, GradedTree& tree) {
  std::visit(
      [&](const auto& m) {
        for (NodeId id : tree.leaf_ids()) leaf_rate(m, tree, id, nullptr);
      },
      spec);
}

void compute_rates(const ModelSpec& spec, GradedTree& tree, const std::vector<int>& levels,
                   const std::vector<char>& fresh) {
  std::visit(
      [&](const auto& m) {
        for (int l : levels) {
          for (NodeId id : tree.leaves_at(l)) leaf_rate(m, tree, id, &fresh);
        }
      },
      spec);
}

void march(const ModelSpec& spec, GradedTree& tree, double dt) {
  compute_rates(spec, tree);
  const int species = tree.species();
  for (NodeId id : tree.leaf_ids()) {
    Node& n = tree.node(id);
    for (int s = 0; s < species; ++s) n.avg[s] += dt * n.rate[s];
  }
}

State total_mass(const GradedTree& tree) {
  State m{};
  for (NodeId id : tree.leaf_ids()) {
    const Node& n = tree.node(id);
    const double h = tree.cell_size(n.key.level);
    for (int s = 0; s < tree.species(); ++s) m[s] += n.avg[s] * h * h;
  }
  return m;
}

}  // namespace mrrd
