#include "mrrd/mrtransform.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace mrrd {

namespace {

struct Corrections {
  double qx;
  double qy;
  double qxy;
};

Corrections corrections(const Stencil& s, int sp) {
  constexpr double g[3] = {0.0, kGamma1, kGamma2};
  Corrections c{0.0, 0.0, 0.0};
  for (int n = 1; n <= 2; ++n) {
    c.qx += g[n] * (s[2 + n][2][sp] - s[2 - n][2][sp]);
    c.qy += g[n] * (s[2][2 + n][sp] - s[2][2 - n][sp]);
    for (int p = 1; p <= 2; ++p) {
      c.qxy += g[n] * g[p] *
               (s[2 + n][2 + p][sp] - s[2 + n][2 - p][sp] - s[2 - n][2 + p][sp] +
                s[2 - n][2 - p][sp]);
    }
  }
  return c;
}

void exact_stencil(const GradedTree& tree, const CellAverageFn& averages, const NodeKey& center,
                   Stencil& out) {
  const int nx = tree.cells_x(center.level);
  const int ny = tree.cells_y(center.level);
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      const NodeKey k{reflect_index(center.i + a, nx), reflect_index(center.j + b, ny),
                      center.level};
      out[a + 2][b + 2] = averages(k);
    }
  }
}

void field_stencil(const Field& f, int i, int j, int sp, Stencil& out) {
  for (int a = -2; a <= 2; ++a) {
    const int ii = reflect_index(i + a, f.nx);
    for (int b = -2; b <= 2; ++b) {
      out[a + 2][b + 2][sp] = f.at(sp, ii, reflect_index(j + b, f.ny));
    }
  }
}

}  // namespace

DetailNorm parse_detail_norm(const std::string& name) {
  if (name == "min") return DetailNorm::min_abs;
  if (name == "max") return DetailNorm::max_abs;
  if (name == "euclidean") return DetailNorm::euclidean;
  throw ConfigError("unknown detail norm '" + name + "' (min, max, euclidean)");
}

const char* detail_norm_name(DetailNorm norm) {
  switch (norm) {
    case DetailNorm::min_abs: return "min";
    case DetailNorm::max_abs: return "max";
    case DetailNorm::euclidean: return "euclidean";
  }
  return "?";
}

State project(const SonValues& sons, int species) {
  State w{};
  for (int s = 0; s < species; ++s) {
    w[s] = 0.25 * (sons[0][s] + sons[1][s] + sons[2][s] + sons[3][s]);
  }
  return w;
}

SonValues predict(const Stencil& s, int species) {
  SonValues out{};
  for (int sp = 0; sp < species; ++sp) {
    const Corrections c = corrections(s, sp);
    const double w = s[2][2][sp];
    out[0][sp] = w + c.qx + c.qy + c.qxy;
    out[1][sp] = w - c.qx + c.qy - c.qxy;
    out[2][sp] = w + c.qx - c.qy - c.qxy;
    out[3][sp] = w - c.qx - c.qy + c.qxy;
  }
  return out;
}

SonValues predict_sign_variant(const Stencil& s, int species) {
  SonValues out{};
  for (int sp = 0; sp < species; ++sp) {
    const Corrections c = corrections(s, sp);
    const double w = s[2][2][sp];
    out[0][sp] = w - c.qx - c.qy + c.qxy;
    out[1][sp] = w + c.qx - c.qy + c.qxy;
    out[2][sp] = w - c.qx + c.qy + c.qxy;
    out[3][sp] = w + c.qx + c.qy - c.qxy;
  }
  return out;
}

double combine_detail(const State& d, int species, DetailNorm norm) {
  double r = std::abs(d[0]);
  for (int s = 1; s < species; ++s) {
    const double a = std::abs(d[s]);
    switch (norm) {
      case DetailNorm::min_abs: r = std::min(r, a); break;
      case DetailNorm::max_abs: r = std::max(r, a); break;
      case DetailNorm::euclidean: r = std::hypot(r, a); break;
    }
  }
  return r;
}

double level_tolerance(double eps_ref, int level, int max_level) {
  return std::ldexp(eps_ref, 2 * (level - max_level));
}

State value_at(const GradedTree& tree, int i, int j, int level) {
  i = reflect_index(i, tree.cells_x(level));
  j = reflect_index(j, tree.cells_y(level));
  const NodeId id = tree.find(i, j, level);
  if (id != kNoNode) return tree.node(id).avg;
  if (level == 0) throw InternalError("missing root cell");
  Stencil st;
  gather_stencil(tree, NodeKey{i / 2, j / 2, level - 1}, st);
  return predict(st, tree.species())[(i & 1) + 2 * (j & 1)];
}

void gather_stencil(const GradedTree& tree, const NodeKey& center, Stencil& out) {
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      const NodeId id = tree.find_reflected(center.i + a, center.j + b, center.level);
      out[a + 2][b + 2] = id != kNoNode ? tree.node(id).avg
                                        : value_at(tree, center.i + a, center.j + b, center.level);
    }
  }
}

void project_tree(GradedTree& tree, int min_level) {
  const int species = tree.species();
  for (int l = tree.max_level() - 1; l >= min_level; --l) {
    for (NodeId id : tree.internals_at(l)) {
      const NodeId f = tree.node(id).first_son;
      State w{};
      for (int s = 0; s < species; ++s) {
        w[s] = 0.25 * (tree.node(f).avg[s] + tree.node(f + 1).avg[s] + tree.node(f + 2).avg[s] +
                       tree.node(f + 3).avg[s]);
      }
      tree.node(id).avg = w;
    }
  }
}

void predict_sons(GradedTree& tree, NodeId parent) {
  Stencil st;
  gather_stencil(tree, tree.node(parent).key, st);
  const SonValues sons = predict(st, tree.species());
  const NodeId f = tree.node(parent).first_son;
  for (int e = 0; e < 4; ++e) tree.node(f + e).avg = sons[e];
}

void update_virtual_values(GradedTree& tree, int min_parent_level) {
  for (int l = std::max(min_parent_level, 0); l < tree.max_level(); ++l) {
    for (NodeId id : tree.virtual_parents_at(l)) predict_sons(tree, id);
  }
}

void compute_details(GradedTree& tree, int min_parent_level) {
  const int species = tree.species();
  Stencil st;
  for (int l = std::max(min_parent_level, 0); l < tree.max_level(); ++l) {
    for (NodeId id : tree.internals_at(l)) {
      gather_stencil(tree, tree.node(id).key, st);
      const SonValues pred = predict(st, species);
      const NodeId f = tree.node(id).first_son;
      for (int e = 0; e < 4; ++e) {
        Node& son = tree.node(f + e);
        for (int s = 0; s < species; ++s) son.detail[s] = son.avg[s] - pred[e][s];
      }
    }
  }
}

void mark_deletable(GradedTree& tree, const MRParams& params, int min_parent_level) {
  const int species = tree.species();
  const int L = tree.max_level();
  for (NodeId id : tree.leaves_at(0)) tree.node(id).deletable = false;
  for (NodeId id : tree.internals_at(0)) tree.node(id).deletable = false;
  for (int l = std::max(min_parent_level, 0); l < L; ++l) {
    const double eps = level_tolerance(params.epsilon_ref, l + 1, L);
    for (NodeId id : tree.internals_at(l)) {
      const NodeId f = tree.node(id).first_son;
      bool small = true;
      for (int e = 0; e < 4 && small; ++e) {
        small = combine_detail(tree.node(f + e).detail, species, params.coarsen_norm) < eps;
      }
      for (int e = 0; e < 4; ++e) tree.node(f + e).deletable = small;
    }
  }
}

bool refine_leaf(GradedTree& tree, const NodeKey& key, int min_level) {
  const bool ok = tree.split_graded(key, min_level);
  for (NodeId id : tree.take_split_log()) predict_sons(tree, id);
  return ok;
}

AdaptStats update_tree(GradedTree& tree, const MRParams& params, int min_level) {
  const int L = tree.max_level();
  const int species = tree.species();
  const int parent_level = std::max(0, min_level - 1);
  project_tree(tree, parent_level);
  update_virtual_values(tree, min_level);
  compute_details(tree, parent_level);
  mark_deletable(tree, params, parent_level);

  AdaptStats stats;
  // Coarsen deletable groups one level per pass.
  std::vector<NodeKey> candidates;
  for (int l = std::max(min_level, 1); l < L; ++l) {
    for (NodeId id : tree.internals_at(l)) {
      const Node& p = tree.node(id);
      if (!p.deletable) continue;
      bool leaf_sons = true;
      for (int e = 0; e < 4 && leaf_sons; ++e) {
        leaf_sons = tree.node(p.first_son + e).status == NodeStatus::leaf;
      }
      if (leaf_sons) candidates.push_back(p.key);
    }
  }
  for (const NodeKey& k : candidates) {
    if (tree.coarsen(k) == CoarsenOutcome::coarsened) ++stats.coarsened;
  }

  // Significant leaves (own detail above tolerance under the refine reducer) and
  // the safety layer (any leaf of a non-deletable group) are split once.
  std::vector<NodeKey> to_split;
  for (int l = min_level; l < L; ++l) {
    const double eps = level_tolerance(params.epsilon_ref, l, L);
    for (NodeId id : tree.leaves_at(l)) {
      const Node& n = tree.node(id);
      const bool significant = l > 0 && combine_detail(n.detail, species, params.refine_norm) >= eps;
      if (significant || !n.deletable) to_split.push_back(n.key);
    }
  }
  for (const NodeKey& k : to_split) {
    const NodeId id = tree.find(k);
    if (id == kNoNode || tree.node(id).status != NodeStatus::leaf) continue;
    if (refine_leaf(tree, k, min_level)) {
      ++stats.refined;
    } else {
      ++stats.refused;
    }
  }

  tree.refresh_virtual_cousins();
  update_virtual_values(tree, min_level);
  return stats;
}

void build_initial_tree(GradedTree& tree, const CellAverageFn& averages, const MRParams& params) {
  const int L = tree.max_level();
  const int species = tree.species();
  std::deque<NodeKey> queue;
  for (int i = 0; i < tree.roots_x(); ++i) {
    for (int j = 0; j < tree.roots_y(); ++j) {
      const NodeKey k{i, j, 0};
      tree.node(tree.find(k)).avg = averages(k);
      queue.push_back(k);
    }
  }
  tree.take_split_log();
  Stencil st;
  while (!queue.empty()) {
    const NodeKey key = queue.front();
    queue.pop_front();
    const NodeId id = tree.find(key);
    if (id == kNoNode || tree.node(id).status != NodeStatus::leaf || key.level >= L) continue;
    tree.split_graded(key);
    for (NodeId pid : tree.take_split_log()) {
      const NodeKey pk = tree.node(pid).key;
      exact_stencil(tree, averages, pk, st);
      const SonValues pred = predict(st, species);
      const double eps = level_tolerance(params.epsilon_ref, pk.level + 1, L);
      const NodeId f = tree.node(pid).first_son;
      for (int e = 0; e < 4; ++e) {
        Node& son = tree.node(f + e);
        son.avg = averages(son.key);
        for (int s = 0; s < species; ++s) son.detail[s] = son.avg[s] - pred[e][s];
        if (pk.level + 1 < L && combine_detail(son.detail, species, params.refine_norm) > eps) {
          queue.push_back(son.key);
        }
      }
    }
  }

  // Safety layer around significant groups, with exact averages for new cells.
  project_tree(tree);
  tree.ensure_virtual_cousins();
  update_virtual_values(tree);
  compute_details(tree);
  mark_deletable(tree, params);
  std::vector<NodeKey> to_split;
  for (NodeId id : tree.leaf_ids()) {
    const Node& n = tree.node(id);
    if (!n.deletable && n.key.level < L) to_split.push_back(n.key);
  }
  for (const NodeKey& k : to_split) {
    const NodeId id = tree.find(k);
    if (id == kNoNode || tree.node(id).status != NodeStatus::leaf) continue;
    tree.split_graded(k);
    for (NodeId pid : tree.take_split_log()) {
      const NodeId f = tree.node(pid).first_son;
      for (int e = 0; e < 4; ++e) tree.node(f + e).avg = averages(tree.node(f + e).key);
    }
  }
  project_tree(tree);
  tree.ensure_virtual_cousins();
  update_virtual_values(tree);
}

Field project_field(const Field& fine) {
  Field coarse(fine.nx / 2, fine.ny / 2, fine.species);
  for (int s = 0; s < fine.species; ++s) {
    for (int j = 0; j < coarse.ny; ++j) {
      for (int i = 0; i < coarse.nx; ++i) {
        coarse.at(s, i, j) = 0.25 * (fine.at(s, 2 * i, 2 * j) + fine.at(s, 2 * i + 1, 2 * j) +
                                     fine.at(s, 2 * i, 2 * j + 1) +
                                     fine.at(s, 2 * i + 1, 2 * j + 1));
      }
    }
  }
  return coarse;
}

Field predict_field(const Field& coarse) {
  Field fine(2 * coarse.nx, 2 * coarse.ny, coarse.species);
  Stencil st{};
  for (int s = 0; s < coarse.species; ++s) {
    for (int j = 0; j < coarse.ny; ++j) {
      for (int i = 0; i < coarse.nx; ++i) {
        field_stencil(coarse, i, j, s, st);
        const Corrections c = corrections(st, s);
        const double w = st[2][2][s];
        fine.at(s, 2 * i, 2 * j) = w + c.qx + c.qy + c.qxy;
        fine.at(s, 2 * i + 1, 2 * j) = w - c.qx + c.qy - c.qxy;
        fine.at(s, 2 * i, 2 * j + 1) = w + c.qx - c.qy - c.qxy;
        fine.at(s, 2 * i + 1, 2 * j + 1) = w - c.qx - c.qy + c.qxy;
      }
    }
  }
  return fine;
}

Decomposition encode(const Field& finest, int levels) {
  if (levels < 0 || finest.nx % (1 << levels) != 0 || finest.ny % (1 << levels) != 0) {
    throw ConfigError("field size is not divisible by 2^levels");
  }
  std::vector<Field> pyramid(static_cast<std::size_t>(levels + 1));
  pyramid[levels] = finest;
  for (int l = levels; l > 0; --l) pyramid[l - 1] = project_field(pyramid[l]);
  Decomposition dec;
  dec.levels = levels;
  dec.coarse = pyramid[0];
  for (int l = 1; l <= levels; ++l) {
    Field d = predict_field(pyramid[l - 1]);
    for (std::size_t k = 0; k < d.data.size(); ++k) d.data[k] = pyramid[l].data[k] - d.data[k];
    dec.details.push_back(std::move(d));
  }
  return dec;
}

Field decode(const Decomposition& dec) {
  Field w = dec.coarse;
  for (int l = 1; l <= dec.levels; ++l) {
    Field fine = predict_field(w);
    const Field& d = dec.details[l - 1];
    for (std::size_t k = 0; k < fine.data.size(); ++k) fine.data[k] += d.data[k];
    w = std::move(fine);
  }
  return w;
}

void threshold(Decomposition& dec, double eps_ref, DetailNorm norm) {
  for (int l = 1; l <= dec.levels; ++l) {
    const double eps = level_tolerance(eps_ref, l, dec.levels);
    Field& d = dec.details[l - 1];
    for (int j = 0; j < d.ny; ++j) {
      for (int i = 0; i < d.nx; ++i) {
        if (combine_detail(d.state(i, j), d.species, norm) < eps) {
          for (int s = 0; s < d.species; ++s) d.at(s, i, j) = 0.0;
        }
      }
    }
  }
}

Field fill_finest(const GradedTree& tree) {
  const int L = tree.max_level();
  const int species = tree.species();
  std::vector<State> value(tree.pool_size());
  for (NodeId id : tree.leaf_ids()) value[id] = tree.node(id).avg;
  for (int l = L - 1; l >= 0; --l) {
    for (NodeId id : tree.internals_at(l)) {
      const NodeId f = tree.node(id).first_son;
      State w{};
      for (int s = 0; s < species; ++s) {
        w[s] = 0.25 * (value[f][s] + value[f + 1][s] + value[f + 2][s] + value[f + 3][s]);
      }
      value[id] = w;
    }
  }
  auto write = [&](Field& f, NodeId id) {
    const Node& n = tree.node(id);
    for (int s = 0; s < species; ++s) f.at(s, n.key.i, n.key.j) = value[id][s];
  };
  Field w(tree.cells_x(0), tree.cells_y(0), species);
  for (NodeId id : tree.leaves_at(0)) write(w, id);
  for (NodeId id : tree.internals_at(0)) write(w, id);
  for (int l = 1; l <= L; ++l) {
    w = predict_field(w);
    for (NodeId id : tree.leaves_at(l)) write(w, id);
    for (NodeId id : tree.internals_at(l)) write(w, id);
  }
  return w;
}

}  // namespace mrrd
