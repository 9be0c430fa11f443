#include "mrrd/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace mrrd {

double compression_rate(std::size_t finest_cells, int max_level, std::size_t leaves) {
  const double n = static_cast<double>(finest_cells);
  return n / (std::ldexp(n, -2 * max_level) + static_cast<double>(leaves));
}

double compression_rate(const GradedTree& tree) {
  const int L = tree.max_level();
  const auto cells = static_cast<std::size_t>(tree.cells_x(L)) * tree.cells_y(L);
  return compression_rate(cells, L, tree.leaf_count());
}

LpErrors lp_errors(const Field& a, const Field& b) {
  if (a.nx != b.nx || a.ny != b.ny || a.species != b.species) {
    throw ConfigError("error norms need fields of the same shape");
  }
  LpErrors e;
  const double n = static_cast<double>(a.cells());
  for (int s = 0; s < a.species; ++s) {
    const double* p = a.plane(s);
    const double* q = b.plane(s);
    double s1 = 0.0;
    double s2 = 0.0;
    double mx = 0.0;
    for (std::size_t k = 0; k < a.cells(); ++k) {
      const double d = std::abs(p[k] - q[k]);
      s1 += d;
      s2 += d * d;
      mx = std::max(mx, d);
    }
    e.e1[s] = s1 / n;
    e.e2[s] = std::sqrt(s2 / n);
    e.einf[s] = mx;
  }
  return e;
}

Field restrict_to(const Field& fine, int levels_down) {
  Field w = fine;
  for (int k = 0; k < levels_down; ++k) {
    if (w.nx % 2 != 0 || w.ny % 2 != 0) throw ConfigError("field cannot be coarsened further");
    Field c(w.nx / 2, w.ny / 2, w.species);
    for (int s = 0; s < w.species; ++s) {
      for (int j = 0; j < c.ny; ++j) {
        for (int i = 0; i < c.nx; ++i) {
          c.at(s, i, j) = 0.25 * (w.at(s, 2 * i, 2 * j) + w.at(s, 2 * i + 1, 2 * j) +
                                  w.at(s, 2 * i, 2 * j + 1) + w.at(s, 2 * i + 1, 2 * j + 1));
        }
      }
    }
    w = std::move(c);
  }
  return w;
}

namespace {

const Model2Spec& require_model2(const ModelSpec& spec) {
  const auto* m = std::get_if<Model2Spec>(&spec);
  if (!m) throw ConfigError("the reaction rate is defined for the two-species combustion model");
  return *m;
}

}  // namespace

double reaction_rate(const GradedTree& tree, const ModelSpec& spec) {
  require_model2(spec);
  double r = 0.0;
  for (NodeId id : tree.leaf_ids()) {
    const Node& n = tree.node(id);
    const double h = tree.cell_size(n.key.level);
    r += eval_kinetics(spec, n.avg[0], n.avg[1], 0.0, 0.0)[0] * h * h;
  }
  return r;
}

double reaction_rate(const Field& w, const ModelSpec& spec, double h) {
  require_model2(spec);
  double r = 0.0;
  for (int j = 0; j < w.ny; ++j) {
    for (int i = 0; i < w.nx; ++i) r += eval_kinetics(spec, w.at(0, i, j), w.at(1, i, j), 0, 0)[0];
  }
  return r * h * h;
}

}  // namespace mrrd
