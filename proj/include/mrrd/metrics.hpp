#pragma once

#include <cstddef>
#include <limits>

#include "mrrd/field.hpp"
#include "mrrd/models.hpp"
#include "mrrd/quadtree.hpp"

namespace mrrd {

// eta = N_L / (N_L / 4^L + |leaves|), N_L the finest-grid cell count.
double compression_rate(const GradedTree& tree);
double compression_rate(std::size_t finest_cells, int max_level, std::size_t leaves);

// Per-species errors e_p = ((1/N) sum |a - b|^p)^(1/p) and e_inf = max |a - b|.
struct LpErrors {
  State e1{};
  State e2{};
  State einf{};
};

LpErrors lp_errors(const Field& a, const Field& b);
// Restriction of a finer field to `level` coarser cells by averaging.
Field restrict_to(const Field& fine, int levels_down);

// R = integral of f(u, v) over the domain (Model 2 only).
double reaction_rate(const GradedTree& tree, const ModelSpec& spec);
double reaction_rate(const Field& w, const ModelSpec& spec, double h);

inline constexpr double kNotAvailable = std::numeric_limits<double>::quiet_NaN();

// One row per snapshot.
struct MetricsRecord {
  double t = 0.0;
  double V = kNotAvailable;
  double eta = 0.0;
  std::size_t leaves = 0;
  int l_min = 0;
  LpErrors errors{{kNotAvailable, kNotAvailable},
                  {kNotAvailable, kNotAvailable},
                  {kNotAvailable, kNotAvailable}};
  double R_mr = kNotAvailable;
  double R_fv = kNotAvailable;
  double wall_mr = 0.0;
  double wall_fv = kNotAvailable;
};

}  // namespace mrrd
