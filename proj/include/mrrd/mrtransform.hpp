#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mrrd/field.hpp"
#include "mrrd/quadtree.hpp"

namespace mrrd {

// Third-order interpolation weights of the prediction operator.
inline constexpr double kGamma1 = -22.0 / 128.0;
inline constexpr double kGamma2 = 3.0 / 128.0;

// How per-species details collapse into one magnitude.
enum class DetailNorm { min_abs, max_abs, euclidean };

DetailNorm parse_detail_norm(const std::string& name);
const char* detail_norm_name(DetailNorm norm);

// Same-level 5x5 neighbourhood: s[a + 2][b + 2] holds cell (i + a, j + b).
using Stencil = std::array<std::array<State, 5>, 5>;
// Son values indexed e1 + 2 * e2.
using SonValues = std::array<State, 4>;

State project(const SonValues& sons, int species);
SonValues predict(const Stencil& s, int species);
// Sign variant w - (-1)^e1 Qx - (-1)^e2 Qy + (-1)^(e1 e2) Qxy. Kept only to show
// that it is not consistent: the cross term does not cancel in the son mean.
SonValues predict_sign_variant(const Stencil& s, int species);
double combine_detail(const State& d, int species, DetailNorm norm);
// eps_l = 2^(2 (l - L)) eps_ref.
double level_tolerance(double eps_ref, int level, int max_level);

struct MRParams {
  double epsilon_ref = 1e-3;
  DetailNorm coarsen_norm = DetailNorm::max_abs;
  DetailNorm refine_norm = DetailNorm::min_abs;
};

struct AdaptStats {
  int coarsened = 0;
  int refined = 0;
  int refused = 0;
};

// Tree-side operations. Stencil lookups mirror indices at the boundary and fall
// back to recursive prediction when a cell is absent.
void gather_stencil(const GradedTree& tree, const NodeKey& center, Stencil& out);
State value_at(const GradedTree& tree, int i, int j, int level);
// Internal averages from their sons, levels L-1 down to min_level.
void project_tree(GradedTree& tree, int min_level = 0);
// Virtual sons of leaves at levels >= min_parent_level, coarse to fine.
void update_virtual_values(GradedTree& tree, int min_parent_level = 0);
void predict_sons(GradedTree& tree, NodeId parent);
// Details of the sons of internal nodes at levels >= min_parent_level.
void compute_details(GradedTree& tree, int min_parent_level = 0);
// Brother groups whose largest detail stays below tolerance become deletable.
void mark_deletable(GradedTree& tree, const MRParams& params, int min_parent_level = 0);
// Graded split with predicted son values.
bool refine_leaf(GradedTree& tree, const NodeKey& key, int min_level = 0);
// One adaptation pass restricted to levels >= min_level: threshold, coarsen,
// refine significant leaves plus the safety layer, rebuild virtual leaves.
AdaptStats update_tree(GradedTree& tree, const MRParams& params, int min_level = 0);

// Cell averages of the initial data at any key (reflected keys are passed inside).
using CellAverageFn = std::function<State(const NodeKey&)>;
// Top-down construction from exact cell averages followed by grading and safety.
void build_initial_tree(GradedTree& tree, const CellAverageFn& averages, const MRParams& params);

// Uniform-grid transform between a finest field and its coarse values plus details.
struct Decomposition {
  int levels = 0;
  Field coarse;
  std::vector<Field> details;  // details[l - 1] lives on level l, l = 1..levels
};

Field project_field(const Field& fine);
Field predict_field(const Field& coarse);
Decomposition encode(const Field& finest, int levels);
Field decode(const Decomposition& dec);
// Zeroes details whose combined magnitude is below the level tolerance.
void threshold(Decomposition& dec, double eps_ref, DetailNorm norm);
// Leaf data carried to the finest level by repeated prediction.
Field fill_finest(const GradedTree& tree);

}  // namespace mrrd
