#include "mrrd/timestepper.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "mrrd/fvcore.hpp"

namespace mrrd {

SteppingMode parse_stepping_mode(const std::string& name) {
  if (name == "global") return SteppingMode::global;
  if (name == "local") return SteppingMode::local;
  throw ConfigError("unknown stepping mode '" + name + "' (global, local)");
}

const char* stepping_mode_name(SteppingMode mode) {
  return mode == SteppingMode::global ? "global" : "local";
}

int LtsSchedule::l_tilde(std::int64_t k) const {
  if (k <= 1) return 0;
  const int tz = std::countr_zero(static_cast<std::uint64_t>(k - 1));
  return std::max(0, L - tz);
}

Solver::Solver(const ModelSpec& spec, const Domain& domain, int max_level, const MRParams& params,
               const StepperOptions& options, int roots_x, int roots_y)
    : spec_(spec),
      params_(params),
      options_(options),
      tree_(domain, max_level, species_count(spec), roots_x, roots_y) {
  validate(spec);
  if (!(options.cfl > 0.0) || options.cfl > 1.0) throw ConfigError("cfl must lie in (0, 1]");
  if (!(options.max_dt > 0.0)) throw ConfigError("max_dt must be positive");
  if (!(params.epsilon_ref >= 0.0)) throw ConfigError("reference tolerance must be non-negative");
}

void Solver::initialize(const InitialField& init) {
  tree_ = GradedTree(tree_.domain(), tree_.max_level(), tree_.species(), tree_.roots_x(),
                     tree_.roots_y());
  build_initial_tree(tree_, [&](const NodeKey& k) { return init.average(k); }, params_);
  fine_clock_ = 0;
}

void Solver::initialize(const Field& finest) {
  const auto init = make_gridded_field(finest, tree_.domain(), tree_.max_level(), tree_.roots_x(),
                                       tree_.roots_y());
  initialize(*init);
}

StateBox Solver::leaf_box() const {
  const int species = tree_.species();
  StateBox box;
  box.species = species;
  bool first = true;
  for (NodeId id : tree_.leaf_ids()) {
    const State& w = tree_.node(id).avg;
    for (int s = 0; s < species; ++s) {
      if (!std::isfinite(w[s])) throw NumericalError("solution is not finite");
      if (first) {
        box.lo[s] = w[s];
        box.hi[s] = w[s];
      } else {
        box.lo[s] = std::min(box.lo[s], w[s]);
        box.hi[s] = std::max(box.hi[s], w[s]);
      }
    }
    first = false;
  }
  return box;
}

CflTerms Solver::cfl_now() const {
  const StateBox box = inflate(leaf_box(), options_.box_inflation);
  const SupNorms n = cfl_norms(spec_, box, tree_.domain(), options_.box_inflation, [&](auto&& visit) {
    for (NodeId id : tree_.leaf_ids()) visit(tree_.node(id).avg[0], tree_.node(id).avg[1]);
  });
  return cfl_terms(spec_, n);
}

double Solver::stable_dt_global() const {
  return compute_dt(cfl_now(), tree_.cell_size(tree_.max_level()), options_.cfl, options_.max_dt);
}

std::vector<CflTerms> Solver::level_cfl_terms() const {
  const CflTerms global = cfl_now();
  const int L = tree_.max_level();
  std::vector<CflTerms> out(static_cast<std::size_t>(L + 1), global);
  for (int l = 0; l <= L; ++l) {
    const auto& ids = tree_.leaves_at(l);
    if (ids.empty()) continue;
    StateBox box;
    box.species = tree_.species();
    for (int s = 0; s < box.species; ++s) {
      box.lo[s] = tree_.node(ids.front()).avg[s];
      box.hi[s] = box.lo[s];
    }
    for (NodeId id : ids) {
      for (int s = 0; s < box.species; ++s) {
        box.lo[s] = std::min(box.lo[s], tree_.node(id).avg[s]);
        box.hi[s] = std::max(box.hi[s], tree_.node(id).avg[s]);
      }
    }
    const SupNorms n = cfl_norms(spec_, inflate(box, options_.box_inflation), tree_.domain(),
                                 options_.box_inflation, [&](auto&& visit) {
                                   for (NodeId id : ids) visit(tree_.node(id).avg[0], tree_.node(id).avg[1]);
                                 });
    out[static_cast<std::size_t>(l)].reaction = cfl_terms(spec_, n).reaction;
  }
  return out;
}

double Solver::stable_dt_fine() const {
  const std::vector<CflTerms> terms = level_cfl_terms();
  const int L = tree_.max_level();
  double dt = options_.max_dt;
  for (int l = tree_.min_leaf_level(); l <= L; ++l) {
    if (tree_.leaves_at(l).empty()) continue;
    const double dl = compute_dt(terms[static_cast<std::size_t>(l)], tree_.cell_size(l), options_.cfl,
                                 options_.max_dt);
    dt = std::min(dt, std::ldexp(dl, l - L));
  }
  return dt;
}

void Solver::refresh_values(int min_level) {
  project_tree(tree_, min_level);
  update_virtual_values(tree_, min_level);
}

void Solver::step_global(double dt) {
  if (!options_.adapt) refresh_values(0);
  march(spec_, tree_, dt);
  const std::int64_t span = std::int64_t{1} << tree_.max_level();
  for (NodeId id : tree_.leaf_ids()) tree_.node(id).clock += span;
  leaf_updates_ += static_cast<std::int64_t>(tree_.leaf_count());
  fine_clock_ += span;
  time_ += dt;
  ++steps_;
  if (options_.adapt) update_tree(tree_, params_);
}

void Solver::check_local_step(double dt_fine, double limit) const {
  const std::vector<CflTerms> terms = level_cfl_terms();
  const int L = tree_.max_level();
  for (int l = tree_.min_leaf_level(); l <= L; ++l) {
    if (tree_.leaves_at(l).empty()) continue;
    const CflTerms& t = terms[static_cast<std::size_t>(l)];
    if (cfl_lhs(t, tree_.cell_size(l), std::ldexp(dt_fine, L - l)) > limit + 1e-12) {
      throw NumericalError("local time step violates the stability bound on level " +
                           std::to_string(l));
    }
  }
}

void Solver::macro_step(double dt_fine) {
  const int L = tree_.max_level();
  const LtsSchedule sched{L};
  std::vector<char> fresh(static_cast<std::size_t>(L + 1));
  std::vector<int> levels;
  const std::int64_t base = fine_clock_;
  for (std::int64_t k = 1; k <= sched.substeps(); ++k) {
    const int lt = sched.l_tilde(k);
    if (options_.adapt && sched.adapts(k)) {
      update_tree(tree_, params_, lt);
    } else {
      refresh_values(lt);
    }
    levels.clear();
    for (int l = 0; l <= L; ++l) {
      fresh[static_cast<std::size_t>(l)] = sched.is_active(l, k);
      if (l >= lt && !tree_.leaves_at(l).empty()) levels.push_back(l);
    }
    compute_rates(spec_, tree_, levels, fresh);
    // Every level whose span ends here applies the rate from its span start.
    for (int l = 0; l <= L; ++l) {
      if (!sched.finishes(l, k)) continue;
      const double dt_l = std::ldexp(dt_fine, L - l);
      const std::int64_t span = sched.span(l);
      for (NodeId id : tree_.leaves_at(l)) {
        Node& n = tree_.node(id);
        for (int s = 0; s < tree_.species(); ++s) n.avg[s] += dt_l * n.rate[s];
        n.clock += span;
      }
    }
    for (int l : levels) leaf_updates_ += static_cast<std::int64_t>(tree_.leaves_at(l).size());
  }
  fine_clock_ = base + sched.substeps();
  if (!synchronized()) throw InternalError("leaves out of step after a macro step");
}

double Solver::step_local(double dt_fine) {
  check_local_step(dt_fine, options_.cfl);
  // The step size is frozen over 2^L fine steps, so a macro step that ends in
  // a state violating the hard bound (ignition, say) is redone with half the step.
  const GradedTree saved = tree_;
  const std::int64_t clock = fine_clock_;
  for (int attempt = 0;; ++attempt) {
    bool ok = true;
    try {
      macro_step(dt_fine);
      check_local_step(dt_fine, kRejectLimit);
    } catch (const NumericalError&) {
      ok = false;
    }
    if (ok) break;
    if (attempt == kMaxRetries) throw NumericalError("local stepping failed after repeated step halving");
    tree_ = saved;
    fine_clock_ = clock;
    dt_fine *= 0.5;
    ++rejected_;
  }
  time_ += std::ldexp(dt_fine, tree_.max_level());
  ++steps_;
  if (options_.adapt) update_tree(tree_, params_);
  return dt_fine;
}

bool Solver::synchronized() const {
  for (NodeId id : tree_.leaf_ids()) {
    if (tree_.node(id).clock != fine_clock_) return false;
  }
  return true;
}

double Solver::advance(double t_cap) {
  const double remaining = t_cap - time_;
  if (!(remaining > 0.0)) return 0.0;
  const double t0 = time_;
  double dt;
  if (options_.mode == SteppingMode::global) {
    dt = std::min(stable_dt_global(), remaining);
    step_global(dt);
  } else {
    const int L = tree_.max_level();
    dt = std::ldexp(step_local(std::min(stable_dt_fine(), std::ldexp(remaining, -L))), L);
  }
  // Land exactly on the cap despite rounding.
  if (t_cap - time_ < 1e-12 * std::max(1.0, std::abs(t_cap))) time_ = t_cap;
  if (progress_) {
    progress_(Progress{time_, time_ - t0, tree_.leaf_count(), tree_.min_leaf_level()});
  }
  return time_ - t0;
}

void Solver::advance_to(double t_end) {
  while (time_ < t_end) advance(t_end);
}

}  // namespace mrrd
