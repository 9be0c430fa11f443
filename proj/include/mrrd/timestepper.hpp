#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mrrd/models.hpp"
#include "mrrd/mrtransform.hpp"
#include "mrrd/quadtree.hpp"

namespace mrrd {

enum class SteppingMode { global, local };

SteppingMode parse_stepping_mode(const std::string& name);
const char* stepping_mode_name(SteppingMode mode);

// Intermediate steps k = 1..2^L of one macro step. A level-l leaf starts a span
// of 2^(L-l) fine steps at k = 1 (mod 2^(L-l)) and finishes it at k = 0 (mod 2^(L-l)).
struct LtsSchedule {
  int L = 0;

  std::int64_t substeps() const { return std::int64_t{1} << L; }
  std::int64_t span(int level) const { return std::int64_t{1} << (L - level); }
  bool is_active(int level, std::int64_t k) const { return (k - 1) % span(level) == 0; }
  bool finishes(int level, std::int64_t k) const { return k % span(level) == 0; }
  // Coarsest level starting a span at step k.
  int l_tilde(std::int64_t k) const;
  // Partial adaptation happens before odd steps after the first.
  bool adapts(std::int64_t k) const { return k > 1 && k % 2 == 1; }
};

struct StepperOptions {
  SteppingMode mode = SteppingMode::global;
  double cfl = 0.9;
  double max_dt = 1.0;
  double box_inflation = 0.1;
  bool adapt = true;
};

struct Progress {
  double t = 0.0;
  double dt = 0.0;
  std::size_t leaves = 0;
  int l_min = 0;
};

using ProgressFn = std::function<void(const Progress&)>;

// Adaptive solver: tree, model and time integration.
class Solver {
 public:
  Solver(const ModelSpec& spec, const Domain& domain, int max_level, const MRParams& params,
         const StepperOptions& options, int roots_x = 1, int roots_y = 1);

  void initialize(const InitialField& init);
  // Starts from finest-level averages (e.g. data smoothed by the dense solver).
  void initialize(const Field& finest);

  const GradedTree& tree() const { return tree_; }
  GradedTree& tree() { return tree_; }
  const ModelSpec& spec() const { return spec_; }
  const MRParams& params() const { return params_; }
  const StepperOptions& options() const { return options_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  std::int64_t steps() const { return steps_; }
  std::int64_t fine_clock() const { return fine_clock_; }
  // Leaf-rate evaluations so far, a work measure independent of timing.
  std::int64_t leaf_updates() const { return leaf_updates_; }
  void set_progress(ProgressFn fn) { progress_ = std::move(fn); }

  // Leaf state box; throws NumericalError on non-finite values.
  StateBox leaf_box() const;
  CflTerms cfl_now() const;
  double stable_dt_global() const;
  // Per level: global diffusion term, reaction term from that level's leaves.
  std::vector<CflTerms> level_cfl_terms() const;
  // Finest-level step for local stepping, stable on every level with leaves.
  double stable_dt_fine() const;

  void step_global(double dt);
  // One macro step of 2^L intermediate steps. Returns the fine step actually
  // used, which is halved while the end state breaks the stability bound.
  double step_local(double dt_fine);
  // Macro steps redone with a halved step.
  std::int64_t rejected_steps() const { return rejected_; }
  // One step in the configured mode, shortened to stop at t_cap. Returns the time advanced.
  double advance(double t_cap);
  void advance_to(double t_end);
  // All leaves carry the current fine clock.
  bool synchronized() const;

 private:
  void refresh_values(int min_level);
  void check_local_step(double dt_fine, double limit) const;
  void macro_step(double dt_fine);

  static constexpr double kRejectLimit = 1.0;
  static constexpr int kMaxRetries = 12;

  ModelSpec spec_;
  MRParams params_;
  StepperOptions options_;
  GradedTree tree_;
  double time_ = 0.0;
  std::int64_t steps_ = 0;
  std::int64_t fine_clock_ = 0;
  std::int64_t leaf_updates_ = 0;
  std::int64_t rejected_ = 0;
  ProgressFn progress_;
};

}  // namespace mrrd
