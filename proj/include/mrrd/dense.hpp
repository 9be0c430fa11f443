#pragma once

#include <vector>

#include "mrrd/field.hpp"
#include "mrrd/models.hpp"

namespace mrrd {

// Uniform-grid finite-volume solver on the finest level with zero boundary flux.
// Uses the same flux and source kernels as the adaptive solver.
class DenseSolver {
 public:
  DenseSolver(const ModelSpec& spec, const Domain& domain, int level, int roots_x = 1,
              int roots_y = 1);

  void set_state(const Field& w);
  const Field& state() const { return state_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  double cell_size() const { return h_; }
  int level() const { return level_; }
  long long steps() const { return steps_; }

  // rate = divergence + source at every cell.
  void compute_rates(Field& rate) const;
  void step(double dt);
  // Largest stable step for the current state, capped by max_dt.
  double stable_dt(double cfl, double max_dt) const;
  // Steps until time t_end; the last step is shortened to land on it.
  void advance_to(double t_end, double cfl, double max_dt);

 private:
  template <class M>
  void rates_impl(const M& m, Field& rate) const;

  ModelSpec spec_;
  Domain domain_;
  int level_;
  int species_;
  double h_;
  Field state_;
  Field rate_;
  // Edge flux scratch reused across steps.
  mutable std::vector<State> fx_;
  mutable std::vector<State> fy_;
  double time_ = 0.0;
  long long steps_ = 0;
};

StateBox observe_field_box(const Field& f);

}  // namespace mrrd
