#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrrd/models.hpp"
#include "mrrd/mrtransform.hpp"
#include "mrrd/timestepper.hpp"

namespace mrrd {

// Everything needed to reproduce a run.
struct RunConfig {
  std::string scenario = "custom";
  ModelSpec model = Model1Spec{};
  InitialSpec init;
  Domain domain;
  int roots_x = 1;
  int roots_y = 1;
  int level = 6;
  // Exactly one of these is set.
  std::optional<double> C;
  std::optional<double> epsilon_ref;
  double convergence_order = kDefaultConvergenceOrder;
  MRParams mr;
  StepperOptions stepper;
  double t_final = 1.0;
  std::vector<double> snapshots;
  // Dense smoothing of random initial data before the adaptive run starts.
  double presmooth_time = 0.0;
  std::string out = "out";
  bool paired_dense = false;
  // Level of the dense reference; -1 means the run level.
  int reference_level = -1;
  bool write_fields = true;
};

RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Flat "key = value" text, '#' starts a comment. `scenario` is applied first,
// then `model`, then the remaining keys in file order.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// One key; throws ConfigError on unknown keys or malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
// Clears the other tolerance source when one is set.
void set_factor_C(RunConfig& cfg, double C);
void set_epsilon_ref(RunConfig& cfg, double eps);
void validate(const RunConfig& cfg);
// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& cfg);

int effective_reference_level(const RunConfig& cfg);
// Snapshot times sorted, deduplicated and clipped to [0, t_final] (t_final always included).
std::vector<double> snapshot_schedule(const RunConfig& cfg);
// eps_R from the config, or from C and the sup norms of the initial data.
double resolve_epsilon(const RunConfig& cfg, const InitialField& init);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace mrrd
