#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mrrd/config.hpp"
#include "mrrd/io.hpp"
#include "mrrd/metrics.hpp"

namespace mrrd {

// Thrown when the state becomes non-finite; the last good state was written.
class RunAborted : public NumericalError {
 public:
  RunAborted(const std::string& what, std::string last_good)
      : NumericalError(what), last_good_(std::move(last_good)) {}
  const std::string& last_good() const { return last_good_; }

 private:
  std::string last_good_;
};

struct RunHooks {
  ProgressFn progress;
  std::function<void(const MetricsRecord&)> on_record;
};

struct RunResult {
  std::vector<MetricsRecord> records;
  double epsilon_ref = 0.0;
  std::int64_t steps = 0;
  std::int64_t rejected_steps = 0;
  std::int64_t leaf_updates = 0;
  std::int64_t dense_steps = 0;
  TreeStats final_stats;
  // Finest-level fields at t_final (dense one only with a paired run).
  Field final_mr;
  Field final_fv;
};

// Advances to t_final writing snapshots, metrics.csv, config.txt and run_meta.txt
// into cfg.out. With paired_dense a uniform run is advanced alongside.
RunResult run(const RunConfig& cfg, const RunHooks& hooks = {});

// Paired run; rows shaped like (t, V, eta, species, e1, e2, einf, R_MR, R_FV).
RunResult compare(RunConfig cfg, const RunHooks& hooks = {});
std::string format_compare_table(const RunConfig& cfg, const RunResult& r);

struct ConvergencePoint {
  int level = 0;
  LpErrors errors;
  long long steps = 0;
};

struct ConvergenceResult {
  int reference_level = 0;
  std::vector<ConvergencePoint> points;
  // Observed order from a least-squares fit of log2 e1(u) against level.
  double order = 0.0;
};

// Dense runs on levels lo..hi to t_final against a dense run on the reference level.
ConvergenceResult convergence(const RunConfig& cfg, int lo, int hi, int reference_level);
double fit_order(const std::vector<int>& levels, const std::vector<double>& errors);
std::string format_convergence(const ConvergenceResult& r);

}  // namespace mrrd
