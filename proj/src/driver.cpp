#include "mrrd/driver.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include "mrrd/dense.hpp"
#include "mrrd/mrtransform.hpp"
#include "mrrd/timestepper.hpp"

namespace mrrd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

constexpr std::int64_t kCheckpointEvery = 64;

void describe_model(const RunConfig& cfg, std::map<std::string, std::string>& meta) {
  meta["model"] = "model" + std::to_string(model_family(cfg.model));
  if (const auto* m = std::get_if<Model2Spec>(&cfg.model)) {
    meta["kinetics"] = m->kinetics == Kinetics::arrhenius ? "arrhenius" : "schnakenberg";
    if (m->rho != 0.0) {
      meta["radiation_sign"] = m->radiation_sign == RadiationSign::loss ? "loss" : "gain";
      meta["radiation_note"] =
          "loss subtracts rho[(u+1/alpha-1)^4-(1/alpha-1)^4] from the temperature equation; "
          "gain adds it as printed";
    }
  }
  if (const auto* m = std::get_if<Model3Spec>(&cfg.model)) {
    meta["chemotaxis_sign"] = m->sign == ChemotaxisSign::attractive ? "attractive" : "printed";
    meta["chemotaxis_note"] =
        "printed discrete formula is +div(nu u grad v) and gives no aggregation (the homogeneous "
        "state is linearly stable for it); attractive -div(nu u grad v) is the default";
  }
}

}  // namespace

RunResult run(const RunConfig& cfg, const RunHooks& hooks) {
  validate(cfg);
  const int L = cfg.level;
  const int P = cfg.paired_dense ? effective_reference_level(cfg) : L;
  if (P < L) throw ConfigError("reference_level must not be below level");
  ensure_directory(cfg.out);
  {
    std::ofstream c(path_in(cfg.out, "config.txt"));
    c << to_text(cfg);
  }

  std::map<std::string, std::string> meta;
  meta["scenario"] = cfg.scenario;
  meta["level"] = std::to_string(L);
  meta["mode"] = stepping_mode_name(cfg.stepper.mode);
  meta["reference_level"] = cfg.paired_dense ? std::to_string(P) : "none";
  describe_model(cfg, meta);

  const auto init = make_initial_field(cfg.init, cfg.model, cfg.domain, P, cfg.roots_x, cfg.roots_y);
  double t0 = 0.0;
  std::optional<Field> start;
  if (cfg.paired_dense || cfg.presmooth_time > 0.0) start = init->sample(P);
  if (cfg.presmooth_time > 0.0) {
    DenseSolver pre(cfg.model, cfg.domain, P, cfg.roots_x, cfg.roots_y);
    pre.set_state(*start);
    pre.advance_to(cfg.presmooth_time, cfg.stepper.cfl, cfg.stepper.max_dt);
    start = pre.state();
    t0 = cfg.presmooth_time;
    meta["presmooth_steps"] = std::to_string(pre.steps());
  }
  std::unique_ptr<InitialField> smoothed;
  if (t0 > 0.0) {
    smoothed = make_gridded_field(restrict_to(*start, P - L), cfg.domain, L, cfg.roots_x, cfg.roots_y);
  }
  const InitialField& mr_init = smoothed ? *smoothed : *init;

  RunResult result;
  result.epsilon_ref = resolve_epsilon(cfg, mr_init);
  meta["epsilon_ref"] = fmt(result.epsilon_ref);
  if (cfg.C) meta["C"] = fmt(*cfg.C);
  meta["convergence_order"] = fmt(cfg.convergence_order);

  MRParams params = cfg.mr;
  params.epsilon_ref = result.epsilon_ref;
  Solver solver(cfg.model, cfg.domain, L, params, cfg.stepper, cfg.roots_x, cfg.roots_y);
  solver.initialize(mr_init);
  solver.set_time(t0);
  if (hooks.progress) solver.set_progress(hooks.progress);

  std::optional<DenseSolver> dense;
  if (cfg.paired_dense) {
    dense.emplace(cfg.model, cfg.domain, P, cfg.roots_x, cfg.roots_y);
    dense->set_state(*start);
    dense->set_time(t0);
  }

  MetricsCsv csv(path_in(cfg.out, "metrics.csv"));
  const bool has_rate = model_family(cfg.model) == 2;
  double wall_mr = 0.0;
  double wall_fv = 0.0;
  GradedTree last_good = solver.tree();
  double last_good_t = solver.time();
  std::int64_t since_checkpoint = 0;

  auto abort_run = [&](const std::string& what) -> RunAborted {
    const std::string stem = snapshot_stem(cfg.out, "last_good", last_good_t);
    write_snapshot(stem, last_good, cfg.model, last_good_t);
    meta["status"] = "aborted: " + what;
    meta["last_good"] = stem;
    meta["last_good_time"] = fmt(last_good_t);
    meta["steps"] = std::to_string(solver.steps());
    write_meta(path_in(cfg.out, "run_meta.txt"), meta);
    return RunAborted(what + " at t = " + fmt(solver.time()), stem);
  };

  for (double ts : snapshot_schedule(cfg)) {
    const double target = std::max(ts, t0);
    while (solver.time() < target) {
      if (since_checkpoint >= kCheckpointEvery) {
        last_good = solver.tree();
        last_good_t = solver.time();
        since_checkpoint = 0;
      }
      const auto c0 = Clock::now();
      try {
        solver.advance(target);
      } catch (const NumericalError& e) {
        throw abort_run(e.what());
      }
      wall_mr += seconds_since(c0);
      ++since_checkpoint;
    }
    if (dense) {
      const auto c0 = Clock::now();
      try {
        dense->advance_to(target, cfg.stepper.cfl, cfg.stepper.max_dt);
      } catch (const NumericalError& e) {
        throw abort_run(std::string("dense reference: ") + e.what());
      }
      wall_fv += seconds_since(c0);
    }

    MetricsRecord r;
    r.t = solver.time();
    const TreeStats st = tree_stats(solver.tree());
    r.eta = st.eta;
    r.leaves = st.leaves;
    r.l_min = st.l_min;
    r.wall_mr = wall_mr;
    if (has_rate) r.R_mr = reaction_rate(solver.tree(), cfg.model);
    const Field mr_fine = fill_finest(solver.tree());
    if (dense) {
      r.wall_fv = wall_fv;
      r.V = wall_mr > 0.0 ? wall_fv / wall_mr : kNotAvailable;
      const Field ref = restrict_to(dense->state(), P - L);
      r.errors = lp_errors(mr_fine, ref);
      if (species_count(cfg.model) == 1) {
        r.errors.e1[1] = r.errors.e2[1] = r.errors.einf[1] = kNotAvailable;
      }
      if (has_rate) r.R_fv = reaction_rate(dense->state(), cfg.model, dense->cell_size());
    }
    if (cfg.write_fields) {
      write_snapshot(snapshot_stem(cfg.out, "mr", r.t), solver.tree(), cfg.model, r.t);
      if (dense) {
        SnapshotHeader hdr;
        hdr.level = P;
        hdr.domain = cfg.domain;
        hdr.roots_x = cfg.roots_x;
        hdr.roots_y = cfg.roots_y;
        hdr.t = r.t;
        hdr.species = species_names(cfg.model);
        write_field(snapshot_stem(cfg.out, "fv", r.t), dense->state(), hdr);
      }
    }
    csv.append(r);
    result.records.push_back(r);
    if (hooks.on_record) hooks.on_record(r);
    if (ts == cfg.t_final) {
      result.final_mr = mr_fine;
      if (dense) result.final_fv = dense->state();
    }
  }

  result.steps = solver.steps();
  result.rejected_steps = solver.rejected_steps();
  result.leaf_updates = solver.leaf_updates();
  result.dense_steps = dense ? dense->steps() : 0;
  result.final_stats = tree_stats(solver.tree());
  meta["status"] = "ok";
  meta["steps"] = std::to_string(result.steps);
  meta["rejected_macro_steps"] = std::to_string(result.rejected_steps);
  meta["leaf_updates"] = std::to_string(result.leaf_updates);
  meta["wall_mr"] = fmt(wall_mr);
  if (dense) {
    meta["wall_fv"] = fmt(wall_fv);
    meta["dense_steps"] = std::to_string(result.dense_steps);
  }
  write_meta(path_in(cfg.out, "run_meta.txt"), meta);
  return result;
}

RunResult compare(RunConfig cfg, const RunHooks& hooks) {
  cfg.paired_dense = true;
  return run(cfg, hooks);
}

std::string format_compare_table(const RunConfig& cfg, const RunResult& r) {
  std::ostringstream os;
  const auto names = species_names(cfg.model);
  os << "t V eta species e1 e2 einf R_MR R_FV\n" << std::setprecision(6);
  for (const MetricsRecord& m : r.records) {
    for (std::size_t s = 0; s < names.size(); ++s) {
      os << m.t << " " << m.V << " " << m.eta << " " << names[s] << " " << m.errors.e1[s] << " "
         << m.errors.e2[s] << " " << m.errors.einf[s] << " " << m.R_mr << " " << m.R_fv << "\n";
    }
  }
  return os.str();
}

double fit_order(const std::vector<int>& levels, const std::vector<double>& errors) {
  if (levels.size() != errors.size() || levels.size() < 2) {
    throw ConfigError("an order fit needs at least two levels");
  }
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  const double n = static_cast<double>(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(errors[k] > 0.0)) throw NumericalError("an order fit needs positive errors");
    const double x = levels[k];
    const double y = std::log2(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult convergence(const RunConfig& cfg, int lo, int hi, int reference_level) {
  validate(cfg);
  if (lo < 1 || hi < lo || reference_level <= hi) {
    throw ConfigError("convergence needs 1 <= lo <= hi < reference level");
  }
  const auto init =
      make_initial_field(cfg.init, cfg.model, cfg.domain, reference_level, cfg.roots_x, cfg.roots_y);
  auto solve = [&](int level) {
    DenseSolver d(cfg.model, cfg.domain, level, cfg.roots_x, cfg.roots_y);
    d.set_state(init->sample(level));
    d.advance_to(cfg.t_final, cfg.stepper.cfl, cfg.stepper.max_dt);
    return d;
  };
  const DenseSolver ref = solve(reference_level);
  ConvergenceResult out;
  out.reference_level = reference_level;
  std::vector<int> levels;
  std::vector<double> e1;
  for (int l = lo; l <= hi; ++l) {
    const DenseSolver d = solve(l);
    ConvergencePoint p;
    p.level = l;
    p.errors = lp_errors(d.state(), restrict_to(ref.state(), reference_level - l));
    p.steps = d.steps();
    out.points.push_back(p);
    levels.push_back(l);
    e1.push_back(p.errors.e1[0]);
  }
  out.order = fit_order(levels, e1);
  return out;
}

std::string format_convergence(const ConvergenceResult& r) {
  std::ostringstream os;
  os << "reference_level " << r.reference_level << "\nlevel e1_u e2_u einf_u steps\n" << std::setprecision(6);
  for (const auto& p : r.points) {
    os << p.level << " " << p.errors.e1[0] << " " << p.errors.e2[0] << " " << p.errors.einf[0] << " "
       << p.steps << "\n";
  }
  os << "order " << r.order << "\n";
  return os.str();
}

}  // namespace mrrd
