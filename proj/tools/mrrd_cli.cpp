#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrrd/mrrd.h"

namespace {

struct Overrides {
  std::string config;
  std::string scenario;
  std::string mode;
  std::optional<int> level;
  std::optional<double> cfl;
  std::optional<long long> seed;
  std::string out;
  std::optional<int> reference_level;
  std::string snapshots;
  std::optional<double> t_final;
  std::optional<double> C;
  std::optional<double> epsilon;
  std::vector<std::string> settings;
  bool quiet = false;
};

// Thrown to leave main with a status code after printing the message.
struct Exit {
  int code;
};

using ConfigPtr = std::unique_ptr<mrrd_config, decltype(&mrrd_config_free)>;
using TextPtr = std::unique_ptr<mrrd_text, decltype(&mrrd_text_free)>;

void check(mrrd_status s) {
  if (s == MRRD_OK) return;
  std::fprintf(stderr, "error: %s\n", mrrd_last_error());
  throw Exit{static_cast<int>(s)};
}

void print(mrrd_text* t) {
  TextPtr owned(t, &mrrd_text_free);
  std::fputs(mrrd_text_data(owned.get()), stdout);
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  auto* cfg = cmd->add_option("--config", o.config, "Configuration file (key = value lines)");
  cmd->add_option("--scenario", o.scenario, "Built-in scenario name")->excludes(cfg);
  cmd->add_option("--mode", o.mode, "Time stepping: global or local");
  cmd->add_option("--level", o.level, "Finest level L");
  cmd->add_option("--cfl", o.cfl, "CFL number in (0, 1]");
  cmd->add_option("--seed", o.seed, "Seed of random initial data");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--snapshots", o.snapshots, "Comma-separated snapshot times");
  cmd->add_option("--t-final", o.t_final, "Final time");
  auto* c = cmd->add_option("--C", o.C, "Tolerance factor C");
  cmd->add_option("--epsilon", o.epsilon, "Reference tolerance eps_R")->excludes(c);
  cmd->add_option("--set", o.settings, "Extra key=value setting (repeatable)");
  cmd->add_flag("--quiet", o.quiet, "No progress output");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ConfigPtr build_config(const Overrides& o) {
  mrrd_config* raw = nullptr;
  if (!o.config.empty()) {
    check(mrrd_config_load(o.config.c_str(), &raw));
  } else {
    check(mrrd_config_preset(o.scenario.empty() ? "example1" : o.scenario.c_str(), &raw));
  }
  ConfigPtr cfg(raw, &mrrd_config_free);
  auto set = [&](const std::string& k, const std::string& v) { check(mrrd_config_set(cfg.get(), k.c_str(), v.c_str())); };
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      throw Exit{MRRD_ERR_CONFIG};
    }
    set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.mode.empty()) set("mode", o.mode);
  if (o.level) set("level", std::to_string(*o.level));
  if (o.cfl) set("cfl", fmt(*o.cfl));
  if (o.seed) set("seed", std::to_string(*o.seed));
  if (!o.out.empty()) set("out", o.out);
  if (o.reference_level) set("reference_level", std::to_string(*o.reference_level));
  if (o.t_final) {
    set("t_final", fmt(*o.t_final));
    // Scenario snapshot times may lie beyond a shortened run.
    if (o.snapshots.empty()) set("snapshots", "");
  }
  if (!o.snapshots.empty()) set("snapshots", o.snapshots);
  if (o.C) set("C", fmt(*o.C));
  if (o.epsilon) set("epsilon_ref", fmt(*o.epsilon));
  check(mrrd_config_check(cfg.get()));
  return cfg;
}

void on_progress(double t, double dt, size_t leaves, void*) {
  std::fprintf(stderr, "\rt = %-12.6g dt = %-12.4g leaves = %-9zu", t, dt, leaves);
}

void on_record(const mrrd_record* r, void* user) {
  if (*static_cast<bool*>(user)) std::fputc('\n', stderr);
  std::printf("snapshot t = %g eta = %.4g leaves = %zu l_min = %d", r->t, r->eta, r->leaves, r->l_min);
  if (r->e1[0] == r->e1[0]) std::printf(" e1(u) = %.4e", r->e1[0]);
  if (r->R_mr == r->R_mr) std::printf(" R = %.6g", r->R_mr);
  std::printf("\n");
  std::fflush(stdout);
}

int run_command(const Overrides& o, bool paired, bool table) {
  ConfigPtr cfg = build_config(o);
  bool show = !o.quiet;
  mrrd_callbacks cb{show ? &on_progress : nullptr, &on_record, &show};
  mrrd_result* raw = nullptr;
  const mrrd_status s = mrrd_run(cfg.get(), paired || o.reference_level.has_value(), &cb, &raw);
  if (show) std::fputc('\n', stderr);
  check(s);
  std::unique_ptr<mrrd_result, decltype(&mrrd_result_free)> res(raw, &mrrd_result_free);
  mrrd_text* text = nullptr;
  check(mrrd_result_summary(res.get(), &text));
  print(text);
  if (table) {
    check(mrrd_result_compare_table(res.get(), &text));
    print(text);
  }
  return 0;
}

std::pair<int, int> parse_levels(std::string s) {
  if (const auto dots = s.find(".."); dots != std::string::npos) s.replace(dots, 2, ":");
  const auto sep = s.find_first_of(":-,");
  try {
    if (sep == std::string::npos) {
      const int l = std::stoi(s);
      return {l, l};
    }
    return {std::stoi(s.substr(0, sep)), std::stoi(s.substr(sep + 1))};
  } catch (const std::exception&) {
    std::fprintf(stderr, "error: --levels expects lo..hi, got '%s'\n", s.c_str());
    throw Exit{MRRD_ERR_CONFIG};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive multiresolution solver for reaction-diffusion systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mrrd_version()));

  Overrides run_o;
  auto* run = app.add_subcommand("run", "Adaptive run writing snapshots and metrics");
  add_overrides(run, run_o);

  Overrides cmp_o;
  auto* cmp = app.add_subcommand("compare", "Adaptive run paired with a dense reference");
  add_overrides(cmp, cmp_o);
  cmp->add_option("--reference-level", cmp_o.reference_level, "Level of the dense reference");
  run->add_option("--reference-level", run_o.reference_level, "Pair with a dense reference on this level");

  Overrides conv_o;
  std::string levels = "4..7";
  auto* conv = app.add_subcommand("convergence", "Dense convergence study against a fine reference");
  add_overrides(conv, conv_o);
  conv->add_option("--levels", levels, "Level range lo..hi")->capture_default_str();
  conv->add_option("--reference-level", conv_o.reference_level, "Reference level (default hi + 2)");

  std::string snapshot;
  auto* inspect = app.add_subcommand("inspect", "Leaf statistics of a snapshot");
  inspect->add_option("snapshot", snapshot, "Snapshot stem or .leaves file")->required();

  app.add_subcommand("scenarios", "List built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : MRRD_ERR_CONFIG;
  }

  try {
    if (*run) return run_command(run_o, false, false);
    if (*cmp) return run_command(cmp_o, true, true);
    if (*conv) {
      const auto [lo, hi] = parse_levels(levels);
      const int ref = conv_o.reference_level.value_or(hi + 2);
      Overrides o = conv_o;
      o.reference_level.reset();
      ConfigPtr cfg = build_config(o);
      double order = 0.0;
      mrrd_text* text = nullptr;
      check(mrrd_convergence(cfg.get(), lo, hi, ref, &order, &text));
      print(text);
      return 0;
    }
    if (*inspect) {
      mrrd_text* text = nullptr;
      check(mrrd_inspect(snapshot.c_str(), nullptr, &text));
      print(text);
      return 0;
    }
    mrrd_text* text = nullptr;
    check(mrrd_preset_names(&text));
    print(text);
    return 0;
  } catch (const Exit& e) {
    return e.code;
  }
}
