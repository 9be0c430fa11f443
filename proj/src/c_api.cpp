#include "mrrd/mrrd.h"

#include <filesystem>
#include <functional>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "mrrd/config.hpp"
#include "mrrd/driver.hpp"
#include "mrrd/io.hpp"

struct mrrd_config {
  mrrd::RunConfig cfg;
};

struct mrrd_result {
  mrrd::RunConfig cfg;
  mrrd::RunResult result;
};

struct mrrd_text {
  std::string s;
};

namespace {

thread_local std::string last_error;

mrrd_status fail(mrrd_status code, const std::string& what) {
  last_error = what;
  return code;
}

// Maps exceptions to status codes.
template <class F>
mrrd_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return MRRD_OK;
  } catch (const mrrd::ConfigError& e) {
    return fail(MRRD_ERR_CONFIG, e.what());
  } catch (const mrrd::NumericalError& e) {
    return fail(MRRD_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MRRD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MRRD_ERR_INTERNAL, e.what());
  }
}

mrrd_status emit(std::string s, mrrd_text** out) {
  if (!out) return fail(MRRD_ERR_ARGUMENT, "null output pointer");
  *out = new mrrd_text{std::move(s)};
  return MRRD_OK;
}

mrrd_record to_c(const mrrd::MetricsRecord& r) {
  mrrd_record c{};
  c.t = r.t;
  c.V = r.V;
  c.eta = r.eta;
  c.leaves = r.leaves;
  c.l_min = r.l_min;
  for (int s = 0; s < 2; ++s) {
    c.e1[s] = r.errors.e1[s];
    c.e2[s] = r.errors.e2[s];
    c.einf[s] = r.errors.einf[s];
  }
  c.R_mr = r.R_mr;
  c.R_fv = r.R_fv;
  c.wall_mr = r.wall_mr;
  c.wall_fv = r.wall_fv;
  return c;
}

mrrd_status make_config(mrrd_config** out, const std::function<mrrd::RunConfig()>& make) {
  if (!out) return fail(MRRD_ERR_ARGUMENT, "null output pointer");
  *out = nullptr;
  return guarded([&] { *out = new mrrd_config{make()}; });
}

}  // namespace

extern "C" {

const char* mrrd_last_error(void) { return last_error.c_str(); }

const char* mrrd_version(void) { return "1.0.0"; }

const char* mrrd_text_data(const mrrd_text* text) { return text ? text->s.c_str() : ""; }

void mrrd_text_free(mrrd_text* text) { delete text; }

mrrd_status mrrd_preset_names(mrrd_text** out) {
  std::string s;
  for (const auto& n : mrrd::preset_names()) s += n + "\n";
  return emit(std::move(s), out);
}

mrrd_status mrrd_config_preset(const char* name, mrrd_config** out) {
  if (!name) return fail(MRRD_ERR_ARGUMENT, "null scenario name");
  return make_config(out, [&] { return mrrd::preset(name); });
}

mrrd_status mrrd_config_parse(const char* text, mrrd_config** out) {
  if (!text) return fail(MRRD_ERR_ARGUMENT, "null config text");
  return make_config(out, [&] { return mrrd::parse_config(text); });
}

mrrd_status mrrd_config_load(const char* path, mrrd_config** out) {
  if (!path) return fail(MRRD_ERR_ARGUMENT, "null config path");
  return make_config(out, [&] { return mrrd::load_config(path); });
}

mrrd_status mrrd_config_set(mrrd_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(MRRD_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    // Work on a copy so a rejected value leaves the config unchanged.
    mrrd::RunConfig next = cfg->cfg;
    const std::string k = key;
    mrrd::apply_setting(next, k, value);
    // An override of one tolerance source replaces the other.
    if (k == "C") next.epsilon_ref.reset();
    if (k == "epsilon_ref") next.C.reset();
    cfg->cfg = std::move(next);
  });
}

mrrd_status mrrd_config_check(const mrrd_config* cfg) {
  if (!cfg) return fail(MRRD_ERR_ARGUMENT, "null config");
  return guarded([&] { mrrd::validate(cfg->cfg); });
}

mrrd_status mrrd_config_to_text(const mrrd_config* cfg, mrrd_text** out) {
  if (!cfg) return fail(MRRD_ERR_ARGUMENT, "null config");
  return emit(mrrd::to_text(cfg->cfg), out);
}

void mrrd_config_free(mrrd_config* cfg) { delete cfg; }

mrrd_status mrrd_run(const mrrd_config* cfg, int paired, const mrrd_callbacks* callbacks, mrrd_result** out) {
  if (!cfg || !out) return fail(MRRD_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    mrrd::RunConfig c = cfg->cfg;
    if (paired) c.paired_dense = true;
    mrrd::RunHooks hooks;
    if (callbacks && callbacks->progress) {
      hooks.progress = [callbacks](const mrrd::Progress& p) {
        callbacks->progress(p.t, p.dt, p.leaves, callbacks->user);
      };
    }
    if (callbacks && callbacks->record) {
      hooks.on_record = [callbacks](const mrrd::MetricsRecord& r) {
        const mrrd_record rec = to_c(r);
        callbacks->record(&rec, callbacks->user);
      };
    }
    auto res = std::make_unique<mrrd_result>();
    res->result = mrrd::run(c, hooks);
    res->cfg = std::move(c);
    *out = res.release();
  });
}

size_t mrrd_result_record_count(const mrrd_result* result) { return result ? result->result.records.size() : 0; }

mrrd_status mrrd_result_record(const mrrd_result* result, size_t index, mrrd_record* out) {
  if (!result || !out) return fail(MRRD_ERR_ARGUMENT, "null argument");
  if (index >= result->result.records.size()) return fail(MRRD_ERR_ARGUMENT, "record index out of range");
  *out = to_c(result->result.records[index]);
  return MRRD_OK;
}

double mrrd_result_epsilon(const mrrd_result* result) { return result ? result->result.epsilon_ref : 0.0; }

long long mrrd_result_steps(const mrrd_result* result) { return result ? result->result.steps : 0; }

mrrd_status mrrd_result_summary(const mrrd_result* result, mrrd_text** out) {
  if (!result) return fail(MRRD_ERR_ARGUMENT, "null result");
  const auto& r = result->result;
  std::ostringstream os;
  os << "scenario " << result->cfg.scenario << "\nepsilon_ref " << r.epsilon_ref << "\nsteps " << r.steps
     << "\nrejected_macro_steps " << r.rejected_steps << "\nleaf_updates " << r.leaf_updates << "\n";
  if (result->cfg.paired_dense) os << "dense_steps " << r.dense_steps << "\n";
  if (!r.records.empty()) {
    const auto& last = r.records.back();
    os << "t " << last.t << "\nwall_mr " << last.wall_mr << "\n";
    if (result->cfg.paired_dense) os << "wall_fv " << last.wall_fv << "\nV " << last.V << "\n";
  }
  os << mrrd::format_stats(r.final_stats) << "output " << result->cfg.out << "\n";
  return emit(os.str(), out);
}

mrrd_status mrrd_result_compare_table(const mrrd_result* result, mrrd_text** out) {
  if (!result) return fail(MRRD_ERR_ARGUMENT, "null result");
  return emit(mrrd::format_compare_table(result->cfg, result->result), out);
}

void mrrd_result_free(mrrd_result* result) { delete result; }

mrrd_status mrrd_convergence(const mrrd_config* cfg, int lo, int hi, int reference_level, double* order,
                             mrrd_text** report) {
  if (!cfg || !report) return fail(MRRD_ERR_ARGUMENT, "null argument");
  *report = nullptr;
  return guarded([&] {
    const auto r = mrrd::convergence(cfg->cfg, lo, hi, reference_level);
    if (order) *order = r.order;
    *report = new mrrd_text{mrrd::format_convergence(r)};
  });
}

mrrd_status mrrd_inspect(const char* path, double* eta, mrrd_text** report) {
  if (!path || !report) return fail(MRRD_ERR_ARGUMENT, "null argument");
  *report = nullptr;
  return guarded([&] {
    std::string p = path;
    if (!std::filesystem::exists(p) && std::filesystem::exists(p + ".leaves")) p += ".leaves";
    const auto dump = mrrd::read_leaves(p);
    const auto stats = mrrd::tree_stats(dump);
    if (eta) *eta = stats.eta;
    std::ostringstream os;
    os << "file " << p << "\ntime " << dump.t << "\nmax_level " << dump.max_level << "\n"
       << mrrd::format_stats(stats);
    *report = new mrrd_text{os.str()};
  });
}

}  // extern "C"
