#include "mrrd/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mrrd/dense.hpp"

namespace mrrd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "off" || t == "no" || t == "0") return false;
  throw ConfigError("'" + key + "' expects on/off, got '" + text + "'");
}

std::vector<double> parse_exact_list(const std::string& key, const std::string& text, std::size_t n) {
  std::vector<double> v;
  try {
    v = parse_number_list(text);
  } catch (const ConfigError&) {
    throw ConfigError("'" + key + "' expects " + std::to_string(n) + " comma-separated numbers");
  }
  if (v.size() != n) {
    throw ConfigError("'" + key + "' expects " + std::to_string(n) + " comma-separated numbers");
  }
  return v;
}


InitialKind parse_initial_kind(const std::string& v) {
  if (v == "example1") return InitialKind::example1;
  if (v == "flame_balls") return InitialKind::flame_balls;
  if (v == "turing_noise") return InitialKind::turing_noise;
  if (v == "chemotaxis_noise") return InitialKind::chemotaxis_noise;
  if (v == "cosine") return InitialKind::cosine;
  if (v == "constant") return InitialKind::constant;
  throw ConfigError("unknown initial data '" + v + "'");
}

const char* initial_kind_name(InitialKind k) {
  switch (k) {
    case InitialKind::example1: return "example1";
    case InitialKind::flame_balls: return "flame_balls";
    case InitialKind::turing_noise: return "turing_noise";
    case InitialKind::chemotaxis_noise: return "chemotaxis_noise";
    case InitialKind::cosine: return "cosine";
    case InitialKind::constant: return "constant";
  }
  return "constant";
}

void set_model_family(RunConfig& cfg, const std::string& v) {
  int family;
  if (v == "model1") {
    family = 1;
  } else if (v == "model2") {
    family = 2;
  } else if (v == "model3") {
    family = 3;
  } else {
    throw ConfigError("unknown model '" + v + "' (model1, model2, model3)");
  }
  // Same family keeps the parameters set so far (e.g. by a scenario).
  if (family == model_family(cfg.model)) return;
  if (family == 1) cfg.model = Model1Spec{};
  if (family == 2) cfg.model = Model2Spec{};
  if (family == 3) cfg.model = Model3Spec{};
}

void apply_model_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (auto* m = std::get_if<Model1Spec>(&cfg.model)) {
    if (key == "reaction") {
      if (v == "budworm") {
        m->reaction = Model1Reaction::budworm;
      } else if (v == "linear") {
        m->reaction = Model1Reaction::linear;
      } else if (v == "none" || v == "off") {
        m->reaction = Model1Reaction::none;
      } else {
        throw ConfigError("model1 reaction is budworm, linear or none");
      }
      return;
    }
    if (key == "rate") { m->rate = parse_double(key, v); return; }
    if (key == "D") { m->A.slope = parse_double(key, v); return; }
    if (key == "u_c") {
      m->A.threshold = parse_double(key, v);
      m->A.degenerate = true;
      return;
    }
    if (key == "degenerate") { m->A.degenerate = parse_bool(key, v); return; }
    if (key == "budworm_center") {
      const auto c = parse_exact_list(key, v, 2);
      m->center_x = c[0];
      m->center_y = c[1];
      return;
    }
  } else if (auto* m2 = std::get_if<Model2Spec>(&cfg.model)) {
    if (key == "reaction") { m2->reaction = parse_bool(key, v); return; }
    if (key == "kinetics") {
      if (v == "arrhenius") {
        m2->kinetics = Kinetics::arrhenius;
      } else if (v == "schnakenberg") {
        m2->kinetics = Kinetics::schnakenberg;
      } else {
        throw ConfigError("kinetics is arrhenius or schnakenberg");
      }
      return;
    }
    if (key == "alpha") { m2->alpha = parse_double(key, v); return; }
    if (key == "beta") { m2->beta = parse_double(key, v); return; }
    if (key == "a") { m2->a = parse_double(key, v); return; }
    if (key == "b") { m2->b = parse_double(key, v); return; }
    if (key == "gamma") { m2->gamma = parse_double(key, v); return; }
    if (key == "d") { m2->d = parse_double(key, v); return; }
    if (key == "lewis") {
      const double le = parse_double(key, v);
      if (!(le > 0.0)) throw ConfigError("lewis must be positive");
      m2->d = 1.0 / le;
      return;
    }
    if (key == "rho") { m2->rho = parse_double(key, v); return; }
    if (key == "radiation_sign") {
      if (v == "loss") {
        m2->radiation_sign = RadiationSign::loss;
      } else if (v == "gain") {
        m2->radiation_sign = RadiationSign::gain;
      } else {
        throw ConfigError("radiation_sign is loss or gain");
      }
      return;
    }
    if (key == "u_c") {
      m2->A = DiffusionFunction{1.0, parse_double(key, v), true};
      return;
    }
    if (key == "v_c") {
      m2->B = DiffusionFunction{1.0, parse_double(key, v), true};
      return;
    }
  } else {
    auto& m3 = std::get<Model3Spec>(cfg.model);
    if (key == "reaction") { m3.reaction = parse_bool(key, v); return; }
    if (key == "sigma") { m3.sigma = parse_double(key, v); return; }
    if (key == "d") { m3.d = parse_double(key, v); return; }
    if (key == "nu") { m3.nu = parse_double(key, v); return; }
    if (key == "alpha") { m3.alpha = parse_double(key, v); return; }
    if (key == "beta") { m3.beta = parse_double(key, v); return; }
    if (key == "chemotaxis_sign") {
      if (v == "attractive") {
        m3.sign = ChemotaxisSign::attractive;
      } else if (v == "printed") {
        m3.sign = ChemotaxisSign::printed;
      } else {
        throw ConfigError("chemotaxis_sign is attractive or printed");
      }
      return;
    }
  }
  throw ConfigError("unknown key '" + key + "' for model" + std::to_string(model_family(cfg.model)));
}

bool apply_init_key(InitialSpec& init, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "init") { init.kind = parse_initial_kind(v); return true; }
  if (key == "seed") {
    const long long s = parse_int(key, v);
    if (s < 0) throw ConfigError("seed must be non-negative");
    init.seed = static_cast<std::uint64_t>(s);
    return true;
  }
  if (key.rfind("init.", 0) != 0) return false;
  const std::string k = key.substr(5);
  if (k == "quadrature") {
    if (v == "midpoint") {
      init.quadrature = Quadrature::midpoint;
    } else if (v == "gauss2") {
      init.quadrature = Quadrature::gauss2;
    } else {
      throw ConfigError("init.quadrature is midpoint or gauss2");
    }
    return true;
  }
  if (k == "x1") { init.x1 = parse_double(key, v); return true; }
  if (k == "x2") { init.x2 = parse_double(key, v); return true; }
  if (k == "radius1") { init.radius1 = parse_double(key, v); return true; }
  if (k == "radius2") { init.radius2 = parse_double(key, v); return true; }
  if (k == "noise_std") { init.noise_std = parse_double(key, v); return true; }
  if (k == "delta") { init.delta = parse_double(key, v); return true; }
  if (k == "kappa") { init.kappa = parse_double(key, v); return true; }
  if (k == "center") {
    const auto c = parse_exact_list(key, v, 2);
    init.center_x = c[0];
    init.center_y = c[1];
    return true;
  }
  if (k == "base") {
    const auto c = parse_exact_list(key, v, 2);
    init.base = {c[0], c[1]};
    return true;
  }
  if (k == "amplitude") {
    const auto c = parse_exact_list(key, v, 2);
    init.amplitude = {c[0], c[1]};
    return true;
  }
  if (k == "mode") {
    const auto c = parse_exact_list(key, v, 2);
    init.mode_x = static_cast<int>(c[0]);
    init.mode_y = static_cast<int>(c[1]);
    return true;
  }
  throw ConfigError("unknown key '" + key + "'");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + fmt(v[k]);
  return s;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double("list", item));
  }
  return out;
}

void set_factor_C(RunConfig& cfg, double C) {
  cfg.C = C;
  cfg.epsilon_ref.reset();
}

void set_epsilon_ref(RunConfig& cfg, double eps) {
  cfg.epsilon_ref = eps;
  cfg.C.reset();
}

void apply_setting(RunConfig& cfg, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  if (key == "scenario") {
    cfg = preset(v);
    return;
  }
  if (key == "scenario_name") { cfg.scenario = v; return; }
  if (key == "model") { set_model_family(cfg, v); return; }
  if (apply_init_key(cfg.init, key, v)) return;
  if (key == "domain") {
    const auto d = parse_exact_list(key, v, 4);
    cfg.domain = Domain{d[0], d[1], d[2], d[3]};
    return;
  }
  if (key == "roots") {
    const auto r = parse_exact_list(key, v, 2);
    cfg.roots_x = static_cast<int>(r[0]);
    cfg.roots_y = static_cast<int>(r[1]);
    return;
  }
  if (key == "level") { cfg.level = static_cast<int>(parse_int(key, v)); return; }
  if (key == "C") { cfg.C = parse_double(key, v); return; }
  if (key == "epsilon_ref") { cfg.epsilon_ref = parse_double(key, v); return; }
  if (key == "convergence_order") { cfg.convergence_order = parse_double(key, v); return; }
  if (key == "coarsen_norm") { cfg.mr.coarsen_norm = parse_detail_norm(v); return; }
  if (key == "refine_norm") { cfg.mr.refine_norm = parse_detail_norm(v); return; }
  if (key == "mode") { cfg.stepper.mode = parse_stepping_mode(v); return; }
  if (key == "cfl") { cfg.stepper.cfl = parse_double(key, v); return; }
  if (key == "max_dt") { cfg.stepper.max_dt = parse_double(key, v); return; }
  if (key == "box_inflation") { cfg.stepper.box_inflation = parse_double(key, v); return; }
  if (key == "adapt") { cfg.stepper.adapt = parse_bool(key, v); return; }
  if (key == "t_final") { cfg.t_final = parse_double(key, v); return; }
  if (key == "snapshots") { cfg.snapshots = parse_number_list(v); return; }
  if (key == "presmooth_time") { cfg.presmooth_time = parse_double(key, v); return; }
  if (key == "out") { cfg.out = v; return; }
  if (key == "paired_dense") { cfg.paired_dense = parse_bool(key, v); return; }
  if (key == "reference_level") { cfg.reference_level = static_cast<int>(parse_int(key, v)); return; }
  if (key == "write_fields") { cfg.write_fields = parse_bool(key, v); return; }
  apply_model_key(cfg, key, v);
}

RunConfig parse_config(const std::string& text) {
  struct Entry {
    std::string key;
    std::string value;
    int line;
  };
  std::vector<Entry> entries;
  std::stringstream ss(text);
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
    }
    entries.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1)), number});
  }
  RunConfig cfg;
  bool c_given = false;
  bool eps_given = false;
  for (const char* pass : {"scenario", "model", ""}) {
    for (const Entry& e : entries) {
      const bool first_two = e.key == "scenario" || e.key == "model";
      if (*pass ? e.key != pass : first_two) continue;
      try {
        apply_setting(cfg, e.key, e.value);
      } catch (const ConfigError& err) {
        throw ConfigError("line " + std::to_string(e.line) + ": " + err.what());
      }
      c_given |= e.key == "C";
      eps_given |= e.key == "epsilon_ref";
    }
  }
  if (c_given && eps_given) throw ConfigError("give exactly one of C and epsilon_ref");
  if (c_given) cfg.epsilon_ref.reset();
  if (eps_given) cfg.C.reset();
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& cfg) {
  validate(cfg.model);
  if (cfg.level < 1 || cfg.level > 12) throw ConfigError("level must be in [1, 12]");
  if (cfg.C.has_value() == cfg.epsilon_ref.has_value()) {
    throw ConfigError("give exactly one of C and epsilon_ref");
  }
  if (cfg.C && !(*cfg.C > 0.0)) throw ConfigError("C must be positive");
  if (cfg.epsilon_ref && !(*cfg.epsilon_ref >= 0.0)) throw ConfigError("epsilon_ref must be non-negative");
  if (!(cfg.convergence_order > 0.0)) throw ConfigError("convergence_order must be positive");
  if (!(cfg.t_final >= 0.0)) throw ConfigError("t_final must be non-negative");
  if (!(cfg.stepper.cfl > 0.0) || cfg.stepper.cfl > 1.0) throw ConfigError("cfl must lie in (0, 1]");
  if (!(cfg.stepper.max_dt > 0.0)) throw ConfigError("max_dt must be positive");
  if (!(cfg.stepper.box_inflation >= 0.0)) throw ConfigError("box_inflation must be non-negative");
  if (!(cfg.presmooth_time >= 0.0)) throw ConfigError("presmooth_time must be non-negative");
  if (cfg.presmooth_time > cfg.t_final) throw ConfigError("presmooth_time exceeds t_final");
  if (cfg.roots_x < 1 || cfg.roots_y < 1) throw ConfigError("roots must be positive");
  if (!(cfg.domain.width() > 0.0) || !(cfg.domain.height() > 0.0)) throw ConfigError("empty domain");
  if (std::abs(cfg.domain.width() / cfg.roots_x - cfg.domain.height() / cfg.roots_y) >
      1e-12 * cfg.domain.width()) {
    throw ConfigError("root cells must be square");
  }
  for (double t : cfg.snapshots) {
    if (t < 0.0 || t > cfg.t_final) throw ConfigError("snapshot time " + fmt(t) + " outside [0, t_final]");
  }
  if (cfg.reference_level != -1 && (cfg.reference_level < 1 || cfg.reference_level > 14)) {
    throw ConfigError("reference_level must be in [1, 14]");
  }
  if (cfg.init.kind == InitialKind::turing_noise) {
    const auto* m = std::get_if<Model2Spec>(&cfg.model);
    if (!m || m->kinetics != Kinetics::schnakenberg) {
      throw ConfigError("turing_noise needs Schnakenberg kinetics");
    }
  }
  if (cfg.init.kind == InitialKind::chemotaxis_noise && model_family(cfg.model) != 3) {
    throw ConfigError("chemotaxis_noise needs model3");
  }
  if (cfg.init.kind == InitialKind::flame_balls && model_family(cfg.model) != 2) {
    throw ConfigError("flame_balls needs model2");
  }
  if (cfg.out.empty()) throw ConfigError("out must not be empty");
}

int effective_reference_level(const RunConfig& cfg) {
  return cfg.reference_level < 0 ? cfg.level : cfg.reference_level;
}

std::vector<double> snapshot_schedule(const RunConfig& cfg) {
  std::vector<double> t;
  for (double s : cfg.snapshots) {
    if (s >= 0.0 && s <= cfg.t_final) t.push_back(s);
  }
  t.push_back(cfg.t_final);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

double resolve_epsilon(const RunConfig& cfg, const InitialField& init) {
  if (cfg.epsilon_ref) return *cfg.epsilon_ref;
  const StateBox box = inflate(observe_field_box(init.sample(cfg.level)), 0.1);
  const SupNorms norms = sup_norms(cfg.model, box, cfg.domain);
  return reference_tolerance(cfg.model, *cfg.C, cfg.level, norms, cfg.domain.area(),
                             cfg.convergence_order);
}

std::string to_text(const RunConfig& cfg) {
  std::ostringstream os;
  const int family = model_family(cfg.model);
  os << "scenario_name = " << cfg.scenario << "\nmodel = model" << family << "\n";
  if (const auto* m = std::get_if<Model1Spec>(&cfg.model)) {
    const char* r = m->reaction == Model1Reaction::budworm ? "budworm"
                    : m->reaction == Model1Reaction::linear ? "linear"
                                                            : "none";
    os << "reaction = " << r << "\nrate = " << fmt(m->rate) << "\nD = " << fmt(m->A.slope)
       << "\nu_c = " << fmt(m->A.threshold) << "\ndegenerate = " << (m->A.degenerate ? "on" : "off")
       << "\nbudworm_center = " << fmt(m->center_x) << "," << fmt(m->center_y) << "\n";
  } else if (const auto* m2 = std::get_if<Model2Spec>(&cfg.model)) {
    os << "kinetics = " << (m2->kinetics == Kinetics::arrhenius ? "arrhenius" : "schnakenberg")
       << "\nreaction = " << (m2->reaction ? "on" : "off") << "\nalpha = " << fmt(m2->alpha)
       << "\nbeta = " << fmt(m2->beta) << "\na = " << fmt(m2->a) << "\nb = " << fmt(m2->b)
       << "\ngamma = " << fmt(m2->gamma) << "\nd = " << fmt(m2->d) << "\nrho = " << fmt(m2->rho)
       << "\nradiation_sign = " << (m2->radiation_sign == RadiationSign::loss ? "loss" : "gain") << "\n";
    if (m2->A.degenerate) os << "u_c = " << fmt(m2->A.threshold) << "\n";
    if (m2->B.degenerate) os << "v_c = " << fmt(m2->B.threshold) << "\n";
  } else {
    const auto& m3 = std::get<Model3Spec>(cfg.model);
    os << "reaction = " << (m3.reaction ? "on" : "off") << "\nsigma = " << fmt(m3.sigma)
       << "\nd = " << fmt(m3.d) << "\nnu = " << fmt(m3.nu) << "\nalpha = " << fmt(m3.alpha)
       << "\nbeta = " << fmt(m3.beta)
       << "\nchemotaxis_sign = " << (m3.sign == ChemotaxisSign::attractive ? "attractive" : "printed")
       << "\n";
  }
  const InitialSpec& in = cfg.init;
  os << "init = " << initial_kind_name(in.kind)
     << "\ninit.quadrature = " << (in.quadrature == Quadrature::midpoint ? "midpoint" : "gauss2")
     << "\ninit.x1 = " << fmt(in.x1) << "\ninit.x2 = " << fmt(in.x2) << "\ninit.radius1 = " << fmt(in.radius1)
     << "\ninit.radius2 = " << fmt(in.radius2) << "\ninit.noise_std = " << fmt(in.noise_std)
     << "\ninit.delta = " << fmt(in.delta) << "\ninit.kappa = " << fmt(in.kappa)
     << "\ninit.center = " << fmt(in.center_x) << "," << fmt(in.center_y)
     << "\ninit.base = " << fmt(in.base[0]) << "," << fmt(in.base[1])
     << "\ninit.amplitude = " << fmt(in.amplitude[0]) << "," << fmt(in.amplitude[1])
     << "\ninit.mode = " << in.mode_x << "," << in.mode_y << "\nseed = " << in.seed << "\n";
  os << "domain = " << fmt(cfg.domain.x_min) << "," << fmt(cfg.domain.x_max) << "," << fmt(cfg.domain.y_min)
     << "," << fmt(cfg.domain.y_max) << "\nroots = " << cfg.roots_x << "," << cfg.roots_y
     << "\nlevel = " << cfg.level << "\n";
  if (cfg.C) os << "C = " << fmt(*cfg.C) << "\n";
  if (cfg.epsilon_ref) os << "epsilon_ref = " << fmt(*cfg.epsilon_ref) << "\n";
  os << "convergence_order = " << fmt(cfg.convergence_order)
     << "\ncoarsen_norm = " << detail_norm_name(cfg.mr.coarsen_norm)
     << "\nrefine_norm = " << detail_norm_name(cfg.mr.refine_norm)
     << "\nmode = " << stepping_mode_name(cfg.stepper.mode) << "\ncfl = " << fmt(cfg.stepper.cfl)
     << "\nmax_dt = " << fmt(cfg.stepper.max_dt) << "\nbox_inflation = " << fmt(cfg.stepper.box_inflation)
     << "\nadapt = " << (cfg.stepper.adapt ? "on" : "off") << "\nt_final = " << fmt(cfg.t_final)
     << "\nsnapshots = " << join(cfg.snapshots) << "\npresmooth_time = " << fmt(cfg.presmooth_time)
     << "\nout = " << cfg.out << "\npaired_dense = " << (cfg.paired_dense ? "on" : "off")
     << "\nreference_level = " << cfg.reference_level
     << "\nwrite_fields = " << (cfg.write_fields ? "on" : "off") << "\n";
  return os.str();
}

std::vector<std::string> preset_names() {
  return {"example1", "example2", "example3", "example4", "example5", "example6"};
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.scenario = name;
  c.out = "out/" + name;
  if (name == "example1") {
    // Single species, degenerate diffusion, budworm-type reaction.
    Model1Spec m;
    m.A = DiffusionFunction{1.0, 0.5, true};
    c.model = m;
    c.init.kind = InitialKind::example1;
    c.level = 8;
    // Reproduces eps_R = 9.43e-4 at L = 8.
    c.C = 1.1363e10;
    c.t_final = 3.0;
    c.snapshots = {0.0, 0.5, 3.0};
    return c;
  }
  if (name == "example2" || name == "example3") {
    Model2Spec m;
    c.domain = Domain{-30, 30, -30, 30};
    c.init.kind = InitialKind::flame_balls;
    c.t_final = 10.0;
    c.snapshots = {2.0, 4.0, 10.0};
    if (name == "example2") {
      c.level = 9;
      c.epsilon_ref = 4.94e-3;
    } else {
      m.rho = 0.05;
      m.d = 1.0 / 0.3;
      c.init.x1 = -5.0;
      c.init.x2 = 5.0;
      c.init.radius1 = 0.5;
      c.init.radius2 = 1.0;
      c.level = 9;
      c.epsilon_ref = 7.43e-3;
      c.stepper.mode = SteppingMode::local;
    }
    c.model = m;
    return c;
  }
  if (name == "example4" || name == "example5") {
    Model2Spec m;
    m.kinetics = Kinetics::schnakenberg;
    m.a = -0.5;
    m.b = 1.9;
    m.d = 4.8;
    m.gamma = name == "example4" ? 210.0 : 395.0;
    if (name == "example5") {
      m.A = DiffusionFunction{1.0, 1.2, true};
      m.B = DiffusionFunction{1.0, 0.7, true};
    }
    c.model = m;
    c.init.kind = InitialKind::turing_noise;
    c.init.noise_std = 0.01;
    c.init.seed = 2024;
    c.level = 8;
    c.epsilon_ref = name == "example4" ? 2.6e-3 : 3.59e-4;
    c.t_final = 1.5;
    c.snapshots = name == "example4" ? std::vector<double>{0.05, 0.25, 1.5}
                                     : std::vector<double>{0.1, 0.25, 1.5};
    c.presmooth_time = 0.01;
    return c;
  }
  if (name == "example6") {
    Model3Spec m;
    c.model = m;
    c.domain = Domain{0, 16, 0, 16};
    c.init.kind = InitialKind::chemotaxis_noise;
    c.init.seed = 2024;
    c.level = 9;
    c.epsilon_ref = 8.43e-4;
    // Measured dense order for Model 3, used when C is given instead.
    c.convergence_order = 1.9;
    c.stepper.mode = SteppingMode::local;
    c.t_final = 20.0;
    c.snapshots = {5.0, 10.0, 20.0};
    c.presmooth_time = 0.05;
    return c;
  }
  throw ConfigError("unknown scenario '" + name + "' (example1 ... example6)");
}

}  // namespace mrrd
