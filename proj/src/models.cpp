#include "mrrd/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mrrd {

namespace {

constexpr int kSamples = 33;

double sample(double lo, double hi, int k) {
  return lo + (hi - lo) * static_cast<double>(k) / (kSamples - 1);
}

template <class Fn>
double sup_over(double lo, double hi, Fn fn) {
  double m = 0.0;
  for (int k = 0; k < kSamples; ++k) m = std::max(m, std::abs(fn(sample(lo, hi, k))));
  return m;
}

class AnalyticField final : public InitialField {
 public:
  using PointFn = std::function<State(double, double)>;

  AnalyticField(const Domain& domain, int roots_x, int roots_y, int species, Quadrature quadrature,
                PointFn fn)
      : InitialField(domain, roots_x, roots_y, species), quadrature_(quadrature), fn_(std::move(fn)) {}

  State average(const NodeKey& key) const override {
    const double h = domain_.width() / roots_x_ / static_cast<double>(1 << key.level);
    const double cx = domain_.x_min + (key.i + 0.5) * h;
    const double cy = domain_.y_min + (key.j + 0.5) * h;
    if (quadrature_ == Quadrature::midpoint) return fn_(cx, cy);
    const double o = 0.5 * h / std::numbers::sqrt3;
    State sum{};
    for (double dx : {-o, o}) {
      for (double dy : {-o, o}) {
        const State w = fn_(cx + dx, cy + dy);
        for (int s = 0; s < species_; ++s) sum[s] += 0.25 * w[s];
      }
    }
    return sum;
  }

 private:
  Quadrature quadrature_;
  PointFn fn_;
};

class GriddedField final : public InitialField {
 public:
  GriddedField(const Field& finest, const Domain& domain, int max_level, int roots_x, int roots_y)
      : InitialField(domain, roots_x, roots_y, finest.species) {
    if (finest.nx != (roots_x << max_level) || finest.ny != (roots_y << max_level)) {
      throw ConfigError("gridded initial data does not match the finest level");
    }
    pyramid_.resize(static_cast<std::size_t>(max_level + 1));
    pyramid_[max_level] = finest;
    for (int l = max_level; l > 0; --l) {
      const Field& f = pyramid_[l];
      Field c(f.nx / 2, f.ny / 2, f.species);
      for (int s = 0; s < f.species; ++s) {
        for (int j = 0; j < c.ny; ++j) {
          for (int i = 0; i < c.nx; ++i) {
            c.at(s, i, j) = 0.25 * (f.at(s, 2 * i, 2 * j) + f.at(s, 2 * i + 1, 2 * j) +
                                    f.at(s, 2 * i, 2 * j + 1) + f.at(s, 2 * i + 1, 2 * j + 1));
          }
        }
      }
      pyramid_[l - 1] = std::move(c);
    }
  }

  State average(const NodeKey& key) const override {
    return pyramid_[key.level].state(key.i, key.j);
  }

 private:
  std::vector<Field> pyramid_;
};

// Separable cosine mode with exact cell averages.
class CosineField final : public InitialField {
 public:
  CosineField(const Domain& domain, int roots_x, int roots_y, int species, const InitialSpec& init)
      : InitialField(domain, roots_x, roots_y, species), init_(init) {}

  State average(const NodeKey& key) const override {
    const double h = domain_.width() / roots_x_ / static_cast<double>(1 << key.level);
    const double cx = mean_cos(init_.mode_x, domain_.width(), key.i * h, (key.i + 1) * h);
    const double cy = mean_cos(init_.mode_y, domain_.height(), key.j * h, (key.j + 1) * h);
    return State{init_.base[0] + init_.amplitude[0] * cx * cy,
                 init_.base[1] + init_.amplitude[1] * cx * cy};
  }

 private:
  static double mean_cos(int mode, double length, double a, double b) {
    if (mode == 0) return 1.0;
    const double k = mode * std::numbers::pi / length;
    return (std::sin(k * b) - std::sin(k * a)) / (k * (b - a));
  }

  InitialSpec init_;
};

double example1_u0(double x, double y) {
  return 0.5 * (1.0 + std::sin(1.1 * (x - std::cos(0.7 * y)))) *
         std::cos(0.5 * (y - std::sin(1.3 * x)));
}

}  // namespace

int species_count(const ModelSpec& spec) { return std::holds_alternative<Model1Spec>(spec) ? 1 : 2; }

int model_family(const ModelSpec& spec) { return static_cast<int>(spec.index()) + 1; }

void validate(const ModelSpec& spec) {
  if (const auto* m = std::get_if<Model1Spec>(&spec)) {
    if (!(m->A.slope > 0.0)) throw ConfigError("diffusion constant D must be positive");
    if (m->A.threshold < 0.0) throw ConfigError("degeneracy threshold must be non-negative");
  } else if (const auto* m2 = std::get_if<Model2Spec>(&spec)) {
    if (!(m2->d > 0.0)) throw ConfigError("diffusion ratio d must be positive");
    if (m2->gamma < 0.0) throw ConfigError("gamma must be non-negative");
    if (!(m2->A.slope > 0.0) || !(m2->B.slope > 0.0)) throw ConfigError("diffusion slopes must be positive");
    if (m2->A.threshold < 0.0 || m2->B.threshold < 0.0) throw ConfigError("thresholds must be non-negative");
    if (m2->rho < 0.0) throw ConfigError("radiation level must be non-negative");
    if (m2->kinetics == Kinetics::arrhenius && (m2->alpha == 0.0 || !(m2->beta > 0.0))) {
      throw ConfigError("Arrhenius kinetics need alpha != 0 and beta > 0");
    }
  } else {
    const auto& m3 = std::get<Model3Spec>(spec);
    if (!(m3.sigma > 0.0) || !(m3.d > 0.0) || !(m3.nu > 0.0)) {
      throw ConfigError("sigma, d and nu must be positive");
    }
    if (m3.alpha < 0.0 || m3.beta < 0.0) throw ConfigError("alpha and beta must be non-negative");
  }
}

double arrhenius_rate(const Model2Spec& spec, double u, double v) {
  const double den = spec.alpha * (1.0 - u) - 1.0;
  if (std::abs(den) < 1e-12) throw NumericalError("Arrhenius exponent is singular");
  return 0.5 * spec.beta * spec.beta * v * std::exp(spec.beta * (1.0 - u) / den);
}

double radiation(const Model2Spec& spec, double u) {
  const double s = 1.0 / spec.alpha - 1.0;
  const double t = u + s;
  return spec.rho * (t * t * t * t - s * s * s * s);
}

double budworm_rate(const Model1Spec& spec, double u, double x, double y) {
  const double r = std::hypot(x - spec.center_x, y - spec.center_y);
  const double e = std::exp(-5.0 * r);
  return 10.0 * (e * u * (1.0 - u) + (e - 1.0) * u * u / (1.0 + u * u));
}

State eval_kinetics(const ModelSpec& spec, double u, double v, double x, double y) {
  if (const auto* m = std::get_if<Model1Spec>(&spec)) return {source_term(*m, {u, 0.0}, x, y)[0], 0.0};
  if (const auto* m2 = std::get_if<Model2Spec>(&spec)) {
    if (m2->kinetics == Kinetics::arrhenius) {
      const double f = arrhenius_rate(*m2, u, v);
      return {f, -f};
    }
    return {m2->a - u + u * u * v, m2->b - u * u * v};
  }
  const auto& m3 = std::get<Model3Spec>(spec);
  return {u * u * (1.0 - u), m3.alpha * u - m3.beta * v};
}

TuringResult check_turing_instability(double a, double b, double d, double gamma) {
  TuringResult r;
  if (!(b > 0.0) || !(a + b > 0.0) || !(d > 0.0)) return r;
  const double s = a + b;
  const double s3 = s * s * s;
  const double q = d * (b - a) - s3;
  r.inequalities[0] = 0.0 < b - a && b - a < s3;
  r.inequalities[1] = s * s > 0.0;
  r.inequalities[2] = d * (b - a) > s3;
  r.inequalities[3] = q * q > 4.0 * d * s3 * s;
  if (!(r.inequalities[0] && r.inequalities[1] && r.inequalities[2] && r.inequalities[3])) {
    r.verdict = TuringVerdict::stable;
    return r;
  }
  const double root = std::sqrt(q * q - 4.0 * d * s3 * s);
  r.L_minus = (q - root) / (2.0 * d * s);
  r.L_plus = (q + root) / (2.0 * d * s);
  r.k1_sq = gamma * r.L_minus;
  r.k2_sq = gamma * r.L_plus;
  r.verdict = TuringVerdict::unstable_pattern;
  return r;
}

const char* turing_verdict_name(TuringVerdict v) {
  switch (v) {
    case TuringVerdict::unstable_pattern: return "unstable_pattern";
    case TuringVerdict::stable: return "stable";
    case TuringVerdict::invalid: return "invalid";
  }
  return "?";
}

StateBox observe_box(const std::vector<State>& states, int species) {
  StateBox box;
  box.species = species;
  if (states.empty()) return box;
  box.lo = states.front();
  box.hi = states.front();
  for (const State& w : states) {
    for (int s = 0; s < species; ++s) {
      box.lo[s] = std::min(box.lo[s], w[s]);
      box.hi[s] = std::max(box.hi[s], w[s]);
    }
  }
  return box;
}

StateBox inflate(const StateBox& box, double fraction) {
  StateBox out = box;
  for (int s = 0; s < box.species; ++s) {
    const double w = box.hi[s] - box.lo[s];
    const double pad = w > 0.0 ? fraction * w : fraction * std::max(std::abs(box.lo[s]), 1e-3);
    out.lo[s] -= pad;
    out.hi[s] += pad;
  }
  return out;
}

std::array<double, 4> reaction_jacobian(const Model2Spec& m, double u, double v) {
  if (m.kinetics == Kinetics::arrhenius) {
    const double den = m.alpha * (1.0 - u) - 1.0;
    if (std::abs(den) < 1e-12) throw NumericalError("Arrhenius exponent is singular");
    const double fv = 0.5 * m.beta * m.beta * std::exp(m.beta * (1.0 - u) / den);
    const double fu = fv * v * m.beta / (den * den);
    return {fu, fv, -fu, -fv};
  }
  return {-1.0 + 2.0 * u * v, u * u, -2.0 * u * v, -u * u};
}

SupNorms sup_norms(const ModelSpec& spec, const StateBox& box, const Domain& domain,
                   bool sample_reaction) {
  SupNorms n;
  if (const auto* m = std::get_if<Model1Spec>(&spec)) {
    n.a_prime = m->A.max_derivative(box.hi[0]);
    if (m->reaction == Model1Reaction::linear) n.f_u = std::abs(m->rate);
    if (m->reaction != Model1Reaction::budworm) return n;
    double r_max = 0.0;
    for (double x : {domain.x_min, domain.x_max}) {
      for (double y : {domain.y_min, domain.y_max}) {
        r_max = std::max(r_max, std::hypot(x - m->center_x, y - m->center_y));
      }
    }
    for (int k = 0; k < kSamples; ++k) {
      const double e = std::exp(-5.0 * sample(0.0, r_max, k));
      n.f_u = std::max(n.f_u, sup_over(box.lo[0], box.hi[0], [e](double u) {
        const double q = 1.0 + u * u;
        return 10.0 * (e * (1.0 - 2.0 * u) + (e - 1.0) * 2.0 * u / (q * q));
      }));
    }
    return n;
  }
  if (const auto* m = std::get_if<Model2Spec>(&spec)) {
    n.a_prime = m->A.max_derivative(box.hi[0]);
    n.b_prime = m->B.max_derivative(box.hi[1]);
    if (!m->reaction) return n;
    for (int ku = sample_reaction ? 0 : kSamples; ku < kSamples; ++ku) {
      const double u = sample(box.lo[0], box.hi[0], ku);
      for (int kv = 0; kv < kSamples; ++kv) {
        const double v = sample(box.lo[1], box.hi[1], kv);
        const auto [fu, fv, gu, gv] = reaction_jacobian(*m, u, v);
        n.f_u = std::max(n.f_u, std::abs(fu));
        n.f_v = std::max(n.f_v, std::abs(fv));
        n.g_u = std::max(n.g_u, std::abs(gu));
        n.g_v = std::max(n.g_v, std::abs(gv));
      }
    }
    if (m->rho != 0.0) {
      const double s = 1.0 / m->alpha - 1.0;
      n.s_prime = sup_over(box.lo[0], box.hi[0], [&](double u) {
        const double t = u + s;
        return 4.0 * m->rho * t * t * t;
      });
    }
    return n;
  }
  const auto& m3 = std::get<Model3Spec>(spec);
  n.chi_prime = m3.nu;
  if (m3.reaction) {
    n.h_u = m3.alpha;
    n.h_v = m3.beta;
    n.g_prime = sup_over(box.lo[0], box.hi[0], [](double u) { return 2.0 * u - 3.0 * u * u; });
  }
  return n;
}

CflTerms cfl_terms(const ModelSpec& spec, const SupNorms& n) {
  if (std::holds_alternative<Model1Spec>(spec)) return {n.f_u, n.a_prime};
  if (const auto* m = std::get_if<Model2Spec>(&spec)) {
    return {m->gamma * (n.f_u + n.f_v + n.g_u + n.g_v) + n.s_prime, m->d * (n.a_prime + n.b_prime)};
  }
  const auto& m3 = std::get<Model3Spec>(spec);
  return {n.h_u + n.h_v + n.g_prime, m3.d * (m3.sigma + n.chi_prime)};
}

namespace {

// Reaction weight 1/h, but never below 1/2: on cells wider than 2 the explicit
// Euler bound dt * |J| <= 2 is the binding one.
double reaction_weight(double h) { return std::max(1.0 / h, 0.5); }

}  // namespace

double cfl_lhs(const CflTerms& t, double h, double dt) {
  return dt * (t.reaction * reaction_weight(h) + 4.0 * t.diffusion / (h * h));
}

double compute_dt(const CflTerms& t, double h, double cfl, double max_dt) {
  const double rate = t.reaction * reaction_weight(h) + 4.0 * t.diffusion / (h * h);
  if (!(rate > 0.0)) return max_dt;
  return std::min(cfl / rate, max_dt);
}

double reference_tolerance(const ModelSpec& spec, double C, int L, const SupNorms& n, double area,
                           double alpha) {
  double reaction;
  double diffusion;
  double d;
  if (std::holds_alternative<Model1Spec>(spec)) {
    reaction = n.f_u;
    diffusion = n.a_prime;
    d = 1.0;
  } else if (const auto* m = std::get_if<Model2Spec>(&spec)) {
    reaction = n.f_u + n.f_v + n.g_u + n.g_v;
    diffusion = n.a_prime + n.b_prime;
    d = m->d;
  } else {
    const auto& m3 = std::get<Model3Spec>(spec);
    reaction = n.h_u + n.h_v + n.g_prime;
    diffusion = m3.sigma + n.chi_prime;
    d = m3.d;
  }
  const double den =
      area * reaction + std::pow(area, 1.5) * std::ldexp(1.0, L) * 4.0 * d * diffusion;
  if (!(den > 0.0)) throw ConfigError("reference tolerance has a zero denominator");
  return C * std::exp2(-(alpha + 2.0) * L) / den;
}

State schnakenberg_steady_state(double a, double b) {
  const double u0 = a + b;
  return {u0, b / (u0 * u0)};
}

bool is_random(const InitialSpec& init) {
  return init.kind == InitialKind::turing_noise || init.kind == InitialKind::chemotaxis_noise;
}

Field InitialField::sample(int level) const {
  Field f(roots_x_ << level, roots_y_ << level, species_);
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      const State w = average(NodeKey{i, j, level});
      for (int s = 0; s < species_; ++s) f.at(s, i, j) = w[s];
    }
  }
  return f;
}

std::unique_ptr<InitialField> make_gridded_field(const Field& finest, const Domain& domain,
                                                 int max_level, int roots_x, int roots_y) {
  return std::make_unique<GriddedField>(finest, domain, max_level, roots_x, roots_y);
}

std::unique_ptr<InitialField> make_initial_field(const InitialSpec& init, const ModelSpec& model,
                                                 const Domain& domain, int max_level, int roots_x,
                                                 int roots_y) {
  const int species = species_count(model);
  auto analytic = [&](AnalyticField::PointFn fn) -> std::unique_ptr<InitialField> {
    return std::make_unique<AnalyticField>(domain, roots_x, roots_y, species, init.quadrature,
                                           std::move(fn));
  };
  switch (init.kind) {
    case InitialKind::example1:
      return analytic([](double x, double y) { return State{example1_u0(x, y), 0.0}; });
    case InitialKind::flame_balls:
      return analytic([init](double x, double y) {
        const double r1 = std::hypot(x - init.x1, y);
        const double r2 = std::hypot(x - init.x2, y);
        double u = 1.0;
        if (!(r1 < init.radius1 || r2 < init.radius2)) {
          u = std::max(std::exp(1.0 - r1 / init.radius1), std::exp(1.0 - r2 / init.radius2));
        }
        return State{u, 1.0 - u};
      });
    case InitialKind::cosine:
      return std::make_unique<CosineField>(domain, roots_x, roots_y, species, init);
    case InitialKind::constant:
      return analytic([init](double, double) { return init.base; });
    case InitialKind::turing_noise:
    case InitialKind::chemotaxis_noise: break;
  }
  // Random data lives on the finest grid; coarser levels are its projections.
  Field f(roots_x << max_level, roots_y << max_level, species);
  std::mt19937_64 rng(init.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double h = domain.width() / f.nx;
  State base = init.base;
  if (init.kind == InitialKind::turing_noise) {
    const auto* m = std::get_if<Model2Spec>(&model);
    if (!m || m->kinetics != Kinetics::schnakenberg) {
      throw ConfigError("turing noise needs Schnakenberg kinetics");
    }
    base = schnakenberg_steady_state(m->a, m->b);
  } else {
    const auto* m = std::get_if<Model3Spec>(&model);
    if (!m) throw ConfigError("chemotaxis noise needs the chemotaxis model");
    base = {1.0, m->alpha / m->beta};
  }
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      if (init.kind == InitialKind::turing_noise) {
        f.at(0, i, j) = base[0] + init.noise_std * normal(rng);
        f.at(1, i, j) = base[1] + init.noise_std * normal(rng);
      } else {
        const double x = domain.x_min + (i + 0.5) * h - init.center_x;
        const double y = domain.y_min + (j + 0.5) * h - init.center_y;
        const double envelope = init.delta * (1.0 - std::exp(-init.kappa * (x * x + y * y)));
        f.at(0, i, j) = base[0] + envelope * normal(rng);
        f.at(1, i, j) = base[1];
      }
    }
  }
  return make_gridded_field(f, domain, max_level, roots_x, roots_y);
}

}  // namespace mrrd
