#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mrrd/field.hpp"
#include "mrrd/quadtree.hpp"
#include "mrrd/types.hpp"

namespace mrrd {

// A(u) = slope * u, or the degenerate form 0 for u <= threshold and
// slope * (u - threshold) above it.
struct DiffusionFunction {
  double slope = 1.0;
  double threshold = 0.0;
  bool degenerate = false;

  double value(double u) const {
    if (!degenerate) return slope * u;
    return u <= threshold ? 0.0 : slope * (u - threshold);
  }
  // Right derivative at the threshold.
  double derivative(double u) const { return degenerate && u < threshold ? 0.0 : slope; }
  // Sup of A' over states up to hi.
  double max_derivative(double hi) const { return degenerate && hi < threshold ? 0.0 : slope; }
};

enum class Model1Reaction { budworm, linear, none };

// Single species: u_t = f(u, x) + Lap A(u).
struct Model1Spec {
  DiffusionFunction A{1.0, 0.5, true};
  Model1Reaction reaction = Model1Reaction::budworm;
  double rate = -1.0;  // linear reaction f = rate * u
  double center_x = 0.5;
  double center_y = 0.5;
};

enum class Kinetics { arrhenius, schnakenberg };
enum class RadiationSign { loss, gain };

// Two species: u_t = gamma f + s S(u) + Lap A(u), v_t = gamma g + d Lap B(v).
struct Model2Spec {
  Kinetics kinetics = Kinetics::arrhenius;
  double alpha = 0.64;  // Arrhenius temperature rate
  double beta = 10.0;   // Zeldovich number
  double a = -0.5;      // Schnakenberg
  double b = 1.9;
  double gamma = 1.0;
  double d = 1.0;
  DiffusionFunction A{};
  DiffusionFunction B{};
  double rho = 0.0;  // radiation level, 0 disables S
  RadiationSign radiation_sign = RadiationSign::loss;
  bool reaction = true;
};

enum class ChemotaxisSign { attractive, printed };

// Chemotaxis-growth: u_t = div(sigma grad u - u grad chi(v)) + g(u),
// v_t = alpha u - beta v + d Lap v, chi(v) = nu v, g(u) = u^2 (1 - u).
struct Model3Spec {
  double sigma = 0.0625;
  double d = 1.0;
  double nu = 7.0;
  double alpha = 1.0;
  double beta = 32.0;
  ChemotaxisSign sign = ChemotaxisSign::attractive;
  bool reaction = true;
};

using ModelSpec = std::variant<Model1Spec, Model2Spec, Model3Spec>;

int species_count(const ModelSpec& spec);
int model_family(const ModelSpec& spec);  // 1, 2 or 3
void validate(const ModelSpec& spec);

// Raw kinetics (f, g) without gamma or radiation. Model 1 returns (f, 0),
// Model 3 returns (g(u), h(u, v)).
State eval_kinetics(const ModelSpec& spec, double u, double v, double x, double y);
double arrhenius_rate(const Model2Spec& spec, double u, double v);
double radiation(const Model2Spec& spec, double u);
double budworm_rate(const Model1Spec& spec, double u, double x, double y);

// Reaction part of the right-hand side as used by the marching formulas.
inline State source_term(const Model1Spec& m, const State& w, double x, double y) {
  switch (m.reaction) {
    case Model1Reaction::budworm: return {budworm_rate(m, w[0], x, y), 0.0};
    case Model1Reaction::linear: return {m.rate * w[0], 0.0};
    case Model1Reaction::none: break;
  }
  return {0.0, 0.0};
}

inline State source_term(const Model2Spec& m, const State& w, double, double) {
  if (!m.reaction) return {0.0, 0.0};
  double f;
  double g;
  if (m.kinetics == Kinetics::arrhenius) {
    f = arrhenius_rate(m, w[0], w[1]);
    g = -f;
  } else {
    const double u2v = w[0] * w[0] * w[1];
    f = m.a - w[0] + u2v;
    g = m.b - u2v;
  }
  double fu = m.gamma * f;
  if (m.rho != 0.0) fu += (m.radiation_sign == RadiationSign::loss ? -1.0 : 1.0) * radiation(m, w[0]);
  return {fu, m.gamma * g};
}

inline State source_term(const Model3Spec& m, const State& w, double, double) {
  if (!m.reaction) return {0.0, 0.0};
  const double u = w[0];
  return {u * u * (1.0 - u), m.alpha * u - m.beta * w[1]};
}

// Canonical edge flux density from cell `lo` to cell `hi` (hi lies in +x or +y),
// spacing h between their centres.
inline State edge_flux(const Model1Spec& m, const State& lo, const State& hi, double h) {
  return {-(m.A.value(hi[0]) - m.A.value(lo[0])) / h, 0.0};
}

inline State edge_flux(const Model2Spec& m, const State& lo, const State& hi, double h) {
  return {-(m.A.value(hi[0]) - m.A.value(lo[0])) / h,
          -m.d * (m.B.value(hi[1]) - m.B.value(lo[1])) / h};
}

inline State edge_flux(const Model3Spec& m, const State& lo, const State& hi, double h) {
  const double q = 0.5 * m.nu * (lo[0] + hi[0]);
  const double chem = q * (hi[1] - lo[1]) / h;
  const double diff = -m.sigma * (hi[0] - lo[0]) / h;
  return {m.sign == ChemotaxisSign::attractive ? diff + chem : diff - chem,
          -m.d * (hi[1] - lo[1]) / h};
}

// Turing analysis of Schnakenberg kinetics with identity diffusion.
enum class TuringVerdict { unstable_pattern, stable, invalid };

struct TuringResult {
  TuringVerdict verdict = TuringVerdict::invalid;
  bool inequalities[4] = {false, false, false, false};
  double L_minus = 0.0;
  double L_plus = 0.0;
  double k1_sq = 0.0;  // gamma * L_minus
  double k2_sq = 0.0;  // gamma * L_plus
};

TuringResult check_turing_instability(double a, double b, double d, double gamma = 1.0);
const char* turing_verdict_name(TuringVerdict v);

// Bounding box of observed states.
struct StateBox {
  State lo{};
  State hi{};
  int species = 1;
};

StateBox observe_box(const std::vector<State>& states, int species);
StateBox inflate(const StateBox& box, double fraction);

// Sup-norms of the kinetics and diffusion derivatives over a state box.
struct SupNorms {
  double f_u = 0.0;
  double f_v = 0.0;
  double g_u = 0.0;
  double g_v = 0.0;
  double a_prime = 0.0;
  double b_prime = 0.0;
  double s_prime = 0.0;
  double h_u = 0.0;
  double h_v = 0.0;
  double g_prime = 0.0;
  double chi_prime = 0.0;
};

// Sup norms over the box. With sample_reaction false the Model 2 reaction
// partials are left at zero for the caller to fill from observed states.
SupNorms sup_norms(const ModelSpec& spec, const StateBox& box, const Domain& domain,
                   bool sample_reaction = true);
// (f_u, f_v, g_u, g_v) of the unscaled kinetics.
std::array<double, 4> reaction_jacobian(const Model2Spec& m, double u, double v);

// Norms for the step size. Model 2 reaction partials are maxima over the states
// visited by for_each (the box corners pair hot and fresh states that never
// coexist), scaled by 1 + inflation; everything else comes from the box.
template <class ForEach>
SupNorms cfl_norms(const ModelSpec& spec, const StateBox& box, const Domain& domain,
                   double inflation, ForEach&& for_each) {
  const auto* m = std::get_if<Model2Spec>(&spec);
  if (!m || !m->reaction) return sup_norms(spec, box, domain);
  SupNorms n = sup_norms(spec, box, domain, false);
  for_each([&](double u, double v) {
    const auto j = reaction_jacobian(*m, u, v);
    n.f_u = std::max(n.f_u, std::abs(j[0]));
    n.f_v = std::max(n.f_v, std::abs(j[1]));
    n.g_u = std::max(n.g_u, std::abs(j[2]));
    n.g_v = std::max(n.g_v, std::abs(j[3]));
  });
  const double k = 1.0 + inflation;
  n.f_u *= k;
  n.f_v *= k;
  n.g_u *= k;
  n.g_v *= k;
  return n;
}
// Stability bound dt * (reaction * max(1/h, 1/2) + 4 diffusion / h^2) <= cfl.
// Stability bound dt * (reaction / h + 4 diffusion / h^2) <= cfl.
struct CflTerms {
  double reaction = 0.0;
  double diffusion = 0.0;
};

CflTerms cfl_terms(const ModelSpec& spec, const SupNorms& norms);
double compute_dt(const CflTerms& terms, double h, double cfl, double max_dt);
double cfl_lhs(const CflTerms& terms, double h, double dt);

// eps_R = C 2^{-(alpha+2)L} / (|O| R + |O|^{3/2} 2^L 4 d D) with the reaction and
// diffusion norm sums R and D of the model family.
double reference_tolerance(const ModelSpec& spec, double C, int L, const SupNorms& norms,
                           double area, double alpha);
inline constexpr double kDefaultConvergenceOrder = 2.18;

// Initial data.
enum class InitialKind { example1, flame_balls, turing_noise, chemotaxis_noise, cosine, constant };
enum class Quadrature { midpoint, gauss2 };

struct InitialSpec {
  InitialKind kind = InitialKind::constant;
  Quadrature quadrature = Quadrature::gauss2;
  // Flame balls
  double x1 = -7.5;
  double x2 = 7.5;
  double radius1 = 1.8;
  double radius2 = 2.5;
  // Random perturbations
  std::uint64_t seed = 1;
  double noise_std = 0.01;
  double delta = 0.1;
  double kappa = 0.05;
  double center_x = 8.0;
  double center_y = 8.0;
  // Cosine mode and constant state
  State base{1.0, 0.0};
  State amplitude{0.0, 0.0};
  int mode_x = 1;
  int mode_y = 1;
};

// Cell averages of the initial state on any level of a fixed grid hierarchy.
class InitialField {
 public:
  virtual ~InitialField() = default;
  virtual State average(const NodeKey& key) const = 0;
  // Cell averages on the whole of `level`.
  Field sample(int level) const;
  int species() const { return species_; }

 protected:
  InitialField(const Domain& domain, int roots_x, int roots_y, int species)
      : domain_(domain), roots_x_(roots_x), roots_y_(roots_y), species_(species) {}
  Domain domain_;
  int roots_x_;
  int roots_y_;
  int species_;
};

std::unique_ptr<InitialField> make_initial_field(const InitialSpec& init, const ModelSpec& model,
                                                 const Domain& domain, int max_level,
                                                 int roots_x = 1, int roots_y = 1);
// Wraps finest-level averages; coarser levels are projections.
std::unique_ptr<InitialField> make_gridded_field(const Field& finest, const Domain& domain,
                                                 int max_level, int roots_x = 1, int roots_y = 1);
// Steady state (a + b, b / (a + b)^2) of Schnakenberg kinetics.
State schnakenberg_steady_state(double a, double b);
bool is_random(const InitialSpec& init);

}  // namespace mrrd
