#include "mrrd/dense.hpp"

#include <algorithm>
#include <cmath>

#include "mrrd/fvcore.hpp"

namespace mrrd {

DenseSolver::DenseSolver(const ModelSpec& spec, const Domain& domain, int level, int roots_x,
                         int roots_y)
    : spec_(spec),
      domain_(domain),
      level_(level),
      species_(species_count(spec)),
      h_(domain.width() / roots_x / static_cast<double>(1 << level)),
      state_(roots_x << level, roots_y << level, species_count(spec)),
      rate_(state_.nx, state_.ny, state_.species) {
  validate(spec);
  if (level < 0 || level > 14) throw ConfigError("dense level out of range");
}

void DenseSolver::set_state(const Field& w) {
  if (w.nx != state_.nx || w.ny != state_.ny || w.species != species_) {
    throw ConfigError("dense state has the wrong shape");
  }
  state_ = w;
}

template <class M>
void DenseSolver::rates_impl(const M& m, Field& rate) const {
  const int nx = state_.nx;
  const int ny = state_.ny;
  const double h = h_;
  // Edge-integrated fluxes, lo -> hi; index (i, j) is the edge on the +x (+y) side.
  std::vector<State>& fx = fx_;
  std::vector<State>& fy = fy_;
  fx.resize(static_cast<std::size_t>(nx) * ny);
  fy.resize(fx.size());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const State w = state_.state(i, j);
      const std::size_t c = static_cast<std::size_t>(j) * nx + i;
      fx[c] = i + 1 < nx ? scaled_flux(m, w, state_.state(i + 1, j), h) : State{};
      fy[c] = j + 1 < ny ? scaled_flux(m, w, state_.state(i, j + 1), h) : State{};
    }
  }
  for (int j = 0; j < ny; ++j) {
    const double y = domain_.y_min + (j + 0.5) * h;
    for (int i = 0; i < nx; ++i) {
      const std::size_t c = static_cast<std::size_t>(j) * nx + i;
      std::array<State, 4> out{};
      out[0] = fx[c];
      if (i > 0) out[1] = {-fx[c - 1][0], -fx[c - 1][1]};
      out[2] = fy[c];
      if (j > 0) out[3] = {-fy[c - nx][0], -fy[c - nx][1]};
      const double x = domain_.x_min + (i + 0.5) * h;
      const State r = combine_rate(out, h, source_term(m, state_.state(i, j), x, y));
      for (int s = 0; s < species_; ++s) rate.at(s, i, j) = r[s];
    }
  }
}

void DenseSolver::compute_rates(Field& rate) const {
  if (rate.nx != state_.nx || rate.ny != state_.ny || rate.species != species_) {
    rate = Field(state_.nx, state_.ny, species_);
  }
  std::visit([&](const auto& m) { rates_impl(m, rate); }, spec_);
}

void DenseSolver::step(double dt) {
  compute_rates(rate_);
  for (std::size_t k = 0; k < state_.data.size(); ++k) state_.data[k] += dt * rate_.data[k];
  time_ += dt;
  ++steps_;
}

double DenseSolver::stable_dt(double cfl, double max_dt) const {
  const StateBox raw = observe_field_box(state_);
  for (int s = 0; s < species_; ++s) {
    if (!std::isfinite(raw.lo[s]) || !std::isfinite(raw.hi[s])) {
      throw NumericalError("dense solution is not finite");
    }
  }
  const StateBox box = inflate(raw, 0.1);
  const SupNorms n = cfl_norms(spec_, box, domain_, 0.1, [&](auto&& visit) {
    for (std::size_t k = 0; k < state_.cells(); ++k) visit(state_.plane(0)[k], state_.plane(1)[k]);
  });
  const CflTerms t = cfl_terms(spec_, n);
  return compute_dt(t, h_, cfl, max_dt);
}

void DenseSolver::advance_to(double t_end, double cfl, double max_dt) {
  while (time_ < t_end) {
    double dt = stable_dt(cfl, max_dt);
    const bool last = time_ + dt >= t_end;
    if (last) dt = t_end - time_;
    step(dt);
    if (last) time_ = t_end;
  }
}

StateBox observe_field_box(const Field& f) {
  StateBox box;
  box.species = f.species;
  for (int s = 0; s < f.species; ++s) {
    const double* p = f.plane(s);
    double lo = p[0];
    double hi = p[0];
    bool finite = true;
    for (std::size_t k = 0; k < f.cells(); ++k) {
      lo = std::min(lo, p[k]);
      hi = std::max(hi, p[k]);
      finite = finite && std::isfinite(p[k]);
    }
    // A non-finite value poisons the box so callers can detect it.
    box.lo[s] = finite ? lo : std::nan("");
    box.hi[s] = finite ? hi : std::nan("");
  }
  return box;
}

}  // namespace mrrd
