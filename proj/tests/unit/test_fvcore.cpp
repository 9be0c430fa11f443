#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_support.hpp"

using namespace mrrd;
using namespace mrrd::testing;

namespace {

Model1Spec heat() {
  Model1Spec m;
  m.A = DiffusionFunction{1.0, 0.0, false};
  m.reaction = Model1Reaction::none;
  return m;
}

}  // namespace

TEST_CASE("two-point diffusive flux") {
  const DiffusionFunction I{};
  CHECK(diffusive_flux(0.3, 0.3, 0.1, I) == 0.0);
  CHECK(diffusive_flux(0.0, 1.0, 0.5, I) == -2.0);
  const DiffusionFunction deg{1.0, 0.5, true};
  CHECK(diffusive_flux(0.2, 0.4, 0.1, deg) == 0.0);
  const State c = compose_interface_flux({1.5, -2.0}, {0.25, 1.0});
  CHECK(c[0] == 1.75);
  CHECK(c[1] == -1.0);
}

TEST_CASE("divergence of constant, linear and quadratic data") {
  const int L = 5;
  GradedTree t = uniform_tree(Domain{}, L, 1);
  const ModelSpec spec = heat();
  fill_tree(t, [](double, double) { return State{3.0, 0.0}; });
  for (NodeId id : t.leaf_ids()) CHECK(divergence(spec, t, t.node(id).key)[0] == 0.0);
  fill_tree(t, [](double x, double) { return State{2.0 * x, 0.0}; });
  const int n = 1 << L;
  for (NodeId id : t.leaf_ids()) {
    const NodeKey& k = t.node(id).key;
    if (k.i == 0 || k.i == n - 1) continue;
    CHECK(std::abs(divergence(spec, t, k)[0]) < 1e-9);
  }
  // Cell averages of x^2 are x_c^2 + h^2/12; the discrete Laplacian gives 2.
  const double h = t.cell_size(L);
  fill_tree(t, [h](double x, double) { return State{x * x + h * h / 12.0, 0.0}; });
  for (NodeId id : t.leaf_ids()) {
    const NodeKey& k = t.node(id).key;
    if (k.i == 0 || k.i == n - 1) continue;
    CHECK(divergence(spec, t, k)[0] == doctest::Approx(2.0).epsilon(1e-8));
  }
}

TEST_CASE("adaptive divergence telescopes to zero") {
  Model2Spec m2;
  m2.reaction = false;
  m2.d = 2.5;
  Model3Spec m3;
  m3.reaction = false;
  for (const ModelSpec& spec : {ModelSpec{heat()}, ModelSpec{m2}, ModelSpec{m3}}) {
    const int species = species_count(spec);
    GradedTree t = random_adaptive_tree(Domain{0, 2, 0, 2}, 6, species, 17);
    CHECK(t.leaf_count() < (1u << 12));
    State total{};
    double scale = 0.0;
    for (NodeId id : t.leaf_ids()) {
      const NodeKey& k = t.node(id).key;
      const State d = divergence(spec, t, k);
      const double area = t.cell_size(k.level) * t.cell_size(k.level);
      for (int s = 0; s < species; ++s) {
        total[s] += d[s] * area;
        scale = std::max(scale, std::abs(d[s] * area));
      }
    }
    for (int s = 0; s < species; ++s) CHECK(std::abs(total[s]) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("fluxes across an edge are antisymmetric") {
  GradedTree t = random_adaptive_tree(Domain{}, 6, 1, 3);
  const Model1Spec m = heat();
  for (NodeId id : t.leaf_ids()) {
    const Node& n = t.node(id);
    NodeId nb = kNoNode;
    const EdgeKind kind = classify_edge(t, n, Direction::east, nb);
    if (kind != EdgeKind::same_level) continue;
    const State a = outward_flux(m, t, n, Direction::east, kind, nb);
    NodeId back = kNoNode;
    const Node& o = t.node(nb);
    const EdgeKind kb = classify_edge(t, o, Direction::west, back);
    const State b = outward_flux(m, t, o, Direction::west, kb, back);
    CHECK(a[0] == -b[0]);
  }
}

TEST_CASE("fully refined tree reproduces the dense step") {
  const int L = 7;
  const Domain dom{0, 1, 0, 1};
  Model1Spec m1;
  Model2Spec m2;
  m2.kinetics = Kinetics::schnakenberg;
  m2.gamma = 5.0;
  m2.d = 3.0;
  Model3Spec m3;
  for (const ModelSpec& spec : {ModelSpec{m1}, ModelSpec{m2}, ModelSpec{m3}}) {
    const int species = species_count(spec);
    GradedTree t = uniform_tree(dom, L, species);
    fill_tree(t, [](double x, double y) {
      return State{0.6 + 0.4 * std::sin(6 * x) * std::cos(5 * y), 0.5 + 0.3 * std::cos(7 * x * y)};
    });
    DenseSolver dense(spec, dom, L);
    dense.set_state(field_from_tree_leaves(t));
    const double dt = 1e-5;
    march(spec, t, dt);
    dense.step(dt);
    const Field mr = field_from_tree_leaves(t);
    double worst = 0.0;
    for (std::size_t k = 0; k < mr.data.size(); ++k) {
      worst = std::max(worst, std::abs(mr.data[k] - dense.state().data[k]));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("Euler update examples") {
  GradedTree t = uniform_tree(Domain{}, 3, 1);
  Model1Spec decay;
  decay.reaction = Model1Reaction::linear;
  decay.rate = -1.0;
  fill_tree(t, [](double, double) { return State{1.0, 0.0}; });
  march(ModelSpec{decay}, t, 0.1);
  for (NodeId id : t.leaf_ids()) CHECK(t.node(id).avg[0] == doctest::Approx(0.9));

  Model2Spec sch;
  sch.kinetics = Kinetics::schnakenberg;
  sch.gamma = 210.0;
  sch.d = 4.8;
  const State s0 = schnakenberg_steady_state(sch.a, sch.b);
  GradedTree t2 = uniform_tree(Domain{}, 3, 2);
  fill_tree(t2, [&](double, double) { return s0; });
  march(ModelSpec{sch}, t2, 1e-3);
  for (NodeId id : t2.leaf_ids()) {
    CHECK(std::abs(t2.node(id).avg[0] - s0[0]) < 1e-12);
    CHECK(std::abs(t2.node(id).avg[1] - s0[1]) < 1e-12);
  }

  Model2Spec still;
  still.reaction = false;
  fill_tree(t2, [](double, double) { return State{0.4, 0.7}; });
  march(ModelSpec{still}, t2, 0.5);
  for (NodeId id : t2.leaf_ids()) CHECK(t2.node(id).avg[0] == 0.4);
}

TEST_CASE("chemotaxis terms") {
  Model3Spec m;
  GradedTree t = uniform_tree(Domain{0, 16, 0, 16}, 4, 2);
  // v constant: only diffusion and growth remain.
  fill_tree(t, [](double x, double) { return State{1.0 + 0.1 * std::cos(x), 1.0 / 32.0}; });
  Model3Spec no_chem = m;
  no_chem.nu = 1e-300;
  for (NodeId id : t.leaf_ids()) {
    const NodeKey& k = t.node(id).key;
    CHECK(divergence(ModelSpec{m}, t, k)[0] == doctest::Approx(divergence(ModelSpec{no_chem}, t, k)[0]));
  }
  // u identically zero stays zero.
  fill_tree(t, [](double x, double y) { return State{0.0, 0.1 * std::sin(x + y)}; });
  march(ModelSpec{m}, t, 1e-3);
  for (NodeId id : t.leaf_ids()) CHECK(t.node(id).avg[0] == 0.0);
}

TEST_CASE("chemotaxis on a 5x5 patch matches the nested difference formula") {
  const int n = 5;
  const double h = 1.0 / n;
  Field w(n, n, 2);
  const double v0 = 1.0 / 32.0;
  const double bump = 0.01;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      w.at(0, i, j) = 1.0 + 0.05 * i - 0.02 * j;
      w.at(1, i, j) = (i == 2 && j == 2) ? v0 + bump : v0;
    }
  }
  for (ChemotaxisSign sign : {ChemotaxisSign::printed, ChemotaxisSign::attractive}) {
    Model3Spec m;
    m.sign = sign;
    m.reaction = false;
    DenseSolver d(ModelSpec{m}, Domain{0, 1, 0, 1}, 0, n, n);
    d.set_state(w);
    Field rate;
    d.compute_rates(rate);
    // Hand evaluation at the centre: sigma * 5-point Laplacian of u plus
    // s * delta+ (Q delta- v) in both directions, Q the mean of nu * u.
    auto u = [&](int i, int j) { return w.at(0, i, j); };
    auto v = [&](int i, int j) { return w.at(1, i, j); };
    const int i = 2;
    const int j = 2;
    const double lap = (u(i + 1, j) + u(i - 1, j) + u(i, j + 1) + u(i, j - 1) - 4 * u(i, j)) / (h * h);
    auto q = [&](int a, int b, int c, int e) { return 0.5 * m.nu * (u(a, b) + u(c, e)); };
    const double chem = (q(i, j, i + 1, j) * (v(i + 1, j) - v(i, j)) -
                         q(i - 1, j, i, j) * (v(i, j) - v(i - 1, j)) +
                         q(i, j, i, j + 1) * (v(i, j + 1) - v(i, j)) -
                         q(i, j - 1, i, j) * (v(i, j) - v(i, j - 1))) /
                        (h * h);
    const double s = sign == ChemotaxisSign::printed ? 1.0 : -1.0;
    CHECK(rate.at(0, i, j) == doctest::Approx(m.sigma * lap + s * chem).epsilon(1e-12));
    // Attraction draws cells towards the peak of v.
    if (sign == ChemotaxisSign::attractive) CHECK(rate.at(0, i, j) > m.sigma * lap);
  }
}

TEST_CASE("dense solver conserves mass without reaction") {
  Model2Spec m;
  m.reaction = false;
  DenseSolver d(ModelSpec{m}, Domain{-30, 30, -30, 30}, 6);
  InitialSpec init;
  init.kind = InitialKind::flame_balls;
  d.set_state(make_initial_field(init, ModelSpec{m}, Domain{-30, 30, -30, 30}, 6)->sample(6));
  auto mass = [&] {
    double s = 0.0;
    for (std::size_t k = 0; k < d.state().cells(); ++k) s += d.state().data[k];
    return s;
  };
  const double m0 = mass();
  for (int k = 0; k < 50; ++k) d.step(d.stable_dt(0.9, 1.0));
  CHECK(std::abs(mass() - m0) <= 1e-12 * m0);
}
