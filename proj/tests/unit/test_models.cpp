#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mrrd/models.hpp"

using namespace mrrd;

TEST_CASE("Arrhenius kinetics") {
  Model2Spec m;
  m.alpha = 0.64;
  m.beta = 10.0;
  const ModelSpec spec = m;
  CHECK(eval_kinetics(spec, 1.0, 0.3, 0, 0)[0] == doctest::Approx(15.0));
  CHECK(eval_kinetics(spec, 0.2, 0.0, 0, 0)[0] == 0.0);
  const State w = eval_kinetics(spec, 0.4, 0.6, 0, 0);
  CHECK(w[1] == -w[0]);
  Model2Spec bad = m;
  bad.alpha = 2.0;
  CHECK_THROWS_AS(arrhenius_rate(bad, 0.5, 1.0), NumericalError);
}

TEST_CASE("Schnakenberg steady state") {
  Model2Spec m;
  m.kinetics = Kinetics::schnakenberg;
  m.a = -0.5;
  m.b = 1.9;
  const State s = schnakenberg_steady_state(m.a, m.b);
  CHECK(s[0] == doctest::Approx(1.4));
  CHECK(s[1] == doctest::Approx(0.96939).epsilon(1e-5));
  const State r = eval_kinetics(ModelSpec{m}, 1.4, 0.96939, 0, 0);
  CHECK(std::abs(r[0]) < 1e-4);
  CHECK(std::abs(r[1]) < 1e-4);
  const State exact = source_term(m, s, 0, 0);
  CHECK(std::abs(exact[0]) < 1e-12);
  CHECK(std::abs(exact[1]) < 1e-12);
}

TEST_CASE("radiation") {
  Model2Spec m;
  m.alpha = 0.64;
  m.rho = 0.05;
  CHECK(radiation(m, 0.0) == 0.0);
  double prev = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double s = radiation(m, 0.1 * k);
    CHECK(s > prev);
    prev = s;
  }
  const double c = 1.0 / m.alpha - 1.0;
  CHECK(radiation(m, 0.5) == doctest::Approx(m.rho * (std::pow(0.5 + c, 4) - std::pow(c, 4))));
}

TEST_CASE("diffusion functions") {
  const DiffusionFunction A{1.0, 0.5, true};
  CHECK(A.value(0.4) == 0.0);
  CHECK(A.value(0.9) == doctest::Approx(0.4));
  CHECK(A.derivative(0.4) == 0.0);
  CHECK(A.derivative(0.5) == 1.0);
  const DiffusionFunction B{1.0, 1.2, true};
  CHECK(B.value(1.2) == 0.0);
  const DiffusionFunction I{};
  CHECK(I.derivative(-3.0) == 1.0);
  CHECK(I.value(0.25) == 0.25);
}

TEST_CASE("Turing gate") {
  const TuringResult r = check_turing_instability(-0.5, 1.9, 4.8);
  CHECK(r.verdict == TuringVerdict::unstable_pattern);
  CHECK(r.L_minus == doctest::Approx(0.5186).epsilon(1e-3));
  CHECK(r.L_plus == doctest::Approx(0.7873).epsilon(1e-3));
  CHECK(check_turing_instability(0.1, 0.9, 1.0).verdict == TuringVerdict::stable);
  CHECK(check_turing_instability(0.9, 0.5, 4.0).verdict != TuringVerdict::unstable_pattern);
  CHECK(check_turing_instability(0.1, -1.0, 4.0).verdict == TuringVerdict::invalid);
  const TuringResult g = check_turing_instability(-0.5, 1.9, 4.8, 210.0);
  CHECK(g.k1_sq == doctest::Approx(210.0 * g.L_minus));
}

TEST_CASE("Turing gate agrees with a direct inequality check") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ua(-1.0, 1.0);
  std::uniform_real_distribution<double> ub(0.01, 3.0);
  std::uniform_real_distribution<double> ud(0.1, 20.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = ua(rng);
    const double b = ub(rng);
    const double d = ud(rng);
    const TuringResult r = check_turing_instability(a, b, d);
    if (a + b <= 0.0) {
      CHECK(r.verdict == TuringVerdict::invalid);
      continue;
    }
    const double s = a + b;
    const bool all = 0 < b - a && b - a < s * s * s && d * (b - a) > s * s * s &&
                     std::pow(d * (b - a) - s * s * s, 2) > 4 * d * std::pow(s, 4);
    CHECK((r.verdict == TuringVerdict::unstable_pattern) == all);
  }
}

TEST_CASE("sup norms and time step") {
  Model2Spec m;
  m.gamma = 0.0;
  const ModelSpec spec = m;
  StateBox box;
  box.species = 2;
  box.lo = {0.0, 0.0};
  box.hi = {1.0, 1.0};
  const SupNorms n = sup_norms(spec, box, Domain{});
  const CflTerms t = cfl_terms(spec, n);
  CHECK(t.reaction == 0.0);
  CHECK(t.diffusion == 2.0);
  const double h = 0.01;
  const CflTerms td{0.0, 1.0};
  CHECK(compute_dt(td, h, 1.0, 1.0) == doctest::Approx(h * h / 4));
  const CflTerms tr{4.0, 0.0};
  CHECK(compute_dt(tr, h, 1.0, 1.0) == doctest::Approx(h / 4));
  const CflTerms mixed{3.0, 2.5};
  const double dt = compute_dt(mixed, h, 0.9, 1.0);
  CHECK(cfl_lhs(mixed, h, dt) <= 0.9 + 1e-12);
  CHECK(compute_dt(CflTerms{}, h, 1.0, 0.5) == 0.5);
}

TEST_CASE("box inflation") {
  StateBox box;
  box.species = 1;
  box.lo = {0.0, 0.0};
  box.hi = {1.0, 0.0};
  const StateBox b = inflate(box, 0.1);
  CHECK(b.lo[0] == doctest::Approx(-0.1));
  CHECK(b.hi[0] == doctest::Approx(1.1));
  const StateBox c = inflate(observe_box({{0.5, 0.0}}, 1), 0.1);
  CHECK(c.hi[0] > c.lo[0]);
}

TEST_CASE("reference tolerance scales with the level") {
  Model1Spec m;
  SupNorms n;
  n.f_u = 10.0;
  n.a_prime = 1.0;
  const double e8 = reference_tolerance(ModelSpec{m}, 1e9, 8, n, 1.0, kDefaultConvergenceOrder);
  const double e9 = reference_tolerance(ModelSpec{m}, 1e9, 9, n, 1.0, kDefaultConvergenceOrder);
  CHECK(e8 > e9);
  const double expected = 1e9 * std::exp2(-4.18 * 8) / (10.0 + 256.0 * 4.0);
  CHECK(e8 == doctest::Approx(expected));
  SupNorms zero;
  CHECK_THROWS_AS(reference_tolerance(ModelSpec{m}, 1.0, 8, zero, 1.0, 2.0), ConfigError);
}

TEST_CASE("flame ball initial data") {
  InitialSpec init;
  init.kind = InitialKind::flame_balls;
  init.quadrature = Quadrature::midpoint;
  const Domain dom{-30, 30, -30, 30};
  auto f = make_initial_field(init, Model2Spec{}, dom, 10);
  // Cell centred on (-7.5, 0) is inside the first ball.
  const double h = 60.0 / 1024;
  const int i = static_cast<int>((-7.5 + 30.0) / h);
  const int j = static_cast<int>(30.0 / h);
  const State w = f->average(NodeKey{i, j, 10});
  CHECK(w[0] == 1.0);
  CHECK(w[1] == 0.0);
  const State far = f->average(NodeKey{0, 0, 10});
  CHECK(far[0] + far[1] == doctest::Approx(1.0));
  CHECK(far[0] < 1e-3);
}

TEST_CASE("Example 1 data and quadrature") {
  InitialSpec init;
  init.kind = InitialKind::example1;
  auto f = make_initial_field(init, Model1Spec{}, Domain{}, 8);
  const State root = f->average(NodeKey{0, 0, 0});
  CHECK(std::isfinite(root[0]));
  // Gauss rule is exact on the cubic part, so level averages nearly project.
  const Field s = f->sample(6);
  double sum = 0.0;
  for (double v : s.data) sum += v;
  const State coarse = f->average(NodeKey{0, 0, 0});
  CHECK(std::abs(sum / s.cells() - coarse[0]) < 0.05);
}

TEST_CASE("Turing noise is seeded and centred on the steady state") {
  Model2Spec m;
  m.kinetics = Kinetics::schnakenberg;
  InitialSpec init;
  init.kind = InitialKind::turing_noise;
  init.seed = 9;
  init.noise_std = 0.01;
  const int L = 7;
  auto f = make_initial_field(init, m, Domain{}, L);
  auto g = make_initial_field(init, m, Domain{}, L);
  const Field a = f->sample(L);
  const Field b = g->sample(L);
  CHECK(a.data == b.data);
  const State mean = f->average(NodeKey{0, 0, 0});
  const double bound = 3.0 * init.noise_std / std::sqrt(static_cast<double>(a.cells()));
  CHECK(std::abs(mean[0] - 1.4) < bound);
  CHECK(std::abs(mean[1] - 1.9 / 1.96) < bound);
  CHECK(is_random(init));
}

TEST_CASE("chemotaxis noise vanishes at the centre") {
  InitialSpec init;
  init.kind = InitialKind::chemotaxis_noise;
  init.delta = 0.5;
  init.kappa = 1.0;
  Model3Spec m;
  auto f = make_initial_field(init, m, Domain{0, 16, 0, 16}, 6);
  const Field s = f->sample(6);
  const int c = 32;
  CHECK(std::abs(s.at(0, c, c) - 1.0) < 0.01);
  CHECK(s.at(1, 3, 50) == doctest::Approx(1.0 / 32.0));
}

TEST_CASE("validation") {
  Model3Spec m;
  m.sigma = 0.0;
  CHECK_THROWS_AS(validate(ModelSpec{m}), ConfigError);
  Model1Spec m1;
  m1.A.slope = -1.0;
  CHECK_THROWS_AS(validate(ModelSpec{m1}), ConfigError);
  CHECK_NOTHROW(validate(ModelSpec{Model2Spec{}}));
  CHECK(species_count(ModelSpec{Model1Spec{}}) == 1);
  CHECK(model_family(ModelSpec{Model3Spec{}}) == 3);
}
