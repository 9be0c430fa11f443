#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mrrd/mrtransform.hpp"

using namespace mrrd;

namespace {

// Exact cell average of sum c[a][b] x^a y^b, a + b <= 2.
struct Quadratic {
  double c[3][3] = {};
  double average(double x0, double x1, double y0, double y1) const {
    double s = 0.0;
    for (int a = 0; a <= 2; ++a) {
      for (int b = 0; a + b <= 2; ++b) {
        const double ix = (std::pow(x1, a + 1) - std::pow(x0, a + 1)) / (a + 1);
        const double iy = (std::pow(y1, b + 1) - std::pow(y0, b + 1)) / (b + 1);
        s += c[a][b] * ix * iy;
      }
    }
    return s / ((x1 - x0) * (y1 - y0));
  }
};

Quadratic random_quadratic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Quadratic q;
  for (int a = 0; a <= 2; ++a) {
    for (int b = 0; a + b <= 2; ++b) q.c[a][b] = u(rng);
  }
  return q;
}

Field random_field(int n, int species, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field f(n, n, species);
  for (double& v : f.data) v = u(rng);
  return f;
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) m = std::max(m, std::abs(a.data[k] - b.data[k]));
  return m;
}

}  // namespace

TEST_CASE("prediction is exact for quadratics") {
  std::mt19937_64 rng(3);
  const double h = 0.125;
  for (int trial = 0; trial < 50; ++trial) {
    const Quadratic q = random_quadratic(rng);
    Stencil st;
    for (int a = -2; a <= 2; ++a) {
      for (int b = -2; b <= 2; ++b) {
        const double x0 = (4 + a) * h;
        const double y0 = (4 + b) * h;
        st[a + 2][b + 2] = {q.average(x0, x0 + h, y0, y0 + h), 0.0};
      }
    }
    const SonValues sons = predict(st, 1);
    for (int e2 = 0; e2 < 2; ++e2) {
      for (int e1 = 0; e1 < 2; ++e1) {
        const double x0 = 4 * h + e1 * h / 2;
        const double y0 = 4 * h + e2 * h / 2;
        CHECK(std::abs(sons[e1 + 2 * e2][0] - q.average(x0, x0 + h / 2, y0, y0 + h / 2)) < 1e-12);
      }
    }
    const State back = project(sons, 1);
    CHECK(std::abs(back[0] - st[2][2][0]) <= 4e-16 * std::max(1.0, std::abs(st[2][2][0])));
  }
}

TEST_CASE("sign variant of the prediction is not consistent") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Stencil st;
  for (auto& row : st) {
    for (auto& v : row) v = {u(rng), 0.0};
  }
  const State back = project(predict_sign_variant(st, 1), 1);
  CHECK(std::abs(back[0] - st[2][2][0]) > 1e-6);
}

TEST_CASE("detail norms and level tolerance") {
  const State d{0.3, -0.4};
  CHECK(combine_detail(d, 2, DetailNorm::min_abs) == doctest::Approx(0.3));
  CHECK(combine_detail(d, 2, DetailNorm::max_abs) == doctest::Approx(0.4));
  CHECK(combine_detail(d, 2, DetailNorm::euclidean) == doctest::Approx(0.5));
  CHECK(combine_detail(d, 1, DetailNorm::min_abs) == doctest::Approx(0.3));
  CHECK(level_tolerance(1e-3, 8, 8) == 1e-3);
  CHECK(level_tolerance(1e-3, 7, 8) == 0.25e-3);
  CHECK(parse_detail_norm("euclidean") == DetailNorm::euclidean);
  CHECK_THROWS_AS(parse_detail_norm("l7"), ConfigError);
}

TEST_CASE("encode and decode round trip") {
  for (int n : {64, 128}) {
    const Field f = random_field(n, 2, static_cast<std::uint64_t>(n));
    const int levels = static_cast<int>(std::log2(n));
    const Field back = decode(encode(f, levels));
    CHECK(max_diff(f, back) <= 1e-12);
  }
}

TEST_CASE("thresholding a constant field keeps it exact") {
  Field f(32, 32, 1);
  for (double& v : f.data) v = 0.7;
  Decomposition dec = encode(f, 5);
  for (const Field& d : dec.details) {
    for (double v : d.data) CHECK(std::abs(v) < 1e-15);
  }
  threshold(dec, 1e-3, DetailNorm::max_abs);
  CHECK(max_diff(decode(dec), f) < 1e-14);
}

TEST_CASE("thresholding a smooth field drops most details with small error") {
  const int n = 128;
  Field f(n, n, 1);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) / n - 0.4;
      const double y = (j + 0.5) / n - 0.55;
      f.at(0, i, j) = std::exp(-30.0 * (x * x + y * y));
    }
  }
  Decomposition dec = encode(f, 7);
  const double eps = 1e-4;
  threshold(dec, eps, DetailNorm::max_abs);
  std::size_t kept = 0;
  std::size_t total = 0;
  for (const Field& d : dec.details) {
    for (double v : d.data) kept += v != 0.0;
    total += d.data.size();
  }
  CHECK(kept < total / 4);
  CHECK(max_diff(decode(dec), f) < 10.0 * eps);
}

TEST_CASE("constant initial data gives the root split once") {
  GradedTree t(Domain{0, 1, 0, 1}, 6, 1);
  build_initial_tree(t, [](const NodeKey&) { return State{1.0, 0.0}; }, MRParams{});
  CHECK(t.leaf_count() == 4);
  CHECK(t.min_leaf_level() == 1);
}

TEST_CASE("front is resolved only near the front") {
  const int L = 7;
  GradedTree t(Domain{0, 1, 0, 1}, L, 1);
  auto avg = [&](const NodeKey& k) {
    const double h = t.cell_size(k.level);
    double s = 0.0;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const double x = (k.i + (a + 0.5) / 4) * h;
        s += std::tanh((x - 0.5) / 0.01) / 16.0;
        (void)b;
      }
    }
    return State{s, 0.0};
  };
  MRParams p;
  p.epsilon_ref = 1e-3;
  build_initial_tree(t, avg, p);
  std::string why;
  CHECK_MESSAGE(t.check_grading(&why), why);
  CHECK_MESSAGE(t.check_partition(&why), why);
  CHECK(t.leaf_count() < (1u << (2 * L)) / 3);
  for (NodeId id : t.leaves_at(L)) {
    const double x = t.center_x(t.node(id).key);
    CHECK(std::abs(x - 0.5) < 0.1);
  }
  CHECK(!t.leaves_at(L).empty());
}

TEST_CASE("fill to the finest level is conservative") {
  const int L = 6;
  GradedTree t(Domain{0, 1, 0, 1}, L, 1);
  auto avg = [&](const NodeKey& k) {
    const double h = t.cell_size(k.level);
    const double x = (k.i + 0.5) * h;
    const double y = (k.j + 0.5) * h;
    return State{std::exp(-40.0 * ((x - 0.3) * (x - 0.3) + (y - 0.6) * (y - 0.6))), 0.0};
  };
  build_initial_tree(t, avg, MRParams{1e-3});
  const Field fine = fill_finest(t);
  std::vector<Field> pyr(L + 1);
  pyr[L] = fine;
  for (int l = L; l > 0; --l) pyr[l - 1] = project_field(pyr[l]);
  for (NodeId id : t.leaf_ids()) {
    const Node& n = t.node(id);
    CHECK(std::abs(pyr[n.key.level].at(0, n.key.i, n.key.j) - n.avg[0]) < 1e-14);
  }
}

TEST_CASE("adaptation reaches a fixed point") {
  const int L = 6;
  GradedTree t(Domain{0, 1, 0, 1}, L, 1);
  auto avg = [&](const NodeKey& k) {
    const double h = t.cell_size(k.level);
    const double x = (k.i + 0.5) * h;
    const double y = (k.j + 0.5) * h;
    return State{std::tanh((x + y - 1.0) / 0.05), 0.0};
  };
  MRParams p{1e-3};
  build_initial_tree(t, avg, p);
  std::vector<NodeKey> before;
  for (int pass = 0; pass < 20; ++pass) {
    before = t.leaves();
    const AdaptStats s = update_tree(t, p);
    if (s.coarsened == 0 && s.refined == 0) break;
  }
  update_tree(t, p);
  CHECK(t.leaves() == before);
  std::string why;
  CHECK_MESSAGE(t.check_grading(&why), why);
  CHECK_MESSAGE(t.check_virtual_rule(&why), why);
}

TEST_CASE("update_tree keeps the mean") {
  const int L = 6;
  GradedTree t(Domain{0, 1, 0, 1}, L, 1);
  auto avg = [&](const NodeKey& k) {
    const double h = t.cell_size(k.level);
    const double x = (k.i + 0.5) * h;
    return State{x < 0.5 ? 1.0 : 0.0, 0.0};
  };
  MRParams p{1e-3};
  build_initial_tree(t, avg, p);
  auto mass = [&] {
    double m = 0.0;
    for (NodeId id : t.leaf_ids()) {
      const double h = t.cell_size(t.node(id).key.level);
      m += t.node(id).avg[0] * h * h;
    }
    return m;
  };
  const double m0 = mass();
  for (int pass = 0; pass < 5; ++pass) update_tree(t, MRParams{1e-1});
  CHECK(std::abs(mass() - m0) < 1e-14);
}
