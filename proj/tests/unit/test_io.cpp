#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mrrd/config.hpp"
#include "mrrd/driver.hpp"
#include "mrrd/io.hpp"
#include "mrrd/metrics.hpp"
#include "test_support.hpp"

using namespace mrrd;
using namespace mrrd::testing;

namespace {

std::string scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("mrrd_test_io_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

RunConfig small_model1(const std::string& out) {
  RunConfig c = parse_config(
      "model = model1\nreaction = linear\nrate = 1\nD = 0.5\ninit = cosine\n"
      "init.base = 1,0\ninit.amplitude = 0.5,0\ninit.mode = 1,1\nlevel = 4\n"
      "epsilon_ref = 1e-3\nt_final = 0.05\nsnapshots = 0,0.025\n");
  c.out = out;
  return c;
}

}  // namespace

TEST_CASE("lp errors of a constant offset equal the offset") {
  Field a(8, 8, 2);
  Field b(8, 8, 2);
  for (std::size_t k = 0; k < a.data.size(); ++k) {
    a.data[k] = 0.1 * static_cast<double>(k);
    b.data[k] = a.data[k] + (k < 64 ? 0.25 : -0.5);
  }
  const LpErrors e = lp_errors(a, b);
  CHECK(e.e1[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(e.e2[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(e.einf[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(e.e1[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(e.einf[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("lp errors of a two-cell difference") {
  Field a(2, 1, 1);
  Field b(2, 1, 1);
  a.data = {1.0, 0.0};
  b.data = {0.0, 3.0};
  const LpErrors e = lp_errors(a, b);
  CHECK(e.e1[0] == doctest::Approx(2.0));
  CHECK(e.e2[0] == doctest::Approx(std::sqrt(5.0)));
  CHECK(e.einf[0] == doctest::Approx(3.0));
}

TEST_CASE("restriction averages four children") {
  Field f(4, 4, 1);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) f.at(0, i, j) = i + 10.0 * j;
  }
  const Field c = restrict_to(f, 1);
  REQUIRE(c.nx == 2);
  CHECK(c.at(0, 0, 0) == doctest::Approx(5.5));
  CHECK(c.at(0, 1, 1) == doctest::Approx(27.5));
}

TEST_CASE("compression rate of a uniform tree") {
  const GradedTree t = uniform_tree(Domain{}, 3, 1);
  const double n = 64.0;
  CHECK(compression_rate(t) == doctest::Approx(n / (1.0 + n)));
  CHECK(compression_rate(1 << 16, 8, 100) == doctest::Approx(65536.0 / (1.0 + 100.0)));
}

TEST_CASE("reaction rate of a uniform state has a closed form") {
  Model2Spec m;
  const Domain d{-30, 30, -30, 30};
  const double v0 = 0.7;
  GradedTree t = uniform_tree(d, 4, 2);
  fill_tree(t, [&](double, double) { return State{1.0, v0}; });
  // f(1, v) = beta^2 / 2 v with beta = 10, over an area of 3600.
  const double expect = 50.0 * v0 * 3600.0;
  CHECK(reaction_rate(t, m) == doctest::Approx(expect).epsilon(1e-12));
  Field w(16, 16, 2);
  for (int j = 0; j < 16; ++j) {
    for (int i = 0; i < 16; ++i) {
      w.at(0, i, j) = 1.0;
      w.at(1, i, j) = v0;
    }
  }
  CHECK(reaction_rate(w, m, 60.0 / 16) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("field snapshots round trip bitwise") {
  const std::string dir = scratch_dir("field");
  Field f(6, 4, 2);
  for (std::size_t k = 0; k < f.data.size(); ++k) f.data[k] = std::sin(1.0 + static_cast<double>(k));
  SnapshotHeader h;
  h.level = 2;
  h.domain = Domain{0, 3, 0, 2};
  h.roots_x = 3;
  h.roots_y = 2;
  h.t = 0.125;
  h.species = {"u", "v"};
  write_field(dir + "/s", f, h);
  SnapshotHeader back;
  const Field g = read_field(dir + "/s", &back);
  CHECK(g.data == f.data);
  CHECK(back.level == 2);
  CHECK(back.t == 0.125);
  CHECK(back.domain.x_max == 3.0);
  CHECK(back.species == h.species);
}

TEST_CASE("compression rate from the tree equals the one from the leaf dump") {
  const std::string dir = scratch_dir("leaves");
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const GradedTree t = random_adaptive_tree(Domain{}, 6, 2, seed);
    write_leaves(dir + "/t.leaves", t, 0.5);
    const LeafDump dump = read_leaves(dir + "/t.leaves");
    const TreeStats a = tree_stats(t);
    const TreeStats b = tree_stats(dump);
    CHECK(a.leaves == b.leaves);
    CHECK(a.eta == b.eta);
    CHECK(a.l_min == b.l_min);
    CHECK(a.leaves_per_level == b.leaves_per_level);
    CHECK(dump.t == 0.5);
    CHECK(dump.species == 2);
    const auto ids = t.leaf_ids();
    REQUIRE(ids.size() == dump.values.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      CHECK(dump.values[k][0] == t.node(ids[k]).avg[0]);
    }
  }
}

TEST_CASE("metrics table is append only with a single header") {
  const std::string dir = scratch_dir("csv");
  const std::string path = dir + "/m.csv";
  MetricsRecord r;
  r.t = 1.0;
  r.eta = 3.5;
  {
    MetricsCsv csv(path);
    csv.append(r);
  }
  {
    MetricsCsv csv(path);
    r.t = 2.0;
    csv.append(r);
  }
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == MetricsCsv::header());
  CHECK(lines[1].rfind("1,nan,3.5,", 0) == 0);
  CHECK(lines[2].rfind("2,", 0) == 0);
  const auto columns = [](const std::string& s) { return std::count(s.begin(), s.end(), ',') + 1; };
  CHECK(columns(lines[0]) == 15);
  CHECK(columns(lines[1]) == 15);
}

TEST_CASE("config text round trips for every scenario") {
  for (const auto& name : preset_names()) {
    const RunConfig c = preset(name);
    validate(c);
    const std::string text = to_text(c);
    CHECK(to_text(parse_config(text)) == text);
  }
}

TEST_CASE("config keys apply after the scenario and model") {
  const RunConfig c = parse_config("level = 5\nmodel = model2\nscenario = example3\n# note\nrho = 0.1\n");
  CHECK(c.level == 5);
  CHECK(c.scenario == "example3");
  const auto& m = std::get<Model2Spec>(c.model);
  CHECK(m.rho == 0.1);
  CHECK(m.d == doctest::Approx(1.0 / 0.3));
}

TEST_CASE("config errors are reported") {
  CHECK_THROWS_AS(parse_config("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("level = five\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("C = 1\nepsilon_ref = 1e-3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("cfl = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("t_final = 1\nsnapshots = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("model = model4\n"), ConfigError);
  try {
    parse_config("level = 4\n\nnu = 3\n");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("snapshot schedule is sorted and ends at the final time") {
  RunConfig c;
  c.t_final = 2.0;
  c.snapshots = {1.0, 0.5, 1.0};
  CHECK(snapshot_schedule(c) == std::vector<double>{0.5, 1.0, 2.0});
  c.t_final = 0.0;
  c.snapshots = {0.0};
  CHECK(snapshot_schedule(c) == std::vector<double>{0.0});
}

TEST_CASE("order fit recovers an exact power law") {
  std::vector<int> levels{4, 5, 6, 7};
  std::vector<double> e;
  for (int l : levels) e.push_back(3.0 * std::pow(2.0, -2.0 * l));
  CHECK(fit_order(levels, e) == doctest::Approx(2.0));
}

TEST_CASE("a zero final time writes only the initial snapshot") {
  const std::string dir = scratch_dir("t0");
  RunConfig c = small_model1(dir);
  c.t_final = 0.0;
  c.snapshots = {};
  const RunResult r = run(c);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].t == 0.0);
  CHECK(r.steps == 0);
  CHECK(std::filesystem::exists(dir + "/mr_t0.bin"));
  CHECK(read_lines(dir + "/metrics.csv").size() == 2);
}

TEST_CASE("a paired run writes consistent outputs") {
  const std::string dir = scratch_dir("paired");
  RunConfig c = small_model1(dir);
  c.paired_dense = true;
  const RunResult r = run(c);
  REQUIRE(r.records.size() == 3);
  CHECK(r.records.back().t == doctest::Approx(0.05));
  CHECK(r.records.back().errors.e1[0] < 1e-2);
  CHECK(std::isnan(r.records.back().errors.e1[1]));
  const LeafDump dump = read_leaves(dir + "/mr_t0.05.leaves");
  CHECK(tree_stats(dump).eta == r.final_stats.eta);
  const auto meta = read_lines(dir + "/run_meta.txt");
  CHECK(std::find(meta.begin(), meta.end(), "status = ok") != meta.end());
  CHECK(parse_config(to_text(load_config(dir + "/config.txt"))).level == 4);
}

TEST_CASE("chemotaxis runs record the sign") {
  const std::string dir = scratch_dir("sign");
  RunConfig c = parse_config("scenario = example6\nlevel = 4\nt_final = 0\nsnapshots = 0\npresmooth_time = 0\n");
  c.out = dir;
  run(c);
  const auto meta = read_lines(dir + "/run_meta.txt");
  CHECK(std::find(meta.begin(), meta.end(), "chemotaxis_sign = attractive") != meta.end());
}
