#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "mrrd/quadtree.hpp"

using namespace mrrd;

namespace {

void require_valid(const GradedTree& t) {
  std::string why;
  CHECK_MESSAGE(t.check_grading(&why), why);
  CHECK_MESSAGE(t.check_completeness(&why), why);
  CHECK_MESSAGE(t.check_partition(&why), why);
  CHECK_MESSAGE(t.check_virtual_rule(&why), why);
}

}  // namespace

TEST_CASE("root tree and cell sizes") {
  GradedTree t(Domain{0, 1, 0, 1}, 8, 1);
  CHECK(t.leaf_count() == 1);
  CHECK(t.cell_size(0) == 1.0);
  CHECK(t.leaves().front() == NodeKey{0, 0, 0});
  GradedTree big(Domain{-30, 30, -30, 30}, 10, 2);
  CHECK(big.cell_size(10) == doctest::Approx(60.0 / 1024.0));
  GradedTree chem(Domain{0, 16, 0, 16}, 9, 2);
  CHECK(chem.cell_size(9) == 0.03125);
  require_valid(t);
}

TEST_CASE("non-square cells are rejected") {
  CHECK_THROWS_AS(GradedTree(Domain{0, 2, 0, 1}, 4, 1), ConfigError);
  CHECK_NOTHROW(GradedTree(Domain{0, 2, 0, 1}, 4, 1, 2, 1));
}

TEST_CASE("keys") {
  const NodeKey k{5, 6, 3};
  CHECK(k.parent() == NodeKey{2, 3, 2});
  CHECK(k.son(1, 0) == NodeKey{11, 12, 4});
  CHECK(k.son(1, 1).son_index() == 3);
  CHECK(key_less(NodeKey{9, 9, 1}, NodeKey{0, 0, 2}));
  CHECK(key_less(NodeKey{0, 5, 2}, NodeKey{1, 0, 2}));
  CHECK(reflect_index(-1, 8) == 0);
  CHECK(reflect_index(-2, 8) == 1);
  CHECK(reflect_index(8, 8) == 7);
  CHECK(reflect_index(9, 8) == 6);
}

TEST_CASE("split and coarsen") {
  GradedTree t(Domain{0, 1, 0, 1}, 4, 1);
  t.node(t.find(NodeKey{0, 0, 0})).avg = {2.0, 0.0};
  t.split_leaf(NodeKey{0, 0, 0});
  CHECK(t.leaf_count() == 4);
  for (const NodeKey& k : t.leaves()) CHECK(t.node(t.find(k)).avg[0] == 2.0);
  require_valid(t);
  t.node(t.find(NodeKey{1, 1, 1})).avg = {6.0, 0.0};
  for (const NodeKey& k : t.leaves()) t.node(t.find(k)).deletable = true;
  CHECK(t.coarsen(NodeKey{0, 0, 0}) == CoarsenOutcome::coarsened);
  CHECK(t.node(t.find(NodeKey{0, 0, 0})).avg[0] == 3.0);
  CHECK(t.leaf_count() == 1);
  require_valid(t);
}

TEST_CASE("split at the finest level is refused") {
  GradedTree t(Domain{0, 1, 0, 1}, 1, 1);
  t.split_leaf(NodeKey{0, 0, 0});
  CHECK_THROWS_AS(t.split_leaf(NodeKey{0, 0, 1}), RefusalError);
}

TEST_CASE("graded split refines coarser neighbours") {
  GradedTree t(Domain{0, 1, 0, 1}, 6, 1);
  t.split_leaf(NodeKey{0, 0, 0});
  CHECK(t.split_graded(NodeKey{1, 1, 1}));
  CHECK(t.split_graded(NodeKey{3, 3, 2}));
  CHECK(t.split_graded(NodeKey{7, 7, 3}));
  t.ensure_virtual_cousins();
  require_valid(t);
  // The corner cell far away stays coarse.
  CHECK(t.find(NodeKey{0, 0, 1}) != kNoNode);
  // Grading would need coarser splits below the allowed level.
  CHECK_FALSE(t.split_graded(NodeKey{0, 0, 1}.son(0, 0), 2));
}

TEST_CASE("virtual leaves complete every real stencil") {
  GradedTree t(Domain{0, 1, 0, 1}, 5, 1);
  t.split_leaf(NodeKey{0, 0, 0});
  t.split_graded(NodeKey{0, 0, 1});
  t.split_graded(NodeKey{1, 1, 2});
  t.ensure_virtual_cousins();
  require_valid(t);
  CHECK(t.virtual_count() > 0);
  for (const NodeKey& k : t.leaves()) {
    for (int a = -2; a <= 2; ++a) {
      for (int b = -2; b <= 2; ++b) {
        CHECK(t.find_reflected(k.i + a, k.j + b, k.level) != kNoNode);
      }
    }
  }
}

TEST_CASE("randomised edits keep the invariants") {
  GradedTree t(Domain{0, 1, 0, 1}, 6, 1);
  std::mt19937_64 rng(7);
  for (int it = 0; it < 2000; ++it) {
    const auto leaves = t.leaves();
    const NodeKey k = leaves[rng() % leaves.size()];
    if (rng() % 2 == 0) {
      t.split_graded(k);
    } else if (k.level > 0) {
      const NodeKey p = k.parent();
      const NodeId pid = t.find(p);
      for (int e = 0; e < 4; ++e) t.node(t.node(pid).first_son + e).deletable = true;
      t.coarsen(p);
    }
    t.refresh_virtual_cousins();
    if (it % 50 == 0) {
      std::string why;
      REQUIRE_MESSAGE(t.check_grading(&why), why);
      REQUIRE_MESSAGE(t.check_completeness(&why), why);
      REQUIRE_MESSAGE(t.check_partition(&why), why);
      REQUIRE_MESSAGE(t.check_virtual_rule(&why), why);
    }
  }
  require_valid(t);
}

TEST_CASE("neighbor lookup") {
  GradedTree t(Domain{0, 1, 0, 1}, 3, 1);
  t.split_leaf(NodeKey{0, 0, 0});
  CHECK(t.neighbor(NodeKey{0, 0, 1}, Direction::east) == NodeKey{1, 0, 1});
  CHECK(!t.neighbor(NodeKey{0, 0, 1}, Direction::west).has_value());
}

TEST_CASE("leaf dump lists leaves only") {
  GradedTree t(Domain{0, 1, 0, 1}, 3, 1);
  t.split_leaf(NodeKey{0, 0, 0});
  std::ostringstream os;
  t.dump(os, true);
  int lines = 0;
  std::istringstream is(os.str());
  for (std::string line; std::getline(is, line);) ++lines;
  CHECK(lines == 4);
}
