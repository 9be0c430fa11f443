#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "mrrd/config.hpp"
#include "mrrd/field.hpp"
#include "mrrd/metrics.hpp"
#include "mrrd/quadtree.hpp"

namespace mrrd {

std::vector<std::string> species_names(const ModelSpec& spec);

// Field snapshot: <stem>.hdr (text), <stem>.bin (row-major doubles, one plane
// per species) and, for adaptive runs, <stem>.leaves (one leaf per line).
struct SnapshotHeader {
  int level = 0;
  int nx = 0;
  int ny = 0;
  Domain domain;
  int roots_x = 1;
  int roots_y = 1;
  double t = 0.0;
  std::vector<std::string> species;
};

void write_field(const std::string& stem, const Field& f, const SnapshotHeader& hdr);
Field read_field(const std::string& stem, SnapshotHeader* hdr = nullptr);
void write_leaves(const std::string& path, const GradedTree& tree, double t);
// Writes all three files of an adaptive snapshot.
void write_snapshot(const std::string& stem, const GradedTree& tree, const ModelSpec& spec, double t);

struct LeafDump {
  int max_level = 0;
  int roots_x = 1;
  int roots_y = 1;
  Domain domain;
  double t = 0.0;
  int species = 1;
  std::vector<NodeKey> keys;
  std::vector<State> values;
};

LeafDump read_leaves(const std::string& path);

struct TreeStats {
  std::vector<std::size_t> leaves_per_level;
  std::size_t leaves = 0;
  double eta = 0.0;
  int l_min = 0;
};

TreeStats tree_stats(const LeafDump& dump);
TreeStats tree_stats(const GradedTree& tree);
std::string format_stats(const TreeStats& s);

// Append-only metrics table, one row per snapshot, fixed column order.
class MetricsCsv {
 public:
  explicit MetricsCsv(const std::string& path);
  ~MetricsCsv();
  MetricsCsv(const MetricsCsv&) = delete;
  MetricsCsv& operator=(const MetricsCsv&) = delete;

  void append(const MetricsRecord& r);
  static const char* header();

 private:
  std::FILE* file_ = nullptr;
};

std::string format_record(const MetricsRecord& r);

// key = value lines describing a run.
void write_meta(const std::string& path, const std::map<std::string, std::string>& entries);

// Snapshot file stem for time t, e.g. "snap_t0.5".
std::string snapshot_stem(const std::string& dir, const std::string& prefix, double t);
void ensure_directory(const std::string& dir);

}  // namespace mrrd
