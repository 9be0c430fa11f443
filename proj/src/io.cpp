#include "mrrd/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mrrd/mrtransform.hpp"

namespace mrrd {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

[[noreturn]] void io_error(const std::string& what) { throw ConfigError(what); }

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_error("cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key,
                        const std::string& path) {
  const auto it = kv.find(key);
  if (it == kv.end()) io_error("'" + path + "' lacks '" + key + "'");
  return it->second;
}

}  // namespace

std::vector<std::string> species_names(const ModelSpec& spec) {
  switch (model_family(spec)) {
    case 1: return {"u"};
    default: return {"u", "v"};
  }
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) io_error("cannot create directory '" + dir + "': " + ec.message());
}

std::string snapshot_stem(const std::string& dir, const std::string& prefix, double t) {
  std::ostringstream os;
  os << prefix << "_t" << std::setprecision(6) << t;
  return (std::filesystem::path(dir) / os.str()).string();
}

void write_field(const std::string& stem, const Field& f, const SnapshotHeader& hdr) {
  {
    std::ofstream h(stem + ".hdr");
    if (!h) io_error("cannot write '" + stem + ".hdr'");
    h << "level = " << hdr.level << "\nnx = " << f.nx << "\nny = " << f.ny << "\nspecies_count = " << f.species
      << "\ndomain = " << fmt(hdr.domain.x_min) << "," << fmt(hdr.domain.x_max) << ","
      << fmt(hdr.domain.y_min) << "," << fmt(hdr.domain.y_max) << "\nroots = " << hdr.roots_x << ","
      << hdr.roots_y << "\ntime = " << fmt(hdr.t) << "\nspecies =";
    for (const auto& s : hdr.species) h << " " << s;
    h << "\nlayout = row-major float64, index (s * ny + j) * nx + i, little-endian\n";
  }
  std::ofstream b(stem + ".bin", std::ios::binary);
  if (!b) io_error("cannot write '" + stem + ".bin'");
  b.write(reinterpret_cast<const char*>(f.data.data()),
          static_cast<std::streamsize>(f.data.size() * sizeof(double)));
}

Field read_field(const std::string& stem, SnapshotHeader* hdr) {
  const std::string hp = stem + ".hdr";
  const auto kv = read_key_values(hp);
  Field f(std::stoi(need(kv, "nx", hp)), std::stoi(need(kv, "ny", hp)),
          std::stoi(need(kv, "species_count", hp)));
  std::ifstream b(stem + ".bin", std::ios::binary);
  if (!b) io_error("cannot open '" + stem + ".bin'");
  b.read(reinterpret_cast<char*>(f.data.data()), static_cast<std::streamsize>(f.data.size() * sizeof(double)));
  if (!b) io_error("'" + stem + ".bin' is truncated");
  if (hdr) {
    hdr->level = std::stoi(need(kv, "level", hp));
    hdr->nx = f.nx;
    hdr->ny = f.ny;
    hdr->t = std::stod(need(kv, "time", hp));
    const auto d = parse_number_list(need(kv, "domain", hp));
    if (d.size() == 4) hdr->domain = Domain{d[0], d[1], d[2], d[3]};
    std::istringstream names(need(kv, "species", hp));
    hdr->species.clear();
    for (std::string s; names >> s;) hdr->species.push_back(s);
  }
  return f;
}

void write_leaves(const std::string& path, const GradedTree& tree, double t) {
  std::ofstream out(path);
  if (!out) io_error("cannot write '" + path + "'");
  const Domain& d = tree.domain();
  out << "# max_level " << tree.max_level() << "\n# roots " << tree.roots_x() << " " << tree.roots_y()
      << "\n# domain " << fmt(d.x_min) << " " << fmt(d.x_max) << " " << fmt(d.y_min) << " " << fmt(d.y_max)
      << "\n# time " << fmt(t) << "\n# species " << tree.species() << "\n# level i j";
  for (int s = 0; s < tree.species(); ++s) out << " w" << s;
  out << "\n" << std::setprecision(17);
  for (NodeId id : tree.leaf_ids()) {
    const Node& n = tree.node(id);
    out << n.key.level << " " << n.key.i << " " << n.key.j;
    for (int s = 0; s < tree.species(); ++s) out << " " << n.avg[s];
    out << "\n";
  }
}

LeafDump read_leaves(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_error("cannot open '" + path + "'");
  LeafDump dump;
  bool has_level = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    if (line[0] == '#') {
      std::string hash;
      std::string tag;
      is >> hash >> tag;
      if (tag == "max_level") {
        is >> dump.max_level;
        has_level = true;
      } else if (tag == "roots") {
        is >> dump.roots_x >> dump.roots_y;
      } else if (tag == "domain") {
        is >> dump.domain.x_min >> dump.domain.x_max >> dump.domain.y_min >> dump.domain.y_max;
      } else if (tag == "time") {
        is >> dump.t;
      } else if (tag == "species") {
        is >> dump.species;
      }
      continue;
    }
    NodeKey k;
    is >> k.level >> k.i >> k.j;
    State w{};
    for (int s = 0; s < dump.species; ++s) is >> w[s];
    if (!is) io_error("malformed leaf line in '" + path + "': " + line);
    dump.keys.push_back(k);
    dump.values.push_back(w);
  }
  if (!has_level) io_error("'" + path + "' is not a leaf dump");
  return dump;
}

namespace {

TreeStats stats_from_levels(std::vector<std::size_t> per_level, int max_level, int roots_x, int roots_y) {
  TreeStats s;
  s.leaves_per_level = std::move(per_level);
  for (std::size_t c : s.leaves_per_level) s.leaves += c;
  s.l_min = max_level;
  for (int l = 0; l <= max_level; ++l) {
    if (s.leaves_per_level[static_cast<std::size_t>(l)] > 0) {
      s.l_min = l;
      break;
    }
  }
  const auto cells = static_cast<std::size_t>(roots_x) * roots_y << (2 * max_level);
  s.eta = compression_rate(cells, max_level, s.leaves);
  return s;
}

}  // namespace

TreeStats tree_stats(const LeafDump& dump) {
  std::vector<std::size_t> per(static_cast<std::size_t>(dump.max_level + 1), 0);
  for (const NodeKey& k : dump.keys) {
    if (k.level < 0 || k.level > dump.max_level) io_error("leaf level out of range in dump");
    ++per[static_cast<std::size_t>(k.level)];
  }
  return stats_from_levels(std::move(per), dump.max_level, dump.roots_x, dump.roots_y);
}

TreeStats tree_stats(const GradedTree& tree) {
  std::vector<std::size_t> per(static_cast<std::size_t>(tree.max_level() + 1), 0);
  for (int l = 0; l <= tree.max_level(); ++l) per[static_cast<std::size_t>(l)] = tree.leaves_at(l).size();
  return stats_from_levels(std::move(per), tree.max_level(), tree.roots_x(), tree.roots_y());
}

std::string format_stats(const TreeStats& s) {
  std::ostringstream os;
  os << "leaves " << s.leaves << "\neta " << std::setprecision(6) << s.eta << "\nl_min " << s.l_min
     << "\nlevel leaves\n";
  for (std::size_t l = 0; l < s.leaves_per_level.size(); ++l) {
    os << l << " " << s.leaves_per_level[l] << "\n";
  }
  return os.str();
}

void write_snapshot(const std::string& stem, const GradedTree& tree, const ModelSpec& spec, double t) {
  SnapshotHeader hdr;
  hdr.level = tree.max_level();
  hdr.domain = tree.domain();
  hdr.roots_x = tree.roots_x();
  hdr.roots_y = tree.roots_y();
  hdr.t = t;
  hdr.species = species_names(spec);
  write_field(stem, fill_finest(tree), hdr);
  write_leaves(stem + ".leaves", tree, t);
}

const char* MetricsCsv::header() {
  return "t,V,eta,leaves,l_min,e1_u,e2_u,einf_u,e1_v,e2_v,einf_v,R_mr,R_fv,wall_mr,wall_fv";
}

MetricsCsv::MetricsCsv(const std::string& path) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  file_ = std::fopen(path.c_str(), "a");
  if (!file_) io_error("cannot open '" + path + "' for appending");
  if (fresh) {
    std::fprintf(file_, "%s\n", header());
    std::fflush(file_);
  }
}

MetricsCsv::~MetricsCsv() {
  if (file_) std::fclose(file_);
}

std::string format_record(const MetricsRecord& r) {
  std::ostringstream os;
  os << std::setprecision(10);
  auto put = [&](double v) {
    if (std::isnan(v)) {
      os << ",nan";
    } else {
      os << "," << v;
    }
  };
  os << r.t;
  put(r.V);
  put(r.eta);
  os << "," << r.leaves << "," << r.l_min;
  for (int s = 0; s < 2; ++s) {
    put(r.errors.e1[s]);
    put(r.errors.e2[s]);
    put(r.errors.einf[s]);
  }
  put(r.R_mr);
  put(r.R_fv);
  put(r.wall_mr);
  put(r.wall_fv);
  return os.str();
}

void MetricsCsv::append(const MetricsRecord& r) {
  std::fprintf(file_, "%s\n", format_record(r).c_str());
  std::fflush(file_);
}

void write_meta(const std::string& path, const std::map<std::string, std::string>& entries) {
  std::ofstream out(path);
  if (!out) io_error("cannot write '" + path + "'");
  for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
}

}  // namespace mrrd
