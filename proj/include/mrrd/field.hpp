#pragma once

#include <cstddef>
#include <vector>

#include "mrrd/types.hpp"

namespace mrrd {

// Uniform cell-average field, one row-major plane (index j * nx + i) per species.
struct Field {
  int nx = 0;
  int ny = 0;
  int species = 1;
  std::vector<double> data;

  Field() = default;
  Field(int nx_, int ny_, int species_)
      : nx(nx_), ny(ny_), species(species_),
        data(static_cast<std::size_t>(nx_) * ny_ * species_, 0.0) {}

  std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
  double& at(int s, int i, int j) { return data[s * cells() + static_cast<std::size_t>(j) * nx + i]; }
  double at(int s, int i, int j) const {
    return data[s * cells() + static_cast<std::size_t>(j) * nx + i];
  }
  double* plane(int s) { return data.data() + s * cells(); }
  const double* plane(int s) const { return data.data() + s * cells(); }
  State state(int i, int j) const {
    State w{};
    for (int s = 0; s < species; ++s) w[s] = at(s, i, j);
    return w;
  }
};

}  // namespace mrrd
