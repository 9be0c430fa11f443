#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace mrrd {

inline constexpr int kMaxSpecies = 2;

// Per-cell state; unused species slots stay zero.
using State = std::array<double, kMaxSpecies>;

struct Domain {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
};

// Invalid or inconsistent user input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Blow-up, CFL violation, singular kinetics.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested operation the caller may retry differently (e.g. split at max level).
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken invariant; should be unreachable.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mrrd
