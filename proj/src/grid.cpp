#include "fockgrid/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fockgrid {

GridModel make_grid(int cells, double width, double origin) {
  if (cells < 1) throw std::invalid_argument("make_grid: cells must be >= 1");
  if (!(width > 0.0) || !std::isfinite(width))
    throw std::invalid_argument("make_grid: width must be positive and finite");
  if (!std::isfinite(origin)) throw std::invalid_argument("make_grid: origin must be finite");
  return GridModel{cells, width, origin};
}

GridFunction make_function(const GridModel& g, std::vector<double> values) {
  if (values.size() != static_cast<std::size_t>(g.cells))
    throw std::invalid_argument("make_function: expected " + std::to_string(g.cells) +
                                " values, got " + std::to_string(values.size()));
  return GridFunction{g, std::move(values)};
}

GridFunction constant_function(const GridModel& g, double v) {
  return GridFunction{g, std::vector<double>(static_cast<std::size_t>(g.cells), v)};
}

GridFunction indicator(const GridModel& g, int cell, double scale) {
  if (cell < 0 || cell >= g.cells) throw std::invalid_argument("indicator: cell out of range");
  GridFunction f = constant_function(g, 0.0);
  f[cell] = scale;
  return f;
}

static void require_same_grid(const GridFunction& f, const GridFunction& g, const char* op) {
  if (!(f.grid == g.grid)) throw std::invalid_argument(std::string(op) + ": mismatched grids");
}

double l2_inner(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g, "l2_inner");
  double acc = 0.0;
  for (int i = 0; i < f.grid.cells; ++i) acc += f[i] * g[i];
  return f.grid.width * acc;
}

double l2_norm_sq(const GridFunction& f) { return l2_inner(f, f); }

GridFunction cell_product(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g, "cell_product");
  GridFunction out = f;
  for (int i = 0; i < f.grid.cells; ++i) out[i] *= g[i];
  return out;
}

GridFunction hermite_mode(int j, const GridModel& g) {
  if (j < 0) throw std::invalid_argument("hermite_mode: order must be >= 0");
  GridFunction out = constant_function(g, 0.0);
  const double quartic_root_pi = std::pow(M_PI, -0.25);
  for (int i = 0; i < g.cells; ++i) {
    const double t = g.midpoint(i);
    double em1 = 0.0;
    double e = quartic_root_pi * std::exp(-0.5 * t * t);
    for (int k = 0; k < j; ++k) {
      const double next = std::sqrt(2.0 / (k + 1)) * t * e - std::sqrt(k / (k + 1.0)) * em1;
      em1 = e;
      e = next;
    }
    out[i] = e;
  }
  return out;
}

HermiteScale make_hermite_scale(const GridModel& g, int modes, double eigen_exponent) {
  if (modes < 1) throw std::invalid_argument("make_hermite_scale: modes must be >= 1");
  HermiteScale s{g, modes, eigen_exponent, {}};
  s.mode_fns.reserve(static_cast<std::size_t>(modes));
  for (int j = 0; j < modes; ++j) s.mode_fns.push_back(hermite_mode(j, g));
  return s;
}

double sobolev_norm_sq(const GridFunction& f, double p, const HermiteScale& scale) {
  if (!(f.grid == scale.grid)) throw std::invalid_argument("sobolev_norm_sq: mismatched grids");
  for (double v : f.values)
    if (!std::isfinite(v)) throw std::invalid_argument("sobolev_norm_sq: non-finite input value");
  double acc = 0.0;
  for (int j = 0; j < scale.modes; ++j) {
    const double c = l2_inner(f, scale.mode_fns[static_cast<std::size_t>(j)]);
    acc += std::pow(scale.eigenvalue(j), p) * c * c;
  }
  return acc;
}

}  // namespace fockgrid
