#pragma once

#include <cmath>
#include <vector>

namespace fockgrid {

// Uniform grid of half-open cells [origin + i*width, origin + (i+1)*width).
// Cell functions carry one value per cell; integrals use the midpoint rule,
// so every L2-type sum carries one factor of `width` per integration variable.
struct GridModel {
  int cells = 0;
  double width = 0.0;
  double origin = 0.0;

  double midpoint(int i) const { return origin + (i + 0.5) * width; }
  double left_edge(int i) const { return origin + i * width; }
  bool operator==(const GridModel&) const = default;
};

GridModel make_grid(int cells, double width, double origin = 0.0);

// Real cell function bound to its grid.
struct GridFunction {
  GridModel grid;
  std::vector<double> values;

  double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

GridFunction make_function(const GridModel& g, std::vector<double> values);
GridFunction constant_function(const GridModel& g, double v);
GridFunction indicator(const GridModel& g, int cell, double scale = 1.0);

double l2_inner(const GridFunction& f, const GridFunction& g);
double l2_norm_sq(const GridFunction& f);

// Pointwise product f*g on the shared grid (no width factor).
GridFunction cell_product(const GridFunction& f, const GridFunction& g);

// Hermite function e_j sampled at cell midpoints.  e_0(t) = pi^{-1/4} exp(-t^2/2),
// e_{j+1}(t) = sqrt(2/(j+1)) t e_j(t) - sqrt(j/(j+1)) e_{j-1}(t).
GridFunction hermite_mode(int j, const GridModel& g);

// Mode scale for Sobolev-type norms: the first `modes` Hermite functions with
// weight (2j+2)^eigen_exponent attached to mode j.
struct HermiteScale {
  GridModel grid;
  int modes = 0;
  double eigen_exponent = 2.0;
  std::vector<GridFunction> mode_fns;

  double eigenvalue(int j) const { return std::pow(2.0 * j + 2.0, eigen_exponent); }
};

HermiteScale make_hermite_scale(const GridModel& g, int modes, double eigen_exponent = 2.0);

// ||f||_p^2 = sum_j eigenvalue(j)^p <f, e_j>^2 over the sampled modes.
double sobolev_norm_sq(const GridFunction& f, double p, const HermiteScale& scale);

}  // namespace fockgrid
