#pragma once

#include <vector>

#include "fockgrid/grid.hpp"
#include "fockgrid/ladder.hpp"
#include "fockgrid/symtensor.hpp"

namespace fockgrid {

// Renormalized powers :omega^{(x)n}: of a cell noise realization, ranks 0..n_max.
struct WickSequence {
  NoiseFamily family;
  GridFunction omega;
  std::vector<SymTensor> powers;

  int max_rank() const { return static_cast<int>(powers.size()) - 1; }
};

// One recurrence for every family, parameterized by (lambda_eff, rho):
//   :w^(n+1): = sym(:w^n: (x) w)
//             - n sym(:w^(n-1): (x) delta-link)
//             - lambda_eff n sym(:w^n: with delta-link on the last two slots)
//             - rho n(n-1) sym(:w^(n-1): with a doubled delta-link),
// with the grid delta 1/h on the diagonal cell pair.
WickSequence wick_power(const NoiseFamily& family, const GridFunction& omega, int n_max);

// <:omega^{(x)n}:, f> for n = rank(f): the h^n-weighted full contraction.
double wick_eval(const WickSequence& seq, const SymTensor& f);

struct GrowthRow {
  int n;
  double norm_sq;    // ||:w^n:||^2 in the (-p)-weighted mode norm
  double factorial;  // n!
};

// Norm table for the dichotomy report; no pass/fail threshold is attached.
std::vector<GrowthRow> growth_profile(const WickSequence& seq, const HermiteScale& scale, double p);

// Least-squares slope of ln(y) against ln(x) over entries with x,y > 0.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fockgrid
