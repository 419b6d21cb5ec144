#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fockgrid/grid.hpp"
#include "fockgrid/ladder.hpp"
#include "fockgrid/symtensor.hpp"

namespace fockgrid {

// Tabulated jump measure for the lambda in (-2,2) noise family.  Jumps with
// |s| <= eps are cut off and replaced by a Gaussian carrying their variance;
// the remaining intensity density nu(s)/s^2 is binned on log-spaced edges out
// to |s| = window so the 1/s^2 spike near eps is resolved.  Sampling draws a
// Poisson number of jumps at `rate` per unit time and places each jump
// uniformly inside an inverse-CDF-selected bin.  Centering uses the table's
// own first moment, so increments have exactly zero mean under the table law.
struct MeixnerJumpTable {
  double lambda = 0.0;
  double eps = 1e-3;
  double window = 40.0;
  std::vector<double> bin_lo;    // signed bin edges, ascending
  std::vector<double> bin_hi;
  std::vector<double> cum_mass;  // running bin-mass totals, last entry = rate
  double rate = 0.0;             // total jump intensity per unit time
  double drift = 0.0;            // sum of s * mass(s); subtracted per unit time
  double small_var = 0.0;        // variance restored by the Gaussian part
};

MeixnerJumpTable build_meixner_jump_table(double lambda);

// Centered increments over the grid cells, P paths by d cells, row-major.
// Regenerating with the same (family, grid, paths, seed) is bitwise identical;
// path p always uses RNG stream p, so enlarging `paths` extends rather than
// reshuffles the sample.
struct PathSample {
  NoiseFamily family;
  GridModel grid;
  int paths = 0;
  std::uint64_t seed = 0;
  std::vector<double> increments;

  double at(int path, int cell) const {
    return increments[static_cast<std::size_t>(path) * static_cast<std::size_t>(grid.cells) +
                      static_cast<std::size_t>(cell)];
  }
};

PathSample sample_increments(const NoiseFamily& family, const GridModel& grid, int paths,
                             std::uint64_t seed);

// Cumulative sums of one row: position after cell j = sum of increments 0..j.
std::vector<double> path_from_increments(const PathSample& sample, int path);

// E exp(i u <omega, phi>) with <omega, phi> = sum_i increment_i phi_i.
std::complex<double> charfn_theory(const NoiseFamily& family, const GridFunction& phi, double u);
std::complex<double> charfn_empirical(const PathSample& sample, const GridFunction& phi, double u);

struct EstimatorResult {
  double value = 0.0;
  double std_error = 0.0;
  long long samples = 0;
};

// Monte Carlo estimate of E[<:omega^m:, f> <:omega^n:, g>] by sampling paths
// and running the Wick-power recurrence on each realized increment row.
EstimatorResult mc_pairing(const NoiseFamily& family, const SymTensor& f, const SymTensor& g,
                           int paths, std::uint64_t seed);

// Monte Carlo cumulant of <omega, phi>, order 2 or 3.  Increments are centered
// by construction, so raw moments estimate the cumulants directly; standard
// errors are sqrt(Var(X^k)/P) with Var(X^k) = m_{2k} - m_k^2 from the sample.
EstimatorResult mc_cumulant(const NoiseFamily& family, const GridFunction& phi, int order,
                            int paths, std::uint64_t seed);

}  // namespace fockgrid
