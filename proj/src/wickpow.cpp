#include "fockgrid/wickpow.hpp"

#include <cmath>
#include <stdexcept>

namespace fockgrid {

namespace {

// Canonical-storage step for the recurrence; see wickpow.hpp for the terms.
// With M the target multi-index (rank n+1), mult_e its multiplicities, P the
// rank-n power and Q the rank-(n-1) power, grouping the symmetrization over
// equal-value slots gives
//   R(M) = 1/(n+1) * sum_e mult_e      * w_e * P(M\e)
//        - 1/(n+1) * sum_e mult_e(mult_e-1)          / h   * Q(M\{e,e})
//        - l/(n+1) * sum_e mult_e(mult_e-1)          / h   * P(M\e)
//        - r/(n+1) * sum_e mult_e(mult_e-1)(mult_e-2)/ h^2 * Q(M\{e,e})
SymTensor next_power(const NoiseFamily& family, const GridFunction& w, const SymTensor& p,
                     const SymTensor* q) {
  const int n = p.rank();
  const GridModel& g = p.grid();
  const double inv_h = 1.0 / g.width;
  const double lam = family.lambda_eff();
  const double rho = family.rho();
  SymTensor out(g, n + 1);
  std::size_t ord = 0;
  MultiIndex less1, less2;
  for_each_multiset(g.cells, n + 1, [&](const MultiIndex& m) {
    double acc = 0.0;
    std::size_t i = 0;
    while (i < m.size()) {
      std::size_t j = i;
      while (j < m.size() && m[j] == m[i]) ++j;
      const int e = m[i];
      const int mult = static_cast<int>(j - i);

      less1.assign(m.begin(), m.end());
      less1.erase(less1.begin() + static_cast<std::ptrdiff_t>(i));
      const double p_less1 = p.at_sorted(less1);

      acc += mult * w[e] * p_less1;
      if (mult >= 2) {
        acc -= lam * mult * (mult - 1) * inv_h * p_less1;
        if (q != nullptr) {
          less2.assign(less1.begin(), less1.end());
          less2.erase(less2.begin() + static_cast<std::ptrdiff_t>(i));
          const double q_less2 = q->at_sorted(less2);
          acc -= mult * (mult - 1) * inv_h * q_less2;
          if (mult >= 3) acc -= rho * mult * (mult - 1) * (mult - 2) * inv_h * inv_h * q_less2;
        }
      }
      i = j;
    }
    out[ord++] = acc / (n + 1);
  });
  return out;
}

}  // namespace

WickSequence wick_power(const NoiseFamily& family, const GridFunction& omega, int n_max) {
  if (n_max < 0) throw std::invalid_argument("wick_power: n_max must be >= 0");
  WickSequence seq{family, omega, {}};
  seq.powers.reserve(static_cast<std::size_t>(n_max) + 1);
  seq.powers.push_back(SymTensor::scalar(omega.grid, 1.0));
  for (int n = 0; n < n_max; ++n) {
    const SymTensor* q = (n >= 1) ? &seq.powers[static_cast<std::size_t>(n - 1)] : nullptr;
    seq.powers.push_back(next_power(family, omega, seq.powers.back(), q));
  }
  return seq;
}

double wick_eval(const WickSequence& seq, const SymTensor& f) {
  if (f.rank() > seq.max_rank())
    throw std::invalid_argument("wick_eval: rank of f above computed powers");
  return plain_inner(seq.powers[static_cast<std::size_t>(f.rank())], f);
}

std::vector<GrowthRow> growth_profile(const WickSequence& seq, const HermiteScale& scale,
                                      double p) {
  std::vector<GrowthRow> rows;
  rows.reserve(seq.powers.size());
  for (int n = 0; n <= seq.max_rank(); ++n) {
    rows.push_back(GrowthRow{n,
                             mode_norm_sq(seq.powers[static_cast<std::size_t>(n)], scale, -p),
                             factorial(n)});
  }
  return rows;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog_slope: length mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("fit_loglog_slope: need two positive points");
  const double var = sxx - sx * sx / m;
  if (var <= 0.0) throw std::invalid_argument("fit_loglog_slope: degenerate abscissae");
  return (sxy - sx * sy / m) / var;
}

}  // namespace fockgrid
