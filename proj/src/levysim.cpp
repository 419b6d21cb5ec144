#include "fockgrid/levysim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fockgrid/orthopoly.hpp"
#include "fockgrid/rng.hpp"
#include "fockgrid/wickpow.hpp"

namespace fockgrid {

namespace {

long long draw_poisson(RngStream& rng, double mean) {
  if (mean <= 0.0) return 0;
  if (mean < 30.0) {
    const double floor = std::exp(-mean);
    long long k = 0;
    double p = rng.uniform();
    while (p > floor) {
      ++k;
      p *= rng.uniform();
    }
    return k;
  }
  // Count unit-rate arrivals before time `mean`; immune to exp underflow.
  long long k = 0;
  double t = rng.exponential();
  while (t <= mean) {
    ++k;
    t += rng.exponential();
  }
  return k;
}

// Marsaglia-Tsang, scale 1.  Shapes below 1 use the boost G(a) = G(a+1) U^{1/a}.
double draw_gamma(RngStream& rng, double shape) {
  if (shape <= 0.0) throw std::invalid_argument("draw_gamma: shape must be positive");
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(rng.uniform(), 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return boost * d * v;
  }
}

// Logarithmic distribution P(K = k) = q^k / (k (-ln(1-q))), by inversion.
long long draw_log_jump(RngStream& rng, double q) {
  const double total = -std::log1p(-q);
  const double target = rng.uniform() * total;
  double qk = q;
  double acc = qk;
  long long k = 1;
  while (acc < target && k < 100000) {
    ++k;
    qk *= q;
    acc += qk / static_cast<double>(k);
  }
  return k;
}

double table_jump(RngStream& rng, const MeixnerJumpTable& t) {
  const double u = rng.uniform() * t.cum_mass.back();
  const auto it = std::lower_bound(t.cum_mass.begin(), t.cum_mass.end(), u);
  const std::size_t idx =
      std::min(static_cast<std::size_t>(it - t.cum_mass.begin()), t.cum_mass.size() - 1);
  const double prev = idx == 0 ? 0.0 : t.cum_mass[idx - 1];
  const double width = t.cum_mass[idx] - prev;
  const double frac = width > 0.0 ? (u - prev) / width : 0.5;
  return t.bin_lo[idx] + frac * (t.bin_hi[idx] - t.bin_lo[idx]);
}

struct FamilySampler {
  NoiseFamily family;
  MeixnerJumpTable table;  // used only on the |lambda| < 2 meixner branch
  bool use_table = false;

  explicit FamilySampler(const NoiseFamily& fam) : family(fam) {
    if (fam.kind == NoiseKind::meixner_class && std::abs(fam.lambda) < 2.0) {
      table = build_meixner_jump_table(fam.lambda);
      use_table = true;
    }
  }

  void fill_row(RngStream& rng, const GridModel& grid, double* out) const {
    const double h = grid.width;
    const int d = grid.cells;
    switch (family.kind) {
      case NoiseKind::gaussian: {
        const double s = std::sqrt(h);
        for (int i = 0; i < d; ++i) out[i] = s * rng.normal();
        return;
      }
      case NoiseKind::poisson_type: {
        const double lam = family.lambda;
        if (lam == 0.0) {
          const double s = std::sqrt(h);
          for (int i = 0; i < d; ++i) out[i] = s * rng.normal();
          return;
        }
        const double mean = h / (lam * lam);
        for (int i = 0; i < d; ++i)
          out[i] = lam * (static_cast<double>(draw_poisson(rng, mean)) - mean);
        return;
      }
      case NoiseKind::meixner_class: {
        const double lam = std::abs(family.lambda);
        const double sign = family.lambda < 0.0 ? -1.0 : 1.0;
        if (lam < 2.0) {
          for (int i = 0; i < d; ++i) {
            const long long n = draw_poisson(rng, table.rate * h);
            double acc = 0.0;
            for (long long j = 0; j < n; ++j) acc += table_jump(rng, table);
            acc -= table.drift * h;
            acc += std::sqrt(table.small_var * h) * rng.normal();
            out[i] = acc;
          }
          return;
        }
        if (lam == 2.0) {
          for (int i = 0; i < d; ++i) out[i] = sign * (draw_gamma(rng, h) - h);
          return;
        }
        const double c = std::sqrt(lam * lam - 4.0);
        const double q = (lam - c) / (lam + c);
        const double rate = -std::log1p(-q);
        const double drift = c * q / (1.0 - q);
        for (int i = 0; i < d; ++i) {
          const long long n = draw_poisson(rng, rate * h);
          double acc = 0.0;
          for (long long j = 0; j < n; ++j)
            acc += c * static_cast<double>(draw_log_jump(rng, q));
          out[i] = sign * (acc - drift * h);
        }
        return;
      }
    }
    throw std::logic_error("fill_row: bad family kind");
  }
};

std::complex<double> cumulant_integrand(const NoiseFamily& family, double v,
                                        const MeixnerClassMeasure* measure) {
  switch (family.kind) {
    case NoiseKind::gaussian:
      return {-0.5 * v * v, 0.0};
    case NoiseKind::poisson_type: {
      const double lam = family.lambda;
      if (lam == 0.0) return {-0.5 * v * v, 0.0};
      const double x = v * lam;
      return {(std::cos(x) - 1.0) / (lam * lam), (std::sin(x) - x) / (lam * lam)};
    }
    case NoiseKind::meixner_class: {
      const double lam = std::abs(family.lambda);
      const double vv = family.lambda < 0.0 ? -v : v;
      if (lam == 2.0) {
        // -ln(1 - i v) - i v
        return {-0.5 * std::log1p(vv * vv), std::atan(vv) - vv};
      }
      if (lam > 2.0) {
        const double c = std::sqrt(lam * lam - 4.0);
        const double q = (lam - c) / (lam + c);
        double re = 0.0, im = 0.0;
        double qk = 1.0;
        for (int k = 1; k <= kPascalTerms; ++k) {
          qk *= q;
          const double x = vv * c * k;
          const double w = qk / static_cast<double>(k);
          const double half = std::sin(0.5 * x);
          re += w * (-2.0 * half * half);
          im += w * (std::abs(x) < 1e-4 ? -x * x * x / 6.0 * (1.0 - x * x / 20.0)
                                        : std::sin(x) - x);
        }
        return {re, im};
      }
      double re = 0.0, im = 0.0;
      for (std::size_t j = 0; j < measure->nodes.size(); ++j) {
        const double s = measure->nodes[j];
        const double w = measure->masses[j];
        const double x = vv * s;
        const double half = std::sin(0.5 * x);
        const double sinc3 = std::abs(x) < 1e-4 ? -x * x * x / 6.0 * (1.0 - x * x / 20.0)
                                                : std::sin(x) - x;
        re += w * (-2.0 * half * half) / (s * s);
        im += w * sinc3 / (s * s);
      }
      return {re, im};
    }
  }
  throw std::logic_error("cumulant_integrand: bad family kind");
}

}  // namespace

MeixnerJumpTable build_meixner_jump_table(double lambda) {
  if (!(std::abs(lambda) < 2.0))
    throw std::invalid_argument("build_meixner_jump_table: requires |lambda| < 2");
  MeixnerJumpTable t;
  t.lambda = lambda;
  const int nbins = 10000;
  const MeixnerClassMeasure measure = make_measure(lambda);

  const double ratio = t.window / t.eps;
  std::vector<double> edge(static_cast<std::size_t>(nbins) + 1);
  for (int i = 0; i <= nbins; ++i)
    edge[static_cast<std::size_t>(i)] =
        t.eps * std::pow(ratio, static_cast<double>(i) / static_cast<double>(nbins));

  t.bin_lo.reserve(2 * static_cast<std::size_t>(nbins));
  t.bin_hi.reserve(2 * static_cast<std::size_t>(nbins));
  t.cum_mass.reserve(2 * static_cast<std::size_t>(nbins));
  double cum = 0.0;
  auto push_bin = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double mass = density_at(measure, mid) / (mid * mid) * (hi - lo);
    cum += mass;
    t.bin_lo.push_back(lo);
    t.bin_hi.push_back(hi);
    t.cum_mass.push_back(cum);
    t.drift += mid * mass;
  };
  for (int i = nbins; i >= 1; --i)
    push_bin(-edge[static_cast<std::size_t>(i)], -edge[static_cast<std::size_t>(i - 1)]);
  for (int i = 0; i < nbins; ++i)
    push_bin(edge[static_cast<std::size_t>(i)], edge[static_cast<std::size_t>(i + 1)]);
  t.rate = cum;

  const int small_nodes = 4000;
  const double sh = 2.0 * t.eps / small_nodes;
  double var = 0.0;
  for (int i = 0; i < small_nodes; ++i) {
    const double s = -t.eps + (i + 0.5) * sh;
    var += density_at(measure, s) * sh;
  }
  t.small_var = var;
  return t;
}

PathSample sample_increments(const NoiseFamily& family, const GridModel& grid, int paths,
                             std::uint64_t seed) {
  if (paths < 1) throw std::invalid_argument("sample_increments: paths must be >= 1");
  const FamilySampler sampler(family);
  PathSample s{family, grid, paths, seed, {}};
  s.increments.resize(static_cast<std::size_t>(paths) * static_cast<std::size_t>(grid.cells));
  for (int p = 0; p < paths; ++p) {
    RngStream rng(seed, static_cast<std::uint64_t>(p));
    sampler.fill_row(rng, grid, s.increments.data() + static_cast<std::size_t>(p) * grid.cells);
  }
  return s;
}

std::vector<double> path_from_increments(const PathSample& sample, int path) {
  if (path < 0 || path >= sample.paths)
    throw std::out_of_range("path_from_increments: path index out of range");
  std::vector<double> out(static_cast<std::size_t>(sample.grid.cells));
  double acc = 0.0;
  for (int i = 0; i < sample.grid.cells; ++i) {
    acc += sample.at(path, i);
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

std::complex<double> charfn_theory(const NoiseFamily& family, const GridFunction& phi, double u) {
  MeixnerClassMeasure measure;
  const MeixnerClassMeasure* mp = nullptr;
  if (family.kind == NoiseKind::meixner_class && std::abs(family.lambda) < 2.0) {
    measure = make_measure(family.lambda);
    mp = &measure;
  }
  std::complex<double> expo = 0.0;
  for (int i = 0; i < phi.grid.cells; ++i)
    expo += phi.grid.width * cumulant_integrand(family, u * phi.values[static_cast<std::size_t>(i)], mp);
  return std::exp(expo);
}

std::complex<double> charfn_empirical(const PathSample& sample, const GridFunction& phi,
                                      double u) {
  if (!(sample.grid == phi.grid))
    throw std::invalid_argument("charfn_empirical: sample and phi grids differ");
  std::complex<double> acc = 0.0;
  for (int p = 0; p < sample.paths; ++p) {
    double x = 0.0;
    for (int i = 0; i < sample.grid.cells; ++i)
      x += sample.at(p, i) * phi.values[static_cast<std::size_t>(i)];
    acc += std::complex<double>(std::cos(u * x), std::sin(u * x));
  }
  return acc / static_cast<double>(sample.paths);
}

EstimatorResult mc_pairing(const NoiseFamily& family, const SymTensor& f, const SymTensor& g,
                           int paths, std::uint64_t seed) {
  if (paths < 1) throw std::invalid_argument("mc_pairing: paths must be >= 1");
  if (!(f.grid() == g.grid())) throw std::invalid_argument("mc_pairing: tensor grids differ");
  const GridModel grid = f.grid();
  const int n_max = std::max(f.rank(), g.rank());
  const FamilySampler sampler(family);
  std::vector<double> row(static_cast<std::size_t>(grid.cells));
  std::vector<double> omega(static_cast<std::size_t>(grid.cells));
  double mean = 0.0, m2 = 0.0;
  for (int p = 0; p < paths; ++p) {
    RngStream rng(seed, static_cast<std::uint64_t>(p));
    sampler.fill_row(rng, grid, row.data());
    for (int i = 0; i < grid.cells; ++i)
      omega[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i)] / grid.width;
    const WickSequence seq = wick_power(family, make_function(grid, omega), n_max);
    const double x = wick_eval(seq, f) * wick_eval(seq, g);
    const double delta = x - mean;
    mean += delta / static_cast<double>(p + 1);
    m2 += delta * (x - mean);
  }
  const double var = paths > 1 ? m2 / static_cast<double>(paths - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(paths)), paths};
}

EstimatorResult mc_cumulant(const NoiseFamily& family, const GridFunction& phi, int order,
                            int paths, std::uint64_t seed) {
  if (order != 2 && order != 3)
    throw std::invalid_argument("mc_cumulant: order must be 2 or 3, got " +
                                std::to_string(order));
  if (paths < 1) throw std::invalid_argument("mc_cumulant: paths must be >= 1");
  const GridModel grid = phi.grid;
  const FamilySampler sampler(family);
  std::vector<double> row(static_cast<std::size_t>(grid.cells));
  double sk = 0.0, s2k = 0.0;
  for (int p = 0; p < paths; ++p) {
    RngStream rng(seed, static_cast<std::uint64_t>(p));
    sampler.fill_row(rng, grid, row.data());
    double x = 0.0;
    for (int i = 0; i < grid.cells; ++i)
      x += row[static_cast<std::size_t>(i)] * phi.values[static_cast<std::size_t>(i)];
    const double xk = order == 2 ? x * x : x * x * x;
    sk += xk;
    s2k += xk * xk;
  }
  const double np = static_cast<double>(paths);
  const double mk = sk / np;
  const double var = std::max(0.0, s2k / np - mk * mk);
  return {mk, std::sqrt(var / np), paths};
}

}  // namespace fockgrid
