#include "fockgrid/orthopoly.hpp"

#include <cmath>
#include <stdexcept>

namespace fockgrid {

std::vector<double> poly_eval_all(double lambda, int n_max, double t) {
  if (n_max < 0) throw std::invalid_argument("poly_eval_all: n_max must be >= 0");
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1);
  p[0] = 1.0;
  double prev = 0.0;
  for (int n = 0; n < n_max; ++n) {
    const double next = ((t - lambda * (n + 1)) * p[static_cast<std::size_t>(n)] -
                         std::sqrt(static_cast<double>(n) * (n + 1)) * prev) /
                        std::sqrt(static_cast<double>(n + 1) * (n + 2));
    prev = p[static_cast<std::size_t>(n)];
    p[static_cast<std::size_t>(n + 1)] = next;
  }
  return p;
}

double poly_eval(double lambda, int n, double t) { return poly_eval_all(lambda, n, t).back(); }

namespace {

// |Gamma(1+ix)|^2 = pi x / sinh(pi x), continuous at 0.
double gamma_one_ix_sq(double x) {
  const double px = M_PI * x;
  if (std::abs(px) < 1e-8) return 1.0 - px * px / 6.0;
  return px / std::sinh(px);
}

double meixner_density(double lambda, double s) {
  const double c = std::sqrt(4.0 - lambda * lambda);
  // The positive exponent sign makes the measure's mean +lambda, matching the
  // recurrence; with the opposite sign the polynomials are not orthogonal.
  const double slope = (2.0 / c) * std::atan(lambda / c);
  return c / (2.0 * M_PI) * gamma_one_ix_sq(s / c) * std::exp(s * slope);
}

}  // namespace

double MeixnerClassMeasure::mass() const {
  double acc = 0.0;
  for (double w : masses) acc += w;
  return acc;
}

MeixnerClassMeasure make_measure(double lambda) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("make_measure: lambda must be finite");
  const bool reflected = lambda < 0.0;
  const double lam = std::abs(lambda);
  MeixnerClassMeasure m;
  m.lambda = lambda;
  m.reflected = reflected;
  if (lam < 2.0) {
    m.kind = MeasureKind::meixner;
    const double h = 2.0 * kMeixnerWindow / kMeixnerNodes;
    m.nodes.resize(kMeixnerNodes);
    m.masses.resize(kMeixnerNodes);
    for (int i = 0; i < kMeixnerNodes; ++i) {
      const double s = -kMeixnerWindow + (i + 0.5) * h;
      m.nodes[static_cast<std::size_t>(i)] = reflected ? -s : s;
      m.masses[static_cast<std::size_t>(i)] = meixner_density(lam, s) * h;
    }
  } else if (lam == 2.0) {
    m.kind = MeasureKind::gamma;
    const double h = kGammaWindow / kGammaNodes;
    m.nodes.resize(kGammaNodes);
    m.masses.resize(kGammaNodes);
    for (int i = 0; i < kGammaNodes; ++i) {
      const double s = (i + 0.5) * h;
      m.nodes[static_cast<std::size_t>(i)] = reflected ? -s : s;
      m.masses[static_cast<std::size_t>(i)] = std::exp(-s) * s * h;
    }
  } else {
    m.kind = MeasureKind::pascal;
    const double c = std::sqrt(lam * lam - 4.0);
    const double q = (lam - c) / (lam + c);
    m.nodes.resize(kPascalTerms);
    m.masses.resize(kPascalTerms);
    double qk = 1.0;
    for (int k = 1; k <= kPascalTerms; ++k) {
      qk *= q;
      const double s = c * k;
      m.nodes[static_cast<std::size_t>(k - 1)] = reflected ? -s : s;
      m.masses[static_cast<std::size_t>(k - 1)] = (lam * lam - 4.0) * qk * k;
    }
  }
  return m;
}

double density_at(const MeixnerClassMeasure& m, double s) {
  const double lam = std::abs(m.lambda);
  const double arg = m.reflected ? -s : s;
  switch (m.kind) {
    case MeasureKind::meixner:
      return meixner_density(lam, arg);
    case MeasureKind::gamma:
      return arg > 0.0 ? std::exp(-arg) * arg : 0.0;
    case MeasureKind::pascal:
      throw std::invalid_argument("density_at: pascal branch is purely atomic");
  }
  throw std::logic_error("density_at: bad kind");
}

double measure_moment(const MeixnerClassMeasure& m, int k) {
  if (k < 0) throw std::invalid_argument("measure_moment: order must be >= 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < m.nodes.size(); ++i) acc += std::pow(m.nodes[i], k) * m.masses[i];
  return acc;
}

double orthonormality_residual(const MeixnerClassMeasure& m, int n_max) {
  const std::size_t cols = static_cast<std::size_t>(n_max) + 1;
  std::vector<double> gram(cols * cols, 0.0);
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    const std::vector<double> p = poly_eval_all(m.lambda, n_max, m.nodes[i]);
    const double w = m.masses[i];
    for (std::size_t a = 0; a < cols; ++a)
      for (std::size_t b = a; b < cols; ++b) gram[a * cols + b] += w * p[a] * p[b];
  }
  double resid = 0.0;
  for (std::size_t a = 0; a < cols; ++a)
    for (std::size_t b = a; b < cols; ++b) {
      const double target = (a == b) ? 1.0 : 0.0;
      resid = std::max(resid, std::abs(gram[a * cols + b] - target));
    }
  return resid;
}

}  // namespace fockgrid
