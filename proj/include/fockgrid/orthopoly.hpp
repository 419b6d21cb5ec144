#pragma once

#include <vector>

namespace fockgrid {

// Orthonormal polynomials of the one-parameter class with Jacobi data
//   t p_n = sqrt((n+1)(n+2)) p_{n+1} + lambda (n+1) p_n + sqrt(n(n+1)) p_{n-1},
// so every member has mean lambda and variance 2.
double poly_eval(double lambda, int n, double t);
std::vector<double> poly_eval_all(double lambda, int n_max, double t);

enum class MeasureKind { meixner, gamma, pascal };

// Quadrature form of the orthogonality measure: nodes with masses.  The
// lambda in [0,2) branch and the gamma branch are midpoint discretizations
// (windows below); the pascal branch is the exact atom list.
struct MeixnerClassMeasure {
  double lambda = 0.0;
  MeasureKind kind = MeasureKind::meixner;
  bool reflected = false;  // built from |lambda| and mirrored for lambda < 0
  std::vector<double> nodes;
  std::vector<double> masses;

  double mass() const;
};

// Window / resolution constants (documented tolerances follow from these):
// meixner on [-40,40] and gamma on [0,60], 2e5 midpoint nodes each, measure
// mass accurate to ~1e-8; pascal atoms k = 1..400, mass exact to rounding.
inline constexpr double kMeixnerWindow = 40.0;
inline constexpr int kMeixnerNodes = 200000;
inline constexpr double kGammaWindow = 60.0;
inline constexpr int kGammaNodes = 200000;
inline constexpr int kPascalTerms = 400;

MeixnerClassMeasure make_measure(double lambda);

// Continuous-branch density value (meixner / gamma kinds only).
double density_at(const MeixnerClassMeasure& m, double s);

double measure_moment(const MeixnerClassMeasure& m, int k);

// max_{n,m <= n_max} |integral p_n p_m dnu - delta_nm|
double orthonormality_residual(const MeixnerClassMeasure& m, int n_max);

}  // namespace fockgrid
