#include "fockgrid/wickcalc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fockgrid {

double s_transform(const FockVector& f, const GridFunction& xi) {
  if (!(f.grid() == xi.grid)) throw std::invalid_argument("s_transform: mismatched grids");
  double acc = 0.0;
  for (int n = 0; n <= f.max_rank(); ++n) {
    const SymTensor& t = f.component(n);
    double term = 0.0;
    std::size_t ord = 0;
    for_each_multiset(f.grid().cells, n, [&](const MultiIndex& m) {
      double prod = tuple_count(m);
      for (int v : m) prod *= xi[v];
      term += prod * t[ord++];
    });
    acc += term * std::pow(f.grid().width, n);
  }
  return acc;
}

FockVector wick_product(const FockVector& f, const FockVector& g, int out_max_rank) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("wick_product: mismatched grids");
  if (out_max_rank < 0) throw std::invalid_argument("wick_product: negative output rank");
  FockVector out(f.grid(), out_max_rank);
  for (int k = 0; k <= f.max_rank(); ++k) {
    for (int l = 0; l <= g.max_rank(); ++l) {
      if (k + l > out_max_rank) continue;
      out.component(k + l) += sym_product(f.component(k), g.component(l));
    }
  }
  return out;
}

FockVector wick_product(const FockVector& f, const FockVector& g) {
  return wick_product(f, g, std::max(f.max_rank(), g.max_rank()));
}

FockVector wick_compose(const std::vector<double>& coeffs, double point, const FockVector& f) {
  const double f0 = f.component(0)[0];
  if (point != f0)
    throw std::invalid_argument(
        "wick_compose: expansion point must equal the rank-0 component of the argument");
  const int top = f.max_rank();
  FockVector centered = f;
  centered.component(0)[0] = 0.0;

  FockVector out(f.grid(), top);
  FockVector power = FockVector::vacuum(f.grid(), top);  // centered^{<>0}
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    if (coeffs[m] != 0.0) {
      for (int n = 0; n <= top; ++n) {
        SymTensor term = power.component(n);
        term *= coeffs[m];
        out.component(n) += term;
      }
    }
    if (m + 1 < coeffs.size()) {
      // centered has no rank-0 part, so power^{<>(m+1)} vanishes below rank m+1
      // and its retained ranks are exact under truncation at `top`
      if (static_cast<int>(m) + 1 > top) break;
      power = wick_product(power, centered, top);
    }
  }
  return out;
}

}  // namespace fockgrid
