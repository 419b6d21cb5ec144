#pragma once

#include <vector>

#include "fockgrid/grid.hpp"
#include "fockgrid/symtensor.hpp"

namespace fockgrid {

// S-transform at a test function: sum_n <F_n, xi^{(x)n}> with the h^n-weighted
// pairing (no n! factors).
double s_transform(const FockVector& f, const GridFunction& xi);

// Graded convolution (F <> G)_n = sum_k F_k (sym-x) G_{n-k}, kept up to
// out_max_rank.  The default keeps max(rank F, rank G); identities involving
// dropped ranks hold only below the truncation.
FockVector wick_product(const FockVector& f, const FockVector& g, int out_max_rank);
FockVector wick_product(const FockVector& f, const FockVector& g);

// sum_m coeffs[m] (F - point*vacuum)^{<>m}, truncated at rank(F).  `point`
// must equal the rank-0 component of F: the series is an expansion there.
FockVector wick_compose(const std::vector<double>& coeffs, double point, const FockVector& f);

}  // namespace fockgrid
