#pragma once

#include <vector>

#include "fockgrid/grid.hpp"
#include "fockgrid/ladder.hpp"
#include "fockgrid/symtensor.hpp"

namespace fockgrid {

// Additive partition of n stored as multiplicities: mult[k-1] parts of size k.
struct PartitionAlpha {
  std::vector<int> mult;

  int n() const;       // sum k * mult[k-1]
  int length() const;  // number of parts |alpha| = sum mult[k-1]
};

// All partitions of n, ordered by nonincreasing count of size-1 parts.
std::vector<PartitionAlpha> partitions(int n);

// n! / prod_k (mult_k! * k^mult_k): the number of ways to group n slots into
// the partition's blocks, counted once per unordered block arrangement.
double partition_coeff(int n, const PartitionAlpha& alpha);

// Glues arguments along the partition: the first mult[0] output arguments are
// used once, the next mult[1] twice, and so on.  Output is dense and not
// symmetric in general.
RawTensor diagonal_restrict(const SymTensor& t, const PartitionAlpha& alpha);

// sum_alpha partition_coeff * h^|alpha| * <D_alpha S, D_alpha T>_dense.
// No leading n!: the graded pairing below supplies it.
double ext_inner(const SymTensor& s, const SymTensor& t);

// sum_n n! * ext_inner(F_n, G_n)
double ext_pairing(const FockVector& f, const FockVector& g);

// |<create(phi) f, g>_ext - <f, (annihilate + double_annihilate)(phi) g>_ext|
// over max(1, |lhs|, |rhs|); f has rank n, g rank n+1.
double adjointness_residual(const GridFunction& phi, const SymTensor& f, const SymTensor& g);

}  // namespace fockgrid
