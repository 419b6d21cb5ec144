#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fockgrid/grid.hpp"

namespace fockgrid {

std::uint64_t binomial(int n, int k);
double factorial(int n);

// A symmetric rank-n tensor over the grid cells is stored canonically: one
// value per nondecreasing multi-index (i_1 <= ... <= i_n), lexicographic order.
// Reading any permutation of a multi-index yields the canonical entry.
using MultiIndex = std::vector<int>;

std::size_t multiset_count(int cells, int rank);                     // C(cells+rank-1, rank)
std::size_t multiset_ordinal(int cells, const MultiIndex& sorted);   // lex position
double tuple_count(const MultiIndex& sorted);                        // n! / prod(mult_e!)

// Visits all nondecreasing multi-indices of the given rank in lex order.
template <class F>
void for_each_multiset(int cells, int rank, F&& fn) {
  MultiIndex idx(static_cast<std::size_t>(rank), 0);
  if (rank == 0) {
    fn(static_cast<const MultiIndex&>(idx));
    return;
  }
  for (;;) {
    fn(static_cast<const MultiIndex&>(idx));
    int k = rank - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == cells - 1) --k;
    if (k < 0) break;
    const int v = idx[static_cast<std::size_t>(k)] + 1;
    for (int m = k; m < rank; ++m) idx[static_cast<std::size_t>(m)] = v;
  }
}

class SymTensor {
 public:
  SymTensor() = default;
  SymTensor(const GridModel& grid, int rank);  // zero tensor
  static SymTensor scalar(const GridModel& grid, double v);

  const GridModel& grid() const { return grid_; }
  int rank() const { return rank_; }
  std::size_t size() const { return vals_.size(); }

  double operator[](std::size_t ordinal) const { return vals_[ordinal]; }
  double& operator[](std::size_t ordinal) { return vals_[ordinal]; }

  double at(MultiIndex idx) const;               // sorts a copy
  double at_sorted(const MultiIndex& idx) const;
  double& at_sorted(const MultiIndex& idx);

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(double s);

  const std::vector<double>& values() const { return vals_; }

 private:
  GridModel grid_{};
  int rank_ = 0;
  std::vector<double> vals_;
};

// Dense row-major rank-n tensor (cells^rank values), no symmetry assumed.
struct RawTensor {
  int cells = 0;
  int rank = 0;
  std::vector<double> values;

  std::size_t flat(const MultiIndex& idx) const;
};

RawTensor make_raw(int cells, int rank, std::vector<double> values);

// Averages a dense tensor over all argument permutations.
SymTensor symmetrize(const GridModel& grid, const RawTensor& raw);

// Expands canonical storage to a dense tensor; throws if cells^rank exceeds `budget`.
RawTensor to_dense(const SymTensor& t, std::size_t budget = std::size_t(1) << 26);

// Symmetric tensor product: sym(S (x) T), ranks add.
SymTensor sym_product(const SymTensor& s, const SymTensor& t);

// h^n * sum over all cells^n index tuples of S*T (permutation-expanded).
double plain_inner(const SymTensor& s, const SymTensor& t);

// Graded vector with components of rank 0..max_rank on one grid.
class FockVector {
 public:
  FockVector() = default;
  FockVector(const GridModel& grid, int max_rank);  // all components zero
  static FockVector vacuum(const GridModel& grid, int max_rank = 0);

  const GridModel& grid() const { return grid_; }
  int max_rank() const { return static_cast<int>(comps_.size()) - 1; }

  const SymTensor& component(int n) const { return comps_[static_cast<std::size_t>(n)]; }
  SymTensor& component(int n) { return comps_[static_cast<std::size_t>(n)]; }
  void set_component(const SymTensor& t);

 private:
  GridModel grid_{};
  std::vector<SymTensor> comps_;
};

// sum_n n! * plain_inner(F_n, G_n); fock_norm_sq is the diagonal case.
double fock_pairing(const FockVector& f, const FockVector& g);
double fock_norm_sq(const FockVector& f);

// Hermite-mode coefficient norm of one component:
//   sum over mode tuples j of (prod_m eigenvalue(j_m))^p * c(j)^2,
// with c(j) = h^n sum_i prod_m e_{j_m}(i_m) T(i).  Dense intermediate, guarded.
double mode_norm_sq(const SymTensor& t, const HermiteScale& scale, double p,
                    std::size_t budget = std::size_t(1) << 26);

// sum_n (n!)^(1+kappa) * mode_norm_sq(F_n, scale, p).
double kappa_p_norm_sq(const FockVector& f, double kappa, double p, const HermiteScale& scale);

}  // namespace fockgrid
