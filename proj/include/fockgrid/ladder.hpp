#pragma once

#include <Eigen/Dense>
#include <map>
#include <utility>

#include "fockgrid/grid.hpp"
#include "fockgrid/symtensor.hpp"

namespace fockgrid {

// Noise family selector.  The unified field operator is
//   A = create + lambda_eff * neutral + annihilate + rho * double_annihilate,
// with (lambda_eff, rho) = (0,0) Gaussian, (lambda,0) Poisson type,
// (lambda,1) Meixner class.
enum class NoiseKind { gaussian, poisson_type, meixner_class };

struct NoiseFamily {
  NoiseKind kind = NoiseKind::gaussian;
  double lambda = 0.0;

  double lambda_eff() const { return kind == NoiseKind::gaussian ? 0.0 : lambda; }
  double rho() const { return kind == NoiseKind::meixner_class ? 1.0 : 0.0; }

  static NoiseFamily gaussian() { return {NoiseKind::gaussian, 0.0}; }
  static NoiseFamily poisson_type(double lambda) { return {NoiseKind::poisson_type, lambda}; }
  static NoiseFamily meixner_class(double lambda) { return {NoiseKind::meixner_class, lambda}; }

  bool operator==(const NoiseFamily&) const = default;
};

// Ladder operators on canonical symmetric tensors.
//   create:            phi (sym-tensor-product) f, rank n -> n+1
//   annihilate:        n * h * sum_j phi_j f(j, .), rank n -> n-1
//   neutral:           (sum_k phi(t_k)) f, rank preserved
//   double_annihilate: n(n-1) sym(phi(t1) f(t1,t1,t2,...)), rank n -> n-1,
//                      diagonal evaluation, no h factor
SymTensor create(const GridFunction& phi, const SymTensor& f);
SymTensor annihilate(const GridFunction& phi, const SymTensor& f);
SymTensor neutral(const GridFunction& phi, const SymTensor& f);
SymTensor double_annihilate(const GridFunction& phi, const SymTensor& f);

// Block operator on rank components 0..max_rank.  Entries above max_rank are
// never produced: compositions silently drop paths through higher ranks.
class TruncatedOperator {
 public:
  TruncatedOperator() = default;
  TruncatedOperator(const GridModel& grid, int max_rank) : grid_(grid), max_rank_(max_rank) {}

  const GridModel& grid() const { return grid_; }
  int max_rank() const { return max_rank_; }

  // target rank m, source rank n
  const std::map<std::pair<int, int>, Eigen::MatrixXd>& blocks() const { return blocks_; }
  Eigen::MatrixXd& block(int m, int n);
  const Eigen::MatrixXd* find_block(int m, int n) const;

  FockVector apply(const FockVector& f) const;

  TruncatedOperator& add_scaled(const TruncatedOperator& o, double s);
  TruncatedOperator& operator*=(double s);
  int max_up_shift() const;  // largest m-n over stored blocks, at least 0
  double frobenius_norm() const;

  static TruncatedOperator identity(const GridModel& grid, int max_rank, double scale = 1.0);

  // Builds blocks (n+shift, n) column-by-column from a tensor-level operator.
  template <class Fn>
  static TruncatedOperator from_tensor_op(const GridModel& grid, int max_rank, int shift, Fn&& op);

 private:
  GridModel grid_{};
  int max_rank_ = 0;
  std::map<std::pair<int, int>, Eigen::MatrixXd> blocks_;
};

TruncatedOperator compose(const TruncatedOperator& x, const TruncatedOperator& y);
TruncatedOperator commutator(const TruncatedOperator& x, const TruncatedOperator& y);

// Jacobi field of the family: block-tridiagonal in rank.
TruncatedOperator field_matrix(const NoiseFamily& family, const GridFunction& phi, int max_rank);

// Rescales to the basis in which canonical multi-index tensors are unit vectors
// of the n!-weighted pairing: D^{1/2} B D^{-1/2}, D_M = n! h^n (n!/prod mult!).
TruncatedOperator occupation_orthonormal(const TruncatedOperator& op);

// Frobenius residual of [X,Y]-expected over blocks with source rank in
// [lo, hi], relative to the expected operator (absolute when expected is ~0).
double commutator_residual(const TruncatedOperator& x, const TruncatedOperator& y,
                           const TruncatedOperator& expected, int lo, int hi);

template <class Fn>
TruncatedOperator TruncatedOperator::from_tensor_op(const GridModel& grid, int max_rank, int shift,
                                                    Fn&& op) {
  TruncatedOperator out(grid, max_rank);
  for (int n = 0; n <= max_rank; ++n) {
    const int m = n + shift;
    if (m < 0 || m > max_rank) continue;
    const std::size_t dim_n = multiset_count(grid.cells, n);
    const std::size_t dim_m = multiset_count(grid.cells, m);
    Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_m),
                                                static_cast<Eigen::Index>(dim_n));
    for (std::size_t col = 0; col < dim_n; ++col) {
      SymTensor basis(grid, n);
      basis[col] = 1.0;
      const SymTensor img = op(basis);
      for (std::size_t row = 0; row < dim_m; ++row)
        blk(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = img[row];
    }
    if (blk.cwiseAbs().maxCoeff() != 0.0) out.block(m, n) = std::move(blk);
  }
  return out;
}

}  // namespace fockgrid
