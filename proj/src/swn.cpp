#include "fockgrid/swn.hpp"

#include <stdexcept>

namespace fockgrid {

SwnGenerators swn_generators(const GridFunction& phi, int max_rank) {
  if (max_rank < 2) throw std::invalid_argument("swn_generators: max_rank must be >= 2");
  const GridModel& g = phi.grid;
  TruncatedOperator b = TruncatedOperator::from_tensor_op(
      g, max_rank, -1, [&](const SymTensor& f) { return annihilate(phi, f); });
  b.add_scaled(TruncatedOperator::from_tensor_op(
                   g, max_rank, -1, [&](const SymTensor& f) { return double_annihilate(phi, f); }),
               1.0);
  b *= 2.0;
  TruncatedOperator b_dag = TruncatedOperator::from_tensor_op(
      g, max_rank, +1, [&](const SymTensor& f) { return create(phi, f); });
  b_dag *= 2.0;
  TruncatedOperator n_mid = TruncatedOperator::from_tensor_op(
      g, max_rank, 0, [&](const SymTensor& f) { return neutral(phi, f); });
  n_mid *= 2.0;
  return SwnGenerators{std::move(b), std::move(b_dag), std::move(n_mid)};
}

std::vector<RelationResidual> swn_relation_residuals(const GridFunction& phi,
                                                     const GridFunction& psi, int max_rank) {
  if (!(phi.grid == psi.grid))
    throw std::invalid_argument("swn_relation_residuals: mismatched grids");
  const GridModel& g = phi.grid;
  const int hi = max_rank - 2;
  if (hi < 0) throw std::invalid_argument("swn_relation_residuals: max_rank must be >= 2");

  const SwnGenerators sp = swn_generators(phi, max_rank);
  const SwnGenerators sq = swn_generators(psi, max_rank);
  const GridFunction prod = cell_product(phi, psi);
  const SwnGenerators spq = swn_generators(prod, max_rank);
  const TruncatedOperator zero(g, max_rank);

  std::vector<RelationResidual> out;

  // [B(phi), B+(psi)] = 4 <phi,psi> Id + 4 N(phi psi)
  TruncatedOperator e1 = TruncatedOperator::identity(g, max_rank, 4.0 * l2_inner(phi, psi));
  e1.add_scaled(spq.n_mid, 4.0);
  out.push_back({"b_bdag", commutator_residual(sp.b, sq.b_dag, e1, 0, hi)});

  // [N(phi), B+(psi)] = 2 B+(phi psi)
  TruncatedOperator e2 = spq.b_dag;
  e2 *= 2.0;
  out.push_back({"n_bdag", commutator_residual(sp.n_mid, sq.b_dag, e2, 0, hi)});

  // [N(phi), B(psi)] = -2 B(phi psi)
  TruncatedOperator e3 = spq.b;
  e3 *= -2.0;
  out.push_back({"n_b", commutator_residual(sp.n_mid, sq.b, e3, 0, hi)});

  out.push_back({"n_n", commutator_residual(sp.n_mid, sq.n_mid, zero, 0, hi)});
  out.push_back({"b_b", commutator_residual(sp.b, sq.b, zero, 0, hi)});
  out.push_back({"bdag_bdag", commutator_residual(sp.b_dag, sq.b_dag, zero, 0, hi)});

  return out;
}

}  // namespace fockgrid
