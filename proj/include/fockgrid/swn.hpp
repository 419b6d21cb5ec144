#pragma once

#include <string>
#include <vector>

#include "fockgrid/grid.hpp"
#include "fockgrid/ladder.hpp"

namespace fockgrid {

// Square-of-white-noise generators with the renormalization constant c = 2:
//   B(phi)  = 2 (annihilate + double_annihilate)(phi)
//   B+(phi) = 2 create(phi)
//   N(phi)  = 2 neutral(phi)
// The delta^2 = c*delta rule is carried by the operator algebra; nothing here
// ever squares a grid delta, so no 1/width leaks into the relations.
struct SwnGenerators {
  TruncatedOperator b;
  TruncatedOperator b_dag;
  TruncatedOperator n_mid;
};

SwnGenerators swn_generators(const GridFunction& phi, int max_rank);

struct RelationResidual {
  std::string name;
  double residual;
};

// Residuals of the six bracket relations, measured on source ranks 0..max_rank-2:
//   [B(phi), B+(psi)] = 4 <phi,psi> Id + 4 N(phi psi)
//   [N(phi), B+(psi)] = 2 B+(phi psi)
//   [N(phi), B(psi)]  = -2 B(phi psi)
//   [N, N] = [B, B] = [B+, B+] = 0
std::vector<RelationResidual> swn_relation_residuals(const GridFunction& phi,
                                                     const GridFunction& psi, int max_rank);

}  // namespace fockgrid
