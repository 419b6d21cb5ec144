#include "fockgrid/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fockgrid {

namespace {

void require_grid(const GridFunction& phi, const SymTensor& f, const char* op) {
  if (!(phi.grid == f.grid())) throw std::invalid_argument(std::string(op) + ": mismatched grids");
}

// Walks runs (distinct element, multiplicity) of a sorted multi-index.
template <class Fn>
void for_each_run(const MultiIndex& sorted, Fn&& fn) {
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    fn(sorted[i], static_cast<int>(j - i));
    i = j;
  }
}

MultiIndex erase_copies(const MultiIndex& sorted, int elem, int copies) {
  MultiIndex out;
  out.reserve(sorted.size());
  int left = copies;
  for (int v : sorted) {
    if (v == elem && left > 0) {
      --left;
      continue;
    }
    out.push_back(v);
  }
  return out;
}

MultiIndex insert_sorted(const MultiIndex& sorted, int elem) {
  MultiIndex out;
  out.reserve(sorted.size() + 1);
  auto it = std::upper_bound(sorted.begin(), sorted.end(), elem);
  out.insert(out.end(), sorted.begin(), it);
  out.push_back(elem);
  out.insert(out.end(), it, sorted.end());
  return out;
}

}  // namespace

SymTensor create(const GridFunction& phi, const SymTensor& f) {
  require_grid(phi, f, "create");
  const int n = f.rank();
  SymTensor out(f.grid(), n + 1);
  std::size_t ord = 0;
  for_each_multiset(f.grid().cells, n + 1, [&](const MultiIndex& m) {
    double acc = 0.0;
    for_each_run(m, [&](int e, int mult) {
      const double w = phi[e];
      if (w != 0.0) acc += mult * w * f.at_sorted(erase_copies(m, e, 1));
    });
    out[ord++] = acc / (n + 1);
  });
  return out;
}

SymTensor annihilate(const GridFunction& phi, const SymTensor& f) {
  require_grid(phi, f, "annihilate");
  const int n = f.rank();
  if (n < 1) throw std::invalid_argument("annihilate: rank must be >= 1");
  SymTensor out(f.grid(), n - 1);
  const double nh = n * f.grid().width;
  std::size_t ord = 0;
  for_each_multiset(f.grid().cells, n - 1, [&](const MultiIndex& m) {
    double acc = 0.0;
    for (int j = 0; j < f.grid().cells; ++j) {
      const double w = phi[j];
      if (w != 0.0) acc += w * f.at_sorted(insert_sorted(m, j));
    }
    out[ord++] = nh * acc;
  });
  return out;
}

SymTensor neutral(const GridFunction& phi, const SymTensor& f) {
  require_grid(phi, f, "neutral");
  SymTensor out(f.grid(), f.rank());
  std::size_t ord = 0;
  for_each_multiset(f.grid().cells, f.rank(), [&](const MultiIndex& m) {
    double sum = 0.0;
    for (int v : m) sum += phi[v];
    out[ord] = sum * f[ord];
    ++ord;
  });
  return out;
}

SymTensor double_annihilate(const GridFunction& phi, const SymTensor& f) {
  require_grid(phi, f, "double_annihilate");
  const int n = f.rank();
  if (n < 1) throw std::invalid_argument("double_annihilate: rank must be >= 1");
  SymTensor out(f.grid(), n - 1);
  if (n == 1) return out;  // n(n-1) kills rank 1
  std::size_t ord = 0;
  for_each_multiset(f.grid().cells, n - 1, [&](const MultiIndex& m) {
    double acc = 0.0;
    for_each_run(m, [&](int e, int mult) {
      const double w = phi[e];
      if (w != 0.0) acc += mult * w * f.at_sorted(insert_sorted(m, e));
    });
    out[ord++] = n * acc;  // n(n-1) * sym(...) collapses to n * multiplicity sum
  });
  return out;
}

Eigen::MatrixXd& TruncatedOperator::block(int m, int n) {
  auto key = std::make_pair(m, n);
  auto it = blocks_.find(key);
  if (it == blocks_.end()) {
    const std::size_t dm = multiset_count(grid_.cells, m);
    const std::size_t dn = multiset_count(grid_.cells, n);
    it = blocks_.emplace(key, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dm),
                                                    static_cast<Eigen::Index>(dn))).first;
  }
  return it->second;
}

const Eigen::MatrixXd* TruncatedOperator::find_block(int m, int n) const {
  auto it = blocks_.find(std::make_pair(m, n));
  return it == blocks_.end() ? nullptr : &it->second;
}

FockVector TruncatedOperator::apply(const FockVector& f) const {
  if (!(f.grid() == grid_)) throw std::invalid_argument("TruncatedOperator::apply: mismatched grids");
  if (f.max_rank() > max_rank_)
    throw std::invalid_argument("TruncatedOperator::apply: input rank above truncation");
  FockVector out(grid_, max_rank_);
  for (const auto& [key, blk] : blocks_) {
    const auto [m, n] = key;
    if (n > f.max_rank()) continue;
    Eigen::Map<const Eigen::VectorXd> x(f.component(n).values().data(),
                                        static_cast<Eigen::Index>(f.component(n).size()));
    Eigen::VectorXd y = blk * x;
    SymTensor& dst = out.component(m);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += y(static_cast<Eigen::Index>(i));
  }
  return out;
}

TruncatedOperator& TruncatedOperator::add_scaled(const TruncatedOperator& o, double s) {
  if (!(o.grid_ == grid_) || o.max_rank_ != max_rank_)
    throw std::invalid_argument("TruncatedOperator::add_scaled: mismatched shapes");
  for (const auto& [key, blk] : o.blocks_) {
    auto it = blocks_.find(key);
    if (it == blocks_.end()) {
      blocks_.emplace(key, s * blk);
    } else {
      it->second += s * blk;
    }
  }
  return *this;
}

TruncatedOperator& TruncatedOperator::operator*=(double s) {
  for (auto& [key, blk] : blocks_) blk *= s;
  return *this;
}

int TruncatedOperator::max_up_shift() const {
  int up = 0;
  for (const auto& [key, blk] : blocks_) up = std::max(up, key.first - key.second);
  return up;
}

double TruncatedOperator::frobenius_norm() const {
  double acc = 0.0;
  for (const auto& [key, blk] : blocks_) acc += blk.squaredNorm();
  return std::sqrt(acc);
}

TruncatedOperator TruncatedOperator::identity(const GridModel& grid, int max_rank, double scale) {
  TruncatedOperator out(grid, max_rank);
  for (int n = 0; n <= max_rank; ++n) {
    const auto dim = static_cast<Eigen::Index>(multiset_count(grid.cells, n));
    out.blocks_.emplace(std::make_pair(n, n),
                        scale * Eigen::MatrixXd::Identity(dim, dim));
  }
  return out;
}

TruncatedOperator compose(const TruncatedOperator& x, const TruncatedOperator& y) {
  if (!(x.grid() == y.grid()) || x.max_rank() != y.max_rank())
    throw std::invalid_argument("compose: mismatched shapes");
  TruncatedOperator out(x.grid(), x.max_rank());
  for (const auto& [ykey, yblk] : y.blocks()) {
    const auto [k, n] = ykey;
    for (const auto& [xkey, xblk] : x.blocks()) {
      if (xkey.second != k) continue;
      out.block(xkey.first, n) += xblk * yblk;
    }
  }
  return out;
}

TruncatedOperator commutator(const TruncatedOperator& x, const TruncatedOperator& y) {
  TruncatedOperator out = compose(x, y);
  TruncatedOperator yx = compose(y, x);
  out.add_scaled(yx, -1.0);
  return out;
}

TruncatedOperator field_matrix(const NoiseFamily& family, const GridFunction& phi, int max_rank) {
  if (max_rank < 0) throw std::invalid_argument("field_matrix: max_rank must be >= 0");
  const GridModel& g = phi.grid;
  auto out = TruncatedOperator::from_tensor_op(g, max_rank, +1,
                                               [&](const SymTensor& f) { return create(phi, f); });
  out.add_scaled(TruncatedOperator::from_tensor_op(
                     g, max_rank, -1, [&](const SymTensor& f) { return annihilate(phi, f); }),
                 1.0);
  if (family.lambda_eff() != 0.0) {
    out.add_scaled(TruncatedOperator::from_tensor_op(
                       g, max_rank, 0, [&](const SymTensor& f) { return neutral(phi, f); }),
                   family.lambda_eff());
  }
  if (family.rho() != 0.0) {
    out.add_scaled(TruncatedOperator::from_tensor_op(
                       g, max_rank, -1,
                       [&](const SymTensor& f) { return double_annihilate(phi, f); }),
                   family.rho());
  }
  return out;
}

TruncatedOperator occupation_orthonormal(const TruncatedOperator& op) {
  const GridModel& g = op.grid();
  // sqrt of the squared pairing norm of each canonical basis tensor, per rank
  std::vector<std::vector<double>> root(static_cast<std::size_t>(op.max_rank()) + 1);
  for (int n = 0; n <= op.max_rank(); ++n) {
    auto& r = root[static_cast<std::size_t>(n)];
    r.reserve(multiset_count(g.cells, n));
    const double base = factorial(n) * std::pow(g.width, n);
    for_each_multiset(g.cells, n, [&](const MultiIndex& m) {
      r.push_back(std::sqrt(base * tuple_count(m)));
    });
  }
  TruncatedOperator out(g, op.max_rank());
  for (const auto& [key, blk] : op.blocks()) {
    const auto [m, n] = key;
    Eigen::MatrixXd scaled = blk;
    const auto& rm = root[static_cast<std::size_t>(m)];
    const auto& rn = root[static_cast<std::size_t>(n)];
    for (Eigen::Index i = 0; i < scaled.rows(); ++i)
      for (Eigen::Index j = 0; j < scaled.cols(); ++j)
        scaled(i, j) *= rm[static_cast<std::size_t>(i)] / rn[static_cast<std::size_t>(j)];
    out.block(m, n) = std::move(scaled);
  }
  return out;
}

double commutator_residual(const TruncatedOperator& x, const TruncatedOperator& y,
                           const TruncatedOperator& expected, int lo, int hi) {
  const int max_rank = x.max_rank();
  if (lo < 0 || hi < lo || hi > max_rank)
    throw std::invalid_argument("commutator_residual: bad rank window");
  if (hi + x.max_up_shift() + y.max_up_shift() > max_rank)
    throw std::invalid_argument("commutator_residual: rank window exceeds safe truncation");
  TruncatedOperator r = commutator(x, y);
  r.add_scaled(expected, -1.0);
  double num = 0.0, den = 0.0;
  for (const auto& [key, blk] : r.blocks()) {
    if (key.second >= lo && key.second <= hi) num += blk.squaredNorm();
  }
  for (const auto& [key, blk] : expected.blocks()) {
    if (key.second >= lo && key.second <= hi) den += blk.squaredNorm();
  }
  return std::sqrt(num) / std::max(1.0, std::sqrt(den));
}

}  // namespace fockgrid
