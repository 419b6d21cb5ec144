#include "fockgrid/extfock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fockgrid {

int PartitionAlpha::n() const {
  int acc = 0;
  for (std::size_t k = 0; k < mult.size(); ++k) acc += static_cast<int>(k + 1) * mult[k];
  return acc;
}

int PartitionAlpha::length() const {
  int acc = 0;
  for (int m : mult) acc += m;
  return acc;
}

namespace {

void gen_partitions(int k, int remaining, std::vector<int>& mult,
                    std::vector<PartitionAlpha>& out, int n) {
  if (remaining == 0) {
    PartitionAlpha a{mult};
    a.mult.resize(static_cast<std::size_t>(n), 0);
    out.push_back(std::move(a));
    return;
  }
  if (k > remaining) return;
  for (int c = remaining / k; c >= 0; --c) {
    mult[static_cast<std::size_t>(k - 1)] = c;
    gen_partitions(k + 1, remaining - c * k, mult, out, n);
  }
  mult[static_cast<std::size_t>(k - 1)] = 0;
}

}  // namespace

std::vector<PartitionAlpha> partitions(int n) {
  if (n < 0) throw std::invalid_argument("partitions: negative n");
  std::vector<PartitionAlpha> out;
  if (n == 0) {
    out.push_back(PartitionAlpha{});
    return out;
  }
  std::vector<int> mult(static_cast<std::size_t>(n), 0);
  gen_partitions(1, n, mult, out, n);
  return out;
}

double partition_coeff(int n, const PartitionAlpha& alpha) {
  if (alpha.n() != n) throw std::invalid_argument("partition_coeff: partition does not sum to n");
  // exact in 64-bit for the desk range n <= 20
  std::uint64_t den = 1;
  for (std::size_t k = 0; k < alpha.mult.size(); ++k) {
    const int m = alpha.mult[k];
    for (int i = 2; i <= m; ++i) den *= static_cast<std::uint64_t>(i);
    for (int i = 0; i < m; ++i) den *= static_cast<std::uint64_t>(k + 1);
  }
  std::uint64_t num = 1;
  for (int i = 2; i <= n; ++i) num *= static_cast<std::uint64_t>(i);
  return static_cast<double>(num / den);
}

RawTensor diagonal_restrict(const SymTensor& t, const PartitionAlpha& alpha) {
  if (alpha.n() != t.rank())
    throw std::invalid_argument("diagonal_restrict: partition does not match tensor rank");
  const int d = t.grid().cells;
  const int r = alpha.length();
  std::size_t total = 1;
  for (int k = 0; k < r; ++k) {
    total *= static_cast<std::size_t>(d);
    if (total > (std::size_t(1) << 26))
      throw std::length_error("diagonal_restrict: dense size exceeds budget");
  }
  RawTensor out{d, r, std::vector<double>(total, 0.0)};

  // repeat[k]: how many copies of output argument k feed the tensor
  std::vector<int> repeat;
  repeat.reserve(static_cast<std::size_t>(r));
  for (std::size_t k = 0; k < alpha.mult.size(); ++k)
    for (int i = 0; i < alpha.mult[k]; ++i) repeat.push_back(static_cast<int>(k + 1));

  MultiIndex tuple(static_cast<std::size_t>(r), 0);
  MultiIndex glued;
  glued.reserve(static_cast<std::size_t>(t.rank()));
  for (std::size_t flat = 0; flat < total; ++flat) {
    glued.clear();
    for (int k = 0; k < r; ++k)
      glued.insert(glued.end(), static_cast<std::size_t>(repeat[static_cast<std::size_t>(k)]),
                   tuple[static_cast<std::size_t>(k)]);
    std::sort(glued.begin(), glued.end());
    out.values[flat] = t.at_sorted(glued);
    int k = r - 1;
    while (k >= 0 && ++tuple[static_cast<std::size_t>(k)] == d) {
      tuple[static_cast<std::size_t>(k)] = 0;
      --k;
    }
  }
  return out;
}

double ext_inner(const SymTensor& s, const SymTensor& t) {
  if (!(s.grid() == t.grid())) throw std::invalid_argument("ext_inner: mismatched grids");
  if (s.rank() != t.rank()) throw std::invalid_argument("ext_inner: mismatched ranks");
  const int n = s.rank();
  if (n == 0) return s[0] * t[0];
  double acc = 0.0;
  for (const PartitionAlpha& alpha : partitions(n)) {
    const RawTensor ds = diagonal_restrict(s, alpha);
    const RawTensor dt = diagonal_restrict(t, alpha);
    double dot = 0.0;
    for (std::size_t i = 0; i < ds.values.size(); ++i) dot += ds.values[i] * dt.values[i];
    acc += partition_coeff(n, alpha) * std::pow(s.grid().width, alpha.length()) * dot;
  }
  return acc;
}

double ext_pairing(const FockVector& f, const FockVector& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("ext_pairing: mismatched grids");
  const int top = std::min(f.max_rank(), g.max_rank());
  double acc = 0.0;
  for (int n = 0; n <= top; ++n) acc += factorial(n) * ext_inner(f.component(n), g.component(n));
  return acc;
}

double adjointness_residual(const GridFunction& phi, const SymTensor& f, const SymTensor& g) {
  if (g.rank() != f.rank() + 1)
    throw std::invalid_argument("adjointness_residual: g must have rank(f)+1");
  const int n = f.rank();
  const double lhs = factorial(n + 1) * ext_inner(create(phi, f), g);
  SymTensor down = annihilate(phi, g);
  down += double_annihilate(phi, g);
  const double rhs = factorial(n) * ext_inner(f, down);
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace fockgrid
