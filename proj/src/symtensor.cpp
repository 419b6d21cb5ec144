#include "fockgrid/symtensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fockgrid {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

double factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::size_t multiset_count(int cells, int rank) {
  return static_cast<std::size_t>(binomial(cells + rank - 1, rank));
}

std::size_t multiset_ordinal(int cells, const MultiIndex& sorted) {
  const int n = static_cast<int>(sorted.size());
  std::size_t ord = 0;
  int lo = 0;
  for (int k = 0; k < n; ++k) {
    for (int c = lo; c < sorted[static_cast<std::size_t>(k)]; ++c) {
      ord += multiset_count(cells - c, n - k - 1);
    }
    lo = sorted[static_cast<std::size_t>(k)];
  }
  return ord;
}

double tuple_count(const MultiIndex& sorted) {
  const int n = static_cast<int>(sorted.size());
  double r = factorial(n);
  int run = 1;
  for (int k = 1; k < n; ++k) {
    if (sorted[static_cast<std::size_t>(k)] == sorted[static_cast<std::size_t>(k - 1)]) {
      ++run;
      r /= run;
    } else {
      run = 1;
    }
  }
  return r;
}

SymTensor::SymTensor(const GridModel& grid, int rank) : grid_(grid), rank_(rank) {
  if (rank < 0) throw std::invalid_argument("SymTensor: rank must be >= 0");
  if (grid.cells < 1) throw std::invalid_argument("SymTensor: empty grid");
  vals_.assign(multiset_count(grid.cells, rank), 0.0);
}

SymTensor SymTensor::scalar(const GridModel& grid, double v) {
  SymTensor t(grid, 0);
  t.vals_[0] = v;
  return t;
}

double SymTensor::at(MultiIndex idx) const {
  std::sort(idx.begin(), idx.end());
  return at_sorted(idx);
}

double SymTensor::at_sorted(const MultiIndex& idx) const {
  return vals_[multiset_ordinal(grid_.cells, idx)];
}

double& SymTensor::at_sorted(const MultiIndex& idx) {
  return vals_[multiset_ordinal(grid_.cells, idx)];
}

static void require_compatible(const SymTensor& a, const SymTensor& b, const char* op,
                               bool same_rank = true) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(op) + ": mismatched grids");
  if (same_rank && a.rank() != b.rank())
    throw std::invalid_argument(std::string(op) + ": mismatched ranks");
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  require_compatible(*this, o, "SymTensor::operator+=");
  for (std::size_t i = 0; i < vals_.size(); ++i) vals_[i] += o.vals_[i];
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
  require_compatible(*this, o, "SymTensor::operator-=");
  for (std::size_t i = 0; i < vals_.size(); ++i) vals_[i] -= o.vals_[i];
  return *this;
}

SymTensor& SymTensor::operator*=(double s) {
  for (double& v : vals_) v *= s;
  return *this;
}

std::size_t RawTensor::flat(const MultiIndex& idx) const {
  std::size_t f = 0;
  for (int v : idx) f = f * static_cast<std::size_t>(cells) + static_cast<std::size_t>(v);
  return f;
}

static std::size_t dense_size(int cells, int rank) {
  std::size_t s = 1;
  for (int k = 0; k < rank; ++k) s *= static_cast<std::size_t>(cells);
  return s;
}

RawTensor make_raw(int cells, int rank, std::vector<double> values) {
  if (cells < 1 || rank < 0) throw std::invalid_argument("make_raw: bad shape");
  if (values.size() != dense_size(cells, rank))
    throw std::invalid_argument("make_raw: expected " + std::to_string(dense_size(cells, rank)) +
                                " values, got " + std::to_string(values.size()));
  return RawTensor{cells, rank, std::move(values)};
}

SymTensor symmetrize(const GridModel& grid, const RawTensor& raw) {
  if (raw.cells != grid.cells) throw std::invalid_argument("symmetrize: mismatched cell counts");
  if (raw.values.size() != dense_size(raw.cells, raw.rank))
    throw std::invalid_argument("symmetrize: ragged input");
  SymTensor out(grid, raw.rank);
  std::size_t ord = 0;
  for_each_multiset(grid.cells, raw.rank, [&](const MultiIndex& m) {
    MultiIndex perm = m;
    double acc = 0.0;
    std::size_t count = 0;
    do {
      acc += raw.values[raw.flat(perm)];
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out[ord++] = acc / static_cast<double>(count);
  });
  return out;
}

RawTensor to_dense(const SymTensor& t, std::size_t budget) {
  const std::size_t total = dense_size(t.grid().cells, t.rank());
  if (total > budget) throw std::length_error("to_dense: dense size exceeds budget");
  RawTensor raw{t.grid().cells, t.rank(), std::vector<double>(total, 0.0)};
  std::size_t ord = 0;
  for_each_multiset(t.grid().cells, t.rank(), [&](const MultiIndex& m) {
    const double v = t[ord++];
    MultiIndex perm = m;
    do {
      raw.values[raw.flat(perm)] = v;
    } while (std::next_permutation(perm.begin(), perm.end()));
  });
  return raw;
}

namespace {

struct MultRun {
  int elem;
  int mult;
};

std::vector<MultRun> runs_of(const MultiIndex& sorted) {
  std::vector<MultRun> runs;
  for (int v : sorted) {
    if (!runs.empty() && runs.back().elem == v) {
      ++runs.back().mult;
    } else {
      runs.push_back({v, 1});
    }
  }
  return runs;
}

// Sums prod_e C(mult_e, take_e) * S(A) * T(M\A) over sub-multisets A of size m.
double split_sum(const std::vector<MultRun>& runs, std::size_t r, int remaining,
                 MultiIndex& a, MultiIndex& b, const SymTensor& s, const SymTensor& t) {
  if (r == runs.size()) {
    if (remaining != 0) return 0.0;
    return s.at_sorted(a) * t.at_sorted(b);
  }
  const auto& run = runs[r];
  double acc = 0.0;
  const int hi = std::min(run.mult, remaining);
  for (int take = 0; take <= hi; ++take) {
    const std::size_t a0 = a.size(), b0 = b.size();
    a.insert(a.end(), static_cast<std::size_t>(take), run.elem);
    b.insert(b.end(), static_cast<std::size_t>(run.mult - take), run.elem);
    acc += static_cast<double>(binomial(run.mult, take)) *
           split_sum(runs, r + 1, remaining - take, a, b, s, t);
    a.resize(a0);
    b.resize(b0);
  }
  return acc;
}

}  // namespace

SymTensor sym_product(const SymTensor& s, const SymTensor& t) {
  require_compatible(s, t, "sym_product", /*same_rank=*/false);
  const int m = s.rank(), n = t.rank();
  SymTensor out(s.grid(), m + n);
  const double coeff = factorial(m) * factorial(n) / factorial(m + n);
  std::size_t ord = 0;
  MultiIndex a, b;
  a.reserve(static_cast<std::size_t>(m + n));
  b.reserve(static_cast<std::size_t>(m + n));
  for_each_multiset(s.grid().cells, m + n, [&](const MultiIndex& full) {
    const auto runs = runs_of(full);
    a.clear();
    b.clear();
    out[ord++] = coeff * split_sum(runs, 0, m, a, b, s, t);
  });
  return out;
}

double plain_inner(const SymTensor& s, const SymTensor& t) {
  require_compatible(s, t, "plain_inner");
  double acc = 0.0;
  std::size_t ord = 0;
  for_each_multiset(s.grid().cells, s.rank(), [&](const MultiIndex& m) {
    acc += tuple_count(m) * s[ord] * t[ord];
    ++ord;
  });
  return acc * std::pow(s.grid().width, s.rank());
}

FockVector::FockVector(const GridModel& grid, int max_rank) : grid_(grid) {
  if (max_rank < 0) throw std::invalid_argument("FockVector: max_rank must be >= 0");
  comps_.reserve(static_cast<std::size_t>(max_rank) + 1);
  for (int n = 0; n <= max_rank; ++n) comps_.emplace_back(grid, n);
}

FockVector FockVector::vacuum(const GridModel& grid, int max_rank) {
  FockVector f(grid, max_rank);
  f.component(0)[0] = 1.0;
  return f;
}

void FockVector::set_component(const SymTensor& t) {
  if (!(t.grid() == grid_)) throw std::invalid_argument("FockVector::set_component: mismatched grids");
  if (t.rank() > max_rank())
    throw std::invalid_argument("FockVector::set_component: rank above max_rank");
  comps_[static_cast<std::size_t>(t.rank())] = t;
}

double fock_pairing(const FockVector& f, const FockVector& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("fock_pairing: mismatched grids");
  const int top = std::min(f.max_rank(), g.max_rank());
  double acc = 0.0;
  for (int n = 0; n <= top; ++n)
    acc += factorial(n) * plain_inner(f.component(n), g.component(n));
  return acc;
}

double fock_norm_sq(const FockVector& f) { return fock_pairing(f, f); }

double mode_norm_sq(const SymTensor& t, const HermiteScale& scale, double p, std::size_t budget) {
  if (!(t.grid() == scale.grid)) throw std::invalid_argument("mode_norm_sq: mismatched grids");
  const int n = t.rank();
  if (n == 0) return t[0] * t[0];
  const int d = t.grid().cells;
  const int nj = scale.modes;

  // Intermediate state after k contractions: one value per pair of canonical
  // multisets (modes, size k) x (cells, size n-k).  Both factors stay
  // symmetric, so the state never approaches the d^n dense size.
  for (int k = 0; k <= n; ++k) {
    const std::size_t need = multiset_count(nj, k) * multiset_count(d, n - k);
    if (need > budget) throw std::length_error("mode_norm_sq: state size exceeds budget");
  }

  // mode matrix row j: h * e_j(cell i), so each contraction is an h-weighted inner product
  std::vector<std::vector<double>> w(static_cast<std::size_t>(nj),
                                     std::vector<double>(static_cast<std::size_t>(d)));
  for (int r = 0; r < nj; ++r)
    for (int c = 0; c < d; ++c)
      w[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          t.grid().width * scale.mode_fns[static_cast<std::size_t>(r)]
                               .values[static_cast<std::size_t>(c)];

  std::vector<double> state = t.values();
  for (int k = 0; k < n; ++k) {
    const std::size_t cell_count = multiset_count(d, n - k - 1);
    const std::size_t src_cell_count = multiset_count(d, n - k);
    std::vector<double> next(multiset_count(nj, k + 1) * cell_count, 0.0);
    std::size_t out_mode = 0;
    MultiIndex grown(static_cast<std::size_t>(n - k));
    for_each_multiset(nj, k + 1, [&](const MultiIndex& jm) {
      // peel the largest mode; the remaining sorted prefix addresses state
      const MultiIndex head(jm.begin(), jm.end() - 1);
      const std::size_t src_mode = multiset_ordinal(nj, head);
      const auto& wj = w[static_cast<std::size_t>(jm.back())];
      std::size_t out_cell = 0;
      for_each_multiset(d, n - k - 1, [&](const MultiIndex& m) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
          if (wj[static_cast<std::size_t>(i)] == 0.0) continue;
          std::size_t pos = 0;
          while (pos < m.size() && m[pos] <= i) {
            grown[pos] = m[pos];
            ++pos;
          }
          grown[pos] = i;
          for (std::size_t q = pos; q < m.size(); ++q) grown[q + 1] = m[q];
          acc += wj[static_cast<std::size_t>(i)] *
                 state[src_mode * src_cell_count + multiset_ordinal(d, grown)];
        }
        next[out_mode * cell_count + out_cell] = acc;
        ++out_cell;
      });
      ++out_mode;
    });
    state.swap(next);
  }

  std::vector<double> lam(static_cast<std::size_t>(nj));
  for (int r = 0; r < nj; ++r)
    lam[static_cast<std::size_t>(r)] = std::pow(scale.eigenvalue(r), p);

  double acc = 0.0;
  std::size_t ord = 0;
  for_each_multiset(nj, n, [&](const MultiIndex& jm) {
    double weight = tuple_count(jm);
    for (int j : jm) weight *= lam[static_cast<std::size_t>(j)];
    acc += weight * state[ord] * state[ord];
    ++ord;
  });
  return acc;
}

double kappa_p_norm_sq(const FockVector& f, double kappa, double p, const HermiteScale& scale) {
  double acc = 0.0;
  for (int n = 0; n <= f.max_rank(); ++n) {
    acc += std::pow(factorial(n), 1.0 + kappa) * mode_norm_sq(f.component(n), scale, p);
  }
  return acc;
}

}  // namespace fockgrid
