#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fockgrid/grid.hpp"
#include "fockgrid/symtensor.hpp"
#include "fockgrid/wickpow.hpp"
#include "test_util.hpp"

using namespace fockgrid;

namespace {

// Dense mirror of the renormalized-power recurrence, written against full
// cells^rank arrays with explicit symmetrization.  Slow but direct.
struct Dense {
  int d = 0;
  int rank = 0;
  std::vector<double> v;

  double at(const MultiIndex& idx) const {
    std::size_t flat = 0;
    for (int c : idx) flat = flat * static_cast<std::size_t>(d) + static_cast<std::size_t>(c);
    return v[flat];
  }
};

Dense dense_symmetrize(const Dense& in) {
  Dense out{in.d, in.rank, std::vector<double>(in.v.size(), 0.0)};
  std::size_t pos = 0;
  testutil::for_each_tuple(in.d, in.rank, [&](const MultiIndex& idx) {
    MultiIndex perm = idx;
    std::sort(perm.begin(), perm.end());
    double acc = 0.0;
    std::size_t count = 0;
    do {
      acc += in.at(perm);
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    // every permutation of idx appears count times in the full orbit average
    out.v[pos++] = acc / static_cast<double>(count);
  });
  return out;
}

Dense dense_next(const NoiseFamily& fam, const std::vector<double>& w, double h, const Dense& p,
                 const Dense& q) {
  const int n = p.rank;
  const double lam = fam.lambda_eff();
  const double rho = fam.rho();
  Dense raw{p.d, n + 1, {}};
  raw.v.assign(static_cast<std::size_t>(std::pow(p.d, n + 1)), 0.0);
  std::size_t pos = 0;
  testutil::for_each_tuple(p.d, n + 1, [&](const MultiIndex& idx) {
    const MultiIndex head(idx.begin(), idx.end() - 1);
    double acc = p.at(head) * w[static_cast<std::size_t>(idx.back())];
    if (n >= 1 && idx[static_cast<std::size_t>(n - 1)] == idx[static_cast<std::size_t>(n)]) {
      const MultiIndex head2(idx.begin(), idx.end() - 2);
      acc -= n * q.at(head2) / h;
      acc -= lam * n * p.at(head) / h;
      if (n >= 2 && idx[static_cast<std::size_t>(n - 2)] == idx[static_cast<std::size_t>(n)])
        acc -= rho * n * (n - 1) * q.at(head2) / (h * h);
    }
    raw.v[pos++] = acc;
  });
  return dense_symmetrize(raw);
}

std::vector<Dense> dense_powers(const NoiseFamily& fam, const std::vector<double>& w, double h,
                                int n_max) {
  const int d = static_cast<int>(w.size());
  std::vector<Dense> out;
  out.push_back(Dense{d, 0, {1.0}});
  for (int n = 0; n < n_max; ++n)
    out.push_back(dense_next(fam, w, h, out.back(), n >= 1 ? out[static_cast<std::size_t>(n - 1)]
                                                           : Dense{d, 0, {0.0}}));
  return out;
}

}  // namespace

TEST_SUITE("renormalized powers") {
  TEST_CASE("canonical recurrence matches the dense mirror") {
    for (double h : {1.0, 0.5}) {
      const GridModel g = make_grid(2, h);
      const GridFunction omega = testutil::random_function(g, 3, 0);
      const std::vector<double> w = omega.values;
      for (const NoiseFamily fam :
           {NoiseFamily::gaussian(), NoiseFamily::poisson_type(1.3),
            NoiseFamily::meixner_class(0.8), NoiseFamily::meixner_class(2.0)}) {
        const WickSequence seq = wick_power(fam, omega, 4);
        const std::vector<Dense> oracle = dense_powers(fam, w, h, 4);
        for (int n = 0; n <= 4; ++n) {
          std::size_t ord = 0;
          for_each_multiset(2, n, [&](const MultiIndex& idx) {
            const double got = seq.powers[static_cast<std::size_t>(n)][ord++];
            const double want = oracle[static_cast<std::size_t>(n)].at(idx);
            CHECK(got == doctest::Approx(want).epsilon(1e-11));
          });
        }
      }
    }
  }

  TEST_CASE("gaussian pair power has the closed form") {
    const GridModel g = make_grid(3, 0.4);
    const GridFunction omega = testutil::random_function(g, 5, 1);
    const WickSequence seq = wick_power(NoiseFamily::gaussian(), omega, 2);
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        const double want = omega.values[static_cast<std::size_t>(i)] *
                                omega.values[static_cast<std::size_t>(j)] -
                            (i == j ? 1.0 / g.width : 0.0);
        CHECK(seq.powers[2].at({i, j}) == doctest::Approx(want).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("single cell fixtures at unit width") {
    const GridModel g = make_grid(1, 1.0);
    for (double wv : {-1.5, 0.3, 2.0}) {
      GridFunction omega = constant_function(g, wv);

      const WickSequence ga = wick_power(NoiseFamily::gaussian(), omega, 3);
      CHECK(ga.powers[2][0] == doctest::Approx(wv * wv - 1.0).epsilon(1e-13));
      CHECK(ga.powers[3][0] == doctest::Approx(wv * wv * wv - 3.0 * wv).epsilon(1e-13));

      const WickSequence po = wick_power(NoiseFamily::poisson_type(1.0), omega, 3);
      CHECK(po.powers[2][0] == doctest::Approx(wv * wv - wv - 1.0).epsilon(1e-13));
      CHECK(po.powers[3][0] ==
            doctest::Approx(wv * wv * wv - 3.0 * wv * wv - wv + 2.0).epsilon(1e-12));

      const WickSequence gm = wick_power(NoiseFamily::meixner_class(2.0), omega, 3);
      CHECK(gm.powers[2][0] == doctest::Approx(wv * wv - 2.0 * wv - 1.0).epsilon(1e-13));
      CHECK(gm.powers[3][0] ==
            doctest::Approx(wv * wv * wv - 6.0 * wv * wv + 3.0 * wv + 4.0).epsilon(1e-12));
    }
  }

  TEST_CASE("single cell recurrence carries the width in each link") {
    const double h = 0.25, wv = 1.2, lam = 1.5;
    const GridModel g = make_grid(1, h);
    const GridFunction omega = constant_function(g, wv);
    const WickSequence seq = wick_power(NoiseFamily::meixner_class(lam), omega, 3);
    // v_{n+1} = (w - lam n / h) v_n - (n/h + n(n-1)/h^2) v_{n-1}
    std::vector<double> v = {1.0, wv};
    for (int n = 1; n <= 2; ++n)
      v.push_back((wv - lam * n / h) * v[static_cast<std::size_t>(n)] -
                  (n / h + n * (n - 1.0) / (h * h)) * v[static_cast<std::size_t>(n - 1)]);
    for (int n = 0; n <= 3; ++n)
      CHECK(seq.powers[static_cast<std::size_t>(n)][0] ==
            doctest::Approx(v[static_cast<std::size_t>(n)]).epsilon(1e-12));
  }

  TEST_CASE("negative order is rejected") {
    const GridModel g = make_grid(1, 1.0);
    CHECK_THROWS_AS(wick_power(NoiseFamily::gaussian(), constant_function(g, 0.0), -1),
                    std::invalid_argument);
  }
}

TEST_SUITE("power evaluation") {
  TEST_CASE("pairs through the width-weighted contraction") {
    const GridModel g = make_grid(3, 0.5);
    const GridFunction omega = testutil::random_function(g, 7, 0);
    const WickSequence seq = wick_power(NoiseFamily::poisson_type(0.5), omega, 3);
    for (int n = 0; n <= 3; ++n) {
      const SymTensor f = testutil::random_tensor(g, n, 8, static_cast<std::uint64_t>(n));
      CHECK(wick_eval(seq, f) ==
            doctest::Approx(plain_inner(seq.powers[static_cast<std::size_t>(n)], f))
                .epsilon(1e-14));
    }
    CHECK_THROWS_AS(wick_eval(seq, SymTensor(g, 4)), std::invalid_argument);
  }
}

TEST_SUITE("norm growth") {
  TEST_CASE("profile rows are indexed by order with factorial reference") {
    const GridModel g = make_grid(4, 0.5, -1.0);
    const HermiteScale scale = make_hermite_scale(g, 4);
    const GridFunction omega = testutil::random_function(g, 9, 0);
    const WickSequence seq = wick_power(NoiseFamily::gaussian(), omega, 5);
    const auto rows = growth_profile(seq, scale, 1.0);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].n == 0);
    CHECK(rows[0].norm_sq == doctest::Approx(1.0));
    CHECK(rows[0].factorial == 1.0);
    CHECK(rows[3].factorial == 6.0);
    for (const auto& r : rows) CHECK(r.norm_sq >= 0.0);
  }

  TEST_CASE("log-log fitter recovers a power law") {
    const std::vector<double> x = {1.0, 2.0, 4.0, 8.0};
    std::vector<double> y;
    for (double xv : x) y.push_back(3.0 * xv * xv);
    CHECK(fit_loglog_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("fitter input validation") {
    CHECK_THROWS_AS(fit_loglog_slope({1.0, 2.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog_slope({2.0, 2.0}, {1.0, 5.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog_slope({-1.0, 2.0}, {1.0, 5.0}), std::invalid_argument);
    // nonpositive values are filtered, not fatal, while two good points remain
    CHECK(fit_loglog_slope({1.0, 0.0, 4.0}, {2.0, 9.0, 2.0}) == doctest::Approx(0.0));
  }
}
