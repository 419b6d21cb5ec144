#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "fockgrid/grid.hpp"
#include "fockgrid/ladder.hpp"
#include "fockgrid/symtensor.hpp"
#include "test_util.hpp"

using namespace fockgrid;

namespace {

GridFunction fn(const GridModel& g, std::initializer_list<double> vals) {
  GridFunction f = constant_function(g, 0.0);
  std::size_t i = 0;
  for (double v : vals) f.values[i++] = v;
  return f;
}

}  // namespace

TEST_SUITE("annihilation") {
  TEST_CASE("product state against the weighted trace") {
    const GridModel g = make_grid(2, 0.5);
    const GridFunction phi = fn(g, {1.0, 1.0});
    // f x f with f = (1, 0): only the (0,0) entry is 1
    SymTensor t(g, 2);
    t.at_sorted({0, 0}) = 1.0;
    const SymTensor out = annihilate(phi, t);
    REQUIRE(out.rank() == 1);
    // n*h*sum_j phi_j f(j, .) = 2*0.5*f(0, .) = (1, 0)
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(0.0));
  }

  TEST_CASE("rank 1 collapses to a scalar multiple") {
    const GridModel g = make_grid(1, 1.0);
    const GridFunction phi = fn(g, {1.0});
    SymTensor t(g, 1);
    t[0] = 3.25;
    const SymTensor out = annihilate(phi, t);
    REQUIRE(out.rank() == 0);
    CHECK(out[0] == doctest::Approx(3.25));
  }

  TEST_CASE("vacuum has no particles to remove") {
    const GridModel g = make_grid(2, 1.0);
    const GridFunction phi = constant_function(g, 1.0);
    CHECK_THROWS_AS(annihilate(phi, SymTensor::scalar(g, 1.0)), std::invalid_argument);
  }
}

TEST_SUITE("creation") {
  TEST_CASE("vacuum maps to the test function itself") {
    const GridModel g = make_grid(3, 0.5);
    const GridFunction phi = fn(g, {1.0, -2.0, 0.5});
    const SymTensor out = create(phi, SymTensor::scalar(g, 1.0));
    REQUIRE(out.rank() == 1);
    for (int i = 0; i < g.cells; ++i)
      CHECK(out[static_cast<std::size_t>(i)] == phi.values[static_cast<std::size_t>(i)]);
  }

  TEST_CASE("concentrated inputs give a concentrated pair state") {
    const GridModel g = make_grid(2, 1.0);
    const GridFunction phi = fn(g, {1.0, 0.0});
    SymTensor t(g, 1);
    t[0] = 1.0;
    const SymTensor out = create(phi, t);
    REQUIRE(out.rank() == 2);
    CHECK(out.at_sorted({0, 0}) == doctest::Approx(1.0));
    CHECK(out.at_sorted({0, 1}) == doctest::Approx(0.0));
    CHECK(out.at_sorted({1, 1}) == doctest::Approx(0.0));
  }

  TEST_CASE("is the symmetric product with the test function") {
    const GridModel g = make_grid(3, 0.7);
    const GridFunction phi = testutil::random_function(g, 17, 0);
    const SymTensor t = testutil::random_tensor(g, 2, 18, 1);
    SymTensor phi1(g, 1);
    for (int i = 0; i < g.cells; ++i)
      phi1[static_cast<std::size_t>(i)] = phi.values[static_cast<std::size_t>(i)];
    const SymTensor lhs = create(phi, t);
    const SymTensor rhs = sym_product(phi1, t);
    REQUIRE(lhs.size() == rhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i)
      CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-14));
  }
}

TEST_SUITE("number-like action") {
  TEST_CASE("multiplies by the sum of samples along the index") {
    const GridModel g = make_grid(2, 1.0);
    const GridFunction phi = fn(g, {2.0, 3.0});
    SymTensor t(g, 2);
    t.at_sorted({0, 1}) = 1.0;
    const SymTensor out = neutral(phi, t);
    REQUIRE(out.rank() == 2);
    CHECK(out.at_sorted({0, 1}) == doctest::Approx(5.0));
    CHECK(out.at_sorted({0, 0}) == doctest::Approx(0.0));
    CHECK(out.at_sorted({1, 1}) == doctest::Approx(0.0));

    SymTensor diag(g, 2);
    diag.at_sorted({1, 1}) = 1.0;
    CHECK(neutral(phi, diag).at_sorted({1, 1}) == doctest::Approx(6.0));
  }

  TEST_CASE("kills the vacuum") {
    const GridModel g = make_grid(2, 0.5);
    const SymTensor out = neutral(constant_function(g, 1.0), SymTensor::scalar(g, 4.0));
    REQUIRE(out.rank() == 0);
    CHECK(out[0] == 0.0);
  }

  TEST_CASE("single cell rank 1 doubles nothing but the sample") {
    const GridModel g = make_grid(1, 1.0);
    const GridFunction phi = fn(g, {2.0});
    SymTensor t(g, 1);
    t[0] = 5.0;
    CHECK(neutral(phi, t)[0] == doctest::Approx(10.0));
  }
}

TEST_SUITE("diagonal double annihilation") {
  TEST_CASE("rank 1 has no pairs") {
    const GridModel g = make_grid(3, 0.5);
    SymTensor t(g, 1);
    t[1] = 2.0;
    const SymTensor out = double_annihilate(constant_function(g, 1.0), t);
    REQUIRE(out.rank() == 0);
    CHECK(out[0] == 0.0);
  }

  TEST_CASE("single cell rank 2 scales by n(n-1) and the sample") {
    const GridModel g = make_grid(1, 0.25);
    const GridFunction phi = fn(g, {3.0});
    SymTensor t(g, 2);
    t[0] = 1.5;
    const SymTensor out = double_annihilate(phi, t);
    REQUIRE(out.rank() == 1);
    // 2 * 1 * phi(t0) * f(t0,t0), no width factor
    CHECK(out[0] == doctest::Approx(9.0));
  }

  TEST_CASE("single cell rank 3") {
    const GridModel g = make_grid(1, 1.0);
    const GridFunction phi = fn(g, {2.0});
    SymTensor t(g, 3);
    t[0] = 1.0;
    const SymTensor out = double_annihilate(phi, t);
    REQUIRE(out.rank() == 2);
    CHECK(out[0] == doctest::Approx(12.0));
  }

  TEST_CASE("off-diagonal mass is untouched by the diagonal restriction") {
    const GridModel g = make_grid(2, 1.0);
    const GridFunction phi = fn(g, {1.0, 1.0});
    SymTensor t(g, 2);
    t.at_sorted({0, 1}) = 1.0;
    const SymTensor out = double_annihilate(phi, t);
    REQUIRE(out.rank() == 1);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
  }
}

TEST_SUITE("truncated operators") {
  TEST_CASE("occupation rescaling gives the classic Jacobi matrix") {
    const GridModel g = make_grid(1, 1.0);
    const GridFunction phi = fn(g, {1.0});
    const TruncatedOperator a = field_matrix(NoiseFamily::gaussian(), phi, 2);
    const TruncatedOperator s = occupation_orthonormal(a);
    const double r2 = std::sqrt(2.0);
    REQUIRE(s.find_block(1, 0) != nullptr);
    REQUIRE(s.find_block(0, 1) != nullptr);
    REQUIRE(s.find_block(2, 1) != nullptr);
    REQUIRE(s.find_block(1, 2) != nullptr);
    CHECK((*s.find_block(1, 0))(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((*s.find_block(0, 1))(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((*s.find_block(2, 1))(0, 0) == doctest::Approx(r2).epsilon(1e-14));
    CHECK((*s.find_block(1, 2))(0, 0) == doctest::Approx(r2).epsilon(1e-14));
    CHECK(s.find_block(0, 0) == nullptr);
    CHECK(s.find_block(2, 0) == nullptr);
  }

  TEST_CASE("gaussian field is symmetric in the occupation basis") {
    const GridModel g = make_grid(3, 0.5);
    const GridFunction phi = testutil::random_function(g, 31, 0);
    const TruncatedOperator s =
        occupation_orthonormal(field_matrix(NoiseFamily::gaussian(), phi, 4));
    for (const auto& [key, blk] : s.blocks()) {
      const Eigen::MatrixXd* tr = s.find_block(key.second, key.first);
      REQUIRE(tr != nullptr);
      CHECK((blk - tr->transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("field is block tridiagonal") {
    const GridModel g = make_grid(2, 0.5);
    const GridFunction phi = testutil::random_function(g, 32, 0);
    for (const NoiseFamily fam : {NoiseFamily::gaussian(), NoiseFamily::poisson_type(1.0),
                                  NoiseFamily::meixner_class(2.0)}) {
      const TruncatedOperator a = field_matrix(fam, phi, 4);
      for (const auto& [key, blk] : a.blocks()) {
        CHECK(std::abs(key.first - key.second) <= 1);
        CHECK(blk.cwiseAbs().maxCoeff() > 0.0);
      }
    }
  }

  TEST_CASE("gaussian and zero-parameter poisson have no rank-preserving part") {
    const GridModel g = make_grid(2, 1.0);
    const GridFunction phi = testutil::random_function(g, 33, 0);
    const TruncatedOperator a = field_matrix(NoiseFamily::meixner_class(0.0), phi, 3);
    for (const auto& [key, blk] : a.blocks()) {
      (void)blk;
      CHECK(key.first != key.second);
    }
  }

  TEST_CASE("apply matches the tensor-level operators") {
    const GridModel g = make_grid(2, 0.5);
    const GridFunction phi = testutil::random_function(g, 34, 0);
    const NoiseFamily fam = NoiseFamily::meixner_class(1.5);
    const TruncatedOperator a = field_matrix(fam, phi, 3);
    FockVector v(g, 3);
    for (int n = 0; n <= 3; ++n) v.set_component(testutil::random_tensor(g, n, 35, n));
    const FockVector image = a.apply(v);
    for (int m = 0; m <= 3; ++m) {
      SymTensor want(g, m);
      if (m >= 1) want += create(phi, v.component(m - 1));
      if (m + 1 <= 3) {
        SymTensor down = annihilate(phi, v.component(m + 1));
        down += double_annihilate(phi, v.component(m + 1));  // rho = 1
        want += down;
      }
      {
        SymTensor mid = neutral(phi, v.component(m));
        mid *= fam.lambda_eff();
        want += mid;
      }
      const SymTensor& got = image.component(m);
      for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-13));
    }
  }
}

TEST_SUITE("commutation residuals") {
  TEST_CASE("exchange bracket reproduces the overlap times identity") {
    const GridModel g = make_grid(3, 0.5);
    const int N = 5;
    const GridFunction phi = testutil::random_function(g, 41, 0);
    const GridFunction psi = testutil::random_function(g, 42, 0);
    const auto lift = [&](int shift, auto&& op) {
      return TruncatedOperator::from_tensor_op(g, N, shift,
                                               [&](const SymTensor& t) { return op(t); });
    };
    const TruncatedOperator up = lift(1, [&](const SymTensor& t) { return create(psi, t); });
    const TruncatedOperator down = lift(-1, [&](const SymTensor& t) { return annihilate(phi, t); });
    const TruncatedOperator expected = TruncatedOperator::identity(g, N, l2_inner(phi, psi));
    CHECK(commutator_residual(down, up, expected, 0, N - 1) < 1e-12);
  }

  TEST_CASE("window bounds reject truncation-polluted ranks") {
    const GridModel g = make_grid(2, 1.0);
    const int N = 3;
    const GridFunction phi = constant_function(g, 1.0);
    const auto up = TruncatedOperator::from_tensor_op(
        g, N, 1, [&](const SymTensor& t) { return create(phi, t); });
    const auto down = TruncatedOperator::from_tensor_op(
        g, N, -1, [&](const SymTensor& t) { return annihilate(phi, t); });
    const TruncatedOperator expected = TruncatedOperator::identity(g, N, l2_inner(phi, phi));
    CHECK_THROWS_AS(commutator_residual(down, up, expected, 0, N), std::invalid_argument);
    CHECK_NOTHROW(commutator_residual(down, up, expected, 0, N - 1));
  }
}
