#include "fockgrid/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fockgrid/extfock.hpp"
#include "fockgrid/grid.hpp"
#include "fockgrid/ladder.hpp"
#include "fockgrid/levysim.hpp"
#include "fockgrid/orthopoly.hpp"
#include "fockgrid/rng.hpp"
#include "fockgrid/swn.hpp"
#include "fockgrid/symtensor.hpp"
#include "fockgrid/wickcalc.hpp"
#include "fockgrid/wickpow.hpp"

namespace fockgrid {

namespace {

GridFunction random_function(const GridModel& grid, std::uint64_t seed, std::uint64_t stream) {
  RngStream rng(seed, stream);
  std::vector<double> v(static_cast<std::size_t>(grid.cells));
  for (double& x : v) x = 2.0 * rng.uniform() - 1.0;
  return make_function(grid, v);
}

SymTensor random_tensor(const GridModel& grid, int rank, std::uint64_t seed,
                        std::uint64_t stream) {
  RngStream rng(seed, stream);
  SymTensor t(grid, rank);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = 2.0 * rng.uniform() - 1.0;
  return t;
}

struct RowBuilder {
  std::vector<CheckRow> rows;
  double tol_override;

  explicit RowBuilder(double t) : tol_override(t) {}

  void add(const std::string& name, double residual, double default_tol) {
    const double tol = tol_override >= 0.0 ? tol_override : default_tol;
    rows.push_back({name, residual, tol, residual < tol});
  }
};

TruncatedOperator lift(const GridModel& g, int n, int shift,
                       SymTensor (*op)(const GridFunction&, const SymTensor&),
                       const GridFunction& phi) {
  return TruncatedOperator::from_tensor_op(g, n, shift,
                                           [&](const SymTensor& f) { return op(phi, f); });
}

SuiteReport finish(std::string name, RowBuilder&& b) {
  SuiteReport r{std::move(name), std::move(b.rows), true};
  for (const CheckRow& c : r.checks) r.pass = r.pass && c.pass;
  return r;
}

SuiteReport run_ccr(const VerifyParams& p) {
  if (p.rank < 2) throw std::invalid_argument("ccr suite needs rank >= 2");
  const GridModel g = make_grid(p.cells, p.width, p.origin);
  const int n = p.rank;
  double r_ccr = 0.0, r_nc = 0.0, r_na = 0.0, r_dc = 0.0;
  for (int k = 0; k < 10; ++k) {
    const GridFunction phi = random_function(g, p.seed, 2 * static_cast<std::uint64_t>(k));
    const GridFunction psi = random_function(g, p.seed, 2 * static_cast<std::uint64_t>(k) + 1);
    const GridFunction prod = cell_product(phi, psi);
    const TruncatedOperator am = lift(g, n, -1, annihilate, phi);
    const TruncatedOperator ap = lift(g, n, +1, create, psi);
    const TruncatedOperator a0 = lift(g, n, 0, neutral, phi);
    const TruncatedOperator a1 = lift(g, n, -1, double_annihilate, phi);

    const TruncatedOperator id_scaled = TruncatedOperator::identity(g, n, l2_inner(phi, psi));
    r_ccr = std::max(r_ccr, commutator_residual(am, ap, id_scaled, 0, n - 1));

    r_nc = std::max(r_nc, commutator_residual(a0, ap, lift(g, n, +1, create, prod), 0, n - 1));

    TruncatedOperator neg_am = lift(g, n, -1, annihilate, prod);
    neg_am *= -1.0;
    r_na = std::max(r_na, commutator_residual(a0, lift(g, n, -1, annihilate, psi), neg_am, 0,
                                              n - 1));

    TruncatedOperator two_a0 = lift(g, n, 0, neutral, prod);
    two_a0 *= 2.0;
    r_dc = std::max(r_dc, commutator_residual(a1, ap, two_a0, 0, n - 2));
  }
  RowBuilder b(p.tol);
  b.add("annihilate_create_ccr", r_ccr, 1e-10);
  b.add("neutral_create_bracket", r_nc, 1e-10);
  b.add("neutral_annihilate_bracket", r_na, 1e-10);
  b.add("double_annihilate_create_bracket", r_dc, 1e-10);
  return finish("ccr", std::move(b));
}

SuiteReport run_extfock(const VerifyParams& p) {
  RowBuilder b(p.tol);

  static const long long kPartitionCounts[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77};
  double count_resid = 0.0;
  for (int n = 0; n <= 12; ++n)
    count_resid = std::max(
        count_resid, std::abs(static_cast<double>(partitions(n).size()) -
                              static_cast<double>(kPartitionCounts[n])));
  b.add("partition_count", count_resid, 0.5);

  const GridModel unit = make_grid(1, 1.0, 0.0);
  double fact_resid = 0.0;
  double fact = 1.0;
  for (int n = 1; n <= 8; ++n) {
    fact *= n;
    SymTensor ones(unit, n);
    ones[0] = 1.0;
    fact_resid = std::max(fact_resid, std::abs(ext_inner(ones, ones) - fact));
  }
  b.add("partition_coeff_identity", fact_resid, 0.5);

  double adj = 0.0;
  std::uint64_t stream = 100;
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 1 + rep % 3;
    const double h = rep % 2 == 0 ? 1.0 : 0.5;
    const int n = 1 + rep % 4;
    const GridModel g = make_grid(d, h, 0.0);
    const GridFunction phi = random_function(g, p.seed, stream++);
    const SymTensor f = random_tensor(g, n - 1, p.seed, stream++);
    const SymTensor fg = random_tensor(g, n, p.seed, stream++);
    adj = std::max(adj, adjointness_residual(phi, f, fg));
  }
  b.add("create_adjoint_residual", adj, 1e-10);

  {
    const GridFunction phi = constant_function(unit, 1.0);
    SymTensor f(unit, 1);
    f[0] = 1.0;
    SymTensor g2(unit, 2);
    g2[0] = 1.0;
    const double lhs = 2.0 * ext_inner(create(phi, f), g2);
    SymTensor down = annihilate(phi, g2);
    down += double_annihilate(phi, g2);
    const double rhs = 1.0 * ext_inner(f, down);
    b.add("adjoint_hand_case", std::abs(lhs - 4.0) + std::abs(rhs - 4.0), 1e-12);
  }
  return finish("extfock", std::move(b));
}

SuiteReport run_swn(const VerifyParams& p) {
  if (p.rank < 2) throw std::invalid_argument("swn suite needs rank >= 2");
  const GridModel g = make_grid(p.cells, p.width, p.origin);
  const GridFunction phi = random_function(g, p.seed, 0);
  const GridFunction psi = random_function(g, p.seed, 1);
  RowBuilder b(p.tol);
  for (const RelationResidual& r : swn_relation_residuals(phi, psi, p.rank))
    b.add(r.name, r.residual, 1e-10);

  // B + B† + lambda N reproduces the Meixner-class field operator exactly.
  double field_resid = 0.0;
  for (double lambda : {0.0, 1.0, 3.0}) {
    const SwnGenerators s = swn_generators(phi, p.rank);
    TruncatedOperator sum = s.b;
    sum.add_scaled(s.b_dag, 1.0);
    sum.add_scaled(s.n_mid, lambda);
    TruncatedOperator twice_field = field_matrix(NoiseFamily::meixner_class(lambda), phi, p.rank);
    twice_field *= 2.0;
    sum.add_scaled(twice_field, -1.0);
    field_resid = std::max(field_resid, sum.frobenius_norm());
  }
  b.add("field_consistency", field_resid, 1e-12);
  return finish("swn", std::move(b));
}

SuiteReport run_ortho(const VerifyParams& p) {
  RowBuilder b(p.tol);
  b.add("orthonormality_lambda0", orthonormality_residual(make_measure(0.0), 6), 1e-6);
  b.add("orthonormality_gamma", orthonormality_residual(make_measure(2.0), 6), 1e-6);
  b.add("orthonormality_pascal", orthonormality_residual(make_measure(3.0), 6), 1e-8);

  double mass_resid = 0.0;
  for (double lambda : {2.5, 3.0, 5.0})
    mass_resid = std::max(mass_resid, std::abs(make_measure(lambda).mass() - 1.0));
  b.add("pascal_mass", mass_resid, 1e-12);

  double moment_resid = 0.0;
  for (double lambda : {0.0, 1.0, 2.0, 3.0}) {
    const MeixnerClassMeasure m = make_measure(lambda);
    const double mean = measure_moment(m, 1);
    const double var = measure_moment(m, 2) - mean * mean;
    moment_resid = std::max({moment_resid, std::abs(mean - lambda), std::abs(var - 2.0)});
  }
  b.add("mean_variance", moment_resid, 1e-6);
  return finish("ortho", std::move(b));
}

double poly_fixture_residual() {
  const GridModel unit = make_grid(1, 1.0, 0.0);
  double resid = 0.0;
  for (double w : {-1.5, 0.3, 2.0}) {
    const GridFunction omega = constant_function(unit, w);
    const WickSequence gauss = wick_power(NoiseFamily::gaussian(), omega, 3);
    const WickSequence pois = wick_power(NoiseFamily::poisson_type(1.0), omega, 3);
    const WickSequence gam = wick_power(NoiseFamily::meixner_class(2.0), omega, 3);
    auto val = [](const WickSequence& s, int n) { return s.powers[static_cast<std::size_t>(n)][0]; };
    resid = std::max(resid, std::abs(val(gauss, 2) - (w * w - 1.0)));
    resid = std::max(resid, std::abs(val(gauss, 3) - (w * w * w - 3.0 * w)));
    resid = std::max(resid, std::abs(val(pois, 2) - (w * w - w - 1.0)));
    resid = std::max(resid, std::abs(val(pois, 3) - (w * w * w - 3.0 * w * w - w + 2.0)));
    resid = std::max(resid, std::abs(val(gam, 2) - (w * w - 2.0 * w - 1.0)));
    resid = std::max(resid, std::abs(val(gam, 3) - (w * w * w - 6.0 * w * w + 3.0 * w + 4.0)));
  }
  return resid;
}

SuiteReport run_wick(const VerifyParams& p) {
  const GridModel g = make_grid(p.cells, p.width, p.origin);
  RowBuilder b(p.tol);
  b.add("single_cell_fixtures", poly_fixture_residual(), 1e-12);

  const int nf = 2, ng = 3;
  FockVector f(g, nf), fg(g, ng);
  std::uint64_t stream = 200;
  f.set_component(SymTensor::scalar(g, 0.7));
  fg.set_component(SymTensor::scalar(g, -0.4));
  for (int n = 1; n <= nf; ++n) f.set_component(random_tensor(g, n, p.seed, stream++));
  for (int n = 1; n <= ng; ++n) fg.set_component(random_tensor(g, n, p.seed, stream++));
  const FockVector prod = wick_product(f, fg, nf + ng);

  double mult = 0.0;
  for (int k = 0; k < 10; ++k) {
    const GridFunction xi = random_function(g, p.seed, 300 + static_cast<std::uint64_t>(k));
    const double lhs = s_transform(prod, xi);
    const double rhs = s_transform(f, xi) * s_transform(fg, xi);
    mult = std::max(mult, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  b.add("s_transform_multiplicative", mult, 1e-12);

  double ring = 0.0;
  {
    FockVector h(g, 2);
    h.set_component(SymTensor::scalar(g, 1.1));
    for (int n = 1; n <= 2; ++n) h.set_component(random_tensor(g, n, p.seed, stream++));
    const int top = nf + ng + 2;
    const FockVector ab = wick_product(f, fg, top);
    const FockVector ba = wick_product(fg, f, top);
    for (int n = 0; n <= top; ++n) {
      SymTensor diff = ab.component(n);
      diff -= ba.component(n);
      for (std::size_t i = 0; i < diff.size(); ++i) ring = std::max(ring, std::abs(diff[i]));
    }
    const FockVector lhs = wick_product(wick_product(f, fg, top), h, top);
    const FockVector rhs = wick_product(f, wick_product(fg, h, top), top);
    for (int n = 0; n <= top; ++n) {
      SymTensor diff = lhs.component(n);
      diff -= rhs.component(n);
      for (std::size_t i = 0; i < diff.size(); ++i) ring = std::max(ring, std::abs(diff[i]));
    }
  }
  b.add("wick_ring_laws", ring, 1e-12);

  {
    // exp-series composition on a pure rank-1 vector equals sum f^n / n!
    const int top = 6;
    FockVector e1(g, top);
    e1.set_component(SymTensor::scalar(g, 1.0));
    e1.set_component(random_tensor(g, 1, p.seed, stream++));
    std::vector<double> coeffs(static_cast<std::size_t>(top) + 1);
    double fact = 1.0;
    for (int m = 0; m <= top; ++m) {
      coeffs[static_cast<std::size_t>(m)] = 1.0 / fact;
      fact *= m + 1;
    }
    const FockVector composed = wick_compose(coeffs, 1.0, e1);
    FockVector expect(g, top);
    expect.set_component(SymTensor::scalar(g, 1.0));
    FockVector pow(g, top);
    pow.set_component(SymTensor::scalar(g, 1.0));
    FockVector lin(g, top);
    lin.set_component(e1.component(1));
    double mfact = 1.0;
    for (int m = 1; m <= top; ++m) {
      pow = wick_product(pow, lin, top);
      mfact *= m;
      for (int n = 0; n <= top; ++n) {
        SymTensor t = pow.component(n);
        t *= 1.0 / mfact;
        t += expect.component(n);
        expect.set_component(t);
      }
    }
    double resid = 0.0;
    for (int n = 0; n <= top; ++n) {
      SymTensor diff = composed.component(n);
      diff -= expect.component(n);
      for (std::size_t i = 0; i < diff.size(); ++i) resid = std::max(resid, std::abs(diff[i]));
    }
    b.add("compose_exponential_series", resid, 1e-12);
  }
  return finish("wick", std::move(b));
}

SuiteReport run_mc(const VerifyParams& p) {
  RowBuilder b(p.tol);
  const GridModel g = make_grid(20, 0.05, 0.0);
  const GridFunction one = constant_function(g, 1.0);
  const struct {
    const char* name;
    NoiseFamily family;
    double kappa3;
  } fams[] = {
      {"gaussian", NoiseFamily::gaussian(), 0.0},
      {"poisson", NoiseFamily::poisson_type(1.0), 1.0},
      {"meixner", NoiseFamily::meixner_class(1.0), 1.0},
      {"gamma", NoiseFamily::meixner_class(2.0), 2.0},
      {"pascal", NoiseFamily::meixner_class(3.0), 3.0},
  };
  for (const auto& fam : fams) {
    const EstimatorResult k2 = mc_cumulant(fam.family, one, 2, p.paths, p.seed);
    b.add(std::string("kappa2_") + fam.name, std::abs(k2.value - 1.0),
          std::max(3.0 * k2.std_error, 1e-12));
  }
  for (const auto& fam : {fams[1], fams[3]}) {
    const EstimatorResult k3 = mc_cumulant(fam.family, one, 3, p.paths, p.seed + 1);
    b.add(std::string("kappa3_") + fam.name, std::abs(k3.value - fam.kappa3),
          std::max(3.0 * k3.std_error, 1e-12));
  }

  const GridModel unit = make_grid(1, 1.0, 0.0);
  SymTensor one2(unit, 2);
  one2[0] = 1.0;
  SymTensor one1(unit, 1);
  one1[0] = 1.0;
  const EstimatorResult gamma22 =
      mc_pairing(NoiseFamily::meixner_class(2.0), one2, one2, p.paths, p.seed + 2);
  b.add("pairing_gamma_22", std::abs(gamma22.value - 4.0), 3.0 * gamma22.std_error);
  const EstimatorResult gamma12 =
      mc_pairing(NoiseFamily::meixner_class(2.0), one1, one2, p.paths, p.seed + 3);
  b.add("pairing_gamma_12", std::abs(gamma12.value), 3.0 * gamma12.std_error);
  return finish("mc", std::move(b));
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"ccr", "extfock", "swn", "ortho", "wick", "mc"};
}

SuiteReport run_suite(const std::string& suite, const VerifyParams& params) {
  if (suite == "ccr") return run_ccr(params);
  if (suite == "extfock") return run_extfock(params);
  if (suite == "swn") return run_swn(params);
  if (suite == "ortho") return run_ortho(params);
  if (suite == "wick") return run_wick(params);
  if (suite == "mc") return run_mc(params);
  throw std::invalid_argument("unknown suite: " + suite);
}

}  // namespace fockgrid
