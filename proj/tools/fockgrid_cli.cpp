#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fockgrid/fockvec_json.hpp"
#include "fockgrid/grid.hpp"
#include "fockgrid/ladder.hpp"
#include "fockgrid/levysim.hpp"
#include "fockgrid/rng.hpp"
#include "fockgrid/verify.hpp"
#include "fockgrid/wickcalc.hpp"
#include "fockgrid/wickpow.hpp"

namespace {

using fockgrid::NoiseFamily;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// Shortest decimal string that parses back to the same double.
std::string round_trip(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

NoiseFamily family_from_name(const std::string& name, double lambda, bool lambda_set) {
  if (name == "gaussian") return NoiseFamily::gaussian();
  if (name == "poisson") return NoiseFamily::poisson_type(lambda_set ? lambda : 1.0);
  if (name == "meixner") return NoiseFamily::meixner_class(lambda_set ? lambda : 1.0);
  if (name == "gamma") return NoiseFamily::meixner_class(2.0);
  if (name == "pascal") return NoiseFamily::meixner_class(lambda_set ? lambda : 3.0);
  throw CLI::ValidationError("--family",
                             "unknown family '" + name +
                                 "' (expected gaussian|poisson|meixner|gamma|pascal)");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  fockgrid::atomic_write_text(out_path, text);
}

json params_json(const fockgrid::VerifyParams& p) {
  return json{{"cells", p.cells},   {"width", p.width}, {"origin", p.origin},
              {"rank", p.rank},     {"seed", p.seed},   {"paths", p.paths},
              {"tol", p.tol}};
}

json report_json(const fockgrid::SuiteReport& r, const fockgrid::VerifyParams& p) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back(json{{"name", c.name}, {"residual", c.residual}, {"tol", c.tol},
                          {"pass", c.pass}});
  return json{{"suite", r.suite}, {"params", params_json(p)}, {"checks", std::move(checks)},
              {"pass", r.pass}};
}

int cmd_verify(const std::string& suite, const fockgrid::VerifyParams& p, bool as_json,
               const std::string& out_path) {
  const fockgrid::SuiteReport report = fockgrid::run_suite(suite, p);
  const json doc = report_json(report, p);
  if (as_json || !out_path.empty()) {
    emit(doc.dump(2) + "\n", out_path);
  }
  if (!as_json && out_path.empty()) {
    for (const auto& c : report.checks)
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << suite << "." << c.name
                << "  residual=" << round_trip(c.residual) << "  tol=" << round_trip(c.tol)
                << "\n";
    std::cout << (report.pass ? "all checks passed" : "some checks FAILED") << "\n";
  }
  return report.pass ? kExitPass : kExitCheckFailed;
}

int cmd_sample(const NoiseFamily& family, const fockgrid::VerifyParams& p,
               const std::string& out_path) {
  const fockgrid::GridModel grid = fockgrid::make_grid(p.cells, p.width, p.origin);
  const fockgrid::PathSample s =
      fockgrid::sample_increments(family, grid, p.paths, p.seed);
  std::string csv = "path_id,cell_index,t_start,increment,cumulative\n";
  for (int path = 0; path < s.paths; ++path) {
    double cum = 0.0;
    for (int cell = 0; cell < grid.cells; ++cell) {
      const double inc = s.at(path, cell);
      cum += inc;
      csv += std::to_string(path);
      csv += ',';
      csv += std::to_string(cell);
      csv += ',';
      csv += round_trip(grid.left_edge(cell));
      csv += ',';
      csv += round_trip(inc);
      csv += ',';
      csv += round_trip(cum);
      csv += '\n';
    }
  }
  emit(csv, out_path);
  return kExitPass;
}

int cmd_report_growth(const NoiseFamily& family, const fockgrid::VerifyParams& p, bool as_json,
                      const std::string& out_path) {
  const fockgrid::GridModel grid = fockgrid::make_grid(p.cells, p.width, p.origin);
  const int spike_cell = grid.cells / 2;
  const fockgrid::GridFunction omega =
      fockgrid::indicator(grid, spike_cell, 1.0 / grid.width);
  const fockgrid::WickSequence seq = fockgrid::wick_power(family, omega, p.rank);
  const fockgrid::HermiteScale scale = fockgrid::make_hermite_scale(grid, 12);
  const double p_index = 1.0;
  const auto rows = fockgrid::growth_profile(seq, scale, p_index);
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(r.factorial);
    ys.push_back(r.norm_sq);
  }
  double slope = std::nan("");
  try {
    slope = fockgrid::fit_loglog_slope(xs, ys);
  } catch (const std::invalid_argument&) {
    // degenerate table (e.g. rank 0); slope stays NaN and is reported as null
  }
  json jrows = json::array();
  for (const auto& r : rows)
    jrows.push_back(json{{"n", r.n}, {"norm_sq", r.norm_sq}, {"factorial", r.factorial}});
  json doc{{"kind", "growth"},
           {"params", params_json(p)},
           {"spike_cell", spike_cell},
           {"mode_index", p_index},
           {"rows", std::move(jrows)}};
  if (std::isnan(slope))
    doc["loglog_slope"] = nullptr;
  else
    doc["loglog_slope"] = slope;
  (void)as_json;  // growth tables are JSON regardless
  emit(doc.dump(2) + "\n", out_path);
  return kExitPass;
}

int cmd_report_stransform(const std::string& in_path, const fockgrid::VerifyParams& p,
                          const std::string& out_path) {
  fockgrid::FockVector v;
  fockgrid::GridModel grid;
  if (in_path.empty()) {
    grid = fockgrid::make_grid(p.cells, p.width, p.origin);
    v = fockgrid::FockVector::vacuum(grid, 0);
  } else {
    v = fockgrid::read_fock_vector(in_path);
    grid = v.grid();
  }
  json jrows = json::array();
  for (int k = 0; k < 10; ++k) {
    fockgrid::RngStream rng(p.seed, static_cast<std::uint64_t>(k));
    std::vector<double> vals(static_cast<std::size_t>(grid.cells));
    for (double& x : vals) x = 2.0 * rng.uniform() - 1.0;
    const fockgrid::GridFunction xi = fockgrid::make_function(grid, vals);
    jrows.push_back(json{{"xi_stream", k}, {"value", fockgrid::s_transform(v, xi)}});
  }
  json doc{{"kind", "stransform"}, {"params", params_json(p)},
           {"input", in_path.empty() ? "vacuum" : in_path}, {"rows", std::move(jrows)}};
  emit(doc.dump(2) + "\n", out_path);
  return kExitPass;
}

int cmd_report_table(const fockgrid::VerifyParams& p, const std::string& out_path) {
  std::string csv = "suite,check,residual,tol,pass\n";
  for (const std::string& suite : {std::string("ccr"), std::string("swn")}) {
    const fockgrid::SuiteReport r = fockgrid::run_suite(suite, p);
    for (const auto& c : r.checks) {
      csv += suite;
      csv += ',';
      csv += c.name;
      csv += ',';
      csv += round_trip(c.residual);
      csv += ',';
      csv += round_trip(c.tol);
      csv += ',';
      csv += c.pass ? "true" : "false";
      csv += '\n';
    }
  }
  emit(csv, out_path);
  return kExitPass;
}

int cmd_fockvec(const std::string& in_path, const std::string& out_path) {
  const fockgrid::FockVector v = fockgrid::read_fock_vector(in_path);
  const std::string canonical = fockgrid::render_fock_vector(v);
  emit(canonical, out_path);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grid-level chaos-decomposition toolkit"};
  app.require_subcommand(1);

  fockgrid::VerifyParams params;
  std::string suite, family_name = "gaussian", out_path, in_path, kind = "growth";
  double lambda = 0.0;
  bool as_json = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--cells", params.cells, "grid cell count");
    sub->add_option("--width", params.width, "cell width");
    sub->add_option("--origin", params.origin, "grid origin");
    sub->add_option("--rank", params.rank, "maximum chaos rank");
    sub->add_option("--paths", params.paths, "Monte Carlo path count");
    sub->add_option("--seed", params.seed, "RNG seed");
    sub->add_option("--out", out_path, "output file (default: stdout)");
  };

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "one of: ccr extfock swn ortho wick mc")->required();
  verify->add_option("--tol", params.tol, "override every check tolerance");
  verify->add_flag("--json", as_json, "emit the JSON report on stdout");
  add_common(verify);

  CLI::App* sample = app.add_subcommand("sample", "write sampled increment paths as CSV");
  sample->add_option("--family", family_name, "gaussian|poisson|meixner|gamma|pascal");
  CLI::Option* lam_opt = sample->add_option("--lambda", lambda, "family parameter");
  add_common(sample);

  CLI::App* report = app.add_subcommand("report", "emit analysis tables (no pass/fail)");
  report->add_option("--kind", kind, "growth|stransform|table");
  report->add_option("--family", family_name, "family for growth tables");
  CLI::Option* lam_opt2 = report->add_option("--lambda", lambda, "family parameter");
  report->add_option("--in", in_path, "chaos-vector JSON input (stransform)");
  report->add_flag("--json", as_json, "emit JSON on stdout");
  add_common(report);

  CLI::App* fockvec = app.add_subcommand("fockvec", "validate and canonicalize chaos-vector JSON");
  fockvec->add_option("--in", in_path, "input JSON path")->required();
  fockvec->add_option("--out", out_path, "canonical JSON output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(suite, params, as_json, out_path);
    if (sample->parsed()) {
      const NoiseFamily fam = family_from_name(family_name, lambda, !lam_opt->empty());
      if (sample->count("--paths") == 0) params.paths = 2;
      return cmd_sample(fam, params, out_path);
    }
    if (report->parsed()) {
      if (kind == "growth") {
        const NoiseFamily fam = family_from_name(family_name, lambda, !lam_opt2->empty());
        if (params.rank > 12) params.rank = 12;
        return cmd_report_growth(fam, params, as_json, out_path);
      }
      if (kind == "stransform") return cmd_report_stransform(in_path, params, out_path);
      if (kind == "table") return cmd_report_table(params, out_path);
      std::cerr << "unknown report kind: " << kind << " (expected growth|stransform|table)\n";
      return kExitUsage;
    }
    if (fockvec->parsed()) return cmd_fockvec(in_path, out_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const fockgrid::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
