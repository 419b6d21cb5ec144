#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fockgrid {

struct CheckRow {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRow> checks;
  bool pass = true;
};

// Knobs shared by the suites; any suite ignores what it does not use.  A
// negative tol keeps each check's pinned default; a nonnegative tol replaces
// every default (tol 0 therefore fails every floating-point check).
struct VerifyParams {
  int cells = 3;
  double width = 0.5;
  double origin = 0.0;
  int rank = 5;
  std::uint64_t seed = 7;
  int paths = 20000;
  double tol = -1.0;
};

std::vector<std::string> suite_names();

// Throws std::invalid_argument for an unknown suite name.
SuiteReport run_suite(const std::string& suite, const VerifyParams& params);

}  // namespace fockgrid
