// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#ifndef VORTEXPAIR_CHECK_HPP
#define VORTEXPAIR_CHECK_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace vortexpair::harness {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string measured;
  std::string expected;
  double wall_ms = 0.0;
};

/// Run the full acceptance suite; progress notes go to `progress`
/// (standard error in the CLI). Results come back in criterion order.
std::vector<CheckResult> run_all_checks(std::ostream& progress);

/// Pass/fail table, one line per criterion, plus a summary line.
void print_check_report(const std::vector<CheckResult>& results, std::ostream& os);

/// 0 when every criterion passed, 1 otherwise.
int check_exit_code(const std::vector<CheckResult>& results);

} // namespace vortexpair::harness

#endif
