/** @file verify.hpp
 *  The acceptance suite: fifteen named checks, each self-contained.
 */
#pragma once
#include <string>
#include <utility>
#include <vector>

namespace vacblow {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;  ///< failed sub-checks and informational lines
};

struct VerifyOptions {
  int physical_cells = 1 << 13;
};

constexpr int kCheckCount = 15;

const std::vector<std::string>& check_names();
/// One-line statement of each check with its tolerance.
const std::vector<std::string>& check_criteria();
/// id in 1..kCheckCount; IndexError otherwise.
CheckResult run_check(int id, const VerifyOptions& opt = {});
std::vector<CheckResult> run_all_checks(const VerifyOptions& opt = {});

}  // namespace vacblow
