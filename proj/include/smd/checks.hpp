#ifndef SMD_CHECKS_HPP
#define SMD_CHECKS_HPP

#include <string>
#include <vector>

namespace smd {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// The full verification battery: exact algebraic anchors, the norm-power
/// inequality suites, projection oracles, rate-exponent reproductions and
/// the identification-game floors. `filter` keeps only checks whose name
/// contains it. Each entry prints independently; a failure never stops the
/// battery.
std::vector<CheckResult> run_acceptance_checks(const std::string& filter = "");

}  // namespace smd

#endif  // SMD_CHECKS_HPP
