#pragma once

// Oracle batteries exposed through `validate --suite <name>`.

#include <string>
#include <string_view>
#include <vector>

namespace descentlab {

struct CheckResult {
  std::string name;
  double value = 0.0;      // measured discrepancy or statistic
  double threshold = 0.0;  // pass iff value <= threshold (or as documented per check)
  bool passed = false;
};

/// Suite names: thm21, insertion, gf, laplace, eulerian, sldp, martingale.
const std::vector<std::string_view>& validation_suites();

/// Default size bound used when max_n <= 0.
int default_max_n(std::string_view suite);

/// Runs one suite. DomainError for an unknown suite name; size guards of the
/// underlying operations propagate as SizeLimitError.
std::vector<CheckResult> run_validation(std::string_view suite, int max_n, unsigned threads = 0);

}  // namespace descentlab
