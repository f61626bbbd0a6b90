#include <cmath>

#include "descentlab/error.hpp"
#include "descentlab/validate.hpp"
#include "doctest.h"

using namespace descentlab;

namespace {
bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return !results.empty();
}
}  // namespace

TEST_CASE("suite registry") {
  const auto& suites = validation_suites();
  CHECK(suites.size() == 7);
  for (auto s : suites) CHECK(default_max_n(s) > 0);
  CHECK_THROWS_AS(run_validation("nope", 3), DomainError);
}

TEST_CASE("small validation runs pass") {
  CHECK(all_passed(run_validation("thm21", 6)));
  CHECK(all_passed(run_validation("insertion", 4)));
  CHECK(all_passed(run_validation("gf", 5)));
  CHECK(all_passed(run_validation("laplace", 12)));
  CHECK(all_passed(run_validation("eulerian", 40)));
  CHECK(all_passed(run_validation("martingale", 64)));
}

TEST_CASE("sldp suite reports the convergence rows") {
  const auto results = run_validation("sldp", 256);
  CHECK(all_passed(results));
  int report_rows = 0;
  for (const auto& r : results) report_rows += std::isinf(r.threshold);
  CHECK(report_rows >= 4);
}

TEST_CASE("size guards apply to validation") {
  CHECK_THROWS_AS(run_validation("thm21", 10), SizeLimitError);
}
