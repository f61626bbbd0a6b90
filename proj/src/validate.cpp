#include "descentlab/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "descentlab/chain.hpp"
#include "descentlab/error.hpp"
#include "descentlab/exact.hpp"
#include "descentlab/laplace.hpp"
#include "descentlab/permutation.hpp"
#include "descentlab/sldp.hpp"

namespace descentlab {

namespace {

CheckResult at_most(std::string name, double value, double threshold) {
  return CheckResult{std::move(name), value, threshold, value <= threshold};
}

std::vector<CheckResult> thm21(int max_n) {
  std::vector<CheckResult> out;
  for (int n = 1; n <= max_n; ++n) {
    long mismatches = 0;
    enumerate_all(n, [&](const Permutation& p) {
      const IncrementTable brute = increment_table(p);
      const TransitionWeights w = transition_weights(ChainState{n, descent_count(p), descent_count(inverse(p))});
      for (int a = 0; a <= 1; ++a) {
        for (int b = 0; b <= 1; ++b) mismatches += brute(a, b) != w(a, b);
      }
    });
    out.push_back(at_most("closed-form counts vs brute force, n=" + std::to_string(n), mismatches, 0));
  }
  return out;
}

std::vector<CheckResult> insertion(int max_n) {
  std::vector<CheckResult> out;
  for (int n = 1; n <= max_n; ++n) {
    std::map<Permutation, long> preimages;
    long fiber_errors = 0;
    enumerate_all(n, [&](const Permutation& p) {
      const int d = descent_count(p);
      for (int l = 1; l <= n + 1; ++l) {
        for (int k = 1; k <= n + 1; ++k) ++preimages[insert(p, Cell{k, l})];
        fiber_errors += fiber_descent_increments(p, l) != n - d;
      }
    });
    long deviation = 0;
    for (const auto& [target, count] : preimages) deviation = std::max(deviation, std::abs(count - (n + 1)));
    long expected_targets = 1;
    for (int k = 2; k <= n + 1; ++k) expected_targets *= k;
    if (static_cast<long>(preimages.size()) != expected_targets) deviation = std::max(deviation, 1L);
    out.push_back(at_most("every size-" + std::to_string(n + 1) + " target hit n+1 times", deviation, 0));
    out.push_back(at_most("fibers carry n-D descent increments, n=" + std::to_string(n), fiber_errors, 0));
  }
  return out;
}

std::vector<CheckResult> gf(int max_n, unsigned threads) {
  std::vector<CheckResult> out;
  const double pairs[][2] = {{0.3, 0.5}, {0.6, 0.2}};
  for (int n = 1; n <= max_n; ++n) {
    const JointPmf pmf = exact_joint_pmf(n, threads);
    for (const auto& pq : pairs) {
      out.push_back(at_most("generating function n=" + std::to_string(n) + " p=" + std::to_string(pq[0]) +
                                " q=" + std::to_string(pq[1]),
                            gf_check(pmf, pq[0], pq[1]), 1e-8));
    }
  }
  return out;
}

std::vector<CheckResult> laplace(int max_n, unsigned threads) {
  std::vector<CheckResult> out;
  const double grid[] = {-3, -1, 1, 3};
  for (int n = 1; n <= max_n; ++n) {
    const JointPmf pmf = exact_joint_pmf(n, threads);
    double worst = 0.0;
    double worst_axis = 0.0;
    for (double t : grid) {
      for (double s : grid) {
        const double exact = mn_exact(pmf, t, s).value;
        worst = std::max(worst, std::abs(mn_closed(n, t, s).value / exact - 1));
      }
      worst_axis = std::max(worst_axis, std::abs(mn_axis(n, t).value / mn_exact(pmf, t, 0).value - 1));
    }
    out.push_back(at_most("closed form vs pmf, n=" + std::to_string(n), worst, 1e-8));
    out.push_back(at_most("axis formula vs pmf, n=" + std::to_string(n), worst_axis, 1e-8));
  }
  return out;
}

std::vector<CheckResult> eulerian(int max_n, unsigned threads) {
  std::vector<CheckResult> out;
  for (int n = 1; n <= max_n; ++n) {
    const std::vector<BigInt> row = eulerian_row(n);
    const BigInt fact = factorial(n);
    BigInt total = 0;
    for (const BigInt& a : row) total += a;
    const std::vector<double> marginal = exact_joint_pmf(n, threads).marginal();
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      worst = std::max(worst, std::abs(marginal[static_cast<std::size_t>(k)] -
                                       ratio_to_double(row[static_cast<std::size_t>(k)], fact)));
    }
    out.push_back(at_most("row sum equals n!, n=" + std::to_string(n), total == fact ? 0 : 1, 0));
    out.push_back(at_most("pmf marginal vs Eulerian row, n=" + std::to_string(n), worst, 1e-12));
  }
  return out;
}

std::vector<CheckResult> sldp(int max_n, unsigned threads) {
  std::vector<int> ns;
  for (int n = 32; n <= max_n; n *= 2) ns.push_back(n);
  if (ns.empty()) throw DomainError("validate sldp: max-n must be at least 32");
  const std::vector<ComparisonRow> rows = convergence_table(ns, 0.7, 0.7, Quadrant::kPP, {}, threads);
  std::vector<CheckResult> out;
  for (const ComparisonRow& row : rows) {
    // Report rows: no threshold of their own.
    out.push_back(CheckResult{"pp x=y=0.7 n=" + std::to_string(row.n) + " |exact/sldp - 1|",
                              std::abs(row.ratio - 1), std::numeric_limits<double>::infinity(), true});
  }
  const double first = std::abs(rows.front().ratio - 1);
  const double last = std::abs(rows.back().ratio - 1);
  if (rows.size() > 1) {
    out.push_back(CheckResult{"ratio improves from n=" + std::to_string(rows.front().n) + " to n=" +
                                  std::to_string(rows.back().n),
                              last, first, last < first});
  }
  return out;
}

std::vector<CheckResult> martingale(int max_n, unsigned threads) {
  std::vector<CheckResult> out;
  double drift = 0.0;
  double cov = 0.0;
  double m_drift = 0.0;
  double m_qv = 0.0;
  long states = 0;
  // The reachable support at each size is read off the pmf of that size.
  for_each_joint_pmf(max_n, threads, [&](const JointPmf& pmf) {
    const int n = pmf.n();
    for (int d = 0; d < n; ++d) {
      for (int e = 0; e < n; ++e) {
        if (pmf(d, e) <= 0) continue;
        const ChainState s{n, d, e};
        const MomentResiduals r = drift_covariance_check(s);
        const MartingaleResiduals m = martingale_check(s);
        drift = std::max(drift, r.drift);
        cov = std::max(cov, r.covariance);
        m_drift = std::max(m_drift, m.drift);
        m_qv = std::max(m_qv, m.quadratic_variation);
        ++states;
      }
    }
  });
  const std::string suffix = " (" + std::to_string(states) + " states up to n=" + std::to_string(max_n) + ")";
  out.push_back(at_most("conditional drift" + suffix, drift, 1e-12));
  out.push_back(at_most("conditional second moments" + suffix, cov, 1e-12));
  out.push_back(at_most("martingale increment mean" + suffix, m_drift, 1e-12));
  out.push_back(at_most("predictable quadratic variation" + suffix, m_qv, 1e-12));
  return out;
}

}  // namespace

const std::vector<std::string_view>& validation_suites() {
  static const std::vector<std::string_view> names = {"thm21", "insertion", "gf", "laplace",
                                                      "eulerian", "sldp", "martingale"};
  return names;
}

int default_max_n(std::string_view suite) {
  if (suite == "thm21") return 7;
  if (suite == "insertion") return 5;
  if (suite == "gf") return 8;
  if (suite == "laplace") return 30;
  if (suite == "eulerian") return 128;
  if (suite == "sldp") return 512;
  if (suite == "martingale") return 512;
  throw DomainError("unknown validation suite '" + std::string(suite) + "'");
}

std::vector<CheckResult> run_validation(std::string_view suite, int max_n, unsigned threads) {
  const int n = max_n > 0 ? max_n : default_max_n(suite);
  if (suite == "thm21") return thm21(n);
  if (suite == "insertion") return insertion(n);
  if (suite == "gf") return gf(n, threads);
  if (suite == "laplace") return laplace(n, threads);
  if (suite == "eulerian") return eulerian(n, threads);
  if (suite == "sldp") return sldp(n, threads);
  if (suite == "martingale") return martingale(n, threads);
  throw DomainError("unknown validation suite '" + std::string(suite) + "'");
}

}  // namespace descentlab
