// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 3 9 ...    run only the listed criteria
//
// Exit status is 0 iff every selected criterion passed. Monte Carlo criteria
// use fixed seeds chosen before any run (seed 1, or seeds 1..10).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "descentlab/chain.hpp"
#include "descentlab/exact.hpp"
#include "descentlab/laplace.hpp"
#include "descentlab/limits.hpp"
#include "descentlab/permutation.hpp"
#include "descentlab/rate.hpp"
#include "descentlab/sldp.hpp"
#include "oracles.hpp"

using namespace descentlab;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
  double time_limit = 0;  // seconds; 0 = none
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome increment_closed_forms() {
  long perms = 0;
  long mismatches = 0;
  for (int n = 1; n <= 7; ++n) {
    enumerate_all(n, [&](const Permutation& p) {
      ++perms;
      const std::int64_t d = descent_count(p);
      const std::int64_t e = descent_count(inverse(p));
      const IncrementTable t = increment_table(p);
      mismatches += t(1, 1) != (n - d) * (n - e) + n;
      mismatches += t(1, 0) != (n - d) * (e + 1) - n;
      mismatches += t(0, 1) != (d + 1) * (n - e) - n;
      mismatches += t(0, 0) != (d + 1) * (e + 1) + n;
    });
  }
  return {perms == 5913 && mismatches == 0, fmt("%ld permutations, %ld mismatching counts", perms, mismatches), 30};
}

Outcome insertion_uniformity() {
  long bad = 0;
  long targets = 0;
  for (int n = 1; n <= 5; ++n) {
    std::map<std::vector<int>, int> hits;
    enumerate_all(n, [&](const Permutation& p) {
      for (int k = 1; k <= n + 1; ++k)
        for (int l = 1; l <= n + 1; ++l) {
          const Permutation q = insert(p, Cell{k, l});
          ++hits[std::vector<int>(q.values().begin(), q.values().end())];
        }
    });
    long fact = 1;
    for (int j = 2; j <= n + 1; ++j) fact *= j;
    bad += static_cast<long>(hits.size()) != fact;
    for (const auto& [q, c] : hits) bad += c != n + 1;
    targets += static_cast<long>(hits.size());
  }
  return {bad == 0, fmt("%ld targets, %ld with a preimage count other than n+1", targets, bad)};
}

Outcome dp_vs_enumeration() {
  double worst = 0;
  for (int n = 1; n <= 8; ++n) {
    const JointPmf pmf = exact_joint_pmf(n);
    const auto law = oracle::enumerated_law(n);
    for (std::size_t i = 0; i < law.size(); ++i) worst = std::max(worst, std::abs(pmf.data()[i] - law[i]));
  }
  const JointPmf p3 = exact_joint_pmf(3);
  double n3 = 0;
  for (int d = 0; d < 3; ++d)
    for (int e = 0; e < 3; ++e) {
      const double target = d != e ? 0.0 : (d == 1 ? 4.0 / 6 : 1.0 / 6);
      n3 = std::max(n3, std::abs(p3(d, e) - target));
    }
  return {worst <= 1e-12 && n3 <= 1e-12, fmt("max |dp - enum| = %.3g (n<=8), n=3 diag error %.3g, tol 1e-12", worst, n3)};
}

Outcome eulerian_marginals() {
  double worst = 0;
  for (int n = 1; n <= 128; ++n) {
    const auto marginal = exact_joint_pmf(n).marginal();
    const auto row = eulerian_row(n);
    const BigInt fact = factorial(n);
    for (int k = 0; k < n; ++k)
      worst = std::max(worst, std::abs(marginal[static_cast<std::size_t>(k)] -
                                       ratio_to_double(row[static_cast<std::size_t>(k)], fact)));
  }
  const bool row4 = eulerian_row(4) == std::vector<BigInt>{1, 11, 11, 1};
  return {worst <= 1e-12 && row4, fmt("max |marginal - A(n,k)/n!| = %.3g (n<=128), row(4) %s, tol 1e-12", worst,
                                      row4 ? "= (1,11,11,1)" : "WRONG")};
}

Outcome martingale_identities() {
  double drift = 0;
  double qv = 0;
  long states = 0;
  for_each_joint_pmf(512, 0, [&](const JointPmf& pmf) {
    const int n = pmf.n();
    for (int d = 0; d < n; ++d)
      for (int e = 0; e < n; ++e) {
        if (pmf(d, e) <= 0) continue;
        const MartingaleResiduals r = martingale_check({n, d, e});
        drift = std::max(drift, r.drift);
        qv = std::max(qv, r.quadratic_variation);
        ++states;
      }
  });
  return {drift < 1e-12 && qv < 1e-12,
          fmt("%ld positive-mass states up to n=512: drift residual %.3g, quadratic variation residual %.3g, tol 1e-12",
              states, drift, qv)};
}

Outcome laplace_closed_form() {
  const double grid[] = {-3, -1, 1, 3};
  double worst = 0;
  double worst_axis = 0;
  for (int n = 1; n <= 30; ++n) {
    const JointPmf pmf = exact_joint_pmf(n);
    for (double t : grid) {
      for (double s : grid) {
        const double c = mn_closed(n, t, s).log_value;
        const double e = mn_exact(pmf, t, s).log_value;
        worst = std::max(worst, std::abs(std::expm1(c - e)));
      }
      const double a = mn_axis(n, t).log_value;
      worst_axis = std::max(worst_axis, std::abs(std::expm1(a - mn_exact(pmf, t, 0).log_value)));
    }
  }
  return {worst <= 1e-8 && worst_axis <= 1e-8,
          fmt("max rel error closed %.3g, axis %.3g (n<=30), tol 1e-8", worst, worst_axis), 60};
}

Outcome generating_function() {
  double worst = 0;
  for (int n = 1; n <= 8; ++n) {
    const JointPmf pmf = exact_joint_pmf(n);
    worst = std::max({worst, gf_check(pmf, 0.3, 0.5), gf_check(pmf, 0.6, 0.2)});
  }
  return {worst <= 1e-8, fmt("max |lhs - rhs| = %.3g (n<=8), tol 1e-8", worst)};
}

Outcome stirling_ratios() {
  double worst_bound = -1e300;  // max of log b_{n,k} + log k!
  for_each_stirling_ratio_table(2048, [&](const StirlingRatioTable& table) {
    double log_fact = 0;
    for (int k = 0; k < std::min(table.n(), 33); ++k) {
      if (k > 0) log_fact += std::log(k);
      worst_bound = std::max(worst_bound, table.log_b(k) + log_fact);
    }
  });
  const StirlingRatioTable t1024(1024);
  double worst_rel = 0;
  double log_fact = 0;
  for (int k = 0; k <= 8; ++k) {
    if (k > 0) log_fact += std::log(k);
    const double target = -k * std::log(2.0) - log_fact;
    worst_rel = std::max(worst_rel, std::abs(std::expm1(t1024.log_b(k) - target)));
  }
  return {worst_bound <= 1e-12 && worst_rel <= 0.02,
          fmt("max log(b_{n,k} k!) = %.3g (n<=2048, k<=32); b_{1024,k} vs 1/(2^k k!) max rel %.4f, tol 0.02",
              worst_bound, worst_rel)};
}

Outcome sldp_trend() {
  const double x = 0.7;
  const JointPmf small = exact_joint_pmf(32);
  const JointPmf large = exact_joint_pmf(512);
  const double r32 = quadrant_tail(small, x, x, Quadrant::kPP) / sldp_joint(32, x, x, Quadrant::kPP).estimate;
  const double r512 = quadrant_tail(large, x, x, Quadrant::kPP) / sldp_joint(512, x, x, Quadrant::kPP).estimate;
  const double m32 = marginal_upper_tail(small, x) / sldp_marginal(32, x).estimate;
  const double m512 = marginal_upper_tail(large, x) / sldp_marginal(512, x).estimate;
  const bool joint_ok = std::abs(r512 - 1) < std::abs(r32 - 1) && std::abs(r512 - 1) < 0.25;
  const bool marg_ok = std::abs(m512 - 1) < std::abs(m32 - 1) && std::abs(m512 - 1) < 0.15;
  return {joint_ok && marg_ok,
          fmt("joint ratio n=32 %.4f -> n=512 %.4f (tol 0.25); marginal %.4f -> %.4f (tol 0.15)", r32, r512, m32,
              m512),
          600};
}

Outcome dependence() {
  const double x = 0.7;
  const JointPmf pmf = exact_joint_pmf(512);
  const double up = marginal_upper_tail(pmf, x);
  const double down = marginal_lower_tail(pmf, x);
  const double pp = quadrant_tail(pmf, x, x, Quadrant::kPP) / (up * up);
  const double mp = quadrant_tail(pmf, x, x, Quadrant::kMP) / (down * up);
  const double t = solve_tilt(x).t_x;
  const double rel_pp = pp / std::exp(t * t / 2) - 1;
  const double rel_mp = mp / std::exp(-t * t / 2) - 1;
  return {std::abs(rel_pp) <= 0.15 && std::abs(rel_mp) <= 0.15,
          fmt("PP factor %.4g vs %.4g (%+.1f%%), MP factor %.4g vs %.4g (%+.1f%%), tol 15%%", pp,
              std::exp(t * t / 2), 100 * rel_pp, mp, std::exp(-t * t / 2), 100 * rel_mp)};
}

Outcome clt() {
  const CovEstimate c = clt_covariance(2048, 20000, 1);
  const ScalarEstimate s = sum_clt_check(2048, 20000, 1);
  const double z00 = (c.entries[0][0] - 1.0 / 12) / c.std_error[0][0];
  const double z11 = (c.entries[1][1] - 1.0 / 12) / c.std_error[1][1];
  const double z01 = c.entries[0][1] / c.std_error[0][1];
  const double zs = (s.value - 1.0 / 6) / s.std_error;
  const bool ok = std::abs(z00) <= 5 && std::abs(z11) <= 5 && std::abs(z01) <= 5 && std::abs(zs) <= 5;
  return {ok,
          fmt("cov diag %.5f, %.5f (z %+.2f, %+.2f), off-diag %.5f (z %+.2f); sum variance %.5f (z %+.2f); 5 SE",
              c.entries[0][0], c.entries[1][1], z00, z11, c.entries[0][1], z01, s.value, zs),
          300};
}

Outcome fclt() {
  const CovEstimate c = fclt_cross_cov(2000, 0.5, 1.0, 20000, 1);
  const double z0 = (c.entries[0][0] - 1.0 / 24) / c.std_error[0][0];
  const double z1 = (c.entries[1][1] - 1.0 / 24) / c.std_error[1][1];
  return {std::abs(z0) <= 5 && std::abs(z1) <= 5,
          fmt("cross-cov diag %.5f, %.5f vs 1/24 (z %+.2f, %+.2f); 5 SE", c.entries[0][0], c.entries[1][1], z0, z1)};
}

Outcome quadratic_strong_law() {
  int in_band = 0;
  std::string values;
  std::string lil;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PathStat p = path_statistics(1000000, seed);
    in_band += p.qsl_value >= 0.10 && p.qsl_value <= 0.24;
    values += fmt("%s%.3f", seed == 1 ? "" : " ", p.qsl_value);
    lil += fmt("%s%.3f", seed == 1 ? "" : " ", p.lil_value);
  }
  return {in_band >= 9, fmt("%d/10 seeds in [0.10, 0.24] (need 9); values: %s | LIL (report only, ref 1/6): %s",
                            in_band, values.c_str(), lil.c_str())};
}

Outcome rate_consistency() {
  double residual = 0;
  double symmetry = 0;
  double contraction = 0;
  for (int i = 0; i <= 8; ++i) {
    const double x = 0.55 + 0.05 * i;
    const TiltSolution s = solve_tilt(x);
    residual = std::max(residual, std::abs(cgf_d1(s.t_x) - x));
    symmetry = std::max(symmetry, std::abs(rate(x) - rate(1 - x)));
  }
  for (int i = 0; i <= 6; ++i) {
    const double y = 1.1 + 0.1 * i;
    contraction = std::max(contraction, std::abs(sum_rate(y) - 2 * rate(y / 2)));
  }
  return {residual <= 1e-12 && symmetry <= 1e-12 && contraction <= 1e-8,
          fmt("tilt residual %.3g, |I(x)-I(1-x)| %.3g (tol 1e-12); |J(y)-2I(y/2)| %.3g (tol 1e-8)", residual,
              symmetry, contraction)};
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {"increment counts equal the closed forms, all permutations n<=7", increment_closed_forms},
      {"insertion hits every target n+1 times, n<=5", insertion_uniformity},
      {"exact DP equals enumeration, n<=8", dp_vs_enumeration},
      {"DP marginal equals Eulerian numbers, n<=128", eulerian_marginals},
      {"martingale drift and quadratic variation, n<=512", martingale_identities},
      {"closed-form Laplace transform and axis formula, n<=30", laplace_closed_form},
      {"generating-function identity, n<=8", generating_function},
      {"Stirling ratio bound and limit", stirling_ratios},
      {"sharp tail approximation improves with n (x=y=0.7)", sldp_trend},
      {"tail dependence factor at n=512", dependence},
      {"Gaussian covariance and sum variance at n=2048 [Monte Carlo, seed 1]", clt},
      {"functional CLT cross-covariance at n=2000 [Monte Carlo, seed 1]", fclt},
      {"quadratic strong law at n=1e6 [soft, seeds 1..10]", quadratic_strong_law},
      {"rate function self-consistency", rate_consistency},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long c = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || c < 1 || c > static_cast<long>(criteria().size())) {
      std::fprintf(stderr, "usage: %s [criterion 1..%zu]...\n", argv[0], criteria().size());
      return 2;
    }
    selected.push_back(static_cast<int>(c));
  }
  if (selected.empty())
    for (std::size_t i = 1; i <= criteria().size(); ++i) selected.push_back(static_cast<int>(i));

  int failures = 0;
  for (int c : selected) {
    const Criterion& crit = criteria()[static_cast<std::size_t>(c - 1)];
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = crit.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.1fs", secs);
    if (out.time_limit > 0) {
      timing += fmt(" (limit %.0fs)", out.time_limit);
      if (secs > out.time_limit) out.passed = false;
    }
    std::printf("%s %2d  %s: %s [%s]\n", out.passed ? "PASS" : "FAIL", c, crit.title, out.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
    failures += !out.passed;
  }
  return failures == 0 ? 0 : 1;
}
