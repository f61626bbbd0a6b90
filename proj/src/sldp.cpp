#include "descentlab/sldp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "descentlab/error.hpp"
#include "descentlab/parallel.hpp"

namespace descentlab {

namespace {

void require_upper_half(double v, const char* what) {
  if (!(v > 0.5 && v < 1.0)) throw DomainError(std::string(what) + ": thresholds must lie in ]1/2, 1[");
}

bool plus_sign(Quadrant q) { return q == Quadrant::kPP || q == Quadrant::kMM; }

double safe_exp(double log_value, bool& underflow) {
  const double v = std::exp(log_value);
  underflow = v == 0.0 || v < std::numeric_limits<double>::min();
  return underflow ? 0.0 : v;
}

}  // namespace

double frac_shift(double x, int n) {
  if (n < 1) throw DomainError("frac_shift: n must be at least 1");
  return n * x - upper_threshold(n, x);
}

double correction(double x, double y, int n, Quadrant q, const TiltOptions& options) {
  require_upper_half(x, "correction");
  require_upper_half(y, "correction");
  const double tx = solve_tilt(x, options).t_x;
  const double ty = solve_tilt(y, options).t_x;
  const double cross = 0.5 * tx * ty;
  return frac_shift(x, n) * tx + frac_shift(y, n) * ty + (plus_sign(q) ? cross : -cross);
}

SldpEstimate sldp_joint(int n, double x, double y, Quadrant q, const TiltOptions& options) {
  require_upper_half(x, "sldp_joint");
  require_upper_half(y, "sldp_joint");
  if (n < 2) throw DomainError("sldp_joint: n must be at least 2");
  const TiltSolution sx = solve_tilt(x, options);
  const TiltSolution sy = solve_tilt(y, options);
  SldpEstimate out;
  out.n = n;
  out.x = x;
  out.y = y;
  out.quadrant = q;
  out.correction = correction(x, y, n, q, options);
  out.log_estimate = -n * (sx.rate + sy.rate) + out.correction -
                     std::log(2 * std::numbers::pi * n * std::sqrt(sx.sigma2) * sx.t_x *
                              std::sqrt(sy.sigma2) * sy.t_x);
  out.estimate = safe_exp(out.log_estimate, out.underflow);
  return out;
}

SldpEstimate sldp_marginal(int n, double x, const TiltOptions& options) {
  require_upper_half(x, "sldp_marginal");
  if (n < 2) throw DomainError("sldp_marginal: n must be at least 2");
  const TiltSolution sx = solve_tilt(x, options);
  SldpEstimate out;
  out.n = n;
  out.x = x;
  out.y = std::numeric_limits<double>::quiet_NaN();
  out.quadrant = Quadrant::kPP;
  out.correction = frac_shift(x, n) * sx.t_x;
  out.log_estimate = -n * sx.rate + out.correction -
                     std::log(std::sqrt(sx.sigma2) * sx.t_x * std::sqrt(2 * std::numbers::pi * n));
  out.estimate = safe_exp(out.log_estimate, out.underflow);
  return out;
}

double dependence_factor(double x, double y, Quadrant q, const TiltOptions& options) {
  require_upper_half(x, "dependence_factor");
  require_upper_half(y, "dependence_factor");
  const double cross = 0.5 * solve_tilt(x, options).t_x * solve_tilt(y, options).t_x;
  return std::exp(plus_sign(q) ? cross : -cross);
}

std::vector<ComparisonRow> convergence_table(const std::vector<int>& ns, double x, double y, Quadrant q,
                                             const PmfProvider& provider, unsigned threads) {
  std::vector<ComparisonRow> rows;
  rows.reserve(ns.size());
  for (int n : ns) {
    const JointPmf pmf = provider ? provider(n) : exact_joint_pmf(n, threads);
    ComparisonRow row;
    row.n = n;
    row.exact = quadrant_tail(pmf, x, y, q);
    row.sldp = sldp_joint(n, x, y, q).estimate;
    row.ratio = row.exact / row.sldp;
    rows.push_back(row);
  }
  return rows;
}

McTail quadrant_tail_mc(int n, double x, double y, Quadrant q, long reps, std::uint64_t seed,
                        unsigned threads) {
  require_upper_half(x, "quadrant_tail_mc");
  require_upper_half(y, "quadrant_tail_mc");
  if (n < 2) throw DomainError("quadrant_tail_mc: n must be at least 2");
  if (reps < 1) throw DomainError("quadrant_tail_mc: reps must be positive");
  const bool x_upper = q == Quadrant::kPP || q == Quadrant::kPM;
  const bool y_upper = q == Quadrant::kPP || q == Quadrant::kMP;
  const int tx = x_upper ? upper_threshold(n, x) : lower_threshold(n, x);
  const int ty = y_upper ? upper_threshold(n, y) : lower_threshold(n, y);

  std::vector<unsigned char> hit(static_cast<std::size_t>(reps), 0);
  parallel_blocks(hit.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      RandomStream rng = RandomStream::for_replica(seed, i);
      const ChainState s = sample_final(n, rng);
      const bool in_x = x_upper ? s.d >= tx : s.d <= tx;
      const bool in_y = y_upper ? s.dp >= ty : s.dp <= ty;
      hit[i] = in_x && in_y;
    }
  });
  long count = 0;
  for (unsigned char h : hit) count += h;
  McTail out;
  out.reps = reps;
  out.estimate = static_cast<double>(count) / static_cast<double>(reps);
  out.std_error = std::sqrt(out.estimate * (1 - out.estimate) / static_cast<double>(reps));
  return out;
}

}  // namespace descentlab
