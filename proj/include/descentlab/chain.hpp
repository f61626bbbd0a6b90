#pragma once

// The Markov chain V_n = (D_n, D'_n) of descents and inverse descents, grown
// one insertion at a time. From state (n, d, d') the increment (a, b) has
// probability w_ab / (n+1)^2 with
//   w11 = (n-d)(n-d') + n        w10 = (n-d)(d'+1) - n
//   w01 = (d+1)(n-d') - n        w00 = (d+1)(d'+1) + n

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "descentlab/random.hpp"

namespace descentlab {

struct ChainState {
  int n = 1;
  int d = 0;   // descents
  int dp = 0;  // inverse descents

  /// 0 <= d, dp <= n-1 and n >= 1.
  bool valid() const noexcept { return n >= 1 && d >= 0 && dp >= 0 && d <= n - 1 && dp <= n - 1; }
  friend bool operator==(const ChainState&, const ChainState&) = default;
};

struct TransitionWeights {
  std::int64_t w11 = 0;
  std::int64_t w10 = 0;
  std::int64_t w01 = 0;
  std::int64_t w00 = 0;
  std::int64_t denom = 1;  // (n+1)^2

  std::int64_t operator()(int a, int b) const {
    return a == 1 ? (b == 1 ? w11 : w10) : (b == 1 ? w01 : w00);
  }
  friend bool operator==(const TransitionWeights&, const TransitionWeights&) = default;
};

/// The four counts without any sign check; may be negative off the support.
TransitionWeights raw_transition_weights(const ChainState& s) noexcept;

/// Throws DomainError for an invalid state and NegativeWeightError if any
/// count is negative (the state cannot carry positive probability).
TransitionWeights transition_weights(const ChainState& s);

/// One insertion step; draws the increment exactly with probability
/// w_ab / (n+1)^2 from a single bounded integer draw.
ChainState step(const ChainState& s, RandomStream& rng);

/// Runs the chain from (1, 0, 0) to size n_max. O(n_max) time, O(1) memory.
ChainState sample_final(int n_max, RandomStream& rng);

inline constexpr int kMaxPmfSize = 2048;

/// Exact law of (D_n, D'_n) in double precision, probs(d, dp) for
/// 0 <= d, dp <= n-1, stored dense row-major.
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(int n, std::vector<double> probs);

  int n() const noexcept { return n_; }
  double operator()(int d, int dp) const {
    return probs_[static_cast<std::size_t>(d) * static_cast<std::size_t>(n_) +
                  static_cast<std::size_t>(dp)];
  }
  const std::vector<double>& data() const noexcept { return probs_; }

  double total_mass() const;
  /// Law of D_n (row sums).
  std::vector<double> marginal() const;

 private:
  int n_ = 0;
  std::vector<double> probs_;
};

/// Forward dynamic programming over the kernel from P_1(0,0) = 1. Each
/// output cell pulls from its four predecessors, so rows are computed
/// independently across `threads` workers (0 = default) with identical
/// results. Predecessors with zero mass are skipped. After every step the
/// total mass must be within 1e-9 of 1, else NumericError; the mass is never
/// renormalized. Throws SizeLimitError for n > kMaxPmfSize.
JointPmf exact_joint_pmf(int n, unsigned threads = 0);

/// Same propagation, handing the pmf of every size 1..n_max to `visit`.
void for_each_joint_pmf(int n_max, unsigned threads, const std::function<void(const JointPmf&)>& visit);

/// PMF export: header `n,d,dprime,prob`, row-major, probabilities with 17
/// significant digits.
void write_pmf_csv(std::ostream& out, const JointPmf& pmf);

enum class Quadrant { kPP, kMM, kMP, kPM };

std::string_view to_string(Quadrant q) noexcept;
/// Accepts pp|mm|mp|pm in either case; throws DomainError otherwise.
Quadrant parse_quadrant(std::string_view text);

/// Index thresholds of a quadrant event for size n.
///   P side of x: d >= ceil((n-1) x)
///   M side of x: d <= floor((n-1)(1-x)), computed as (n-1) - ceil((n-1) x)
/// Products within 1e-9 of an integer are treated as that integer, so the
/// complement bijection maps the P event onto the M event exactly.
int upper_threshold(int n, double x);
int lower_threshold(int n, double x);

/// P(D/(n-1) >= x, D'/(n-1) >= y) for PP; <= 1-x / <= 1-y for MM;
/// MP is (D <= 1-x side, D' >= y side); PM is (D >= x side, D' <= 1-y side).
/// Requires 1/2 < x, y < 1 (DomainError otherwise).
double quadrant_tail(const JointPmf& pmf, double x, double y, Quadrant q);

/// P(D/(n-1) >= x) from the pmf; x in (1/2, 1).
double marginal_upper_tail(const JointPmf& pmf, double x);
/// P(D/(n-1) <= 1 - x) from the pmf; x in (1/2, 1).
double marginal_lower_tail(const JointPmf& pmf, double x);

/// Residuals of the one-step moment identities at a state, computed from the
/// kernel counts: drift = max |E[xi] - (p_n, p'_n)| with p_n = (n-d)/(n+1),
/// covariance = max-norm distance of E[xi xi^T] from
/// [[p_n, p_n p'_n + r_n], [p_n p'_n + r_n, p'_n]], r_n = n/(n+1)^2.
struct MomentResiduals {
  double drift = 0.0;
  double covariance = 0.0;
};
MomentResiduals drift_covariance_check(const ChainState& s);

/// M_n = n (V_n - (n-1)/2 (1,1)).
struct MartingaleState {
  double m1 = 0.0;
  double m2 = 0.0;
};
MartingaleState martingale_value(const ChainState& s) noexcept;

/// Residuals of E[M_{n+1} - M_n | state] = 0 (absolute) and of the
/// conditional increment second moment against
/// [[(n-d)(d+1), n], [n, (n-d')(d'+1)]] (relative to the largest entry).
struct MartingaleResiduals {
  double drift = 0.0;
  double quadratic_variation = 0.0;
};
MartingaleResiduals martingale_check(const ChainState& s);

}  // namespace descentlab
