#pragma once

// Sharp large-deviation approximations of quadrant tails of
// (D_n/(n-1), D'_n/(n-1)) for thresholds x, y in ]1/2, 1[:
//
//   P(quadrant) ~ exp(-n I(x,y) + c_n) / (2 pi n sigma_x t_x sigma_y t_y)
//   c_n = {x_n} t_x + {y_n} t_y +/- t_x t_y / 2     (+ for pp/mm, - for mp/pm)
//   {x_n} = n x - ceil((n-1) x)

#include <cstdint>
#include <functional>
#include <vector>

#include "descentlab/chain.hpp"
#include "descentlab/rate.hpp"

namespace descentlab {

double frac_shift(double x, int n);

/// c_n above. DomainError unless 1/2 < x, y < 1.
double correction(double x, double y, int n, Quadrant q, const TiltOptions& options = {});

struct SldpEstimate {
  int n = 0;
  double x = 0.0;
  double y = 0.0;
  Quadrant quadrant = Quadrant::kPP;
  double log_estimate = 0.0;
  /// exp(log_estimate); 0 with `underflow` set when that is not representable.
  double estimate = 0.0;
  double correction = 0.0;
  bool underflow = false;
};

SldpEstimate sldp_joint(int n, double x, double y, Quadrant q, const TiltOptions& options = {});

/// One-dimensional version: exp(-n I(x) + {x_n} t_x) / (sigma_x t_x sqrt(2 pi n)).
/// `y` is unused (NaN) and `correction` holds {x_n} t_x.
SldpEstimate sldp_marginal(int n, double x, const TiltOptions& options = {});

/// exp(+t_x t_y / 2) for pp/mm, exp(-t_x t_y / 2) for mp/pm.
double dependence_factor(double x, double y, Quadrant q, const TiltOptions& options = {});

struct ComparisonRow {
  int n = 0;
  double exact = 0.0;
  double sldp = 0.0;
  double ratio = 0.0;  // exact / sldp
};

using PmfProvider = std::function<JointPmf(int)>;

/// One row per n, in the order given. The default provider is
/// exact_joint_pmf(n, threads).
std::vector<ComparisonRow> convergence_table(const std::vector<int>& ns, double x, double y, Quadrant q,
                                             const PmfProvider& provider = {}, unsigned threads = 0);

struct McTail {
  double estimate = 0.0;
  double std_error = 0.0;
  long reps = 0;
};

/// Fraction of `reps` chain replicas (stream i derived from (seed, i)) that
/// land in the quadrant event, with its binomial standard error.
McTail quadrant_tail_mc(int n, double x, double y, Quadrant q, long reps, std::uint64_t seed,
                        unsigned threads = 0);

}  // namespace descentlab
