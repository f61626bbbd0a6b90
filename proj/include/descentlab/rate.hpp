#pragma once

// Cumulant generating function L(t) = log((e^t - 1)/t) of the descent
// proportion, its Legendre transform I(x), and the derived rate functions.

#include "descentlab/chain.hpp"

namespace descentlab {

/// Below this |t| the three functions switch to their short Taylor series.
inline constexpr double kCgfSeriesThreshold = 1e-4;

double cgf(double t);
/// L'(t) = 1/(1 - e^{-t}) - 1/t, with L'(0) = 1/2.
double cgf_d1(double t);
/// L''(t) = 1/t^2 - e^t/(e^t - 1)^2, with L''(0) = 1/12.
double cgf_d2(double t);

struct TiltOptions {
  double residual_tol = 1e-12;
  int max_iterations = 200;
};

/// Legendre data at x: L'(t_x) = x, rate = x t_x - L(t_x), sigma2 = L''(t_x).
struct TiltSolution {
  double x = 0.5;
  double t_x = 0.0;
  double rate = 0.0;
  double sigma2 = 1.0 / 12.0;
};

/// Safeguarded Newton on L'(t) = x from t0 = 12(x - 1/2), inside a bracket
/// [t0 - 2^k, t0 + 2^k] grown until it straddles the root; steps leaving the
/// bracket fall back to bisection. Iterates to machine precision and then
/// requires |L'(t_x) - x| <= residual_tol.
/// DomainError unless 0 < x < 1; NonConvergenceError after max_iterations.
TiltSolution solve_tilt(double x, const TiltOptions& options = {});

/// I(x) = sup_t {x t - L(t)}. Returns +infinity at x = 0 and x = 1 (the
/// supremum diverges there); DomainError outside [0, 1].
double rate(double x, const TiltOptions& options = {});

/// I(x, y) = I(x) + I(y).
double joint_rate(double x, double y, const TiltOptions& options = {});

struct SumRateOptions {
  double width = 1e-10;
  TiltOptions tilt{};
};

/// J(y) = inf_x {I(x) + I(y - x)} for 0 < y < 2, by golden-section search over
/// ]max(0, y-1), min(1, y)[.
double sum_rate(double y, const SumRateOptions& options = {});

/// |(1/n) log m_n(t, s) - L(t) - L(s)| with m_n taken from the exact pmf.
double limit_cgf_check(const JointPmf& pmf, double t, double s);

}  // namespace descentlab
