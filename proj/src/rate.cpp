#include "descentlab/rate.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "descentlab/error.hpp"
#include "descentlab/laplace.hpp"

namespace descentlab {

namespace {

// B_{2k} / (2k)!, k = 1..12.
constexpr std::array<double, 12> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
};

// Full Bernoulli expansion of L'' (radius 2 pi); used where the closed form
// cancels catastrophically.
constexpr double kCgfD2SeriesRadius = 0.5;

double cgf_d2_series(double t) {
  const double t2 = t * t;
  double power = 1.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    const double term = kBernoulliOverFactorial[k] * static_cast<double>(2 * k + 1) * power;
    sum += term;
    if (std::abs(term) < 1e-20) break;
    power *= t2;
  }
  return sum;
}

}  // namespace

double cgf(double t) {
  if (std::abs(t) < kCgfSeriesThreshold) {
    const double t2 = t * t;
    return t / 2 + t2 / 24 - t2 * t2 / 2880;
  }
  if (t > 0) return t + std::log1p(-std::exp(-t)) - std::log(t);
  return std::log(-std::expm1(t)) - std::log(-t);
}

double cgf_d1(double t) {
  if (std::abs(t) < kCgfSeriesThreshold) return 0.5 + t / 12 - t * t * t / 720;
  const long double u = t;
  // 1/(1 - e^{-t}) = -1/expm1(-t)
  const long double value = -1.0L / std::expm1(-u) - 1.0L / u;
  return static_cast<double>(value);
}

double cgf_d2(double t) {
  const double a = std::abs(t);  // L'' is even
  if (a < kCgfSeriesThreshold) return 1.0 / 12 - a * a / 240;
  if (a < kCgfD2SeriesRadius) return cgf_d2_series(a);
  const long double u = a;
  const long double e = std::exp(-u);
  const long double denom = -std::expm1(-u);
  // e^t/(e^t - 1)^2 = e^{-t}/(1 - e^{-t})^2
  return static_cast<double>(1.0L / (u * u) - e / (denom * denom));
}

TiltSolution solve_tilt(double x, const TiltOptions& options) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("solve_tilt: x must lie in ]0,1[");
  TiltSolution out;
  out.x = x;
  if (x == 0.5) return out;

  const double t0 = 12.0 * (x - 0.5);
  double lo = t0;
  double hi = t0;
  int iterations = 0;
  for (double width = 1.0;; width *= 2.0) {
    lo = t0 - width;
    hi = t0 + width;
    if (cgf_d1(lo) <= x && cgf_d1(hi) >= x) break;
    if (++iterations > options.max_iterations) {
      throw NonConvergenceError("solve_tilt: could not bracket the root for x=" + std::to_string(x));
    }
  }

  double t = t0;
  for (;;) {
    if (++iterations > options.max_iterations) {
      throw NonConvergenceError("solve_tilt: no convergence after " +
                                std::to_string(options.max_iterations) + " iterations");
    }
    const double f = cgf_d1(t) - x;
    if (f == 0.0) break;
    if (f < 0) lo = t; else hi = t;
    double next = t - f / cgf_d2(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - t);
    t = next;
    if (step <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)) ||
        hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      break;
    }
  }
  if (std::abs(cgf_d1(t) - x) > options.residual_tol) {
    throw NonConvergenceError("solve_tilt: residual above tolerance for x=" + std::to_string(x));
  }
  out.t_x = t;
  out.rate = x * t - cgf(t);
  out.sigma2 = cgf_d2(t);
  return out;
}

double rate(double x, const TiltOptions& options) {
  if (x == 0.0 || x == 1.0) return std::numeric_limits<double>::infinity();
  if (!(x > 0.0 && x < 1.0)) throw DomainError("rate: x must lie in [0,1]");
  return solve_tilt(x, options).rate;
}

double joint_rate(double x, double y, const TiltOptions& options) {
  if (!(x > 0.0 && x < 1.0) || !(y > 0.0 && y < 1.0)) {
    throw DomainError("joint_rate: x and y must lie in ]0,1[");
  }
  return rate(x, options) + rate(y, options);
}

double sum_rate(double y, const SumRateOptions& options) {
  if (!(y > 0.0 && y < 2.0)) throw DomainError("sum_rate: y must lie in ]0,2[");
  auto f = [&](double x) { return rate(x, options.tilt) + rate(y - x, options.tilt); };
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double a = std::max(0.0, y - 1);
  double b = std::min(1.0, y);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > options.width) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

double limit_cgf_check(const JointPmf& pmf, double t, double s) {
  const LaplaceValue m = mn_exact(pmf, t, s);
  return std::abs(m.log_value / pmf.n() - cgf(t) - cgf(s));
}

}  // namespace descentlab
