#include "descentlab/laplace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "descentlab/error.hpp"
#include "descentlab/rate.hpp"

namespace descentlab {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Double-double accumulator (TwoSum + renormalization).
class DoubleDouble {
 public:
  void add(double x) {
    const double s = hi_ + x;
    const double bp = s - hi_;
    const double err = (hi_ - (s - bp)) + (x - bp);
    const double lo = lo_ + err;
    hi_ = s + lo;
    lo_ = lo - (hi_ - s);
  }
  double value() const { return hi_ + lo_; }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

// B_{2k} / (2k)!, k = 1..6, for Euler-Maclaurin.
constexpr std::array<double, 6> kEulerMaclaurin = {
    1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
};

// zeta(p, q) * q^p = sum_{k>=0} (q / (q+k))^p for integer p >= 2, q >= 1.
// Direct terms until the shifted argument Q reaches p + 10, then
// Euler-Maclaurin at Q, whose correction terms shrink like (p / (2 pi Q))^2.
double hurwitz_zeta_scaled(int p, double q) {
  const double target = std::max(q, static_cast<double>(p) + 10.0);
  double sum = 0.0;
  double shift = q;
  for (; shift < target; shift += 1.0) sum += std::pow(q / shift, p);
  const double Q = shift;
  double tail = Q / (p - 1) + 0.5;
  double rising = p;       // p (p+1) ... (p+2k-2)
  double inv_q_pow = 1 / Q;  // Q^{-(2k-1)}
  for (std::size_t k = 0; k < kEulerMaclaurin.size(); ++k) {
    tail += kEulerMaclaurin[k] * rising * inv_q_pow;
    rising *= static_cast<double>(p + 2 * k + 1) * static_cast<double>(p + 2 * k + 2);
    inv_q_pow /= Q * Q;
  }
  return sum + std::pow(q / Q, p) * tail;
}

Complex pair_term(int power, Complex z, long l) {
  const Complex shift(0.0, kTwoPi * static_cast<double>(l));
  const Complex plus = 1.0 + shift / z;
  const Complex minus = 1.0 - shift / z;
  return std::exp(-static_cast<double>(power) * std::log(plus)) +
         std::exp(-static_cast<double>(power) * std::log(minus));
}

}  // namespace

StirlingRatioTable::StirlingRatioTable(int n) {
  if (n < 1) throw DomainError("stirling_ratio_table: n must be at least 1");
  if (n > kMaxStirlingTableSize) throw SizeLimitError("stirling_ratio_table", n, kMaxStirlingTableSize);
  for_each_stirling_ratio_table(n, [&](const StirlingRatioTable& t) {
    if (t.n() == n) {
      n_ = t.n_;
      logb_ = t.logb_;
    }
  });
}

void for_each_stirling_ratio_table(int n_max, const std::function<void(const StirlingRatioTable&)>& visit) {
  if (n_max < 1) throw DomainError("stirling_ratio_table: n must be at least 1");
  if (n_max > kMaxStirlingTableSize) {
    throw SizeLimitError("stirling_ratio_table", n_max, kMaxStirlingTableSize);
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> cur{0.0};
  visit(StirlingRatioTable(1, cur));
  for (int n = 1; n < n_max; ++n) {
    std::vector<double> next(static_cast<std::size_t>(n) + 1, kNegInf);
    const double log_n = std::log(static_cast<double>(n));
    const double log_norm = 2 * std::log(static_cast<double>(n + 1));
    for (int k = 0; k <= n; ++k) {
      double acc = kNegInf;
      if (k >= 1) acc = log_add(acc, log_n + cur[static_cast<std::size_t>(k - 1)]);
      if (k <= n - 1) {
        acc = log_add(acc, 2 * std::log(static_cast<double>(n + 1 - k)) + cur[static_cast<std::size_t>(k)]);
      }
      next[static_cast<std::size_t>(k)] = acc - log_norm;
    }
    next[0] = 0.0;
    cur = std::move(next);
    visit(StirlingRatioTable(n + 1, cur));
  }
}

Complex r_series(int m, Complex z, const TruncationPolicy& policy) {
  if (m < 1) throw DomainError("r_series: order must be at least 1");
  if (z.real() == 0.0) throw DomainError("r_series: Re(z) must be non-zero");
  const int power = m + 1;
  const double abs_z = std::abs(z);
  const Complex a = z / Complex(0.0, kTwoPi);
  const double abs_a = std::abs(a);

  const double needed = std::ceil(4 * abs_a);
  if (needed > static_cast<double>(policy.max_terms)) {
    throw NonConvergenceError("r_series: |z| too large for max_terms");
  }
  const long cutoff = std::max(8L, static_cast<long>(needed));

  Complex partial = 0.0;
  for (long l = 1; l <= cutoff; ++l) partial += pair_term(power, z, l);

  const double scale = std::abs(1.0 + partial);
  const double log_bound = std::log(2.0) + power * std::log(abs_z) - std::log(kTwoPi * m) -
                           m * std::log(kTwoPi * static_cast<double>(cutoff) - abs_z);
  if (log_bound <= std::log(policy.rel_tol * scale)) return partial;

  // Tail over l > cutoff: sum over j of 2 C(-power, j) a^{power+j} zeta(power+j, cutoff+1),
  // only even exponents power+j survive the pairing of l and -l.
  const double q = static_cast<double>(cutoff) + 1.0;
  const Complex ratio = a / q;
  const double abs_ratio = std::abs(ratio);
  Complex tail = 0.0;
  double binom = 1.0;  // C(power + j - 1, j)
  Complex ratio_pow = std::pow(ratio, power);
  for (long j = 0;; ++j) {
    if (cutoff + j > policy.max_terms) {
      throw NonConvergenceError("r_series: tail expansion did not converge within max_terms");
    }
    const int p = power + static_cast<int>(j);
    const double magnitude = 2 * binom * std::pow(abs_ratio, p) * hurwitz_zeta_scaled(p, q);
    if (p % 2 == 0) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      tail += sign * 2 * binom * ratio_pow * hurwitz_zeta_scaled(p, q);
    }
    // Past j = power the term ratio is below 1/2, so the remainder is at
    // most the current magnitude.
    if (j > power && magnitude <= policy.rel_tol * scale) break;
    binom *= static_cast<double>(power + j) / static_cast<double>(j + 1);
    ratio_pow *= ratio;
  }
  return partial + tail;
}

LaplaceValue mn_axis(int n, double t, const TruncationPolicy& policy) {
  if (n < 1) throw DomainError("mn_axis: n must be at least 1");
  if (t == 0.0) throw DomainError("mn_axis: t must be non-zero");
  const double one_plus_r = 1.0 + r_series(n, Complex(t, 0.0), policy).real();
  if (!(one_plus_r > 0)) throw NumericError("mn_axis: non-positive series value");
  // ((1 - e^{-t})/t) = e^{-t} (e^t - 1)/t, hence the (n+1) L(t) - t prefactor.
  const double log_value = (n + 1) * cgf(t) - t + std::log(one_plus_r);
  return LaplaceValue{std::exp(log_value), log_value};
}

namespace {

// Closed form with both arguments away from 0.
double closed_log_off_axis(int n, double t, double s, const TruncationPolicy& policy) {
  const StirlingRatioTable table(n);
  const double st = s * t;
  const double log_abs_st = std::log(std::abs(st));
  DoubleDouble sum;
  for (int k = 0; k < n; ++k) {
    const int order = n - k;
    const double r_t = r_series(order, Complex(t, 0.0), policy).real();
    const double r_s = r_series(order, Complex(s, 0.0), policy).real();
    double term = std::exp(table.log_b(k) + k * log_abs_st) * (1.0 + r_t) * (1.0 + r_s);
    if (st < 0 && k % 2 == 1) term = -term;
    sum.add(term);
  }
  const double series = sum.value();
  if (!(series > 0)) throw NumericError("mn_closed: non-positive Stirling series");
  return (n + 1) * (cgf(t) + cgf(s)) - t - s + std::log(series);
}

// log m_n is smooth in each argument, so inside the axis band it is
// interpolated linearly between the axis value and the closed form at the
// band edge (error O(n^2 h^2) with h the band width). Snapping to the axis
// instead would drop the first-order term s E[D'], of size ~ n h / 2.
double closed_log_near_axis(int n, double t, double s, const TruncationPolicy& policy) {
  const double axis = mn_axis(n, t, policy).log_value;
  if (s == 0.0) return axis;
  const double edge = std::copysign(kAxisThreshold, s);
  return axis + (s / edge) * (closed_log_off_axis(n, t, edge, policy) - axis);
}

}  // namespace

LaplaceValue mn_closed(int n, double t, double s, const TruncationPolicy& policy) {
  if (n < 1) throw DomainError("mn_closed: n must be at least 1");
  const bool t_axis = std::abs(t) < kAxisThreshold;
  const bool s_axis = std::abs(s) < kAxisThreshold;
  double log_value;
  if (t_axis && s_axis) {
    // E[D] = E[D'] = (n-1)/2; the quadratic terms are below 1e-16 n^2.
    log_value = (t + s) * (n - 1) / 2.0;
  } else if (s_axis) {
    log_value = closed_log_near_axis(n, t, s, policy);
  } else if (t_axis) {
    log_value = closed_log_near_axis(n, s, t, policy);
  } else {
    log_value = closed_log_off_axis(n, t, s, policy);
  }
  return LaplaceValue{std::exp(log_value), log_value};
}

LaplaceValue mn_exact(const JointPmf& pmf, double t, double s) {
  double peak = -std::numeric_limits<double>::infinity();
  for (int d = 0; d < pmf.n(); ++d) {
    for (int e = 0; e < pmf.n(); ++e) {
      const double p = pmf(d, e);
      if (p > 0) peak = std::max(peak, std::log(p) + t * d + s * e);
    }
  }
  double sum = 0.0;
  for (int d = 0; d < pmf.n(); ++d) {
    for (int e = 0; e < pmf.n(); ++e) {
      const double p = pmf(d, e);
      if (p > 0) sum += std::exp(std::log(p) + t * d + s * e - peak);
    }
  }
  const double log_value = peak + std::log(sum);
  return LaplaceValue{std::exp(log_value), log_value};
}

double gf_rhs(int n, double p, double q, const TruncationPolicy& policy) {
  if (n < 1) throw DomainError("gf_rhs: n must be at least 1");
  if (!(p > 0 && p < 1) || !(q > 0 && q < 1)) throw DomainError("gf_rhs: p and q must lie in ]0,1[");
  const double log_p = std::log(p);
  const double log_q = std::log(q);
  const double log_prefactor = (n + 1) * (std::log1p(-p) + std::log1p(-q)) - log_p - log_q -
                               std::lgamma(n + 1.0);
  // log C(m + n - 1, n) with m = k l >= 1
  auto log_binom = [n](double m) { return std::lgamma(m + n) - std::lgamma(n + 1.0) - std::lgamma(m); };

  long terms = 0;
  double total = 0.0;
  double prev_row = 0.0;
  for (long k = 1;; ++k) {
    double row = 0.0;
    double prev = 0.0;
    for (long l = 1;; ++l) {
      if (++terms > policy.max_terms) throw NonConvergenceError("gf_rhs: truncation did not converge");
      const double term = std::exp(log_prefactor + log_binom(static_cast<double>(k * l)) + k * log_p + l * log_q);
      row += term;
      if (term == 0.0 && l > 1) break;
      if (l > 1 && prev > 0) {
        const double rho = term / prev;
        if (rho < 1 && term * rho / (1 - rho) <= policy.rel_tol * 0.5 * (total + row)) break;
      }
      prev = term;
    }
    total += row;
    if (k > 1 && prev_row > 0) {
      const double rho = row / prev_row;
      if (rho < 1 && row * rho / (1 - rho) <= policy.rel_tol * 0.5 * total) break;
    }
    prev_row = row;
  }
  return total;
}

double gf_lhs(const JointPmf& pmf, double p, double q) {
  double sum = 0.0;
  for (int d = 0; d < pmf.n(); ++d) {
    for (int e = 0; e < pmf.n(); ++e) sum += pmf(d, e) * std::pow(p, d) * std::pow(q, e);
  }
  return sum;
}

double gf_check(const JointPmf& pmf, double p, double q, const TruncationPolicy& policy) {
  return std::abs(gf_rhs(pmf.n(), p, q, policy) - gf_lhs(pmf, p, q));
}

double gf_check(int n, double p, double q, const TruncationPolicy& policy) {
  return gf_check(exact_joint_pmf(n, 1), p, q, policy);
}

}  // namespace descentlab
