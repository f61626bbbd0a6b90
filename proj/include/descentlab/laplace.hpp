#pragma once

// The bivariate Laplace transform m_n(t, s) = E[exp(t D_n + s D'_n)]:
//
//   m_n(t,s) = ((e^t-1)/t)^n ((e^s-1)/s)^n ((1-e^{-t})/t) ((1-e^{-s})/s) S_n(t,s)
//   S_n(t,s) = sum_{k<n} b_{n,k} (st)^k (1 + r_{n-k}(t)) (1 + r_{n-k}(s))
//   b_{n,k}  = [n, n-k] ((n-k)!/n!)^2          ([.,.]: unsigned Stirling, 1st kind)
//   r_m(z)   = sum_{l != 0} (1 + 2 i pi l / z)^{-(m+1)}
//
// together with the exact-pmf route, the one-variable axis formula and the
// generating-function identity used to cross-check both.

#include <complex>
#include <functional>
#include <vector>

#include "descentlab/chain.hpp"

namespace descentlab {

using Complex = std::complex<double>;

struct TruncationPolicy {
  double rel_tol = 1e-12;
  long max_terms = 1'000'000;
};

inline constexpr int kMaxStirlingTableSize = 2048;

/// log b_{n,k} for k = 0..n-1, built from b_{1,0} = 1 by
///   b_{n+1,k} = (n b_{n,k-1} + (n+1-k)^2 b_{n,k}) / (n+1)^2
/// (the Stirling recurrence c(n+1,j) = n c(n,j) + c(n,j-1) rewritten for the
/// normalized ratios) with log-sum-exp, all terms positive.
class StirlingRatioTable {
 public:
  explicit StirlingRatioTable(int n);

  int n() const noexcept { return n_; }
  double log_b(int k) const { return logb_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& log_values() const noexcept { return logb_; }

 private:
  StirlingRatioTable(int n, std::vector<double> logb) : n_(n), logb_(std::move(logb)) {}
  friend void for_each_stirling_ratio_table(int, const std::function<void(const StirlingRatioTable&)>&);

  int n_ = 0;
  std::vector<double> logb_;
};

/// Builds the tables for n = 1..n_max in one sweep and hands each to `visit`.
void for_each_stirling_ratio_table(int n_max, const std::function<void(const StirlingRatioTable&)>& visit);

/// r_m(z) for Re z != 0. Pairs l and -l are summed directly up to
/// L = max(8, ceil(4|z|/(2 pi))). The remainder is bounded by comparison with
/// an integral, |tail| <= 2|z|^{m+1} / (2 pi m (2 pi L - |z|)^m); if that bound
/// is not already below rel_tol |1 + partial|, the tail is added from its
/// expansion in powers of z/(2 pi i l), each power summed over l > L through
/// the Hurwitz zeta function, until the next term is below the tolerance.
/// NonConvergenceError when max_terms would be exceeded.
Complex r_series(int m, Complex z, const TruncationPolicy& policy = {});

struct LaplaceValue {
  double value = 1.0;
  double log_value = 0.0;
};

/// Closed form. When |t| or |s| is below kAxisThreshold the r-series of the
/// small argument is not used: log m_n is interpolated linearly between the
/// axis formula and the closed form at the band edge. The prefactors are combined in log space; the S_n sum runs in
/// ascending k with double-double accumulation.
inline constexpr double kAxisThreshold = 1e-8;
LaplaceValue mn_closed(int n, double t, double s, const TruncationPolicy& policy = {});

/// m_n(t, 0) = ((e^t-1)/t)^n ((1-e^{-t})/t) (1 + r_n(t)), t != 0.
LaplaceValue mn_axis(int n, double t, const TruncationPolicy& policy = {});

/// sum_{d,d'} P(d, d') e^{t d + s d'} by log-sum-exp over the pmf.
LaplaceValue mn_exact(const JointPmf& pmf, double t, double s);

/// Right side of the generating-function identity
///   E[p^D q^D'] = (1-p)^{n+1} (1-q)^{n+1} / (p q n!) sum_{k,l>=0} C(kl+n-1, n) p^k q^l
/// for 0 < p, q < 1, binomials via lgamma. Terms with k = 0 or l = 0 vanish.
/// For fixed k the ratio of consecutive l-terms, q C(k(l+1)+n-1,n)/C(kl+n-1,n),
/// decreases in l, so once it drops below 1 the remaining l-tail is bounded by
/// the geometric series term * rho / (1 - rho); the k-sum is truncated the
/// same way on row sums. Truncation stops when that bound is below
/// rel_tol times the running total.
double gf_rhs(int n, double p, double q, const TruncationPolicy& policy = {});

/// E[p^D q^D'] from the pmf.
double gf_lhs(const JointPmf& pmf, double p, double q);

/// |gf_rhs - gf_lhs| at size pmf.n().
double gf_check(const JointPmf& pmf, double p, double q, const TruncationPolicy& policy = {});
/// Same, building the pmf of size n first.
double gf_check(int n, double p, double q, const TruncationPolicy& policy = {});

}  // namespace descentlab
