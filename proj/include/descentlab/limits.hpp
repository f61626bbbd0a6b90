#pragma once

// Monte Carlo statistics for the Gaussian-scale behaviour of (D_n, D'_n).
// Replica i always uses RandomStream::for_replica(seed, i) and every
// reduction runs over replicas in index order, so results depend only on
// (seed, reps, n) and never on the worker count.

#include <array>
#include <cstdint>

namespace descentlab {

struct CovEstimate {
  /// entries[i][j] = sample covariance of component i of the first vector
  /// with component j of the second (the same vector for clt_covariance).
  std::array<std::array<double, 2>, 2> entries{};
  std::array<std::array<double, 2>, 2> std_error{};
  long reps = 0;
};

struct ScalarEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long reps = 0;
};

/// Sample covariance of sqrt(n) (D_n/n - 1/2, D'_n/n - 1/2) over `reps`
/// independent chains. Standard errors are sqrt(Var[(X - Xbar)(Y - Ybar)] / reps).
/// DomainError unless n >= 2 and reps >= 100.
CovEstimate clt_covariance(int n, long reps, std::uint64_t seed, unsigned threads = 0);

/// Cross-covariance between the scaled vectors at sizes floor(n s) and
/// floor(n t) along the same path:
///   X_u = sqrt(n) (D_m/m - 1/2, D'_m/m - 1/2),  m = floor(n u).
/// entries[i][j] = Cov(X_s[i], X_t[j]); the Gaussian limit is s/(12 t^2) I.
/// DomainError unless 0 < s <= t and floor(n s) >= 2.
CovEstimate fclt_cross_cov(int n, double s, double t, long reps, std::uint64_t seed, unsigned threads = 0);

/// Sample variance of sqrt(n) (T_n/n - 1), T_n = D_n + D'_n (limit 1/6).
ScalarEstimate sum_clt_check(int n, long reps, std::uint64_t seed, unsigned threads = 0);

/// Sample mean of D_n/n (limit 1/2).
ScalarEstimate mean_check(int n, long reps, std::uint64_t seed, unsigned threads = 0);

struct PathStat {
  long n_final = 0;
  /// (1/log n) sum_{k<=n} [(D_k/k - 1/2)^2 + (D'_k/k - 1/2)^2]
  double qsl_value = 0.0;
  /// max over 1000 <= k <= n of k/(2 log log k) [(D_k/k - 1/2)^2 + (D'_k/k - 1/2)^2]
  double lil_value = 0.0;
};

inline constexpr long kMinPathLength = 1000;

/// One path of length n_final from stream `seed`, both statistics accumulated
/// online in O(1) memory. DomainError if n_final < kMinPathLength.
PathStat path_statistics(long n_final, std::uint64_t seed);
PathStat qsl_statistic(long n_final, std::uint64_t seed);
PathStat lil_statistic(long n_final, std::uint64_t seed);

}  // namespace descentlab
