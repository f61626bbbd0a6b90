#pragma once

// Exact big-integer routes used as oracles for the floating-point ones.

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace descentlab {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kMaxEulerianSize = 256;
inline constexpr int kMaxExactLawSize = 40;

/// Eulerian numbers A(n, 0..n-1) from
/// A(n,k) = (k+1) A(n-1,k) + (n-k) A(n-1,k-1). Row sum is n!.
/// Throws SizeLimitError for n > kMaxEulerianSize.
std::vector<BigInt> eulerian_row(int n);

BigInt factorial(int n);

/// Unsigned Stirling numbers of the first kind [n, 0..n] from
/// c(n+1, j) = n c(n, j) + c(n, j-1).
std::vector<BigInt> stirling_first_row(int n);

/// Law of (D_n, D'_n) in exact arithmetic: P(d, dp) = numerators[d*n + dp] /
/// denominator with denominator = (n!)^2 = prod_{k<n} (k+1)^2. Propagated
/// through the same kernel as exact_joint_pmf but without rounding.
struct ExactJointLaw {
  int n = 0;
  BigInt denominator;
  std::vector<BigInt> numerators;

  double probability(int d, int dp) const;
};
ExactJointLaw exact_joint_law(int n);

/// a / b rounded to double.
double ratio_to_double(const BigInt& a, const BigInt& b);

}  // namespace descentlab
