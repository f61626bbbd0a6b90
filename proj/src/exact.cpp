#include "descentlab/exact.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "descentlab/chain.hpp"
#include "descentlab/error.hpp"

namespace descentlab {

std::vector<BigInt> eulerian_row(int n) {
  if (n < 1) throw DomainError("eulerian_row: n must be at least 1");
  if (n > kMaxEulerianSize) throw SizeLimitError("eulerian_row", n, kMaxEulerianSize);
  std::vector<BigInt> row{1};
  for (int m = 2; m <= n; ++m) {
    std::vector<BigInt> next(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      BigInt value = 0;
      if (k < m - 1) value += (k + 1) * row[static_cast<std::size_t>(k)];
      if (k >= 1) value += (m - k) * row[static_cast<std::size_t>(k - 1)];
      next[static_cast<std::size_t>(k)] = std::move(value);
    }
    row = std::move(next);
  }
  return row;
}

BigInt factorial(int n) {
  BigInt f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

std::vector<BigInt> stirling_first_row(int n) {
  if (n < 0) throw DomainError("stirling_first_row: n must be non-negative");
  std::vector<BigInt> row{1};
  for (int m = 0; m < n; ++m) {
    std::vector<BigInt> next(row.size() + 1);
    for (std::size_t j = 0; j < next.size(); ++j) {
      BigInt value = 0;
      if (j < row.size()) value += m * row[j];
      if (j >= 1) value += row[j - 1];
      next[j] = std::move(value);
    }
    row = std::move(next);
  }
  return row;
}

double ratio_to_double(const BigInt& a, const BigInt& b) {
  using Float = boost::multiprecision::cpp_bin_float_double_extended;
  return static_cast<double>(Float(a) / Float(b));
}

double ExactJointLaw::probability(int d, int dp) const {
  return ratio_to_double(numerators[static_cast<std::size_t>(d) * static_cast<std::size_t>(n) +
                                    static_cast<std::size_t>(dp)],
                         denominator);
}

ExactJointLaw exact_joint_law(int n_final) {
  if (n_final < 1) throw DomainError("exact_joint_law: n must be at least 1");
  if (n_final > kMaxExactLawSize) throw SizeLimitError("exact_joint_law", n_final, kMaxExactLawSize);
  const auto stride = static_cast<std::size_t>(n_final);
  std::vector<BigInt> cur(stride * stride);
  cur[0] = 1;
  for (int n = 1; n < n_final; ++n) {
    std::vector<BigInt> next(stride * stride);
    for (int d = 0; d < n; ++d) {
      for (int dp = 0; dp < n; ++dp) {
        const BigInt& mass = cur[static_cast<std::size_t>(d) * stride + static_cast<std::size_t>(dp)];
        if (mass == 0) continue;
        const TransitionWeights w = transition_weights(ChainState{n, d, dp});
        for (int a = 0; a <= 1; ++a) {
          for (int b = 0; b <= 1; ++b) {
            if (w(a, b) == 0) continue;
            next[static_cast<std::size_t>(d + a) * stride + static_cast<std::size_t>(dp + b)] +=
                mass * w(a, b);
          }
        }
      }
    }
    cur = std::move(next);
  }
  const BigInt f = factorial(n_final);
  return ExactJointLaw{n_final, f * f, std::move(cur)};
}

}  // namespace descentlab
