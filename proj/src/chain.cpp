#include "descentlab/chain.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "descentlab/error.hpp"
#include "descentlab/parallel.hpp"

namespace descentlab {

TransitionWeights raw_transition_weights(const ChainState& s) noexcept {
  const std::int64_t n = s.n;
  const std::int64_t d = s.d;
  const std::int64_t dp = s.dp;
  return TransitionWeights{
      .w11 = (n - d) * (n - dp) + n,
      .w10 = (n - d) * (dp + 1) - n,
      .w01 = (d + 1) * (n - dp) - n,
      .w00 = (d + 1) * (dp + 1) + n,
      .denom = (n + 1) * (n + 1),
  };
}

TransitionWeights transition_weights(const ChainState& s) {
  if (!s.valid()) {
    throw DomainError("transition_weights: invalid state (n=" + std::to_string(s.n) +
                      ", d=" + std::to_string(s.d) + ", dp=" + std::to_string(s.dp) + ")");
  }
  const TransitionWeights w = raw_transition_weights(s);
  if (w.w11 < 0 || w.w10 < 0 || w.w01 < 0 || w.w00 < 0) {
    throw NegativeWeightError("transition_weights: negative weight at unreachable state (n=" +
                              std::to_string(s.n) + ", d=" + std::to_string(s.d) +
                              ", dp=" + std::to_string(s.dp) + ")");
  }
  return w;
}

ChainState step(const ChainState& s, RandomStream& rng) {
  const TransitionWeights w = transition_weights(s);
  auto u = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(w.denom)));
  int a = 0;
  int b = 0;
  if ((u -= w.w11) < 0) {
    a = 1;
    b = 1;
  } else if ((u -= w.w10) < 0) {
    a = 1;
  } else if ((u -= w.w01) < 0) {
    b = 1;
  }
  return ChainState{s.n + 1, s.d + a, s.dp + b};
}

ChainState sample_final(int n_max, RandomStream& rng) {
  if (n_max < 1) throw DomainError("sample_final: n_max must be at least 1");
  ChainState s;
  while (s.n < n_max) s = step(s, rng);
  return s;
}

JointPmf::JointPmf(int n, std::vector<double> probs) : n_(n), probs_(std::move(probs)) {
  if (n < 1 || probs_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw DomainError("JointPmf: expected n*n probabilities");
  }
}

double JointPmf::total_mass() const {
  double sum = 0.0;
  for (double p : probs_) sum += p;
  return sum;
}

std::vector<double> JointPmf::marginal() const {
  std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
  for (int d = 0; d < n_; ++d) {
    double row = 0.0;
    for (int dp = 0; dp < n_; ++dp) row += (*this)(d, dp);
    out[static_cast<std::size_t>(d)] = row;
  }
  return out;
}

namespace {

// Contribution of predecessor (d, dp) at size n through increment (a, b).
double pull(const std::vector<double>& cur, std::size_t stride, int n, int d, int dp, int a, int b) {
  const double mass = cur[static_cast<std::size_t>(d) * stride + static_cast<std::size_t>(dp)];
  if (mass == 0.0) return 0.0;
  const std::int64_t w = raw_transition_weights(ChainState{n, d, dp})(a, b);
  if (w < 0) {
    throw NegativeWeightError("exact_joint_pmf: positive mass on a state with negative weight (n=" +
                              std::to_string(n) + ", d=" + std::to_string(d) +
                              ", dp=" + std::to_string(dp) + ")");
  }
  return mass * static_cast<double>(w);
}

}  // namespace

namespace {

// Propagates from size 1 to n_final; `visit` (if set) sees every size, with
// the pmf laid out on a stride of n_final.
std::vector<double> propagate(int n_final, unsigned threads,
                              const std::function<void(int, const std::vector<double>&)>& visit) {
  if (n_final < 1) throw DomainError("exact_joint_pmf: n must be at least 1");
  if (n_final > kMaxPmfSize) throw SizeLimitError("exact_joint_pmf", n_final, kMaxPmfSize);

  const auto stride = static_cast<std::size_t>(n_final);
  std::vector<double> cur(stride * stride, 0.0);
  std::vector<double> next(stride * stride, 0.0);
  cur[0] = 1.0;
  if (visit) visit(1, cur);

  for (int n = 1; n < n_final; ++n) {
    const double denom = static_cast<double>(n + 1) * static_cast<double>(n + 1);
    // Output grid is (n+1) x (n+1); predecessors live on the n x n grid.
    parallel_blocks(static_cast<std::size_t>(n) + 1, threads, [&](std::size_t lo, std::size_t hi) {
      for (auto i = static_cast<int>(lo); i < static_cast<int>(hi); ++i) {
        for (int j = 0; j <= n; ++j) {
          double acc = 0.0;
          if (i >= 1 && j >= 1) acc += pull(cur, stride, n, i - 1, j - 1, 1, 1);
          if (i >= 1 && j <= n - 1) acc += pull(cur, stride, n, i - 1, j, 1, 0);
          if (i <= n - 1 && j >= 1) acc += pull(cur, stride, n, i, j - 1, 0, 1);
          if (i <= n - 1 && j <= n - 1) acc += pull(cur, stride, n, i, j, 0, 0);
          next[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(j)] = acc / denom;
        }
      }
    });
    double mass = 0.0;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) mass += next[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(j)];
    }
    if (std::abs(mass - 1.0) > 1e-9) {
      throw NumericError("exact_joint_pmf: total mass drifted to " + std::to_string(mass) +
                         " at n=" + std::to_string(n + 1));
    }
    std::swap(cur, next);
    if (visit) visit(n + 1, cur);
  }
  return cur;
}

JointPmf compact(int n, std::size_t stride, const std::vector<double>& grid) {
  const auto size = static_cast<std::size_t>(n);
  std::vector<double> probs(size * size);
  for (std::size_t i = 0; i < size; ++i) {
    std::copy_n(grid.begin() + static_cast<std::ptrdiff_t>(i * stride), size,
                probs.begin() + static_cast<std::ptrdiff_t>(i * size));
  }
  return JointPmf(n, std::move(probs));
}

}  // namespace

JointPmf exact_joint_pmf(int n_final, unsigned threads) {
  return JointPmf(n_final, propagate(n_final, threads, {}));
}

void for_each_joint_pmf(int n_max, unsigned threads, const std::function<void(const JointPmf&)>& visit) {
  const auto stride = static_cast<std::size_t>(std::max(n_max, 1));
  propagate(n_max, threads, [&](int n, const std::vector<double>& grid) { visit(compact(n, stride, grid)); });
}

void write_pmf_csv(std::ostream& out, const JointPmf& pmf) {
  out << "n,d,dprime,prob\n";
  char buf[64];
  for (int d = 0; d < pmf.n(); ++d) {
    for (int dp = 0; dp < pmf.n(); ++dp) {
      std::snprintf(buf, sizeof buf, "%.17g", pmf(d, dp));
      out << pmf.n() << ',' << d << ',' << dp << ',' << buf << '\n';
    }
  }
}

std::string_view to_string(Quadrant q) noexcept {
  switch (q) {
    case Quadrant::kPP: return "pp";
    case Quadrant::kMM: return "mm";
    case Quadrant::kMP: return "mp";
    case Quadrant::kPM: return "pm";
  }
  return "pp";
}

Quadrant parse_quadrant(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "pp") return Quadrant::kPP;
  if (lower == "mm") return Quadrant::kMM;
  if (lower == "mp") return Quadrant::kMP;
  if (lower == "pm") return Quadrant::kPM;
  throw DomainError("unknown quadrant '" + std::string(text) + "' (expected pp|mm|mp|pm)");
}

namespace {

void require_upper_half(double x, const char* what) {
  if (!(x > 0.5 && x < 1.0)) {
    throw DomainError(std::string(what) + ": threshold must lie in ]1/2, 1[");
  }
}

}  // namespace

int upper_threshold(int n, double x) {
  const double v = static_cast<double>(n - 1) * x;
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<int>(r);
  return static_cast<int>(std::ceil(v));
}

int lower_threshold(int n, double x) { return (n - 1) - upper_threshold(n, x); }

double quadrant_tail(const JointPmf& pmf, double x, double y, Quadrant q) {
  require_upper_half(x, "quadrant_tail");
  require_upper_half(y, "quadrant_tail");
  const int n = pmf.n();
  const bool x_upper = q == Quadrant::kPP || q == Quadrant::kPM;
  const bool y_upper = q == Quadrant::kPP || q == Quadrant::kMP;
  const int d_lo = x_upper ? upper_threshold(n, x) : 0;
  const int d_hi = x_upper ? n - 1 : lower_threshold(n, x);
  const int e_lo = y_upper ? upper_threshold(n, y) : 0;
  const int e_hi = y_upper ? n - 1 : lower_threshold(n, y);
  double sum = 0.0;
  for (int d = std::max(d_lo, 0); d <= std::min(d_hi, n - 1); ++d) {
    for (int e = std::max(e_lo, 0); e <= std::min(e_hi, n - 1); ++e) sum += pmf(d, e);
  }
  return sum;
}

double marginal_upper_tail(const JointPmf& pmf, double x) {
  require_upper_half(x, "marginal_upper_tail");
  const std::vector<double> m = pmf.marginal();
  double sum = 0.0;
  for (int d = upper_threshold(pmf.n(), x); d < pmf.n(); ++d) sum += m[static_cast<std::size_t>(d)];
  return sum;
}

double marginal_lower_tail(const JointPmf& pmf, double x) {
  require_upper_half(x, "marginal_lower_tail");
  const std::vector<double> m = pmf.marginal();
  double sum = 0.0;
  for (int d = 0; d <= lower_threshold(pmf.n(), x); ++d) sum += m[static_cast<std::size_t>(d)];
  return sum;
}

MomentResiduals drift_covariance_check(const ChainState& s) {
  const TransitionWeights w = transition_weights(s);
  const double den = static_cast<double>(w.denom);
  const double n = s.n;
  const double p = (n - s.d) / (n + 1);
  const double pp = (n - s.dp) / (n + 1);
  const double r = n / ((n + 1) * (n + 1));

  const double e1 = static_cast<double>(w.w11 + w.w10) / den;
  const double e2 = static_cast<double>(w.w11 + w.w01) / den;
  const double e12 = static_cast<double>(w.w11) / den;

  MomentResiduals out;
  out.drift = std::max(std::abs(e1 - p), std::abs(e2 - pp));
  // Bernoulli components: E[xi_1^2] = E[xi_1].
  out.covariance = std::max({std::abs(e1 - p), std::abs(e2 - pp), std::abs(e12 - (p * pp + r))});
  return out;
}

MartingaleState martingale_value(const ChainState& s) noexcept {
  const double n = s.n;
  const double centre = (n - 1) / 2;
  return MartingaleState{n * (s.d - centre), n * (s.dp - centre)};
}

MartingaleResiduals martingale_check(const ChainState& s) {
  const TransitionWeights w = transition_weights(s);
  const std::int64_t n = s.n;
  // M_{n+1} - M_n = V_n + (n+1) xi - n (1,1); all integer, so the weighted
  // sums below are exact before the single division by (n+1)^2.
  std::int64_t first[2] = {0, 0};
  std::int64_t second[2][2] = {{0, 0}, {0, 0}};
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      const std::int64_t weight = w(a, b);
      const std::int64_t inc[2] = {s.d + (n + 1) * a - n, s.dp + (n + 1) * b - n};
      for (int i = 0; i < 2; ++i) {
        first[i] += weight * inc[i];
        for (int j = 0; j < 2; ++j) second[i][j] += weight * inc[i] * inc[j];
      }
    }
  }
  const double den = static_cast<double>(w.denom);
  const double target[2][2] = {
      {static_cast<double>((n - s.d) * (s.d + 1)), static_cast<double>(n)},
      {static_cast<double>(n), static_cast<double>((n - s.dp) * (s.dp + 1))},
  };
  double scale = 1.0;
  for (auto& row : target) {
    for (double t : row) scale = std::max(scale, std::abs(t));
  }
  MartingaleResiduals out;
  out.drift = std::max(std::abs(static_cast<double>(first[0]) / den),
                       std::abs(static_cast<double>(first[1]) / den));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.quadratic_variation = std::max(
          out.quadratic_variation, std::abs(static_cast<double>(second[i][j]) / den - target[i][j]) / scale);
    }
  }
  return out;
}

}  // namespace descentlab
