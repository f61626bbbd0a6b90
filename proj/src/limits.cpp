#include "descentlab/limits.hpp"

#include <cmath>
#include <vector>

#include "descentlab/chain.hpp"
#include "descentlab/error.hpp"
#include "descentlab/parallel.hpp"
#include "descentlab/random.hpp"

namespace descentlab {

namespace {

struct Pair {
  double a = 0.0;
  double b = 0.0;
};

double scaled(int n, int count, int size) {
  return std::sqrt(static_cast<double>(n)) * (static_cast<double>(count) / size - 0.5);
}

// Sample covariance of xs with ys and the standard error of that estimate.
std::pair<double, double> covariance(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto reps = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= reps;
  my /= reps;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double prod = (xs[i] - mx) * (ys[i] - my);
    sum += prod;
    sum_sq += prod * prod;
  }
  const double cov = sum / (reps - 1);
  const double mean_prod = sum / reps;
  const double var_prod = (sum_sq / reps - mean_prod * mean_prod) * reps / (reps - 1);
  return {cov, std::sqrt(var_prod / reps)};
}

CovEstimate cov_matrix(const std::vector<Pair>& first, const std::vector<Pair>& second) {
  std::vector<double> f[2];
  std::vector<double> s[2];
  for (int c = 0; c < 2; ++c) {
    f[c].reserve(first.size());
    s[c].reserve(second.size());
  }
  for (std::size_t i = 0; i < first.size(); ++i) {
    f[0].push_back(first[i].a);
    f[1].push_back(first[i].b);
    s[0].push_back(second[i].a);
    s[1].push_back(second[i].b);
  }
  CovEstimate out;
  out.reps = static_cast<long>(first.size());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto [cov, se] = covariance(f[i], s[j]);
      out.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cov;
      out.std_error[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = se;
    }
  }
  return out;
}

void require_reps(int n, long reps, const char* what) {
  if (n < 2) throw DomainError(std::string(what) + ": n must be at least 2");
  if (reps < 100) throw DomainError(std::string(what) + ": reps must be at least 100");
}

std::vector<ChainState> final_states(int n, long reps, std::uint64_t seed, unsigned threads) {
  std::vector<ChainState> out(static_cast<std::size_t>(reps));
  parallel_blocks(out.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      RandomStream rng = RandomStream::for_replica(seed, i);
      out[i] = sample_final(n, rng);
    }
  });
  return out;
}

}  // namespace

CovEstimate clt_covariance(int n, long reps, std::uint64_t seed, unsigned threads) {
  require_reps(n, reps, "clt_covariance");
  const std::vector<ChainState> states = final_states(n, reps, seed, threads);
  std::vector<Pair> v;
  v.reserve(states.size());
  for (const ChainState& s : states) v.push_back({scaled(n, s.d, n), scaled(n, s.dp, n)});
  return cov_matrix(v, v);
}

CovEstimate fclt_cross_cov(int n, double s, double t, long reps, std::uint64_t seed, unsigned threads) {
  if (!(s > 0 && s <= t)) throw DomainError("fclt_cross_cov: require 0 < s <= t");
  const auto early = static_cast<int>(std::floor(n * s));
  const auto late = static_cast<int>(std::floor(n * t));
  if (early < 2) throw DomainError("fclt_cross_cov: floor(n s) must be at least 2");
  require_reps(n, reps, "fclt_cross_cov");

  std::vector<Pair> at_s(static_cast<std::size_t>(reps));
  std::vector<Pair> at_t(static_cast<std::size_t>(reps));
  parallel_blocks(at_s.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      RandomStream rng = RandomStream::for_replica(seed, i);
      ChainState state = sample_final(early, rng);
      at_s[i] = {scaled(n, state.d, early), scaled(n, state.dp, early)};
      while (state.n < late) state = step(state, rng);
      at_t[i] = {scaled(n, state.d, late), scaled(n, state.dp, late)};
    }
  });
  return cov_matrix(at_s, at_t);
}

ScalarEstimate sum_clt_check(int n, long reps, std::uint64_t seed, unsigned threads) {
  require_reps(n, reps, "sum_clt_check");
  const std::vector<ChainState> states = final_states(n, reps, seed, threads);
  std::vector<double> v;
  v.reserve(states.size());
  for (const ChainState& s : states) {
    v.push_back(std::sqrt(static_cast<double>(n)) * (static_cast<double>(s.d + s.dp) / n - 1.0));
  }
  const auto [var, se] = covariance(v, v);
  return ScalarEstimate{var, se, reps};
}

ScalarEstimate mean_check(int n, long reps, std::uint64_t seed, unsigned threads) {
  require_reps(n, reps, "mean_check");
  const std::vector<ChainState> states = final_states(n, reps, seed, threads);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const ChainState& s : states) {
    const double v = static_cast<double>(s.d) / n;
    sum += v;
    sum_sq += v * v;
  }
  const auto r = static_cast<double>(reps);
  const double mean = sum / r;
  const double var = (sum_sq - r * mean * mean) / (r - 1);
  return ScalarEstimate{mean, std::sqrt(var / r), reps};
}

PathStat path_statistics(long n_final, std::uint64_t seed) {
  if (n_final < kMinPathLength) {
    throw DomainError("path_statistics: n_final must be at least " + std::to_string(kMinPathLength));
  }
  RandomStream rng(seed);
  ChainState state;
  double sum = 0.0;
  double lil = 0.0;
  for (long k = 1;; ++k) {
    const double u = static_cast<double>(state.d) / k - 0.5;
    const double v = static_cast<double>(state.dp) / k - 0.5;
    const double sq = u * u + v * v;
    sum += sq;
    if (k >= kMinPathLength) {
      lil = std::max(lil, static_cast<double>(k) / (2 * std::log(std::log(static_cast<double>(k)))) * sq);
    }
    if (k == n_final) break;
    state = step(state, rng);
  }
  return PathStat{n_final, sum / std::log(static_cast<double>(n_final)), lil};
}

PathStat qsl_statistic(long n_final, std::uint64_t seed) { return path_statistics(n_final, seed); }
PathStat lil_statistic(long n_final, std::uint64_t seed) { return path_statistics(n_final, seed); }

}  // namespace descentlab
