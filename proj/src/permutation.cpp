#include "descentlab/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "descentlab/error.hpp"

namespace descentlab {

Permutation::Permutation(std::vector<int> values) : values_(std::move(values)) {
  const int n = size();
  if (n < 1) throw DomainError("permutation: size must be at least 1");
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int v : values_) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) {
      throw DomainError("permutation: entries must be exactly 1.." + std::to_string(n));
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(std::max(n, 0)));
  std::iota(v.begin(), v.end(), 1);
  return Permutation(std::move(v));
}

int descent_count(std::span<const int> values) {
  int d = 0;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (values[k] > values[k + 1]) ++d;
  }
  return d;
}

int descent_count(const Permutation& p) { return descent_count(p.values()); }

Permutation inverse(const Permutation& p) {
  std::vector<int> q(static_cast<std::size_t>(p.size()));
  for (int i = 1; i <= p.size(); ++i) q[static_cast<std::size_t>(p(i) - 1)] = i;
  return Permutation(std::move(q));
}

Permutation reversed(const Permutation& p) {
  std::vector<int> v(p.values().rbegin(), p.values().rend());
  return Permutation(std::move(v));
}

Permutation complement(const Permutation& p) {
  std::vector<int> v(p.values().begin(), p.values().end());
  for (int& x : v) x = p.size() + 1 - x;
  return Permutation(std::move(v));
}

void enumerate_all(int n, const std::function<void(const Permutation&)>& visit) {
  if (n < 1) throw DomainError("enumerate_all: n must be at least 1");
  if (n > kMaxEnumerateSize) throw SizeLimitError("enumerate_all", n, kMaxEnumerateSize);
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  do {
    visit(Permutation(v));
  } while (std::next_permutation(v.begin(), v.end()));
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  enumerate_all(n, [&](const Permutation& p) { out.push_back(p); });
  return out;
}

Permutation sample_uniform(int n, RandomStream& rng) {
  if (n < 1) throw DomainError("sample_uniform: n must be at least 1");
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  for (std::size_t i = v.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(v[i], v[j]);
  }
  return Permutation(std::move(v));
}

namespace {

int cell_index(double u, int n, const char* axis) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError(std::string("cell_of: coordinate ") + axis + " must lie in ]0,1[");
  }
  const double scaled = u * (n + 1);
  if (scaled == std::floor(scaled)) {
    throw DomainError(std::string("cell_of: coordinate ") + axis + " lies on a cell boundary");
  }
  return static_cast<int>(std::ceil(scaled));
}

}  // namespace

Cell cell_of(double u1, double u2, int n) {
  if (n < 1) throw DomainError("cell_of: n must be at least 1");
  return Cell{cell_index(u1, n, "u1"), cell_index(u2, n, "u2")};
}

Permutation insert(const Permutation& p, Cell c) {
  const int n = p.size();
  if (c.k < 1 || c.k > n + 1 || c.l < 1 || c.l > n + 1) {
    throw DomainError("insert: cell outside 1..n+1");
  }
  std::vector<int> out(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n + 1; ++i) {
    int value;
    if (i == c.k) {
      value = c.l;
    } else {
      const int source = i < c.k ? p(i) : p(i - 1);
      value = source < c.l ? source : source + 1;
    }
    out[static_cast<std::size_t>(i - 1)] = value;
  }
  return Permutation(std::move(out));
}

IncrementTable increment_table(const Permutation& p) {
  const int n = p.size();
  if (n > kMaxIncrementTableSize) {
    throw SizeLimitError("increment_table", n, kMaxIncrementTableSize);
  }
  const int d = descent_count(p);
  const int dp = descent_count(inverse(p));
  IncrementTable table;
  for (int k = 1; k <= n + 1; ++k) {
    for (int l = 1; l <= n + 1; ++l) {
      const Permutation child = insert(p, Cell{k, l});
      const int a = descent_count(child) - d;
      const int b = descent_count(inverse(child)) - dp;
      if (a < 0 || a > 1 || b < 0 || b > 1) {
        throw std::logic_error("increment_table: insertion changed a descent count by more than one");
      }
      ++table.counts[a][b];
    }
  }
  return table;
}

int fiber_descent_increments(const Permutation& p, int l) {
  const int n = p.size();
  if (l < 1 || l > n + 1) throw DomainError("fiber_descent_increments: row outside 1..n+1");
  const int d = descent_count(p);
  int count = 0;
  for (int k = 1; k <= n + 1; ++k) {
    if (descent_count(insert(p, Cell{k, l})) - d == 1) ++count;
  }
  return count;
}

}  // namespace descentlab
