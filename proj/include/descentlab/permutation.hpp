#pragma once

// Permutations in one-line notation, descent counting, the cell-insertion
// step that grows a size-n permutation into a size-(n+1) one, and
// brute-force oracles over small symmetric groups.
//
// Public indices (positions, values, cell coordinates) are 1-based. Values
// are stored in a 0-indexed vector: values()[i - 1] == p(i).

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "descentlab/random.hpp"

namespace descentlab {

class Permutation {
 public:
  /// Validates that `values` is a rearrangement of 1..n with n >= 1;
  /// throws DomainError otherwise.
  explicit Permutation(std::vector<int> values);

  static Permutation identity(int n);

  int size() const noexcept { return static_cast<int>(values_.size()); }
  /// p(i) for 1 <= i <= n.
  int operator()(int i) const { return values_[static_cast<std::size_t>(i - 1)]; }
  std::span<const int> values() const noexcept { return values_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> values_;
};

/// Grid cell C_n(k, l) = ](k-1)/(n+1), k/(n+1)[ x ](l-1)/(n+1), l/(n+1)[.
struct Cell {
  int k = 1;  // column, 1..n+1
  int l = 1;  // row (fiber), 1..n+1
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Number of cells giving each descent increment pair (a, b) = (dD, dD').
struct IncrementTable {
  std::array<std::array<std::int64_t, 2>, 2> counts{};  // counts[a][b]

  std::int64_t operator()(int a, int b) const { return counts[a][b]; }
  std::int64_t total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
  }
  friend bool operator==(const IncrementTable&, const IncrementTable&) = default;
};

inline constexpr int kMaxEnumerateSize = 10;
inline constexpr int kMaxIncrementTableSize = 9;

/// Card{k in 1..n-1 : p(k) > p(k+1)}.
int descent_count(const Permutation& p);
int descent_count(std::span<const int> values);

Permutation inverse(const Permutation& p);
/// (p(n), ..., p(1)).
Permutation reversed(const Permutation& p);
/// i -> n + 1 - p(i); swaps descents and ascents.
Permutation complement(const Permutation& p);

/// Calls `visit` on every permutation of 1..n exactly once, in lexicographic
/// order. Throws SizeLimitError when n > kMaxEnumerateSize.
void enumerate_all(int n, const std::function<void(const Permutation&)>& visit);
std::vector<Permutation> all_permutations(int n);

/// Fisher-Yates shuffle of the identity driven by `rng`.
Permutation sample_uniform(int n, RandomStream& rng);

/// Cell of [0,1]^2 containing u for ambient size n: k = ceil(u1 (n+1)),
/// l = ceil(u2 (n+1)). Throws DomainError when a coordinate lies on a grid
/// line j/(n+1) or outside ]0,1[.
Cell cell_of(double u1, double u2, int n);

/// Size-(n+1) permutation obtained by inserting value l at position k:
///   i < k:  p(i)     or p(i) + 1     (according as p(i) < l or p(i) >= l)
///   i = k:  l
///   i > k:  p(i-1)   or p(i-1) + 1   (according as p(i-1) < l or p(i-1) >= l)
///
/// Note: applying this rule to (2,3,1,4) with cell (1,4) gives (4,2,3,1,5).
/// Some published figures of the construction show (3,4,2,1,5) for the same
/// input; the rule above is the one implemented and tested.
Permutation insert(const Permutation& p, Cell c);

/// Brute force: inserts into every one of the (n+1)^2 cells and recounts
/// descents of the child and of its inverse. Throws SizeLimitError when
/// n > kMaxIncrementTableSize.
IncrementTable increment_table(const Permutation& p);

/// Same brute force restricted to the fiber l (cells (1..n+1, l)): the number
/// of cells in that row with dD = 1.
int fiber_descent_increments(const Permutation& p, int l);

}  // namespace descentlab
