#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cofree {

/// Permutation of {0..n-1} stored as its image vector: sigma(j) = images[j].
/// Product: (s * t)(j) = s(t(j)).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int n);
  /// Adjacent transposition swapping i and i+1.
  static Permutation adjacent(int n, int i);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int j) const { return images_[j]; }
  const std::vector<int>& images() const { return images_; }

  Permutation operator*(const Permutation& o) const;
  Permutation inverse() const;
  bool is_identity() const;
  int sign() const;
  bool operator==(const Permutation& o) const { return images_ == o.images_; }
  bool operator!=(const Permutation& o) const { return images_ != o.images_; }
  bool operator<(const Permutation& o) const { return images_ < o.images_; }

  /// Word i_1 .. i_k in adjacent transpositions with sigma = s_{i_1} * ... * s_{i_k}.
  std::vector<int> adjacent_word() const;

  /// One-based sequence "(2,1,3)".
  std::string to_string() const;

 private:
  std::vector<int> images_;
};

/// All permutations of n letters in lexicographic order of image vectors.
std::vector<Permutation> all_permutations(int n);

/// Block permutation: sigma acts on blocks of the given sizes (block j moves to slot sigma(j)),
/// preserving order inside blocks.
Permutation block_permutation(const Permutation& sigma, const std::vector<int>& block_sizes);

/// Direct sum: a on the first a.size() letters, b on the rest.
Permutation direct_sum(const Permutation& a, const Permutation& b);

namespace koszul {

/// (-1)^(a*b).
int swap_sign(int deg_a, int deg_b);

/// Sign picked up when graded symbols of the given degrees (in source order) are
/// moved so that the symbol at position j lands at position sigma(j).
int permutation_sign(const std::vector<int>& degrees, const Permutation& sigma);

}  // namespace koszul

}  // namespace cofree
