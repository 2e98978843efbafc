#include "cofree/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cofree/exact_linear.hpp"

namespace cofree {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (int x : images_) {
    if (x < 0 || x >= size() || seen[x]) throw Error("Permutation: not a bijection");
    seen[x] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  return Permutation(std::move(im));
}

Permutation Permutation::adjacent(int n, int i) {
  if (i < 0 || i + 1 >= n) throw Error("Permutation::adjacent: index out of range");
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  std::swap(im[i], im[i + 1]);
  return Permutation(std::move(im));
}

Permutation Permutation::operator*(const Permutation& o) const {
  if (size() != o.size()) throw Error("Permutation product: size mismatch");
  std::vector<int> im(images_.size());
  for (int j = 0; j < size(); ++j) im[j] = images_[o.images_[j]];
  return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
  std::vector<int> im(images_.size());
  for (int j = 0; j < size(); ++j) im[images_[j]] = j;
  return Permutation(std::move(im));
}

bool Permutation::is_identity() const {
  for (int j = 0; j < size(); ++j)
    if (images_[j] != j) return false;
  return true;
}

int Permutation::sign() const {
  int inversions = 0;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (images_[i] > images_[j]) ++inversions;
  return inversions % 2 ? -1 : 1;
}

std::vector<int> Permutation::adjacent_word() const {
  // Bubble sort the image vector; each swap at positions (i, i+1) right-multiplies by s_i.
  std::vector<int> a = images_;
  std::vector<int> word;
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (int i = 0; i + 1 < size(); ++i)
      if (a[i] > a[i + 1]) {
        std::swap(a[i], a[i + 1]);
        word.push_back(i);
        swapped = true;
      }
  }
  // sigma * s_{w1} * ... * s_{wk} = id, so sigma = s_{wk} * ... * s_{w1}.
  std::reverse(word.begin(), word.end());
  return word;
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  os << "(";
  for (int j = 0; j < size(); ++j) os << (j ? "," : "") << images_[j] + 1;
  os << ")";
  return os.str();
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

Permutation block_permutation(const Permutation& sigma, const std::vector<int>& block_sizes) {
  const int k = sigma.size();
  if (static_cast<int>(block_sizes.size()) != k) throw Error("block_permutation: size mismatch");
  // Target start of each block: blocks are laid out in the order of their target slots.
  std::vector<int> by_slot(k);
  for (int j = 0; j < k; ++j) by_slot[sigma(j)] = j;
  std::vector<int> target_start(k);
  int pos = 0;
  for (int s = 0; s < k; ++s) {
    target_start[by_slot[s]] = pos;
    pos += block_sizes[by_slot[s]];
  }
  std::vector<int> im;
  for (int j = 0; j < k; ++j)
    for (int t = 0; t < block_sizes[j]; ++t) im.push_back(target_start[j] + t);
  return Permutation(std::move(im));
}

Permutation direct_sum(const Permutation& a, const Permutation& b) {
  std::vector<int> im = a.images();
  for (int x : b.images()) im.push_back(x + a.size());
  return Permutation(std::move(im));
}

namespace koszul {

int swap_sign(int deg_a, int deg_b) { return ((deg_a * deg_b) % 2 == 0) ? 1 : -1; }

int permutation_sign(const std::vector<int>& degrees, const Permutation& sigma) {
  if (static_cast<int>(degrees.size()) != sigma.size()) throw Error("koszul sign: size mismatch");
  int sign = 1;
  for (int i = 0; i < sigma.size(); ++i) {
    if (degrees[i] % 2 == 0) continue;
    for (int j = i + 1; j < sigma.size(); ++j)
      if (sigma(i) > sigma(j)) sign *= swap_sign(degrees[i], degrees[j]);
  }
  return sign;
}

}  // namespace koszul

}  // namespace cofree
