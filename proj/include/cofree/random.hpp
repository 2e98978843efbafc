#pragma once

#include <random>

#include "cofree/chain.hpp"

namespace cofree {

using Rng = std::mt19937_64;

struct RandomComplexParams {
  int min_degree = 0;
  int degree_span = 4;       // number of consecutive degrees
  int max_rank = 4;          // per degree
  int max_total_rank = 0;    // 0: no cap
  int min_total_rank = 0;    // redraw below this
  int entry_bound = 3;
  std::string prefix = "x";  // labels "<prefix><degree>_<i>", distinct across degrees
};

int uniform_int(Rng& rng, int lo, int hi);

/// Random bounded complex. Each d_k is (kernel basis of d_{k-1}) * (random matrix), so d^2 = 0.
ChainComplex random_complex(Rng& rng, const RandomComplexParams& params);

/// Random homogeneous map of the given degree, entries in [-bound, bound].
ChainMap random_map(Rng& rng, const ComplexPtr& source, const ComplexPtr& target, int degree, int bound = 2);

/// Random degree-0 chain map: a random combination of a basis of degree-0 Hom cycles.
ChainMap random_chain_map(Rng& rng, const ComplexPtr& source, const ComplexPtr& target, int bound = 2);

/// Random integer matrix with entries in [-bound, bound].
IntegerMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int bound);

}  // namespace cofree
