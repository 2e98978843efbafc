#include "cofree/random.hpp"

namespace cofree {

int uniform_int(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  return dist(rng);
}

IntegerMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int bound) {
  IntegerMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform_int(rng, -bound, bound);
  return m;
}

namespace {

ChainComplex draw_complex(Rng& rng, const RandomComplexParams& params) {
  const int span = uniform_int(rng, 1, std::max(1, params.degree_span));
  std::vector<int> ranks(span);
  int total = 0;
  for (int k = 0; k < span; ++k) {
    int r = uniform_int(rng, 0, params.max_rank);
    if (params.max_total_rank > 0) r = std::min(r, params.max_total_rank - total);
    ranks[k] = r;
    total += r;
  }
  std::map<int, std::vector<std::string>> labels;
  for (int k = 0; k < span; ++k)
    for (int i = 0; i < ranks[k]; ++i)
      labels[params.min_degree + k].push_back(params.prefix + std::to_string(params.min_degree + k) + "_" +
                                             std::to_string(i));

  std::map<int, IntegerMatrix> diff;
  IntegerMatrix previous;  // d_{k-1}
  for (int k = 0; k < span; ++k) {
    int deg = params.min_degree + k;
    if (k == 0) {
      previous = IntegerMatrix(0, ranks[0]);
      continue;
    }
    // Columns of d_k must lie in ker d_{k-1}; redraw while an entry leaves the bound, then fall
    // back to unit mixing coefficients.
    IntegerMatrix kernel = kernel_basis(previous);
    IntegerMatrix dk;
    for (int attempt = 0;; ++attempt) {
      const int mix_bound = attempt < 8 ? params.entry_bound : 1;
      dk = kernel * random_matrix(rng, kernel.cols(), ranks[k], mix_bound);
      bool small = true;
      for (std::size_t i = 0; i < dk.rows() && small; ++i)
        for (std::size_t j = 0; j < dk.cols() && small; ++j)
          small = dk(i, j) <= params.entry_bound && dk(i, j) >= -params.entry_bound;
      if (small) break;
      if (attempt >= 8) {
        dk = IntegerMatrix(kernel.rows(), ranks[k]);
        break;
      }
    }
    diff.emplace(deg, dk);
    previous = dk;
  }
  return ChainComplex(GradedBasis(std::move(labels)), std::move(diff));
}

}  // namespace

ChainComplex random_complex(Rng& rng, const RandomComplexParams& params) {
  if (params.max_total_rank > 0 && params.min_total_rank > params.max_total_rank)
    throw Error("random_complex: min_total_rank exceeds max_total_rank");
  if (params.min_total_rank > params.max_rank * std::max(1, params.degree_span))
    throw Error("random_complex: min_total_rank is out of reach");
  for (;;) {
    ChainComplex c = draw_complex(rng, params);
    if (static_cast<int>(c.total_rank()) >= params.min_total_rank) return c;
  }
}

ChainMap random_map(Rng& rng, const ComplexPtr& source, const ComplexPtr& target, int degree, int bound) {
  SparseMatrix flat(target->total_rank(), source->total_rank());
  for (std::size_t j = 0; j < source->total_rank(); ++j) {
    int deg = source->degree_of(j) + degree;
    std::size_t off = target->offset(deg);
    for (std::size_t i = 0; i < target->rank(deg); ++i) flat.add_entry(off + i, j, uniform_int(rng, -bound, bound));
  }
  return ChainMap(source, target, degree, std::move(flat));
}

ChainMap random_chain_map(Rng& rng, const ComplexPtr& source, const ComplexPtr& target, int bound) {
  HomComplex h = hom(source, target, HomConvention::Standard);
  IntegerMatrix cycles = kernel_basis(h.complex.differential(0));
  SparseVector element;
  std::size_t off = h.complex.offset(0);
  for (std::size_t c = 0; c < cycles.cols(); ++c) {
    int coeff = uniform_int(rng, -bound, bound);
    for (std::size_t i = 0; i < cycles.rows(); ++i) add_entry(element, off + i, cycles(i, c) * coeff);
  }
  return h.map(0, element);
}

}  // namespace cofree
