#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cofree/symmetric.hpp"

namespace cofree {

/// Raised when a composition would land beyond the arity bound.
class TruncationOverflow : public Error {
 public:
  using Error::Error;
};

/// Key (m, slot, n) of the table for O(m) (x) O(n) -> O(m+n-1), slot one-based.
struct CompositionKey {
  int m = 0;
  int slot = 1;
  int n = 0;
  auto operator<=>(const CompositionKey&) const = default;
};

/// Structure constants: entry a * rank(O(n)) + b is the composite of basis elements a and b.
using CompositionTable = std::vector<SparseVector>;

/// Operad truncated at arity N. Inputs of a composite a o_i b are ordered by block insertion:
/// inputs of a before i, then the n inputs of b, then the rest of a.
struct FreeOperadData;

class TruncatedOperad {
 public:
  TruncatedOperad(int arity_bound, bool unital, std::map<int, SymmetricComplex> components, SparseVector unit,
                  std::map<CompositionKey, CompositionTable> tables, std::string name = "");

  int arity_bound() const { return n_; }
  bool unital() const { return unital_; }
  /// 0 when unital, 1 otherwise.
  int k_flag() const { return unital_ ? 0 : 1; }
  int min_arity() const { return unital_ ? 0 : 1; }
  const std::string& name() const { return name_; }

  const SymmetricComplex& component(int arity) const;
  const ChainComplex& complex(int arity) const { return *component(arity).complex(); }
  std::size_t rank(int arity) const { return complex(arity).total_rank(); }
  int degree_of(int arity, std::size_t flat) const { return complex(arity).degree_of(flat); }
  const SparseVector& unit() const { return unit_; }

  /// Whether O(m) o_slot O(n) stays within the bound.
  bool composable(int m, int slot, int n) const;
  const SparseVector& compose_basis(int m, std::size_t a, int slot, int n, std::size_t b) const;
  SparseVector compose(int m, const SparseVector& a, int slot, int n, const SparseVector& b) const;
  SparseVector act(int arity, const Permutation& sigma, const SparseVector& a) const {
    return component(arity).apply(sigma, a);
  }
  SparseVector boundary(int arity, const SparseVector& a) const {
    return complex(arity).flat_differential().apply(a);
  }

  const std::map<CompositionKey, CompositionTable>& tables() const { return tables_; }
  /// Tree bases when built by free_operad, else null.
  const std::shared_ptr<const FreeOperadData>& free_data() const { return free_data_; }
  void attach_free_data(std::shared_ptr<const FreeOperadData> data) { free_data_ = std::move(data); }
  /// Copy with one structure constant negated (fault injection).
  TruncatedOperad with_flipped_entry(const CompositionKey& key, std::size_t a, std::size_t b) const;

 private:
  int n_ = 0;
  bool unital_ = false;
  std::map<int, SymmetricComplex> components_;
  SparseVector unit_;
  std::map<CompositionKey, CompositionTable> tables_;
  std::string name_;
  std::shared_ptr<const FreeOperadData> free_data_;
};

using OperadPtr = std::shared_ptr<const TruncatedOperad>;

/// sigma o_i tau in S_{m+n-1} for the block insertion order; slot one-based.
Permutation partial_composite(const Permutation& sigma, int slot, const Permutation& tau);

struct AxiomViolation {
  std::string law;
  std::string witness;
};

struct AxiomReport {
  std::size_t checks = 0;
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Exhaustive check on basis elements up to arity `bound` (default: the operad's bound).
/// Equivariance is tested on adjacent transpositions of either factor, which generate.
AxiomReport check_operad_axioms(const TruncatedOperad& o, std::optional<int> bound = {},
                                std::size_t max_violations = 16);

/// Per-arity degree-0 maps (target flat x source flat).
struct OperadMorphism {
  OperadPtr source;
  OperadPtr target;
  std::map<int, SparseMatrix> maps;

  SparseVector apply(int arity, const SparseVector& x) const { return maps.at(arity).apply(x); }
  /// Degree preservation, chain maps, equivariance, units and compositions.
  AxiomReport check(std::size_t max_violations = 16) const;
};

/// Symmetric group rings: basis of arity n is S_n written as sequences "(2,1,3)",
/// sigma . a = sigma * a, and a o_i b substitutes the shifted sequence of b for the entry i of a.
OperadPtr s0_operad(int arity_bound, bool unital = false);
/// Z in every arity, trivial action.
OperadPtr com_operad(int arity_bound, bool unital = false);
/// Aritywise tensor product with diagonal action;
/// (a (x) a') o (b (x) b') = (-1)^(|a'||b|) (a o b) (x) (a' o b').
OperadPtr tensor_operads(const OperadPtr& u, const OperadPtr& v);

/// CoEnd(C) with elementary maps of Hom(C, C^n) as basis of arity n.
/// f o_i g = (-1)^(|f||g|) (1 (x) g (x) 1) f, action sigma . f = sigma_bar f.
struct CoEndOperad {
  OperadPtr operad;
  ComplexPtr carrier;
  std::map<int, OrderedTensor> powers;
  /// Per arity: flat -> (carrier flat, power flat).
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> elementary;
  /// Per arity: carrier flat * rank(power) + power flat -> flat, or npos when excluded.
  std::map<int, std::vector<std::size_t>> index;

  /// Coordinates of a map C -> C^n (power flat x carrier flat); throws if it leaves the component.
  SparseVector element(int arity, const SparseMatrix& map) const;
  SparseMatrix map(int arity, const SparseVector& element) const;
};

/// Relative case: each preserved entry lists carrier labels spanning a subcomplex D_j and
/// component n keeps the maps with f(D_j) inside D_j^n. Unital adds arity 0 = Hom(C, Z).
CoEndOperad coend_operad(const ComplexPtr& c, int arity_bound,
                         const std::vector<std::vector<std::string>>& preserved = {}, bool unital = false);

/// Degree-0 map I -> I^n of the monotone lattice path that walks the coordinates in the
/// order sigma(0), sigma(1), ... (target flat of tensor_power(I, n) x flat of I).
SparseMatrix interval_path(const Permutation& sigma);

struct IntervalCoendReport {
  int n = 0;
  std::size_t path_count = 0;
  /// Rank of the degree-0 cycles of the relative component (endpoint-preserving chain maps).
  std::size_t chain_map_rank = 0;
  std::size_t path_span_rank = 0;
  bool paths_independent = false;
  /// Paths span a saturated lattice equal to the degree-0 cycles.
  bool paths_span_chain_maps = false;
  std::map<int, std::size_t> cycle_ranks;
  /// Rank of the cycles after restriction to the endpoints p0, p1.
  std::map<int, std::size_t> endpoint_visible_ranks;
  /// The action permutes the paths freely and transitively.
  bool free_transitive = false;
  std::vector<Permutation> orders;
  /// Paths in the flat basis of the relative component of arity n.
  std::vector<SparseVector> paths;
  CoEndOperad coend;
};
IntervalCoendReport interval_coend(int n);

/// Generator of a free operad: spans a free S_arity-orbit in the given degree, zero differential.
struct FreeGenerator {
  std::string name;
  int arity = 2;
  int degree = 0;
};

/// Planar tree with generator vertices; leaves carry one-based input labels.
struct OperadTree {
  int generator = -1;  // -1 for a leaf
  int leaf = 0;
  std::vector<OperadTree> children;

  bool is_leaf() const { return generator < 0; }
  int arity() const;
  int degree(const std::vector<FreeGenerator>& gens) const;
  /// Leaf labels in planar order.
  std::vector<int> leaf_sequence() const;
  /// "m(1,m(2,3))"; a bare leaf prints as "id".
  std::string to_string(const std::vector<FreeGenerator>& gens) const;
};

struct FreeOperadData {
  std::vector<FreeGenerator> generators;
  std::map<int, std::vector<OperadTree>> trees;  // per arity, in flat order
};

struct FreeOperad {
  OperadPtr operad;
  std::shared_ptr<const FreeOperadData> data;
  /// Flat index of the generator g with identity labeling.
  std::size_t generator_index(std::size_t g) const;
};
/// Non-unital; generator arities must be at least 2.
FreeOperad free_operad(const std::vector<FreeGenerator>& generators, int arity_bound);

/// Homogeneous saturated sub-lattices per arity and degree (flat coordinates).
struct OperadIdeal {
  OperadPtr parent;
  std::map<int, std::vector<SparseVector>> basis;

  std::size_t rank(int arity) const;
  bool contains(int arity, const SparseVector& x) const;
};

struct IdealQuotient {
  OperadIdeal ideal;
  OperadPtr quotient;
  OperadMorphism projection;
};
/// Closure of the generators under d, the actions and compositions with arbitrary elements,
/// iterated to a fixed point; generators must lie in arities 2..N.
IdealQuotient ideal_and_quotient(const OperadPtr& h, const std::vector<std::pair<int, SparseVector>>& generators);

/// Operand of a generalized composition; nullopt stands for a bullet (unit insertion).
using CompositionOperand = std::optional<std::pair<int, SparseVector>>;
/// Left-to-right iterated composition of the root with one operand per input.
SparseVector generalized_composition(const TruncatedOperad& o, int root_arity, const SparseVector& root,
                                     const std::vector<CompositionOperand>& operands);
/// Arity of the result of generalized_composition.
int generalized_arity(const TruncatedOperad& o, int root_arity, const std::vector<CompositionOperand>& operands);

/// Diagonal O -> O (x) S0 together with the projection O (x) S0 -> O.
struct SigmaDiagonal {
  OperadPtr tensor;
  OperadMorphism delta;
  OperadMorphism projection;
  /// Per arity and tensor flat index: (O flat, S0 flat).
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> pairs;

  /// projection o delta is the identity in every arity.
  bool triangle_commutes() const;
};
/// Defined for free operads (a tree goes to itself tensor its planar leaf sequence) and for
/// S0 (the group diagonal); throws for anything else.
SigmaDiagonal sigma_diagonal(const OperadPtr& o);

}  // namespace cofree
