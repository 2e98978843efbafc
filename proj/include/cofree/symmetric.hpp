#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cofree/chain.hpp"
#include "cofree/permutation.hpp"

namespace cofree {

/// Finite set of labels kept in lexicographic order.
class FiniteSetObj {
 public:
  FiniteSetObj() = default;
  explicit FiniteSetObj(std::vector<std::string> labels);
  /// {"1", ..., "n"}.
  static FiniteSetObj standard(int n);

  const std::vector<std::string>& labels() const { return labels_; }
  int size() const { return static_cast<int>(labels_.size()); }
  bool contains(const std::string& label) const;
  /// Position in canonical order; throws if absent.
  int position(const std::string& label) const;
  bool operator==(const FiniteSetObj& o) const { return labels_ == o.labels_; }

 private:
  std::vector<std::string> labels_;
};

/// (X \ {x}) u Y. Labels of Y clashing with X \ {x} get the suffix "#k", k the least free counter.
FiniteSetObj graft(const FiniteSetObj& x_set, const std::string& x, const FiniteSetObj& y_set);

/// Chain complex with a left S_n-action by degree-0 chain automorphisms.
/// Generator i acts as the adjacent transposition (i, i+1).
class SymmetricComplex {
 public:
  SymmetricComplex() = default;
  SymmetricComplex(ComplexPtr complex, int arity, std::vector<SparseMatrix> generators);
  /// Trivial action.
  static SymmetricComplex trivial(ComplexPtr complex, int arity);

  const ComplexPtr& complex() const { return complex_; }
  int arity() const { return arity_; }
  const std::vector<SparseMatrix>& generators() const { return generators_; }
  const SparseMatrix& generator(int i) const { return generators_.at(i); }
  /// Block of generator i in one degree.
  IntegerMatrix generator_block(int i, int degree) const;

  SparseMatrix action(const Permutation& sigma) const;
  SparseVector apply(const Permutation& sigma, const SparseVector& x) const;

  /// Empty when the generators commute with d, square to 1 and satisfy the braid relations.
  std::vector<std::string> check() const;
  /// Every generator column has a single entry +-1.
  bool is_signed_permutation() const;

 private:
  ComplexPtr complex_;
  int arity_ = 0;
  std::vector<SparseMatrix> generators_;
};

/// Action of a permutation on a tensor basis tuple: factor j moves to slot sigma(j),
/// sign from the Koszul rule. Returns the permuted tuple and the sign.
std::pair<std::vector<std::size_t>, int> permute_tuple(const std::vector<std::size_t>& tuple,
                                                       const std::vector<int>& degrees, const Permutation& sigma);

/// C^n with the signed permutation action.
struct SymmetricPower {
  OrderedTensor power;
  SymmetricComplex symmetric;
};
SymmetricPower symmetric_power(const ComplexPtr& c, int n);

/// Ordered tensor over a finite set in canonical label order.
struct UnorderedTensor {
  FiniteSetObj set;
  OrderedTensor tensor;
  ComplexPtr carrier;

  /// Coherence isomorphism for a bijection of the index set. Only bijections
  /// matching equal factors are automorphisms of the carrier.
  SparseMatrix coherence(const std::map<std::string, std::string>& sigma) const;
};
UnorderedTensor unordered_tensor(const FiniteSetObj& x, const std::map<std::string, ComplexPtr>& assignment);
/// C^X with all factors equal, as a symmetric complex of arity |X|.
SymmetricComplex unordered_power(const FiniteSetObj& x, const ComplexPtr& c);
/// Degree-0 automorphism of T for a bijection of its index set.
ChainMap signed_permutation_action(const std::map<std::string, std::string>& sigma, const UnorderedTensor& t);
/// Canonical isomorphism C^X (x) C^Y -> C^{X u Y} for disjoint X, Y.
ChainMap concatenation_iso(const UnorderedTensor& tx, const UnorderedTensor& ty, const UnorderedTensor& txy);

/// Finitely generated ZS_n-module: free with generators in given degrees, optionally cut down
/// by an equivariant idempotent of the free module.
struct GroupRingModule {
  int arity = 1;
  std::vector<int> generator_degrees;
  std::optional<SparseMatrix> idempotent;

  /// Zero differential; free basis labels "g<j>(perm)".
  SymmetricComplex to_symmetric() const;
};
/// Regular representation of S_n in degree 0 (rank one free).
SymmetricComplex regular_representation(int n);

/// Hom_{ZS_n}(M, T) with a basis of equivariant maps. For each basis map the values on the
/// test points of M determine its coordinates through the functionals.
struct EquivariantHom {
  ComplexPtr complex;
  ComplexPtr source;
  ComplexPtr target;
  bool free_path = false;
  /// maps[i]: target x source flat matrix of basis map i (flat order of `complex`).
  std::vector<SparseMatrix> maps;
  /// Source flat indices whose values determine a map.
  std::vector<std::size_t> test_points;
  /// Key (test point position * rank(target) + target flat) -> list of (basis index, coefficient).
  std::map<std::size_t, std::vector<std::pair<std::size_t, Integer>>> functionals;

  /// Coordinates of an equivariant map given by its values on the test points.
  SparseVector coordinates(const std::vector<SparseVector>& values_at_test_points) const;
  /// Value of basis map i on a source element.
  SparseVector evaluate(std::size_t i, const SparseVector& m) const { return maps[i].apply(m); }
  /// Embedding into Hom(M, T) as a flat matrix; `ambient` must be hom(source, target).
  SparseMatrix inclusion(const HomComplex& ambient) const;
};

enum class SolverPath { Automatic, General };
EquivariantHom equivariant_hom(const SymmetricComplex& m, const SymmetricComplex& t,
                               SolverPath path = SolverPath::Automatic);
EquivariantHom equivariant_hom(const GroupRingModule& m, const SymmetricComplex& t);

/// Free presentation of a signed-permutation module: orbit generators and, for every basis
/// element b, (generator index, sigma, sign) with sigma . g = sign * b.
struct FreePresentation {
  std::vector<std::size_t> generators;
  struct Entry {
    std::size_t orbit;
    Permutation sigma;
    int sign;
  };
  std::vector<Entry> entries;
};
std::optional<FreePresentation> free_presentation(const SymmetricComplex& m);

/// Projectivity per degree by the averaging criterion: some t with sum_g g t g^-1 = 1.
struct ProjectivityReport {
  bool projective = true;
  bool free = false;
  std::optional<int> failing_degree;
};
ProjectivityReport check_projective(const SymmetricComplex& m);

}  // namespace cofree
