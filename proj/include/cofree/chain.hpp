#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cofree/exact_linear.hpp"

namespace cofree {

/// Degree -> ordered distinct labels. Degrees with no labels are not stored.
class GradedBasis {
 public:
  GradedBasis() = default;
  explicit GradedBasis(std::map<int, std::vector<std::string>> by_degree);

  const std::map<int, std::vector<std::string>>& by_degree() const { return by_degree_; }
  std::size_t rank(int degree) const;
  const std::vector<std::string>& labels(int degree) const;
  std::vector<int> degrees() const;
  std::size_t total_rank() const;
  std::optional<std::size_t> index_of(int degree, const std::string& label) const;
  bool empty() const { return by_degree_.empty(); }
  bool operator==(const GradedBasis& o) const { return by_degree_ == o.by_degree_; }

 private:
  std::map<int, std::vector<std::string>> by_degree_;
};

/// Bounded complex of free abelian groups. Flat indexing lists degrees ascending,
/// labels in basis order within a degree.
class ChainComplex {
 public:
  ChainComplex() = default;
  /// differential[k] maps degree k to degree k-1 (rows = rank(k-1), cols = rank(k)).
  ChainComplex(GradedBasis basis, std::map<int, IntegerMatrix> differential);
  /// Flat form: d is total_rank x total_rank and must lower degree by one.
  static ChainComplex from_flat(GradedBasis basis, const SparseMatrix& d);

  const GradedBasis& basis() const { return basis_; }
  std::vector<int> degrees() const { return basis_.degrees(); }
  std::size_t rank(int degree) const { return basis_.rank(degree); }
  IntegerMatrix differential(int k) const;
  bool differential_squares_to_zero() const;

  std::size_t total_rank() const { return flat_degree_.size(); }
  std::size_t offset(int degree) const;
  int degree_of(std::size_t flat) const { return flat_degree_[flat]; }
  const std::string& label_of(std::size_t flat) const;
  std::size_t flat_index(int degree, std::size_t local) const { return offset(degree) + local; }
  std::size_t local_index(std::size_t flat) const { return flat - offset(flat_degree_[flat]); }
  std::optional<std::size_t> flat_index_of(int degree, const std::string& label) const;
  const SparseMatrix& flat_differential() const { return flat_d_; }
  const SparseVector& boundary(std::size_t flat) const { return flat_d_.column(flat); }
  int min_degree() const;
  int max_degree() const;

  /// Identical bases and differentials.
  bool operator==(const ChainComplex& o) const;

 private:
  void build_flat();

  GradedBasis basis_;
  std::map<int, IntegerMatrix> d_;
  std::vector<int> flat_degree_;
  std::map<int, std::size_t> offsets_;
  SparseMatrix flat_d_;
};

using ComplexPtr = std::shared_ptr<const ChainComplex>;
ComplexPtr share(ChainComplex c);

/// Sign convention of the Hom differential.
/// Standard: D f = d_B f - (-1)^|f| f d_A.  Precomposed: D f = f d_A - (-1)^|f| d_B f.
/// The two differ by the unit -(-1)^|f| and have the same cycles and boundaries.
enum class HomConvention { Standard, Precomposed };

/// Homogeneous map of degree d between complexes, stored on flat bases.
class ChainMap {
 public:
  ChainMap() = default;
  ChainMap(ComplexPtr source, ComplexPtr target, int degree, SparseMatrix flat);
  /// Components keyed by source degree k: C_k -> D_{k+degree}.
  static ChainMap from_components(ComplexPtr source, ComplexPtr target, int degree,
                                  const std::map<int, IntegerMatrix>& components);
  static ChainMap zero(ComplexPtr source, ComplexPtr target, int degree);
  static ChainMap identity(ComplexPtr c);

  const ComplexPtr& source() const { return source_; }
  const ComplexPtr& target() const { return target_; }
  int degree() const { return degree_; }
  const SparseMatrix& flat() const { return flat_; }
  IntegerMatrix component(int k) const;
  SparseVector apply(const SparseVector& x) const { return flat_.apply(x); }

  /// this o other.
  ChainMap compose(const ChainMap& other) const;
  ChainMap operator+(const ChainMap& o) const;
  ChainMap operator-(const ChainMap& o) const;
  ChainMap scaled(const Integer& k) const;
  bool operator==(const ChainMap& o) const;
  bool operator!=(const ChainMap& o) const { return !(*this == o); }

  /// Hom differential of this map (degree - 1).
  ChainMap hom_boundary(HomConvention convention = HomConvention::Precomposed) const;
  /// d_D f = (-1)^degree f d_C; for degree 0 the usual chain-map condition.
  bool is_chain_map() const;

 private:
  ComplexPtr source_;
  ComplexPtr target_;
  int degree_ = 0;
  SparseMatrix flat_;
};

/// Degree +1 map certifying d Phi + Phi d = f1 - f0.
struct Homotopy {
  ChainMap phi;
  bool certifies(const ChainMap& f0, const ChainMap& f1) const;
};

ChainComplex unit_interval();
/// The unit complex: Z in degree 0 labeled "1".
ChainComplex unit_complex();
ChainComplex zero_complex();

/// Ordered binary tensor product with labels "(a,b)".
struct TensorProduct {
  ChainComplex complex;
  std::size_t left_rank = 0;
  std::size_t right_rank = 0;
  std::vector<std::size_t> pair_to_flat;                        // i * right_rank + j
  std::vector<std::pair<std::size_t, std::size_t>> flat_to_pair;

  std::size_t flat(std::size_t i, std::size_t j) const { return pair_to_flat[i * right_rank + j]; }
};
TensorProduct tensor_product(const ChainComplex& c, const ChainComplex& d);
ChainComplex tensor(const ChainComplex& c, const ChainComplex& d);
/// Koszul tensor of maps: (f (x) g)(a (x) b) = (-1)^(|g||a|) f(a) (x) g(b).
ChainMap tensor(const ChainMap& f, const ChainMap& g, ComplexPtr source, ComplexPtr target);
ChainMap tensor(const ChainMap& f, const ChainMap& g);

/// Mixed-radix code of a tuple of flat indices, first factor most significant.
class TupleCodec {
 public:
  TupleCodec() = default;
  TupleCodec(std::size_t base, int length);
  explicit TupleCodec(std::vector<std::size_t> bases);
  int length() const { return static_cast<int>(bases_.size()); }
  std::size_t count() const { return count_; }
  const std::vector<std::size_t>& bases() const { return bases_; }
  std::size_t encode(const std::vector<std::size_t>& tuple) const;
  std::vector<std::size_t> decode(std::size_t code) const;

 private:
  std::vector<std::size_t> bases_;
  std::size_t count_ = 1;
};

/// Ordered tensor product of a list of complexes. Labels "(a,b,c)" for two or more
/// factors, the factor's labels for one factor, "1" for none.
struct OrderedTensor {
  ChainComplex complex;
  std::vector<ComplexPtr> factors;
  TupleCodec codec;
  std::vector<std::size_t> code_to_flat;
  std::vector<std::size_t> flat_to_code;

  int length() const { return static_cast<int>(factors.size()); }
  std::size_t flat(const std::vector<std::size_t>& tuple) const { return code_to_flat[codec.encode(tuple)]; }
  std::vector<std::size_t> tuple(std::size_t flat) const { return codec.decode(flat_to_code[flat]); }
  /// Degrees of the factors of a basis tuple.
  std::vector<int> factor_degrees(const std::vector<std::size_t>& tuple) const;
};
OrderedTensor ordered_tensor(const std::vector<ComplexPtr>& factors);
OrderedTensor tensor_power(const ComplexPtr& c, int n);

/// Hom(A, B) with elementary maps "[a->b]" as basis.
struct HomComplex {
  ChainComplex complex;
  ComplexPtr source;
  ComplexPtr target;
  HomConvention convention = HomConvention::Precomposed;
  std::vector<std::size_t> pair_to_flat;  // a_flat * rank(B) + b_flat; npos if absent
  std::vector<std::pair<std::size_t, std::size_t>> flat_to_pair;

  /// Coordinates of a homogeneous map in the degree-|f| part, as a flat vector.
  SparseVector element(const ChainMap& f) const;
  /// Homogeneous map of the given degree from flat coordinates.
  ChainMap map(int degree, const SparseVector& element) const;
};
HomComplex hom(const ComplexPtr& a, const ComplexPtr& b, HomConvention convention = HomConvention::Precomposed);
ChainComplex hom_complex(const ChainComplex& a, const ChainComplex& b,
                         HomConvention convention = HomConvention::Precomposed);

/// cone = A (x) I / A (x) p1, labels "(a,p0)" and "(a,q)"; suspension labels "s(a)".
struct ConeData {
  ComplexPtr cone;
  ComplexPtr suspension;
  ChainMap inclusion;   // A -> cone, a -> a (x) p0
  ChainMap projection;  // cone -> suspension, a (x) q -> s(a)
};
ConeData cone_and_suspension(const ComplexPtr& a);
ChainComplex suspension(const ChainComplex& a);

/// Labels prefixed by "0." and "1.".
ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);

/// Cone(f)_n = C_{n-1} + D_n, d(c, e) = (-dc, f(c) + de). Labels "src:..." and "tgt:...".
ChainComplex mapping_cone(const ChainMap& f);

/// f0, f1 from restrictions to C (x) p_i and Phi(c) = (-1)^|c| F(c (x) q).
struct HomotopyTriple {
  ChainMap f0;
  ChainMap f1;
  Homotopy phi;
};
/// F must be a degree-0 chain map with source tensor(C, I) (given by `c`).
HomotopyTriple homotopy_convert(const ChainMap& f, const ComplexPtr& c);
/// Inverse of homotopy_convert; cylinder must be tensor(C, unit_interval()).
ChainMap homotopy_synthesize(const HomotopyTriple& triple, const ComplexPtr& cylinder);

using HomologyTable = std::map<int, HomologyGroup>;
HomologyGroup homology_at(const ChainComplex& c, int degree);
/// Homology in every degree of the support (zero groups included).
HomologyTable homology(const ChainComplex& c);
HomologyTable homology(const ChainComplex& c, int lo, int hi);

struct EquivalenceReport {
  bool equivalent = false;
  int window_lo = 0;
  int window_hi = 0;
  HomologyTable cone_homology;
  std::optional<int> witness_degree;  // first degree whose cone homology is nonzero
};
/// Window is in terms of source/target degrees; defaults to the joint support.
EquivalenceReport is_homology_equivalence(const ChainMap& f, std::optional<std::pair<int, int>> window = {});

}  // namespace cofree
