#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cofree/operad.hpp"
#include "cofree/random.hpp"

namespace cofree {

/// Elements of carrier^(x)n are sparse vectors over TupleCodec(rank, n) codes.
namespace tensor_codes {
int degree(const ChainComplex& c, const TupleCodec& codec, std::size_t code);
/// Leibniz differential on C^(x)n.
SparseVector boundary(const ChainComplex& c, int n, const SparseVector& x);
/// sigma_bar on C^(x)n: factor j moves to slot sigma(j) with the Koszul sign.
SparseVector permute(const ChainComplex& c, const Permutation& sigma, const SparseVector& x);
/// (1^(slot-1) (x) g (x) 1) x, slot one-based; g maps carrier flat to codes of arity k and has degree g_degree.
SparseVector insert(const ChainComplex& c, int m, int slot, const SparseMatrix& g, int g_degree, int k,
                    const SparseVector& x);
/// f^(x)n for a degree-0 map f (target flat x source flat).
SparseVector power_map(const SparseMatrix& f, std::size_t source_rank, std::size_t target_rank, int n,
                       const SparseVector& x);
/// Codes of c1 (x) ... (x) ck for elements given on the flat basis.
SparseVector product(std::size_t rank, const std::vector<SparseVector>& factors);
}  // namespace tensor_codes

/// Coalgebra over a truncated operad V: for every arity n and basis element v of V(n) the map
/// alpha(v): carrier -> carrier^(x)n of degree |v| (rows are codes, columns carrier flat).
/// Compatibility: alpha(dv) = D alpha(v) (standard Hom differential), alpha(sigma v) = sigma_bar alpha(v),
/// alpha(v o_i w) = (-1)^(|v||w|) (1 (x) alpha(w) (x) 1) alpha(v), alpha(unit) = identity.
struct OperadCoalgebra {
  OperadPtr operad;
  ComplexPtr carrier;
  std::map<int, std::vector<SparseMatrix>> structure;
  /// Arity of each carrier basis element of a truncated cofree coalgebra, else empty. Its structure
  /// maps drop tensor components of total arity above the bound, so morphisms into it are compared
  /// on the components of total arity at most the bound.
  std::vector<int> weights;

  TupleCodec codec(int n) const { return TupleCodec(carrier->total_rank(), n); }
  /// alpha(v)(x) for an element v of V(n) and an element x of the carrier.
  SparseVector apply(int n, const SparseVector& v, const SparseVector& x) const;
};

AxiomReport validate_coalgebra(const OperadCoalgebra& x, std::size_t max_violations = 16);
/// g: X -> Y of degree 0, a chain map commuting with every structure map (within the truncation of Y).
bool is_coalgebra_morphism(const OperadCoalgebra& x, const OperadCoalgebra& y, const ChainMap& g);
/// Identity on the unit, zero in every other arity; V must be non-unital.
OperadCoalgebra trivial_coalgebra(const OperadPtr& v, const ComplexPtr& c);
/// Structure carried along a degree-0 isomorphism iso: X -> C with inverse.
OperadCoalgebra transport(const OperadCoalgebra& x, const ChainMap& iso, const ChainMap& inverse);

enum class CofreeVariant { General, Pointed };

/// Sum over the arities of Hom_{S_n}(V(n), C^n); the pointed variant includes arity 0 = Z.
/// Labels "<n>:<factor label>"; flat order by degree, then arity.
struct CofreeCarrier {
  OperadPtr operad;
  ComplexPtr base;
  CofreeVariant variant = CofreeVariant::General;
  std::map<int, OrderedTensor> powers;
  std::map<int, EquivariantHom> factors;
  ComplexPtr complex;
  /// Flat -> (arity, factor flat).
  std::vector<std::pair<int, std::size_t>> summand_of;
  /// Per arity: factor flat -> flat.
  std::map<int, std::vector<std::size_t>> flat_of;

  int min_arity() const { return variant == CofreeVariant::Pointed ? 0 : 1; }
  /// Carrier element of the arity-n map with the given values (power flat) on the test points.
  SparseVector element(int n, const std::vector<SparseVector>& values) const;
};
/// No projectivity requirement; the general solver path is used for every factor.
CofreeCarrier cofree_carrier(const OperadPtr& v, const ComplexPtr& c, CofreeVariant variant = CofreeVariant::General,
                             SolverPath path = SolverPath::General);

struct TruncatedCofree {
  CofreeCarrier carrier;
  OperadCoalgebra coalgebra;
  /// Onto the cogenerators: phi in the arity-1 factor goes to phi(unit).
  ChainMap epsilon;
  std::optional<std::size_t> basepoint;
};
/// V(n) must be projective in each degree for 1 <= n <= N (rejected with the failing arity) and V(1) = Z.
/// General needs a non-unital V, Pointed a unital one with V(0) = Z.
TruncatedCofree truncated_cofree(const OperadPtr& v, const ComplexPtr& c,
                                 CofreeVariant variant = CofreeVariant::General);

struct ClassifyingMap {
  ChainMap map;
  bool triangle = false;   // epsilon o map = f
  bool morphism = false;   // commutes with the structure maps
  bool unique = false;     // the defining linear system has exactly this solution
  std::size_t system_rank = 0;
};
/// f: carrier(D) -> C of degree 0; t must be the truncated cofree over D's operad cogenerated by C.
ClassifyingMap classifying_map(const OperadCoalgebra& d, const ChainMap& f, const TruncatedCofree& t,
                               bool check_uniqueness = true);
ClassifyingMap classifying_map(const OperadCoalgebra& d, const ChainMap& f);

/// W f: T(C) -> T(C') for a degree-0 chain map f; both carriers over the same operad and variant.
ChainMap induced_map(const CofreeCarrier& source, const CofreeCarrier& target, const ChainMap& f);
/// psi -> psi o phi_n, from the carrier over phi.target to the carrier over phi.source.
ChainMap pullback_map(const OperadMorphism& phi, const CofreeCarrier& source, const CofreeCarrier& target);

/// v o (*, ..., *) as a multiple of the arity-0 generator; V unital with V(0) = Z.
Integer augmentation(const TruncatedOperad& v, int arity, std::size_t basis);
/// alpha(v)(c) = augmentation(v) c^(x)n for every basis element v, arity 0 included.
bool is_group_like(const OperadCoalgebra& x, const SparseVector& c);
/// Nonzero combinations with coefficients in [-box, box] of the supplied degree-0 vectors that are
/// group-like; throws when more than max_candidates combinations would be tested.
std::vector<SparseVector> group_like_elements(const OperadCoalgebra& x, const std::vector<SparseVector>& lattice_basis,
                                              int box = 3, std::size_t max_candidates = 2'000'000);
/// D (a direct summand given by a basis) is a coideal when alpha(v)(D) dies in (C/D)^(x)n for n >= 1.
bool is_coideal(const OperadCoalgebra& x, const std::vector<SparseVector>& summand);
/// alpha(v)(D) lies in D^(x)n for n >= 1.
bool is_subcoalgebra(const OperadCoalgebra& x, const std::vector<SparseVector>& summand);
/// x lies in D^(x)n, D saturated with projection p onto a complement: every single-slot
/// projection 1 (x) .. (x) p (x) .. (x) 1 kills x.
bool in_tensor_power(const IntegerMatrix& p, std::size_t rank, int n, const SparseVector& x);

struct IdealKernel {
  TruncatedCofree cofree;          // over H
  IdealQuotient quotient;
  CofreeCarrier quotient_carrier;  // over H/I, general solver
  /// Homogeneous saturated basis of K in the flat coordinates of the carrier over H.
  std::vector<SparseVector> kernel;
  ComplexPtr kernel_complex;
  ChainMap kernel_inclusion;       // K -> T_H
  ChainMap pullback;               // T_{H/I} -> T_H
  bool closed = false;             // alpha(v)(K) inside K^(x)n
  bool annihilated = false;        // alpha(v)(K) = 0 for v in I
  bool pullback_onto_kernel = false;
  bool homology_matches = false;   // rank and torsion per degree
  bool ranks_match = false;
};
/// I given by generators (closed to an ideal first).
IdealKernel ideal_kernel(const OperadPtr& h, const std::vector<std::pair<int, SparseVector>>& generators,
                         const ComplexPtr& c);
/// I given by its basis; throws when it is not closed under the ideal operations.
IdealKernel ideal_kernel(const OperadIdeal& ideal, const ComplexPtr& c);

struct CylinderCoalgebra {
  OperadCoalgebra coalgebra;  // carrier X (x) I
  TensorProduct tensor;
  ChainMap end0;              // x -> x (x) p0
  ChainMap end1;
  /// Restrictions to X (x) p0 and X (x) p1 equal the structure of X.
  bool restrictions_match = false;
};
CylinderCoalgebra cylinder_coalgebra(const OperadCoalgebra& x, const SigmaDiagonal& delta);
/// Uses the canonical diagonal; throws when the operad has none.
CylinderCoalgebra cylinder_coalgebra(const OperadCoalgebra& x);

struct HomotopyLift {
  TruncatedCofree source;     // T(C)
  TruncatedCofree target;     // T(D)
  CylinderCoalgebra cylinder; // T(C) (x) I
  ChainMap lift;              // T(C) (x) I -> T(D)
  ChainMap end0, end1;
  ChainMap induced0, induced1;
  bool ends_match = false;
};
/// f: C (x) I -> D a degree-0 chain map with source tensor(C, I).
HomotopyLift cofree_homotopy_lift(const OperadPtr& v, const ChainMap& f, const ComplexPtr& c,
                                  CofreeVariant variant = CofreeVariant::General);
/// alpha_D o F = F' o (alpha_C (x) 1), for F a coalgebra morphism cylinder(C) -> D and the lift of F.
bool lift_square_commutes(const HomotopyLift& lift, const OperadCoalgebra& c, const OperadCoalgebra& d,
                          const ChainMap& f);

/// Extension of generator images along the tree basis of a free operad. images[g] maps the
/// carrier into codes of arity(g), has the generator's degree and is a Hom cycle.
OperadCoalgebra free_coalgebra(const OperadPtr& free, const ComplexPtr& c, const std::vector<SparseMatrix>& images);
/// alpha(sigma) = sigma_bar o Delta^(n) for a coassociative chain map Delta: C -> C (x) C (codes);
/// the counit C -> Z is required when S0 is unital.
OperadCoalgebra s0_coalgebra(const OperadPtr& s0, const ComplexPtr& c, const SparseMatrix& delta,
                             const std::optional<SparseVector>& counit = {});
/// Random Hom cycle C -> C^(x)n of the given degree, as a code matrix.
SparseMatrix random_hom_cycle(Rng& rng, const ComplexPtr& c, int n, int degree, int bound = 2);
OperadCoalgebra random_free_coalgebra(Rng& rng, const OperadPtr& free, const ComplexPtr& c, int bound = 2);
/// Group-like basis of rank r in degree 0 moved by a random unimodular matrix.
OperadCoalgebra group_like_coalgebra(Rng& rng, const OperadPtr& s0, int r);
/// Alexander-Whitney coalgebra of the 1-simplex (vertices v0, v1, edge e).
OperadCoalgebra simplex_coalgebra(const OperadPtr& s0);
/// One of the above, or a small cofree coalgebra, of total rank at most max_rank.
OperadCoalgebra random_s0_coalgebra(Rng& rng, const OperadPtr& s0, int max_rank = 4);

}  // namespace cofree
