#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cofree/io.hpp"

namespace cofree {

/// Parameters of a seeded experiment. Every random choice is drawn from Rng(seed).
struct ExperimentSpec {
  std::string operad = "S0";  // S0 | Com | free | file
  bool unital = false;
  std::vector<FreeGenerator> generators;  // operad = free
  std::string operad_file;                // operad = file
  int arity_bound = 3;
  std::uint64_t seed = 1;
  int instances = 1;
  std::optional<std::pair<int, int>> window;
  /// Explicit cogenerators; random ones are drawn when absent.
  std::optional<Json> complex;  // D, or the filtered / split complex
  std::optional<Json> cone;     // A in D + cone(A) -> D
  RandomComplexParams random{0, 2, 2, 3, 1, 2, "x"};
  /// colimit: nested label sets ending at the whole complex.
  std::vector<std::vector<std::string>> filtration;
  /// splitting: ideal generators as (arity, {label: coeff}) in the free operad.
  std::vector<std::pair<int, Json>> ideal;

  static ExperimentSpec from_json(const Json& j);
  Json to_json() const;
};

/// The operad an ExperimentSpec selects, truncated at its arity bound.
OperadPtr spec_operad(const ExperimentSpec& spec);

/// Projection D + cone(A) -> D (labels "0." and "1." on the source); a homology equivalence.
ChainMap make_homology_equivalence(const ComplexPtr& d, const ComplexPtr& a);

/// Compares the truncated cofree carriers over V of source and target of f, arity by arity and
/// as a whole, under the induced map. The bound is V's. Hypothesis failures are reported, not raised.
Json invariance_experiment(const OperadPtr& v, const ChainMap& f,
                           const std::optional<std::pair<int, int>>& window = {});
/// Runs spec.instances experiments; D and A are given in the ExperimentSpec or drawn at random.
Json run_invariance(const ExperimentSpec& spec);

/// V = Com (N = 2), C = (Z --1--> Z) in degrees 1, 0 and f: C -> 0.
Json com_counterexample();

/// Subcomplex on the given labels (any degree) with its inclusion; throws if not closed under d.
ChainMap subcomplex_inclusion(const ComplexPtr& c, const std::vector<std::string>& labels);
/// Colimit of T(C_1) -> ... -> T(C_m) against T(C); the filtration is nested and ends at C.
Json colimit_commutation_check(const ComplexPtr& c, const std::vector<std::vector<std::string>>& filtration,
                               const OperadPtr& v);
/// Nested label sets C_1 in ... in C_m = C, each closed under the boundary.
std::vector<std::vector<std::string>> random_filtration(Rng& rng, const ChainComplex& c, int steps);
/// C_{<=k} for the degrees k of C.
std::vector<std::vector<std::string>> degree_filtration(const ChainComplex& c);
Json run_colimit(const ExperimentSpec& spec);

/// For H free and I an ideal with I(1) = 0: K = ker of the restriction to I, kappa' = (epsilon, restriction),
/// and the per-degree identity rank T_H = rank T_{H/I} - rank C + rank im kappa'.
Json splitting_check(const OperadPtr& h, const std::vector<std::pair<int, SparseVector>>& generators,
                     const ComplexPtr& c);
/// Random ideal generators in arities 2..N of a free operad on one arity-2 generator.
std::vector<std::pair<int, SparseVector>> random_ideal_generators(Rng& rng, const OperadPtr& h);
Json run_splitting(const ExperimentSpec& spec);

/// Report of interval_coend(n) for n = 1..k.
Json coend_interval_report(int k);

/// "key.sub: value" lines in key order; arrays print inline.
std::string flatten_report(const Json& report);

}  // namespace cofree
