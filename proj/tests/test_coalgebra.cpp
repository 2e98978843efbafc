#include <doctest.h>

#include <algorithm>

#include "cofree/coalgebra.hpp"

using namespace cofree;

namespace {

SparseVector e(std::size_t i, long long c = 1) { return SparseVector{{i, Integer(c)}}; }

ComplexPtr small_complex(Rng& rng, int max_total) {
  RandomComplexParams p;
  p.min_degree = 0;
  p.degree_span = 2;
  p.max_rank = 2;
  p.max_total_rank = max_total;
  p.entry_bound = 2;
  return share(random_complex(rng, p));
}

void require_valid(const OperadCoalgebra& x) {
  AxiomReport rep = validate_coalgebra(x);
  for (const auto& v : rep.violations) MESSAGE(v.law << ": " << v.witness);
  REQUIRE(rep.ok());
}

}  // namespace

TEST_CASE("trivial coalgebras validate") {
  auto v = s0_operad(3);
  auto c = share(unit_interval());
  require_valid(trivial_coalgebra(v, c));
  CHECK_THROWS_AS(trivial_coalgebra(s0_operad(2, true), c), Error);
}

TEST_CASE("S0 coalgebras from coassociative diagonals") {
  for (bool unital : {false, true}) {
    auto s0 = s0_operad(3, unital);
    require_valid(simplex_coalgebra(s0));
    Rng rng(7);
    for (int r = 1; r <= 3; ++r) require_valid(group_like_coalgebra(rng, s0, r));
  }
}

TEST_CASE("free coalgebras extend generator images") {
  Rng rng(11);
  for (int deg : {0, 1}) {
    FreeOperad f = free_operad({{"g", 2, deg}}, 3);
    for (int trial = 0; trial < 3; ++trial) {
      auto c = small_complex(rng, 3);
      require_valid(random_free_coalgebra(rng, f.operad, c));
    }
  }
  FreeOperad two = free_operad({{"g", 2, 1}, {"h", 3, 0}}, 3);
  require_valid(random_free_coalgebra(rng, two.operad, small_complex(rng, 2)));
}

TEST_CASE("truncated cofree coalgebras validate") {
  Rng rng(3);
  auto interval = share(unit_interval());
  SUBCASE("S0 general") {
    auto t = truncated_cofree(s0_operad(2), interval);
    require_valid(t.coalgebra);
    // Hom_{S2}(ZS2, I^2) is I^2 by free rank one.
    CHECK(t.carrier.complex->total_rank() == 3 + 9);
    CHECK(t.epsilon.is_chain_map());
  }
  SUBCASE("S0 pointed") {
    auto t = truncated_cofree(s0_operad(3, true), interval, CofreeVariant::Pointed);
    require_valid(t.coalgebra);
    REQUIRE(t.basepoint);
    CHECK(is_group_like(t.coalgebra, e(*t.basepoint)));
  }
  SUBCASE("free operads with odd generators") {
    for (int deg : {0, 1, -1}) {
      FreeOperad f = free_operad({{"g", 2, deg}}, 3);
      auto c = small_complex(rng, 2);
      auto t = truncated_cofree(f.operad, c);
      require_valid(t.coalgebra);
    }
  }
  SUBCASE("nothing above arity 1 gives back C") {
    FreeOperad f = free_operad({{"g", 4, 0}}, 3);
    auto c = small_complex(rng, 3);
    auto t = truncated_cofree(f.operad, c);
    CHECK(t.carrier.complex->total_rank() == c->total_rank());
    CHECK(t.epsilon.flat() == SparseMatrix::identity(c->total_rank()));
  }
  SUBCASE("non-projective arity rejected") {
    try {
      truncated_cofree(com_operad(2), interval);
      FAIL("expected rejection");
    } catch (const Error& err) {
      CHECK(std::string(err.what()).find("arity 2") != std::string::npos);
    }
  }
}

TEST_CASE("fault injection in a structure map is detected") {
  auto t = truncated_cofree(s0_operad(2), share(unit_interval()));
  OperadCoalgebra bad = t.coalgebra;
  SparseMatrix& a = bad.structure.at(2)[0];
  std::size_t col = 0;
  while (a.column(col).empty()) ++col;
  a.column(col).begin()->second *= -1;
  CHECK_FALSE(validate_coalgebra(bad).ok());
}

TEST_CASE("classifying maps: triangle, morphism and uniqueness") {
  Rng rng(101);
  SUBCASE("S0 coalgebras") {
    for (bool unital : {false, true}) {
      auto s0 = s0_operad(3, unital);
      for (int trial = 0; trial < 6; ++trial) {
        OperadCoalgebra d = random_s0_coalgebra(rng, s0, 4);
        auto c = small_complex(rng, 2);
        ChainMap f = random_chain_map(rng, d.carrier, c);
        ClassifyingMap m = classifying_map(d, f);
        CHECK(m.triangle);
        CHECK(m.morphism);
        CHECK(m.unique);
      }
    }
  }
  SUBCASE("free coalgebras with an odd generator") {
    FreeOperad fo = free_operad({{"g", 2, 1}}, 3);
    for (int trial = 0; trial < 4; ++trial) {
      auto dc = small_complex(rng, 3);
      OperadCoalgebra d = random_free_coalgebra(rng, fo.operad, dc);
      auto c = small_complex(rng, 2);
      ClassifyingMap m = classifying_map(d, random_chain_map(rng, dc, c));
      CHECK(m.triangle);
      CHECK(m.morphism);
      CHECK(m.unique);
    }
  }
  SUBCASE("zero higher structure gives zero higher components") {
    auto v = s0_operad(3);
    auto dc = small_complex(rng, 3);
    auto c = small_complex(rng, 2);
    TruncatedCofree t = truncated_cofree(v, c);
    ClassifyingMap m = classifying_map(trivial_coalgebra(v, dc), random_chain_map(rng, dc, c), t);
    CHECK(m.triangle);
    for (std::size_t col = 0; col < dc->total_rank(); ++col)
      for (const auto& [i, cv] : m.map.flat().column(col)) CHECK(t.carrier.summand_of[i].first == 1);
  }
  SUBCASE("the identity of a cofree coalgebra classifies to itself") {
    auto t = truncated_cofree(s0_operad(2), share(unit_interval()));
    auto tt = truncated_cofree(s0_operad(2), t.carrier.complex);
    ClassifyingMap m = classifying_map(t.coalgebra, ChainMap::identity(t.carrier.complex), tt);
    CHECK(m.triangle);
    CHECK(m.morphism);
  }
}

TEST_CASE("induced maps are functorial and pull back along morphisms") {
  Rng rng(5);
  auto v = s0_operad(3);
  for (int trial = 0; trial < 5; ++trial) {
    auto a = small_complex(rng, 2), b = small_complex(rng, 2), c = small_complex(rng, 2);
    auto ta = truncated_cofree(v, a), tb = truncated_cofree(v, b), tc = truncated_cofree(v, c);
    ChainMap f = random_chain_map(rng, a, b), g = random_chain_map(rng, b, c);
    CHECK(induced_map(ta.carrier, ta.carrier, ChainMap::identity(a)) == ChainMap::identity(ta.carrier.complex));
    ChainMap wf = induced_map(ta.carrier, tb.carrier, f);
    CHECK(induced_map(ta.carrier, tc.carrier, g.compose(f)) == induced_map(tb.carrier, tc.carrier, g).compose(wf));
    CHECK(wf.is_chain_map());
    CHECK(is_coalgebra_morphism(ta.coalgebra, tb.coalgebra, wf));
    CHECK(tb.epsilon.compose(wf) == f.compose(ta.epsilon));
  }
  SUBCASE("pullback along the identity morphism") {
    auto c = small_complex(rng, 2);
    auto t = truncated_cofree(v, c);
    OperadMorphism id{v, v, {}};
    for (int n = 1; n <= 3; ++n) id.maps[n] = SparseMatrix::identity(v->rank(n));
    CHECK(pullback_map(id, t.carrier, t.carrier) == ChainMap::identity(t.carrier.complex));
  }
}

TEST_CASE("group-like elements and coideals") {
  Rng rng(9);
  auto s0 = s0_operad(3, true);
  SUBCASE("basepoint of the pointed cofree coalgebra") {
    auto c = small_complex(rng, 2);
    auto t = truncated_cofree(s0, c, CofreeVariant::Pointed);
    std::vector<SparseVector> deg0;
    for (std::size_t i = 0; i < t.carrier.complex->total_rank(); ++i)
      if (t.carrier.complex->degree_of(i) == 0 && deg0.size() < 4) deg0.push_back(e(i));
    auto found = group_like_elements(t.coalgebra, deg0, 2);
    CHECK(std::find(found.begin(), found.end(), e(*t.basepoint)) != found.end());
  }
  SUBCASE("group-like basis is recovered after a change of coordinates") {
    for (int trial = 0; trial < 4; ++trial) {
      OperadCoalgebra x = group_like_coalgebra(rng, s0, 3);
      std::vector<SparseVector> basis{e(0), e(1), e(2)};
      auto found = group_like_elements(x, basis, 3);
      CHECK(found.size() <= 3);
      for (const auto& c : found) CHECK(is_group_like(x, c));
    }
  }
  SUBCASE("vertices of the simplex are group-like, the edge is not") {
    OperadCoalgebra x = simplex_coalgebra(s0);
    CHECK(is_group_like(x, e(0)));
    CHECK(is_group_like(x, e(1)));
    CHECK_FALSE(is_group_like(x, e(2)));
    CHECK_FALSE(is_group_like(x, SparseVector{{0, 1}, {1, 1}}));
  }
  SUBCASE("search space bound") {
    OperadCoalgebra x = simplex_coalgebra(s0);
    CHECK_THROWS_AS(group_like_elements(x, {e(0), e(1)}, 3, 10), Error);
  }
  SUBCASE("coideals") {
    OperadCoalgebra x = simplex_coalgebra(s0);
    CHECK(is_coideal(x, {}));
    // {v0} is a sub-coalgebra, hence a coideal.
    CHECK(is_subcoalgebra(x, {e(0)}));
    CHECK(is_coideal(x, {e(0)}));
    // {e} is a coideal but not a sub-coalgebra.
    CHECK_FALSE(is_subcoalgebra(x, {e(2)}));
    CHECK(is_coideal(x, {e(2)}));
    // Two group-like points identified: d1 + d2 is not a coideal.
    auto c = share(ChainComplex(GradedBasis({{0, {"d1", "d2"}}}), {}));
    SparseMatrix delta(4, 2);
    delta.add_entry(0, 0, 1);
    delta.add_entry(3, 1, 1);
    OperadCoalgebra y = s0_coalgebra(s0, c, delta, SparseVector{{0, 1}, {1, 1}});
    CHECK_FALSE(is_coideal(y, {SparseVector{{0, 1}, {1, 1}}}));
    CHECK(is_coideal(y, {SparseVector{{0, 1}, {1, -1}}}));
    CHECK_THROWS_AS(is_coideal(x, {e(0, 2)}), Error);
  }
}

TEST_CASE("intersection of single-slot kernels is the tensor of kernels") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = uniform_int(rng, 1, 4), k = uniform_int(rng, 1, 4);
    IntegerMatrix f = random_matrix(rng, uniform_int(rng, 1, 3), m, 2);
    IntegerMatrix g = random_matrix(rng, uniform_int(rng, 1, 3), k, 2);
    IntegerMatrix stacked = vconcat(kronecker(f, IntegerMatrix::identity(k)), kronecker(IntegerMatrix::identity(m), g));
    IntegerMatrix lhs = kernel_basis(stacked);
    IntegerMatrix rhs = kronecker(kernel_basis(f), kernel_basis(g));
    if (lhs.cols() == 0 || rhs.cols() == 0) {
      CHECK(lhs.cols() == rhs.cols());
      continue;
    }
    CHECK(same_lattice(lhs, rhs));
  }
}

TEST_CASE("ideal kernels") {
  Rng rng(13);
  FreeOperad fo = free_operad({{"g", 2, 0}}, 2);
  const std::size_t g = fo.generator_index(0);
  SUBCASE("the whole arity-2 part leaves C") {
    auto c = small_complex(rng, 3);
    IdealKernel k = ideal_kernel(fo.operad, {{2, e(g)}}, c);
    CHECK(k.kernel_complex->total_rank() == c->total_rank());
    CHECK(k.closed);
    CHECK(k.annihilated);
    CHECK(k.pullback_onto_kernel);
    CHECK(k.homology_matches);
    CHECK(k.ranks_match);
  }
  SUBCASE("zero ideal keeps the carrier") {
    auto c = small_complex(rng, 3);
    IdealKernel k = ideal_kernel(fo.operad, {}, c);
    CHECK(k.kernel.size() == k.cofree.carrier.complex->total_rank());
    CHECK(k.pullback_onto_kernel);
    CHECK(k.homology_matches);
  }
  SUBCASE("commutator ideal at N = 3") {
    FreeOperad f3 = free_operad({{"g", 2, 0}}, 3);
    const std::size_t g3 = f3.generator_index(0);
    SparseVector comm = f3.operad->act(2, Permutation::adjacent(2, 0), e(g3));
    add_entry(comm, g3, -1);
    for (int trial = 0; trial < 2; ++trial) {
      auto c = small_complex(rng, 2);
      IdealKernel k = ideal_kernel(f3.operad, {{2, comm}}, c);
      CHECK(k.closed);
      CHECK(k.annihilated);
      CHECK(k.pullback_onto_kernel);
      CHECK(k.homology_matches);
      CHECK(k.ranks_match);
      // Monotone: the larger ideal (g) leaves a smaller kernel.
      IdealKernel all = ideal_kernel(f3.operad, {{2, e(g3)}}, c);
      CHECK(all.kernel.size() <= k.kernel.size());
    }
  }
  SUBCASE("a non-ideal basis is rejected") {
    FreeOperad f3 = free_operad({{"g", 2, 0}}, 3);
    OperadIdeal bogus{f3.operad, {{2, {e(f3.generator_index(0))}}}};
    CHECK_THROWS_AS(ideal_kernel(bogus, share(unit_interval())), Error);
  }
}

TEST_CASE("cylinder coalgebras") {
  Rng rng(17);
  for (bool unital : {false, true}) {
    auto s0 = s0_operad(3, unital);
    for (int trial = 0; trial < 3; ++trial) {
      OperadCoalgebra x = random_s0_coalgebra(rng, s0, 4);
      CylinderCoalgebra cyl = cylinder_coalgebra(x);
      CHECK(cyl.restrictions_match);
      require_valid(cyl.coalgebra);
    }
  }
  SUBCASE("free operad with an odd generator") {
    FreeOperad fo = free_operad({{"g", 2, 1}}, 3);
    OperadCoalgebra x = random_free_coalgebra(rng, fo.operad, small_complex(rng, 2));
    CylinderCoalgebra cyl = cylinder_coalgebra(x);
    CHECK(cyl.restrictions_match);
    require_valid(cyl.coalgebra);
  }
  SUBCASE("no diagonal for Com") {
    auto com = com_operad(2);
    CHECK_THROWS_AS(cylinder_coalgebra(trivial_coalgebra(com, share(unit_interval()))), Error);
  }
}

TEST_CASE("homotopy lifts") {
  Rng rng(23);
  auto v = s0_operad(2);
  auto interval = share(unit_interval());
  for (int trial = 0; trial < 3; ++trial) {
    auto c = small_complex(rng, 2);
    auto d = small_complex(rng, 2);
    auto ci = share(tensor(*c, *interval));
    ChainMap f = random_chain_map(rng, ci, d);
    HomotopyLift h = cofree_homotopy_lift(v, f, c);
    CHECK(h.ends_match);
    CHECK(h.lift.is_chain_map());
  }
  SUBCASE("constant homotopy lifts to a constant one") {
    auto c = small_complex(rng, 2);
    auto ci = share(tensor(*c, *interval));
    TensorProduct tp = tensor_product(*c, *interval);
    const std::size_t p0 = 0, p1 = 1;
    SparseMatrix proj(c->total_rank(), tp.complex.total_rank());
    for (std::size_t i = 0; i < c->total_rank(); ++i) {
      proj.add_entry(i, tp.flat(i, p0), 1);
      proj.add_entry(i, tp.flat(i, p1), 1);
    }
    ChainMap pr(ci, c, 0, proj);
    REQUIRE(pr.is_chain_map());
    HomotopyLift h = cofree_homotopy_lift(v, pr, c);
    CHECK(h.ends_match);
    CHECK(h.end0 == h.end1);
    CHECK(h.end0 == ChainMap::identity(h.source.carrier.complex));
  }
  SUBCASE("square with classifying maps for a coalgebra morphism") {
    auto s0 = s0_operad(3, true);
    OperadCoalgebra x = simplex_coalgebra(s0);
    CylinderCoalgebra cyl = cylinder_coalgebra(x);
    auto xi = cyl.coalgebra.carrier;
    // The projection X (x) I -> X, x (x) p_i -> x, is a coalgebra morphism.
    SparseMatrix proj(x.carrier->total_rank(), xi->total_rank());
    for (std::size_t i = 0; i < x.carrier->total_rank(); ++i) {
      proj.add_entry(i, cyl.tensor.flat(i, 0), 1);
      proj.add_entry(i, cyl.tensor.flat(i, 1), 1);
    }
    ChainMap pr(xi, x.carrier, 0, proj);
    REQUIRE(is_coalgebra_morphism(cyl.coalgebra, x, pr));
    HomotopyLift h = cofree_homotopy_lift(s0, pr, x.carrier, CofreeVariant::Pointed);
    CHECK(h.ends_match);
    CHECK(lift_square_commutes(h, x, x, pr));
  }
}
