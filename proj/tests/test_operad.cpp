#include <doctest.h>

#include <set>

#include "cofree/operad.hpp"
#include "cofree/random.hpp"

using namespace cofree;

namespace {

SparseVector e(std::size_t i, long long c = 1) { return SparseVector{{i, Integer(c)}}; }

std::size_t index_of_label(const TruncatedOperad& o, int arity, const std::string& label) {
  const ChainComplex& c = o.complex(arity);
  for (std::size_t f = 0; f < c.total_rank(); ++f)
    if (c.label_of(f) == label) return f;
  FAIL("label not found: " << label);
  return 0;
}

// Unordered partitions of an n-set into k nonempty blocks, weighted by the product of t over
// block sizes; recursion on the block that contains the least element.
Integer weighted_partitions(int n, int k, const std::vector<Integer>& t,
                            std::map<std::pair<int, int>, Integer>& memo) {
  if (k == 0) return n == 0 ? 1 : 0;
  if (n == 0) return 0;
  auto key = std::make_pair(n, k);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  Integer total = 0;
  Integer choose = 1;  // C(n-1, s-1)
  for (int s = 1; s <= n; ++s) {
    total += choose * t[s] * weighted_partitions(n - s, k - 1, t, memo);
    choose = choose * (n - s) / s;
  }
  memo[key] = total;
  return total;
}

// Labeled tree count oracle: t(n) = sum_k r_k * k! * (unordered partitions weighted by t).
std::vector<Integer> tree_counts(const std::vector<int>& orbits_by_arity, int bound) {
  std::vector<Integer> t(bound + 1, 0);
  t[1] = 1;
  for (int n = 2; n <= bound; ++n) {
    std::map<std::pair<int, int>, Integer> memo;
    Integer total = 0;
    for (int k = 2; k < static_cast<int>(orbits_by_arity.size()) && k <= n; ++k) {
      if (orbits_by_arity[k] == 0) continue;
      Integer fact = 1;
      for (int i = 2; i <= k; ++i) fact *= i;
      total += orbits_by_arity[k] * fact * weighted_partitions(n, k, t, memo);
    }
    t[n] = total;
  }
  return t;
}

}  // namespace

TEST_CASE("builtin component ranks") {
  auto s0 = s0_operad(3);
  CHECK(s0->rank(1) == 1);
  CHECK(s0->rank(2) == 2);
  CHECK(s0->rank(3) == 6);
  for (int a = 1; a <= 3; ++a) CHECK(s0->complex(a).degrees() == std::vector<int>{0});
  auto com = com_operad(3);
  for (int a = 1; a <= 3; ++a) CHECK(com->rank(a) == 1);
  auto ss = tensor_operads(s0, s0);
  CHECK(ss->rank(2) == 4);
  CHECK(ss->rank(3) == 36);
}

TEST_CASE("S0 composition is block insertion") {
  auto s0 = s0_operad(4);
  // (2,1) o_1 (1,2): entry 1 of (2,1) becomes the block (1,2); entry 2 shifts to 3.
  const std::size_t a = index_of_label(*s0, 2, "(2,1)");
  const std::size_t b = index_of_label(*s0, 2, "(1,2)");
  CHECK(s0->compose_basis(2, a, 1, 2, b) == e(index_of_label(*s0, 3, "(3,1,2)")));
  CHECK(s0->compose_basis(2, a, 2, 2, b) == e(index_of_label(*s0, 3, "(2,3,1)")));
  const std::size_t c = index_of_label(*s0, 2, "(2,1)");
  CHECK(s0->compose_basis(2, a, 2, 2, c) == e(index_of_label(*s0, 3, "(3,2,1)")));
}

TEST_CASE("partial composite agrees with block permutations") {
  for (int m = 1; m <= 4; ++m)
    for (int n = 0; n + m <= 5; ++n)
      for (const auto& sigma : all_permutations(m))
        for (const auto& tau : all_permutations(n))
          for (int i = 1; i <= m; ++i) {
            std::vector<int> sizes(m, 1);
            sizes[i - 1] = n;
            Permutation inner = direct_sum(direct_sum(Permutation::identity(i - 1), tau), Permutation::identity(m - i));
            CHECK(partial_composite(sigma, i, tau) == block_permutation(sigma, sizes) * inner);
          }
}

TEST_CASE("builtin operads satisfy the axioms") {
  CHECK(check_operad_axioms(*s0_operad(4)).ok());
  CHECK(check_operad_axioms(*s0_operad(3, true)).ok());
  CHECK(check_operad_axioms(*com_operad(4)).ok());
  CHECK(check_operad_axioms(*com_operad(3, true)).ok());
  CHECK(check_operad_axioms(*tensor_operads(s0_operad(3), s0_operad(3))).ok());
  CHECK(check_operad_axioms(*tensor_operads(com_operad(3, true), s0_operad(3, true))).ok());
}

TEST_CASE("CoEnd operads") {
  auto unit = share(unit_complex());
  for (int n = 1; n <= 3; ++n) CHECK(coend_operad(unit, 3).operad->rank(n) == 1);

  auto interval = share(unit_interval());
  CoEndOperad ci = coend_operad(interval, 3);
  CHECK(ci.operad->rank(2) == 27);
  AxiomReport r = check_operad_axioms(*ci.operad);
  CHECK(r.ok());
  CHECK(r.checks > 10000);
  CHECK(check_operad_axioms(*coend_operad(interval, 2, {}, true).operad).ok());

  Rng rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    RandomComplexParams p;
    p.min_degree = -1;
    p.degree_span = 3;
    p.max_rank = 2;
    p.max_total_rank = 3;
    auto c = share(random_complex(rng, p));
    CoEndOperad co = coend_operad(c, 2);
    CHECK(check_operad_axioms(*co.operad).ok());
    // Elements round-trip through maps.
    for (std::size_t f = 0; f < co.operad->rank(2); ++f) CHECK(co.element(2, co.map(2, e(f))) == e(f));
  }

  SUBCASE("relative components") {
    CoEndOperad rel = coend_operad(interval, 3, {{"p0"}, {"p1"}});
    CHECK(check_operad_axioms(*rel.operad).ok());
    CHECK(rel.operad->rank(1) < ci.operad->rank(1));
    CHECK_THROWS_AS(coend_operad(interval, 2, {{"q"}}), Error);
    CHECK_THROWS_AS(coend_operad(interval, 2, {{"zz"}}), Error);
  }
}

TEST_CASE("fault injection is located") {
  Rng rng(11);
  auto s0 = s0_operad(3);
  CoEndOperad ci = coend_operad(share(unit_interval()), 2);
  for (const OperadPtr& o : {s0, ci.operad})
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<std::tuple<CompositionKey, std::size_t, std::size_t>> entries;
      for (const auto& [key, table] : o->tables())
        for (std::size_t x = 0; x < table.size(); ++x)
          if (!table[x].empty()) entries.emplace_back(key, x / o->rank(key.n), x % o->rank(key.n));
      auto [key, a, b] = entries[uniform_int(rng, 0, static_cast<int>(entries.size()) - 1)];
      AxiomReport r = check_operad_axioms(o->with_flipped_entry(key, a, b));
      REQUIRE_FALSE(r.ok());
      bool located = false;
      for (const auto& v : r.violations)
        if (v.witness.find(o->complex(key.m).label_of(a)) != std::string::npos) located = true;
      CHECK(located);
    }
}

TEST_CASE("truncation overflow is distinct") {
  auto s0 = s0_operad(3);
  CHECK_THROWS_AS(s0->compose(2, e(0), 1, 3, e(0)), TruncationOverflow);
  CHECK_THROWS_AS(s0->component(4), TruncationOverflow);
  CHECK_NOTHROW(s0->compose(2, e(0), 1, 2, e(0)));
}

TEST_CASE("interval paths") {
  IntervalCoendReport r1 = interval_coend(1);
  CHECK(r1.chain_map_rank == 1);
  CHECK(r1.paths_independent);

  IntervalCoendReport r2 = interval_coend(2);
  CHECK(r2.path_count == 2);
  CHECK(r2.chain_map_rank == 2);
  CHECK(r2.paths_independent);
  CHECK(r2.paths_span_chain_maps);
  // The swap exchanges the two staircase paths.
  const auto& sym = r2.coend.operad->component(2);
  CHECK(sym.generator(0).apply(r2.paths[0]) == r2.paths[1]);
  CHECK(sym.generator(0).apply(r2.paths[1]) == r2.paths[0]);

  IntervalCoendReport r3 = interval_coend(3);
  CHECK(r3.chain_map_rank == 6);
  CHECK(r3.paths_independent);
  CHECK(r3.paths_span_chain_maps);
  CHECK(r3.free_transitive);
  for (const auto& [d, r] : r3.endpoint_visible_ranks)
    if (d != 0) CHECK(r == 0);

  // Endpoint-preserving chain maps I -> I^n form a lattice of rank n 2^(n-1) - 2^n + 2:
  // the 1-cycles of the cube plus one path. At n = 4 this is 18 < 4!.
  IntervalCoendReport r4 = interval_coend(4);
  CHECK(r4.path_count == 24);
  CHECK(r4.chain_map_rank == 18);
  CHECK(r4.path_span_rank == 18);
  CHECK_FALSE(r4.paths_independent);
  CHECK(r4.paths_span_chain_maps);
  CHECK(r4.free_transitive);
}

TEST_CASE("paths give a morphism from S0 to the relative CoEnd of I") {
  const int N = 3;
  auto s0 = s0_operad(N);
  CoEndOperad rel = coend_operad(share(unit_interval()), N, {{"p0"}, {"p1"}});
  OperadMorphism phi{s0, rel.operad, {}};
  for (int a = 1; a <= N; ++a) {
    auto perms = all_permutations(a);
    SparseMatrix m(rel.operad->rank(a), perms.size());
    for (std::size_t j = 0; j < perms.size(); ++j) m.column(j) = rel.element(a, interval_path(perms[j]));
    phi.maps.emplace(a, std::move(m));
  }
  AxiomReport r = phi.check();
  for (const auto& v : r.violations) MESSAGE(v.law << ": " << v.witness);
  CHECK(r.ok());
}

TEST_CASE("free operad ranks match the labeled tree oracle") {
  CHECK(free_operad({}, 3).operad->rank(1) == 1);
  CHECK(free_operad({}, 3).operad->rank(2) == 0);
  CHECK(free_operad({}, 3).operad->rank(3) == 0);

  FreeOperad g = free_operad({{"g", 2, 0}}, 4);
  CHECK(g.operad->rank(2) == 2);
  CHECK(g.operad->rank(3) == 12);
  CHECK(g.operad->rank(4) == 120);

  struct Case {
    std::vector<FreeGenerator> gens;
    std::vector<int> orbits;
  };
  std::vector<Case> cases = {
      {{{"g", 2, 0}}, {0, 0, 1}},
      {{{"g", 2, 0}, {"h", 2, 1}}, {0, 0, 2}},
      {{{"m", 3, 0}}, {0, 0, 0, 1}},
      {{{"g", 2, 0}, {"m", 3, 1}}, {0, 0, 1, 1}},
      {{{"a", 2, 0}, {"b", 2, 0}, {"c", 4, 2}}, {0, 0, 2, 0, 1}},
  };
  for (const auto& c : cases) {
    FreeOperad f = free_operad(c.gens, 4);
    auto oracle = tree_counts(c.orbits, 4);
    for (int a = 1; a <= 4; ++a) CHECK(Integer(f.operad->rank(a)) == oracle[a]);
  }
}

TEST_CASE("free operads satisfy the axioms") {
  CHECK(check_operad_axioms(*free_operad({{"g", 2, 0}}, 4).operad).ok());
  CHECK(check_operad_axioms(*free_operad({{"g", 2, 1}}, 4).operad).ok());
  CHECK(check_operad_axioms(*free_operad({{"g", 2, 1}, {"m", 3, 1}, {"h", 2, 0}}, 4).operad).ok());
  CHECK_THROWS_AS(free_operad({{"u", 1, 0}}, 3), Error);
}

TEST_CASE("grafting") {
  FreeOperad f = free_operad({{"g", 2, 1}}, 3);
  const auto& o = *f.operad;
  const std::size_t g = f.generator_index(0);
  CHECK(o.complex(2).label_of(g) == "g(1,2)");
  CHECK(o.compose_basis(2, g, 1, 2, g) == e(index_of_label(o, 3, "g(g(1,2),3)")));
  // The inner vertex moves past the root's second subtree, which has no vertices.
  CHECK(o.compose_basis(2, g, 2, 2, g) == e(index_of_label(o, 3, "g(1,g(2,3))")));
  FreeOperad h = free_operad({{"g", 2, 1}}, 4);
  const auto& oh = *h.operad;
  const std::size_t left = index_of_label(oh, 3, "g(g(1,2),3)");
  // Grafting at leaf 2 of g(g(1,2),3): no vertex follows leaf 2 in pre-order.
  CHECK(oh.compose_basis(3, left, 2, 2, g) == e(index_of_label(oh, 4, "g(g(1,g(2,3)),4)")));
  // Grafting at leaf 1 of g(1,g(2,3)): one odd vertex follows.
  const std::size_t right = index_of_label(oh, 3, "g(1,g(2,3))");
  CHECK(oh.compose_basis(3, right, 1, 2, g) == e(index_of_label(oh, 4, "g(g(1,2),g(3,4))"), -1));
}

TEST_CASE("ideals and quotients") {
  FreeOperad f = free_operad({{"g", 2, 0}}, 3);
  const OperadPtr& h = f.operad;
  const std::size_t g = f.generator_index(0);

  SUBCASE("the ideal of the generator is everything above arity 1") {
    IdealQuotient iq = ideal_and_quotient(h, {{2, e(g)}});
    CHECK(iq.ideal.rank(2) == 2);
    CHECK(iq.ideal.rank(3) == 12);
    CHECK(iq.ideal.contains(3, h->compose_basis(2, g, 1, 2, g)));
    CHECK(iq.ideal.contains(3, h->compose_basis(2, g, 2, 2, g)));
    CHECK(iq.quotient->rank(1) == 1);
    CHECK(iq.quotient->rank(2) == 0);
    CHECK(iq.quotient->rank(3) == 0);
    CHECK(iq.projection.check().ok());
    CHECK(check_operad_axioms(*iq.quotient).ok());
  }

  SUBCASE("no generators") {
    IdealQuotient iq = ideal_and_quotient(h, {});
    for (int a = 1; a <= 3; ++a) CHECK(iq.quotient->rank(a) == h->rank(a));
    CHECK(iq.projection.check().ok());
  }

  SUBCASE("commutator ideal") {
    SparseVector comm = e(g);
    add_entry(comm, h->component(2).generator(0).column(g).begin()->first, -1);
    IdealQuotient iq = ideal_and_quotient(h, {{2, comm}});
    CHECK(iq.quotient->rank(2) == 1);
    CHECK(iq.quotient->rank(3) == 3);
    CHECK(check_operad_axioms(*iq.quotient).ok());
    CHECK(iq.projection.check().ok());
    // p kills the ideal and is onto.
    for (int a = 1; a <= 3; ++a) {
      if (iq.ideal.basis.count(a))
        for (const auto& x : iq.ideal.basis.at(a)) CHECK(iq.projection.apply(a, x).empty());
      CHECK(rank(iq.projection.maps.at(a)) == iq.quotient->rank(a));
    }
  }

  SUBCASE("odd generator with differential-free quotient") {
    FreeOperad fo = free_operad({{"g", 2, 1}, {"h", 2, 0}}, 3);
    const std::size_t go = fo.generator_index(0);
    IdealQuotient iq = ideal_and_quotient(fo.operad, {{2, e(go)}});
    CHECK(iq.quotient->rank(2) == 2);
    CHECK(iq.quotient->rank(3) == 12);
    CHECK(check_operad_axioms(*iq.quotient).ok());
  }

  CHECK_THROWS_AS(ideal_and_quotient(h, {{1, e(0)}}), Error);
}

TEST_CASE("generalized compositions") {
  auto s0 = s0_operad(4, true);
  Rng rng(3);
  const SparseVector& u = s0->unit();

  // All bullets insert units.
  for (int m = 1; m <= 4; ++m)
    for (std::size_t a = 0; a < s0->rank(m); ++a) {
      std::vector<CompositionOperand> bullets(m);
      CHECK(generalized_composition(*s0, m, e(a), bullets) == e(a));
    }
  // One non-bullet slot is a plain partial composition.
  for (std::size_t a = 0; a < s0->rank(3); ++a)
    for (std::size_t b = 0; b < s0->rank(2); ++b)
      for (int slot = 1; slot <= 3; ++slot) {
        std::vector<CompositionOperand> ops(3);
        ops[slot - 1] = std::make_pair(2, e(b));
        CHECK(generalized_composition(*s0, 3, e(a), ops) == s0->compose(3, e(a), slot, 2, e(b)));
      }

  // Random sequences of length <= 3 against a right-to-left fold.
  for (int trial = 0; trial < 200; ++trial) {
    const int m = uniform_int(rng, 1, 3);
    std::vector<CompositionOperand> ops(m);
    int total = 0;
    for (int j = 0; j < m; ++j) {
      const int arity = uniform_int(rng, -1, 2);
      if (arity < 0) {
        total += 1;
        continue;
      }
      ops[j] = std::make_pair(arity, e(uniform_int(rng, 0, static_cast<int>(s0->rank(arity)) - 1),
                                       uniform_int(rng, -2, 2)));
      total += arity;
    }
    const SparseVector root = e(uniform_int(rng, 0, static_cast<int>(s0->rank(m)) - 1));
    if (total > 4) {
      CHECK_THROWS_AS(generalized_composition(*s0, m, root, ops), TruncationOverflow);
      continue;
    }
    SparseVector expected = root;
    int arity = m;
    for (int j = m - 1; j >= 0; --j) {
      const int a = ops[j] ? ops[j]->first : 1;
      const SparseVector& x = ops[j] ? ops[j]->second : u;
      expected = s0->compose(arity, expected, j + 1, a, x);
      arity += a - 1;
    }
    CHECK(generalized_arity(*s0, m, ops) == total);
    CHECK(generalized_composition(*s0, m, root, ops) == expected);
  }

  auto nonunital = s0_operad(3);
  CHECK_THROWS_AS(generalized_composition(*nonunital, 2, e(0), {std::nullopt, std::make_pair(1, e(0))}), Error);
  CHECK_THROWS_AS(generalized_composition(*s0, 2, e(0), {std::nullopt}), Error);
}

TEST_CASE("sigma diagonals") {
  FreeOperad f = free_operad({{"g", 2, 0}}, 3);
  SigmaDiagonal d = sigma_diagonal(f.operad);
  CHECK(d.delta.check().ok());
  CHECK(d.projection.check().ok());
  CHECK(d.triangle_commutes());
  // The generator goes to g (x) identity.
  const std::size_t g = f.generator_index(0);
  auto image = d.delta.apply(2, e(g));
  REQUIRE(image.size() == 1);
  CHECK(d.tensor->complex(2).label_of(image.begin()->first) == "(g(1,2),(1,2))");

  FreeOperad odd = free_operad({{"g", 2, 1}, {"m", 3, 0}}, 4);
  SigmaDiagonal d2 = sigma_diagonal(odd.operad);
  CHECK(d2.delta.check().ok());
  CHECK(d2.triangle_commutes());

  SigmaDiagonal ds = sigma_diagonal(s0_operad(3));
  CHECK(ds.delta.check().ok());
  CHECK(ds.triangle_commutes());
  CHECK_THROWS_AS(sigma_diagonal(com_operad(3)), Error);
  CHECK(sigma_diagonal(s0_operad(3, true)).delta.check().ok());
}
