#include <doctest.h>

#include <random>

#include "cofree/exact_linear.hpp"
#include "oracles.hpp"

using namespace cofree;

namespace {

bool is_diagonal(const IntegerMatrix& d) {
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (i != j && d(i, j) != 0) return false;
  return true;
}

bool divisibility_chain(const std::vector<Integer>& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] <= 0) return false;
    if (i + 1 < f.size() && f[i + 1] % f[i] != 0) return false;
  }
  return true;
}

std::vector<Integer> ints(std::initializer_list<long long> xs) {
  std::vector<Integer> out;
  for (auto x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("snf of identity") {
  auto s = smith_normal_form(IntegerMatrix::identity(3));
  CHECK(s.D == IntegerMatrix::identity(3));
  CHECK(s.invariant_factors == ints({1, 1, 1}));
}

TEST_CASE("snf of 2x2 fixture") {
  IntegerMatrix m = IntegerMatrix::from_rows({{2, 4}, {6, 8}});
  auto s = smith_normal_form(m);
  CHECK(s.invariant_factors == ints({2, 4}));
  CHECK(s.U * m * s.V == s.D);
  CHECK(invariant_factors(m) == ints({2, 4}));
}

TEST_CASE("snf of zero matrix") {
  auto s = smith_normal_form(IntegerMatrix(2, 3));
  CHECK(s.invariant_factors.empty());
  CHECK(s.D.is_zero());
}

TEST_CASE("snf is deterministic") {
  std::mt19937_64 rng(7);
  auto m = oracle::random_matrix(rng, 5, 4, 9);
  auto a = smith_normal_form(m);
  auto b = smith_normal_form(m);
  CHECK(a.U == b.U);
  CHECK(a.V == b.V);
}

TEST_CASE("snf property: random matrices") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = oracle::random_matrix(rng, dim(rng), dim(rng), 9);
    auto s = smith_normal_form(m);
    REQUIRE(s.U * m * s.V == s.D);
    CHECK(is_diagonal(s.D));
    CHECK(divisibility_chain(s.invariant_factors));
    Integer du = oracle::bareiss_det(s.U), dv = oracle::bareiss_det(s.V);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    CHECK(s.invariant_factors.size() == oracle::bareiss_rank(m));
    CHECK(invariant_factors(m) == s.invariant_factors);
  }
}

TEST_CASE("kernel basis fixtures") {
  CHECK(kernel_basis(IntegerMatrix::identity(3)).cols() == 0);
  auto k = kernel_basis(IntegerMatrix::from_rows({{1, 1}}));
  REQUIRE(k.cols() == 1);
  CHECK(k(0, 0) == -k(1, 0));
  CHECK((k(0, 0) == 1 || k(0, 0) == -1));
  auto z = kernel_basis(IntegerMatrix(2, 2));
  CHECK(z == IntegerMatrix::identity(2));
}

TEST_CASE("kernel basis property: annihilated, right size, saturated") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 150; ++trial) {
    auto m = oracle::random_matrix(rng, dim(rng), dim(rng), 3);
    // Low-rank products exercise non-trivial kernels.
    if (trial % 3 == 0) m = m * oracle::random_matrix(rng, m.cols(), m.cols(), 2);
    auto k = kernel_basis(m);
    CHECK((m * k).is_zero());
    CHECK(k.cols() == m.cols() - oracle::bareiss_rank(m));
    // Saturation: the gcd of maximal minors is 1, i.e. all invariant factors are 1.
    for (const auto& f : invariant_factors(k)) CHECK(f == 1);
  }
}

TEST_CASE("homology group fixtures") {
  auto interval = homology_group(IntegerMatrix(0, 2), IntegerMatrix::from_rows({{-1}, {1}}));
  CHECK(interval.free_rank == 1);
  CHECK(interval.torsion.empty());

  auto two = homology_group(IntegerMatrix(0, 1), IntegerMatrix::from_rows({{2}}));
  CHECK(two.free_rank == 0);
  CHECK(two.torsion == ints({2}));

  auto zero = homology_group(IntegerMatrix(0, 4), IntegerMatrix(4, 0));
  CHECK(zero.free_rank == 4);
  CHECK(zero.torsion.empty());
  CHECK(zero.to_string() == "Z^4");
  CHECK(two.to_string() == "Z/2");
}

TEST_CASE("homology rejects broken complex") {
  CHECK_THROWS_AS(homology_group(IntegerMatrix::from_rows({{1}}), IntegerMatrix::from_rows({{1}})), Error);
}

TEST_CASE("solve and lattice helpers") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = oracle::random_matrix(rng, 4, 3, 4);
    std::vector<Integer> x = {Integer(trial % 5 - 2), Integer(1), Integer(-3)};
    auto b = a.apply(x);
    auto sol = solve(a, b);
    REQUIRE(sol.has_value());
    CHECK(a.apply(*sol) == b);
  }
  // 2x = 1 has no integer solution.
  CHECK_FALSE(solve(IntegerMatrix::from_rows({{2}}), std::vector<Integer>{1}).has_value());

  auto s = saturate(IntegerMatrix::from_rows({{2}, {4}}));
  CHECK(same_lattice(s, IntegerMatrix::from_rows({{1}, {2}})));

  auto img = image_basis(IntegerMatrix::from_rows({{2, 3, 5}, {0, 0, 0}}));
  CHECK(img.cols() == 1);
  CHECK(img(0, 0) == 1);

  auto k = IntegerMatrix::from_rows({{1}, {2}, {3}});
  auto l = left_inverse(k);
  CHECK(l * k == IntegerMatrix::identity(1));
  auto comp = lattice_complement(k);
  CHECK((comp.projection * k).is_zero());
  CHECK(comp.projection * comp.section == IntegerMatrix::identity(2));
  Integer det = oracle::bareiss_det(hconcat(k, comp.section));
  CHECK((det == 1 || det == -1));
}
