#include <doctest.h>

#include "cofree/lab.hpp"

using namespace cofree;

namespace {

ComplexPtr small_complex(Rng& rng, int max_total, const std::string& prefix = "x") {
  RandomComplexParams p;
  p.min_degree = 0;
  p.degree_span = 2;
  p.max_rank = 2;
  p.max_total_rank = max_total;
  p.entry_bound = 2;
  p.prefix = prefix;
  return share(random_complex(rng, p));
}

}  // namespace

TEST_CASE("integers serialize exactly") {
  CHECK(integer_to_json(Integer(-7)) == Json(-7));
  const Integer big = Integer(1) << 70;
  CHECK(integer_to_json(big).is_string());
  CHECK(integer_from_json(integer_to_json(big)) == big);
  CHECK(integer_from_json(Json("-12")) == -12);
  CHECK_THROWS_AS(integer_from_json(Json("1.5")), Error);
  CHECK_THROWS_AS(integer_from_json(Json(true)), Error);
  const IntegerMatrix m = IntegerMatrix::from_rows({{2, 4}, {6, 8}});
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
}

TEST_CASE("CXF fixture is the unit interval") {
  const std::string fixture = R"({"d":{"1":{"q":{"p0":-1,"p1":1}}},"degrees":{"0":["p0","p1"],"1":["q"]}})";
  CHECK(complex_to_json(unit_interval()).dump() == fixture);
  CHECK(complex_from_json(Json::parse(fixture)) == unit_interval());

  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const ComplexPtr c = small_complex(rng, 5);
    CHECK(complex_from_json(complex_to_json(*c)) == *c);
  }
  CHECK_THROWS_AS(complex_from_json(Json::parse(R"({"degrees":{"0":["a"]},"d":{"1":{"b":{"a":1}}}})")), Error);
  CHECK_THROWS_AS(complex_from_json(Json::parse(R"({"degrees":{"x":["a"]}})")), Error);
  // d o d != 0.
  CHECK_THROWS_AS(complex_from_json(Json::parse(
                      R"({"degrees":{"0":["a"],"1":["b"],"2":["c"]},"d":{"1":{"b":{"a":1}},"2":{"c":{"b":1}}}})")),
                  Error);
}

TEST_CASE("operads survive a JSON round trip") {
  for (const OperadPtr& o : {s0_operad(3), s0_operad(2, true), com_operad(3, true),
                             free_operad({{"g", 2, 1}}, 3).operad}) {
    const OperadPtr back = operad_from_json(operad_to_json(*o));
    CHECK(operad_to_json(*back) == operad_to_json(*o));
    CHECK(check_operad_axioms(*back).ok());
  }
  Json broken = operad_to_json(*s0_operad(2));
  broken.erase("unit");
  CHECK_THROWS_AS(operad_from_json(broken), Error);
}

TEST_CASE("coalgebras serialize with tuple labels") {
  const OperadPtr s0 = s0_operad(2);
  const OperadCoalgebra x = simplex_coalgebra(s0);
  const Json j = coalgebra_to_json(x);
  CHECK(j["structure"]["1"]["(1)"]["e"]["e"] == 1);
  CHECK(j["structure"]["2"]["(1,2)"]["e"]["(v0,e)"] == 1);
  CHECK(j["structure"]["2"]["(1,2)"]["e"]["(e,v1)"] == 1);
}

TEST_CASE("projection off a cone is a homology equivalence") {
  const ComplexPtr d = share(unit_interval());
  const ChainMap id = make_homology_equivalence(d, share(zero_complex()));
  CHECK(id.flat() == SparseMatrix::identity(d->total_rank()));

  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const ComplexPtr dd = small_complex(rng, 4, "d");
    const ComplexPtr a = small_complex(rng, 3, "a");
    const ChainMap f = make_homology_equivalence(dd, a);
    CHECK(f.is_chain_map());
    CHECK(is_homology_equivalence(f).equivalent);
    CHECK(homology(*f.source(), -1, 3) == homology(*dd, -1, 3));
  }
}

TEST_CASE("invariance holds over S0 and free operads") {
  Rng rng(3);
  const OperadPtr s0 = s0_operad(2);
  for (int i = 0; i < 5; ++i) {
    const ChainMap f = make_homology_equivalence(small_complex(rng, 3, "d"), small_complex(rng, 2, "a"));
    const Json r = invariance_experiment(s0, f);
    CHECK(r["hypothesis"]["holds"] == true);
    CHECK(r["cogenerators"]["holds"] == true);
    CHECK(r["arities"].size() == 2);
    CHECK(r["holds"] == true);
  }
  const OperadPtr free = free_operad({{"g", 2, 1}}, 3).operad;
  const ChainMap f = make_homology_equivalence(small_complex(rng, 2, "d"), small_complex(rng, 2, "a"));
  CHECK(invariance_experiment(free, f)["holds"] == true);

  const ComplexPtr c = small_complex(rng, 3);
  const Json id = invariance_experiment(s0_operad(3), ChainMap::identity(c));
  CHECK(id["holds"] == true);
  CHECK(id["failures"].empty());
}

TEST_CASE("invariance never fails over free operads") {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const OperadPtr free = free_operad({{"g", 2, uniform_int(rng, 0, 1)}}, uniform_int(rng, 2, 3)).operad;
    const ChainMap f = make_homology_equivalence(small_complex(rng, 3, "d"), small_complex(rng, 2, "a"));
    const Json r = invariance_experiment(free, f);
    REQUIRE(r["hypothesis"]["holds"] == true);
    REQUIRE(r["holds"] == true);
  }
}

TEST_CASE("Com counterexample") {
  const Json r = com_counterexample();
  CHECK(r["reproduced"] == true);
  CHECK(r["cogenerators_equivalent"] == true);
  CHECK(r["com2_projective"] == false);
  CHECK(r["splitting_search"]["sections_found"] == 0);
  CHECK(r["splitting_search"]["searched"] == 49);
  CHECK(r["report"]["holds"] == false);
  CHECK(r["report"]["arities"]["1"]["holds"] == true);
  const Json& h0 = r["report"]["arities"]["2"]["source_homology"]["0"];
  CHECK(h0["torsion"] == Json::array({2}));
  CHECK(r["report"]["failures"][0]["arity"] == 2);
  CHECK(r["report"]["failures"][0]["source"] == "Z/2");
}

TEST_CASE("colimit commutation") {
  const OperadPtr s0 = s0_operad(2);
  const ComplexPtr i = share(unit_interval());
  const Json one = colimit_commutation_check(i, {{"p0", "p1", "q"}}, s0);
  CHECK(one["holds"] == true);
  CHECK(one["steps"] == 1);

  const Json two = colimit_commutation_check(i, {{"p0"}, {"p0", "p1"}, {"p0", "p1", "q"}}, s0);
  CHECK(two["holds"] == true);
  CHECK(two["cofree_rank"] == 12);

  CHECK_THROWS_AS(colimit_commutation_check(i, {{"q"}, {"p0", "p1", "q"}}, s0), Error);
  CHECK_THROWS_AS(colimit_commutation_check(i, {{"p0"}, {"p1"}, {"p0", "p1", "q"}}, s0), Error);
  CHECK_THROWS_AS(colimit_commutation_check(i, {{"p0"}, {"p0", "p1"}}, s0), Error);

  Rng rng(17);
  for (int k = 0; k < 4; ++k) {
    const ComplexPtr c = small_complex(rng, 4);
    const auto filt = random_filtration(rng, *c, 3);
    REQUIRE(filt.size() == 3);
    CHECK(colimit_commutation_check(c, filt, s0)["holds"] == true);
    CHECK(colimit_commutation_check(c, degree_filtration(*c), s0)["holds"] == true);
  }
}

TEST_CASE("splitting identity") {
  const FreeOperad fo = free_operad({{"g", 2, 0}}, 3);
  const ComplexPtr c = share(unit_interval());

  // I = (g): the kernel is C itself and the ideal side carries the rest.
  const Json full = splitting_check(fo.operad, {{2, SparseVector{{fo.generator_index(0), 1}}}}, c);
  CHECK(full["holds"] == true);
  CHECK(full["degrees"]["0"]["ideal_kernel"] == 2);
  CHECK(full["degrees"]["0"]["kernel_of_kappa"] == 0);

  // I = 0: everything is in the kernel and the image is C.
  const Json zero = splitting_check(fo.operad, {}, c);
  CHECK(zero["holds"] == true);
  CHECK(zero["degrees"]["0"]["image"] == 2);
  CHECK(zero["degrees"]["1"]["image"] == 1);

  CHECK_THROWS_AS(splitting_check(fo.operad, {{1, SparseVector{{0, 1}}}}, c), Error);
  CHECK_THROWS_AS(splitting_check(s0_operad(3), {}, c), Error);

  Rng rng(23);
  for (int k = 0; k < 3; ++k) {
    const auto gens = random_ideal_generators(rng, fo.operad);
    const Json r = splitting_check(fo.operad, gens, small_complex(rng, 2));
    CHECK(r["holds"] == true);
  }
}

TEST_CASE("spec parsing and reproducible reports") {
  CHECK_THROWS_AS(ExperimentSpec::from_json(Json::parse(R"({"operad":"S0","bogus":1})")), Error);
  CHECK_THROWS_AS(ExperimentSpec::from_json(Json::parse(R"({"N":0})")), Error);
  CHECK_THROWS_AS(spec_operad(ExperimentSpec::from_json(Json::parse(R"({"operad":"Lie"})"))), Error);

  const ExperimentSpec spec = ExperimentSpec::from_json(Json::parse(R"({"operad":"S0","N":2,"seed":9,"instances":2})"));
  CHECK(ExperimentSpec::from_json(spec.to_json()).to_json() == spec.to_json());
  const Json a = run_invariance(spec);
  CHECK(a.dump() == run_invariance(spec).dump());
  CHECK(a["holds"] == true);
  CHECK(a["instances"].size() == 2);

  ExperimentSpec other = spec;
  other.seed = 10;
  CHECK(run_invariance(other).dump() != a.dump());

  const ExperimentSpec split = ExperimentSpec::from_json(Json::parse(
      R"J({"operad":"free","generators":[{"name":"g","arity":2}],"N":3,"seed":1,
          "complex":{"degrees":{"0":["p0","p1"],"1":["q"]},"d":{"1":{"q":{"p1":1,"p0":-1}}}},
          "ideal":[{"arity":2,"element":{"g(1,2)":1,"g(2,1)":-1}}]})J"));
  const Json s = run_splitting(split);
  CHECK(s["holds"] == true);
}

TEST_CASE("flattened reports") {
  const Json r = Json::parse(R"({"b":{"x":[1,2],"y":"Z/2"},"a":true,"c":[{"k":1}]})");
  CHECK(flatten_report(r) == "a: true\nb.x: [1,2]\nb.y: Z/2\nc.0.k: 1\n");
}
