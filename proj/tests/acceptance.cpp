// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "cofree/lab.hpp"
#include "cofree/permutation.hpp"

using namespace cofree;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

ComplexPtr random_small(Rng& rng, int max_total, const std::string& prefix, int lo = 0, int span = 2) {
  RandomComplexParams p;
  p.min_degree = lo;
  p.degree_span = span;
  p.max_rank = 2;
  p.max_total_rank = max_total;
  p.min_total_rank = 1;
  p.entry_bound = 2;
  p.prefix = prefix;
  return share(random_complex(rng, p));
}

// Rank by fraction-free (Bareiss) elimination; shares no code with the Smith form.
std::size_t bareiss_rank(IntegerMatrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    m.swap_rows(piv, r);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) m(i, j) = (m(r, c) * m(i, j) - m(i, c) * m(r, j)) / prev;
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

bool unimodular(const IntegerMatrix& u) {
  if (u.rows() != u.cols()) return false;
  const auto f = invariant_factors(u);
  if (f.size() != u.rows()) return false;
  for (const auto& x : f)
    if (x != 1) return false;
  return true;
}

Outcome criterion1() {
  const Json r = coend_interval_report(4);
  std::string detail;
  for (int n = 1; n <= 4; ++n) {
    const Json& x = r["n"][std::to_string(n)];
    detail += "n=" + std::to_string(n) + ": degree-0 rank " + x["degree0_rank"].dump() + " (expected " +
              x["expected_paths"].dump() + "), other degrees zero " + x["other_degrees_zero"].dump() +
              ", free transitive " + x["free_transitive"].dump() + "; ";
  }
  return {r["holds"].get<bool>(), detail};
}

Outcome criterion2() {
  Rng rng(2002);
  std::size_t quadruples = 0, constructions = 0;
  for (int t = 0; t < 500; ++t) {
    ComplexPtr a = random_small(rng, 3, "a", -1, 3), b = random_small(rng, 3, "b", -1, 3),
               c = random_small(rng, 3, "c", -1, 3), d = random_small(rng, 3, "d", -1, 3),
               e = random_small(rng, 3, "e", -1, 3), f = random_small(rng, 3, "f", -1, 3);
    const int df2 = uniform_int(rng, -1, 1), dg2 = uniform_int(rng, -1, 1);
    const int df1 = uniform_int(rng, -1, 1), dg1 = uniform_int(rng, -1, 1);
    const ChainMap f2 = random_map(rng, a, b, df2), f1 = random_map(rng, b, c, df1);
    const ChainMap g2 = random_map(rng, d, e, dg2), g1 = random_map(rng, e, f, dg1);
    const ChainMap lhs = tensor(f1, g1).compose(tensor(f2, g2));
    const ChainMap rhs = tensor(f1.compose(f2), g1.compose(g2)).scaled(koszul::swap_sign(df2, dg1));
    if (lhs.flat() != rhs.flat()) return {false, "interchange sign fails at quadruple " + std::to_string(t)};
    ++quadruples;
  }
  for (int t = 0; t < 200; ++t) {
    ComplexPtr a = random_small(rng, 3, "a", -1, 3), b = random_small(rng, 3, "b", -1, 3);
    ChainComplex out;
    switch (uniform_int(rng, 0, 4)) {
      case 0: out = tensor(*a, *b); break;
      case 1: out = hom_complex(*a, *b, uniform_int(rng, 0, 1) ? HomConvention::Standard : HomConvention::Precomposed); break;
      case 2: out = mapping_cone(random_chain_map(rng, a, b)); break;
      case 3: out = *cone_and_suspension(share(tensor(*a, *b))).cone; break;
      default: out = direct_sum(suspension(*a), tensor(*b, unit_interval())); break;
    }
    if (!out.differential_squares_to_zero()) return {false, "d o d != 0 after construction " + std::to_string(t)};
    ++constructions;
  }
  return {true, std::to_string(quadruples) + " interchange quadruples, " + std::to_string(constructions) +
                    " constructions with d o d = 0"};
}

Outcome criterion3() {
  Rng rng(3003);
  for (int t = 0; t < 200; ++t) {
    const auto rows = static_cast<std::size_t>(uniform_int(rng, 1, 6));
    const auto cols = static_cast<std::size_t>(uniform_int(rng, 1, 6));
    IntegerMatrix m = random_matrix(rng, rows, cols, 5);
    // Some rank-deficient inputs: repeat a row.
    if (rows > 1 && uniform_int(rng, 0, 2) == 0)
      for (std::size_t k = 0; k < cols; ++k) m(rows - 1, k) = 2 * m(0, k);
    const SmithDecomposition s = smith_normal_form(m);
    if (s.U * m * s.V != s.D) return {false, "U M V != D at matrix " + std::to_string(t)};
    if (!unimodular(s.U) || !unimodular(s.V)) return {false, "non-unimodular transform at " + std::to_string(t)};
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        if (i != j && s.D(i, j) != 0) return {false, "D not diagonal at " + std::to_string(t)};
        if (i == j && s.D(i, j) != 0) {
          if (s.D(i, j) < 0 || (i > 0 && (s.D(i - 1, i - 1) == 0 || s.D(i, j) % s.D(i - 1, i - 1) != 0)))
            return {false, "divisibility chain broken at " + std::to_string(t)};
          ++nonzero;
        }
      }
    if (nonzero != bareiss_rank(m) || rank(m) != nonzero)
      return {false, "rank disagrees with the elimination oracle at " + std::to_string(t)};
  }
  return {true, "200 matrices: U M V = D, unimodular U and V, divisibility chains, ranks agree"};
}

Outcome criterion4() {
  Rng rng(4004);
  std::vector<std::pair<std::string, OperadPtr>> cases = {
      {"S0", s0_operad(4)}, {"Com", com_operad(4)}, {"free", free_operad({{"g", 2, 0}}, 4).operad}};
  for (int k = 0; k < 3; ++k) {
    RandomComplexParams p;
    p.degree_span = 2;
    p.max_rank = 2;
    p.max_total_rank = 3;
    p.min_total_rank = 1;
    cases.emplace_back("CoEnd#" + std::to_string(k), coend_operad(share(random_complex(rng, p)), 3).operad);
  }
  std::string detail;
  for (const auto& [name, o] : cases) {
    const AxiomReport r = check_operad_axioms(*o);
    if (!r.ok()) return {false, name + ": " + r.violations.front().law + " " + r.violations.front().witness};
    std::vector<std::tuple<CompositionKey, std::size_t, std::size_t>> entries;
    for (const auto& [key, table] : o->tables())
      for (std::size_t x = 0; x < table.size(); ++x)
        if (!table[x].empty()) entries.emplace_back(key, x / o->rank(key.n), x % o->rank(key.n));
    if (entries.empty()) return {false, name + ": no composition entries to corrupt"};
    const auto [key, a, b] = entries[uniform_int(rng, 0, static_cast<int>(entries.size()) - 1)];
    const AxiomReport bad = check_operad_axioms(o->with_flipped_entry(key, a, b));
    if (bad.ok()) return {false, name + ": injected fault not detected"};
    detail += name + " " + std::to_string(r.checks) + " checks, fault caught (" + bad.violations.front().law + "); ";
  }
  return {true, detail};
}

Outcome criterion5() {
  Rng rng(5005);
  std::size_t done = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = uniform_int(rng, 2, 3);
    OperadCoalgebra d;
    OperadPtr v;
    switch (t % 3) {
      case 0: v = s0_operad(n); d = random_s0_coalgebra(rng, v, 4); break;
      case 1: v = s0_operad(n, true); d = random_s0_coalgebra(rng, v, 4); break;
      default:
        v = free_operad({{"g", 2, uniform_int(rng, 0, 1)}}, n).operad;
        d = random_free_coalgebra(rng, v, random_small(rng, 3, "x"));
        break;
    }
    if (d.carrier->total_rank() > 4) return {false, "coalgebra larger than rank 4 at instance " + std::to_string(t)};
    const ComplexPtr c = random_small(rng, 2, "c");
    const ChainMap f = random_chain_map(rng, d.carrier, c);
    const TruncatedCofree tc = truncated_cofree(v, c, v->unital() ? CofreeVariant::Pointed : CofreeVariant::General);
    const ClassifyingMap cm = classifying_map(d, f, tc);
    if (!cm.triangle || !cm.unique || !cm.morphism)
      return {false, "instance " + std::to_string(t) + ": triangle " + std::to_string(cm.triangle) + ", unique " +
                         std::to_string(cm.unique) + ", morphism " + std::to_string(cm.morphism)};
    ++done;
  }
  return {true, std::to_string(done) + " instances: epsilon o alpha_f = f, unique solution, coalgebra morphism"};
}

Outcome criterion6() {
  Rng rng(6006);
  const OperadPtr v = s0_operad(3);
  std::size_t with_torsion = 0, largest = 0;
  for (int t = 0; t < 100; ++t) {
    RandomComplexParams p;
    p.degree_span = 2;
    p.max_rank = 2;
    p.max_total_rank = 3;
    p.min_total_rank = 1;
    p.entry_bound = 3;
    p.prefix = "d";
    const ComplexPtr d = share(random_complex(rng, p));
    const ChainMap f = make_homology_equivalence(d, random_small(rng, 2, "a"));
    const Json r = invariance_experiment(v, f);
    if (!r["holds"].get<bool>()) return {false, "instance " + std::to_string(t) + ": " + r["failures"].dump()};
    largest = std::max(largest, r["carrier"]["source_rank"].get<std::size_t>());
    for (const auto& [k, h] : r["carrier"]["target_homology"].items())
      if (!h["torsion"].empty()) {
        ++with_torsion;
        break;
      }
  }
  return {true, "100 instances: carrier homology agrees per degree and the induced map has an acyclic cone (" +
                    std::to_string(with_torsion) + " with torsion, carrier rank up to " + std::to_string(largest) + ")"};
}

Outcome criterion7() {
  const Json r = com_counterexample();
  const Json& h0 = r["report"]["arities"]["2"]["source_homology"]["0"];
  const std::string detail = "cogenerator equivalence " + r["cogenerators_equivalent"].dump() +
                             ", arity-2 H0 torsion " + h0["torsion"].dump() + ", Com(2) projective " +
                             r["com2_projective"].dump() + ", sections found " +
                             r["splitting_search"]["sections_found"].dump();
  const bool same = com_counterexample().dump() == r.dump();
  return {r["reproduced"].get<bool>() && same, detail + (same ? ", deterministic" : ", NOT deterministic")};
}

Outcome criterion8() {
  Rng rng(8008);
  for (int t = 0; t < 20; ++t) {
    const OperadPtr h = free_operad({{"g", 2, uniform_int(rng, 0, 1)}}, uniform_int(rng, 2, 3)).operad;
    const auto gens = random_ideal_generators(rng, h);
    const Json r = splitting_check(h, gens, random_small(rng, 3, "c"));
    if (!r["holds"].get<bool>()) return {false, "instance " + std::to_string(t) + ": " + r.dump()};
  }
  return {true, "20 instances: kernel matches the quotient cofree, closed under the structure, rank identity holds"};
}

Outcome criterion9() {
  Rng rng(9009);
  const OperadPtr v = s0_operad(2);
  for (int t = 0; t < 50; ++t) {
    RandomComplexParams p;
    p.degree_span = 3;
    p.max_rank = 2;
    p.max_total_rank = 4;
    p.min_total_rank = 3;
    const ComplexPtr c = share(random_complex(rng, p));
    const Json r = colimit_commutation_check(c, random_filtration(rng, *c, 3), v);
    const Json s = colimit_commutation_check(c, degree_filtration(*c), v);
    if (!r["holds"].get<bool>() || !s["holds"].get<bool>())
      return {false, "instance " + std::to_string(t) + ": " + r.dump() + " " + s.dump()};
  }
  return {true, "50 filtrations (and degree truncations): colimit equals the truncated cofree of the union"};
}

Outcome criterion10() {
  Rng rng(10010);
  const ComplexPtr interval = share(unit_interval());
  for (int t = 0; t < 20; ++t) {
    const bool unital = t % 2 == 1;
    const OperadPtr s0 = s0_operad(uniform_int(rng, 2, 3), unital);
    const OperadCoalgebra x = random_s0_coalgebra(rng, s0, 3);
    const CylinderCoalgebra cyl = cylinder_coalgebra(x);
    if (!cyl.restrictions_match || !validate_coalgebra(cyl.coalgebra).ok())
      return {false, "cylinder fails at instance " + std::to_string(t)};
    const ComplexPtr c = random_small(rng, 2, "c"), d = random_small(rng, 2, "d");
    const ChainMap f = random_chain_map(rng, share(tensor(*c, *interval)), d);
    const CofreeVariant variant = unital ? CofreeVariant::Pointed : CofreeVariant::General;
    const HomotopyLift h = cofree_homotopy_lift(s0, f, c, variant);
    if (!h.ends_match || !h.lift.is_chain_map()) return {false, "lift ends differ at instance " + std::to_string(t)};
  }
  return {true, "20 instances: cylinder restrictions at p0, p1 equal the structure; lifted ends equal induced maps"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "interval coendomorphisms", 30, criterion1},
      {2, "Koszul signs and complex integrity", 60, criterion2},
      {3, "Smith normal form", 0, criterion3},
      {4, "operad axiom suite", 120, criterion4},
      {5, "cofree universal property", 0, criterion5},
      {6, "homology invariance", 300, criterion6},
      {7, "projectivity is necessary", 0, criterion7},
      {8, "ideal kernel and splitting", 0, criterion8},
      {9, "colimit commutation", 0, criterion9},
      {10, "cylinder and homotopy lift", 0, criterion10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.detail += " time limit " + std::to_string(static_cast<int>(c.limit_s)) + " s exceeded";
    }
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %d (%s): %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
