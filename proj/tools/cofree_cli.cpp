// Command line front end for the experiment harness. Reports are JSON with sorted keys, or
// "key: value" lines with --format text; output is deterministic unless --timing is given.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cofree/lab.hpp"

using namespace cofree;

namespace {

OperadPtr builtin_operad(const std::string& name, int n, bool unital) {
  if (name == "S0") return s0_operad(n, unital);
  if (name == "Com") return com_operad(n, unital);
  if (name == "free2") {
    if (unital) throw Error("free2 is non-unital");
    return free_operad({{"g", 2, 0}}, n).operad;
  }
  throw Error("unknown builtin operad " + name + " (S0, Com or free2)");
}

Json snf_report(const IntegerMatrix& m) {
  const SmithDecomposition s = smith_normal_form(m);
  Json factors = Json::array();
  for (const auto& f : s.invariant_factors) factors.push_back(integer_to_json(f));
  return Json{{"matrix", matrix_to_json(m)},
              {"U", matrix_to_json(s.U)},
              {"V", matrix_to_json(s.V)},
              {"D", matrix_to_json(s.D)},
              {"invariant_factors", factors},
              {"rank", rank(m)},
              {"holds", s.U * m * s.V == s.D}};
}

Json homology_report(const ChainComplex& c) {
  Json ranks = Json::object();
  for (int d : c.degrees()) ranks[std::to_string(d)] = c.rank(d);
  Json text = Json::object();
  const HomologyTable h = homology(c);
  for (const auto& [d, g] : h) text[std::to_string(d)] = g.to_string();
  return Json{{"ranks", ranks}, {"homology", homology_table_to_json(h)}, {"groups", text}};
}

Json operad_check_report(const OperadPtr& o) {
  Json proj = Json::object();
  for (int n = std::max(1, o->min_arity()); n <= o->arity_bound(); ++n) {
    const ProjectivityReport r = check_projective(o->component(n));
    proj[std::to_string(n)] = Json{{"projective", r.projective}, {"free", r.free}};
  }
  Json ranks = Json::object();
  for (int n = o->min_arity(); n <= o->arity_bound(); ++n) ranks[std::to_string(n)] = o->rank(n);
  const AxiomReport axioms = check_operad_axioms(*o);
  return Json{{"name", o->name()},
              {"N", o->arity_bound()},
              {"unital", o->unital()},
              {"ranks", ranks},
              {"projectivity", proj},
              {"axioms", axiom_report_to_json(axioms)},
              {"holds", axioms.ok()}};
}

Json cofree_report(const OperadPtr& v, const ComplexPtr& c, bool pointed) {
  const TruncatedCofree t = truncated_cofree(v, c, pointed ? CofreeVariant::Pointed : CofreeVariant::General);
  const AxiomReport axioms = validate_coalgebra(t.coalgebra);
  Json out = homology_report(*t.carrier.complex);
  Json arities = Json::object();
  for (const auto& [n, f] : t.carrier.factors) arities[std::to_string(n)] = f.complex->total_rank();
  out["arity_ranks"] = arities;
  out["carrier"] = complex_to_json(*t.carrier.complex);
  out["coalgebra_axioms"] = axiom_report_to_json(axioms);
  out["epsilon_chain_map"] = t.epsilon.is_chain_map();
  out["basepoint"] = t.basepoint ? Json(t.carrier.complex->label_of(*t.basepoint)) : Json(nullptr);
  out["holds"] = axioms.ok() && t.epsilon.is_chain_map();
  return out;
}

ExperimentSpec spec_from(const std::string& file, std::uint64_t seed) {
  if (file.empty()) {
    ExperimentSpec s;
    s.seed = seed;
    return s;
  }
  return ExperimentSpec::from_json(read_json_file(file));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated cofree coalgebras over operads: exact experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_file, format = "text";
  std::uint64_t seed = 1;
  bool timing = false;
  app.add_option("--out", out_file, "Write the report to FILE");
  app.add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--seed", seed, "Random seed");
  app.add_flag("--timing", timing, "Add wall-clock time to the report");

  std::function<Json()> run;

  auto* snf = app.add_subcommand("snf", "Smith normal form of an integer matrix (JSON list of rows)");
  std::string snf_file, snf_matrix;
  snf->add_option("file", snf_file, "Matrix file");
  snf->add_option("--matrix", snf_matrix, "Matrix given inline");
  snf->callback([&] {
    run = [&] {
      if (snf_file.empty() == snf_matrix.empty()) throw CLI::ValidationError("snf", "give exactly one of FILE and --matrix");
      return snf_report(matrix_from_json(snf_file.empty() ? Json::parse(snf_matrix) : read_json_file(snf_file)));
    };
  });

  auto* hom = app.add_subcommand("homology", "Homology of a CXF complex");
  std::string hom_file;
  hom->add_option("file", hom_file, "CXF file")->required();
  hom->callback([&] { run = [&] { return homology_report(complex_from_json(read_json_file(hom_file))); }; });

  auto* coend = app.add_subcommand("coend-interval", "Relative coendomorphisms of the unit interval, n = 1..K");
  int coend_n = 3;
  coend->add_option("--n", coend_n, "Largest arity")->required()->check(CLI::Range(1, 6));
  coend->callback([&] { run = [&] { return coend_interval_report(coend_n); }; });

  auto* check = app.add_subcommand("check-operad", "Operad axioms and projectivity");
  std::string check_file, check_builtin;
  int check_n = 3;
  bool check_unital = false;
  check->add_option("file", check_file, "Operad file");
  check->add_option("--builtin", check_builtin, "S0, Com or free2");
  check->add_option("--arity", check_n, "Arity bound of a builtin")->check(CLI::Range(1, 6));
  check->add_flag("--unital", check_unital, "Unital builtin");
  check->callback([&] {
    run = [&] {
      if (check_file.empty() == check_builtin.empty())
        throw CLI::ValidationError("check-operad", "give exactly one of FILE and --builtin");
      return operad_check_report(check_file.empty() ? builtin_operad(check_builtin, check_n, check_unital)
                                                    : operad_from_json(read_json_file(check_file)));
    };
  });

  auto* cofree = app.add_subcommand("cofree", "Truncated cofree coalgebra on a complex");
  std::string cof_operad, cof_builtin, cof_complex;
  int cof_n = 2;
  bool cof_pointed = false;
  cofree->add_option("--operad", cof_operad, "Operad file");
  cofree->add_option("--builtin", cof_builtin, "S0, Com or free2");
  cofree->add_option("--complex", cof_complex, "CXF file")->required();
  cofree->add_option("--arity", cof_n, "Arity bound")->required()->check(CLI::Range(1, 6));
  cofree->add_flag("--pointed", cof_pointed, "Pointed variant (unital operad)");
  cofree->callback([&] {
    run = [&] {
      if (cof_operad.empty() == cof_builtin.empty())
        throw CLI::ValidationError("cofree", "give exactly one of --operad and --builtin");
      OperadPtr v = cof_operad.empty() ? builtin_operad(cof_builtin, cof_n, cof_pointed)
                                       : operad_from_json(read_json_file(cof_operad));
      if (v->arity_bound() != cof_n)
        throw Error("cofree: the operad file has N = " + std::to_string(v->arity_bound()));
      return cofree_report(v, share(complex_from_json(read_json_file(cof_complex))), cof_pointed);
    };
  });

  auto* inv = app.add_subcommand("invariance", "Homology invariance under a projection off a cone");
  std::string inv_spec;
  std::optional<std::uint64_t> inv_seed;
  inv->add_option("--spec", inv_spec, "Experiment spec file");
  inv->add_option("--seed", inv_seed, "Seed for the default spec");
  inv->callback([&] {
    run = [&] {
      if (!inv_spec.empty() && inv_seed) throw CLI::ValidationError("invariance", "--spec and --seed exclude each other");
      return run_invariance(spec_from(inv_spec, inv_seed.value_or(seed)));
    };
  });

  auto* com = app.add_subcommand("counterexample-com", "Com with a contractible cogenerator");
  com->callback([&] { run = [] { return com_counterexample(); }; });

  auto* col = app.add_subcommand("colimit", "Truncated cofree of a filtered complex against the colimit");
  std::string col_spec;
  col->add_option("--spec", col_spec, "Experiment spec file");
  col->callback([&] {
    run = [&] {
      ExperimentSpec s = spec_from(col_spec, seed);
      if (col_spec.empty()) s.arity_bound = 2;
      return run_colimit(s);
    };
  });

  auto* split = app.add_subcommand("splitting", "Ideal kernel and splitting over a free operad");
  std::string split_spec;
  split->add_option("--spec", split_spec, "Experiment spec file");
  split->callback([&] {
    run = [&] {
      ExperimentSpec s = spec_from(split_spec, seed);
      if (split_spec.empty()) {
        s.operad = "free";
        s.generators = {{"g", 2, 0}};
      }
      return run_splitting(s);
    };
  });

  auto* op = app.add_subcommand("operad", "Print a builtin operad in the operad file format");
  std::string op_builtin;
  int op_n = 2;
  bool op_unital = false;
  op->add_option("--builtin", op_builtin, "S0, Com or free2")->required();
  op->add_option("--arity", op_n, "Arity bound")->check(CLI::Range(1, 6));
  op->add_flag("--unital", op_unital, "Unital");
  op->callback([&] { run = [&] { return operad_to_json(*builtin_operad(op_builtin, op_n, op_unital)); }; });

  CLI11_PARSE(app, argc, argv);

  Json report;
  try {
    const auto start = std::chrono::steady_clock::now();
    report = run();
    if (timing)
      report["timing_ms"] =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string text = format == "text" ? flatten_report(report) : report.dump(2) + "\n";
  if (out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_file);
    if (!out) {
      std::cerr << "error: cannot write " << out_file << "\n";
      return 1;
    }
    out << text;
  }
  // 3 marks a completed run whose checks failed.
  return report.contains("holds") && report["holds"] == false ? 3 : 0;
}
