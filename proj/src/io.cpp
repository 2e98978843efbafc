#include "cofree/io.hpp"

#include <fstream>
#include <limits>

namespace cofree {

namespace {

std::size_t flat_of_label(const ChainComplex& c, int degree, const std::string& label, const char* what) {
  auto idx = c.flat_index_of(degree, label);
  if (!idx) throw Error(std::string(what) + ": unknown label " + label + " in degree " + std::to_string(degree));
  return *idx;
}

int degree_key(const std::string& key) {
  std::size_t used = 0;
  int d = 0;
  try {
    d = std::stoi(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || key.empty()) throw Error("CXF: degree key is not an integer: " + key);
  return d;
}

std::string tuple_label(const ChainComplex& c, const std::vector<std::size_t>& t) {
  if (t.size() == 1) return c.label_of(t[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + c.label_of(t[i]);
  return s + ")";
}

}  // namespace

Json integer_to_json(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return Json(static_cast<std::int64_t>(x));
  return Json(x.str());
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>());
    } catch (const std::exception&) {
      throw Error("not an integer: " + j.dump());
    }
  }
  throw Error("not an integer: " + j.dump());
}

Json matrix_to_json(const IntegerMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(integer_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

IntegerMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw Error("matrix: expected a list of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  IntegerMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw Error("matrix: ragged rows");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = integer_from_json(j[i][k]);
  }
  return m;
}

Json complex_to_json(const ChainComplex& c) {
  Json out;
  out["degrees"] = Json::object();
  out["d"] = Json::object();
  for (const auto& [deg, labels] : c.basis().by_degree()) out["degrees"][std::to_string(deg)] = labels;
  for (std::size_t j = 0; j < c.total_rank(); ++j) {
    const SparseVector& col = c.boundary(j);
    if (col.empty()) continue;
    Json entry = Json::object();
    for (const auto& [i, v] : col) entry[c.label_of(i)] = integer_to_json(v);
    out["d"][std::to_string(c.degree_of(j))][c.label_of(j)] = std::move(entry);
  }
  return out;
}

ChainComplex complex_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("degrees")) throw Error("CXF: missing \"degrees\"");
  std::map<int, std::vector<std::string>> by_degree;
  for (const auto& [key, labels] : j.at("degrees").items()) {
    if (!labels.is_array()) throw Error("CXF: labels of degree " + key + " must be a list");
    std::vector<std::string> ls;
    for (const auto& l : labels) ls.push_back(l.get<std::string>());
    if (!ls.empty()) by_degree[degree_key(key)] = std::move(ls);
  }
  GradedBasis basis(std::move(by_degree));
  ChainComplex shape(basis, {});
  SparseMatrix d(shape.total_rank(), shape.total_rank());
  if (j.contains("d"))
    for (const auto& [key, sources] : j.at("d").items()) {
      const int deg = degree_key(key);
      for (const auto& [src, targets] : sources.items()) {
        const std::size_t s = flat_of_label(shape, deg, src, "CXF");
        for (const auto& [tgt, coeff] : targets.items())
          d.add_entry(flat_of_label(shape, deg - 1, tgt, "CXF"), s, integer_from_json(coeff));
      }
    }
  ChainComplex c = ChainComplex::from_flat(basis, d);
  if (!c.differential_squares_to_zero()) throw Error("CXF: d o d is not zero");
  return c;
}

Json homology_to_json(const HomologyGroup& h) {
  Json t = Json::array();
  for (const auto& x : h.torsion) t.push_back(integer_to_json(x));
  return Json{{"free_rank", h.free_rank}, {"torsion", t}};
}

Json homology_table_to_json(const HomologyTable& t) {
  Json out = Json::object();
  for (const auto& [d, h] : t) out[std::to_string(d)] = homology_to_json(h);
  return out;
}

Json operad_to_json(const TruncatedOperad& o) {
  Json out;
  out["N"] = o.arity_bound();
  out["unital"] = o.unital();
  out["name"] = o.name();
  out["components"] = Json::object();
  for (int n = o.min_arity(); n <= o.arity_bound(); ++n) {
    const SymmetricComplex& s = o.component(n);
    const ChainComplex& c = *s.complex();
    Json comp;
    comp["complex"] = complex_to_json(c);
    comp["action"] = Json::object();
    for (std::size_t i = 0; i < s.generators().size(); ++i) {
      Json gen = Json::object();
      for (std::size_t b = 0; b < c.total_rank(); ++b) {
        Json col = Json::object();
        for (const auto& [r, v] : s.generator(i).column(b)) col[c.label_of(r)] = integer_to_json(v);
        gen[c.label_of(b)] = std::move(col);
      }
      comp["action"][std::to_string(i + 1)] = std::move(gen);
    }
    out["components"][std::to_string(n)] = std::move(comp);
  }
  Json unit = Json::object();
  for (const auto& [i, v] : o.unit()) unit[o.complex(1).label_of(i)] = integer_to_json(v);
  out["unit"] = unit;
  out["compose"] = Json::object();
  for (const auto& [key, table] : o.tables()) {
    const ChainComplex &cm = o.complex(key.m), &cn = o.complex(key.n), &cr = o.complex(key.m + key.n - 1);
    Json t = Json::object();
    for (std::size_t a = 0; a < cm.total_rank(); ++a)
      for (std::size_t b = 0; b < cn.total_rank(); ++b) {
        const SparseVector& r = table[a * cn.total_rank() + b];
        if (r.empty()) continue;
        Json e = Json::object();
        for (const auto& [i, v] : r) e[cr.label_of(i)] = integer_to_json(v);
        t[cm.label_of(a)][cn.label_of(b)] = std::move(e);
      }
    out["compose"][std::to_string(key.m) + "," + std::to_string(key.slot) + "," + std::to_string(key.n)] = std::move(t);
  }
  return out;
}

OperadPtr operad_from_json(const Json& j) {
  for (const char* k : {"N", "unital", "components", "unit", "compose"})
    if (!j.contains(k)) throw Error(std::string("operad file: missing \"") + k + "\"");
  const int n_bound = j.at("N").get<int>();
  const bool unital = j.at("unital").get<bool>();
  if (n_bound < 1) throw Error("operad file: N must be at least 1");
  std::map<int, SymmetricComplex> comps;
  std::map<int, ComplexPtr> complexes;
  // Labels are unique per component; find them in any degree.
  auto find_label = [](const ChainComplex& c, const std::string& label) {
    for (std::size_t i = 0; i < c.total_rank(); ++i)
      if (c.label_of(i) == label) return i;
    throw Error("operad file: unknown label " + label);
  };
  for (int n = unital ? 0 : 1; n <= n_bound; ++n) {
    const std::string key = std::to_string(n);
    if (!j.at("components").contains(key)) throw Error("operad file: missing component " + key);
    const Json& comp = j.at("components").at(key);
    ComplexPtr c = share(complex_from_json(comp.at("complex")));
    std::vector<SparseMatrix> gens;
    for (int i = 1; i < n; ++i) {
      SparseMatrix g(c->total_rank(), c->total_rank());
      const std::string ik = std::to_string(i);
      if (!comp.contains("action") || !comp.at("action").contains(ik))
        throw Error("operad file: missing action generator " + ik + " of arity " + key);
      for (const auto& [src, col] : comp.at("action").at(ik).items())
        for (const auto& [tgt, v] : col.items()) g.add_entry(find_label(*c, tgt), find_label(*c, src), integer_from_json(v));
      gens.push_back(std::move(g));
    }
    complexes[n] = c;
    comps.emplace(n, SymmetricComplex(c, n, std::move(gens)));
  }
  SparseVector unit;
  for (const auto& [label, v] : j.at("unit").items()) add_entry(unit, find_label(*complexes.at(1), label), integer_from_json(v));
  std::map<CompositionKey, CompositionTable> tables;
  for (const auto& [key, t] : j.at("compose").items()) {
    CompositionKey k;
    if (std::sscanf(key.c_str(), "%d,%d,%d", &k.m, &k.slot, &k.n) != 3) throw Error("operad file: bad compose key " + key);
    if (!complexes.count(k.m) || !complexes.count(k.n) || !complexes.count(k.m + k.n - 1))
      throw Error("operad file: compose key out of range " + key);
    const ChainComplex &cm = *complexes.at(k.m), &cn = *complexes.at(k.n), &cr = *complexes.at(k.m + k.n - 1);
    CompositionTable table(cm.total_rank() * cn.total_rank());
    for (const auto& [a, row] : t.items())
      for (const auto& [b, res] : row.items()) {
        SparseVector& dst = table[find_label(cm, a) * cn.total_rank() + find_label(cn, b)];
        for (const auto& [c, v] : res.items()) add_entry(dst, find_label(cr, c), integer_from_json(v));
      }
    tables.emplace(k, std::move(table));
  }
  const std::string name = j.contains("name") ? j.at("name").get<std::string>() : "";
  return std::make_shared<TruncatedOperad>(n_bound, unital, std::move(comps), std::move(unit), std::move(tables), name);
}

Json coalgebra_to_json(const OperadCoalgebra& x) {
  Json out;
  const ChainComplex& c = *x.carrier;
  out["carrier"] = complex_to_json(c);
  out["structure"] = Json::object();
  for (const auto& [n, maps] : x.structure) {
    Json arity = Json::object();
    const TupleCodec codec = x.codec(n);
    for (std::size_t b = 0; b < maps.size(); ++b) {
      Json m = Json::object();
      for (std::size_t col = 0; col < c.total_rank(); ++col) {
        if (maps[b].column(col).empty()) continue;
        Json e = Json::object();
        for (const auto& [code, v] : maps[b].column(col))
          e[n == 0 ? std::string("1") : tuple_label(c, codec.decode(code))] = integer_to_json(v);
        m[c.label_of(col)] = std::move(e);
      }
      arity[x.operad->complex(n).label_of(b)] = std::move(m);
    }
    out["structure"][std::to_string(n)] = std::move(arity);
  }
  return out;
}

Json axiom_report_to_json(const AxiomReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) v.push_back(Json{{"law", x.law}, {"witness", x.witness}});
  return Json{{"checks", r.checks}, {"ok", r.ok()}, {"violations", v}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace cofree
