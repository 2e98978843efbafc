#include "cofree/coalgebra.hpp"

#include <functional>
#include <sstream>

namespace cofree {

namespace {

int sign_of(long long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

// T(v)(phi) carries (-1)^(|v||phi|) for the adjoint of phi(gamma(v; -)), and the classifying map
// evaluates d against v with (-1)^(|v||d|).
constexpr bool kAdjointSign = true;

SparseVector unit_vector(std::size_t i) { return SparseVector{{i, Integer(1)}}; }

// gamma(root; operands) with the arity-0 operands inserted first (right to left), so that no
// intermediate composite exceeds the bound. Arity 0 lives in degree 0, so no sign arises.
SparseVector bounded_composition(const TruncatedOperad& v, int k, const SparseVector& root,
                                 const std::vector<CompositionOperand>& operands) {
  SparseVector r = root;
  int arity = k;
  std::vector<CompositionOperand> rest;
  for (int i = k - 1; i >= 0; --i)
    if (operands[i] && operands[i]->first == 0) {
      r = v.compose(arity, r, i + 1, 0, operands[i]->second);
      --arity;
    }
  for (const auto& op : operands)
    if (!(op && op->first == 0)) rest.push_back(op);
  return generalized_composition(v, arity, r, rest);
}

IntegerMatrix dense_from(const std::vector<SparseVector>& cols, std::size_t rows) {
  IntegerMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, c] : cols[j]) m(i, j) = c;
  return m;
}

bool same_operad_shape(const TruncatedOperad& a, const TruncatedOperad& b) {
  if (a.arity_bound() != b.arity_bound() || a.unital() != b.unital()) return false;
  for (int n = a.min_arity(); n <= a.arity_bound(); ++n)
    if (a.rank(n) != b.rank(n)) return false;
  return true;
}

}  // namespace

namespace tensor_codes {

int degree(const ChainComplex& c, const TupleCodec& codec, std::size_t code) {
  int d = 0;
  for (std::size_t x : codec.decode(code)) d += c.degree_of(x);
  return d;
}

SparseVector boundary(const ChainComplex& c, int n, const SparseVector& x) {
  TupleCodec codec(c.total_rank(), n);
  SparseVector out;
  for (const auto& [code, coeff] : x) {
    std::vector<std::size_t> t = codec.decode(code);
    int before = 0;
    for (int l = 0; l < n; ++l) {
      const int s = sign_of(before);
      for (const auto& [y, dc] : c.boundary(t[l])) {
        std::vector<std::size_t> u = t;
        u[l] = y;
        add_entry(out, codec.encode(u), coeff * dc * s);
      }
      before += c.degree_of(t[l]);
    }
  }
  return out;
}

SparseVector permute(const ChainComplex& c, const Permutation& sigma, const SparseVector& x) {
  const int n = sigma.size();
  TupleCodec codec(c.total_rank(), n);
  SparseVector out;
  for (const auto& [code, coeff] : x) {
    std::vector<std::size_t> t = codec.decode(code);
    std::vector<int> degs;
    for (std::size_t y : t) degs.push_back(c.degree_of(y));
    auto [u, s] = permute_tuple(t, degs, sigma);
    add_entry(out, codec.encode(u), coeff * s);
  }
  return out;
}

SparseVector insert(const ChainComplex& c, int m, int slot, const SparseMatrix& g, int g_degree, int k,
                    const SparseVector& x) {
  const std::size_t r = c.total_rank();
  TupleCodec in(r, m), inner(r, k), out_codec(r, m + k - 1);
  SparseVector out;
  for (const auto& [code, coeff] : x) {
    std::vector<std::size_t> t = in.decode(code);
    int before = 0;
    for (int l = 0; l + 1 < slot; ++l) before += c.degree_of(t[l]);
    const int s = sign_of(static_cast<long long>(g_degree) * before);
    for (const auto& [gc, gv] : g.column(t[slot - 1])) {
      std::vector<std::size_t> u(t.begin(), t.begin() + (slot - 1));
      for (std::size_t y : inner.decode(gc)) u.push_back(y);
      u.insert(u.end(), t.begin() + slot, t.end());
      add_entry(out, out_codec.encode(u), coeff * gv * s);
    }
  }
  return out;
}

SparseVector product(std::size_t rank, const std::vector<SparseVector>& factors) {
  SparseVector acc{{0, Integer(1)}};
  for (const auto& f : factors) {
    SparseVector next;
    for (const auto& [code, a] : acc)
      for (const auto& [i, b] : f) add_entry(next, code * rank + i, a * b);
    acc = std::move(next);
    if (acc.empty()) break;
  }
  return acc;
}

SparseVector power_map(const SparseMatrix& f, std::size_t source_rank, std::size_t target_rank, int n,
                       const SparseVector& x) {
  TupleCodec codec(source_rank, n);
  SparseVector out;
  for (const auto& [code, coeff] : x) {
    std::vector<SparseVector> cols;
    for (std::size_t y : codec.decode(code)) cols.push_back(f.column(y));
    add_scaled(out, product(target_rank, cols), coeff);
  }
  return out;
}

}  // namespace tensor_codes

SparseVector OperadCoalgebra::apply(int n, const SparseVector& v, const SparseVector& x) const {
  SparseVector out;
  const auto& maps = structure.at(n);
  for (const auto& [b, c] : v) add_scaled(out, maps.at(b).apply(x), c);
  return out;
}

AxiomReport validate_coalgebra(const OperadCoalgebra& x, std::size_t max_violations) {
  AxiomReport rep;
  auto record = [&](bool ok, const std::string& law, const std::function<std::string()>& witness) {
    ++rep.checks;
    if (!ok && rep.violations.size() < max_violations) rep.violations.push_back({law, witness()});
  };
  const TruncatedOperad& v = *x.operad;
  const ChainComplex& c = *x.carrier;
  const std::size_t r = c.total_rank();
  const int lo = v.min_arity(), hi = v.arity_bound();
  auto vlabel = [&](int n, std::size_t b) { return v.complex(n).label_of(b) + "[" + std::to_string(n) + "]"; };

  for (int n = lo; n <= hi; ++n) {
    auto it = x.structure.find(n);
    bool ok = it != x.structure.end() && it->second.size() == v.rank(n);
    if (ok)
      for (const auto& m : it->second) ok = ok && m.rows() == x.codec(n).count() && m.cols() == r;
    record(ok, "shape", [&] { return "arity " + std::to_string(n); });
    if (!ok) return rep;
  }

  for (int n = lo; n <= hi; ++n) {
    const TupleCodec codec = x.codec(n);
    for (std::size_t b = 0; b < v.rank(n); ++b) {
      const SparseMatrix& a = x.structure.at(n)[b];
      const int dv = v.degree_of(n, b);
      for (std::size_t col = 0; col < r; ++col) {
        bool deg_ok = true;
        for (const auto& [code, coeff] : a.column(col))
          deg_ok = deg_ok && tensor_codes::degree(c, codec, code) - c.degree_of(col) == dv;
        record(deg_ok, "degree", [&] { return vlabel(n, b) + " on " + c.label_of(col); });

        SparseVector lhs = x.apply(n, v.boundary(n, unit_vector(b)), unit_vector(col));
        SparseVector rhs = tensor_codes::boundary(c, n, a.column(col));
        add_scaled(rhs, a.apply(c.boundary(col)), -sign_of(dv));
        record(lhs == rhs, "chain", [&] { return vlabel(n, b) + " on " + c.label_of(col); });

        if (n >= 2)
          for (int i = 0; i + 1 < n; ++i) {
            const Permutation s = Permutation::adjacent(n, i);
            SparseVector l = x.apply(n, v.act(n, s, unit_vector(b)), unit_vector(col));
            SparseVector rr = tensor_codes::permute(c, s, a.column(col));
            record(l == rr, "equivariance", [&] {
              return s.to_string() + " . " + vlabel(n, b) + " on " + c.label_of(col);
            });
          }
      }
    }
  }

  for (std::size_t col = 0; col < r; ++col)
    record(x.apply(1, v.unit(), unit_vector(col)) == unit_vector(col), "unit",
           [&] { return "on " + c.label_of(col); });

  for (const auto& [key, table] : v.tables()) {
    const auto [m, slot, n] = key;
    const std::size_t rn = v.rank(n);
    for (std::size_t a = 0; a < v.rank(m); ++a)
      for (std::size_t b = 0; b < rn; ++b) {
        const SparseVector& comp = table[a * rn + b];
        const int s = sign_of(static_cast<long long>(v.degree_of(m, a)) * v.degree_of(n, b));
        for (std::size_t col = 0; col < r; ++col) {
          SparseVector lhs = x.apply(m + n - 1, comp, unit_vector(col));
          SparseVector rhs = tensor_codes::insert(c, m, slot, x.structure.at(n)[b], v.degree_of(n, b), n,
                                                  x.structure.at(m)[a].column(col));
          if (s < 0) rhs = scaled(rhs, -1);
          record(lhs == rhs, "composition", [&] {
            return vlabel(m, a) + " o_" + std::to_string(slot) + " " + vlabel(n, b) + " on " + c.label_of(col);
          });
        }
      }
  }
  return rep;
}

bool is_coalgebra_morphism(const OperadCoalgebra& x, const OperadCoalgebra& y, const ChainMap& g) {
  if (g.degree() != 0 || !g.is_chain_map()) return false;
  if (!same_operad_shape(*x.operad, *y.operad)) return false;
  const std::size_t rx = x.carrier->total_rank(), ry = y.carrier->total_rank();
  if (g.flat().cols() != rx || g.flat().rows() != ry) return false;
  for (const auto& [n, maps] : x.structure)
    for (std::size_t b = 0; b < maps.size(); ++b)
      for (std::size_t col = 0; col < rx; ++col) {
        SparseVector lhs = y.structure.at(n)[b].apply(g.flat().column(col));
        SparseVector rhs = tensor_codes::power_map(g.flat(), rx, ry, n, maps[b].column(col));
        if (!y.weights.empty()) {
          const TupleCodec codec = y.codec(n);
          const int bound = y.operad->arity_bound();
          std::erase_if(rhs, [&](const auto& term) {
            int w = 0;
            for (std::size_t t : codec.decode(term.first)) w += y.weights[t];
            return w > bound;
          });
        }
        if (lhs != rhs) return false;
      }
  return true;
}

OperadCoalgebra trivial_coalgebra(const OperadPtr& v, const ComplexPtr& c) {
  if (v->unital()) throw Error("trivial_coalgebra: the operad must be non-unital");
  if (v->rank(1) != 1) throw Error("trivial_coalgebra: arity 1 must be Z");
  OperadCoalgebra out{v, c, {}, {}};
  const std::size_t r = c->total_rank();
  const Integer u = v->unit().count(0) ? v->unit().at(0) : Integer(0);
  if (u != 1 && u != -1) throw Error("trivial_coalgebra: the unit must generate arity 1");
  for (int n = 1; n <= v->arity_bound(); ++n) {
    std::vector<SparseMatrix> maps(v->rank(n), SparseMatrix(out.codec(n).count(), r));
    if (n == 1) maps[0] = SparseMatrix::identity(r).scaled(u);
    out.structure[n] = std::move(maps);
  }
  return out;
}

OperadCoalgebra transport(const OperadCoalgebra& x, const ChainMap& iso, const ChainMap& inverse) {
  const ComplexPtr& c = iso.target();
  const std::size_t rx = x.carrier->total_rank(), rc = c->total_rank();
  OperadCoalgebra out{x.operad, c, {}, {}};
  for (const auto& [n, maps] : x.structure) {
    auto& dst = out.structure[n];
    for (const auto& a : maps) {
      SparseMatrix m(out.codec(n).count(), rc);
      for (std::size_t col = 0; col < rc; ++col)
        m.column(col) = tensor_codes::power_map(iso.flat(), rx, rc, n, a.apply(inverse.flat().column(col)));
      dst.push_back(std::move(m));
    }
  }
  return out;
}

SparseVector CofreeCarrier::element(int n, const std::vector<SparseVector>& values) const {
  SparseVector out;
  for (const auto& [i, c] : factors.at(n).coordinates(values)) add_entry(out, flat_of.at(n)[i], c);
  return out;
}

CofreeCarrier cofree_carrier(const OperadPtr& v, const ComplexPtr& c, CofreeVariant variant, SolverPath path) {
  if (variant == CofreeVariant::Pointed && !v->unital())
    throw Error("cofree: the pointed variant needs a unital operad");
  if (variant == CofreeVariant::General && v->unital())
    throw Error("cofree: the general variant needs a non-unital operad");
  if (variant == CofreeVariant::Pointed && v->rank(0) != 1) throw Error("cofree: arity 0 must be Z");
  CofreeCarrier out;
  out.operad = v;
  out.base = c;
  out.variant = variant;
  for (int n = out.min_arity(); n <= v->arity_bound(); ++n) {
    SymmetricPower sp = symmetric_power(c, n);
    out.factors.emplace(n, equivariant_hom(v->component(n), sp.symmetric, path));
    out.powers.emplace(n, std::move(sp.power));
  }
  std::map<int, std::vector<std::string>> labels;
  std::map<int, std::vector<std::pair<int, std::size_t>>> order;
  for (const auto& [n, f] : out.factors)
    for (std::size_t i = 0; i < f.complex->total_rank(); ++i) {
      const int d = f.complex->degree_of(i);
      labels[d].push_back(std::to_string(n) + ":" + f.complex->label_of(i));
      order[d].emplace_back(n, i);
    }
  for (const auto& [n, f] : out.factors) out.flat_of[n].assign(f.complex->total_rank(), 0);
  for (const auto& [d, items] : order)
    for (const auto& [n, i] : items) {
      out.flat_of[n][i] = out.summand_of.size();
      out.summand_of.emplace_back(n, i);
    }
  const std::size_t r = out.summand_of.size();
  SparseMatrix diff(r, r);
  for (std::size_t j = 0; j < r; ++j) {
    const auto [n, i] = out.summand_of[j];
    for (const auto& [k, coeff] : out.factors.at(n).complex->boundary(i)) diff.add_entry(out.flat_of[n][k], j, coeff);
  }
  out.complex = share(ChainComplex::from_flat(GradedBasis(std::move(labels)), diff));
  return out;
}

TruncatedCofree truncated_cofree(const OperadPtr& v, const ComplexPtr& c, CofreeVariant variant) {
  const int hi = v->arity_bound();
  for (int n = 1; n <= hi; ++n) {
    ProjectivityReport p = check_projective(v->component(n));
    if (!p.projective) {
      std::ostringstream msg;
      msg << "truncated_cofree: arity " << n << " is not projective";
      if (p.failing_degree) msg << " in degree " << *p.failing_degree;
      throw Error(msg.str());
    }
  }
  if (v->rank(1) != 1) throw Error("truncated_cofree: arity 1 must be Z");
  if (v->unital() && v->complex(0).degrees() != std::vector<int>{0})
    throw Error("truncated_cofree: arity 0 must sit in degree 0");

  TruncatedCofree out;
  out.carrier = cofree_carrier(v, c, variant, SolverPath::Automatic);
  const CofreeCarrier& car = out.carrier;
  const ChainComplex& t = *car.complex;
  const std::size_t rt = t.total_rank();
  const int lo = car.min_arity();

  out.coalgebra.operad = v;
  out.coalgebra.carrier = car.complex;
  for (const auto& [n, i] : car.summand_of) out.coalgebra.weights.push_back(n);
  for (int k = lo; k <= hi; ++k) {
    const TupleCodec codec(rt, k);
    std::vector<SparseMatrix> maps;
    for (std::size_t vb = 0; vb < v->rank(k); ++vb) {
      SparseMatrix a(codec.count(), rt);
      const int dv = v->degree_of(k, vb);
      std::vector<int> arities(k);
      std::vector<std::size_t> points(k);  // positions in the factor's test points
      std::function<void(int, int)> walk = [&](int slot, int used) {
        if (slot == k) {
          const int n = used;
          const EquivariantHom& h = car.factors.at(n);
          std::vector<CompositionOperand> ops;
          std::vector<int> point_degrees;
          for (int i = 0; i < k; ++i) {
            const std::size_t tp = car.factors.at(arities[i]).test_points[points[i]];
            ops.emplace_back(std::make_pair(arities[i], unit_vector(tp)));
            point_degrees.push_back(v->degree_of(arities[i], tp));
          }
          SparseVector g = bounded_composition(*v, k, unit_vector(vb), ops);
          if (g.empty()) return;
          for (std::size_t phi = 0; phi < h.maps.size(); ++phi) {
            SparseVector val = h.maps[phi].apply(g);
            if (val.empty()) continue;
            const int dphi = h.complex->degree_of(phi);
            const int s_adj = kAdjointSign ? sign_of(static_cast<long long>(dv) * dphi) : 1;
            const std::size_t col = car.flat_of.at(n)[phi];
            for (const auto& [y, cy] : val) {
              std::vector<std::size_t> tuple = car.powers.at(n).tuple(y);
              // Coordinates of each block in its factor.
              std::vector<const std::vector<std::pair<std::size_t, Integer>>*> lists;
              std::size_t pos = 0;
              bool dead = false;
              for (int i = 0; i < k && !dead; ++i) {
                const OrderedTensor& pw = car.powers.at(arities[i]);
                std::vector<std::size_t> block(tuple.begin() + pos, tuple.begin() + pos + arities[i]);
                pos += arities[i];
                const std::size_t key = points[i] * pw.complex.total_rank() + pw.flat(block);
                auto it = car.factors.at(arities[i]).functionals.find(key);
                if (it == car.factors.at(arities[i]).functionals.end()) dead = true;
                else lists.push_back(&it->second);
              }
              if (dead) continue;
              std::vector<std::size_t> choice(k, 0);
              while (true) {
                Integer coeff = cy * s_adj;
                std::vector<std::size_t> flats;
                long long exponent = 0;
                for (int i = 0; i < k; ++i) {
                  const auto& [b, cb] = (*lists[i])[choice[i]];
                  coeff *= cb;
                  flats.push_back(car.flat_of.at(arities[i])[b]);
                  const int db = car.factors.at(arities[i]).complex->degree_of(b);
                  for (int j = 0; j < i; ++j) exponent += static_cast<long long>(db) * point_degrees[j];
                }
                if (exponent % 2 != 0) coeff = -coeff;
                a.add_entry(codec.encode(flats), col, coeff);
                int i = k - 1;
                while (i >= 0 && ++choice[i] == lists[i]->size()) choice[i--] = 0;
                if (i < 0) break;
              }
            }
          }
          return;
        }
        for (int ni = lo; used + ni <= hi; ++ni) {
          arities[slot] = ni;
          for (std::size_t p = 0; p < car.factors.at(ni).test_points.size(); ++p) {
            points[slot] = p;
            walk(slot + 1, used + ni);
          }
        }
      };
      walk(0, 0);
      maps.push_back(std::move(a));
    }
    out.coalgebra.structure[k] = std::move(maps);
  }

  const ComplexPtr& cc = c;
  SparseMatrix eps(cc->total_rank(), rt);
  const EquivariantHom& h1 = car.factors.at(1);
  for (std::size_t phi = 0; phi < h1.maps.size(); ++phi)
    for (const auto& [y, cy] : h1.maps[phi].apply(v->unit()))
      eps.add_entry(car.powers.at(1).tuple(y)[0], car.flat_of.at(1)[phi], cy);
  out.epsilon = ChainMap(car.complex, c, 0, eps);
  if (variant == CofreeVariant::Pointed) out.basepoint = car.flat_of.at(0).at(0);
  return out;
}

ClassifyingMap classifying_map(const OperadCoalgebra& d, const ChainMap& f, const TruncatedCofree& t,
                               bool check_uniqueness) {
  const CofreeCarrier& car = t.carrier;
  if (!same_operad_shape(*d.operad, *car.operad)) throw Error("classifying_map: operads differ");
  if (!(*f.source() == *d.carrier) || !(*f.target() == *car.base) || f.degree() != 0)
    throw Error("classifying_map: f must be a degree-0 map from the coalgebra carrier to the cogenerators");
  const ChainComplex& dc = *d.carrier;
  const std::size_t rd = dc.total_rank(), rc = car.base->total_rank(), rt = car.complex->total_rank();
  const TruncatedOperad& v = *car.operad;

  SparseMatrix g(rt, rd);
  for (std::size_t col = 0; col < rd; ++col) {
    const int dd = dc.degree_of(col);
    for (const auto& [n, h] : car.factors) {
      const OrderedTensor& pw = car.powers.at(n);
      std::vector<SparseVector> values;
      for (std::size_t tp : h.test_points) {
        const int s = kAdjointSign ? sign_of(static_cast<long long>(v.degree_of(n, tp)) * dd) : 1;
        SparseVector codes = tensor_codes::power_map(f.flat(), rd, rc, n, d.structure.at(n)[tp].column(col));
        SparseVector val;
        for (const auto& [code, cv] : codes) add_entry(val, pw.code_to_flat[code], cv * s);
        values.push_back(std::move(val));
      }
      for (const auto& [i, cv] : car.element(n, values)) g.add_entry(i, col, cv);
    }
  }
  ClassifyingMap out;
  out.map = ChainMap(d.carrier, car.complex, 0, g);
  out.triangle = t.epsilon.compose(out.map) == f;
  out.morphism = is_coalgebra_morphism(d, t.coalgebra, out.map);
  if (check_uniqueness) {
    // Necessary equations on any morphism G with epsilon G = f:
    //   epsilon G = f and epsilon^(x)k alpha_T(v) G = f^(x)k alpha_D(v) for every basis v of arity k != 1.
    std::vector<std::pair<int, std::size_t>> blocks;
    for (int k = v.min_arity(); k <= v.arity_bound(); ++k)
      if (k != 1)
        for (std::size_t b = 0; b < v.rank(k); ++b) blocks.emplace_back(k, b);
    std::vector<std::size_t> offsets{rc};
    for (const auto& [k, b] : blocks) offsets.push_back(offsets.back() + TupleCodec(rc, k).count());
    auto stacked = [&](const SparseVector& head, const std::function<SparseVector(int, std::size_t)>& part) {
      SparseVector out_v = head;
      for (std::size_t j = 0; j < blocks.size(); ++j)
        for (const auto& [i, cv] : part(blocks[j].first, blocks[j].second)) add_entry(out_v, offsets[j] + i, cv);
      return out_v;
    };
    SparseMatrix a(offsets.back(), rt);
    for (std::size_t phi = 0; phi < rt; ++phi)
      a.column(phi) = stacked(t.epsilon.flat().column(phi), [&](int k, std::size_t b) {
        return tensor_codes::power_map(t.epsilon.flat(), rt, rc, k, t.coalgebra.structure.at(k)[b].column(phi));
      });
    out.system_rank = rank(a);
    bool solves = true;
    for (std::size_t col = 0; col < rd && solves; ++col) {
      SparseVector rhs = stacked(f.flat().column(col), [&](int k, std::size_t b) {
        return tensor_codes::power_map(f.flat(), rd, rc, k, d.structure.at(k)[b].column(col));
      });
      solves = a.apply(g.column(col)) == rhs;
    }
    out.unique = solves && out.system_rank == rt;
  }
  return out;
}

ClassifyingMap classifying_map(const OperadCoalgebra& d, const ChainMap& f) {
  const CofreeVariant variant = d.operad->unital() ? CofreeVariant::Pointed : CofreeVariant::General;
  return classifying_map(d, f, truncated_cofree(d.operad, f.target(), variant));
}

ChainMap induced_map(const CofreeCarrier& source, const CofreeCarrier& target, const ChainMap& f) {
  if (!same_operad_shape(*source.operad, *target.operad) || source.variant != target.variant)
    throw Error("induced_map: carriers over different operads or truncations");
  if (f.degree() != 0 || !(*f.source() == *source.base) || !(*f.target() == *target.base))
    throw Error("induced_map: f must be a degree-0 map between the cogenerators");
  const std::size_t rs = source.base->total_rank(), rt = target.base->total_rank();
  SparseMatrix m(target.complex->total_rank(), source.complex->total_rank());
  for (const auto& [n, h] : source.factors) {
    const OrderedTensor& sp = source.powers.at(n);
    const OrderedTensor& tp = target.powers.at(n);
    const EquivariantHom& th = target.factors.at(n);
    for (std::size_t phi = 0; phi < h.maps.size(); ++phi) {
      std::vector<SparseVector> values;
      for (std::size_t p : th.test_points) {
        SparseVector codes;
        for (const auto& [y, cy] : h.maps[phi].column(p)) add_entry(codes, sp.flat_to_code[y], cy);
        SparseVector val;
        for (const auto& [code, cv] : tensor_codes::power_map(f.flat(), rs, rt, n, codes))
          add_entry(val, tp.code_to_flat[code], cv);
        values.push_back(std::move(val));
      }
      m.column(source.flat_of.at(n)[phi]) = target.element(n, values);
    }
  }
  return ChainMap(source.complex, target.complex, 0, m);
}

ChainMap pullback_map(const OperadMorphism& phi, const CofreeCarrier& source, const CofreeCarrier& target) {
  if (source.operad != phi.target || target.operad != phi.source)
    throw Error("pullback_map: carriers must sit over the target and source of the morphism");
  if (!(*source.base == *target.base) || source.variant != target.variant)
    throw Error("pullback_map: cogenerators or variants differ");
  SparseMatrix m(target.complex->total_rank(), source.complex->total_rank());
  for (const auto& [n, h] : source.factors) {
    const EquivariantHom& th = target.factors.at(n);
    std::vector<SparseVector> images;
    for (std::size_t p : th.test_points) images.push_back(phi.apply(n, unit_vector(p)));
    for (std::size_t psi = 0; psi < h.maps.size(); ++psi) {
      std::vector<SparseVector> values;
      for (const auto& im : images) values.push_back(h.maps[psi].apply(im));
      m.column(source.flat_of.at(n)[psi]) = target.element(n, values);
    }
  }
  return ChainMap(source.complex, target.complex, 0, m);
}

Integer augmentation(const TruncatedOperad& v, int arity, std::size_t basis) {
  if (!v.unital() || v.rank(0) != 1) throw Error("augmentation: needs a unital operad with arity 0 equal to Z");
  std::vector<CompositionOperand> ops(arity, std::make_pair(0, unit_vector(0)));
  SparseVector r = generalized_composition(v, arity, unit_vector(basis), ops);
  auto it = r.find(0);
  return it == r.end() ? Integer(0) : it->second;
}

bool is_group_like(const OperadCoalgebra& x, const SparseVector& c) {
  const TruncatedOperad& v = *x.operad;
  const std::size_t r = x.carrier->total_rank();
  for (const auto& [i, ci] : c)
    if (x.carrier->degree_of(i) != 0) return false;
  for (int n = v.min_arity(); n <= v.arity_bound(); ++n) {
    const SparseVector power = tensor_codes::product(r, std::vector<SparseVector>(n, c));
    for (std::size_t b = 0; b < v.rank(n); ++b)
      if (x.structure.at(n)[b].apply(c) != scaled(power, augmentation(v, n, b))) return false;
  }
  return true;
}

std::vector<SparseVector> group_like_elements(const OperadCoalgebra& x, const std::vector<SparseVector>& lattice_basis,
                                              int box, std::size_t max_candidates) {
  if (!x.operad->unital()) throw Error("group_like_elements: needs a unital operad");
  if (box < 0) throw Error("group_like_elements: negative box");
  const std::size_t side = 2 * static_cast<std::size_t>(box) + 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < lattice_basis.size(); ++i) {
    if (total > max_candidates / side) throw Error("group_like_elements: search space too large");
    total *= side;
  }
  std::vector<SparseVector> found;
  std::vector<int> coeff(lattice_basis.size(), -box);
  for (std::size_t step = 0; step < total; ++step) {
    SparseVector c;
    for (std::size_t i = 0; i < coeff.size(); ++i) add_scaled(c, lattice_basis[i], coeff[i]);
    if (!c.empty() && is_group_like(x, c)) found.push_back(c);
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      if (++coeff[i] <= box) break;
      coeff[i] = -box;
    }
  }
  return found;
}

namespace {

IntegerMatrix complement_projection(std::size_t rank, const std::vector<SparseVector>& summand) {
  IntegerMatrix k = dense_from(summand, rank);
  if (!summand.empty() && !same_lattice(saturate(k), k)) throw Error("coideal: not a direct summand");
  if (summand.empty()) return IntegerMatrix::identity(rank);
  return lattice_complement(k).projection;
}

}  // namespace

bool is_coideal(const OperadCoalgebra& x, const std::vector<SparseVector>& summand) {
  const std::size_t r = x.carrier->total_rank();
  IntegerMatrix p = complement_projection(r, summand);
  SparseMatrix ps = SparseMatrix::from_dense(p);
  // Arity 0 is excluded: the counit of a sub-coalgebra need not vanish.
  for (const auto& [n, maps] : x.structure) {
    if (n < 1) continue;
    for (const auto& a : maps)
      for (const auto& d : summand)
        if (!tensor_codes::power_map(ps, r, p.rows(), n, a.apply(d)).empty()) return false;
  }
  return true;
}

bool in_tensor_power(const IntegerMatrix& p, std::size_t rank, int n, const SparseVector& x) {
  const SparseMatrix ps = SparseMatrix::from_dense(p);
  const TupleCodec codec(rank, n);
  for (int slot = 0; slot < n; ++slot) {
    std::vector<std::size_t> bases(n, rank);
    bases[slot] = p.rows();
    const TupleCodec mixed(bases);
    SparseVector out;
    for (const auto& [code, c] : x) {
      std::vector<std::size_t> t = codec.decode(code);
      const std::size_t keep = t[slot];
      for (const auto& [row, pv] : ps.column(keep)) {
        t[slot] = row;
        add_entry(out, mixed.encode(t), c * pv);
      }
      t[slot] = keep;
    }
    if (!out.empty()) return false;
  }
  return true;
}

bool is_subcoalgebra(const OperadCoalgebra& x, const std::vector<SparseVector>& summand) {
  const std::size_t r = x.carrier->total_rank();
  IntegerMatrix p = complement_projection(r, summand);
  for (const auto& [n, maps] : x.structure) {
    if (n < 1) continue;
    for (const auto& a : maps)
      for (const auto& d : summand)
        if (!in_tensor_power(p, r, n, a.apply(d))) return false;
  }
  return true;
}

}  // namespace cofree
