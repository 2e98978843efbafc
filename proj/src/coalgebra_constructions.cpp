#include <functional>

#include "cofree/coalgebra.hpp"

namespace cofree {

namespace {

int sign_of(long long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

SparseVector unit_vector(std::size_t i) { return SparseVector{{i, Integer(1)}}; }

IntegerMatrix dense_from(const std::vector<SparseVector>& cols, std::size_t rows) {
  IntegerMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, c] : cols[j]) m(i, j) = c;
  return m;
}

// Homology tables compared with absent degrees read as zero.
bool same_homology(const HomologyTable& a, const HomologyTable& b) {
  for (const auto& [d, g] : a) {
    auto it = b.find(d);
    if (it == b.end() ? !g.is_zero() : it->second != g) return false;
  }
  for (const auto& [d, g] : b)
    if (!a.count(d) && !g.is_zero()) return false;
  return true;
}

IdealKernel finish_ideal_kernel(IdealQuotient q, const ComplexPtr& c) {
  IdealKernel out;
  out.quotient = std::move(q);
  const OperadIdeal& ideal = out.quotient.ideal;
  const OperadPtr& h = ideal.parent;
  out.cofree = truncated_cofree(h, c, CofreeVariant::General);
  const CofreeCarrier& car = out.cofree.carrier;
  const ChainComplex& t = *car.complex;
  const std::size_t rt = t.total_rank();

  // K = kernel of the restriction to the ideal, degree by degree.
  for (int d : t.degrees()) {
    const std::size_t nk = t.rank(d), off = t.offset(d);
    std::map<std::tuple<int, std::size_t, std::size_t>, SparseVector> rows;
    for (std::size_t l = 0; l < nk; ++l) {
      const auto [n, phi] = car.summand_of[off + l];
      auto it = ideal.basis.find(n);
      if (it == ideal.basis.end()) continue;
      for (std::size_t j = 0; j < it->second.size(); ++j)
        for (const auto& [y, cy] : car.factors.at(n).maps[phi].apply(it->second[j])) add_entry(rows[{n, j, y}], l, cy);
    }
    std::vector<SparseVector> system;
    for (auto& [key, row] : rows)
      if (!row.empty()) system.push_back(std::move(row));
    for (const auto& k : kernel_basis(system, nk)) {
      SparseVector flat;
      for (const auto& [l, cv] : k) flat.emplace(off + l, cv);
      out.kernel.push_back(std::move(flat));
    }
  }

  // K as a subcomplex.
  const std::size_t rk = out.kernel.size();
  const IntegerMatrix kd = dense_from(out.kernel, rt);
  std::map<int, std::vector<std::string>> labels;
  for (std::size_t i = 0; i < rk; ++i) {
    const int d = t.degree_of(out.kernel[i].begin()->first);
    labels[d].push_back("k" + std::to_string(d) + "_" + std::to_string(labels[d].size()));
  }
  SparseMatrix kdiff(rk, rk);
  if (rk > 0) {
    const IntegerMatrix l = left_inverse(kd);
    for (std::size_t i = 0; i < rk; ++i) {
      SparseVector dk = t.flat_differential().apply(out.kernel[i]);
      std::vector<Integer> full(rt, 0);
      for (const auto& [j, cv] : dk) full[j] = cv;
      std::vector<Integer> coords = l.apply(full);
      if (kd.apply(coords) != full) throw Error("ideal_kernel: kernel is not a subcomplex");
      for (std::size_t j = 0; j < rk; ++j)
        if (coords[j] != 0) kdiff.add_entry(j, i, coords[j]);
    }
  }
  out.kernel_complex = share(ChainComplex::from_flat(GradedBasis(std::move(labels)), kdiff));
  SparseMatrix incl(rt, rk);
  for (std::size_t i = 0; i < rk; ++i) incl.column(i) = out.kernel[i];
  out.kernel_inclusion = ChainMap(out.kernel_complex, car.complex, 0, incl);

  // Structure maps carry K into K^(x)n, and the ideal acts by zero.
  const OperadCoalgebra& tc = out.cofree.coalgebra;
  out.closed = true;
  if (rk > 0 && rk < rt) {
    const IntegerMatrix p = lattice_complement(kd).projection;
    for (int n = 2; n <= h->arity_bound() && out.closed; ++n)
      for (std::size_t b = 0; b < h->rank(n) && out.closed; ++b)
        for (const auto& k : out.kernel)
          if (!in_tensor_power(p, rt, n, tc.structure.at(n)[b].apply(k))) {
            out.closed = false;
            break;
          }
  }
  out.annihilated = true;
  for (const auto& [n, basis] : ideal.basis)
    for (const auto& x : basis)
      for (const auto& k : out.kernel)
        if (!tc.apply(n, x, k).empty()) out.annihilated = false;

  // Comparison with the carrier over H/I.
  out.quotient_carrier = cofree_carrier(out.quotient.quotient, c, CofreeVariant::General, SolverPath::General);
  out.pullback = pullback_map(out.quotient.projection, out.quotient_carrier, car);
  const IntegerMatrix pb = out.pullback.flat().to_dense();
  out.pullback_onto_kernel = out.pullback.is_chain_map() && rank(pb) == pb.cols() &&
                             (rk == 0 ? pb.cols() == 0 : same_lattice(image_basis(pb), kd));
  const ChainComplex& qc = *out.quotient_carrier.complex;
  out.homology_matches = same_homology(homology(*out.kernel_complex), homology(qc));
  out.ranks_match = true;
  for (int d : qc.degrees()) out.ranks_match = out.ranks_match && qc.rank(d) == out.kernel_complex->rank(d);
  for (int d : out.kernel_complex->degrees()) out.ranks_match = out.ranks_match && qc.rank(d) == out.kernel_complex->rank(d);
  return out;
}

}  // namespace

IdealKernel ideal_kernel(const OperadPtr& h, const std::vector<std::pair<int, SparseVector>>& generators,
                         const ComplexPtr& c) {
  return finish_ideal_kernel(ideal_and_quotient(h, generators), c);
}

IdealKernel ideal_kernel(const OperadIdeal& ideal, const ComplexPtr& c) {
  std::vector<std::pair<int, SparseVector>> gens;
  for (const auto& [n, basis] : ideal.basis)
    for (const auto& x : basis) gens.emplace_back(n, x);
  IdealQuotient q = ideal_and_quotient(ideal.parent, gens);
  for (int n = 1; n <= ideal.parent->arity_bound(); ++n)
    if (q.ideal.rank(n) != ideal.rank(n))
      throw Error("ideal_kernel: not an ideal, closure grows in arity " + std::to_string(n));
  return finish_ideal_kernel(std::move(q), c);
}

CylinderCoalgebra cylinder_coalgebra(const OperadCoalgebra& x, const SigmaDiagonal& delta) {
  const TruncatedOperad& v = *x.operad;
  const OperadPtr& src = delta.delta.source;
  if (src->arity_bound() != v.arity_bound() || src->unital() != v.unital())
    throw Error("cylinder_coalgebra: the diagonal belongs to another operad");
  const ComplexPtr interval = share(unit_interval());
  CylinderCoalgebra out;
  out.tensor = tensor_product(*x.carrier, *interval);
  const ComplexPtr cyl = share(out.tensor.complex);
  const ChainComplex& xc = *x.carrier;
  const std::size_t rx = xc.total_rank(), rc = cyl->total_rank();
  out.coalgebra.operad = x.operad;
  out.coalgebra.carrier = cyl;

  for (int n = v.min_arity(); n <= v.arity_bound(); ++n) {
    const auto perms = all_permutations(n);
    const OrderedTensor ip = tensor_power(interval, n);
    std::vector<SparseMatrix> paths;
    for (const auto& s : perms) {
      SparseMatrix m = interval_path(s);
      SparseMatrix codes(ip.codec.count(), m.cols());
      for (std::size_t e = 0; e < m.cols(); ++e)
        for (const auto& [y, cy] : m.column(e)) codes.add_entry(ip.flat_to_code[y], e, cy);
      paths.push_back(std::move(codes));
    }
    const TupleCodec xcodec(rx, n), icodec(interval->total_rank(), n), ccodec(rc, n);
    std::vector<SparseMatrix> maps;
    for (std::size_t b = 0; b < v.rank(n); ++b) {
      SparseMatrix m(ccodec.count(), rc);
      const SparseVector image = delta.delta.apply(n, unit_vector(b));
      for (std::size_t col = 0; col < rc; ++col) {
        const auto [xi, ei] = out.tensor.flat_to_pair[col];
        for (const auto& [tflat, coeff] : image) {
          const auto [a, s] = delta.pairs.at(n)[tflat];
          for (const auto& [xcode, xv] : x.structure.at(n)[a].column(xi)) {
            const std::vector<std::size_t> xt = xcodec.decode(xcode);
            for (const auto& [icode, iv] : paths[s].column(ei)) {
              const std::vector<std::size_t> it = icodec.decode(icode);
              // Shuffle (x1..xn)(e1..en) -> (x1 e1)..(xn en): e_j passes x_l for l > j.
              long long exponent = 0;
              int later = 0;
              std::vector<std::size_t> u(n);
              for (int j = n - 1; j >= 0; --j) {
                exponent += static_cast<long long>(interval->degree_of(it[j])) * later;
                later += xc.degree_of(xt[j]);
                u[j] = out.tensor.flat(xt[j], it[j]);
              }
              m.add_entry(ccodec.encode(u), col, coeff * xv * iv * sign_of(exponent));
            }
          }
        }
      }
      maps.push_back(std::move(m));
    }
    out.coalgebra.structure[n] = std::move(maps);
  }

  const std::size_t p0 = *interval->flat_index_of(0, "p0"), p1 = *interval->flat_index_of(0, "p1");
  SparseMatrix e0(rc, rx), e1(rc, rx);
  for (std::size_t i = 0; i < rx; ++i) {
    e0.add_entry(out.tensor.flat(i, p0), i, 1);
    e1.add_entry(out.tensor.flat(i, p1), i, 1);
  }
  out.end0 = ChainMap(x.carrier, cyl, 0, e0);
  out.end1 = ChainMap(x.carrier, cyl, 0, e1);
  out.restrictions_match = true;
  for (const ChainMap* e : {&out.end0, &out.end1})
    for (const auto& [n, maps] : x.structure)
      for (std::size_t b = 0; b < maps.size(); ++b)
        for (std::size_t i = 0; i < rx; ++i) {
          SparseVector lhs = out.coalgebra.structure.at(n)[b].apply(e->flat().column(i));
          SparseVector rhs = tensor_codes::power_map(e->flat(), rx, rc, n, maps[b].column(i));
          if (lhs != rhs) out.restrictions_match = false;
        }
  return out;
}

CylinderCoalgebra cylinder_coalgebra(const OperadCoalgebra& x) {
  return cylinder_coalgebra(x, sigma_diagonal(x.operad));
}

HomotopyLift cofree_homotopy_lift(const OperadPtr& v, const ChainMap& f, const ComplexPtr& c, CofreeVariant variant) {
  const ComplexPtr interval = share(unit_interval());
  const TensorProduct ctp = tensor_product(*c, *interval);
  if (f.degree() != 0 || !(*f.source() == ctp.complex)) throw Error("cofree_homotopy_lift: f must start at C (x) I");
  const ComplexPtr ci = f.source();
  HomotopyLift out;
  out.source = truncated_cofree(v, c, variant);
  out.target = truncated_cofree(v, f.target(), variant);
  out.cylinder = cylinder_coalgebra(out.source.coalgebra, sigma_diagonal(v));
  const TruncatedCofree tci = truncated_cofree(v, ci, variant);
  const ChainMap e = tensor(out.source.epsilon, ChainMap::identity(interval), out.cylinder.coalgebra.carrier, ci);
  const ChainMap h = classifying_map(out.cylinder.coalgebra, e, tci, false).map;
  out.lift = induced_map(tci.carrier, out.target.carrier, f).compose(h);
  out.end0 = out.lift.compose(out.cylinder.end0);
  out.end1 = out.lift.compose(out.cylinder.end1);

  const std::size_t p0 = *interval->flat_index_of(0, "p0"), p1 = *interval->flat_index_of(0, "p1");
  SparseMatrix i0(ctp.complex.total_rank(), c->total_rank()), i1 = i0;
  for (std::size_t i = 0; i < c->total_rank(); ++i) {
    i0.add_entry(ctp.flat(i, p0), i, 1);
    i1.add_entry(ctp.flat(i, p1), i, 1);
  }
  const ChainMap f0 = f.compose(ChainMap(c, ci, 0, i0));
  const ChainMap f1 = f.compose(ChainMap(c, ci, 0, i1));
  out.induced0 = induced_map(out.source.carrier, out.target.carrier, f0);
  out.induced1 = induced_map(out.source.carrier, out.target.carrier, f1);
  out.ends_match = out.end0 == out.induced0 && out.end1 == out.induced1;
  return out;
}

bool lift_square_commutes(const HomotopyLift& lift, const OperadCoalgebra& c, const OperadCoalgebra& d,
                          const ChainMap& f) {
  const ComplexPtr interval = share(unit_interval());
  const ChainMap ac = classifying_map(c, ChainMap::identity(c.carrier), lift.source, false).map;
  const ChainMap ad = classifying_map(d, ChainMap::identity(d.carrier), lift.target, false).map;
  const ChainMap left = ad.compose(f);
  const ChainMap right =
      lift.lift.compose(tensor(ac, ChainMap::identity(interval), f.source(), lift.cylinder.coalgebra.carrier));
  return left == right;
}

OperadCoalgebra free_coalgebra(const OperadPtr& free, const ComplexPtr& c, const std::vector<SparseMatrix>& images) {
  const auto& data = free->free_data();
  if (!data) throw Error("free_coalgebra: not a free operad");
  if (images.size() != data->generators.size()) throw Error("free_coalgebra: one image per generator");
  const TruncatedOperad& v = *free;
  const ChainComplex& cc = *c;
  const std::size_t r = cc.total_rank();
  OperadCoalgebra out{free, c, {}, {}};
  std::map<int, std::vector<bool>> known;
  for (int n = 1; n <= v.arity_bound(); ++n) {
    out.structure[n].assign(v.rank(n), SparseMatrix(out.codec(n).count(), r));
    known[n].assign(v.rank(n), false);
  }
  out.structure[1][0] = SparseMatrix::identity(r);
  known[1][0] = true;
  for (std::size_t g = 0; g < images.size(); ++g) {
    const FreeGenerator& gen = data->generators[g];
    if (gen.arity > v.arity_bound()) continue;
    if (images[g].rows() != out.codec(gen.arity).count() || images[g].cols() != r)
      throw Error("free_coalgebra: image of " + gen.name + " has the wrong shape");
    const auto& trees = data->trees.at(gen.arity);
    for (std::size_t i = 0; i < trees.size(); ++i) {
      const OperadTree& t = trees[i];
      bool planar = t.generator == static_cast<int>(g);
      for (std::size_t j = 0; planar && j < t.children.size(); ++j)
        planar = t.children[j].is_leaf() && t.children[j].leaf == static_cast<int>(j) + 1;
      if (planar) {
        out.structure[gen.arity][i] = images[g];
        known[gen.arity][i] = true;
      }
    }
  }
  auto single = [](const SparseVector& x) {
    if (x.size() != 1) throw Error("free_coalgebra: expected a signed basis element");
    return *x.begin();
  };
  bool grew = true;
  while (grew) {
    grew = false;
    for (int n = 2; n <= v.arity_bound(); ++n)
      for (std::size_t b = 0; b < v.rank(n); ++b) {
        if (!known[n][b]) continue;
        for (int i = 0; i + 1 < n; ++i) {
          const Permutation s = Permutation::adjacent(n, i);
          const auto [w, sw] = single(v.act(n, s, unit_vector(b)));
          if (known[n][w]) continue;
          SparseMatrix m(out.codec(n).count(), r);
          for (std::size_t col = 0; col < r; ++col)
            m.column(col) = scaled(tensor_codes::permute(cc, s, out.structure[n][b].column(col)), sw);
          out.structure[n][w] = std::move(m);
          known[n][w] = grew = true;
        }
      }
    for (int m = 2; m <= v.arity_bound(); ++m)
      for (int n = 2; m + n - 1 <= v.arity_bound(); ++n)
        for (std::size_t a = 0; a < v.rank(m); ++a)
          for (std::size_t b = 0; b < v.rank(n); ++b) {
            if (!known[m][a] || !known[n][b]) continue;
            for (int slot = 1; slot <= m; ++slot) {
              const auto [t, st] = single(v.compose_basis(m, a, slot, n, b));
              const int k = m + n - 1;
              if (known[k][t]) continue;
              const int s = sign_of(static_cast<long long>(v.degree_of(m, a)) * v.degree_of(n, b));
              SparseMatrix res(out.codec(k).count(), r);
              for (std::size_t col = 0; col < r; ++col)
                res.column(col) = scaled(tensor_codes::insert(cc, m, slot, out.structure[n][b], v.degree_of(n, b), n,
                                                              out.structure[m][a].column(col)),
                                         st * s);
              out.structure[k][t] = std::move(res);
              known[k][t] = grew = true;
            }
          }
  }
  for (const auto& [n, flags] : known)
    for (bool f : flags)
      if (!f) throw Error("free_coalgebra: tree basis not reached in arity " + std::to_string(n));
  return out;
}

OperadCoalgebra s0_coalgebra(const OperadPtr& s0, const ComplexPtr& c, const SparseMatrix& delta,
                             const std::optional<SparseVector>& counit) {
  if (s0->name() != "S0") throw Error("s0_coalgebra: operad is not S0");
  if (s0->unital() && !counit) throw Error("s0_coalgebra: a counit is required over unital S0");
  const ChainComplex& cc = *c;
  const std::size_t r = cc.total_rank();
  OperadCoalgebra out{s0, c, {}, {}};
  // Iterated diagonals Delta^(n): C -> C^(x)n.
  std::map<int, SparseMatrix> iterated;
  iterated[1] = SparseMatrix::identity(r);
  for (int n = 2; n <= s0->arity_bound(); ++n) {
    SparseMatrix m(out.codec(n).count(), r);
    for (std::size_t col = 0; col < r; ++col)
      m.column(col) = tensor_codes::insert(cc, n - 1, 1, delta, 0, 2, iterated[n - 1].column(col));
    iterated[n] = std::move(m);
  }
  if (s0->unital()) {
    SparseMatrix m(1, r);
    for (const auto& [i, cv] : *counit) m.add_entry(0, i, cv);
    iterated[0] = std::move(m);
  }
  for (int n = s0->min_arity(); n <= s0->arity_bound(); ++n) {
    for (const auto& sigma : all_permutations(n)) {
      SparseMatrix m(out.codec(n).count(), r);
      for (std::size_t col = 0; col < r; ++col) m.column(col) = tensor_codes::permute(cc, sigma, iterated[n].column(col));
      out.structure[n].push_back(std::move(m));
    }
  }
  return out;
}

SparseMatrix random_hom_cycle(Rng& rng, const ComplexPtr& c, int n, int degree, int bound) {
  const OrderedTensor pw = tensor_power(c, n);
  const HomComplex hc = hom(c, share(pw.complex), HomConvention::Standard);
  SparseMatrix out(pw.codec.count(), c->total_rank());
  if (hc.complex.rank(degree) == 0) return out;
  const IntegerMatrix k = kernel_basis(hc.complex.differential(degree));
  SparseVector element;
  for (std::size_t j = 0; j < k.cols(); ++j) {
    const int coeff = uniform_int(rng, -bound, bound);
    if (coeff == 0) continue;
    for (std::size_t i = 0; i < k.rows(); ++i)
      if (k(i, j) != 0) add_entry(element, hc.complex.flat_index(degree, i), k(i, j) * coeff);
  }
  const ChainMap m = hc.map(degree, element);
  for (std::size_t col = 0; col < m.flat().cols(); ++col)
    for (const auto& [y, cy] : m.flat().column(col)) out.add_entry(pw.flat_to_code[y], col, cy);
  return out;
}

OperadCoalgebra random_free_coalgebra(Rng& rng, const OperadPtr& free, const ComplexPtr& c, int bound) {
  const auto& data = free->free_data();
  if (!data) throw Error("random_free_coalgebra: not a free operad");
  std::vector<SparseMatrix> images;
  for (const auto& g : data->generators) images.push_back(random_hom_cycle(rng, c, g.arity, g.degree, bound));
  return free_coalgebra(free, c, images);
}

OperadCoalgebra group_like_coalgebra(Rng& rng, const OperadPtr& s0, int r) {
  std::vector<std::string> labels;
  for (int i = 1; i <= r; ++i) labels.push_back("d" + std::to_string(i));
  const ComplexPtr c = share(ChainComplex(GradedBasis({{0, labels}}), {}));
  const std::size_t rr = static_cast<std::size_t>(r);
  SparseMatrix delta(rr * rr, rr);
  SparseVector counit;
  for (std::size_t i = 0; i < rr; ++i) {
    delta.add_entry(i * rr + i, i, 1);
    counit[i] = 1;
  }
  OperadCoalgebra base = s0_coalgebra(s0, c, delta, s0->unital() ? std::optional<SparseVector>(counit) : std::nullopt);
  // Random unimodular change of coordinates from elementary column operations.
  IntegerMatrix u = IntegerMatrix::identity(rr), inv = IntegerMatrix::identity(rr);
  if (r >= 2)
    for (int step = 0; step < r; ++step) {
      const std::size_t a = uniform_int(rng, 0, r - 1);
      std::size_t b = uniform_int(rng, 0, r - 2);
      if (b >= a) ++b;
      const int k = uniform_int(rng, 0, 1) == 0 ? -1 : 1;
      u.add_col_multiple(a, b, k);
      inv.add_row_multiple(b, a, -k);
    }
  const ChainMap iso(c, c, 0, SparseMatrix::from_dense(u));
  const ChainMap back(c, c, 0, SparseMatrix::from_dense(inv));
  return transport(base, iso, back);
}

OperadCoalgebra simplex_coalgebra(const OperadPtr& s0) {
  SparseMatrix d(3, 3);
  d.add_entry(0, 2, -1);
  d.add_entry(1, 2, 1);
  const ComplexPtr c = share(ChainComplex::from_flat(GradedBasis({{0, {"v0", "v1"}}, {1, {"e"}}}), d));
  SparseMatrix delta(9, 3);
  delta.add_entry(0 * 3 + 0, 0, 1);
  delta.add_entry(1 * 3 + 1, 1, 1);
  delta.add_entry(0 * 3 + 2, 2, 1);
  delta.add_entry(2 * 3 + 1, 2, 1);
  const SparseVector counit{{0, Integer(1)}, {1, Integer(1)}};
  return s0_coalgebra(s0, c, delta, s0->unital() ? std::optional<SparseVector>(counit) : std::nullopt);
}

OperadCoalgebra random_s0_coalgebra(Rng& rng, const OperadPtr& s0, int max_rank) {
  const int cofree_rank = s0->arity_bound() + (s0->unital() ? 1 : 0);
  const int kind = uniform_int(rng, 0, 2);
  if (kind == 1 && max_rank >= 3) return simplex_coalgebra(s0);
  if (kind == 2 && cofree_rank <= max_rank) {
    const int deg = uniform_int(rng, 0, 1);
    const ComplexPtr c = share(ChainComplex(GradedBasis({{deg, {"c"}}}), {}));
    return truncated_cofree(s0, c, s0->unital() ? CofreeVariant::Pointed : CofreeVariant::General).coalgebra;
  }
  return group_like_coalgebra(rng, s0, uniform_int(rng, 1, std::min(3, max_rank)));
}

}  // namespace cofree
