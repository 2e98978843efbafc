#include <functional>
#include <limits>

#include "cofree/operad.hpp"

namespace cofree {

namespace {

constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

int parity_sign(long long e) { return (e & 1) ? -1 : 1; }

struct S0Component {
  std::vector<Permutation> perms;
  std::map<std::vector<int>, std::size_t> index;
  SymmetricComplex symmetric;
};

S0Component s0_component(int n) {
  S0Component out;
  out.perms = all_permutations(n);
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < out.perms.size(); ++j) {
    out.index[out.perms[j].images()] = j;
    labels.push_back(out.perms[j].to_string());
  }
  auto complex = share(ChainComplex(GradedBasis({{0, labels}}), {}));
  std::vector<SparseMatrix> gens;
  for (int k = 0; k + 1 < n; ++k) {
    const Permutation s = Permutation::adjacent(n, k);
    SparseMatrix g(out.perms.size(), out.perms.size());
    for (std::size_t j = 0; j < out.perms.size(); ++j) g.add_entry(out.index.at((s * out.perms[j]).images()), j, 1);
    gens.push_back(std::move(g));
  }
  out.symmetric = SymmetricComplex(complex, n, std::move(gens));
  return out;
}

// Sequence of a with the entry equal to slot-1 replaced by the shifted sequence of b.
std::vector<int> s0_substitute(const std::vector<int>& a, int slot, const std::vector<int>& b) {
  const int i0 = slot - 1;
  const int n = static_cast<int>(b.size());
  std::vector<int> out;
  for (int v : a) {
    if (v == i0)
      for (int w : b) out.push_back(w + i0);
    else
      out.push_back(v > i0 ? v + n - 1 : v);
  }
  return out;
}

struct TensorOperad {
  OperadPtr operad;
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> pairs;
};

TensorOperad tensor_with_pairs(const OperadPtr& u, const OperadPtr& v) {
  const int N = std::min(u->arity_bound(), v->arity_bound());
  const bool unital = u->unital() && v->unital();
  const int lo = unital ? 0 : 1;
  std::map<int, SymmetricComplex> comps;
  std::map<int, TensorProduct> tps;
  TensorOperad out;
  for (int a = lo; a <= N; ++a) {
    TensorProduct tp = tensor_product(u->complex(a), v->complex(a));
    const std::size_t r = tp.flat_to_pair.size();
    std::vector<SparseMatrix> gens;
    for (int k = 0; k + 1 < a; ++k) {
      const SparseMatrix& gu = u->component(a).generator(k);
      const SparseMatrix& gv = v->component(a).generator(k);
      SparseMatrix g(r, r);
      for (std::size_t f = 0; f < r; ++f) {
        auto [x, y] = tp.flat_to_pair[f];
        for (const auto& [x2, cx] : gu.column(x))
          for (const auto& [y2, cy] : gv.column(y)) g.add_entry(tp.flat(x2, y2), f, cx * cy);
      }
      gens.push_back(std::move(g));
    }
    comps.emplace(a, SymmetricComplex(share(tp.complex), a, std::move(gens)));
    out.pairs[a] = tp.flat_to_pair;
    tps.emplace(a, std::move(tp));
  }
  SparseVector unit;
  for (const auto& [x, cx] : u->unit())
    for (const auto& [y, cy] : v->unit()) add_entry(unit, tps.at(1).flat(x, y), cx * cy);

  std::map<CompositionKey, CompositionTable> tables;
  for (int m = 1; m <= N; ++m)
    for (int n = lo; m + n - 1 <= N; ++n)
      for (int slot = 1; slot <= m; ++slot) {
        const TensorProduct& tm = tps.at(m);
        const TensorProduct& tn = tps.at(n);
        const TensorProduct& tr = tps.at(m + n - 1);
        CompositionTable table(tm.flat_to_pair.size() * tn.flat_to_pair.size());
        for (std::size_t f = 0; f < tm.flat_to_pair.size(); ++f)
          for (std::size_t g = 0; g < tn.flat_to_pair.size(); ++g) {
            auto [a, a2] = tm.flat_to_pair[f];
            auto [b, b2] = tn.flat_to_pair[g];
            const int sign = parity_sign(static_cast<long long>(v->degree_of(m, a2)) * u->degree_of(n, b));
            SparseVector& cell = table[f * tn.flat_to_pair.size() + g];
            const SparseVector& left = u->compose_basis(m, a, slot, n, b);
            const SparseVector& right = v->compose_basis(m, a2, slot, n, b2);
            for (const auto& [c, cc] : left)
              for (const auto& [c2, cc2] : right) add_entry(cell, tr.flat(c, c2), cc * cc2 * sign);
          }
        tables.emplace(CompositionKey{m, slot, n}, std::move(table));
      }
  out.operad = std::make_shared<TruncatedOperad>(N, unital, std::move(comps), std::move(unit), std::move(tables),
                                                 u->name() + "(x)" + v->name());
  return out;
}

SigmaDiagonal finish_diagonal(const OperadPtr& o, const OperadPtr& s0,
                              const std::function<std::size_t(int, std::size_t)>& s0_index) {
  TensorOperad t = tensor_with_pairs(o, s0);
  SigmaDiagonal out;
  out.tensor = t.operad;
  out.pairs = t.pairs;
  out.delta.source = o;
  out.delta.target = t.operad;
  out.projection.source = t.operad;
  out.projection.target = o;
  for (int a = o->min_arity(); a <= o->arity_bound(); ++a) {
    const std::size_t ro = o->rank(a), rs = s0->rank(a);
    std::vector<std::size_t> pair_to_flat(ro * rs);
    for (std::size_t f = 0; f < t.pairs[a].size(); ++f)
      pair_to_flat[t.pairs[a][f].first * rs + t.pairs[a][f].second] = f;
    SparseMatrix d(t.pairs[a].size(), ro);
    for (std::size_t x = 0; x < ro; ++x) d.add_entry(pair_to_flat[x * rs + s0_index(a, x)], x, 1);
    SparseMatrix p(ro, t.pairs[a].size());
    for (std::size_t f = 0; f < t.pairs[a].size(); ++f) p.add_entry(t.pairs[a][f].first, f, 1);
    out.delta.maps.emplace(a, std::move(d));
    out.projection.maps.emplace(a, std::move(p));
  }
  return out;
}

}  // namespace

OperadPtr s0_operad(int arity_bound, bool unital) {
  const int lo = unital ? 0 : 1;
  std::map<int, S0Component> comps;
  for (int a = lo; a <= arity_bound; ++a) comps.emplace(a, s0_component(a));
  std::map<CompositionKey, CompositionTable> tables;
  for (int m = 1; m <= arity_bound; ++m)
    for (int n = lo; m + n - 1 <= arity_bound; ++n)
      for (int slot = 1; slot <= m; ++slot) {
        const auto& cm = comps.at(m);
        const auto& cn = comps.at(n);
        const auto& cr = comps.at(m + n - 1);
        CompositionTable table(cm.perms.size() * cn.perms.size());
        for (std::size_t a = 0; a < cm.perms.size(); ++a)
          for (std::size_t b = 0; b < cn.perms.size(); ++b)
            table[a * cn.perms.size() + b] = {
                {cr.index.at(s0_substitute(cm.perms[a].images(), slot, cn.perms[b].images())), Integer(1)}};
        tables.emplace(CompositionKey{m, slot, n}, std::move(table));
      }
  std::map<int, SymmetricComplex> sym;
  for (auto& [a, c] : comps) sym.emplace(a, c.symmetric);
  return std::make_shared<TruncatedOperad>(arity_bound, unital, std::move(sym), SparseVector{{0, Integer(1)}},
                                           std::move(tables), "S0");
}

OperadPtr com_operad(int arity_bound, bool unital) {
  const int lo = unital ? 0 : 1;
  std::map<int, SymmetricComplex> comps;
  for (int a = lo; a <= arity_bound; ++a)
    comps.emplace(a, SymmetricComplex::trivial(share(ChainComplex(GradedBasis({{0, {"c" + std::to_string(a)}}}), {})), a));
  std::map<CompositionKey, CompositionTable> tables;
  for (int m = 1; m <= arity_bound; ++m)
    for (int n = lo; m + n - 1 <= arity_bound; ++n)
      for (int slot = 1; slot <= m; ++slot) tables.emplace(CompositionKey{m, slot, n}, CompositionTable{{{0, Integer(1)}}});
  return std::make_shared<TruncatedOperad>(arity_bound, unital, std::move(comps), SparseVector{{0, Integer(1)}},
                                           std::move(tables), "Com");
}

OperadPtr tensor_operads(const OperadPtr& u, const OperadPtr& v) { return tensor_with_pairs(u, v).operad; }

SparseVector CoEndOperad::element(int arity, const SparseMatrix& m) const {
  const OrderedTensor& p = powers.at(arity);
  const auto& idx = index.at(arity);
  const std::size_t rp = p.complex.total_rank();
  if (m.rows() != rp || m.cols() != carrier->total_rank()) throw Error("coend element: map has the wrong shape");
  SparseVector out;
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (const auto& [x, v] : m.column(c)) {
      const std::size_t f = idx[c * rp + x];
      if (f == kAbsent) throw Error("coend element: map leaves the relative component");
      add_entry(out, f, v);
    }
  return out;
}

SparseMatrix CoEndOperad::map(int arity, const SparseVector& e) const {
  SparseMatrix out(powers.at(arity).complex.total_rank(), carrier->total_rank());
  for (const auto& [f, v] : e) {
    auto [c, x] = elementary.at(arity)[f];
    out.add_entry(x, c, v);
  }
  return out;
}

CoEndOperad coend_operad(const ComplexPtr& c, int arity_bound, const std::vector<std::vector<std::string>>& preserved,
                         bool unital) {
  CoEndOperad out;
  out.carrier = c;
  const std::size_t rc = c->total_rank();

  // Membership of carrier basis elements in each D_j; each D_j must be closed under d.
  std::vector<std::vector<bool>> member(preserved.size(), std::vector<bool>(rc, false));
  for (std::size_t j = 0; j < preserved.size(); ++j) {
    for (const auto& label : preserved[j]) {
      bool found = false;
      for (std::size_t f = 0; f < rc; ++f)
        if (c->label_of(f) == label) {
          member[j][f] = true;
          found = true;
        }
      if (!found) throw Error("coend_operad: unknown label " + label + " in a preserved subcomplex");
    }
    for (std::size_t f = 0; f < rc; ++f)
      if (member[j][f])
        for (const auto& [g, v] : c->boundary(f))
          if (!member[j][g]) throw Error("coend_operad: preserved set " + std::to_string(j) + " is not a subcomplex");
  }

  const int lo = unital ? 0 : 1;
  std::map<int, SymmetricComplex> comps;
  for (int a = lo; a <= arity_bound; ++a) {
    OrderedTensor p = tensor_power(c, a);
    const std::size_t rp = p.complex.total_rank();
    HomComplex h = hom(c, share(p.complex), HomConvention::Standard);
    auto allowed = [&](std::size_t src, std::size_t x) {
      if (a == 0) return true;
      auto t = p.tuple(x);
      for (std::size_t j = 0; j < member.size(); ++j)
        if (member[j][src])
          for (std::size_t y : t)
            if (!member[j][y]) return false;
      return true;
    };
    std::vector<std::size_t> keep;
    std::vector<std::size_t> new_index(h.flat_to_pair.size(), kAbsent);
    std::map<int, std::vector<std::string>> labels;
    for (std::size_t f = 0; f < h.flat_to_pair.size(); ++f) {
      auto [src, x] = h.flat_to_pair[f];
      if (!allowed(src, x)) continue;
      new_index[f] = keep.size();
      keep.push_back(f);
      labels[h.complex.degree_of(f)].push_back(h.complex.label_of(f));
    }
    SparseMatrix d(keep.size(), keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k)
      for (const auto& [r, v] : h.complex.boundary(keep[k])) {
        if (new_index[r] == kAbsent) throw Error("coend_operad: relative component not closed under d");
        d.add_entry(new_index[r], k, v);
      }
    auto complex = share(ChainComplex::from_flat(GradedBasis(std::move(labels)), d));

    std::vector<std::pair<std::size_t, std::size_t>> elem;
    std::vector<std::size_t> idx(rc * rp, kAbsent);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      elem.push_back(h.flat_to_pair[keep[k]]);
      idx[elem.back().first * rp + elem.back().second] = k;
    }
    std::vector<SparseMatrix> gens;
    for (int s = 0; s + 1 < a; ++s) {
      const Permutation sigma = Permutation::adjacent(a, s);
      SparseMatrix g(keep.size(), keep.size());
      for (std::size_t k = 0; k < keep.size(); ++k) {
        auto [src, x] = elem[k];
        auto t = p.tuple(x);
        auto [t2, sign] = permute_tuple(t, p.factor_degrees(t), sigma);
        g.add_entry(idx[src * rp + p.flat(t2)], k, sign);
      }
      gens.push_back(std::move(g));
    }
    comps.emplace(a, SymmetricComplex(complex, a, std::move(gens)));
    out.elementary[a] = std::move(elem);
    out.index[a] = std::move(idx);
    out.powers.emplace(a, std::move(p));
  }

  SparseVector unit;
  for (std::size_t f = 0; f < rc; ++f) add_entry(unit, out.index[1][f * rc + out.powers.at(1).flat({f})], 1);

  std::map<CompositionKey, CompositionTable> tables;
  for (int m = 1; m <= arity_bound; ++m)
    for (int n = lo; m + n - 1 <= arity_bound; ++n)
      for (int slot = 1; slot <= m; ++slot) {
        const OrderedTensor& pm = out.powers.at(m);
        const OrderedTensor& pn = out.powers.at(n);
        const OrderedTensor& pr = out.powers.at(m + n - 1);
        const auto& em = out.elementary.at(m);
        const auto& en = out.elementary.at(n);
        const auto& ir = out.index.at(m + n - 1);
        const std::size_t rr = pr.complex.total_rank();
        // Maps of arity n grouped by their source element.
        std::vector<std::vector<std::size_t>> by_source(rc);
        for (std::size_t g = 0; g < en.size(); ++g) by_source[en[g].first].push_back(g);
        CompositionTable table(em.size() * en.size());
        for (std::size_t f = 0; f < em.size(); ++f) {
          auto [src, x] = em[f];
          auto tx = pm.tuple(x);
          const int deg_f = comps.at(m).complex()->degree_of(f);
          int before = 0;
          for (int l = 0; l + 1 < slot; ++l) before += c->degree_of(tx[l]);
          for (std::size_t g : by_source[tx[slot - 1]]) {
            auto ty = pn.tuple(en[g].second);
            const int deg_g = comps.at(n).complex()->degree_of(g);
            std::vector<std::size_t> tz(tx.begin(), tx.begin() + (slot - 1));
            tz.insert(tz.end(), ty.begin(), ty.end());
            tz.insert(tz.end(), tx.begin() + slot, tx.end());
            const std::size_t r = ir[src * rr + pr.flat(tz)];
            if (r == kAbsent) throw Error("coend_operad: composite leaves the relative component");
            const int sign = parity_sign(static_cast<long long>(deg_f) * deg_g + static_cast<long long>(deg_g) * before);
            table[f * en.size() + g] = {{r, Integer(sign)}};
          }
        }
        tables.emplace(CompositionKey{m, slot, n}, std::move(table));
      }
  out.operad = std::make_shared<TruncatedOperad>(arity_bound, unital, std::move(comps), std::move(unit),
                                                 std::move(tables), preserved.empty() ? "CoEnd" : "CoEnd_rel");
  return out;
}

SparseMatrix interval_path(const Permutation& sigma) {
  const int n = sigma.size();
  auto interval = share(unit_interval());
  OrderedTensor p = tensor_power(interval, n);
  const std::size_t p0 = *interval->flat_index_of(0, "p0");
  const std::size_t p1 = *interval->flat_index_of(0, "p1");
  const std::size_t q = *interval->flat_index_of(1, "q");
  SparseMatrix out(p.complex.total_rank(), interval->total_rank());
  out.add_entry(p.flat(std::vector<std::size_t>(n, p0)), p0, 1);
  out.add_entry(p.flat(std::vector<std::size_t>(n, p1)), p1, 1);
  std::vector<std::size_t> t(n, p0);
  for (int k = 0; k < n; ++k) {
    t[sigma(k)] = q;
    out.add_entry(p.flat(t), q, 1);
    t[sigma(k)] = p1;
  }
  return out;
}

IntervalCoendReport interval_coend(int n) {
  if (n < 1) throw Error("interval_coend: n must be positive");
  IntervalCoendReport rep;
  rep.n = n;
  rep.coend = coend_operad(share(unit_interval()), n, {{"p0"}, {"p1"}});
  const ChainComplex& k = rep.coend.operad->complex(n);
  rep.orders = all_permutations(n);
  rep.path_count = rep.orders.size();
  for (const auto& s : rep.orders) rep.paths.push_back(rep.coend.element(n, interval_path(s)));

  const auto interval = rep.coend.carrier;
  const std::size_t p0 = *interval->flat_index_of(0, "p0");
  const std::size_t p1 = *interval->flat_index_of(0, "p1");
  IntegerMatrix zero_cycles;
  for (int d : k.degrees()) {
    IntegerMatrix z = kernel_basis(k.differential(d));
    rep.cycle_ranks[d] = z.cols();
    std::vector<SparseVector> restricted;
    for (std::size_t col = 0; col < z.cols(); ++col) {
      SparseVector r;
      for (std::size_t l = 0; l < z.rows(); ++l) {
        if (z(l, col) == 0) continue;
        const std::size_t f = k.flat_index(d, l);
        const std::size_t src = rep.coend.elementary.at(n)[f].first;
        if (src == p0 || src == p1) add_entry(r, f, z(l, col));
      }
      restricted.push_back(std::move(r));
    }
    rep.endpoint_visible_ranks[d] = rank(restricted, k.total_rank());
    if (d == 0) zero_cycles = z;
  }

  const std::size_t r0 = k.rank(0), off0 = k.offset(0);
  IntegerMatrix path_cols(r0, rep.paths.size());
  for (std::size_t j = 0; j < rep.paths.size(); ++j)
    for (const auto& [f, v] : rep.paths[j]) path_cols(f - off0, j) = v;
  rep.chain_map_rank = zero_cycles.cols();
  rep.path_span_rank = rank(path_cols);
  rep.paths_independent = rep.path_span_rank == rep.path_count;
  rep.paths_span_chain_maps = same_lattice(image_basis(path_cols), zero_cycles);

  // Generators must send each path to the path of the permuted order, and the orbit of the
  // first path must reach every path exactly once.
  std::map<SparseVector, std::size_t> which;
  for (std::size_t j = 0; j < rep.paths.size(); ++j) which.emplace(rep.paths[j], j);
  bool ok = which.size() == rep.paths.size();
  const auto& sym = rep.coend.operad->component(n);
  for (std::size_t j = 0; ok && j < rep.paths.size(); ++j)
    for (int s = 0; s + 1 < n; ++s) {
      auto it = which.find(sym.generator(s).apply(rep.paths[j]));
      if (it == which.end() || rep.orders[it->second] != Permutation::adjacent(n, s) * rep.orders[j]) ok = false;
    }
  rep.free_transitive = ok;
  return rep;
}

SigmaDiagonal sigma_diagonal(const OperadPtr& o) {
  if (const auto& data = o->free_data()) {
    auto s0 = s0_operad(o->arity_bound(), o->unital());
    std::map<int, std::map<std::vector<int>, std::size_t>> index;
    for (int a = s0->min_arity(); a <= s0->arity_bound(); ++a) {
      auto perms = all_permutations(a);
      for (std::size_t j = 0; j < perms.size(); ++j) index[a][perms[j].images()] = j;
    }
    return finish_diagonal(o, s0, [&](int a, std::size_t x) {
      std::vector<int> seq = data->trees.at(a)[x].leaf_sequence();
      for (int& v : seq) v -= 1;
      return index.at(a).at(seq);
    });
  }
  if (o->name() == "S0") return finish_diagonal(o, o, [](int, std::size_t x) { return x; });
  throw Error("sigma_diagonal: no canonical diagonal for operad " + o->name());
}

bool SigmaDiagonal::triangle_commutes() const {
  for (const auto& [a, d] : delta.maps)
    if (projection.maps.at(a) * d != SparseMatrix::identity(d.cols())) return false;
  return true;
}

}  // namespace cofree
