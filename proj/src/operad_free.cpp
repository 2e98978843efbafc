#include <functional>
#include <unordered_map>

#include "cofree/operad.hpp"

namespace cofree {

namespace {

int parity_sign(long long e) { return (e & 1) ? -1 : 1; }

void print_tree(const OperadTree& t, const std::vector<FreeGenerator>& gens, std::string& out) {
  if (t.is_leaf()) {
    out += std::to_string(t.leaf);
    return;
  }
  out += gens[t.generator].name;
  out += "(";
  for (std::size_t c = 0; c < t.children.size(); ++c) {
    if (c) out += ",";
    print_tree(t.children[c], gens, out);
  }
  out += ")";
}

void collect_leaves(const OperadTree& t, std::vector<int>& out) {
  if (t.is_leaf()) {
    out.push_back(t.leaf);
    return;
  }
  for (const auto& c : t.children) collect_leaves(c, out);
}

// Planar shapes with n leaves (leaf labels left at zero).
class ShapeEnumerator {
 public:
  explicit ShapeEnumerator(const std::vector<FreeGenerator>& gens) : gens_(gens) {}

  const std::vector<OperadTree>& shapes(int n) {
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;
    std::vector<OperadTree> out;
    if (n == 1) {
      out.push_back(OperadTree{});
    } else {
      for (std::size_t g = 0; g < gens_.size(); ++g) {
        const int k = gens_[g].arity;
        if (k > n) continue;
        std::vector<int> parts(k, 1);
        parts.back() = n - (k - 1);
        // Compositions of n into k positive parts in lexicographic order.
        std::function<void(int, int)> split = [&](int pos, int remaining) {
          if (pos == k - 1) {
            parts[pos] = remaining;
            append_products(static_cast<int>(g), parts, out);
            return;
          }
          for (int v = 1; v <= remaining - (k - 1 - pos); ++v) {
            parts[pos] = v;
            split(pos + 1, remaining - v);
          }
        };
        split(0, n);
      }
    }
    return memo_[n] = std::move(out);
  }

 private:
  void append_products(int g, const std::vector<int>& parts, std::vector<OperadTree>& out) {
    std::vector<const std::vector<OperadTree>*> lists;
    for (int p : parts) lists.push_back(&shapes(p));
    std::vector<std::size_t> pick(parts.size(), 0);
    for (const auto* l : lists)
      if (l->empty()) return;
    while (true) {
      OperadTree t;
      t.generator = g;
      for (std::size_t j = 0; j < parts.size(); ++j) t.children.push_back((*lists[j])[pick[j]]);
      out.push_back(std::move(t));
      std::size_t j = parts.size();
      while (j > 0) {
        --j;
        if (++pick[j] < lists[j]->size()) break;
        pick[j] = 0;
        if (j == 0) return;
      }
    }
  }

  const std::vector<FreeGenerator>& gens_;
  std::map<int, std::vector<OperadTree>> memo_;
};

OperadTree labeled(const OperadTree& shape, const Permutation& sigma, int& next) {
  if (shape.is_leaf()) {
    OperadTree leaf;
    leaf.leaf = sigma(next++) + 1;
    return leaf;
  }
  OperadTree t;
  t.generator = shape.generator;
  for (const auto& c : shape.children) t.children.push_back(labeled(c, sigma, next));
  return t;
}

OperadTree relabel(const OperadTree& t, const std::function<int(int)>& f) {
  if (t.is_leaf()) {
    OperadTree leaf;
    leaf.leaf = f(t.leaf);
    return leaf;
  }
  OperadTree out;
  out.generator = t.generator;
  for (const auto& c : t.children) out.children.push_back(relabel(c, f));
  return out;
}

// a o_slot b with b's inputs inserted as a block; the sign moves b's vertices past the
// vertices of a that follow the grafting leaf in pre-order.
std::pair<OperadTree, int> graft_trees(const OperadTree& a, int slot, const OperadTree& b, int n,
                                       const std::vector<FreeGenerator>& gens) {
  const int deg_b = b.degree(gens);
  long long after = 0;
  bool seen = false;
  std::function<OperadTree(const OperadTree&)> rebuild = [&](const OperadTree& t) -> OperadTree {
    if (t.is_leaf()) {
      if (t.leaf == slot) {
        seen = true;
        return relabel(b, [&](int l) { return l + slot - 1; });
      }
      OperadTree leaf;
      leaf.leaf = t.leaf > slot ? t.leaf + n - 1 : t.leaf;
      return leaf;
    }
    if (seen) after += gens[t.generator].degree;
    OperadTree out;
    out.generator = t.generator;
    for (const auto& c : t.children) out.children.push_back(rebuild(c));
    return out;
  };
  OperadTree result = rebuild(a);
  return {std::move(result), parity_sign(after * deg_b)};
}

}  // namespace

int OperadTree::arity() const {
  if (is_leaf()) return 1;
  int n = 0;
  for (const auto& c : children) n += c.arity();
  return n;
}

int OperadTree::degree(const std::vector<FreeGenerator>& gens) const {
  if (is_leaf()) return 0;
  int d = gens[generator].degree;
  for (const auto& c : children) d += c.degree(gens);
  return d;
}

std::vector<int> OperadTree::leaf_sequence() const {
  std::vector<int> out;
  collect_leaves(*this, out);
  return out;
}

std::string OperadTree::to_string(const std::vector<FreeGenerator>& gens) const {
  if (is_leaf()) return "id";
  std::string out;
  print_tree(*this, gens, out);
  return out;
}

std::size_t FreeOperad::generator_index(std::size_t g) const {
  const FreeGenerator& gen = data->generators.at(g);
  OperadTree t;
  t.generator = static_cast<int>(g);
  for (int l = 1; l <= gen.arity; ++l) {
    OperadTree leaf;
    leaf.leaf = l;
    t.children.push_back(leaf);
  }
  const std::string label = t.to_string(data->generators);
  const auto& trees = data->trees.at(gen.arity);
  for (std::size_t j = 0; j < trees.size(); ++j)
    if (trees[j].to_string(data->generators) == label) return j;
  throw Error("free operad: generator beyond the arity bound");
}

FreeOperad free_operad(const std::vector<FreeGenerator>& generators, int arity_bound) {
  if (arity_bound < 1) throw Error("free_operad: arity bound must be at least 1");
  for (const auto& g : generators)
    if (g.arity < 2) throw Error("free_operad: generator " + g.name + " must have arity at least 2");

  auto data = std::make_shared<FreeOperadData>();
  data->generators = generators;
  ShapeEnumerator shapes(generators);
  std::map<int, std::unordered_map<std::string, std::size_t>> index;
  std::map<int, SymmetricComplex> comps;
  for (int a = 1; a <= arity_bound; ++a) {
    std::map<int, std::vector<OperadTree>> by_degree;
    const auto perms = all_permutations(a);
    for (const auto& shape : shapes.shapes(a))
      for (const auto& sigma : perms) {
        int next = 0;
        OperadTree t = labeled(shape, sigma, next);
        by_degree[t.degree(generators)].push_back(std::move(t));
      }
    auto& trees = data->trees[a];
    std::map<int, std::vector<std::string>> labels;
    for (auto& [d, list] : by_degree)
      for (auto& t : list) {
        std::string label = t.to_string(generators);
        index[a][label] = trees.size();
        labels[d].push_back(std::move(label));
        trees.push_back(std::move(t));
      }
    auto complex = share(ChainComplex(GradedBasis(std::move(labels)), {}));
    std::vector<SparseMatrix> gens;
    for (int k = 0; k + 1 < a; ++k) {
      const Permutation s = Permutation::adjacent(a, k);
      SparseMatrix g(trees.size(), trees.size());
      for (std::size_t j = 0; j < trees.size(); ++j) {
        OperadTree moved = relabel(trees[j], [&](int l) { return s(l - 1) + 1; });
        g.add_entry(index[a].at(moved.to_string(generators)), j, 1);
      }
      gens.push_back(std::move(g));
    }
    comps.emplace(a, SymmetricComplex(complex, a, std::move(gens)));
  }

  std::map<CompositionKey, CompositionTable> tables;
  for (int m = 1; m <= arity_bound; ++m)
    for (int n = 1; m + n - 1 <= arity_bound; ++n)
      for (int slot = 1; slot <= m; ++slot) {
        const auto& tm = data->trees.at(m);
        const auto& tn = data->trees.at(n);
        CompositionTable table(tm.size() * tn.size());
        for (std::size_t a = 0; a < tm.size(); ++a)
          for (std::size_t b = 0; b < tn.size(); ++b) {
            auto [t, sign] = graft_trees(tm[a], slot, tn[b], n, generators);
            table[a * tn.size() + b] = {{index[m + n - 1].at(t.to_string(generators)), Integer(sign)}};
          }
        tables.emplace(CompositionKey{m, slot, n}, std::move(table));
      }

  TruncatedOperad op(arity_bound, false, std::move(comps), SparseVector{{0, Integer(1)}}, std::move(tables), "Free");
  op.attach_free_data(data);
  FreeOperad out;
  out.operad = std::make_shared<TruncatedOperad>(std::move(op));
  out.data = data;
  return out;
}

// ---------------------------------------------------------------------------------------------
// Ideals and quotients

namespace {

std::map<int, SparseVector> homogeneous_parts(const ChainComplex& c, const SparseVector& x) {
  std::map<int, SparseVector> out;
  for (const auto& [f, v] : x) out[c.degree_of(f)][f] = v;
  return out;
}

IntegerMatrix local_columns(const ChainComplex& c, int degree, const std::vector<SparseVector>& vs) {
  const std::size_t r = c.rank(degree), off = c.offset(degree);
  IntegerMatrix m(r, vs.size());
  for (std::size_t j = 0; j < vs.size(); ++j)
    for (const auto& [f, v] : vs[j]) m(f - off, j) = v;
  return m;
}

std::vector<SparseVector> flat_columns(const ChainComplex& c, int degree, const IntegerMatrix& m) {
  std::vector<SparseVector> out;
  const std::size_t off = c.offset(degree);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    SparseVector v;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0) v[off + i] = m(i, j);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::size_t OperadIdeal::rank(int arity) const {
  auto it = basis.find(arity);
  return it == basis.end() ? 0 : it->second.size();
}

bool OperadIdeal::contains(int arity, const SparseVector& x) const {
  const ChainComplex& c = parent->complex(arity);
  const auto it = basis.find(arity);
  for (const auto& [d, part] : homogeneous_parts(c, x)) {
    std::vector<SparseVector> same;
    if (it != basis.end())
      for (const auto& b : it->second)
        if (!b.empty() && c.degree_of(b.begin()->first) == d) same.push_back(b);
    if (same.empty()) return false;
    IntegerMatrix cols = local_columns(c, d, same);
    IntegerMatrix target = local_columns(c, d, {part});
    if (!in_lattice(cols, target.column(0))) return false;
  }
  return true;
}

IdealQuotient ideal_and_quotient(const OperadPtr& h, const std::vector<std::pair<int, SparseVector>>& generators) {
  const TruncatedOperad& o = *h;
  const int N = o.arity_bound();
  for (const auto& [a, v] : generators)
    if (a < 2 || a > N) throw Error("ideal_and_quotient: generators must lie in arities 2..N");

  // Saturated lattice per arity and degree, as local columns.
  std::map<int, std::map<int, IntegerMatrix>> lattice;
  auto absorb = [&](int arity, const std::vector<SparseVector>& vs) {
    const ChainComplex& c = o.complex(arity);
    std::map<int, std::vector<SparseVector>> by_degree;
    for (const auto& v : vs)
      for (auto& [d, part] : homogeneous_parts(c, v)) by_degree[d].push_back(std::move(part));
    for (auto& [d, list] : by_degree) {
      if (arity < 2) throw Error("ideal_and_quotient: the ideal reaches arity " + std::to_string(arity));
      IntegerMatrix fresh = local_columns(c, d, list);
      auto it = lattice[arity].find(d);
      IntegerMatrix all = it == lattice[arity].end() ? fresh : hconcat(it->second, fresh);
      lattice[arity][d] = saturate(all);
    }
  };
  auto current = [&](int arity) {
    std::vector<SparseVector> out;
    for (const auto& [d, m] : lattice[arity]) {
      auto cols = flat_columns(o.complex(arity), d, m);
      out.insert(out.end(), cols.begin(), cols.end());
    }
    return out;
  };
  auto ranks = [&]() {
    std::map<std::pair<int, int>, std::size_t> r;
    for (const auto& [a, by_d] : lattice)
      for (const auto& [d, m] : by_d) r[{a, d}] = m.cols();
    return r;
  };

  for (const auto& [a, v] : generators) absorb(a, {v});
  while (true) {
    const auto before = ranks();
    std::map<int, std::vector<SparseVector>> produced;
    for (int m = 2; m <= N; ++m)
      for (const SparseVector& x : current(m)) {
        produced[m].push_back(o.boundary(m, x));
        for (int k = 0; k + 1 < m; ++k) produced[m].push_back(o.act(m, Permutation::adjacent(m, k), x));
        for (int n = o.min_arity(); m + n - 1 <= N; ++n)
          for (std::size_t b = 0; b < o.rank(n); ++b)
            for (int i = 1; i <= m; ++i) produced[m + n - 1].push_back(o.compose(m, x, i, n, {{b, Integer(1)}}));
        for (int p = 1; p + m - 1 <= N; ++p)
          for (std::size_t b = 0; b < o.rank(p); ++b)
            for (int i = 1; i <= p; ++i) produced[p + m - 1].push_back(o.compose(p, {{b, Integer(1)}}, i, m, x));
      }
    for (auto& [a, vs] : produced) {
      std::vector<SparseVector> nonzero;
      for (auto& v : vs)
        if (!v.empty()) nonzero.push_back(std::move(v));
      if (!nonzero.empty()) absorb(a, nonzero);
    }
    if (ranks() == before) break;
  }

  IdealQuotient out;
  out.ideal.parent = h;
  for (int a = o.min_arity(); a <= N; ++a) {
    auto vs = current(a);
    if (!vs.empty()) out.ideal.basis[a] = std::move(vs);
  }

  // Quotient through a lattice complement per arity and degree.
  struct Block {
    IntegerMatrix p;  // quotient x parent (local)
    IntegerMatrix q;  // parent x quotient (local)
  };
  std::map<int, std::map<int, Block>> blocks;
  std::map<int, SymmetricComplex> comps;
  std::map<int, std::vector<SparseVector>> lifts;  // quotient flat -> parent flat vector
  for (int a = o.min_arity(); a <= N; ++a) {
    const ChainComplex& c = o.complex(a);
    std::map<int, std::vector<std::string>> labels;
    for (int d : c.degrees()) {
      const std::size_t r = c.rank(d);
      Block blk;
      auto it = lattice[a].find(d);
      if (it == lattice[a].end() || it->second.cols() == 0) {
        blk.p = IntegerMatrix::identity(r);
        blk.q = IntegerMatrix::identity(r);
      } else {
        LatticeComplement lc = lattice_complement(it->second);
        blk.p = lc.projection;
        blk.q = lc.section;
      }
      for (std::size_t j = 0; j < blk.q.cols(); ++j) {
        std::optional<std::size_t> unit_row;
        std::size_t nonzero = 0;
        for (std::size_t i = 0; i < r; ++i)
          if (blk.q(i, j) != 0) {
            ++nonzero;
            if (blk.q(i, j) == 1) unit_row = i;
          }
        if (nonzero == 1 && unit_row)
          labels[d].push_back(c.basis().labels(d)[*unit_row]);
        else
          labels[d].push_back("[q" + std::to_string(d) + "_" + std::to_string(j) + "]");
      }
      blocks[a][d] = std::move(blk);
    }
    std::map<int, IntegerMatrix> diff;
    for (int d : c.degrees()) {
      auto below = blocks[a].find(d - 1);
      if (below == blocks[a].end() || below->second.p.rows() == 0 || blocks[a][d].q.cols() == 0) continue;
      diff[d] = below->second.p * c.differential(d) * blocks[a][d].q;
    }
    auto qc = share(ChainComplex(GradedBasis(std::move(labels)), std::move(diff)));
    std::vector<SparseMatrix> gens;
    for (int k = 0; k + 1 < a; ++k) {
      SparseMatrix g(qc->total_rank(), qc->total_rank());
      for (int d : qc->degrees()) {
        IntegerMatrix block = blocks[a][d].p * o.component(a).generator_block(k, d) * blocks[a][d].q;
        for (std::size_t i = 0; i < block.rows(); ++i)
          for (std::size_t j = 0; j < block.cols(); ++j)
            if (block(i, j) != 0) g.add_entry(qc->flat_index(d, i), qc->flat_index(d, j), block(i, j));
      }
      gens.push_back(std::move(g));
    }
    for (int d : qc->degrees()) {
      auto cols = flat_columns(c, d, blocks[a][d].q);
      lifts[a].insert(lifts[a].end(), cols.begin(), cols.end());
    }
    comps.emplace(a, SymmetricComplex(qc, a, std::move(gens)));
  }

  // Projection matrices parent flat -> quotient flat.
  std::map<int, SparseMatrix> proj;
  for (int a = o.min_arity(); a <= N; ++a) {
    const ChainComplex& c = o.complex(a);
    const ChainComplex& qc = *comps.at(a).complex();
    SparseMatrix p(qc.total_rank(), c.total_rank());
    for (int d : c.degrees()) {
      const IntegerMatrix& blk = blocks[a][d].p;
      for (std::size_t i = 0; i < blk.rows(); ++i)
        for (std::size_t j = 0; j < blk.cols(); ++j)
          if (blk(i, j) != 0) p.add_entry(qc.flat_index(d, i), c.flat_index(d, j), blk(i, j));
    }
    proj.emplace(a, std::move(p));
  }

  std::map<CompositionKey, CompositionTable> tables;
  for (const auto& [key, table] : o.tables()) {
    const auto& lm = lifts[key.m];
    const auto& ln = lifts[key.n];
    CompositionTable qt(lm.size() * ln.size());
    for (std::size_t a = 0; a < lm.size(); ++a)
      for (std::size_t b = 0; b < ln.size(); ++b)
        qt[a * ln.size() + b] = proj.at(key.m + key.n - 1).apply(o.compose(key.m, lm[a], key.slot, key.n, ln[b]));
    tables.emplace(key, std::move(qt));
  }
  SparseVector unit = proj.at(1).apply(o.unit());
  out.quotient = std::make_shared<TruncatedOperad>(N, o.unital(), std::move(comps), std::move(unit), std::move(tables),
                                                   o.name() + "/I");
  out.projection.source = h;
  out.projection.target = out.quotient;
  out.projection.maps = std::move(proj);
  return out;
}

}  // namespace cofree
