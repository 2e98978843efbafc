#include "cofree/symmetric.hpp"

#include <algorithm>
#include <set>

namespace cofree {

// ---------------------------------------------------------------------------
// Finite sets

FiniteSetObj::FiniteSetObj(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
    throw Error("FiniteSetObj: duplicate label");
}

FiniteSetObj FiniteSetObj::standard(int n) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  return FiniteSetObj(std::move(labels));
}

bool FiniteSetObj::contains(const std::string& label) const {
  return std::binary_search(labels_.begin(), labels_.end(), label);
}

int FiniteSetObj::position(const std::string& label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) throw Error("FiniteSetObj: label '" + label + "' not in set");
  return static_cast<int>(it - labels_.begin());
}

FiniteSetObj graft(const FiniteSetObj& x_set, const std::string& x, const FiniteSetObj& y_set) {
  if (!x_set.contains(x)) throw Error("graft: '" + x + "' is not an element of X");
  std::set<std::string> taken;
  for (const auto& l : x_set.labels())
    if (l != x) taken.insert(l);
  std::set<std::string> reserved = taken;
  for (const auto& l : y_set.labels()) reserved.insert(l);
  std::vector<std::string> out(taken.begin(), taken.end());
  for (const auto& l : y_set.labels()) {
    std::string name = l;
    if (taken.count(name)) {
      for (int k = 1;; ++k) {
        name = l + "#" + std::to_string(k);
        if (!reserved.count(name) && !taken.count(name)) break;
      }
    }
    taken.insert(name);
    out.push_back(name);
  }
  return FiniteSetObj(std::move(out));
}

// ---------------------------------------------------------------------------
// Symmetric complexes

SymmetricComplex::SymmetricComplex(ComplexPtr complex, int arity, std::vector<SparseMatrix> generators)
    : complex_(std::move(complex)), arity_(arity), generators_(std::move(generators)) {
  if (arity_ < 0) throw Error("SymmetricComplex: negative arity");
  if (static_cast<int>(generators_.size()) != std::max(0, arity_ - 1))
    throw Error("SymmetricComplex: need arity - 1 generators");
  const std::size_t n = complex_->total_rank();
  for (const auto& g : generators_) {
    if (g.rows() != n || g.cols() != n) throw Error("SymmetricComplex: generator has wrong size");
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [i, v] : g.column(j))
        if (complex_->degree_of(i) != complex_->degree_of(j))
          throw Error("SymmetricComplex: generator does not preserve degree");
  }
}

SymmetricComplex SymmetricComplex::trivial(ComplexPtr complex, int arity) {
  std::vector<SparseMatrix> gens(std::max(0, arity - 1), SparseMatrix::identity(complex->total_rank()));
  return SymmetricComplex(std::move(complex), arity, std::move(gens));
}

IntegerMatrix SymmetricComplex::generator_block(int i, int degree) const {
  const std::size_t r = complex_->rank(degree), off = complex_->offset(degree);
  IntegerMatrix out(r, r);
  for (std::size_t j = 0; j < r; ++j)
    for (const auto& [row, v] : generators_.at(i).column(off + j)) out(row - off, j) = v;
  return out;
}

SparseMatrix SymmetricComplex::action(const Permutation& sigma) const {
  if (sigma.size() != arity_) throw Error("SymmetricComplex::action: permutation size mismatch");
  SparseMatrix out = SparseMatrix::identity(complex_->total_rank());
  for (int i : sigma.adjacent_word()) out = out * generators_[i];
  return out;
}

SparseVector SymmetricComplex::apply(const Permutation& sigma, const SparseVector& x) const {
  if (sigma.size() != arity_) throw Error("SymmetricComplex::apply: permutation size mismatch");
  std::vector<int> word = sigma.adjacent_word();
  SparseVector out = x;
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = generators_[*it].apply(out);
  return out;
}

std::vector<std::string> SymmetricComplex::check() const {
  std::vector<std::string> problems;
  const SparseMatrix& d = complex_->flat_differential();
  const SparseMatrix id = SparseMatrix::identity(complex_->total_rank());
  for (int i = 0; i + 1 < arity_; ++i) {
    const auto& g = generators_[i];
    if (g * d != d * g) problems.push_back("generator " + std::to_string(i) + " does not commute with d");
    if (g * g != id) problems.push_back("generator " + std::to_string(i) + " is not an involution");
    if (i + 2 < arity_) {
      SparseMatrix b = g * generators_[i + 1];
      if (b * b * b != id) problems.push_back("braid relation fails at " + std::to_string(i));
    }
    for (int j = i + 2; j + 1 < arity_; ++j)
      if (g * generators_[j] != generators_[j] * g)
        problems.push_back("generators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
  }
  return problems;
}

bool SymmetricComplex::is_signed_permutation() const {
  for (const auto& g : generators_)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const auto& col = g.column(j);
      if (col.size() != 1) return false;
      const Integer& v = col.begin()->second;
      if (v != 1 && v != -1) return false;
    }
  return true;
}

std::pair<std::vector<std::size_t>, int> permute_tuple(const std::vector<std::size_t>& tuple,
                                                       const std::vector<int>& degrees, const Permutation& sigma) {
  std::vector<std::size_t> out(tuple.size());
  for (int j = 0; j < sigma.size(); ++j) out[sigma(j)] = tuple[j];
  return {std::move(out), koszul::permutation_sign(degrees, sigma)};
}

namespace {

SparseMatrix tuple_permutation_matrix(const OrderedTensor& t, const Permutation& sigma) {
  const std::size_t n = t.complex.total_rank();
  SparseMatrix m(n, n);
  for (std::size_t f = 0; f < n; ++f) {
    auto tuple = t.tuple(f);
    auto [moved, sign] = permute_tuple(tuple, t.factor_degrees(tuple), sigma);
    m.add_entry(t.flat(moved), f, sign);
  }
  return m;
}

}  // namespace

SymmetricPower symmetric_power(const ComplexPtr& c, int n) {
  SymmetricPower out;
  out.power = tensor_power(c, n);
  std::vector<SparseMatrix> gens;
  for (int i = 0; i + 1 < n; ++i) gens.push_back(tuple_permutation_matrix(out.power, Permutation::adjacent(n, i)));
  out.symmetric = SymmetricComplex(share(out.power.complex), n, std::move(gens));
  return out;
}

SparseMatrix UnorderedTensor::coherence(const std::map<std::string, std::string>& sigma) const {
  const int n = set.size();
  if (static_cast<int>(sigma.size()) != n) throw Error("coherence: not a bijection of the index set");
  std::vector<int> images(n, -1);
  for (const auto& [from, to] : sigma) {
    if (!set.contains(from) || !set.contains(to)) throw Error("coherence: label outside the index set");
    images[set.position(from)] = set.position(to);
  }
  Permutation p(images);
  for (int j = 0; j < n; ++j) {
    const auto& a = tensor.factors[j];
    const auto& b = tensor.factors[p(j)];
    if (a != b && !(*a == *b)) throw Error("coherence: bijection does not match equal factors");
  }
  return tuple_permutation_matrix(tensor, p);
}

UnorderedTensor unordered_tensor(const FiniteSetObj& x, const std::map<std::string, ComplexPtr>& assignment) {
  UnorderedTensor out;
  out.set = x;
  std::vector<ComplexPtr> factors;
  for (const auto& l : x.labels()) {
    auto it = assignment.find(l);
    if (it == assignment.end()) throw Error("unordered_tensor: no complex assigned to '" + l + "'");
    factors.push_back(it->second);
  }
  out.tensor = ordered_tensor(factors);
  out.carrier = share(out.tensor.complex);
  return out;
}

SymmetricComplex unordered_power(const FiniteSetObj& x, const ComplexPtr& c) {
  return symmetric_power(c, x.size()).symmetric;
}

ChainMap signed_permutation_action(const std::map<std::string, std::string>& sigma, const UnorderedTensor& t) {
  return ChainMap(t.carrier, t.carrier, 0, t.coherence(sigma));
}

ChainMap concatenation_iso(const UnorderedTensor& tx, const UnorderedTensor& ty, const UnorderedTensor& txy) {
  for (const auto& l : tx.set.labels())
    if (ty.set.contains(l)) throw Error("concatenation_iso: index sets are not disjoint");
  std::vector<std::string> concat = tx.set.labels();
  for (const auto& l : ty.set.labels()) concat.push_back(l);
  if (!(FiniteSetObj(concat) == txy.set)) throw Error("concatenation_iso: target index set is not the union");
  std::vector<int> images;
  for (const auto& l : concat) images.push_back(txy.set.position(l));
  Permutation p(images);

  TensorProduct src = tensor_product(*tx.carrier, *ty.carrier);
  auto source = share(src.complex);
  SparseMatrix m(txy.carrier->total_rank(), source->total_rank());
  for (std::size_t f = 0; f < src.flat_to_pair.size(); ++f) {
    auto [a, b] = src.flat_to_pair[f];
    auto tuple = tx.tensor.tuple(a);
    auto tb = ty.tensor.tuple(b);
    tuple.insert(tuple.end(), tb.begin(), tb.end());
    std::vector<int> degrees = tx.tensor.factor_degrees(tx.tensor.tuple(a));
    for (int d : ty.tensor.factor_degrees(tb)) degrees.push_back(d);
    auto [moved, sign] = permute_tuple(tuple, degrees, p);
    m.add_entry(txy.tensor.flat(moved), f, sign);
  }
  return ChainMap(source, txy.carrier, 0, std::move(m));
}

// ---------------------------------------------------------------------------
// Group ring modules

SymmetricComplex GroupRingModule::to_symmetric() const {
  const auto perms = all_permutations(arity);
  std::map<Permutation, std::size_t> perm_index;
  for (std::size_t k = 0; k < perms.size(); ++k) perm_index[perms[k]] = k;

  std::map<int, std::vector<std::string>> labels;
  // Local position of (generator j, permutation k) within its degree.
  std::vector<std::size_t> local_start(generator_degrees.size());
  for (std::size_t j = 0; j < generator_degrees.size(); ++j) {
    auto& l = labels[generator_degrees[j]];
    local_start[j] = l.size();
    for (const auto& p : perms) l.push_back("g" + std::to_string(j) + p.to_string());
  }
  auto free = share(ChainComplex(GradedBasis(labels), {}));
  auto flat_of = [&](std::size_t j, std::size_t k) {
    return free->flat_index(generator_degrees[j], local_start[j] + k);
  };
  std::vector<SparseMatrix> gens;
  for (int i = 0; i + 1 < arity; ++i) {
    Permutation s = Permutation::adjacent(arity, i);
    SparseMatrix g(free->total_rank(), free->total_rank());
    for (std::size_t j = 0; j < generator_degrees.size(); ++j)
      for (std::size_t k = 0; k < perms.size(); ++k) g.add_entry(flat_of(j, perm_index.at(s * perms[k])), flat_of(j, k), 1);
    gens.push_back(std::move(g));
  }
  SymmetricComplex free_module(free, arity, std::move(gens));
  if (!idempotent) return free_module;

  const SparseMatrix& e = *idempotent;
  if (e.rows() != free->total_rank() || e.cols() != free->total_rank())
    throw Error("GroupRingModule: idempotent has wrong size");
  if (e * e != e) throw Error("GroupRingModule: presentation is not idempotent");
  for (const auto& g : free_module.generators())
    if (g * e != e * g) throw Error("GroupRingModule: idempotent is not equivariant");

  // Image of e, degree by degree.
  std::map<int, std::vector<std::string>> image_labels;
  std::vector<std::pair<int, IntegerMatrix>> blocks;
  std::size_t total = 0;
  for (int d : free->degrees()) {
    const std::size_t r = free->rank(d), off = free->offset(d);
    IntegerMatrix block(r, r);
    for (std::size_t j = 0; j < r; ++j)
      for (const auto& [i, v] : e.column(off + j)) {
        if (free->degree_of(i) != d) throw Error("GroupRingModule: idempotent does not preserve degree");
        block(i - off, j) = v;
      }
    IntegerMatrix basis = image_basis(block);
    for (std::size_t c = 0; c < basis.cols(); ++c)
      image_labels[d].push_back("e" + std::to_string(d) + "_" + std::to_string(c));
    total += basis.cols();
    blocks.emplace_back(d, basis);
  }
  auto image = share(ChainComplex(GradedBasis(image_labels), {}));
  std::vector<SparseMatrix> image_gens;
  for (int i = 0; i + 1 < arity; ++i) {
    SparseMatrix g(total, total);
    for (const auto& [d, basis] : blocks) {
      if (basis.cols() == 0) continue;
      IntegerMatrix act = free_module.generator_block(i, d) * basis;
      IntegerMatrix coords = left_inverse(basis) * act;
      for (std::size_t r = 0; r < coords.rows(); ++r)
        for (std::size_t c = 0; c < coords.cols(); ++c)
          if (coords(r, c) != 0) g.add_entry(image->flat_index(d, r), image->flat_index(d, c), coords(r, c));
    }
    image_gens.push_back(std::move(g));
  }
  return SymmetricComplex(image, arity, std::move(image_gens));
}

SymmetricComplex regular_representation(int n) { return GroupRingModule{n, {0}, std::nullopt}.to_symmetric(); }

std::optional<FreePresentation> free_presentation(const SymmetricComplex& m) {
  if (!m.is_signed_permutation()) return std::nullopt;
  const std::size_t n = m.complex()->total_rank();
  const auto perms = all_permutations(m.arity());
  FreePresentation out;
  std::vector<char> assigned(n, 0);
  out.entries.assign(n, FreePresentation::Entry{0, Permutation(), 1});
  for (std::size_t b = 0; b < n; ++b) {
    if (assigned[b]) continue;
    std::size_t orbit = out.generators.size();
    out.generators.push_back(b);
    for (const auto& sigma : perms) {
      SparseVector image = m.apply(sigma, SparseVector{{b, 1}});
      auto [target, value] = *image.begin();
      if (assigned[target]) return std::nullopt;
      assigned[target] = 1;
      out.entries[target] = FreePresentation::Entry{orbit, sigma, value == 1 ? 1 : -1};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equivariant Hom

SparseVector EquivariantHom::coordinates(const std::vector<SparseVector>& values) const {
  if (values.size() != test_points.size()) throw Error("EquivariantHom::coordinates: wrong number of values");
  const std::size_t rt = target->total_rank();
  SparseVector out;
  for (std::size_t p = 0; p < values.size(); ++p)
    for (const auto& [x, c] : values[p]) {
      auto it = functionals.find(p * rt + x);
      if (it == functionals.end()) continue;
      for (const auto& [i, coeff] : it->second) add_entry(out, i, c * coeff);
    }
  return out;
}

SparseMatrix EquivariantHom::inclusion(const HomComplex& ambient) const {
  SparseMatrix out(ambient.complex.total_rank(), maps.size());
  for (std::size_t i = 0; i < maps.size(); ++i)
    out.column(i) = ambient.element(ChainMap(source, target, complex->degree_of(i), maps[i]));
  return out;
}

EquivariantHom equivariant_hom(const SymmetricComplex& m, const SymmetricComplex& t, SolverPath path) {
  if (m.arity() != t.arity()) throw Error("equivariant_hom: arity mismatch");
  EquivariantHom out;
  out.source = m.complex();
  out.target = t.complex();
  const ChainComplex& src = *m.complex();
  const ChainComplex& tgt = *t.complex();
  const std::size_t rt = tgt.total_rank();

  // Basis maps grouped by degree, with labels.
  std::map<int, std::vector<std::pair<std::string, SparseMatrix>>> by_degree;
  // Functionals keyed by (degree, local index) until flat positions are known.
  std::vector<std::tuple<int, std::size_t, std::size_t, Integer>> pending;  // degree, local, key, coeff

  std::optional<FreePresentation> pres;
  if (path == SolverPath::Automatic) pres = free_presentation(m);

  if (pres) {
    out.free_path = true;
    out.test_points = pres->generators;
    const std::size_t rs = src.total_rank();
    // rho_T(sigma) on every target basis vector, once per permutation.
    std::map<Permutation, std::vector<SparseVector>> acted;
    for (const auto& e : pres->entries)
      if (!acted.count(e.sigma)) {
        std::vector<SparseVector> cols(rt);
        SparseMatrix a = t.action(e.sigma);
        for (std::size_t x = 0; x < rt; ++x) cols[x] = a.column(x);
        acted.emplace(e.sigma, std::move(cols));
      }
    for (std::size_t j = 0; j < pres->generators.size(); ++j) {
      std::size_t g = pres->generators[j];
      for (std::size_t x = 0; x < rt; ++x) {
        int deg = tgt.degree_of(x) - src.degree_of(g);
        SparseMatrix phi(rt, rs);
        for (std::size_t b = 0; b < rs; ++b) {
          const auto& e = pres->entries[b];
          if (e.orbit != j) continue;
          phi.column(b) = scaled(acted.at(e.sigma)[x], e.sign);
        }
        auto& bucket = by_degree[deg];
        pending.emplace_back(deg, bucket.size(), j * rt + x, Integer(1));
        bucket.emplace_back("[" + src.label_of(g) + "->" + tgt.label_of(x) + "]", std::move(phi));
      }
    }
  } else {
    out.free_path = false;
    for (std::size_t b = 0; b < src.total_rank(); ++b) out.test_points.push_back(b);
    HomComplex ambient = hom(m.complex(), t.complex(), HomConvention::Standard);
    const ChainComplex& amb = ambient.complex;
    const std::size_t rs = src.total_rank();
    std::vector<SparseMatrix> m_gens_t;
    for (const auto& g : m.generators()) m_gens_t.push_back(g.transpose());
    for (int k : amb.degrees()) {
      const std::size_t nk = amb.rank(k), off = amb.offset(k);
      // Equations E_s(phi) = rho_T(s) phi - phi rho_M(s), as sparse rows over local variables.
      std::map<std::size_t, SparseVector> rows;  // keyed by (generator, ambient index)
      for (std::size_t v = 0; v < nk; ++v) {
        auto [a, x] = ambient.flat_to_pair[off + v];
        for (std::size_t s = 0; s < t.generators().size(); ++s) {
          const std::size_t base = s * amb.total_rank();
          for (const auto& [x2, c] : t.generator(s).column(x))
            add_entry(rows[base + ambient.pair_to_flat[a * rt + x2]], v, c);
          // (e_{a->x} rho_M(s))(a') = rho_M(s)[a, a'] x.
          for (const auto& [a2, c] : m_gens_t[s].column(a))
            add_entry(rows[base + ambient.pair_to_flat[a2 * rt + x]], v, -c);
        }
      }
      std::vector<SparseVector> system;
      for (auto& [key, row] : rows)
        if (!row.empty()) system.push_back(std::move(row));
      std::vector<SparseVector> kernel = kernel_basis(system, nk);
      if (kernel.empty()) continue;
      // Left inverse: solve K^T z = e_i; the rows of K^T are the kernel vectors.
      std::vector<SparseVector> rhs;
      for (std::size_t i = 0; i < kernel.size(); ++i) rhs.push_back(SparseVector{{i, 1}});
      auto z = solve(kernel, nk, rhs);
      if (!z) throw Error("equivariant_hom: kernel basis is not saturated");
      auto& bucket = by_degree[k];
      for (std::size_t i = 0; i < kernel.size(); ++i) {
        SparseMatrix phi(rt, rs);
        for (const auto& [v, c] : kernel[i]) {
          auto [a, x] = ambient.flat_to_pair[off + v];
          phi.add_entry(x, a, c);
        }
        std::size_t local = bucket.size();
        for (const auto& [v, c] : (*z)[i]) {
          auto [a, x] = ambient.flat_to_pair[off + v];
          pending.emplace_back(k, local, a * rt + x, c);
        }
        bucket.emplace_back("h" + std::to_string(k) + "_" + std::to_string(local), std::move(phi));
      }
    }
  }

  std::map<int, std::vector<std::string>> labels;
  std::map<int, std::size_t> offsets;
  for (auto& [deg, items] : by_degree) {
    offsets[deg] = out.maps.size();
    for (auto& [label, phi] : items) {
      labels[deg].push_back(label);
      out.maps.push_back(std::move(phi));
    }
  }
  for (const auto& [deg, local, key, coeff] : pending) out.functionals[key].emplace_back(offsets[deg] + local, coeff);

  // Differential, standard convention: D phi = d_T phi - (-1)^|phi| phi d_M.
  const std::size_t r = out.maps.size();
  SparseMatrix diff(r, r);
  std::size_t i = 0;
  for (const auto& [deg, items] : by_degree)
    for (std::size_t l = 0; l < items.size(); ++l, ++i) {
      const SparseMatrix& phi = out.maps[i];
      int s = deg % 2 == 0 ? 1 : -1;
      std::vector<SparseVector> values;
      for (std::size_t p : out.test_points) {
        SparseVector v = tgt.flat_differential().apply(phi.column(p));
        add_scaled(v, phi.apply(src.boundary(p)), -s);
        values.push_back(std::move(v));
      }
      diff.column(i) = out.coordinates(values);
    }
  out.complex = share(ChainComplex::from_flat(GradedBasis(std::move(labels)), diff));
  return out;
}

EquivariantHom equivariant_hom(const GroupRingModule& m, const SymmetricComplex& t) {
  return equivariant_hom(m.to_symmetric(), t);
}

ProjectivityReport check_projective(const SymmetricComplex& m) {
  ProjectivityReport rep;
  if (free_presentation(m)) {
    rep.free = true;
    return rep;
  }
  const auto perms = all_permutations(m.arity());
  for (int d : m.complex()->degrees()) {
    const std::size_t r = m.complex()->rank(d);
    const std::size_t off = m.complex()->offset(d);
    std::vector<IntegerMatrix> rho, rho_inv;
    for (const auto& p : perms) {
      SparseMatrix a = m.action(p), b = m.action(p.inverse());
      IntegerMatrix da(r, r), db(r, r);
      for (std::size_t j = 0; j < r; ++j) {
        for (const auto& [i, v] : a.column(off + j)) da(i - off, j) = v;
        for (const auto& [i, v] : b.column(off + j)) db(i - off, j) = v;
      }
      rho.push_back(std::move(da));
      rho_inv.push_back(std::move(db));
    }
    // Unknown t[a][b] at column a * r + b; equation (p, q) at row p * r + q.
    IntegerMatrix system(r * r, r * r);
    for (std::size_t g = 0; g < perms.size(); ++g)
      for (std::size_t p = 0; p < r; ++p)
        for (std::size_t a = 0; a < r; ++a) {
          if (rho[g](p, a) == 0) continue;
          for (std::size_t b = 0; b < r; ++b)
            for (std::size_t q = 0; q < r; ++q)
              if (rho_inv[g](b, q) != 0) system(p * r + q, a * r + b) += rho[g](p, a) * rho_inv[g](b, q);
        }
    std::vector<Integer> rhs(r * r);
    for (std::size_t p = 0; p < r; ++p) rhs[p * r + p] = 1;
    if (!solve(system, rhs)) {
      rep.projective = false;
      rep.failing_degree = d;
      return rep;
    }
  }
  return rep;
}

}  // namespace cofree
