#include "cofree/chain.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "cofree/permutation.hpp"

namespace cofree {

namespace {

const std::vector<std::string>& empty_labels() {
  static const std::vector<std::string> empty;
  return empty;
}

constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

}  // namespace

// ---------------------------------------------------------------------------
// GradedBasis

GradedBasis::GradedBasis(std::map<int, std::vector<std::string>> by_degree) {
  for (auto& [deg, labels] : by_degree) {
    if (labels.empty()) continue;
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size())
      throw Error("GradedBasis: duplicate label in degree " + std::to_string(deg));
    by_degree_.emplace(deg, std::move(labels));
  }
}

std::size_t GradedBasis::rank(int degree) const {
  auto it = by_degree_.find(degree);
  return it == by_degree_.end() ? 0 : it->second.size();
}

const std::vector<std::string>& GradedBasis::labels(int degree) const {
  auto it = by_degree_.find(degree);
  return it == by_degree_.end() ? empty_labels() : it->second;
}

std::vector<int> GradedBasis::degrees() const {
  std::vector<int> out;
  for (const auto& [d, l] : by_degree_) out.push_back(d);
  return out;
}

std::size_t GradedBasis::total_rank() const {
  std::size_t n = 0;
  for (const auto& [d, l] : by_degree_) n += l.size();
  return n;
}

std::optional<std::size_t> GradedBasis::index_of(int degree, const std::string& label) const {
  const auto& l = labels(degree);
  auto it = std::find(l.begin(), l.end(), label);
  if (it == l.end()) return std::nullopt;
  return static_cast<std::size_t>(it - l.begin());
}

// ---------------------------------------------------------------------------
// ChainComplex

ChainComplex::ChainComplex(GradedBasis basis, std::map<int, IntegerMatrix> differential)
    : basis_(std::move(basis)) {
  for (auto& [k, m] : differential) {
    if (m.rows() != basis_.rank(k - 1) || m.cols() != basis_.rank(k))
      throw Error("ChainComplex: differential in degree " + std::to_string(k) + " has wrong shape");
    if (m.rows() == 0 || m.cols() == 0 || m.is_zero()) continue;
    d_.emplace(k, std::move(m));
  }
  build_flat();
}

ChainComplex ChainComplex::from_flat(GradedBasis basis, const SparseMatrix& d) {
  ChainComplex shell(std::move(basis), {});
  if (d.rows() != shell.total_rank() || d.cols() != shell.total_rank())
    throw Error("ChainComplex::from_flat: wrong differential size");
  std::map<int, IntegerMatrix> blocks;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    int k = shell.degree_of(j);
    for (const auto& [i, v] : d.column(j)) {
      if (shell.degree_of(i) != k - 1) throw Error("ChainComplex::from_flat: differential must lower degree by one");
      auto it = blocks.find(k);
      if (it == blocks.end())
        it = blocks.emplace(k, IntegerMatrix(shell.rank(k - 1), shell.rank(k))).first;
      it->second(shell.local_index(i), shell.local_index(j)) = v;
    }
  }
  shell.d_ = std::move(blocks);
  shell.flat_d_ = d;
  return shell;
}

void ChainComplex::build_flat() {
  flat_degree_.clear();
  offsets_.clear();
  for (const auto& [deg, labels] : basis_.by_degree()) {
    offsets_[deg] = flat_degree_.size();
    flat_degree_.insert(flat_degree_.end(), labels.size(), deg);
  }
  flat_d_ = SparseMatrix(total_rank(), total_rank());
  for (const auto& [k, m] : d_) {
    std::size_t src = offsets_.at(k), tgt = offsets_.at(k - 1);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0) flat_d_.add_entry(tgt + i, src + j, m(i, j));
  }
}

IntegerMatrix ChainComplex::differential(int k) const {
  auto it = d_.find(k);
  if (it != d_.end()) return it->second;
  return IntegerMatrix(rank(k - 1), rank(k));
}

bool ChainComplex::differential_squares_to_zero() const { return (flat_d_ * flat_d_).is_zero(); }

std::size_t ChainComplex::offset(int degree) const {
  auto it = offsets_.lower_bound(degree);
  return it == offsets_.end() ? total_rank() : it->second;
}

const std::string& ChainComplex::label_of(std::size_t flat) const {
  return basis_.labels(flat_degree_[flat])[local_index(flat)];
}

std::optional<std::size_t> ChainComplex::flat_index_of(int degree, const std::string& label) const {
  auto local = basis_.index_of(degree, label);
  if (!local) return std::nullopt;
  return offset(degree) + *local;
}

int ChainComplex::min_degree() const {
  if (basis_.empty()) throw Error("min_degree of zero complex");
  return basis_.by_degree().begin()->first;
}

int ChainComplex::max_degree() const {
  if (basis_.empty()) throw Error("max_degree of zero complex");
  return basis_.by_degree().rbegin()->first;
}

bool ChainComplex::operator==(const ChainComplex& o) const {
  if (this == &o) return true;
  return basis_ == o.basis_ && flat_d_ == o.flat_d_;
}

ComplexPtr share(ChainComplex c) { return std::make_shared<const ChainComplex>(std::move(c)); }

// ---------------------------------------------------------------------------
// ChainMap

ChainMap::ChainMap(ComplexPtr source, ComplexPtr target, int degree, SparseMatrix flat)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree), flat_(std::move(flat)) {
  if (flat_.rows() != target_->total_rank() || flat_.cols() != source_->total_rank())
    throw Error("ChainMap: matrix size does not match complexes");
  for (std::size_t j = 0; j < flat_.cols(); ++j)
    for (const auto& [i, v] : flat_.column(j))
      if (target_->degree_of(i) != source_->degree_of(j) + degree_)
        throw Error("ChainMap: entry does not have degree " + std::to_string(degree_));
}

ChainMap ChainMap::from_components(ComplexPtr source, ComplexPtr target, int degree,
                                   const std::map<int, IntegerMatrix>& components) {
  SparseMatrix flat(target->total_rank(), source->total_rank());
  for (const auto& [k, m] : components) {
    if (m.rows() != target->rank(k + degree) || m.cols() != source->rank(k))
      throw Error("ChainMap: component in degree " + std::to_string(k) + " has wrong shape");
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0) flat.add_entry(target->flat_index(k + degree, i), source->flat_index(k, j), m(i, j));
  }
  return ChainMap(std::move(source), std::move(target), degree, std::move(flat));
}

ChainMap ChainMap::zero(ComplexPtr source, ComplexPtr target, int degree) {
  SparseMatrix flat(target->total_rank(), source->total_rank());
  return ChainMap(std::move(source), std::move(target), degree, std::move(flat));
}

ChainMap ChainMap::identity(ComplexPtr c) {
  SparseMatrix flat = SparseMatrix::identity(c->total_rank());
  return ChainMap(c, c, 0, std::move(flat));
}

IntegerMatrix ChainMap::component(int k) const {
  IntegerMatrix out(target_->rank(k + degree_), source_->rank(k));
  std::size_t src = source_->offset(k), tgt = target_->offset(k + degree_);
  for (std::size_t j = 0; j < out.cols(); ++j)
    for (const auto& [i, v] : flat_.column(src + j)) out(i - tgt, j) = v;
  return out;
}

ChainMap ChainMap::compose(const ChainMap& other) const {
  if (other.target_->total_rank() != source_->total_rank() || !(*other.target_ == *source_))
    throw Error("ChainMap::compose: target of the inner map is not the source of the outer map");
  return ChainMap(other.source_, target_, degree_ + other.degree_, flat_ * other.flat_);
}

ChainMap ChainMap::operator+(const ChainMap& o) const {
  if (degree_ != o.degree_) throw Error("ChainMap sum: degree mismatch");
  return ChainMap(source_, target_, degree_, flat_ + o.flat_);
}

ChainMap ChainMap::operator-(const ChainMap& o) const { return *this + o.scaled(-1); }

ChainMap ChainMap::scaled(const Integer& k) const {
  return ChainMap(source_, target_, degree_, flat_.scaled(k));
}

bool ChainMap::operator==(const ChainMap& o) const {
  return degree_ == o.degree_ && flat_ == o.flat_ && *source_ == *o.source_ && *target_ == *o.target_;
}

ChainMap ChainMap::hom_boundary(HomConvention convention) const {
  SparseMatrix post = target_->flat_differential() * flat_;
  SparseMatrix pre = flat_ * source_->flat_differential();
  int s = degree_ % 2 == 0 ? 1 : -1;
  SparseMatrix d = convention == HomConvention::Standard ? post - pre.scaled(s) : pre - post.scaled(s);
  return ChainMap(source_, target_, degree_ - 1, std::move(d));
}

bool ChainMap::is_chain_map() const {
  SparseMatrix post = target_->flat_differential() * flat_;
  SparseMatrix pre = flat_ * source_->flat_differential();
  return post == pre.scaled(degree_ % 2 == 0 ? 1 : -1);
}

bool Homotopy::certifies(const ChainMap& f0, const ChainMap& f1) const {
  if (phi.degree() != 1) return false;
  SparseMatrix lhs = phi.target()->flat_differential() * phi.flat() + phi.flat() * phi.source()->flat_differential();
  return lhs == (f1.flat() - f0.flat());
}

// ---------------------------------------------------------------------------
// Constructions

ChainComplex unit_interval() {
  GradedBasis basis({{0, {"p0", "p1"}}, {1, {"q"}}});
  return ChainComplex(basis, {{1, IntegerMatrix::from_rows({{-1}, {1}})}});
}

ChainComplex unit_complex() { return ChainComplex(GradedBasis({{0, {"1"}}}), {}); }

ChainComplex zero_complex() { return ChainComplex(); }

TensorProduct tensor_product(const ChainComplex& c, const ChainComplex& d) {
  TensorProduct out;
  out.left_rank = c.total_rank();
  out.right_rank = d.total_rank();
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> by_degree;
  for (std::size_t i = 0; i < out.left_rank; ++i)
    for (std::size_t j = 0; j < out.right_rank; ++j) by_degree[c.degree_of(i) + d.degree_of(j)].emplace_back(i, j);

  std::map<int, std::vector<std::string>> labels;
  out.pair_to_flat.assign(out.left_rank * out.right_rank, kAbsent);
  for (const auto& [deg, pairs] : by_degree)
    for (const auto& [i, j] : pairs) {
      out.pair_to_flat[i * out.right_rank + j] = out.flat_to_pair.size();
      out.flat_to_pair.emplace_back(i, j);
      labels[deg].push_back("(" + c.label_of(i) + "," + d.label_of(j) + ")");
    }

  const std::size_t n = out.flat_to_pair.size();
  SparseMatrix diff(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    auto [i, j] = out.flat_to_pair[col];
    for (const auto& [i2, v] : c.boundary(i)) diff.add_entry(out.flat(i2, j), col, v);
    int s = koszul::swap_sign(-1, c.degree_of(i));
    for (const auto& [j2, v] : d.boundary(j)) diff.add_entry(out.flat(i, j2), col, s * v);
  }
  out.complex = ChainComplex::from_flat(GradedBasis(std::move(labels)), diff);
  return out;
}

ChainComplex tensor(const ChainComplex& c, const ChainComplex& d) { return tensor_product(c, d).complex; }

ChainMap tensor(const ChainMap& f, const ChainMap& g, ComplexPtr source, ComplexPtr target) {
  TensorProduct src = tensor_product(*f.source(), *g.source());
  TensorProduct tgt = tensor_product(*f.target(), *g.target());
  if (!(src.complex == *source) || !(tgt.complex == *target))
    throw Error("tensor of maps: supplied complexes are not the tensor products");
  SparseMatrix flat(tgt.complex.total_rank(), src.complex.total_rank());
  for (std::size_t col = 0; col < src.flat_to_pair.size(); ++col) {
    auto [a, b] = src.flat_to_pair[col];
    int s = koszul::swap_sign(g.degree(), f.source()->degree_of(a));
    for (const auto& [fa, x] : f.flat().column(a))
      for (const auto& [gb, y] : g.flat().column(b)) flat.add_entry(tgt.flat(fa, gb), col, s * x * y);
  }
  return ChainMap(std::move(source), std::move(target), f.degree() + g.degree(), std::move(flat));
}

ChainMap tensor(const ChainMap& f, const ChainMap& g) {
  return tensor(f, g, share(tensor(*f.source(), *g.source())), share(tensor(*f.target(), *g.target())));
}

TupleCodec::TupleCodec(std::size_t base, int length)
    : TupleCodec(std::vector<std::size_t>(static_cast<std::size_t>(length), base)) {}

TupleCodec::TupleCodec(std::vector<std::size_t> bases) : bases_(std::move(bases)) {
  count_ = 1;
  for (std::size_t b : bases_) {
    if (b != 0 && count_ > std::numeric_limits<std::size_t>::max() / b) throw Error("TupleCodec: tensor too large");
    count_ *= b;
  }
}

std::size_t TupleCodec::encode(const std::vector<std::size_t>& tuple) const {
  std::size_t code = 0;
  for (std::size_t l = 0; l < tuple.size(); ++l) code = code * bases_[l] + tuple[l];
  return code;
}

std::vector<std::size_t> TupleCodec::decode(std::size_t code) const {
  std::vector<std::size_t> out(bases_.size());
  for (std::size_t l = bases_.size(); l-- > 0;) {
    out[l] = code % bases_[l];
    code /= bases_[l];
  }
  return out;
}

std::vector<int> OrderedTensor::factor_degrees(const std::vector<std::size_t>& t) const {
  std::vector<int> out(t.size());
  for (std::size_t l = 0; l < t.size(); ++l) out[l] = factors[l]->degree_of(t[l]);
  return out;
}

OrderedTensor ordered_tensor(const std::vector<ComplexPtr>& factors) {
  OrderedTensor out;
  out.factors = factors;
  std::vector<std::size_t> bases;
  for (const auto& f : factors) bases.push_back(f->total_rank());
  out.codec = TupleCodec(bases);
  const std::size_t count = out.codec.count();
  if (count > 4'000'000) throw Error("ordered_tensor: too many basis elements");
  const int n = static_cast<int>(factors.size());

  std::map<int, std::vector<std::size_t>> by_degree;
  for (std::size_t code = 0; code < count; ++code) {
    auto t = out.codec.decode(code);
    int deg = 0;
    for (int l = 0; l < n; ++l) deg += factors[l]->degree_of(t[l]);
    by_degree[deg].push_back(code);
  }
  std::map<int, std::vector<std::string>> labels;
  out.code_to_flat.assign(count, kAbsent);
  for (const auto& [deg, codes] : by_degree)
    for (std::size_t code : codes) {
      out.code_to_flat[code] = out.flat_to_code.size();
      out.flat_to_code.push_back(code);
      auto t = out.codec.decode(code);
      std::string label;
      if (n == 0) {
        label = "1";
      } else if (n == 1) {
        label = factors[0]->label_of(t[0]);
      } else {
        label = "(";
        for (int l = 0; l < n; ++l) label += (l ? "," : "") + factors[l]->label_of(t[l]);
        label += ")";
      }
      labels[deg].push_back(std::move(label));
    }

  SparseMatrix diff(count, count);
  for (std::size_t col = 0; col < count; ++col) {
    auto t = out.codec.decode(out.flat_to_code[col]);
    int before = 0;
    for (int l = 0; l < n; ++l) {
      int s = koszul::swap_sign(-1, before);
      for (const auto& [x, v] : factors[l]->boundary(t[l])) {
        auto t2 = t;
        t2[l] = x;
        diff.add_entry(out.code_to_flat[out.codec.encode(t2)], col, s * v);
      }
      before += factors[l]->degree_of(t[l]);
    }
  }
  out.complex = ChainComplex::from_flat(GradedBasis(std::move(labels)), diff);
  return out;
}

OrderedTensor tensor_power(const ComplexPtr& c, int n) {
  if (n < 0) throw Error("tensor_power: negative exponent");
  return ordered_tensor(std::vector<ComplexPtr>(static_cast<std::size_t>(n), c));
}

SparseVector HomComplex::element(const ChainMap& f) const {
  SparseVector out;
  const std::size_t rb = target->total_rank();
  for (std::size_t a = 0; a < f.flat().cols(); ++a)
    for (const auto& [b, v] : f.flat().column(a)) {
      std::size_t idx = pair_to_flat[a * rb + b];
      if (idx == kAbsent) throw Error("HomComplex::element: map not representable");
      out.emplace(idx, v);
    }
  return out;
}

ChainMap HomComplex::map(int degree, const SparseVector& element) const {
  SparseMatrix flat(target->total_rank(), source->total_rank());
  for (const auto& [idx, v] : element) {
    if (complex.degree_of(idx) != degree) throw Error("HomComplex::map: element not homogeneous");
    auto [a, b] = flat_to_pair[idx];
    flat.add_entry(b, a, v);
  }
  return ChainMap(source, target, degree, std::move(flat));
}

HomComplex hom(const ComplexPtr& a, const ComplexPtr& b, HomConvention convention) {
  HomComplex out;
  out.source = a;
  out.target = b;
  out.convention = convention;
  const std::size_t ra = a->total_rank(), rb = b->total_rank();
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> by_degree;
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t j = 0; j < rb; ++j) by_degree[b->degree_of(j) - a->degree_of(i)].emplace_back(i, j);
  std::map<int, std::vector<std::string>> labels;
  out.pair_to_flat.assign(ra * rb, kAbsent);
  for (const auto& [deg, pairs] : by_degree)
    for (const auto& [i, j] : pairs) {
      out.pair_to_flat[i * rb + j] = out.flat_to_pair.size();
      out.flat_to_pair.emplace_back(i, j);
      labels[deg].push_back("[" + a->label_of(i) + "->" + b->label_of(j) + "]");
    }

  // Columns of d_A transposed: which source elements have a given element in their boundary.
  SparseMatrix d_a_t = a->flat_differential().transpose();
  const std::size_t n = out.flat_to_pair.size();
  SparseMatrix diff(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    auto [i, j] = out.flat_to_pair[col];
    int k = b->degree_of(j) - a->degree_of(i);
    int s = k % 2 == 0 ? 1 : -1;
    // Standard: d_B e - (-1)^k e d_A. Precomposed is -(-1)^k times the standard one.
    int overall = convention == HomConvention::Standard ? 1 : -s;
    for (const auto& [j2, v] : b->boundary(j)) diff.add_entry(out.pair_to_flat[i * rb + j2], col, overall * v);
    for (const auto& [i2, v] : d_a_t.column(i))
      diff.add_entry(out.pair_to_flat[i2 * rb + j], col, -overall * s * v);
  }
  out.complex = ChainComplex::from_flat(GradedBasis(std::move(labels)), diff);
  return out;
}

ChainComplex hom_complex(const ChainComplex& a, const ChainComplex& b, HomConvention convention) {
  return hom(share(a), share(b), convention).complex;
}

ConeData cone_and_suspension(const ComplexPtr& a) {
  ChainComplex interval = unit_interval();
  TensorProduct cyl = tensor_product(*a, interval);
  const std::size_t p1 = 1;
  std::vector<std::size_t> keep;
  std::vector<std::size_t> new_index(cyl.flat_to_pair.size(), kAbsent);
  std::map<int, std::vector<std::string>> labels;
  for (std::size_t f = 0; f < cyl.flat_to_pair.size(); ++f) {
    if (cyl.flat_to_pair[f].second == p1) continue;
    new_index[f] = keep.size();
    keep.push_back(f);
    labels[cyl.complex.degree_of(f)].push_back(cyl.complex.label_of(f));
  }
  SparseMatrix diff(keep.size(), keep.size());
  for (std::size_t col = 0; col < keep.size(); ++col)
    for (const auto& [r, v] : cyl.complex.boundary(keep[col]))
      if (new_index[r] != kAbsent) diff.add_entry(new_index[r], col, v);

  ConeData out;
  out.cone = share(ChainComplex::from_flat(GradedBasis(std::move(labels)), diff));
  out.suspension = share(suspension(*a));

  SparseMatrix inc(out.cone->total_rank(), a->total_rank());
  for (std::size_t i = 0; i < a->total_rank(); ++i) inc.add_entry(new_index[cyl.flat(i, 0)], i, 1);
  out.inclusion = ChainMap(a, out.cone, 0, std::move(inc));

  SparseMatrix proj(out.suspension->total_rank(), out.cone->total_rank());
  for (std::size_t i = 0; i < a->total_rank(); ++i) {
    std::size_t target = out.suspension->flat_index(a->degree_of(i) + 1, a->local_index(i));
    proj.add_entry(target, new_index[cyl.flat(i, 2)], 1);
  }
  out.projection = ChainMap(out.cone, out.suspension, 0, std::move(proj));
  return out;
}

ChainComplex suspension(const ChainComplex& a) {
  std::map<int, std::vector<std::string>> labels;
  for (const auto& [deg, ls] : a.basis().by_degree())
    for (const auto& l : ls) labels[deg + 1].push_back("s(" + l + ")");
  std::map<int, IntegerMatrix> diff;
  for (int k : a.degrees()) diff.emplace(k + 1, a.differential(k));
  return ChainComplex(GradedBasis(std::move(labels)), std::move(diff));
}

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
  std::set<int> degs;
  for (int d : a.degrees()) degs.insert(d);
  for (int d : b.degrees()) degs.insert(d);
  std::map<int, std::vector<std::string>> labels;
  for (int d : degs) {
    for (const auto& l : a.basis().labels(d)) labels[d].push_back("0." + l);
    for (const auto& l : b.basis().labels(d)) labels[d].push_back("1." + l);
  }
  std::map<int, IntegerMatrix> diff;
  for (int d : degs) diff.emplace(d, block_diagonal(a.differential(d), b.differential(d)));
  for (int d : degs)
    if (!degs.count(d - 1)) diff.erase(d);
  return ChainComplex(GradedBasis(std::move(labels)), std::move(diff));
}

ChainComplex mapping_cone(const ChainMap& f) {
  if (f.degree() != 0) throw Error("mapping_cone: map must have degree 0");
  const ChainComplex& c = *f.source();
  const ChainComplex& d = *f.target();
  std::set<int> degs;
  for (int k : c.degrees()) degs.insert(k + 1);
  for (int k : d.degrees()) degs.insert(k);
  std::map<int, std::vector<std::string>> labels;
  // Flat positions of the source part (shifted) and target part.
  std::vector<std::size_t> src_pos(c.total_rank()), tgt_pos(d.total_rank());
  std::size_t pos = 0;
  for (int n : degs) {
    for (std::size_t l = 0; l < c.rank(n - 1); ++l) {
      labels[n].push_back("src:" + c.basis().labels(n - 1)[l]);
      src_pos[c.flat_index(n - 1, l)] = pos++;
    }
    for (std::size_t l = 0; l < d.rank(n); ++l) {
      labels[n].push_back("tgt:" + d.basis().labels(n)[l]);
      tgt_pos[d.flat_index(n, l)] = pos++;
    }
  }
  SparseMatrix diff(pos, pos);
  for (std::size_t i = 0; i < c.total_rank(); ++i) {
    for (const auto& [r, v] : c.boundary(i)) diff.add_entry(src_pos[r], src_pos[i], -v);
    for (const auto& [r, v] : f.flat().column(i)) diff.add_entry(tgt_pos[r], src_pos[i], v);
  }
  for (std::size_t i = 0; i < d.total_rank(); ++i)
    for (const auto& [r, v] : d.boundary(i)) diff.add_entry(tgt_pos[r], tgt_pos[i], v);
  return ChainComplex::from_flat(GradedBasis(std::move(labels)), diff);
}

HomotopyTriple homotopy_convert(const ChainMap& f, const ComplexPtr& c) {
  if (f.degree() != 0 || !f.is_chain_map()) throw Error("homotopy_convert: F must be a degree-0 chain map");
  TensorProduct cyl = tensor_product(*c, unit_interval());
  if (!(cyl.complex == *f.source())) throw Error("homotopy_convert: source of F is not C (x) I");
  const ComplexPtr& d = f.target();
  const std::size_t rc = c->total_rank();
  SparseMatrix f0(d->total_rank(), rc), f1(d->total_rank(), rc), phi(d->total_rank(), rc);
  for (std::size_t i = 0; i < rc; ++i) {
    f0.column(i) = f.flat().column(cyl.flat(i, 0));
    f1.column(i) = f.flat().column(cyl.flat(i, 1));
    phi.column(i) = scaled(f.flat().column(cyl.flat(i, 2)), koszul::swap_sign(1, c->degree_of(i)));
  }
  HomotopyTriple out{ChainMap(c, d, 0, std::move(f0)), ChainMap(c, d, 0, std::move(f1)),
                     Homotopy{ChainMap(c, d, 1, std::move(phi))}};
  return out;
}

ChainMap homotopy_synthesize(const HomotopyTriple& triple, const ComplexPtr& cylinder) {
  const ComplexPtr& c = triple.f0.source();
  const ComplexPtr& d = triple.f0.target();
  TensorProduct cyl = tensor_product(*c, unit_interval());
  if (!(cyl.complex == *cylinder)) throw Error("homotopy_synthesize: cylinder is not C (x) I");
  SparseMatrix flat(d->total_rank(), cylinder->total_rank());
  for (std::size_t i = 0; i < c->total_rank(); ++i) {
    flat.column(cyl.flat(i, 0)) = triple.f0.flat().column(i);
    flat.column(cyl.flat(i, 1)) = triple.f1.flat().column(i);
    flat.column(cyl.flat(i, 2)) = scaled(triple.phi.phi.flat().column(i), koszul::swap_sign(1, c->degree_of(i)));
  }
  return ChainMap(cylinder, d, 0, std::move(flat));
}

HomologyGroup homology_at(const ChainComplex& c, int degree) {
  return homology_group(c.differential(degree), c.differential(degree + 1));
}

HomologyTable homology(const ChainComplex& c) {
  HomologyTable out;
  for (int d : c.degrees()) out[d] = homology_at(c, d);
  return out;
}

HomologyTable homology(const ChainComplex& c, int lo, int hi) {
  HomologyTable out;
  for (int d = lo; d <= hi; ++d) out[d] = homology_at(c, d);
  return out;
}

EquivalenceReport is_homology_equivalence(const ChainMap& f, std::optional<std::pair<int, int>> window) {
  if (f.degree() != 0) throw Error("is_homology_equivalence: map must have degree 0");
  EquivalenceReport rep;
  if (!window) {
    std::vector<int> degs = f.source()->degrees();
    for (int d : f.target()->degrees()) degs.push_back(d);
    if (degs.empty()) {
      rep.equivalent = true;
      return rep;
    }
    window = std::make_pair(*std::min_element(degs.begin(), degs.end()), *std::max_element(degs.begin(), degs.end()));
  }
  if (window->first > window->second) throw Error("is_homology_equivalence: empty degree window");
  rep.window_lo = window->first;
  rep.window_hi = window->second;
  ChainComplex cone = mapping_cone(f);
  rep.cone_homology = homology(cone, window->first, window->second + 1);
  rep.equivalent = true;
  for (const auto& [deg, h] : rep.cone_homology)
    if (!h.is_zero()) {
      rep.equivalent = false;
      rep.witness_degree = deg;
      break;
    }
  return rep;
}

}  // namespace cofree
