#include "cofree/operad.hpp"

#include <sstream>

namespace cofree {

namespace {

SparseVector basis_vector(std::size_t i) { return SparseVector{{i, Integer(1)}}; }

int parity_sign(long long e) { return (e & 1) ? -1 : 1; }

std::string describe(const TruncatedOperad& o, int arity, std::size_t flat) {
  std::ostringstream os;
  os << o.complex(arity).label_of(flat) << "[" << arity << "]";
  return os.str();
}

std::string describe_vector(const SparseVector& v) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [i, c] : v) {
    if (!first) os << ", ";
    first = false;
    os << i << ":" << c;
  }
  os << "}";
  return os.str();
}

class Recorder {
 public:
  Recorder(AxiomReport& r, std::size_t cap) : report_(r), cap_(cap) {}
  void expect(bool ok, const std::string& law, const std::string& witness) {
    ++report_.checks;
    if (!ok && report_.violations.size() < cap_) report_.violations.push_back({law, witness});
  }
  bool full() const { return report_.violations.size() >= cap_; }

 private:
  AxiomReport& report_;
  std::size_t cap_;
};

}  // namespace

TruncatedOperad::TruncatedOperad(int arity_bound, bool unital, std::map<int, SymmetricComplex> components,
                                 SparseVector unit, std::map<CompositionKey, CompositionTable> tables,
                                 std::string name)
    : n_(arity_bound),
      unital_(unital),
      components_(std::move(components)),
      unit_(std::move(unit)),
      tables_(std::move(tables)),
      name_(std::move(name)) {
  if (n_ < 1) throw Error("operad: arity bound must be at least 1");
  for (int a = min_arity(); a <= n_; ++a) {
    auto it = components_.find(a);
    if (it == components_.end()) throw Error("operad: missing component of arity " + std::to_string(a));
    if (it->second.arity() != a) throw Error("operad: component arity mismatch at " + std::to_string(a));
  }
  for (const auto& [a, c] : components_)
    if (a < min_arity() || a > n_) throw Error("operad: component outside the arity range");
  for (const auto& [i, c] : unit_) {
    if (i >= rank(1)) throw Error("operad: unit index out of range");
    if (degree_of(1, i) != 0) throw Error("operad: unit is not of degree 0");
  }
  std::size_t expected = 0;
  for (int m = 1; m <= n_; ++m)
    for (int n = min_arity(); m + n - 1 <= n_; ++n)
      for (int slot = 1; slot <= m; ++slot) {
        auto it = tables_.find({m, slot, n});
        if (it == tables_.end())
          throw Error("operad: missing composition table (" + std::to_string(m) + "," + std::to_string(slot) + "," +
                      std::to_string(n) + ")");
        if (it->second.size() != rank(m) * rank(n)) throw Error("operad: composition table has wrong size");
        const std::size_t r = rank(m + n - 1);
        for (const auto& v : it->second)
          for (const auto& [i, c] : v)
            if (i >= r) throw Error("operad: composition result index out of range");
        ++expected;
      }
  if (tables_.size() != expected) throw Error("operad: composition table outside the truncation");
}

const SymmetricComplex& TruncatedOperad::component(int arity) const {
  auto it = components_.find(arity);
  if (it == components_.end()) {
    if (arity > n_) throw TruncationOverflow("arity " + std::to_string(arity) + " exceeds the bound");
    throw Error("operad: no component of arity " + std::to_string(arity));
  }
  return it->second;
}

bool TruncatedOperad::composable(int m, int slot, int n) const {
  return m >= 1 && m <= n_ && slot >= 1 && slot <= m && n >= min_arity() && n <= n_ && m + n - 1 <= n_;
}

const SparseVector& TruncatedOperad::compose_basis(int m, std::size_t a, int slot, int n, std::size_t b) const {
  auto it = tables_.find({m, slot, n});
  if (it == tables_.end()) {
    if (m + n - 1 > n_) throw TruncationOverflow("composition lands in arity " + std::to_string(m + n - 1));
    throw Error("operad: invalid composition (" + std::to_string(m) + "," + std::to_string(slot) + "," +
                std::to_string(n) + ")");
  }
  return it->second.at(a * rank(n) + b);
}

SparseVector TruncatedOperad::compose(int m, const SparseVector& a, int slot, int n, const SparseVector& b) const {
  if (!composable(m, slot, n)) {
    if (m + n - 1 > n_) throw TruncationOverflow("composition lands in arity " + std::to_string(m + n - 1));
    throw Error("operad: invalid composition");
  }
  const auto& table = tables_.at({m, slot, n});
  const std::size_t rn = rank(n);
  SparseVector out;
  for (const auto& [ia, ca] : a)
    for (const auto& [ib, cb] : b) add_scaled(out, table[ia * rn + ib], ca * cb);
  return out;
}

TruncatedOperad TruncatedOperad::with_flipped_entry(const CompositionKey& key, std::size_t a, std::size_t b) const {
  TruncatedOperad copy = *this;
  auto& entry = copy.tables_.at(key).at(a * rank(key.n) + b);
  entry = scaled(entry, -1);
  return copy;
}

Permutation partial_composite(const Permutation& sigma, int slot, const Permutation& tau) {
  const int m = sigma.size();
  const int n = tau.size();
  const int i0 = slot - 1;
  if (i0 < 0 || i0 >= m) throw Error("partial_composite: slot out of range");
  const int s = sigma(i0);
  std::vector<int> images(m + n - 1);
  auto place = [&](int x) { return sigma(x) > s ? sigma(x) + n - 1 : sigma(x); };
  for (int p = 0; p < m + n - 1; ++p) {
    if (p < i0)
      images[p] = place(p);
    else if (p < i0 + n)
      images[p] = s + tau(p - i0);
    else
      images[p] = place(p - n + 1);
  }
  return Permutation(std::move(images));
}

AxiomReport check_operad_axioms(const TruncatedOperad& o, std::optional<int> bound, std::size_t max_violations) {
  AxiomReport report;
  Recorder rec(report, max_violations);
  const int N = std::min(bound.value_or(o.arity_bound()), o.arity_bound());
  const int lo = o.min_arity();

  for (int a = lo; a <= N; ++a) {
    rec.expect(o.complex(a).differential_squares_to_zero(), "differential", "d^2 != 0 in arity " + std::to_string(a));
    for (const auto& msg : o.component(a).check()) rec.expect(false, "action", "arity " + std::to_string(a) + ": " + msg);
  }

  const SparseVector& u = o.unit();
  rec.expect(o.boundary(1, u).empty(), "unit", "unit is not a cycle");
  for (int n = lo; n <= N; ++n)
    for (std::size_t a = 0; a < o.rank(n); ++a) {
      const SparseVector ea = basis_vector(a);
      rec.expect(o.compose(1, u, 1, n, ea) == ea, "left unit", "unit o_1 " + describe(o, n, a));
      if (n >= 1)
        for (int i = 1; i <= n; ++i)
          rec.expect(o.compose(n, ea, i, 1, u) == ea, "right unit", describe(o, n, a) + " o_" + std::to_string(i) + " unit");
    }

  // Leibniz rule and equivariance on pairs.
  for (int m = 1; m <= N; ++m)
    for (int n = lo; m + n - 1 <= N; ++n)
      for (int i = 1; i <= m; ++i)
        for (std::size_t a = 0; a < o.rank(m); ++a)
          for (std::size_t b = 0; b < o.rank(n); ++b) {
            if (rec.full()) return report;
            const SparseVector ea = basis_vector(a), eb = basis_vector(b);
            const SparseVector& ab = o.compose_basis(m, a, i, n, b);
            const std::string w = describe(o, m, a) + " o_" + std::to_string(i) + " " + describe(o, n, b);
            SparseVector rhs = o.compose(m, o.boundary(m, ea), i, n, eb);
            add_scaled(rhs, o.compose(m, ea, i, n, o.boundary(n, eb)), parity_sign(o.degree_of(m, a)));
            rec.expect(o.boundary(m + n - 1, ab) == rhs, "leibniz", w);
            for (int k = 0; k + 1 < m; ++k) {
              const Permutation s = Permutation::adjacent(m, k);
              SparseVector lhs = o.compose(m, o.act(m, s, ea), s(i - 1) + 1, n, eb);
              SparseVector r = o.act(m + n - 1, partial_composite(s, i, Permutation::identity(n)), ab);
              rec.expect(lhs == r, "equivariance", w + " with s_" + std::to_string(k + 1) + " on the left factor");
            }
            for (int k = 0; k + 1 < n; ++k) {
              const Permutation t = Permutation::adjacent(n, k);
              SparseVector lhs = o.compose(m, ea, i, n, o.act(n, t, eb));
              SparseVector r = o.act(m + n - 1, partial_composite(Permutation::identity(m), i, t), ab);
              rec.expect(lhs == r, "equivariance", w + " with s_" + std::to_string(k + 1) + " on the right factor");
            }
          }

  // Both associativity shapes on basis triples.
  for (int m = 1; m <= N; ++m)
    for (int n = lo; n <= N; ++n)
      for (int p = lo; m + n + p - 2 <= N; ++p) {
        // With arity-0 inputs an intermediate composite can exceed the bound; such triples
        // are outside the truncation.
        if (m + n - 1 > N || n + p - 1 > N || m + p - 1 > N) continue;
        for (std::size_t a = 0; a < o.rank(m); ++a)
          for (std::size_t b = 0; b < o.rank(n); ++b)
            for (std::size_t c = 0; c < o.rank(p); ++c) {
              if (rec.full()) return report;
              const SparseVector ea = basis_vector(a), eb = basis_vector(b), ec = basis_vector(c);
              const std::string w = "a=" + describe(o, m, a) + ", b=" + describe(o, n, b) + ", c=" + describe(o, p, c);
              for (int i = 1; i <= m; ++i)
                for (int j = 1; j <= n; ++j) {
                  SparseVector lhs = o.compose(m, ea, i, n + p - 1, o.compose_basis(n, b, j, p, c));
                  SparseVector rhs = o.compose(m + n - 1, o.compose_basis(m, a, i, n, b), i + j - 1, p, ec);
                  rec.expect(lhs == rhs, "sequential associativity",
                             w + ", i=" + std::to_string(i) + ", j=" + std::to_string(j));
                }
              const int bc = parity_sign(static_cast<long long>(o.degree_of(n, b)) * o.degree_of(p, c));
              for (int i = 1; i <= m; ++i)
                for (int j = i + 1; j <= m; ++j) {
                  SparseVector lhs = o.compose(m + n - 1, o.compose_basis(m, a, j, n, b), i, p, ec);
                  SparseVector rhs = scaled(o.compose(m + p - 1, o.compose_basis(m, a, i, p, c), j + p - 1, n, eb), bc);
                  rec.expect(lhs == rhs, "parallel associativity",
                             w + ", i=" + std::to_string(i) + ", j=" + std::to_string(j));
                }
            }
      }
  return report;
}

AxiomReport OperadMorphism::check(std::size_t max_violations) const {
  AxiomReport report;
  Recorder rec(report, max_violations);
  const TruncatedOperad& s = *source;
  const TruncatedOperad& t = *target;
  if (s.arity_bound() != t.arity_bound() || s.unital() != t.unital()) {
    rec.expect(false, "shape", "arity bounds or unitality differ");
    return report;
  }
  for (int a = s.min_arity(); a <= s.arity_bound(); ++a) {
    auto it = maps.find(a);
    if (it == maps.end() || it->second.rows() != t.rank(a) || it->second.cols() != s.rank(a)) {
      rec.expect(false, "shape", "map of arity " + std::to_string(a) + " missing or mis-sized");
      return report;
    }
    const SparseMatrix& f = it->second;
    for (std::size_t j = 0; j < f.cols(); ++j)
      for (const auto& [r, c] : f.column(j))
        rec.expect(t.degree_of(a, r) == s.degree_of(a, j), "degree", describe(s, a, j));
    rec.expect(f * s.complex(a).flat_differential() == t.complex(a).flat_differential() * f, "chain map",
               "arity " + std::to_string(a));
    for (int k = 0; k + 1 < a; ++k)
      rec.expect(f * s.component(a).generator(k) == t.component(a).generator(k) * f, "equivariance",
                 "arity " + std::to_string(a) + ", s_" + std::to_string(k + 1));
  }
  rec.expect(apply(1, s.unit()) == t.unit(), "unit", "image of the unit");
  for (const auto& [key, table] : s.tables())
    for (std::size_t a = 0; a < s.rank(key.m); ++a)
      for (std::size_t b = 0; b < s.rank(key.n); ++b) {
        if (rec.full()) return report;
        SparseVector lhs = apply(key.m + key.n - 1, table[a * s.rank(key.n) + b]);
        SparseVector rhs = t.compose(key.m, maps.at(key.m).column(a), key.slot, key.n, maps.at(key.n).column(b));
        rec.expect(lhs == rhs, "composition",
                   describe(s, key.m, a) + " o_" + std::to_string(key.slot) + " " + describe(s, key.n, b) +
                       ": " + describe_vector(lhs) + " vs " + describe_vector(rhs));
      }
  return report;
}

int generalized_arity(const TruncatedOperad& o, int root_arity, const std::vector<CompositionOperand>& operands) {
  if (static_cast<int>(operands.size()) != root_arity)
    throw Error("generalized_composition: need one operand per input of the root");
  int total = 0;
  for (const auto& op : operands) {
    if (!op) {
      if (!o.unital()) throw Error("generalized_composition: bullets need a unital operad");
      total += 1;
    } else {
      if (op->first < o.min_arity() || op->first > o.arity_bound())
        throw Error("generalized_composition: operand arity out of range");
      total += op->first;
    }
  }
  if (total > o.arity_bound()) throw TruncationOverflow("generalized composition lands in arity " + std::to_string(total));
  return total;
}

SparseVector generalized_composition(const TruncatedOperad& o, int root_arity, const SparseVector& root,
                                     const std::vector<CompositionOperand>& operands) {
  generalized_arity(o, root_arity, operands);
  SparseVector result = root;
  int arity = root_arity;
  int pos = 1;
  for (const auto& op : operands) {
    if (!op) {
      result = o.compose(arity, result, pos, 1, o.unit());
      pos += 1;
    } else {
      result = o.compose(arity, result, pos, op->first, op->second);
      arity += op->first - 1;
      pos += op->first;
    }
  }
  return result;
}

}  // namespace cofree
