#include "cofree/exact_linear.hpp"

#include <algorithm>
#include <sstream>

namespace cofree {

void add_entry(SparseVector& v, std::size_t index, const Integer& value) {
  if (value == 0) return;
  auto [it, inserted] = v.try_emplace(index, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) v.erase(it);
  }
}

void add_scaled(SparseVector& dst, const SparseVector& src, const Integer& k) {
  if (k == 0) return;
  for (const auto& [i, x] : src) add_entry(dst, i, x * k);
}

SparseVector scaled(const SparseVector& v, const Integer& k) {
  SparseVector out;
  if (k == 0) return out;
  for (const auto& [i, x] : v) out.emplace(i, x * k);
  return out;
}

SparseVector difference(const SparseVector& a, const SparseVector& b) {
  SparseVector out = a;
  add_scaled(out, b, -1);
  return out;
}

// ---------------------------------------------------------------------------
// IntegerMatrix

IntegerMatrix::IntegerMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r == 0 ? 0 : rows.front().size();
  IntegerMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error("from_rows: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

bool IntegerMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Integer& x) { return x == 0; });
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntegerMatrix IntegerMatrix::column_block(std::size_t first, std::size_t count) const {
  IntegerMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  return out;
}

IntegerMatrix IntegerMatrix::row_block(std::size_t first, std::size_t count) const {
  IntegerMatrix out(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(first + i, j);
  return out;
}

std::vector<Integer> IntegerMatrix::column(std::size_t c) const {
  std::vector<Integer> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, c);
  return out;
}

SparseVector IntegerMatrix::sparse_column(std::size_t c) const {
  SparseVector out;
  for (std::size_t i = 0; i < rows_; ++i)
    if ((*this)(i, c) != 0) out.emplace(i, (*this)(i, c));
  return out;
}

std::vector<SparseVector> IntegerMatrix::sparse_rows() const {
  std::vector<SparseVector> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0) out[i].emplace(j, (*this)(i, j));
  return out;
}

void IntegerMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntegerMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntegerMatrix::add_row_multiple(std::size_t a, std::size_t b, const Integer& k) {
  if (k == 0) return;
  for (std::size_t j = 0; j < cols_; ++j)
    if ((*this)(b, j) != 0) (*this)(a, j) += k * (*this)(b, j);
}

void IntegerMatrix::add_col_multiple(std::size_t a, std::size_t b, const Integer& k) {
  if (k == 0) return;
  for (std::size_t i = 0; i < rows_; ++i)
    if ((*this)(i, b) != 0) (*this)(i, a) += k * (*this)(i, b);
}

void IntegerMatrix::negate_row(std::size_t r) {
  for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& o) const {
  if (cols_ != o.rows_) throw Error("matrix product: dimension mismatch");
  IntegerMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (o(k, j) != 0) out(i, j) += a * o(k, j);
    }
  return out;
}

IntegerMatrix IntegerMatrix::operator+(const IntegerMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix sum: dimension mismatch");
  IntegerMatrix out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += o.entries_[i];
  return out;
}

IntegerMatrix IntegerMatrix::operator-(const IntegerMatrix& o) const { return *this + (-o); }

IntegerMatrix IntegerMatrix::operator-() const { return scaled(-1); }

IntegerMatrix IntegerMatrix::scaled(const Integer& k) const {
  IntegerMatrix out = *this;
  for (auto& x : out.entries_) x *= k;
  return out;
}

std::vector<Integer> IntegerMatrix::apply(const std::vector<Integer>& x) const {
  if (x.size() != cols_) throw Error("matrix apply: dimension mismatch");
  std::vector<Integer> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0 && x[j] != 0) out[i] += (*this)(i, j) * x[j];
  return out;
}

bool IntegerMatrix::operator==(const IntegerMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

std::string IntegerMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

IntegerMatrix hconcat(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.rows() != b.rows()) throw Error("hconcat: row mismatch");
  IntegerMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

IntegerMatrix vconcat(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.cols() != b.cols()) throw Error("vconcat: column mismatch");
  IntegerMatrix out(a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) out(a.rows() + i, j) = b(i, j);
  }
  return out;
}

IntegerMatrix block_diagonal(const IntegerMatrix& a, const IntegerMatrix& b) {
  IntegerMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
  return out;
}

IntegerMatrix kronecker(const IntegerMatrix& a, const IntegerMatrix& b) {
  IntegerMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          if (b(k, l) != 0) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.columns_[i].emplace(i, 1);
  return m;
}

SparseMatrix SparseMatrix::from_dense(const IntegerMatrix& m) {
  SparseMatrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) out.columns_[j] = m.sparse_column(j);
  return out;
}

void SparseMatrix::add_entry(std::size_t r, std::size_t c, const Integer& v) {
  cofree::add_entry(columns_[c], r, v);
}

Integer SparseMatrix::entry(std::size_t r, std::size_t c) const {
  auto it = columns_[c].find(r);
  return it == columns_[c].end() ? Integer(0) : it->second;
}

SparseVector SparseMatrix::apply(const SparseVector& x) const {
  SparseVector out;
  for (const auto& [j, v] : x) {
    if (j >= columns_.size()) throw Error("sparse apply: index out of range");
    add_scaled(out, columns_[j], v);
  }
  return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (cols() != o.rows()) throw Error("sparse product: dimension mismatch");
  SparseMatrix out(rows_, o.cols());
  for (std::size_t j = 0; j < o.cols(); ++j) out.columns_[j] = apply(o.columns_[j]);
  return out;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols() != o.cols()) throw Error("sparse sum: dimension mismatch");
  SparseMatrix out = *this;
  for (std::size_t j = 0; j < cols(); ++j) add_scaled(out.columns_[j], o.columns_[j], 1);
  return out;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const { return *this + o.scaled(-1); }

SparseMatrix SparseMatrix::scaled(const Integer& k) const {
  SparseMatrix out(rows_, cols());
  for (std::size_t j = 0; j < cols(); ++j) out.columns_[j] = cofree::scaled(columns_[j], k);
  return out;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  return rows_ == o.rows_ && columns_ == o.columns_;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(columns_.begin(), columns_.end(), [](const SparseVector& c) { return c.empty(); });
}

IntegerMatrix SparseMatrix::to_dense() const {
  IntegerMatrix out(rows_, cols());
  for (std::size_t j = 0; j < cols(); ++j)
    for (const auto& [i, v] : columns_[j]) out(i, j) = v;
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix out(cols(), rows_);
  for (std::size_t j = 0; j < cols(); ++j)
    for (const auto& [i, v] : columns_[j]) out.columns_[i].emplace(j, v);
  return out;
}

std::vector<SparseVector> SparseMatrix::sparse_rows() const {
  std::vector<SparseVector> rows(rows_);
  for (std::size_t j = 0; j < cols(); ++j)
    for (const auto& [i, v] : columns_[j]) rows[i].emplace(j, v);
  return rows;
}

// ---------------------------------------------------------------------------
// Smith normal form

std::string HomologyGroup::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  for (const auto& t : torsion) {
    os << (first ? "" : " + ") << "Z/" << t;
    first = false;
  }
  return os.str();
}

namespace {

Integer abs_value(const Integer& x) { return x < 0 ? Integer(-x) : x; }

// Shared SNF loop; U and V are only updated when track is true.
void smith_reduce(IntegerMatrix& a, IntegerMatrix* u, IntegerMatrix* v) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    bool finished = false;
    while (true) {
      std::size_t pi = m, pj = n;
      Integer best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (a(i, j) == 0) continue;
          Integer x = abs_value(a(i, j));
          if (pi == m || x < best) {
            best = x;
            pi = i;
            pj = j;
          }
        }
      if (pi == m) {
        finished = true;
        break;
      }
      a.swap_rows(t, pi);
      if (u) u->swap_rows(t, pi);
      a.swap_cols(t, pj);
      if (v) v->swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = a(i, t) / a(t, t);
        a.add_row_multiple(i, t, -q);
        if (u) u->add_row_multiple(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = a(t, j) / a(t, t);
        a.add_col_multiple(j, t, -q);
        if (v) v->add_col_multiple(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      std::size_t bad_row = m;
      for (std::size_t i = t + 1; i < m && bad_row == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad_row = i;
            break;
          }
      if (bad_row == m) break;
      a.add_row_multiple(t, bad_row, 1);
      if (u) u->add_row_multiple(t, bad_row, 1);
    }
    if (finished) break;
    if (a(t, t) < 0) {
      a.negate_row(t);
      if (u) u->negate_row(t);
    }
  }
}

std::vector<Integer> diagonal_factors(const IntegerMatrix& d) {
  std::vector<Integer> out;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i)
    if (d(i, i) != 0) out.push_back(d(i, i));
  return out;
}

bool is_unit(const Integer& x) { return x == 1 || x == -1; }

// Gauss-Jordan elimination restricted to unit pivots. Pivot rows end up with
// exactly one pivot-column entry (normalized to 1); the remaining rows have
// no entries in pivot columns. Columns >= cols are carried but never pivoted.
struct UnitReduction {
  std::size_t cols = 0;
  std::vector<std::size_t> pivot_cols;
  std::vector<SparseVector> pivot_rows;
  std::vector<SparseVector> rest;
  std::vector<bool> is_pivot;
};

UnitReduction reduce_unit_pivots(std::vector<SparseVector> rows, std::size_t cols) {
  UnitReduction red;
  red.cols = cols;
  red.is_pivot.assign(cols, false);
  std::vector<char> done(rows.size(), 0);
  std::vector<std::size_t> pivot_row_index;
  while (true) {
    std::size_t best_row = rows.size(), best_col = 0, best_len = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (done[r]) continue;
      for (const auto& [c, v] : rows[r]) {
        if (c >= cols) break;
        if (!red.is_pivot[c] && is_unit(v)) {
          if (best_row == rows.size() || rows[r].size() < best_len) {
            best_row = r;
            best_col = c;
            best_len = rows[r].size();
          }
          break;
        }
      }
    }
    if (best_row == rows.size()) break;
    SparseVector& prow = rows[best_row];
    if (prow.at(best_col) == -1)
      for (auto& [c, v] : prow) v = -v;
    for (std::size_t s = 0; s < rows.size(); ++s) {
      if (s == best_row) continue;
      auto it = rows[s].find(best_col);
      if (it == rows[s].end()) continue;
      Integer k = -it->second;
      add_scaled(rows[s], prow, k);
    }
    done[best_row] = 1;
    red.is_pivot[best_col] = true;
    red.pivot_cols.push_back(best_col);
    pivot_row_index.push_back(best_row);
  }
  for (std::size_t r : pivot_row_index) red.pivot_rows.push_back(rows[r]);
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (!done[r] && !rows[r].empty()) red.rest.push_back(std::move(rows[r]));
  return red;
}

std::vector<std::size_t> free_columns(const UnitReduction& red) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < red.cols; ++c)
    if (!red.is_pivot[c]) out.push_back(c);
  return out;
}

// Dense matrix of the rest rows restricted to the free columns.
IntegerMatrix rest_matrix(const UnitReduction& red, const std::vector<std::size_t>& free) {
  std::vector<std::size_t> position(red.cols, 0);
  for (std::size_t k = 0; k < free.size(); ++k) position[free[k]] = k;
  IntegerMatrix out(red.rest.size(), free.size());
  for (std::size_t i = 0; i < red.rest.size(); ++i)
    for (const auto& [c, v] : red.rest[i]) {
      if (c >= red.cols) break;
      out(i, position[c]) = v;
    }
  return out;
}

// Solve A y = b through SNF of A; nullopt when no integer solution exists.
std::optional<std::vector<Integer>> dense_solve(const SmithDecomposition& snf, std::size_t rk,
                                                const std::vector<Integer>& b) {
  std::vector<Integer> c = snf.U.apply(b);
  std::vector<Integer> y(snf.V.rows());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < rk) {
      if (c[i] % snf.D(i, i) != 0) return std::nullopt;
      y[i] = c[i] / snf.D(i, i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return snf.V.apply(y);
}

}  // namespace

SmithDecomposition smith_normal_form(const IntegerMatrix& m) {
  SmithDecomposition out;
  out.D = m;
  out.U = IntegerMatrix::identity(m.rows());
  out.V = IntegerMatrix::identity(m.cols());
  smith_reduce(out.D, &out.U, &out.V);
  out.invariant_factors = diagonal_factors(out.D);
  return out;
}

std::vector<Integer> invariant_factors(const IntegerMatrix& m) {
  return invariant_factors(m.sparse_rows(), m.cols());
}

std::vector<Integer> invariant_factors(const std::vector<SparseVector>& rows, std::size_t cols) {
  UnitReduction red = reduce_unit_pivots(rows, cols);
  std::vector<Integer> out(red.pivot_cols.size(), Integer(1));
  if (!red.rest.empty()) {
    IntegerMatrix r = rest_matrix(red, free_columns(red));
    smith_reduce(r, nullptr, nullptr);
    for (auto& f : diagonal_factors(r)) out.push_back(f);
  }
  return out;
}

std::size_t rank(const IntegerMatrix& m) { return invariant_factors(m).size(); }

std::size_t rank(const std::vector<SparseVector>& rows, std::size_t cols) {
  return invariant_factors(rows, cols).size();
}

std::size_t rank(const SparseMatrix& m) { return rank(m.sparse_rows(), m.cols()); }

std::vector<SparseVector> kernel_basis(const std::vector<SparseVector>& rows, std::size_t cols) {
  UnitReduction red = reduce_unit_pivots(rows, cols);
  std::vector<std::size_t> free = free_columns(red);
  // Kernel of the rest block over the free columns.
  IntegerMatrix rest_kernel;
  if (red.rest.empty()) {
    rest_kernel = IntegerMatrix::identity(free.size());
  } else {
    SmithDecomposition snf = smith_normal_form(rest_matrix(red, free));
    std::size_t rk = snf.invariant_factors.size();
    rest_kernel = snf.V.column_block(rk, free.size() - rk);
  }
  std::vector<SparseVector> out;
  for (std::size_t k = 0; k < rest_kernel.cols(); ++k) {
    SparseVector x;
    for (std::size_t f = 0; f < free.size(); ++f)
      if (rest_kernel(f, k) != 0) x.emplace(free[f], rest_kernel(f, k));
    SparseVector full = x;
    for (std::size_t p = 0; p < red.pivot_cols.size(); ++p) {
      Integer val = 0;
      for (const auto& [c, v] : red.pivot_rows[p]) {
        if (c == red.pivot_cols[p]) continue;
        auto it = x.find(c);
        if (it != x.end()) val -= v * it->second;
      }
      add_entry(full, red.pivot_cols[p], val);
    }
    out.push_back(std::move(full));
  }
  return out;
}

IntegerMatrix kernel_basis(const IntegerMatrix& m) {
  std::vector<SparseVector> basis = kernel_basis(m.sparse_rows(), m.cols());
  IntegerMatrix out(m.cols(), basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (const auto& [i, v] : basis[k]) out(i, k) = v;
  return out;
}

HomologyGroup homology_group(const IntegerMatrix& d_out, const IntegerMatrix& d_in) {
  if (d_out.cols() != d_in.rows())
    throw Error("homology_group: d_out domain does not match d_in codomain");
  if (!(d_out * d_in).is_zero()) throw Error("homology_group: d_out * d_in != 0");
  HomologyGroup h;
  std::size_t nullity = d_out.cols() - rank(d_out);
  std::vector<Integer> factors = invariant_factors(d_in);
  h.free_rank = nullity - factors.size();
  for (const auto& f : factors)
    if (f > 1) h.torsion.push_back(f);
  return h;
}

std::optional<std::vector<SparseVector>> solve(const std::vector<SparseVector>& rows, std::size_t cols,
                                               const std::vector<SparseVector>& rhs) {
  std::vector<SparseVector> augmented = rows;
  for (std::size_t t = 0; t < rhs.size(); ++t)
    for (const auto& [i, v] : rhs[t]) {
      if (i >= augmented.size()) throw Error("solve: right-hand side longer than system");
      augmented[i].emplace(cols + t, v);
    }
  UnitReduction red = reduce_unit_pivots(std::move(augmented), cols);
  std::vector<std::size_t> free = free_columns(red);
  IntegerMatrix r = rest_matrix(red, free);
  SmithDecomposition snf = smith_normal_form(r);
  std::size_t rk = snf.invariant_factors.size();

  std::vector<SparseVector> out;
  for (std::size_t t = 0; t < rhs.size(); ++t) {
    std::vector<Integer> b(red.rest.size());
    for (std::size_t i = 0; i < red.rest.size(); ++i) {
      auto it = red.rest[i].find(cols + t);
      if (it != red.rest[i].end()) b[i] = it->second;
    }
    auto y = dense_solve(snf, rk, b);
    if (!y) return std::nullopt;
    SparseVector x;
    for (std::size_t f = 0; f < free.size(); ++f)
      if ((*y)[f] != 0) x.emplace(free[f], (*y)[f]);
    SparseVector full = x;
    for (std::size_t p = 0; p < red.pivot_cols.size(); ++p) {
      Integer val = 0;
      for (const auto& [c, v] : red.pivot_rows[p]) {
        if (c == cols + t) {
          val += v;
          continue;
        }
        if (c == red.pivot_cols[p] || c >= cols) continue;
        auto it = x.find(c);
        if (it != x.end()) val -= v * it->second;
      }
      add_entry(full, red.pivot_cols[p], val);
    }
    out.push_back(std::move(full));
  }
  return out;
}

std::optional<IntegerMatrix> solve(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.rows() != b.rows()) throw Error("solve: row mismatch");
  std::vector<SparseVector> rhs;
  for (std::size_t t = 0; t < b.cols(); ++t) rhs.push_back(b.sparse_column(t));
  auto sol = solve(a.sparse_rows(), a.cols(), rhs);
  if (!sol) return std::nullopt;
  IntegerMatrix x(a.cols(), b.cols());
  for (std::size_t t = 0; t < b.cols(); ++t)
    for (const auto& [i, v] : (*sol)[t]) x(i, t) = v;
  return x;
}

std::optional<std::vector<Integer>> solve(const IntegerMatrix& a, const std::vector<Integer>& b) {
  IntegerMatrix bm(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) bm(i, 0) = b[i];
  auto x = solve(a, bm);
  if (!x) return std::nullopt;
  return x->column(0);
}

IntegerMatrix saturate(const IntegerMatrix& columns) {
  IntegerMatrix left = kernel_basis(columns.transpose());
  return kernel_basis(left.transpose());
}

IntegerMatrix image_basis(const IntegerMatrix& columns) {
  IntegerMatrix a = columns;
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  std::size_t t = 0;
  for (std::size_t i = 0; i < m && t < k; ++i) {
    while (true) {
      std::size_t pj = k;
      Integer best;
      for (std::size_t j = t; j < k; ++j) {
        if (a(i, j) == 0) continue;
        Integer x = abs_value(a(i, j));
        if (pj == k || x < best) {
          best = x;
          pj = j;
        }
      }
      if (pj == k) break;
      a.swap_cols(t, pj);
      bool clean = true;
      for (std::size_t j = t + 1; j < k; ++j) {
        if (a(i, j) == 0) continue;
        a.add_col_multiple(j, t, -(a(i, j) / a(i, t)));
        if (a(i, j) != 0) clean = false;
      }
      if (clean) {
        if (a(i, t) < 0)
          for (std::size_t r = 0; r < m; ++r) a(r, t) = -a(r, t);
        ++t;
        break;
      }
    }
  }
  return a.column_block(0, t);
}

bool in_lattice(const IntegerMatrix& basis, const std::vector<Integer>& v) {
  return solve(basis, v).has_value();
}

bool same_lattice(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.rows() != b.rows()) return false;
  if (a.cols() > 0 && b.cols() == 0) return a.is_zero();
  if (b.cols() > 0 && a.cols() == 0) return b.is_zero();
  return solve(b, a).has_value() && solve(a, b).has_value();
}

IntegerMatrix left_inverse(const IntegerMatrix& k) {
  auto z = solve(k.transpose(), IntegerMatrix::identity(k.cols()));
  if (!z) throw Error("left_inverse: basis is not saturated");
  return z->transpose();
}

LatticeComplement lattice_complement(const IntegerMatrix& k) {
  LatticeComplement out;
  out.projection = kernel_basis(k.transpose()).transpose();
  if (out.projection.rows() + k.cols() != k.rows())
    throw Error("lattice_complement: columns are not independent");
  auto q = solve(out.projection, IntegerMatrix::identity(out.projection.rows()));
  if (!q) throw Error("lattice_complement: basis is not saturated");
  out.section = *q;
  return out;
}

}  // namespace cofree
