#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cofree {

using Integer = boost::multiprecision::cpp_int;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse integer vector keyed by coordinate. Zero entries are never stored.
using SparseVector = std::map<std::size_t, Integer>;

void add_entry(SparseVector& v, std::size_t index, const Integer& value);
void add_scaled(SparseVector& dst, const SparseVector& src, const Integer& k);
SparseVector scaled(const SparseVector& v, const Integer& k);
SparseVector difference(const SparseVector& a, const SparseVector& b);

/// Dense row-major integer matrix.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols);

  static IntegerMatrix identity(std::size_t n);
  static IntegerMatrix from_rows(const std::vector<std::vector<long long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  bool is_zero() const;
  IntegerMatrix transpose() const;
  IntegerMatrix column_block(std::size_t first, std::size_t count) const;
  IntegerMatrix row_block(std::size_t first, std::size_t count) const;
  std::vector<Integer> column(std::size_t c) const;
  SparseVector sparse_column(std::size_t c) const;
  std::vector<SparseVector> sparse_rows() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  // row a += k * row b
  void add_row_multiple(std::size_t a, std::size_t b, const Integer& k);
  // col a += k * col b
  void add_col_multiple(std::size_t a, std::size_t b, const Integer& k);
  void negate_row(std::size_t r);

  IntegerMatrix operator*(const IntegerMatrix& o) const;
  IntegerMatrix operator+(const IntegerMatrix& o) const;
  IntegerMatrix operator-(const IntegerMatrix& o) const;
  IntegerMatrix operator-() const;
  IntegerMatrix scaled(const Integer& k) const;
  std::vector<Integer> apply(const std::vector<Integer>& x) const;
  bool operator==(const IntegerMatrix& o) const;
  bool operator!=(const IntegerMatrix& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> entries_;
};

/// Horizontal concatenation; row counts must agree.
IntegerMatrix hconcat(const IntegerMatrix& a, const IntegerMatrix& b);
/// Vertical concatenation; column counts must agree.
IntegerMatrix vconcat(const IntegerMatrix& a, const IntegerMatrix& b);
/// Block-diagonal sum.
IntegerMatrix block_diagonal(const IntegerMatrix& a, const IntegerMatrix& b);
/// Kronecker product, row index (i, k) -> i * b.rows() + k.
IntegerMatrix kronecker(const IntegerMatrix& a, const IntegerMatrix& b);

/// Column-sparse matrix. Column j is the image of basis vector j.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix from_dense(const IntegerMatrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }

  const SparseVector& column(std::size_t j) const { return columns_[j]; }
  SparseVector& column(std::size_t j) { return columns_[j]; }
  void add_entry(std::size_t r, std::size_t c, const Integer& v);
  Integer entry(std::size_t r, std::size_t c) const;

  SparseVector apply(const SparseVector& x) const;
  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix operator+(const SparseMatrix& o) const;
  SparseMatrix operator-(const SparseMatrix& o) const;
  SparseMatrix scaled(const Integer& k) const;
  bool operator==(const SparseMatrix& o) const;
  bool operator!=(const SparseMatrix& o) const { return !(*this == o); }
  bool is_zero() const;
  IntegerMatrix to_dense() const;
  SparseMatrix transpose() const;
  std::vector<SparseVector> sparse_rows() const;

 private:
  std::size_t rows_ = 0;
  std::vector<SparseVector> columns_;
};

struct SmithDecomposition {
  IntegerMatrix U;
  IntegerMatrix V;
  IntegerMatrix D;
  std::vector<Integer> invariant_factors;
};

struct HomologyGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  bool operator==(const HomologyGroup& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }
  bool operator!=(const HomologyGroup& o) const { return !(*this == o); }
  /// "Z^2 + Z/2 + Z/6", or "0".
  std::string to_string() const;
};

/// U * M * V = D. Pivot: smallest nonzero |entry|, ties by lowest row then column.
SmithDecomposition smith_normal_form(const IntegerMatrix& m);

/// Positive invariant factors in divisibility order (units included).
std::vector<Integer> invariant_factors(const IntegerMatrix& m);
std::vector<Integer> invariant_factors(const std::vector<SparseVector>& rows, std::size_t cols);

std::size_t rank(const IntegerMatrix& m);
std::size_t rank(const std::vector<SparseVector>& rows, std::size_t cols);
std::size_t rank(const SparseMatrix& m);

/// Columns form a saturated basis of the integer kernel.
IntegerMatrix kernel_basis(const IntegerMatrix& m);
std::vector<SparseVector> kernel_basis(const std::vector<SparseVector>& rows, std::size_t cols);

/// H = ker(d_out) / im(d_in). Throws Error if d_out * d_in != 0.
HomologyGroup homology_group(const IntegerMatrix& d_out, const IntegerMatrix& d_in);

/// Some integer x with A x = b, or nullopt.
std::optional<std::vector<Integer>> solve(const IntegerMatrix& a, const std::vector<Integer>& b);
/// Solve A X = B column by column; nullopt if any column has no integer solution.
std::optional<IntegerMatrix> solve(const IntegerMatrix& a, const IntegerMatrix& b);
/// Sparse form: rows of A, A has `cols` columns; each rhs is a full vector over the rows.
std::optional<std::vector<SparseVector>> solve(const std::vector<SparseVector>& rows, std::size_t cols,
                                               const std::vector<SparseVector>& rhs);

/// Basis of (span_Q of columns) intersected with Z^m.
IntegerMatrix saturate(const IntegerMatrix& columns);
/// Basis of the lattice spanned by the columns (column echelon form).
IntegerMatrix image_basis(const IntegerMatrix& columns);
bool in_lattice(const IntegerMatrix& basis, const std::vector<Integer>& v);
bool same_lattice(const IntegerMatrix& a, const IntegerMatrix& b);

/// L with L * K = I for a saturated full-column-rank K.
IntegerMatrix left_inverse(const IntegerMatrix& k);

/// For saturated K (m x r): P ((m-r) x m) and Q (m x (m-r)) with P K = 0, P Q = I, [K | Q] unimodular.
struct LatticeComplement {
  IntegerMatrix projection;
  IntegerMatrix section;
};
LatticeComplement lattice_complement(const IntegerMatrix& k);

}  // namespace cofree
