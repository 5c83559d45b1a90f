#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bilin/field.hpp"

namespace bilin {

using Vector = std::vector<Scalar>;

Vector zero_vector(const FieldSpec& field, std::size_t n);
Vector unit_vector(const FieldSpec& field, std::size_t n, std::size_t i);
Vector add(const Vector& u, const Vector& v);
Vector sub(const Vector& u, const Vector& v);
Vector scale(const Scalar& c, const Vector& v);
bool is_zero(const Vector& v);
std::string format_vector(const Vector& v);

/// Dense row-major matrix over a single FieldSpec.
class Matrix {
 public:
  Matrix() = default;
  Matrix(const FieldSpec& field, std::size_t rows, std::size_t cols);

  static Matrix identity(const FieldSpec& field, std::size_t n);
  /// Rows must all have length `cols`.
  static Matrix from_rows(const FieldSpec& field, std::size_t cols, const std::vector<Vector>& rows);
  /// Columns must all have length `rows`.
  static Matrix from_columns(const FieldSpec& field, std::size_t rows, const std::vector<Vector>& cols);
  static Matrix from_ints(const FieldSpec& field, const std::vector<std::vector<long>>& rows);

  const FieldSpec& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  const Scalar& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  Scalar& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

  Vector row(std::size_t r) const;
  Vector column(std::size_t c) const;
  std::vector<Vector> row_list() const;
  std::vector<Vector> column_list() const;

  Matrix transpose() const;
  Vector apply(const Vector& v) const;  // this * v
  /// Row vector times matrix: v^T * this.
  Vector apply_left(const Vector& v) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a);
  friend bool operator==(const Matrix& a, const Matrix& b);

  /// Rows as lines of space-separated canonical scalars.
  std::string format() const;

 private:
  FieldSpec field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> entries_;
};

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const noexcept { return pivots.size(); }
};

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);
std::size_t rank_of_vectors(const FieldSpec& field, std::size_t n, const std::vector<Vector>& vectors);

/// Basis of { x : m x = 0 }, one vector per free column, in column order.
std::vector<Vector> kernel(const Matrix& m);

struct AffineSolutionSet {
  bool consistent = false;
  Vector particular;           // present iff consistent
  std::vector<Vector> basis;   // homogeneous solution space
};

/// Solves a x = b. The particular solution has every free unknown set to 0.
AffineSolutionSet solve(const Matrix& a, const Vector& b);

/// The value of coordinate i if it is constant on the whole solution set.
/// Throws Inconsistent if the set is empty.
std::optional<Scalar> determined_coordinate(const AffineSolutionSet& s, std::size_t i);

/// Coordinates of v in the (linearly independent) basis, or nullopt if v lies
/// outside their span.
std::optional<Vector> coordinates_in(const FieldSpec& field, std::size_t n,
                                      const std::vector<Vector>& basis, const Vector& v);

/// Indices of a maximal linearly independent subsequence, chosen greedily left to right.
std::vector<std::size_t> greedy_independent(const FieldSpec& field, std::size_t n,
                                            const std::vector<Vector>& vectors);

/// Standard basis vectors e_i (ascending i) extending `start` to a basis of K^n.
std::vector<std::size_t> complement_indices(const FieldSpec& field, std::size_t n,
                                            const std::vector<Vector>& start);

/// Subspace of K^n, stored as the nonzero rows of its RREF basis.
class Subspace {
 public:
  Subspace() = default;
  static Subspace zero(const FieldSpec& field, std::size_t ambient);
  static Subspace full(const FieldSpec& field, std::size_t ambient);
  static Subspace span(const FieldSpec& field, std::size_t ambient, const std::vector<Vector>& vectors);

  const FieldSpec& field() const noexcept { return field_; }
  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  /// RREF basis rows.
  const std::vector<Vector>& basis() const noexcept { return basis_; }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;

  Subspace sum(const Subspace& other) const;
  /// Kernel method: solve sum a_i u_i = sum b_j v_j.
  Subspace intersect(const Subspace& other) const;

  friend bool operator==(const Subspace& a, const Subspace& b);

 private:
  void require_compatible(const Subspace& other) const;

  FieldSpec field_;
  std::size_t ambient_ = 0;
  std::vector<Vector> basis_;
};

namespace detail {

/// In-place RREF of a row-major residue matrix over GF(p); returns pivot columns.
std::vector<std::size_t> rref_mod_p(std::vector<std::uint32_t>& a, std::size_t rows, std::size_t cols,
                                    std::uint32_t p);

/// Whether a x = b (augmented as the last column) is consistent over GF(p).
bool consistent_mod_p(std::vector<std::uint32_t>& augmented, std::size_t rows, std::size_t unknowns,
                      std::uint32_t p);

std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p);

}  // namespace detail

}  // namespace bilin
