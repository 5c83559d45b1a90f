#include "bilin/linalg.hpp"

#include <algorithm>

namespace bilin {

// ------------------------------------------------------------------ vectors

Vector zero_vector(const FieldSpec& field, std::size_t n) { return Vector(n, Scalar::zero(field)); }

Vector unit_vector(const FieldSpec& field, std::size_t n, std::size_t i) {
  Vector v = zero_vector(field, n);
  v.at(i) = Scalar::one(field);
  return v;
}

Vector add(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "vector lengths differ");
  Vector out;
  out.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out.push_back(u[i] + v[i]);
  return out;
}

Vector sub(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "vector lengths differ");
  Vector out;
  out.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out.push_back(u[i] - v[i]);
  return out;
}

Vector scale(const Scalar& c, const Vector& v) {
  Vector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(c * x);
  return out;
}

bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

std::string format_vector(const Vector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].format();
  }
  return out;
}

// ------------------------------------------------------------------- matrix

Matrix::Matrix(const FieldSpec& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, Scalar::zero(field)) {}

Matrix Matrix::identity(const FieldSpec& field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(field);
  return m;
}

Matrix Matrix::from_rows(const FieldSpec& field, std::size_t cols, const std::vector<Vector>& rows) {
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::from_columns(const FieldSpec& field, std::size_t rows, const std::vector<Vector>& cols) {
  Matrix m(field, rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw Error(ErrorKind::DimensionMismatch, "ragged matrix columns");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

Matrix Matrix::from_ints(const FieldSpec& field, const std::vector<std::vector<long>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = Scalar::from_int(field, rows[r][c]);
  }
  return m;
}

Vector Matrix::row(std::size_t r) const {
  return Vector(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::column(std::size_t c) const {
  Vector v;
  v.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
  return v;
}

std::vector<Vector> Matrix::row_list() const {
  std::vector<Vector> out;
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

std::vector<Vector> Matrix::column_list() const {
  std::vector<Vector> out;
  for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Vector Matrix::apply(const Vector& v) const {
  if (v.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "matrix-vector size mismatch");
  Vector out = zero_vector(field_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (!v[c].is_zero()) out[r] += (*this)(r, c) * v[c];
  return out;
}

Vector Matrix::apply_left(const Vector& v) const {
  if (v.size() != rows_) throw Error(ErrorKind::DimensionMismatch, "vector-matrix size mismatch");
  Vector out = zero_vector(field_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (v[r].is_zero()) continue;
    for (std::size_t c = 0; c < cols_; ++c) out[c] += v[r] * (*this)(r, c);
  }
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product size mismatch");
  if (!(a.field_ == b.field_)) throw Error(ErrorKind::FieldMismatch, "matrix product across fields");
  Matrix out(a.field_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += x * b(k, j);
    }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::DimensionMismatch, "matrix sum size mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
  return out;
}

Matrix operator-(const Matrix& a) {
  Matrix out = a;
  for (auto& e : out.entries_) e = -e;
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
}

std::string Matrix::format() const {
  std::string out;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) out += " ";
      out += (*this)(r, c).format();
    }
    out += "\n";
  }
  return out;
}

// --------------------------------------------------------- GF(p) fast path

namespace detail {

std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a % p;
  std::uint32_t e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

std::vector<std::size_t> rref_mod_p(std::vector<std::uint32_t>& a, std::size_t rows, std::size_t cols,
                                    std::uint32_t p) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && a[sel * cols + c] == 0) ++sel;
    if (sel == rows) continue;
    if (sel != r)
      for (std::size_t k = 0; k < cols; ++k) std::swap(a[sel * cols + k], a[r * cols + k]);
    const std::uint64_t inv = inv_mod_p(a[r * cols + c], p);
    for (std::size_t k = c; k < cols; ++k) a[r * cols + k] = static_cast<std::uint32_t>(a[r * cols + k] * inv % p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const std::uint64_t f = a[i * cols + c];
      if (f == 0) continue;
      for (std::size_t k = c; k < cols; ++k) {
        const std::uint64_t sub = f * a[r * cols + k] % p;
        a[i * cols + k] = static_cast<std::uint32_t>((a[i * cols + k] + p - sub) % p);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

bool consistent_mod_p(std::vector<std::uint32_t>& aug, std::size_t rows, std::size_t unknowns,
                      std::uint32_t p) {
  const std::size_t cols = unknowns + 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < unknowns && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && aug[sel * cols + c] == 0) ++sel;
    if (sel == rows) continue;
    if (sel != r)
      for (std::size_t k = c; k < cols; ++k) std::swap(aug[sel * cols + k], aug[r * cols + k]);
    const std::uint64_t inv = inv_mod_p(aug[r * cols + c], p);
    for (std::size_t k = c; k < cols; ++k)
      aug[r * cols + k] = static_cast<std::uint32_t>(aug[r * cols + k] * inv % p);
    // forward elimination suffices for consistency
    for (std::size_t i = r + 1; i < rows; ++i) {
      const std::uint64_t f = aug[i * cols + c];
      if (f == 0) continue;
      for (std::size_t k = c; k < cols; ++k) {
        const std::uint64_t sub = f * aug[r * cols + k] % p;
        aug[i * cols + k] = static_cast<std::uint32_t>((aug[i * cols + k] + p - sub) % p);
      }
    }
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (aug[i * cols + unknowns] != 0) return false;
  return true;
}

}  // namespace detail

// --------------------------------------------------------------------- rref

RrefResult rref(const Matrix& m) {
  const FieldSpec& field = m.field();
  const std::size_t rows = m.rows(), cols = m.cols();
  if (field.is_finite()) {
    const auto p = static_cast<std::uint32_t>(field.modulus());
    std::vector<std::uint32_t> a(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) a[r * cols + c] = static_cast<std::uint32_t>(m(r, c).residue());
    auto pivots = detail::rref_mod_p(a, rows, cols, p);
    Matrix out(field, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (a[r * cols + c]) out(r, c) = Scalar::from_residue(field, a[r * cols + c]);
    return {std::move(out), std::move(pivots)};
  }

  Matrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && a(sel, c).is_zero()) ++sel;
    if (sel == rows) continue;
    if (sel != r)
      for (std::size_t k = 0; k < cols; ++k) std::swap(a(sel, k), a(r, k));
    const Scalar inv = a(r, c).inverse();
    for (std::size_t k = c; k < cols; ++k) a(r, k) = a(r, k) * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      const Scalar f = a(i, c);
      for (std::size_t k = c; k < cols; ++k)
        if (!a(r, k).is_zero()) a(i, k) -= f * a(r, k);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).rank(); }

std::size_t rank_of_vectors(const FieldSpec& field, std::size_t n, const std::vector<Vector>& vectors) {
  return rank(Matrix::from_rows(field, n, vectors));
}

std::vector<Vector> kernel(const Matrix& m) {
  const auto [reduced, pivots] = rref(m);
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vector v = unit_vector(m.field(), cols, f);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

AffineSolutionSet solve(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "right-hand side length mismatch");
  const FieldSpec& field = a.field();
  const std::size_t n = a.cols();
  Matrix aug(field, a.rows(), n + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n) = b[r];
  }
  const auto [reduced, pivots] = rref(aug);
  AffineSolutionSet out;
  if (!pivots.empty() && pivots.back() == n) {
    out.consistent = false;
    return out;
  }
  out.consistent = true;
  out.particular = zero_vector(field, n);
  for (std::size_t i = 0; i < pivots.size(); ++i) out.particular[pivots[i]] = reduced(i, n);
  out.basis = kernel(a);
  return out;
}

std::optional<Scalar> determined_coordinate(const AffineSolutionSet& s, std::size_t i) {
  if (!s.consistent) throw Error(ErrorKind::Inconsistent, "solution set is empty");
  for (const auto& v : s.basis)
    if (!v.at(i).is_zero()) return std::nullopt;
  return s.particular.at(i);
}

std::optional<Vector> coordinates_in(const FieldSpec& field, std::size_t n, const std::vector<Vector>& basis,
                                     const Vector& v) {
  const Matrix a = Matrix::from_columns(field, n, basis);
  auto sol = solve(a, v);
  if (!sol.consistent) return std::nullopt;
  return sol.particular;
}

std::vector<std::size_t> greedy_independent(const FieldSpec& field, std::size_t n,
                                            const std::vector<Vector>& vectors) {
  std::vector<std::size_t> chosen;
  std::vector<Vector> rows;
  std::size_t current = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    rows.push_back(vectors[i]);
    const std::size_t r = rank_of_vectors(field, n, rows);
    if (r > current) {
      chosen.push_back(i);
      current = r;
    } else {
      rows.pop_back();
    }
  }
  return chosen;
}

std::vector<std::size_t> complement_indices(const FieldSpec& field, std::size_t n,
                                            const std::vector<Vector>& start) {
  std::vector<Vector> rows = start;
  std::size_t current = rank_of_vectors(field, n, rows);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n && current < n; ++i) {
    rows.push_back(unit_vector(field, n, i));
    const std::size_t r = rank_of_vectors(field, n, rows);
    if (r > current) {
      out.push_back(i);
      current = r;
    } else {
      rows.pop_back();
    }
  }
  return out;
}

// ----------------------------------------------------------------- subspace

Subspace Subspace::zero(const FieldSpec& field, std::size_t ambient) {
  Subspace s;
  s.field_ = field;
  s.ambient_ = ambient;
  return s;
}

Subspace Subspace::full(const FieldSpec& field, std::size_t ambient) {
  std::vector<Vector> basis;
  for (std::size_t i = 0; i < ambient; ++i) basis.push_back(unit_vector(field, ambient, i));
  return span(field, ambient, basis);
}

Subspace Subspace::span(const FieldSpec& field, std::size_t ambient, const std::vector<Vector>& vectors) {
  Subspace s = zero(field, ambient);
  if (vectors.empty()) return s;
  for (const auto& v : vectors)
    if (v.size() != ambient) throw Error(ErrorKind::AmbientMismatch, "vector length differs from ambient dimension");
  const auto [reduced, pivots] = rref(Matrix::from_rows(field, ambient, vectors));
  for (std::size_t i = 0; i < pivots.size(); ++i) s.basis_.push_back(reduced.row(i));
  return s;
}

void Subspace::require_compatible(const Subspace& other) const {
  if (ambient_ != other.ambient_ || !(field_ == other.field_)) {
    throw Error(ErrorKind::AmbientMismatch, "subspaces live in different ambient spaces");
  }
}

bool Subspace::contains(const Vector& v) const {
  if (v.size() != ambient_) throw Error(ErrorKind::AmbientMismatch, "vector length differs from ambient dimension");
  std::vector<Vector> rows = basis_;
  rows.push_back(v);
  return rank_of_vectors(field_, ambient_, rows) == basis_.size();
}

bool Subspace::contains(const Subspace& other) const {
  require_compatible(other);
  return sum(other).dim() == dim();
}

Subspace Subspace::sum(const Subspace& other) const {
  require_compatible(other);
  std::vector<Vector> rows = basis_;
  rows.insert(rows.end(), other.basis_.begin(), other.basis_.end());
  return span(field_, ambient_, rows);
}

Subspace Subspace::intersect(const Subspace& other) const {
  require_compatible(other);
  const std::size_t k = basis_.size(), l = other.basis_.size();
  if (k == 0 || l == 0) return zero(field_, ambient_);
  // columns: u_1..u_k, -v_1..-v_l
  Matrix m(field_, ambient_, k + l);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t r = 0; r < ambient_; ++r) m(r, c) = basis_[c][r];
  for (std::size_t c = 0; c < l; ++c)
    for (std::size_t r = 0; r < ambient_; ++r) m(r, k + c) = -other.basis_[c][r];
  std::vector<Vector> vectors;
  for (const auto& kv : kernel(m)) {
    Vector v = zero_vector(field_, ambient_);
    for (std::size_t c = 0; c < k; ++c)
      if (!kv[c].is_zero()) v = add(v, scale(kv[c], basis_[c]));
    vectors.push_back(std::move(v));
  }
  return span(field_, ambient_, vectors);
}

bool operator==(const Subspace& a, const Subspace& b) {
  return a.field_ == b.field_ && a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
}

}  // namespace bilin
