#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bilin/linalg.hpp"

namespace bilin {

enum class Flavor { Plain, Symmetric, Alternating };

const char* to_string(Flavor flavor);
/// "plain", "symmetric" or "alternating".
Flavor parse_flavor(std::string_view text);

/// Finite-dimensional bilinear space given by a Gram matrix over a fixed basis.
class BilinearSpace {
 public:
  BilinearSpace() = default;

  /// Validates the flavor; throws FlavorViolation naming the offending entry pair.
  static BilinearSpace from_gram(const FieldSpec& field, Flavor flavor, Matrix gram);
  static BilinearSpace zero_form(const FieldSpec& field, Flavor flavor, std::size_t dim);

  const FieldSpec& field() const noexcept { return field_; }
  Flavor flavor() const noexcept { return flavor_; }
  std::size_t dim() const noexcept { return gram_.rows(); }
  const Matrix& gram() const noexcept { return gram_; }

  /// u^T G v.
  Scalar form(const Vector& u, const Vector& v) const;

  /// Gram matrix of `vectors` (rows/columns in the given order).
  Matrix gram_of(const std::vector<Vector>& vectors) const;

  /// The space spanned by an independent family, with its induced form.
  BilinearSpace restrict_to(const std::vector<Vector>& basis) const;

  /// Space file text; parse_file(to_file()) == *this.
  std::string to_file() const;
  static BilinearSpace parse_file(std::string_view text);

  friend bool operator==(const BilinearSpace&, const BilinearSpace&) = default;

 private:
  FieldSpec field_;
  Flavor flavor_ = Flavor::Plain;
  Matrix gram_;
};

/// Same as V.form(u, v); throws DimensionMismatch on bad lengths.
Scalar form_eval(const BilinearSpace& space, const Vector& u, const Vector& v);

/// Whether `gram` satisfies the flavor constraints.
bool flavor_consistent(const Matrix& gram, Flavor flavor);

/// Linear map between bilinear spaces; column j is the image of source basis vector j.
struct BilMap {
  BilinearSpace source;
  BilinearSpace target;
  Matrix matrix;

  Vector apply(const Vector& v) const { return matrix.apply(v); }
  std::vector<Vector> apply(const std::vector<Vector>& vs) const;

  friend bool operator==(const BilMap&, const BilMap&) = default;
};

struct MonoCheck {
  bool ok = false;
  std::string violation;
  explicit operator bool() const noexcept { return ok; }
};

/// Full column rank and matrix^T * G_target * matrix == G_source.
/// Throws FieldMismatch / FlavorMismatch if the spaces are incompatible.
MonoCheck is_monomorphism(const BilMap& f);

BilMap identity_map(const BilinearSpace& space);
/// g after f; requires f.target == g.source.
BilMap compose(const BilMap& g, const BilMap& f);

/// Map text (source space, target space, matrix); see README.
std::string map_to_file(const BilMap& f);
BilMap parse_map_file(std::string_view text);

enum class Side { Left, Right };

/// Left: { x : x^T G = 0 }. Right: { y : G y = 0 }.
Subspace radical(const BilinearSpace& space, Side side);
bool is_nondegenerate(const BilinearSpace& space);

struct Closure {
  BilinearSpace space;
  BilMap inclusion;
};

/// Embeds V into a non-degenerate space of the same flavor. One dual vector is
/// adjoined per basis vector of the radical; all other new products are 0.
Closure nondegenerate_closure(const BilinearSpace& space);

namespace detail {
/// Parses a space block starting at line `pos`; advances past it.
BilinearSpace parse_space_lines(const std::vector<std::string>& lines, std::size_t& pos);
std::vector<std::string> split_lines(std::string_view text);
Matrix parse_matrix_lines(const FieldSpec& field, const std::vector<std::string>& lines, std::size_t& pos,
                          std::size_t rows, std::size_t cols);
}  // namespace detail

}  // namespace bilin
