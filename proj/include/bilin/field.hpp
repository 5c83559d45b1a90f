#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "bilin/error.hpp"

namespace bilin {

/// Coefficient field: the rationals, a prime field GF(p), or Q(sqrt d).
class FieldSpec {
 public:
  enum class Kind { Rationals, PrimeField, QuadraticExt };

  /// Defaults to the rationals.
  FieldSpec() = default;

  static FieldSpec rationals();
  /// Throws InvalidField unless p is a prime below 2^31.
  static FieldSpec prime(std::int64_t p);
  /// Throws InvalidField unless d > 1 is square-free.
  static FieldSpec quadratic(std::int64_t d);

  /// Accepts "Q", "GF <p>" or "QSQRT <d>" (the space-file spelling).
  static FieldSpec parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::PrimeField; }
  /// The prime p for GF(p); 0 otherwise.
  std::uint64_t modulus() const noexcept { return kind_ == Kind::PrimeField ? param_ : 0; }
  /// The radicand d for Q(sqrt d); 0 otherwise.
  std::int64_t radicand() const noexcept {
    return kind_ == Kind::QuadraticExt ? static_cast<std::int64_t>(param_) : 0;
  }
  std::uint64_t characteristic() const noexcept { return modulus(); }

  /// Same spelling that parse() accepts.
  std::string to_string() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  FieldSpec(Kind kind, std::uint64_t param) : kind_(kind), param_(param) {}

  Kind kind_ = Kind::Rationals;
  std::uint64_t param_ = 0;
};

/// Exact element of a FieldSpec. Representations are canonical, so
/// structural equality is value equality.
class Scalar {
 public:
  struct Quadratic {
    mpq_class a;  // rational part
    mpq_class b;  // coefficient of sqrt(d)
  };

  /// Zero of the rationals.
  Scalar();
  /// Zero of `field`.
  explicit Scalar(const FieldSpec& field);

  static Scalar zero(const FieldSpec& field) { return Scalar(field); }
  static Scalar one(const FieldSpec& field) { return from_int(field, 1); }
  static Scalar from_int(const FieldSpec& field, std::int64_t value);
  static Scalar from_rational(const FieldSpec& field, const mpq_class& value);
  /// a + b*sqrt(d); only valid for quadratic fields.
  static Scalar from_quadratic(const FieldSpec& field, const mpq_class& a, const mpq_class& b);
  /// Residue constructor for GF(p); reduces mod p.
  static Scalar from_residue(const FieldSpec& field, std::uint64_t residue);

  const FieldSpec& field() const noexcept { return field_; }

  bool is_zero() const;
  bool is_one() const;

  /// GF(p) residue in [0, p); throws FieldMismatch for other fields.
  std::uint64_t residue() const;
  /// Reduced fraction; throws FieldMismatch unless the field is Q.
  const mpq_class& rational() const;
  const Quadratic& quadratic() const;

  Scalar operator-() const;
  Scalar inverse() const;

  friend Scalar operator+(const Scalar& x, const Scalar& y);
  friend Scalar operator-(const Scalar& x, const Scalar& y);
  friend Scalar operator*(const Scalar& x, const Scalar& y);
  friend Scalar operator/(const Scalar& x, const Scalar& y);
  Scalar& operator+=(const Scalar& y) { return *this = *this + y; }
  Scalar& operator-=(const Scalar& y) { return *this = *this - y; }
  Scalar& operator*=(const Scalar& y) { return *this = *this * y; }

  friend bool operator==(const Scalar& x, const Scalar& y);

  /// A fixed total order used for canonical sorting; it is the numeric order
  /// on Q and on residues, and lexicographic on (a, b) for Q(sqrt d).
  friend std::strong_ordering operator<=>(const Scalar& x, const Scalar& y);

  /// Canonical text; parse(format(x)) == x.
  std::string format() const;
  /// Parses a whole string as a scalar of `field`.
  static Scalar parse(std::string_view text, const FieldSpec& field);
  /// Parses the longest scalar prefix of text[pos..]; advances pos.
  /// Throws ParseError (positions relative to `text`) when no scalar starts there.
  static Scalar parse_prefix(std::string_view text, std::size_t& pos, const FieldSpec& field);

 private:
  using Storage = std::variant<mpq_class, std::uint64_t, Quadratic>;
  Scalar(const FieldSpec& field, Storage value) : field_(field), value_(std::move(value)) {}
  void require_same_field(const Scalar& other) const;

  FieldSpec field_;
  Storage value_;
};

/// All elements of a prime field in ascending residue order.
/// Throws InfiniteField for Q and Q(sqrt d).
std::vector<Scalar> enumerate_field(const FieldSpec& field);

}  // namespace bilin
