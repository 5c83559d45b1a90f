#include "bilin/field.hpp"

#include <cctype>
#include <charconv>
#include <limits>

namespace bilin {

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) return false;
  }
  return true;
}

bool is_square_free(std::uint64_t n) {
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % (q * q) == 0) return false;
  }
  return true;
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1) result = result * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return result;
}

std::uint64_t reduce_mpz(const mpz_class& z, std::uint64_t p) {
  mpz_class r = z % static_cast<unsigned long>(p);
  if (r < 0) r += static_cast<unsigned long>(p);
  return r.get_ui();
}

std::string format_rational(const mpq_class& q) { return q.get_str(); }

}  // namespace

// ---------------------------------------------------------------- FieldSpec

FieldSpec FieldSpec::rationals() { return FieldSpec(Kind::Rationals, 0); }

FieldSpec FieldSpec::prime(std::int64_t p) {
  if (p < 2 || p >= (std::int64_t{1} << 31) || !is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(ErrorKind::InvalidField, "GF(p) requires a prime p < 2^31, got " + std::to_string(p));
  }
  return FieldSpec(Kind::PrimeField, static_cast<std::uint64_t>(p));
}

FieldSpec FieldSpec::quadratic(std::int64_t d) {
  if (d <= 1 || !is_square_free(static_cast<std::uint64_t>(d))) {
    throw Error(ErrorKind::InvalidField,
                "Q(sqrt d) requires a square-free d > 1, got " + std::to_string(d));
  }
  return FieldSpec(Kind::QuadraticExt, static_cast<std::uint64_t>(d));
}

FieldSpec FieldSpec::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto parse_param = [&](std::string_view rest) -> std::int64_t {
    rest = trim(rest);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || rest.empty()) {
      throw Error(ErrorKind::InvalidField, "bad field parameter '" + std::string(rest) + "'");
    }
    return value;
  };
  if (text == "Q") return rationals();
  if (text.starts_with("GF") && text.size() > 2 && std::isspace(static_cast<unsigned char>(text[2]))) {
    return prime(parse_param(text.substr(2)));
  }
  if (text.starts_with("QSQRT") && text.size() > 5 &&
      std::isspace(static_cast<unsigned char>(text[5]))) {
    return quadratic(parse_param(text.substr(5)));
  }
  throw Error(ErrorKind::InvalidField,
              "unknown field '" + std::string(text) + "' (expected Q, GF <p> or QSQRT <d>)");
}

std::string FieldSpec::to_string() const {
  switch (kind_) {
    case Kind::Rationals: return "Q";
    case Kind::PrimeField: return "GF " + std::to_string(param_);
    case Kind::QuadraticExt: return "QSQRT " + std::to_string(param_);
  }
  return "?";
}

// ------------------------------------------------------------------- Scalar

Scalar::Scalar() : Scalar(FieldSpec::rationals()) {}

Scalar::Scalar(const FieldSpec& field) : field_(field) {
  switch (field.kind()) {
    case FieldSpec::Kind::Rationals: value_ = mpq_class(0); break;
    case FieldSpec::Kind::PrimeField: value_ = std::uint64_t{0}; break;
    case FieldSpec::Kind::QuadraticExt: value_ = Quadratic{mpq_class(0), mpq_class(0)}; break;
  }
}

Scalar Scalar::from_int(const FieldSpec& field, std::int64_t value) {
  switch (field.kind()) {
    case FieldSpec::Kind::Rationals:
      return Scalar(field, mpq_class(mpz_class(std::to_string(value))));
    case FieldSpec::Kind::PrimeField: {
      const auto p = static_cast<std::int64_t>(field.modulus());
      std::int64_t r = value % p;
      if (r < 0) r += p;
      return Scalar(field, static_cast<std::uint64_t>(r));
    }
    case FieldSpec::Kind::QuadraticExt:
      return Scalar(field, Quadratic{mpq_class(mpz_class(std::to_string(value))), mpq_class(0)});
  }
  return Scalar(field);
}

Scalar Scalar::from_rational(const FieldSpec& field, const mpq_class& value) {
  mpq_class v = value;
  v.canonicalize();
  switch (field.kind()) {
    case FieldSpec::Kind::Rationals: return Scalar(field, v);
    case FieldSpec::Kind::PrimeField: {
      const std::uint64_t p = field.modulus();
      const std::uint64_t den = reduce_mpz(v.get_den(), p);
      if (den == 0) {
        throw Error(ErrorKind::DivisionByZero, "denominator vanishes in " + field.to_string());
      }
      const std::uint64_t num = reduce_mpz(v.get_num(), p);
      return Scalar(field, num * mod_pow(den, p - 2, p) % p);
    }
    case FieldSpec::Kind::QuadraticExt: return Scalar(field, Quadratic{v, mpq_class(0)});
  }
  return Scalar(field);
}

Scalar Scalar::from_quadratic(const FieldSpec& field, const mpq_class& a, const mpq_class& b) {
  if (field.kind() != FieldSpec::Kind::QuadraticExt) {
    throw Error(ErrorKind::FieldMismatch, "a + b*sqrt(d) requires a quadratic field");
  }
  Quadratic q{a, b};
  q.a.canonicalize();
  q.b.canonicalize();
  return Scalar(field, std::move(q));
}

Scalar Scalar::from_residue(const FieldSpec& field, std::uint64_t residue) {
  if (field.kind() != FieldSpec::Kind::PrimeField) {
    throw Error(ErrorKind::FieldMismatch, "residues require a prime field");
  }
  return Scalar(field, residue % field.modulus());
}

bool Scalar::is_zero() const {
  switch (field_.kind()) {
    case FieldSpec::Kind::Rationals: return std::get<mpq_class>(value_) == 0;
    case FieldSpec::Kind::PrimeField: return std::get<std::uint64_t>(value_) == 0;
    case FieldSpec::Kind::QuadraticExt: {
      const auto& q = std::get<Quadratic>(value_);
      return q.a == 0 && q.b == 0;
    }
  }
  return false;
}

bool Scalar::is_one() const { return *this == one(field_); }

std::uint64_t Scalar::residue() const {
  if (field_.kind() != FieldSpec::Kind::PrimeField) {
    throw Error(ErrorKind::FieldMismatch, "residue() on a non-prime field");
  }
  return std::get<std::uint64_t>(value_);
}

const mpq_class& Scalar::rational() const {
  if (field_.kind() != FieldSpec::Kind::Rationals) {
    throw Error(ErrorKind::FieldMismatch, "rational() on a non-rational field");
  }
  return std::get<mpq_class>(value_);
}

const Scalar::Quadratic& Scalar::quadratic() const {
  if (field_.kind() != FieldSpec::Kind::QuadraticExt) {
    throw Error(ErrorKind::FieldMismatch, "quadratic() on a non-quadratic field");
  }
  return std::get<Quadratic>(value_);
}

void Scalar::require_same_field(const Scalar& other) const {
  if (!(field_ == other.field_)) {
    throw Error(ErrorKind::FieldMismatch,
                "scalars from " + field_.to_string() + " and " + other.field_.to_string());
  }
}

Scalar Scalar::operator-() const {
  switch (field_.kind()) {
    case FieldSpec::Kind::Rationals: return Scalar(field_, mpq_class(-std::get<mpq_class>(value_)));
    case FieldSpec::Kind::PrimeField: {
      const std::uint64_t r = std::get<std::uint64_t>(value_);
      return Scalar(field_, r == 0 ? 0 : field_.modulus() - r);
    }
    case FieldSpec::Kind::QuadraticExt: {
      const auto& q = std::get<Quadratic>(value_);
      return Scalar(field_, Quadratic{mpq_class(-q.a), mpq_class(-q.b)});
    }
  }
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  switch (field_.kind()) {
    case FieldSpec::Kind::Rationals: return Scalar(field_, mpq_class(1 / std::get<mpq_class>(value_)));
    case FieldSpec::Kind::PrimeField: {
      const std::uint64_t p = field_.modulus();
      return Scalar(field_, mod_pow(std::get<std::uint64_t>(value_), p - 2, p));
    }
    case FieldSpec::Kind::QuadraticExt: {
      // (a + b r)^-1 = (a - b r) / (a^2 - d b^2)
      const auto& q = std::get<Quadratic>(value_);
      const mpq_class norm = q.a * q.a - mpq_class(field_.radicand()) * q.b * q.b;
      return Scalar(field_, Quadratic{mpq_class(q.a / norm), mpq_class(-q.b / norm)});
    }
  }
  return *this;
}

Scalar operator+(const Scalar& x, const Scalar& y) {
  x.require_same_field(y);
  switch (x.field_.kind()) {
    case FieldSpec::Kind::Rationals:
      return Scalar(x.field_, mpq_class(std::get<mpq_class>(x.value_) + std::get<mpq_class>(y.value_)));
    case FieldSpec::Kind::PrimeField:
      return Scalar(x.field_, (std::get<std::uint64_t>(x.value_) + std::get<std::uint64_t>(y.value_)) %
                                  x.field_.modulus());
    case FieldSpec::Kind::QuadraticExt: {
      const auto& a = std::get<Scalar::Quadratic>(x.value_);
      const auto& b = std::get<Scalar::Quadratic>(y.value_);
      return Scalar(x.field_, Scalar::Quadratic{mpq_class(a.a + b.a), mpq_class(a.b + b.b)});
    }
  }
  return x;
}

Scalar operator-(const Scalar& x, const Scalar& y) { return x + (-y); }

Scalar operator*(const Scalar& x, const Scalar& y) {
  x.require_same_field(y);
  switch (x.field_.kind()) {
    case FieldSpec::Kind::Rationals:
      return Scalar(x.field_, mpq_class(std::get<mpq_class>(x.value_) * std::get<mpq_class>(y.value_)));
    case FieldSpec::Kind::PrimeField:
      return Scalar(x.field_, std::get<std::uint64_t>(x.value_) * std::get<std::uint64_t>(y.value_) %
                                  x.field_.modulus());
    case FieldSpec::Kind::QuadraticExt: {
      const auto& a = std::get<Scalar::Quadratic>(x.value_);
      const auto& b = std::get<Scalar::Quadratic>(y.value_);
      const mpq_class d(x.field_.radicand());
      return Scalar(x.field_, Scalar::Quadratic{mpq_class(a.a * b.a + d * a.b * b.b),
                                                mpq_class(a.a * b.b + a.b * b.a)});
    }
  }
  return x;
}

Scalar operator/(const Scalar& x, const Scalar& y) {
  x.require_same_field(y);
  return x * y.inverse();
}

bool operator==(const Scalar& x, const Scalar& y) {
  if (!(x.field_ == y.field_)) return false;
  switch (x.field_.kind()) {
    case FieldSpec::Kind::Rationals: return std::get<mpq_class>(x.value_) == std::get<mpq_class>(y.value_);
    case FieldSpec::Kind::PrimeField:
      return std::get<std::uint64_t>(x.value_) == std::get<std::uint64_t>(y.value_);
    case FieldSpec::Kind::QuadraticExt: {
      const auto& a = std::get<Scalar::Quadratic>(x.value_);
      const auto& b = std::get<Scalar::Quadratic>(y.value_);
      return a.a == b.a && a.b == b.b;
    }
  }
  return false;
}

std::strong_ordering operator<=>(const Scalar& x, const Scalar& y) {
  x.require_same_field(y);
  auto cmp_q = [](const mpq_class& a, const mpq_class& b) {
    const int c = cmp(a, b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  };
  switch (x.field_.kind()) {
    case FieldSpec::Kind::Rationals: return cmp_q(std::get<mpq_class>(x.value_), std::get<mpq_class>(y.value_));
    case FieldSpec::Kind::PrimeField:
      return std::get<std::uint64_t>(x.value_) <=> std::get<std::uint64_t>(y.value_);
    case FieldSpec::Kind::QuadraticExt: {
      const auto& a = std::get<Scalar::Quadratic>(x.value_);
      const auto& b = std::get<Scalar::Quadratic>(y.value_);
      if (auto c = cmp_q(a.a, b.a); c != 0) return c;
      return cmp_q(a.b, b.b);
    }
  }
  return std::strong_ordering::equal;
}

std::string Scalar::format() const {
  switch (field_.kind()) {
    case FieldSpec::Kind::Rationals: return format_rational(std::get<mpq_class>(value_));
    case FieldSpec::Kind::PrimeField: return std::to_string(std::get<std::uint64_t>(value_));
    case FieldSpec::Kind::QuadraticExt: {
      const auto& q = std::get<Quadratic>(value_);
      std::string out = format_rational(q.a);
      if (q.b > 0) out += "+" + format_rational(q.b) + "r";
      if (q.b < 0) out += "-" + format_rational(mpq_class(-q.b)) + "r";
      return out;
    }
  }
  return "?";
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// int := '-'? digit+ ; returns false without consuming on mismatch.
bool scan_int(std::string_view text, std::size_t& pos, mpz_class& out, bool allow_sign) {
  std::size_t p = pos;
  bool negative = false;
  if (allow_sign && p < text.size() && text[p] == '-') {
    negative = true;
    ++p;
  }
  const std::size_t start = p;
  while (p < text.size() && is_digit(text[p])) ++p;
  if (p == start) return false;
  out = mpz_class(std::string(text.substr(start, p - start)));
  if (negative) out = -out;
  pos = p;
  return true;
}

// rat := int ('/' posint)? ; throws on "1/" or "1/0".
bool scan_rational(std::string_view text, std::size_t& pos, mpq_class& out, bool allow_sign) {
  std::size_t p = pos;
  mpz_class num;
  if (!scan_int(text, p, num, allow_sign)) return false;
  mpz_class den = 1;
  if (p < text.size() && text[p] == '/') {
    std::size_t q = p + 1;
    if (!scan_int(text, q, den, false)) {
      throw ParseError(q, "expected a positive denominator after '/'", {"digit"});
    }
    if (den == 0) throw ParseError(p + 1, "zero denominator");
    p = q;
  }
  out = mpq_class(num, den);
  out.canonicalize();
  pos = p;
  return true;
}

}  // namespace

Scalar Scalar::parse_prefix(std::string_view text, std::size_t& pos, const FieldSpec& field) {
  switch (field.kind()) {
    case FieldSpec::Kind::Rationals: {
      mpq_class q;
      if (!scan_rational(text, pos, q, true)) throw ParseError(pos, "expected a rational scalar", {"int", "int/posint"});
      return Scalar(field, q);
    }
    case FieldSpec::Kind::PrimeField: {
      mpz_class z;
      if (!scan_int(text, pos, z, true)) throw ParseError(pos, "expected an integer scalar", {"int"});
      return Scalar(field, reduce_mpz(z, field.modulus()));
    }
    case FieldSpec::Kind::QuadraticExt: {
      mpq_class a;
      if (!scan_rational(text, pos, a, true)) throw ParseError(pos, "expected a scalar", {"rat", "rat+rat r"});
      // optional ('+'|'-') rat 'r'; backtrack if the tail does not match
      if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        std::size_t p = pos + 1;
        mpq_class b;
        bool matched = false;
        try {
          matched = scan_rational(text, p, b, false) && p < text.size() && text[p] == 'r';
        } catch (const ParseError&) {
          matched = false;
        }
        if (matched) {
          if (text[pos] == '-') b = -b;
          pos = p + 1;
          return Scalar(field, Quadratic{a, b});
        }
      }
      return Scalar(field, Quadratic{a, mpq_class(0)});
    }
  }
  throw ParseError(pos, "unsupported field");
}

Scalar Scalar::parse(std::string_view text, const FieldSpec& field) {
  std::size_t pos = 0;
  Scalar s = parse_prefix(text, pos, field);
  if (pos != text.size()) {
    throw ParseError(pos, "unexpected trailing characters in scalar '" + std::string(text) + "'");
  }
  return s;
}

std::vector<Scalar> enumerate_field(const FieldSpec& field) {
  if (!field.is_finite()) {
    throw Error(ErrorKind::InfiniteField, field.to_string() + " is infinite and cannot be enumerated");
  }
  std::vector<Scalar> out;
  out.reserve(field.modulus());
  for (std::uint64_t r = 0; r < field.modulus(); ++r) out.push_back(Scalar::from_residue(field, r));
  return out;
}

}  // namespace bilin
