#include "bilin/space.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace bilin {

const char* to_string(Flavor flavor) {
  switch (flavor) {
    case Flavor::Plain: return "plain";
    case Flavor::Symmetric: return "symmetric";
    case Flavor::Alternating: return "alternating";
  }
  return "?";
}

Flavor parse_flavor(std::string_view text) {
  if (text == "plain") return Flavor::Plain;
  if (text == "symmetric") return Flavor::Symmetric;
  if (text == "alternating") return Flavor::Alternating;
  throw Error(ErrorKind::InvalidArgument,
              "unknown flavor '" + std::string(text) + "' (expected plain, symmetric or alternating)");
}

namespace {

std::string pair_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

void check_flavor(const Matrix& g, Flavor flavor) {
  const std::size_t n = g.rows();
  if (flavor == Flavor::Plain) return;
  for (std::size_t i = 0; i < n; ++i) {
    if (flavor == Flavor::Alternating && !g(i, i).is_zero()) {
      throw Error(ErrorKind::FlavorViolation,
                  "alternating form needs a zero diagonal; entry " + pair_name(i, i) + " = " + g(i, i).format());
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (flavor == Flavor::Symmetric && !(g(i, j) == g(j, i))) {
        throw Error(ErrorKind::FlavorViolation, "not symmetric: entries " + pair_name(i, j) + " = " +
                                                    g(i, j).format() + " and " + pair_name(j, i) + " = " +
                                                    g(j, i).format());
      }
      if (flavor == Flavor::Alternating && !(g(i, j) == -g(j, i))) {
        throw Error(ErrorKind::FlavorViolation, "not skew-symmetric: entries " + pair_name(i, j) + " = " +
                                                    g(i, j).format() + " and " + pair_name(j, i) + " = " +
                                                    g(j, i).format());
      }
    }
  }
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

[[noreturn]] void file_error(std::size_t line, const std::string& message) {
  throw ParseError(line + 1, "line " + std::to_string(line + 1) + ": " + message);
}

std::size_t parse_count(const std::string& text, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) file_error(line, "expected a count, got '" + text + "'");
  return value;
}

}  // namespace

bool flavor_consistent(const Matrix& gram, Flavor flavor) {
  try {
    check_flavor(gram, flavor);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// ------------------------------------------------------------ BilinearSpace

BilinearSpace BilinearSpace::from_gram(const FieldSpec& field, Flavor flavor, Matrix gram) {
  if (gram.rows() != gram.cols()) throw Error(ErrorKind::DimensionMismatch, "Gram matrix must be square");
  if (!(gram.field() == field) && gram.rows() > 0) {
    throw Error(ErrorKind::FieldMismatch, "Gram matrix entries are not in " + field.to_string());
  }
  check_flavor(gram, flavor);
  BilinearSpace v;
  v.field_ = field;
  v.flavor_ = flavor;
  v.gram_ = gram.rows() > 0 ? std::move(gram) : Matrix(field, 0, 0);
  return v;
}

BilinearSpace BilinearSpace::zero_form(const FieldSpec& field, Flavor flavor, std::size_t dim) {
  return from_gram(field, flavor, Matrix(field, dim, dim));
}

Scalar BilinearSpace::form(const Vector& u, const Vector& v) const {
  if (u.size() != dim() || v.size() != dim()) {
    throw Error(ErrorKind::DimensionMismatch, "form arguments must have length " + std::to_string(dim()));
  }
  Scalar acc = Scalar::zero(field_);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (v[j].is_zero() || gram_(i, j).is_zero()) continue;
      acc += u[i] * gram_(i, j) * v[j];
    }
  }
  return acc;
}

Matrix BilinearSpace::gram_of(const std::vector<Vector>& vectors) const {
  Matrix g(field_, vectors.size(), vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = 0; j < vectors.size(); ++j) g(i, j) = form(vectors[i], vectors[j]);
  return g;
}

BilinearSpace BilinearSpace::restrict_to(const std::vector<Vector>& basis) const {
  return from_gram(field_, flavor_, gram_of(basis));
}

std::string BilinearSpace::to_file() const {
  std::string out = "field " + field_.to_string() + "\n";
  out += std::string("flavor ") + to_string(flavor_) + "\n";
  out += "dim " + std::to_string(dim()) + "\n";
  out += "gram\n";
  out += gram_.format();
  return out;
}

namespace detail {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    lines.push_back(trim(line));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

Matrix parse_matrix_lines(const FieldSpec& field, const std::vector<std::string>& lines, std::size_t& pos,
                          std::size_t rows, std::size_t cols) {
  Matrix m(field, rows, cols);
  if (cols == 0) return m;
  for (std::size_t r = 0; r < rows; ++r) {
    while (pos < lines.size() && lines[pos].empty()) ++pos;
    if (pos >= lines.size()) file_error(pos, "missing matrix row " + std::to_string(r + 1));
    const auto toks = split_ws(lines[pos]);
    if (toks.size() != cols) {
      file_error(pos, "expected " + std::to_string(cols) + " scalars, got " + std::to_string(toks.size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      try {
        m(r, c) = Scalar::parse(toks[c], field);
      } catch (const ParseError& e) {
        file_error(pos, e.what());
      }
    }
    ++pos;
  }
  return m;
}

BilinearSpace parse_space_lines(const std::vector<std::string>& lines, std::size_t& pos) {
  auto next = [&]() -> const std::string& {
    while (pos < lines.size() && lines[pos].empty()) ++pos;
    if (pos >= lines.size()) file_error(pos, "unexpected end of space description");
    return lines[pos];
  };
  const std::string& fline = next();
  if (!fline.starts_with("field ")) file_error(pos, "expected 'field ...'");
  FieldSpec field;
  try {
    field = FieldSpec::parse(fline.substr(6));
  } catch (const Error& e) {
    file_error(pos, e.what());
  }
  ++pos;
  const std::string& flline = next();
  if (!flline.starts_with("flavor ")) file_error(pos, "expected 'flavor ...'");
  Flavor flavor{};
  try {
    flavor = parse_flavor(trim(flline.substr(7)));
  } catch (const Error& e) {
    file_error(pos, e.what());
  }
  ++pos;
  const std::string& dline = next();
  if (!dline.starts_with("dim ")) file_error(pos, "expected 'dim <n>'");
  const std::size_t n = parse_count(trim(dline.substr(4)), pos);
  ++pos;
  if (next() != "gram") file_error(pos, "expected 'gram'");
  ++pos;
  Matrix g = parse_matrix_lines(field, lines, pos, n, n);
  return BilinearSpace::from_gram(field, flavor, std::move(g));
}

}  // namespace detail

BilinearSpace BilinearSpace::parse_file(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::size_t pos = 0;
  BilinearSpace v = detail::parse_space_lines(lines, pos);
  for (; pos < lines.size(); ++pos)
    if (!lines[pos].empty()) file_error(pos, "unexpected trailing content '" + lines[pos] + "'");
  return v;
}

Scalar form_eval(const BilinearSpace& space, const Vector& u, const Vector& v) { return space.form(u, v); }

// ------------------------------------------------------------------- BilMap

std::vector<Vector> BilMap::apply(const std::vector<Vector>& vs) const {
  std::vector<Vector> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(apply(v));
  return out;
}

MonoCheck is_monomorphism(const BilMap& f) {
  if (!(f.source.field() == f.target.field())) {
    throw Error(ErrorKind::FieldMismatch, "source and target fields differ");
  }
  if (f.source.flavor() != f.target.flavor()) {
    throw Error(ErrorKind::FlavorMismatch, std::string("source is ") + to_string(f.source.flavor()) +
                                               ", target is " + to_string(f.target.flavor()));
  }
  if (f.matrix.rows() != f.target.dim() || f.matrix.cols() != f.source.dim()) {
    return {false, "matrix is " + std::to_string(f.matrix.rows()) + "x" + std::to_string(f.matrix.cols()) +
                       ", expected " + std::to_string(f.target.dim()) + "x" + std::to_string(f.source.dim())};
  }
  const std::size_t r = rank(f.matrix);
  if (r != f.source.dim()) {
    return {false, "not injective: rank " + std::to_string(r) + " < " + std::to_string(f.source.dim())};
  }
  const auto images = f.matrix.column_list();
  for (std::size_t i = 0; i < f.source.dim(); ++i)
    for (std::size_t j = 0; j < f.source.dim(); ++j) {
      const Scalar got = f.target.form(images[i], images[j]);
      if (!(got == f.source.gram()(i, j))) {
        return {false, "form not preserved at " + pair_name(i, j) + ": source " + f.source.gram()(i, j).format() +
                           ", image " + got.format()};
      }
    }
  return {true, ""};
}

BilMap identity_map(const BilinearSpace& space) {
  return {space, space, Matrix::identity(space.field(), space.dim())};
}

BilMap compose(const BilMap& g, const BilMap& f) {
  if (!(f.target == g.source)) throw Error(ErrorKind::DimensionMismatch, "composition: target/source differ");
  if (f.source.dim() == 0) return {f.source, g.target, Matrix(g.target.field(), g.target.dim(), 0)};
  return {f.source, g.target, g.matrix * f.matrix};
}

std::string map_to_file(const BilMap& f) {
  std::string out = "source\n" + f.source.to_file();
  out += "target\n" + f.target.to_file();
  out += "matrix\n" + f.matrix.format();
  return out;
}

BilMap parse_map_file(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::size_t pos = 0;
  auto expect = [&](const char* word) {
    while (pos < lines.size() && lines[pos].empty()) ++pos;
    if (pos >= lines.size() || lines[pos] != word) file_error(pos, std::string("expected '") + word + "'");
    ++pos;
  };
  expect("source");
  BilMap f;
  f.source = detail::parse_space_lines(lines, pos);
  expect("target");
  f.target = detail::parse_space_lines(lines, pos);
  expect("matrix");
  f.matrix = detail::parse_matrix_lines(f.target.field(), lines, pos, f.target.dim(), f.source.dim());
  for (; pos < lines.size(); ++pos)
    if (!lines[pos].empty()) file_error(pos, "unexpected trailing content '" + lines[pos] + "'");
  return f;
}

// ---------------------------------------------------------------- radicals

Subspace radical(const BilinearSpace& space, Side side) {
  const Matrix& g = space.gram();
  const auto basis = side == Side::Right ? kernel(g) : kernel(g.transpose());
  return Subspace::span(space.field(), space.dim(), basis);
}

bool is_nondegenerate(const BilinearSpace& space) {
  return radical(space, Side::Left).dim() == 0 && radical(space, Side::Right).dim() == 0;
}

namespace {

std::size_t leading_index(const Vector& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) return i;
  return v.size();
}

}  // namespace

Closure nondegenerate_closure(const BilinearSpace& space) {
  const FieldSpec& field = space.field();
  const std::size_t budget = 4 * space.dim();
  BilinearSpace current = space;
  while (!is_nondegenerate(current)) {
    const Subspace left = radical(current, Side::Left);
    const Subspace right = radical(current, Side::Right);
    const std::size_t n = current.dim();
    const std::size_t k = left.dim();  // equals right.dim(): n - rank
    if (n + k > budget) {
      throw Error(ErrorKind::ClosureBudgetExceeded, "non-degenerate closure exceeded 4*dim = " + std::to_string(budget));
    }
    const Scalar one = Scalar::one(field);
    const Scalar back = current.flavor() == Flavor::Alternating ? -one : one;
    Matrix g(field, n + k, n + k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = current.gram()(i, j);
    // Dual vector j pairs with the j-th RREF radical vector at its pivot.
    for (std::size_t j = 0; j < k; ++j) {
      g(leading_index(left.basis()[j]), n + j) = one;
      g(n + j, leading_index(right.basis()[j])) = back;
    }
    current = BilinearSpace::from_gram(field, current.flavor(), std::move(g));
  }
  Matrix incl(field, current.dim(), space.dim());
  for (std::size_t i = 0; i < space.dim(); ++i) incl(i, i) = Scalar::one(field);
  return {current, BilMap{space, current, std::move(incl)}};
}

}  // namespace bilin
