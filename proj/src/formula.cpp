#include "bilin/formula.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace bilin {

// ---------------------------------------------------------------- VarLess

namespace {

struct VarKey {
  std::string_view prefix;
  std::string_view digits;
};

VarKey split_var(std::string_view s) {
  std::size_t i = s.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
  return {s.substr(0, i), s.substr(i)};
}

int compare_digits(std::string_view a, std::string_view b) {
  while (a.size() > 1 && a.front() == '0') a.remove_prefix(1);
  while (b.size() > 1 && b.front() == '0') b.remove_prefix(1);
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return a.compare(b);
}

}  // namespace

bool VarLess::operator()(const std::string& a, const std::string& b) const {
  const VarKey ka = split_var(a), kb = split_var(b);
  if (ka.prefix != kb.prefix) return ka.prefix < kb.prefix;
  if (ka.digits.empty() != kb.digits.empty()) return ka.digits.empty();
  const int c = compare_digits(ka.digits, kb.digits);
  if (c != 0) return c < 0;
  return a < b;
}

std::vector<std::string> standard_variables(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

// ------------------------------------------------------------------- Term

Term Term::zero(const FieldSpec& field) {
  Term t;
  t.field_ = field;
  return t;
}

Term Term::var(const FieldSpec& field, const std::string& name) {
  Term t = zero(field);
  t.coeffs_.emplace(name, Scalar::one(field));
  return t;
}

Term Term::from_map(const FieldSpec& field, const Map& coefficients) {
  Term t = zero(field);
  for (const auto& [name, c] : coefficients) {
    if (!(c.field() == field)) throw Error(ErrorKind::FieldMismatch, "term coefficient from another field");
    if (!c.is_zero()) t.coeffs_.emplace(name, c);
  }
  return t;
}

Scalar Term::coefficient(const std::string& name) const {
  auto it = coeffs_.find(name);
  return it == coeffs_.end() ? Scalar::zero(field_) : it->second;
}

Term operator+(const Term& a, const Term& b) {
  if (!(a.field_ == b.field_)) throw Error(ErrorKind::FieldMismatch, "terms over different fields");
  Term out = a;
  for (const auto& [name, c] : b.coeffs_) {
    auto [it, inserted] = out.coeffs_.emplace(name, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) out.coeffs_.erase(it);
    }
  }
  return out;
}

Term Term::operator-() const {
  Term out = *this;
  for (auto& [name, c] : out.coeffs_) c = -c;
  return out;
}

Term operator-(const Term& a, const Term& b) { return a + (-b); }

Term operator*(const Scalar& c, const Term& t) {
  if (!(c.field() == t.field_)) throw Error(ErrorKind::FieldMismatch, "scalar and term over different fields");
  Term out = Term::zero(t.field_);
  if (c.is_zero()) return out;
  for (const auto& [name, k] : t.coeffs_) out.coeffs_.emplace(name, c * k);
  return out;
}

Vector Term::evaluate(const Assignment& assignment, std::size_t dim) const {
  Vector out = zero_vector(field_, dim);
  for (const auto& [name, c] : coeffs_) {
    auto it = assignment.find(name);
    if (it == assignment.end()) throw Error(ErrorKind::UnboundVariable, "no value for variable '" + name + "'");
    if (it->second.size() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "value of '" + name + "' has length " +
                                                    std::to_string(it->second.size()) + ", expected " +
                                                    std::to_string(dim));
    }
    for (std::size_t i = 0; i < dim; ++i) out[i] += c * it->second[i];
  }
  return out;
}

Term Term::rename(const std::map<std::string, std::string>& names) const {
  Term out = zero(field_);
  for (const auto& [name, c] : coeffs_) {
    auto it = names.find(name);
    out = out + c * var(field_, it == names.end() ? name : it->second);
  }
  return out;
}

void Term::collect_variables(VarSet& out) const {
  for (const auto& [name, c] : coeffs_) out.insert(name);
}

std::string Term::format() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  bool first = true;
  // Positive coefficients first, so "z - y" prints as written.
  for (const bool want_negative : {false, true}) {
    for (const auto& [name, c] : coeffs_) {
      std::string text = c.format();
      const bool negative = text.front() == '-';
      if (negative != want_negative) continue;
      const Scalar magnitude = negative ? -c : c;
      if (negative) text = magnitude.format();
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      if (!magnitude.is_one()) out += text + "*";
      out += name;
      first = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------- Formula

Formula Formula::top(const FieldSpec& field) {
  Formula f;
  f.kind_ = FormulaKind::Top;
  f.field_ = field;
  f.value_ = Scalar::zero(field);
  return f;
}

Formula Formula::bottom(const FieldSpec& field) {
  Formula f = top(field);
  f.kind_ = FormulaKind::Bottom;
  return f;
}

namespace {

void check_atom_fields(const Term& lhs, const Term& rhs, const Scalar& value) {
  if (!(lhs.field() == rhs.field()) || !(value.field() == lhs.field())) {
    throw Error(ErrorKind::FieldMismatch, "atom mixes fields");
  }
}

}  // namespace

Formula Formula::lin_eq(Term lhs, Term rhs) {
  check_atom_fields(lhs, rhs, Scalar::zero(lhs.field()));
  Formula f = top(lhs.field());
  f.kind_ = FormulaKind::LinEq;
  f.lhs_ = std::move(lhs);
  f.rhs_ = std::move(rhs);
  return f;
}

Formula Formula::lin_neq(Term lhs, Term rhs) {
  Formula f = lin_eq(std::move(lhs), std::move(rhs));
  f.kind_ = FormulaKind::LinNeq;
  return f;
}

Formula Formula::bil_eq(Term lhs, Term rhs, Scalar value) {
  check_atom_fields(lhs, rhs, value);
  Formula f = top(lhs.field());
  f.kind_ = FormulaKind::BilEq;
  f.lhs_ = std::move(lhs);
  f.rhs_ = std::move(rhs);
  f.value_ = std::move(value);
  return f;
}

Formula Formula::conj(const FieldSpec& field, std::vector<Formula> parts) {
  std::vector<Formula> flat;
  for (auto& p : parts) {
    if (!(p.field() == field)) throw Error(ErrorKind::FieldMismatch, "subformula over another field");
    if (p.kind() == FormulaKind::And) {
      for (const auto& c : p.children()) flat.push_back(c);
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return top(field);
  if (flat.size() == 1) return flat.front();
  Formula f = top(field);
  f.kind_ = FormulaKind::And;
  f.children_ = std::move(flat);
  return f;
}

Formula Formula::disj(const FieldSpec& field, std::vector<Formula> parts) {
  std::vector<Formula> flat;
  for (auto& p : parts) {
    if (!(p.field() == field)) throw Error(ErrorKind::FieldMismatch, "subformula over another field");
    if (p.kind() == FormulaKind::Or) {
      for (const auto& c : p.children()) flat.push_back(c);
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return bottom(field);
  if (flat.size() == 1) return flat.front();
  Formula f = top(field);
  f.kind_ = FormulaKind::Or;
  f.children_ = std::move(flat);
  return f;
}

Formula Formula::exists(std::vector<std::string> vars, Formula body) {
  if (vars.empty()) return body;
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i + 1; j < vars.size(); ++j)
      if (vars[i] == vars[j]) throw Error(ErrorKind::InvalidArgument, "variable '" + vars[i] + "' bound twice");
  Formula f = top(body.field());
  f.kind_ = FormulaKind::Exists;
  f.bound_ = std::move(vars);
  f.children_.push_back(std::move(body));
  return f;
}

bool Formula::is_atom() const noexcept {
  return kind_ == FormulaKind::LinEq || kind_ == FormulaKind::LinNeq || kind_ == FormulaKind::BilEq;
}

bool Formula::is_quantifier_free() const {
  if (kind_ == FormulaKind::Exists) return false;
  return std::all_of(children_.begin(), children_.end(), [](const Formula& c) { return c.is_quantifier_free(); });
}

VarSet Formula::free_variables() const {
  VarSet out;
  if (is_atom()) {
    lhs_.collect_variables(out);
    rhs_.collect_variables(out);
    return out;
  }
  for (const auto& c : children_) {
    const VarSet inner = c.free_variables();
    out.insert(inner.begin(), inner.end());
  }
  if (kind_ == FormulaKind::Exists)
    for (const auto& v : bound_) out.erase(v);
  return out;
}

VarSet Formula::all_variables() const {
  VarSet out;
  if (is_atom()) {
    lhs_.collect_variables(out);
    rhs_.collect_variables(out);
    return out;
  }
  for (const auto& c : children_) {
    const VarSet inner = c.all_variables();
    out.insert(inner.begin(), inner.end());
  }
  out.insert(bound_.begin(), bound_.end());
  return out;
}

Formula Formula::rename_free(const std::map<std::string, std::string>& names) const {
  Formula out = *this;
  if (is_atom()) {
    out.lhs_ = lhs_.rename(names);
    out.rhs_ = rhs_.rename(names);
    return out;
  }
  if (kind_ == FormulaKind::Exists) {
    auto inner = names;
    for (const auto& v : bound_) inner.erase(v);
    out.children_[0] = body().rename_free(inner);
    return out;
  }
  for (auto& c : out.children_) c = c.rename_free(names);
  return out;
}

// ----------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const FieldSpec& field) : text_(text), field_(field) {}

  Formula parse_all() {
    Formula f = formula();
    skip();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'", {"&", "|", "end of input"});
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::vector<std::string> expected) {
    throw ParseError(pos_, message, std::move(expected));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view token) {
    skip();
    return text_.substr(pos_, token.size()) == token;
  }

  bool accept(std::string_view token) {
    if (!peek(token)) return false;
    pos_ += token.size();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'", {std::string(token)});
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  // Reads an identifier at the cursor without consuming it.
  std::string peek_ident() {
    skip();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) return {};
    std::size_t end = pos_;
    while (end < text_.size() && ident_char(text_[end])) ++end;
    return std::string(text_.substr(pos_, end - pos_));
  }

  static bool is_keyword(const std::string& s) { return s == "E" || s == "T" || s == "F"; }

  std::string variable() {
    const std::string name = peek_ident();
    if (name.empty()) fail("expected a variable", {"variable"});
    if (is_keyword(name)) fail("'" + name + "' is a keyword, not a variable", {"variable"});
    pos_ += name.size();
    return name;
  }

  Formula formula() {
    std::vector<Formula> parts{conjunction()};
    while (accept("|")) parts.push_back(conjunction());
    return parts.size() == 1 ? parts.front() : Formula::disj(field_, std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unit()};
    while (accept("&")) parts.push_back(unit());
    return parts.size() == 1 ? parts.front() : Formula::conj(field_, std::move(parts));
  }

  Formula unit() {
    skip();
    const std::string word = peek_ident();
    if (word == "E") {
      pos_ += 1;
      std::vector<std::string> vars;
      const std::size_t start = pos_;
      while (!peek(".")) {
        vars.push_back(variable());
        if (std::count(vars.begin(), vars.end(), vars.back()) > 1) {
          pos_ = start;
          fail("variable '" + vars.back() + "' bound twice in one block", {"distinct variables"});
        }
      }
      if (vars.empty()) fail("expected a bound variable", {"variable"});
      expect(".");
      return Formula::exists(std::move(vars), formula());
    }
    if (word == "T") {
      pos_ += 1;
      return Formula::top(field_);
    }
    if (word == "F") {
      pos_ += 1;
      return Formula::bottom(field_);
    }
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    return atom();
  }

  Formula atom() {
    if (accept("[")) {
      Term t = term();
      expect(",");
      Term s = term();
      expect("]");
      expect("=");
      skip();
      if (pos_ >= text_.size()) fail("expected a scalar", {"scalar"});
      Scalar value = Scalar::parse_prefix(text_, pos_, field_);
      return Formula::bil_eq(std::move(t), std::move(s), std::move(value));
    }
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input", {"E", "T", "F", "(", "[", "term"});
    Term t = term();
    if (accept("!=")) return Formula::lin_neq(std::move(t), term());
    if (accept("=")) return Formula::lin_eq(std::move(t), term());
    fail("expected '=' or '!='", {"=", "!="});
  }

  Term term() {
    const bool negate = accept("-");
    Term t = addend();
    if (negate) t = -t;
    while (true) {
      if (peek("!=")) break;
      if (accept("+")) {
        t = t + addend();
      } else if (accept("-")) {
        t = t - addend();
      } else {
        break;
      }
    }
    return t;
  }

  Term addend() {
    skip();
    if (pos_ < text_.size() && ident_start(text_[pos_])) return Term::var(field_, variable());
    if (pos_ >= text_.size() || !(std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-')) {
      fail("expected a variable, a scalar or 0", {"variable", "scalar*variable", "0"});
    }
    const std::size_t start = pos_;
    Scalar c = Scalar::parse_prefix(text_, pos_, field_);
    const bool bare_zero = text_.substr(start, pos_ - start) == "0";
    if (accept("*")) return c * Term::var(field_, variable());
    if (bare_zero) return Term::zero(field_);
    pos_ = start;
    fail("a scalar must be followed by '*' and a variable", {"*"});
  }

  std::string_view text_;
  FieldSpec field_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text, const FieldSpec& field) { return Parser(text, field).parse_all(); }

// ---------------------------------------------------------------- printer

namespace {

std::string print_node(const Formula& f);

std::string print_child(const Formula& c, FormulaKind parent) {
  const bool wrap = c.kind() == FormulaKind::Exists || (parent == FormulaKind::And && c.kind() == FormulaKind::Or);
  return wrap ? "(" + print_node(c) + ")" : print_node(c);
}

std::string print_node(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Top: return "T";
    case FormulaKind::Bottom: return "F";
    case FormulaKind::LinEq: return f.lhs().format() + " = " + f.rhs().format();
    case FormulaKind::LinNeq: return f.lhs().format() + " != " + f.rhs().format();
    case FormulaKind::BilEq: return "[" + f.lhs().format() + "," + f.rhs().format() + "]=" + f.value().format();
    case FormulaKind::And:
    case FormulaKind::Or: {
      const char* sep = f.kind() == FormulaKind::And ? " & " : " | ";
      std::string out;
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += sep;
        out += print_child(f.children()[i], f.kind());
      }
      return out;
    }
    case FormulaKind::Exists: {
      std::string out = "E";
      for (const auto& v : f.bound()) out += " " + v;
      return out + ". " + print_node(f.body());
    }
  }
  return "?";
}

}  // namespace

std::string print_formula(const Formula& f) { return print_node(f); }

// --------------------------------------------------------- normal forms

std::vector<std::string> RegularFormula::variables() const {
  std::vector<std::string> out = free;
  out.insert(out.end(), bound.begin(), bound.end());
  return out;
}

Formula RegularFormula::to_formula() const {
  return Formula::exists(bound, Formula::conj(field, atoms));
}

namespace {

struct Disjunct {
  std::vector<std::string> bound;
  std::vector<Formula> atoms;
};

class Normalizer {
 public:
  explicit Normalizer(const Formula& f) : taken_(f.all_variables()), used_(f.free_variables()) {}

  std::vector<Disjunct> run(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Top: return {Disjunct{}};
      case FormulaKind::Bottom: return {};
      case FormulaKind::LinEq:
      case FormulaKind::LinNeq:
      case FormulaKind::BilEq: return {Disjunct{{}, {f}}};
      case FormulaKind::Or: {
        std::vector<Disjunct> out;
        for (const auto& c : f.children()) {
          auto part = run(c);
          out.insert(out.end(), part.begin(), part.end());
        }
        return out;
      }
      case FormulaKind::And: {
        std::vector<Disjunct> acc{Disjunct{}};
        for (const auto& c : f.children()) {
          const auto part = run(c);
          std::vector<Disjunct> next;
          for (const auto& a : acc)
            for (const auto& b : part) {
              Disjunct d = a;
              d.bound.insert(d.bound.end(), b.bound.begin(), b.bound.end());
              d.atoms.insert(d.atoms.end(), b.atoms.begin(), b.atoms.end());
              next.push_back(std::move(d));
            }
          acc = std::move(next);
        }
        return acc;
      }
      case FormulaKind::Exists: {
        std::map<std::string, std::string> renaming;
        std::vector<std::string> names;
        for (const auto& v : f.bound()) {
          const std::string fresh = claim(v);
          if (fresh != v) renaming[v] = fresh;
          names.push_back(fresh);
        }
        auto inner = run(renaming.empty() ? f.body() : f.body().rename_free(renaming));
        for (auto& d : inner) d.bound.insert(d.bound.begin(), names.begin(), names.end());
        return inner;
      }
    }
    return {};
  }

 private:
  std::string claim(const std::string& v) {
    if (!used_.count(v)) {
      used_.insert(v);
      return v;
    }
    for (std::size_t k = 1;; ++k) {
      std::string candidate = v + "_" + std::to_string(k);
      if (!used_.count(candidate) && !taken_.count(candidate)) {
        used_.insert(candidate);
        return candidate;
      }
    }
  }

  VarSet taken_;
  VarSet used_;
};

}  // namespace

std::vector<RegularFormula> to_regular_disjunction(const Formula& f) {
  const VarSet free = f.free_variables();
  std::vector<RegularFormula> out;
  for (auto& d : Normalizer(f).run(f)) {
    RegularFormula r;
    r.field = f.field();
    r.free.assign(free.begin(), free.end());
    r.bound = std::move(d.bound);
    r.atoms = std::move(d.atoms);
    out.push_back(std::move(r));
  }
  return out;
}

// ------------------------------------------------------------ evaluation

namespace {

bool eval_rec(const Formula& f, const BilinearSpace& v, Assignment& a, EvalMode mode,
              const std::vector<Vector>* universe) {
  switch (f.kind()) {
    case FormulaKind::Top: return true;
    case FormulaKind::Bottom: return false;
    case FormulaKind::LinEq: return is_zero(sub(f.lhs().evaluate(a, v.dim()), f.rhs().evaluate(a, v.dim())));
    case FormulaKind::LinNeq: return !is_zero(sub(f.lhs().evaluate(a, v.dim()), f.rhs().evaluate(a, v.dim())));
    case FormulaKind::BilEq:
      return v.form(f.lhs().evaluate(a, v.dim()), f.rhs().evaluate(a, v.dim())) == f.value();
    case FormulaKind::And:
      for (const auto& c : f.children())
        if (!eval_rec(c, v, a, mode, universe)) return false;
      return true;
    case FormulaKind::Or:
      for (const auto& c : f.children())
        if (eval_rec(c, v, a, mode, universe)) return true;
      return false;
    case FormulaKind::Exists: {
      if (mode == EvalMode::QuantifierFree) {
        throw Error(ErrorKind::NotQuantifierFree, "quantifier-free evaluation met an existential");
      }
      std::map<std::string, std::optional<Vector>> saved;
      for (const auto& name : f.bound()) {
        auto it = a.find(name);
        saved[name] = it == a.end() ? std::nullopt : std::optional<Vector>(it->second);
      }
      const std::size_t k = f.bound().size();
      std::vector<std::size_t> idx(k, 0);
      bool found = false;
      while (!found) {
        for (std::size_t i = 0; i < k; ++i) a[f.bound()[i]] = (*universe)[idx[i]];
        found = eval_rec(f.body(), v, a, mode, universe);
        std::size_t i = 0;
        while (i < k && ++idx[i] == universe->size()) idx[i++] = 0;
        if (i == k) break;
      }
      for (const auto& [name, old] : saved) {
        if (old) a[name] = *old;
        else a.erase(name);
      }
      return found;
    }
  }
  return false;
}

std::vector<Vector> all_vectors(const BilinearSpace& v) {
  const auto elements = enumerate_field(v.field());
  std::vector<Vector> out{Vector{}};
  for (std::size_t i = 0; i < v.dim(); ++i) {
    std::vector<Vector> next;
    next.reserve(out.size() * elements.size());
    for (const auto& e : elements)
      for (const auto& prefix : out) {
        Vector w = prefix;
        w.push_back(e);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

bool eval(const Formula& f, const BilinearSpace& space, const Assignment& assignment, EvalMode mode) {
  if (!(f.field() == space.field())) throw Error(ErrorKind::FieldMismatch, "formula and space over different fields");
  if (mode == EvalMode::QuantifierFree && !f.is_quantifier_free()) {
    throw Error(ErrorKind::NotQuantifierFree, "formula has quantifiers; use brute mode");
  }
  for (const auto& name : f.free_variables())
    if (!assignment.count(name)) throw Error(ErrorKind::UnboundVariable, "no value for free variable '" + name + "'");
  std::vector<Vector> universe;
  if (mode == EvalMode::Brute) universe = all_vectors(space);
  Assignment a = assignment;
  return eval_rec(f, space, a, mode, &universe);
}

// --------------------------------------------------------- Gram systems

void append_flavor_rows(const FieldSpec& field, Flavor flavor, std::size_t n, std::vector<Vector>& rows,
                        Vector& rhs) {
  const Scalar one = Scalar::one(field);
  auto row = [&] { return zero_vector(field, n * n); };
  if (flavor == Flavor::Symmetric) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Vector r = row();
        r[i * n + j] = one;
        r[j * n + i] = -one;
        rows.push_back(std::move(r));
        rhs.push_back(Scalar::zero(field));
      }
  } else if (flavor == Flavor::Alternating) {
    for (std::size_t i = 0; i < n; ++i) {
      Vector r = row();
      r[i * n + i] = one;
      rows.push_back(std::move(r));
      rhs.push_back(Scalar::zero(field));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Vector r = row();
        r[i * n + j] = one;
        r[j * n + i] = one;
        rows.push_back(std::move(r));
        rhs.push_back(Scalar::zero(field));
      }
  }
}

GramSystem compile_regular(const RegularFormula& r, Flavor flavor) {
  GramSystem s;
  s.field = r.field;
  s.flavor = flavor;
  s.variables = r.variables();
  s.n = s.variables.size();
  const std::size_t n = s.n;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[s.variables[i]] = i;
  auto coords = [&](const Term& t) {
    Vector out = zero_vector(r.field, n);
    for (const auto& [name, c] : t.coefficients()) {
      auto it = index.find(name);
      if (it == index.end()) throw Error(ErrorKind::UnboundVariable, "variable '" + name + "' is not declared");
      out[it->second] = c;
    }
    return out;
  };
  std::vector<Vector> rows;
  Vector rhs;
  for (const auto& atom : r.atoms) {
    switch (atom.kind()) {
      case FormulaKind::LinEq:
        throw Error(ErrorKind::ContainsLinearEquation,
                    "regular formula contains the linear equation " + print_formula(atom));
      case FormulaKind::LinNeq: {
        Vector d = coords(atom.lhs() - atom.rhs());
        if (is_zero(d)) s.trivial_inequality = true;
        s.inequalities.push_back(std::move(d));
        break;
      }
      case FormulaKind::BilEq: {
        const Vector alpha = coords(atom.lhs()), beta = coords(atom.rhs());
        Vector row = zero_vector(r.field, n * n);
        for (std::size_t i = 0; i < n; ++i) {
          if (alpha[i].is_zero()) continue;
          for (std::size_t j = 0; j < n; ++j)
            if (!beta[j].is_zero()) row[i * n + j] += alpha[i] * beta[j];
        }
        rows.push_back(std::move(row));
        rhs.push_back(atom.value());
        break;
      }
      default: throw Error(ErrorKind::InvalidArgument, "regular formula holds a non-atom");
    }
  }
  s.atom_rows = rows.size();
  append_flavor_rows(r.field, flavor, n, rows, rhs);
  s.matrix = Matrix::from_rows(r.field, n * n, rows);
  s.rhs = std::move(rhs);
  return s;
}

std::string ForcedValue::format() const {
  switch (kind) {
    case Kind::Forced: return "Forced(" + value->format() + ")";
    case Kind::NotForced: return "NotForced";
    case Kind::Unsatisfiable: return "Unsatisfiable";
  }
  return "?";
}

ForcedValue forced_bilinear_value(const RegularFormula& r, Flavor flavor) {
  const GramSystem s = compile_regular(r, flavor);
  if (s.n == 0) throw Error(ErrorKind::InvalidArgument, "forced value needs at least one variable");
  if (s.trivial_inequality) return {ForcedValue::Kind::Unsatisfiable, std::nullopt};
  const AffineSolutionSet sol = solve(s.matrix, s.rhs);
  if (!sol.consistent) return {ForcedValue::Kind::Unsatisfiable, std::nullopt};
  const std::size_t target = s.n == 1 ? s.unknown(0, 0) : s.unknown(0, 1);
  auto value = determined_coordinate(sol, target);
  if (!value) return {ForcedValue::Kind::NotForced, std::nullopt};
  return {ForcedValue::Kind::Forced, value};
}

// ---------------------------------------------------- standard formulas

Formula theta_over(const std::vector<std::string>& vars, const FieldSpec& field) {
  if (vars.empty()) throw Error(ErrorKind::InvalidArgument, "theta needs n >= 1");
  auto v = [&](const std::string& name) { return Term::var(field, name); };
  const Scalar one = Scalar::one(field), zero = Scalar::zero(field);
  Formula f = Formula::lin_eq(v(vars[0]), v(vars[0]));
  for (std::size_t k = 1; k < vars.size(); ++k) {
    const std::string y = "y" + std::to_string(k), z = "z" + std::to_string(k);
    std::vector<Formula> atoms;
    for (std::size_t i = 0; i < k; ++i) {
      atoms.push_back(Formula::bil_eq(v(y), v(vars[i]), one));
      atoms.push_back(Formula::bil_eq(v(z), v(vars[i]), one));
    }
    atoms.push_back(Formula::bil_eq(v(y), v(vars[k]), one));
    atoms.push_back(Formula::bil_eq(v(z), v(vars[k]), zero));
    f = Formula::conj(field, {f, Formula::exists({y, z}, Formula::conj(field, std::move(atoms)))});
  }
  return f;
}

Formula theta(std::size_t n, const FieldSpec& field) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "theta needs n >= 1");
  return theta_over(standard_variables(n), field);
}

Formula semi_hausdorff_formula(const FieldSpec& field) {
  auto v = [&](const char* name) { return Term::var(field, name); };
  const Scalar zero = Scalar::zero(field);
  return Formula::exists({"z", "zp"}, Formula::conj(field, {
                                                                Formula::bil_eq(v("x"), v("y") - v("z"), zero),
                                                                Formula::bil_eq(v("x") - v("zp"), v("z"), zero),
                                                                Formula::bil_eq(v("zp"), v("z") - v("yp"), zero),
                                                                Formula::bil_eq(v("zp") - v("xp"), v("yp"), zero),
                                                            }));
}

Formula qf_linear_independence_over(const std::vector<std::string>& vars, const FieldSpec& field) {
  if (!field.is_finite()) {
    throw Error(ErrorKind::InfiniteField, "a quantifier-free independence formula needs a finite field");
  }
  const std::uint64_t p = field.modulus();
  const std::size_t n = vars.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > (1u << 20) / p) throw Error(ErrorKind::InvalidArgument, "independence formula would be too large");
    total *= p;
  }
  std::vector<Formula> parts;
  for (std::uint64_t code = 1; code < total; ++code) {
    Term t = Term::zero(field);
    std::uint64_t rest = code;
    for (std::size_t i = 0; i < n; ++i, rest /= p) {
      const std::uint64_t digit = rest % p;
      if (digit) t = t + Scalar::from_residue(field, digit) * Term::var(field, vars[i]);
    }
    parts.push_back(Formula::lin_neq(std::move(t), Term::zero(field)));
  }
  return Formula::conj(field, std::move(parts));
}

Formula qf_linear_independence(std::size_t n, const FieldSpec& field) {
  return qf_linear_independence_over(standard_variables(n), field);
}

}  // namespace bilin
