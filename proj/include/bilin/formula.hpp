#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bilin/space.hpp"

namespace bilin {

/// Orders names by alphabetic prefix, then by numeric suffix (x < x1 < x2 < x10 < xp).
struct VarLess {
  bool operator()(const std::string& a, const std::string& b) const;
};

using VarSet = std::set<std::string, VarLess>;
using Assignment = std::map<std::string, Vector>;

/// Linear combination of variables; zero coefficients are never stored.
class Term {
 public:
  using Map = std::map<std::string, Scalar, VarLess>;

  Term() = default;
  static Term zero(const FieldSpec& field);
  static Term var(const FieldSpec& field, const std::string& name);
  static Term from_map(const FieldSpec& field, const Map& coefficients);

  const FieldSpec& field() const noexcept { return field_; }
  const Map& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Coefficient of `name` (zero when absent).
  Scalar coefficient(const std::string& name) const;

  friend Term operator+(const Term& a, const Term& b);
  friend Term operator-(const Term& a, const Term& b);
  friend Term operator*(const Scalar& c, const Term& t);
  Term operator-() const;
  friend bool operator==(const Term&, const Term&) = default;

  /// Value in K^dim under the assignment; throws UnboundVariable.
  Vector evaluate(const Assignment& assignment, std::size_t dim) const;
  /// Substitutes variable names (names absent from the map stay).
  Term rename(const std::map<std::string, std::string>& names) const;
  void collect_variables(VarSet& out) const;

  /// "0", "x", "2*x - y", "x + 1+1r*y"; positive coefficients print first.
  std::string format() const;

 private:
  FieldSpec field_;
  Map coeffs_;
};

enum class FormulaKind { Top, Bottom, LinEq, LinNeq, BilEq, And, Or, Exists };

/// Positive existential formula. Conjunction and disjunction constructors flatten
/// nested nodes of the same kind and collapse singletons.
class Formula {
 public:
  Formula() = default;

  static Formula top(const FieldSpec& field);
  static Formula bottom(const FieldSpec& field);
  static Formula lin_eq(Term lhs, Term rhs);
  static Formula lin_neq(Term lhs, Term rhs);
  /// [lhs, rhs] = value.
  static Formula bil_eq(Term lhs, Term rhs, Scalar value);
  /// Empty list gives Top.
  static Formula conj(const FieldSpec& field, std::vector<Formula> parts);
  /// Empty list gives Bottom.
  static Formula disj(const FieldSpec& field, std::vector<Formula> parts);
  /// Throws InvalidArgument on repeated variables; no variables gives `body`.
  static Formula exists(std::vector<std::string> vars, Formula body);

  FormulaKind kind() const noexcept { return kind_; }
  const FieldSpec& field() const noexcept { return field_; }
  const Term& lhs() const noexcept { return lhs_; }
  const Term& rhs() const noexcept { return rhs_; }
  const Scalar& value() const noexcept { return value_; }
  const std::vector<Formula>& children() const noexcept { return children_; }
  const std::vector<std::string>& bound() const noexcept { return bound_; }
  const Formula& body() const { return children_.front(); }

  bool is_atom() const noexcept;
  bool is_quantifier_free() const;
  VarSet free_variables() const;
  /// Every variable name occurring anywhere, bound or free.
  VarSet all_variables() const;
  /// Renames free occurrences; bound names are untouched (callers avoid capture).
  Formula rename_free(const std::map<std::string, std::string>& names) const;

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  FormulaKind kind_ = FormulaKind::Top;
  FieldSpec field_;
  Term lhs_, rhs_;
  Scalar value_;
  std::vector<Formula> children_;
  std::vector<std::string> bound_;
};

/// Grammar:
///   formula := disj ;  disj := conj ('|' conj)* ;  conj := unit ('&' unit)*
///   unit := 'E' var+ '.' formula | 'T' | 'F' | atom | '(' formula ')'
///   atom := term '=' term | term '!=' term | '[' term ',' term ']' '=' scalar
///   term := ['-'] addend (('+'|'-') addend)* ;  addend := [scalar '*'] var | '0'
/// Throws ParseError with a character offset and the expected tokens.
Formula parse_formula(std::string_view text, const FieldSpec& field);
std::string print_formula(const Formula& f);

/// Atoms only (LinEq, LinNeq, BilEq) under a block of existentials.
struct RegularFormula {
  FieldSpec field;
  std::vector<std::string> free;   // sorted free variables of the source formula
  std::vector<std::string> bound;  // distinct, disjoint from `free`
  std::vector<Formula> atoms;

  /// free followed by bound.
  std::vector<std::string> variables() const;
  Formula to_formula() const;
};

/// Prenex disjunctive normal form; bound variables renamed apart (name, name_1, ...).
std::vector<RegularFormula> to_regular_disjunction(const Formula& f);

enum class EvalMode { QuantifierFree, Brute };

/// Qf mode throws NotQuantifierFree on quantifiers; brute mode throws InfiniteField
/// and lets existentials range over all of V.
bool eval(const Formula& f, const BilinearSpace& space, const Assignment& assignment,
          EvalMode mode = EvalMode::QuantifierFree);

/// Linear system over the unknowns u_ij = [z_i, z_j], index i*n + j, where
/// z_1..z_n are the regular formula's variables (free then bound).
struct GramSystem {
  FieldSpec field;
  Flavor flavor = Flavor::Plain;
  std::size_t n = 0;
  std::vector<std::string> variables;
  Matrix matrix;
  Vector rhs;
  /// Rows coming from BilEq atoms; the remaining rows are flavor rows.
  std::size_t atom_rows = 0;
  /// Some t != s has t - s identically zero.
  bool trivial_inequality = false;
  /// Coefficient vectors (over `variables`) of t - s for each t != s.
  std::vector<Vector> inequalities;

  std::size_t unknown(std::size_t i, std::size_t j) const { return i * n + j; }
};

/// Throws ContainsLinearEquation if r has an `=` atom.
GramSystem compile_regular(const RegularFormula& r, Flavor flavor);

/// Appends the flavor rows for n variables to (a, b).
void append_flavor_rows(const FieldSpec& field, Flavor flavor, std::size_t n, std::vector<Vector>& rows,
                        Vector& rhs);

struct ForcedValue {
  enum class Kind { Forced, NotForced, Unsatisfiable };
  Kind kind = Kind::NotForced;
  std::optional<Scalar> value;  // set iff Forced

  std::string format() const;
};

/// Value forced on [z_1, z_2] (or [z_1, z_1] with one variable) by the formula.
ForcedValue forced_bilinear_value(const RegularFormula& r, Flavor flavor);

/// Linear independence formula on x1..xn built from nested existentials.
Formula theta(std::size_t n, const FieldSpec& field);
/// Same construction over the given variable names; levels bind y<k>, z<k>.
Formula theta_over(const std::vector<std::string>& vars, const FieldSpec& field);

/// E z zp. [x,y - z]=0 & [x - zp,z]=0 & [zp,z - yp]=0 & [zp - xp,yp]=0.
Formula semi_hausdorff_formula(const FieldSpec& field);

/// Conjunction of (sum l_i x_i != 0) over all nonzero coefficient tuples, enumerated
/// as base-p numbers with x1 least significant. Throws InfiniteField.
Formula qf_linear_independence(std::size_t n, const FieldSpec& field);
Formula qf_linear_independence_over(const std::vector<std::string>& vars, const FieldSpec& field);

/// x1, ..., xn.
std::vector<std::string> standard_variables(std::size_t n);

}  // namespace bilin
