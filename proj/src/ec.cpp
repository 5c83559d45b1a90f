#include "bilin/ec.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>

namespace bilin {

// ------------------------------------------------------------- QfType

std::string QfType::key() const {
  std::string out = std::to_string(n) + "|";
  for (const auto& row : kernel.basis()) out += format_vector(row) + ";";
  out += "|";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out += gram(i, j).format() + (j + 1 < n ? "," : ";");
  return out;
}

QfType qf_type_of(const BilinearSpace& space, const Tuple& tuple) {
  const FieldSpec& field = space.field();
  for (const auto& v : tuple)
    if (v.size() != space.dim()) throw Error(ErrorKind::DimensionMismatch, "tuple entry has the wrong length");
  QfType t;
  t.n = tuple.size();
  if (tuple.empty()) {
    t.kernel = Subspace::zero(field, 0);
    t.gram = Matrix(field, 0, 0);
    return t;
  }
  t.kernel = Subspace::span(field, t.n, kernel(Matrix::from_columns(field, space.dim(), tuple)));
  t.gram = space.gram_of(tuple);
  return t;
}

namespace {

struct Dependencies {
  std::vector<std::size_t> basis;      // ascending positions
  std::vector<Vector> coefficients;    // per position, over `basis`
};

Dependencies analyse(const QfType& t) {
  const FieldSpec& field = t.kernel.field();
  const std::size_t n = t.n;
  std::vector<bool> dependent(n, false);
  std::map<std::size_t, Vector> relation;  // position -> kernel row normalized at that position
  if (t.kernel.dim() > 0) {
    // reversed columns: pivots land on the last nonzero position of each relation
    Matrix rev(field, t.kernel.dim(), n);
    for (std::size_t r = 0; r < t.kernel.dim(); ++r)
      for (std::size_t c = 0; c < n; ++c) rev(r, n - 1 - c) = t.kernel.basis()[r][c];
    const RrefResult red = rref(rev);
    for (std::size_t r = 0; r < red.rank(); ++r) {
      const std::size_t pos = n - 1 - red.pivots[r];
      dependent[pos] = true;
      Vector row(n, Scalar::zero(field));
      for (std::size_t c = 0; c < n; ++c) row[n - 1 - c] = red.reduced(r, c);
      relation[pos] = std::move(row);
    }
  }
  Dependencies d;
  std::vector<std::size_t> slot(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (!dependent[i]) {
      slot[i] = d.basis.size();
      d.basis.push_back(i);
    }
  const std::size_t r = d.basis.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!dependent[i]) {
      d.coefficients.push_back(unit_vector(field, r, slot[i]));
      continue;
    }
    Vector c = zero_vector(field, r);
    const Vector& row = relation[i];
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && !row[j].is_zero()) c[slot[j]] = -row[j];
    d.coefficients.push_back(std::move(c));
  }
  return d;
}

}  // namespace

std::vector<std::size_t> basis_positions(const QfType& t) { return analyse(t).basis; }

std::vector<Vector> dependency_coefficients(const QfType& t) { return analyse(t).coefficients; }

Realization canonical_realization(const QfType& t, const FieldSpec& field, Flavor flavor) {
  const Dependencies d = analyse(t);
  const std::size_t r = d.basis.size();
  Matrix g(field, r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) g(i, j) = t.gram(d.basis[i], d.basis[j]);
  return {BilinearSpace::from_gram(field, flavor, std::move(g)), d.coefficients};
}

// ------------------------------------------------------ type agreement

namespace {

void require_compatible(const BilinearSpace& v, const BilinearSpace& w) {
  if (!(v.field() == w.field())) throw Error(ErrorKind::FieldMismatch, "spaces over different fields");
  if (v.flavor() != w.flavor()) throw Error(ErrorKind::FlavorMismatch, "spaces of different flavors");
}

}  // namespace

bool same_type(const BilinearSpace& v, const Tuple& a, const BilinearSpace& w, const Tuple& b) {
  require_compatible(v, w);
  if (a.size() != b.size()) return false;
  return qf_type_of(v, a) == qf_type_of(w, b);
}

AmalgamResult witness_amalgam(const BilinearSpace& v, const Tuple& a, const BilinearSpace& w, const Tuple& b) {
  if (!same_type(v, a, w, b)) throw Error(ErrorKind::TypeMismatch, "the tuples have different quantifier-free types");
  const FieldSpec& field = v.field();
  const auto idx = greedy_independent(field, v.dim(), a);
  Tuple sa, sb;
  for (auto i : idx) {
    sa.push_back(a[i]);
    sb.push_back(b[i]);
  }
  const BilinearSpace s = v.restrict_to(sa);
  BilMap f1{s, v, Matrix::from_columns(field, v.dim(), sa)};
  BilMap f2{s, w, Matrix::from_columns(field, w.dim(), sb)};
  return amalgamate_independent(f1, f2);
}

ExtensionSolution solve_extension(const ExtensionProblem& p) {
  const std::size_t k = p.a.dim();
  if (!(p.a.field() == p.b.field()) || p.a.flavor() != p.b.flavor() || p.b.dim() < k) {
    throw Error(ErrorKind::PreconditionFailed, "A must be a subspace of B of the same field and flavor");
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (!(p.a.gram()(i, j) == p.b.gram()(i, j))) {
        throw Error(ErrorKind::PreconditionFailed, "A is not the leading block of B");
      }
  if (!(p.f.source == p.a)) throw Error(ErrorKind::PreconditionFailed, "f must be defined on A");
  Matrix incl(p.a.field(), p.b.dim(), k);
  for (std::size_t i = 0; i < k; ++i) incl(i, i) = Scalar::one(p.a.field());
  AmalgamResult am = amalgamate_independent(p.f, BilMap{p.a, p.b, std::move(incl)});
  return {am.space, am.g1, am.g2};
}

// ------------------------------------------------ e.c. evaluation core

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

struct Mod {
  u32 p;
  u32 add(u32 a, u32 b) const { return static_cast<u32>((static_cast<u64>(a) + b) % p); }
  u32 sub(u32 a, u32 b) const { return static_cast<u32>((static_cast<u64>(a) + p - b) % p); }
  u32 mul(u32 a, u32 b) const { return static_cast<u32>(static_cast<u64>(a) * b % p); }
};

// A term split into its value on the realized tuple (K^r) and coefficients on a
// component's bound variables.
struct CTerm {
  std::vector<u32> base;
  std::vector<u32> bound;
};

struct CAtom {
  FormulaKind kind;
  CTerm t, s;  // linear atoms use t = lhs - rhs
  u32 value = 0;
};

struct Realized {
  Mod mod;
  Flavor flavor;
  std::size_t r;
  std::vector<u32> gram;                     // r x r
  std::map<std::string, std::vector<u32>> values;  // free variable -> K^r
};

u32 residue(const Scalar& s) { return static_cast<u32>(s.residue()); }

CTerm compile_term(const Term& term, const Realized& R, const std::map<std::string, std::size_t>& local) {
  CTerm out{std::vector<u32>(R.r, 0), std::vector<u32>(local.size(), 0)};
  for (const auto& [name, c] : term.coefficients()) {
    const u32 k = residue(c);
    if (auto it = local.find(name); it != local.end()) {
      out.bound[it->second] = R.mod.add(out.bound[it->second], k);
      continue;
    }
    auto it = R.values.find(name);
    if (it == R.values.end()) throw Error(ErrorKind::UnboundVariable, "no value for variable '" + name + "'");
    for (std::size_t i = 0; i < R.r; ++i) out.base[i] = R.mod.add(out.base[i], R.mod.mul(k, it->second[i]));
  }
  return out;
}

CAtom compile_atom(const Formula& atom, const Realized& R, const std::map<std::string, std::size_t>& local) {
  CAtom a;
  a.kind = atom.kind();
  if (a.kind == FormulaKind::BilEq) {
    a.t = compile_term(atom.lhs(), R, local);
    a.s = compile_term(atom.rhs(), R, local);
    a.value = residue(atom.value());
  } else {
    a.t = compile_term(atom.lhs() - atom.rhs(), R, local);
  }
  return a;
}

bool all_zero(const std::vector<u32>& v) {
  return std::all_of(v.begin(), v.end(), [](u32 x) { return x == 0; });
}

// Parametrization of the Gram entries of a (r + k)-dimensional extension.
struct Completion {
  std::size_t dim = 0;
  std::size_t unknowns = 0;
  std::vector<long> index;  // -1: known block or constant zero
  std::vector<u32> sign;    // multiplier of the unknown (1 or p - 1)
};

Completion make_completion(std::size_t r, std::size_t k, Flavor flavor, const Mod& mod) {
  Completion c;
  c.dim = r + k;
  const std::size_t n = c.dim;
  c.index.assign(n * n, -1);
  c.sign.assign(n * n, 1);
  auto fresh = [&] { return static_cast<long>(c.unknowns++); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i < r && j < r) continue;
      switch (flavor) {
        case Flavor::Plain: c.index[i * n + j] = fresh(); break;
        case Flavor::Symmetric:
          if (i <= j) c.index[i * n + j] = fresh();
          break;
        case Flavor::Alternating:
          if (i < j) c.index[i * n + j] = fresh();
          break;
      }
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      if (i < r && j < r) continue;
      if (flavor == Flavor::Symmetric) c.index[i * n + j] = c.index[j * n + i];
      if (flavor == Flavor::Alternating) {
        c.index[i * n + j] = c.index[j * n + i];
        c.sign[i * n + j] = mod.p - 1;
      }
    }
  return c;
}

// All k x m reduced row echelon matrices of rank k (row-major), for every k.
struct Echelon {
  std::size_t k;
  std::vector<std::size_t> pivots;
  std::vector<u32> entries;  // k x m
};

std::vector<Echelon> echelon_forms(std::size_t m, u32 p) {
  std::vector<Echelon> out;
  for (std::size_t k = 0; k <= m; ++k) {
    std::vector<bool> choose(m, false);
    std::fill(choose.begin(), choose.begin() + static_cast<long>(k), true);
    do {
      std::vector<std::size_t> piv;
      for (std::size_t c = 0; c < m; ++c)
        if (choose[c]) piv.push_back(c);
      std::vector<std::pair<std::size_t, std::size_t>> slots;  // free cells
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = piv[i] + 1; c < m; ++c)
          if (!choose[c]) slots.emplace_back(i, c);
      std::vector<u32> digits(slots.size(), 0);
      while (true) {
        Echelon e{k, piv, std::vector<u32>(k * m, 0)};
        for (std::size_t i = 0; i < k; ++i) e.entries[i * m + piv[i]] = 1;
        for (std::size_t s = 0; s < slots.size(); ++s) e.entries[slots[s].first * m + slots[s].second] = digits[s];
        out.push_back(std::move(e));
        std::size_t s = 0;
        while (s < digits.size() && ++digits[s] == p) digits[s++] = 0;
        if (s == digits.size()) break;
      }
    } while (std::prev_permutation(choose.begin(), choose.end()));
  }
  return out;
}

// Whether some extension of the realized span has witnesses for this group of atoms.
bool component_satisfiable(const Realized& R, std::size_t m, const std::vector<CAtom>& atoms) {
  const Mod& mod = R.mod;
  const std::size_t r = R.r;
  std::vector<CAtom> linear, bilinear;
  for (const auto& a : atoms) (a.kind == FormulaKind::BilEq ? bilinear : linear).push_back(a);

  for (const Echelon& e : echelon_forms(m, mod.p)) {
    const std::size_t k = e.k, n = r + k;
    const Completion comp = make_completion(r, k, R.flavor, mod);
    std::vector<std::size_t> open;  // witnesses with a free part in K^r
    for (std::size_t j = 0; j < m; ++j)
      if (std::find(e.pivots.begin(), e.pivots.end(), j) == e.pivots.end()) open.push_back(j);
    const std::size_t digits_count = open.size() * r;
    std::vector<u32> digits(digits_count, 0);
    std::vector<std::vector<u32>> y(m, std::vector<u32>(n, 0));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < k; ++i) y[j][r + i] = e.entries[i * m + j];
    std::vector<u32> aug;
    while (true) {
      for (std::size_t q = 0; q < open.size(); ++q)
        for (std::size_t i = 0; i < r; ++i) y[open[q]][i] = digits[q * r + i];

      auto value = [&](const CTerm& t) {
        std::vector<u32> v(n, 0);
        for (std::size_t i = 0; i < r; ++i) v[i] = t.base[i];
        for (std::size_t j = 0; j < m; ++j) {
          if (t.bound[j] == 0) continue;
          for (std::size_t i = 0; i < n; ++i) v[i] = mod.add(v[i], mod.mul(t.bound[j], y[j][i]));
        }
        return v;
      };

      bool ok = true;
      for (const auto& a : linear) {
        const bool zero = all_zero(value(a.t));
        if (zero != (a.kind == FormulaKind::LinEq)) {
          ok = false;
          break;
        }
      }
      if (ok && !bilinear.empty()) {
        const std::size_t cols = comp.unknowns + 1;
        aug.assign(bilinear.size() * cols, 0);
        for (std::size_t row = 0; row < bilinear.size() && ok; ++row) {
          const auto t = value(bilinear[row].t), s = value(bilinear[row].s);
          u32 rhs = bilinear[row].value;
          for (std::size_t i = 0; i < n; ++i) {
            if (t[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
              if (s[j] == 0) continue;
              const u32 c = mod.mul(t[i], s[j]);
              if (i < r && j < r) {
                rhs = mod.sub(rhs, mod.mul(c, R.gram[i * r + j]));
              } else if (comp.index[i * n + j] >= 0) {
                u32& cell = aug[row * cols + static_cast<std::size_t>(comp.index[i * n + j])];
                cell = mod.add(cell, mod.mul(c, comp.sign[i * n + j]));
              }
            }
          }
          aug[row * cols + comp.unknowns] = rhs;
        }
        ok = detail::consistent_mod_p(aug, bilinear.size(), comp.unknowns, mod.p);
      }
      if (ok) return true;

      std::size_t d = 0;
      while (d < digits_count && ++digits[d] == mod.p) digits[d++] = 0;
      if (d == digits_count) break;
    }
  }
  return false;
}

bool disjunct_true(const Realized& R, const RegularFormula& rf) {
  std::map<std::string, std::size_t> bound_index;
  for (std::size_t i = 0; i < rf.bound.size(); ++i) bound_index[rf.bound[i]] = i;
  const std::size_t m = rf.bound.size();

  // union-find over bound variables sharing an atom
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<std::size_t>> atom_vars;
  for (const auto& atom : rf.atoms) {
    VarSet vars;
    atom.lhs().collect_variables(vars);
    atom.rhs().collect_variables(vars);
    std::vector<std::size_t> mine;
    for (const auto& v : vars)
      if (auto it = bound_index.find(v); it != bound_index.end()) mine.push_back(it->second);
    for (std::size_t i = 1; i < mine.size(); ++i) parent[find(mine[i])] = find(mine[0]);
    atom_vars.push_back(std::move(mine));
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;  // root -> atom indices
  const std::map<std::string, std::size_t> none;
  for (std::size_t a = 0; a < rf.atoms.size(); ++a) {
    if (atom_vars[a].empty()) {
      const CAtom c = compile_atom(rf.atoms[a], R, none);
      if (c.kind == FormulaKind::BilEq) {
        u32 acc = 0;
        for (std::size_t i = 0; i < R.r; ++i) {
          if (c.t.base[i] == 0) continue;
          for (std::size_t j = 0; j < R.r; ++j)
            acc = R.mod.add(acc, R.mod.mul(R.mod.mul(c.t.base[i], c.s.base[j]), R.gram[i * R.r + j]));
        }
        if (acc != c.value) return false;
      } else if (all_zero(c.t.base) != (c.kind == FormulaKind::LinEq)) {
        return false;
      }
      continue;
    }
    groups[find(atom_vars[a].front())].push_back(a);
  }
  for (const auto& [root, atom_ids] : groups) {
    std::map<std::string, std::size_t> local;
    for (std::size_t v = 0; v < m; ++v)
      if (find(v) == root) local.emplace(rf.bound[v], local.size());
    std::vector<CAtom> atoms;
    for (auto a : atom_ids) atoms.push_back(compile_atom(rf.atoms[a], R, local));
    if (!component_satisfiable(R, local.size(), atoms)) return false;
  }
  return true;
}

}  // namespace

bool ec_eval_type(const Formula& f, const std::vector<std::string>& vars, const QfType& t, const FieldSpec& field,
                  Flavor flavor) {
  if (!field.is_finite()) throw Error(ErrorKind::InfiniteField, "e.c. evaluation is decided over finite fields only");
  if (!(f.field() == field)) throw Error(ErrorKind::FieldMismatch, "formula over another field");
  if (vars.size() != t.n) throw Error(ErrorKind::DimensionMismatch, "variable list does not match the type length");
  for (const auto& v : f.free_variables())
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
      throw Error(ErrorKind::UnboundVariable, "no value for free variable '" + v + "'");
    }
  const Dependencies d = analyse(t);
  Realized R{Mod{static_cast<u32>(field.modulus())}, flavor, d.basis.size(), {}, {}};
  R.gram.resize(R.r * R.r);
  for (std::size_t i = 0; i < R.r; ++i)
    for (std::size_t j = 0; j < R.r; ++j) R.gram[i * R.r + j] = residue(t.gram(d.basis[i], d.basis[j]));
  if (flavor != Flavor::Plain && !flavor_consistent(t.gram, flavor)) {
    throw Error(ErrorKind::FlavorViolation, "type Gram matrix violates the flavor");
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    std::vector<u32> v(R.r);
    for (std::size_t j = 0; j < R.r; ++j) v[j] = residue(d.coefficients[i][j]);
    R.values[vars[i]] = std::move(v);
  }
  for (const auto& rf : to_regular_disjunction(f))
    if (disjunct_true(R, rf)) return true;
  return false;
}

bool ec_eval_finite(const FieldSpec& field, Flavor flavor, const BilinearSpace& space, const Formula& f,
                    const Assignment& assignment) {
  if (!field.is_finite()) throw Error(ErrorKind::InfiniteField, "e.c. evaluation is decided over finite fields only");
  if (!(space.field() == field)) throw Error(ErrorKind::FieldMismatch, "space over another field");
  if (space.flavor() != flavor) {
    throw Error(ErrorKind::FlavorMismatch, std::string("space is ") + to_string(space.flavor()) + ", expected " +
                                               to_string(flavor));
  }
  std::vector<std::string> vars;
  Tuple tuple;
  for (const auto& v : f.free_variables()) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw Error(ErrorKind::UnboundVariable, "no value for free variable '" + v + "'");
    vars.push_back(v);
    tuple.push_back(it->second);
  }
  return ec_eval_type(f, vars, qf_type_of(space, tuple), field, flavor);
}

// --------------------------------------------------- generic satisfiability

GenericVerdict ec_sat_regular_generic(const FieldSpec& field, Flavor flavor, const RegularFormula& r) {
  if (field.is_finite()) {
    throw Error(ErrorKind::FiniteField, "generic satisfiability is for infinite fields; use ec_eval_finite");
  }
  const GramSystem s = compile_regular(r, flavor);
  GenericVerdict out;
  if (s.trivial_inequality) return out;
  const AffineSolutionSet sol = solve(s.matrix, s.rhs);
  if (!sol.consistent) return out;
  Matrix g(field, s.n, s.n);
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t j = 0; j < s.n; ++j) g(i, j) = sol.particular[s.unknown(i, j)];
  out.satisfiable = true;
  out.model = BilinearSpace::from_gram(field, flavor, std::move(g));
  for (std::size_t i = 0; i < s.n; ++i) out.witness.push_back(unit_vector(field, s.n, i));
  return out;
}

// ------------------------------------------------------- isolating formulas

Formula isolating_formula(const QfType& t, const FieldSpec& field) {
  const Dependencies d = analyse(t);
  const auto vars = standard_variables(t.n);
  std::vector<std::string> basis_vars;
  for (auto i : d.basis) basis_vars.push_back(vars[i]);
  std::vector<Formula> parts;
  if (!basis_vars.empty()) {
    parts.push_back(field.is_finite() ? qf_linear_independence_over(basis_vars, field)
                                      : theta_over(basis_vars, field));
  }
  for (std::size_t i = 0; i < t.n; ++i) {
    if (std::find(d.basis.begin(), d.basis.end(), i) != d.basis.end()) continue;
    Term rhs = Term::zero(field);
    for (std::size_t j = 0; j < d.basis.size(); ++j)
      rhs = rhs + d.coefficients[i][j] * Term::var(field, basis_vars[j]);
    parts.push_back(Formula::lin_eq(Term::var(field, vars[i]), rhs));
  }
  for (auto i : d.basis)
    for (auto j : d.basis)
      parts.push_back(Formula::bil_eq(Term::var(field, vars[i]), Term::var(field, vars[j]), t.gram(i, j)));
  return Formula::conj(field, std::move(parts));
}

// ---------------------------------------------------------- enumeration

std::vector<Matrix> enumerate_grams(std::size_t r, const FieldSpec& field, Flavor flavor) {
  const auto elements = enumerate_field(field);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      if (flavor == Flavor::Plain || (flavor == Flavor::Symmetric && i <= j) || (flavor == Flavor::Alternating && i < j))
        cells.emplace_back(i, j);
    }
  double total = 1;
  for (std::size_t i = 0; i < cells.size(); ++i) total *= static_cast<double>(elements.size());
  if (total > 5e6) throw Error(ErrorKind::InvalidArgument, "too many Gram matrices to enumerate");
  std::vector<Matrix> out;
  std::vector<std::size_t> digit(cells.size(), 0);
  while (true) {
    Matrix g(field, r, r);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto [i, j] = cells[c];
      g(i, j) = elements[digit[c]];
      if (i != j && flavor == Flavor::Symmetric) g(j, i) = elements[digit[c]];
      if (i != j && flavor == Flavor::Alternating) g(j, i) = -elements[digit[c]];
    }
    out.push_back(std::move(g));
    std::size_t c = 0;
    while (c < cells.size() && ++digit[c] == elements.size()) digit[c++] = 0;
    if (c == cells.size()) break;
  }
  return out;
}

std::vector<QfType> enumerate_qf_types(std::size_t n, const FieldSpec& field, Flavor flavor) {
  if (!field.is_finite()) throw Error(ErrorKind::InfiniteField, "types are enumerated over finite fields only");
  const auto elements = enumerate_field(field);

  struct Pattern {
    std::size_t rank = 0;
    std::vector<Vector> coefficients;  // per position, over the first `rank` basis slots (padded later)
  };
  std::vector<Pattern> patterns{Pattern{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Pattern> next;
    for (const auto& pat : patterns) {
      Pattern basis = pat;
      basis.coefficients.push_back(unit_vector(field, pat.rank + 1, pat.rank));
      basis.rank += 1;
      next.push_back(std::move(basis));
      std::vector<std::size_t> digit(pat.rank, 0);
      while (true) {
        Pattern dep = pat;
        Vector c(pat.rank, Scalar::zero(field));
        for (std::size_t j = 0; j < pat.rank; ++j) c[j] = elements[digit[j]];
        dep.coefficients.push_back(std::move(c));
        next.push_back(std::move(dep));
        std::size_t j = 0;
        while (j < digit.size() && ++digit[j] == elements.size()) digit[j++] = 0;
        if (j == digit.size()) break;
      }
    }
    patterns = std::move(next);
  }

  std::vector<QfType> out;
  for (auto& pat : patterns) {
    const std::size_t r = pat.rank;
    Tuple coords;
    for (auto c : pat.coefficients) {
      c.resize(r, Scalar::zero(field));
      coords.push_back(std::move(c));
    }
    for (auto& g : enumerate_grams(r, field, flavor)) {
      const BilinearSpace s = BilinearSpace::from_gram(field, flavor, std::move(g));
      out.push_back(qf_type_of(s, coords));
    }
  }
  std::sort(out.begin(), out.end(), [](const QfType& a, const QfType& b) { return a.key() < b.key(); });
  return out;
}

// ------------------------------------------------------------------- QE

Formula qe_finite(const Formula& f, std::size_t n, const FieldSpec& field, Flavor flavor) {
  if (!field.is_finite()) throw Error(ErrorKind::InfiniteField, "quantifier elimination is implemented for finite fields");
  const auto vars = standard_variables(n);
  for (const auto& v : f.free_variables())
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
      throw Error(ErrorKind::InvalidArgument, "free variable '" + v + "' is not among x1..x" + std::to_string(n));
    }
  const auto types = enumerate_qf_types(n, field, flavor);
  std::vector<bool> member;
  std::vector<Formula> parts;
  for (const auto& t : types) {
    member.push_back(ec_eval_type(f, vars, t, field, flavor));
    if (member.back()) parts.push_back(isolating_formula(t, field));
  }
  Formula out = Formula::bottom(field);
  if (parts.size() == types.size()) out = Formula::top(field);
  else if (!parts.empty()) out = Formula::disj(field, std::move(parts));

  for (std::size_t k = 0; k < types.size(); ++k) {
    const Realization real = canonical_realization(types[k], field, flavor);
    Assignment a;
    for (std::size_t i = 0; i < n; ++i) a[vars[i]] = real.tuple[i];
    if (eval(out, real.space, a) != member[k]) {
      throw Error(ErrorKind::PreconditionFailed, "eliminated formula disagrees on type " + types[k].key());
    }
  }
  return out;
}

// -------------------------------------------------------------- instability

InstabilityWitness instability_witness(std::size_t m, const FieldSpec& field, Flavor flavor) {
  if (m < 2 || m > 4) throw Error(ErrorKind::InvalidArgument, "instability witness needs 2 <= m <= 4");
  const std::size_t n = 2 * m;
  const Scalar one = Scalar::one(field);
  Matrix g(field, n, n);
  for (std::size_t i = 0; i < m; ++i) {
    g(m + i, i) = one;
    g(i, m + i) = flavor == Flavor::Alternating ? -one : one;
  }
  InstabilityWitness out;
  out.space = BilinearSpace::from_gram(field, flavor, std::move(g));
  for (std::size_t i = 0; i < m; ++i) out.parameters.push_back(unit_vector(field, n, i));
  for (std::size_t chi = 0; chi < (std::size_t{1} << m); ++chi) {
    Vector v = zero_vector(field, n);
    for (std::size_t i = 0; i < m; ++i)
      if (chi >> i & 1) v[m + i] = one;
    out.vectors.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------- support

std::string SupportCheck::format() const {
  if (!counterexample) return "NoCounterexampleUpTo(" + std::to_string(budget) + ")";
  std::string out = "Counterexample(dim " + std::to_string(space.dim()) + "; ";
  for (std::size_t i = 0; i < tuple.size(); ++i) out += (i ? ";" : "") + format_vector(tuple[i]);
  return out + ")";
}

SupportCheck check_support(const Formula& phi, const QfType& t, const FieldSpec& field, Flavor flavor,
                           std::size_t budget) {
  if (!field.is_finite()) throw Error(ErrorKind::InfiniteField, "support checks search finite fields only");
  const auto vars = standard_variables(t.n);
  SupportCheck out;
  out.budget = budget;
  for (const auto& s : enumerate_qf_types(t.n, field, flavor)) {
    if (basis_positions(s).size() > budget || s == t) continue;
    if (!ec_eval_type(phi, vars, s, field, flavor)) continue;
    const Realization real = canonical_realization(s, field, flavor);
    out.counterexample = true;
    out.space = real.space;
    out.tuple = real.tuple;
    return out;
  }
  return out;
}

// ---------------------------------------------------- semi-Hausdorff witness

SemiHausdorffWitness semi_hausdorff_witness(const BilinearSpace& space, const Vector& a, const Vector& b,
                                            const Vector& a_prime, const Vector& b_prime) {
  const FieldSpec& field = space.field();
  const Scalar lambda = space.form(a, b);
  if (!(lambda == space.form(a_prime, b_prime))) {
    throw Error(ErrorKind::PreconditionFailed, "[a,b] != [a',b']: no witnesses exist");
  }
  const std::size_t v = space.dim(), n = v + 2;
  auto lift = [&](const Vector& x) {
    Vector out = x;
    out.resize(n, Scalar::zero(field));
    return out;
  };
  const Vector c = unit_vector(field, n, v), cp = unit_vector(field, n, v + 1);
  const Vector la = lift(a), lbp = lift(b_prime);

  // unknowns: Gram entries touching c or c', parametrized by flavor
  std::vector<long> index(n * n, -1);
  std::vector<Scalar> sign(n * n, Scalar::one(field));
  std::size_t unknowns = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i < v && j < v) continue;
      const Flavor fl = space.flavor();
      if (fl == Flavor::Plain || (fl == Flavor::Symmetric && i <= j) || (fl == Flavor::Alternating && i < j))
        index[i * n + j] = static_cast<long>(unknowns++);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      if (i < v && j < v) continue;
      if (space.flavor() == Flavor::Symmetric) index[i * n + j] = index[j * n + i];
      if (space.flavor() == Flavor::Alternating) {
        index[i * n + j] = index[j * n + i];
        sign[i * n + j] = -Scalar::one(field);
      }
    }
  std::vector<Vector> rows;
  Vector rhs;
  auto constrain = [&](const Vector& x, const Vector& y) {
    Vector row = zero_vector(field, unknowns);
    Scalar target = lambda;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (x[i].is_zero() || y[j].is_zero()) continue;
        const Scalar k = x[i] * y[j];
        if (i < v && j < v) target -= k * space.gram()(i, j);
        else if (index[i * n + j] >= 0) row[static_cast<std::size_t>(index[i * n + j])] += k * sign[i * n + j];
      }
    rows.push_back(std::move(row));
    rhs.push_back(target);
  };
  constrain(la, c);
  constrain(cp, c);
  constrain(cp, lbp);
  const AffineSolutionSet sol = solve(Matrix::from_rows(field, unknowns, rows), rhs);
  if (!sol.consistent) throw Error(ErrorKind::PreconditionFailed, "witness system is inconsistent");
  Matrix g(field, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i < v && j < v) g(i, j) = space.gram()(i, j);
      else if (index[i * n + j] >= 0) g(i, j) = sign[i * n + j] * sol.particular[static_cast<std::size_t>(index[i * n + j])];
    }
  SemiHausdorffWitness out;
  out.space = BilinearSpace::from_gram(field, space.flavor(), std::move(g));
  Matrix incl(field, n, v);
  for (std::size_t i = 0; i < v; ++i) incl(i, i) = Scalar::one(field);
  out.inclusion = BilMap{space, out.space, std::move(incl)};
  out.c = c;
  out.c_prime = cp;
  return out;
}

}  // namespace bilin
