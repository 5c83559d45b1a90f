#include "bilin/gallery.hpp"

#include <algorithm>
#include <random>

namespace bilin {

bool DemoReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

void DemoReport::check(std::string claim, bool ok, std::string value) {
  checks.push_back({std::move(claim), ok, std::move(value)});
}

std::string DemoReport::render() const {
  std::string out = "demo " + name + "\n";
  for (const auto& [label, text] : artifacts) {
    out += "-- " + label + "\n" + text;
    if (!text.empty() && text.back() != '\n') out += "\n";
  }
  if (!values.empty()) out += "-- values\n";
  for (const auto& [label, value] : values) out += label + " = " + value + "\n";
  out += "-- checks\n";
  for (const auto& c : checks) {
    out += std::string(c.passed ? "PASS " : "FAIL ") + c.claim;
    if (!c.value.empty()) out += ": " + c.value;
    out += "\n";
  }
  out += std::string("result ") + (passed() ? "PASS" : "FAIL") + "\n";
  return out;
}

namespace {

std::string format_tuple(const Tuple& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? ";" : "") + format_vector(t[i]);
  return out;
}

Tuple append(Tuple t, const Vector& v) {
  t.push_back(v);
  return t;
}

}  // namespace

// ------------------------------------------------------------ stationarity

DemoReport demo_stationarity(const BilinearSpace& c) {
  DemoReport rep;
  rep.name = "stationarity";
  const StationarityData d = stationarity_counterexample(c);
  rep.artifacts.push_back({"space V = C + <a, a', b>", d.space.to_file()});
  rep.artifacts.push_back({"tuples", "C = " + format_tuple(d.c_basis) + "\na = " + format_vector(d.a) +
                                         "\na' = " + format_vector(d.a_prime) + "\nb = " + format_vector(d.b) + "\n"});

  const Tuple ca = append(d.c_basis, d.a), cap = append(d.c_basis, d.a_prime);
  bool same = same_type(d.space, ca, d.space, cap);
  bool glued = false;
  if (same) {
    const AmalgamResult am = witness_amalgam(d.space, ca, d.space, cap);
    glued = am.g1.apply(d.a) == am.g2.apply(d.a_prime);
  }
  rep.check("a and a' have the same type over C (witness amalgam identifies them)", same && glued);
  rep.check("a is independent from b over C", is_independent(d.space, {d.a}, {d.b}, d.c_basis));
  rep.check("a' is independent from b over C", is_independent(d.space, {d.a_prime}, {d.b}, d.c_basis));
  const Tuple cb = append(d.c_basis, d.b);
  rep.check("a and a' have different types over C and b",
            !same_type(d.space, append(cb, d.a), d.space, append(cb, d.a_prime)));
  const Scalar ab = d.space.form(d.a, d.b), apb = d.space.form(d.a_prime, d.b);
  rep.values.push_back({"[a,b]", ab.format()});
  rep.values.push_back({"[a',b]", apb.format()});
  rep.check("clash [a,b] = 0 and [a',b] = 1", ab.is_zero() && apb.is_one(), "(" + ab.format() + ", " + apb.format() + ")");
  return rep;
}

// ----------------------------------------------------------------- hilbert

DemoReport demo_hilbert_3amalg() {
  DemoReport rep;
  rep.name = "hilbert";
  const FieldSpec q = FieldSpec::rationals();
  auto rat = [&](long num, long den = 1) { return Scalar::from_rational(q, mpq_class(num, den)); };

  // abstract model on the basis (a*, b, c, d)
  Matrix g(q, 4, 4);
  const Scalar entries[4][4] = {{rat(1), rat(1), rat(1), rat(1, 2)},
                                {rat(1), rat(2), rat(1), rat(5, 2)},
                                {rat(1), rat(1), rat(2), rat(5, 2)},
                                {rat(1, 2), rat(5, 2), rat(5, 2), rat(9, 2)}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = entries[i][j];
  const BilinearSpace abstract = BilinearSpace::from_gram(q, Flavor::Symmetric, g);
  rep.artifacts.push_back({"abstract model on (a*, b, c, d)", abstract.to_file()});
  const Vector v = {rat(0), rat(2), rat(2), rat(-2)};
  const Vector w = sub(unit_vector(q, 4, 0), v);
  const Scalar abstract_value = abstract.form(w, w);
  rep.values.push_back({"[a*-v, a*-v]", abstract_value.format()});
  rep.check("abstract model: [a*-v, a*-v] = -3", abstract_value == rat(-3), abstract_value.format());
  rep.check("abstract model has a negative self-product (not positive definite)", abstract_value < rat(0));

  // concrete model in Q(sqrt 15)^4 with diag(1,1,1,-1)
  const FieldSpec k = FieldSpec::quadratic(15);
  auto qs = [&](long num, long den = 1) { return Scalar::from_rational(k, mpq_class(num, den)); };
  Matrix diag(k, 4, 4);
  for (int i = 0; i < 3; ++i) diag(i, i) = qs(1);
  diag(3, 3) = qs(-1);
  const BilinearSpace concrete = BilinearSpace::from_gram(k, Flavor::Symmetric, diag);
  const Vector a_star = {qs(3, 2), qs(3, 2), qs(-1, 2), Scalar::from_quadratic(k, 0, mpq_class(1, 2))};
  const Vector b = {qs(1), qs(0), qs(1), qs(0)};
  const Vector c = {qs(0), qs(1), qs(1), qs(0)};
  const Vector d = {qs(1, 2), qs(1, 2), qs(2), qs(0)};
  const Vector cv = scale(qs(2), sub(add(b, c), d));
  const Vector cw = sub(a_star, cv);
  rep.artifacts.push_back({"concrete model", concrete.to_file()});
  rep.artifacts.push_back({"concrete vectors", "a* = " + format_vector(a_star) + "\nb = " + format_vector(b) +
                                                   "\nc = " + format_vector(c) + "\nd = " + format_vector(d) + "\n"});
  const Scalar aa = concrete.form(a_star, a_star), ab = concrete.form(a_star, b), ac = concrete.form(a_star, c),
               ad = concrete.form(a_star, d), ww = concrete.form(cw, cw);
  rep.values.push_back({"concrete [a*, a*]", aa.format()});
  rep.values.push_back({"concrete [a*, b]", ab.format()});
  rep.values.push_back({"concrete [a*, c]", ac.format()});
  rep.values.push_back({"concrete [a*, d]", ad.format()});
  rep.values.push_back({"concrete [a*-v, a*-v]", ww.format()});
  rep.check("concrete [a*, a*] = 1", aa == qs(1), aa.format());
  rep.check("concrete [a*, b] = 1", ab == qs(1), ab.format());
  rep.check("concrete [a*, c] = 1", ac == qs(1), ac.format());
  rep.check("concrete [a*, d] = 1/2", ad == qs(1, 2), ad.format());
  rep.check("concrete [a*-v, a*-v] = -3", ww == qs(-3), ww.format());

  const Matrix cg = concrete.gram_of({a_star, b, c, d});
  bool agree = true;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) agree = agree && cg(i, j) == Scalar::from_quadratic(k, g(i, j).rational(), 0);
  rep.check("abstract Gram equals the concrete products entry by entry", agree);

  // the cube in Q^3 with the dot product, completed by amalgamate3
  const BilinearSpace r3 = BilinearSpace::from_gram(q, Flavor::Symmetric, Matrix::identity(q, 3));
  const Vector ea = {rat(1), rat(0), rat(0)}, ea2 = {rat(0), rat(1), rat(0)};
  const Vector eb = {rat(1), rat(0), rat(1)}, ec = {rat(0), rat(1), rat(1)};
  const Vector ed = {rat(1, 2), rat(1, 2), rat(2)};
  auto sub_space = [&](const Tuple& basis) { return r3.restrict_to(basis); };
  auto embed = [&](const BilinearSpace& src, const Tuple& images) {
    return BilMap{src, r3, Matrix::from_columns(q, 3, images)};
  };
  Cube cube;
  cube.d = sub_space({ed});
  cube.a = sub_space({ea, ed});
  cube.b = sub_space({eb, ed});
  cube.c = sub_space({ec, ed});
  cube.v1 = cube.v2 = cube.v3 = r3;
  const Matrix last = Matrix::from_columns(q, 2, {Vector{rat(0), rat(1)}});
  cube.d_a = BilMap{cube.d, cube.a, last};
  cube.d_b = BilMap{cube.d, cube.b, last};
  cube.d_c = BilMap{cube.d, cube.c, last};
  cube.a_v1 = embed(cube.a, {ea, ed});
  cube.b_v1 = embed(cube.b, {eb, ed});
  cube.a_v2 = embed(cube.a, {ea2, ed});
  cube.c_v2 = embed(cube.c, {ec, ed});
  cube.b_v3 = embed(cube.b, {eb, ed});
  cube.c_v3 = embed(cube.c, {ec, ed});
  const Amalgam3Result am = amalgamate3(cube);
  rep.check("3-amalgamation of the R^3 cube satisfies its postconditions", amalgam3_violations(cube, am).empty());
  const Vector wa = am.v1.apply(ea);
  const Vector wv = scale(rat(2), sub(add(am.v3.apply(eb), am.v3.apply(ec)), am.v3.apply(ed)));
  const Scalar amalgam_value = am.space.form(sub(wa, wv), sub(wa, wv));
  rep.values.push_back({"amalgam [a*-v, a*-v]", amalgam_value.format()});
  rep.check("in the 3-amalgam, [a*-v, a*-v] = -3", amalgam_value == rat(-3), amalgam_value.format());
  return rep;
}

// --------------------------------------------------------------- hausdorff

namespace {

GramSystem with_row(const GramSystem& s, std::size_t unknown, const Scalar& value) {
  GramSystem out = s;
  std::vector<Vector> rows = s.matrix.row_list();
  Vector extra = zero_vector(s.field, s.n * s.n);
  extra[unknown] = Scalar::one(s.field);
  rows.push_back(std::move(extra));
  out.matrix = Matrix::from_rows(s.field, s.n * s.n, rows);
  out.rhs.push_back(value);
  return out;
}

BilinearSpace model_of(const GramSystem& s, const AffineSolutionSet& sol) {
  Matrix g(s.field, s.n, s.n);
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t j = 0; j < s.n; ++j) g(i, j) = sol.particular[s.unknown(i, j)];
  return BilinearSpace::from_gram(s.field, s.flavor, std::move(g));
}

}  // namespace

DemoReport demo_hausdorff_failure(const FieldSpec& field, Flavor flavor) {
  if (field.is_finite()) {
    throw Error(ErrorKind::FiniteField, "the Hausdorff failure argument needs an infinite field");
  }
  DemoReport rep;
  rep.name = "hausdorff";
  const Formula psi = parse_formula("E z. [x,z]=1 & [y,z]=0", field);
  const RegularFormula r = to_regular_disjunction(psi).front();
  rep.artifacts.push_back({"partial configuration psi(x, y)", print_formula(psi) + "\n"});
  const ForcedValue fv = forced_bilinear_value(r, flavor);
  rep.check("psi leaves [x,y] unforced", fv.kind == ForcedValue::Kind::NotForced, fv.format());

  const GramSystem s = compile_regular(r, flavor);
  const Scalar zero = Scalar::zero(field), one = Scalar::one(field);
  const Tuple ab = {unit_vector(field, 3, 0), unit_vector(field, 3, 1)};
  const Vector zvec = unit_vector(field, 3, 2);
  BilinearSpace models[2];
  const Scalar targets[2] = {zero, one};
  for (int k = 0; k < 2; ++k) {
    const GramSystem sk = with_row(s, s.unknown(0, 1), targets[k]);
    const AffineSolutionSet sol = solve(sk.matrix, sk.rhs);
    const std::string label = "N" + std::to_string(k + 1);
    if (!sol.consistent) {
      rep.check(label + " exists", false);
      return rep;
    }
    models[k] = model_of(sk, sol);
    rep.artifacts.push_back({label, models[k].to_file()});
    const Scalar value = models[k].form(ab[0], ab[1]);
    rep.values.push_back({label + " [a,b]", value.format()});
    const bool holds = eval(psi.body(), models[k], {{"x", ab[0]}, {"y", ab[1]}, {"z", zvec}});
    rep.check(label + " satisfies psi(a, b) with [a,b] = " + targets[k].format(), holds && value == targets[k],
              value.format());
  }
  const bool differ = !same_type(models[0], ab, models[1], ab);
  bool refused = false;
  try {
    witness_amalgam(models[0], ab, models[1], ab);
  } catch (const Error& e) {
    refused = e.kind() == ErrorKind::TypeMismatch;
  }
  rep.check("(a, b) has different types in N1 and N2", differ && refused);

  // g(a) = h(a), g(b) = h(b) force the single unknown w = [g(a), g(b)] to be both values
  const Matrix m = Matrix::from_rows(field, 1, {Vector{one}, Vector{one}});
  const AffineSolutionSet clash = solve(m, {models[0].form(ab[0], ab[1]), models[1].form(ab[0], ab[1])});
  rep.values.push_back({"clash", "(" + models[0].form(ab[0], ab[1]).format() + ", " +
                                     models[1].form(ab[0], ab[1]).format() + ")"});
  rep.check("no amalgam of N1 and N2 over (a, b): w = 0 and w = 1 is inconsistent", !clash.consistent, "(0, 1)");
  return rep;
}

// ------------------------------------------------------------- qe refuter

namespace {

bool linear_part_viable(const RegularFormula& r) {
  for (const auto& atom : r.atoms) {
    const bool zero = (atom.lhs() - atom.rhs()).is_zero();
    if (atom.kind() == FormulaKind::LinEq && !zero) return false;
    if (atom.kind() == FormulaKind::LinNeq && zero) return false;
  }
  return true;
}

bool satisfies(const GramSystem& s, const Matrix& g) {
  Vector u(s.n * s.n, Scalar::zero(s.field));
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t j = 0; j < s.n; ++j) u[s.unknown(i, j)] = g(i, j);
  return s.matrix.apply(u) == s.rhs;
}

std::size_t rank_of(const FieldSpec& field, std::size_t dim, const Tuple& t) { return rank_of_vectors(field, dim, t); }

}  // namespace

DemoReport demo_qe_refuter(const Formula& psi, std::size_t n, const FieldSpec& field, Flavor flavor,
                           std::size_t retries, std::uint64_t seed) {
  if (field.is_finite()) throw Error(ErrorKind::FiniteField, "the refutation targets infinite fields");
  if (n < 2) throw Error(ErrorKind::PreconditionFailed, "the refutation needs n >= 2");
  if (!psi.is_quantifier_free()) throw Error(ErrorKind::NotQuantifierFree, "psi must be quantifier-free");
  const auto vars = standard_variables(n);
  for (const auto& v : psi.free_variables())
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
      throw Error(ErrorKind::InvalidArgument, "free variable '" + v + "' is not among x1..x" + std::to_string(n));
    }

  DemoReport rep;
  rep.name = "qe-refuter";
  rep.artifacts.push_back({"psi", print_formula(psi) + "\n"});

  // flavor-only solution space, to recognize disjuncts whose A_l is everything
  std::vector<Vector> frows;
  Vector frhs;
  append_flavor_rows(field, flavor, n, frows, frhs);
  const std::size_t flavor_dim = solve(Matrix::from_rows(field, n * n, frows), frhs).basis.size();

  std::vector<GramSystem> proper;
  const RegularFormula* full = nullptr;
  const auto disjuncts = to_regular_disjunction(psi);
  for (const auto& d : disjuncts) {
    if (!linear_part_viable(d)) continue;
    RegularFormula bil;
    bil.field = field;
    bil.free = vars;
    for (const auto& atom : d.atoms)
      if (atom.kind() == FormulaKind::BilEq) bil.atoms.push_back(atom);
    GramSystem s = compile_regular(bil, flavor);
    const AffineSolutionSet sol = solve(s.matrix, s.rhs);
    if (!sol.consistent) continue;
    if (sol.basis.size() == flavor_dim) {
      full = &d;
      break;
    }
    proper.push_back(std::move(s));
  }

  if (full) {
    rep.values.push_back({"case", "1 (some A_l is the whole space)"});
    std::mt19937_64 rng(seed);
    const BilinearSpace space = BilinearSpace::zero_form(field, flavor, n - 1);
    for (std::size_t round = 0; round < retries; ++round) {
      const long range = 1 + static_cast<long>(round / 10);
      std::uniform_int_distribution<long> dist(-range, range);
      Tuple tuple;
      Assignment a;
      for (std::size_t i = 0; i < n; ++i) {
        Vector v;
        for (std::size_t j = 0; j + 1 < n; ++j) v.push_back(Scalar::from_int(field, dist(rng)));
        a[vars[i]] = v;
        tuple.push_back(std::move(v));
      }
      if (!eval(psi, space, a)) continue;
      rep.artifacts.push_back({"space", space.to_file()});
      rep.artifacts.push_back({"dependent tuple", format_tuple(tuple) + "\n"});
      const std::size_t rk = rank_of(field, n - 1, tuple);
      rep.values.push_back({"rank", std::to_string(rk)});
      rep.values.push_back({"rounds", std::to_string(round + 1)});
      rep.check("psi holds on the tuple", true);
      rep.check("the tuple is linearly dependent (theta_n fails)", rk < n, std::to_string(rk));
      return rep;
    }
    throw Error(ErrorKind::SearchExhausted,
                "no dependent tuple satisfying psi found in " + std::to_string(retries) + " random rounds");
  }

  rep.values.push_back({"case", "2 (every A_l is proper)"});
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (flavor == Flavor::Plain || (flavor == Flavor::Symmetric && i <= j) || (flavor == Flavor::Alternating && i < j))
        cells.emplace_back(i, j);
  const std::size_t top = proper.size();
  std::vector<std::size_t> digit(cells.size(), 0);
  std::size_t visited = 0;
  while (true) {
    ++visited;
    Matrix g(field, n, n);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto [i, j] = cells[c];
      const Scalar x = Scalar::from_int(field, static_cast<std::int64_t>(digit[c]));
      g(i, j) = x;
      if (i != j && flavor == Flavor::Symmetric) g(j, i) = x;
      if (i != j && flavor == Flavor::Alternating) g(j, i) = -x;
    }
    bool outside = true;
    for (const auto& s : proper) outside = outside && !satisfies(s, g);
    if (outside) {
      const BilinearSpace space = BilinearSpace::from_gram(field, flavor, g);
      Tuple tuple;
      Assignment a;
      for (std::size_t i = 0; i < n; ++i) {
        tuple.push_back(unit_vector(field, n, i));
        a[vars[i]] = tuple.back();
      }
      rep.artifacts.push_back({"space", space.to_file()});
      rep.artifacts.push_back({"independent tuple", format_tuple(tuple) + "\n"});
      rep.values.push_back({"grid points visited", std::to_string(visited)});
      rep.check("psi fails on the tuple", !eval(psi, space, a));
      const std::size_t rk = rank_of(field, n, tuple);
      rep.check("the tuple is linearly independent (theta_n holds)", rk == n, std::to_string(rk));
      return rep;
    }
    std::size_t c = 0;
    while (c < digit.size() && ++digit[c] == top + 1) digit[c++] = 0;
    if (c == digit.size()) break;
  }
  throw Error(ErrorKind::SearchExhausted, "grid search left no point outside the affine subspaces");
}

}  // namespace bilin
