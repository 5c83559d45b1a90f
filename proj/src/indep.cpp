#include "bilin/indep.hpp"

#include <array>
#include <map>
#include <optional>

namespace bilin {

namespace {

Tuple concat(const Tuple& x, const Tuple& y) {
  Tuple out = x;
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

// Greedily extends `start` by vectors from `candidates` that increase the rank.
Tuple greedy_extend(const FieldSpec& field, std::size_t n, const Tuple& start, const Tuple& candidates) {
  Tuple current = start, added;
  std::size_t r = rank_of_vectors(field, n, current);
  for (const auto& v : candidates) {
    current.push_back(v);
    const std::size_t r2 = rank_of_vectors(field, n, current);
    if (r2 > r) {
      added.push_back(v);
      r = r2;
    } else {
      current.pop_back();
    }
  }
  return added;
}

Tuple columns(const BilMap& f) { return f.matrix.column_list(); }

Tuple standard_basis(const FieldSpec& field, std::size_t n) {
  Tuple out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(unit_vector(field, n, i));
  return out;
}

void require_mono(const BilMap& f, const std::string& name) {
  auto check = is_monomorphism(f);
  if (!check) throw Error(ErrorKind::NotMonomorphism, name + " is not a monomorphism: " + check.violation);
}

}  // namespace

// ------------------------------------------------------------- independence

bool is_independent(const FieldSpec& field, std::size_t n, const Tuple& a, const Tuple& b, const Tuple& c,
                    IndepMethod method) {
  if (method == IndepMethod::SpanIntersection) {
    const Subspace ac = Subspace::span(field, n, concat(a, c));
    const Subspace bc = Subspace::span(field, n, concat(b, c));
    return ac.intersect(bc) == Subspace::span(field, n, c);
  }
  const Tuple c0 = greedy_extend(field, n, {}, c);
  const Tuple a0 = greedy_extend(field, n, c0, a);
  const Tuple b0 = greedy_extend(field, n, c0, b);
  const Tuple all = concat(concat(a0, b0), c0);
  return rank_of_vectors(field, n, all) == all.size();
}

bool is_independent(const BilinearSpace& ambient, const Tuple& a, const Tuple& b, const Tuple& c,
                    IndepMethod method) {
  return is_independent(ambient.field(), ambient.dim(), a, b, c, method);
}

Tuple local_base(const BilinearSpace& ambient, const Tuple& a, const Tuple& b) {
  const FieldSpec& field = ambient.field();
  const std::size_t n = ambient.dim();
  const Subspace meet = Subspace::span(field, n, a).intersect(Subspace::span(field, n, b));
  Tuple base = meet.basis();
  if (!is_independent(ambient, a, b, base)) {
    throw Error(ErrorKind::PreconditionFailed, "local base failed to witness independence");
  }
  return base;
}

// ---------------------------------------------------- independent amalgam

AmalgamResult amalgamate_independent(const BilMap& f1, const BilMap& f2) {
  if (!(f1.source == f2.source)) throw Error(ErrorKind::DimensionMismatch, "amalgamation needs a common source");
  if (!(f1.target.field() == f2.target.field())) throw Error(ErrorKind::FieldMismatch, "targets over different fields");
  if (f1.target.flavor() != f2.target.flavor()) throw Error(ErrorKind::FlavorMismatch, "targets of different flavors");
  require_mono(f1, "f1");
  require_mono(f2, "f2");

  const BilinearSpace& w1 = f1.target;
  const BilinearSpace& w2 = f2.target;
  const FieldSpec& field = w1.field();
  const std::size_t k = f1.source.dim(), n1 = w1.dim(), n2 = w2.dim();
  const Tuple img1 = columns(f1), img2 = columns(f2);
  const auto comp1 = complement_indices(field, n1, img1);
  const auto comp2 = complement_indices(field, n2, img2);
  const std::size_t t = comp2.size();
  const std::size_t n = n1 + t;

  // basis (f(V), complement) of each W_i
  auto adapted_basis = [&](const Tuple& img, const std::vector<std::size_t>& comp, std::size_t dim) {
    Tuple basis = img;
    for (auto i : comp) basis.push_back(unit_vector(field, dim, i));
    return basis;
  };
  const Tuple basis1 = adapted_basis(img1, comp1, n1);
  const Tuple basis2 = adapted_basis(img2, comp2, n2);

  Matrix g(field, n, n);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j) g(i, j) = w1.gram()(i, j);
  for (std::size_t s = 0; s < t; ++s)
    for (std::size_t u = 0; u < t; ++u) g(n1 + s, n1 + u) = w2.gram()(comp2[s], comp2[u]);
  for (std::size_t i = 0; i < n1; ++i) {
    const Vector alpha = *coordinates_in(field, n1, basis1, unit_vector(field, n1, i));
    // only the f1(V)-part of e_i pairs with the complement of W2
    Vector through_v = zero_vector(field, n2);
    for (std::size_t a = 0; a < k; ++a)
      if (!alpha[a].is_zero()) through_v = add(through_v, scale(alpha[a], img2[a]));
    for (std::size_t s = 0; s < t; ++s) {
      const Vector ec = unit_vector(field, n2, comp2[s]);
      g(i, n1 + s) = w2.form(through_v, ec);
      g(n1 + s, i) = w2.form(ec, through_v);
    }
  }
  BilinearSpace u = BilinearSpace::from_gram(field, w1.flavor(), std::move(g));

  Matrix m1(field, n, n1);
  for (std::size_t i = 0; i < n1; ++i) m1(i, i) = Scalar::one(field);
  Matrix m2(field, n, n2);
  for (std::size_t j = 0; j < n2; ++j) {
    const Vector coords = *coordinates_in(field, n2, basis2, unit_vector(field, n2, j));
    Vector image = zero_vector(field, n);
    for (std::size_t a = 0; a < k; ++a) {
      if (coords[a].is_zero()) continue;
      for (std::size_t r = 0; r < n1; ++r) image[r] += coords[a] * img1[a][r];
    }
    for (std::size_t s = 0; s < t; ++s) image[n1 + s] = coords[k + s];
    for (std::size_t r = 0; r < n; ++r) m2(r, j) = image[r];
  }
  return {u, BilMap{w1, u, std::move(m1)}, BilMap{w2, u, std::move(m2)}};
}

// ---------------------------------------------------------------- extension

ExtensionResult extend_independently(const BilinearSpace& space, const Tuple& a, const Tuple& b, const Tuple& c) {
  const FieldSpec& field = space.field();
  const std::size_t n = space.dim();
  if (!is_independent(space, a, b, c)) {
    throw Error(ErrorKind::PreconditionFailed, "extension requires a to be independent from B over C");
  }
  const Subspace c_span = Subspace::span(field, n, c);
  bool inside_c = true;
  for (const auto& v : a) inside_c = inside_c && c_span.contains(v);
  if (inside_c) return {space, identity_map(space), a};

  const Tuple s = greedy_extend(field, n, {}, concat(b, c));
  const Tuple ext = greedy_extend(field, n, s, a);
  const Tuple t_basis = concat(s, ext);
  const BilinearSpace s_space = space.restrict_to(s);
  const BilinearSpace t_space = space.restrict_to(t_basis);

  BilMap into_v{s_space, space, Matrix::from_columns(field, n, s)};
  Matrix first(field, t_basis.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) first(i, i) = Scalar::one(field);
  BilMap into_t{s_space, t_space, std::move(first)};

  AmalgamResult am = amalgamate_independent(into_v, into_t);
  Tuple a_prime;
  for (const auto& v : a) {
    const Vector coords = *coordinates_in(field, n, t_basis, v);
    a_prime.push_back(am.g2.apply(coords));
  }
  return {am.space, am.g1, a_prime};
}

// -------------------------------------------------------- 3-amalgamation

namespace {

struct Arrow {
  const BilMap* map;
  const BilinearSpace* source;
  const BilinearSpace* target;
  const char* name;
};

std::vector<Arrow> arrows(const Cube& q) {
  return {{&q.d_a, &q.d, &q.a, "D->A"},    {&q.d_b, &q.d, &q.b, "D->B"},    {&q.d_c, &q.d, &q.c, "D->C"},
          {&q.a_v1, &q.a, &q.v1, "A->V1"}, {&q.b_v1, &q.b, &q.v1, "B->V1"}, {&q.a_v2, &q.a, &q.v2, "A->V2"},
          {&q.c_v2, &q.c, &q.v2, "C->V2"}, {&q.b_v3, &q.b, &q.v3, "B->V3"}, {&q.c_v3, &q.c, &q.v3, "C->V3"}};
}

}  // namespace

std::vector<std::string> cube_input_violations(const Cube& q) {
  std::vector<std::string> out;
  const BilinearSpace* spaces[] = {&q.d, &q.a, &q.b, &q.c, &q.v1, &q.v2, &q.v3};
  for (const auto* s : spaces) {
    if (!(s->field() == q.d.field())) out.push_back("spaces over different fields");
    if (s->flavor() != q.d.flavor()) out.push_back("spaces of different flavors");
  }
  if (!out.empty()) return out;
  for (const auto& arrow : arrows(q)) {
    if (!(arrow.map->source == *arrow.source) || !(arrow.map->target == *arrow.target)) {
      out.push_back(std::string(arrow.name) + " has the wrong source or target");
      continue;
    }
    auto check = is_monomorphism(*arrow.map);
    if (!check) out.push_back(std::string(arrow.name) + " is not a monomorphism: " + check.violation);
  }
  if (!out.empty()) return out;
  if (!(compose(q.a_v1, q.d_a).matrix == compose(q.b_v1, q.d_b).matrix)) out.push_back("D->A->V1 != D->B->V1");
  if (!(compose(q.a_v2, q.d_a).matrix == compose(q.c_v2, q.d_c).matrix)) out.push_back("D->A->V2 != D->C->V2");
  if (!(compose(q.b_v3, q.d_b).matrix == compose(q.c_v3, q.d_c).matrix)) out.push_back("D->B->V3 != D->C->V3");
  if (!out.empty()) return out;
  const Tuple d1 = compose(q.a_v1, q.d_a).matrix.column_list();
  const Tuple d2 = compose(q.a_v2, q.d_a).matrix.column_list();
  const Tuple d3 = compose(q.b_v3, q.d_b).matrix.column_list();
  if (!is_independent(q.v1, columns(q.a_v1), columns(q.b_v1), d1)) out.push_back("A is not independent from B over D in V1");
  if (!is_independent(q.v3, columns(q.b_v3), columns(q.c_v3), d3)) out.push_back("B is not independent from C over D in V3");
  if (!is_independent(q.v2, columns(q.c_v2), columns(q.a_v2), d2)) out.push_back("C is not independent from A over D in V2");
  return out;
}

Amalgam3Result amalgamate3(const Cube& q) {
  const auto problems = cube_input_violations(q);
  if (!problems.empty()) {
    const std::string& first = problems.front();
    ErrorKind kind = ErrorKind::InvalidArgument;
    if (first.find("!=") != std::string::npos) kind = ErrorKind::DiagramNotCommuting;
    else if (first.find("not independent") != std::string::npos) kind = ErrorKind::IndependenceViolated;
    else if (first.find("monomorphism") != std::string::npos) kind = ErrorKind::NotMonomorphism;
    else if (first.find("flavor") != std::string::npos) kind = ErrorKind::FlavorMismatch;
    else if (first.find("field") != std::string::npos) kind = ErrorKind::FieldMismatch;
    throw Error(kind, first);
  }
  const FieldSpec& field = q.d.field();
  const std::size_t nd = q.d.dim();

  const auto a_comp = complement_indices(field, q.a.dim(), columns(q.d_a));
  const auto b_comp = complement_indices(field, q.b.dim(), columns(q.d_b));
  const auto c_comp = complement_indices(field, q.c.dim(), columns(q.d_c));
  auto units = [&](std::size_t dim, const std::vector<std::size_t>& idx) {
    Tuple out;
    for (auto i : idx) out.push_back(unit_vector(field, dim, i));
    return out;
  };
  const Tuple a_extra = units(q.a.dim(), a_comp);
  const Tuple b_extra = units(q.b.dim(), b_comp);
  const Tuple c_extra = units(q.c.dim(), c_comp);
  const Tuple d_std = standard_basis(field, nd);

  // Representatives in V_i of each W basis element; nullopt where it lies outside V_i.
  using Rep = std::array<std::optional<Vector>, 3>;
  std::vector<Rep> reps;
  for (const auto& e : d_std)
    reps.push_back({q.a_v1.apply(q.d_a.apply(e)), q.a_v2.apply(q.d_a.apply(e)), q.b_v3.apply(q.d_b.apply(e))});
  for (const auto& e : a_extra) reps.push_back({q.a_v1.apply(e), q.a_v2.apply(e), std::nullopt});
  for (const auto& e : b_extra) reps.push_back({q.b_v1.apply(e), std::nullopt, q.b_v3.apply(e)});
  for (const auto& e : c_extra) reps.push_back({std::nullopt, q.c_v2.apply(e), q.c_v3.apply(e)});

  const BilinearSpace* vs[3] = {&q.v1, &q.v2, &q.v3};
  for (int i = 0; i < 3; ++i) {
    Tuple inside;
    for (const auto& rep : reps)
      if (rep[i]) inside.push_back(*rep[i]);
    for (auto idx : complement_indices(field, vs[i]->dim(), inside)) {
      Rep rep;
      rep[i] = unit_vector(field, vs[i]->dim(), idx);
      reps.push_back(rep);
    }
  }

  const std::size_t n = reps.size();
  Matrix g(field, n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t s = 0; s < n; ++s) {
      std::optional<Scalar> value;
      for (int i = 0; i < 3; ++i) {
        if (!reps[r][i] || !reps[s][i]) continue;
        const Scalar v = vs[i]->form(*reps[r][i], *reps[s][i]);
        if (value && !(*value == v)) throw Error(ErrorKind::DiagramNotCommuting, "forced products disagree");
        value = v;
      }
      if (value) g(r, s) = *value;
    }
  BilinearSpace w = BilinearSpace::from_gram(field, q.d.flavor(), std::move(g));

  auto embed = [&](int i) {
    const BilinearSpace& v = *vs[i];
    Tuple basis;
    std::vector<std::size_t> positions;
    for (std::size_t r = 0; r < n; ++r)
      if (reps[r][i]) {
        basis.push_back(*reps[r][i]);
        positions.push_back(r);
      }
    Matrix m(field, n, v.dim());
    for (std::size_t j = 0; j < v.dim(); ++j) {
      const auto coords = coordinates_in(field, v.dim(), basis, unit_vector(field, v.dim(), j));
      if (!coords) throw Error(ErrorKind::IndependenceViolated, "cube data does not span V" + std::to_string(i + 1));
      for (std::size_t t = 0; t < positions.size(); ++t) m(positions[t], j) = (*coords)[t];
    }
    return BilMap{v, w, std::move(m)};
  };
  Amalgam3Result result{w, embed(0), embed(1), embed(2)};
  return result;
}

std::vector<std::string> amalgam3_violations(const Cube& q, const Amalgam3Result& r) {
  std::vector<std::string> out;
  const std::pair<const BilMap*, const char*> maps[] = {{&r.v1, "V1->W"}, {&r.v2, "V2->W"}, {&r.v3, "V3->W"}};
  for (const auto& [m, name] : maps) {
    auto check = is_monomorphism(*m);
    if (!check) out.push_back(std::string(name) + " is not a monomorphism: " + check.violation);
    if (m->target.flavor() != q.d.flavor()) out.push_back(std::string(name) + " changes flavor");
  }
  if (!out.empty()) return out;
  const BilMap wa = compose(r.v1, q.a_v1), wb = compose(r.v1, q.b_v1), wc = compose(r.v2, q.c_v2);
  if (!(wa.matrix == compose(r.v2, q.a_v2).matrix)) out.push_back("A->V1->W != A->V2->W");
  if (!(wb.matrix == compose(r.v3, q.b_v3).matrix)) out.push_back("B->V1->W != B->V3->W");
  if (!(wc.matrix == compose(r.v3, q.c_v3).matrix)) out.push_back("C->V2->W != C->V3->W");
  const Tuple d = compose(wa, q.d_a).matrix.column_list();
  const BilinearSpace& w = r.space;
  if (!is_independent(w, columns(wa), columns(r.v3), d)) out.push_back("A is not independent from V3 over D in W");
  if (!is_independent(w, columns(wb), columns(r.v2), d)) out.push_back("B is not independent from V2 over D in W");
  if (!is_independent(w, columns(wc), columns(r.v1), d)) out.push_back("C is not independent from V1 over D in W");
  if (!is_independent(w, columns(wa), columns(wb), d)) out.push_back("A is not independent from B over D in W");
  return out;
}

// ------------------------------------------------------------- cube files

std::string Cube::to_file() const {
  std::string out;
  const std::pair<const char*, const BilinearSpace*> spaces[] = {{"D", &d},   {"A", &a},   {"B", &b},  {"C", &c},
                                                                  {"V1", &v1}, {"V2", &v2}, {"V3", &v3}};
  for (const auto& [name, s] : spaces) out += std::string("space ") + name + "\n" + s->to_file();
  const std::pair<const char*, const BilMap*> maps[] = {{"D A", &d_a},   {"D B", &d_b},   {"D C", &d_c},
                                                         {"A V1", &a_v1}, {"B V1", &b_v1}, {"A V2", &a_v2},
                                                         {"C V2", &c_v2}, {"B V3", &b_v3}, {"C V3", &c_v3}};
  for (const auto& [name, m] : maps) out += std::string("map ") + name + "\n" + m->matrix.format();
  return out;
}

Cube Cube::parse_file(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::map<std::string, BilinearSpace> spaces;
  std::map<std::string, Matrix> matrices;
  std::size_t pos = 0;
  while (pos < lines.size()) {
    const std::string& line = lines[pos];
    if (line.empty()) {
      ++pos;
      continue;
    }
    if (line.starts_with("space ")) {
      const std::string name = line.substr(6);
      ++pos;
      spaces[name] = detail::parse_space_lines(lines, pos);
    } else if (line.starts_with("map ")) {
      const std::string rest = line.substr(4);
      const auto sp = rest.find(' ');
      if (sp == std::string::npos) throw ParseError(pos + 1, "expected 'map <source> <target>'");
      const std::string src = rest.substr(0, sp), dst = rest.substr(sp + 1);
      if (!spaces.count(src) || !spaces.count(dst)) {
        throw ParseError(pos + 1, "map " + rest + " refers to a space not yet declared");
      }
      ++pos;
      matrices[src + " " + dst] =
          detail::parse_matrix_lines(spaces[src].field(), lines, pos, spaces[dst].dim(), spaces[src].dim());
    } else {
      throw ParseError(pos + 1, "expected 'space <name>' or 'map <source> <target>', got '" + line + "'");
    }
  }
  auto space = [&](const char* name) -> const BilinearSpace& {
    auto it = spaces.find(name);
    if (it == spaces.end()) throw ParseError(0, std::string("cube file lacks space ") + name);
    return it->second;
  };
  auto map = [&](const char* src, const char* dst) {
    auto it = matrices.find(std::string(src) + " " + dst);
    if (it == matrices.end()) throw ParseError(0, std::string("cube file lacks map ") + src + " " + dst);
    return BilMap{space(src), space(dst), it->second};
  };
  Cube q;
  q.d = space("D");
  q.a = space("A");
  q.b = space("B");
  q.c = space("C");
  q.v1 = space("V1");
  q.v2 = space("V2");
  q.v3 = space("V3");
  q.d_a = map("D", "A");
  q.d_b = map("D", "B");
  q.d_c = map("D", "C");
  q.a_v1 = map("A", "V1");
  q.b_v1 = map("B", "V1");
  q.a_v2 = map("A", "V2");
  q.c_v2 = map("C", "V2");
  q.b_v3 = map("B", "V3");
  q.c_v3 = map("C", "V3");
  return q;
}

// ---------------------------------------------------------- stationarity

StationarityData stationarity_counterexample(const BilinearSpace& c) {
  const FieldSpec& field = c.field();
  const std::size_t k = c.dim(), n = k + 3;
  Matrix g(field, n, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) g(i, j) = c.gram()(i, j);
  const std::size_t ia = k, iap = k + 1, ib = k + 2;
  const Scalar one = Scalar::one(field);
  g(iap, ib) = one;
  g(ib, iap) = c.flavor() == Flavor::Alternating ? -one : one;
  StationarityData out;
  out.space = BilinearSpace::from_gram(field, c.flavor(), std::move(g));
  for (std::size_t i = 0; i < k; ++i) out.c_basis.push_back(unit_vector(field, n, i));
  out.a = unit_vector(field, n, ia);
  out.a_prime = unit_vector(field, n, iap);
  out.b = unit_vector(field, n, ib);
  return out;
}

}  // namespace bilin
