#pragma once

// Property checks shared by the unit tests and the acceptance runner.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "testkit.hpp"

namespace testkit {

inline Tuple cat(const Tuple& a, const Tuple& b) {
  Tuple out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// Random elements of span(vs).
inline Tuple random_subfamily(const FieldSpec& f, std::size_t n, const Tuple& vs, Rng& rng) {
  Tuple out;
  std::size_t k = uniform(rng, 0, vs.size());
  for (std::size_t i = 0; i < k; ++i) out.push_back(combine(f, n, random_vector(f, vs.size(), rng), vs));
  return out;
}

/// Random tuple of `k` vectors, biased towards sharing directions with `near`.
inline Tuple random_family(const FieldSpec& f, std::size_t n, std::size_t k, const Tuple& near, Rng& rng) {
  Tuple out;
  for (std::size_t i = 0; i < k; ++i) {
    if (!near.empty() && coin(rng, 0.4))
      out.push_back(combine(f, n, random_vector(f, near.size(), rng), near));
    else if (coin(rng, 0.5))
      out.push_back(unit_vector(f, n, uniform(rng, 0, n - 1)));
    else
      out.push_back(random_vector(f, n, rng));
  }
  return out;
}

/// Span-level oracle: <AC> ∩ <BC> = <C>, by dimension count.
inline bool indep_by_dims(const FieldSpec& f, std::size_t n, const Tuple& a, const Tuple& b, const Tuple& c) {
  Subspace ac = Subspace::span(f, n, cat(a, c)), bc = Subspace::span(f, n, cat(b, c));
  std::size_t meet = ac.dim() + bc.dim() - Subspace::span(f, n, cat(cat(a, b), c)).dim();
  return meet == Subspace::span(f, n, c).dim();
}

struct AxiomTally {
  std::map<std::string, std::size_t> checked, violated;
  std::size_t queries = 0, independent = 0;

  void record(const std::string& axiom, bool ok) {
    ++checked[axiom];
    if (!ok) ++violated[axiom];
  }
  std::size_t violations() const {
    std::size_t n = 0;
    for (const auto& [_, v] : violated) n += v;
    return n;
  }
};

/// One random (A, B, C) query against every axiom of independence.
inline void independence_axioms_once(const FieldSpec& f, Flavor flavor, std::size_t max_dim, Rng& rng,
                                     AxiomTally& tally) {
  auto ind = [&](std::size_t n, const Tuple& a, const Tuple& b, const Tuple& c) {
    return is_independent(f, n, a, b, c, IndepMethod::SpanIntersection);
  };
  std::size_t n = uniform(rng, 1, max_dim);
  BilinearSpace v = random_space(f, flavor, n, rng);
  Tuple c = random_family(f, n, uniform(rng, 0, 2), {}, rng);
  Tuple a = random_family(f, n, uniform(rng, 0, 3), c, rng);
  Tuple b = random_family(f, n, uniform(rng, 0, 3), cat(a, c), rng);
  Tuple d = random_family(f, n, uniform(rng, 0, 2), cat(b, c), rng);

  bool abc = ind(n, a, b, c);
  ++tally.queries;
  tally.independent += abc;

  bool other = is_independent(v, a, b, c, IndepMethod::BasisExtension);
  tally.record("agreement", abc == other);
  tally.record("oracle", abc == indep_by_dims(f, n, a, b, c));
  tally.record("symmetry", abc == ind(n, b, a, c));
  tally.record("existence", ind(n, a, c, c));

  BilMap emb = random_embedding(v, uniform(rng, 0, 2), rng);
  tally.record("invariance", abc == is_independent(emb.target, emb.apply(a), emb.apply(b), emb.apply(c)));

  if (abc) {
    Tuple a2 = random_subfamily(f, n, a, rng), b2 = random_subfamily(f, n, b, rng);
    tally.record("monotonicity", ind(n, a2, b2, c));
  }
  // A ⫝_C BD implies A ⫝_CD B.
  if (ind(n, a, cat(b, d), c)) tally.record("base-monotonicity", ind(n, a, b, cat(c, d)));
  // A ⫝_C B and A ⫝_CB D imply A ⫝_C BD.
  if (abc && ind(n, a, d, cat(c, b))) tally.record("transitivity", ind(n, a, cat(b, d), c));
  // Adding vectors spanned by A does not change the verdict.
  tally.record("finite-character", abc == ind(n, cat(a, random_subfamily(f, n, a, rng)), b, c));

  Tuple base = local_base(v, a, b);
  bool lc = ind(n, a, b, base) && Subspace::span(f, n, b).contains(Subspace::span(f, n, base)) &&
            base.size() <= Subspace::span(f, n, a).dim();
  tally.record("local-character", lc);
}

// ----------------------------------------------------- amalgam postconditions

inline bool same_map(const BilMap& x, const BilMap& y) { return x.matrix == y.matrix; }

/// Independent check: full column rank and M^T G M = G_source.
inline bool check_mono(const BilMap& m) {
  if (!(m.source.flavor() == m.target.flavor())) return false;
  if (m.matrix.rows() != m.target.dim() || m.matrix.cols() != m.source.dim()) return false;
  if (rank(m.matrix) != m.source.dim()) return false;
  return m.matrix.transpose() * m.target.gram() * m.matrix == m.source.gram();
}

inline Tuple image_basis(const BilMap& m) { return m.matrix.column_list(); }

/// Empty iff the two-way amalgam satisfies every stated postcondition.
inline std::vector<std::string> amalgam_failures(const BilMap& f1, const BilMap& f2, const AmalgamResult& r) {
  std::vector<std::string> out;
  const FieldSpec& f = r.space.field();
  const std::size_t n = r.space.dim();
  if (!check_mono(r.g1)) out.push_back("g1 is not a monomorphism");
  if (!check_mono(r.g2)) out.push_back("g2 is not a monomorphism");
  if (!(r.space.flavor() == f1.source.flavor())) out.push_back("flavor changed");
  if (n != f1.target.dim() + f2.target.dim() - f1.source.dim()) out.push_back("wrong dimension");
  if (!(r.g1.matrix * f1.matrix == r.g2.matrix * f2.matrix)) out.push_back("square does not commute");
  Tuple v_img = (r.g1.matrix * f1.matrix).column_list();
  if (!indep_by_dims(f, n, image_basis(r.g1), image_basis(r.g2), v_img)) out.push_back("images not independent over V");
  return out;
}

/// Independent check of every 3-amalgamation postcondition.
inline std::vector<std::string> amalgam3_failures(const Cube& c, const Amalgam3Result& r) {
  std::vector<std::string> out;
  const FieldSpec& f = r.space.field();
  const std::size_t n = r.space.dim();
  for (const auto* m : {&r.v1, &r.v2, &r.v3})
    if (!check_mono(*m)) out.push_back("output arrow is not a monomorphism");
  if (!(r.space.flavor() == c.d.flavor())) out.push_back("flavor changed");
  auto eq = [&](const Matrix& x, const Matrix& y, const char* what) {
    if (!(x == y)) out.push_back(std::string("does not commute: ") + what);
  };
  eq(r.v1.matrix * c.a_v1.matrix, r.v2.matrix * c.a_v2.matrix, "A");
  eq(r.v1.matrix * c.b_v1.matrix, r.v3.matrix * c.b_v3.matrix, "B");
  eq(r.v2.matrix * c.c_v2.matrix, r.v3.matrix * c.c_v3.matrix, "C");
  Tuple dw = (r.v1.matrix * c.a_v1.matrix * c.d_a.matrix).column_list();
  Tuple aw = (r.v1.matrix * c.a_v1.matrix).column_list();
  Tuple bw = (r.v1.matrix * c.b_v1.matrix).column_list();
  Tuple cw = (r.v2.matrix * c.c_v2.matrix).column_list();
  if (!indep_by_dims(f, n, aw, image_basis(r.v3), dw)) out.push_back("A not independent from V3 over D");
  if (!indep_by_dims(f, n, bw, image_basis(r.v2), dw)) out.push_back("B not independent from V2 over D");
  if (!indep_by_dims(f, n, cw, image_basis(r.v1), dw)) out.push_back("C not independent from V1 over D");
  return out;
}

/// A random valid two-way amalgamation problem over `v`.
inline std::pair<BilMap, BilMap> random_span(const FieldSpec& f, Flavor flavor, Rng& rng) {
  BilinearSpace v = random_space(f, flavor, uniform(rng, 0, 3), rng);
  return {random_embedding(v, uniform(rng, 0, 2), rng), random_embedding(v, uniform(rng, 0, 2), rng)};
}

/// Forced value by enumerating every Gram on the variables, with z_i = e_i.
inline ForcedValue oracle_forced(const RegularFormula& r, Flavor flavor) {
  const FieldSpec& f = r.field;
  auto vars = r.variables();
  const std::size_t n = vars.size();
  Formula body = Formula::conj(f, r.atoms);
  std::set<std::string> seen;
  std::optional<Scalar> value;
  for (const auto& g : all_extensions(Matrix(f, 0, 0), flavor, n)) {
    std::map<std::string, Vector> env;
    for (std::size_t i = 0; i < n; ++i) env[vars[i]] = unit_vector(f, n, i);
    if (!brute_eval(body, g, env)) continue;
    Scalar x = n == 1 ? g(0, 0) : g(0, 1);
    seen.insert(x.format());
    value = x;
  }
  if (seen.empty()) return {ForcedValue::Kind::Unsatisfiable, std::nullopt};
  if (seen.size() > 1) return {ForcedValue::Kind::NotForced, std::nullopt};
  return {ForcedValue::Kind::Forced, value};
}

}  // namespace testkit
