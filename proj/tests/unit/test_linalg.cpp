#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bilin/error.hpp"
#include "testkit.hpp"

using namespace bilin;
using testkit::Rng;

namespace {

Matrix random_matrix(const FieldSpec& f, std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = testkit::random_scalar(f, rng);
  return m;
}

bool is_rref(const RrefResult& r) {
  const Matrix& m = r.reduced;
  std::size_t last = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::size_t lead = m.cols();
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) {
        lead = j;
        break;
      }
    if (i >= r.rank()) {
      if (lead != m.cols()) return false;
      continue;
    }
    if (lead != r.pivots[i] || !m(i, lead).is_one()) return false;
    if (i > 0 && lead <= last) return false;
    last = lead;
    for (std::size_t k = 0; k < m.rows(); ++k)
      if (k != i && !m(k, lead).is_zero()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rref is reduced and preserves the row space") {
  Rng rng(1);
  for (auto f : {FieldSpec::rationals(), FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::prime(7),
                 FieldSpec::quadratic(15)}) {
    for (int t = 0; t < 150; ++t) {
      Matrix m = random_matrix(f, testkit::uniform(rng, 0, 4), testkit::uniform(rng, 0, 5), rng);
      RrefResult r = rref(m);
      REQUIRE(is_rref(r));
      Subspace rows = Subspace::span(f, m.cols(), m.row_list());
      CHECK(rows == Subspace::span(f, m.cols(), r.reduced.row_list()));
      CHECK(rows.dim() == r.rank());
    }
  }
}

TEST_CASE("rank and kernel agree with brute force over small prime fields") {
  Rng rng(2);
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3)}) {
    for (int t = 0; t < 200; ++t) {
      std::size_t r = testkit::uniform(rng, 1, 3), c = testkit::uniform(rng, 1, 4);
      Matrix m = random_matrix(f, r, c, rng);
      CHECK(rank(m) == testkit::brute_rank(f, c, m.row_list()));

      std::set<std::string> zeros;
      for (const auto& x : testkit::all_vectors(f, c))
        if (is_zero(m.apply(x))) zeros.insert(format_vector(x));
      auto ker = kernel(m);
      CHECK(testkit::brute_span(f, c, ker) == zeros);
      CHECK(ker.size() + rank(m) == c);
    }
  }
}

TEST_CASE("solve returns a correct particular solution and homogeneous basis") {
  Rng rng(4);
  for (auto f : {FieldSpec::rationals(), FieldSpec::prime(5), FieldSpec::quadratic(2)}) {
    for (int t = 0; t < 200; ++t) {
      std::size_t r = testkit::uniform(rng, 1, 4), c = testkit::uniform(rng, 1, 4);
      Matrix a = random_matrix(f, r, c, rng);
      Vector b = testkit::coin(rng) ? a.apply(testkit::random_vector(f, c, rng)) : testkit::random_vector(f, r, rng);
      AffineSolutionSet s = solve(a, b);
      std::vector<Vector> cols = a.column_list();
      cols.push_back(b);
      bool in_image = rank(Matrix::from_columns(f, r, cols)) == rank(a);
      CHECK(s.consistent == in_image);
      if (!s.consistent) continue;
      CHECK(a.apply(s.particular) == b);
      for (const auto& h : s.basis) CHECK(is_zero(a.apply(h)));
      CHECK(s.basis.size() == c - rank(a));
    }
  }
}

TEST_CASE("determined coordinates") {
  const auto q = FieldSpec::rationals();
  Matrix a = Matrix::from_ints(q, {{1, 1, 0}, {0, 0, 1}});
  Vector b{Scalar::from_int(q, 2), Scalar::from_int(q, 5)};
  AffineSolutionSet s = solve(a, b);
  CHECK_FALSE(determined_coordinate(s, 0).has_value());
  REQUIRE(determined_coordinate(s, 2).has_value());
  CHECK(determined_coordinate(s, 2)->format() == "5");

  AffineSolutionSet bad = solve(Matrix::from_ints(q, {{1}, {1}}), {Scalar::from_int(q, 0), Scalar::from_int(q, 1)});
  CHECK_FALSE(bad.consistent);
  CHECK_THROWS_AS(determined_coordinate(bad, 0), Error);
}

TEST_CASE("subspace intersection and sum agree with brute-force spans") {
  Rng rng(6);
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3)}) {
    for (int t = 0; t < 200; ++t) {
      std::size_t n = testkit::uniform(rng, 1, 4);
      Tuple u = testkit::random_tuple(f, n, testkit::uniform(rng, 0, 3), rng);
      Tuple v = testkit::random_tuple(f, n, testkit::uniform(rng, 0, 3), rng);
      Subspace su = Subspace::span(f, n, u), sv = Subspace::span(f, n, v);
      auto bu = testkit::brute_span(f, n, u), bv = testkit::brute_span(f, n, v);
      std::set<std::string> meet;
      for (const auto& x : bu)
        if (bv.count(x)) meet.insert(x);
      CHECK(testkit::brute_span(f, n, su.intersect(sv).basis()) == meet);
      Tuple both = u;
      both.insert(both.end(), v.begin(), v.end());
      CHECK(testkit::brute_span(f, n, su.sum(sv).basis()) == testkit::brute_span(f, n, both));
      CHECK(su.sum(sv).dim() + su.intersect(sv).dim() == su.dim() + sv.dim());
    }
  }
}

TEST_CASE("subspace canonical form is basis independent") {
  const auto q = FieldSpec::rationals();
  auto v = [&](std::vector<long> xs) {
    Vector out;
    for (long x : xs) out.push_back(Scalar::from_int(q, x));
    return out;
  };
  Subspace a = Subspace::span(q, 3, {v({1, 2, 3}), v({0, 1, 1})});
  Subspace b = Subspace::span(q, 3, {v({1, 3, 4}), v({2, 5, 7}), v({1, 2, 3})});
  CHECK(a == b);
  CHECK(a.contains(v({3, 7, 10})));
  CHECK_FALSE(a.contains(v({0, 0, 1})));
}

TEST_CASE("greedy independent and complement") {
  const auto g = FieldSpec::prime(2);
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = testkit::uniform(rng, 1, 5);
    Tuple vs = testkit::random_tuple(g, n, testkit::uniform(rng, 0, 5), rng);
    auto keep = greedy_independent(g, n, vs);
    Tuple kept;
    for (auto i : keep) kept.push_back(vs[i]);
    CHECK(testkit::brute_rank(g, n, kept) == kept.size());
    CHECK(kept.size() == testkit::brute_rank(g, n, vs));
    for (std::size_t i = 0, k = 0; i < vs.size(); ++i) {
      if (k < keep.size() && keep[k] == i) {
        ++k;
        continue;
      }
      Tuple prefix;
      for (std::size_t j = 0; j < k; ++j) prefix.push_back(vs[keep[j]]);
      CHECK(testkit::brute_span(g, n, prefix).count(format_vector(vs[i])) == 1);
    }
    auto extra = complement_indices(g, n, kept);
    Tuple full = kept;
    for (auto i : extra) full.push_back(unit_vector(g, n, i));
    CHECK(full.size() == n);
    CHECK(testkit::brute_rank(g, n, full) == n);
  }
}

TEST_CASE("coordinates in a basis") {
  Rng rng(9);
  const auto q = FieldSpec::rationals();
  for (int t = 0; t < 100; ++t) {
    std::size_t n = testkit::uniform(rng, 1, 4);
    Tuple vs = testkit::random_tuple(q, n, testkit::uniform(rng, 1, 3), rng);
    auto keep = greedy_independent(q, n, vs);
    Tuple basis;
    for (auto i : keep) basis.push_back(vs[i]);
    for (const auto& v : vs) {
      auto c = coordinates_in(q, n, basis, v);
      REQUIRE(c.has_value());
      CHECK(testkit::combine(q, n, *c, basis) == v);
    }
  }
}

TEST_CASE("dimension errors") {
  const auto q = FieldSpec::rationals();
  Matrix a(q, 2, 3), b(q, 2, 2);
  CHECK_THROWS_AS((void)(a * b), Error);
  CHECK_THROWS_AS((void)a.apply(zero_vector(q, 2)), Error);
}
