#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bilin/error.hpp"
#include "checks.hpp"

using namespace bilin;
using testkit::Rng;

namespace {

const Flavor kFlavors[] = {Flavor::Plain, Flavor::Symmetric, Flavor::Alternating};

Vector ints(const FieldSpec& f, std::vector<long> xs) {
  Vector v;
  for (long x : xs) v.push_back(Scalar::from_int(f, x));
  return v;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Parse;
}

std::string error_text(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

BilinearSpace sq(const FieldSpec& f, Flavor fl, std::vector<std::vector<long>> rows) {
  return BilinearSpace::from_gram(f, fl, Matrix::from_ints(f, rows));
}

}  // namespace

TEST_CASE("independence examples") {
  const auto q = FieldSpec::rationals(), g2 = FieldSpec::prime(2);
  auto q3 = BilinearSpace::zero_form(q, Flavor::Symmetric, 3);
  auto g3 = BilinearSpace::zero_form(g2, Flavor::Symmetric, 3);
  for (auto m : {IndepMethod::SpanIntersection, IndepMethod::BasisExtension}) {
    CHECK(is_independent(q3, {ints(q, {1, 0, 0})}, {ints(q, {0, 1, 0})}, {}, m));
    CHECK_FALSE(is_independent(q3, {ints(q, {1, 1, 0})}, {ints(q, {1, 0, 0}), ints(q, {0, 1, 0})}, {}, m));
    CHECK(is_independent(g3, {ints(g2, {1, 0, 1})}, {ints(g2, {0, 1, 1})}, {ints(g2, {0, 0, 1})}, m));
  }
}

TEST_CASE("local base examples") {
  const auto q = FieldSpec::rationals();
  auto v = BilinearSpace::zero_form(q, Flavor::Plain, 2);
  auto e1 = ints(q, {1, 0}), e2 = ints(q, {0, 1}), s = ints(q, {1, 1});
  auto lb = local_base(v, {s}, {e1, e2});
  REQUIRE(lb.size() == 1);
  CHECK(Subspace::span(q, 2, lb) == Subspace::span(q, 2, {s}));
  CHECK(local_base(v, {e1}, {e2}).empty());
  CHECK(Subspace::span(q, 2, local_base(v, {e1}, {e1})) == Subspace::span(q, 2, {e1}));
}

TEST_CASE("independence axioms on random queries") {
  Rng rng(31);
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::prime(5), FieldSpec::rationals()}) {
    testkit::AxiomTally tally;
    for (int i = 0; i < 300; ++i) testkit::independence_axioms_once(f, kFlavors[i % 3], 6, rng, tally);
    CAPTURE(f.to_string());
    for (const auto& [axiom, bad] : tally.violated) {
      CAPTURE(axiom);
      CHECK(bad == 0);
    }
    CHECK(tally.independent > 30);
    CHECK(tally.independent < tally.queries);
    CHECK(tally.checked["transitivity"] > 10);
    CHECK(tally.checked["base-monotonicity"] > 10);
  }
}

TEST_CASE("independent amalgamation examples") {
  const auto g2 = FieldSpec::prime(2);
  auto zero = BilinearSpace::zero_form(g2, Flavor::Symmetric, 0);
  auto w = sq(g2, Flavor::Symmetric, {{1}});
  BilMap f(BilMap{zero, w, Matrix(g2, 1, 0)});
  auto r = amalgamate_independent(f, f);
  CHECK(r.space.gram() == Matrix::from_ints(g2, {{1, 0}, {0, 1}}));
  CHECK(r.g1.matrix == Matrix::from_ints(g2, {{1}, {0}}));
  CHECK(r.g2.matrix == Matrix::from_ints(g2, {{0}, {1}}));

  const auto q = FieldSpec::rationals();
  auto v = sq(q, Flavor::Symmetric, {{1}});
  auto w1 = sq(q, Flavor::Symmetric, {{1, 2}, {2, 0}});
  auto w2 = sq(q, Flavor::Symmetric, {{3, 1}, {1, 1}});
  BilMap f1{v, w1, Matrix::from_ints(q, {{1}, {0}})}, f2{v, w2, Matrix::from_ints(q, {{0}, {1}})};
  auto r2 = amalgamate_independent(f1, f2);
  CHECK(r2.space.dim() == 3);
  CHECK(testkit::amalgam_failures(f1, f2, r2).empty());

  BilMap bad{v, w1, Matrix::from_ints(q, {{0}, {0}})};
  CHECK(kind_of([&] { amalgamate_independent(bad, f2); }) == ErrorKind::NotMonomorphism);
  auto va = BilinearSpace::zero_form(q, Flavor::Alternating, 1);
  auto wa = BilinearSpace::zero_form(q, Flavor::Alternating, 1);
  BilMap fa{va, wa, Matrix::from_ints(q, {{1}})};
  CHECK_THROWS_AS(amalgamate_independent(f1, fa), Error);
}

TEST_CASE("independent amalgamation postconditions on random spans") {
  Rng rng(32);
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::rationals()})
    for (auto flavor : kFlavors)
      for (int i = 0; i < 40; ++i) {
        auto [f1, f2] = testkit::random_span(f, flavor, rng);
        auto r = amalgamate_independent(f1, f2);
        auto failures = testkit::amalgam_failures(f1, f2, r);
        CHECK(failures.empty());
        for (std::size_t k = 0; k < f1.target.dim(); ++k)
          CHECK(r.g1.matrix.column(k) == unit_vector(f, r.space.dim(), k));
      }
}

TEST_CASE("extension examples and postconditions") {
  const auto g2 = FieldSpec::prime(2);
  auto h = sq(g2, Flavor::Symmetric, {{0, 1}, {1, 0}});
  auto e = extend_independently(h, {ints(g2, {1, 0})}, {}, {});
  CHECK(e.space.dim() == 3);
  CHECK(is_monomorphism(e.inclusion).ok);
  REQUIRE(e.a_prime.size() == 1);
  CHECK(e.space.form(e.a_prime[0], e.a_prime[0]).is_zero());
  CHECK(is_independent(e.space, e.a_prime, e.inclusion.apply(Tuple{ints(g2, {1, 0}), ints(g2, {0, 1})}), {}));

  CHECK(kind_of([&] { extend_independently(h, {ints(g2, {1, 0})}, {ints(g2, {1, 0})}, {}); }) ==
        ErrorKind::PreconditionFailed);

  Rng rng(33);
  for (auto f : {FieldSpec::prime(3), FieldSpec::rationals()})
    for (auto flavor : kFlavors)
      for (int i = 0; i < 40; ++i) {
        std::size_t n = testkit::uniform(rng, 1, 4);
        auto v = testkit::random_space(f, flavor, n, rng);
        Tuple c = testkit::random_family(f, n, testkit::uniform(rng, 0, 1), {}, rng);
        Tuple a = testkit::random_family(f, n, testkit::uniform(rng, 1, 2), c, rng);
        Tuple b = testkit::random_family(f, n, testkit::uniform(rng, 0, 2), c, rng);
        if (!is_independent(v, a, b, c)) {
          CHECK(kind_of([&] { extend_independently(v, a, b, c); }) == ErrorKind::PreconditionFailed);
          continue;
        }
        auto r = extend_independently(v, a, b, c);
        REQUIRE(testkit::check_mono(r.inclusion));
        Tuple bc = testkit::cat(b, c);
        CHECK(qf_type_of(v, testkit::cat(a, bc)) == qf_type_of(r.space, testkit::cat(r.a_prime, r.inclusion.apply(bc))));
        CHECK(is_independent(r.space, r.a_prime, testkit::image_basis(r.inclusion), r.inclusion.apply(c)));
      }
}

TEST_CASE("3-amalgamation examples") {
  const auto q = FieldSpec::rationals();
  auto z0 = BilinearSpace::zero_form(q, Flavor::Symmetric, 0);
  auto z1 = BilinearSpace::zero_form(q, Flavor::Symmetric, 1);
  Matrix e1 = Matrix::from_ints(q, {{1}, {0}}), e2 = Matrix::from_ints(q, {{0}, {1}});
  auto build = [&](BilinearSpace v1, BilinearSpace v2, BilinearSpace v3) {
    Cube c;
    c.d = z0, c.a = z1, c.b = z1, c.c = z1, c.v1 = v1, c.v2 = v2, c.v3 = v3;
    c.d_a = c.d_b = c.d_c = BilMap{z0, z1, Matrix(q, 1, 0)};
    c.a_v1 = {z1, v1, e1}, c.b_v1 = {z1, v1, e2};
    c.a_v2 = {z1, v2, e1}, c.c_v2 = {z1, v2, e2};
    c.b_v3 = {z1, v3, e1}, c.c_v3 = {z1, v3, e2};
    return c;
  };
  auto z2 = BilinearSpace::zero_form(q, Flavor::Symmetric, 2);
  Cube trivial = build(z2, z2, z2);
  CHECK(cube_input_violations(trivial).empty());
  auto r = amalgamate3(trivial);
  CHECK(r.space == BilinearSpace::zero_form(q, Flavor::Symmetric, 3));
  CHECK(testkit::amalgam3_failures(trivial, r).empty());

  auto hyp = sq(q, Flavor::Symmetric, {{0, 1}, {1, 0}});
  Cube h = build(hyp, hyp, hyp);
  auto rh = amalgamate3(h);
  CHECK(rh.space.dim() == 3);
  CHECK(testkit::amalgam3_failures(h, rh).empty());
  CHECK(amalgam3_violations(h, rh).empty());
  Vector a = rh.v1.matrix.column(0), b = rh.v1.matrix.column(1), c = rh.v2.matrix.column(1);
  CHECK(rh.space.form(a, b).is_one());
  CHECK(rh.space.form(a, c).is_one());
  CHECK(rh.space.form(b, c).is_one());

  Cube clash = trivial;
  clash.b_v1 = {z1, z2, e1};
  CHECK(kind_of([&] { amalgamate3(clash); }) == ErrorKind::IndependenceViolated);
  CHECK(error_text([&] { amalgamate3(clash); }).find("V1") != std::string::npos);

  Cube skew = trivial;
  skew.d = z1;
  skew.d_a = {z1, z1, Matrix::from_ints(q, {{2}})};
  skew.d_b = skew.d_c = {z1, z1, Matrix::from_ints(q, {{1}})};
  CHECK(kind_of([&] { amalgamate3(skew); }) == ErrorKind::DiagramNotCommuting);

  Cube squash = trivial;
  squash.a_v1 = {z1, z2, Matrix::from_ints(q, {{0}, {0}})};
  CHECK(kind_of([&] { amalgamate3(squash); }) == ErrorKind::NotMonomorphism);
}

TEST_CASE("3-amalgamation postconditions on random cubes") {
  Rng rng(34);
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::rationals()})
    for (auto flavor : kFlavors)
      for (int i = 0; i < 25; ++i) {
        Cube cube = testkit::random_cube(f, flavor, rng);
        REQUIRE(cube_input_violations(cube).empty());
        auto r = amalgamate3(cube);
        CHECK(testkit::amalgam3_failures(cube, r).empty());
        CHECK(amalgam3_violations(cube, r).empty());
      }
}

TEST_CASE("cube files round-trip") {
  Rng rng(35);
  for (auto f : {FieldSpec::prime(5), FieldSpec::quadratic(15)}) {
    Cube c = testkit::random_cube(f, Flavor::Symmetric, rng, 2);
    Cube back = Cube::parse_file(c.to_file());
    CHECK(back.to_file() == c.to_file());
    CHECK(back.v3 == c.v3);
    CHECK(back.c_v3 == c.c_v3);
  }
  CHECK_THROWS_AS(Cube::parse_file("space D\nfield Q\nflavor plain\ndim 0\ngram\n"), ParseError);
}

TEST_CASE("stationarity counterexample") {
  Rng rng(36);
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::rationals()})
    for (auto flavor : kFlavors)
      for (int i = 0; i < 6; ++i) {
        auto c = i == 0 ? BilinearSpace::zero_form(f, flavor, 0)
                        : testkit::random_space(f, flavor, testkit::uniform(rng, 1, 3), rng);
        auto s = stationarity_counterexample(c);
        CHECK(s.space.dim() == c.dim() + 3);
        CHECK(qf_type_of(s.space, testkit::cat({s.a}, s.c_basis)) == qf_type_of(s.space, testkit::cat({s.a_prime}, s.c_basis)));
        CHECK(is_independent(s.space, {s.a}, {s.b}, s.c_basis));
        CHECK(is_independent(s.space, {s.a_prime}, {s.b}, s.c_basis));
        CHECK(s.space.form(s.a, s.b).is_zero());
        CHECK(s.space.form(s.a_prime, s.b).is_one());
        Scalar back = flavor == Flavor::Alternating ? -Scalar::one(f) : Scalar::one(f);
        CHECK(s.space.form(s.b, s.a_prime) == back);
        for (const auto& x : s.c_basis)
          for (const auto& y : {s.a, s.a_prime, s.b}) {
            CHECK(s.space.form(x, y).is_zero());
            CHECK(s.space.form(y, x).is_zero());
          }
      }

  const auto q = FieldSpec::rationals();
  auto s = stationarity_counterexample(BilinearSpace::zero_form(q, Flavor::Symmetric, 0));
  CHECK(s.space.gram_of({s.a, s.a_prime, s.b}) == Matrix::from_ints(q, {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}}));
  const auto g3 = FieldSpec::prime(3);
  auto t = stationarity_counterexample(BilinearSpace::zero_form(g3, Flavor::Alternating, 0));
  CHECK(t.space.form(t.b, t.a_prime).format() == "2");
}
