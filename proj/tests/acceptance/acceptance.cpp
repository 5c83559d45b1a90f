// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance [--only N]... [--expect-fail N]...
//
// Exit status is 0 iff every criterion passes, except those named by --expect-fail,
// which must fail and must fail in exactly their documented way.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>

#include "bilin/error.hpp"
#include "bilin/gallery.hpp"
#include "checks.hpp"

using namespace bilin;
using testkit::Rng;

namespace {

const Flavor kFlavors[] = {Flavor::Plain, Flavor::Symmetric, Flavor::Alternating};

struct Outcome {
  bool passed = false;
  std::string detail;
  // Set when a failure matches the documented known deviation exactly.
  bool documented = false;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

Assignment standard_assignment(const Tuple& t) {
  Assignment a;
  for (std::size_t i = 0; i < t.size(); ++i) a["x" + std::to_string(i + 1)] = t[i];
  return a;
}

template <class Fn>
void for_each_tuple(const FieldSpec& f, std::size_t dim, std::size_t n, Fn&& fn) {
  auto vs = testkit::all_vectors(f, dim);
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    Tuple t;
    for (auto i : idx) t.push_back(vs[i]);
    fn(t);
    std::size_t k = 0;
    while (k < n && ++idx[k] == vs.size()) idx[k++] = 0;
    if (k == n) break;
  }
}

std::size_t power(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

/// All flavor-consistent Grams when there are at most `cap` of them, else the zero form and random ones.
std::vector<BilinearSpace> spaces_of_dim(const FieldSpec& f, Flavor flavor, std::size_t dim, std::size_t cap,
                                         std::size_t samples, Rng& rng) {
  std::vector<BilinearSpace> out;
  auto p = static_cast<std::size_t>(f.characteristic());
  std::size_t free_entries = flavor == Flavor::Plain       ? dim * dim
                             : flavor == Flavor::Symmetric ? dim * (dim + 1) / 2
                                                           : dim * (dim - 1) / 2;
  if (power(p, free_entries) <= cap) {
    for (const auto& g : testkit::all_extensions(Matrix(f, 0, 0), flavor, dim))
      out.push_back(BilinearSpace::from_gram(f, flavor, g));
    return out;
  }
  out.push_back(BilinearSpace::zero_form(f, flavor, dim));
  for (std::size_t i = 0; i < samples; ++i) out.push_back(testkit::random_space(f, flavor, dim, rng));
  return out;
}

// ---------------------------------------------------------------- criteria

Outcome hilbert() {
  auto t0 = Clock::now();
  DemoReport r = demo_hilbert_3amalg();
  double dt = seconds_since(t0);
  std::string abstract, concrete;
  for (const auto& [k, v] : r.values) {
    if (k == "[a*-v, a*-v]") abstract = v;
    if (k == "concrete [a*-v, a*-v]") concrete = v;
  }
  // Recompute from the published abstract Gram with v = 2(b + c - d).
  const auto q = FieldSpec::rationals();
  Matrix g = Matrix::from_rows(q, 4, {});
  for (const auto& [label, text] : r.artifacts)
    if (label.rfind("abstract", 0) == 0) g = BilinearSpace::parse_file(text).gram();
  Vector w{Scalar::from_int(q, 1), Scalar::from_int(q, -2), Scalar::from_int(q, -2), Scalar::from_int(q, 2)};
  std::string recomputed = g.rows() == 4 ? testkit::dot_form(g, w, w).format() : "<missing>";
  bool ok = r.passed() && abstract == "-3" && concrete == "-3" && recomputed == "-3" && dt < 1.0;
  return {ok, "abstract = " + abstract + ", concrete = " + concrete + ", recomputed = " + recomputed + ", " +
                  std::to_string(r.checks.size()) + " checks, " + fmt_seconds(dt) + " (limit 1s)"};
}

Outcome axioms() {
  auto t0 = Clock::now();
  Rng rng(1001);
  std::ostringstream detail;
  std::size_t total_violations = 0, queries = 0;
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::prime(5), FieldSpec::rationals()}) {
    testkit::AxiomTally tally;
    for (int i = 0; i < 1000; ++i) testkit::independence_axioms_once(f, kFlavors[i % 3], 6, rng, tally);
    total_violations += tally.violations();
    queries += tally.queries;
    detail << f.to_string() << ": " << tally.queries << " queries, " << tally.independent << " independent, "
           << tally.violations() << " violations";
    for (const auto& [axiom, v] : tally.violated) detail << " [" << axiom << " " << v << "]";
    detail << "; ";
  }
  double dt = seconds_since(t0);
  detail << fmt_seconds(dt) << " (limit 30s)";
  return {total_violations == 0 && queries == 4000 && dt < 30.0, detail.str()};
}

Outcome amalgamation() {
  Rng rng(1002);
  const FieldSpec fields[] = {FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::prime(5), FieldSpec::rationals()};
  std::size_t spans = 0, cubes = 0, failures = 0;
  std::string first;
  for (auto flavor : kFlavors) {
    for (int i = 0; i < 200; ++i) {
      auto [f1, f2] = testkit::random_span(fields[i % 4], flavor, rng);
      auto bad = testkit::amalgam_failures(f1, f2, amalgamate_independent(f1, f2));
      ++spans;
      failures += !bad.empty();
      if (!bad.empty() && first.empty()) first = bad.front();
    }
    for (int i = 0; i < 100; ++i) {
      Cube c = testkit::random_cube(fields[i % 4], flavor, rng, 2);
      auto bad = testkit::amalgam3_failures(c, amalgamate3(c));
      ++cubes;
      failures += !bad.empty();
      if (!bad.empty() && first.empty()) first = bad.front();
    }
  }
  std::string detail = std::to_string(spans) + " amalgams, " + std::to_string(cubes) + " cubes, " +
                       std::to_string(failures) + " failures";
  if (!first.empty()) detail += " (first: " + first + ")";
  return {failures == 0, detail};
}

Outcome stationarity() {
  Rng rng(1003);
  std::size_t runs = 0, failed = 0;
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::rationals()})
    for (auto flavor : kFlavors) {
      std::vector<BilinearSpace> bases{BilinearSpace::zero_form(f, flavor, 0)};
      for (int i = 0; i < 5; ++i) bases.push_back(testkit::random_space(f, flavor, testkit::uniform(rng, 0, 3), rng));
      for (const auto& c : bases) {
        DemoReport r = demo_stationarity(c);
        bool clash = false;
        for (const auto& item : r.checks)
          if (item.claim.rfind("clash", 0) == 0) clash = item.passed && item.value == "(0, 1)";
        ++runs;
        failed += !(r.passed() && clash);
      }
    }
  return {failed == 0, std::to_string(runs) + " configurations (3 fields x 3 flavors x {0, 5 random C}), " +
                           std::to_string(failed) + " failed"};
}

Outcome forced_value() {
  Rng rng(1005);
  std::size_t total = 0, wrong = 0;
  std::map<ForcedValue::Kind, std::size_t> kinds;
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3)})
    for (int i = 0; i < 500; ++i) {
      Flavor flavor = kFlavors[i % 3];
      auto r = testkit::random_regular(f, testkit::uniform(rng, 1, 3), rng);
      auto want = testkit::oracle_forced(r, flavor);
      ++total;
      ++kinds[want.kind];
      wrong += forced_bilinear_value(r, flavor).format() != want.format();
    }
  return {wrong == 0, std::to_string(total) + " formulas (" + std::to_string(kinds[ForcedValue::Kind::Forced]) +
                          " forced, " + std::to_string(kinds[ForcedValue::Kind::NotForced]) + " not forced, " +
                          std::to_string(kinds[ForcedValue::Kind::Unsatisfiable]) + " unsatisfiable), " +
                          std::to_string(wrong) + " disagreements"};
}

Outcome theta_correctness() {
  auto t0 = Clock::now();
  Rng rng(1006);
  std::size_t tuples = 0, evaluations = 0;
  std::map<std::size_t, std::size_t> bad_by_n;
  std::size_t bad_zero_n1 = 0;
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3)})
    for (auto flavor : kFlavors) {
      std::vector<Formula> th{theta(1, f), theta(2, f), theta(3, f)};
      std::unordered_map<std::string, bool> cache;
      for (std::size_t dim = 1; dim <= 3; ++dim)
        for (const auto& v : spaces_of_dim(f, flavor, dim, 64, 7, rng))
          for (std::size_t n = 1; n <= 3; ++n)
            for_each_tuple(f, dim, n, [&](const Tuple& t) {
              ++tuples;
              // ec truth depends only on the qf type; evaluate once per type.
              std::string key = qf_type_of(v, t).key();
              auto it = cache.find(key);
              if (it == cache.end()) {
                ++evaluations;
                it = cache.emplace(key, ec_eval_finite(f, flavor, v, th[n - 1], standard_assignment(t))).first;
              }
              bool independent = testkit::brute_rank(f, dim, t) == n;
              if (it->second != independent) {
                ++bad_by_n[n];
                bad_zero_n1 += n == 1 && is_zero(t[0]);
              }
            });
    }
  double dt = seconds_since(t0);
  std::size_t bad = 0;
  for (const auto& [_, k] : bad_by_n) bad += k;
  std::ostringstream d;
  d << tuples << " tuples, " << evaluations << " e.c. evaluations, disagreements n=1: " << bad_by_n[1]
    << " (all zero tuples: " << (bad_zero_n1 == bad_by_n[1] ? "yes" : "no") << "), n=2: " << bad_by_n[2]
    << ", n=3: " << bad_by_n[3] << "; " << fmt_seconds(dt) << " (limit 120s)";
  if (bad) d << "; theta_1 is the literal formula x1 = x1, which also holds at the zero vector";
  bool documented = bad_by_n[1] > 0 && bad_zero_n1 == bad_by_n[1] && bad_by_n[2] == 0 && bad_by_n[3] == 0 && dt < 120;
  return {bad == 0 && dt < 120, d.str(), documented};
}

Outcome type_determinacy() {
  Rng rng(1007);
  const auto g2 = FieldSpec::prime(2);
  std::size_t conflicts = 0, collisions = 0, formulas = 0, realizations = 0, types_seen = 0, missing = 0;
  for (auto flavor : kFlavors)
    for (std::size_t n = 1; n <= 2; ++n) {
      std::vector<std::string> vars = standard_variables(n);
      // Up to three realizations per type, from different spaces.
      std::map<std::string, std::vector<std::pair<BilinearSpace, Tuple>>> reps;
      for (std::size_t dim = 1; dim <= 3; ++dim)
        for (const auto& v : spaces_of_dim(g2, flavor, dim, 1u << 9, 0, rng))
          for_each_tuple(g2, dim, n, [&](const Tuple& t) {
            auto& slot = reps[qf_type_of(v, t).key()];
            if (slot.size() < 3 && (slot.empty() || !(slot.back().first == v))) slot.push_back({v, t});
          });
      auto types = enumerate_qf_types(n, g2, flavor);
      std::vector<Formula> corpus;
      testkit::FormulaGen gen{g2, vars, 3};
      for (int i = 0; i < 100; ++i) corpus.push_back(gen(rng, 2));
      for (const auto& t : types) corpus.push_back(isolating_formula(t, g2));
      formulas += corpus.size();
      types_seen += reps.size();
      for (const auto& t : types) missing += !reps.count(t.key());

      std::map<std::string, std::string> signature_of;
      std::map<std::string, std::string> type_of_signature;
      for (const auto& [key, list] : reps) {
        std::string first;
        for (const auto& [v, t] : list) {
          ++realizations;
          std::string sig;
          for (const auto& phi : corpus) sig += ec_eval_finite(g2, flavor, v, phi, standard_assignment(t)) ? '1' : '0';
          if (first.empty())
            first = sig;
          else
            conflicts += sig != first;
        }
        auto [it, fresh] = type_of_signature.emplace(first, key);
        collisions += !fresh;
      }
    }
  std::ostringstream d;
  d << types_seen << " types, " << realizations << " realizations, " << formulas << " corpus formulas; "
    << conflicts << " same-type disagreements, " << collisions << " distinct types with equal verdicts, " << missing
    << " enumerated types unrealized";
  return {conflicts == 0 && collisions == 0 && missing == 0, d.str()};
}

Outcome qe() {
  Rng rng(1008);
  const auto g2 = FieldSpec::prime(2);
  std::size_t formulas = 0, quantified = 0, type_checks = 0, tuple_checks = 0, wrong = 0, census_bad = 0;
  for (auto flavor : {Flavor::Symmetric, Flavor::Alternating})
    for (std::size_t n = 1; n <= 2; ++n) {
      auto types = enumerate_qf_types(n, g2, flavor);
      testkit::FormulaGen gen{g2, standard_variables(n), 3};
      for (int i = 0; i < 100; ++i) {
        Formula phi = gen(rng, 2);
        Formula qf = qe_finite(phi, n, g2, flavor);
        ++formulas;
        quantified += !qf.is_quantifier_free();
        for (const auto& t : types) {
          Realization r = canonical_realization(t, g2, flavor);
          Assignment a = standard_assignment(r.tuple);
          ++type_checks;
          wrong += eval(qf, r.space, a) != ec_eval_finite(g2, flavor, r.space, phi, a);
        }
        for (int k = 0; k < 5; ++k) {
          std::size_t dim = testkit::uniform(rng, 1, 3);
          auto v = testkit::random_space(g2, flavor, dim, rng);
          Assignment a = standard_assignment(testkit::random_tuple(g2, dim, n, rng));
          ++tuple_checks;
          wrong += eval(qf, v, a) != ec_eval_finite(g2, flavor, v, phi, a);
        }
      }
    }
  std::ostringstream census;
  for (auto flavor : kFlavors)
    for (std::size_t n = 1; n <= 2; ++n) {
      std::set<std::string> keys;
      auto types = enumerate_qf_types(n, g2, flavor);
      for (const auto& t : types) {
        Realization r = canonical_realization(t, g2, flavor);
        keys.insert(testkit::brute_type_key(g2, r.space.gram(), r.tuple));
      }
      auto oracle = testkit::brute_census(g2, flavor, n);
      census_bad += keys != oracle || keys.size() != types.size();
      census << to_string(flavor) << " n=" << n << ": " << types.size() << "/" << oracle.size() << " ";
    }
  census_bad += enumerate_qf_types(1, g2, Flavor::Symmetric).size() != 3;
  census_bad += enumerate_qf_types(1, g2, Flavor::Alternating).size() != 2;
  std::ostringstream d;
  d << formulas << " formulas, " << quantified << " outputs with quantifiers, " << type_checks << " type checks, "
    << tuple_checks << " random tuples, " << wrong << " disagreements; census " << census.str() << "(" << census_bad
    << " mismatches)";
  return {quantified == 0 && wrong == 0 && census_bad == 0, d.str()};
}

Outcome instability() {
  const auto g2 = FieldSpec::prime(2);
  std::ostringstream d;
  bool ok = true;
  for (auto flavor : kFlavors)
    for (std::size_t m : {3u, 4u}) {
      auto w = instability_witness(m, g2, flavor);
      std::set<std::string> keys;
      for (const auto& v : w.vectors) {
        Tuple t = w.parameters;
        t.push_back(v);
        keys.insert(qf_type_of(w.space, t).key());
      }
      bool exact = keys.size() == (std::size_t{1} << m) && w.vectors.size() == keys.size();
      ok &= exact;
      d << to_string(flavor) << " m=" << m << ": " << keys.size() << " ";
    }
  return {ok, d.str() + "distinct types"};
}

Outcome semi_hausdorff() {
  auto t0 = Clock::now();
  Rng rng(1010);
  std::size_t tuples = 0, evaluations = 0, wrong = 0, exhaustive_spaces = 0, sampled_spaces = 0;
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3)}) {
    Formula phi = semi_hausdorff_formula(f);
    for (auto flavor : kFlavors) {
      std::unordered_map<std::string, bool> cache;
      for (int i = 0; i < 8; ++i) {
        auto v = nondegenerate_closure(testkit::random_space(f, flavor, testkit::uniform(rng, 1, 3), rng)).space;
        auto check = [&](const Tuple& t) {
          ++tuples;
          std::string key = qf_type_of(v, t).key();
          auto it = cache.find(key);
          if (it == cache.end()) {
            ++evaluations;
            Assignment a{{"x", t[0]}, {"y", t[1]}, {"xp", t[2]}, {"yp", t[3]}};
            it = cache.emplace(key, ec_eval_finite(f, flavor, v, phi, a)).first;
          }
          bool equal = testkit::dot_form(v.gram(), t[0], t[1]) == testkit::dot_form(v.gram(), t[2], t[3]);
          wrong += it->second != equal;
        };
        std::size_t count = power(power(static_cast<std::size_t>(f.characteristic()), v.dim()), 4);
        if (count <= 70000) {
          ++exhaustive_spaces;
          for_each_tuple(f, v.dim(), 4, check);
        } else {
          ++sampled_spaces;
          for (int k = 0; k < 4000; ++k) check(testkit::random_tuple(f, v.dim(), 4, rng));
        }
      }
    }
  }

  const auto q = FieldSpec::rationals();
  Formula body = semi_hausdorff_formula(q).body();
  std::size_t witnesses = 0, witness_bad = 0;
  while (witnesses < 100) {
    Flavor flavor = kFlavors[witnesses % 3];
    auto v = nondegenerate_closure(testkit::random_space(q, flavor, testkit::uniform(rng, 1, 3), rng)).space;
    Vector a = testkit::random_vector(q, v.dim(), rng), b = testkit::random_vector(q, v.dim(), rng),
           ap = testkit::random_vector(q, v.dim(), rng), bp = testkit::random_vector(q, v.dim(), rng);
    Scalar target = v.form(a, b), have = v.form(ap, bp);
    if (have.is_zero() != target.is_zero()) continue;
    if (!have.is_zero())
      for (auto& x : ap) x = (target / have) * x;
    auto w = semi_hausdorff_witness(v, a, b, ap, bp);
    Assignment asg{{"x", w.inclusion.apply(a)},   {"y", w.inclusion.apply(b)}, {"xp", w.inclusion.apply(ap)},
                   {"yp", w.inclusion.apply(bp)}, {"z", w.c},                  {"zp", w.c_prime}};
    ++witnesses;
    witness_bad += !(testkit::check_mono(w.inclusion) && eval(body, w.space, asg));
  }
  std::ostringstream d;
  d << tuples << " finite-field tuples (" << exhaustive_spaces << " spaces exhaustive, " << sampled_spaces
    << " sampled), " << evaluations << " e.c. evaluations, " << wrong << " disagreements; Q witnesses: "
    << witnesses << ", " << witness_bad << " invalid; " << fmt_seconds(seconds_since(t0));
  return {wrong == 0 && witness_bad == 0, d.str()};
}

Outcome hausdorff() {
  const auto q = FieldSpec::rationals();
  DemoReport r = demo_hausdorff_failure(q, Flavor::Plain);
  DemoReport again = demo_hausdorff_failure(q, Flavor::Plain);
  std::string n1, n2;
  for (const auto& [k, v] : r.values) {
    if (k == "N1 [a,b]") n1 = v;
    if (k == "N2 [a,b]") n2 = v;
  }
  bool ok = r.passed() && n1 == "0" && n2 == "1" && r.render() == again.render();
  return {ok, "N1 [a,b] = " + n1 + ", N2 [a,b] = " + n2 + ", " + std::to_string(r.checks.size()) + " checks, " +
                  (r.render() == again.render() ? "deterministic" : "nondeterministic")};
}

Outcome closure() {
  Rng rng(1012);
  std::size_t spaces = 0, bad = 0;
  for (auto f : {FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::rationals(), FieldSpec::quadratic(15)})
    for (auto flavor : kFlavors)
      for (int i = 0; i < 500; ++i) {
        auto v = testkit::random_space(f, flavor, testkit::uniform(rng, 0, 4), rng);
        Closure c = nondegenerate_closure(v);
        ++spaces;
        bool ok = radical(c.space, Side::Left).dim() == 0 && radical(c.space, Side::Right).dim() == 0 &&
                  rank(c.space.gram()) == c.space.dim() && c.space.dim() <= 4 * v.dim() &&
                  c.space.flavor() == flavor && testkit::check_mono(c.inclusion) && c.inclusion.source == v;
        bad += !ok;
      }
  return {bad == 0, std::to_string(spaces) + " spaces (4 fields x 3 flavors x 500), " + std::to_string(bad) + " failures"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, expect_fail;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if ((arg == "--only" || arg == "--expect-fail") && i + 1 < argc)
      (arg == "--only" ? only : expect_fail).insert(std::stoi(argv[++i]));
    else {
      std::cerr << "usage: acceptance [--only N]... [--expect-fail N]...\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "Hilbert counterexample", hilbert},
      {2, "independence axioms", axioms},
      {3, "amalgamation postconditions", amalgamation},
      {4, "stationarity failure", stationarity},
      {5, "forced-value oracle", forced_value},
      {6, "theta_n defines linear independence", theta_correctness},
      {7, "type determinacy", type_determinacy},
      {8, "quantifier elimination", qe},
      {9, "instability", instability},
      {10, "semi-Hausdorff formula", semi_hausdorff},
      {11, "Hausdorff failure", hausdorff},
      {12, "non-degenerate closure", closure},
  };

  int status = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.passed ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << o.detail << " ["
              << fmt_seconds(seconds_since(t0)) << "]" << std::endl;
    bool expected = expect_fail.count(c.id) > 0;
    if (o.passed == expected || (expected && !o.documented)) status = 1;
  }
  return status;
}
