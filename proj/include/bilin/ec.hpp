#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bilin/formula.hpp"
#include "bilin/indep.hpp"

namespace bilin {

/// Quantifier-free type of an n-tuple: its linear dependencies and its Gram matrix.
struct QfType {
  std::size_t n = 0;
  Subspace kernel;  // dependencies, inside K^n
  Matrix gram;      // n x n, entry (i,j) = [a_i, a_j]

  /// Canonical text used for sorting and caching.
  std::string key() const;

  friend bool operator==(const QfType&, const QfType&) = default;
};

QfType qf_type_of(const BilinearSpace& space, const Tuple& tuple);

/// Greedy-leftmost independent positions: i is kept iff a_i is not a combination of earlier entries.
std::vector<std::size_t> basis_positions(const QfType& t);
/// For every position, its coefficients over basis_positions (a unit vector for basis positions).
std::vector<Vector> dependency_coefficients(const QfType& t);

struct Realization {
  BilinearSpace space;  // dim = rank of the type
  Tuple tuple;
};

/// Space on the basis subtuple with the type's Gram; dependents built from the kernel.
Realization canonical_realization(const QfType& t, const FieldSpec& field, Flavor flavor);

/// Throws FieldMismatch or FlavorMismatch for incompatible spaces.
bool same_type(const BilinearSpace& v, const Tuple& a, const BilinearSpace& w, const Tuple& b);

/// U with g: V -> U, h: W -> U and g(a) = h(b); throws TypeMismatch when the types differ.
AmalgamResult witness_amalgam(const BilinearSpace& v, const Tuple& a, const BilinearSpace& w, const Tuple& b);

/// A ⊆ B with A on the first dim(A) coordinates of B, and f: A -> V.
struct ExtensionProblem {
  BilinearSpace a;
  BilinearSpace b;
  BilMap f;
};

struct ExtensionSolution {
  BilinearSpace space;  // V' ⊇ V
  BilMap inclusion;     // V -> V'
  BilMap g;             // B -> V', agreeing with inclusion ∘ f on A
};

/// Throws PreconditionFailed when A is not the leading block of B, and the
/// amalgamation errors when f is not a monomorphism.
ExtensionSolution solve_extension(const ExtensionProblem& p);

/// e.c. truth of f at the assigned tuple. Throws InfiniteField, FlavorMismatch, UnboundVariable.
bool ec_eval_finite(const FieldSpec& field, Flavor flavor, const BilinearSpace& space, const Formula& f,
                    const Assignment& assignment);

/// e.c. truth of f at a tuple of the given type; `vars` name the tuple's positions.
bool ec_eval_type(const Formula& f, const std::vector<std::string>& vars, const QfType& t, const FieldSpec& field,
                  Flavor flavor);

struct GenericVerdict {
  bool satisfiable = false;
  BilinearSpace model;  // dim = number of variables
  Tuple witness;        // standard basis, free variables first
};

/// Infinite fields only; throws FiniteField, ContainsLinearEquation.
GenericVerdict ec_sat_regular_generic(const FieldSpec& field, Flavor flavor, const RegularFormula& r);

/// Independence part & dependency equations & products on the basis subtuple, over x1..xn.
Formula isolating_formula(const QfType& t, const FieldSpec& field);

/// All flavor-consistent r x r Gram matrices over a finite field, in a fixed order.
std::vector<Matrix> enumerate_grams(std::size_t r, const FieldSpec& field, Flavor flavor);

/// Every qf n-type for the flavor, sorted by key. Throws InfiniteField.
std::vector<QfType> enumerate_qf_types(std::size_t n, const FieldSpec& field, Flavor flavor);

/// Quantifier-free equivalent of f over x1..xn. Throws InfiniteField and
/// InvalidArgument when f has other free variables.
Formula qe_finite(const Formula& f, std::size_t n, const FieldSpec& field, Flavor flavor);

struct InstabilityWitness {
  BilinearSpace space;
  Tuple parameters;  // a_1..a_m
  Tuple vectors;     // v_chi, chi encoded by bit i of the index
};

/// Requires 2 <= m <= 4.
InstabilityWitness instability_witness(std::size_t m, const FieldSpec& field, Flavor flavor);

struct SupportCheck {
  bool counterexample = false;
  std::size_t budget = 0;
  BilinearSpace space;  // set when counterexample
  Tuple tuple;

  std::string format() const;
};

/// Searches every type realized in a space of dim <= budget for one satisfying phi (e.c.)
/// but differing from t.
SupportCheck check_support(const Formula& phi, const QfType& t, const FieldSpec& field, Flavor flavor,
                           std::size_t budget);

struct SemiHausdorffWitness {
  BilinearSpace space;  // V ⊕ <c, c'>
  BilMap inclusion;
  Vector c, c_prime;
};

/// Realizes z = c, zp = c' for the semi-Hausdorff formula at (a,b,a',b') when [a,b] = [a',b'].
/// Throws PreconditionFailed otherwise.
SemiHausdorffWitness semi_hausdorff_witness(const BilinearSpace& space, const Vector& a, const Vector& b,
                                            const Vector& a_prime, const Vector& b_prime);

}  // namespace bilin
