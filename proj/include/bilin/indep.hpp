#pragma once

#include <string>
#include <vector>

#include "bilin/space.hpp"

namespace bilin {

using Tuple = std::vector<Vector>;

enum class IndepMethod { SpanIntersection, BasisExtension };

/// A is independent from B over C: <AC> ∩ <BC> = <C>.
bool is_independent(const FieldSpec& field, std::size_t ambient, const Tuple& a, const Tuple& b, const Tuple& c,
                    IndepMethod method = IndepMethod::SpanIntersection);
bool is_independent(const BilinearSpace& ambient, const Tuple& a, const Tuple& b, const Tuple& c,
                    IndepMethod method = IndepMethod::SpanIntersection);

/// A basis B' of <A> ∩ <B>; A is independent from B over B'.
Tuple local_base(const BilinearSpace& ambient, const Tuple& a, const Tuple& b);

struct AmalgamResult {
  BilinearSpace space;
  BilMap g1;  // W1 -> U, block identity on the first dim(W1) coordinates
  BilMap g2;  // W2 -> U
};

/// Independent amalgam of W1 <-f1- V -f2-> W2: U = W1 ⊕ (complement of f2(V) in W2),
/// with zero products between W1 and the complement except those forced through V.
/// Throws NotMonomorphism, FlavorMismatch, FieldMismatch, DimensionMismatch.
AmalgamResult amalgamate_independent(const BilMap& f1, const BilMap& f2);

struct ExtensionResult {
  BilinearSpace space;  // W ⊇ V
  BilMap inclusion;     // V -> W, block identity
  Tuple a_prime;
};

/// Copies `a` over <BC> so that the copy is independent from all of V over C.
/// Throws PreconditionFailed unless a is independent from B over C.
ExtensionResult extend_independently(const BilinearSpace& space, const Tuple& a, const Tuple& b, const Tuple& c);

/// Commuting cube of monomorphisms D -> A,B,C; A,B -> V1; A,C -> V2; B,C -> V3.
struct Cube {
  BilinearSpace d, a, b, c, v1, v2, v3;
  BilMap d_a, d_b, d_c;
  BilMap a_v1, b_v1;
  BilMap a_v2, c_v2;
  BilMap b_v3, c_v3;

  /// Cube file text (named space and map sections); see README.
  std::string to_file() const;
  static Cube parse_file(std::string_view text);
};

struct Amalgam3Result {
  BilinearSpace space;
  BilMap v1, v2, v3;  // V_i -> W
};

/// Throws DiagramNotCommuting, IndependenceViolated (naming the failing one),
/// NotMonomorphism or FlavorMismatch on bad input.
Amalgam3Result amalgamate3(const Cube& cube);

/// Empty iff the cube is a valid input (monomorphisms, commuting, three independences).
std::vector<std::string> cube_input_violations(const Cube& cube);
/// Empty iff the result commutes, every arrow is a monomorphism, flavor is preserved,
/// and A ⫝_D V3, B ⫝_D V2, C ⫝_D V1 hold in W.
std::vector<std::string> amalgam3_violations(const Cube& cube, const Amalgam3Result& result);

struct StationarityData {
  BilinearSpace space;  // C ⊕ <a, a', b>
  Tuple c_basis;        // image of the standard basis of C
  Vector a, a_prime, b;
};

/// Non-stationarity configuration over C: [a', b] = 1, everything else new is 0
/// ([b, a'] = -1 in the alternating case).
StationarityData stationarity_counterexample(const BilinearSpace& c);

}  // namespace bilin
