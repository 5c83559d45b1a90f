#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bilin/ec.hpp"

namespace bilin {

struct CheckItem {
  std::string claim;
  bool passed = false;
  std::string value;  // exact computed value(s)
};

/// A demo passes iff every checklist item passes.
struct DemoReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> artifacts;  // label, text
  std::vector<std::pair<std::string, std::string>> values;     // printed as "label = value"
  std::vector<CheckItem> checks;

  bool passed() const;
  void check(std::string claim, bool ok, std::string value = {});
  std::string render() const;
};

/// Checklist over the non-stationarity configuration built on C.
DemoReport demo_stationarity(const BilinearSpace& c);

/// Abstract Gram model over Q and the concrete model in Q(sqrt 15) with diag(1,1,1,-1).
DemoReport demo_hilbert_3amalg();

/// Infinite fields only; throws FiniteField.
DemoReport demo_hausdorff_failure(const FieldSpec& field, Flavor flavor);

/// Exhibits a space and tuple where the quantifier-free psi (over x1..xn) and linear
/// independence disagree. Throws SearchExhausted after `retries` failed random rounds,
/// FiniteField, PreconditionFailed for n < 2 and NotQuantifierFree for quantified psi.
DemoReport demo_qe_refuter(const Formula& psi, std::size_t n, const FieldSpec& field, Flavor flavor,
                           std::size_t retries = 200, std::uint64_t seed = 1);

}  // namespace bilin
