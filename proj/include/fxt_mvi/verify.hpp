#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fxt_mvi {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Randomised self-checks of the numerical building blocks (norms, proximal
/// maps, operators, certificate algebra, solver degeneracies). Deterministic
/// in `seed`; takes well under a second.
std::vector<PropertyResult> run_property_suite(std::uint64_t seed);

}  // namespace fxt_mvi
