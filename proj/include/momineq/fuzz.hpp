#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "momineq/inequalities.hpp"

namespace momineq {

struct FuzzReport {
  std::string suite;
  long long draws = 0;
  long long violations = 0;
  std::string first_witness;
  bool vacuous = false;  // zero budget
  bool pass() const { return violations == 0; }
};

// Pointwise |x+y|^p bounds over all four variants.
FuzzReport fuzz_cross(long long draws, std::uint64_t seed,
                      bool inject_failure = false);
// Exchangeable positive pairs on small exact spaces, power-pair bounds.
FuzzReport fuzz_basic(long long draws, std::uint64_t seed);
// Covariance bounds with step-function h, g on random exact spaces.
FuzzReport fuzz_covbeta(long long draws, std::uint64_t seed);
// C-subadditive arrays, items 1-3.
FuzzReport fuzz_subadd(long long draws, std::uint64_t seed);
// Adapted sequences on random small chains, dyadic maximal inequalities
// (prop21 / cormaxstat / maxdyadic / cons1sub) and the tail forms.
FuzzReport fuzz_maximal(long long draws, std::uint64_t seed,
                        const std::vector<double>& p_values = {2.0, 2.5, 3.0,
                                                               4.0});
FuzzReport fuzz_maximal_proba(long long draws, std::uint64_t seed);

}  // namespace momineq
