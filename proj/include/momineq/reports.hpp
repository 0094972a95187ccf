#pragma once

#include <optional>
#include <string>
#include <vector>

#include "momineq/common.hpp"
#include "momineq/rhs.hpp"

namespace momineq {

// Named LHS/RHS decomposition of one inequality over an n grid.
struct InequalityReport {
  std::string name;
  double p = 0.0;
  std::vector<int> grid;
  std::vector<double> lhs;
  std::vector<double> lhs_se;
  RhsTerms rhs_terms;
  std::vector<double> rhs_total;
  std::vector<double> ratio;
  std::optional<double> explicit_constant;
  double implied_constant_estimate = 0.0;
  bool pass = false;
  bool moment_scale = true;
  SlopeFit ratio_slope;
  std::string mode;   // exact | mc | mixed
  std::vector<std::string> notes;
  std::uint64_t seed = 0;
  std::string config_hash;

  std::string to_json() const;
  std::string to_text() const;
};

std::string reports_to_json(const std::vector<InequalityReport>& reports,
                            const std::string& config_hash,
                            std::uint64_t seed);

}  // namespace momineq
