#pragma once

#include "momineq/max_moment.hpp"
#include "momineq/model.hpp"
#include "momineq/reports.hpp"

namespace momineq {

enum class RatioMode { exact, mc, auto_select };

struct RatioOptions {
  RatioMode mode = RatioMode::auto_select;
  int mc_paths = 100000;
  std::uint64_t seed = 20240901;
  // Deliberately drop an RHS term (test power / ablation); empty = none.
  std::string drop_term;
};

// Ratio stability check for an implicit-constant inequality: LHS/RHS per n,
// bounded ratios operationalized as "no significant positive log-log trend
// at 5%" plus a finite max, recorded as the implied constant estimate.
InequalityReport check_ratio(const std::string& theorem,
                             const StationaryModel& model, double p,
                             const std::vector<int>& n_grid,
                             const RatioOptions& opts = {});

// n^{-1/p} || max |S_k| ||_p diagnostic with the martingale-approximation
// hypotheses: reports whether n^{-1/p}||S_n||_p appears to vanish and
// whether sum_n A[n]/n^{1+1/p} appears summable on the computed horizon.
struct LpMaxDiagnostic {
  std::vector<int> grid;
  std::vector<double> scaled_max_norm;   // n^{-1/p} ||max||_p
  std::vector<double> scaled_endpoint;   // n^{-1/p} ||S_n||_p
  SlopeFit max_trend;
  bool endpoint_hypothesis_ok = false;   // n^{-1/p}||S_n||_p decreasing
  bool projective_summable = false;      // tail of sum A[n]/n^{1+1/p} small
  std::string verdict;                   // converging | hypothesis_violated
};
LpMaxDiagnostic lp_max_convergence(const StationaryModel& model, double p,
                                   const std::vector<int>& n_grid,
                                   const RatioOptions& opts = {});

}  // namespace momineq
