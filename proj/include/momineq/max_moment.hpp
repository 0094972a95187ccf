#pragma once

#include <string>
#include <vector>

#include "momineq/chain.hpp"
#include "momineq/ensemble.hpp"

namespace momineq {

enum class MaxMethod { exact_dp, enumerate, mc, auto_select };

struct MaxMomentResult {
  double value = 0.0;
  double se = 0.0;  // 0 for exact methods
  std::string method;
};

// E(max_{1<=j<=n} |S_j|^p) for a finite chain.
//
// enumerate walks all |states|^n trajectories (atom cap applies).
// exact_dp runs the joint dynamic program over (state, partial sum, running
// max) for lattice-valued observables; exact up to float summation.
// mc samples N paths. auto_select picks exact_dp under the cost caps below,
// otherwise mc.
struct MaxMomentOptions {
  int mc_paths = 100000;
  std::uint64_t seed = 20240901;
  // auto_select switches to mc above these.
  std::size_t dp_max_entries = std::size_t{1} << 22;
  double dp_max_transitions = 2e8;
};

MaxMomentResult max_moment(const FiniteChain& chain, double p, int n,
                           MaxMethod method,
                           const MaxMomentOptions& opts = {});

// The method auto_select resolves to for this chain and horizon.
MaxMethod resolve_max_method(const FiniteChain& chain, int n,
                             const MaxMomentOptions& opts = {});

// One pass over an ensemble: E(max_{1<=j<=n}|S_j|^p) with asymptotic se for
// every n in an increasing grid.
struct MaxMomentGrid {
  std::vector<int> grid;
  std::vector<double> value;
  std::vector<double> se;
};
MaxMomentGrid max_moment_mc_grid(const PathEnsemble& ens, double p,
                                 const std::vector<int>& grid);

// Empirical tail P(max_{1<=k<=n}|S_k| >= x) on a (n, x) grid, one pass.
struct TailGrid {
  std::vector<int> n_grid;
  std::vector<std::vector<double>> x_grid;  // per n
  std::vector<std::vector<double>> prob;    // per n, per x
};
TailGrid max_tail_mc(const PathEnsemble& ens, const std::vector<int>& n_grid,
                     const std::vector<std::vector<double>>& x_grid);

}  // namespace momineq
