#pragma once

#include <optional>
#include <string>
#include <vector>

#include "momineq/chain.hpp"
#include "momineq/ensemble.hpp"

namespace momineq {

enum class ProfileMode { exact, mc };

// Per-horizon projective quantities, 1-indexed by horizon k (entry k-1):
//   A[k]    = ||E_0(S_k)||_p
//   B[k]    = ||E_0(S_k^2)||_{p/2}
//   Bc[k]   = ||E_0(S_k^2) - E(S_k^2)||_{p/2}
//   var[k]  = E(S_k^2)
//   Abar[k] = ||Ebar_{k+1}(S_k)||_p      (reversed filtration)
//   Bbar[k] = ||Ebar_{k+1}(S_k^2)||_{p/2}
struct ProjectiveProfile {
  double p = 0.0;
  std::vector<int> horizons;
  std::vector<double> A, B, Bc, var, Abar, Bbar;
  bool has_reversed = false;
  ProfileMode mode = ProfileMode::exact;
  std::size_t mc_paths = 0;
  std::vector<double> se_A, se_B, se_Bc;  // mc mode only
  bool kurtosis_warning = false;
  std::string notes;

  int max_horizon() const {
    return horizons.empty() ? 0 : horizons.back();
  }
  // Entry lookup by horizon; profiles over a dyadic grid only expose those.
  std::size_t index_of(int k) const;

  std::string to_csv() const;
};

ProjectiveProfile profile_exact(const FiniteChain& chain, double p, int n);

// Monte Carlo estimator of the same quantities on a horizon grid.
// Conditioning: finite chains and the delta/nu chain condition on the
// recorded time-0 state (exact grouping / state bins); other models regress
// on the last cond_dim pre-sample coordinates and their squares, which
// under-estimates projective norms. Reversed-filtration entries are not
// computable from forward samples and stay unavailable here.
struct ProfileMcOptions {
  int cond_dim = 32;
  int bootstrap = 400;
  std::uint64_t bootstrap_seed = 7;
  std::vector<int> horizons;  // default: dyadic up to ensemble length
  int state_bins = 64;        // delta/nu conditioning bins
};
ProjectiveProfile profile_mc(const PathEnsemble& ens, double p,
                             const ProfileMcOptions& opts = {});

// Upper bounds from individual summands; each dominates the matching exact
// profile entry.
struct GordinBounds {
  std::vector<int> horizons;
  std::vector<double> var_bound;      // 2k sum_{j<k} |E(X_0 X_j)|
  std::vector<double> cond_bound;     // sum_{l<=k} ||E_0(X_l)||_p
  std::vector<double> varsq_bound;    // double sum of centered pair terms
};
GordinBounds gordin_bounds(const FiniteChain& chain, double p, int n);

struct MixingProfile {
  std::vector<double> lambda;   // lambda(j), j = 1..jmax
  std::vector<double> cov0;     // |E(X_0 X_j)|, j = 0..n-1
  double v2 = 0.0;
  std::vector<int> alpha_lags;
  std::vector<double> alpha;    // strong mixing, exact or upper bound
  bool alpha_is_bound = false;
  std::vector<double> beta2Y;   // k = 1..kmax, clamped to [0,1]
  std::string tail_note;        // truncation certificate for the sups
};

std::vector<double> lambda_profile(const FiniteChain& chain, double p,
                                   int jmax, int sup_horizon = 64);
// v2 at horizon n plus alpha at the requested lags.
MixingProfile v2_alpha(const FiniteChain& chain, int n,
                       const std::vector<int>& alpha_lags = {});
std::vector<double> beta2Y_exact(const FiniteChain& chain, int kmax,
                                 int sup_horizon = 32);

// Martingale approximation D_0^n = (1/n) sum_i (E_1(S_i) - E_0(S_i)),
// S_k = M_k^n + R_k^n.
struct MartApprox {
  int n = 0;
  double p = 0.0;
  double d0_norm_p = 0.0;
  double r_max_norm = 0.0;          // max_{k<=n} ||R_k^n||_p
  std::vector<double> r_norm;       // per k
  double mdec_bound = 0.0;          // 2||X_0||_p + (3/n) sum ||E_0(S_i)||_p
  double projest_bound = 0.0;       // sum k^{-1/p} ||E_0(X_k)||_p
};
// Exact; residual norms require an even integer p (moment recursion).
MartApprox mart_approx(const FiniteChain& chain, double p, int n);

}  // namespace momineq
