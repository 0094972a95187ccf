#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "momineq/profiles.hpp"

namespace momineq {

// Named additive right-hand-side terms, constant-free; the implied constant
// lives in the report, never here.
struct RhsTerms {
  std::vector<std::string> names;
  // values[term][grid index]
  std::vector<std::vector<double>> values;
  std::vector<double> total() const;
};

// Extra ingredients a theorem may need beyond the projective profile.
struct RhsExtras {
  double e_abs_p = std::numeric_limits<double>::quiet_NaN();  // E|X_1|^p
  double e_x2 = std::numeric_limits<double>::quiet_NaN();     // E X_0^2
  double x0_norm_p = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> d0_norm_p;     // per grid n (general)
  std::vector<double> cov0;          // |E(X_0 X_j)|, j = 0..
  std::vector<double> lambda;        // lambda(j), j = 1..
  std::vector<double> e0x_norm;      // ||E_0(X_k)||_p, k = 1..
  double f2x2_nu = std::numeric_limits<double>::quiet_NaN();  // cor2markov
  double consdirect_gamma = std::numeric_limits<double>::quiet_NaN();
  double consdirect2_eps = 0.01;
};

// Theorem ids: directprop, dyadic, stateven, pinteger, mart2, general,
// burkholder, consdirect, consdirect2, corarch, cor2markov, thlin.
// The profile must cover max(grid); p-range and evenness are enforced.
RhsTerms rhs_build(const std::string& theorem, const ProjectiveProfile& prof,
                   const RhsExtras& extras, const std::vector<int>& grid);

bool rhs_theorem_known(const std::string& theorem);
// LHS scale: true when the report compares E max |S|^p (p-th moment scale),
// false when it compares ||max |S|||_p (norm scale; consdirect only).
bool rhs_moment_scale(const std::string& theorem);
std::vector<std::string> rhs_theorem_list();

// delta = min(1, 1/(p-2)) for the direct bound; c = 0 for p >= 4.
double directprop_delta(double p);
double directprop_c(double p);

// Extras assembled from a finite chain (exact moments).
RhsExtras chain_extras(const FiniteChain& chain, double p, int n_max,
                       const std::string& theorem);

}  // namespace momineq
