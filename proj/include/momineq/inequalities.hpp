#pragma once

#include <string>
#include <vector>

#include "momineq/finite_space.hpp"

namespace momineq {

struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
  std::vector<std::pair<std::string, double>> parts;
  std::string notes;
};

// Pointwise cross-term inequalities for |x+y|^p.
//   rio:     2 <= p <= 3
//   rio34:   3 <  p <= 4
//   int:     p >= 1, x,y >= 0
//   evenint: p a positive even integer
CheckResult check_cross(double x, double y, double p,
                        const std::string& variant);

// Moment estimates E(X0^u X1^{p-u}) for positive identically distributed
// X0, X1 with X0 measurable for g. 0 <= u <= p-2 uses the power-pair bound;
// u = p-1 uses the conditional-variance bound.
CheckResult check_basic(const FiniteSpace& space, const Rv& x0, const Rv& x1,
                        const PartitionSigma& g, double p, double u);

// sup_{s,t} |P(Yi <= t, Yj <= s | F0) - P(Yi <= t, Yj <= s)|, exact by a sup
// over the finitely many level sets.
Rv conditional_bivariate_gap(const FiniteSpace& space, const Rv& yi,
                             const Rv& yj, const PartitionSigma& sigma0);

// Covariance bounds through the bivariate gaps. dh/dg are the total
// variations of the BV functions whose values at Y are h_of_y / g_of_y.
CheckResult check_covbeta_item1(const FiniteSpace& space, const Rv& z,
                                const Rv& yi, const Rv& h_of_y,
                                const PartitionSigma& sigma0, double dh);
CheckResult check_covbeta_item2(const FiniteSpace& space, const Rv& z,
                                const Rv& yi, const Rv& yj, const Rv& h_of_y,
                                const Rv& g_of_y, const PartitionSigma& sigma0,
                                double dh, double dg);

// C-subadditive sequence inequalities (V_0 = 0, V_{i+j} <= C (V_i + V_j)).
struct SubaddParams {
  int n = 0;        // items 1 and 3
  double q = 1.0;   // all items
  int k = 0, m = 0; // item 2
  double gamma = 1.0, delta = 1.0;  // item 3
};
CheckResult check_subadd(const std::vector<double>& V, double C, int item,
                         const SubaddParams& params);

// Exact maximal inequalities for an adapted sequence on a finite space.
// Variants:
//   prop21:    dyadic two-scale bound, any adapted sequence (padded to 2^r)
//   cormaxstat, maxdyadic, cons1sub: stationary forms using ||E(S_j|F_0)||_p
struct MaximalOptions {
  double rel_tol = 1e-9;
};
CheckResult check_maximal_explicit(const FiniteSpace& space,
                                   const Filtration& filt,
                                   std::vector<Rv> xs, double p,
                                   const std::string& variant,
                                   const MaximalOptions& opts = {});

// Tail bounds P(max |S_m| >= 2x) (form 1) and >= 4x (form 2, bounded case).
// phi: "power:s" or "exp:c". Form 2 consumes xs beyond 2^r up to 2^r + v.
struct MaximalProbaResult {
  std::vector<double> x;
  std::vector<double> tail;
  std::vector<double> bound;
  bool pass = true;
  std::string variant;
};
MaximalProbaResult check_maximal_proba(const FiniteSpace& space,
                                       const Filtration& filt,
                                       const std::vector<Rv>& xs, double p,
                                       const std::string& phi_id,
                                       const std::vector<double>& x_grid,
                                       int form = 1);

}  // namespace momineq
