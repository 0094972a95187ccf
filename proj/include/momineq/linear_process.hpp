#pragma once

#include <random>
#include <string>
#include <vector>

#include "momineq/common.hpp"

namespace momineq {

// Functional of a causal linear process:
//   X_k = h(sum_{i>=0} a_i eps_{k-i}) - E h(...)
// with i.i.d. innovations and h from the shipped power family
// h(x) = sign(x) |x|^{gamma + alpha}, whose modulus of continuity satisfies
// w_h(t, M) <= C t^gamma M^alpha on [-M, M].
class LinearFunctionalProcess {
 public:
  struct Params {
    std::vector<double> coeffs;        // a_0, a_1, ... (truncated window)
    double h_C = 1.0;
    double h_gamma = 1.0;              // Hoelder exponent in (0,1]
    double h_alpha = 0.0;              // growth exponent, >= 0
    NoiseLaw noise = NoiseLaw::normal; // symmetric, so E h(...) = 0 exactly
  };

  explicit LinearFunctionalProcess(Params params);

  const Params& params() const { return params_; }
  double coeff_sq_sum() const { return a2_; }
  double h(double x) const;

  // Partial sums of the Hoelder condition series
  //   sum_i i^{1-2/p} (log i)^lambda (sum_{j>=i} a_j^2)^{gamma/2}
  // evaluated on the truncated window; the caller inspects the tail.
  std::vector<double> gamma_holder_partial_sums(double p,
                                                double lambda) const;

  // Path of X_1..X_n; when pre > 0 the first pre entries hold
  // X_{1-pre}..X_0. The innovation window is materialized per path.
  void sample_path(std::mt19937_64& rng, int n, double* out,
                   int pre = 0) const;

 private:
  Params params_;
  double a2_ = 0.0;
};

}  // namespace momineq
