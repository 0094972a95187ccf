#pragma once

#include <random>
#include <string>
#include <vector>

#include "momineq/common.hpp"

namespace momineq {

enum class NoiseLaw { normal, rademacher };

double noise_abs_moment(NoiseLaw law, double p);  // E|eta|^p

// ARCH(infinity): X_n = sigma_n eta_n with
// sigma_n^2 = c + sum_j c_j X_{n-j}^2, sum c_j < 1, E eta = 0, E eta^2 = 1.
// A stationary sequence of martingale differences.
class ArchProcess {
 public:
  struct Params {
    double c = 1.0;
    std::vector<double> coeffs;  // c_1, c_2, ...
    NoiseLaw noise = NoiseLaw::normal;
    int truncation_lags = 64;   // L: series cutoff in total lag
    int series_depth = 8;       // max chain length in the stationary series
    int burn_in = 640;
  };

  explicit ArchProcess(Params params);

  const Params& params() const { return params_; }
  double coeff_sum() const { return coeff_sum_; }

  // E X_0^2 = c / (1 - sum c_j).
  double marginal_second_moment() const;

  // Moment condition ||eta||_p^2 sum c_j < 1.
  bool moment_condition(double p) const;

  // Truncated stationary-series evaluation of sigma_n^2 on a frozen noise
  // window; window[0] is eta_{n-1}^2, window[1] is eta_{n-2}^2, ...
  double sigma2_series(const std::vector<double>& eta_sq_window) const;
  // Fixpoint iteration of the defining recursion on the same frozen window.
  double sigma2_recursion(const std::vector<double>& eta_sq_window,
                          int iterations = 64) const;
  // Geometric bound on the series truncation error.
  double truncation_error_bound() const;

  // Path of X_1..X_n after burn-in; when pre > 0 the entries
  // out[0..pre-1] hold X_{1-pre}..X_0.
  void sample_path(std::mt19937_64& rng, int n, double* out,
                   int pre = 0) const;

 private:
  Params params_;
  double coeff_sum_ = 0.0;
};

}  // namespace momineq
