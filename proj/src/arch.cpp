#include "momineq/arch.hpp"

#include <cmath>

namespace momineq {

double noise_abs_moment(NoiseLaw law, double p) {
  if (law == NoiseLaw::rademacher) return 1.0;
  // E|N(0,1)|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)
  return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) /
         std::sqrt(M_PI);
}

ArchProcess::ArchProcess(Params params) : params_(std::move(params)) {
  if (params_.c < 0.0) throw DomainError("ArchProcess: c must be >= 0");
  for (double cj : params_.coeffs) {
    if (cj < 0.0) throw DomainError("ArchProcess: coefficients must be >= 0");
    coeff_sum_ += cj;
  }
  if (coeff_sum_ >= 1.0)
    throw DomainError("ArchProcess: sum of coefficients must be < 1");
  if (params_.truncation_lags < 1 || params_.series_depth < 1)
    throw ArgumentError("ArchProcess: truncation parameters must be >= 1");
}

double ArchProcess::marginal_second_moment() const {
  return params_.c / (1.0 - coeff_sum_);
}

bool ArchProcess::moment_condition(double p) const {
  const double eta_p = std::pow(noise_abs_moment(params_.noise, p), 1.0 / p);
  return eta_p * eta_p * coeff_sum_ < 1.0;
}

double ArchProcess::sigma2_series(
    const std::vector<double>& eta_sq_window) const {
  const int L = std::min<int>(params_.truncation_lags,
                              static_cast<int>(eta_sq_window.size()));
  const int J = static_cast<int>(params_.coeffs.size());
  // T[l] = sum over chains with total lag l of prod c_{j_i} eta^2 terms,
  // built lag by lag: T_depth(l) = sum_j c_j eta^2_{l+j} (1 + T_{depth+1}
  // evaluated at l+j). Depth-limited dynamic program over total lag.
  std::vector<double> acc(L + 1, 0.0);  // value for chains starting at lag l
  for (int depth = params_.series_depth; depth >= 1; --depth) {
    std::vector<double> next(L + 1, 0.0);
    for (int l = 0; l <= L; ++l) {
      double s = 0.0;
      for (int j = 1; j <= J && l + j <= L; ++j) {
        const double cj = params_.coeffs[j - 1];
        if (cj == 0.0) continue;
        s += cj * eta_sq_window[l + j - 1] * (1.0 + acc[l + j]);
      }
      next[l] = s;
    }
    acc = std::move(next);
  }
  return params_.c * (1.0 + acc[0]);
}

double ArchProcess::sigma2_recursion(const std::vector<double>& eta_sq_window,
                                     int iterations) const {
  const int L = static_cast<int>(eta_sq_window.size());
  const int J = static_cast<int>(params_.coeffs.size());
  // Iterate sigma_t^2 = c + sum_j c_j X_{t-j}^2 backwards over the frozen
  // window, starting every sigma^2 at the marginal mean.
  std::vector<double> sig(L + 1, marginal_second_moment());
  for (int it = 0; it < iterations; ++it) {
    for (int l = L; l >= 0; --l) {
      double s = params_.c;
      for (int j = 1; j <= J && l + j <= L; ++j)
        s += params_.coeffs[j - 1] * sig[l + j] * eta_sq_window[l + j - 1];
      sig[l] = s;
    }
  }
  return sig[0];
}

double ArchProcess::truncation_error_bound() const {
  // Chains longer than the depth cap or reaching beyond L lags contribute at
  // most c kappa^{depth+1} / (1-kappa) in L1, kappa = sum c_j (E eta^2 = 1).
  const double kappa = coeff_sum_;
  return params_.c * std::pow(kappa, params_.series_depth + 1.0) /
         (1.0 - kappa);
}

void ArchProcess::sample_path(std::mt19937_64& rng, int n, double* out,
                              int pre) const {
  const int J = static_cast<int>(params_.coeffs.size());
  NormalSampler normal(rng);
  const int total = params_.burn_in + pre + n;
  std::vector<double> xsq(J, marginal_second_moment());  // ring of X^2
  int head = 0;
  for (int t = 0; t < total; ++t) {
    double s2 = params_.c;
    for (int j = 0; j < J; ++j) {
      // xsq[(head - 1 - j) mod J] is X_{t-1-j}^2
      const int idx = head - 1 - j >= 0 ? head - 1 - j : head - 1 - j + J;
      s2 += params_.coeffs[j] * xsq[idx];
    }
    double eta;
    if (params_.noise == NoiseLaw::normal) {
      eta = normal();
    } else {
      eta = uniform01(normal.rng()) < 0.5 ? -1.0 : 1.0;
    }
    const double x = std::sqrt(s2) * eta;
    if (J > 0) {
      xsq[head] = x * x;
      head = head + 1 == J ? 0 : head + 1;
    }
    const int emit = t - params_.burn_in;
    if (emit >= 0) out[emit] = x;
  }
}

}  // namespace momineq
