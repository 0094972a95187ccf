#include "momineq/linear_process.hpp"

#include <cmath>

#include "momineq/arch.hpp"

namespace momineq {

LinearFunctionalProcess::LinearFunctionalProcess(Params params)
    : params_(std::move(params)) {
  if (params_.coeffs.empty())
    throw ArgumentError("LinearFunctionalProcess: empty coefficient window");
  if (params_.h_gamma <= 0.0 || params_.h_gamma > 1.0)
    throw DomainError("LinearFunctionalProcess: gamma must lie in (0,1]");
  if (params_.h_alpha < 0.0)
    throw DomainError("LinearFunctionalProcess: alpha must be >= 0");
  for (double a : params_.coeffs) a2_ += a * a;
  if (!std::isfinite(a2_))
    throw DomainError("LinearFunctionalProcess: coefficients not summable");
}

double LinearFunctionalProcess::h(double x) const {
  const double e = params_.h_gamma + params_.h_alpha;
  const double v = params_.h_C * std::pow(std::fabs(x), e);
  return x >= 0.0 ? v : -v;
}

std::vector<double> LinearFunctionalProcess::gamma_holder_partial_sums(
    double p, double lambda) const {
  const std::size_t W = params_.coeffs.size();
  std::vector<double> tail(W + 1, 0.0);
  for (std::size_t i = W; i-- > 0;)
    tail[i] = tail[i + 1] + params_.coeffs[i] * params_.coeffs[i];
  std::vector<double> partial;
  partial.reserve(W);
  double acc = 0.0;
  for (std::size_t i = 1; i < W; ++i) {
    acc += std::pow(static_cast<double>(i), 1.0 - 2.0 / p) *
           std::pow(std::log(static_cast<double>(i) + 1.0), lambda) *
           std::pow(tail[i], params_.h_gamma / 2.0);
    partial.push_back(acc);
  }
  return partial;
}

void LinearFunctionalProcess::sample_path(std::mt19937_64& rng, int n,
                                          double* out, int pre) const {
  const int W = static_cast<int>(params_.coeffs.size());
  const int total = pre + n;
  // eps_{1-pre-W+1} .. eps_{n}; innovation index t maps to eps[t + pre + W - 1].
  std::vector<double> eps(total + W - 1);
  NormalSampler normal(rng);
  for (double& e : eps) {
    if (params_.noise == NoiseLaw::normal)
      e = normal();
    else
      e = uniform01(normal.rng()) < 0.5 ? -1.0 : 1.0;
  }
  // Symmetric innovations and an odd h give E h = 0; the process is emitted
  // centered by construction.
  for (int t = 0; t < total; ++t) {
    double s = 0.0;
    for (int i = 0; i < W; ++i) s += params_.coeffs[i] * eps[t + W - 1 - i];
    out[t] = h(s);
  }
}

}  // namespace momineq
