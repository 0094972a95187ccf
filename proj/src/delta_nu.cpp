#include "momineq/delta_nu.hpp"

#include <algorithm>
#include <cmath>

namespace momineq {

double DeltaNuChain::unnormalized_nu_density(double x) const {
  const double a = params_.p / 2.0 - 1.0;
  return std::pow(x, a) * std::pow(std::log1p(1.0 / x), -params_.lambda);
}

DeltaNuChain::DeltaNuChain(Params params) : params_(params) {
  if (params_.p <= 2.0)
    throw DomainError("DeltaNuChain: p must exceed 2 for finite theta");
  if (params_.lambda <= 0.0)
    throw DomainError("DeltaNuChain: lambda must be positive");
  if (params_.grid_nodes < 16)
    throw ArgumentError("DeltaNuChain: grid too coarse");

  auto build = [this](int half_nodes, std::vector<double>& nodes,
                      std::vector<double>& widths,
                      std::vector<double>& nu_mass,
                      std::vector<double>& pi_mass, double& theta_out) {
    // Log-spaced cells on (x_min, 1], mirrored to the negative side.
    const double lo = std::log(params_.x_min);
    const double hi = 0.0;
    const double step = (hi - lo) / half_nodes;
    std::vector<double> pos_nodes(half_nodes), pos_w(half_nodes),
        pos_nu(half_nodes);
    double nu_half = 0.0;
    for (int i = 0; i < half_nodes; ++i) {
      const double a = std::exp(lo + i * step);
      const double b = std::exp(lo + (i + 1) * step);
      pos_nodes[i] = 0.5 * (a + b);
      pos_w[i] = b - a;
      pos_nu[i] = unnormalized_nu_density(pos_nodes[i]) * pos_w[i];
      nu_half += pos_nu[i];
    }
    // Symmetric law: each half carries mass 1/2.
    for (double& m : pos_nu) m *= 0.5 / nu_half;
    nodes.resize(2 * half_nodes);
    widths.resize(2 * half_nodes);
    nu_mass.resize(2 * half_nodes);
    pi_mass.resize(2 * half_nodes);
    for (int i = 0; i < half_nodes; ++i) {
      nodes[half_nodes - 1 - i] = -pos_nodes[i];
      widths[half_nodes - 1 - i] = pos_w[i];
      nu_mass[half_nodes - 1 - i] = pos_nu[i];
      nodes[half_nodes + i] = pos_nodes[i];
      widths[half_nodes + i] = pos_w[i];
      nu_mass[half_nodes + i] = pos_nu[i];
    }
    double theta = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      theta += nu_mass[i] / std::fabs(nodes[i]);
    theta_out = theta;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      pi_mass[i] = nu_mass[i] / std::fabs(nodes[i]) / theta;
  };

  build(params_.grid_nodes / 2, nodes_, widths_, nu_masses_, pi_masses_,
        theta_);

  // Refinement probe for the accuracy marker.
  {
    std::vector<double> n2, w2, nu2, pi2;
    double theta2 = 0.0;
    build(params_.grid_nodes, n2, w2, nu2, pi2, theta2);
    quadrature_drift_ = std::fabs(theta2 - theta_) / theta2;
  }

  nu_cdf_.resize(nodes_.size());
  pi_cdf_.resize(nodes_.size());
  double cn = 0.0, cp = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    cn += nu_masses_[i];
    cp += pi_masses_[i];
    nu_cdf_[i] = cn;
    pi_cdf_[i] = cp;
  }
  nu_cdf_.back() = 1.0;
  pi_cdf_.back() = 1.0;

  for (std::size_t i = 0; i < nodes_.size(); ++i)
    pi_density_sup_ =
        std::max(pi_density_sup_, pi_masses_[i] / widths_[i]);

  // Normalizer of the continuous nu density, for pi_density(): the mirrored
  // density is g(|x|)/nu_norm with nu_norm = 2 * int_0^1 g.
  nu_norm_ = 0.0;
  for (std::size_t i = nodes_.size() / 2; i < nodes_.size(); ++i)
    nu_norm_ += unnormalized_nu_density(nodes_[i]) * widths_[i];
  nu_norm_ *= 2.0;
}

double DeltaNuChain::observable(double x) {
  return x >= 0.0 ? std::sqrt(x) : -std::sqrt(-x);
}

double DeltaNuChain::f2_over_x2_nu() const {
  // f^2(x)/x^2 = 1/|x| for the shipped observable, so this is theta.
  return theta_;
}

std::vector<double> DeltaNuChain::delta_nu_cond(int k) const {
  if (k < 0) throw ArgumentError("delta_nu_cond: negative horizon");
  std::vector<double> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    out[i] = std::pow(1.0 - std::fabs(nodes_[i]), k) * observable(nodes_[i]);
  return out;
}

double DeltaNuChain::delta_nu_cond_at(double x, int k) const {
  return std::pow(1.0 - std::fabs(x), k) * observable(x);
}

double DeltaNuChain::beta2_bound(int n) const {
  if (n < 1) throw ArgumentError("beta2_bound: n must be >= 1");
  const int e = n / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    s += std::pow(1.0 - std::fabs(nodes_[i]), e) * pi_masses_[i];
  return std::clamp(3.0 * s, 0.0, 1.0);
}

double DeltaNuChain::pi_density(double x) const {
  const double ax = std::fabs(x);
  if (ax <= 0.0 || ax > 1.0) return 0.0;
  return unnormalized_nu_density(ax) / (nu_norm_ * ax * theta_);
}

double DeltaNuChain::draw_stationary(std::mt19937_64& rng) const {
  const double u = uniform01(rng);
  const std::size_t i =
      std::lower_bound(pi_cdf_.begin(), pi_cdf_.end(), u) - pi_cdf_.begin();
  return nodes_[std::min(i, nodes_.size() - 1)];
}

double DeltaNuChain::draw_nu(std::mt19937_64& rng) const {
  const double u = uniform01(rng);
  const std::size_t i =
      std::lower_bound(nu_cdf_.begin(), nu_cdf_.end(), u) - nu_cdf_.begin();
  return nodes_[std::min(i, nodes_.size() - 1)];
}

double DeltaNuChain::step(std::mt19937_64& rng, double x) const {
  return uniform01(rng) < 1.0 - std::fabs(x) ? x : draw_nu(rng);
}

double DeltaNuChain::sample_path(std::mt19937_64& rng, int n,
                                 double* out) const {
  double x = draw_stationary(rng);
  const double x0 = x;
  for (int t = 0; t < n; ++t) {
    x = step(rng, x);
    out[t] = observable(x);
  }
  return x0;
}

void DeltaNuChain::sample_path_from(std::mt19937_64& rng, double x0, int n,
                                    double* out) const {
  double x = x0;
  for (int t = 0; t < n; ++t) {
    x = step(rng, x);
    out[t] = observable(x);
  }
}

}  // namespace momineq
