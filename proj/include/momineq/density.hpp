#pragma once

#include <functional>
#include <string>
#include <vector>

#include "momineq/ensemble.hpp"
#include "momineq/model.hpp"

namespace momineq {

// Kernel with tabulated total variation and |K|^m integrals, cross-checked
// by quadrature at construction. Shipped: rectangular, triangular (order 1)
// and a quartic order-2 kernel, all supported on [-1, 1].
struct KernelSpec {
  std::string name;
  int order = 1;
  double total_variation = 0.0;      // ||dK||
  double int_abs = 0.0;              // int |K|
  double int_abs_p = 0.0;            // int |K|^p
  double int_abs_pm1 = 0.0;          // int |K|^{p-1}
  double int_abs_pm2 = 0.0;          // int |K|^{p-2}
  std::function<double(double)> eval;
  std::function<double(double)> cdf;  // int_{-inf}^u K
};

KernelSpec make_kernel(const std::string& name, double p);

// Calibrated once on i.i.d. data; the dependent-case check multiplies by a
// safety factor of 4 (see density_rhs_holds).
struct DensityConstants {
  double C1 = 2.0;
  double C2 = 1.1;
  double safety = 4.0;
};

struct DensityRiskResult {
  int n = 0;
  double h = 0.0;
  double p = 0.0;
  double risk = 0.0;       // E int |f_n - E f_n|^p, MC over replications
  double se = 0.0;
  double bias = 0.0;       // int |f - E f_n|^p, quadrature
  double rhs_variance_term = 0.0;  // (nh)^{-p/2} ||dK||^{p/2} ... (no C1)
  double rhs_linear_term = 0.0;    // (nh)^{1-p} (...)          (no C2)
  bool se_defined = true;
  std::string notes;
};

struct DensityOptions {
  int replications = 200;
  std::uint64_t seed = 99;
  int grid_nodes = 2048;
  double pad_bandwidths = 5.0;  // grid extends support by this many h
};

// Marginal density and sampler of the model (delta/nu chain or iid uniform).
DensityRiskResult estimate_risk(const StationaryModel& model,
                                const KernelSpec& kernel, int n, double h,
                                double p, const DensityOptions& opts = {});

bool density_rhs_holds(const DensityRiskResult& r,
                       const DensityConstants& cal = {});

// Least-squares slope of log total risk (risk + bias) against log n.
SlopeFit rate_fit(const std::vector<DensityRiskResult>& results);

// Weak beta-dependence profile: exact for finite chains, quadrature bound
// for the delta/nu chain, zero for iid; clamped to [0,1].
std::vector<double> beta2Y_profile(const StationaryModel& model, int n_max);

// Gnuplot companion script for the CSV emitted by the CLI.
std::string density_plot_script(const std::string& csv_name);

}  // namespace momineq
