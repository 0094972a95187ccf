#include "momineq/density.hpp"

#include <algorithm>
#include <cmath>

#include "momineq/profiles.hpp"

namespace momineq {

namespace {

double quad_integral(const std::function<double(double)>& f, double lo,
                     double hi, int n) {
  const double dx = (hi - lo) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(lo + (i + 0.5) * dx);
  return s * dx;
}

}  // namespace

KernelSpec make_kernel(const std::string& name, double p) {
  if (p < 2.0) throw DomainError("make_kernel: p must be >= 2");
  KernelSpec k;
  k.name = name;
  if (name == "rectangular") {
    k.order = 1;
    k.total_variation = 1.0;  // two jumps of 1/2
    k.eval = [](double u) { return std::fabs(u) <= 1.0 ? 0.5 : 0.0; };
    k.cdf = [](double u) {
      return u <= -1.0 ? 0.0 : (u >= 1.0 ? 1.0 : 0.5 * (u + 1.0));
    };
    auto m = [](double q) { return 2.0 * std::pow(0.5, q); };
    k.int_abs = m(1.0);
    k.int_abs_p = m(p);
    k.int_abs_pm1 = m(p - 1.0);
    k.int_abs_pm2 = m(p - 2.0);
  } else if (name == "triangular") {
    k.order = 1;
    k.total_variation = 2.0;
    k.eval = [](double u) {
      const double a = std::fabs(u);
      return a <= 1.0 ? 1.0 - a : 0.0;
    };
    k.cdf = [](double u) {
      if (u <= -1.0) return 0.0;
      if (u >= 1.0) return 1.0;
      return u <= 0.0 ? 0.5 * (1.0 + u) * (1.0 + u)
                      : 1.0 - 0.5 * (1.0 - u) * (1.0 - u);
    };
    auto m = [](double q) { return 2.0 / (q + 1.0); };
    k.int_abs = m(1.0);
    k.int_abs_p = m(p);
    k.int_abs_pm1 = m(p - 1.0);
    k.int_abs_pm2 = m(p - 2.0);
  } else if (name == "quartic") {
    // (15/16)(1-u^2)^2 on [-1,1]; symmetric with vanishing first moment and
    // nonvanishing second used at order 2 in the bias rate.
    k.order = 2;
    k.total_variation = 2.0 * 15.0 / 16.0;
    k.eval = [](double u) {
      const double a = std::fabs(u);
      if (a > 1.0) return 0.0;
      const double w = 1.0 - u * u;
      return 15.0 / 16.0 * w * w;
    };
    k.cdf = [](double u) {
      if (u <= -1.0) return 0.0;
      if (u >= 1.0) return 1.0;
      // integral of (15/16)(1-t^2)^2 from -1 to u
      auto F = [](double t) {
        return 15.0 / 16.0 * (t - 2.0 * t * t * t / 3.0 + t * t * t * t * t / 5.0);
      };
      return F(u) - F(-1.0);
    };
    auto m = [&](double q) {
      return quad_integral(
          [&](double u) { return std::pow(k.eval(u), q); }, -1.0, 1.0,
          200000);
    };
    k.int_abs = 1.0;
    k.int_abs_p = m(p);
    k.int_abs_pm1 = m(p - 1.0);
    k.int_abs_pm2 = m(p - 2.0);
  } else {
    throw ArgumentError("unknown kernel: " + name);
  }
  // Assumption check: the tabulated integrals agree with quadrature.
  for (auto [stored, q] :
       {std::pair{k.int_abs, 1.0}, std::pair{k.int_abs_p, p}}) {
    const double num = quad_integral(
        [&](double u) { return std::pow(std::fabs(k.eval(u)), q); }, -1.0,
        1.0, 200000);
    if (!std::isfinite(stored) || std::fabs(num - stored) > 1e-6)
      throw NumericError("kernel integral cross-validation failed for " +
                         name);
  }
  return k;
}

namespace {

struct MarginalModel {
  std::function<double(double)> density;
  double sup_density = 0.0;
  double support_lo = 0.0, support_hi = 0.0;
  std::function<double(std::mt19937_64&, int, double*)> sample;  // path
};

MarginalModel marginal_of(const StationaryModel& model) {
  MarginalModel mm;
  if (std::holds_alternative<DeltaNuChain>(model)) {
    const DeltaNuChain& dn = std::get<DeltaNuChain>(model);
    mm.density = [&dn](double x) { return dn.pi_density(x); };
    mm.sup_density = dn.pi_density_sup();
    mm.support_lo = -1.0;
    mm.support_hi = 1.0;
    mm.sample = [&dn](std::mt19937_64& rng, int n, double* out) {
      // Raw states, not the observable: the density experiment estimates
      // the marginal law of the chain itself.
      double x = dn.draw_stationary(rng);
      for (int t = 0; t < n; ++t) {
        x = dn.step(rng, x);
        out[t] = x;
      }
      return x;
    };
  } else if (std::holds_alternative<IidUniform>(model)) {
    mm.density = [](double x) { return x >= 0.0 && x <= 1.0 ? 1.0 : 0.0; };
    mm.sup_density = 1.0;
    mm.support_lo = 0.0;
    mm.support_hi = 1.0;
    mm.sample = [](std::mt19937_64& rng, int n, double* out) {
      for (int t = 0; t < n; ++t) out[t] = uniform01(rng);
      return out[0];
    };
  } else {
    throw UnavailableError(
        "estimate_risk: model must have a known marginal density "
        "(delta/nu chain or iid uniform)");
  }
  return mm;
}

}  // namespace

DensityRiskResult estimate_risk(const StationaryModel& model,
                                const KernelSpec& kernel, int n, double h,
                                double p, const DensityOptions& opts) {
  if (h <= 0.0) throw DomainError("estimate_risk: h must be positive");
  if (n < 1) throw DomainError("estimate_risk: n must be >= 1");
  if (p < 1.0) throw DomainError("estimate_risk: p must be >= 1");
  const MarginalModel mm = marginal_of(model);

  DensityRiskResult res;
  res.n = n;
  res.h = h;
  res.p = p;

  const double lo = mm.support_lo - opts.pad_bandwidths * h;
  const double hi = mm.support_hi + opts.pad_bandwidths * h;
  const int G = opts.grid_nodes;
  const double dx = (hi - lo) / G;

  // Cell-averaged E f_n on the grid via the kernel CDF against the exact
  // sampling law. For the discretized delta/nu chain that law is the grid
  // pi; for iid uniform it is the continuous density.
  std::vector<double> mean_fn(G, 0.0);
  auto deposit = [&](double y, double w, std::vector<double>& into) {
    // cells intersecting [y-h, y+h]
    int j0 = static_cast<int>(std::floor((y - h - lo) / dx));
    int j1 = static_cast<int>(std::ceil((y + h - lo) / dx));
    j0 = std::max(j0, 0);
    j1 = std::min(j1, G);
    double prev = kernel.cdf((lo + j0 * dx - y) / h);
    for (int j = j0; j < j1; ++j) {
      const double next = kernel.cdf((lo + (j + 1) * dx - y) / h);
      into[j] += w * (next - prev) / dx;  // cell average of K_h(. - y)
      prev = next;
    }
  };
  if (std::holds_alternative<DeltaNuChain>(model)) {
    const DeltaNuChain& dn = std::get<DeltaNuChain>(model);
    for (std::size_t i = 0; i < dn.nodes().size(); ++i)
      deposit(dn.nodes()[i], dn.pi_masses()[i], mean_fn);
  } else {
    // iid uniform: E f_n(x) = (K_h * f)(x), cell-averaged by fine midpoint.
    for (int sub = 0; sub < 64; ++sub) {
      const double y = (sub + 0.5) / 64.0;
      deposit(y, 1.0 / 64.0, mean_fn);
    }
  }

  // MC replications of the integrated random term.
  const std::size_t R = static_cast<std::size_t>(opts.replications);
  std::vector<double> risks(R, 0.0);
  parallel_chunks(R, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<double> fn(G);
    std::vector<double> ys(n);
    for (std::size_t r = b; r < e; ++r) {
      auto rng = path_rng(opts.seed, r);
      std::fill(fn.begin(), fn.end(), 0.0);
      mm.sample(rng, n, ys.data());
      const double w = 1.0 / static_cast<double>(n);
      for (int t = 0; t < n; ++t) deposit(ys[t], w, fn);
      double acc = 0.0;
      for (int j = 0; j < G; ++j)
        acc += std::pow(std::fabs(fn[j] - mean_fn[j]), p);
      risks[r] = acc * dx;
    }
  });
  res.risk = mean_of(risks);
  if (R >= 2) {
    res.se = sd_of(risks) / std::sqrt(static_cast<double>(R));
  } else {
    res.se_defined = false;
    res.notes += "single replication: se undefined; ";
  }

  // Bias against the continuous marginal density.
  double bias = 0.0;
  for (int j = 0; j < G; ++j) {
    const double x = lo + (j + 0.5) * dx;
    bias += std::pow(std::fabs(mm.density(x) - mean_fn[j]), p);
  }
  res.bias = bias * dx;

  const double nh = static_cast<double>(n) * h;
  res.rhs_variance_term = std::pow(nh, -p / 2.0) *
                          std::pow(kernel.total_variation, p / 2.0) *
                          std::pow(mm.sup_density, p / 2.0 - 1.0) *
                          std::pow(kernel.int_abs, p / 2.0);
  res.rhs_linear_term =
      std::pow(nh, 1.0 - p) *
      (kernel.int_abs_p + kernel.total_variation * kernel.int_abs_pm1 +
       kernel.total_variation * kernel.total_variation * kernel.int_abs_pm2);
  return res;
}

bool density_rhs_holds(const DensityRiskResult& r,
                       const DensityConstants& cal) {
  const double rhs = cal.safety * (cal.C1 * r.rhs_variance_term +
                                   cal.C2 * r.rhs_linear_term);
  return r.risk <= rhs + 3.0 * r.se;
}

SlopeFit rate_fit(const std::vector<DensityRiskResult>& results) {
  if (results.size() < 4)
    throw ArgumentError("rate_fit: need at least 4 grid points");
  std::vector<double> ns, totals;
  for (const auto& r : results) {
    ns.push_back(static_cast<double>(r.n));
    totals.push_back(r.risk + r.bias);
  }
  // Span check: at least a factor 16 (two decades of dyadic points).
  const auto [mn, mx] = std::minmax_element(ns.begin(), ns.end());
  if (*mx / *mn < 16.0)
    throw ArgumentError("rate_fit: n grid must span at least a factor 16");
  bool all_same = true;
  for (double t : totals)
    if (std::fabs(t - totals.front()) > 1e-15 * std::fabs(totals.front()))
      all_same = false;
  if (all_same) {
    SlopeFit flat;
    flat.n = ns.size();
    return flat;
  }
  return fit_loglog_slope(ns, totals);
}

std::vector<double> beta2Y_profile(const StationaryModel& model, int n_max) {
  std::vector<double> out(n_max, 0.0);
  if (std::holds_alternative<DeltaNuChain>(model)) {
    const DeltaNuChain& dn = std::get<DeltaNuChain>(model);
    for (int k = 1; k <= n_max; ++k) out[k - 1] = dn.beta2_bound(k);
  } else if (is_finite_chain(model)) {
    out = beta2Y_exact(as_chain(model), n_max);
  } else if (std::holds_alternative<IidUniform>(model)) {
    // independent: all coefficients vanish
  } else {
    throw UnavailableError("beta2Y_profile: unsupported model");
  }
  return out;
}

std::string density_plot_script(const std::string& csv_name) {
  std::string s;
  s += "# gnuplot script for the density risk table\n";
  s += "set datafile separator ','\n";
  s += "set logscale xy\n";
  s += "set xlabel 'n'\n";
  s += "set ylabel 'risk'\n";
  s += "plot '" + csv_name + "' every ::1 using 1:3 with linespoints title "
       "'risk', '' every ::1 using 1:($3+$5) with linespoints title "
       "'risk+bias', '' every ::1 using 1:6 with lines title 'rhs'\n";
  return s;
}

}  // namespace momineq
