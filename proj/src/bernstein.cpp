#include "momineq/bernstein.hpp"

#include <cmath>

#include "momineq/max_moment.hpp"

namespace momineq {

double bernstein_bound(double v2, double M, double C, double n, double x) {
  const double logn = std::log(n);
  return std::exp(-C * x * x / (v2 * n + M * M + x * M * logn * logn));
}

BernsteinTailCheck bernstein_tail_check(const FiniteChain& chain,
                                        const std::vector<int>& n_grid,
                                        const BernsteinOptions& opts) {
  BernsteinTailCheck out;
  out.M = chain.f().cwiseAbs().maxCoeff();

  // Geometric mixing certificate: fit c from exact alpha at small lags.
  std::vector<int> lags;
  for (int l = 1; l <= 24; ++l) lags.push_back(l);
  const MixingProfile mp = v2_alpha(chain, n_grid.back(), lags);
  out.v2 = mp.v2;
  {
    std::vector<double> ls, la;
    for (std::size_t i = 0; i < lags.size(); ++i) {
      if (mp.alpha[i] > 1e-14) {
        ls.push_back(static_cast<double>(lags[i]));
        la.push_back(std::log(mp.alpha[i]));
      }
    }
    if (ls.empty()) {
      out.alpha_rate = std::numeric_limits<double>::infinity();  // iid
    } else {
      const SlopeFit fit = fit_slope(ls, la);
      if (fit.slope > -1e-3)
        throw PreconditionError(
            "bernstein_tail_check: alpha decay slower than geometric");
      // Linear log-alpha with small residuals certifies the geometric decay.
      double max_resid = 0.0;
      for (std::size_t i = 0; i < ls.size(); ++i)
        max_resid = std::max(
            max_resid, std::fabs(la[i] - fit.intercept - fit.slope * ls[i]));
      if (max_resid > 0.5)
        throw PreconditionError(
            "bernstein_tail_check: alpha decay is not geometric");
      out.alpha_rate = -fit.slope;
    }
  }

  const PathEnsemble ens =
      sample_paths(chain, n_grid.back(), opts.mc_paths, opts.seed);
  // x grids per n: from just above K log n to a resolvable tail depth.
  std::vector<std::vector<double>> x_grid(n_grid.size());
  const BernsteinConstants& cal = opts.constants;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const double n = n_grid[g];
    const double x_lo = cal.K * std::log(n) * 1.05;
    const double x_hi =
        std::max(6.0 * std::sqrt(out.v2 * n), 2.0 * x_lo);
    for (int j = 0; j < opts.x_points; ++j) {
      const double f = static_cast<double>(j) / (opts.x_points - 1);
      x_grid[g].push_back(x_lo * std::pow(x_hi / x_lo, f));
    }
  }
  const TailGrid tails = max_tail_mc(ens, n_grid, x_grid);

  const double N = static_cast<double>(opts.mc_paths);
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    for (std::size_t j = 0; j < x_grid[g].size(); ++j) {
      BernsteinTailCheck::Row row;
      row.n = n_grid[g];
      row.x = x_grid[g][j];
      row.empirical = tails.prob[g][j];
      row.se = std::sqrt(row.empirical * (1.0 - row.empirical) / N);
      row.bound = bernstein_bound(out.v2, out.M, cal.C, row.n, row.x);
      row.checked = row.x > cal.K * std::log(static_cast<double>(row.n));
      row.pass =
          !row.checked || row.empirical <= row.bound + 3.0 * row.se + 1e-12;
      if (!row.pass) out.pass = false;
      out.rows.push_back(row);
    }
  }
  return out;
}

}  // namespace momineq
