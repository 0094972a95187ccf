#include "momineq/ratio.hpp"

#include <cmath>

#include "momineq/profiles.hpp"

namespace momineq {

namespace {

struct LhsResult {
  std::vector<double> value;  // E max^p per grid n
  std::vector<double> se;
  std::string mode;
};

LhsResult lhs_max_moment(const StationaryModel& model,
                         const std::vector<int>& grid, double p,
                         const RatioOptions& opts) {
  LhsResult out;
  out.value.resize(grid.size());
  out.se.assign(grid.size(), 0.0);
  if (is_finite_chain(model) && opts.mode != RatioMode::mc) {
    const FiniteChain& chain = as_chain(model);
    MaxMomentOptions mopts;
    mopts.mc_paths = opts.mc_paths;
    mopts.seed = opts.seed;
    bool any_exact = false, any_mc = false;
    // One shared ensemble serves every MC point.
    std::optional<MaxMomentGrid> mc;
    std::vector<int> mc_points;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const MaxMethod method = opts.mode == RatioMode::exact
                                   ? MaxMethod::exact_dp
                                   : resolve_max_method(chain, grid[g], mopts);
      if (method == MaxMethod::mc) {
        mc_points.push_back(static_cast<int>(g));
        any_mc = true;
      } else {
        out.value[g] = max_moment(chain, p, grid[g], method, mopts).value;
        any_exact = true;
      }
    }
    if (!mc_points.empty()) {
      const PathEnsemble ens =
          sample_paths(model, grid.back(), opts.mc_paths, opts.seed);
      std::vector<int> sub;
      for (int g : mc_points) sub.push_back(grid[g]);
      const MaxMomentGrid mg = max_moment_mc_grid(ens, p, sub);
      for (std::size_t i = 0; i < mc_points.size(); ++i) {
        out.value[mc_points[i]] = mg.value[i];
        out.se[mc_points[i]] = mg.se[i];
      }
    }
    out.mode = any_exact && any_mc ? "mixed" : (any_mc ? "mc" : "exact");
    return out;
  }
  const PathEnsemble ens =
      sample_paths(model, grid.back(), opts.mc_paths, opts.seed);
  const MaxMomentGrid mg = max_moment_mc_grid(ens, p, grid);
  out.value = mg.value;
  out.se = mg.se;
  out.mode = "mc";
  return out;
}

void require_compatible(const std::string& theorem,
                        const StationaryModel& model) {
  const bool chain = is_finite_chain(model);
  const bool needs_profile =
      theorem == "directprop" || theorem == "dyadic" || theorem == "stateven" ||
      theorem == "pinteger" || theorem == "mart2" || theorem == "general" ||
      theorem == "burkholder" || theorem == "consdirect" ||
      theorem == "consdirect2";
  if (needs_profile && !chain)
    throw UnavailableError(theorem +
                           ": exact projective profile requires a finite "
                           "chain model");
  if (theorem == "corarch" && !std::holds_alternative<ArchProcess>(model))
    throw UnavailableError("corarch: model must be an ARCH process");
  if (theorem == "cor2markov" &&
      !std::holds_alternative<DeltaNuChain>(model))
    throw UnavailableError("cor2markov: model must be the delta/nu chain");
  if (theorem == "thlin" &&
      !std::holds_alternative<LinearFunctionalProcess>(model))
    throw UnavailableError("thlin: model must be a linear-process functional");
}

}  // namespace

InequalityReport check_ratio(const std::string& theorem,
                             const StationaryModel& model, double p,
                             const std::vector<int>& n_grid,
                             const RatioOptions& opts) {
  if (!rhs_theorem_known(theorem))
    throw ArgumentError("unknown theorem id: " + theorem);
  require_compatible(theorem, model);
  if (n_grid.size() < 2)
    throw ArgumentError("check_ratio: need at least two grid points");

  InequalityReport rep;
  rep.name = theorem;
  rep.p = p;
  rep.grid = n_grid;
  rep.seed = opts.seed;
  rep.moment_scale = rhs_moment_scale(theorem);
  const int n_max = n_grid.back();

  // RHS pieces.
  RhsExtras extras;
  ProjectiveProfile prof;
  prof.p = p;
  if (is_finite_chain(model)) {
    const FiniteChain& chain = as_chain(model);
    prof = profile_exact(chain, p, n_max);
    extras = chain_extras(chain, p, n_max, theorem);
    if (theorem == "general") {
      extras.d0_norm_p.resize(n_grid.size());
      for (std::size_t g = 0; g < n_grid.size(); ++g)
        extras.d0_norm_p[g] = mart_approx(chain, p, n_grid[g]).d0_norm_p;
    }
    if (theorem == "mart2") {
      // The bound is for martingale differences; verify the profile agrees.
      for (double a : prof.A)
        if (a > 1e-8)
          throw PreconditionError(
              "mart2: model is not a martingale-difference sequence");
    }
  } else if (theorem == "corarch") {
    const ArchProcess& arch = std::get<ArchProcess>(model);
    if (!arch.moment_condition(p))
      throw PreconditionError(
          "corarch: moment condition ||eta||_p^2 sum c_j < 1 fails");
    extras.e_x2 = arch.marginal_second_moment();
    // E|X_0|^p estimated from a dedicated ensemble, recorded as MC.
    const PathEnsemble ens = sample_paths(model, 64, 20000, opts.seed ^ 0xA);
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < ens.n_paths(); ++i)
      for (int t = 1; t <= 64; t += 8) {
        acc += std::pow(std::fabs(ens.at(i, t)), p);
        ++cnt;
      }
    extras.e_abs_p = acc / static_cast<double>(cnt);
    rep.notes.push_back("E|X0|^p estimated by MC");
  } else if (theorem == "cor2markov") {
    const DeltaNuChain& dn = std::get<DeltaNuChain>(model);
    if (dn.params().lambda <= p)
      throw PreconditionError("cor2markov: needs lambda > p");
    extras.f2x2_nu = dn.f2_over_x2_nu();
  } else if (theorem == "thlin") {
    // E|X_0|^p and E(S_n^2) from one ensemble.
    const PathEnsemble ens =
        sample_paths(model, n_max, std::max(2000, opts.mc_paths / 10),
                     opts.seed ^ 0xB);
    double acc = 0.0;
    for (std::size_t i = 0; i < ens.n_paths(); ++i)
      acc += std::pow(std::fabs(ens.at(i, 1)), p);
    extras.e_abs_p = acc / static_cast<double>(ens.n_paths());
    prof.horizons.assign(n_max, 0);
    prof.var.assign(n_max, 0.0);
    prof.A.assign(n_max, 0.0);
    prof.B.assign(n_max, 0.0);
    prof.Bc.assign(n_max, 0.0);
    for (int k = 1; k <= n_max; ++k) prof.horizons[k - 1] = k;
    for (std::size_t i = 0; i < ens.n_paths(); ++i) {
      double run = 0.0;
      for (int t = 1; t <= n_max; ++t) {
        run += ens.at(i, t);
        prof.var[t - 1] += run * run;
      }
    }
    for (double& v : prof.var) v /= static_cast<double>(ens.n_paths());
    rep.notes.push_back("E(S_n^2) estimated by MC");
  }

  rep.rhs_terms = rhs_build(theorem, prof, extras, n_grid);
  if (!opts.drop_term.empty()) {
    bool found = false;
    for (std::size_t t = 0; t < rep.rhs_terms.names.size(); ++t) {
      if (rep.rhs_terms.names[t] == opts.drop_term) {
        rep.rhs_terms.names.erase(rep.rhs_terms.names.begin() + t);
        rep.rhs_terms.values.erase(rep.rhs_terms.values.begin() + t);
        found = true;
        break;
      }
    }
    if (!found)
      throw ArgumentError("check_ratio: no RHS term named " + opts.drop_term);
    rep.notes.push_back("ablation: dropped RHS term " + opts.drop_term);
  }
  rep.rhs_total = rep.rhs_terms.total();

  // LHS.
  LhsResult lhs = lhs_max_moment(model, n_grid, p, opts);
  rep.mode = lhs.mode;
  if (!rep.moment_scale) {
    for (std::size_t g = 0; g < lhs.value.size(); ++g) {
      // norm scale: report ||max||_p, delta-method se
      const double v = lhs.value[g];
      lhs.se[g] = v > 0.0
                      ? lhs.se[g] * std::pow(v, 1.0 / p - 1.0) / p
                      : 0.0;
      lhs.value[g] = std::pow(v, 1.0 / p);
    }
  }
  rep.lhs = lhs.value;
  rep.lhs_se = lhs.se;

  rep.ratio.resize(n_grid.size());
  bool degenerate = false;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    if (rep.rhs_total[g] <= 0.0) {
      if (rep.lhs[g] > 0.0) {
        degenerate = true;
        rep.notes.push_back("violation witness: rhs 0 with lhs > 0 at n=" +
                            std::to_string(n_grid[g]));
        rep.ratio[g] = std::numeric_limits<double>::infinity();
      } else {
        rep.ratio[g] = 0.0;  // 0 <= 0 counts as pass
      }
    } else {
      rep.ratio[g] = rep.lhs[g] / rep.rhs_total[g];
    }
  }
  rep.implied_constant_estimate =
      *std::max_element(rep.ratio.begin(), rep.ratio.end());

  // Boundedness: least-squares slope of log ratio on log n must not be
  // significantly positive at 5%.
  bool finite = std::isfinite(rep.implied_constant_estimate);
  if (finite && rep.implied_constant_estimate > 0.0) {
    std::vector<double> lx, ly;
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
      if (rep.ratio[g] > 0.0) {
        lx.push_back(std::log(static_cast<double>(n_grid[g])));
        ly.push_back(std::log(rep.ratio[g]));
      }
    }
    if (lx.size() >= 3) {
      rep.ratio_slope = fit_slope(lx, ly);
      rep.pass = !degenerate && rep.ratio_slope.ci_lo <= 0.0;
    } else {
      rep.pass = !degenerate;
    }
  } else {
    rep.pass = !degenerate && finite;
  }
  return rep;
}

LpMaxDiagnostic lp_max_convergence(const StationaryModel& model, double p,
                                   const std::vector<int>& n_grid,
                                   const RatioOptions& opts) {
  if (p < 2.0) throw DomainError("lp_max_convergence: p must be >= 2");
  LpMaxDiagnostic diag;
  diag.grid = n_grid;
  const int n_max = n_grid.back();

  const PathEnsemble ens =
      sample_paths(model, n_max, opts.mc_paths, opts.seed);
  const MaxMomentGrid mg = max_moment_mc_grid(ens, p, n_grid);
  // Endpoint norms ||S_n||_p from the same ensemble.
  std::vector<double> endp(n_grid.size(), 0.0);
  for (std::size_t i = 0; i < ens.n_paths(); ++i) {
    double run = 0.0;
    std::size_t g = 0;
    for (int t = 1; g < n_grid.size(); ++t) {
      run += ens.at(i, t);
      if (t == n_grid[g]) {
        endp[g] += std::pow(std::fabs(run), p);
        ++g;
      }
    }
  }
  bool all_zero = true;
  diag.scaled_max_norm.resize(n_grid.size());
  diag.scaled_endpoint.resize(n_grid.size());
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const double n = n_grid[g];
    diag.scaled_max_norm[g] =
        std::pow(mg.value[g], 1.0 / p) / std::pow(n, 1.0 / p);
    diag.scaled_endpoint[g] =
        std::pow(endp[g] / static_cast<double>(ens.n_paths()), 1.0 / p) /
        std::pow(n, 1.0 / p);
    if (diag.scaled_max_norm[g] > 1e-12) all_zero = false;
  }
  if (all_zero) {
    diag.verdict = "degenerate_zero";
    diag.endpoint_hypothesis_ok = true;
    diag.projective_summable = true;
    return diag;
  }

  std::vector<double> ns(n_grid.begin(), n_grid.end());
  diag.max_trend = fit_loglog_slope(ns, diag.scaled_max_norm);
  SlopeFit endpoint_trend = fit_loglog_slope(ns, diag.scaled_endpoint);
  diag.endpoint_hypothesis_ok = endpoint_trend.ci_hi < -0.02;

  if (is_finite_chain(model)) {
    const FiniteChain& chain = as_chain(model);
    const auto cs = chain.cond_sum_all(n_max);
    double head = 0.0, tail = 0.0;
    for (int k = 1; k <= n_max; ++k) {
      const double term = chain.pi_lp_norm(cs[k - 1], p) /
                          std::pow(k, 1.0 + 1.0 / p);
      if (k <= n_max / 2)
        head += term;
      else
        tail += term;
    }
    diag.projective_summable = tail <= 0.05 * std::max(head, 1e-300);
  }
  diag.verdict =
      diag.endpoint_hypothesis_ok ? "converging" : "hypothesis_violated";
  return diag;
}

}  // namespace momineq
