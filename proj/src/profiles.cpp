#include "momineq/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace momineq {

std::size_t ProjectiveProfile::index_of(int k) const {
  const auto it = std::lower_bound(horizons.begin(), horizons.end(), k);
  if (it == horizons.end() || *it != k)
    throw ArgumentError("profile does not contain horizon " +
                        std::to_string(k));
  return static_cast<std::size_t>(it - horizons.begin());
}

std::string ProjectiveProfile::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "k,A,B,Bc,var,Abar,Bbar,se_A,se_B,se_Bc\n";
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    auto opt = [&](const std::vector<double>& v) {
      return i < v.size() ? v[i] : std::nan("");
    };
    out << horizons[i] << ',' << A[i] << ',' << B[i] << ',' << Bc[i] << ','
        << var[i] << ',' << opt(Abar) << ',' << opt(Bbar) << ',' << opt(se_A)
        << ',' << opt(se_B) << ',' << opt(se_Bc) << '\n';
  }
  return out.str();
}

ProjectiveProfile profile_exact(const FiniteChain& chain, double p, int n) {
  if (n < 1) throw ArgumentError("profile_exact: n must be >= 1");
  ProjectiveProfile prof;
  prof.p = p;
  prof.mode = ProfileMode::exact;
  prof.horizons.resize(n);
  for (int k = 1; k <= n; ++k) prof.horizons[k - 1] = k;

  const auto cs = chain.cond_sum_all(n);
  const auto vs = chain.cond_sum_square_all(n);
  prof.A.resize(n);
  prof.B.resize(n);
  prof.Bc.resize(n);
  prof.var.resize(n);

  // E(S_k^2) by pair sums: increment c0 + 2 sum_{d<k} cov0(d).
  std::vector<double> cov(n, 0.0);
  for (int d = 0; d < n; ++d) cov[d] = chain.cov0(d);
  double cum_cov = 0.0, var_k = 0.0;
  for (int k = 1; k <= n; ++k) {
    var_k += cov[0] + 2.0 * cum_cov;
    cum_cov += cov[k - 1];
    prof.var[k - 1] = var_k;
    prof.A[k - 1] = chain.pi_lp_norm(cs[k - 1], p);
    prof.B[k - 1] = chain.pi_lp_norm(vs[k - 1], p / 2.0);
    const double mean_v = chain.pi_expect(vs[k - 1]);
    Eigen::VectorXd centered = vs[k - 1].array() - mean_v;
    prof.Bc[k - 1] = chain.pi_lp_norm(centered, p / 2.0);
  }

  if (chain.irreducible_support()) {
    const FiniteChain rev = chain.reversed();
    const auto rcs = rev.cond_sum_all(n);
    const auto rvs = rev.cond_sum_square_all(n);
    prof.Abar.resize(n);
    prof.Bbar.resize(n);
    for (int k = 1; k <= n; ++k) {
      prof.Abar[k - 1] = chain.pi_lp_norm(rcs[k - 1], p);
      prof.Bbar[k - 1] = chain.pi_lp_norm(rvs[k - 1], p / 2.0);
    }
    prof.has_reversed = true;
  }
  return prof;
}

namespace {

std::vector<int> dyadic_horizons(int n) {
  std::vector<int> ks;
  for (int k = 1; k <= n; k *= 2) ks.push_back(k);
  if (ks.empty() || ks.back() != n) ks.push_back(n);
  return ks;
}

// Weighted p-norm of a per-path vector under multinomial bootstrap weights.
double weighted_pnorm(const std::vector<double>& values,
                      const std::vector<double>& weights, double p) {
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s += weights[i] * std::pow(std::fabs(values[i]), p);
    w += weights[i];
  }
  return std::pow(s / w, 1.0 / p);
}

// Ordinary least squares through normal equations; returns fitted values.
std::vector<double> ols_fitted(const std::vector<std::vector<double>>& X,
                               const std::vector<double>& y) {
  const std::size_t n = X.size();
  const std::size_t d = X.front().size();
  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Map<const Eigen::VectorXd> row(X[i].data(), d);
    xtx.selfadjointView<Eigen::Lower>().rankUpdate(row);
    xty += y[i] * row;
  }
  xtx = xtx.selfadjointView<Eigen::Lower>();
  // Ridge whisper keeps near-collinear windows solvable.
  xtx.diagonal().array() += 1e-10 * (xtx.trace() / d + 1.0);
  Eigen::VectorXd beta = xtx.ldlt().solve(xty);
  std::vector<double> fitted(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Map<const Eigen::VectorXd> row(X[i].data(), d);
    fitted[i] = row.dot(beta);
  }
  return fitted;
}

}  // namespace

ProjectiveProfile profile_mc(const PathEnsemble& ens, double p,
                             const ProfileMcOptions& opts) {
  const std::size_t N = ens.n_paths();
  const int n = static_cast<int>(ens.n_steps());
  std::vector<int> ks =
      opts.horizons.empty() ? dyadic_horizons(n) : opts.horizons;
  for (int k : ks)
    if (k < 1 || k > n) throw ArgumentError("profile_mc: bad horizon");

  const std::string family = [&] {
    auto it = ens.meta.find("family");
    return it == ens.meta.end() ? std::string("unknown") : it->second;
  }();

  // Per-path S_k and S_k^2 at the requested horizons.
  const std::size_t G = ks.size();
  std::vector<double> s_tab(N * G), q_tab(N * G);
  parallel_chunks(N, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double run = 0.0;
      std::size_t g = 0;
      for (int t = 1; g < G; ++t) {
        run += ens.at(i, t);
        if (t == ks[g]) {
          s_tab[i * G + g] = run;
          q_tab[i * G + g] = run * run;
          ++g;
        }
      }
    }
  });

  // Conditional expectation estimates per path: exact grouping for Markov
  // state conditioning, regression otherwise.
  std::vector<int> group(N, 0);
  int n_groups = 1;
  bool grouped = false;
  if (family == "chain") {
    for (std::size_t i = 0; i < N; ++i) {
      group[i] = static_cast<int>(ens.init_value[i]);
      n_groups = std::max(n_groups, group[i] + 1);
    }
    grouped = true;
  } else if (family == "delta_nu") {
    std::vector<double> sorted = ens.init_value;
    std::sort(sorted.begin(), sorted.end());
    const int bins = std::max(2, opts.state_bins);
    std::vector<double> edges(bins - 1);
    for (int b = 1; b < bins; ++b)
      edges[b - 1] = sorted[sorted.size() * b / bins];
    for (std::size_t i = 0; i < N; ++i)
      group[i] = static_cast<int>(
          std::upper_bound(edges.begin(), edges.end(), ens.init_value[i]) -
          edges.begin());
    n_groups = bins;
    grouped = true;
  }

  ProjectiveProfile prof;
  prof.p = p;
  prof.mode = ProfileMode::mc;
  prof.mc_paths = N;
  prof.horizons = ks;
  prof.A.resize(G);
  prof.B.resize(G);
  prof.Bc.resize(G);
  prof.var.resize(G);
  prof.se_A.resize(G);
  prof.se_B.resize(G);
  prof.se_Bc.resize(G);

  // Regression design for non-Markov families.
  std::vector<std::vector<double>> design;
  if (!grouped) {
    const int lags = std::min<int>(opts.cond_dim,
                                   static_cast<int>(ens.pre_cols()));
    if (lags < 1 && family != "iid")
      throw PreconditionError(
          "profile_mc: pre-sample history shorter than cond_dim");
    design.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
      auto& row = design[i];
      row.reserve(1 + 2 * std::max(lags, 0));
      row.push_back(1.0);
      for (int l = 0; l < lags; ++l) {
        const double x = ens.at(i, -l);
        row.push_back(x);
        row.push_back(x * x);
      }
    }
  }

  // Fitted conditional means per horizon, frozen for the bootstrap.
  std::vector<std::vector<double>> fit_s(G), fit_q(G);
  for (std::size_t g = 0; g < G; ++g) {
    std::vector<double> ys(N), yq(N);
    for (std::size_t i = 0; i < N; ++i) {
      ys[i] = s_tab[i * G + g];
      yq[i] = q_tab[i * G + g];
    }
    if (grouped) {
      std::vector<double> cnt(n_groups, 0.0), ms(n_groups, 0.0),
          mq(n_groups, 0.0);
      for (std::size_t i = 0; i < N; ++i) {
        cnt[group[i]] += 1.0;
        ms[group[i]] += ys[i];
        mq[group[i]] += yq[i];
      }
      for (int gr = 0; gr < n_groups; ++gr) {
        if (cnt[gr] > 0.0) {
          ms[gr] /= cnt[gr];
          mq[gr] /= cnt[gr];
        }
      }
      fit_s[g].resize(N);
      fit_q[g].resize(N);
      for (std::size_t i = 0; i < N; ++i) {
        fit_s[g][i] = ms[group[i]];
        fit_q[g][i] = mq[group[i]];
      }
    } else {
      fit_s[g] = ols_fitted(design, ys);
      fit_q[g] = ols_fitted(design, yq);
    }
  }

  const std::vector<double> unit(N, 1.0);
  for (std::size_t g = 0; g < G; ++g) {
    double mean_q = 0.0;
    for (std::size_t i = 0; i < N; ++i) mean_q += q_tab[i * G + g];
    mean_q /= static_cast<double>(N);
    prof.var[g] = mean_q;
    prof.A[g] = weighted_pnorm(fit_s[g], unit, p);
    prof.B[g] = weighted_pnorm(fit_q[g], unit, p / 2.0);
    std::vector<double> centered = fit_q[g];
    for (double& v : centered) v -= mean_q;
    prof.Bc[g] = weighted_pnorm(centered, unit, p / 2.0);
  }

  // Multinomial-weight bootstrap over paths. Fits and the Bc centering are
  // frozen at the full sample; the resampling captures the measure spread.
  if (opts.bootstrap > 1) {
    const std::size_t R = static_cast<std::size_t>(opts.bootstrap);
    // Precomputed |.|^p tables make each resample a weighted sum.
    std::vector<double> pw_s(N * G), pw_q(N * G), pw_c(N * G);
    for (std::size_t g = 0; g < G; ++g) {
      double mean_q = prof.var[g];
      for (std::size_t i = 0; i < N; ++i) {
        pw_s[i * G + g] = std::pow(std::fabs(fit_s[g][i]), p);
        pw_q[i * G + g] = std::pow(std::fabs(fit_q[g][i]), p / 2.0);
        pw_c[i * G + g] =
            std::pow(std::fabs(fit_q[g][i] - mean_q), p / 2.0);
      }
    }
    std::vector<double> repA(R * G), repB(R * G), repC(R * G);
    parallel_chunks(R, [&](std::size_t, std::size_t rb, std::size_t re) {
      std::vector<double> w(N);
      for (std::size_t r = rb; r < re; ++r) {
        auto rng = path_rng(opts.bootstrap_seed, r);
        std::fill(w.begin(), w.end(), 0.0);
        for (std::size_t i = 0; i < N; ++i) w[rng() % N] += 1.0;
        std::vector<double> aA(G, 0.0), aB(G, 0.0), aC(G, 0.0);
        for (std::size_t i = 0; i < N; ++i) {
          const double wi = w[i];
          if (wi == 0.0) continue;
          for (std::size_t g = 0; g < G; ++g) {
            aA[g] += wi * pw_s[i * G + g];
            aB[g] += wi * pw_q[i * G + g];
            aC[g] += wi * pw_c[i * G + g];
          }
        }
        for (std::size_t g = 0; g < G; ++g) {
          repA[r * G + g] = std::pow(aA[g] / N, 1.0 / p);
          repB[r * G + g] = std::pow(aB[g] / N, 2.0 / p);
          repC[r * G + g] = std::pow(aC[g] / N, 2.0 / p);
        }
      }
    });
    for (std::size_t g = 0; g < G; ++g) {
      std::vector<double> colA(R), colB(R), colC(R);
      for (std::size_t r = 0; r < R; ++r) {
        colA[r] = repA[r * G + g];
        colB[r] = repB[r * G + g];
        colC[r] = repC[r * G + g];
      }
      prof.se_A[g] = sd_of(colA);
      prof.se_B[g] = sd_of(colB);
      prof.se_Bc[g] = sd_of(colC);
    }
    if (prof.B[G - 1] > 0 && prof.se_B[G - 1] / prof.B[G - 1] > 0.1)
      prof.kurtosis_warning = true;
  }
  prof.notes = "conditioning=" + (grouped ? std::string("state_group")
                                          : std::string("lag_regression"));
  return prof;
}

GordinBounds gordin_bounds(const FiniteChain& chain, double p, int n) {
  GordinBounds gb;
  gb.horizons.resize(n);
  gb.var_bound.resize(n);
  gb.cond_bound.resize(n);
  gb.varsq_bound.resize(n);

  std::vector<double> abscov(n, 0.0);
  for (int j = 0; j < n; ++j) abscov[j] = std::fabs(chain.cov0(j));
  // ||E_0(X_l)||_p = pi-norm of Q^l f.
  std::vector<double> e0x(n + 1, 0.0);
  Eigen::VectorXd qlf = chain.f();
  for (int l = 1; l <= n; ++l) {
    qlf = chain.Q() * qlf;
    e0x[l] = chain.pi_lp_norm(qlf, p);
  }
  // centered pair norms tau(i, j) = ||E_0(X_i X_{i+j}) - E(X_i X_{i+j})||.
  // E_0(X_i X_{i+j}) = Q^i (f .* Q^j f).
  std::vector<std::vector<double>> tau(n + 1);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd prod = chain.f().cwiseProduct(chain.apply_q(chain.f(), j));
    const double mean = chain.pi_expect(prod);
    tau[j].assign(n + 1, 0.0);
    Eigen::VectorXd v = prod;
    for (int i = 1; i <= n - j; ++i) {
      v = chain.Q() * v;
      Eigen::VectorXd centered = v.array() - mean;
      tau[j][i] = chain.pi_lp_norm(centered, p / 2.0);
    }
  }

  double cum_abscov = 0.0, cum_e0x = 0.0;
  for (int k = 1; k <= n; ++k) {
    cum_abscov += abscov[k - 1];
    cum_e0x += e0x[k];
    gb.horizons[k - 1] = k;
    gb.var_bound[k - 1] = 2.0 * k * cum_abscov;
    gb.cond_bound[k - 1] = cum_e0x;
    double s = 0.0;
    for (int i = 1; i <= k; ++i)
      for (int j = 0; j <= k - i; ++j) s += tau[j][i];
    gb.varsq_bound[k - 1] = 2.0 * s;
  }
  return gb;
}

std::vector<double> lambda_profile(const FiniteChain& chain, double p,
                                   int jmax, int sup_horizon) {
  if (p <= 2.0) throw DomainError("lambda_profile: p must exceed 2");
  std::vector<double> lam(jmax, 0.0);
  const Eigen::VectorXd f = chain.f();
  for (int j = 1; j <= jmax; ++j) {
    const Eigen::VectorXd qjf = chain.apply_q(f, j);
    const double branch1 = chain.pi_lp_norm(f.cwiseProduct(qjf), p / 2.0);
    double branch2 = 0.0;
    Eigen::VectorXd qd = f;  // Q^{i-j} f as i grows
    for (int i = j; i <= j + sup_horizon; ++i) {
      Eigen::VectorXd prod = f.cwiseProduct(qd);
      const double mean = chain.pi_expect(prod);
      Eigen::VectorXd centered = chain.apply_q(prod, j).array() - mean;
      branch2 = std::max(branch2, chain.pi_lp_norm(centered, p / 2.0));
      qd = chain.Q() * qd;
    }
    lam[j - 1] = std::max(branch1, branch2);
  }
  return lam;
}

MixingProfile v2_alpha(const FiniteChain& chain, int n,
                       const std::vector<int>& alpha_lags) {
  MixingProfile mp;
  mp.cov0.resize(n);
  for (int j = 0; j < n; ++j) mp.cov0[j] = std::fabs(chain.cov0(j));
  mp.v2 = mp.cov0[0];
  for (int j = 1; j < n; ++j) mp.v2 += 2.0 * mp.cov0[j];

  mp.alpha_lags = alpha_lags;
  const int m = static_cast<int>(chain.n_states());
  const bool exact = m <= 12;
  mp.alpha_is_bound = !exact;
  for (int lag : alpha_lags) {
    Eigen::MatrixXd qk = Eigen::MatrixXd::Identity(m, m);
    for (int t = 0; t < lag; ++t) qk = qk * chain.Q();
    double a = 0.0;
    if (exact) {
      // D(x,y) = pi(x) Q^k(x,y) - pi(x) pi(y); best B for a fixed A keeps
      // one sign of the column sums.
      Eigen::MatrixXd D(m, m);
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
          D(x, y) = chain.pi()(x) * (qk(x, y) - chain.pi()(y));
      const unsigned subsets = 1u << m;
      for (unsigned A = 1; A + 1 < subsets; ++A) {
        double pos = 0.0, neg = 0.0;
        for (int y = 0; y < m; ++y) {
          double col = 0.0;
          for (int x = 0; x < m; ++x)
            if (A & (1u << x)) col += D(x, y);
          if (col > 0.0)
            pos += col;
          else
            neg -= col;
        }
        a = std::max(a, std::max(pos, neg));
      }
    } else {
      // Absolute regularity dominates alpha.
      double beta = 0.0;
      for (int x = 0; x < m; ++x) {
        double tv = 0.0;
        for (int y = 0; y < m; ++y)
          tv += std::fabs(qk(x, y) - chain.pi()(y));
        beta += chain.pi()(x) * 0.5 * tv;
      }
      a = beta;
    }
    mp.alpha.push_back(std::min(a, 0.25));
  }
  return mp;
}

std::vector<double> beta2Y_exact(const FiniteChain& chain, int kmax,
                                 int sup_horizon) {
  const int m = static_cast<int>(chain.n_states());
  // Thresholds at the observable values; indicators 1{f <= s}.
  std::vector<double> svals(chain.f().data(), chain.f().data() + m);
  std::sort(svals.begin(), svals.end());
  svals.erase(std::unique(svals.begin(), svals.end()), svals.end());
  std::vector<Eigen::VectorXd> ind;
  for (double s : svals) {
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) v(i) = chain.f()(i) <= s ? 1.0 : 0.0;
    ind.push_back(v);
  }
  const int H = sup_horizon;
  const int maxpow = kmax + 2 * H;
  std::vector<Eigen::MatrixXd> qpow(maxpow + 1);
  qpow[0] = Eigen::MatrixXd::Identity(m, m);
  for (int t = 1; t <= maxpow; ++t) qpow[t] = qpow[t - 1] * chain.Q();

  // E b(F_0, i, j) for j in [k, k+H], i in [j, j+H].
  auto eb = [&](int j, int i) {
    Eigen::VectorXd best = Eigen::VectorXd::Zero(m);
    for (const auto& it : ind) {
      const Eigen::VectorXd qd = qpow[i - j] * it;
      for (const auto& js : ind) {
        const Eigen::VectorXd joint = qpow[j] * js.cwiseProduct(qd);
        const double base = chain.pi().dot(joint);
        for (int x = 0; x < m; ++x)
          best(x) = std::max(best(x), std::fabs(joint(x) - base));
      }
    }
    return chain.pi().dot(best);
  };

  std::vector<double> beta(kmax, 0.0);
  // Work backwards so beta(k) is a running max over {j >= k}.
  double running = 0.0;
  for (int k = kmax; k >= 1; --k) {
    double local = 0.0;
    const int j = k;
    for (int i = j; i <= j + H; ++i) local = std::max(local, eb(j, i));
    running = std::max(running, local);
    beta[k - 1] = std::clamp(running, 0.0, 1.0);
  }
  return beta;
}

MartApprox mart_approx(const FiniteChain& chain, double p, int n) {
  if (n < 1) throw ArgumentError("mart_approx: n must be >= 1");
  MartApprox ma;
  ma.n = n;
  ma.p = p;
  const int m = static_cast<int>(chain.n_states());
  const auto cs = chain.cond_sum_all(n);

  // H = (1/n) sum_{i=1..n} C_{i-1}; G = (1/n) sum_{i=1..n} C_i.
  Eigen::VectorXd Hv = Eigen::VectorXd::Zero(m), Gv = Eigen::VectorXd::Zero(m);
  for (int i = 1; i <= n; ++i) {
    if (i >= 2) Hv += cs[i - 2];
    Gv += cs[i - 1];
  }
  Hv /= n;
  Gv /= n;

  // D_0^n(x, y) = f(y) + H(y) - G(x); the norm runs over pi(x) Q(x,y).
  double d0p = 0.0;
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      const double g = chain.f()(y) + Hv(y) - Gv(x);
      d0p += chain.pi()(x) * chain.Q()(x, y) * std::pow(std::fabs(g), p);
    }
  ma.d0_norm_p = std::pow(d0p, 1.0 / p);

  // Residual R_k = sum_{t<k} u(state_t, state_{t+1}),
  // u(x,y) = C_n(x)/n + H(x) - H(y). Exact moments for even integer p via
  // the binomial recursion over (state, moment order).
  const int ip = static_cast<int>(std::llround(p));
  if (std::fabs(p - ip) > 1e-12 || ip < 2 || ip % 2 != 0)
    throw MethodError("mart_approx: residual norms need an even integer p");
  Eigen::MatrixXd u(m, m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      u(x, y) = cs[n - 1](x) / n + Hv(x) - Hv(y);
  std::vector<std::vector<double>> binom(ip + 1,
                                         std::vector<double>(ip + 1, 0.0));
  for (int a = 0; a <= ip; ++a) {
    binom[a][0] = 1.0;
    for (int b = 1; b <= a; ++b)
      binom[a][b] = binom[a - 1][b - 1] + (b <= a - 1 ? binom[a - 1][b] : 0.0);
  }
  // M[j][x] = E(R_t^j ; state_t = x).
  std::vector<Eigen::VectorXd> M(ip + 1, Eigen::VectorXd::Zero(m));
  M[0] = chain.pi();
  ma.r_norm.resize(n);
  for (int t = 0; t < n; ++t) {
    std::vector<Eigen::VectorXd> nxt(ip + 1, Eigen::VectorXd::Zero(m));
    for (int y = 0; y < m; ++y) {
      for (int x = 0; x < m; ++x) {
        const double q = chain.Q()(x, y);
        if (q == 0.0) continue;
        double upow = 1.0;
        // accumulate binom(j, l) M[l](x) u^{j-l} for all j at once
        for (int d = 0; d <= ip; ++d) {
          for (int j = d; j <= ip; ++j)
            nxt[j](y) += q * binom[j][j - d] * M[j - d](x) * upow;
          upow *= u(x, y);
        }
      }
    }
    M.swap(nxt);
    double mom = 0.0;
    for (int x = 0; x < m; ++x) mom += M[ip](x);
    ma.r_norm[t] = std::pow(std::max(mom, 0.0), 1.0 / p);
  }
  ma.r_max_norm = *std::max_element(ma.r_norm.begin(), ma.r_norm.end());

  double sumA = 0.0;
  for (int i = 1; i <= n; ++i) sumA += chain.pi_lp_norm(cs[i - 1], p);
  ma.mdec_bound = 2.0 * chain.pi_lp_norm(chain.f(), p) + 3.0 * sumA / n;

  double proj = 0.0;
  Eigen::VectorXd qkf = chain.f();
  for (int k = 1; k <= n; ++k) {
    qkf = chain.Q() * qkf;
    proj += std::pow(static_cast<double>(k), -1.0 / p) *
            chain.pi_lp_norm(qkf, p);
  }
  ma.projest_bound = proj;
  return ma;
}

}  // namespace momineq
