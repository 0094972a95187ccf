#include "momineq/rhs.hpp"

#include <cmath>

namespace momineq {

std::vector<double> RhsTerms::total() const {
  if (values.empty()) return {};
  std::vector<double> t(values.front().size(), 0.0);
  for (const auto& v : values)
    for (std::size_t i = 0; i < v.size(); ++i) t[i] += v[i];
  return t;
}

double directprop_delta(double p) { return std::min(1.0, 1.0 / (p - 2.0)); }
double directprop_c(double p) { return p >= 4.0 ? 0.0 : 1.0; }

bool rhs_theorem_known(const std::string& t) {
  for (const auto& k : rhs_theorem_list())
    if (k == t) return true;
  return false;
}

std::vector<std::string> rhs_theorem_list() {
  return {"directprop", "dyadic",      "stateven",    "pinteger",
          "mart2",      "general",     "burkholder",  "consdirect",
          "consdirect2", "corarch",    "cor2markov",  "thlin"};
}

bool rhs_moment_scale(const std::string& t) { return t != "consdirect"; }

namespace {

void require_even(double p, const std::string& theorem) {
  const int ip = static_cast<int>(std::llround(p));
  if (std::fabs(p - ip) > 1e-12 || ip % 2 != 0)
    throw DomainError(theorem + ": p must be an even integer");
}

void require_reversed(const ProjectiveProfile& prof,
                      const std::string& theorem) {
  if (!prof.has_reversed)
    throw UnavailableError(
        theorem + ": reversed-filtration entries unavailable for this model");
}

double at(const std::vector<double>& v, int k) {
  return v[static_cast<std::size_t>(k - 1)];
}

}  // namespace

RhsTerms rhs_build(const std::string& theorem, const ProjectiveProfile& prof,
                   const RhsExtras& extras, const std::vector<int>& grid) {
  if (!rhs_theorem_known(theorem))
    throw ArgumentError("unknown theorem id: " + theorem);
  if (grid.empty()) throw ArgumentError("rhs_build: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw ArgumentError("rhs_build: grid must increase");
  const double p = prof.p;
  const int n_max = grid.back();
  const bool full_horizons =
      prof.horizons.size() >= static_cast<std::size_t>(n_max) &&
      prof.horizons[static_cast<std::size_t>(n_max) - 1] == n_max;
  const bool needs_full = theorem != "corarch" && theorem != "cor2markov" &&
                          theorem != "thlin" && theorem != "dyadic";
  if (needs_full && !full_horizons)
    throw ArgumentError("rhs_build: profile must cover horizons 1..n");

  RhsTerms out;
  auto push_term = [&](const std::string& name) -> std::vector<double>& {
    out.names.push_back(name);
    out.values.emplace_back(grid.size(), 0.0);
    return out.values.back();
  };

  if (theorem == "directprop") {
    if (p <= 2.0) throw DomainError("directprop: p must exceed 2");
    const double delta = directprop_delta(p);
    const double c = directprop_c(p);
    auto& t1 = push_term("n_individual_moment");
    auto& t2 = push_term("projective_sum");
    auto& t3 = push_term("conditional_variance_sum");
    double s2 = 0.0, s3 = 0.0;
    std::size_t g = 0;
    for (int k = 1; k <= n_max && g < grid.size(); ++k) {
      s2 += std::pow(k, -1.0 - 1.0 / p) * at(prof.A, k);
      s3 += std::pow(k, -1.0 - 2.0 * delta / p) *
            std::pow(at(prof.B, k), delta);
      if (k == grid[g]) {
        const double n = k;
        t1[g] = n * extras.e_abs_p;
        t2[g] = c * n * std::pow(s2, p);
        t3[g] = n * std::pow(s3, p / (2.0 * delta));
        ++g;
      }
    }
  } else if (theorem == "dyadic") {
    if (p <= 2.0) throw DomainError("dyadic: p must exceed 2");
    const double delta = directprop_delta(p);
    const double c = directprop_c(p);
    auto& t1 = push_term("n_individual_moment");
    auto& t2 = push_term("projective_dyadic_sum");
    auto& t3 = push_term("conditional_variance_dyadic_sum");
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const int n = grid[g];
      int r = 1;
      while ((1 << r) <= n) ++r;  // 2^{r-1} <= n < 2^r
      double s2 = 0.0, s3 = 0.0;
      for (int k = 0; k < r; ++k) {
        const int h = 1 << k;
        s2 += std::pow(2.0, -static_cast<double>(k) / p) * at(prof.A, h);
        s3 += std::pow(2.0, -2.0 * k * delta / p) *
              std::pow(at(prof.B, h), delta);
      }
      t1[g] = n * extras.e_abs_p;
      t2[g] = c * n * std::pow(s2, p);
      t3[g] = n * std::pow(s3, p / (2.0 * delta));
    }
  } else if (theorem == "stateven") {
    if (p < 4.0) throw DomainError("stateven: p must be >= 4");
    require_even(p, "stateven");
    require_reversed(prof, "stateven");
    auto& t1 = push_term("n_individual_moment");
    auto& t2 = push_term("two_sided_projective_sum");
    auto& t3 = push_term("two_sided_conditional_variance_sum");
    double s2 = 0.0, s3 = 0.0;
    std::size_t g = 0;
    for (int k = 1; k <= n_max && g < grid.size(); ++k) {
      s2 += std::pow(k, -1.0 - 1.0 / p) * (at(prof.A, k) + at(prof.Abar, k));
      s3 += std::pow(k, -1.0 - 2.0 / p) * (at(prof.B, k) + at(prof.Bbar, k));
      if (k == grid[g]) {
        t1[g] = grid[g] * extras.e_abs_p;
        t2[g] = grid[g] * std::pow(s2, p);
        t3[g] = grid[g] * std::pow(s3, p / 2.0);
        ++g;
      }
    }
  } else if (theorem == "pinteger") {
    if (p < 4.0) throw DomainError("pinteger: p must be >= 4");
    require_reversed(prof, "pinteger");
    auto& t1 = push_term("n_individual_moment");
    auto& t2 = push_term("two_sided_root_variance_sum");
    double s2 = 0.0;
    std::size_t g = 0;
    for (int k = 1; k <= n_max && g < grid.size(); ++k) {
      s2 += std::pow(k, -1.0 - 1.0 / p) *
            (std::sqrt(at(prof.B, k)) + std::sqrt(at(prof.Bbar, k)));
      if (k == grid[g]) {
        t1[g] = grid[g] * extras.e_abs_p;
        t2[g] = grid[g] * std::pow(s2, p);
        ++g;
      }
    }
  } else if (theorem == "mart2") {
    if (p < 4.0) throw DomainError("mart2: p must be >= 4");
    require_even(p, "mart2");
    auto& t1 = push_term("n_individual_moment");
    auto& t2 = push_term("mds_conditional_variance_sum");
    const double inner = 2.0 / (p - 2.0);
    double s2 = 0.0;
    std::size_t g = 0;
    for (int k = 1; k <= n_max && g < grid.size(); ++k) {
      s2 += std::pow(k, -1.0 - 4.0 / (p * (p - 2.0))) *
            std::pow(at(prof.B, k), inner);
      if (k == grid[g]) {
        t1[g] = grid[g] * extras.e_abs_p;
        t2[g] = grid[g] * std::pow(s2, p * (p - 2.0) / 4.0);
        ++g;
      }
    }
  } else if (theorem == "general") {
    if (p < 4.0) throw DomainError("general: p must be >= 4");
    require_even(p, "general");
    if (extras.d0_norm_p.size() != grid.size())
      throw ArgumentError("general: d0 norms must match the grid");
    auto& t1 = push_term("n_mart_diff_moment");
    auto& t2 = push_term("n_individual_moment");
    auto& t3 = push_term("residual_projective_sum");
    auto& t4 = push_term("mds_conditional_variance_sum");
    const double inner = 2.0 / (p - 2.0);
    double sA = 0.0, s4 = 0.0;
    std::size_t g = 0;
    for (int k = 1; k <= n_max && g < grid.size(); ++k) {
      sA += at(prof.A, k);
      if (k >= 2)
        s4 += std::pow(k - 1, -1.0 - 4.0 / (p * (p - 2.0))) *
              std::pow(at(prof.B, k - 1), inner);
      if (k == grid[g]) {
        const double n = k;
        t1[g] = n * std::pow(extras.d0_norm_p[g], p);
        t2[g] = n * std::pow(extras.x0_norm_p, p);
        t3[g] = std::pow(n, 1.0 - p) * std::pow(sA, p);
        t4[g] = n * std::pow(s4, p * (p - 2.0) / 4.0);
        ++g;
      }
    }
  } else if (theorem == "burkholder") {
    if (p <= 2.0) throw DomainError("burkholder: p must exceed 2");
    auto& t1 = push_term("variance_scale_moment");
    auto& t2 = push_term("projective_3_2_sum");
    double s2 = 0.0;
    std::size_t g = 0;
    for (int k = 1; k <= n_max && g < grid.size(); ++k) {
      s2 += at(prof.A, k) / std::pow(k, 1.5);
      if (k == grid[g]) {
        const double n = k;
        t1[g] = std::pow(n, p / 2.0) * extras.e_abs_p;
        t2[g] = std::pow(n, p / 2.0) * std::pow(s2, p);
        ++g;
      }
    }
  } else if (theorem == "consdirect") {
    if (p <= 2.0) throw DomainError("consdirect: p must exceed 2");
    const double gamma = std::isnan(extras.consdirect_gamma)
                             ? (p <= 3.0 ? 0.0 : p - 3.0 + 0.01)
                             : extras.consdirect_gamma;
    const double c = p >= 4.0 ? 0.0 : 1.0;
    if (extras.cov0.size() < static_cast<std::size_t>(n_max) ||
        extras.lambda.size() < static_cast<std::size_t>(n_max) ||
        extras.e0x_norm.size() < static_cast<std::size_t>(n_max))
      throw ArgumentError("consdirect: cov0/lambda/e0x_norm too short");
    auto& t1 = push_term("sqrt_covariance_sum");
    auto& t2 = push_term("individual_norm");
    auto& t3 = push_term("projective_individual_sum");
    auto& t4 = push_term("lambda_sum");
    double scov = 0.0, se0 = 0.0, slam = 0.0;
    std::size_t g = 0;
    for (int k = 1; k <= n_max && g < grid.size(); ++k) {
      scov += extras.cov0[static_cast<std::size_t>(k - 1)];
      se0 += std::pow(k, -1.0 / p) * extras.e0x_norm[k - 1];
      const double logk = k >= 2 ? std::log(static_cast<double>(k)) : 0.0;
      slam += std::pow(k, 1.0 - 2.0 / p) * std::pow(logk, gamma) *
              extras.lambda[k - 1];
      if (k == grid[g]) {
        const double n = k;
        t1[g] = std::sqrt(n) * std::sqrt(scov);
        t2[g] = std::pow(n, 1.0 / p) * std::pow(extras.e_abs_p, 1.0 / p);
        t3[g] = c * std::pow(n, 1.0 / p) * se0;
        t4[g] = std::pow(n, 1.0 / p) * std::sqrt(slam);
        ++g;
      }
    }
  } else if (theorem == "consdirect2") {
    if (p <= 2.0) throw DomainError("consdirect2: p must exceed 2");
    const double eps = extras.consdirect2_eps;
    if (extras.cov0.size() < static_cast<std::size_t>(n_max) ||
        extras.lambda.size() < static_cast<std::size_t>(n_max))
      throw ArgumentError("consdirect2: cov0/lambda too short");
    auto& t1 = push_term("covariance_sum_power");
    auto& t2 = push_term("n_individual_moment");
    auto& t3 = push_term("lambda_power_sum");
    double scov = 0.0, slam = 0.0;
    std::size_t g = 0;
    for (int k = 1; k <= n_max && g < grid.size(); ++k) {
      scov += extras.cov0[static_cast<std::size_t>(k - 1)];
      slam += std::pow(k, p - 2.0 + eps) *
              std::pow(extras.lambda[k - 1], p / 2.0);
      if (k == grid[g]) {
        const double n = k;
        t1[g] = std::pow(n, p / 2.0) * std::pow(scov, p / 2.0);
        t2[g] = n * extras.e_abs_p;
        t3[g] = n * slam;
        ++g;
      }
    }
  } else if (theorem == "corarch") {
    if (p <= 2.0) throw DomainError("corarch: p must exceed 2");
    auto& t1 = push_term("variance_scale");
    auto& t2 = push_term("n_term");
    auto& t3 = push_term("n_individual_moment");
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double n = grid[g];
      t1[g] = std::pow(n * extras.e_x2, p / 2.0);
      t2[g] = n;
      t3[g] = n * extras.e_abs_p;
    }
  } else if (theorem == "cor2markov") {
    if (p <= 2.0) throw DomainError("cor2markov: p must exceed 2");
    if (std::isnan(extras.f2x2_nu))
      throw ArgumentError("cor2markov: missing f^2/x^2 integral");
    auto& t1 = push_term("n_term");
    auto& t2 = push_term("variance_scale");
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double n = grid[g];
      t1[g] = n;
      t2[g] = std::pow(n, p / 2.0) * std::pow(extras.f2x2_nu, p / 2.0);
    }
  } else if (theorem == "thlin") {
    if (p < 4.0) throw DomainError("thlin: p must be >= 4");
    require_even(p, "thlin");
    auto& t1 = push_term("n_term");
    auto& t2 = push_term("n_individual_moment");
    auto& t3 = push_term("variance_scale");
    std::size_t g = 0;
    for (int k = 1; k <= n_max && g < grid.size(); ++k) {
      if (k == grid[g]) {
        const double n = k;
        t1[g] = n;
        t2[g] = n * extras.e_abs_p;
        t3[g] = std::pow(at(prof.var, k), p / 2.0);
        ++g;
      }
    }
  }
  return out;
}

RhsExtras chain_extras(const FiniteChain& chain, double p, int n_max,
                       const std::string& theorem) {
  RhsExtras ex;
  Eigen::VectorXd absf = chain.f().cwiseAbs();
  double eabs = 0.0;
  for (Eigen::Index i = 0; i < absf.size(); ++i)
    eabs += chain.pi()(i) * std::pow(absf(i), p);
  ex.e_abs_p = eabs;
  ex.x0_norm_p = std::pow(eabs, 1.0 / p);
  ex.e_x2 = chain.pi_expect(chain.f().cwiseProduct(chain.f()));
  if (theorem == "consdirect" || theorem == "consdirect2") {
    ex.cov0.resize(n_max);
    for (int j = 0; j < n_max; ++j) ex.cov0[j] = std::fabs(chain.cov0(j));
    ex.lambda = lambda_profile(chain, p, n_max);
    ex.e0x_norm.resize(n_max);
    Eigen::VectorXd qkf = chain.f();
    for (int k = 1; k <= n_max; ++k) {
      qkf = chain.Q() * qkf;
      ex.e0x_norm[k - 1] = chain.pi_lp_norm(qkf, p);
    }
  }
  if (theorem == "general") {
    // Filled per grid point by the caller (needs one mart_approx per n).
  }
  return ex;
}

}  // namespace momineq
