#include "momineq/inequalities.hpp"

#include <algorithm>
#include <cmath>

namespace momineq {

namespace {
constexpr double kSlack = 1e-12;

bool leq_with_slack(double lhs, double rhs) {
  return lhs <= rhs + kSlack * std::max(1.0, std::fabs(rhs));
}
}  // namespace

CheckResult check_cross(double x, double y, double p,
                        const std::string& variant) {
  CheckResult r;
  r.name = "cross_" + variant;
  const double ax = std::fabs(x), ay = std::fabs(y);
  if (variant == "rio") {
    if (p < 2.0 || p > 3.0) throw DomainError("cross rio: need 2 <= p <= 3");
    r.lhs = std::pow(std::fabs(x + y), p);
    r.rhs = std::pow(ax, p) + std::pow(ay, p) +
            p * std::pow(ax, p - 1.0) * (x >= 0 ? y : -y) +
            0.5 * p * (p - 1.0) * std::pow(ax, p - 2.0) * y * y;
  } else if (variant == "rio34") {
    if (p <= 3.0 || p > 4.0)
      throw DomainError("cross rio34: need 3 < p <= 4");
    r.lhs = std::pow(std::fabs(x + y), p);
    r.rhs = std::pow(ax, p) + std::pow(ay, p) +
            p * std::pow(ax, p - 1.0) * (x >= 0 ? y : -y) +
            0.5 * p * (p - 1.0) * std::pow(ax, p - 2.0) * y * y +
            2.0 * p / (p - 2.0) * ax * std::pow(ay, p - 1.0);
  } else if (variant == "int") {
    if (p < 1.0) throw DomainError("cross int: need p >= 1");
    if (x < 0.0 || y < 0.0)
      throw DomainError("cross int: needs nonnegative x, y");
    r.lhs = std::pow(x + y, p);
    r.rhs = std::pow(x, p) + std::pow(y, p) +
            std::pow(4.0, p) *
                (std::pow(x, p - 1.0) * y + x * std::pow(y, p - 1.0));
  } else if (variant == "evenint") {
    const int ip = static_cast<int>(std::llround(p));
    if (std::fabs(p - ip) > 1e-12 || ip < 2 || ip % 2 != 0)
      throw DomainError("cross evenint: p must be a positive even integer");
    r.lhs = std::pow(x + y, p);
    r.rhs = std::pow(x, p) + std::pow(y, p) +
            p * (std::pow(x, p - 1.0) * y + x * std::pow(y, p - 1.0)) +
            std::pow(2.0, p) * (x * x * std::pow(y, p - 2.0) +
                                std::pow(x, p - 2.0) * y * y);
  } else {
    throw ArgumentError("check_cross: unknown variant " + variant);
  }
  r.ok = leq_with_slack(r.lhs, r.rhs);
  return r;
}

CheckResult check_basic(const FiniteSpace& space, const Rv& x0, const Rv& x1,
                        const PartitionSigma& g, double p, double u) {
  for (double v : x0.values)
    if (v < 0.0) throw PreconditionError("check_basic: X0 must be >= 0");
  for (double v : x1.values)
    if (v < 0.0) throw PreconditionError("check_basic: X1 must be >= 0");
  if (!same_distribution(space, x0, x1))
    throw PreconditionError(
        "check_basic: X0 and X1 are not identically distributed");
  if (!is_measurable(x0, g))
    throw PreconditionError("check_basic: X0 not measurable for g");
  const bool variance_form = std::fabs(u - (p - 1.0)) < 1e-12;
  if (!variance_form && (u < 0.0 || u > p - 2.0))
    throw DomainError("check_basic: need 0 <= u <= p-2 or u = p-1");

  CheckResult r;
  r.name = variance_form ? "basic_b2" : "basic_b1";
  Rv mom(x0.size(), 0.0);
  for (std::size_t i = 0; i < x0.size(); ++i)
    mom[i] = std::pow(x0[i], u) * std::pow(x1[i], p - u);
  r.lhs = expect(space, mom);

  const double a = lp_norm(space, x1, p);  // = ||X0||_p by equal law
  Rv x1sq = hadamard(x1, x1);
  const double cond_norm = lp_norm(space, cond_expect(space, x1sq, g), p / 2.0);
  if (variance_form) {
    r.rhs = std::pow(a, p - 1.0) * std::sqrt(cond_norm);
  } else {
    r.rhs = std::pow(a, p - 2.0 * u / (p - 2.0)) *
            std::pow(cond_norm, u / (p - 2.0));
  }
  r.ok = leq_with_slack(r.lhs, r.rhs);
  return r;
}

Rv conditional_bivariate_gap(const FiniteSpace& space, const Rv& yi,
                             const Rv& yj, const PartitionSigma& sigma0) {
  const std::size_t n = space.size();
  if (yi.size() != n || yj.size() != n)
    throw DimensionError("conditional_bivariate_gap: size mismatch");
  auto thresholds = [](const Rv& y) {
    std::vector<double> t = y.values;
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  };
  const std::vector<double> ti = thresholds(yi), tj = thresholds(yj);
  Rv gap(n, 0.0);
  for (double t : ti) {
    for (double s : tj) {
      double joint = 0.0;
      for (std::size_t a = 0; a < n; ++a)
        if (yi[a] <= t && yj[a] <= s) joint += space.weight(a);
      // Conditional probability per block, against the unconditional one.
      for (const auto& block : sigma0.blocks()) {
        double mass = 0.0, hit = 0.0;
        for (std::uint32_t a : block) {
          mass += space.weight(a);
          if (yi[a] <= t && yj[a] <= s) hit += space.weight(a);
        }
        const double cond = mass > 0.0 ? hit / mass : joint;
        const double d = std::fabs(cond - joint);
        for (std::uint32_t a : block) gap[a] = std::max(gap[a], d);
      }
    }
  }
  return gap;
}

CheckResult check_covbeta_item1(const FiniteSpace& space, const Rv& z,
                                const Rv& yi, const Rv& h_of_y,
                                const PartitionSigma& sigma0, double dh) {
  if (!is_measurable(z, sigma0))
    throw PreconditionError("check_covbeta: Z not measurable for sigma0");
  CheckResult r;
  r.name = "covbeta_item1";
  const double ez = expect(space, z);
  const double eh = expect(space, h_of_y);
  Rv prod(space.size(), 0.0);
  for (std::size_t a = 0; a < space.size(); ++a)
    prod[a] = (z[a] - ez) * (h_of_y[a] - eh);
  r.lhs = std::fabs(expect(space, prod));
  const Rv b = conditional_bivariate_gap(space, yi, yi, sigma0);
  Rv zb(space.size(), 0.0);
  for (std::size_t a = 0; a < space.size(); ++a)
    zb[a] = std::fabs(z[a]) * b[a];
  r.rhs = dh * expect(space, zb);
  r.ok = leq_with_slack(r.lhs, r.rhs);
  return r;
}

CheckResult check_covbeta_item2(const FiniteSpace& space, const Rv& z,
                                const Rv& yi, const Rv& yj, const Rv& h_of_y,
                                const Rv& g_of_y, const PartitionSigma& sigma0,
                                double dh, double dg) {
  if (!is_measurable(z, sigma0))
    throw PreconditionError("check_covbeta: Z not measurable for sigma0");
  CheckResult r;
  r.name = "covbeta_item2";
  const double ez = expect(space, z);
  const double eh = expect(space, h_of_y);
  const double eg = expect(space, g_of_y);
  Rv prod(space.size(), 0.0);
  for (std::size_t a = 0; a < space.size(); ++a)
    prod[a] = (z[a] - ez) * (h_of_y[a] - eh) * (g_of_y[a] - eg);
  r.lhs = std::fabs(expect(space, prod));
  const Rv bii = conditional_bivariate_gap(space, yi, yi, sigma0);
  const Rv bjj = conditional_bivariate_gap(space, yj, yj, sigma0);
  const Rv bij = conditional_bivariate_gap(space, yi, yj, sigma0);
  Rv zb(space.size(), 0.0);
  for (std::size_t a = 0; a < space.size(); ++a)
    zb[a] = std::fabs(z[a]) * (bii[a] + bjj[a] + bij[a]);
  r.rhs = dh * dg * expect(space, zb);
  r.ok = leq_with_slack(r.lhs, r.rhs);
  return r;
}

CheckResult check_subadd(const std::vector<double>& V, double C, int item,
                         const SubaddParams& params) {
  if (V.empty() || V[0] != 0.0)
    throw PreconditionError("check_subadd: V_0 must be 0");
  if (C < 1.0) throw DomainError("check_subadd: C must be >= 1");
  const int len = static_cast<int>(V.size()) - 1;  // V_1..V_len usable
  for (int i = 0; i <= len; ++i)
    for (int j = 0; i + j <= len; ++j)
      if (V[i + j] > C * (V[i] + V[j]) + 1e-12)
        throw PreconditionError(
            "check_subadd: hypothesis violated at (i,j)=(" +
            std::to_string(i) + "," + std::to_string(j) + ")");

  CheckResult r;
  r.name = "subadd_item" + std::to_string(item);
  const double q = params.q;
  if (item == 1) {
    const int n = params.n;
    if (n < 1 || n > len) throw ArgumentError("check_subadd item1: bad n");
    if (q < 0.0) throw DomainError("check_subadd item1: q must be >= 0");
    int rr = 1;
    while ((1 << rr) <= n) ++rr;  // 2^{rr-1} <= n < 2^rr
    double lhs = 0.0;
    for (int i = 0; i < rr; ++i)
      lhs += V[std::min(1 << i, len)] / std::pow(2.0, i * q);
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) sum += V[k] / std::pow(k, 1.0 + q);
    r.lhs = lhs;
    r.rhs = C * std::pow(2.0, q + 2.0) / (std::pow(2.0, q + 1.0) - 1.0) * sum;
  } else if (item == 2) {
    const int k = params.k, m = params.m;
    if (k < 1 || m < 1 || k * m > len)
      throw ArgumentError("check_subadd item2: bad k, m");
    if (q <= 0.0) throw DomainError("check_subadd item2: q must be > 0");
    double lhs = 0.0;
    for (int j = 1; j <= k; ++j) lhs += V[j * m] / std::pow(j, q);
    double s1 = 0.0;
    for (int l = 1; l <= m; ++l) s1 += V[l] / std::pow(l + m, q);
    double s2 = 0.0;
    for (int l = m + 1; l <= k * m; ++l) s2 += V[l] / std::pow(l, q);
    r.lhs = lhs;
    r.rhs = std::pow(2.0, q + 1.0) * C / q * std::pow(m, q - 1.0) * s1 +
            2.0 * C / q * std::pow(m, q - 1.0) * s2;
  } else if (item == 3) {
    const int n = params.n;
    const double gamma = params.gamma, delta = params.delta;
    if (n < 1 || n > len) throw ArgumentError("check_subadd item3: bad n");
    if (!(0.0 < delta && delta <= gamma && gamma <= 1.0))
      throw DomainError("check_subadd item3: need 0 < delta <= gamma <= 1");
    if (q < 0.0) throw DomainError("check_subadd item3: q must be >= 0");
    double sg = 0.0, sd = 0.0;
    for (int k = 1; k <= n; ++k) {
      sg += std::pow(V[k], gamma) / std::pow(k, 1.0 + q * gamma);
      sd += std::pow(V[k], delta) / std::pow(k, 1.0 + q * delta);
    }
    r.lhs = std::pow(sg, 1.0 / gamma);
    r.rhs = std::pow(2.0, 1.0 / delta - 1.0 / gamma) *
            std::pow(C, (gamma - delta) / delta) * std::pow(sd, 1.0 / delta);
  } else {
    throw ArgumentError("check_subadd: item must be 1, 2 or 3");
  }
  r.ok = leq_with_slack(r.lhs, r.rhs);
  return r;
}

namespace {

struct PaddedAdapted {
  std::vector<Rv> xs;  // length 2^r
  int r = 0;
};

PaddedAdapted pad_to_dyadic(const FiniteSpace& space, std::vector<Rv> xs) {
  PaddedAdapted out;
  int r = 0;
  while ((1 << r) < static_cast<int>(xs.size())) ++r;
  const std::size_t target = std::size_t{1} << r;
  while (xs.size() < target) xs.emplace_back(space.size(), 0.0);
  out.xs = std::move(xs);
  out.r = r;
  return out;
}

const PartitionSigma& sigma_at(const Filtration& filt, std::size_t t) {
  // Padded tail keeps the last available sigma.
  return filt.sigmas[std::min(t, filt.sigmas.size() - 1)];
}

void require_adapted(const FiniteSpace& space, const Filtration& filt,
                     const std::vector<Rv>& xs) {
  if (filt.sigmas.empty())
    throw PreconditionError("maximal check: empty filtration");
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (xs[k].size() != space.size())
      throw DimensionError("maximal check: rv length mismatch");
    if (!is_measurable(xs[k], sigma_at(filt, k + 1)))
      throw PreconditionError("maximal check: sequence is not adapted");
  }
}

// alpha_l = (sum_{k=1}^{2^{r-l}-1} ||E(S_{(k+1)2^l} - S_{k 2^l} |
// F_{k 2^l})||_p^p)^{1/p}, with an optional shift v applied to the summands
// but not to the conditioning times.
double alpha_level(const FiniteSpace& space, const Filtration& filt,
                   const std::vector<Rv>& sums, double p, int r, int l,
                   long v) {
  const long blocks = (1L << (r - l)) - 1;
  double acc = 0.0;
  for (long k = 1; k <= blocks; ++k) {
    const long a = v + k * (1L << l);
    const long b = v + (k + 1) * (1L << l);
    if (static_cast<std::size_t>(b) > sums.size())
      throw ArgumentError("maximal check: sequence too short for the shift");
    Rv inc = sums[b - 1];
    if (a >= 1) inc = inc - sums[a - 1];
    const Rv cond =
        cond_expect(space, inc, sigma_at(filt, static_cast<std::size_t>(
                                                   k * (1L << l))));
    acc += std::pow(lp_norm(space, cond, p), p);
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace

CheckResult check_maximal_explicit(const FiniteSpace& space,
                                   const Filtration& filt, std::vector<Rv> xs,
                                   double p, const std::string& variant,
                                   const MaximalOptions& opts) {
  if (p <= 1.0) throw DomainError("maximal check: p must exceed 1");
  require_adapted(space, filt, xs);
  const std::size_t n_orig = xs.size();
  const double q = p / (p - 1.0);

  CheckResult r;
  r.name = "maximal_" + variant;
  if (variant == "prop21" || variant == "cormaxstat") {
    auto padded = pad_to_dyadic(space, std::move(xs));
    if (variant == "cormaxstat" && padded.xs.size() != n_orig)
      throw ArgumentError("cormaxstat: needs a dyadic-length window");
    const auto sums = partial_sum_process(padded.xs);
    const double lhs =
        std::pow(max_abs_partial_sum_moment(space, padded.xs, p), 1.0 / p);
    const double endpoint = lp_norm(space, sums.back(), p);
    double corr = 0.0;
    if (variant == "prop21") {
      for (int l = 0; l < padded.r; ++l)
        corr += alpha_level(space, filt, sums, p, padded.r, l, 0);
    } else {
      // Stationary form: q 2^{r/p} sum_l 2^{-l/p} ||E(S_{2^l}|F_0)||_p.
      for (int l = 0; l < padded.r; ++l) {
        const Rv cond = cond_expect(space, sums[(1 << l) - 1], sigma_at(filt, 0));
        corr += std::pow(2.0, -static_cast<double>(l) / p) *
                lp_norm(space, cond, p);
      }
      corr *= std::pow(2.0, static_cast<double>(padded.r) / p);
    }
    r.lhs = lhs;
    r.rhs = q * endpoint + q * corr;
    r.parts = {{"endpoint", q * endpoint}, {"correction", q * corr}};
  } else if (variant == "maxdyadic" || variant == "cons1sub") {
    const auto sums = partial_sum_process(xs);
    const double lhs =
        std::pow(max_abs_partial_sum_moment(space, xs, p), 1.0 / p);
    double max_norm = 0.0;
    for (const Rv& s : sums) max_norm = std::max(max_norm, lp_norm(space, s, p));
    const double n = static_cast<double>(n_orig);
    double corr = 0.0;
    if (variant == "maxdyadic") {
      // r with 2^{r-1} <= n < 2^r.
      int rr = 1;
      while ((1 << rr) <= static_cast<int>(n_orig)) ++rr;
      for (int l = 0; l < rr; ++l) {
        const std::size_t idx = std::min<std::size_t>((1 << l), n_orig) - 1;
        const Rv cond = cond_expect(space, sums[idx], sigma_at(filt, 0));
        corr += std::pow(2.0, -static_cast<double>(l) / p) *
                lp_norm(space, cond, p);
      }
      r.rhs = 2.0 * q * max_norm +
              std::pow(2.0, 1.0 / p) * q * std::pow(n, 1.0 / p) * corr;
    } else {
      for (std::size_t j = 1; j <= n_orig; ++j) {
        const Rv cond = cond_expect(space, sums[j - 1], sigma_at(filt, 0));
        corr += std::pow(static_cast<double>(j), -1.0 - 1.0 / p) *
                lp_norm(space, cond, p);
      }
      const double c =
          q * std::pow(2.0, 2.0 + 2.0 / p) / (std::pow(2.0, 1.0 + 1.0 / p) - 1.0);
      r.rhs = 2.0 * q * max_norm + c * std::pow(n, 1.0 / p) * corr;
    }
    r.lhs = lhs;
    r.parts = {{"max_norm_term", 2.0 * q * max_norm},
               {"correction", r.rhs - 2.0 * q * max_norm}};
  } else {
    throw ArgumentError("check_maximal_explicit: unknown variant " + variant);
  }
  r.ok = r.lhs <= r.rhs + opts.rel_tol * std::max(1.0, std::fabs(r.rhs));
  return r;
}

namespace {
double phi_eval(const std::string& phi_id, double t) {
  const auto colon = phi_id.find(':');
  const std::string kind = phi_id.substr(0, colon);
  const double param =
      colon == std::string::npos ? 2.0 : std::stod(phi_id.substr(colon + 1));
  if (kind == "power") {
    if (param < 1.0) throw DomainError("phi power exponent must be >= 1");
    return std::pow(std::fabs(t), param);
  }
  if (kind == "exp") return std::exp(param * std::fabs(t));
  throw ArgumentError("unknown phi family: " + phi_id);
}
}  // namespace

MaximalProbaResult check_maximal_proba(const FiniteSpace& space,
                                       const Filtration& filt,
                                       const std::vector<Rv>& xs, double p,
                                       const std::string& phi_id,
                                       const std::vector<double>& x_grid,
                                       int form) {
  if (p <= 1.0) throw DomainError("maximal proba: p must exceed 1");
  require_adapted(space, filt, xs);
  const double q = p / (p - 1.0);

  // The checked window is the largest 2^r <= len (form 1) or the dyadic
  // prefix leaving room for the shift (form 2).
  MaximalProbaResult out;
  out.variant = form == 1 ? "tail_2x" : "tail_4x_bounded";

  double M = 0.0;
  for (const Rv& x : xs)
    for (double v : x.values) M = std::max(M, std::fabs(v));
  if (form == 2 && M <= 0.0)
    throw PreconditionError("maximal proba form 2: degenerate bound M = 0");

  const auto sums = partial_sum_process(xs);
  for (double x : x_grid) {
    if (x <= 0.0) throw DomainError("maximal proba: x must be positive");
    long v = 0;
    if (form == 2) v = static_cast<long>(std::floor(x / M));
    int r = 0;
    while ((2L << r) + (form == 2 ? v : 0) <=
           static_cast<long>(xs.size()))
      ++r;
    if (r == 0)
      throw ArgumentError(
          "maximal proba: sequence too short for the requested grid");
    const long window = 1L << r;

    // Exact tail of max_{1<=i<=2^r} |S_i| at the scaled threshold.
    const double threshold = (form == 1 ? 2.0 : 4.0) * x;
    double tail = 0.0;
    {
      std::vector<double> peak(space.size(), 0.0);
      for (long t = 0; t < window; ++t)
        for (std::size_t a = 0; a < space.size(); ++a)
          peak[a] = std::max(peak[a], std::fabs(sums[t][a]));
      for (std::size_t a = 0; a < space.size(); ++a)
        if (peak[a] >= threshold) tail += space.weight(a);
    }

    const double phi_term =
        expect(space, Rv([&] {
                 std::vector<double> vals(space.size());
                 for (std::size_t a = 0; a < space.size(); ++a)
                   vals[a] = phi_eval(phi_id, sums[window - 1][a]);
                 return vals;
               }())) /
        phi_eval(phi_id, x);
    double corr = 0.0;
    for (int l = 0; l < r; ++l)
      corr += alpha_level(space, filt, sums, p, r, l, form == 2 ? v : 0);
    const double bound = phi_term + std::pow(q, p) * std::pow(x, -p) *
                                        std::pow(corr, p);
    out.x.push_back(x);
    out.tail.push_back(tail);
    out.bound.push_back(bound);
    if (tail > bound + 1e-12 * std::max(1.0, bound)) out.pass = false;
  }
  return out;
}

}  // namespace momineq
