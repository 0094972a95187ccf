#include "momineq/fuzz.hpp"

#include <cmath>
#include <sstream>

#include "momineq/chain.hpp"

namespace momineq {

namespace {

void record(FuzzReport& rep, const CheckResult& r, const std::string& what) {
  ++rep.draws;
  if (!r.ok) {
    ++rep.violations;
    if (rep.first_witness.empty()) {
      std::ostringstream os;
      os << what << ": lhs=" << r.lhs << " rhs=" << r.rhs;
      rep.first_witness = os.str();
    }
  }
}

}  // namespace

FuzzReport fuzz_cross(long long draws, std::uint64_t seed,
                      bool inject_failure) {
  FuzzReport rep;
  rep.suite = "cross";
  if (draws <= 0) {
    rep.vacuous = true;
    return rep;
  }
  auto rng = path_rng(seed, 1);
  const std::vector<std::string> variants = {"rio", "rio34", "int",
                                             "evenint"};
  for (long long i = 0; i < draws; ++i) {
    const std::string& variant = variants[i % variants.size()];
    double x = -10.0 + 20.0 * uniform01(rng);
    double y = -10.0 + 20.0 * uniform01(rng);
    double p;
    if (variant == "rio") {
      p = 2.0 + uniform01(rng);
    } else if (variant == "rio34") {
      p = std::nextafter(3.0, 4.0) + uniform01(rng) *
                                         (4.0 - std::nextafter(3.0, 4.0));
    } else if (variant == "int") {
      p = 1.0 + 6.0 * uniform01(rng);
      x = std::fabs(x);
      y = std::fabs(y);
    } else {
      p = 2.0 * (1 + static_cast<int>(uniform01(rng) * 3));  // 2, 4, 6
    }
    CheckResult r = check_cross(x, y, p, variant);
    if (inject_failure && i == draws / 2) r.ok = false;  // harness self-test
    record(rep, r, variant);
  }
  return rep;
}

FuzzReport fuzz_basic(long long draws, std::uint64_t seed) {
  FuzzReport rep;
  rep.suite = "basic";
  if (draws <= 0) {
    rep.vacuous = true;
    return rep;
  }
  const std::vector<double> ps = {3.0, 4.0, 6.0};
  for (long long d = 0; d < draws; ++d) {
    auto rng = path_rng(seed, static_cast<std::uint64_t>(d));
    // Exchangeable positive pair on 6 atoms: three value pairs, each split
    // symmetrically over two atoms.
    std::vector<double> w(6), x0(6), x1(6);
    double tot = 0.0;
    for (int pair = 0; pair < 3; ++pair) {
      const double a = 0.05 + 3.0 * uniform01(rng);
      const double b = 0.05 + 3.0 * uniform01(rng);
      const double mass = 0.1 + uniform01(rng);
      x0[2 * pair] = a;
      x1[2 * pair] = b;
      x0[2 * pair + 1] = b;
      x1[2 * pair + 1] = a;
      w[2 * pair] = mass / 2.0;
      w[2 * pair + 1] = mass / 2.0;
      tot += mass;
    }
    for (double& v : w) v /= tot;
    const FiniteSpace space(w);
    std::vector<std::uint64_t> labels(6);
    for (int a = 0; a < 6; ++a)
      labels[a] = static_cast<std::uint64_t>(std::llround(x0[a] * 1e9));
    const PartitionSigma g = PartitionSigma::from_labels(labels);
    const double p = ps[d % ps.size()];
    // u grid over [0, p-2] plus the variance form u = p-1.
    for (double frac : {0.0, 0.3, 0.7, 1.0}) {
      const double u = frac * (p - 2.0);
      record(rep, check_basic(space, Rv(x0), Rv(x1), g, p, u), "basic_b1");
    }
    record(rep, check_basic(space, Rv(x0), Rv(x1), g, p, p - 1.0),
           "basic_b2");
  }
  return rep;
}

FuzzReport fuzz_covbeta(long long draws, std::uint64_t seed) {
  FuzzReport rep;
  rep.suite = "covbeta";
  if (draws <= 0) {
    rep.vacuous = true;
    return rep;
  }
  for (long long d = 0; d < draws; ++d) {
    auto rng = path_rng(seed ^ 0xC0, static_cast<std::uint64_t>(d));
    const std::size_t n = 8;
    std::vector<double> w(n);
    double tot = 0.0;
    for (double& v : w) {
      v = 0.05 + uniform01(rng);
      tot += v;
    }
    for (double& v : w) v /= tot;
    const FiniteSpace space(w);

    // sigma0: partition into 2-4 blocks; Z measurable on it.
    const int blocks = 2 + static_cast<int>(uniform01(rng) * 3);
    std::vector<std::uint64_t> lab(n);
    for (std::size_t a = 0; a < n; ++a)
      lab[a] = static_cast<std::uint64_t>(uniform01(rng) * blocks);
    lab[0] = 0;  // keep at least one block nonempty deterministically
    const PartitionSigma sigma0 = PartitionSigma::from_labels(lab);
    Rv z(n, 0.0);
    {
      std::vector<double> bval(blocks + 1);
      for (double& v : bval) v = -2.0 + 4.0 * uniform01(rng);
      for (std::size_t a = 0; a < n; ++a)
        z[a] = bval[sigma0.block_of(a)];
    }
    Rv yi(n, 0.0), yj(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      yi[a] = -1.0 + 2.0 * uniform01(rng);
      yj[a] = -1.0 + 2.0 * uniform01(rng);
    }
    // Step functions with explicit jump lists -> exact total variation.
    auto step_fn = [&](double& tv) {
      const int jumps = 1 + static_cast<int>(uniform01(rng) * 3);
      std::vector<std::pair<double, double>> js(jumps);
      tv = 0.0;
      for (auto& [at, size] : js) {
        at = -1.0 + 2.0 * uniform01(rng);
        size = -1.0 + 2.0 * uniform01(rng);
        tv += std::fabs(size);
      }
      return [js](double t) {
        double v = 0.0;
        for (const auto& [at, size] : js)
          if (t >= at) v += size;
        return v;
      };
    };
    double dh = 0.0, dg = 0.0;
    auto hf = step_fn(dh);
    auto gf = step_fn(dg);
    Rv h_of_y(n, 0.0), g_of_y(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      h_of_y[a] = hf(yi[a]);
      g_of_y[a] = gf(yj[a]);
    }
    record(rep, check_covbeta_item1(space, z, yi, h_of_y, sigma0, dh),
           "covbeta1");
    record(rep,
           check_covbeta_item2(space, z, yi, yj, h_of_y, g_of_y, sigma0, dh,
                               dg),
           "covbeta2");
  }
  return rep;
}

FuzzReport fuzz_subadd(long long draws, std::uint64_t seed) {
  FuzzReport rep;
  rep.suite = "subadd";
  if (draws <= 0) {
    rep.vacuous = true;
    return rep;
  }
  for (long long d = 0; d < draws; ++d) {
    auto rng = path_rng(seed ^ 0x5B, static_cast<std::uint64_t>(d));
    const int len = 32 + static_cast<int>(uniform01(rng) * 32);
    const double C = 1.0 + 2.0 * uniform01(rng);
    std::vector<double> V(len + 1, 0.0);
    const int kind = static_cast<int>(uniform01(rng) * 3);
    if (kind == 0) {
      // bounded band [a, 2aC]: C-subadditive by construction
      const double a = 0.2 + uniform01(rng);
      for (int i = 1; i <= len; ++i)
        V[i] = a + (2.0 * a * C - a) * uniform01(rng);
    } else if (kind == 1) {
      const double theta = 0.2 + 0.8 * uniform01(rng);
      for (int i = 1; i <= len; ++i) V[i] = std::pow(i, theta);
    } else {
      for (int i = 1; i <= len; ++i) V[i] = std::log1p(i);
    }
    SubaddParams prm;
    prm.q = 0.25 + 2.0 * uniform01(rng);
    prm.n = 2 + static_cast<int>(uniform01(rng) * (len - 2));
    record(rep, check_subadd(V, C, 1, prm), "subadd1");
    prm.m = 1 + static_cast<int>(uniform01(rng) * 4);
    prm.k = std::max(1, len / prm.m);
    record(rep, check_subadd(V, C, 2, prm), "subadd2");
    prm.delta = 0.1 + 0.9 * uniform01(rng);
    prm.gamma = prm.delta + (1.0 - prm.delta) * uniform01(rng);
    record(rep, check_subadd(V, C, 3, prm), "subadd3");
  }
  return rep;
}

namespace {

// Random adapted sequence on an unrolled chain: per-time observables are
// arbitrary functions of the trajectory prefix, so adaptedness is the only
// structure. Stationary variants instead use the chain observable itself.
struct AdaptedDraw {
  UnrolledChain unrolled;
  std::vector<Rv> xs;
  bool stationary;
};

AdaptedDraw draw_adapted(std::mt19937_64& rng, int max_states, int max_r,
                         bool stationary) {
  const int m = 2 + static_cast<int>(uniform01(rng) * (max_states - 1));
  FiniteChain chain = random_chain(rng, m);
  const int r = 1 + static_cast<int>(uniform01(rng) * max_r);
  const int n = 1 << r;
  AdaptedDraw out{chain.unroll(n), {}, stationary};
  if (stationary) {
    out.xs = out.unrolled.xs;
    return out;
  }
  // Adapted, non-stationary: X_t = g_t(state_t) with fresh g_t each t.
  out.xs.reserve(n);
  for (int t = 1; t <= n; ++t) {
    std::vector<double> g(m);
    for (double& v : g) v = -1.0 + 2.0 * uniform01(rng);
    Rv x(out.unrolled.space.size(), 0.0);
    for (std::size_t a = 0; a < x.size(); ++a)
      x[a] = g[static_cast<int>(out.unrolled.states[t][a])];
    out.xs.push_back(std::move(x));
  }
  return out;
}

}  // namespace

FuzzReport fuzz_maximal(long long draws, std::uint64_t seed,
                        const std::vector<double>& p_values) {
  FuzzReport rep;
  rep.suite = "maximal";
  if (draws <= 0) {
    rep.vacuous = true;
    return rep;
  }
  for (long long d = 0; d < draws; ++d) {
    auto rng = path_rng(seed ^ 0x3A, static_cast<std::uint64_t>(d));
    const double p = p_values[d % p_values.size()];
    const bool stationary = d % 2 == 0;
    AdaptedDraw ad = draw_adapted(rng, 3, 3, stationary);
    record(rep,
           check_maximal_explicit(ad.unrolled.space, ad.unrolled.filtration,
                                  ad.xs, p, "prop21"),
           "prop21");
    if (stationary) {
      record(rep,
             check_maximal_explicit(ad.unrolled.space, ad.unrolled.filtration,
                                    ad.xs, p, "cormaxstat"),
             "cormaxstat");
      record(rep,
             check_maximal_explicit(ad.unrolled.space, ad.unrolled.filtration,
                                    ad.xs, p, "maxdyadic"),
             "maxdyadic");
      record(rep,
             check_maximal_explicit(ad.unrolled.space, ad.unrolled.filtration,
                                    ad.xs, p, "cons1sub"),
             "cons1sub");
    }
  }
  return rep;
}

FuzzReport fuzz_maximal_proba(long long draws, std::uint64_t seed) {
  FuzzReport rep;
  rep.suite = "maximal_proba";
  if (draws <= 0) {
    rep.vacuous = true;
    return rep;
  }
  for (long long d = 0; d < draws; ++d) {
    auto rng = path_rng(seed ^ 0x7E, static_cast<std::uint64_t>(d));
    const double p = 2.0 + 2.0 * uniform01(rng);
    const int m = 2 + static_cast<int>(uniform01(rng) * 2);
    FiniteChain chain = random_chain(rng, m);
    const int r = 1 + static_cast<int>(uniform01(rng) * 2);
    // Room for the shifted form: window 2^r plus up to v = 4 extra steps.
    const UnrolledChain un = chain.unroll((1 << r) + 4);
    double M = 0.0;
    for (const Rv& x : un.xs)
      for (double v : x.values) M = std::max(M, std::fabs(v));
    std::vector<double> grid;
    for (double f : {0.5, 1.0, 2.0, 4.0}) grid.push_back(f * std::max(M, 0.1));
    const std::string phi = d % 2 == 0 ? "power:2" : "exp:1.0";
    const MaximalProbaResult r1 = check_maximal_proba(
        un.space, un.filtration, un.xs, p, phi, grid, 1);
    const MaximalProbaResult r2 = check_maximal_proba(
        un.space, un.filtration, un.xs, p, phi, grid, 2);
    rep.draws += 2;
    if (!r1.pass || !r2.pass) {
      ++rep.violations;
      if (rep.first_witness.empty())
        rep.first_witness = "tail bound violated (draw " +
                            std::to_string(d) + ")";
    }
  }
  return rep;
}

}  // namespace momineq
