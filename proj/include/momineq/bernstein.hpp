#pragma once

#include "momineq/model.hpp"
#include "momineq/profiles.hpp"

namespace momineq {

// Calibrated once on i.i.d. data and held fixed; see docs/README for the
// calibration recipe (tools/ exposes it as `momineq bernstein --calibrate`).
struct BernsteinConstants {
  double C = 0.20;
  double K = 4.0;
};

// exp(-C x^2 / (v^2 n + M^2 + x M (log n)^2)), natural log.
double bernstein_bound(double v2, double M, double C, double n, double x);

struct BernsteinTailCheck {
  struct Row {
    int n;
    double x;
    double empirical;
    double se;
    double bound;
    bool checked;  // x > K log n
    bool pass;
  };
  std::vector<Row> rows;
  double alpha_rate = 0.0;  // fitted c in alpha(n) <= exp(-c n)
  double v2 = 0.0, M = 0.0;
  bool pass = true;
};

struct BernsteinOptions {
  BernsteinConstants constants;
  int mc_paths = 100000;
  std::uint64_t seed = 424242;
  int x_points = 8;  // per n, spread from just above K log n upward
};

// Bounded finite chain with geometrically decaying strong mixing: empirical
// P(max_{k<=n} |S_k| >= x) against the calibrated bound, 3-se slack, on all
// grid x above the K log n threshold.
BernsteinTailCheck bernstein_tail_check(const FiniteChain& chain,
                                        const std::vector<int>& n_grid,
                                        const BernsteinOptions& opts = {});

}  // namespace momineq
