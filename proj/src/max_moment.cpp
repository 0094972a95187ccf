#include "momineq/max_moment.hpp"

#include <algorithm>
#include <cmath>

namespace momineq {

namespace {

double enumerate_max_moment(const FiniteChain& chain, double p, int n) {
  const int m = static_cast<int>(chain.n_states());
  double count = 1.0;
  for (int t = 0; t < n; ++t) count *= m;
  if (count > static_cast<double>(FiniteSpace::kAtomCap))
    throw SizeError("enumerate: trajectory count exceeds the atom cap");
  // Depth-first walk over trajectories, carrying weight / sum / running max.
  struct Frame {
    int state;
    int next_child;
    double weight, sum, peak;
  };
  double acc = 0.0;
  std::vector<Frame> stack;
  stack.reserve(static_cast<std::size_t>(n) + 1);
  for (int s0 = 0; s0 < m; ++s0) {
    stack.push_back({s0, 0, chain.pi()(s0), 0.0, 0.0});
    while (!stack.empty()) {
      Frame& fr = stack.back();
      if (static_cast<int>(stack.size()) == n + 1 || fr.next_child == m) {
        if (static_cast<int>(stack.size()) == n + 1)
          acc += fr.weight * std::pow(fr.peak, p);
        stack.pop_back();
        continue;
      }
      const int child = fr.next_child++;
      const double w = fr.weight * chain.Q()(fr.state, child);
      if (w == 0.0) continue;
      const double sum = fr.sum + chain.f()(child);
      stack.push_back(
          {child, 0, w, sum, std::max(fr.peak, std::fabs(sum))});
    }
  }
  return acc;
}

struct DpPlan {
  double resolution;
  long long min_step, max_step;  // lattice steps of the observable
  long long lo, hi;              // reachable sum range at horizon n
  std::size_t span, peak_span;
  std::size_t entries_per_state;
};

DpPlan plan_dp(const FiniteChain& chain, int n) {
  const auto res = detect_lattice(chain.f());
  if (!res)
    throw MethodError(
        "exact_dp: observable values are not on a common lattice");
  DpPlan plan;
  plan.resolution = *res;
  plan.min_step = 0;
  plan.max_step = 0;
  for (Eigen::Index i = 0; i < chain.f().size(); ++i) {
    const long long step =
        static_cast<long long>(std::llround(chain.f()(i) / *res));
    plan.min_step = std::min(plan.min_step, step);
    plan.max_step = std::max(plan.max_step, step);
  }
  plan.lo = plan.min_step * n;
  plan.hi = plan.max_step * n;
  plan.span = static_cast<std::size_t>(plan.hi - plan.lo + 1);
  plan.peak_span = static_cast<std::size_t>(
                       std::max(std::llabs(plan.lo), std::llabs(plan.hi))) +
                   1;
  plan.entries_per_state = plan.span * plan.peak_span;
  return plan;
}

double dp_max_moment(const FiniteChain& chain, double p, int n,
                     const DpPlan& plan) {
  const int m = static_cast<int>(chain.n_states());
  const std::size_t per_state = plan.entries_per_state;
  const std::size_t total = per_state * static_cast<std::size_t>(m);
  // prob[state][ (sum - lo) * peak_span + peak ]
  std::vector<double> cur(total, 0.0), next(total, 0.0);
  const long long off = -plan.lo;
  auto idx = [&](int s, long long sum, long long peak) {
    return static_cast<std::size_t>(s) * per_state +
           static_cast<std::size_t>(sum + off) * plan.peak_span +
           static_cast<std::size_t>(peak);
  };
  std::vector<long long> fstep(m);
  for (int i = 0; i < m; ++i)
    fstep[i] = static_cast<long long>(std::llround(chain.f()(i) /
                                                   plan.resolution));
  for (int s = 0; s < m; ++s) cur[idx(s, 0, 0)] = chain.pi()(s);

  long long reach_lo = 0, reach_hi = 0, reach_peak = 0;
  for (int t = 0; t < n; ++t) {
    const long long next_lo = reach_lo + plan.min_step;
    const long long next_hi = reach_hi + plan.max_step;
    std::fill(next.begin(), next.end(), 0.0);
    for (int s = 0; s < m; ++s) {
      for (long long sum = reach_lo; sum <= reach_hi; ++sum) {
        const std::size_t base = idx(s, sum, 0);
        for (long long peak = std::llabs(sum); peak <= reach_peak; ++peak) {
          const double w = cur[base + static_cast<std::size_t>(peak)];
          if (w == 0.0) continue;
          for (int s2 = 0; s2 < m; ++s2) {
            const double q = chain.Q()(s, s2);
            if (q == 0.0) continue;
            const long long sum2 = sum + fstep[s2];
            const long long peak2 = std::max(peak, std::llabs(sum2));
            next[idx(s2, sum2, peak2)] += w * q;
          }
        }
      }
    }
    cur.swap(next);
    reach_lo = next_lo;
    reach_hi = next_hi;
    reach_peak = std::max(std::llabs(reach_lo), std::llabs(reach_hi));
  }
  double acc = 0.0;
  for (int s = 0; s < m; ++s)
    for (long long sum = reach_lo; sum <= reach_hi; ++sum)
      for (long long peak = std::llabs(sum); peak <= reach_peak; ++peak) {
        const double w = cur[idx(s, sum, peak)];
        if (w != 0.0)
          acc += w * std::pow(static_cast<double>(peak) * plan.resolution, p);
      }
  return acc;
}

}  // namespace

MaxMethod resolve_max_method(const FiniteChain& chain, int n,
                             const MaxMomentOptions& opts) {
  try {
    const DpPlan plan = plan_dp(chain, n);
    const double entries =
        static_cast<double>(plan.entries_per_state) * chain.n_states();
    const double transitions =
        entries * static_cast<double>(chain.n_states()) * n;
    return entries <= static_cast<double>(opts.dp_max_entries) &&
                   transitions <= opts.dp_max_transitions
               ? MaxMethod::exact_dp
               : MaxMethod::mc;
  } catch (const MethodError&) {
    return MaxMethod::mc;
  }
}

MaxMomentResult max_moment(const FiniteChain& chain, double p, int n,
                           MaxMethod method, const MaxMomentOptions& opts) {
  if (p < 1.0) throw DomainError("max_moment: p must be >= 1");
  if (n < 1) throw ArgumentError("max_moment: n must be >= 1");
  if (method == MaxMethod::auto_select)
    method = resolve_max_method(chain, n, opts);
  switch (method) {
    case MaxMethod::enumerate:
      return {enumerate_max_moment(chain, p, n), 0.0, "enumerate"};
    case MaxMethod::exact_dp: {
      const DpPlan plan = plan_dp(chain, n);
      return {dp_max_moment(chain, p, n, plan), 0.0, "exact_dp"};
    }
    case MaxMethod::mc: {
      const PathEnsemble ens =
          sample_paths(chain, n, opts.mc_paths, opts.seed);
      const MaxMomentGrid g = max_moment_mc_grid(ens, p, {n});
      return {g.value[0], g.se[0], "mc"};
    }
    default:
      throw ArgumentError("max_moment: bad method");
  }
}

MaxMomentGrid max_moment_mc_grid(const PathEnsemble& ens, double p,
                                 const std::vector<int>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw ArgumentError("max_moment grid must increase");
  if (!grid.empty() && grid.back() > static_cast<int>(ens.n_steps()))
    throw ArgumentError("max_moment grid exceeds ensemble length");
  const std::size_t N = ens.n_paths();
  const std::size_t G = grid.size();
  constexpr std::size_t kChunks = 64;
  std::vector<double> sum(kChunks * G, 0.0), sumsq(kChunks * G, 0.0);
  parallel_chunks(N, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double run = 0.0, peak = 0.0;
      std::size_t g = 0;
      for (int t = 1; g < G; ++t) {
        run += ens.at(i, t);
        peak = std::max(peak, std::fabs(run));
        if (t == grid[g]) {
          const double v = std::pow(peak, p);
          sum[c * G + g] += v;
          sumsq[c * G + g] += v * v;
          ++g;
        }
      }
    }
  });
  MaxMomentGrid out;
  out.grid = grid;
  out.value.resize(G);
  out.se.resize(G);
  for (std::size_t g = 0; g < G; ++g) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t c = 0; c < kChunks; ++c) {
      s += sum[c * G + g];
      s2 += sumsq[c * G + g];
    }
    const double mean = s / static_cast<double>(N);
    const double var =
        std::max(0.0, s2 / static_cast<double>(N) - mean * mean);
    out.value[g] = mean;
    out.se[g] = std::sqrt(var / static_cast<double>(N));
  }
  return out;
}

TailGrid max_tail_mc(const PathEnsemble& ens, const std::vector<int>& n_grid,
                     const std::vector<std::vector<double>>& x_grid) {
  if (n_grid.size() != x_grid.size())
    throw DimensionError("max_tail_mc: grid mismatch");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw ArgumentError("max_tail_mc: n grid must increase");
  const std::size_t N = ens.n_paths();
  constexpr std::size_t kChunks = 64;
  std::size_t total_x = 0;
  for (const auto& xs : x_grid) total_x += xs.size();
  std::vector<double> counts(kChunks * total_x, 0.0);
  std::vector<std::size_t> offset(n_grid.size(), 0);
  for (std::size_t g = 1; g < n_grid.size(); ++g)
    offset[g] = offset[g - 1] + x_grid[g - 1].size();

  parallel_chunks(N, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double run = 0.0, peak = 0.0;
      std::size_t g = 0;
      for (int t = 1; g < n_grid.size(); ++t) {
        run += ens.at(i, t);
        peak = std::max(peak, std::fabs(run));
        if (t == n_grid[g]) {
          const auto& xs = x_grid[g];
          for (std::size_t k = 0; k < xs.size(); ++k)
            if (peak >= xs[k]) counts[c * total_x + offset[g] + k] += 1.0;
          ++g;
        }
      }
    }
  });
  TailGrid out;
  out.n_grid = n_grid;
  out.x_grid = x_grid;
  out.prob.resize(n_grid.size());
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    out.prob[g].resize(x_grid[g].size());
    for (std::size_t k = 0; k < x_grid[g].size(); ++k) {
      double s = 0.0;
      for (std::size_t c = 0; c < kChunks; ++c)
        s += counts[c * total_x + offset[g] + k];
      out.prob[g][k] = s / static_cast<double>(N);
    }
  }
  return out;
}

}  // namespace momineq
