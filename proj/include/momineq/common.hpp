#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace momineq {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};
class ArgumentError : public Error {
 public:
  using Error::Error;
};
class SizeError : public Error {
 public:
  using Error::Error;
};
class PreconditionError : public Error {
 public:
  using Error::Error;
};
class MethodError : public Error {
 public:
  using Error::Error;
};
// Model/theorem combination that is documented as unsupported (CLI exit 3).
class UnavailableError : public Error {
 public:
  using Error::Error;
};
class NumericError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Seeding and sampling
//
// Per-path generators are derived from (seed, path_index) so ensembles are
// reproducible bit for bit and can be filled in parallel in any order.
// ---------------------------------------------------------------------------

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path_index) {
  return std::mt19937_64(mix64(seed ^ mix64(path_index)));
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller on explicit 53-bit uniforms. std::normal_distribution is not
// pinned across standard library versions; this one is.
class NormalSampler {
 public:
  explicit NormalSampler(std::mt19937_64 rng) : rng_(rng) {}
  NormalSampler(std::uint64_t seed, std::uint64_t path)
      : rng_(path_rng(seed, path)) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(rng_);
    while (u1 <= 0.0) u1 = uniform01(rng_);
    const double u2 = uniform01(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Parallel loop with a fixed chunk grid. The partition does not depend on the
// thread count, so per-chunk accumulators can be reduced in a fixed order and
// results stay identical on any machine.
// ---------------------------------------------------------------------------

inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

inline void parallel_chunks(std::size_t n,
                            const std::function<void(std::size_t chunk_id,
                                                     std::size_t begin,
                                                     std::size_t end)>& fn,
                            std::size_t n_chunks = 64) {
  if (n == 0) return;
  n_chunks = std::min(n_chunks, n);
  const std::size_t per = (n + n_chunks - 1) / n_chunks;
  unsigned workers = std::min<std::size_t>(worker_count(), n_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      const std::size_t b = c * per;
      if (b >= n) break;
      fn(c, b, std::min(n, b + per));
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        const std::size_t b = c * per;
        if (b >= n) return;
        fn(c, b, std::min(n, b + per));
      }
    });
  }
  for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Small statistics helpers
// ---------------------------------------------------------------------------

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Two-sided 97.5% Student quantile; exact table for small df, asymptotic tail
// correction beyond.
inline double t_quantile_975(int df) {
  static const double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return table[0];
  if (df <= 30) return table[df - 1];
  return 1.96 + 2.5 / static_cast<double>(df);
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t n = 0;
};

// Ordinary least squares of y on x with a 95% CI on the slope.
inline SlopeFit fit_slope(const std::vector<double>& x,
                          const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("fit_slope: size mismatch");
  SlopeFit out;
  out.n = x.size();
  if (out.n < 2) throw ArgumentError("fit_slope: need at least 2 points");
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw ArgumentError("fit_slope: degenerate abscissa");
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  if (out.n > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - out.intercept - out.slope * x[i];
      ssr += r * r;
    }
    const double s2 = ssr / static_cast<double>(out.n - 2);
    out.se = std::sqrt(s2 / sxx);
    const double t = t_quantile_975(static_cast<int>(out.n) - 2);
    out.ci_lo = out.slope - t * out.se;
    out.ci_hi = out.slope + t * out.se;
  } else {
    out.ci_lo = out.ci_hi = out.slope;
  }
  return out;
}

inline SlopeFit fit_loglog_slope(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw DomainError("fit_loglog_slope: nonpositive input");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_slope(lx, ly);
}

// Mann-Kendall trend statistic (normal approximation, no tie correction).
// Returns the z score; z > 1.645 rejects "no positive trend" at 5%.
inline double mann_kendall_z(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n < 3) return 0.0;
  long long s = 0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      s += (v[j] > v[i]) - (v[j] < v[i]);
  const double var =
      static_cast<double>(n) * (n - 1.0) * (2.0 * n + 5.0) / 18.0;
  if (s == 0) return 0.0;
  const double corr = s > 0 ? -1.0 : 1.0;
  return (static_cast<double>(s) + corr) / std::sqrt(var);
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Misc plumbing
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Write-temp-then-rename so report files are never observed half written.
inline void atomic_write_file(const std::filesystem::path& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
  }
  fs::rename(tmp, path);
}

inline bool nearly_equal(double a, double b, double rel_tol,
                         double abs_tol = 0.0) {
  const double diff = std::fabs(a - b);
  return diff <= abs_tol + rel_tol * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace momineq
