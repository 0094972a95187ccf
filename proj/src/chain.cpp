#include "momineq/chain.hpp"

#include <algorithm>
#include <cmath>

namespace momineq {

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& Q) {
  const Eigen::Index m = Q.rows();
  // Solve pi (Q - I) = 0 with the normalization sum(pi) = 1: replace one
  // equation of the transposed system by the normalization row.
  Eigen::MatrixXd A = Q.transpose() - Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  A.row(0).setOnes();
  b(0) = 1.0;
  Eigen::VectorXd pi = A.fullPivLu().solve(b);
  for (Eigen::Index i = 0; i < m; ++i) pi(i) = std::max(pi(i), 0.0);
  pi /= pi.sum();
  return pi;
}

FiniteChain::FiniteChain(Eigen::MatrixXd Q, Eigen::VectorXd f, std::string id)
    : FiniteChain(std::move(Q), Eigen::VectorXd(), std::move(f),
                  std::move(id)) {}

FiniteChain::FiniteChain(Eigen::MatrixXd Q, Eigen::VectorXd pi,
                         Eigen::VectorXd f, std::string id)
    : Q_(std::move(Q)), pi_(std::move(pi)), f_(std::move(f)),
      id_(std::move(id)) {
  if (pi_.size() == 0) pi_ = stationary_distribution(Q_);
  validate();
  const Eigen::Index m = Q_.rows();
  sampler_rows_.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double cum = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (Q_(i, j) > 0.0) {
        cum += Q_(i, j);
        sampler_rows_[i].push_back({static_cast<int>(j), cum});
      }
    }
    if (!sampler_rows_[i].empty()) sampler_rows_[i].back().second = 1.0;
  }
  pi_cdf_.resize(m);
  double cum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    cum += pi_(i);
    pi_cdf_[i] = cum;
  }
  pi_cdf_.back() = 1.0;
}

void FiniteChain::validate() const {
  const Eigen::Index m = Q_.rows();
  if (m == 0 || Q_.cols() != m)
    throw ArgumentError("FiniteChain: kernel must be square and nonempty");
  if (pi_.size() != m || f_.size() != m)
    throw DimensionError("FiniteChain: pi/f length mismatch");
  for (Eigen::Index i = 0; i < m; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (Q_(i, j) < -1e-15)
        throw DomainError("FiniteChain: negative transition probability");
      row += Q_(i, j);
    }
    if (std::fabs(row - 1.0) > 1e-12)
      throw DomainError("FiniteChain: kernel row does not sum to 1");
  }
  Eigen::VectorXd piQ = Q_.transpose() * pi_;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (pi_(i) < 0.0) throw DomainError("FiniteChain: negative pi entry");
    if (std::fabs(piQ(i) - pi_(i)) > 1e-10)
      throw DomainError("FiniteChain: pi is not stationary for Q");
  }
  if (std::fabs(pi_.sum() - 1.0) > 1e-10)
    throw DomainError("FiniteChain: pi does not sum to 1");
  if (std::fabs(pi_.dot(f_)) > 1e-10)
    throw DomainError("FiniteChain: observable must have pi-mean zero");
}

bool FiniteChain::reversible(double tol) const {
  const Eigen::Index m = Q_.rows();
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (std::fabs(pi_(i) * Q_(i, j) - pi_(j) * Q_(j, i)) > tol) return false;
  return true;
}

bool FiniteChain::irreducible_support(double tol) const {
  return pi_.minCoeff() > tol;
}

FiniteChain FiniteChain::reversed() const {
  if (!irreducible_support())
    throw DomainError("reversed: zero stationary mass state");
  const Eigen::Index m = Q_.rows();
  Eigen::MatrixXd R(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      R(i, j) = pi_(j) * Q_(j, i) / pi_(i);
  // Renormalize rows against rounding.
  for (Eigen::Index i = 0; i < m; ++i) R.row(i) /= R.row(i).sum();
  return FiniteChain(R, pi_, f_, id_ + "*");
}

Eigen::VectorXd FiniteChain::apply_q(const Eigen::VectorXd& g, int k) const {
  if (k < 0) throw ArgumentError("apply_q: negative power");
  if (g.size() != Q_.rows()) throw DimensionError("apply_q: length mismatch");
  Eigen::VectorXd v = g;
  for (int i = 0; i < k; ++i) v = Q_ * v;
  return v;
}

std::vector<Eigen::VectorXd> FiniteChain::cond_sum_all(int n) const {
  if (n < 1) throw ArgumentError("cond_sum: horizon must be >= 1");
  // C_k = Q (f + C_{k-1}).
  std::vector<Eigen::VectorXd> c;
  c.reserve(n);
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(Q_.rows());
  for (int k = 1; k <= n; ++k) {
    prev = Q_ * (f_ + prev);
    c.push_back(prev);
  }
  return c;
}

std::vector<Eigen::VectorXd> FiniteChain::cond_sum_square_all(int n) const {
  if (n < 1) throw ArgumentError("cond_sum_square: horizon must be >= 1");
  // V_k = Q (f^2 + 2 f .* C_{k-1} + V_{k-1}).
  std::vector<Eigen::VectorXd> v;
  v.reserve(n);
  const Eigen::VectorXd f2 = f_.cwiseProduct(f_);
  Eigen::VectorXd prev_c = Eigen::VectorXd::Zero(Q_.rows());
  Eigen::VectorXd prev_v = Eigen::VectorXd::Zero(Q_.rows());
  for (int k = 1; k <= n; ++k) {
    Eigen::VectorXd arg = f2 + 2.0 * f_.cwiseProduct(prev_c) + prev_v;
    prev_v = Q_ * arg;
    v.push_back(prev_v);
    prev_c = Q_ * (f_ + prev_c);
  }
  return v;
}

Eigen::VectorXd FiniteChain::cond_sum(int k) const {
  return cond_sum_all(k).back();
}

Eigen::VectorXd FiniteChain::cond_sum_square(int k) const {
  return cond_sum_square_all(k).back();
}

Eigen::VectorXd FiniteChain::reversed_cond(CondQuantity q, int k) const {
  const FiniteChain rev = reversed();
  return q == CondQuantity::sum ? rev.cond_sum(k) : rev.cond_sum_square(k);
}

double FiniteChain::pi_lp_norm(const Eigen::VectorXd& v, double p) const {
  if (p < 1.0) throw DomainError("pi_lp_norm: p must be >= 1");
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    s += pi_(i) * std::pow(std::fabs(v(i)), p);
  return std::pow(s, 1.0 / p);
}

double FiniteChain::cov0(int j) const {
  if (j < 0) throw ArgumentError("cov0: negative lag");
  Eigen::VectorXd qjf = apply_q(f_, j);
  return pi_.dot(f_.cwiseProduct(qjf));
}

UnrolledChain FiniteChain::unroll(int n) const {
  if (n < 1) throw ArgumentError("unroll: n must be >= 1");
  const std::size_t m = static_cast<std::size_t>(Q_.rows());
  double atoms_d = 1.0;
  for (int t = 0; t <= n; ++t) atoms_d *= static_cast<double>(m);
  if (atoms_d > static_cast<double>(FiniteSpace::kAtomCap))
    throw SizeError("unroll: trajectory count exceeds the atom cap");
  const std::size_t n_atoms = static_cast<std::size_t>(atoms_d);

  // Atom index encodes the trajectory in base m, state at time 0 most
  // significant.
  std::vector<double> weights(n_atoms);
  std::vector<Rv> xs(n, Rv(n_atoms, 0.0));
  std::vector<Rv> states(n + 1, Rv(n_atoms, 0.0));
  std::vector<int> digits(n + 1, 0);
  for (std::size_t a = 0; a < n_atoms; ++a) {
    std::size_t rem = a;
    for (int t = n; t >= 0; --t) {
      digits[t] = static_cast<int>(rem % m);
      rem /= m;
    }
    double w = pi_(digits[0]);
    for (int t = 1; t <= n; ++t) w *= Q_(digits[t - 1], digits[t]);
    weights[a] = w;
    for (int t = 0; t <= n; ++t) states[t][a] = digits[t];
    for (int t = 1; t <= n; ++t) xs[t - 1][a] = f_(digits[t]);
  }
  // Guard against accumulated rounding in the total mass.
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;

  Filtration filt;
  filt.direction = FiltrationDirection::nondecreasing;
  std::size_t prefix_count = m;
  for (int t = 0; t <= n; ++t) {
    std::vector<std::vector<std::uint32_t>> blocks(prefix_count);
    const std::size_t suffix = n_atoms / prefix_count;
    for (std::size_t a = 0; a < n_atoms; ++a)
      blocks[a / suffix].push_back(static_cast<std::uint32_t>(a));
    filt.sigmas.emplace_back(n_atoms, std::move(blocks));
    prefix_count *= m;
  }
  return UnrolledChain{FiniteSpace(std::move(weights)), std::move(filt),
                       std::move(xs), std::move(states)};
}

int FiniteChain::draw_pi_state(std::mt19937_64& rng) const {
  const double u = uniform01(rng);
  return static_cast<int>(
      std::lower_bound(pi_cdf_.begin(), pi_cdf_.end(), u) - pi_cdf_.begin());
}

int FiniteChain::step_state(std::mt19937_64& rng, int s) const {
  const double v = uniform01(rng);
  const auto& row = sampler_rows_[s];
  std::size_t lo = 0;
  while (lo + 1 < row.size() && row[lo].second < v) ++lo;
  return row[lo].first;
}

void FiniteChain::sample_path(std::mt19937_64& rng, int n, double* out,
                              int* init_state) const {
  int s = draw_pi_state(rng);
  if (init_state) *init_state = s;
  for (int t = 0; t < n; ++t) {
    s = step_state(rng, s);
    out[t] = f_(s);
  }
}

double FiniteChain::slem() const {
  Eigen::EigenSolver<Eigen::MatrixXd> es(Q_, false);
  double best = 0.0;
  for (Eigen::Index i = 0; i < Q_.rows(); ++i) {
    const double mod = std::abs(es.eigenvalues()(i));
    if (mod < 1.0 - 1e-9) best = std::max(best, mod);
  }
  return best;
}

FiniteChain coin_chain() {
  Eigen::MatrixXd Q(2, 2);
  Q << 0.5, 0.5, 0.5, 0.5;
  Eigen::VectorXd f(2);
  f << 1.0, -1.0;
  return FiniteChain(Q, f, "coin");
}

FiniteChain eigen_chain() {
  Eigen::MatrixXd Q(2, 2);
  Q << 0.9, 0.1, 0.2, 0.8;
  Eigen::VectorXd f(2);
  f << 1.0, -2.0;
  return FiniteChain(Q, f, "eigen");
}

FiniteChain swap_chain() {
  Eigen::MatrixXd Q(2, 2);
  Q << 0.0, 1.0, 1.0, 0.0;
  Eigen::VectorXd f(2);
  f << 1.0, -1.0;
  return FiniteChain(Q, f, "swap");
}

FiniteChain iid_chain(Eigen::VectorXd pi, Eigen::VectorXd values,
                      std::string id) {
  const Eigen::Index m = pi.size();
  Eigen::MatrixXd Q(m, m);
  for (Eigen::Index i = 0; i < m; ++i) Q.row(i) = pi.transpose();
  const double mean = pi.dot(values);
  Eigen::VectorXd f = values.array() - mean;
  return FiniteChain(Q, pi, f, std::move(id));
}

FiniteChain mds_pair_chain(const FiniteChain& base) {
  const Eigen::Index m = base.n_states();
  const Eigen::Index mm = m * m;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(mm, mm);
  Eigen::VectorXd pi(mm), f(mm);
  const Eigen::VectorXd qf = base.apply_q(base.f(), 1);
  for (Eigen::Index x = 0; x < m; ++x) {
    for (Eigen::Index y = 0; y < m; ++y) {
      const Eigen::Index s = x * m + y;
      pi(s) = base.pi()(x) * base.Q()(x, y);
      f(s) = base.f()(y) - qf(x);
      for (Eigen::Index z = 0; z < m; ++z) Q(s, y * m + z) = base.Q()(y, z);
    }
  }
  return FiniteChain(Q, pi, f, base.id() + "_mds");
}

FiniteChain sign_randomized_mds_chain(const FiniteChain& base) {
  const Eigen::Index m = base.n_states();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  Eigen::VectorXd pi(2 * m), f(2 * m);
  for (Eigen::Index x = 0; x < m; ++x) {
    for (int e = 0; e < 2; ++e) {
      const Eigen::Index s = 2 * x + e;
      pi(s) = 0.5 * base.pi()(x);
      f(s) = (e == 0 ? 1.0 : -1.0) * std::fabs(base.f()(x));
      for (Eigen::Index y = 0; y < m; ++y) {
        Q(s, 2 * y) = 0.5 * base.Q()(x, y);
        Q(s, 2 * y + 1) = 0.5 * base.Q()(x, y);
      }
    }
  }
  return FiniteChain(Q, pi, f, base.id() + "_signmds");
}

FiniteChain coboundary_chain(const FiniteChain& base,
                             const Eigen::VectorXd& g) {
  if (g.size() != base.n_states())
    throw DimensionError("coboundary_chain: g length mismatch");
  const Eigen::Index m = base.n_states();
  const Eigen::Index mm = m * m;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(mm, mm);
  Eigen::VectorXd pi(mm), f(mm);
  for (Eigen::Index x = 0; x < m; ++x) {
    for (Eigen::Index y = 0; y < m; ++y) {
      const Eigen::Index s = x * m + y;
      pi(s) = base.pi()(x) * base.Q()(x, y);
      f(s) = g(y) - g(x);
      for (Eigen::Index z = 0; z < m; ++z) Q(s, y * m + z) = base.Q()(y, z);
    }
  }
  return FiniteChain(Q, pi, f, base.id() + "_cobound");
}

FiniteChain random_chain(std::mt19937_64& rng, int n_states) {
  if (n_states < 2) throw ArgumentError("random_chain: need >= 2 states");
  const int m = n_states;
  Eigen::MatrixXd Q(m, m);
  for (int i = 0; i < m; ++i) {
    double row = 0.0;
    for (int j = 0; j < m; ++j) {
      // Strictly positive entries keep the chain irreducible and aperiodic.
      Q(i, j) = 0.05 + uniform01(rng);
      row += Q(i, j);
    }
    Q.row(i) /= row;
  }
  Eigen::VectorXd pi = stationary_distribution(Q);
  Eigen::VectorXd values(m);
  for (int i = 0; i < m; ++i) values(i) = -1.0 + 2.0 * uniform01(rng);
  Eigen::VectorXd f = values.array() - pi.dot(values);
  return FiniteChain(Q, pi, f, "random");
}

FiniteChain random_lattice_chain(std::mt19937_64& rng, int n_states,
                                 double resolution) {
  const int m = n_states;
  // Convex combination of random permutation matrices is doubly stochastic,
  // so pi is exactly uniform and integer observables stay centered on the
  // lattice after subtracting the mean.
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(m, m);
  std::vector<int> perm(m);
  const int n_perms = 3 + static_cast<int>(rng() % 3);
  double total = 0.0;
  std::vector<double> coef(n_perms);
  for (int p = 0; p < n_perms; ++p) {
    coef[p] = 0.1 + uniform01(rng);
    total += coef[p];
  }
  for (int p = 0; p < n_perms; ++p) {
    for (int i = 0; i < m; ++i) perm[i] = i;
    for (int i = m - 1; i > 0; --i)
      std::swap(perm[i], perm[rng() % static_cast<std::uint64_t>(i + 1)]);
    for (int i = 0; i < m; ++i) Q(i, perm[i]) += coef[p] / total;
  }
  // Blend with uniform mass for irreducibility.
  Q = 0.8 * Q + (0.2 / m) * Eigen::MatrixXd::Ones(m, m);

  Eigen::VectorXd ivals(m);
  long long sum = 0;
  for (int i = 0; i < m; ++i) {
    const long long v = static_cast<long long>(rng() % 9) - 4;
    ivals(i) = static_cast<double>(v);
    sum += v;
  }
  // Force an integer total divisible by m so the centered values remain
  // integers on the lattice.
  ivals(0) -= static_cast<double>(sum % m);
  const double mean = ivals.sum() / m;
  Eigen::VectorXd f = (ivals.array() - mean) * resolution;
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(m, 1.0 / m);
  return FiniteChain(Q, pi, f, "lattice");
}

std::optional<double> detect_lattice(const Eigen::VectorXd& f, double tol) {
  // Floating gcd over the nonzero magnitudes.
  auto fgcd = [tol](double a, double b) {
    if (a < b) std::swap(a, b);
    while (b > tol) {
      double r = std::fmod(a, b);
      if (r > b / 2) r = b - r;  // absorb rounding on near-exact divisions
      a = b;
      b = r;
    }
    return a;
  };
  double g = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double v = std::fabs(f(i));
    if (v < tol) continue;
    g = g == 0.0 ? v : fgcd(g, v);
  }
  if (g < 1e-6) return std::nullopt;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double q = f(i) / g;
    if (std::fabs(q - std::round(q)) > 1e-6) return std::nullopt;
  }
  return g;
}

}  // namespace momineq
