#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "momineq/finite_space.hpp"

namespace momineq {

struct UnrolledChain {
  FiniteSpace space;
  Filtration filtration;      // sigma at times 0..n, nondecreasing
  std::vector<Rv> xs;         // X_1..X_n with X_k = f(state at time k)
  std::vector<Rv> states;     // state index at times 0..n, as doubles
};

// Finite-state stationary Markov chain with a centered observable. All
// projective quantities are computed exactly through kernel powers.
class FiniteChain {
 public:
  FiniteChain(Eigen::MatrixXd Q, Eigen::VectorXd f,
              std::string id = "chain");
  FiniteChain(Eigen::MatrixXd Q, Eigen::VectorXd pi, Eigen::VectorXd f,
              std::string id);

  Eigen::Index n_states() const { return Q_.rows(); }
  const Eigen::MatrixXd& Q() const { return Q_; }
  const Eigen::VectorXd& pi() const { return pi_; }
  const Eigen::VectorXd& f() const { return f_; }
  const std::string& id() const { return id_; }

  bool reversible(double tol = 1e-10) const;
  bool irreducible_support(double tol = 1e-12) const;  // all pi > tol

  // Time reversal Q*(x,y) = pi(y) Q(y,x) / pi(x).
  FiniteChain reversed() const;

  // (Q^k g)(x) = E(g(state_k) | state_0 = x).
  Eigen::VectorXd apply_q(const Eigen::VectorXd& g, int k) const;

  // C_k(x) = E(S_k | state_0 = x).
  Eigen::VectorXd cond_sum(int k) const;
  // V_k(x) = E(S_k^2 | state_0 = x).
  Eigen::VectorXd cond_sum_square(int k) const;

  // All horizons 1..n at once (each O(n m^2) total).
  std::vector<Eigen::VectorXd> cond_sum_all(int n) const;
  std::vector<Eigen::VectorXd> cond_sum_square_all(int n) const;

  enum class CondQuantity { sum, sum_square };
  // E(S_k | state_{k+1} = x) or E(S_k^2 | state_{k+1} = x) through the
  // reversed kernel.
  Eigen::VectorXd reversed_cond(CondQuantity q, int k) const;

  double pi_expect(const Eigen::VectorXd& v) const { return pi_.dot(v); }
  double pi_lp_norm(const Eigen::VectorXd& v, double p) const;

  // E(X_0 X_j) = pi . (f .* Q^j f).
  double cov0(int j) const;

  // Exact oracle bridge: one atom per trajectory (state_0..state_n).
  UnrolledChain unroll(int n) const;

  // One stationary path of X_1..X_n; start drawn from pi.
  void sample_path(std::mt19937_64& rng, int n, double* out,
                   int* init_state = nullptr) const;
  int draw_pi_state(std::mt19937_64& rng) const;
  int step_state(std::mt19937_64& rng, int s) const;

  // Second-largest eigenvalue modulus, for spectral tail certificates.
  double slem() const;

 private:
  void validate() const;

  Eigen::MatrixXd Q_;
  Eigen::VectorXd pi_;
  Eigen::VectorXd f_;
  std::vector<std::vector<std::pair<int, double>>> sampler_rows_;
  std::vector<double> pi_cdf_;
  std::string id_;
};

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& Q);

// Named model zoo.
FiniteChain coin_chain();                       // iid fair +-1
FiniteChain eigen_chain();                      // Q=[[.9,.1],[.2,.8]], f=(1,-2)
FiniteChain swap_chain();                       // deterministic 2-cycle
FiniteChain iid_chain(Eigen::VectorXd pi, Eigen::VectorXd values,
                      std::string id = "iid");

// Martingale-difference builders. Both stay inside the FiniteChain type by
// moving to an enlarged state space.
//
// Pair construction: state (x,y), observable f(y) - (Qf)(x); exact MDS.
FiniteChain mds_pair_chain(const FiniteChain& base);
// Sign randomization: state (x, e) with an independent fair sign e,
// observable e*|f(x)|; conditionally symmetric MDS.
FiniteChain sign_randomized_mds_chain(const FiniteChain& base);
// Coboundary: state (x,y), observable g(y)-g(x); partial sums stay bounded.
FiniteChain coboundary_chain(const FiniteChain& base,
                             const Eigen::VectorXd& g);

// Random chains for property suites.
FiniteChain random_chain(std::mt19937_64& rng, int n_states);
// Doubly stochastic kernel and integer observable on a lattice, so the
// centered observable stays exactly on the lattice (uniform pi).
FiniteChain random_lattice_chain(std::mt19937_64& rng, int n_states,
                                 double resolution = 1.0 / 64.0);

// Greatest common lattice step of the observable, or nullopt if the values
// do not sit on a reasonable rational lattice.
std::optional<double> detect_lattice(const Eigen::VectorXd& f,
                                     double tol = 1e-9);

}  // namespace momineq
