#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "momineq/common.hpp"

namespace momineq {

// Exact probability engine on a finite atom space. Everything here is a pure
// function of immutable values; there is no sampling error anywhere.

class FiniteSpace {
 public:
  // Default cap keeps the engine an oracle, not a scalability exercise.
  static constexpr std::size_t kAtomCap = std::size_t{1} << 20;

  explicit FiniteSpace(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// One real value per atom, in the atom order of the space it belongs to.
struct Rv {
  std::vector<double> values;

  Rv() = default;
  explicit Rv(std::vector<double> v) : values(std::move(v)) {}
  Rv(std::size_t n, double fill) : values(n, fill) {}

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

Rv operator+(const Rv& a, const Rv& b);
Rv operator-(const Rv& a, const Rv& b);
Rv operator*(double s, const Rv& a);
Rv hadamard(const Rv& a, const Rv& b);
Rv abs(const Rv& a);

// Sigma-algebra represented as a partition of the atom set.
class PartitionSigma {
 public:
  PartitionSigma(std::size_t n_atoms,
                 std::vector<std::vector<std::uint32_t>> blocks);

  // Convenience: partition induced by equal values of a labelling vector.
  static PartitionSigma from_labels(std::span<const std::uint64_t> labels);

  std::size_t n_atoms() const { return block_of_.size(); }
  std::size_t n_blocks() const { return blocks_.size(); }
  const std::vector<std::vector<std::uint32_t>>& blocks() const {
    return blocks_;
  }
  std::uint32_t block_of(std::size_t atom) const { return block_of_[atom]; }

  // True when every block of `finer` lies inside one block of *this.
  bool refined_by(const PartitionSigma& finer) const;

 private:
  std::vector<std::vector<std::uint32_t>> blocks_;
  std::vector<std::uint32_t> block_of_;
};

enum class FiltrationDirection { nondecreasing, nonincreasing };

struct Filtration {
  std::vector<PartitionSigma> sigmas;
  FiltrationDirection direction = FiltrationDirection::nondecreasing;
};

double expect(const FiniteSpace& space, const Rv& x);

// Block-weighted averaging. Zero-mass blocks get conditional value 0 so no
// NaN can propagate into norms.
Rv cond_expect(const FiniteSpace& space, const Rv& x, const PartitionSigma& g);

double lp_norm(const FiniteSpace& space, const Rv& x, double p);

// S_1..S_n as atomwise prefix sums.
std::vector<Rv> partial_sum_process(std::span<const Rv> xs);

// Exact E(max_{1<=j<=n} |S_j|^p) by atomwise running maximum.
double max_abs_partial_sum_moment(const FiniteSpace& space,
                                  std::span<const Rv> xs, double p);

bool check_filtration(const Filtration& f);

// True when x is constant on every block of g (measurability up to abs_tol).
bool is_measurable(const Rv& x, const PartitionSigma& g,
                   double abs_tol = 1e-10);

// Distribution equality: same weighted law up to value tolerance.
bool same_distribution(const FiniteSpace& space, const Rv& a, const Rv& b,
                       double tol = 1e-10);

}  // namespace momineq
