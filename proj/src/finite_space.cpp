#include "momineq/finite_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace momineq {

FiniteSpace::FiniteSpace(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw ArgumentError("FiniteSpace: no atoms");
  if (weights_.size() > kAtomCap)
    throw SizeError("FiniteSpace: atom count exceeds cap 2^20");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw DomainError("FiniteSpace: negative weight");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw DomainError("FiniteSpace: weights must sum to 1 within 1e-12");
}

static void require_same_size(const Rv& a, const Rv& b) {
  if (a.size() != b.size()) throw DimensionError("Rv size mismatch");
}

Rv operator+(const Rv& a, const Rv& b) {
  require_same_size(a, b);
  Rv out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Rv operator-(const Rv& a, const Rv& b) {
  require_same_size(a, b);
  Rv out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

Rv operator*(double s, const Rv& a) {
  Rv out = a;
  for (double& v : out.values) v *= s;
  return out;
}

Rv hadamard(const Rv& a, const Rv& b) {
  require_same_size(a, b);
  Rv out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out[i] *= b[i];
  return out;
}

Rv abs(const Rv& a) {
  Rv out = a;
  for (double& v : out.values) v = std::fabs(v);
  return out;
}

PartitionSigma::PartitionSigma(std::size_t n_atoms,
                               std::vector<std::vector<std::uint32_t>> blocks)
    : blocks_(std::move(blocks)), block_of_(n_atoms, UINT32_MAX) {
  for (std::uint32_t b = 0; b < blocks_.size(); ++b) {
    for (std::uint32_t atom : blocks_[b]) {
      if (atom >= n_atoms)
        throw ArgumentError("PartitionSigma: atom index out of range");
      if (block_of_[atom] != UINT32_MAX)
        throw ArgumentError("PartitionSigma: blocks overlap");
      block_of_[atom] = b;
    }
  }
  for (std::uint32_t b : block_of_)
    if (b == UINT32_MAX)
      throw ArgumentError("PartitionSigma: blocks do not cover all atoms");
}

PartitionSigma PartitionSigma::from_labels(
    std::span<const std::uint64_t> labels) {
  std::map<std::uint64_t, std::vector<std::uint32_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i)
    groups[labels[i]].push_back(static_cast<std::uint32_t>(i));
  std::vector<std::vector<std::uint32_t>> blocks;
  blocks.reserve(groups.size());
  for (auto& [key, atoms] : groups) blocks.push_back(std::move(atoms));
  return PartitionSigma(labels.size(), std::move(blocks));
}

bool PartitionSigma::refined_by(const PartitionSigma& finer) const {
  if (n_atoms() != finer.n_atoms())
    throw DimensionError("PartitionSigma: atom count mismatch");
  for (const auto& block : finer.blocks()) {
    const std::uint32_t host = block_of_[block.front()];
    for (std::uint32_t atom : block)
      if (block_of_[atom] != host) return false;
  }
  return true;
}

double expect(const FiniteSpace& space, const Rv& x) {
  if (x.size() != space.size()) throw DimensionError("expect: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += space.weight(i) * x[i];
  return s;
}

Rv cond_expect(const FiniteSpace& space, const Rv& x,
               const PartitionSigma& g) {
  if (x.size() != space.size())
    throw DimensionError("cond_expect: rv length differs from atom count");
  if (g.n_atoms() != space.size())
    throw DimensionError("cond_expect: partition is for a different space");
  Rv out(space.size(), 0.0);
  for (const auto& block : g.blocks()) {
    double mass = 0.0, acc = 0.0;
    for (std::uint32_t atom : block) {
      mass += space.weight(atom);
      acc += space.weight(atom) * x[atom];
    }
    const double value = mass > 0.0 ? acc / mass : 0.0;
    for (std::uint32_t atom : block) out[atom] = value;
  }
  return out;
}

double lp_norm(const FiniteSpace& space, const Rv& x, double p) {
  if (p < 1.0) throw DomainError("lp_norm: p must be >= 1");
  if (x.size() != space.size()) throw DimensionError("lp_norm: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += space.weight(i) * std::pow(std::fabs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

std::vector<Rv> partial_sum_process(std::span<const Rv> xs) {
  if (xs.empty()) throw ArgumentError("partial_sum_process: empty input");
  std::vector<Rv> sums;
  sums.reserve(xs.size());
  sums.push_back(xs[0]);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (xs[k].size() != xs[0].size())
      throw DimensionError("partial_sum_process: inconsistent lengths");
    sums.push_back(sums.back() + xs[k]);
  }
  return sums;
}

double max_abs_partial_sum_moment(const FiniteSpace& space,
                                  std::span<const Rv> xs, double p) {
  if (p < 1.0) throw DomainError("max moment: p must be >= 1");
  if (xs.empty()) throw ArgumentError("max moment: empty input");
  std::vector<double> run(space.size(), 0.0), peak(space.size(), 0.0);
  for (const Rv& x : xs) {
    if (x.size() != space.size())
      throw DimensionError("max moment: rv length differs from atom count");
    for (std::size_t i = 0; i < run.size(); ++i) {
      run[i] += x[i];
      peak[i] = std::max(peak[i], std::fabs(run[i]));
    }
  }
  double s = 0.0;
  for (std::size_t i = 0; i < peak.size(); ++i)
    s += space.weight(i) * std::pow(peak[i], p);
  return s;
}

bool check_filtration(const Filtration& f) {
  for (std::size_t i = 0; i + 1 < f.sigmas.size(); ++i) {
    const bool ok =
        f.direction == FiltrationDirection::nondecreasing
            ? f.sigmas[i].refined_by(f.sigmas[i + 1])
            : f.sigmas[i + 1].refined_by(f.sigmas[i]);
    if (!ok) return false;
  }
  return true;
}

bool is_measurable(const Rv& x, const PartitionSigma& g, double abs_tol) {
  if (x.size() != g.n_atoms())
    throw DimensionError("is_measurable: size mismatch");
  for (const auto& block : g.blocks()) {
    const double v = x[block.front()];
    for (std::uint32_t atom : block)
      if (std::fabs(x[atom] - v) > abs_tol) return false;
  }
  return true;
}

bool same_distribution(const FiniteSpace& space, const Rv& a, const Rv& b,
                       double tol) {
  auto law = [&](const Rv& x) {
    std::vector<std::pair<double, double>> vw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      vw[i] = {x[i], space.weight(i)};
    std::sort(vw.begin(), vw.end());
    return vw;
  };
  auto la = law(a), lb = law(b);
  // Compare CDFs at merged breakpoints with a value tolerance.
  double ca = 0.0, cb = 0.0;
  std::size_t i = 0, j = 0;
  while (i < la.size() || j < lb.size()) {
    double t;
    if (j >= lb.size() || (i < la.size() && la[i].first <= lb[j].first))
      t = la[i].first;
    else
      t = lb[j].first;
    while (i < la.size() && la[i].first <= t + tol) ca += la[i++].second;
    while (j < lb.size() && lb[j].first <= t + tol) cb += lb[j++].second;
    if (std::fabs(ca - cb) > tol) return false;
  }
  return true;
}

}  // namespace momineq
