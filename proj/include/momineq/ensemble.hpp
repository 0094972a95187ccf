#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "momineq/model.hpp"

namespace momineq {

// N seeded sample paths of length n, with optional pre-sample history for
// finite-memory conditioning. Same (model, seed, n, N) reproduces the matrix
// bit for bit; see path_rng.
class PathEnsemble {
 public:
  PathEnsemble(std::size_t n_paths, std::size_t n_steps, std::size_t pre_cols,
               std::uint64_t seed, std::string model_id);

  std::size_t n_paths() const { return n_paths_; }
  std::size_t n_steps() const { return n_steps_; }
  std::size_t pre_cols() const { return pre_cols_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& model_id() const { return model_id_; }

  // X_t on path i; t in [1-pre_cols, n_steps], t >= 1 is the sample window.
  double at(std::size_t path, long t) const {
    return data_[path * row_len_ + (t - 1 + static_cast<long>(pre_cols_))];
  }
  double* row(std::size_t path) { return data_.data() + path * row_len_; }
  const double* row(std::size_t path) const {
    return data_.data() + path * row_len_;
  }
  const std::vector<double>& data() const { return data_; }

  // Initial state (finite chain: state index; delta/nu chain: state value).
  std::vector<double> init_value;
  std::map<std::string, std::string> meta;

  std::string to_csv() const;  // header: path_id,t,x

 private:
  std::size_t n_paths_, n_steps_, pre_cols_, row_len_;
  std::uint64_t seed_;
  std::string model_id_;
  std::vector<double> data_;
};

PathEnsemble sample_paths(const StationaryModel& model, int n, int N,
                          std::uint64_t seed, int pre_cols = 0);

}  // namespace momineq
