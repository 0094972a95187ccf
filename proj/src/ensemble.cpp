#include "momineq/ensemble.hpp"

#include <sstream>

namespace momineq {

PathEnsemble::PathEnsemble(std::size_t n_paths, std::size_t n_steps,
                           std::size_t pre_cols, std::uint64_t seed,
                           std::string model_id)
    : n_paths_(n_paths), n_steps_(n_steps), pre_cols_(pre_cols),
      row_len_(pre_cols + n_steps), seed_(seed),
      model_id_(std::move(model_id)), data_(n_paths * (pre_cols + n_steps)) {}

std::string PathEnsemble::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "path_id,t,x\n";
  for (std::size_t i = 0; i < n_paths_; ++i) {
    for (long t = 1 - static_cast<long>(pre_cols_);
         t <= static_cast<long>(n_steps_); ++t) {
      out << i << ',' << t << ',' << at(i, t) << '\n';
    }
  }
  return out.str();
}

PathEnsemble sample_paths(const StationaryModel& model, int n, int N,
                          std::uint64_t seed, int pre_cols) {
  if (n < 1 || N < 1)
    throw ArgumentError("sample_paths: n and N must be >= 1");
  if (pre_cols < 0) throw ArgumentError("sample_paths: negative pre window");
  PathEnsemble ens(static_cast<std::size_t>(N), static_cast<std::size_t>(n),
                   static_cast<std::size_t>(pre_cols), seed, model_id(model));
  ens.init_value.assign(static_cast<std::size_t>(N), 0.0);
  const int total = pre_cols + n;

  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        parallel_chunks(static_cast<std::size_t>(N), [&](std::size_t,
                                                         std::size_t b,
                                                         std::size_t e) {
          for (std::size_t i = b; i < e; ++i) {
            auto rng = path_rng(seed, i);
            double* out = ens.row(i);
            if constexpr (std::is_same_v<T, FiniteChain>) {
              int s = m.draw_pi_state(rng);
              for (int t = 0; t < pre_cols; ++t) {
                s = m.step_state(rng, s);
                out[t] = m.f()(s);
              }
              // init_value is the state at time 0, the conditioning point
              // for the sample window X_1..X_n.
              ens.init_value[i] = static_cast<double>(s);
              for (int t = 0; t < n; ++t) {
                s = m.step_state(rng, s);
                out[pre_cols + t] = m.f()(s);
              }
            } else if constexpr (std::is_same_v<T, DeltaNuChain>) {
              double x = m.draw_stationary(rng);
              for (int t = 0; t < pre_cols; ++t) {
                x = m.step(rng, x);
                out[t] = DeltaNuChain::observable(x);
              }
              ens.init_value[i] = x;
              for (int t = 0; t < n; ++t) {
                x = m.step(rng, x);
                out[pre_cols + t] = DeltaNuChain::observable(x);
              }
            } else if constexpr (std::is_same_v<T, ArchProcess>) {
              m.sample_path(rng, n, out, pre_cols);
              ens.init_value[i] = out[pre_cols > 0 ? pre_cols - 1 : 0];
            } else if constexpr (std::is_same_v<T, LinearFunctionalProcess>) {
              m.sample_path(rng, n, out, pre_cols);
              ens.init_value[i] = out[pre_cols > 0 ? pre_cols - 1 : 0];
            } else {
              for (int t = 0; t < total; ++t) out[t] = uniform01(rng);
              ens.init_value[i] = out[0];
            }
          }
        });
      },
      model);

  if (std::holds_alternative<ArchProcess>(model) ||
      std::holds_alternative<LinearFunctionalProcess>(model)) {
    ens.meta["stationarity"] = "up to truncation bias";
  } else {
    ens.meta["stationarity"] = "exact";
  }
  return ens;
}

}  // namespace momineq
