#pragma once

#include <map>
#include <string>
#include <variant>

#include "momineq/arch.hpp"
#include "momineq/chain.hpp"
#include "momineq/delta_nu.hpp"
#include "momineq/linear_process.hpp"

namespace momineq {

// Control model for the density experiment: i.i.d. Uniform[0,1].
struct IidUniform {
  std::string id = "iid_uniform";
};

using StationaryModel = std::variant<FiniteChain, DeltaNuChain, ArchProcess,
                                     LinearFunctionalProcess, IidUniform>;

std::string model_id(const StationaryModel& model);
bool is_finite_chain(const StationaryModel& model);
const FiniteChain& as_chain(const StationaryModel& model);

// Built-in names: coin, eigen, swap, mds_eigen, signmds_eigen,
// cobound_eigen, delta_nu, arch, linear, iid_uniform. Anything else is read
// as a config file path.
StationaryModel make_model(const std::string& name_or_path);

// Line-oriented key=value text with [section] headers; '#' starts a comment.
std::map<std::string, std::string> parse_kv_file(const std::string& path);
StationaryModel model_from_config(
    const std::map<std::string, std::string>& kv);

}  // namespace momineq
