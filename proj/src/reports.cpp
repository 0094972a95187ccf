#include "momineq/reports.hpp"

#include <chrono>
#include <sstream>

#include "json.hpp"

namespace momineq {

namespace {
nlohmann::json report_json(const InequalityReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["p"] = r.p;
  j["grid"] = r.grid;
  j["lhs"] = r.lhs;
  if (!r.lhs_se.empty()) j["lhs_se"] = r.lhs_se;
  nlohmann::json terms;
  for (std::size_t t = 0; t < r.rhs_terms.names.size(); ++t)
    terms[r.rhs_terms.names[t]] = r.rhs_terms.values[t];
  j["rhs_terms"] = terms;
  j["rhs_total"] = r.rhs_total;
  j["ratio"] = r.ratio;
  if (r.explicit_constant)
    j["explicit_constant"] = *r.explicit_constant;
  else
    j["explicit_constant"] = nullptr;
  j["implied_constant_estimate"] = r.implied_constant_estimate;
  j["pass"] = r.pass;
  j["scale"] = r.moment_scale ? "moment" : "norm";
  j["ratio_slope"] = {{"slope", r.ratio_slope.slope},
                      {"se", r.ratio_slope.se},
                      {"ci_lo", r.ratio_slope.ci_lo},
                      {"ci_hi", r.ratio_slope.ci_hi}};
  j["mode"] = r.mode;
  j["notes"] = r.notes;
  j["seed"] = r.seed;
  j["config_hash"] = r.config_hash;
  return j;
}
}  // namespace

std::string InequalityReport::to_json() const {
  return report_json(*this).dump(2);
}

std::string InequalityReport::to_text() const {
  std::ostringstream out;
  out.precision(6);
  out << name << " (p=" << p << ", scale="
      << (moment_scale ? "moment" : "norm") << ", mode=" << mode << ")\n";
  out << "  n";
  for (int n : grid) out << '\t' << n;
  out << "\n  lhs";
  for (double v : lhs) out << '\t' << v;
  out << "\n  rhs";
  for (double v : rhs_total) out << '\t' << v;
  out << "\n  ratio";
  for (double v : ratio) out << '\t' << v;
  out << "\n  implied constant estimate: " << implied_constant_estimate
      << "\n  ratio log-log slope: " << ratio_slope.slope << " ["
      << ratio_slope.ci_lo << ", " << ratio_slope.ci_hi << "]"
      << "\n  pass: " << (pass ? "yes" : "no") << '\n';
  for (const auto& n : notes) out << "  note: " << n << '\n';
  return out.str();
}

std::string reports_to_json(const std::vector<InequalityReport>& reports,
                            const std::string& config_hash,
                            std::uint64_t seed) {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  j["reports"] = arr;
  // Timestamps live in a separate block so the payload above is
  // byte-identical across reruns of the same config and seed.
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  j["meta"] = {{"timestamp_unix_ms",
                std::chrono::duration_cast<std::chrono::milliseconds>(now)
                    .count()}};
  return j.dump(2);
}

}  // namespace momineq
