// Batch experiment runner: loads model/experiment configs, dispatches to the
// verification modules, writes reports, returns a pass/fail exit status.
//
// Exit codes: 0 pass, 1 inequality violation, 2 usage error,
//             3 model/theorem incompatibility, 4 numeric failure.

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "momineq/bernstein.hpp"
#include "momineq/density.hpp"
#include "momineq/fuzz.hpp"
#include "momineq/ratio.hpp"

namespace mq = momineq;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIncompatible = 3;
constexpr int kExitNumeric = 4;

// "a..b" expands to the powers of two in [a, b]; otherwise a comma list.
std::vector<int> parse_n_grid(const std::string& spec) {
  std::vector<int> grid;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const int a = std::stoi(spec.substr(0, dots));
    const int b = std::stoi(spec.substr(dots + 2));
    if (a < 1 || b < a) throw mq::ArgumentError("bad n grid: " + spec);
    int v = 1;
    while (v < a) v *= 2;
    for (; v <= b; v *= 2) grid.push_back(v);
  } else {
    std::string cleaned = spec;
    for (char& c : cleaned)
      if (c == ',') c = ' ';
    std::istringstream in(cleaned);
    int v;
    while (in >> v) grid.push_back(v);
  }
  if (grid.empty()) throw mq::ArgumentError("empty n grid: " + spec);
  return grid;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string canonical_config(const std::vector<std::string>& parts) {
  std::string all;
  for (const auto& p : parts) all += p + "\n";
  return all;
}

void write_outputs(const std::string& out_dir, const std::string& stem,
                   const std::string& json, const std::string& text) {
  if (out_dir.empty()) return;
  namespace fs = std::filesystem;
  mq::atomic_write_file(fs::path(out_dir) / (stem + ".json"), json);
  mq::atomic_write_file(fs::path(out_dir) / (stem + ".txt"), text);
}

struct CommonArgs {
  std::string model = "coin";
  double p = 4.0;
  std::string n_spec = "4..256";
  int paths = 100000;
  std::uint64_t seed = 20240901;
  std::string out_dir;
  double tol = 0.0;  // reserved override, recorded into reports
  std::string mode = "auto";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--model", args.model, "built-in model name or config file");
  cmd->add_option("--p", args.p, "moment order");
  cmd->add_option("--n", args.n_spec, "n grid: 'a..b' dyadic or comma list");
  cmd->add_option("--paths", args.paths, "Monte Carlo path budget");
  cmd->add_option("--seed", args.seed, "base seed");
  cmd->add_option("--out", args.out_dir, "report output directory");
  cmd->add_option("--tol", args.tol, "tolerance override note");
  cmd->add_option("--mode", args.mode, "exact|mc|auto")
      ->check(CLI::IsMember({"exact", "mc", "auto", "dual"}));
}

int run_verify(const CommonArgs& args, const std::string& theorems_spec) {
  const std::vector<std::string> theorems = split_list(theorems_spec);
  if (theorems.empty()) {
    std::cerr << "verify: no theorem requested\n";
    return kExitUsage;
  }
  for (const auto& t : theorems) {
    if (!mq::rhs_theorem_known(t)) {
      std::cerr << "verify: unknown theorem id '" << t << "'\n";
      return kExitUsage;
    }
  }
  const mq::StationaryModel model = mq::make_model(args.model);
  const std::vector<int> grid = parse_n_grid(args.n_spec);
  mq::RatioOptions opts;
  opts.mc_paths = args.paths;
  opts.seed = args.seed;
  opts.mode = args.mode == "exact"
                  ? mq::RatioMode::exact
                  : args.mode == "mc" ? mq::RatioMode::mc
                                      : mq::RatioMode::auto_select;
  const std::string config_hash = std::to_string(mq::fnv1a64(
      canonical_config({args.model, std::to_string(args.p), args.n_spec,
                        theorems_spec, std::to_string(args.seed)})));

  std::vector<mq::InequalityReport> reports;
  bool all_pass = true;
  for (const auto& t : theorems) {
    mq::InequalityReport rep = mq::check_ratio(t, model, args.p, grid, opts);
    rep.config_hash = config_hash;
    std::cout << rep.to_text() << '\n';
    all_pass = all_pass && rep.pass;
    reports.push_back(std::move(rep));
  }
  write_outputs(args.out_dir, "verify",
                mq::reports_to_json(reports, config_hash, args.seed), [&] {
                  std::string s;
                  for (const auto& r : reports) s += r.to_text() + "\n";
                  return s;
                }());
  return all_pass ? kExitPass : kExitViolation;
}

int run_lemmas(std::uint64_t seed, long long budget, bool inject_failure,
               const std::string& out_dir) {
  std::vector<mq::FuzzReport> reps;
  reps.push_back(mq::fuzz_cross(budget, seed, inject_failure));
  reps.push_back(mq::fuzz_basic(budget > 0 ? std::max<long long>(budget / 200, 1)
                                           : 0,
                                seed));
  reps.push_back(
      mq::fuzz_covbeta(budget > 0 ? std::max<long long>(budget / 200, 1) : 0,
                       seed));
  reps.push_back(
      mq::fuzz_subadd(budget > 0 ? std::max<long long>(budget / 100, 1) : 0,
                      seed));
  bool pass = true, vacuous = true;
  std::string text;
  for (const auto& r : reps) {
    std::ostringstream os;
    os << r.suite << ": " << r.draws << " checks, " << r.violations
       << " violations";
    if (r.vacuous) os << " (vacuous: zero budget)";
    if (!r.first_witness.empty()) os << "; witness: " << r.first_witness;
    os << '\n';
    std::cout << os.str();
    text += os.str();
    pass = pass && r.pass();
    vacuous = vacuous && r.vacuous;
  }
  if (vacuous)
    std::cout << "warning: zero budget, suites vacuously pass\n";
  if (!out_dir.empty())
    mq::atomic_write_file(std::filesystem::path(out_dir) / "lemmas.txt",
                          text);
  return pass ? kExitPass : kExitViolation;
}

int run_profile(const CommonArgs& args) {
  const mq::StationaryModel model = mq::make_model(args.model);
  const std::vector<int> grid = parse_n_grid(args.n_spec);
  const int n_max = grid.back();
  std::string csv;
  if (mq::is_finite_chain(model) && args.mode != "mc") {
    const mq::ProjectiveProfile exact =
        mq::profile_exact(mq::as_chain(model), args.p, n_max);
    csv = exact.to_csv();
    if (args.mode == "dual") {
      const mq::PathEnsemble ens =
          mq::sample_paths(model, n_max, args.paths, args.seed);
      mq::ProfileMcOptions mopts;
      mopts.horizons = grid;
      const mq::ProjectiveProfile mc = mq::profile_mc(ens, args.p, mopts);
      std::ostringstream os;
      os << csv << "\n# mc vs exact (k, mc_A, exact_A, agree_3se)\n";
      for (std::size_t g = 0; g < mc.horizons.size(); ++g) {
        const double ex = exact.A[static_cast<std::size_t>(mc.horizons[g]) - 1];
        const bool agree =
            std::fabs(mc.A[g] - ex) <= 3.0 * std::max(mc.se_A[g], 1e-12);
        os << mc.horizons[g] << ',' << mc.A[g] << ',' << ex << ','
           << (agree ? 1 : 0) << '\n';
      }
      csv = os.str();
    }
  } else {
    const int pre = std::holds_alternative<mq::FiniteChain>(model) ? 0 : 32;
    const mq::PathEnsemble ens =
        mq::sample_paths(model, n_max, args.paths, args.seed, pre);
    mq::ProfileMcOptions mopts;
    mopts.horizons = grid;
    csv = mq::profile_mc(ens, args.p, mopts).to_csv();
  }
  std::cout << csv;
  if (!args.out_dir.empty())
    mq::atomic_write_file(
        std::filesystem::path(args.out_dir) / "profile.csv", csv);
  return kExitPass;
}

int run_density(const CommonArgs& args, const std::string& kernel_name,
                int order_s, int replications) {
  const mq::StationaryModel model = mq::make_model(args.model);
  const mq::KernelSpec kernel = mq::make_kernel(kernel_name, args.p);
  const std::vector<int> grid = parse_n_grid(args.n_spec);
  mq::DensityOptions dopts;
  dopts.replications = replications;
  dopts.seed = args.seed;
  std::vector<mq::DensityRiskResult> results;
  std::ostringstream csv;
  csv.precision(12);
  csv << "n,h,risk,se,bias,rhs_total\n";
  const mq::DensityConstants cal;
  for (int n : grid) {
    const double h = std::pow(n, -1.0 / (2.0 * order_s + 1.0));
    mq::DensityRiskResult r =
        mq::estimate_risk(model, kernel, n, h, args.p, dopts);
    const double rhs =
        cal.safety * (cal.C1 * r.rhs_variance_term + cal.C2 * r.rhs_linear_term);
    csv << n << ',' << h << ',' << r.risk << ',' << r.se << ',' << r.bias
        << ',' << rhs << '\n';
    results.push_back(std::move(r));
  }
  std::cout << csv.str();
  std::string rate_note;
  if (results.size() >= 4) {
    const mq::SlopeFit fit = mq::rate_fit(results);
    const double target =
        -static_cast<double>(order_s) * args.p / (2.0 * order_s + 1.0);
    std::ostringstream os;
    os << "rate: slope " << fit.slope << " [" << fit.ci_lo << ", "
       << fit.ci_hi << "], target " << target << '\n';
    rate_note = os.str();
  } else {
    rate_note = "rate: skipped (need at least 4 n values)\n";
  }
  std::cout << rate_note;
  if (!args.out_dir.empty()) {
    namespace fs = std::filesystem;
    mq::atomic_write_file(fs::path(args.out_dir) / "density.csv", csv.str());
    mq::atomic_write_file(fs::path(args.out_dir) / "density.gp",
                          mq::density_plot_script("density.csv"));
    mq::atomic_write_file(fs::path(args.out_dir) / "density_rate.txt",
                          rate_note);
  }
  return kExitPass;
}

int run_bernstein(const CommonArgs& args) {
  const mq::StationaryModel model = mq::make_model(args.model);
  const mq::FiniteChain& chain = mq::as_chain(model);
  mq::BernsteinOptions bopts;
  bopts.mc_paths = args.paths;
  bopts.seed = args.seed;
  const mq::BernsteinTailCheck res =
      mq::bernstein_tail_check(chain, parse_n_grid(args.n_spec), bopts);
  std::ostringstream os;
  os.precision(6);
  os << "alpha rate c = " << res.alpha_rate << ", v2 = " << res.v2
     << ", M = " << res.M << '\n';
  os << "n,x,empirical,se,bound,checked,pass\n";
  for (const auto& row : res.rows)
    os << row.n << ',' << row.x << ',' << row.empirical << ',' << row.se
       << ',' << row.bound << ',' << row.checked << ',' << row.pass << '\n';
  os << "pass: " << (res.pass ? "yes" : "no") << '\n';
  std::cout << os.str();
  if (!args.out_dir.empty())
    mq::atomic_write_file(
        std::filesystem::path(args.out_dir) / "bernstein.csv", os.str());
  return res.pass ? kExitPass : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moment-inequality verification lab"};
  app.require_subcommand(1);

  CommonArgs verify_args, profile_args, density_args, bernstein_args;
  std::string theorems;
  auto* verify = app.add_subcommand(
      "verify", "ratio-check inequalities on a model over an n grid");
  add_common(verify, verify_args);
  verify->add_option("--theorem", theorems,
                     "comma list of theorem ids (see --list)");
  bool list_theorems = false;
  verify->add_flag("--list", list_theorems, "list theorem ids and exit");

  std::uint64_t lemma_seed = 7;
  long long budget = 100000;
  bool inject = false;
  std::string lemma_out;
  auto* lemmas = app.add_subcommand(
      "lemmas", "randomized suites for the pointwise/covariance lemmas");
  lemmas->add_option("--budget", budget, "draw budget (0 = vacuous pass)");
  lemmas->add_option("--seed", lemma_seed, "seed");
  lemmas->add_option("--out", lemma_out, "output directory");
  lemmas->add_flag("--inject-failure", inject,
                   "flip one verdict to self-test the harness");

  auto* profile = app.add_subcommand(
      "profile", "emit projective profile tables (exact, mc, or dual)");
  add_common(profile, profile_args);

  std::string kernel_name = "triangular";
  int order_s = 1;
  int replications = 200;
  auto* density = app.add_subcommand(
      "density", "kernel density risk experiment with rate fit");
  add_common(density, density_args);
  density->add_option("--kernel", kernel_name,
                      "rectangular|triangular|quartic");
  density->add_option("--order", order_s, "kernel order s (bandwidth rule)");
  density->add_option("--replications", replications, "MC replications");

  auto* bernstein = app.add_subcommand(
      "bernstein", "maximal tail bound check for a bounded mixing chain");
  add_common(bernstein, bernstein_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) {
      if (list_theorems) {
        for (const auto& t : mq::rhs_theorem_list()) std::cout << t << '\n';
        return kExitPass;
      }
      return run_verify(verify_args, theorems);
    }
    if (lemmas->parsed())
      return run_lemmas(lemma_seed, budget, inject, lemma_out);
    if (profile->parsed()) return run_profile(profile_args);
    if (density->parsed())
      return run_density(density_args, kernel_name, order_s, replications);
    if (bernstein->parsed()) return run_bernstein(bernstein_args);
  } catch (const mq::UnavailableError& e) {
    std::cerr << "incompatible: " << e.what() << '\n';
    return kExitIncompatible;
  } catch (const mq::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const mq::ArgumentError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mq::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
