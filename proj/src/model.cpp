#include "momineq/model.hpp"

#include <fstream>
#include <sstream>

namespace momineq {

std::string model_id(const StationaryModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FiniteChain>) return m.id();
        else if constexpr (std::is_same_v<T, DeltaNuChain>) return "delta_nu";
        else if constexpr (std::is_same_v<T, ArchProcess>) return "arch";
        else if constexpr (std::is_same_v<T, LinearFunctionalProcess>)
          return "linear";
        else return m.id;
      },
      model);
}

bool is_finite_chain(const StationaryModel& model) {
  return std::holds_alternative<FiniteChain>(model);
}

const FiniteChain& as_chain(const StationaryModel& model) {
  if (!is_finite_chain(model))
    throw UnavailableError("operation requires a finite chain model");
  return std::get<FiniteChain>(model);
}

static ArchProcess default_arch() {
  ArchProcess::Params p;
  p.c = 1.0;
  p.coeffs.resize(16);
  for (std::size_t j = 0; j < p.coeffs.size(); ++j)
    p.coeffs[j] = 0.3 * std::pow(2.0, -static_cast<double>(j + 1));
  return ArchProcess(p);
}

static LinearFunctionalProcess default_linear() {
  LinearFunctionalProcess::Params p;
  p.coeffs.resize(64);
  for (std::size_t i = 0; i < p.coeffs.size(); ++i)
    p.coeffs[i] = std::pow(1.0 + static_cast<double>(i), -2.5);
  p.h_gamma = 1.0;
  p.h_alpha = 0.0;
  return LinearFunctionalProcess(p);
}

StationaryModel make_model(const std::string& name) {
  if (name == "coin") return coin_chain();
  if (name == "eigen") return eigen_chain();
  if (name == "swap") return swap_chain();
  if (name == "mds_eigen") return mds_pair_chain(eigen_chain());
  if (name == "signmds_eigen") return sign_randomized_mds_chain(eigen_chain());
  if (name == "cobound_eigen") {
    Eigen::VectorXd g(2);
    g << 1.0, -1.0;
    return coboundary_chain(eigen_chain(), g);
  }
  if (name == "delta_nu") return DeltaNuChain(DeltaNuChain::Params{});
  if (name == "arch") return default_arch();
  if (name == "linear") return default_linear();
  if (name == "iid_uniform") return IidUniform{};
  // Anything else is a config file path.
  return model_from_config(parse_kv_file(name));
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line, section;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto ltrim = line.find_first_not_of(" \t\r\n");
    if (ltrim == std::string::npos) continue;
    auto rtrim = line.find_last_not_of(" \t\r\n");
    line = line.substr(ltrim, rtrim - ltrim + 1);
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ArgumentError("config line is not key=value: " + line);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

static std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::string cleaned = s;
  for (char& c : cleaned)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream in(cleaned);
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

static NoiseLaw parse_noise(const std::string& s) {
  if (s == "normal" || s.empty()) return NoiseLaw::normal;
  if (s == "rademacher") return NoiseLaw::rademacher;
  throw ArgumentError("unknown noise law: " + s);
}

StationaryModel model_from_config(
    const std::map<std::string, std::string>& kv) {
  auto get = [&](const std::string& key) -> std::string {
    auto it = kv.find(key);
    return it == kv.end() ? std::string() : it->second;
  };
  const std::string type = get("model.type");
  if (type == "finite_chain") {
    const std::vector<double> qflat = parse_numbers(get("model.Q"));
    const std::vector<double> fvals = parse_numbers(get("model.f"));
    const std::size_t m = fvals.size();
    if (m == 0 || qflat.size() != m * m)
      throw ArgumentError("finite_chain config: Q must be |f| x |f|");
    Eigen::MatrixXd Q(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) Q(i, j) = qflat[i * m + j];
    Eigen::VectorXd f(m);
    for (std::size_t i = 0; i < m; ++i) f(i) = fvals[i];
    const std::vector<double> pvals = parse_numbers(get("model.pi"));
    if (!pvals.empty()) {
      if (pvals.size() != m)
        throw ArgumentError("finite_chain config: pi length mismatch");
      Eigen::VectorXd pi(m);
      for (std::size_t i = 0; i < m; ++i) pi(i) = pvals[i];
      return FiniteChain(Q, pi, f, "config_chain");
    }
    return FiniteChain(Q, f, "config_chain");
  }
  if (type == "delta_nu") {
    DeltaNuChain::Params p;
    if (!get("model.p").empty()) p.p = std::stod(get("model.p"));
    if (!get("model.lambda").empty())
      p.lambda = std::stod(get("model.lambda"));
    if (!get("model.grid_nodes").empty())
      p.grid_nodes = std::stoi(get("model.grid_nodes"));
    return DeltaNuChain(p);
  }
  if (type == "arch") {
    ArchProcess::Params p;
    if (!get("model.c").empty()) p.c = std::stod(get("model.c"));
    p.coeffs = parse_numbers(get("model.coeffs"));
    if (p.coeffs.empty()) p.coeffs = default_arch().params().coeffs;
    p.noise = parse_noise(get("model.noise"));
    if (!get("model.truncation").empty())
      p.truncation_lags = std::stoi(get("model.truncation"));
    if (!get("model.burn_in").empty())
      p.burn_in = std::stoi(get("model.burn_in"));
    return ArchProcess(p);
  }
  if (type == "linear") {
    LinearFunctionalProcess::Params p;
    p.coeffs = parse_numbers(get("model.coeffs"));
    if (p.coeffs.empty()) p.coeffs = default_linear().params().coeffs;
    if (!get("model.h_gamma").empty())
      p.h_gamma = std::stod(get("model.h_gamma"));
    if (!get("model.h_alpha").empty())
      p.h_alpha = std::stod(get("model.h_alpha"));
    if (!get("model.h_C").empty()) p.h_C = std::stod(get("model.h_C"));
    p.noise = parse_noise(get("model.noise"));
    return LinearFunctionalProcess(p);
  }
  if (type == "iid_uniform") return IidUniform{};
  throw ArgumentError("unknown model type: '" + type + "'");
}

}  // namespace momineq
