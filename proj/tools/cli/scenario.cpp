#include "cli/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "subwit/errors.hpp"

namespace subwit::cli {

namespace {

void check_keys(const YAML::Node& node, const std::string& section, const std::set<std::string>& allowed) {
  if (!node) return;
  if (!node.IsMap()) throw ConfigError("section '" + section + "' must be a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (node && node[key]) out = node[key].as<T>();
}

template <typename T>
void read_opt(const YAML::Node& node, const char* key, std::optional<T>& out) {
  if (node && node[key]) out = node[key].as<T>();
}

Channel parse_channel(const YAML::Node& node) {
  check_keys(node, "channels[]", {"type", "gamma", "p", "angles"});
  const std::string type = node["type"] ? node["type"].as<std::string>() : "";
  if (type == "dephasing") {
    Dephasing ch;
    if (node["gamma"] && node["gamma"].IsSequence()) {
      ch.gamma = node["gamma"].as<std::vector<double>>();
    } else {
      ch.gamma = {node["gamma"] ? node["gamma"].as<double>() : 0.0};
    }
    return ch;
  }
  if (type == "depolarizing") return Depolarizing{node["p"] ? node["p"].as<double>() : 0.0};
  if (type == "local_z") return LocalZ{node["angles"] ? node["angles"].as<std::vector<double>>() : std::vector<double>{}};
  throw ConfigError("unknown channel type '" + type + "'");
}

std::int64_t parse_shots(const YAML::Node& node) {
  const std::string s = node.as<std::string>();
  if (s == "inf") return 0;
  const auto v = node.as<std::int64_t>();
  if (v < 1) throw ConfigError("protocol.shots must be >= 1 or 'inf'");
  return v;
}

}  // namespace

Scenario parse_scenario(const std::string& yaml_text) {
  Scenario sc;
  try {
    const YAML::Node root = YAML::Load(yaml_text);
    if (!root || root.IsNull()) return sc;
    check_keys(root, "<root>", {"state", "channels", "protocol", "analysis", "output"});

    const YAML::Node st = root["state"];
    check_keys(st, "state", {"family", "n", "k", "branch", "phi", "spec_file", "eps", "theta", "phi0", "zz", "xx",
                             "yy", "fidelity_max", "population", "coherence", "coherence_phase", "N", "p1", "lam"});
    StateConfig& s = sc.state;
    read(st, "family", s.family);
    read(st, "n", s.n);
    read(st, "k", s.k);
    read(st, "branch", s.branch);
    read(st, "phi", s.phi);
    read(st, "spec_file", s.spec_file);
    read(st, "eps", s.eps);
    read(st, "theta", s.theta);
    read(st, "phi0", s.phi0);
    read(st, "zz", s.zz);
    read(st, "xx", s.xx);
    read(st, "yy", s.yy);
    read(st, "fidelity_max", s.fidelity_max);
    read(st, "population", s.population);
    read(st, "coherence", s.coherence);
    read(st, "coherence_phase", s.coherence_phase);
    read(st, "N", s.N);
    read(st, "p1", s.p1);
    read(st, "lam", s.lam);

    if (const YAML::Node ch = root["channels"]) {
      if (!ch.IsSequence()) throw ConfigError("'channels' must be a list");
      for (const auto& c : ch) sc.channels.push_back(parse_channel(c));
    }

    const YAML::Node pr = root["protocol"];
    check_keys(pr, "protocol", {"d", "t", "nu", "T", "T2", "p", "tau_max", "points", "shots", "seed"});
    ProtocolConfig& p = sc.protocol;
    read(pr, "d", p.d);
    read_opt(pr, "t", p.t);
    read(pr, "nu", p.nu);
    read(pr, "T", p.T);
    read(pr, "T2", p.T2);
    read(pr, "p", p.p);
    read(pr, "tau_max", p.tau_max);
    read(pr, "points", p.points);
    if (pr && pr["shots"]) {
      const std::int64_t v = parse_shots(pr["shots"]);
      if (v > 0) p.shots = v;
    }
    read(pr, "seed", p.seed);

    const YAML::Node an = root["analysis"];
    check_keys(an, "analysis", {"alpha", "mode", "schedule", "phases", "target", "P_echo", "N_values", "dephasing"});
    AnalysisConfig& a = sc.analysis;
    read_opt(an, "alpha", a.alpha);
    if (an && an["mode"]) a.mode = parse_witness_mode(an["mode"].as<std::string>());
    read(an, "schedule", a.schedule);
    read(an, "phases", a.phases);
    read(an, "target", a.target);
    read(an, "P_echo", a.P_echo);
    read(an, "N_values", a.N_values);
    read(an, "dephasing", a.dephasing);

    read(root, "output", sc.output);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (!(sc.protocol.d > 0.0)) throw ConfigError("protocol.d must be positive");
  if (sc.protocol.points < 4) throw ConfigError("protocol.points must be >= 4");
  if (sc.analysis.alpha && !(*sc.analysis.alpha > 0.0 && *sc.analysis.alpha < 1.0)) {
    throw ConfigError("analysis.alpha must lie in (0, 1)");
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  Scenario sc = parse_scenario(buf.str());
  // Relative spec files resolve against the config's directory.
  if (!sc.state.spec_file.empty() && std::filesystem::path(sc.state.spec_file).is_relative()) {
    sc.state.spec_file = (std::filesystem::path(path).parent_path() / sc.state.spec_file).string();
  }
  return sc;
}

SubspaceSpec resolve_spec(const std::string& name) {
  static const std::regex ghz(R"(ghz(\d+))"), w(R"(w(\d+))"), dk(R"(dicke(\d+)_(\d+))");
  std::smatch m;
  try {
    if (name == "bell" || name == "bell-phi") return bell_spec(BellBranch::Phi);
    if (name == "bell-psi") return bell_spec(BellBranch::Psi);
    if (std::regex_match(name, m, ghz)) return ghz_spec(std::stoul(m[1]));
    if (std::regex_match(name, m, w)) return w_spec(std::stoul(m[1]));
    if (std::regex_match(name, m, dk)) return dicke(std::stoul(m[1]), std::stoul(m[2]));
    return load_subspace_spec(name);
  } catch (const Error& e) {
    throw ConfigError("spec '" + name + "': " + e.what());
  }
}

SubspaceSpec target_spec(const Scenario& sc) {
  if (!sc.analysis.target.empty()) return resolve_spec(sc.analysis.target);
  const StateConfig& s = sc.state;
  try {
    if (s.family == "bell") return bell_spec(s.branch == "psi" ? BellBranch::Psi : BellBranch::Phi);
    if (s.family == "ghz") return ghz_spec(s.n);
    if (s.family == "w") return w_spec(s.n);
    if (s.family == "dicke") return dicke(s.n, s.k);
    if (s.family == "spec") return resolve_spec(s.spec_file);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return bell_spec(BellBranch::Phi);
}

DensityMatrix correlator_state(double zz, double xx, double yy, double fidelity_max) {
  const double P = (1.0 + zz) / 4.0;
  const double re = (xx - yy) / 4.0;
  const double mag = fidelity_max - P;
  const double im2 = mag * mag - re * re;
  if (mag < 0.0 || im2 < -1e-15) {
    throw Error(ErrorCode::InvalidState, "correlators and maximal fidelity are inconsistent");
  }
  const double odd = (1.0 - zz) / 4.0;
  return x_state({P, odd, odd, P}, Complex(re, std::sqrt(std::max(0.0, im2))), Complex((xx + yy) / 4.0, 0.0));
}

DensityMatrix entangled_init_state(int N, double p1, double lam) {
  const DensityMatrix rho0 = init_purity(N, p1, lam);
  return DensityMatrix::from_matrix(conjugate(rho0.matrix(), entangling_gate()));
}

DensityMatrix build_state(const Scenario& sc) {
  const StateConfig& s = sc.state;
  try {
    DensityMatrix rho = [&]() -> DensityMatrix {
      if (s.family == "bell") {
        return DensityMatrix::from_pure(bell({s.branch == "psi" ? BellBranch::Psi : BellBranch::Phi, s.phi}));
      }
      if (s.family == "ghz" || s.family == "w" || s.family == "dicke" || s.family == "spec") {
        const SubspaceSpec spec = target_spec(Scenario{s, {}, {}, {}, {}});
        return DensityMatrix::from_pure(target_state(spec, PhaseSetting::zeros(spec.qubits())));
      }
      if (s.family == "rho_phi") return rho_phi(s.eps, s.theta, s.phi0);
      if (s.family == "correlators") return correlator_state(s.zz, s.xx, s.yy, s.fidelity_max);
      if (s.family == "x_state") {
        const double odd = 0.5 - s.population;
        return x_state({s.population, odd, odd, s.population}, std::polar(s.coherence, s.coherence_phase), 0.0);
      }
      if (s.family == "init") return entangled_init_state(s.N, s.p1, s.lam);
      throw ConfigError("unknown state family '" + s.family + "'");
    }();
    for (const auto& ch : sc.channels) rho = apply_channel(rho, ch);
    return rho;
  } catch (const Error& e) {
    throw ConfigError(std::string("state: ") + e.what());
  }
}

}  // namespace subwit::cli
