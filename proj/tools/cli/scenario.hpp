// Scenario files: YAML with `state`, `channels`, `protocol`, `analysis` and
// `output` sections. Every key is optional; unknown keys are rejected.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "subwit/protocol.hpp"
#include "subwit/states.hpp"
#include "subwit/witness.hpp"

namespace subwit::cli {

// Invalid or unreadable configuration; maps to exit status 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StateConfig {
  // bell | ghz | w | dicke | spec | rho_phi | correlators | x_state | init
  std::string family = "bell";
  std::size_t n = 2;
  std::size_t k = 1;
  std::string branch = "phi";
  double phi = 0.0;
  std::string spec_file;  // family spec: pure target |psi(0)> of a spec file
  // rho_phi
  double eps = 1.0;
  double theta = 0.0;
  double phi0 = 0.0;
  // correlators: X state matching measured <zz>, <xx>, <yy> and a maximal
  // subspace fidelity
  double zz = 0.497;
  double xx = 0.2142;
  double yy = -0.5857;
  double fidelity_max = 0.6827;
  // x_state: Phi-subspace population and <00|rho|11>
  double population = 0.371;
  double coherence = 0.3117;
  double coherence_phase = 0.0;
  // init: repeated initialization then the entangling gate
  int N = 1;
  double p1 = 0.6;
  double lam = 0.5;
};

struct ProtocolConfig {
  double d = 2.0 * 3.14159265358979323846 * 50e3;  // rad/s
  std::optional<double> t;                          // s; default optimal pi/(2d)
  double nu = 15e3;                                 // Hz
  double T = 25e-6;                                 // correlator envelope, s
  double T2 = 31e-6;                                // echo decay, s
  double p = 2.0;                                   // echo exponent
  double tau_max = 60e-6;
  std::size_t points = 121;
  std::optional<std::int64_t> shots;  // none = exact expectations
  std::uint64_t seed = 1;
};

struct AnalysisConfig {
  std::optional<double> alpha;  // default: alpha_separable of the target
  WitnessMode mode = WitnessMode::SubspaceConstrained;
  std::string schedule = "full";  // full | real | imaginary | bell
  std::vector<double> phases;     // state-witness setting; zeros by default
  std::string target;             // target spec; default derived from the state
  double P_echo = 0.371;          // population used for the lifetime report
  std::vector<int> N_values{1, 2, 3, 4, 5};
  double dephasing = 0.0;         // extra dephasing before the fig3 witness
};

struct Scenario {
  StateConfig state;
  std::vector<Channel> channels;
  ProtocolConfig protocol;
  AnalysisConfig analysis;
  std::string output;
};

Scenario parse_scenario(const std::string& yaml_text);
Scenario load_scenario(const std::string& path);

// Named specs: bell, bell-psi, ghz<N>, w<N>, dicke<N>_<K>; anything else is
// read as a spec file. Throws ConfigError.
SubspaceSpec resolve_spec(const std::string& name);

// Target subspace of the scenario (analysis.target or derived from state).
SubspaceSpec target_spec(const Scenario& scenario);

// X state with <zz>, <xx>, <yy> correlators and max subspace fidelity
// P + |<00|rho|11>| = fidelity_max; the imaginary part of the coherence is
// taken nonnegative.
DensityMatrix correlator_state(double zz, double xx, double yy, double fidelity_max);

// Initialized-and-entangled two-qubit state for N initialization rounds.
DensityMatrix entangled_init_state(int N, double p1, double lam);

// State after all configured channels. Throws ConfigError for invalid
// parameters.
DensityMatrix build_state(const Scenario& scenario);

}  // namespace subwit::cli
