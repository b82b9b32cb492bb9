// witness.hpp
// Fidelity-based entanglement witnesses.
//
//   state witness     W_psi = alpha - <psi(theta)|rho|psi(theta)>
//   subspace witness  W_s   = alpha - max_theta <psi(theta)|rho|psi(theta)>
//
// The fidelity splits into a phase-independent population term
// P = sum_k a_k^2 rho_kk and a coherence term
// C(theta) = 2 sum_{j<k} a_j a_k Re(rho_jk exp(-i (phi_k - phi_j))).

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subwit/qcore.hpp"
#include "subwit/states.hpp"

namespace subwit {

// Coherences rho_jk (j < k, basis order of a SubspaceSpec) with optional
// populations rho_kk. Pairs are stored in lexicographic (j,k) order.
struct CoherenceTable {
  std::size_t d = 0;
  std::vector<Complex> coherences;
  std::optional<std::vector<double>> populations;

  Complex at(std::size_t j, std::size_t k) const;  // j < k
  // Pairs violating |rho_jk| <= sqrt(rho_jj rho_kk) + tol; empty when no
  // populations are attached. Violations are reported, never rejected.
  std::vector<std::pair<std::size_t, std::size_t>> cauchy_schwarz_violations(double tol = 1e-9) const;
};

std::size_t pair_index(std::size_t d, std::size_t j, std::size_t k);  // j < k < d
std::vector<std::pair<std::size_t, std::size_t>> ordered_pairs(std::size_t d);

CoherenceTable coherence_table(const DensityMatrix& rho, const SubspaceSpec& spec);

enum class WitnessMode { State, SubspaceConstrained, SubspaceMagnitudeSum };
std::string to_string(WitnessMode mode);
WitnessMode parse_witness_mode(const std::string& name);  // "state", "constrained", "magnitude-sum"

struct WitnessReport {
  double alpha = 0.0;
  double fidelity = 0.0;
  double population = 0.0;
  double coherence = 0.0;
  double value = 0.0;  // alpha - fidelity
  WitnessMode mode = WitnessMode::State;
  std::optional<PhaseSetting> phases;  // setting attaining the fidelity, when defined
  bool converged = true;               // false when the constrained optimizer hit its limits
};

std::string witness_csv_header();
std::string to_csv_row(const WitnessReport& report);

// <psi|rho|psi>. Throws DimensionMismatch.
double fidelity(const DensityMatrix& rho, const PureState& psi);

struct Decomposition {
  double population = 0.0;
  double coherence = 0.0;
};
Decomposition decompose(const DensityMatrix& rho, const SubspaceSpec& spec, const PhaseSetting& phases);

double population(const SubspaceSpec& spec, const CoherenceTable& table);
double coherence_sum(const SubspaceSpec& spec, const CoherenceTable& table, const PhaseSetting& phases);
// 2 sum_{j<k} a_j a_k |rho_jk|
double coherence_magnitude_sum(const SubspaceSpec& spec, const CoherenceTable& table);

WitnessReport state_witness(const DensityMatrix& rho, const SubspaceSpec& spec, const PhaseSetting& phases,
                            double alpha);

struct OptimizerOptions {
  int starts = 16;
  double tolerance = 1e-10;  // on C between iterations
  int max_iterations = 2000;
  std::uint64_t seed = 0x5eed5eedULL;
};

struct CoherenceMaximum {
  double value = 0.0;
  PhaseSetting phases;
  bool converged = true;
};

// max_theta C(theta) over per-qubit phase settings: multi-start damped
// Newton/gradient ascent with the analytic gradient and Hessian. Starts are
// reduced by (value, start index), so the result is deterministic for a seed.
// For d = 2 the maximum |rho_kkbar| is returned in closed form.
CoherenceMaximum maximize_coherence(const SubspaceSpec& spec, const CoherenceTable& table,
                                    const OptimizerOptions& options = {});

// mode must be SubspaceConstrained or SubspaceMagnitudeSum.
WitnessReport subspace_witness(const DensityMatrix& rho, const SubspaceSpec& spec, double alpha, WitnessMode mode,
                               const OptimizerOptions& options = {});
// Same semantics from a coherence table that carries (or is given) P.
WitnessReport subspace_witness(const SubspaceSpec& spec, const CoherenceTable& table, double population,
                               double alpha, WitnessMode mode, const OptimizerOptions& options = {});

struct AlphaEstimate {
  double alpha = 0.0;
  bool converged = false;
  int sweeps = 0;  // sweeps used by the winning start
};

// Squared maximum overlap of |psi(0)> with product states, by alternating
// single-qubit optimization from random product starts.
AlphaEstimate alpha_separable(const SubspaceSpec& spec, int restarts = 16, double tol = 1e-12,
                              std::uint64_t seed = 0xa1fa5eedULL);

// The per-sweep overlap sequence of one alternating-ascent run from a given
// product state (one 2-vector per qubit, normalized here). Exposed for monotonicity checks.
std::vector<double> alternating_overlap_trace(const SubspaceSpec& spec,
                                              std::vector<std::array<Complex, 2>> product, int sweeps);

}  // namespace subwit
