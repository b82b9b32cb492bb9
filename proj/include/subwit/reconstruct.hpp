// reconstruct.hpp
// Phase-measurement schedules and linear inversion of measured fidelities
// F(theta) = P + C(theta) into the population P and the coherences rho_jk.
//
// Unknown order (frozen): P, Re rho_jk for (j,k) lexicographic, Im rho_jk
// for (j,k) lexicographic. Column coefficients of a setting are
//   P: 1,  Re: 2 a_j a_k cos phi_kj,  Im: 2 a_j a_k sin phi_kj.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subwit/states.hpp"
#include "subwit/witness.hpp"

namespace subwit {

enum class SchedulePart { Real, Imaginary, Mixed };
std::string to_string(SchedulePart part);
SchedulePart parse_schedule_part(const std::string& name);

struct Schedule {
  std::vector<PhaseSetting> settings;
  SchedulePart part = SchedulePart::Mixed;
};

// Throws InvalidSpec when settings are empty or repeated.
void validate(const Schedule& schedule);

// Phases {0, pi/2, pi} on the first qubit where the two labels differ.
// Throws InvalidSpec unless d = 2.
Schedule bell_schedule(const SubspaceSpec& spec = bell_spec());

// Real part: d(d-1)/2 + 1 settings with theta_m in {0, pi}, starting from
// the all-zero setting and adding complementary sign-pattern pairs.
// Imaginary part: d(d-1)/2 settings with theta_m in {0, pi/2, pi, 3pi/2}
// chosen to complete the rank of the Im block; those rows also carry known
// P and Re terms. Throws Infeasible for d = 2, when too few patterns are
// realizable by per-qubit phases, or when the search space is too large.
Schedule binary_schedule(const SubspaceSpec& spec, SchedulePart part);

// bell_schedule for d = 2, real followed by imaginary otherwise.
Schedule full_schedule(const SubspaceSpec& spec);

struct Feasibility {
  std::size_t unknowns = 0;             // d(d-1) + 1
  std::uint64_t binary_limit = 0;       // 2^(d-1) distinct {0,pi} sign patterns
  std::size_t per_part_required = 0;    // d(d-1)/2 + 1
  bool feasible = false;                // d >= 3 and per_part_required <= binary_limit
  bool bell_fallback = false;           // d = 2: three-point scheme instead
  std::uint64_t realizable_patterns = 0;  // patterns reachable with per-qubit {0,pi} phases
  bool realizable = false;              // realizable_patterns >= per_part_required (or d = 2)
  std::uint64_t tomography_settings = 0;  // 4^n - 1, for scale comparison
};

Feasibility feasible(const SubspaceSpec& spec);

// Coefficients of one setting.
std::vector<double> design_row(const SubspaceSpec& spec, const PhaseSetting& setting);
std::vector<std::string> unknown_names(const SubspaceSpec& spec);

struct DesignSystem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> matrix;  // row-major
  std::vector<double> rhs;
  std::vector<std::string> names;
  std::size_t d = 0;           // subspace size the leading columns refer to
  double at(std::size_t r, std::size_t c) const { return matrix[r * cols + c]; }
};

// Throws LengthMismatch, OutOfRange (measurement outside [0, 1]).
DesignSystem assemble(const SubspaceSpec& spec, const Schedule& schedule, const std::vector<double>& measurements);

// Noiseless fidelities <psi(theta)|rho|psi(theta)> for each setting.
std::vector<double> forward_fidelities(const DensityMatrix& rho, const SubspaceSpec& spec, const Schedule& schedule);
// Same, from a coherence table with populations.
std::vector<double> forward_fidelities(const SubspaceSpec& spec, const CoherenceTable& table,
                                       const Schedule& schedule);

struct ShotModel {
  std::int64_t shots = 0;  // per setting, two-outcome projective measurement
};

struct ReconstructionResult {
  std::vector<std::string> names;
  std::vector<double> estimates;
  std::optional<std::vector<double>> std_errors;
  double P_hat = 0.0;
  CoherenceTable coherences;
  double residual_norm = 0.0;
  double condition_number = 1.0;
  std::size_t rank = 0;
};

// Least squares via the normal equations. Throws RankDeficientError with the
// null-space dimension.
ReconstructionResult solve(const DesignSystem& system, const std::optional<ShotModel>& shots = std::nullopt);

// HHCP readout: one population setting <Z0 Z1> and signals S(phi) at
// d t = pi/2, modelled as S = offset + 2 (Re cos phi + Im sin phi) for the
// Phi Bell subspace. Unknowns P, Re, Im, offset.
DesignSystem hhcp_system(double zz, const std::vector<double>& phis, const std::vector<double>& signals);

// Witness from reconstructed estimates. Throws IncompleteReconstruction.
WitnessReport ws_from_result(const ReconstructionResult& result, const SubspaceSpec& spec, double alpha,
                             WitnessMode mode, const OptimizerOptions& options = {});

// Measurement CSV: header `setting_index,theta_1..theta_n,fidelity`.
std::string measurements_csv(const Schedule& schedule, const std::vector<double>& fidelities);
struct MeasurementTable {
  Schedule schedule;
  std::vector<double> fidelities;
};
MeasurementTable parse_measurements_csv(const std::string& text);  // throws ParseError

// `unknown,estimate,std_error` rows.
std::string result_csv(const ReconstructionResult& result);

}  // namespace subwit
