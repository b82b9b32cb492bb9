// protocol.hpp
// Simulated readout protocols for a two-qubit electron-spin register:
// the correlator pulse sequence, the cross-polarization (HHCP) disentangling
// readout and gates, decay envelopes, spin-echo scans, the entanglement
// lifetime threshold, shot sampling, initialization purity and error
// channels.
//
// Units: couplings in rad/s, times in s, phases in radians.

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "subwit/qcore.hpp"
#include "subwit/states.hpp"

namespace subwit {

// Correlator sequence parameters. Rotations act on qubit 0; the coupling is
// H_int = d Z Z / 2.
struct PulseSpec {
  double coupling_d = 1.0;
  double duration_t = 0.0;
  double axis_phase_phi = 0.0;
  bool pi_pulse_inserted = true;
};

void validate(const PulseSpec& spec);  // throws OutOfRange

enum class DecayKind { Exponential, Stretched };

struct DecayModel {
  DecayKind kind = DecayKind::Exponential;
  double T = 0.0;           // s; T <= 0 or infinity disables decay
  double exponent_p = 1.0;  // 1 exponential, 2 Gaussian

  static DecayModel none() { return {DecayKind::Exponential, 0.0, 1.0}; }
  static DecayModel exponential(double T) { return {DecayKind::Exponential, T, 1.0}; }
  static DecayModel stretched(double T, double p) { return {DecayKind::Stretched, T, p}; }
  bool enabled() const;
  double envelope(double t) const;  // exp(-(t/T)^p)
};

void validate(const DecayModel& decay);  // throws OutOfRange

// Sign of the flip-flop Hamiltonian H = d (XX +- YY) / 4.
enum class HhcpSign { Plus, Minus };

// exp(-i H t). The Plus propagator acts only on span{|01>,|10>} and the
// Minus one only on span{|00>,|11>}; each is a rotation exp(-i (d t / 2) sx)
// in its block, so an iSWAP-type full exchange needs d t = pi and d t = pi/2
// gives the square-root gate. The named gate times d t = pi/4 (sqrt) and
// pi/2 (full) used for the readout refer to sin(d t), cos(d t) of the signal,
// not to this propagator.
ComplexMatrix hhcp_propagator(double d, double t, HhcpSign sign);

// Entangling gate used after initialization: Minus propagator at d t = pi/2,
// taking |00> to (|00> - i|11>)/sqrt2.
ComplexMatrix entangling_gate();

// Which two-body correlator the sequence reads out at phi = 0 and optimal
// time. xx and yy are obtained by a global pi/2 pre-rotation about y or x.
enum class CorrelatorBasis { ZZ, XX, YY };

// Sequence propagator U(phi). Observable Z on qubit 0 is read out after U,
// so the effective operator is U^dag Z_0 U.
ComplexMatrix correlator_unitary(const PulseSpec& spec);

// Closed form
//   cos phi [Y_0 cos dt + Z_0 Z_1 sin dt] + sin phi [Z_0 cos dt - Y_0 Z_1 sin dt].
// Without the refocusing pi pulse the sequence yields the same form at -phi.
ComplexMatrix correlator_operator_closed(const PulseSpec& spec);
// U^dag Z_0 U by direct conjugation.
ComplexMatrix correlator_operator_numeric(const PulseSpec& spec);
// Returns the numeric operator after checking it against the closed form
// (throws InvalidMatrix when they disagree beyond 1e-12).
ComplexMatrix correlator_operator(const PulseSpec& spec, CorrelatorBasis basis = CorrelatorBasis::ZZ);

// envelope(t) * tr(rho M').
double correlator_signal(const DensityMatrix& rho, const PulseSpec& spec, const DecayModel& decay,
                         CorrelatorBasis basis = CorrelatorBasis::ZZ);

// Optimal correlator time t = pi / (2 d).
double optimal_time(double d);

// HHCP readout with qubit-0 phase phi:
//   U(phi) = Rz_0(-phi) exp(-i H_q t) Rz_0(-phi)^dag,  H_q = -d (XY + YX) / 4,
// read out with Z_0, effective operator U^dag Z_0 U. H_q is the quadrature
// partner of the Minus flip-flop Hamiltonian; it is the choice that yields
//   M'(phi) = 1/2 [ (Z0 - Z1) + (Z0 + Z1) cos dt
//                   + ((XX - YY) cos phi - (XY + YX) sin phi) sin dt ].
ComplexMatrix hhcp_unitary(double phi, double d, double t);
ComplexMatrix hhcp_operator_closed(double phi, double dt);
ComplexMatrix hhcp_operator_numeric(double phi, double d, double t);
// tr(rho M'(phi)). At d t = pi/2 this equals offset + 2 C(phi) for the
// Phi Bell subspace, with offset = <Z0 - Z1>/2.
double hhcp_signal(const DensityMatrix& rho, double phi, double d, double t);
double hhcp_offset(const DensityMatrix& rho);

struct EchoScanResult {
  std::vector<double> taus;
  std::vector<double> signals;
  double fitted_amplitude = 0.0;
  double fitted_T2 = 0.0;
  double fitted_phase = 0.0;
  double residual_norm = 0.0;
  bool phase_degenerate = false;  // nu = 0: only A cos(phase) is identifiable
  int iterations = 0;
};

// Echo signal of the d = 2 subspace spec:
//   s(tau) = 2 C(2 pi nu tau) exp(-(tau/T2)^p)
//          = 2|rho_01| cos(2 pi nu tau - arg rho_01) exp(-(tau/T2)^p),
// followed by a least-squares fit of (A, T2, phase) with p held fixed.
// Throws FitDidNotConverge, InvalidSpec (d != 2), OutOfRange.
EchoScanResult echo_scan(const DensityMatrix& rho0, const SubspaceSpec& spec, double nu, const DecayModel& decay,
                         const std::vector<double>& taus);

// Fit only, on caller-supplied samples.
EchoScanResult fit_echo(const std::vector<double>& taus, const std::vector<double>& signals, double nu,
                        double exponent_p);

enum class LifetimeOutcome { Witnessed, Unwitnessed, AlwaysWitnessed };

struct Lifetime {
  LifetimeOutcome outcome = LifetimeOutcome::Witnessed;
  double tau_star = 0.0;  // s; 0 when Unwitnessed, infinity when AlwaysWitnessed
};

std::string to_string(LifetimeOutcome outcome);

// tau* = T2 [ln(C0 / (alpha - P))]^(1/p) with the boundary outcomes above.
Lifetime lifetime_tau_star(double T2, double p, double C0, double alpha, double P);
// C0 that gives a requested tau*.
double coherence_for_lifetime(double tau_star, double T2, double p, double alpha, double P);

// Mean of `shots` +-1 outcomes with P(+1) = (1 + s)/2 (binomial count).
// Throws OutOfRange for |s| > 1 or shots < 1.
double sample_shots(double expectation, std::int64_t shots, std::uint64_t seed);
// Per-point seed for scans.
std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index);
// Fidelity estimate from a two-outcome projective measurement of |psi><psi|.
double sample_fidelity(double fidelity, std::int64_t shots, std::uint64_t seed);

struct Dephasing {
  std::vector<double> gamma;  // one per qubit, or a single value for all
};
struct Depolarizing {
  double p = 0.0;
};
struct LocalZ {
  std::vector<double> angles;  // Rz(angle) = exp(-i angle Z / 2) per qubit
};
using Channel = std::variant<Dephasing, Depolarizing, LocalZ>;

// Dephasing per qubit: (1 - g/2) rho + (g/2) Z rho Z. Depolarizing:
// (1 - p) rho + p I/D. Throws OutOfRange / DimensionMismatch.
DensityMatrix apply_channel(const DensityMatrix& rho, const Channel& channel);

// Per-qubit polarization after N initialization rounds.
double init_polarization(int N, double p1, double lam);
// (I + q Z)/2 on each of two qubits.
DensityMatrix init_purity(int N, double p1, double lam);

}  // namespace subwit
