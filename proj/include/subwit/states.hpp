// states.hpp
// Target-state families: the Bell phase family, GHZ, W and Dicke subspace
// specifications, the phase-parameterized target state
//   |psi(theta)> = sum_k a_k exp(-i k.theta) |k>
// and the two-qubit Bell-subspace mixed family rho_phi(eps, theta, phi0).

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "subwit/qcore.hpp"

namespace subwit {

// Ordered basis labels with positive amplitudes spanning the target family.
class SubspaceSpec {
 public:
  // labels are bitstrings of equal length n (leftmost char = qubit 0);
  // throws InvalidSpec on duplicate/ragged labels, d < 2, nonpositive
  // amplitudes, or sum a_k^2 != 1 (tolerance 1e-12).
  SubspaceSpec(std::vector<std::string> labels, std::vector<double> amplitudes);

  std::size_t qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return labels_.size(); }  // d
  const std::string& label(std::size_t k) const { return labels_[k]; }
  std::size_t index(std::size_t k) const { return indices_[k]; }  // basis index in 2^n space
  double amplitude(std::size_t k) const { return amps_[k]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& amplitudes() const noexcept { return amps_; }
  bool bit(std::size_t k, std::size_t qubit) const { return labels_[k][qubit] == '1'; }
  std::size_t pair_count() const noexcept { return size() * (size() - 1) / 2; }

  // Text form: one `label amplitude` line per basis state.
  std::string to_text() const;

  friend bool operator==(const SubspaceSpec&, const SubspaceSpec&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<std::size_t> indices_;
  std::vector<double> amps_;
};

// Parses the `label amplitude` text form; blank lines and '#' comments are
// skipped. Throws ParseError / InvalidSpec.
SubspaceSpec parse_subspace_spec(std::string_view text);
SubspaceSpec load_subspace_spec(const std::string& path);

enum class BellBranch { Phi, Psi };

struct BellParams {
  BellBranch branch = BellBranch::Phi;
  double phi = 0.0;
};

SubspaceSpec bell_spec(BellBranch branch = BellBranch::Phi);
SubspaceSpec ghz_spec(std::size_t n);
SubspaceSpec w_spec(std::size_t n);
// All weight-k bitstrings of length n in increasing index order, equal
// amplitudes. Throws InvalidExcitation unless 0 < k < n.
SubspaceSpec dicke(std::size_t n, std::size_t k);

// Per-qubit z phases theta_m (radians), stored in [0, 2pi).
class PhaseSetting {
 public:
  PhaseSetting() = default;
  explicit PhaseSetting(std::vector<double> thetas);
  static PhaseSetting zeros(std::size_t n) { return PhaseSetting(std::vector<double>(n, 0.0)); }

  std::size_t size() const noexcept { return thetas_.size(); }
  double operator[](std::size_t m) const { return thetas_[m]; }
  const std::vector<double>& thetas() const noexcept { return thetas_; }

  friend bool operator==(const PhaseSetting&, const PhaseSetting&) = default;

 private:
  std::vector<double> thetas_;
};

double wrap_phase(double angle);  // into [0, 2pi)

// phi_k = sum_m k_m theta_m for basis label k of the spec.
double induced_phase(const SubspaceSpec& spec, std::size_t k, const PhaseSetting& phases);
std::vector<double> induced_phases(const SubspaceSpec& spec, const PhaseSetting& phases);

// |Phi(phi)> = cos(phi/2)|Phi+> + i sin(phi/2)|Phi->, returned with the
// |00> (|01>) amplitude real: (|k> + e^{-i phi}|kbar>)/sqrt2.
PureState bell(const BellParams& params);

// sum_k a_k e^{-i phi_k}|k>, rephased so the first label's amplitude is
// real and nonnegative. Throws DimensionMismatch if phases.size() != n.
PureState target_state(const SubspaceSpec& spec, const PhaseSetting& phases);

// 1_Phi/2 + (eps/2)(sin phi0 cos theta Phi_x + sin phi0 sin theta Phi_y + cos phi0 Phi_z)
// on span{|00>,|11>}, with Phi_x,y,z the Pauli operators in the
// {|Phi+>,|Phi->} basis. eps > 1 fails PSD validation (NotPositive).
DensityMatrix rho_phi(double eps, double theta, double phi0);

// Two-qubit X state: diagonal (r00, r01, r10, r11) plus <00|rho|11> and
// <01|rho|10>. Validated as a density matrix (NotPositive, InvalidState).
DensityMatrix x_state(const std::array<double, 4>& diagonal, Complex rho_00_11, Complex rho_01_10);

}  // namespace subwit
