// Helpers shared by the unit and acceptance suites: random states and
// unitaries, plus independent reference computations used as oracles.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "subwit/qcore.hpp"
#include "subwit/states.hpp"

namespace subwit::testkit {

using Rng = std::mt19937_64;

// G G^dag / tr for a dim x rank complex Gaussian G.
DensityMatrix random_density(std::size_t n_qubits, Rng& rng, std::size_t rank = 0);
// Random density matrix supported on span{|k>} of the spec.
DensityMatrix random_subspace_density(const SubspaceSpec& spec, Rng& rng, std::size_t rank = 0);
PureState random_pure(std::size_t n_qubits, Rng& rng);
DensityMatrix random_product_state(std::size_t n_qubits, Rng& rng);
ComplexMatrix random_single_qubit_unitary(Rng& rng);
ComplexMatrix random_local_unitary(std::size_t n_qubits, Rng& rng);

// rho_phi built from the Bell vectors and the subspace Pauli operators.
DensityMatrix rho_phi_oracle(double eps, double theta, double phi0);

// tr(rho |psi><psi|) by explicit projector product.
double fidelity_oracle(const DensityMatrix& rho, const PureState& psi);

// Max over real product states |<psi(0)|chi>|^2 on a polar-angle grid of the
// first n-1 qubits (step in degrees); the last qubit is optimized exactly.
double alpha_grid_oracle(const SubspaceSpec& spec, double step_deg = 1.0);

// Brute-force max over a phase grid of P + C on the per-qubit torus.
double max_fidelity_grid(const DensityMatrix& rho, const SubspaceSpec& spec, int steps);

}  // namespace subwit::testkit
