#include "support.hpp"

#include <cmath>
#include <numbers>

namespace subwit::testkit {

namespace {

Complex gaussian_complex(Rng& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng)};
}

ComplexMatrix ginibre_state(std::size_t dim, std::size_t rank, Rng& rng) {
  if (rank == 0 || rank > dim) rank = dim;
  std::vector<std::vector<Complex>> cols(rank, std::vector<Complex>(dim));
  for (auto& c : cols) {
    for (auto& x : c) x = gaussian_complex(rng);
  }
  ComplexMatrix m(dim);
  for (const auto& c : cols) {
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t s = 0; s < dim; ++s) m(r, s) += c[r] * std::conj(c[s]);
    }
  }
  const double tr = m.trace().real();
  m *= Complex(1.0 / tr);
  for (std::size_t r = 0; r < dim; ++r) {
    m(r, r) = m(r, r).real();
    for (std::size_t s = r + 1; s < dim; ++s) m(s, r) = std::conj(m(r, s));
  }
  return m;
}

}  // namespace

DensityMatrix random_density(std::size_t n_qubits, Rng& rng, std::size_t rank) {
  return DensityMatrix::from_matrix(ginibre_state(std::size_t{1} << n_qubits, rank, rng));
}

DensityMatrix random_subspace_density(const SubspaceSpec& spec, Rng& rng, std::size_t rank) {
  const ComplexMatrix small = ginibre_state(spec.size(), rank, rng);
  ComplexMatrix m(std::size_t{1} << spec.qubits());
  for (std::size_t j = 0; j < spec.size(); ++j) {
    for (std::size_t k = 0; k < spec.size(); ++k) m(spec.index(j), spec.index(k)) = small(j, k);
  }
  return DensityMatrix::from_matrix(std::move(m));
}

PureState random_pure(std::size_t n_qubits, Rng& rng) {
  std::vector<Complex> a(std::size_t{1} << n_qubits);
  for (auto& x : a) x = gaussian_complex(rng);
  return PureState::normalized(std::move(a));
}

DensityMatrix random_product_state(std::size_t n_qubits, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DensityMatrix out = random_density(1, rng, 1 + (u(rng) < 0.5 ? 1 : 0));
  for (std::size_t q = 1; q < n_qubits; ++q) out = tensor(out, random_density(1, rng, 1 + (u(rng) < 0.5 ? 1 : 0)));
  return out;
}

ComplexMatrix random_single_qubit_unitary(Rng& rng) {
  std::normal_distribution<double> g;
  const ComplexMatrix h = g(rng) * pauli::X() + g(rng) * pauli::Y() + g(rng) * pauli::Z() + g(rng) * pauli::I();
  return expi_hermitian(h, 1.0);
}

ComplexMatrix random_local_unitary(std::size_t n_qubits, Rng& rng) {
  ComplexMatrix u = random_single_qubit_unitary(rng);
  for (std::size_t q = 1; q < n_qubits; ++q) u = kron(u, random_single_qubit_unitary(rng));
  return u;
}

DensityMatrix rho_phi_oracle(double eps, double theta, double phi0) {
  const double s = 1.0 / std::numbers::sqrt2;
  const std::vector<Complex> plus{s, 0, 0, s};
  const std::vector<Complex> minus{s, 0, 0, -s};
  const ComplexMatrix pp = ComplexMatrix::outer(plus, plus);
  const ComplexMatrix mm = ComplexMatrix::outer(minus, minus);
  const ComplexMatrix pm = ComplexMatrix::outer(plus, minus);
  const ComplexMatrix mp = ComplexMatrix::outer(minus, plus);
  const Complex i(0.0, 1.0);
  const ComplexMatrix phi_x = pm + mp;
  const ComplexMatrix phi_y = -i * pm + i * mp;
  const ComplexMatrix phi_z = pp - mm;
  const ComplexMatrix one = pp + mm;
  ComplexMatrix m = 0.5 * one;
  m += (0.5 * eps * std::sin(phi0) * std::cos(theta)) * phi_x;
  m += (0.5 * eps * std::sin(phi0) * std::sin(theta)) * phi_y;
  m += (0.5 * eps * std::cos(phi0)) * phi_z;
  return DensityMatrix::from_matrix(std::move(m));
}

double fidelity_oracle(const DensityMatrix& rho, const PureState& psi) {
  return (rho.matrix() * psi.projector()).trace().real();
}

double alpha_grid_oracle(const SubspaceSpec& spec, double step_deg) {
  const std::size_t n = spec.qubits();
  const int steps = static_cast<int>(std::round(180.0 / step_deg));
  std::vector<int> idx(n - 1, 0);
  double best = 0.0;
  while (true) {
    // Coefficients of the last qubit's cos/sin after fixing the rest.
    double A = 0.0, B = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
      double term = spec.amplitude(k);
      for (std::size_t m = 0; m + 1 < n; ++m) {
        const double half = 0.5 * idx[m] * step_deg * std::numbers::pi / 180.0;
        term *= spec.bit(k, m) ? std::sin(half) : std::cos(half);
      }
      (spec.bit(k, n - 1) ? B : A) += term;
    }
    best = std::max(best, A * A + B * B);
    std::size_t m = 0;
    while (m + 1 < n && ++idx[m] > steps) idx[m++] = 0;
    if (m + 1 >= n) break;
  }
  return best;
}

double max_fidelity_grid(const DensityMatrix& rho, const SubspaceSpec& spec, int steps) {
  const std::size_t n = spec.qubits();
  std::vector<int> idx(n, 0);
  double best = -1.0;
  while (true) {
    std::vector<double> th(n);
    for (std::size_t m = 0; m < n; ++m) th[m] = 2.0 * std::numbers::pi * idx[m] / steps;
    best = std::max(best, fidelity_oracle(rho, target_state(spec, PhaseSetting(th))));
    std::size_t m = 0;
    while (m < n && ++idx[m] >= steps) idx[m++] = 0;
    if (m >= n) break;
  }
  return best;
}

}  // namespace subwit::testkit
