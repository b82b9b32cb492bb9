// qcore.hpp
// Dense complex linear algebra for small multi-qubit operators: products,
// Kronecker products, unitary conjugation, a Jacobi Hermitian eigensolver,
// and validated state types (PureState, DensityMatrix).
//
// Qubit ordering: qubit 0 is the leftmost character of a basis label and
// the most significant bit of the basis index, so |q0 q1 ... q(n-1)> has
// index q0*2^(n-1) + ... + q(n-1).

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace subwit {

using Complex = std::complex<double>;

// Validity tolerances used when checking density operators and unitaries.
// The process-wide defaults can be overridden (e.g. from a scenario file)
// because shot-noise reconstructed matrices are only approximately physical.
struct Tolerances {
  double hermitian = 1e-9;   // entrywise |M - M^dagger|
  double trace = 1e-9;       // |tr(rho) - 1|
  double psd_floor = 1e-9;   // smallest eigenvalue >= -psd_floor
  double unitary = 1e-9;     // max |U U^dagger - I|
  double pure_norm = 1e-12;  // | ||psi|| - 1 |
};

const Tolerances& default_tolerances();
void set_default_tolerances(const Tolerances& tol);

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  // Row-major entries; entries.size() must equal dim*dim and be finite.
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

  std::size_t dim() const noexcept { return dim_; }
  Complex operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  std::span<const Complex> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix conj() const;
  Complex trace() const;
  bool is_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, Complex s);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> v);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& u, double tol);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors);

// Returns U M U^dagger. Throws NonUnitary when max|U U^dagger - I| exceeds
// the unitary tolerance.
ComplexMatrix conjugate(const ComplexMatrix& m, const ComplexMatrix& u);

// Ascending eigenvalues of a Hermitian matrix (cyclic Jacobi).
std::vector<double> hermitian_eigen(const ComplexMatrix& h);

struct EigenSystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column i pairs with values[i]
};
EigenSystem hermitian_eigensystem(const ComplexMatrix& h);

// exp(-i * angle * H) for Hermitian H, via eigendecomposition.
ComplexMatrix expi_hermitian(const ComplexMatrix& h, double angle);

namespace pauli {
const ComplexMatrix& I();
const ComplexMatrix& X();
const ComplexMatrix& Y();
const ComplexMatrix& Z();
// Single-qubit Pauli by letter: 'i', 'x', 'y', 'z' (case-insensitive).
const ComplexMatrix& by_name(char axis);
// Tensor product of single-qubit Paulis, e.g. "zz", "xiy".
ComplexMatrix string(std::string_view axes);
}  // namespace pauli

// Embeds a single-qubit operator on `qubit` of an n-qubit register.
ComplexMatrix on_qubit(const ComplexMatrix& op, std::size_t qubit, std::size_t n);

std::size_t qubits_for_dim(std::size_t dim);  // throws unless dim = 2^n, n >= 1

class PureState {
 public:
  // Validates the norm against Tolerances::pure_norm.
  explicit PureState(std::vector<Complex> amplitudes);
  static PureState normalized(std::vector<Complex> amplitudes);

  std::size_t dim() const noexcept { return amps_.size(); }
  std::size_t qubits() const noexcept { return n_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }
  ComplexMatrix projector() const;

 private:
  std::vector<Complex> amps_;
  std::size_t n_ = 0;
};

Complex inner(const PureState& a, const PureState& b);  // <a|b>

class DensityMatrix {
 public:
  // Validates hermiticity, unit trace and positivity; throws NonHermitian,
  // InvalidState or NotPositive.
  static DensityMatrix from_matrix(ComplexMatrix m, const Tolerances& tol = default_tolerances());
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t n_qubits);

  std::size_t dim() const noexcept { return m_.dim(); }
  std::size_t qubits() const noexcept { return n_; }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  double purity() const;

 private:
  DensityMatrix(ComplexMatrix m, std::size_t n) : m_(std::move(m)), n_(n) {}
  ComplexMatrix m_;
  std::size_t n_ = 0;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// tr(rho M) for Hermitian M. Throws NonHermitianObservable or DimensionMismatch.
double expect(const DensityMatrix& rho, const ComplexMatrix& m);

}  // namespace subwit
