#include "subwit/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "subwit/errors.hpp"

namespace subwit {

namespace {

Tolerances& mutable_tolerances() {
  static Tolerances tol;
  return tol;
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* where) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(where) + ": " + std::to_string(a.dim()) +
                                                  " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

const Tolerances& default_tolerances() { return mutable_tolerances(); }
void set_default_tolerances(const Tolerances& tol) { mutable_tolerances() = tol; }

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidMatrix, "matrix dimension must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (dim == 0) throw Error(ErrorCode::InvalidMatrix, "matrix dimension must be positive");
  if (data_.size() != dim * dim) {
    throw Error(ErrorCode::DimensionMismatch, "entry count does not match dim*dim");
  }
  if (!is_finite()) throw Error(ErrorCode::InvalidMatrix, "matrix has non-finite entries");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  if (dim_ == 0) throw Error(ErrorCode::InvalidMatrix, "matrix dimension must be positive");
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  if (!is_finite()) throw Error(ErrorCode::InvalidMatrix, "matrix has non-finite entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
  if (ket.size() != bra.size()) throw Error(ErrorCode::DimensionMismatch, "outer product sizes differ");
  ComplexMatrix m(ket.size());
  for (std::size_t r = 0; r < ket.size(); ++r) {
    for (std::size_t c = 0; c < bra.size(); ++c) m(r, c) = ket[r] * std::conj(bra[c]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::is_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "matrix product");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex(0.0)) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
    }
  }
  return out;
}

std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (v.size() != a.dim()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  std::vector<Complex> out(a.dim());
  for (std::size_t r = 0; r < a.dim(); ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < a.dim(); ++c) acc += a(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return m;
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (Complex z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = r; c < m.dim(); ++c) {
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
    }
  }
  return true;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  return max_abs_diff(u * u.adjoint(), ComplexMatrix::identity(u.dim())) <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t ar = 0; ar < na; ++ar) {
    for (std::size_t ac = 0; ac < na; ++ac) {
      const Complex s = a(ar, ac);
      for (std::size_t br = 0; br < nb; ++br) {
        for (std::size_t bc = 0; bc < nb; ++bc) out(ar * nb + br, ac * nb + bc) = s * b(br, bc);
      }
    }
  }
  return out;
}

ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors) {
  if (factors.size() == 0) throw Error(ErrorCode::InvalidMatrix, "kron of an empty list");
  auto it = factors.begin();
  ComplexMatrix out = *it++;
  for (; it != factors.end(); ++it) out = kron(out, *it);
  return out;
}

ComplexMatrix conjugate(const ComplexMatrix& m, const ComplexMatrix& u) {
  require_same_dim(m, u, "conjugate");
  if (!is_unitary(u, default_tolerances().unitary)) {
    throw Error(ErrorCode::NonUnitary, "conjugating matrix is not unitary");
  }
  return u * m * u.adjoint();
}

EigenSystem hermitian_eigensystem(const ComplexMatrix& h) {
  if (!is_hermitian(h, default_tolerances().hermitian)) {
    throw Error(ErrorCode::NonHermitian, "eigensolver input is not Hermitian");
  }
  const std::size_t n = h.dim();
  // Work on the exactly Hermitian part so the rotations stay consistent.
  ComplexMatrix a = (h + h.adjoint()) * Complex(0.5);
  ComplexMatrix v = ComplexMatrix::identity(n);

  double scale = 0.0;
  for (Complex z : a.entries()) scale += std::norm(z);
  scale = std::sqrt(scale);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (std::sqrt(off) <= 1e-15 * scale || off == 0.0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        // Phase e^{-i arg(apq)} on column q makes the pivot real, then a
        // real Givens rotation annihilates it: J = diag(1, e^{-ia}) * G.
        const Complex ph = std::conj(apq) / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * r, aqq - app);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * ph;
        const Complex jqq = c * ph;

        for (std::size_t k = 0; k < n; ++k) {  // A <- A J
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- J^dagger A
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {  // V <- V J
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  EigenSystem out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]).real();
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, i) = v(k, order[i]);
  }
  return out;
}

std::vector<double> hermitian_eigen(const ComplexMatrix& h) { return hermitian_eigensystem(h).values; }

ComplexMatrix expi_hermitian(const ComplexMatrix& h, double angle) {
  const EigenSystem es = hermitian_eigensystem(h);
  const std::size_t n = h.dim();
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex ph = std::polar(1.0, -angle * es.values[k]);
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vr = es.vectors(r, k) * ph;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(es.vectors(c, k));
    }
  }
  return out;
}

namespace pauli {

const ComplexMatrix& I() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, 1.0}};
  return m;
}
const ComplexMatrix& X() {
  static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
  return m;
}
const ComplexMatrix& Y() {
  static const ComplexMatrix m{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
  return m;
}
const ComplexMatrix& Z() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
  return m;
}

const ComplexMatrix& by_name(char axis) {
  switch (axis) {
    case 'i': case 'I': return I();
    case 'x': case 'X': return X();
    case 'y': case 'Y': return Y();
    case 'z': case 'Z': return Z();
    default: throw Error(ErrorCode::InvalidMatrix, std::string("unknown Pauli axis '") + axis + "'");
  }
}

ComplexMatrix string(std::string_view axes) {
  if (axes.empty()) throw Error(ErrorCode::InvalidMatrix, "empty Pauli string");
  ComplexMatrix out = by_name(axes.front());
  for (std::size_t i = 1; i < axes.size(); ++i) out = kron(out, by_name(axes[i]));
  return out;
}

}  // namespace pauli

ComplexMatrix on_qubit(const ComplexMatrix& op, std::size_t qubit, std::size_t n) {
  if (op.dim() != 2 || qubit >= n) throw Error(ErrorCode::DimensionMismatch, "on_qubit arguments");
  ComplexMatrix out = qubit == 0 ? op : pauli::I();
  for (std::size_t q = 1; q < n; ++q) out = kron(out, q == qubit ? op : pauli::I());
  return out;
}

std::size_t qubits_for_dim(std::size_t dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw Error(ErrorCode::DimensionMismatch, "dimension " + std::to_string(dim) + " is not 2^n");
  }
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

PureState::PureState(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
  n_ = qubits_for_dim(amps_.size());
  double norm2 = 0.0;
  for (Complex z : amps_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::InvalidState, "non-finite amplitude");
    }
    norm2 += std::norm(z);
  }
  if (std::abs(std::sqrt(norm2) - 1.0) > default_tolerances().pure_norm) {
    throw Error(ErrorCode::InvalidState, "state vector is not normalized");
  }
}

PureState PureState::normalized(std::vector<Complex> amplitudes) {
  double norm2 = 0.0;
  for (Complex z : amplitudes) norm2 += std::norm(z);
  if (!(norm2 > 0.0)) throw Error(ErrorCode::InvalidState, "cannot normalize a zero vector");
  const double inv = 1.0 / std::sqrt(norm2);
  for (Complex& z : amplitudes) z *= inv;
  return PureState(std::move(amplitudes));
}

ComplexMatrix PureState::projector() const { return ComplexMatrix::outer(amps_, amps_); }

Complex inner(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "inner product");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m, const Tolerances& tol) {
  const std::size_t n = qubits_for_dim(m.dim());
  if (!m.is_finite()) throw Error(ErrorCode::InvalidMatrix, "density matrix has non-finite entries");
  if (!is_hermitian(m, tol.hermitian)) throw Error(ErrorCode::NonHermitian, "density matrix");
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw Error(ErrorCode::InvalidState, "density matrix trace " + std::to_string(tr.real()) + " != 1");
  }
  const double lo = hermitian_eigen(m).front();
  if (lo < -tol.psd_floor) {
    throw Error(ErrorCode::NotPositive, "density matrix has eigenvalue " + std::to_string(lo));
  }
  return DensityMatrix(std::move(m), n);
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.projector(), psi.qubits());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n_qubits) {
  if (n_qubits == 0) throw Error(ErrorCode::DimensionMismatch, "zero qubits");
  const std::size_t dim = std::size_t{1} << n_qubits;
  return DensityMatrix(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)), n_qubits);
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::from_matrix(kron(a.matrix(), b.matrix()));
}

double expect(const DensityMatrix& rho, const ComplexMatrix& m) {
  if (m.dim() != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "observable dimension");
  if (!is_hermitian(m, default_tolerances().hermitian)) {
    throw Error(ErrorCode::NonHermitianObservable, "observable is not Hermitian");
  }
  Complex acc = 0.0;
  const std::size_t n = m.dim();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) acc += rho(r, c) * m(c, r);
  }
  if (std::abs(acc.imag()) >= 1e-9) {
    throw Error(ErrorCode::NonHermitianObservable, "expectation has imaginary part");
  }
  return acc.real();
}

}  // namespace subwit
