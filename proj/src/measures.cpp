#include "subwit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "subwit/errors.hpp"

namespace subwit {

namespace {

constexpr double kSignTol = 1e-12;
// Eigenvalues below this fraction of the largest are rounding noise; their
// square roots (~1e-8) would otherwise leak into the concurrence.
constexpr double kNoiseFloor = 1e-14;

double floored(double v, double vmax) { return v > kNoiseFloor * vmax ? v : 0.0; }

// Hermitian square root with negative and noise-level eigenvalues set to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const EigenSystem es = hermitian_eigensystem(m);
  const std::size_t n = m.dim();
  const double vmax = std::max(0.0, es.values.back());
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sqrt(floored(es.values[k], vmax));
    if (s == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) out(r, c) += s * es.vectors(r, k) * std::conj(es.vectors(c, k));
    }
  }
  return out;
}

}  // namespace

ConcurrenceReport concurrence(const DensityMatrix& rho) {
  if (rho.qubits() != 2) throw Error(ErrorCode::DimensionMismatch, "concurrence needs a two-qubit state");
  const ComplexMatrix yy = pauli::string("yy");
  const ComplexMatrix tilde = yy * rho.matrix().conj() * yy;
  const ComplexMatrix s = psd_sqrt(rho.matrix());
  ComplexMatrix r = s * tilde * s;
  // Symmetrize against rounding before the Hermitian solver.
  r = 0.5 * (r + r.adjoint());
  std::vector<double> ev = hermitian_eigen(r);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  ConcurrenceReport rep;
  const double vmax = std::max(0.0, ev[0]);
  for (std::size_t i = 0; i < 4; ++i) rep.lambdas[i] = std::sqrt(floored(ev[i], vmax));
  rep.value = std::max(0.0, rep.lambdas[0] - rep.lambdas[1] - rep.lambdas[2] - rep.lambdas[3]);
  return rep;
}

double bound_from_witness(double w) { return std::max(0.0, -2.0 * w); }

AppendixBTerms appendix_b_terms(const AppendixBParams& p) {
  const double s2 = std::sin(p.phi0) * std::sin(p.phi0);
  const double g = s2 * (1.0 + std::cos(2.0 * p.theta));
  // 2 - g = 2 (cos^2 phi0 + sin^2 phi0 sin^2 theta), evaluated in that form
  // so the zero at theta = 0, phi0 = pi/2 is not lost to cancellation.
  const double cp = std::cos(p.phi0);
  const double st = std::sin(p.phi0) * std::sin(p.theta);
  const double rest = cp * cp + st * st;
  const double e2 = p.eps * p.eps;
  AppendixBTerms t;
  t.a = (1.0 - e2 * g) / 4.0;
  t.b1 = 2.0 * rest;
  t.b2 = 2.0 * ((1.0 - e2) + e2 * rest);
  t.b = std::sqrt(std::max(0.0, t.b1 * t.b2)) / 2.0;
  return t;
}

std::variant<double, RadicandNegative> appendix_b_concurrence(const AppendixBParams& params) {
  if (!(params.eps >= 0.0)) throw Error(ErrorCode::OutOfRange, "eps must be >= 0");
  const AppendixBTerms t = appendix_b_terms(params);
  const double e = std::abs(params.eps);
  const double lo = t.a - t.b * e;
  const double hi = t.a + t.b * e;
  if (lo < 0.0 || hi < 0.0) return RadicandNegative{t.a, t.b, params.eps};
  return std::sqrt(hi) - std::sqrt(lo);
}

bool sign_criterion(const AppendixBParams& params) {
  return appendix_b_terms(params).b > kSignTol && params.eps > 0.0;
}

double appendix_b_state_witness(const AppendixBParams& p, double alpha) {
  return alpha - 0.5 - 0.5 * p.eps * std::cos(p.phi0);
}

double appendix_b_subspace_witness(const AppendixBParams& p, double alpha) {
  const double c = std::cos(p.phi0);
  const double s = std::sin(p.phi0) * std::sin(p.theta);
  return alpha - 0.5 - 0.5 * p.eps * std::sqrt(c * c + s * s);
}

double gme_bound_ghz3(const DensityMatrix& rho) {
  if (rho.qubits() != 3) throw Error(ErrorCode::DimensionMismatch, "GHZ bound needs a three-qubit state");
  auto pop = [&](std::size_t i) { return std::max(0.0, rho(i, i).real()); };
  double off = 0.0;
  for (std::size_t k = 1; k <= 3; ++k) off += std::sqrt(pop(k) * pop(7 - k));
  return std::abs(rho(0, 7)) - off;
}

}  // namespace subwit
