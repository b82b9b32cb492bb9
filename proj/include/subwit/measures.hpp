// measures.hpp
// Two-qubit concurrence (Wootters), witness-derived concurrence bounds, the
// closed-form concurrence of the Bell-subspace family, and the three-qubit
// GHZ lower bound on genuine multipartite concurrence.

#pragma once

#include <array>
#include <variant>

#include "subwit/qcore.hpp"

namespace subwit {

struct ConcurrenceReport {
  double value = 0.0;
  std::array<double, 4> lambdas{};  // descending, nonnegative
};

// lambda_i = sqrt(eig(sqrt(rho) rho~ sqrt(rho))), rho~ = (Y x Y) rho* (Y x Y).
// Throws DimensionMismatch unless rho is a two-qubit state.
ConcurrenceReport concurrence(const DensityMatrix& rho);

// max(0, -2 w)
double bound_from_witness(double w);

struct AppendixBParams {
  double eps = 0.0;
  double theta = 0.0;
  double phi0 = 0.0;
};

struct AppendixBTerms {
  double a = 0.0;
  double b = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

// a = (1 - eps^2 sin^2 phi0 (1 + cos 2theta)) / 4, b = sqrt(b1 b2) / 2,
// b1 = 2 - sin^2 phi0 (1 + cos 2theta), b2 = 2 - eps^2 sin^2 phi0 (1 + cos 2theta).
AppendixBTerms appendix_b_terms(const AppendixBParams& params);

struct RadicandNegative {
  double a = 0.0;
  double b = 0.0;
  double eps = 0.0;
};

// sqrt(a + b|eps|) - sqrt(a - b|eps|) as printed, or the diagnostic when
// a - b|eps| < 0. Throws OutOfRange for eps < 0.
std::variant<double, RadicandNegative> appendix_b_concurrence(const AppendixBParams& params);

// b > 0 and eps > 0.
bool sign_criterion(const AppendixBParams& params);

// Analytic witness values of rho_phi for the Phi+ target and subspace.
double appendix_b_state_witness(const AppendixBParams& params, double alpha = 0.5);
double appendix_b_subspace_witness(const AppendixBParams& params, double alpha = 0.5);

// |<000|rho|111>| - [sqrt(r001 r110) + sqrt(r010 r101) + sqrt(r011 r100)].
// Throws DimensionMismatch unless rho is a three-qubit state.
double gme_bound_ghz3(const DensityMatrix& rho);

}  // namespace subwit
