#include "subwit/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "linalg.hpp"
#include "subwit/errors.hpp"
#include "subwit/witness.hpp"

namespace subwit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClosedFormTol = 1e-12;

// exp(-i angle/2 (X cos axis + Y sin axis)) on qubit q of two.
ComplexMatrix xy_rotation(double axis, double angle, std::size_t q) {
  const ComplexMatrix n = std::cos(axis) * pauli::X() + std::sin(axis) * pauli::Y();
  return on_qubit(expi_hermitian(n, angle / 2.0), q, 2);
}

ComplexMatrix rz(double angle) { return expi_hermitian(pauli::Z(), angle / 2.0); }

ComplexMatrix heisenberg(const ComplexMatrix& u, const ComplexMatrix& m) { return u.adjoint() * m * u; }

ComplexMatrix basis_rotation(CorrelatorBasis basis) {
  switch (basis) {
    case CorrelatorBasis::ZZ: return ComplexMatrix::identity(4);
    case CorrelatorBasis::XX: {
      const ComplexMatrix r = expi_hermitian(pauli::Y(), -kPi / 4.0);  // V^dag Z V = X
      return kron(r, r);
    }
    case CorrelatorBasis::YY: {
      const ComplexMatrix r = expi_hermitian(pauli::X(), kPi / 4.0);  // V^dag Z V = Y
      return kron(r, r);
    }
  }
  return ComplexMatrix::identity(4);
}

void require_two_qubits(const DensityMatrix& rho) {
  if (rho.qubits() != 2) throw Error(ErrorCode::DimensionMismatch, "protocol expects a two-qubit state");
}

}  // namespace

void validate(const PulseSpec& spec) {
  if (!(spec.coupling_d > 0.0) || !std::isfinite(spec.coupling_d)) {
    throw Error(ErrorCode::OutOfRange, "coupling d must be positive");
  }
  if (!(spec.duration_t >= 0.0) || !std::isfinite(spec.duration_t)) {
    throw Error(ErrorCode::OutOfRange, "duration t must be nonnegative");
  }
  if (!std::isfinite(spec.axis_phase_phi)) throw Error(ErrorCode::OutOfRange, "phase must be finite");
}

bool DecayModel::enabled() const { return T > 0.0 && std::isfinite(T); }

double DecayModel::envelope(double t) const {
  if (!enabled()) return 1.0;
  return std::exp(-std::pow(std::abs(t) / T, exponent_p));
}

void validate(const DecayModel& decay) {
  if (std::isnan(decay.T) || decay.T < 0.0) throw Error(ErrorCode::OutOfRange, "decay time must be >= 0");
  if (!(decay.exponent_p >= 1.0) || !std::isfinite(decay.exponent_p)) {
    throw Error(ErrorCode::OutOfRange, "decay exponent p must be >= 1");
  }
}

ComplexMatrix hhcp_propagator(double d, double t, HhcpSign sign) {
  if (!(d > 0.0) || !(t >= 0.0)) throw Error(ErrorCode::OutOfRange, "hhcp_propagator needs d > 0, t >= 0");
  const double s = sign == HhcpSign::Plus ? 1.0 : -1.0;
  const ComplexMatrix h = 0.25 * d * (pauli::string("xx") + Complex(s) * pauli::string("yy"));
  return expi_hermitian(h, t);
}

ComplexMatrix entangling_gate() { return hhcp_propagator(1.0, kPi / 2.0, HhcpSign::Minus); }

double optimal_time(double d) {
  if (!(d > 0.0)) throw Error(ErrorCode::OutOfRange, "coupling d must be positive");
  return kPi / (2.0 * d);
}

ComplexMatrix correlator_unitary(const PulseSpec& spec) {
  validate(spec);
  const ComplexMatrix h = 0.5 * spec.coupling_d * pauli::string("zz");
  ComplexMatrix free;
  if (spec.pi_pulse_inserted) {
    const ComplexMatrix half = expi_hermitian(h, spec.duration_t / 2.0);
    free = half * pauli::string("yy") * half;
  } else {
    // No refocusing: the readout operator comes out at -phi by itself.
    free = expi_hermitian(h, spec.duration_t);
  }
  return xy_rotation(spec.axis_phase_phi, kPi / 2.0, 0) * free * xy_rotation(kPi / 2.0, kPi / 2.0, 0);
}

ComplexMatrix correlator_operator_closed(const PulseSpec& spec) {
  validate(spec);
  const double dt = spec.coupling_d * spec.duration_t;
  const double phi = spec.pi_pulse_inserted ? spec.axis_phase_phi : -spec.axis_phase_phi;
  const double c = std::cos(dt);
  const double s = std::sin(dt);
  return std::cos(phi) * (c * pauli::string("yi") + s * pauli::string("zz")) +
         std::sin(phi) * (c * pauli::string("zi") - s * pauli::string("yz"));
}

ComplexMatrix correlator_operator_numeric(const PulseSpec& spec) {
  return heisenberg(correlator_unitary(spec), pauli::string("zi"));
}

ComplexMatrix correlator_operator(const PulseSpec& spec, CorrelatorBasis basis) {
  const ComplexMatrix numeric = correlator_operator_numeric(spec);
  if (max_abs_diff(numeric, correlator_operator_closed(spec)) > kClosedFormTol) {
    throw Error(ErrorCode::InvalidMatrix, "correlator operator closed form disagrees with conjugation");
  }
  if (basis == CorrelatorBasis::ZZ) return numeric;
  return heisenberg(basis_rotation(basis), numeric);
}

double correlator_signal(const DensityMatrix& rho, const PulseSpec& spec, const DecayModel& decay,
                         CorrelatorBasis basis) {
  require_two_qubits(rho);
  validate(decay);
  return decay.envelope(spec.duration_t) * expect(rho, correlator_operator(spec, basis));
}

ComplexMatrix hhcp_unitary(double phi, double d, double t) {
  if (!(d > 0.0) || !(t >= 0.0) || !std::isfinite(phi)) {
    throw Error(ErrorCode::OutOfRange, "hhcp readout needs d > 0, t >= 0, finite phi");
  }
  const ComplexMatrix hq = -0.25 * d * (pauli::string("xy") + pauli::string("yx"));
  const ComplexMatrix r = on_qubit(rz(-phi), 0, 2);
  return r * expi_hermitian(hq, t) * r.adjoint();
}

ComplexMatrix hhcp_operator_closed(double phi, double dt) {
  const double c = std::cos(dt);
  const double s = std::sin(dt);
  ComplexMatrix m = (pauli::string("zi") - pauli::string("iz")) + c * (pauli::string("zi") + pauli::string("iz"));
  m += (std::cos(phi) * s) * (pauli::string("xx") - pauli::string("yy"));
  m -= (std::sin(phi) * s) * (pauli::string("xy") + pauli::string("yx"));
  return 0.5 * m;
}

ComplexMatrix hhcp_operator_numeric(double phi, double d, double t) {
  return heisenberg(hhcp_unitary(phi, d, t), pauli::string("zi"));
}

double hhcp_signal(const DensityMatrix& rho, double phi, double d, double t) {
  require_two_qubits(rho);
  return expect(rho, hhcp_operator_numeric(phi, d, t));
}

double hhcp_offset(const DensityMatrix& rho) {
  require_two_qubits(rho);
  return 0.5 * expect(rho, pauli::string("zi") - pauli::string("iz"));
}

namespace {

struct EchoModel {
  double nu;
  double p;
  // params: A, log T2, phase
  double value(double tau, const std::array<double, 3>& x) const {
    const double T2 = std::exp(x[1]);
    return x[0] * std::cos(2.0 * kPi * nu * tau - x[2]) * std::exp(-std::pow(tau / T2, p));
  }
  std::array<double, 3> gradient(double tau, const std::array<double, 3>& x) const {
    const double T2 = std::exp(x[1]);
    const double r = tau / T2;
    const double env = std::exp(-std::pow(r, p));
    const double arg = 2.0 * kPi * nu * tau - x[2];
    const double c = std::cos(arg);
    // d/d log T2 of exp(-(tau/T2)^p) = p (tau/T2)^p env
    return {c * env, x[0] * c * env * p * std::pow(r, p), x[0] * std::sin(arg) * env};
  }
};

struct FitOutcome {
  std::array<double, 3> x{};
  double sse = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

FitOutcome levenberg_marquardt(const EchoModel& model, const std::vector<double>& taus,
                               const std::vector<double>& y, std::array<double, 3> x, std::size_t nparams) {
  const std::size_t m = taus.size();
  auto sse_of = [&](const std::array<double, 3>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = y[i] - model.value(taus[i], p);
      s += r * r;
    }
    return s;
  };
  double sse = sse_of(x);
  double lambda = 1e-3;
  FitOutcome out;
  for (int it = 0; it < 500; ++it) {
    out.iterations = it + 1;
    detail::RealMatrix jtj(nparams, nparams);
    std::vector<double> jtr(nparams, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const auto g = model.gradient(taus[i], x);
      const double r = y[i] - model.value(taus[i], x);
      for (std::size_t a = 0; a < nparams; ++a) {
        jtr[a] += g[a] * r;
        for (std::size_t b = 0; b < nparams; ++b) jtj(a, b) += g[a] * g[b];
      }
    }
    bool accepted = false;
    double rel_step = 0.0;
    while (lambda < 1e16) {
      detail::RealMatrix sys = jtj;
      for (std::size_t a = 0; a < nparams; ++a) sys(a, a) += lambda * std::max(jtj(a, a), 1e-300);
      auto chol = detail::cholesky(sys);
      if (!chol) {
        lambda *= 10.0;
        continue;
      }
      const auto step = detail::cholesky_solve(*chol, jtr);
      std::array<double, 3> trial = x;
      rel_step = 0.0;
      for (std::size_t a = 0; a < nparams; ++a) {
        trial[a] += step[a];
        rel_step = std::max(rel_step, std::abs(step[a]) / (std::abs(x[a]) + 1e-12));
      }
      const double tsse = sse_of(trial);
      if (tsse <= sse) {
        x = trial;
        sse = tsse;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted || rel_step < 1e-14) {
      out.converged = true;
      break;
    }
  }
  out.x = x;
  out.sse = sse;
  return out;
}

}  // namespace

EchoScanResult fit_echo(const std::vector<double>& taus, const std::vector<double>& signals, double nu,
                        double exponent_p) {
  if (taus.size() != signals.size()) throw Error(ErrorCode::LengthMismatch, "taus and signals differ in length");
  if (taus.size() < 4) throw Error(ErrorCode::OutOfRange, "echo fit needs at least 4 points");
  if (!(exponent_p >= 1.0)) throw Error(ErrorCode::OutOfRange, "decay exponent p must be >= 1");
  if (!std::isfinite(nu) || nu < 0.0) throw Error(ErrorCode::OutOfRange, "modulation frequency must be >= 0");
  const double tau_max = *std::max_element(taus.begin(), taus.end());
  if (!(tau_max > 0.0)) throw Error(ErrorCode::OutOfRange, "echo scan needs a positive delay");

  const EchoModel model{nu, exponent_p};
  const bool degenerate = nu == 0.0;
  const std::size_t nparams = degenerate ? 2 : 3;
  double peak = 0.0;
  for (double s : signals) peak = std::max(peak, std::abs(s));

  FitOutcome best;
  const std::vector<double> t_scales{0.25, 0.5, 1.0, 2.0, 4.0};
  const std::vector<double> phases = degenerate ? std::vector<double>{0.0}
                                                : std::vector<double>{0.0, kPi / 2.0, kPi, 3.0 * kPi / 2.0};
  for (double ts : t_scales) {
    for (double ph : phases) {
      const std::array<double, 3> x0{peak > 0.0 ? peak : 1.0, std::log(ts * tau_max / 2.0), ph};
      FitOutcome f = levenberg_marquardt(model, taus, signals, x0, nparams);
      if (std::isfinite(f.sse) && f.sse < best.sse) best = f;
    }
  }
  if (!best.converged || !std::isfinite(best.sse)) {
    throw Error(ErrorCode::FitDidNotConverge, "echo fit did not converge");
  }
  double amp = best.x[0];
  double phase = best.x[2];
  if (amp < 0.0 && !degenerate) {
    amp = -amp;
    phase += kPi;
  }
  EchoScanResult r;
  r.taus = taus;
  r.signals = signals;
  r.fitted_amplitude = amp;
  r.fitted_T2 = std::exp(best.x[1]);
  r.fitted_phase = wrap_phase(phase);
  r.residual_norm = std::sqrt(best.sse);
  r.phase_degenerate = degenerate;
  r.iterations = best.iterations;
  return r;
}

EchoScanResult echo_scan(const DensityMatrix& rho0, const SubspaceSpec& spec, double nu, const DecayModel& decay,
                         const std::vector<double>& taus) {
  if (spec.size() != 2) throw Error(ErrorCode::InvalidSpec, "echo scan is defined for two-label subspaces");
  validate(decay);
  if (!decay.enabled()) throw Error(ErrorCode::OutOfRange, "echo scan needs a finite decay time");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] >= 0.0) || (i > 0 && taus[i] < taus[i - 1])) {
      throw Error(ErrorCode::OutOfRange, "echo delays must be nonnegative and ascending");
    }
  }
  const CoherenceTable table = coherence_table(rho0, spec);
  std::size_t q = 0;
  while (spec.bit(0, q) == spec.bit(1, q)) ++q;
  const double sign = spec.bit(1, q) ? 1.0 : -1.0;

  std::vector<double> signals(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    std::vector<double> theta(spec.qubits(), 0.0);
    theta[q] = sign * 2.0 * kPi * nu * taus[i];
    signals[i] = 2.0 * coherence_sum(spec, table, PhaseSetting(theta)) * decay.envelope(taus[i]);
  }
  return fit_echo(taus, signals, nu, decay.exponent_p);
}

std::string to_string(LifetimeOutcome outcome) {
  switch (outcome) {
    case LifetimeOutcome::Witnessed: return "witnessed";
    case LifetimeOutcome::Unwitnessed: return "unwitnessed";
    case LifetimeOutcome::AlwaysWitnessed: return "always-witnessed";
  }
  return "unknown";
}

Lifetime lifetime_tau_star(double T2, double p, double C0, double alpha, double P) {
  if (!(T2 > 0.0) || !(p >= 1.0) || !(C0 >= 0.0)) {
    throw Error(ErrorCode::OutOfRange, "lifetime needs T2 > 0, p >= 1, C0 >= 0");
  }
  if (P >= alpha) return {LifetimeOutcome::AlwaysWitnessed, std::numeric_limits<double>::infinity()};
  const double gap = alpha - P;
  if (C0 <= gap) return {LifetimeOutcome::Unwitnessed, 0.0};
  return {LifetimeOutcome::Witnessed, T2 * std::pow(std::log(C0 / gap), 1.0 / p)};
}

double coherence_for_lifetime(double tau_star, double T2, double p, double alpha, double P) {
  if (!(T2 > 0.0) || !(p >= 1.0) || !(tau_star >= 0.0) || !(P < alpha)) {
    throw Error(ErrorCode::OutOfRange, "coherence_for_lifetime needs T2 > 0, p >= 1, tau* >= 0, P < alpha");
  }
  return (alpha - P) * std::exp(std::pow(tau_star / T2, p));
}

double sample_shots(double expectation, std::int64_t shots, std::uint64_t seed) {
  if (!(std::abs(expectation) <= 1.0 + 1e-12)) throw Error(ErrorCode::OutOfRange, "expectation outside [-1, 1]");
  if (shots < 1) throw Error(ErrorCode::OutOfRange, "shots must be >= 1");
  const double p_plus = std::clamp((1.0 + expectation) / 2.0, 0.0, 1.0);
  std::mt19937_64 rng(seed);
  std::binomial_distribution<std::int64_t> draw(shots, p_plus);
  const std::int64_t plus = draw(rng);
  return static_cast<double>(2 * plus - shots) / static_cast<double>(shots);
}

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index) { return seed ^ index; }

double sample_fidelity(double fidelity, std::int64_t shots, std::uint64_t seed) {
  return 0.5 * (1.0 + sample_shots(2.0 * fidelity - 1.0, shots, seed));
}

namespace {

DensityMatrix dephase(const DensityMatrix& rho, const Dephasing& ch) {
  const std::size_t n = rho.qubits();
  if (ch.gamma.size() != 1 && ch.gamma.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "dephasing needs one rate or one per qubit");
  }
  ComplexMatrix m = rho.matrix();
  const std::size_t dim = m.dim();
  for (std::size_t q = 0; q < n; ++q) {
    const double g = ch.gamma.size() == 1 ? ch.gamma[0] : ch.gamma[q];
    if (!(g >= 0.0 && g <= 1.0)) throw Error(ErrorCode::OutOfRange, "dephasing rate outside [0, 1]");
    // Z rho Z flips the sign of entries whose row and column differ on q,
    // so the map scales those entries by 1 - g.
    const std::size_t mask = std::size_t{1} << (n - 1 - q);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        if (((r ^ c) & mask) != 0) m(r, c) *= (1.0 - g);
      }
    }
  }
  return DensityMatrix::from_matrix(std::move(m));
}

}  // namespace

DensityMatrix apply_channel(const DensityMatrix& rho, const Channel& channel) {
  if (const auto* ch = std::get_if<Dephasing>(&channel)) return dephase(rho, *ch);
  if (const auto* ch = std::get_if<Depolarizing>(&channel)) {
    if (!(ch->p >= 0.0 && ch->p <= 1.0)) throw Error(ErrorCode::OutOfRange, "depolarizing p outside [0, 1]");
    const std::size_t dim = rho.dim();
    ComplexMatrix m = (1.0 - ch->p) * rho.matrix() + (ch->p / static_cast<double>(dim)) * ComplexMatrix::identity(dim);
    return DensityMatrix::from_matrix(std::move(m));
  }
  const auto& lz = std::get<LocalZ>(channel);
  if (lz.angles.size() != rho.qubits()) throw Error(ErrorCode::DimensionMismatch, "local_z needs one angle per qubit");
  ComplexMatrix u = rz(lz.angles[0]);
  for (std::size_t q = 1; q < lz.angles.size(); ++q) u = kron(u, rz(lz.angles[q]));
  return DensityMatrix::from_matrix(conjugate(rho.matrix(), u));
}

double init_polarization(int N, double p1, double lam) {
  if (N < 1 || !(p1 > 0.0 && p1 <= 1.0) || !(lam >= 0.0 && lam < 1.0)) {
    throw Error(ErrorCode::OutOfRange, "init_purity needs N >= 1, p1 in (0,1], lam in [0,1)");
  }
  return 1.0 - (1.0 - p1) * std::pow(lam, N - 1);
}

DensityMatrix init_purity(int N, double p1, double lam) {
  const double q = init_polarization(N, p1, lam);
  const DensityMatrix one = DensityMatrix::from_matrix(0.5 * (pauli::I() + q * pauli::Z()));
  return tensor(one, one);
}

}  // namespace subwit
