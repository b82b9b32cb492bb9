#include "subwit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "linalg.hpp"
#include "subwit/errors.hpp"

namespace subwit {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::OutOfRange, "alpha must lie in (0, 1)");
}

void require_table(const SubspaceSpec& spec, const CoherenceTable& table) {
  if (table.d != spec.size() || table.coherences.size() != spec.pair_count()) {
    throw Error(ErrorCode::IncompleteReconstruction, "coherence table does not cover the subspace");
  }
}

// Relative phase coefficients delta_p,m = k_m - j_m per pair, and weights.
struct PairModel {
  std::vector<std::vector<int>> delta;
  std::vector<double> weight;
  std::vector<Complex> rho;
};

PairModel pair_model(const SubspaceSpec& spec, const CoherenceTable& table) {
  PairModel pm;
  for (auto [j, k] : ordered_pairs(spec.size())) {
    std::vector<int> d(spec.qubits());
    for (std::size_t m = 0; m < spec.qubits(); ++m) {
      d[m] = static_cast<int>(spec.bit(k, m)) - static_cast<int>(spec.bit(j, m));
    }
    pm.delta.push_back(std::move(d));
    pm.weight.push_back(2.0 * spec.amplitude(j) * spec.amplitude(k));
    pm.rho.push_back(table.at(j, k));
  }
  return pm;
}

struct Evaluation {
  double value = 0.0;
  std::vector<double> grad;
  detail::RealMatrix hess;
};

Evaluation evaluate(const PairModel& pm, const std::vector<double>& theta) {
  const std::size_t n = theta.size();
  Evaluation ev{0.0, std::vector<double>(n, 0.0), detail::RealMatrix(n, n)};
  for (std::size_t p = 0; p < pm.rho.size(); ++p) {
    double arg = 0.0;
    for (std::size_t m = 0; m < n; ++m) arg += pm.delta[p][m] * theta[m];
    const Complex z = pm.rho[p] * std::polar(1.0, -arg);
    const double w = pm.weight[p];
    ev.value += w * z.real();
    for (std::size_t m = 0; m < n; ++m) {
      if (pm.delta[p][m] == 0) continue;
      ev.grad[m] += w * pm.delta[p][m] * z.imag();
      for (std::size_t l = 0; l < n; ++l) {
        ev.hess(m, l) -= w * pm.delta[p][m] * pm.delta[p][l] * z.real();
      }
    }
  }
  return ev;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct AscentResult {
  double value = 0.0;
  std::vector<double> theta;
  bool converged = false;
};

// Levenberg-damped Newton ascent: solve (-H + mu I) s = g, accept the step
// when C does not decrease, otherwise raise mu.
AscentResult ascend(const PairModel& pm, std::vector<double> theta, const OptimizerOptions& opt) {
  const std::size_t n = theta.size();
  double scale = 0.0;
  for (std::size_t p = 0; p < pm.rho.size(); ++p) scale += pm.weight[p] * std::abs(pm.rho[p]);
  const double grad_tol = std::max(1e-13, 1e-12 * scale);

  Evaluation ev = evaluate(pm, theta);
  double mu = 1e-3 * std::max(scale, 1e-300);
  AscentResult res{ev.value, theta, false};
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (inf_norm(ev.grad) <= grad_tol) {
      res.converged = true;
      break;
    }
    bool stepped = false;
    for (int tries = 0; tries < 60 && !stepped; ++tries) {
      detail::RealMatrix sys(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) sys(i, j) = -ev.hess(i, j);
        sys(i, i) += mu;
      }
      auto chol = detail::cholesky(sys);
      if (!chol) {
        mu *= 10.0;
        continue;
      }
      const std::vector<double> step = detail::cholesky_solve(*chol, ev.grad);
      std::vector<double> trial = theta;
      for (std::size_t i = 0; i < n; ++i) trial[i] += step[i];
      Evaluation tev = evaluate(pm, trial);
      if (tev.value >= ev.value) {
        const double gain = tev.value - ev.value;
        theta = std::move(trial);
        ev = std::move(tev);
        mu = std::max(mu / 3.0, 1e-12 * std::max(scale, 1e-300));
        stepped = true;
        if (gain <= opt.tolerance && inf_norm(ev.grad) <= std::sqrt(grad_tol)) {
          res.converged = true;
          it = opt.max_iterations;
        }
      } else {
        mu *= 10.0;
      }
    }
    if (!stepped) {
      // No ascent direction improves C at machine precision.
      res.converged = inf_norm(ev.grad) <= std::sqrt(grad_tol);
      break;
    }
  }
  res.value = ev.value;
  res.theta = std::move(theta);
  return res;
}

// Per-qubit setting making phi_k - phi_j = arg(rho_jk) for a d = 2 spec.
PhaseSetting closed_form_setting(const SubspaceSpec& spec, Complex rho01) {
  std::vector<double> theta(spec.qubits(), 0.0);
  for (std::size_t m = 0; m < spec.qubits(); ++m) {
    const int delta = static_cast<int>(spec.bit(1, m)) - static_cast<int>(spec.bit(0, m));
    if (delta != 0) {
      theta[m] = delta * std::arg(rho01);
      break;
    }
  }
  return PhaseSetting(std::move(theta));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

Complex CoherenceTable::at(std::size_t j, std::size_t k) const { return coherences[pair_index(d, j, k)]; }

std::vector<std::pair<std::size_t, std::size_t>> CoherenceTable::cauchy_schwarz_violations(double tol) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (!populations) return out;
  for (auto [j, k] : ordered_pairs(d)) {
    const double bound = std::sqrt(std::max(0.0, (*populations)[j] * (*populations)[k]));
    if (std::abs(at(j, k)) > bound + tol) out.emplace_back(j, k);
  }
  return out;
}

std::size_t pair_index(std::size_t d, std::size_t j, std::size_t k) {
  if (!(j < k && k < d)) throw Error(ErrorCode::OutOfRange, "pair index requires j < k < d");
  return j * d - j * (j + 1) / 2 + (k - j - 1);
}

std::vector<std::pair<std::size_t, std::size_t>> ordered_pairs(std::size_t d) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j + 1; k < d; ++k) out.emplace_back(j, k);
  }
  return out;
}

CoherenceTable coherence_table(const DensityMatrix& rho, const SubspaceSpec& spec) {
  if (rho.qubits() != spec.qubits()) throw Error(ErrorCode::DimensionMismatch, "spec vs density matrix qubits");
  CoherenceTable t;
  t.d = spec.size();
  for (auto [j, k] : ordered_pairs(t.d)) t.coherences.push_back(rho(spec.index(j), spec.index(k)));
  std::vector<double> pops(t.d);
  for (std::size_t k = 0; k < t.d; ++k) pops[k] = rho(spec.index(k), spec.index(k)).real();
  t.populations = std::move(pops);
  return t;
}

std::string to_string(WitnessMode mode) {
  switch (mode) {
    case WitnessMode::State: return "state";
    case WitnessMode::SubspaceConstrained: return "subspace-constrained";
    case WitnessMode::SubspaceMagnitudeSum: return "subspace-magnitude-sum";
  }
  return "unknown";
}

WitnessMode parse_witness_mode(const std::string& name) {
  if (name == "state") return WitnessMode::State;
  if (name == "constrained" || name == "subspace-constrained") return WitnessMode::SubspaceConstrained;
  if (name == "magnitude-sum" || name == "subspace-magnitude-sum") return WitnessMode::SubspaceMagnitudeSum;
  throw Error(ErrorCode::ParseError, "unknown witness mode '" + name + "'");
}

std::string witness_csv_header() { return "mode,alpha,P,C,fidelity,value"; }

std::string to_csv_row(const WitnessReport& r) {
  return to_string(r.mode) + "," + fmt(r.alpha) + "," + fmt(r.population) + "," + fmt(r.coherence) + "," +
         fmt(r.fidelity) + "," + fmt(r.value);
}

double fidelity(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim()) throw Error(ErrorCode::DimensionMismatch, "fidelity: state dimensions differ");
  Complex acc = 0.0;
  const std::size_t n = rho.dim();
  for (std::size_t r = 0; r < n; ++r) {
    if (psi[r] == Complex(0.0)) continue;
    Complex row = 0.0;
    for (std::size_t c = 0; c < n; ++c) row += rho(r, c) * psi[c];
    acc += std::conj(psi[r]) * row;
  }
  return acc.real();
}

double population(const SubspaceSpec& spec, const CoherenceTable& table) {
  if (!table.populations) throw Error(ErrorCode::IncompleteReconstruction, "table has no populations");
  double p = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) p += spec.amplitude(k) * spec.amplitude(k) * (*table.populations)[k];
  return p;
}

double coherence_sum(const SubspaceSpec& spec, const CoherenceTable& table, const PhaseSetting& phases) {
  require_table(spec, table);
  const std::vector<double> phi = induced_phases(spec, phases);
  double c = 0.0;
  for (auto [j, k] : ordered_pairs(spec.size())) {
    const double rel = phi[k] - phi[j];
    const Complex r = table.at(j, k);
    c += 2.0 * spec.amplitude(j) * spec.amplitude(k) * (r.real() * std::cos(rel) + r.imag() * std::sin(rel));
  }
  return c;
}

double coherence_magnitude_sum(const SubspaceSpec& spec, const CoherenceTable& table) {
  require_table(spec, table);
  double c = 0.0;
  for (auto [j, k] : ordered_pairs(spec.size())) {
    c += 2.0 * spec.amplitude(j) * spec.amplitude(k) * std::abs(table.at(j, k));
  }
  return c;
}

Decomposition decompose(const DensityMatrix& rho, const SubspaceSpec& spec, const PhaseSetting& phases) {
  const CoherenceTable t = coherence_table(rho, spec);
  return {population(spec, t), coherence_sum(spec, t, phases)};
}

WitnessReport state_witness(const DensityMatrix& rho, const SubspaceSpec& spec, const PhaseSetting& phases,
                            double alpha) {
  require_alpha(alpha);
  const Decomposition dc = decompose(rho, spec, phases);
  WitnessReport r;
  r.alpha = alpha;
  r.fidelity = fidelity(rho, target_state(spec, phases));
  r.population = dc.population;
  r.coherence = dc.coherence;
  r.value = alpha - r.fidelity;
  r.mode = WitnessMode::State;
  r.phases = phases;
  return r;
}

CoherenceMaximum maximize_coherence(const SubspaceSpec& spec, const CoherenceTable& table,
                                    const OptimizerOptions& options) {
  require_table(spec, table);
  if (spec.size() == 2) {
    const Complex r = table.at(0, 1);
    return {2.0 * spec.amplitude(0) * spec.amplitude(1) * std::abs(r), closed_form_setting(spec, r), true};
  }
  const PairModel pm = pair_model(spec, table);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);

  CoherenceMaximum best;
  bool have = false;
  const int starts = std::max(1, options.starts);
  for (int s = 0; s < starts; ++s) {
    std::vector<double> theta(spec.qubits(), 0.0);
    if (s > 0) {
      for (double& t : theta) t = uni(rng);
    }
    AscentResult a = ascend(pm, std::move(theta), options);
    if (!have || a.value > best.value) {
      best = {a.value, PhaseSetting(a.theta), a.converged};
      have = true;
    }
  }
  return best;
}

WitnessReport subspace_witness(const SubspaceSpec& spec, const CoherenceTable& table, double population_value,
                               double alpha, WitnessMode mode, const OptimizerOptions& options) {
  require_alpha(alpha);
  WitnessReport r;
  r.alpha = alpha;
  r.mode = mode;
  r.population = population_value;
  switch (mode) {
    case WitnessMode::SubspaceConstrained: {
      const CoherenceMaximum m = maximize_coherence(spec, table, options);
      r.coherence = m.value;
      r.phases = m.phases;
      r.converged = m.converged;
      break;
    }
    case WitnessMode::SubspaceMagnitudeSum:
      r.coherence = coherence_magnitude_sum(spec, table);
      if (spec.size() == 2) r.phases = closed_form_setting(spec, table.at(0, 1));
      break;
    case WitnessMode::State:
      throw Error(ErrorCode::OutOfRange, "subspace_witness needs a subspace mode");
  }
  r.fidelity = r.population + r.coherence;
  r.value = alpha - r.fidelity;
  return r;
}

WitnessReport subspace_witness(const DensityMatrix& rho, const SubspaceSpec& spec, double alpha, WitnessMode mode,
                               const OptimizerOptions& options) {
  const CoherenceTable t = coherence_table(rho, spec);
  return subspace_witness(spec, t, population(spec, t), alpha, mode, options);
}

namespace {

using Qubit = std::array<Complex, 2>;

// <psi|chi_1 ... chi_n> restricted to the spec's support.
Complex overlap(const SubspaceSpec& spec, const std::vector<Qubit>& product) {
  Complex acc = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    Complex term = spec.amplitude(k);
    for (std::size_t m = 0; m < spec.qubits(); ++m) term *= product[m][spec.bit(k, m) ? 1 : 0];
    acc += term;
  }
  return acc;
}

// One sweep of single-qubit updates; returns |overlap|^2 afterwards.
double sweep(const SubspaceSpec& spec, std::vector<Qubit>& product) {
  for (std::size_t m = 0; m < spec.qubits(); ++m) {
    Qubit v{0.0, 0.0};
    for (std::size_t k = 0; k < spec.size(); ++k) {
      Complex term = spec.amplitude(k);
      for (std::size_t l = 0; l < spec.qubits(); ++l) {
        if (l != m) term *= product[l][spec.bit(k, l) ? 1 : 0];
      }
      v[spec.bit(k, m) ? 1 : 0] += term;
    }
    const double norm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    if (norm > 0.0) product[m] = {std::conj(v[0]) / norm, std::conj(v[1]) / norm};
  }
  return std::norm(overlap(spec, product));
}

}  // namespace

std::vector<double> alternating_overlap_trace(const SubspaceSpec& spec, std::vector<std::array<Complex, 2>> product,
                                              int sweeps) {
  if (product.size() != spec.qubits()) throw Error(ErrorCode::DimensionMismatch, "product state size");
  for (auto& q : product) {
    const double norm = std::sqrt(std::norm(q[0]) + std::norm(q[1]));
    if (!(norm > 0.0)) throw Error(ErrorCode::InvalidState, "product factor has zero norm");
    q[0] /= norm;
    q[1] /= norm;
  }
  std::vector<double> trace{std::norm(overlap(spec, product))};
  for (int s = 0; s < sweeps; ++s) trace.push_back(sweep(spec, product));
  return trace;
}

AlphaEstimate alpha_separable(const SubspaceSpec& spec, int restarts, double tol, std::uint64_t seed) {
  if (restarts < 1) throw Error(ErrorCode::OutOfRange, "restarts must be >= 1");
  constexpr int kMaxSweeps = 20000;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  AlphaEstimate best;
  for (int r = 0; r < restarts; ++r) {
    std::vector<Qubit> product(spec.qubits());
    for (auto& q : product) {
      q = {Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng))};
      const double norm = std::sqrt(std::norm(q[0]) + std::norm(q[1]));
      q[0] /= norm;
      q[1] /= norm;
    }
    double prev = std::norm(overlap(spec, product));
    bool converged = false;
    int used = 0;
    for (int s = 0; s < kMaxSweeps; ++s) {
      const double cur = sweep(spec, product);
      used = s + 1;
      if (cur - prev <= tol) {
        prev = std::max(prev, cur);
        converged = true;
        break;
      }
      prev = cur;
    }
    if (r == 0 || prev > best.alpha) best = {prev, converged, used};
  }
  return best;
}

}  // namespace subwit
