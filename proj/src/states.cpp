#include "subwit/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "subwit/errors.hpp"

namespace subwit {

namespace {

constexpr double kAmplitudeNormTol = 1e-12;

std::size_t label_to_index(const std::string& label) {
  std::size_t idx = 0;
  for (char c : label) idx = (idx << 1) | (c == '1' ? 1u : 0u);
  return idx;
}

std::string index_to_label(std::size_t idx, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t q = 0; q < n; ++q) {
    if ((idx >> (n - 1 - q)) & 1u) s[q] = '1';
  }
  return s;
}

}  // namespace

SubspaceSpec::SubspaceSpec(std::vector<std::string> labels, std::vector<double> amplitudes)
    : labels_(std::move(labels)), amps_(std::move(amplitudes)) {
  if (labels_.size() < 2) throw Error(ErrorCode::InvalidSpec, "subspace needs at least two labels");
  if (labels_.size() != amps_.size()) throw Error(ErrorCode::InvalidSpec, "label/amplitude count mismatch");
  n_ = labels_.front().size();
  if (n_ == 0 || n_ > 16) throw Error(ErrorCode::InvalidSpec, "label length must be in 1..16");
  std::set<std::string> seen;
  double norm2 = 0.0;
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    const std::string& l = labels_[k];
    if (l.size() != n_) throw Error(ErrorCode::InvalidSpec, "label '" + l + "' has wrong length");
    if (!std::all_of(l.begin(), l.end(), [](char c) { return c == '0' || c == '1'; })) {
      throw Error(ErrorCode::InvalidSpec, "label '" + l + "' is not a bitstring");
    }
    if (!seen.insert(l).second) throw Error(ErrorCode::InvalidSpec, "duplicate label '" + l + "'");
    if (!(amps_[k] > 0.0) || !std::isfinite(amps_[k])) {
      throw Error(ErrorCode::InvalidSpec, "amplitudes must be positive and finite");
    }
    norm2 += amps_[k] * amps_[k];
    indices_.push_back(label_to_index(l));
  }
  if (std::abs(norm2 - 1.0) > kAmplitudeNormTol) {
    throw Error(ErrorCode::InvalidSpec, "sum of squared amplitudes is not 1");
  }
}

std::string SubspaceSpec::to_text() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t k = 0; k < size(); ++k) os << labels_[k] << ' ' << amps_[k] << '\n';
  return os.str();
}

SubspaceSpec parse_subspace_spec(std::string_view text) {
  std::vector<std::string> labels;
  std::vector<double> amps;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string label;
    if (!(ls >> label)) continue;
    double a = 0.0;
    if (!(ls >> a)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected `label amplitude`");
    }
    std::string extra;
    if (ls >> extra) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": trailing data");
    labels.push_back(label);
    amps.push_back(a);
  }
  return SubspaceSpec(std::move(labels), std::move(amps));
}

SubspaceSpec load_subspace_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot open spec file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_subspace_spec(buf.str());
}

SubspaceSpec bell_spec(BellBranch branch) {
  const double a = 1.0 / std::numbers::sqrt2;
  if (branch == BellBranch::Phi) return SubspaceSpec({"00", "11"}, {a, a});
  return SubspaceSpec({"01", "10"}, {a, a});
}

SubspaceSpec ghz_spec(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidSpec, "GHZ needs n >= 2");
  const double a = 1.0 / std::numbers::sqrt2;
  return SubspaceSpec({std::string(n, '0'), std::string(n, '1')}, {a, a});
}

SubspaceSpec w_spec(std::size_t n) { return dicke(n, 1); }

SubspaceSpec dicke(std::size_t n, std::size_t k) {
  if (n < 2 || k == 0 || k >= n) {
    throw Error(ErrorCode::InvalidExcitation, "Dicke state needs 0 < k < n (n=" + std::to_string(n) +
                                                  ", k=" + std::to_string(k) + ")");
  }
  if (n > 16) throw Error(ErrorCode::InvalidSpec, "Dicke state limited to n <= 16");
  std::vector<std::string> labels;
  for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
    if (static_cast<std::size_t>(std::popcount(idx)) == k) labels.push_back(index_to_label(idx, n));
  }
  const std::vector<double> amps(labels.size(), 1.0 / std::sqrt(static_cast<double>(labels.size())));
  return SubspaceSpec(std::move(labels), amps);
}

double wrap_phase(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

PhaseSetting::PhaseSetting(std::vector<double> thetas) : thetas_(std::move(thetas)) {
  for (double& t : thetas_) {
    if (!std::isfinite(t)) throw Error(ErrorCode::OutOfRange, "phase must be finite");
    t = wrap_phase(t);
  }
}

double induced_phase(const SubspaceSpec& spec, std::size_t k, const PhaseSetting& phases) {
  if (phases.size() != spec.qubits()) {
    throw Error(ErrorCode::DimensionMismatch, "phase setting has " + std::to_string(phases.size()) +
                                                  " entries for " + std::to_string(spec.qubits()) + " qubits");
  }
  double phi = 0.0;
  for (std::size_t m = 0; m < spec.qubits(); ++m) {
    if (spec.bit(k, m)) phi += phases[m];
  }
  return phi;
}

std::vector<double> induced_phases(const SubspaceSpec& spec, const PhaseSetting& phases) {
  std::vector<double> out(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) out[k] = induced_phase(spec, k, phases);
  return out;
}

PureState bell(const BellParams& params) {
  if (!std::isfinite(params.phi)) throw Error(ErrorCode::OutOfRange, "Bell phase must be finite");
  std::vector<Complex> amps(4, 0.0);
  const double a = 1.0 / std::numbers::sqrt2;
  const std::size_t k = params.branch == BellBranch::Phi ? 0 : 1;
  amps[k] = a;
  amps[3 - k] = std::polar(a, -params.phi);
  return PureState(std::move(amps));
}

PureState target_state(const SubspaceSpec& spec, const PhaseSetting& phases) {
  const std::vector<double> phi = induced_phases(spec, phases);
  std::vector<Complex> amps(std::size_t{1} << spec.qubits(), 0.0);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    amps[spec.index(k)] = std::polar(spec.amplitude(k), -(phi[k] - phi[0]));
  }
  return PureState(std::move(amps));
}

DensityMatrix rho_phi(double eps, double theta, double phi0) {
  if (!std::isfinite(eps) || !std::isfinite(theta) || !std::isfinite(phi0)) {
    throw Error(ErrorCode::OutOfRange, "rho_phi parameters must be finite");
  }
  // In the {|00>, |11>} basis: Phi_x = diag(1,-1), Phi_y = [[0,i],[-i,0]],
  // Phi_z = [[0,1],[1,0]].
  const double nx = std::sin(phi0) * std::cos(theta);
  const double ny = std::sin(phi0) * std::sin(theta);
  const double nz = std::cos(phi0);
  ComplexMatrix m(4);
  m(0, 0) = 0.5 + 0.5 * eps * nx;
  m(3, 3) = 0.5 - 0.5 * eps * nx;
  m(0, 3) = 0.5 * eps * Complex(nz, ny);
  m(3, 0) = std::conj(m(0, 3));
  return DensityMatrix::from_matrix(std::move(m));
}

DensityMatrix x_state(const std::array<double, 4>& diagonal, Complex rho_00_11, Complex rho_01_10) {
  ComplexMatrix m(4);
  for (std::size_t i = 0; i < 4; ++i) m(i, i) = diagonal[i];
  m(0, 3) = rho_00_11;
  m(3, 0) = std::conj(rho_00_11);
  m(1, 2) = rho_01_10;
  m(2, 1) = std::conj(rho_01_10);
  return DensityMatrix::from_matrix(std::move(m));
}

}  // namespace subwit
