#include "subwit/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "linalg.hpp"
#include "subwit/errors.hpp"

namespace subwit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRankTol = 1e-9;
constexpr double kMeasurementSlack = 1e-9;
constexpr std::size_t kMaxSearchQubits = 10;

// cos and sin, exact at multiples of pi/2 so binary rows carry exact zeros.
std::pair<double, double> snapped_trig(double angle) {
  const double quarters = angle / (kPi / 2.0);
  const double nearest = std::round(quarters);
  if (std::abs(quarters - nearest) < 1e-12) {
    switch (((static_cast<long long>(nearest) % 4) + 4) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return {std::cos(angle), std::sin(angle)};
}

// Qubits on which the spec's labels are not all equal.
std::vector<std::size_t> active_qubits(const SubspaceSpec& spec) {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < spec.qubits(); ++m) {
    for (std::size_t k = 1; k < spec.size(); ++k) {
      if (spec.bit(k, m) != spec.bit(0, m)) {
        out.push_back(m);
        break;
      }
    }
  }
  return out;
}

// Incremental row-space basis (modified Gram-Schmidt).
class RowSpace {
 public:
  explicit RowSpace(std::size_t cols) : cols_(cols) {}
  std::size_t rank() const { return basis_.size(); }
  // Adds the row if it raises the rank; returns whether it did.
  bool add(std::vector<double> row) {
    double norm0 = 0.0;
    for (double v : row) norm0 = std::max(norm0, std::abs(v));
    if (norm0 == 0.0) return false;
    for (const auto& b : basis_) {
      double dot = 0.0;
      for (std::size_t i = 0; i < cols_; ++i) dot += row[i] * b[i];
      for (std::size_t i = 0; i < cols_; ++i) row[i] -= dot * b[i];
    }
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm <= kRankTol * std::max(1.0, norm0)) return false;
    for (double& v : row) v /= norm;
    basis_.push_back(std::move(row));
    return true;
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<double>> basis_;
};

// Sign pattern b_k = parity(sum_m k_m t_m) relative to basis 0, packed with
// b_1 as the most significant of d-1 bits.
std::uint64_t pattern_of(const SubspaceSpec& spec, const std::vector<int>& t) {
  auto parity = [&](std::size_t k) {
    int s = 0;
    for (std::size_t m = 0; m < spec.qubits(); ++m) s += spec.bit(k, m) ? t[m] : 0;
    return s & 1;
  };
  const int ref = parity(0);
  const std::size_t d = spec.size();
  std::uint64_t v = 0;
  for (std::size_t k = 1; k < d; ++k) {
    if (parity(k) != ref) v |= std::uint64_t{1} << (d - 1 - k);
  }
  return v;
}

// Every realizable pattern mapped to the first per-qubit setting giving it.
std::map<std::uint64_t, std::vector<int>> realizable_patterns(const SubspaceSpec& spec) {
  const auto act = active_qubits(spec);
  if (act.size() > 20) throw Error(ErrorCode::Infeasible, "too many active qubits for pattern enumeration");
  std::map<std::uint64_t, std::vector<int>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << act.size()); ++mask) {
    std::vector<int> t(spec.qubits(), 0);
    for (std::size_t i = 0; i < act.size(); ++i) t[act[i]] = static_cast<int>((mask >> (act.size() - 1 - i)) & 1u);
    // Keep the realization with the fewest pi phases.
    const auto weight = [](const std::vector<int>& v) { return std::count(v.begin(), v.end(), 1); };
    const std::uint64_t key = pattern_of(spec, t);
    auto it = out.find(key);
    if (it == out.end()) {
      out.emplace(key, std::move(t));
    } else if (weight(t) < weight(it->second)) {
      it->second = std::move(t);
    }
  }
  return out;
}

PhaseSetting binary_setting(const std::vector<int>& t) {
  std::vector<double> th(t.size());
  for (std::size_t m = 0; m < t.size(); ++m) th[m] = t[m] ? kPi : 0.0;
  return PhaseSetting(std::move(th));
}

std::vector<double> slice(const std::vector<double>& row, std::size_t from, std::size_t to) {
  return {row.begin() + static_cast<std::ptrdiff_t>(from), row.begin() + static_cast<std::ptrdiff_t>(to)};
}

Schedule real_schedule(const SubspaceSpec& spec) {
  const std::size_t d = spec.size();
  const std::size_t np = spec.pair_count();
  const std::size_t need = np + 1;
  if (d > 62) throw Error(ErrorCode::Infeasible, "subspace too large for binary patterns");
  const auto patterns = realizable_patterns(spec);
  if (patterns.size() < need) {
    throw Error(ErrorCode::Infeasible, std::to_string(patterns.size()) + " realizable sign patterns < " +
                                           std::to_string(need) + " required");
  }
  Schedule s{{}, SchedulePart::Real};
  RowSpace space(need);
  auto consider = [&](std::uint64_t v) {
    auto it = patterns.find(v);
    if (it == patterns.end() || space.rank() == need) return;
    const PhaseSetting setting = binary_setting(it->second);
    if (space.add(slice(design_row(spec, setting), 0, need))) s.settings.push_back(setting);
  };
  consider(0);
  const std::uint64_t full = (std::uint64_t{1} << (d - 1)) - 1;
  for (std::uint64_t v = 1; v <= full && space.rank() < need; ++v) {
    const std::uint64_t comp = full & ~v;
    if (comp < v && comp != 0) continue;  // pair already visited; 0 pairs with full
    consider(v);
    consider(comp);
  }
  if (space.rank() < need) throw Error(ErrorCode::Infeasible, "binary settings do not resolve all real parts");
  return s;
}

Schedule imaginary_schedule(const SubspaceSpec& spec) {
  const std::size_t np = spec.pair_count();
  const auto act = active_qubits(spec);
  if (act.size() > kMaxSearchQubits) {
    throw Error(ErrorCode::Infeasible, "imaginary-part search limited to " + std::to_string(kMaxSearchQubits) +
                                           " active qubits");
  }
  Schedule s{{}, SchedulePart::Imaginary};
  RowSpace space(np);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < act.size(); ++i) total *= 4;
  for (std::uint64_t code = 0; code < total && space.rank() < np; ++code) {
    std::vector<double> th(spec.qubits(), 0.0);
    std::uint64_t c = code;
    for (std::size_t i = act.size(); i-- > 0;) {
      th[act[i]] = static_cast<double>(c % 4) * (kPi / 2.0);
      c /= 4;
    }
    const PhaseSetting setting(std::move(th));
    if (space.add(slice(design_row(spec, setting), 1 + np, 1 + 2 * np))) s.settings.push_back(setting);
  }
  if (space.rank() < np) throw Error(ErrorCode::Infeasible, "quarter-phase settings do not resolve imaginary parts");
  return s;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(SchedulePart part) {
  switch (part) {
    case SchedulePart::Real: return "real";
    case SchedulePart::Imaginary: return "imaginary";
    case SchedulePart::Mixed: return "mixed";
  }
  return "unknown";
}

SchedulePart parse_schedule_part(const std::string& name) {
  if (name == "real") return SchedulePart::Real;
  if (name == "imaginary" || name == "imag") return SchedulePart::Imaginary;
  if (name == "mixed" || name == "full") return SchedulePart::Mixed;
  throw Error(ErrorCode::ParseError, "unknown schedule part '" + name + "'");
}

void validate(const Schedule& schedule) {
  if (schedule.settings.empty()) throw Error(ErrorCode::InvalidSpec, "schedule is empty");
  std::set<std::vector<double>> seen;
  for (const auto& s : schedule.settings) {
    if (!seen.insert(s.thetas()).second) throw Error(ErrorCode::InvalidSpec, "schedule repeats a setting");
  }
}

Schedule bell_schedule(const SubspaceSpec& spec) {
  if (spec.size() != 2) throw Error(ErrorCode::InvalidSpec, "bell_schedule needs a two-label subspace");
  std::size_t q = 0;
  while (spec.bit(0, q) == spec.bit(1, q)) ++q;
  // Phase on qubit q enters phi_10 with sign bit1 - bit0.
  const double sign = spec.bit(1, q) ? 1.0 : -1.0;
  Schedule s{{}, SchedulePart::Mixed};
  for (double phi : {0.0, kPi / 2.0, kPi}) {
    std::vector<double> th(spec.qubits(), 0.0);
    th[q] = sign * phi;
    s.settings.emplace_back(std::move(th));
  }
  return s;
}

Schedule binary_schedule(const SubspaceSpec& spec, SchedulePart part) {
  if (spec.size() < 3) {
    throw Error(ErrorCode::Infeasible, "binary schedule needs d >= 3; use the three-point Bell schedule for d = 2");
  }
  switch (part) {
    case SchedulePart::Real: return real_schedule(spec);
    case SchedulePart::Imaginary: return imaginary_schedule(spec);
    case SchedulePart::Mixed: return full_schedule(spec);
  }
  throw Error(ErrorCode::InvalidSpec, "unknown schedule part");
}

Schedule full_schedule(const SubspaceSpec& spec) {
  if (spec.size() == 2) return bell_schedule(spec);
  Schedule s = real_schedule(spec);
  const Schedule im = imaginary_schedule(spec);
  std::set<std::vector<double>> seen;
  for (const auto& x : s.settings) seen.insert(x.thetas());
  for (const auto& x : im.settings) {
    if (seen.insert(x.thetas()).second) s.settings.push_back(x);
  }
  s.part = SchedulePart::Mixed;
  return s;
}

Feasibility feasible(const SubspaceSpec& spec) {
  Feasibility f;
  const std::size_t d = spec.size();
  f.unknowns = d * (d - 1) + 1;
  f.per_part_required = d * (d - 1) / 2 + 1;
  f.binary_limit = d - 1 >= 64 ? UINT64_MAX : (std::uint64_t{1} << (d - 1));
  f.bell_fallback = d == 2;
  f.feasible = d >= 3 && f.per_part_required <= f.binary_limit;
  f.tomography_settings = spec.qubits() >= 32 ? UINT64_MAX : (std::uint64_t{1} << (2 * spec.qubits())) - 1;
  if (active_qubits(spec).size() <= 20 && d <= 62) {
    f.realizable_patterns = realizable_patterns(spec).size();
  }
  f.realizable = f.bell_fallback || (f.feasible && f.realizable_patterns >= f.per_part_required);
  return f;
}

std::vector<std::string> unknown_names(const SubspaceSpec& spec) {
  std::vector<std::string> names{"P"};
  const auto pairs = ordered_pairs(spec.size());
  for (const char* part : {"Re", "Im"}) {
    for (auto [j, k] : pairs) {
      names.push_back(std::string(part) + "_" + spec.label(j) + "_" + spec.label(k));
    }
  }
  return names;
}

std::vector<double> design_row(const SubspaceSpec& spec, const PhaseSetting& setting) {
  const std::vector<double> phi = induced_phases(spec, setting);
  const std::size_t np = spec.pair_count();
  std::vector<double> row(1 + 2 * np, 0.0);
  row[0] = 1.0;
  std::size_t p = 0;
  for (auto [j, k] : ordered_pairs(spec.size())) {
    const double w = 2.0 * spec.amplitude(j) * spec.amplitude(k);
    const auto [c, s] = snapped_trig(phi[k] - phi[j]);
    row[1 + p] = w * c;
    row[1 + np + p] = w * s;
    ++p;
  }
  return row;
}

DesignSystem assemble(const SubspaceSpec& spec, const Schedule& schedule, const std::vector<double>& measurements) {
  validate(schedule);
  if (measurements.size() != schedule.settings.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(measurements.size()) + " measurements for " +
                                               std::to_string(schedule.settings.size()) + " settings");
  }
  DesignSystem sys;
  sys.d = spec.size();
  sys.names = unknown_names(spec);
  sys.cols = sys.names.size();
  sys.rows = schedule.settings.size();
  for (std::size_t r = 0; r < sys.rows; ++r) {
    const double m = measurements[r];
    if (!(m >= -kMeasurementSlack && m <= 1.0 + kMeasurementSlack)) {
      throw Error(ErrorCode::OutOfRange, "measurement " + std::to_string(r) + " outside [0, 1]");
    }
    const auto row = design_row(spec, schedule.settings[r]);
    sys.matrix.insert(sys.matrix.end(), row.begin(), row.end());
  }
  sys.rhs = measurements;
  return sys;
}

std::vector<double> forward_fidelities(const DensityMatrix& rho, const SubspaceSpec& spec, const Schedule& schedule) {
  std::vector<double> out;
  out.reserve(schedule.settings.size());
  for (const auto& s : schedule.settings) out.push_back(fidelity(rho, target_state(spec, s)));
  return out;
}

std::vector<double> forward_fidelities(const SubspaceSpec& spec, const CoherenceTable& table,
                                       const Schedule& schedule) {
  const double P = population(spec, table);
  std::vector<double> out;
  out.reserve(schedule.settings.size());
  for (const auto& s : schedule.settings) out.push_back(P + coherence_sum(spec, table, s));
  return out;
}

ReconstructionResult solve(const DesignSystem& system, const std::optional<ShotModel>& shots) {
  if (system.rhs.size() != system.rows || system.matrix.size() != system.rows * system.cols) {
    throw Error(ErrorCode::LengthMismatch, "design system is malformed");
  }
  detail::RealMatrix a(system.rows, system.cols);
  a.data = system.matrix;
  const detail::RealMatrix g = detail::gram(a);
  const std::vector<double> ev = detail::symmetric_eigenvalues(g);
  const double lmax = ev.empty() ? 0.0 : ev.back();
  std::size_t rank = 0;
  for (double l : ev) {
    if (l > 1e-12 * lmax && l > 0.0) ++rank;
  }
  if (rank < system.cols) {
    throw RankDeficientError(system.cols - rank, "design matrix rank " + std::to_string(rank) + " < " +
                                                     std::to_string(system.cols) + " unknowns");
  }
  const auto chol = detail::cholesky(g);
  if (!chol) throw RankDeficientError(1, "normal matrix is not positive definite");
  const std::vector<double> x = detail::cholesky_solve(*chol, detail::transpose_times(a, system.rhs));

  ReconstructionResult res;
  res.names = system.names;
  res.estimates = x;
  res.rank = rank;
  res.condition_number = std::sqrt(lmax / ev.front());
  const std::vector<double> pred = detail::times(a, x);
  double rss = 0.0;
  for (std::size_t r = 0; r < system.rows; ++r) rss += (system.rhs[r] - pred[r]) * (system.rhs[r] - pred[r]);
  res.residual_norm = std::sqrt(rss);

  if (shots) {
    if (shots->shots < 1) throw Error(ErrorCode::OutOfRange, "shot count must be >= 1");
    // Cov = (A^T A)^-1 A^T S A (A^T A)^-1, S = diag(F (1 - F) / shots).
    const detail::RealMatrix ginv = detail::cholesky_inverse(*chol);
    detail::RealMatrix mid(system.cols, system.cols);
    for (std::size_t r = 0; r < system.rows; ++r) {
      const double f = std::clamp(system.rhs[r], 0.0, 1.0);
      const double var = f * (1.0 - f) / static_cast<double>(shots->shots);
      for (std::size_t i = 0; i < system.cols; ++i) {
        for (std::size_t j = 0; j < system.cols; ++j) mid(i, j) += a(r, i) * var * a(r, j);
      }
    }
    std::vector<double> se(system.cols);
    for (std::size_t u = 0; u < system.cols; ++u) {
      double v = 0.0;
      for (std::size_t i = 0; i < system.cols; ++i) {
        for (std::size_t j = 0; j < system.cols; ++j) v += ginv(u, i) * mid(i, j) * ginv(j, u);
      }
      se[u] = std::sqrt(std::max(0.0, v));
    }
    res.std_errors = std::move(se);
  }

  const std::size_t np = system.d * (system.d - 1) / 2;
  res.P_hat = x[0];
  res.coherences.d = system.d;
  if (system.cols >= 1 + 2 * np) {
    for (std::size_t p = 0; p < np; ++p) res.coherences.coherences.emplace_back(x[1 + p], x[1 + np + p]);
  }
  return res;
}

DesignSystem hhcp_system(double zz, const std::vector<double>& phis, const std::vector<double>& signals) {
  if (phis.size() != signals.size()) throw Error(ErrorCode::LengthMismatch, "phases and signals differ in length");
  if (!(std::abs(zz) <= 1.0 + kMeasurementSlack)) throw Error(ErrorCode::OutOfRange, "<ZZ> outside [-1, 1]");
  DesignSystem sys;
  sys.d = 2;
  sys.names = {"P", "Re_00_11", "Im_00_11", "offset"};
  sys.cols = 4;
  sys.rows = 1 + phis.size();
  sys.matrix = {1.0, 0.0, 0.0, 0.0};
  sys.rhs = {(1.0 + zz) / 4.0};
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const auto [c, s] = snapped_trig(phis[i]);
    sys.matrix.insert(sys.matrix.end(), {0.0, 2.0 * c, 2.0 * s, 1.0});
    sys.rhs.push_back(signals[i]);
  }
  return sys;
}

WitnessReport ws_from_result(const ReconstructionResult& result, const SubspaceSpec& spec, double alpha,
                             WitnessMode mode, const OptimizerOptions& options) {
  if (result.coherences.d != spec.size() || result.coherences.coherences.size() != spec.pair_count()) {
    throw Error(ErrorCode::IncompleteReconstruction, "reconstruction does not cover the subspace");
  }
  return subspace_witness(spec, result.coherences, result.P_hat, alpha, mode, options);
}

std::string measurements_csv(const Schedule& schedule, const std::vector<double>& fidelities) {
  if (fidelities.size() != schedule.settings.size()) throw Error(ErrorCode::LengthMismatch, "fidelity count");
  std::ostringstream os;
  const std::size_t n = schedule.settings.empty() ? 0 : schedule.settings.front().size();
  os << "setting_index";
  for (std::size_t m = 1; m <= n; ++m) os << ",theta_" << m;
  os << ",fidelity\n";
  for (std::size_t r = 0; r < fidelities.size(); ++r) {
    os << r;
    for (double t : schedule.settings[r].thetas()) os << ',' << fmt(t);
    os << ',' << fmt(fidelities[r]) << '\n';
  }
  return os.str();
}

MeasurementTable parse_measurements_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  MeasurementTable t;
  std::size_t ncols = 0;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!header) {
      if (cells.size() < 3 || cells.front() != "setting_index" || cells.back() != "fidelity") {
        throw Error(ErrorCode::ParseError, "measurement CSV header must be setting_index,theta_1..,fidelity");
      }
      ncols = cells.size();
      header = true;
      continue;
    }
    if (cells.size() != ncols) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": column count");
    std::vector<double> vals;
    for (std::size_t c = 1; c < ncols; ++c) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cells[c], &used));
        if (used != cells[c].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": bad number '" + cells[c] + "'");
      }
    }
    t.fidelities.push_back(vals.back());
    vals.pop_back();
    t.schedule.settings.emplace_back(std::move(vals));
  }
  if (!header) throw Error(ErrorCode::ParseError, "measurement CSV is empty");
  return t;
}

std::string result_csv(const ReconstructionResult& result) {
  std::ostringstream os;
  os << "unknown,estimate,std_error\n";
  for (std::size_t u = 0; u < result.estimates.size(); ++u) {
    os << result.names[u] << ',' << fmt(result.estimates[u]) << ',';
    if (result.std_errors) os << fmt((*result.std_errors)[u]);
    os << '\n';
  }
  return os.str();
}

}  // namespace subwit
