// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. An optional argument names a directory for the
// generated tables.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cli/scenario.hpp"
#include "cli/table.hpp"
#include "subwit/measures.hpp"
#include "subwit/protocol.hpp"
#include "subwit/reconstruct.hpp"
#include "subwit/witness.hpp"
#include "support.hpp"

using namespace subwit;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string out_dir;

// P = 0.371 on the Bell subspace with |<00|rho|11>| = 0.3117 and a chosen phase.
DensityMatrix fig2b_state(double phase) {
  const double rest = (1.0 - 2 * 0.371) / 2.0;
  return x_state({0.371, rest, rest, 0.371}, std::polar(0.3117, phase), 0.0);
}

Outcome criterion1() {
  const double zz = 0.497, xx = 0.2142, yy = -0.5857;
  const DensityMatrix rho = cli::correlator_state(zz, xx, yy, 0.6827);
  const double d = 2 * kPi * 50e3;
  const PulseSpec opt{d, optimal_time(d), 0.0, true};
  const double mzz = correlator_signal(rho, opt, DecayModel::none(), CorrelatorBasis::ZZ);
  const double mxx = correlator_signal(rho, opt, DecayModel::none(), CorrelatorBasis::XX);
  const double myy = correlator_signal(rho, opt, DecayModel::none(), CorrelatorBasis::YY);
  const double F = 0.25 * (1 + mzz + mxx - myy);
  const WitnessReport w = state_witness(rho, bell_spec(), PhaseSetting::zeros(2), 0.5);
  const bool pass = std::abs(F - 0.574225) < 1e-12 && std::abs(w.fidelity - F) < 1e-12 &&
                    std::abs(F - 0.57421) < 1e-4 && std::abs(w.value + 0.07421) < 1e-4;
  return {pass, "F=" + fmt("%.6f", F) + " W_psi=" + fmt("%.6f", w.value)};
}

Outcome criterion2() {
  testkit::Rng rng(2002);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  const Schedule s = bell_schedule();
  double worst = 0.0, f0 = 0.0, w0 = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = fig2b_state(u(rng));
    const ReconstructionResult res = solve(assemble(bell_spec(), s, forward_fidelities(rho, bell_spec(), s)));
    const WitnessReport w = ws_from_result(res, bell_spec(), 0.5, WitnessMode::SubspaceConstrained);
    if (trial == 0) {
      f0 = w.fidelity;
      w0 = w.value;
    }
    worst = std::max({worst, std::abs(w.fidelity - 0.6827), std::abs(w.value + 0.1827)});
  }
  return {worst < 1e-4, "F_max=" + fmt("%.6f", f0) + " W_s=" + fmt("%.6f", w0) + " worst_dev=" + fmt("%.2e", worst)};
}

Outcome criterion3() {
  const auto start = std::chrono::steady_clock::now();
  testkit::Rng rng(3003);
  const SubspaceSpec w4 = w_spec(4);
  const Schedule s = full_schedule(w4);
  const std::int64_t shots = 1000000;
  double worst = 0.0;
  std::size_t inside = 0, total = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho = testkit::random_subspace_density(w4, rng);
    const std::vector<double> f = forward_fidelities(rho, w4, s);
    const ReconstructionResult res = solve(assemble(w4, s, f));
    const CoherenceTable truth = coherence_table(rho, w4);
    std::vector<double> exact{population(w4, truth)};
    for (const Complex& c : truth.coherences) exact.push_back(c.real());
    for (const Complex& c : truth.coherences) exact.push_back(c.imag());
    for (std::size_t c = 0; c < exact.size(); ++c) worst = std::max(worst, std::abs(res.estimates[c] - exact[c]));

    std::vector<double> noisy(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) noisy[k] = sample_fidelity(f[k], shots, point_seed(3003 + trial * 64, k));
    const ReconstructionResult nr = solve(assemble(w4, s, noisy), ShotModel{shots});
    for (std::size_t c = 0; c < exact.size(); ++c) {
      ++total;
      if (std::abs(nr.estimates[c] - exact[c]) <= 3.0 * (*nr.std_errors)[c]) ++inside;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double frac = static_cast<double>(inside) / total;
  return {worst < 1e-10 && frac >= 0.95 && secs < 30.0,
          "settings=" + std::to_string(s.settings.size()) + " max_err=" + fmt("%.2e", worst) +
              " within_3sigma=" + fmt("%.4f", frac) + " time_s=" + fmt("%.2f", secs)};
}

Outcome criterion4() {
  testkit::Rng rng(4004);
  int slack = 0, hard = 0;
  for (int i = 0; i < 10000; ++i) {
    const DensityMatrix rho = testkit::random_density(2, rng, 1 + i % 4);
    const double c = concurrence(rho).value;
    const double bs = bound_from_witness(subspace_witness(rho, bell_spec(), 0.5, WitnessMode::SubspaceConstrained).value);
    const double bp = bound_from_witness(state_witness(rho, bell_spec(), PhaseSetting::zeros(2), 0.5).value);
    for (double gap : {bs - c, bp - bs}) {
      if (gap > 1e-8) {
        ++hard;
      } else if (gap > 0.0) {
        ++slack;
      }
    }
  }
  return {hard == 0, "states=10000 slack_violations=" + std::to_string(slack) + " hard_violations=" + std::to_string(hard)};
}

Outcome criterion5() {
  testkit::Rng rng(5005);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  const DensityMatrix phi_plus = DensityMatrix::from_pure(bell({BellBranch::Phi, 0.0}));
  cli::Table t;
  t.name = "local_z_robustness";
  t.header = {"trial", "angle_0", "angle_1", "concurrence", "W_s", "W_psi_phi0"};
  double c_dev = 0.0, ws_dev = 0.0, wp_min = 1.0, wp_max = -1.0;
  for (int i = 0; i < 100; ++i) {
    const double a0 = u(rng), a1 = u(rng);
    const DensityMatrix rho = apply_channel(phi_plus, LocalZ{{a0, a1}});
    const double c = concurrence(rho).value;
    const double ws = subspace_witness(rho, bell_spec(), 0.5, WitnessMode::SubspaceConstrained).value;
    const double wp = state_witness(rho, bell_spec(), PhaseSetting::zeros(2), 0.5).value;
    c_dev = std::max(c_dev, std::abs(c - 1.0));
    ws_dev = std::max(ws_dev, std::abs(ws + 0.5));
    wp_min = std::min(wp_min, wp);
    wp_max = std::max(wp_max, wp);
    t.add_values({static_cast<double>(i), a0, a1, c, ws, wp});
  }
  if (!out_dir.empty()) cli::write_atomic(out_dir + "/" + t.name + ".csv", t.to_csv());
  // The fixed-phase witness misses the entanglement for a sizeable share of
  // rotations: its range reaches 0 and beyond.
  const bool pass = c_dev < 1e-8 && ws_dev < 1e-8 && wp_max >= 0.0 && wp_min < -0.45;
  return {pass, "max|C-1|=" + fmt("%.1e", c_dev) + " max|W_s+1/2|=" + fmt("%.1e", ws_dev) + " W_psi in [" +
                    fmt("%.4f", wp_min) + ", " + fmt("%.4f", wp_max) + "]"};
}

Outcome criterion6() {
  double wp_dev = 0.0, ws_dev = 0.0;
  int mismatches = 0, radicand_negative = 0, points = 0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      for (int k = 0; k < 20; ++k) {
        const AppendixBParams p{i / 19.0, 2 * kPi * j / 20, kPi * k / 20};
        const DensityMatrix rho = rho_phi(p.eps, p.theta, p.phi0);
        const double wp = state_witness(rho, bell_spec(), PhaseSetting::zeros(2), 0.5).value;
        const double ws = subspace_witness(rho, bell_spec(), 0.5, WitnessMode::SubspaceConstrained).value;
        const double wp_closed = -0.5 * p.eps * std::cos(p.phi0);
        const double ws_closed = -0.5 * p.eps *
                                 std::sqrt(std::pow(std::cos(p.phi0), 2) +
                                           std::pow(std::sin(p.phi0) * std::sin(p.theta), 2));
        wp_dev = std::max({wp_dev, std::abs(wp - wp_closed), std::abs(appendix_b_state_witness(p) - wp_closed)});
        ws_dev = std::max({ws_dev, std::abs(ws - ws_closed), std::abs(appendix_b_subspace_witness(p) - ws_closed)});
        if (sign_criterion(p) != (concurrence(rho).value > 1e-10)) ++mismatches;
        if (std::holds_alternative<RadicandNegative>(appendix_b_concurrence(p))) ++radicand_negative;
        ++points;
      }
    }
  }
  return {wp_dev < 1e-10 && ws_dev < 1e-10 && mismatches == 0,
          "points=" + std::to_string(points) + " max_dev_W_psi=" + fmt("%.1e", wp_dev) +
              " max_dev_W_s=" + fmt("%.1e", ws_dev) + " sign_mismatches=" + std::to_string(mismatches) +
              " printed_C2_radicand_negative=" + std::to_string(radicand_negative)};
}

Outcome criterion7() {
  double a1 = 0.0, a3 = 0.0;
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) {
      const double phi = 2 * kPi * i / 30, dt = 2 * kPi * j / 30;
      for (bool pp : {true, false}) {
        const PulseSpec s{1.3, dt / 1.3, phi, pp};
        a1 = std::max(a1, max_abs_diff(correlator_operator_closed(s), correlator_operator_numeric(s)));
      }
      a3 = std::max(a3, max_abs_diff(hhcp_operator_closed(phi, dt), hhcp_operator_numeric(phi, 1.3, dt / 1.3)));
    }
  }
  return {a1 < 1e-12 && a3 < 1e-12, "A1_max_dev=" + fmt("%.1e", a1) + " A3_max_dev=" + fmt("%.1e", a3)};
}

Outcome criterion8() {
  const DensityMatrix rho = fig2b_state(0.8);
  std::vector<double> taus;
  for (int i = 0; i <= 120; ++i) taus.push_back(i * 0.5e-6);
  const EchoScanResult r = echo_scan(rho, bell_spec(), 15e3, DecayModel::stretched(31e-6, 2.0), taus);
  const double t2_rel = std::abs(r.fitted_T2 / 31e-6 - 1.0);
  const double amp_dev = std::abs(r.fitted_amplitude - 2 * 0.3117);
  const double alpha = 0.5, P = 0.371;
  const double c0 = coherence_for_lifetime(33e-6, 31e-6, 2.0, alpha, P);
  const Lifetime lt = lifetime_tau_star(31e-6, 2.0, c0, alpha, P);
  bool monotone = true;
  double last = 0.0;
  for (double c = alpha - P + 1e-3; c <= 1.0; c += 1e-3) {
    const double tau = lifetime_tau_star(31e-6, 2.0, c, alpha, P).tau_star;
    monotone = monotone && tau > last;
    last = tau;
  }
  last = 0.0;
  for (double T2 = 1e-6; T2 <= 100e-6; T2 += 1e-6) {
    const double tau = lifetime_tau_star(T2, 2.0, c0, alpha, P).tau_star;
    monotone = monotone && tau > last;
    last = tau;
  }
  const bool pass = t2_rel < 1e-3 && amp_dev < 1e-6 && std::abs(c0 - 0.401) < 1e-3 &&
                    std::abs(lt.tau_star - 33e-6) < 1e-15 && monotone;
  return {pass, "T2_rel_err=" + fmt("%.1e", t2_rel) + " amp_err=" + fmt("%.1e", amp_dev) + " C0(33us)=" +
                    fmt("%.6f", c0) + " tau*=" + fmt("%.4e", lt.tau_star) + " monotone=" + (monotone ? "yes" : "no")};
}

Outcome criterion9() {
  const DensityMatrix ghz = DensityMatrix::from_pure(target_state(ghz_spec(3), PhaseSetting::zeros(3)));
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(3);
  auto bound = [&](double p) {
    return gme_bound_ghz3(DensityMatrix::from_matrix(p * ghz.matrix() + (1 - p) * mixed.matrix()));
  };
  const double ideal = bound(1.0);
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) > 0.0 ? hi : lo) = mid;
  }
  const double p = 0.5 * (lo + hi);
  return {std::abs(ideal - 0.5) < 1e-15 && std::abs(p - 3.0 / 7.0) < 1e-9,
          "ideal=" + fmt("%.15f", ideal) + " threshold=" + fmt("%.12f", p)};
}

Outcome criterion10() {
  const double bell_a = alpha_separable(bell_spec(), 16).alpha;
  const double ghz_a = alpha_separable(ghz_spec(3), 16).alpha;
  double worst = 0.0;
  std::ostringstream grid;
  for (const auto& [name, spec] : std::vector<std::pair<std::string, SubspaceSpec>>{
           {"bell", bell_spec()}, {"bell-psi", bell_spec(BellBranch::Psi)}, {"ghz3", ghz_spec(3)},
           {"w3", w_spec(3)}, {"w2", w_spec(2)}}) {
    const double a = alpha_separable(spec, 16).alpha;
    const double g = testkit::alpha_grid_oracle(spec, 1.0);
    worst = std::max(worst, std::abs(a - g));
    grid << ' ' << name << '=' << fmt("%.6f", a);
  }
  return {std::abs(bell_a - 0.5) < 1e-6 && std::abs(ghz_a - 0.5) < 1e-6 && worst < 1e-4,
          "alpha:" + grid.str() + " max_grid_dev=" + fmt("%.1e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    out_dir = argv[1];
    std::filesystem::create_directories(out_dir);
  }
  const std::vector<std::function<Outcome()>> checks{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                     criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
