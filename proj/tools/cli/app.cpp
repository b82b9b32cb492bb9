#include "cli/app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "subwit/errors.hpp"
#include "subwit/measures.hpp"
#include "subwit/protocol.hpp"
#include "subwit/reconstruct.hpp"
#include "subwit/witness.hpp"

namespace subwit::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_number(v[i]);
  return s;
}

PhaseSetting witness_phases(const Scenario& sc, const SubspaceSpec& spec) {
  if (sc.analysis.phases.empty()) return PhaseSetting::zeros(spec.qubits());
  if (sc.analysis.phases.size() != spec.qubits()) throw ConfigError("analysis.phases needs one entry per qubit");
  return PhaseSetting(sc.analysis.phases);
}

double optimal_t(const Scenario& sc) { return sc.protocol.t ? *sc.protocol.t : optimal_time(sc.protocol.d); }

double maybe_sample(double expectation, const Scenario& sc, std::uint64_t index) {
  if (!sc.protocol.shots) return expectation;
  return sample_shots(std::clamp(expectation, -1.0, 1.0), *sc.protocol.shots, point_seed(sc.protocol.seed, index));
}

void add_common_meta(Table& t, const Scenario& sc) {
  t.add_meta("seed", std::to_string(sc.protocol.seed));
  t.add_meta("shots", sc.protocol.shots ? std::to_string(*sc.protocol.shots) : "inf");
}

void add_report_row(Table& t, const WitnessReport& r) {
  t.header = {"mode", "alpha", "P", "C", "fidelity", "value"};
  t.add_row({to_string(r.mode), format_number(r.alpha), format_number(r.population), format_number(r.coherence),
             format_number(r.fidelity), format_number(r.value)});
}

}  // namespace

Scenario default_scenario(const std::string& target) {
  Scenario sc;
  if (target == "fig3") {
    sc.state.family = "init";
  } else {
    sc.state.family = "correlators";
  }
  return sc;
}

double resolve_alpha(const Scenario& sc, const SubspaceSpec& spec) {
  if (sc.analysis.alpha) return *sc.analysis.alpha;
  return alpha_separable(spec).alpha;
}

Table gen_table(const std::string& family, std::size_t n, std::size_t k) {
  SubspaceSpec spec = [&] {
    try {
      if (family == "bell") return bell_spec(BellBranch::Phi);
      if (family == "bell-psi") return bell_spec(BellBranch::Psi);
      if (family == "ghz") return ghz_spec(n);
      if (family == "w") return w_spec(n);
      if (family == "dicke") return dicke(n, k);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    throw ConfigError("unknown family '" + family + "'");
  }();
  Table t;
  t.name = family == "dicke" ? "dicke" + std::to_string(n) + "_" + std::to_string(k)
                             : (family.rfind("bell", 0) == 0 ? family : family + std::to_string(n));
  t.add_meta("family", family);
  t.header = {"label", "amplitude"};
  for (std::size_t i = 0; i < spec.size(); ++i) {
    std::ostringstream a;
    a.precision(17);
    a << spec.amplitude(i);
    t.add_row({spec.label(i), a.str()});
  }
  return t;
}

Table witness_table(const Scenario& sc) {
  const DensityMatrix rho = build_state(sc);
  const SubspaceSpec spec = target_spec(sc);
  const PhaseSetting phases = witness_phases(sc, spec);
  WitnessReport r = state_witness(rho, spec, phases, resolve_alpha(sc, spec));
  if (sc.protocol.shots) {
    r.fidelity = sample_fidelity(r.fidelity, *sc.protocol.shots, sc.protocol.seed);
    r.value = r.alpha - r.fidelity;
    r.coherence = r.fidelity - r.population;
  }
  Table t;
  t.name = "witness";
  add_common_meta(t, sc);
  t.add_meta("phases", join(phases.thetas()));
  add_report_row(t, r);
  return t;
}

Table subspace_witness_table(const Scenario& sc) {
  const DensityMatrix rho = build_state(sc);
  const SubspaceSpec spec = target_spec(sc);
  const WitnessReport r = subspace_witness(rho, spec, resolve_alpha(sc, spec), sc.analysis.mode);
  Table t;
  t.name = "subspace_witness";
  t.add_meta("converged", r.converged ? "true" : "false");
  if (r.phases) t.add_meta("phases", join(r.phases->thetas()));
  add_report_row(t, r);
  return t;
}

Table schedule_table(const SubspaceSpec& spec, SchedulePart part) {
  const Feasibility f = feasible(spec);
  const Schedule s = part == SchedulePart::Mixed ? full_schedule(spec) : binary_schedule(spec, part);
  Table t;
  t.name = "schedule";
  t.add_meta("part", to_string(part));
  t.add_meta("unknowns", std::to_string(f.unknowns));
  t.add_meta("binary_limit", std::to_string(f.binary_limit));
  t.add_meta("per_part_required", std::to_string(f.per_part_required));
  t.add_meta("settings", std::to_string(s.settings.size()));
  t.header = {"setting_index"};
  for (std::size_t m = 1; m <= spec.qubits(); ++m) t.header.push_back("theta_" + std::to_string(m));
  for (std::size_t r = 0; r < s.settings.size(); ++r) {
    std::vector<std::string> row{std::to_string(r)};
    for (double th : s.settings[r].thetas()) row.push_back(format_number(th));
    t.add_row(std::move(row));
  }
  return t;
}

Table reconstruct_from_measurements(const SubspaceSpec& spec, const MeasurementTable& data, double alpha,
                                    WitnessMode mode, const std::optional<std::int64_t>& shots) {
  const DesignSystem sys = assemble(spec, data.schedule, data.fidelities);
  std::optional<ShotModel> model;
  if (shots) model = ShotModel{*shots};
  const ReconstructionResult res = solve(sys, model);
  const WitnessReport w = ws_from_result(res, spec, alpha, mode);
  Table t;
  t.name = "reconstruct";
  t.add_meta("settings", std::to_string(sys.rows));
  t.add_meta("condition_number", res.condition_number);
  t.add_meta("residual_norm", res.residual_norm);
  t.add_meta("witness_mode", to_string(mode));
  t.add_meta("alpha", alpha);
  t.add_meta("max_fidelity", w.fidelity);
  t.add_meta("witness_value", w.value);
  t.header = {"unknown", "estimate", "std_error"};
  for (std::size_t u = 0; u < res.estimates.size(); ++u) {
    t.add_row({res.names[u], format_number(res.estimates[u]),
               res.std_errors ? format_number((*res.std_errors)[u]) : std::string()});
  }
  return t;
}

Table reconstruct_table(const Scenario& sc) {
  const DensityMatrix rho = build_state(sc);
  const SubspaceSpec spec = target_spec(sc);
  Schedule schedule;
  const std::string& which = sc.analysis.schedule;
  if (which == "full") {
    schedule = full_schedule(spec);
  } else if (which == "bell") {
    schedule = bell_schedule(spec);
  } else {
    schedule = binary_schedule(spec, parse_schedule_part(which));
  }
  std::vector<double> f = forward_fidelities(rho, spec, schedule);
  if (sc.protocol.shots) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = sample_fidelity(std::clamp(f[i], 0.0, 1.0), *sc.protocol.shots, point_seed(sc.protocol.seed, i));
    }
  }
  Table t = reconstruct_from_measurements(spec, {schedule, f}, resolve_alpha(sc, spec), sc.analysis.mode,
                                          sc.protocol.shots);
  add_common_meta(t, sc);
  return t;
}

Table alpha_table(const SubspaceSpec& spec, int restarts, std::uint64_t seed) {
  const AlphaEstimate a = alpha_separable(spec, restarts, 1e-12, seed);
  Table t;
  t.name = "alpha";
  t.add_meta("restarts", std::to_string(restarts));
  t.add_meta("seed", std::to_string(seed));
  t.header = {"alpha", "converged", "sweeps"};
  t.add_row({format_number(a.alpha), a.converged ? "true" : "false", std::to_string(a.sweeps)});
  return t;
}

Table measures_table(const Scenario& sc) {
  const DensityMatrix rho = build_state(sc);
  Table t;
  t.name = "measures";
  if (rho.qubits() == 2) {
    const SubspaceSpec spec = target_spec(sc);
    const double alpha = resolve_alpha(sc, spec);
    const ConcurrenceReport c = concurrence(rho);
    const WitnessReport ws = subspace_witness(rho, spec, alpha, WitnessMode::SubspaceConstrained);
    const WitnessReport wp = state_witness(rho, spec, witness_phases(sc, spec), alpha);
    t.header = {"quantity", "value"};
    t.add_row({"concurrence", format_number(c.value)});
    for (std::size_t i = 0; i < 4; ++i) t.add_row({"lambda_" + std::to_string(i + 1), format_number(c.lambdas[i])});
    t.add_row({"W_psi", format_number(wp.value)});
    t.add_row({"W_s", format_number(ws.value)});
    t.add_row({"bound_W_psi", format_number(bound_from_witness(wp.value))});
    t.add_row({"bound_W_s", format_number(bound_from_witness(ws.value))});
    if (sc.state.family == "rho_phi") {
      const AppendixBParams p{sc.state.eps, sc.state.theta, sc.state.phi0};
      const AppendixBTerms terms = appendix_b_terms(p);
      t.add_row({"appendix_b_a", format_number(terms.a)});
      t.add_row({"appendix_b_b", format_number(terms.b)});
      const auto closed = appendix_b_concurrence(p);
      t.add_row({"appendix_b_concurrence",
                 std::holds_alternative<double>(closed) ? format_number(std::get<double>(closed))
                                                        : std::string("radicand-negative")});
      t.add_row({"sign_criterion", sign_criterion(p) ? "true" : "false"});
    }
  } else if (rho.qubits() == 3) {
    t.header = {"quantity", "value"};
    t.add_row({"gme_bound_ghz3", format_number(gme_bound_ghz3(rho))});
  } else {
    throw Error(ErrorCode::DimensionMismatch, "measures supports two- and three-qubit states");
  }
  return t;
}

Table decay_scan_table(const Scenario& sc) {
  const DensityMatrix rho = build_state(sc);
  const SubspaceSpec spec = target_spec(sc);
  const ProtocolConfig& p = sc.protocol;
  std::vector<double> taus(p.points);
  for (std::size_t i = 0; i < p.points; ++i) taus[i] = p.tau_max * static_cast<double>(i) / (p.points - 1);
  const DecayModel decay = DecayModel::stretched(p.T2, p.p);
  EchoScanResult r = echo_scan(rho, spec, p.nu, decay, taus);
  if (p.shots) {
    for (std::size_t i = 0; i < r.signals.size(); ++i) r.signals[i] = maybe_sample(r.signals[i], sc, i);
    r = fit_echo(taus, r.signals, p.nu, p.p);
  }
  const double alpha = resolve_alpha(sc, spec);
  const double P = sc.analysis.P_echo;
  const double c0_fit = r.fitted_amplitude / 2.0;
  const Lifetime from_fit = lifetime_tau_star(r.fitted_T2, p.p, c0_fit, alpha, P);
  const double target_tau = 33e-6;
  const double c0_needed = P < alpha ? coherence_for_lifetime(target_tau, r.fitted_T2, p.p, alpha, P) : 0.0;

  Table t;
  t.name = "decay_scan";
  add_common_meta(t, sc);
  t.add_meta("nu_hz", p.nu);
  t.add_meta("exponent_p", p.p);
  t.add_meta("fitted_amplitude", r.fitted_amplitude);
  t.add_meta("fitted_T2_s", r.fitted_T2);
  t.add_meta("fitted_phase", r.fitted_phase);
  t.add_meta("residual_norm", r.residual_norm);
  t.add_meta("phase_degenerate", r.phase_degenerate ? "true" : "false");
  t.add_meta("alpha", alpha);
  t.add_meta("P", P);
  t.add_meta("C0_from_fit", c0_fit);
  t.add_meta("tau_star_from_fit", to_string(from_fit.outcome) + " " + format_number(from_fit.tau_star));
  t.add_meta("C0_for_33us", c0_needed);
  t.header = {"tau_s", "signal", "fit"};
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double model = r.fitted_amplitude * std::cos(2.0 * kPi * p.nu * taus[i] - r.fitted_phase) *
                         std::exp(-std::pow(taus[i] / r.fitted_T2, p.p));
    t.add_values({taus[i], r.signals[i], model});
  }
  return t;
}

Table reproduce_fig2a(const Scenario& sc) {
  const DensityMatrix rho = build_state(sc);
  const ProtocolConfig& p = sc.protocol;
  const DecayModel env = DecayModel::exponential(p.T);
  const double t_opt = optimal_t(sc);
  const std::size_t n = p.points;
  const CorrelatorBasis bases[3] = {CorrelatorBasis::ZZ, CorrelatorBasis::XX, CorrelatorBasis::YY};

  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = 4.0 * t_opt * static_cast<double>(i) / (n - 1);
  std::vector<std::vector<double>> sig(3, std::vector<double>(n));
  double fitted[3] = {0, 0, 0};
  for (std::size_t b = 0; b < 3; ++b) {
    // Fit s(t) = env(t) (u cos dt + v sin dt); v is the two-body correlator.
    double scc = 0, scs = 0, sss = 0, syc = 0, sys = 0;
    for (std::size_t i = 0; i < n; ++i) {
      PulseSpec ps{p.d, ts[i], 0.0, true};
      sig[b][i] = maybe_sample(correlator_signal(rho, ps, env, bases[b]), sc, b * n + i);
      const double e = env.envelope(ts[i]);
      const double c = e * std::cos(p.d * ts[i]);
      const double s = e * std::sin(p.d * ts[i]);
      scc += c * c;
      scs += c * s;
      sss += s * s;
      syc += sig[b][i] * c;
      sys += sig[b][i] * s;
    }
    const double det = scc * sss - scs * scs;
    fitted[b] = (scc * sys - scs * syc) / det;
  }
  const double F = (1.0 + fitted[0] + fitted[1] - fitted[2]) / 4.0;
  const SubspaceSpec spec = bell_spec(BellBranch::Phi);
  const double alpha = resolve_alpha(sc, spec);
  const WitnessReport direct = state_witness(rho, spec, PhaseSetting::zeros(2), alpha);

  Table t;
  t.name = "fig2a";
  add_common_meta(t, sc);
  t.add_meta("coupling_d_rad_s", p.d);
  t.add_meta("envelope_T_s", p.T);
  t.add_meta("fitted_zz", fitted[0]);
  t.add_meta("fitted_xx", fitted[1]);
  t.add_meta("fitted_yy", fitted[2]);
  t.add_meta("fidelity", F);
  t.add_meta("alpha", alpha);
  t.add_meta("W_psi", alpha - F);
  t.add_meta("W_psi_direct", direct.value);
  t.header = {"t_s", "zz_signal", "xx_signal", "yy_signal"};
  for (std::size_t i = 0; i < n; ++i) t.add_values({ts[i], sig[0][i], sig[1][i], sig[2][i]});
  return t;
}

Table reproduce_fig2b(const Scenario& sc) {
  const DensityMatrix rho = build_state(sc);
  const SubspaceSpec spec = bell_spec(BellBranch::Phi);
  const ProtocolConfig& p = sc.protocol;
  const double t_opt = optimal_t(sc);
  const CoherenceTable table = coherence_table(rho, spec);
  const double P = population(spec, table);
  const double offset = hhcp_offset(rho);

  // Four-measurement readout: <Z0 Z1> plus the signal at three phases.
  const std::vector<double> phis{0.0, kPi / 2.0, kPi};
  std::vector<double> s3;
  for (std::size_t i = 0; i < phis.size(); ++i) s3.push_back(maybe_sample(hhcp_signal(rho, phis[i], p.d, t_opt), sc, i));
  const double zz = maybe_sample(expect(rho, pauli::string("zz")), sc, phis.size());
  const ReconstructionResult res = solve(hhcp_system(zz, phis, s3));
  const double alpha = resolve_alpha(sc, spec);
  const WitnessReport ws = ws_from_result(res, spec, alpha, sc.analysis.mode);
  const WitnessReport wp = state_witness(rho, spec, PhaseSetting::zeros(2), alpha);

  Table t;
  t.name = "fig2b";
  add_common_meta(t, sc);
  t.add_meta("P", res.P_hat);
  t.add_meta("abs_rho_00_11", std::abs(res.coherences.at(0, 1)));
  t.add_meta("offset", res.estimates[3]);
  t.add_meta("max_fidelity", ws.fidelity);
  t.add_meta("alpha", alpha);
  t.add_meta("W_s", ws.value);
  t.add_meta("W_psi_phi0", wp.value);
  t.header = {"phi", "signal", "coherence_C", "fidelity"};
  for (std::size_t i = 0; i < p.points; ++i) {
    const double phi = 2.0 * kPi * static_cast<double>(i) / (p.points - 1);
    const double C = coherence_sum(spec, table, PhaseSetting({phi, 0.0}));
    const double s = hhcp_signal(rho, phi, p.d, t_opt);
    t.add_values({phi, s, C, P + C});
  }
  t.add_meta("model_offset", offset);
  return t;
}

Table reproduce_fig2c(const Scenario& sc) {
  Table t = decay_scan_table(sc);
  t.name = "fig2c";
  return t;
}

Table reproduce_fig3(const Scenario& sc) {
  const SubspaceSpec spec = bell_spec(BellBranch::Phi);
  const double alpha = resolve_alpha(sc, spec);
  Table t;
  t.name = "fig3";
  t.add_meta("p1", sc.state.p1);
  t.add_meta("lam", sc.state.lam);
  t.add_meta("dephasing", sc.analysis.dephasing);
  t.add_meta("alpha", alpha);
  t.header = {"N", "polarization", "P", "F_s", "coherence_2abs", "W_s", "W_psi", "bound_W_s", "bound_W_psi",
              "concurrence"};
  for (int N : sc.analysis.N_values) {
    DensityMatrix rho = entangled_init_state(N, sc.state.p1, sc.state.lam);
    if (sc.analysis.dephasing > 0.0) rho = apply_channel(rho, Dephasing{{sc.analysis.dephasing}});
    const CoherenceTable table = coherence_table(rho, spec);
    const WitnessReport ws = subspace_witness(rho, spec, alpha, WitnessMode::SubspaceConstrained);
    // The ideal target of the gate carries a -pi/2 relative phase; the
    // state witness uses the nominal Phi+ target.
    const WitnessReport wp = state_witness(rho, spec, PhaseSetting::zeros(2), alpha);
    t.add_values({static_cast<double>(N), init_polarization(N, sc.state.p1, sc.state.lam),
                                  population(spec, table), ws.fidelity, 2.0 * std::abs(table.at(0, 1)), ws.value,
                                  wp.value, bound_from_witness(ws.value), bound_from_witness(wp.value),
                                  concurrence(rho).value});
  }
  return t;
}

namespace {

std::string output_dir(const std::string& flag, const Scenario& sc) {
  if (!flag.empty()) return flag;
  if (!sc.output.empty()) return sc.output;
  if (const char* env = std::getenv("SUBWIT_OUT_DIR"); env && *env) return env;
  return {};
}

std::optional<std::int64_t> parse_shots_flag(const std::string& s) {
  if (s.empty() || s == "inf") return std::nullopt;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size() || v < 1) throw std::invalid_argument("shots");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("--shots must be a positive integer or 'inf'");
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subspace entanglement witnesses: simulation, reconstruction and reproduction tables"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, shots_flag, mode_flag;
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--config", config_path, "YAML scenario file");
  app.add_option("--seed", seed_flag, "RNG seed (overrides protocol.seed)");
  app.add_option("--shots", shots_flag, "Shots per setting: integer or inf (default inf)");
  app.add_option("--out", out_dir, "Output directory (default: config output, then $SUBWIT_OUT_DIR)");
  app.add_option("--mode", mode_flag, "Subspace witness mode: constrained | magnitude-sum");

  std::string family = "ghz", spec_name, part_name = "real", measurements_path, target_name;
  std::size_t n = 3, k = 1;
  int restarts = 16;

  auto* gen = app.add_subcommand("gen", "Write a named subspace spec (label amplitude table)");
  gen->add_option("--family", family, "bell | bell-psi | ghz | w | dicke")->capture_default_str();
  gen->add_option("--n", n, "Number of qubits")->capture_default_str();
  gen->add_option("--k", k, "Excitations (dicke)")->capture_default_str();
  auto* witness = app.add_subcommand("witness", "State witness of the scenario state");
  auto* sub = app.add_subcommand("subspace-witness", "Subspace witness of the scenario state");
  auto* schedule = app.add_subcommand("schedule", "List a phase-measurement schedule");
  schedule->add_option("--spec", spec_name, "bell | ghz<N> | w<N> | dicke<N>_<K> | spec file")->required();
  schedule->add_option("--part", part_name, "real | imaginary | full")->capture_default_str();
  auto* recon = app.add_subcommand("reconstruct", "Least-squares reconstruction from fidelities");
  recon->add_option("--measurements", measurements_path, "Measurement CSV (otherwise simulated)");
  recon->add_option("--spec", target_name, "Target subspace (default from config)");
  auto* alpha = app.add_subcommand("alpha", "Separable-overlap offset of a spec");
  alpha->add_option("--spec", spec_name, "bell | ghz<N> | w<N> | dicke<N>_<K> | spec file")->required();
  alpha->add_option("--restarts", restarts, "Random starts")->capture_default_str();
  auto* measures = app.add_subcommand("measures", "Concurrence, witness bounds, GHZ3 bound");
  auto* decay = app.add_subcommand("decay-scan", "Echo decay scan with fit and lifetime report");
  auto* reproduce = app.add_subcommand("reproduce", "Reproduce a figure table: fig2a | fig2b | fig2c | fig3");
  std::string figure;
  reproduce->add_option("figure", figure, "fig2a | fig2b | fig2c | fig3")
      ->required()
      ->check(CLI::IsMember({"fig2a", "fig2b", "fig2c", "fig3"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  Scenario sc;
  Table table;
  try {
    if (reproduce->parsed()) {
      sc = config_path.empty() ? default_scenario(figure) : load_scenario(config_path);
    } else if (!config_path.empty()) {
      sc = load_scenario(config_path);
    }
    if (seed_flag) sc.protocol.seed = *seed_flag;
    if (!shots_flag.empty()) sc.protocol.shots = parse_shots_flag(shots_flag);
    if (!mode_flag.empty()) {
      try {
        sc.analysis.mode = parse_witness_mode(mode_flag);
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
      if (sc.analysis.mode == WitnessMode::State) throw ConfigError("--mode must be constrained or magnitude-sum");
    }
    if (!target_name.empty()) sc.analysis.target = target_name;

    // Resolve everything that depends only on the configuration first, so
    // configuration problems map to exit status 1.
    std::optional<SubspaceSpec> named;
    if (!spec_name.empty()) named = resolve_spec(spec_name);
    std::optional<MeasurementTable> data;
    if (!measurements_path.empty()) {
      std::ifstream f(measurements_path);
      if (!f) throw ConfigError("cannot open measurements '" + measurements_path + "'");
      std::stringstream buf;
      buf << f.rdbuf();
      try {
        data = parse_measurements_csv(buf.str());
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
    std::optional<SchedulePart> part;
    if (schedule->parsed()) {
      try {
        part = parse_schedule_part(part_name);
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
    if (!gen->parsed() && !schedule->parsed() && !alpha->parsed() && !data) {
      (void)build_state(sc);
      (void)target_spec(sc);
    }

    if (gen->parsed()) {
      table = gen_table(family, n, k);
    } else if (witness->parsed()) {
      table = witness_table(sc);
    } else if (sub->parsed()) {
      table = subspace_witness_table(sc);
    } else if (schedule->parsed()) {
      table = schedule_table(*named, *part);
    } else if (recon->parsed()) {
      if (data) {
        const SubspaceSpec spec = target_spec(sc);
        table = reconstruct_from_measurements(spec, *data, resolve_alpha(sc, spec), sc.analysis.mode,
                                              sc.protocol.shots);
      } else {
        table = reconstruct_table(sc);
      }
    } else if (alpha->parsed()) {
      table = alpha_table(*named, restarts, seed_flag.value_or(0xa1fa5eedULL));
    } else if (measures->parsed()) {
      table = measures_table(sc);
    } else if (decay->parsed()) {
      table = decay_scan_table(sc);
    } else if (reproduce->parsed()) {
      if (figure == "fig2a") table = reproduce_fig2a(sc);
      if (figure == "fig2b") table = reproduce_fig2b(sc);
      if (figure == "fig2c") table = reproduce_fig2c(sc);
      if (figure == "fig3") table = reproduce_fig3(sc);
    }
    table.meta.insert(table.meta.begin(), {"command", reproduce->parsed() ? "reproduce " + figure
                                                                          : app.get_subcommands().front()->get_name()});
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  const std::string csv = gen->parsed() ? [&] {
    std::string s;
    for (const auto& row : table.rows) s += row[0] + " " + row[1] + "\n";
    return s;
  }()
                                        : table.to_csv();
  out << csv;
  const std::string dir = output_dir(out_dir, sc);
  if (!dir.empty()) {
    const std::string ext = gen->parsed() ? ".spec" : ".csv";
    const std::string path = (std::filesystem::path(dir) / (table.name + ext)).string();
    try {
      write_atomic(path, csv);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
    err << "wrote " << path << '\n';
  }
  return kExitOk;
}

}  // namespace subwit::cli
