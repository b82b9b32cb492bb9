// Command-line front end. Each subcommand builds a Table; `run` parses the
// arguments, prints the table and, when an output directory is known
// (--out, the config's `output`, or SUBWIT_OUT_DIR), writes it atomically.
//
// Exit status: 0 success, 1 configuration error, 2 runtime failure.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "cli/scenario.hpp"
#include "cli/table.hpp"
#include "subwit/reconstruct.hpp"

namespace subwit::cli {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

// Defaults used by `reproduce` when no --config is given.
Scenario default_scenario(const std::string& target);

double resolve_alpha(const Scenario& scenario, const SubspaceSpec& spec);

Table gen_table(const std::string& family, std::size_t n, std::size_t k);
Table witness_table(const Scenario& scenario);
Table subspace_witness_table(const Scenario& scenario);
Table schedule_table(const SubspaceSpec& spec, SchedulePart part);
Table reconstruct_table(const Scenario& scenario);
Table reconstruct_from_measurements(const SubspaceSpec& spec, const MeasurementTable& data, double alpha,
                                    WitnessMode mode, const std::optional<std::int64_t>& shots);
Table alpha_table(const SubspaceSpec& spec, int restarts, std::uint64_t seed);
Table measures_table(const Scenario& scenario);
Table decay_scan_table(const Scenario& scenario);

Table reproduce_fig2a(const Scenario& scenario);
Table reproduce_fig2b(const Scenario& scenario);
Table reproduce_fig2c(const Scenario& scenario);
Table reproduce_fig3(const Scenario& scenario);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subwit::cli
