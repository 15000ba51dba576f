#ifndef DNSIM_RUNNER_HPP
#define DNSIM_RUNNER_HPP

#include <filesystem>
#include <map>
#include <string>

#include "dnsim/config.hpp"
#include "dnsim/stepper.hpp"

namespace dnsim {

/// Orchestration of the experiment subcommands. The CLI binary is a thin
/// wrapper over run_subcommand so that tests drive exactly the same paths.
struct RunOptions {
    std::string subcommand; // simulate | sweep-lambda | check-ito | check-stability | prox-test
    ParsedConfig cfg;
    std::filesystem::path out_dir;
    bool quiet = false;
    bool svg = false;
};

/// Executes one subcommand, writes its CSV outputs, a key=value summary.txt,
/// and manifest.txt into out_dir. Returns the process exit status.
int run_subcommand(const RunOptions& options);

/// Re-runs the subcommand recorded in a manifest, with its embedded config
/// snapshot, into a fresh output directory.
int rerun_from_manifest(const std::filesystem::path& manifest_path,
                        const std::filesystem::path& out_dir, bool quiet = true);

/// Per-path trajectory CSV: step,t plus the configured u/du_d/v blocks.
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& rec,
                          const SimConfig& cfg);

/// Rebuilds a full trajectory record from a persisted CSV (the state block)
/// plus the configuration: drift quantities and Wiener increments are
/// regenerated deterministically, so ledger recomputation is bitwise.
TrajectoryRecord load_trajectory_csv(const std::filesystem::path& path, const SimConfig& cfg,
                                     std::uint64_t path_index);

/// key = value pairs of a summary.txt.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

} // namespace dnsim

#endif
