#ifndef DNSIM_CONFIG_HPP
#define DNSIM_CONFIG_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "dnsim/sim_config.hpp"

namespace dnsim {

/// Options consumed by the diagnostic subcommands.
struct DiagOptions {
    std::vector<double> sweep_lambdas{0.5, 0.25, 0.125, 0.0625};
    double sweep_ratio_bound = 10.0;
    std::vector<double> ito_dts{0.004, 0.001, 0.00025};
    int ito_paths = 200;
    std::vector<double> stability_scales{2.0, 1.5, 0.5, -1.0};
    int stability_paths = 100;
    bool stability_mixed_pair = true;
    int init_mode = 1;
    double init_v_norm = 1.0;
    std::string init_kind = "sine"; // sine | zero
    bool noise_sensitivity = false; // simulate re-runs with 2m modes and reports deltas
};

struct ParsedConfig {
    SimConfig sim;
    DiagOptions diag;
};

/// Flat dotted-key configuration text: `section.key = value` lines, `#`
/// comments. Unknown keys are rejected; the stability rule is validated at
/// parse time. An empty file yields the documented default fixture.
ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config(const std::filesystem::path& path);

/// Canonical serialization of the fully resolved key set;
/// parse(serialize(cfg)) reproduces an identical configuration.
std::string serialize_config(const ParsedConfig& cfg);

} // namespace dnsim

#endif
