#ifndef DNSIM_MANIFEST_HPP
#define DNSIM_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dnsim {

/// FNV-1a 64-bit digest of a file's bytes, as a hex string.
std::string file_digest(const std::filesystem::path& path);

struct ManifestEntry {
    std::string file; // relative to the output directory
    std::uint64_t bytes = 0;
    std::string digest;
};

/// Reproducibility record of one subcommand run: the fully resolved config
/// snapshot, seed, code version, wall-clock, and the digests of every output
/// file. Written as flat key=value text next to the outputs.
struct RunManifest {
    std::string subcommand;
    std::string version;
    std::uint64_t seed = 0;
    std::string wall_clock;
    std::string config_text; // canonical serialized configuration
    std::vector<ManifestEntry> outputs;
};

void write_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

} // namespace dnsim

#endif
