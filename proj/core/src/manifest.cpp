#include "dnsim/manifest.hpp"

#include <fstream>
#include <sstream>

#include "dnsim/errors.hpp"

namespace dnsim {

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("digest: cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
        if (!in) break;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("manifest: cannot open " + path.string());
    out << "manifest.subcommand = " << m.subcommand << "\n";
    out << "manifest.version = " << m.version << "\n";
    out << "manifest.seed = " << m.seed << "\n";
    out << "manifest.wall_clock = " << m.wall_clock << "\n";
    for (std::size_t i = 0; i < m.outputs.size(); ++i) {
        out << "output." << i << ".file = " << m.outputs[i].file << "\n";
        out << "output." << i << ".bytes = " << m.outputs[i].bytes << "\n";
        out << "output." << i << ".fnv1a64 = " << m.outputs[i].digest << "\n";
    }
    // Config snapshot last, one key per line with the config.* prefix.
    std::istringstream cfg(m.config_text);
    std::string line;
    while (std::getline(cfg, line)) {
        if (!line.empty()) out << "config." << line << "\n";
    }
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("manifest: cannot open " + path.string());
    RunManifest m;
    std::string line;
    std::ostringstream cfg;
    auto value_of = [](const std::string& l) {
        const auto eq = l.find('=');
        if (eq == std::string::npos) return std::string();
        auto v = l.substr(eq + 1);
        const auto b = v.find_first_not_of(' ');
        return b == std::string::npos ? std::string() : v.substr(b);
    };
    while (std::getline(in, line)) {
        if (line.rfind("config.", 0) == 0) {
            cfg << line.substr(7) << "\n";
        } else if (line.rfind("manifest.subcommand", 0) == 0) {
            m.subcommand = value_of(line);
        } else if (line.rfind("manifest.version", 0) == 0) {
            m.version = value_of(line);
        } else if (line.rfind("manifest.seed", 0) == 0) {
            m.seed = std::stoull(value_of(line));
        } else if (line.rfind("manifest.wall_clock", 0) == 0) {
            m.wall_clock = value_of(line);
        } else if (line.rfind("output.", 0) == 0) {
            const auto rest = line.substr(7);
            const auto dot = rest.find('.');
            const std::size_t idx = std::stoul(rest.substr(0, dot));
            if (m.outputs.size() <= idx) m.outputs.resize(idx + 1);
            if (rest.find(".file", dot) == dot)
                m.outputs[idx].file = value_of(line);
            else if (rest.find(".bytes", dot) == dot)
                m.outputs[idx].bytes = std::stoull(value_of(line));
            else if (rest.find(".fnv1a64", dot) == dot)
                m.outputs[idx].digest = value_of(line);
        }
    }
    m.config_text = cfg.str();
    return m;
}

} // namespace dnsim
