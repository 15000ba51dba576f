#include "dnsim/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "dnsim/csv.hpp"
#include "dnsim/errors.hpp"

namespace dnsim {

namespace {

struct KeyValue {
    std::string value;
    int line = 0;
    bool consumed = false;
};

using KeyMap = std::map<std::string, KeyValue>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

KeyMap tokenize(const std::string& text) {
    KeyMap map;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "config line " << lineno << ": expected 'key = value', got '" << line << "'";
            throw ConfigError(os.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream os;
            os << "config line " << lineno << ": empty key";
            throw ConfigError(os.str());
        }
        map[key] = KeyValue{value, lineno, false};
    }
    return map;
}

class Reader {
public:
    explicit Reader(KeyMap map) : map_(std::move(map)) {}

    std::string str(const std::string& key, const std::string& fallback) {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        it->second.consumed = true;
        return it->second.value;
    }

    double num(const std::string& key, double fallback) {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        it->second.consumed = true;
        try {
            return parse_double(it->second.value);
        } catch (const Error&) {
            throw ConfigError("config key '" + key + "' (line " +
                              std::to_string(it->second.line) + "): not a number: '" +
                              it->second.value + "'");
        }
    }

    int integer(const std::string& key, int fallback) {
        const double v = num(key, static_cast<double>(fallback));
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw ConfigError("config key '" + key + "': expected an integer");
        return i;
    }

    bool boolean(const std::string& key, bool fallback) {
        const std::string v = str(key, fallback ? "true" : "false");
        if (v == "true") return true;
        if (v == "false") return false;
        throw ConfigError("config key '" + key + "': expected true or false");
    }

    bool has(const std::string& key) const { return map_.count(key) > 0; }

    std::vector<double> list(const std::string& key, std::vector<double> fallback) {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        it->second.consumed = true;
        std::vector<double> xs;
        std::string cur;
        auto flush = [&] {
            cur = trim(cur);
            if (!cur.empty()) xs.push_back(parse_double(cur));
            cur.clear();
        };
        for (char c : it->second.value) {
            if (c == ',')
                flush();
            else
                cur += c;
        }
        flush();
        if (xs.empty())
            throw ConfigError("config key '" + key + "': expected a comma-separated list");
        return xs;
    }

    void reject_unknown() const {
        for (const auto& [key, kv] : map_) {
            if (!kv.consumed) {
                std::ostringstream os;
                os << "config line " << kv.line << ": unknown key '" << key << "'";
                throw ConfigError(os.str());
            }
        }
    }

private:
    KeyMap map_;
};

MonotoneGraph::Point parse_point(const std::string& tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
        throw ConfigError("graph.points: expected 'x:y' pairs separated by ';'");
    return {parse_double(trim(tok.substr(0, colon))), parse_double(trim(tok.substr(colon + 1)))};
}

std::vector<MonotoneGraph::Point> parse_points(const std::string& value) {
    std::vector<MonotoneGraph::Point> pts;
    std::string cur;
    for (char c : value) {
        if (c == ';') {
            if (!trim(cur).empty()) pts.push_back(parse_point(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) pts.push_back(parse_point(cur));
    return pts;
}

std::string points_to_string(const std::vector<MonotoneGraph::Point>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ";";
        s += format_double(pts[i].x) + ":" + format_double(pts[i].y);
    }
    return s;
}

std::string list_to_string(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ",";
        s += format_double(xs[i]);
    }
    return s;
}

} // namespace

ParsedConfig parse_config_text(const std::string& text) {
    Reader r(tokenize(text));

    const int n = r.integer("grid.n", 32);
    Grid grid(n);

    const double p = r.num("model.p", 3.0);
    const std::string b1 = r.str("model.beta1", "p_power");
    const std::string b0 = r.str("model.beta0", "quadratic");
    EnergyModel::Beta1 beta1;
    if (b1 == "quadratic")
        beta1 = EnergyModel::Beta1::Quadratic;
    else if (b1 == "p_power")
        beta1 = EnergyModel::Beta1::PPower;
    else
        throw ConfigError("model.beta1: expected quadratic or p_power, got '" + b1 + "'");
    EnergyModel::Beta0 beta0;
    if (b0 == "zero")
        beta0 = EnergyModel::Beta0::Zero;
    else if (b0 == "quadratic")
        beta0 = EnergyModel::Beta0::Quadratic;
    else if (b0 == "quartic")
        beta0 = EnergyModel::Beta0::Quartic;
    else
        throw ConfigError("model.beta0: expected zero, quadratic or quartic, got '" + b0 + "'");
    EnergyModel energy = EnergyModel::preset(grid, beta1, beta0, p);

    const std::string gk = r.str("graph.kind", "sign_plus_linear");
    MonotoneGraph graph = MonotoneGraph::linear(1.0);
    if (gk == "linear") {
        graph = MonotoneGraph::linear(r.num("graph.a", 1.0));
    } else if (gk == "power_law") {
        graph = MonotoneGraph::power_law(r.num("graph.q", 2.0), r.num("graph.a", 1.0));
    } else if (gk == "sign_plus_linear") {
        graph = MonotoneGraph::sign_plus_linear(r.num("graph.a", 1.0), r.num("graph.b", 0.1));
    } else if (gk == "piecewise_linear") {
        const std::string pts = r.str("graph.points", "");
        if (pts.empty()) throw ConfigError("graph.points is required for piecewise_linear");
        graph = MonotoneGraph::piecewise_linear(parse_points(pts));
    } else {
        throw ConfigError("graph.kind: unknown kind '" + gk + "'");
    }
    if (r.has("graph.c_A")) graph.declare_coercivity(r.num("graph.c_A", 0.0));
    if (r.has("graph.C_A")) graph.declare_linear_bound(r.num("graph.C_A", 0.0));

    const std::string nk = r.str("noise.kind", "superposition");
    const int m = r.integer("noise.m", 8);
    const double sigma0 = r.num("noise.sigma0", 0.5);
    const double decay = r.num("noise.r", 1.5);
    const std::string phi = r.str("noise.phi", "tanh");
    NoiseModel noise = NoiseModel::zero();
    if (nk == "zero") {
        // keys above are still consumed so that switching kinds never
        // invalidates a config file
    } else if (nk == "additive") {
        noise = NoiseModel::additive(grid, m, sigma0, decay);
    } else if (nk == "superposition") {
        NoiseModel::Phi link;
        if (phi == "identity")
            link = NoiseModel::Phi::Identity;
        else if (phi == "tanh")
            link = NoiseModel::Phi::Tanh;
        else
            throw ConfigError("noise.phi: expected identity or tanh, got '" + phi + "'");
        noise = NoiseModel::superposition(grid, m, sigma0, decay, link);
    } else {
        throw ConfigError("noise.kind: unknown kind '" + nk + "'");
    }

    const std::string fk = r.str("forcing.kind", "affine");
    ForcingModel forcing = ForcingModel::zero();
    const double fa0 = r.num("forcing.a0", 1.0);
    const double fa1 = r.num("forcing.a1", 0.0);
    const double fomega = r.num("forcing.omega", 0.0);
    const double fb = r.num("forcing.b", 0.0);
    const double fc = r.num("forcing.c", 0.0);
    if (fk == "affine")
        forcing = ForcingModel::affine(fa0, fa1, fomega, fb, fc);
    else if (fk != "zero")
        throw ConfigError("forcing.kind: expected zero or affine, got '" + fk + "'");

    SimConfig sim(grid, std::move(energy), std::move(graph), std::move(noise),
                  std::move(forcing));
    sim.lambda = r.num("run.lambda", 0.25);
    sim.T = r.num("run.T", 0.5);
    sim.dt = r.num("run.dt", 0.004);
    sim.c_stab = r.num("run.c_stab", 0.1);
    const std::string rl = r.str("run.r_lambda", "identity");
    if (rl == "identity")
        sim.r_lambda = RLambda::Identity;
    else if (rl == "prox_smoother")
        sim.r_lambda = RLambda::ProxSmoother;
    else
        throw ConfigError("run.r_lambda: expected identity or prox_smoother, got '" + rl + "'");
    sim.n_paths = r.integer("run.n_paths", 1);
    sim.workers = r.integer("run.workers", 1);
    sim.seed = static_cast<std::uint64_t>(r.num("noise.seed", 12345.0));

    DiagOptions diag;
    diag.init_kind = r.str("init.kind", "sine");
    diag.init_mode = r.integer("init.mode", 1);
    diag.init_v_norm = r.num("init.v_norm", 1.0);
    if (diag.init_kind == "zero")
        sim.u0 = grid.zero();
    else if (diag.init_kind == "sine")
        sim.u0 = make_sine_init(grid, diag.init_mode, diag.init_v_norm, p);
    else
        throw ConfigError("init.kind: expected sine or zero, got '" + diag.init_kind + "'");

    sim.output.u = r.boolean("output.u", true);
    sim.output.du_d = r.boolean("output.du_d", false);
    sim.output.v = r.boolean("output.v", false);

    diag.noise_sensitivity = r.boolean("noise.sensitivity_check", diag.noise_sensitivity);
    diag.sweep_lambdas = r.list("sweep.lambdas", diag.sweep_lambdas);
    diag.sweep_ratio_bound = r.num("sweep.ratio_bound", diag.sweep_ratio_bound);
    diag.ito_dts = r.list("ito.dts", diag.ito_dts);
    diag.ito_paths = r.integer("ito.paths", diag.ito_paths);
    diag.stability_scales = r.list("stability.scales", diag.stability_scales);
    diag.stability_paths = r.integer("stability.paths", diag.stability_paths);
    diag.stability_mixed_pair = r.boolean("stability.mixed_pair", diag.stability_mixed_pair);

    r.reject_unknown();
    sim.validate();
    return ParsedConfig{std::move(sim), std::move(diag)};
}

ParsedConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const ParsedConfig& cfg) {
    const SimConfig& s = cfg.sim;
    const DiagOptions& d = cfg.diag;
    std::ostringstream os;
    auto kv = [&](const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; };

    kv("grid.n", std::to_string(s.grid.n()));
    kv("model.beta1", s.energy.beta1_name());
    kv("model.beta0", s.energy.beta0_name());
    kv("model.p", format_double(s.energy.p()));

    kv("graph.kind", s.graph.kind_name());
    switch (s.graph.kind()) {
    case MonotoneGraph::Kind::Linear:
        kv("graph.a", format_double(s.graph.param_a()));
        break;
    case MonotoneGraph::Kind::PowerLaw:
        kv("graph.a", format_double(s.graph.param_a()));
        kv("graph.q", format_double(s.graph.param_q()));
        break;
    case MonotoneGraph::Kind::SignPlusLinear:
        kv("graph.a", format_double(s.graph.param_a()));
        kv("graph.b", format_double(s.graph.param_b()));
        break;
    case MonotoneGraph::Kind::PiecewiseLinear:
        kv("graph.points", points_to_string(s.graph.points()));
        break;
    }
    if (s.graph.coercivity()) kv("graph.c_A", format_double(*s.graph.coercivity()));
    if (s.graph.linear_bound()) kv("graph.C_A", format_double(*s.graph.linear_bound()));

    kv("noise.kind", s.noise.kind_name());
    if (s.noise.kind() != NoiseModel::Kind::Zero) {
        kv("noise.m", std::to_string(s.noise.mode_count()));
        kv("noise.sigma0", format_double(s.noise.sigma0()));
        kv("noise.r", format_double(s.noise.decay()));
    }
    if (s.noise.kind() == NoiseModel::Kind::Superposition) kv("noise.phi", s.noise.phi_name());
    kv("noise.seed", std::to_string(s.seed));
    kv("noise.sensitivity_check", d.noise_sensitivity ? "true" : "false");

    kv("forcing.kind", s.forcing.kind_name());
    if (s.forcing.kind() == ForcingModel::Kind::Affine) {
        kv("forcing.a0", format_double(s.forcing.a0()));
        kv("forcing.a1", format_double(s.forcing.a1()));
        kv("forcing.omega", format_double(s.forcing.omega()));
        kv("forcing.b", format_double(s.forcing.b()));
        kv("forcing.c", format_double(s.forcing.c()));
    }

    kv("run.lambda", format_double(s.lambda));
    kv("run.T", format_double(s.T));
    kv("run.dt", format_double(s.dt));
    kv("run.c_stab", format_double(s.c_stab));
    kv("run.r_lambda", s.r_lambda == RLambda::Identity ? "identity" : "prox_smoother");
    kv("run.n_paths", std::to_string(s.n_paths));
    kv("run.workers", std::to_string(s.workers));

    kv("init.kind", d.init_kind);
    kv("init.mode", std::to_string(d.init_mode));
    kv("init.v_norm", format_double(d.init_v_norm));

    kv("output.u", s.output.u ? "true" : "false");
    kv("output.du_d", s.output.du_d ? "true" : "false");
    kv("output.v", s.output.v ? "true" : "false");

    kv("sweep.lambdas", list_to_string(d.sweep_lambdas));
    kv("sweep.ratio_bound", format_double(d.sweep_ratio_bound));
    kv("ito.dts", list_to_string(d.ito_dts));
    kv("ito.paths", std::to_string(d.ito_paths));
    kv("stability.scales", list_to_string(d.stability_scales));
    kv("stability.paths", std::to_string(d.stability_paths));
    kv("stability.mixed_pair", d.stability_mixed_pair ? "true" : "false");
    return os.str();
}

} // namespace dnsim
