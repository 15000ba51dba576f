#include "dnsim/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dnsim/csv.hpp"
#include "dnsim/diagnostics.hpp"
#include "dnsim/errors.hpp"
#include "dnsim/manifest.hpp"
#include "dnsim/selfcheck.hpp"
#include "dnsim/svg.hpp"
#include "dnsim/version.hpp"

namespace dnsim {

namespace fs = std::filesystem;

namespace {

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    fs::path file(const std::string& name) {
        names_.push_back(name);
        return dir_ / name;
    }

    void finalize_manifest(const std::string& subcommand, std::uint64_t seed,
                           const std::string& config_text) {
        RunManifest m;
        m.subcommand = subcommand;
        m.version = kVersion;
        m.seed = seed;
        m.wall_clock = timestamp();
        m.config_text = config_text;
        for (const auto& n : names_) {
            ManifestEntry e;
            e.file = n;
            e.bytes = fs::file_size(dir_ / n);
            e.digest = file_digest(dir_ / n);
            m.outputs.push_back(e);
        }
        write_manifest(m, dir_ / "manifest.txt");
    }

    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<std::string> names_;
};

class KvWriter {
public:
    explicit KvWriter(const fs::path& path) : out_(path, std::ios::binary) {
        if (!out_) throw ConfigError("cannot open " + path.string());
    }
    void put(const std::string& key, const std::string& value) {
        out_ << key << " = " << value << "\n";
    }
    void put(const std::string& key, double value) { put(key, format_double(value)); }
    void put(const std::string& key, bool value) { put(key, value ? std::string("true") : std::string("false")); }

private:
    std::ofstream out_;
};

std::string path_file_name(std::uint64_t p) {
    std::ostringstream os;
    os << "path_";
    if (p < 100) os << (p < 10 ? "00" : "0");
    os << p << ".csv";
    return os.str();
}

int run_simulate(const RunOptions& opt, OutputSet& outs) {
    const SimConfig& cfg = opt.cfg.sim;

    // Per-path trajectories; each worker writes only its own file.
    std::vector<std::string> files(static_cast<std::size_t>(cfg.n_paths));
    for (int p = 0; p < cfg.n_paths; ++p)
        files[static_cast<std::size_t>(p)] = path_file_name(static_cast<std::uint64_t>(p));

    const auto summaries =
        map_paths(cfg, cfg.n_paths, cfg.workers,
                  [&](const TrajectoryRecord& rec, std::uint64_t p) {
                      write_trajectory_csv(outs.dir() / files[static_cast<std::size_t>(p)], rec,
                                           cfg);
                      return summarize(rec, cfg);
                  });
    for (const auto& f : files) outs.file(f); // register in manifest order

    {
        CsvWriter csv(outs.file("summary.csv"),
                      {"path", "sup_u_h", "terminal_u_h", "terminal_u_sq", "sup_energy_prox",
                       "sup_prox_v_pow", "dissipation"});
        for (const auto& s : summaries)
            csv.row_values({static_cast<double>(s.path), s.sup_u_h, s.terminal_u_h,
                            s.terminal_u_sq, s.sup_energy_prox, s.sup_prox_v_pow,
                            s.dissipation});
    }

    const DissipationReport diss = dissipation_report(cfg);
    {
        CsvWriter csv(outs.file("dissipation.csv"),
                      {"step", "t", "mean_moreau", "mean_diss_cum", "mean_work_cum",
                       "mean_trace_cum", "slack", "se"});
        for (std::size_t k = 0; k < diss.times.size(); ++k)
            csv.row_values({static_cast<double>(k), diss.times[k], diss.mean_moreau[k],
                            diss.mean_diss_cum[k], diss.mean_work_cum[k], diss.mean_trace_cum[k],
                            diss.slack[k], diss.se[k]});
    }

    auto agg = [&](auto member) {
        std::vector<double> xs;
        for (const auto& s : summaries) xs.push_back(s.*member);
        return mean_se(xs);
    };
    const MeanSe term = agg(&PathSummary::terminal_u_sq);
    const MeanSe supu = agg(&PathSummary::sup_u_h);
    {
        KvWriter kv(outs.file("summary.txt"));
        kv.put("simulate.n_paths", static_cast<double>(cfg.n_paths));
        kv.put("simulate.n_steps", static_cast<double>(cfg.n_steps()));
        kv.put("simulate.mean_terminal_u_sq", term.mean);
        kv.put("simulate.se_terminal_u_sq", term.se);
        kv.put("simulate.mean_sup_u_h", supu.mean);
        kv.put("dissipation.inequality_ok", diss.inequality_ok);

        // Optional sensitivity of the observables to doubling the mode
        // truncation of the driving noise.
        if (opt.cfg.diag.noise_sensitivity && cfg.noise.kind() != NoiseModel::Kind::Zero) {
            SimConfig dbl = cfg;
            const int m2 = 2 * cfg.noise.mode_count();
            dbl.noise = cfg.noise.kind() == NoiseModel::Kind::Additive
                            ? NoiseModel::additive(cfg.grid, m2, cfg.noise.sigma0(),
                                                   cfg.noise.decay())
                            : NoiseModel::superposition(cfg.grid, m2, cfg.noise.sigma0(),
                                                        cfg.noise.decay(), cfg.noise.phi());
            const EnsembleStats ref = simulate_ensemble(dbl);
            auto rel = [](double a, double b) {
                return std::abs(a - b) / (std::abs(b) + 1e-300);
            };
            kv.put("truncation.modes_doubled", static_cast<double>(m2));
            kv.put("truncation.delta_terminal_u_sq", rel(term.mean, ref.terminal_u_sq.mean));
            kv.put("truncation.delta_sup_u_h", rel(supu.mean, ref.sup_u_h.mean));
        }
    }

    if (opt.svg) {
        SvgSeries s;
        s.label = "E[moreau(u_t)]";
        s.x = diss.times;
        s.y = diss.mean_moreau;
        write_svg_chart(outs.file("energy.svg"), {s}, {"mean regularized energy", false, false});
    }
    if (!opt.quiet)
        std::cout << "simulate: " << cfg.n_paths << " paths, " << cfg.n_steps()
                  << " steps, E||u(T)||_H^2 = " << term.mean << " (se " << term.se << ")\n";
    return 0;
}

int run_sweep_lambda(const RunOptions& opt, OutputSet& outs) {
    const SimConfig& cfg = opt.cfg.sim;
    const DiagOptions& diag = opt.cfg.diag;

    const AprioriReport rep = apriori_sweep(cfg, diag.sweep_lambdas, diag.sweep_ratio_bound);
    {
        CsvWriter csv(outs.file("apriori.csv"),
                      {"lambda", "dt", "sup_E_energy_prox", "E_int_resolvent_rate_sq",
                       "E_int_yosida_rate_sq", "sup_E_prox_v_pow"});
        for (const auto& r : rep.rows)
            csv.row_values({r.lambda, r.dt, r.sup_mean_energy_prox, r.int_resolvent_rate_sq,
                            r.int_yosida_rate_sq, r.sup_mean_prox_v_pow});
    }

    const LambdaCauchyResult cau = lambda_cauchy(cfg, diag.sweep_lambdas);
    {
        CsvWriter csv(outs.file("cauchy.csv"), {"k", "lambda_hi", "lambda_lo", "e_k"});
        for (std::size_t k = 0; k < cau.e.size(); ++k)
            csv.row_values({static_cast<double>(k), cau.lambdas[k], cau.lambdas[k + 1],
                            cau.e[k]});
    }

    {
        KvWriter kv(outs.file("summary.txt"));
        for (std::size_t i = 0; i < rep.rows.size(); ++i) {
            const auto& r = rep.rows[i];
            const std::string sfx = "." + std::to_string(i);
            kv.put("apriori.lambda" + sfx, r.lambda);
            kv.put("apriori.q1" + sfx, r.sup_mean_energy_prox);
            kv.put("apriori.q2" + sfx, r.int_resolvent_rate_sq);
            kv.put("apriori.q3" + sfx, r.int_yosida_rate_sq);
            kv.put("apriori.q4" + sfx, r.sup_mean_prox_v_pow);
        }
        for (int q = 0; q < 4; ++q) {
            const std::string sfx = "." + std::to_string(q + 1);
            kv.put("apriori.ratio" + sfx, rep.ratios[static_cast<std::size_t>(q)]);
            kv.put("apriori.flagged" + sfx, rep.ratio_flagged[static_cast<std::size_t>(q)]);
            kv.put("apriori.monotone_growth" + sfx,
                   rep.monotone_growth[static_cast<std::size_t>(q)]);
        }
        for (std::size_t k = 0; k < cau.e.size(); ++k)
            kv.put("cauchy.e." + std::to_string(k), cau.e[k]);
        for (std::size_t k = 0; k < cau.ref_err.size(); ++k)
            kv.put("cauchy.ref_err." + std::to_string(k), cau.ref_err[k]);
        kv.put("cauchy.shared_dt", cau.shared_dt);
        kv.put("cauchy.nonincreasing", cau.nonincreasing);
        kv.put("cauchy.order_consecutive", cau.order_consecutive);
        kv.put("cauchy.has_reference", cau.has_reference);
        if (cau.has_reference) kv.put("cauchy.order_vs_reference", cau.order_vs_reference);
    }

    if (opt.svg) {
        SvgSeries s;
        s.label = "e_k";
        for (std::size_t k = 0; k < cau.e.size(); ++k) {
            s.x.push_back(cau.lambdas[k]);
            s.y.push_back(cau.e[k]);
        }
        write_svg_chart(outs.file("cauchy.svg"), {s},
                        {"lambda-coupling differences", true, true});
    }
    if (!opt.quiet) {
        std::cout << "sweep-lambda: " << rep.rows.size() << " levels";
        for (int q = 0; q < 4; ++q)
            std::cout << ", ratio q" << q + 1 << " = " << rep.ratios[static_cast<std::size_t>(q)];
        std::cout << "; cauchy nonincreasing = " << (cau.nonincreasing ? "yes" : "no") << "\n";
    }
    return 0;
}

int run_check_ito(const RunOptions& opt, OutputSet& outs) {
    const DiagOptions& diag = opt.cfg.diag;
    std::vector<ItoEnsembleResult> results;
    std::vector<double> dts;

    for (std::size_t i = 0; i < diag.ito_dts.size(); ++i) {
        SimConfig cfg = opt.cfg.sim;
        cfg.dt = diag.ito_dts[i];
        cfg.n_paths = diag.ito_paths;
        cfg.validate();
        results.push_back(ito_residual_ensemble(cfg));
        dts.push_back(cfg.dt);

        // Full ledger of path 0 at this resolution.
        const TrajectoryRecord rec = simulate(cfg, 0);
        const EnergyLedger led = ito_ledger(rec, cfg, true);
        CsvWriter csv(outs.file("ledger_dt" + std::to_string(i) + ".csv"),
                      {"step", "t", "lhs", "rhs", "residual", "trace_cum", "martingale_cum",
                       "work_cum"});
        for (std::size_t k = 0; k < led.lhs.size(); ++k)
            csv.row_values({static_cast<double>(k), rec.times[k], led.lhs[k], led.rhs[k],
                            led.residual[k], led.trace_cum[k], led.martingale_cum[k],
                            led.work_cum[k]});
    }

    {
        CsvWriter csv(outs.file("ito_ladder.csv"),
                      {"dt", "rms_sup_residual", "rms_sup_residual_no_trace", "martingale_mean",
                       "martingale_se"});
        for (std::size_t i = 0; i < results.size(); ++i)
            csv.row_values({dts[i], results[i].rms_sup_residual,
                            results[i].rms_sup_residual_no_trace,
                            results[i].martingale_final.mean, results[i].martingale_final.se});
    }

    double floor_no_trace = results.empty() ? 0.0 : results[0].rms_sup_residual_no_trace;
    for (const auto& r : results)
        floor_no_trace = std::min(floor_no_trace, r.rms_sup_residual_no_trace);
    {
        KvWriter kv(outs.file("summary.txt"));
        kv.put("ito.n_levels", static_cast<double>(results.size()));
        for (std::size_t i = 0; i < results.size(); ++i) {
            const std::string sfx = "." + std::to_string(i);
            kv.put("ito.dt" + sfx, dts[i]);
            kv.put("ito.rms" + sfx, results[i].rms_sup_residual);
            kv.put("ito.rms_no_trace" + sfx, results[i].rms_sup_residual_no_trace);
        }
        for (std::size_t i = 0; i + 1 < results.size(); ++i)
            kv.put("ito.decrease." + std::to_string(i),
                   results[i].rms_sup_residual / results[i + 1].rms_sup_residual);
        if (!results.empty()) {
            kv.put("ito.notrace_floor_ratio",
                   floor_no_trace / results.back().rms_sup_residual);
            kv.put("ito.martingale_mean", results.back().martingale_final.mean);
            kv.put("ito.martingale_se", results.back().martingale_final.se);
        }
    }

    if (opt.svg) {
        SvgSeries corrected{"rms sup residual", dts, {}};
        SvgSeries bare{"without trace term", dts, {}};
        for (const auto& r : results) {
            corrected.y.push_back(r.rms_sup_residual);
            bare.y.push_back(r.rms_sup_residual_no_trace);
        }
        write_svg_chart(outs.file("ito.svg"), {corrected, bare},
                        {"energy-ledger residual vs dt", true, true});
    }
    if (!opt.quiet) {
        std::cout << "check-ito:";
        for (std::size_t i = 0; i < results.size(); ++i)
            std::cout << " rms(dt=" << dts[i] << ") = " << results[i].rms_sup_residual;
        std::cout << "\n";
    }
    return 0;
}

int run_check_stability(const RunOptions& opt, OutputSet& outs) {
    const DiagOptions& diag = opt.cfg.diag;
    const StabilityResult res = stability_probe(opt.cfg.sim, diag.stability_scales,
                                                diag.stability_mixed_pair,
                                                diag.stability_paths);
    {
        CsvWriter csv(outs.file("stability.csv"),
                      {"scale", "sup_v_diff", "rate_l2_diff", "denom_v", "ratio"});
        for (const auto& p : res.pairs)
            csv.row_values({p.scale, p.sup_v_diff, p.rate_l2_diff, p.denom_v, p.ratio});
    }
    {
        KvWriter kv(outs.file("summary.txt"));
        kv.put("stability.k_hat", res.k_hat);
        kv.put("stability.k_pred", res.k_pred);
        kv.put("stability.scale_spread", res.scale_spread);
        kv.put("stability.c_a", res.c_a);
        kv.put("stability.c_b", res.c_b);
        kv.put("stability.norm_b", res.norm_b);
        kv.put("stability.c_f_lip", res.c_f_lip);
        kv.put("stability.c_g_tr", res.c_g_tr);
        kv.put("stability.bounded", res.k_hat <= res.k_pred);
    }
    if (!opt.quiet)
        std::cout << "check-stability: K_hat = " << res.k_hat << " <= K_pred = " << res.k_pred
                  << " (" << (res.k_hat <= res.k_pred ? "ok" : "VIOLATED") << ")\n";
    return 0;
}

int run_prox_test(const RunOptions& opt, OutputSet& outs) {
    const SimConfig& cfg = opt.cfg.sim;
    std::vector<CheckResult> all;
    auto absorb = [&](std::vector<CheckResult> rs) {
        for (auto& r : rs) all.push_back(std::move(r));
    };
    absorb(check_graph_properties(cfg.graph));
    absorb(check_energy_properties(cfg.energy));
    absorb(check_noise_properties(cfg.noise, cfg.grid));

    bool ok = true;
    {
        CsvWriter csv(outs.file("checks.csv"), {"suite", "name", "passed", "observed", "bound"});
        for (const auto& r : all) {
            csv.row({r.suite, r.name, r.passed ? "true" : "false", format_double(r.observed),
                     format_double(r.bound)});
            if (!r.passed) ok = false;
            if (!opt.quiet && !r.passed)
                std::cout << "FAIL " << r.suite << "/" << r.name << ": observed " << r.observed
                          << " bound " << r.bound << "\n";
        }
    }
    {
        KvWriter kv(outs.file("summary.txt"));
        kv.put("prox_test.checks", static_cast<double>(all.size()));
        kv.put("prox_test.all_passed", ok);
    }
    if (!opt.quiet)
        std::cout << "prox-test: " << all.size() << " checks, "
                  << (ok ? "all passed" : "FAILURES") << "\n";
    return ok ? 0 : 2;
}

} // namespace

void write_trajectory_csv(const fs::path& path, const TrajectoryRecord& rec,
                          const SimConfig& cfg) {
    std::vector<std::string> header{"step", "t"};
    const int n = cfg.grid.n();
    auto block = [&](const std::string& prefix) {
        for (int i = 1; i <= n; ++i) header.push_back(prefix + "_" + std::to_string(i));
    };
    if (cfg.output.u) block("u");
    if (cfg.output.du_d) block("du_d");
    if (cfg.output.v) block("v");

    CsvWriter csv(path, header);
    const std::size_t steps = rec.n_steps();
    for (std::size_t k = 0; k <= steps; ++k) {
        std::vector<double> row{static_cast<double>(k), rec.times[k]};
        auto append = [&](const GridFn& f) {
            for (double x : f) row.push_back(x);
        };
        if (cfg.output.u) append(rec.u[k]);
        if (cfg.output.du_d) append(rec.du_d[k]);
        if (cfg.output.v) append(rec.v[k]);
        csv.row_values(row);
    }
}

TrajectoryRecord load_trajectory_csv(const fs::path& path, const SimConfig& cfg,
                                     std::uint64_t path_index) {
    const CsvTable table = read_csv(path);
    const int first_u = table.column("u_1");
    if (first_u < 0)
        throw ConfigError("trajectory csv lacks the state block (u_*): " + path.string());
    const int n = cfg.grid.n();
    const std::size_t steps = table.rows.empty() ? 0 : table.rows.size() - 1;

    TrajectoryRecord rec;
    rec.path_index = path_index;
    rec.dt = cfg.dt;
    rec.times.resize(steps + 1);
    rec.u.resize(steps + 1);
    rec.prox.resize(steps + 1);
    rec.du_d.resize(steps + 1);
    rec.v.resize(steps + 1);
    rec.stoch_int.resize(steps + 1);
    rec.dw.resize(steps);

    for (std::size_t k = 0; k <= steps; ++k) {
        const auto& row = table.rows[k];
        rec.times[k] = parse_double(row[1]);
        GridFn u(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            u[static_cast<std::size_t>(i)] = parse_double(row[static_cast<std::size_t>(first_u + i)]);
        rec.u[k] = std::move(u);
    }

    const int m = cfg.noise.kind() == NoiseModel::Kind::Zero ? 0 : cfg.noise.mode_count();
    const WienerPathSpec w{cfg.seed, path_index, cfg.dt, m};
    GridFn stoch = cfg.grid.zero();
    rec.stoch_int[0] = stoch;
    for (std::size_t k = 0; k <= steps; ++k) {
        const DriftEval d = drift(cfg, rec.times[k], rec.u[k]);
        rec.prox[k] = d.prox;
        rec.du_d[k] = d.du_d;
        rec.v[k] = d.v;
        if (k < steps) {
            auto& dwk = rec.dw[k];
            dwk.resize(static_cast<std::size_t>(m));
            for (int j = 0; j < m; ++j)
                dwk[static_cast<std::size_t>(j)] = wiener_increment(w, k, j);
            axpy(stoch, 1.0, cfg.noise.apply(rec.times[k], d.prox, dwk));
            rec.stoch_int[k + 1] = stoch;
        }
    }
    return rec;
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return kv;
}

int run_subcommand(const RunOptions& opt) {
    OutputSet outs(opt.out_dir);
    int status = 0;
    if (opt.subcommand == "simulate")
        status = run_simulate(opt, outs);
    else if (opt.subcommand == "sweep-lambda")
        status = run_sweep_lambda(opt, outs);
    else if (opt.subcommand == "check-ito")
        status = run_check_ito(opt, outs);
    else if (opt.subcommand == "check-stability")
        status = run_check_stability(opt, outs);
    else if (opt.subcommand == "prox-test")
        status = run_prox_test(opt, outs);
    else
        throw ConfigError("unknown subcommand '" + opt.subcommand + "'");
    outs.finalize_manifest(opt.subcommand, opt.cfg.sim.seed, serialize_config(opt.cfg));
    return status;
}

int rerun_from_manifest(const fs::path& manifest_path, const fs::path& out_dir, bool quiet) {
    const RunManifest m = read_manifest(manifest_path);
    const RunOptions opt{m.subcommand, parse_config_text(m.config_text), out_dir, quiet, false};
    return run_subcommand(opt);
}

} // namespace dnsim
