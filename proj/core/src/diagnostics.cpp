#include "dnsim/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dnsim/errors.hpp"
#include "dnsim/rng.hpp"

namespace dnsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double lstsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    return denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

/// Eigenvalues of the discrete Dirichlet Laplacian -D^2 on the grid.
double laplacian_eigenvalue(const Grid& g, int j) {
    const double s = std::sin(0.5 * j * kPi * g.h());
    return 4.0 / (g.h() * g.h()) * s * s;
}

GridFn sine_mode(const Grid& g, int j) {
    GridFn v(static_cast<std::size_t>(g.n()));
    for (int i = 0; i < g.n(); ++i)
        v[static_cast<std::size_t>(i)] = std::sqrt(2.0) * std::sin(j * kPi * g.node(i));
    return v;
}

} // namespace

EnergyLedger ito_ledger(const TrajectoryRecord& rec, const SimConfig& cfg,
                        bool include_trace) {
    const std::size_t n = rec.n_steps();
    const double lam = cfg.lambda;
    EnergyLedger led;
    led.lhs.resize(n + 1);
    led.rhs.resize(n + 1);
    led.residual.resize(n + 1);
    led.trace_cum.resize(n + 1);
    led.martingale_cum.resize(n + 1);
    led.work_cum.resize(n + 1);

    const double moreau0 = cfg.energy.moreau_from(lam, rec.u[0], rec.prox[0]);
    led.lhs[0] = moreau0;
    led.rhs[0] = moreau0;

    double work = 0.0, trace = 0.0, mart = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = rec.times[k];
        const GridFn b_lam = scaled(diff(rec.u[k], rec.prox[k]), 1.0 / lam);

        work += rec.dt * cfg.grid.inner_h(rec.du_d[k], b_lam);
        if (include_trace) {
            const auto modes = cfg.noise.mode_vectors(t, rec.prox[k]);
            trace += 0.5 * rec.dt * cfg.energy.trace_correction_from(lam, rec.prox[k], modes);
        }
        mart += cfg.grid.inner_h(b_lam, cfg.noise.apply(t, rec.prox[k], rec.dw[k]));

        const double moreau_next = cfg.energy.moreau_from(lam, rec.u[k + 1], rec.prox[k + 1]);
        led.work_cum[k + 1] = work;
        led.trace_cum[k + 1] = trace;
        led.martingale_cum[k + 1] = mart;
        led.lhs[k + 1] = moreau_next - work;
        led.rhs[k + 1] = moreau0 + trace + mart;
    }
    for (std::size_t k = 0; k <= n; ++k) {
        led.residual[k] = led.lhs[k] - led.rhs[k];
        led.sup_abs_residual = std::max(led.sup_abs_residual, std::abs(led.residual[k]));
    }
    return led;
}

ItoEnsembleResult ito_residual_ensemble(const SimConfig& cfg) {
    struct PerPath {
        double sup = 0.0;
        double sup_no_trace = 0.0;
        double mart_final = 0.0;
    };
    const auto per_path = map_paths(cfg, cfg.n_paths, cfg.workers,
                                    [&](const TrajectoryRecord& rec, std::uint64_t) {
                                        PerPath r;
                                        const EnergyLedger full = ito_ledger(rec, cfg, true);
                                        const EnergyLedger bare = ito_ledger(rec, cfg, false);
                                        r.sup = full.sup_abs_residual;
                                        r.sup_no_trace = bare.sup_abs_residual;
                                        r.mart_final = full.martingale_cum.back();
                                        return r;
                                    });
    ItoEnsembleResult out;
    double s2 = 0.0, s2nt = 0.0;
    std::vector<double> mart;
    mart.reserve(per_path.size());
    for (const auto& p : per_path) {
        s2 += p.sup * p.sup;
        s2nt += p.sup_no_trace * p.sup_no_trace;
        mart.push_back(p.mart_final);
    }
    const double n = static_cast<double>(per_path.size());
    out.rms_sup_residual = std::sqrt(s2 / n);
    out.rms_sup_residual_no_trace = std::sqrt(s2nt / n);
    out.martingale_final = mean_se(mart);
    return out;
}

namespace {

/// Rounds dt down so the horizon is an exact number of steps.
double fitted_dt(double T, double dt_target) {
    const auto n = static_cast<std::size_t>(std::ceil(T / dt_target - 1e-12));
    return T / static_cast<double>(std::max<std::size_t>(n, 1));
}

} // namespace

AprioriReport apriori_sweep(const SimConfig& base, std::span<const double> lambdas,
                            double ratio_bound) {
    AprioriReport report;
    report.ratio_bound = ratio_bound;

    for (double lam : lambdas) {
        SimConfig cfg = base;
        cfg.lambda = lam;
        cfg.dt = fitted_dt(base.T, base.c_stab * lam * lam);

        const std::size_t n = cfg.n_steps();
        struct PerPath {
            std::vector<double> energy_by_n;
            std::vector<double> vpow_by_n;
            double int_resolvent = 0.0;
            double int_yosida = 0.0;
        };
        const auto per_path = map_paths(
            cfg, cfg.n_paths, cfg.workers, [&](const TrajectoryRecord& rec, std::uint64_t) {
                PerPath r;
                r.energy_by_n.resize(n + 1);
                r.vpow_by_n.resize(n + 1);
                for (std::size_t k = 0; k <= n; ++k) {
                    r.energy_by_n[k] = cfg.energy.value(rec.prox[k]);
                    r.vpow_by_n[k] = cfg.grid.seminorm_v_pow(rec.prox[k], cfg.energy.p());
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const GridFn res = apply_resolvent(cfg.graph, lam, rec.du_d[k]);
                    const double rn = cfg.grid.norm_h(res);
                    const double vn = cfg.grid.norm_h(rec.v[k]);
                    r.int_resolvent += cfg.dt * rn * rn;
                    r.int_yosida += cfg.dt * vn * vn;
                }
                return r;
            });

        AprioriRow row;
        row.lambda = lam;
        row.dt = cfg.dt;
        const double np = static_cast<double>(per_path.size());
        for (std::size_t k = 0; k <= n; ++k) {
            double me = 0.0, mv = 0.0;
            for (const auto& p : per_path) {
                me += p.energy_by_n[k];
                mv += p.vpow_by_n[k];
            }
            row.sup_mean_energy_prox = std::max(row.sup_mean_energy_prox, me / np);
            row.sup_mean_prox_v_pow = std::max(row.sup_mean_prox_v_pow, mv / np);
        }
        for (const auto& p : per_path) {
            row.int_resolvent_rate_sq += p.int_resolvent / np;
            row.int_yosida_rate_sq += p.int_yosida / np;
        }
        report.rows.push_back(row);
    }

    auto column = [&](int q) {
        std::vector<double> xs;
        for (const auto& r : report.rows)
            xs.push_back(q == 0   ? r.sup_mean_energy_prox
                         : q == 1 ? r.int_resolvent_rate_sq
                         : q == 2 ? r.int_yosida_rate_sq
                                  : r.sup_mean_prox_v_pow);
        return xs;
    };
    for (int q = 0; q < 4; ++q) {
        const auto xs = column(q);
        const double lo = *std::min_element(xs.begin(), xs.end());
        const double hi = *std::max_element(xs.begin(), xs.end());
        report.ratios[static_cast<std::size_t>(q)] = lo > 0.0 ? hi / lo : 1.0;
        report.ratio_flagged[static_cast<std::size_t>(q)] =
            report.ratios[static_cast<std::size_t>(q)] > ratio_bound;
        // Monotone blow-up as lambda decreases: every step grows, the growth
        // does not decelerate, and the total change is beyond noise level.
        // A sequence converging to its lambda->0 limit grows with shrinking
        // factors and is not flagged.
        bool growing = xs.size() >= 2;
        for (std::size_t k = 0; k + 1 < xs.size(); ++k)
            if (xs[k + 1] <= xs[k]) growing = false;
        bool accelerating = growing;
        for (std::size_t k = 0; k + 2 < xs.size(); ++k) {
            const double f0 = xs[k + 1] / xs[k];
            const double f1 = xs[k + 2] / xs[k + 1];
            if (f1 < 0.95 * f0) accelerating = false;
        }
        report.monotone_growth[static_cast<std::size_t>(q)] =
            growing && accelerating && xs.back() > 1.10 * xs.front();
    }
    return report;
}

std::optional<std::vector<GridFn>> exact_linear_reference(const SimConfig& cfg,
                                                          std::size_t n_steps, double dt) {
    const bool linear = cfg.energy.is_linear() &&
                        cfg.graph.kind() == MonotoneGraph::Kind::Linear &&
                        cfg.graph.param_a() > 0.0 &&
                        cfg.noise.kind() == NoiseModel::Kind::Zero && cfg.forcing.is_zero();
    if (!linear) return std::nullopt;

    const int n = cfg.grid.n();
    const double a = cfg.graph.param_a();
    const double c0 = cfg.energy.beta0_name() == "quadratic" ? 1.0 : 0.0;

    std::vector<GridFn> modes;
    std::vector<double> rates, coeffs;
    for (int j = 1; j <= n; ++j) {
        GridFn vj = sine_mode(cfg.grid, j);
        const double kj = laplacian_eigenvalue(cfg.grid, j) + c0;
        coeffs.push_back(cfg.grid.inner_h(cfg.u0, vj));
        rates.push_back(kj / a);
        modes.push_back(std::move(vj));
    }

    std::vector<GridFn> ref(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        GridFn u = cfg.grid.zero();
        for (int j = 0; j < n; ++j) {
            const double amp = coeffs[static_cast<std::size_t>(j)] *
                               std::exp(-rates[static_cast<std::size_t>(j)] * t);
            if (amp != 0.0) axpy(u, amp, modes[static_cast<std::size_t>(j)]);
        }
        ref[k] = std::move(u);
    }
    return ref;
}

LambdaCauchyResult lambda_cauchy(const SimConfig& base, std::span<const double> lambdas,
                                 std::uint64_t path_index) {
    if (lambdas.size() < 2) throw ConfigError("lambda_cauchy: need at least two lambda values");
    LambdaCauchyResult out;
    out.lambdas.assign(lambdas.begin(), lambdas.end());

    double lam_min = lambdas[0];
    for (double l : lambdas) lam_min = std::min(lam_min, l);
    out.shared_dt = fitted_dt(base.T, std::min(base.dt, base.c_stab * lam_min * lam_min));

    auto run = [&](double lam) {
        SimConfig cfg = base;
        cfg.lambda = lam;
        cfg.dt = out.shared_dt;
        return simulate(cfg, path_index);
    };

    const auto ref = exact_linear_reference(
        base, static_cast<std::size_t>(std::llround(base.T / out.shared_dt)), out.shared_dt);
    out.has_reference = ref.has_value();

    TrajectoryRecord prev = run(lambdas[0]);
    auto sup_diff = [&](const std::vector<GridFn>& a, const std::vector<GridFn>& b) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k)
            s = std::max(s, base.grid.norm_h(diff(a[k], b[k])));
        return s;
    };
    if (ref) out.ref_err.push_back(sup_diff(prev.u, *ref));

    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        TrajectoryRecord cur = run(lambdas[i]);
        out.e.push_back(sup_diff(prev.u, cur.u));
        if (ref) out.ref_err.push_back(sup_diff(cur.u, *ref));
        prev = std::move(cur);
    }

    out.nonincreasing = true;
    for (std::size_t k = 0; k + 1 < out.e.size(); ++k)
        if (out.e[k + 1] > 1.10 * out.e[k]) out.nonincreasing = false;

    {
        std::vector<double> lx, ly;
        for (std::size_t k = 0; k < out.e.size(); ++k) {
            if (out.e[k] > 0.0) {
                lx.push_back(std::log(out.lambdas[k]));
                ly.push_back(std::log(out.e[k]));
            }
        }
        if (lx.size() >= 2) out.order_consecutive = lstsq_slope(lx, ly);
    }
    if (ref) {
        std::vector<double> lx, ly;
        for (std::size_t k = 0; k < out.ref_err.size(); ++k) {
            if (out.ref_err[k] > 0.0) {
                lx.push_back(std::log(out.lambdas[k]));
                ly.push_back(std::log(out.ref_err[k]));
            }
        }
        if (lx.size() >= 2) out.order_vs_reference = lstsq_slope(lx, ly);
    }
    return out;
}

namespace {

/// Largest generalized eigenvalue of B x = theta * K_V x by power iteration,
/// i.e. the V->V* operator norm of the (constant) energy Hessian.
double operator_norm_v(const SimConfig& cfg) {
    const TridiagonalMatrix b = cfg.energy.hessian(cfg.grid.zero());
    // Pure gradient part: quadratic edge potential, no node potential.
    const EnergyModel vpart =
        EnergyModel::preset(cfg.grid, EnergyModel::Beta1::Quadratic, EnergyModel::Beta0::Zero, 2.0);
    const TridiagonalFactor kv(vpart.hessian(cfg.grid.zero()));

    GridFn x(static_cast<std::size_t>(cfg.grid.n()), 1.0);
    double theta = 1.0;
    for (int it = 0; it < 60; ++it) {
        GridFn y = kv.solve(b.apply(x));
        const double nn = cfg.grid.norm_h(y);
        if (nn == 0.0) break;
        for (auto& v : y) v /= nn;
        x = std::move(y);
        const GridFn bx = b.apply(x);
        const GridFn kx = vpart.hessian(cfg.grid.zero()).apply(x);
        theta = cfg.grid.inner_h(bx, x) / cfg.grid.inner_h(kx, x);
    }
    return theta;
}

} // namespace

StabilityResult stability_probe(const SimConfig& cfg, std::span<const double> scales,
                                bool include_mixed_pair, int n_paths) {
    if (!cfg.energy.is_linear())
        throw ConfigError("check-stability requires the quadratic (linear-gradient) energy");
    const bool graph_ok =
        (cfg.graph.kind() == MonotoneGraph::Kind::Linear && cfg.graph.param_a() > 0.0) ||
        (cfg.graph.kind() == MonotoneGraph::Kind::SignPlusLinear && cfg.graph.param_a() > 0.0);
    if (!graph_ok)
        throw ConfigError("check-stability requires a strongly monotone dissipation graph (a > 0)");
    if (!cfg.noise.is_linear())
        throw ConfigError("check-stability requires linear noise (zero or superposition with identity link)");
    if (cfg.forcing.kind() == ForcingModel::Kind::Custom)
        throw ConfigError("check-stability requires zero or affine forcing");

    StabilityResult res;
    res.c_a = cfg.graph.param_a();
    res.c_b = cfg.energy.c_b();
    res.norm_b = operator_norm_v(cfg);

    const double h = cfg.grid.h();
    const double poincare = h / (2.0 * std::sin(0.5 * kPi * h)); // 1/sqrt(min eig of -D^2)
    if (cfg.forcing.kind() == ForcingModel::Kind::Affine) {
        const double lf =
            std::abs(cfg.forcing.b()) * poincare + std::abs(cfg.forcing.c());
        res.c_f_lip = lf * lf;
    }
    if (cfg.noise.kind() == NoiseModel::Kind::Superposition) {
        double s = 0.0;
        for (int j = 0; j < cfg.noise.mode_count(); ++j) {
            const GridFn ej = sine_mode(cfg.grid, j + 1);
            double einf = 0.0, deinf = 0.0;
            for (double v : ej) einf = std::max(einf, std::abs(v));
            for (double d : cfg.grid.forward_diff(ej)) deinf = std::max(deinf, std::abs(d));
            const double factor = einf + poincare * deinf;
            s += cfg.noise.sigma(j) * cfg.noise.sigma(j) * factor * factor;
        }
        res.c_g_tr = res.norm_b * s;
    }

    const double kappa = (res.c_f_lip / res.c_a + res.c_g_tr) / res.c_b;
    res.k_pred = std::exp(0.5 * kappa * cfg.T) *
                 (std::sqrt(res.norm_b / res.c_b) + std::sqrt(res.norm_b / res.c_a));

    const std::size_t n = cfg.n_steps();
    auto run_pair = [&](const GridFn& u01, const GridFn& u02, double scale_tag) {
        StabilityPairResult pr;
        pr.scale = scale_tag;
        pr.denom_v = cfg.grid.seminorm_v(diff(u01, u02), 2.0);
        if (pr.denom_v == 0.0) return pr; // degenerate pair, skipped by caller

        std::vector<double> sum_v_sq(n + 1, 0.0);
        double sum_rate = 0.0;
        for (int p = 0; p < n_paths; ++p) {
            SimConfig c1 = cfg;
            c1.u0 = u01;
            SimConfig c2 = cfg;
            c2.u0 = u02;
            const TrajectoryRecord r1 = simulate(c1, static_cast<std::uint64_t>(p));
            const TrajectoryRecord r2 = simulate(c2, static_cast<std::uint64_t>(p));
            for (std::size_t k = 0; k <= n; ++k) {
                const double dv = cfg.grid.seminorm_v(diff(r1.u[k], r2.u[k]), 2.0);
                sum_v_sq[k] += dv * dv;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const double dr = cfg.grid.norm_h(diff(r1.du_d[k], r2.du_d[k]));
                sum_rate += cfg.dt * dr * dr;
            }
        }
        for (std::size_t k = 0; k <= n; ++k)
            pr.sup_v_diff =
                std::max(pr.sup_v_diff, std::sqrt(sum_v_sq[k] / static_cast<double>(n_paths)));
        pr.rate_l2_diff = std::sqrt(sum_rate / static_cast<double>(n_paths));
        pr.ratio = (pr.sup_v_diff + pr.rate_l2_diff) / pr.denom_v;
        return pr;
    };

    std::vector<double> homogeneous_ratios;
    for (double s : scales) {
        if (s == 1.0) continue;
        const StabilityPairResult pr = run_pair(cfg.u0, scaled(cfg.u0, s), s);
        if (pr.denom_v == 0.0) continue;
        homogeneous_ratios.push_back(pr.ratio);
        res.pairs.push_back(pr);
    }
    if (include_mixed_pair) {
        GridFn other = sine_mode(cfg.grid, 2);
        const double target = cfg.grid.seminorm_v(cfg.u0, 2.0);
        const double s = cfg.grid.seminorm_v(other, 2.0);
        if (s > 0.0)
            for (auto& x : other) x *= target / s;
        res.pairs.push_back(run_pair(cfg.u0, other, 0.0));
    }

    for (const auto& pr : res.pairs) res.k_hat = std::max(res.k_hat, pr.ratio);
    if (homogeneous_ratios.size() >= 2) {
        const double lo = *std::min_element(homogeneous_ratios.begin(), homogeneous_ratios.end());
        const double hi = *std::max_element(homogeneous_ratios.begin(), homogeneous_ratios.end());
        const double mid = 0.5 * (lo + hi);
        res.scale_spread = mid > 0.0 ? (hi - lo) / mid : 0.0;
    }
    return res;
}

DissipationReport dissipation_report(const SimConfig& cfg) {
    const std::size_t n = cfg.n_steps();
    struct PerPath {
        std::vector<double> slack;
        std::vector<double> moreau, diss, work, trace;
    };
    const auto per_path = map_paths(
        cfg, cfg.n_paths, cfg.workers, [&](const TrajectoryRecord& rec, std::uint64_t) {
            PerPath r;
            r.slack.resize(n + 1);
            r.moreau.resize(n + 1);
            r.diss.resize(n + 1);
            r.work.resize(n + 1);
            r.trace.resize(n + 1);
            const double m0 = cfg.energy.moreau_from(cfg.lambda, rec.u[0], rec.prox[0]);
            double diss = 0.0, work = 0.0, trace = 0.0;
            r.moreau[0] = m0;
            for (std::size_t k = 0; k < n; ++k) {
                const double t = rec.times[k];
                diss += rec.dt * cfg.grid.inner_h(rec.v[k], rec.du_d[k]);
                const GridFn force =
                    (cfg.r_lambda == RLambda::ProxSmoother)
                        ? cfg.forcing.eval(t, cfg.energy.prox(cfg.lambda, rec.prox[k]), cfg.grid)
                        : cfg.forcing.eval(t, rec.prox[k], cfg.grid);
                work += rec.dt * cfg.grid.inner_h(force, rec.du_d[k]);
                const auto modes = cfg.noise.mode_vectors(t, rec.prox[k]);
                trace += 0.5 * rec.dt *
                         cfg.energy.trace_correction_from(cfg.lambda, rec.prox[k], modes);
                const double m =
                    cfg.energy.moreau_from(cfg.lambda, rec.u[k + 1], rec.prox[k + 1]);
                r.moreau[k + 1] = m;
                r.diss[k + 1] = diss;
                r.work[k + 1] = work;
                r.trace[k + 1] = trace;
                r.slack[k + 1] = (m + diss) - (m0 + work + trace);
            }
            return r;
        });

    DissipationReport rep;
    rep.times.resize(n + 1);
    rep.mean_moreau.assign(n + 1, 0.0);
    rep.mean_diss_cum.assign(n + 1, 0.0);
    rep.mean_work_cum.assign(n + 1, 0.0);
    rep.mean_trace_cum.assign(n + 1, 0.0);
    rep.slack.assign(n + 1, 0.0);
    rep.se.assign(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k) rep.times[k] = static_cast<double>(k) * cfg.dt;

    for (std::size_t k = 0; k <= n; ++k) {
        std::vector<double> slacks;
        slacks.reserve(per_path.size());
        for (const auto& p : per_path) {
            rep.mean_moreau[k] += p.moreau[k];
            rep.mean_diss_cum[k] += p.diss[k];
            rep.mean_work_cum[k] += p.work[k];
            rep.mean_trace_cum[k] += p.trace[k];
            slacks.push_back(p.slack[k]);
        }
        const double np = static_cast<double>(per_path.size());
        rep.mean_moreau[k] /= np;
        rep.mean_diss_cum[k] /= np;
        rep.mean_work_cum[k] /= np;
        rep.mean_trace_cum[k] /= np;
        const MeanSe ms = mean_se(slacks);
        rep.slack[k] = ms.mean;
        rep.se[k] = ms.se;
    }
    rep.inequality_ok = true;
    const double eps = 1e-12 * (1.0 + std::abs(rep.mean_moreau[0]));
    for (std::size_t k = 0; k <= n; ++k)
        if (rep.slack[k] > 3.0 * rep.se[k] + eps) rep.inequality_ok = false;
    return rep;
}

} // namespace dnsim
