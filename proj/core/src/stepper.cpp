#include "dnsim/stepper.hpp"

#include <cmath>
#include <sstream>

#include "dnsim/errors.hpp"
#include "dnsim/rng.hpp"

namespace dnsim {

DriftEval drift(const SimConfig& cfg, double t, const GridFn& u) {
    DriftEval d;
    d.prox = cfg.energy.prox(cfg.lambda, u);
    d.b_lambda = scaled(diff(u, d.prox), 1.0 / cfg.lambda);

    if (cfg.r_lambda == RLambda::ProxSmoother) {
        d.force = cfg.forcing.eval(t, cfg.energy.prox(cfg.lambda, d.prox), cfg.grid);
    } else {
        d.force = cfg.forcing.eval(t, d.prox, cfg.grid);
    }

    GridFn z = diff(d.force, d.b_lambda);
    d.du_d = apply_inverse_shifted(cfg.graph, cfg.lambda, z);
    d.v = apply_yosida(cfg.graph, cfg.lambda, d.du_d);
    const std::size_t n = z.size();

    // lambda*du_d + v + B_lambda(u) = F must hold to solver tolerance.
    GridFn r(n);
    for (std::size_t i = 0; i < n; ++i)
        r[i] = cfg.lambda * d.du_d[i] + d.v[i] + d.b_lambda[i] - d.force[i];
    const double rn = cfg.grid.norm_h(r);
    const double tol = 1e-9 * (1.0 + cfg.grid.norm_h(z));
    if (rn > tol) {
        std::ostringstream os;
        os << "drift: normal-form residual " << rn << " exceeds tolerance " << tol;
        throw SolverError(os.str());
    }
    return d;
}

GridFn step(const SimConfig& cfg, double t, const GridFn& u, std::span<const double> dw,
            DriftEval* out) {
    DriftEval d = drift(cfg, t, u);
    GridFn next = u;
    axpy(next, cfg.dt, d.du_d);
    const GridFn g = cfg.noise.apply(t, d.prox, dw);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] += g[i];
    if (out) *out = std::move(d);
    return next;
}

TrajectoryRecord simulate(const SimConfig& cfg, std::uint64_t path_index) {
    cfg.validate();
    const std::size_t n = cfg.n_steps();
    const int m = cfg.noise.kind() == NoiseModel::Kind::Zero ? 0 : cfg.noise.mode_count();
    const WienerPathSpec wspec{cfg.seed, path_index, cfg.dt, m};

    TrajectoryRecord rec;
    rec.path_index = path_index;
    rec.dt = cfg.dt;
    rec.times.resize(n + 1);
    rec.u.resize(n + 1);
    rec.prox.resize(n + 1);
    rec.du_d.resize(n + 1);
    rec.v.resize(n + 1);
    rec.stoch_int.resize(n + 1);
    rec.dw.resize(n);

    GridFn u = cfg.u0;
    GridFn drift_sum = cfg.grid.zero();
    GridFn stoch_sum = cfg.grid.zero();
    rec.times[0] = 0.0;
    rec.u[0] = u;
    rec.stoch_int[0] = stoch_sum;

    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        DriftEval d;
        try {
            d = drift(cfg, t, u);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "path " << path_index << ", step " << k << ": " << e.what();
            throw SolverError(os.str());
        }

        std::vector<double>& dwk = rec.dw[k];
        dwk.resize(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) dwk[static_cast<std::size_t>(j)] = wiener_increment(wspec, k, j);
        const GridFn g = cfg.noise.apply(t, d.prox, dwk);

        rec.prox[k] = std::move(d.prox);
        rec.du_d[k] = std::move(d.du_d);
        rec.v[k] = std::move(d.v);

        // State is always formed from the two running sums in this exact
        // order, which makes the Ito decomposition identity hold bitwise.
        axpy(drift_sum, 1.0, rec.du_d[k]);
        axpy(stoch_sum, 1.0, g);
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = cfg.u0[i] + cfg.dt * drift_sum[i] + stoch_sum[i];

        rec.times[k + 1] = static_cast<double>(k + 1) * cfg.dt;
        rec.u[k + 1] = u;
        rec.stoch_int[k + 1] = stoch_sum;
    }

    // Terminal drift evaluation completes the record (same map applied to the
    // final state; not used by the scheme itself).
    try {
        DriftEval d = drift(cfg, rec.times[n], u);
        rec.prox[n] = std::move(d.prox);
        rec.du_d[n] = std::move(d.du_d);
        rec.v[n] = std::move(d.v);
    } catch (const Error& e) {
        std::ostringstream os;
        os << "path " << path_index << ", step " << n << ": " << e.what();
        throw SolverError(os.str());
    }
    return rec;
}

PathSummary summarize(const TrajectoryRecord& rec, const SimConfig& cfg) {
    PathSummary s;
    s.path = rec.path_index;
    const std::size_t n = rec.n_steps();
    for (std::size_t k = 0; k <= n; ++k) {
        s.sup_u_h = std::max(s.sup_u_h, cfg.grid.norm_h(rec.u[k]));
        s.sup_energy_prox = std::max(s.sup_energy_prox, cfg.energy.value(rec.prox[k]));
        s.sup_prox_v_pow =
            std::max(s.sup_prox_v_pow, cfg.grid.seminorm_v_pow(rec.prox[k], cfg.energy.p()));
    }
    s.terminal_u_h = cfg.grid.norm_h(rec.u[n]);
    s.terminal_u_sq = s.terminal_u_h * s.terminal_u_h;
    for (std::size_t k = 0; k < n; ++k)
        s.dissipation += rec.dt * cfg.grid.inner_h(rec.v[k], rec.du_d[k]);
    return s;
}

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    if (xs.empty()) return r;
    double s = 0.0;
    for (double x : xs) s += x;
    r.mean = s / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double q = 0.0;
        for (double x : xs) q += (x - r.mean) * (x - r.mean);
        const double var = q / static_cast<double>(xs.size() - 1);
        r.se = std::sqrt(var / static_cast<double>(xs.size()));
    }
    return r;
}

EnsembleStats simulate_ensemble(const SimConfig& cfg) {
    EnsembleStats stats;
    stats.paths = map_paths(cfg, cfg.n_paths, cfg.workers,
                            [&](const TrajectoryRecord& rec, std::uint64_t) {
                                return summarize(rec, cfg);
                            });
    auto collect = [&](auto member) {
        std::vector<double> xs;
        xs.reserve(stats.paths.size());
        for (const auto& p : stats.paths) xs.push_back(p.*member);
        return mean_se(xs);
    };
    stats.terminal_u_sq = collect(&PathSummary::terminal_u_sq);
    stats.sup_u_h = collect(&PathSummary::sup_u_h);
    stats.sup_energy_prox = collect(&PathSummary::sup_energy_prox);
    stats.dissipation = collect(&PathSummary::dissipation);
    return stats;
}

} // namespace dnsim
