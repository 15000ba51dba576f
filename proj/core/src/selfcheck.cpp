#include "dnsim/selfcheck.hpp"

#include <algorithm>
#include <cmath>

#include "dnsim/rng.hpp"

namespace dnsim {

namespace {

const std::vector<double> kLambdas{1.0, 0.5, 0.25, 0.1};

std::vector<double> dyadic_ladder(int levels) {
    std::vector<double> l;
    double v = 1.0;
    for (int i = 0; i <= levels; ++i) {
        l.push_back(v);
        v *= 0.5;
    }
    return l;
}

/// Worst-over-samples tracker: a check passes when the observed extreme
/// stays within its bound.
struct Extreme {
    double value = 0.0;
    void update(double x) { value = std::max(value, x); }
};

/// Sampling interval for a graph: the whole range unless the graph has a
/// bounded domain (piecewise-linear with vertical end segments).
std::pair<double, double> graph_domain(const MonotoneGraph& g, double range) {
    double lo = -range, hi = range;
    if (g.kind() == MonotoneGraph::Kind::PiecewiseLinear) {
        const auto& p = g.points();
        if (p.size() >= 2 && p[0].x == p[1].x) lo = std::max(lo, p[0].x);
        if (p.size() >= 2 && p[p.size() - 2].x == p.back().x) hi = std::min(hi, p.back().x);
    }
    return {lo, hi};
}

double minimal_section(const Interval& iv) {
    if (iv.lo <= 0.0 && 0.0 <= iv.hi) return 0.0;
    return std::min(std::abs(iv.lo), std::abs(iv.hi));
}

/// Smooth random grid function: a few low sine modes with O(1) amplitudes.
GridFn smooth_sample(const Grid& grid, KeyedUniform& rng, double amplitude) {
    GridFn u = grid.zero();
    const double pi = 3.14159265358979323846;
    const int modes = std::min(4, grid.n());
    for (int j = 1; j <= modes; ++j) {
        const double c = rng.range(-amplitude, amplitude);
        for (int i = 0; i < grid.n(); ++i)
            u[static_cast<std::size_t>(i)] += c * std::sin(j * pi * grid.node(i));
    }
    return u;
}

GridFn rough_sample(const Grid& grid, KeyedUniform& rng, double amplitude) {
    GridFn u = grid.zero();
    for (auto& x : u) x = rng.range(-amplitude, amplitude);
    return u;
}

} // namespace

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

std::vector<CheckResult> check_graph_properties(const MonotoneGraph& g,
                                                const CheckParams& params) {
    std::vector<CheckResult> out;
    KeyedUniform rng(params.seed);
    const auto [dlo, dhi] = graph_domain(g, params.range);
    const std::string suite = "graph:" + g.kind_name();

    Extreme nonexp, lip, select, roundtrip, conv_mono, conv_limit, eval_mono;
    Extreme coercive, bounded;
    const auto ladder = dyadic_ladder(10);

    for (int s = 0; s < params.samples; ++s) {
        const double y1 = rng.range(dlo, dhi);
        const double y2 = rng.range(dlo, dhi);
        for (double lam : kLambdas) {
            const double j1 = g.resolvent(lam, y1);
            const double j2 = g.resolvent(lam, y2);
            nonexp.update(std::abs(j1 - j2) - std::abs(y1 - y2));
            const double a1 = g.yosida(lam, y1);
            const double a2 = g.yosida(lam, y2);
            lip.update(std::abs(a1 - a2) - std::abs(y1 - y2) / lam);
            select.update(std::max(g.eval(j1).lo - a1, a1 - g.eval(j1).hi));

            const double x = g.inverse_shifted(lam, y1);
            roundtrip.update(std::abs(lam * x + g.yosida(lam, x) - y1));
        }

        // |J_lam(y) - y| shrinks monotonically along the dyadic ladder and is
        // controlled by lam times the minimal section at y.
        double prev = -1.0;
        double d_last = 0.0;
        for (double lam : ladder) {
            const double d = std::abs(g.resolvent(lam, y1) - y1);
            if (prev >= 0.0) conv_mono.update(d - prev - 1e-12);
            prev = d;
            d_last = d;
        }
        conv_limit.update(d_last - ladder.back() * minimal_section(g.eval(y1)) - 1e-10);

        // Graph monotonicity at the evaluation level.
        const double xa = std::min(y1, y2), xb = std::max(y1, y2);
        if (xa < xb) eval_mono.update(g.eval(xa).hi - g.eval(xb).lo);

        if (g.coercivity()) {
            const double c = *g.coercivity();
            const Interval iv = g.eval(y1);
            const double worst = y1 >= 0.0 ? iv.lo * y1 : iv.hi * y1;
            coercive.update(c * y1 * y1 - 1.0 / c - worst);
        }
        if (g.linear_bound()) {
            const Interval iv = g.eval(y1);
            const double mag = std::max(std::abs(iv.lo), std::abs(iv.hi));
            bounded.update(mag - *g.linear_bound() * (1.0 + std::abs(y1)));
        }
    }

    auto push = [&](const std::string& name, double observed, double bound) {
        out.push_back({suite, name, observed <= bound, observed, bound});
    };
    push("resolvent_nonexpansive", nonexp.value, 1e-10);
    push("yosida_lipschitz", lip.value, 1e-10);
    push("yosida_selection", select.value, 1e-10);
    push("inverse_shifted_roundtrip", roundtrip.value, 1e-10);
    push("resolvent_convergence_monotone", conv_mono.value, 0.0);
    push("resolvent_convergence_rate", conv_limit.value, 0.0);
    push("eval_monotone", eval_mono.value, 1e-12);
    if (g.coercivity()) push("declared_c_A", coercive.value, 1e-10);
    if (g.linear_bound()) push("declared_C_A", bounded.value, 1e-9);
    return out;
}

std::vector<CheckResult> check_energy_properties(const EnergyModel& m,
                                                 const CheckParams& params) {
    std::vector<CheckResult> out;
    KeyedUniform rng(params.seed);
    const Grid& grid = m.grid();
    const std::string suite = "energy:" + m.beta1_name() + "+" + m.beta0_name();
    const int samples = std::max(8, params.samples / 25);

    Extreme nonexp, optimality, strong, contraction, moreau_range, moreau_mono;
    Extreme coercivity, jac_contract, jac_roundtrip, jac_psd, hess_psd;
    Extreme grad_fd, hess_fd, yosida_consistent;
    double m1 = 0.0, m_ladder = 0.0;

    for (int s = 0; s < samples; ++s) {
        const GridFn x1 = ((s % 2) == 0) ? smooth_sample(grid, rng, 2.0)
                                         : rough_sample(grid, rng, 2.0);
        const GridFn x2 = smooth_sample(grid, rng, 2.0);

        for (double lam : kLambdas) {
            const GridFn j1 = m.prox(lam, x1);
            const GridFn j2 = m.prox(lam, x2);
            nonexp.update(grid.norm_h(diff(j1, j2)) - grid.norm_h(diff(x1, x2)));

            GridFn r = m.gradient(j1);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = j1[i] + lam * r[i] - x1[i];
            optimality.update(grid.norm_h(r) / (1.0 + grid.norm_h(x1)));

            const GridFn dj = diff(j1, j2);
            strong.update(grid.inner_h(dj, dj) +
                          lam * m.c_b() * grid.seminorm_v_pow(dj, m.p()) -
                          grid.inner_h(diff(x1, x2), dj));

            const double nj = grid.norm_h(j1), nx = grid.norm_h(x1);
            contraction.update(0.5 * nj * nj + lam * m.c_b() * grid.seminorm_v_pow(j1, m.p()) -
                               0.5 * nx * nx);

            const double env = m.moreau(lam, x1);
            moreau_range.update(-env);
            moreau_range.update(env - m.value(x1));
            moreau_mono.update(env - m.moreau(0.5 * lam, x1));

            const GridFn bl = m.yosida(lam, x1);
            yosida_consistent.update(grid.norm_h(diff(bl, m.gradient(j1))));

            const GridFn hvec = smooth_sample(grid, rng, 1.0);
            const ProxJacobian jp = m.jacobian_prox_from(lam, j1);
            const GridFn jh = jp.apply(hvec);
            jac_contract.update(grid.norm_h(jh) - grid.norm_h(hvec));
            GridFn back = jp.hessian_at_prox().apply(jh);
            for (std::size_t i = 0; i < back.size(); ++i) back[i] = jh[i] + lam * back[i];
            jac_roundtrip.update(grid.norm_h(diff(back, hvec)) /
                                 (1.0 + grid.norm_h(hvec)));
            const YosidaJacobian jy = m.jacobian_yosida_from(lam, j1);
            jac_psd.update(-grid.inner_h(jy.apply(hvec), hvec));
        }

        coercivity.update(m.c_b() / m.p() * grid.seminorm_v_pow(x1, m.p()) - m.value(x1));
        hess_psd.update(-grid.inner_h(m.hessian(x1).apply(x2), x2));

        // V-bound across the dyadic ladder: sup ||J_lam(x)||_V / (1+||x||_V).
        const double nv = grid.seminorm_v(x1, m.p());
        for (double lam : dyadic_ladder(10)) {
            const double ratio = grid.seminorm_v(m.prox(lam, x1), m.p()) / (1.0 + nv);
            m_ladder = std::max(m_ladder, ratio);
            if (lam == 1.0) m1 = std::max(m1, ratio);
        }

        // Finite-difference consistency of gradient and Hessian on smooth data.
        const GridFn u = smooth_sample(grid, rng, 1.5);
        const GridFn dir = smooth_sample(grid, rng, 1.0);
        const double eps = 1e-6;
        GridFn up = u, um = u;
        axpy(up, eps, dir);
        axpy(um, -eps, dir);
        const double fd = (m.value(up) - m.value(um)) / (2.0 * eps);
        const double an = grid.inner_h(m.gradient(u), dir);
        grad_fd.update(std::abs(fd - an) / (1.0 + std::abs(an)));

        const GridFn gp = m.gradient(up);
        const GridFn gm = m.gradient(um);
        const GridFn hv = m.hessian(u).apply(dir);
        double fd_err = 0.0;
        for (std::size_t i = 0; i < hv.size(); ++i)
            fd_err = std::max(fd_err, std::abs((gp[i] - gm[i]) / (2.0 * eps) - hv[i]));
        double hv_scale = 0.0;
        for (double v : hv) hv_scale = std::max(hv_scale, std::abs(v));
        hess_fd.update(fd_err / (1.0 + hv_scale));
    }

    auto push = [&](const std::string& name, double observed, double bound) {
        out.push_back({suite, name, observed <= bound, observed, bound});
    };
    push("prox_nonexpansive", nonexp.value, 1e-10);
    push("prox_optimality", optimality.value, 1e-10);
    push("strong_monotonicity", strong.value, 1e-9);
    push("resolvent_contraction", contraction.value, 1e-9);
    push("moreau_envelope_range", moreau_range.value, 1e-10);
    push("moreau_lambda_monotone", moreau_mono.value, 1e-10);
    push("coercivity", coercivity.value, 1e-10);
    push("yosida_gradient_consistency", yosida_consistent.value, 1e-8);
    push("jacobian_prox_contraction", jac_contract.value, 1e-10);
    push("jacobian_prox_roundtrip", jac_roundtrip.value, 1e-10);
    push("jacobian_yosida_psd", jac_psd.value, 1e-10);
    push("hessian_psd", hess_psd.value, 1e-10);
    push("gradient_fd", grad_fd.value, 1e-6);
    push("hessian_fd", hess_fd.value, 1e-5);
    push("resolvent_v_bound", m_ladder, std::max(4.0, 4.0 * m1));
    return out;
}

std::vector<CheckResult> check_noise_properties(const NoiseModel& nm, const Grid& grid,
                                                const CheckParams& params) {
    std::vector<CheckResult> out;
    KeyedUniform rng(params.seed);
    const std::string suite = "noise:" + nm.kind_name();

    auto hs_diff = [&](const GridFn& u1, const GridFn& u2) {
        const auto m1 = nm.mode_vectors(0.0, u1);
        const auto m2 = nm.mode_vectors(0.0, u2);
        double s = 0.0;
        for (std::size_t j = 0; j < m1.size(); ++j) {
            const double d = grid.norm_h(diff(m1[j], m2[j]));
            s += d * d;
        }
        return std::sqrt(s);
    };

    Extreme lipschitz, growth;
    for (int s = 0; s < params.samples; ++s) {
        const GridFn u1 = smooth_sample(grid, rng, 2.0);
        const GridFn u2 = smooth_sample(grid, rng, 2.0);
        lipschitz.update(hs_diff(u1, u2) -
                         nm.lipschitz_bound() * grid.norm_h(diff(u1, u2)) - 1e-12);
        const double nv = grid.seminorm_v(u1, 2.0);
        growth.update(nm.hs_norm(0.0, u1) - nm.lipschitz_bound() * (1.0 + nv));
    }
    auto push = [&](const std::string& name, double observed, double bound, bool ok) {
        out.push_back({suite, name, ok, observed, bound});
    };
    if (nm.kind() != NoiseModel::Kind::Zero) {
        push("hs_lipschitz", lipschitz.value, 1e-10, lipschitz.value <= 1e-10);
        push("hs_growth", growth.value, 1e-10, growth.value <= 1e-10);
        push("amplitude_summability", nm.decay(), 0.5, nm.decay() > 0.5);
    }

    // Cyclic trace identity against a dense assembly, modes permuted and not.
    {
        const GridFn u = smooth_sample(grid, rng, 1.5);
        const auto modes = nm.mode_vectors(0.0, u);
        const int n = grid.n();
        // Random symmetric positive semidefinite nodal matrix M = R^T R.
        std::vector<std::vector<double>> r(static_cast<std::size_t>(n),
                                           std::vector<double>(static_cast<std::size_t>(n)));
        for (auto& row : r)
            for (auto& x : row) x = rng.range(-1.0, 1.0);
        std::vector<std::vector<double>> mm(static_cast<std::size_t>(n),
                                            std::vector<double>(static_cast<std::size_t>(n), 0.0));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += r[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] *
                         r[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
                mm[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = s;
            }
        auto apply_m = [&](const GridFn& x) {
            GridFn y(x.size(), 0.0);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    y[static_cast<std::size_t>(i)] +=
                        mm[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                        x[static_cast<std::size_t>(k)];
            return y;
        };
        double fwd = 0.0;
        for (const auto& gj : modes) fwd += grid.inner_h(gj, apply_m(gj));
        double rev = 0.0;
        for (auto it = modes.rbegin(); it != modes.rend(); ++it)
            rev += grid.inner_h(*it, apply_m(*it));
        // Dense route: plain trace of (G G^*) M with (GG^*)_{ik} = h sum_j g_ji g_jk.
        double dense = 0.0;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                double p = 0.0;
                for (const auto& gj : modes)
                    p += gj[static_cast<std::size_t>(i)] * gj[static_cast<std::size_t>(k)];
                dense += grid.h() * p *
                         mm[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            }
        const double scale = 1.0 + std::abs(dense);
        const double obs =
            std::max(std::abs(fwd - rev), std::abs(fwd - dense)) / scale;
        push("cyclic_trace_identity", obs, 1e-10, obs <= 1e-10);
    }

    // Increment statistics and determinism of the keyed stream.
    {
        const WienerPathSpec w{params.seed, 7, 0.01, 4};
        const std::size_t n = 10000;
        const auto t1 = sample_increments(w, n);
        const auto t2 = sample_increments(w, n);
        bool identical = true;
        for (std::size_t k = 0; k < n && identical; ++k)
            for (int j = 0; j < w.modes; ++j)
                if (t1[k][static_cast<std::size_t>(j)] != t2[k][static_cast<std::size_t>(j)]) {
                    identical = false;
                    break;
                }
        push("increments_deterministic", identical ? 0.0 : 1.0, 0.0, identical);

        double worst_mean = 0.0, worst_var = 0.0;
        for (int j = 0; j < w.modes; ++j) {
            double s = 0.0, q = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += t1[k][static_cast<std::size_t>(j)];
            const double mean = s / static_cast<double>(n);
            for (std::size_t k = 0; k < n; ++k) {
                const double d = t1[k][static_cast<std::size_t>(j)] - mean;
                q += d * d;
            }
            const double var = q / static_cast<double>(n - 1);
            worst_mean = std::max(worst_mean, std::abs(mean));
            worst_var = std::max(worst_var, std::abs(var - w.dt));
        }
        const double mean_bound = 4.0 * std::sqrt(w.dt / static_cast<double>(n));
        push("increment_mean", worst_mean, mean_bound, worst_mean <= mean_bound);
        push("increment_variance", worst_var, 0.1 * w.dt, worst_var <= 0.1 * w.dt);
    }
    return out;
}

} // namespace dnsim
