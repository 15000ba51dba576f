#ifndef DNSIM_STEPPER_HPP
#define DNSIM_STEPPER_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "dnsim/sim_config.hpp"

namespace dnsim {

/// One evaluation of the normal-form drift
///   du_d = (lambda I + A_lambda)^(-1)( F(t, R_lambda J^B(u)) - B_lambda(u) ),
/// together with the dissipation selection v = A_lambda(du_d) and the
/// intermediate quantities reused by the step and the diagnostics.
struct DriftEval {
    GridFn du_d;
    GridFn v;
    GridFn prox;     // J_lambda^B(u)
    GridFn b_lambda; // B_lambda(u)
    GridFn force;    // F(t, R_lambda J_lambda^B(u))
};

DriftEval drift(const SimConfig& cfg, double t, const GridFn& u);

/// One explicit Euler-Maruyama step; fills `out` with the per-step record
/// entries when given.
GridFn step(const SimConfig& cfg, double t, const GridFn& u, std::span<const double> dw,
            DriftEval* out = nullptr);

/// Ito-process decomposition of one simulated path,
/// u_n = u_0 + dt * sum_{k<n} du_d_k + stoch_int_n (exact by construction:
/// the state is formed from the two running sums in a fixed order).
struct TrajectoryRecord {
    std::uint64_t path_index = 0;
    double dt = 0.0;
    std::vector<double> times;               // n+1
    std::vector<GridFn> u;                   // n+1
    std::vector<GridFn> prox;                // n+1, J_lambda^B(u_k)
    std::vector<GridFn> du_d;                // n+1, terminal entry = drift at (T, u_n)
    std::vector<GridFn> v;                   // n+1
    std::vector<GridFn> stoch_int;           // n+1, cumulative noise integral
    std::vector<std::vector<double>> dw;     // n x m Wiener increments

    std::size_t n_steps() const { return dw.size(); }
};

TrajectoryRecord simulate(const SimConfig& cfg, std::uint64_t path_index);

struct PathSummary {
    std::uint64_t path = 0;
    double sup_u_h = 0.0;          // sup_n ||u_n||_H
    double terminal_u_h = 0.0;     // ||u(T)||_H
    double terminal_u_sq = 0.0;    // ||u(T)||_H^2
    double sup_energy_prox = 0.0;  // sup_n E(J_lambda(u_n))
    double sup_prox_v_pow = 0.0;   // sup_n ||J_lambda(u_n)||_V^p
    double dissipation = 0.0;      // sum dt (v_k, du_d_k)_H
};

PathSummary summarize(const TrajectoryRecord& rec, const SimConfig& cfg);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs);

struct EnsembleStats {
    std::vector<PathSummary> paths;
    MeanSe terminal_u_sq;
    MeanSe sup_u_h;
    MeanSe sup_energy_prox;
    MeanSe dissipation;
};

EnsembleStats simulate_ensemble(const SimConfig& cfg);

/// Runs fn(record, path) for paths 0..n_paths-1 on the configured worker
/// count. Results are collected by path index, so the outcome is independent
/// of scheduling.
template <class F>
auto map_paths(const SimConfig& cfg, int n_paths, int workers, F&& fn) {
    using R = std::invoke_result_t<F&, const TrajectoryRecord&, std::uint64_t>;
    std::vector<R> results(static_cast<std::size_t>(n_paths));
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_paths) return;
            try {
                const TrajectoryRecord rec = simulate(cfg, static_cast<std::uint64_t>(i));
                results[static_cast<std::size_t>(i)] =
                    fn(rec, static_cast<std::uint64_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(n_paths);
                return;
            }
        }
    };

    const int nw = std::min(std::max(workers, 1), n_paths);
    if (nw <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nw));
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

} // namespace dnsim

#endif
