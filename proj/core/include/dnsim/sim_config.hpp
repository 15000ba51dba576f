#ifndef DNSIM_SIM_CONFIG_HPP
#define DNSIM_SIM_CONFIG_HPP

#include <cmath>
#include <cstdint>

#include "dnsim/energy.hpp"
#include "dnsim/forcing.hpp"
#include "dnsim/grid.hpp"
#include "dnsim/monotone_graph.hpp"
#include "dnsim/noise.hpp"

namespace dnsim {

/// Realization of the regularizing operator R_lambda: the identity (V = H as
/// sets in finite dimensions) or a second application of the energy resolvent.
enum class RLambda { Identity, ProxSmoother };

struct OutputFlags {
    bool u = true;
    bool du_d = false;
    bool v = false;
};

/// Everything needed to run one regularized simulation: grid, models,
/// regularization parameter, time discretization, initial datum, and the
/// Monte Carlo layout.
struct SimConfig {
    SimConfig(Grid g, EnergyModel e, MonotoneGraph a, NoiseModel n, ForcingModel f)
        : grid(g), energy(std::move(e)), graph(std::move(a)), noise(std::move(n)),
          forcing(std::move(f)), u0(grid.zero()) {}

    Grid grid;
    EnergyModel energy;
    MonotoneGraph graph;
    NoiseModel noise;
    ForcingModel forcing;

    double lambda = 0.25;
    double T = 0.5;
    double dt = 0.005;
    double c_stab = 0.1; // explicit scheme requires dt <= c_stab * lambda^2
    RLambda r_lambda = RLambda::Identity;

    int n_paths = 1;
    int workers = 1;
    std::uint64_t seed = 0;

    GridFn u0;
    OutputFlags output;

    std::size_t n_steps() const {
        return static_cast<std::size_t>(std::llround(T / dt));
    }

    /// Throws ConfigError on any violated constraint; the stability rule
    /// message names "dt <= c_stab*lambda^2".
    void validate() const;
};

/// Sine initial profile sin(mode*pi*x) rescaled to the requested V-norm
/// (computed with the model's growth exponent p).
GridFn make_sine_init(const Grid& grid, int mode, double v_norm, double p);

} // namespace dnsim

#endif
