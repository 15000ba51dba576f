#include "dnsim/sim_config.hpp"

#include <cmath>
#include <sstream>

#include "dnsim/errors.hpp"

namespace dnsim {

void SimConfig::validate() const {
    if (lambda <= 0.0) throw ConfigError("run.lambda must be > 0");
    if (T <= 0.0) throw ConfigError("run.T must be > 0");
    if (dt <= 0.0) throw ConfigError("run.dt must be > 0");
    if (c_stab <= 0.0) throw ConfigError("run.c_stab must be > 0");
    const double bound = c_stab * lambda * lambda;
    if (dt > bound * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "stability rule violated: dt <= c_stab*lambda^2 requires dt <= " << bound
           << ", got dt = " << dt;
        throw ConfigError(os.str());
    }
    if (n_paths < 1) throw ConfigError("run.n_paths must be >= 1");
    if (workers < 1) throw ConfigError("run.workers must be >= 1");
    if (static_cast<int>(u0.size()) != grid.n())
        throw ConfigError("initial datum length does not match grid.n");
    if (!(grid == energy.grid()))
        throw ConfigError("energy model grid does not match simulation grid");
    if (!graph.coercivity())
        throw ConfigError(
            "dissipation graph is not certified coercive; declare graph.c_A to override");
    if (n_steps() < 1) throw ConfigError("run.T/run.dt must give at least one step");
}

GridFn make_sine_init(const Grid& grid, int mode, double v_norm, double p) {
    if (mode < 1) throw ConfigError("init.mode must be >= 1");
    GridFn u(static_cast<std::size_t>(grid.n()));
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < grid.n(); ++i)
        u[static_cast<std::size_t>(i)] = std::sin(mode * pi * grid.node(i));
    const double s = grid.seminorm_v(u, p);
    if (s > 0.0 && v_norm > 0.0)
        for (double& x : u) x *= v_norm / s;
    return u;
}

} // namespace dnsim
