#ifndef DNSIM_SELFCHECK_HPP
#define DNSIM_SELFCHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dnsim/energy.hpp"
#include "dnsim/monotone_graph.hpp"
#include "dnsim/noise.hpp"

namespace dnsim {

/// One verified structural property: observed extreme value against its bound.
struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double bound = 0.0;
};

struct CheckParams {
    int samples = 1000;
    std::uint64_t seed = 2024;
    double range = 10.0; // inputs drawn from [-range, range]
};

/// Resolvent nonexpansivity, Yosida Lipschitz bound, selection property,
/// shifted-inverse round trip, resolvent convergence, and the declared
/// constants, on random scalar inputs.
std::vector<CheckResult> check_graph_properties(const MonotoneGraph& g,
                                                const CheckParams& params = {});

/// Prox nonexpansivity and optimality, strong-monotonicity and contraction
/// inequalities, V-bound across a lambda ladder, Moreau ordering and
/// lambda-monotonicity, coercivity with the preset constant, Jacobian
/// contraction/positivity, on random grid functions.
std::vector<CheckResult> check_energy_properties(const EnergyModel& m,
                                                 const CheckParams& params = {});

/// Lipschitz certification, amplitude summability, increment statistics, and
/// the cyclic trace identity against a dense assembly.
std::vector<CheckResult> check_noise_properties(const NoiseModel& nm, const Grid& grid,
                                                const CheckParams& params = {});

bool all_passed(const std::vector<CheckResult>& results);

} // namespace dnsim

#endif
