#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "dnsim/diagnostics.hpp"

using namespace dnsim;

namespace {

// The documented default fixture: forced p-power model with tanh
// superposition noise, started from zero data.
SimConfig standard_fixture(int n, int paths) {
    const Grid g(n);
    EnergyModel energy =
        EnergyModel::preset(g, EnergyModel::Beta1::PPower, EnergyModel::Beta0::Quadratic, 3.0);
    SimConfig cfg(g, std::move(energy), MonotoneGraph::sign_plus_linear(1.0, 0.1),
                  NoiseModel::superposition(g, 8, 0.5, 1.5, NoiseModel::Phi::Tanh),
                  ForcingModel::affine(1.0, 0.0, 0.0, 0.0, 0.0));
    cfg.lambda = 0.25;
    cfg.T = 0.25;
    cfg.dt = 0.004;
    cfg.seed = 12345;
    cfg.n_paths = paths;
    cfg.workers = 2;
    cfg.u0 = g.zero();
    return cfg;
}

SimConfig linear_fixture(int n) {
    const Grid g(n);
    EnergyModel energy =
        EnergyModel::preset(g, EnergyModel::Beta1::Quadratic, EnergyModel::Beta0::Quadratic, 2.0);
    SimConfig cfg(g, std::move(energy), MonotoneGraph::linear(1.0), NoiseModel::zero(),
                  ForcingModel::zero());
    cfg.lambda = 0.25;
    cfg.T = 0.5;
    cfg.dt = 0.0005;
    cfg.u0 = make_sine_init(g, 1, 1.0, 2.0);
    return cfg;
}

} // namespace

TEST_CASE("ito ledger: identically zero on the constant trajectory at the minimizer") {
    SimConfig cfg = standard_fixture(8, 1);
    cfg.noise = NoiseModel::zero();
    cfg.forcing = ForcingModel::zero();
    cfg.u0 = cfg.grid.zero();
    const TrajectoryRecord rec = simulate(cfg, 0);
    const EnergyLedger led = ito_ledger(rec, cfg);
    CHECK(led.residual[0] == 0.0);
    CHECK(led.sup_abs_residual <= 1e-14);
}

TEST_CASE("ito ledger: deterministic residual is O(dt)") {
    // Zero noise, linear graph, quadratic energy: the ledger is the chain
    // rule; quartering dt shrinks the sup residual by at least 1.8.
    SimConfig cfg = linear_fixture(16);
    double prev = -1.0;
    for (double dt : {0.002, 0.0005, 0.000125}) {
        cfg.dt = dt;
        const TrajectoryRecord rec = simulate(cfg, 0);
        const EnergyLedger led = ito_ledger(rec, cfg);
        CHECK(led.residual[0] == 0.0);
        if (prev >= 0.0) CHECK(prev / led.sup_abs_residual >= 1.8);
        prev = led.sup_abs_residual;
    }
}

TEST_CASE("ito ledger ensemble: residual contracts with dt, trace term detectable") {
    SimConfig cfg = standard_fixture(32, 40);
    cfg.T = 0.5;

    std::vector<ItoEnsembleResult> results;
    for (double dt : {0.004, 0.001, 0.00025}) {
        cfg.dt = dt;
        results.push_back(ito_residual_ensemble(cfg));
    }
    CHECK(results[0].rms_sup_residual / results[1].rms_sup_residual >= 1.3);
    CHECK(results[1].rms_sup_residual / results[2].rms_sup_residual >= 1.3);

    // Negative control: deleting the trace correction leaves an O(1) gap.
    const double floor_no_trace =
        std::min({results[0].rms_sup_residual_no_trace, results[1].rms_sup_residual_no_trace,
                  results[2].rms_sup_residual_no_trace});
    CHECK(floor_no_trace >= 5.0 * results[2].rms_sup_residual);

    // The martingale term has mean within 3 standard errors of zero.
    const MeanSe mart = results[2].martingale_final;
    CHECK(std::abs(mart.mean) <= 3.0 * mart.se);
}

TEST_CASE("apriori sweep: zero-noise dissipation bound and bounded columns") {
    // Unforced deterministic decay from a sine profile: the prox energy never
    // exceeds the initial energy, at any lambda.
    SimConfig cfg = standard_fixture(16, 1);
    cfg.noise = NoiseModel::zero();
    cfg.forcing = ForcingModel::zero();
    cfg.u0 = make_sine_init(cfg.grid, 1, 1.0, 3.0);
    const std::vector<double> lambdas{0.5, 0.25, 0.125, 0.0625};
    const AprioriReport rep = apriori_sweep(cfg, lambdas, 10.0);
    REQUIRE(rep.rows.size() == 4);

    const double e0 = cfg.energy.value(cfg.u0);
    for (const auto& row : rep.rows) {
        CHECK(row.sup_mean_energy_prox <= e0 * (1.0 + 1e-9));
        CHECK(row.sup_mean_energy_prox >= 0.0);
        CHECK(row.int_resolvent_rate_sq >= 0.0);
        CHECK(row.int_yosida_rate_sq >= 0.0);
        CHECK(std::isfinite(row.sup_mean_prox_v_pow));
        CHECK(row.dt <= cfg.c_stab * row.lambda * row.lambda * (1.0 + 1e-12));
    }
}

TEST_CASE("apriori sweep: noisy standard fixture stays lambda-uniform") {
    SimConfig cfg = standard_fixture(32, 24);
    cfg.T = 0.5;
    const std::vector<double> lambdas{0.5, 0.25, 0.125, 0.0625};
    const AprioriReport rep = apriori_sweep(cfg, lambdas, 10.0);
    for (int q = 0; q < 4; ++q) {
        INFO("quantity ", q + 1, " ratio = ", rep.ratios[static_cast<std::size_t>(q)]);
        CHECK_FALSE(rep.ratio_flagged[static_cast<std::size_t>(q)]);
        CHECK_FALSE(rep.monotone_growth[static_cast<std::size_t>(q)]);
    }
}

TEST_CASE("apriori sweep: truncation sensitivity of the noisy fixture is small") {
    SimConfig cfg = standard_fixture(16, 24);
    cfg.T = 0.125;
    const std::vector<double> lambdas{0.25};
    const AprioriReport base = apriori_sweep(cfg, lambdas, 10.0);

    SimConfig dbl = cfg;
    dbl.noise = NoiseModel::superposition(cfg.grid, 16, 0.5, 1.5, NoiseModel::Phi::Tanh);
    const AprioriReport doubled = apriori_sweep(dbl, lambdas, 10.0);

    auto rel = [](double a, double b) { return std::abs(a - b) / (std::abs(a) + 1e-12); };
    CHECK(rel(base.rows[0].sup_mean_energy_prox, doubled.rows[0].sup_mean_energy_prox) < 0.05);
    CHECK(rel(base.rows[0].int_resolvent_rate_sq, doubled.rows[0].int_resolvent_rate_sq) < 0.05);
    CHECK(rel(base.rows[0].int_yosida_rate_sq, doubled.rows[0].int_yosida_rate_sq) < 0.05);
    CHECK(rel(base.rows[0].sup_mean_prox_v_pow, doubled.rows[0].sup_mean_prox_v_pow) < 0.05);
}

TEST_CASE("lambda cauchy: identical lambdas give zero differences") {
    SimConfig cfg = standard_fixture(8, 1);
    const std::vector<double> lambdas{0.25, 0.25};
    const LambdaCauchyResult res = lambda_cauchy(cfg, lambdas);
    REQUIRE(res.e.size() == 1);
    CHECK(res.e[0] == 0.0);
}

TEST_CASE("lambda cauchy: noisy coupling is nonincreasing over dyadic levels") {
    SimConfig cfg = standard_fixture(16, 1);
    cfg.T = 1.0; // past the forced transient, the coupling orders cleanly
    const std::vector<double> lambdas{0.5, 0.25, 0.125, 0.0625};
    const LambdaCauchyResult res = lambda_cauchy(cfg, lambdas);
    REQUIRE(res.e.size() == 3);
    CHECK(res.nonincreasing);
    for (double e : res.e) CHECK(e > 0.0);
}

TEST_CASE("lambda cauchy: first-order in lambda against the exact linear reference") {
    SimConfig cfg = linear_fixture(16);
    cfg.c_stab = 5.0; // only the first sine mode is excited; see reference rates
    const std::vector<double> lambdas{1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512};
    const LambdaCauchyResult res = lambda_cauchy(cfg, lambdas);
    REQUIRE(res.has_reference);
    CHECK(res.order_consecutive >= 0.9);
    CHECK(res.order_vs_reference >= 0.9);
    // Differences shrink by about a factor 2 per level.
    for (std::size_t k = 0; k + 1 < res.e.size(); ++k) CHECK(res.e[k] / res.e[k + 1] >= 1.6);
}

TEST_CASE("stability probe: refuses configurations outside the linear setting") {
    SimConfig bad = standard_fixture(8, 1); // p-power energy
    const std::vector<double> scales{2.0};
    CHECK_THROWS_AS(stability_probe(bad, scales, false, 2), dnsim::ConfigError);

    SimConfig lin = linear_fixture(8);
    SimConfig bad_graph = lin;
    bad_graph.graph = MonotoneGraph::sign_plus_linear(0.0, 1.0);
    bad_graph.graph.declare_coercivity(0.1);
    CHECK_THROWS_AS(stability_probe(bad_graph, scales, false, 2), dnsim::ConfigError);

    SimConfig bad_noise = lin;
    bad_noise.noise = NoiseModel::superposition(lin.grid, 4, 0.2, 1.5, NoiseModel::Phi::Tanh);
    CHECK_THROWS_AS(stability_probe(bad_noise, scales, false, 2), dnsim::ConfigError);
}

TEST_CASE("stability probe: homogeneity, finiteness, Gronwall bound") {
    SimConfig cfg = linear_fixture(16);
    cfg.noise = NoiseModel::superposition(cfg.grid, 8, 0.1, 1.5, NoiseModel::Phi::Identity);
    cfg.lambda = 0.125;
    cfg.dt = 0.0015625;
    cfg.T = 0.25;
    cfg.seed = 777;
    const std::vector<double> scales{2.0, 1.5, 0.5, -1.0};
    const StabilityResult res = stability_probe(cfg, scales, true, 24);

    CHECK(res.k_hat > 0.0);
    CHECK(std::isfinite(res.k_hat));
    CHECK(res.scale_spread < 0.01); // linear dynamics: exact homogeneity
    CHECK(res.k_hat <= res.k_pred);
    CHECK(res.pairs.size() == 5);
}

TEST_CASE("dissipation report: deterministic decrease and noisy inequality") {
    SimConfig det = standard_fixture(16, 4);
    det.noise = NoiseModel::zero();
    det.forcing = ForcingModel::zero();
    det.u0 = make_sine_init(det.grid, 1, 1.0, 3.0);
    const DissipationReport rep_det = dissipation_report(det);
    for (std::size_t k = 0; k + 1 < rep_det.mean_moreau.size(); ++k)
        CHECK(rep_det.mean_moreau[k + 1] <=
              rep_det.mean_moreau[k] + 1e-8 * (1.0 + rep_det.mean_moreau[0]));
    CHECK(rep_det.inequality_ok);

    SimConfig noisy = standard_fixture(16, 64);
    const DissipationReport rep = dissipation_report(noisy);
    CHECK(rep.inequality_ok);

    // Pointwise dissipation coercivity (v, du_d)_H >= c_A ||du_d||^2 - 1/c_A.
    const TrajectoryRecord rec = simulate(noisy, 0);
    const double c_a = *noisy.graph.coercivity();
    for (std::size_t k = 0; k < rec.n_steps(); ++k) {
        const double lhs = noisy.grid.inner_h(rec.v[k], rec.du_d[k]);
        const double nn = noisy.grid.norm_h(rec.du_d[k]);
        CHECK(lhs >= c_a * nn * nn - 1.0 / c_a - 1e-10);
    }
}

TEST_CASE("exact linear reference requires the fully linear model") {
    SimConfig lin = linear_fixture(8);
    CHECK(exact_linear_reference(lin, 10, 0.01).has_value());
    SimConfig nl = standard_fixture(8, 1);
    CHECK_FALSE(exact_linear_reference(nl, 10, 0.01).has_value());
}
