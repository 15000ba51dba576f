#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dnsim/noise.hpp"
#include "dnsim/rng.hpp"
#include "dnsim/selfcheck.hpp"

using namespace dnsim;

TEST_CASE("increment tables: empty, deterministic, correct statistics") {
    // m = 0 gives an empty table.
    const WienerPathSpec empty{42, 0, 0.01, 0};
    const auto t0 = sample_increments(empty, 5);
    CHECK(t0.size() == 5);
    for (const auto& row : t0) CHECK(row.empty());

    // Bitwise-identical regeneration for a fixed key.
    const WienerPathSpec w{42, 7, 0.01, 4};
    const auto t1 = sample_increments(w, 100);
    const auto t2 = sample_increments(w, 100);
    for (std::size_t k = 0; k < t1.size(); ++k)
        for (std::size_t j = 0; j < t1[k].size(); ++j) CHECK(t1[k][j] == t2[k][j]);

    // Distinct paths decorrelate.
    const WienerPathSpec w2{42, 8, 0.01, 4};
    const auto t3 = sample_increments(w2, 100);
    bool different = false;
    for (std::size_t k = 0; k < t1.size() && !different; ++k)
        if (t1[k][0] != t3[k][0]) different = true;
    CHECK(different);

    // Per-mode sample variance of 10^4 draws stays within 10% of dt.
    const auto table = sample_increments(w, 10000);
    for (int j = 0; j < 4; ++j) {
        double mean = 0.0;
        for (const auto& row : table) mean += row[static_cast<std::size_t>(j)];
        mean /= 1e4;
        double var = 0.0;
        for (const auto& row : table) {
            const double d = row[static_cast<std::size_t>(j)] - mean;
            var += d * d;
        }
        var /= 1e4 - 1.0;
        CHECK(std::abs(mean) <= 4.0 * std::sqrt(0.01 / 1e4));
        CHECK(var >= 0.009);
        CHECK(var <= 0.011);
    }
}

TEST_CASE("apply_G: zero kind, additive linearity, superposition hand sum") {
    const Grid g(8);
    const GridFn u{0.5, -1.0, 2.0, 0.0, 1.0, -0.5, 0.25, 3.0};

    const NoiseModel zero = NoiseModel::zero();
    const std::vector<double> dw{1.0, -2.0};
    for (double x : zero.apply(0.0, u, dw)) CHECK(x == 0.0);
    CHECK(zero.mode_vectors(0.0, u).empty());
    CHECK(zero.hs_norm(0.0, u) == 0.0);

    // Additive with one mode: dW = (c) returns c * g_1.
    const NoiseModel add1 = NoiseModel::additive(g, 1, 0.7, 1.5);
    const auto g1 = add1.mode_vectors(0.0, u);
    const std::vector<double> c{-2.5};
    const GridFn got = add1.apply(0.0, u, c);
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == doctest::Approx(-2.5 * g1[0][i]).epsilon(1e-14));

    // Superposition with identity link: hand-computed sum over two modes.
    const NoiseModel sup = NoiseModel::superposition(g, 2, 1.0, 1.0, NoiseModel::Phi::Identity);
    const std::vector<double> dw2{0.3, -0.7};
    const GridFn y = sup.apply(0.0, u, dw2);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < g.n(); ++i) {
        const double e1 = std::sqrt(2.0) * std::sin(pi * g.node(i));
        const double e2 = std::sqrt(2.0) * std::sin(2.0 * pi * g.node(i));
        const double sigma2 = std::pow(2.0, -1.0);
        const double expected =
            u[static_cast<std::size_t>(i)] * (1.0 * e1 * 0.3 + sigma2 * e2 * (-0.7));
        CHECK(y[static_cast<std::size_t>(i)] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("hs_norm: Pythagoras for additive modes and direct-sum oracle") {
    const Grid g(16);
    // Two stored modes with H-norms 3 and 4 give HS norm 5. Orthonormal sine
    // profiles have unit H-norm, so sigma_1 = 3, sigma_2 = 4 up to decay:
    // pick r so that sigma_2 = 4 exactly: sigma0 * 2^-r = 4 with sigma0 = 3
    // is impossible (monotone decay), so scale by hand instead.
    const NoiseModel add = NoiseModel::additive(g, 2, 3.0, 0.6);
    const auto modes = add.mode_vectors(0.0, g.zero());
    double expect = 0.0;
    for (const auto& m : modes) {
        const double n = g.norm_h(m);
        expect += n * n;
    }
    CHECK(add.hs_norm(0.0, g.zero()) == doctest::Approx(std::sqrt(expect)).epsilon(1e-12));

    KeyedUniform rng(3);
    const NoiseModel sup = NoiseModel::superposition(g, 5, 0.8, 1.5, NoiseModel::Phi::Tanh);
    for (int s = 0; s < 20; ++s) {
        GridFn u(static_cast<std::size_t>(g.n()));
        for (auto& x : u) x = rng.range(-2.0, 2.0);
        double acc = 0.0;
        for (const auto& m : sup.mode_vectors(0.0, u)) {
            const double n = g.norm_h(m);
            acc += n * n;
        }
        CHECK(sup.hs_norm(0.0, u) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
    }
}

TEST_CASE("mode vectors: additive independent of state, superposition pointwise product") {
    const Grid g(8);
    const NoiseModel add = NoiseModel::additive(g, 3, 1.0, 1.5);
    const GridFn u{1.0, 2.0, 3.0, -1.0, 0.0, 0.5, -2.0, 1.5};
    const auto m0 = add.mode_vectors(0.0, g.zero());
    const auto m1 = add.mode_vectors(0.0, u);
    for (std::size_t j = 0; j < m0.size(); ++j)
        for (std::size_t i = 0; i < m0[j].size(); ++i) CHECK(m0[j][i] == m1[j][i]);

    const NoiseModel sup = NoiseModel::superposition(g, 3, 1.0, 1.5, NoiseModel::Phi::Tanh);
    const auto sv = sup.mode_vectors(0.0, u);
    const double pi = 3.14159265358979323846;
    for (int j = 1; j <= 3; ++j) {
        const double sigma = std::pow(static_cast<double>(j), -1.5);
        for (int i = 0; i < g.n(); ++i) {
            const double e = std::sqrt(2.0) * std::sin(j * pi * g.node(i));
            const double expected = sigma * std::tanh(u[static_cast<std::size_t>(i)]) * e;
            CHECK(sv[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)] ==
                  doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("construction rejects non-summable decay") {
    const Grid g(8);
    CHECK_THROWS_AS(NoiseModel::superposition(g, 4, 1.0, 0.5, NoiseModel::Phi::Identity),
                    dnsim::ConfigError);
    CHECK_THROWS_AS(NoiseModel::additive(g, 4, 1.0, 0.4), dnsim::ConfigError);
}

TEST_CASE("noise self-check suite passes for all kinds") {
    const Grid g(16);
    CheckParams params;
    params.samples = 300;
    for (const NoiseModel& nm :
         {NoiseModel::zero(), NoiseModel::additive(g, 6, 0.5, 1.5),
          NoiseModel::superposition(g, 6, 0.5, 1.5, NoiseModel::Phi::Tanh),
          NoiseModel::superposition(g, 6, 0.5, 1.5, NoiseModel::Phi::Identity)}) {
        const auto results = check_noise_properties(nm, g, params);
        for (const auto& r : results) {
            INFO(r.suite, "/", r.name, " observed=", r.observed, " bound=", r.bound);
            CHECK(r.passed);
        }
    }
}
