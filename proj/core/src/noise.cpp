#include "dnsim/noise.hpp"

#include <cmath>

#include "dnsim/errors.hpp"

namespace dnsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<GridFn> sine_profiles(const Grid& grid, int m) {
    std::vector<GridFn> e(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j) {
        GridFn& ej = e[static_cast<std::size_t>(j - 1)];
        ej.resize(static_cast<std::size_t>(grid.n()));
        for (int i = 0; i < grid.n(); ++i)
            ej[static_cast<std::size_t>(i)] = std::sqrt(2.0) * std::sin(j * kPi * grid.node(i));
    }
    return e;
}

std::vector<double> amplitudes(int m, double sigma0, double r) {
    if (r <= 0.5) throw ConfigError("noise.r must be > 0.5 (square-summable amplitudes)");
    std::vector<double> s(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j)
        s[static_cast<std::size_t>(j - 1)] = sigma0 * std::pow(static_cast<double>(j), -r);
    return s;
}

} // namespace

NoiseModel NoiseModel::zero() { return NoiseModel(); }

NoiseModel NoiseModel::additive(const Grid& grid, int m, double sigma0, double r) {
    if (m < 0) throw ConfigError("noise.m must be >= 0");
    NoiseModel nm;
    nm.kind_ = Kind::Additive;
    nm.sigma0_ = sigma0;
    nm.r_ = r;
    nm.sigmas_ = amplitudes(m, sigma0, r);
    nm.profiles_ = sine_profiles(grid, m);
    double growth2 = 0.0;
    for (std::size_t j = 0; j < nm.sigmas_.size(); ++j) {
        const double nj = grid.norm_h(nm.profiles_[j]);
        growth2 += nm.sigmas_[j] * nm.sigmas_[j] * nj * nj;
    }
    nm.c_g_ = std::sqrt(growth2); // Lipschitz constant is 0, growth is constant
    return nm;
}

NoiseModel NoiseModel::superposition(const Grid& grid, int m, double sigma0, double r,
                                     Phi phi) {
    if (m < 0) throw ConfigError("noise.m must be >= 0");
    NoiseModel nm;
    nm.kind_ = Kind::Superposition;
    nm.phi_ = phi;
    nm.sigma0_ = sigma0;
    nm.r_ = r;
    nm.sigmas_ = amplitudes(m, sigma0, r);
    nm.profiles_ = sine_profiles(grid, m);
    // ||G(u1)-G(u2)||_HS <= L_phi * sqrt(sum sigma_j^2 ||e_j||_inf^2) ||u1-u2||_H,
    // with L_phi = 1 for both links.
    double lip2 = 0.0;
    for (std::size_t j = 0; j < nm.sigmas_.size(); ++j) {
        double einf = 0.0;
        for (double v : nm.profiles_[j]) einf = std::max(einf, std::abs(v));
        lip2 += nm.sigmas_[j] * nm.sigmas_[j] * einf * einf;
    }
    nm.c_g_ = std::sqrt(lip2);
    return nm;
}

double NoiseModel::link(double s) const {
    return phi_ == Phi::Identity ? s : std::tanh(s);
}

GridFn NoiseModel::apply(double, const GridFn& u, std::span<const double> dw) const {
    GridFn out(u.size(), 0.0);
    if (kind_ == Kind::Zero) return out;
    const std::size_t m = sigmas_.size();
    if (dw.size() < m) throw ConfigError("apply_G: increment vector shorter than mode count");
    if (kind_ == Kind::Additive) {
        for (std::size_t j = 0; j < m; ++j)
            axpy(out, sigmas_[j] * dw[j], profiles_[j]);
        return out;
    }
    // Superposition: accumulate the mode sum once, then scale by phi(u).
    for (std::size_t j = 0; j < m; ++j) axpy(out, sigmas_[j] * dw[j], profiles_[j]);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= link(u[i]);
    return out;
}

double NoiseModel::hs_norm(double t, const GridFn& u) const {
    if (kind_ == Kind::Zero) return 0.0;
    double s = 0.0;
    for (const GridFn& hj : mode_vectors(t, u)) {
        double n = 0.0;
        for (double v : hj) n += v * v;
        s += n;
    }
    // mode_vectors returns plain nodal values; apply the H-weight once
    const double h = 1.0 / (static_cast<double>(u.size()) + 1.0);
    return std::sqrt(h * s);
}

std::vector<GridFn> NoiseModel::mode_vectors(double, const GridFn& u) const {
    std::vector<GridFn> out;
    if (kind_ == Kind::Zero) return out;
    const std::size_t m = sigmas_.size();
    out.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        GridFn hj = scaled(profiles_[j], sigmas_[j]);
        if (kind_ == Kind::Superposition)
            for (std::size_t i = 0; i < hj.size(); ++i) hj[i] *= link(u[i]);
        out.push_back(std::move(hj));
    }
    return out;
}

std::string NoiseModel::kind_name() const {
    switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Additive: return "additive";
    case Kind::Superposition: return "superposition";
    }
    return "?";
}

std::string NoiseModel::phi_name() const {
    return phi_ == Phi::Identity ? "identity" : "tanh";
}

} // namespace dnsim
