#include "dnsim/forcing.hpp"

#include <cmath>

#include "dnsim/errors.hpp"

namespace dnsim {

ForcingModel ForcingModel::zero() { return ForcingModel(); }

ForcingModel ForcingModel::affine(double a0, double a1, double omega, double b, double c) {
    ForcingModel f;
    f.kind_ = Kind::Affine;
    f.a0_ = a0;
    f.a1_ = a1;
    f.omega_ = omega;
    f.b_ = b;
    f.c_ = c;
    f.c_f_ = std::abs(b) + std::abs(c);
    return f;
}

ForcingModel ForcingModel::custom(ScalarForcing fn, double lipschitz) {
    if (!fn) throw ConfigError("custom forcing: callable required");
    ForcingModel f;
    f.kind_ = Kind::Custom;
    f.custom_ = std::move(fn);
    f.c_f_ = lipschitz;
    return f;
}

std::string ForcingModel::kind_name() const {
    switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Affine: return "affine";
    case Kind::Custom: return "custom";
    }
    return "?";
}

double ForcingModel::time_envelope(double t) const {
    if (kind_ == Kind::Zero) return 0.0;
    const double a = a0_ + a1_ * std::cos(omega_ * t);
    return 3.0 * a * a;
}

GridFn ForcingModel::eval(double t, const GridFn& u, const Grid& grid) const {
    GridFn out(u.size(), 0.0);
    if (kind_ == Kind::Zero) return out;
    const GridFn du = grid.centered_diff(u);
    if (kind_ == Kind::Affine) {
        const double a = a0_ + a1_ * std::cos(omega_ * t);
        for (std::size_t i = 0; i < u.size(); ++i) out[i] = a + b_ * u[i] + c_ * du[i];
        return out;
    }
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = custom_(t, u[i], du[i]);
    return out;
}

} // namespace dnsim
