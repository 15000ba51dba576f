#include "dnsim/energy.hpp"

#include <cmath>
#include <utility>

#include "dnsim/errors.hpp"

namespace dnsim {

ProxJacobian::ProxJacobian(double lambda, TridiagonalMatrix hessian)
    : hessian_(std::move(hessian)),
      factor_([&] {
          TridiagonalMatrix m = hessian_;
          for (auto& d : m.diag) d = 1.0 + lambda * d;
          for (auto& o : m.off) o *= lambda;
          return TridiagonalFactor(m);
      }()) {}

GridFn ProxJacobian::apply(const GridFn& v) const { return factor_.solve(v); }

YosidaJacobian::YosidaJacobian(double lambda, TridiagonalMatrix hessian)
    : prox_jacobian_(lambda, std::move(hessian)) {}

GridFn YosidaJacobian::apply(const GridFn& v) const {
    return prox_jacobian_.hessian_at_prox().apply(prox_jacobian_.apply(v));
}

EnergyModel::EnergyModel(Grid grid, PotentialPtr beta1, PotentialPtr beta0, double p,
                         double strong_monotonicity, std::string beta1_name,
                         std::string beta0_name)
    : grid_(grid),
      beta1_(std::move(beta1)),
      beta0_(std::move(beta0)),
      p_(p),
      c_b_(strong_monotonicity),
      beta1_name_(std::move(beta1_name)),
      beta0_name_(std::move(beta0_name)) {
    if (p < 2.0) throw ConfigError("model.p must be >= 2");
}

EnergyModel EnergyModel::preset(const Grid& grid, Beta1 b1, Beta0 b0, double p) {
    PotentialPtr beta1;
    std::string n1;
    double c_b = 1.0;
    switch (b1) {
    case Beta1::Quadratic:
        if (p != 2.0) throw ConfigError("quadratic beta1 preset requires model.p = 2");
        beta1 = std::make_shared<QuadraticPotential>();
        n1 = "quadratic";
        c_b = 1.0;
        break;
    case Beta1::PPower:
        beta1 = std::make_shared<PPowerPotential>(p);
        n1 = "p_power";
        c_b = std::pow(2.0, 2.0 - p);
        break;
    }
    PotentialPtr beta0;
    std::string n0;
    switch (b0) {
    case Beta0::Zero:
        beta0 = std::make_shared<ZeroPotential>();
        n0 = "zero";
        break;
    case Beta0::Quadratic:
        beta0 = std::make_shared<QuadraticPotential>();
        n0 = "quadratic";
        break;
    case Beta0::Quartic:
        beta0 = std::make_shared<QuarticWellPotential>();
        n0 = "quartic";
        break;
    }
    return EnergyModel(grid, beta1, beta0, p, c_b, n1, n0);
}

bool EnergyModel::is_linear() const {
    return p_ == 2.0 && beta1_name_ == "quadratic" &&
           (beta0_name_ == "zero" || beta0_name_ == "quadratic");
}

double EnergyModel::value(const GridFn& u) const {
    const auto du = grid_.forward_diff(u);
    double s1 = 0.0;
    for (double d : du) s1 += beta1_->value(d);
    double s0 = 0.0;
    for (double x : u) s0 += beta0_->value(x);
    return grid_.h() * (s1 + s0);
}

GridFn EnergyModel::gradient(const GridFn& u) const {
    const auto du = grid_.forward_diff(u);
    const std::size_t n = u.size();
    const double h = grid_.h();
    GridFn g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double flux_left = beta1_->d1(du[i]);
        const double flux_right = beta1_->d1(du[i + 1]);
        g[i] = -(flux_right - flux_left) / h + beta0_->d1(u[i]);
    }
    return g;
}

TridiagonalMatrix EnergyModel::hessian(const GridFn& u) const {
    const auto du = grid_.forward_diff(u);
    const std::size_t n = u.size();
    const double h2 = grid_.h() * grid_.h();
    TridiagonalMatrix k;
    k.diag.resize(n);
    k.off.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        k.diag[i] = (beta1_->d2(du[i]) + beta1_->d2(du[i + 1])) / h2 + beta0_->d2(u[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) k.off[i] = -beta1_->d2(du[i + 1]) / h2;
    return k;
}

GridFn EnergyModel::prox(double lambda, const GridFn& x) const {
    if (lambda <= 0.0) throw ConfigError("prox: lambda must be > 0");
    const double tol = 1e-10 * (1.0 + grid_.norm_h(x));
    const double armijo = 1e-4;

    auto objective = [&](const GridFn& y) {
        const GridFn d = diff(y, x);
        return value(y) + grid_.inner_h(d, d) / (2.0 * lambda);
    };
    // residual(y) = y - x + lambda * B(y); zero exactly at the minimizer.
    auto residual = [&](const GridFn& y) {
        GridFn r = gradient(y);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] - x[i] + lambda * r[i];
        return r;
    };

    GridFn y = x;
    GridFn r = residual(y);
    double rn = grid_.norm_h(r);
    if (rn <= tol) return y;

    for (int it = 0; it < 100; ++it) {
        TridiagonalMatrix k = hessian(y);
        for (auto& d : k.diag) d = 1.0 + lambda * d;
        for (auto& o : k.off) o *= lambda;
        const GridFn step = TridiagonalFactor(k).solve(scaled(r, -1.0));

        const double slope = grid_.inner_h(r, step) / lambda; // directional derivative
        const double f0 = objective(y);
        GridFn y_next = sum(y, step);
        // Once the predicted decrease drops below the rounding resolution of
        // the objective the line search is uninformative; take the full
        // Newton step (quadratic regime).
        if (-slope > 1e-14 * (1.0 + std::abs(f0))) {
            double t = 1.0;
            while (objective(y_next) > f0 + armijo * t * slope && t > 1e-12) {
                t *= 0.5;
                y_next = y;
                axpy(y_next, t, step);
            }
        }
        y = std::move(y_next);
        r = residual(y);
        rn = grid_.norm_h(r);
        if (rn <= tol) return y;
    }

    // Gradient-descent fallback before declaring failure.
    for (int it = 0; it < 500; ++it) {
        const double slope = -grid_.inner_h(r, r) / lambda;
        const double f0 = objective(y);
        double t = 1.0;
        GridFn y_next = diff(y, r);
        while (objective(y_next) > f0 + 1e-4 * t * slope && t > 1e-14) {
            t *= 0.5;
            y_next = y;
            axpy(y_next, -t, r);
        }
        y = std::move(y_next);
        r = residual(y);
        rn = grid_.norm_h(r);
        if (rn <= tol) return y;
    }
    throw SolverError("prox: Newton failed to reach tolerance (ill-scaled model; reduce lambda)");
}

GridFn EnergyModel::yosida(double lambda, const GridFn& x) const {
    return scaled(diff(x, prox(lambda, x)), 1.0 / lambda);
}

double EnergyModel::moreau(double lambda, const GridFn& x) const {
    return moreau_from(lambda, x, prox(lambda, x));
}

double EnergyModel::moreau_from(double lambda, const GridFn& x, const GridFn& prox_x) const {
    const GridFn d = diff(x, prox_x);
    return value(prox_x) + grid_.inner_h(d, d) / (2.0 * lambda);
}

ProxJacobian EnergyModel::jacobian_prox(double lambda, const GridFn& x) const {
    return jacobian_prox_from(lambda, prox(lambda, x));
}

ProxJacobian EnergyModel::jacobian_prox_from(double lambda, const GridFn& prox_x) const {
    return ProxJacobian(lambda, hessian(prox_x));
}

YosidaJacobian EnergyModel::jacobian_yosida(double lambda, const GridFn& x) const {
    return jacobian_yosida_from(lambda, prox(lambda, x));
}

YosidaJacobian EnergyModel::jacobian_yosida_from(double lambda, const GridFn& prox_x) const {
    return YosidaJacobian(lambda, hessian(prox_x));
}

double EnergyModel::trace_correction(double lambda, const GridFn& x,
                                     std::span<const GridFn> modes) const {
    return trace_correction_from(lambda, prox(lambda, x), modes);
}

double EnergyModel::trace_correction_from(double lambda, const GridFn& prox_x,
                                          std::span<const GridFn> modes) const {
    if (modes.empty()) return 0.0;
    const YosidaJacobian dgb = jacobian_yosida_from(lambda, prox_x);
    double s = 0.0;
    for (const GridFn& g : modes) s += grid_.inner_h(g, dgb.apply(g));
    return s;
}

} // namespace dnsim
