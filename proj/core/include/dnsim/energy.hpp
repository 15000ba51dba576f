#ifndef DNSIM_ENERGY_HPP
#define DNSIM_ENERGY_HPP

#include <memory>
#include <span>
#include <string>

#include "dnsim/grid.hpp"
#include "dnsim/potentials.hpp"
#include "dnsim/tridiagonal.hpp"

namespace dnsim {

/// Applicable operator (I + lambda * D_G B(J_lambda(x)))^(-1); H-operator
/// norm is at most 1.
class ProxJacobian {
public:
    ProxJacobian(double lambda, TridiagonalMatrix hessian);
    GridFn apply(const GridFn& v) const;
    const TridiagonalMatrix& hessian_at_prox() const { return hessian_; }

private:
    TridiagonalMatrix hessian_;
    TridiagonalFactor factor_;
};

/// Applicable operator D_G B_lambda(x) = D_G B(J(x)) (I + lambda D_G B(J(x)))^(-1);
/// symmetric positive semidefinite in H.
class YosidaJacobian {
public:
    YosidaJacobian(double lambda, TridiagonalMatrix hessian);
    GridFn apply(const GridFn& v) const;

private:
    ProxJacobian prox_jacobian_;
};

/// Discrete convex energy on a Dirichlet grid,
///
///   E(u) = h * sum_edges beta1(Du) + h * sum_nodes beta0(u),
///
/// with H-gradient B, Gateaux Hessian, resolvent (proximal map), Yosida
/// approximation, Moreau envelope, resolvent Jacobian, and the trace term
/// of the Ito correction.
class EnergyModel {
public:
    enum class Beta1 { Quadratic, PPower };
    enum class Beta0 { Zero, Quadratic, Quartic };

    EnergyModel(Grid grid, PotentialPtr beta1, PotentialPtr beta0, double p,
                double strong_monotonicity, std::string beta1_name = "custom",
                std::string beta0_name = "custom");

    /// Preset models carry certified constants: quadratic edge potential has
    /// c_B = 1 at p = 2; the p-power preset has c_B = 2^(2-p).
    static EnergyModel preset(const Grid& grid, Beta1 b1, Beta0 b0, double p);

    const Grid& grid() const { return grid_; }
    double p() const { return p_; }
    double c_b() const { return c_b_; }
    const std::string& beta1_name() const { return beta1_name_; }
    const std::string& beta0_name() const { return beta0_name_; }
    const ConvexPotential& beta1() const { return *beta1_; }
    const ConvexPotential& beta0() const { return *beta0_; }

    /// True when the energy is quadratic (B linear self-adjoint, p = 2).
    bool is_linear() const;

    double value(const GridFn& u) const;
    GridFn gradient(const GridFn& u) const;
    TridiagonalMatrix hessian(const GridFn& u) const;

    /// Unique minimizer of E(y) + ||y-x||_H^2 / (2 lambda), solved by damped
    /// Newton; optimality residual ||y + lambda B(y) - x||_H <= 1e-10 (1+||x||_H).
    GridFn prox(double lambda, const GridFn& x) const;

    GridFn yosida(double lambda, const GridFn& x) const;
    double moreau(double lambda, const GridFn& x) const;

    ProxJacobian jacobian_prox(double lambda, const GridFn& x) const;
    YosidaJacobian jacobian_yosida(double lambda, const GridFn& x) const;

    /// Same operators built from an already-computed prox point (avoids the
    /// inner Newton solve when the resolvent is cached).
    ProxJacobian jacobian_prox_from(double lambda, const GridFn& prox_x) const;
    YosidaJacobian jacobian_yosida_from(double lambda, const GridFn& prox_x) const;

    /// sum_j (g_j, D_G B_lambda(x) g_j)_H >= 0, the Ito trace correction.
    double trace_correction(double lambda, const GridFn& x,
                            std::span<const GridFn> modes) const;
    double trace_correction_from(double lambda, const GridFn& prox_x,
                                 std::span<const GridFn> modes) const;

    /// Moreau envelope evaluated from a cached prox point.
    double moreau_from(double lambda, const GridFn& x, const GridFn& prox_x) const;

private:
    Grid grid_;
    PotentialPtr beta1_;
    PotentialPtr beta0_;
    double p_;
    double c_b_;
    std::string beta1_name_;
    std::string beta0_name_;
};

} // namespace dnsim

#endif
