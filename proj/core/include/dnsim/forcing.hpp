#ifndef DNSIM_FORCING_HPP
#define DNSIM_FORCING_HPP

#include <functional>
#include <string>

#include "dnsim/grid.hpp"

namespace dnsim {

/// External forcing F(t,u) evaluated nodewise; the affine kind is
/// f(t, u, Du) = a(t) + b*u + c*Du with a(t) = a0 + a1*cos(omega*t) and Du
/// the centered difference at the nodes.
class ForcingModel {
public:
    enum class Kind { Zero, Affine, Custom };

    using ScalarForcing = std::function<double(double t, double u, double du)>;

    static ForcingModel zero();
    static ForcingModel affine(double a0, double a1, double omega, double b, double c);
    /// User-registered smooth forcing with a declared Lipschitz constant.
    static ForcingModel custom(ScalarForcing f, double lipschitz);

    Kind kind() const { return kind_; }
    bool is_zero() const { return kind_ == Kind::Zero; }
    std::string kind_name() const;

    double a0() const { return a0_; }
    double a1() const { return a1_; }
    double omega() const { return omega_; }
    double b() const { return b_; }
    double c() const { return c_; }

    /// Declared constant of the growth/Lipschitz bounds (advisory).
    double lipschitz_bound() const { return c_f_; }
    /// Integrable time envelope h_F(t) for the growth bound.
    double time_envelope(double t) const;

    GridFn eval(double t, const GridFn& u, const Grid& grid) const;

private:
    ForcingModel() = default;

    Kind kind_ = Kind::Zero;
    double a0_ = 0.0;
    double a1_ = 0.0;
    double omega_ = 0.0;
    double b_ = 0.0;
    double c_ = 0.0;
    double c_f_ = 0.0;
    ScalarForcing custom_;
};

} // namespace dnsim

#endif
