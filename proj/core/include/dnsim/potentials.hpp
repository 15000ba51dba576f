#ifndef DNSIM_POTENTIALS_HPP
#define DNSIM_POTENTIALS_HPP

#include <cmath>
#include <memory>
#include <string>

namespace dnsim {

/// Scalar convex potential with value and two derivatives, minimized at 0
/// with value 0. Used for both the edge potential (on gradients) and the
/// node potential (on states).
class ConvexPotential {
public:
    virtual ~ConvexPotential() = default;
    virtual double value(double x) const = 0;
    virtual double d1(double x) const = 0;
    virtual double d2(double x) const = 0;
    virtual std::string name() const = 0;
};

/// c * x^2 / 2
class QuadraticPotential final : public ConvexPotential {
public:
    explicit QuadraticPotential(double curvature = 1.0) : c_(curvature) {}
    double value(double x) const override { return 0.5 * c_ * x * x; }
    double d1(double x) const override { return c_ * x; }
    double d2(double) const override { return c_; }
    std::string name() const override { return "quadratic"; }

private:
    double c_;
};

/// x^2/2 + |x|^p / p, p >= 2
class PPowerPotential final : public ConvexPotential {
public:
    explicit PPowerPotential(double p) : p_(p) {}
    double value(double x) const override {
        return 0.5 * x * x + std::pow(std::abs(x), p_) / p_;
    }
    double d1(double x) const override {
        return x + std::pow(std::abs(x), p_ - 1.0) * (x >= 0.0 ? 1.0 : -1.0);
    }
    double d2(double x) const override {
        if (p_ == 2.0) return 2.0;
        return 1.0 + (p_ - 1.0) * std::pow(std::abs(x), p_ - 2.0);
    }
    std::string name() const override { return "p_power"; }

private:
    double p_;
};

/// x^2/2 + x^4/4
class QuarticWellPotential final : public ConvexPotential {
public:
    double value(double x) const override { return 0.5 * x * x + 0.25 * x * x * x * x; }
    double d1(double x) const override { return x + x * x * x; }
    double d2(double x) const override { return 1.0 + 3.0 * x * x; }
    std::string name() const override { return "quartic"; }
};

class ZeroPotential final : public ConvexPotential {
public:
    double value(double) const override { return 0.0; }
    double d1(double) const override { return 0.0; }
    double d2(double) const override { return 0.0; }
    std::string name() const override { return "zero"; }
};

using PotentialPtr = std::shared_ptr<const ConvexPotential>;

} // namespace dnsim

#endif
