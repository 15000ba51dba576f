#ifndef DNSIM_MONOTONE_GRAPH_HPP
#define DNSIM_MONOTONE_GRAPH_HPP

#include <optional>
#include <string>
#include <vector>

#include "dnsim/errors.hpp"
#include "dnsim/grid.hpp"

namespace dnsim {

/// Closed interval of selections of a scalar maximal monotone graph.
/// lo == hi where the graph is single-valued. Infinite endpoints occur
/// only where a piecewise-linear graph ends with a vertical segment.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double y, double tol = 0.0) const { return y >= lo - tol && y <= hi + tol; }
};

/// Scalar maximal monotone graph through the origin, with resolvent,
/// Yosida approximation, and the shifted inverse (lambda*I + A_lambda)^{-1}
/// used by the normal-form drift. Applied componentwise this realizes the
/// dissipation operator on grid functions.
class MonotoneGraph {
public:
    enum class Kind { Linear, PowerLaw, SignPlusLinear, PiecewiseLinear };

    struct Point {
        double x;
        double y;
    };

    /// alpha(x) = a*x, a >= 0
    static MonotoneGraph linear(double slope);

    /// alpha(x) = a*|x|^(q-1)*sign(x), q >= 1, a > 0 (multivalued at 0 when q == 1)
    static MonotoneGraph power_law(double exponent, double scale);

    /// alpha(x) = a*x + b*sign(x) with the full subdifferential [-b, b] at 0
    static MonotoneGraph sign_plus_linear(double a, double b);

    /// Monotone breakpoint list; a repeated abscissa with distinct ordinates
    /// encodes a vertical segment. Beyond the ends the graph continues with
    /// the outermost segment slope (horizontally if that segment is vertical).
    static MonotoneGraph piecewise_linear(std::vector<Point> points);

    Kind kind() const { return kind_; }
    std::string kind_name() const;

    double param_a() const { return a_; }
    double param_b() const { return b_; }
    double param_q() const { return q_; }
    const std::vector<Point>& points() const { return points_; }

    /// Set-valued evaluation: the closed interval alpha(x).
    Interval eval(double x) const;

    /// x solving x + lambda*xi = y for some xi in alpha(x); nonexpansive in y.
    double resolvent(double lambda, double y) const;

    /// A_lambda(y) = (y - resolvent(y)) / lambda; (1/lambda)-Lipschitz,
    /// a selection of alpha at the resolvent point.
    double yosida(double lambda, double y) const;

    /// x solving lambda*x + A_lambda(x) = z, to |residual| <= 1e-12*(1+|z|).
    double inverse_shifted(double lambda, double z) const;

    /// Coercivity constant of (y,x) >= c_A x^2 - 1/c_A, when certified.
    std::optional<double> coercivity() const { return c_a_; }
    /// Linear-bound constant of |y| <= C_A (1+|x|), when certified.
    std::optional<double> linear_bound() const { return big_c_a_; }

    /// Declared-constant overrides (configuration-level certificates).
    void declare_coercivity(double c_a) { c_a_ = c_a; }
    void declare_linear_bound(double big_c_a) { big_c_a_ = big_c_a; }

private:
    MonotoneGraph() = default;
    double resolvent_bisect(double lambda, double y) const;

    Kind kind_ = Kind::Linear;
    double a_ = 0.0;
    double b_ = 0.0;
    double q_ = 1.0;
    std::vector<Point> points_;
    std::optional<double> c_a_;
    std::optional<double> big_c_a_;
};

// Componentwise action on grid functions: the dissipation operator and its
// regularizations decouple into independent scalar problems at the nodes.

GridFn apply_resolvent(const MonotoneGraph& g, double lambda, const GridFn& w);
GridFn apply_yosida(const MonotoneGraph& g, double lambda, const GridFn& w);
GridFn apply_inverse_shifted(const MonotoneGraph& g, double lambda, const GridFn& w);

} // namespace dnsim

#endif
