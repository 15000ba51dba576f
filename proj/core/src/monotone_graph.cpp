#include "dnsim/monotone_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dnsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

} // namespace

MonotoneGraph MonotoneGraph::linear(double slope) {
    if (slope < 0.0) throw ConfigError("linear graph: slope must be >= 0");
    MonotoneGraph g;
    g.kind_ = Kind::Linear;
    g.a_ = slope;
    if (slope > 0.0) g.c_a_ = slope;
    g.big_c_a_ = std::max(slope, 1e-300);
    return g;
}

MonotoneGraph MonotoneGraph::power_law(double exponent, double scale) {
    if (exponent < 1.0) throw ConfigError("power_law graph: exponent must be >= 1");
    if (scale <= 0.0) throw ConfigError("power_law graph: scale must be > 0");
    MonotoneGraph g;
    g.kind_ = Kind::PowerLaw;
    g.q_ = exponent;
    g.a_ = scale;
    // (y,x) = a|x|^q: quadratic lower bound with slack holds only for q >= 2.
    if (exponent >= 2.0) g.c_a_ = std::min(scale, 1.0);
    // |y| = a|x|^(q-1) is linearly bounded only for q <= 2.
    if (exponent <= 2.0) g.big_c_a_ = scale;
    return g;
}

MonotoneGraph MonotoneGraph::sign_plus_linear(double a, double b) {
    if (a < 0.0 || b < 0.0) throw ConfigError("sign_plus_linear graph: need a >= 0, b >= 0");
    MonotoneGraph g;
    g.kind_ = Kind::SignPlusLinear;
    g.a_ = a;
    g.b_ = b;
    if (a > 0.0) g.c_a_ = a; // pure sign graph (a == 0) is not coercive
    g.big_c_a_ = std::max(a, b);
    return g;
}

MonotoneGraph MonotoneGraph::piecewise_linear(std::vector<Point> points) {
    if (points.empty()) throw ConfigError("piecewise_linear graph: empty breakpoint list");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].x < points[i - 1].x || points[i].y < points[i - 1].y)
            throw ConfigError("piecewise_linear graph: breakpoints must be monotone");
    }
    MonotoneGraph g;
    g.kind_ = Kind::PiecewiseLinear;
    g.points_ = std::move(points);
    if (!g.eval(0.0).contains(0.0))
        throw ConfigError("piecewise_linear graph: 0 must belong to alpha(0)");
    // Sound linear bound from breakpoints and end slopes.
    double ymax = 0.0, xmax = 0.0;
    for (const auto& p : g.points_) {
        ymax = std::max(ymax, std::abs(p.y));
        xmax = std::max(xmax, std::abs(p.x));
    }
    const auto& pts = g.points_;
    auto slope = [](const Point& p, const Point& q) {
        return q.x > p.x ? (q.y - p.y) / (q.x - p.x) : 0.0;
    };
    double send = 0.0;
    if (pts.size() >= 2) {
        send = std::max(slope(pts[0], pts[1]), slope(pts[pts.size() - 2], pts.back()));
        bool left_vertical = pts[0].x == pts[1].x;
        bool right_vertical = pts[pts.size() - 2].x == pts.back().x;
        if (left_vertical || right_vertical) send = std::max(send, 0.0);
    }
    if (std::isfinite(send)) g.big_c_a_ = (ymax + send) * (1.0 + xmax);
    return g;
}

std::string MonotoneGraph::kind_name() const {
    switch (kind_) {
    case Kind::Linear: return "linear";
    case Kind::PowerLaw: return "power_law";
    case Kind::SignPlusLinear: return "sign_plus_linear";
    case Kind::PiecewiseLinear: return "piecewise_linear";
    }
    return "?";
}

Interval MonotoneGraph::eval(double x) const {
    switch (kind_) {
    case Kind::Linear:
        return {a_ * x, a_ * x};
    case Kind::PowerLaw: {
        if (x == 0.0 && q_ == 1.0) return {-a_, a_}; // sign graph
        const double v = a_ * std::pow(std::abs(x), q_ - 1.0) * sgn(x);
        return {v, v};
    }
    case Kind::SignPlusLinear: {
        if (x == 0.0) return {-b_, b_};
        const double v = a_ * x + b_ * sgn(x);
        return {v, v};
    }
    case Kind::PiecewiseLinear:
        break;
    }

    const auto& p = points_;
    const std::size_t n = p.size();

    // All ordinates attached to an exact abscissa match form the interval.
    double lo = kInf, hi = -kInf;
    for (const auto& q : p) {
        if (q.x == x) {
            lo = std::min(lo, q.y);
            hi = std::max(hi, q.y);
        }
    }

    auto extend = [&](bool left) -> double {
        // Continue with the outermost non-vertical segment slope; a vertical
        // end segment extends horizontally.
        if (n == 1) return p[0].y;
        const Point& end = left ? p.front() : p.back();
        const Point& next = left ? p[1] : p[n - 2];
        const double dx = std::abs(end.x - next.x);
        const double s = dx > 0.0 ? (end.y - next.y) / (end.x - next.x) : 0.0;
        return end.y + s * (x - end.x);
    };

    if (x < p.front().x) {
        const double v = extend(true);
        return {v, v};
    }
    if (x > p.back().x) {
        const double v = extend(false);
        return {v, v};
    }
    if (lo <= hi) return {lo, hi};

    // Strictly between two distinct breakpoints: interpolate.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (p[i].x < x && x < p[i + 1].x) {
            const double t = (x - p[i].x) / (p[i + 1].x - p[i].x);
            const double v = p[i].y + t * (p[i + 1].y - p[i].y);
            return {v, v};
        }
    }
    throw SolverError("piecewise_linear graph: evaluation failed (malformed breakpoints)");
}

double MonotoneGraph::resolvent(double lambda, double y) const {
    if (lambda <= 0.0) throw ConfigError("resolvent: lambda must be > 0");
    switch (kind_) {
    case Kind::Linear:
        return y / (1.0 + lambda * a_);
    case Kind::SignPlusLinear: {
        // Soft threshold: dead zone |y| <= lambda*b, linear shrinkage outside.
        const double t = lambda * b_;
        if (std::abs(y) <= t) return 0.0;
        return (y - t * sgn(y)) / (1.0 + lambda * a_);
    }
    default:
        return resolvent_bisect(lambda, y);
    }
}

double MonotoneGraph::resolvent_bisect(double lambda, double y) const {
    auto residual = [&](double x) {
        const Interval iv = eval(x);
        return Interval{x + lambda * iv.lo - y, x + lambda * iv.hi - y};
    };

    // Multivalued points must be checked exactly: a root sitting on a
    // vertical segment is otherwise missed by one ulp.
    if (kind_ == Kind::PowerLaw && q_ == 1.0) {
        const Interval r = residual(0.0);
        if (r.lo <= 0.0 && 0.0 <= r.hi) return 0.0;
    }
    if (kind_ == Kind::PiecewiseLinear) {
        for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
            if (points_[i].x == points_[i + 1].x && points_[i].y < points_[i + 1].y) {
                const Interval r = residual(points_[i].x);
                if (r.lo <= 0.0 && 0.0 <= r.hi) return points_[i].x;
            }
        }
    }

    // The solution lies between 0 and y because the graph passes through the
    // origin. A declared linear bound tightens the bracket.
    double lo = std::min(0.0, y);
    double hi = std::max(0.0, y);
    if (big_c_a_) {
        const double w = lambda * (*big_c_a_) * (1.0 + std::abs(y)) + 1.0;
        lo = std::max(lo, y - w);
        hi = std::min(hi, y + w);
    }

    // Guard against an inconsistent user-declared bound.
    if (residual(lo).hi > 0.0 || residual(hi).lo < 0.0) {
        lo = std::min(0.0, y);
        hi = std::max(0.0, y);
    }
    if (residual(lo).hi > 0.0 || residual(hi).lo < 0.0)
        throw SolverError("resolvent: cannot bracket root (malformed graph)");

    const double tol = 1e-14 * (1.0 + std::abs(y));
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double m = 0.5 * (lo + hi);
        const Interval r = residual(m);
        if (r.hi < 0.0)
            lo = m;
        else if (r.lo > 0.0)
            hi = m;
        else
            return m; // 0 is attained inside a vertical segment
    }
    if ((hi - lo) > 2.0 * tol)
        throw SolverError("resolvent: bisection failed to reach tolerance");
    return 0.5 * (lo + hi);
}

double MonotoneGraph::yosida(double lambda, double y) const {
    return (y - resolvent(lambda, y)) / lambda;
}

double MonotoneGraph::inverse_shifted(double lambda, double z) const {
    if (lambda <= 0.0) throw ConfigError("inverse_shifted: lambda must be > 0");
    if (z == 0.0) return 0.0;

    // lambda*x + A_lambda(x) = z reduces to a single resolvent evaluation:
    // with r = J_mu(z/lambda), mu = (1+lambda^2)/lambda, the solution is
    // x = (r + lambda*z) / (1+lambda^2).
    const double mu = (1.0 + lambda * lambda) / lambda;
    const double r = resolvent(mu, z / lambda);
    double x = (r + lambda * z) / (1.0 + lambda * lambda);

    const double tol = 1e-12 * (1.0 + std::abs(z));
    auto psi = [&](double w) { return lambda * w + yosida(lambda, w) - z; };
    double res = psi(x);
    if (std::abs(res) <= tol) return x;

    // Polish by bisection on the strictly increasing single-valued map psi.
    double step = std::max(std::abs(res) / lambda, tol);
    double lo = x, hi = x;
    double flo = res, fhi = res;
    for (int it = 0; it < 200 && flo > 0.0; ++it) {
        lo -= step;
        step *= 2.0;
        flo = psi(lo);
    }
    step = std::max(std::abs(res) / lambda, tol);
    for (int it = 0; it < 200 && fhi < 0.0; ++it) {
        hi += step;
        step *= 2.0;
        fhi = psi(hi);
    }
    if (flo > 0.0 || fhi < 0.0)
        throw SolverError("inverse_shifted: cannot bracket root");
    for (int it = 0; it < 300; ++it) {
        const double m = 0.5 * (lo + hi);
        const double fm = psi(m);
        if (std::abs(fm) <= tol) return m;
        if (fm < 0.0)
            lo = m;
        else
            hi = m;
        if (hi - lo <= 1e-16 * (1.0 + std::abs(m))) break;
    }
    const double cand = 0.5 * (lo + hi);
    if (std::abs(psi(cand)) > 10.0 * tol)
        throw SolverError("inverse_shifted: iteration exhausted before tolerance");
    return cand;
}

GridFn apply_resolvent(const MonotoneGraph& g, double lambda, const GridFn& w) {
    GridFn out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = g.resolvent(lambda, w[i]);
    return out;
}

GridFn apply_yosida(const MonotoneGraph& g, double lambda, const GridFn& w) {
    GridFn out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = g.yosida(lambda, w[i]);
    return out;
}

GridFn apply_inverse_shifted(const MonotoneGraph& g, double lambda, const GridFn& w) {
    GridFn out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = g.inverse_shifted(lambda, w[i]);
    return out;
}

} // namespace dnsim
