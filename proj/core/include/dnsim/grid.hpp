#ifndef DNSIM_GRID_HPP
#define DNSIM_GRID_HPP

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dnsim/errors.hpp"

namespace dnsim {

/// A grid function: values at the interior nodes of the 1-D mesh.
using GridFn = std::vector<double>;

/// Uniform 1-D mesh on (0,1) with homogeneous Dirichlet boundary values.
///
/// N interior nodes x_i = i*h, i = 1..N, h = 1/(N+1). The discrete
/// H = L^2 inner product carries weight h; the V-seminorm is built from
/// the N+1 forward differences across the edges (boundary values are zero).
class Grid {
public:
    explicit Grid(int n_interior)
        : n_(n_interior), h_(1.0 / (n_interior + 1)) {
        if (n_interior < 1) throw ConfigError("grid.n must be >= 1");
    }

    int n() const { return n_; }
    double h() const { return h_; }
    double node(int i) const { return (i + 1) * h_; } // 0-based interior index

    GridFn zero() const { return GridFn(static_cast<std::size_t>(n_), 0.0); }

    double inner_h(const GridFn& u, const GridFn& v) const {
        assert(u.size() == v.size());
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
        return h_ * s;
    }

    double norm_h(const GridFn& u) const { return std::sqrt(inner_h(u, u)); }

    /// Forward differences across all N+1 edges, boundary values zero.
    std::vector<double> forward_diff(const GridFn& u) const {
        const std::size_t n = u.size();
        std::vector<double> d(n + 1);
        d[0] = u[0] / h_;
        for (std::size_t e = 1; e < n; ++e) d[e] = (u[e] - u[e - 1]) / h_;
        d[n] = -u[n - 1] / h_;
        return d;
    }

    /// || u ||_V^p = h * sum_e |Du_e|^p (a norm under Dirichlet conditions).
    double seminorm_v_pow(const GridFn& u, double p) const {
        double s = 0.0;
        for (double d : forward_diff(u)) s += std::pow(std::abs(d), p);
        return h_ * s;
    }

    double seminorm_v(const GridFn& u, double p) const {
        return std::pow(seminorm_v_pow(u, p), 1.0 / p);
    }

    /// Centered difference at the nodes (used by gradient-dependent forcing).
    GridFn centered_diff(const GridFn& u) const {
        const std::size_t n = u.size();
        GridFn d(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double up = (i + 1 < n) ? u[i + 1] : 0.0;
            const double um = (i > 0) ? u[i - 1] : 0.0;
            d[i] = (up - um) / (2.0 * h_);
        }
        return d;
    }

    bool operator==(const Grid& other) const { return n_ == other.n_; }

private:
    int n_;
    double h_;
};

// Small vector helpers used throughout; all sizes must agree.

inline GridFn& axpy(GridFn& y, double a, const GridFn& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
    return y;
}

inline GridFn sum(const GridFn& a, const GridFn& b) {
    GridFn r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline GridFn diff(const GridFn& a, const GridFn& b) {
    GridFn r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline GridFn scaled(const GridFn& a, double s) {
    GridFn r(a);
    for (double& x : r) x *= s;
    return r;
}

} // namespace dnsim

#endif
