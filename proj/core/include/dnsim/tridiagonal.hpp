#ifndef DNSIM_TRIDIAGONAL_HPP
#define DNSIM_TRIDIAGONAL_HPP

#include <cstddef>
#include <vector>

#include "dnsim/errors.hpp"
#include "dnsim/grid.hpp"

namespace dnsim {

/// Symmetric tridiagonal matrix, stored as diagonal and off-diagonal bands.
struct TridiagonalMatrix {
    std::vector<double> diag; // size n
    std::vector<double> off;  // size n-1, coupling (i, i+1)

    std::size_t size() const { return diag.size(); }

    GridFn apply(const GridFn& x) const {
        const std::size_t n = diag.size();
        GridFn y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * x[i];
            if (i > 0) s += off[i - 1] * x[i - 1];
            if (i + 1 < n) s += off[i] * x[i + 1];
            y[i] = s;
        }
        return y;
    }
};

/// Thomas factorization of a symmetric positive definite tridiagonal matrix.
class TridiagonalFactor {
public:
    explicit TridiagonalFactor(const TridiagonalMatrix& m)
        : off_(m.off), pivot_(m.diag.size()) {
        const std::size_t n = m.diag.size();
        double d = m.diag[0];
        for (std::size_t i = 0;; ++i) {
            if (d <= 0.0)
                throw SolverError("tridiagonal factorization: matrix not positive definite");
            pivot_[i] = d;
            if (i + 1 == n) break;
            d = m.diag[i + 1] - m.off[i] * m.off[i] / pivot_[i];
        }
    }

    GridFn solve(const GridFn& b) const {
        const std::size_t n = pivot_.size();
        GridFn x(b);
        for (std::size_t i = 1; i < n; ++i) x[i] -= off_[i - 1] / pivot_[i - 1] * x[i - 1];
        x[n - 1] /= pivot_[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - off_[i] * x[i + 1]) / pivot_[i];
        return x;
    }

private:
    std::vector<double> off_;
    std::vector<double> pivot_;
};

} // namespace dnsim

#endif
