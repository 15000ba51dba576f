#ifndef DNSIM_NOISE_HPP
#define DNSIM_NOISE_HPP

#include <span>
#include <string>
#include <vector>

#include "dnsim/grid.hpp"
#include "dnsim/rng.hpp"

namespace dnsim {

/// Truncated cylindrical noise coefficient G acting against the first m modes
/// of the driving Wiener process. Mode amplitudes decay as sigma0 * j^(-r)
/// with r > 1/2 so that the amplitudes are square-summable.
class NoiseModel {
public:
    enum class Kind { Zero, Additive, Superposition };
    enum class Phi { Identity, Tanh };

    static NoiseModel zero();
    /// Mode vectors g_j = sigma_j * e_j, independent of the state.
    static NoiseModel additive(const Grid& grid, int m, double sigma0, double r);
    /// h_j(u)(x) = sigma_j * phi(u(x)) * e_j(x) with a 1-Lipschitz link phi.
    static NoiseModel superposition(const Grid& grid, int m, double sigma0, double r,
                                    Phi phi);

    Kind kind() const { return kind_; }
    Phi phi() const { return phi_; }
    int mode_count() const { return static_cast<int>(profiles_.size()); }
    double sigma0() const { return sigma0_; }
    double decay() const { return r_; }
    double sigma(int j) const { return sigmas_[static_cast<std::size_t>(j)]; }

    /// Declared Lipschitz/growth constant in the Hilbert-Schmidt norm.
    double lipschitz_bound() const { return c_g_; }
    /// Growth exponent: 1 when p > 2, 1/2 when p = 2.
    double growth_exponent(double p) const { return p > 2.0 ? 1.0 : 0.5; }

    /// G(t,u) dW = sum_j h_j(t,u) * dW_j. Linear in dW.
    GridFn apply(double t, const GridFn& u, std::span<const double> dw) const;

    /// Hilbert-Schmidt norm sqrt(sum_j ||h_j(t,u)||_H^2).
    double hs_norm(double t, const GridFn& u) const;

    /// The mode vectors (h_j(t,u))_j, feeding the Ito trace correction.
    std::vector<GridFn> mode_vectors(double t, const GridFn& u) const;

    /// True when G is linear in the state with G(0) = 0 (the setting of the
    /// continuous-dependence probe).
    bool is_linear() const {
        return kind_ == Kind::Zero ||
               (kind_ == Kind::Superposition && phi_ == Phi::Identity);
    }

    std::string kind_name() const;
    std::string phi_name() const;

private:
    NoiseModel() = default;
    double link(double s) const;

    Kind kind_ = Kind::Zero;
    Phi phi_ = Phi::Identity;
    double sigma0_ = 0.0;
    double r_ = 1.0;
    double c_g_ = 0.0;
    std::vector<double> sigmas_;
    std::vector<GridFn> profiles_; // e_j sampled at the nodes
};

} // namespace dnsim

#endif
