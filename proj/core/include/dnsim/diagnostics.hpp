#ifndef DNSIM_DIAGNOSTICS_HPP
#define DNSIM_DIAGNOSTICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "dnsim/stepper.hpp"

namespace dnsim {

/// Discrete shadow of the regularized Ito energy identity along one path:
///
///   lhs_n = E_lam(u_n) - sum_{k<n} dt (du_d_k, B_lam(u_k))_H
///   rhs_n = E_lam(u_0) + 1/2 sum_{k<n} dt Tr_k
///           + sum_{k<n} (B_lam(u_k), G(t_k, J(u_k)) dW_k)_H
///
/// with Tr_k the trace correction at u_k. residual_0 = 0 exactly; the sup
/// of |residual_n| contracts as dt -> 0, and deleting the trace term leaves
/// an O(1) gap.
struct EnergyLedger {
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> residual;
    std::vector<double> trace_cum;      // 1/2 sum dt Tr_k
    std::vector<double> martingale_cum; // sum (B_lam, G dW)
    std::vector<double> work_cum;       // sum dt (du_d, B_lam)
    double sup_abs_residual = 0.0;
};

EnergyLedger ito_ledger(const TrajectoryRecord& rec, const SimConfig& cfg,
                        bool include_trace = true);

struct ItoEnsembleResult {
    double rms_sup_residual = 0.0;
    double rms_sup_residual_no_trace = 0.0;
    MeanSe martingale_final;
};

/// Ensemble-RMS of the per-path sup residual, with and without the trace term.
ItoEnsembleResult ito_residual_ensemble(const SimConfig& cfg);

/// The four lambda-uniform estimate quantities for one lambda.
struct AprioriRow {
    double lambda = 0.0;
    double dt = 0.0;
    double sup_mean_energy_prox = 0.0;   // sup_n E[ E(J_lam(u_n)) ]
    double int_resolvent_rate_sq = 0.0;  // E int ||J_lam^A(du_d)||_H^2
    double int_yosida_rate_sq = 0.0;     // E int ||A_lam(du_d)||_H^2
    double sup_mean_prox_v_pow = 0.0;    // sup_n E[ ||J_lam(u_n)||_V^p ]
};

struct AprioriReport {
    std::vector<AprioriRow> rows;
    double ratio_bound = 10.0;
    /// max/min ratio per quantity across the sweep, in row order above.
    std::array<double, 4> ratios{};
    std::array<bool, 4> ratio_flagged{};
    std::array<bool, 4> monotone_growth{};
};

/// Runs the sweep with dt = c_stab * lambda^2 per lambda.
AprioriReport apriori_sweep(const SimConfig& base, std::span<const double> lambdas,
                            double ratio_bound = 10.0);

struct LambdaCauchyResult {
    std::vector<double> lambdas;
    std::vector<double> e;        // e_k = sup_n ||u_{l_k} - u_{l_{k+1}}||_H
    std::vector<double> ref_err;  // sup_n ||u_{l_k} - u_ref||_H, when available
    double shared_dt = 0.0;
    bool nonincreasing = false;   // within 10% slack
    double order_consecutive = 0.0; // log2 fit on e_k over dyadic levels
    double order_vs_reference = 0.0;
    bool has_reference = false;
};

/// Pathwise coupling: all lambda-runs share one Wiener realization and one
/// time grid (dt = c_stab * lambda_min^2).
LambdaCauchyResult lambda_cauchy(const SimConfig& base, std::span<const double> lambdas,
                                 std::uint64_t path_index = 0);

/// Exact solution of the zero-noise, zero-forcing limit flow for the fully
/// linear model (quadratic energy, linear dissipation graph), evaluated on
/// the trajectory time grid via the sine eigenbasis.
std::optional<std::vector<GridFn>> exact_linear_reference(const SimConfig& cfg,
                                                          std::size_t n_steps, double dt);

struct StabilityPairResult {
    double scale = 0.0; // 0 for non-homogeneous pairs
    double sup_v_diff = 0.0;     // sup_n sqrt(E ||u1-u2||_V^2)
    double rate_l2_diff = 0.0;   // sqrt(E sum dt ||du_d1-du_d2||_H^2)
    double denom_v = 0.0;        // ||u01-u02||_V
    double ratio = 0.0;
};

struct StabilityResult {
    std::vector<StabilityPairResult> pairs;
    double k_hat = 0.0;
    double k_pred = 0.0;       // Gronwall-type bound assembled from the constants
    double scale_spread = 0.0; // relative spread of ratios over homogeneous pairs
    double c_a = 0.0, c_b = 0.0, norm_b = 0.0, c_f_lip = 0.0, c_g_tr = 0.0;
};

/// Continuous-dependence probe in the linear setting (quadratic energy,
/// strongly monotone graph, linear noise, zero additive noise level).
/// Refuses configurations outside those hypotheses.
StabilityResult stability_probe(const SimConfig& cfg, std::span<const double> scales,
                                bool include_mixed_pair, int n_paths);

struct DissipationReport {
    std::vector<double> times;
    std::vector<double> mean_moreau;    // E[ E_lam(u_n) ]
    std::vector<double> mean_diss_cum;  // E sum dt (v, du_d)
    std::vector<double> mean_work_cum;  // E sum dt (F, du_d)
    std::vector<double> mean_trace_cum; // 1/2 E sum dt Tr
    std::vector<double> slack;          // lhs - rhs; expected <= 3 se
    std::vector<double> se;             // standard error of the slack
    bool inequality_ok = false;
};

DissipationReport dissipation_report(const SimConfig& cfg);

} // namespace dnsim

#endif
