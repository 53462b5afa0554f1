// decoherence.hpp: decoherence factors, the cumulative exponent D(t) and the
// off-diagonal density-matrix ratio, by two independent routes:
//   omega-analytic: the time integrals of cos(omega tau) * kernel(tau) are
//                   done in closed form, leaving one frequency quadrature;
//   tau-grid:       nu(tau) is tabulated and the products integrated in time.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "magdeco/bath.hpp"
#include "magdeco/kernels.hpp"
#include "magdeco/model.hpp"
#include "magdeco/quadrature.hpp"

namespace magdeco {

enum class Strategy { omega_analytic, tau_grid };

struct DecoherenceSeries {
    std::vector<double> t;
    std::vector<double> D1;         // direct factor
    std::vector<double> D2;         // cross factor
    std::vector<double> Danom1;     // anomalous direct factor
    std::vector<double> Danom2;     // anomalous cross factor
    std::vector<double> D_total;    // cumulative exponent
    std::vector<double> rho_ratio;  // exp(-D_total)

    std::size_t size() const noexcept { return t.size(); }
    std::vector<double>& factor(Channel channel);
    const std::vector<double>& factor(Channel channel) const;
};

struct SeriesOptions {
    Strategy strategy{Strategy::omega_analytic};
    QuadratureSpec quadrature{};          // frequency quadrature (omega-analytic)
    double table_tol{1e-10};              // nu(tau) tolerance (tau-grid)
    double table_max_step{0.0};           // 0 selects the default grid rule
    PrefactorRule rule{PrefactorRule::generalized};
    unsigned workers{1};
    bool all_factors{true};               // false: only D1 and the exponent
};

/// `points` values evenly spaced on [0, t_max], both ends included.
std::vector<double> uniform_grid(double t_max, std::size_t points);

/// Default output grid: 1001 points on [0, 10].
std::vector<double> default_time_grid();

/// int_0^t g(tau) d tau for samples g_i = g(i h), i = 0..n-1: composite
/// Simpson on the whole cells (3/8 rule on a trailing odd triple, a cubic
/// through four nodes for a lone first cell) plus a quintic through the
/// nearest six nodes for the partial cell.
double grid_prefix_integral(std::span<const double> samples, double h, double t);

/// int_0^t nu(tau) kernel(tau) d tau from a kernel table.
double decoherence_factor_tau_grid(const KernelTable& table, const FrequencyPair& freqs, double m,
                                   Channel channel, double t);

/// int_0^t D1(t') dt' = int_0^t (t - tau) nu(tau) F1(tau) d tau from a kernel table.
double integrated_direct_factor_tau_grid(const KernelTable& table, const FrequencyPair& freqs, double t);

/// Closed-form int_0^t cos(omega tau) kernel(tau) d tau.
double time_integrated_kernel(const FrequencyPair& freqs, double m, Channel channel, double omega, double t);

/// Closed-form int_0^t (t - tau) cos(omega tau) F1(tau) d tau.
double doubly_integrated_direct_kernel(const FrequencyPair& freqs, double omega, double t);

/// int_0^Lambda W(omega) time_integrated_kernel(omega, t) d omega.
QuadratureResult decoherence_factor_omega_analytic(const ModelParams& params, Channel channel, double t,
                                                   const QuadratureSpec& spec,
                                                   PrefactorRule rule = PrefactorRule::generalized);

/// int_0^t D1(t') dt' by the same frequency quadrature.
QuadratureResult integrated_direct_factor_omega_analytic(const ModelParams& params, double t,
                                                         const QuadratureSpec& spec,
                                                         PrefactorRule rule = PrefactorRule::generalized);

/// Time integrals of the four factors, the inputs to the exponent.
struct ChannelIntegrals {
    double direct{0.0};
    double cross{0.0};
    double anomalous_direct{0.0};
    double anomalous_cross{0.0};
};

/// D(t) = (dx^2 + dy^2) * int_0^t D1. The cross channel cancels between the
/// [X,[Y,.]] and [Y,[X,.]] terms and the anomalous channels are dropped, so
/// only `direct` is read.
double assemble_exponent(const ChannelIntegrals& integrals, double dx, double dy);

/// Factors and exponent on a uniform grid starting at 0.
DecoherenceSeries cumulative_exponent(const ModelParams& params, std::span<const double> t_grid,
                                      const SeriesOptions& options = {});

/// Applies the coupling preset, then cumulative_exponent.
DecoherenceSeries rho_ratio_series(const ModelParams& params, CouplingMode mode, std::span<const double> t_grid,
                                   const SeriesOptions& options = {});

/// Exponent at a single time, by the selected strategy.
double exponent_at(const ModelParams& params, double t, const SeriesOptions& options = {});

/// Trapezoid of D1 over the series grid times (dx^2 + dy^2). Diagnostic
/// only: D1 carries a ringing at the cutoff frequency that a coarse output
/// grid does not resolve.
std::vector<double> trapezoid_exponent(const DecoherenceSeries& series, double dx, double dy);

}  // namespace magdeco
