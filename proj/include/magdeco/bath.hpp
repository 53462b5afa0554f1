// bath.hpp: Ohmic bath with abrupt cutoff: spectral density, noise-kernel
// weight, continuum noise kernel nu(tau) and its tabulation, plus an explicit
// N-oscillator bath used as an independent oracle.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "magdeco/model.hpp"
#include "magdeco/quadrature.hpp"

namespace magdeco {

struct SpectralDensity {
    double gamma{1.0};
    double Lambda{1e3};

    /// gamma * omega below the cutoff, zero at and above it.
    double operator()(double omega) const noexcept {
        return (omega >= 0.0 && omega < Lambda) ? gamma * omega : 0.0;
    }
};

/// How the coupling strengths enter the noise-kernel prefactor.
///   generalized: g*m_r + d*m_b
///   literal:     m_r + m_b, only meaningful for d = g = 1
enum class PrefactorRule { generalized, literal };

double coupling_prefactor(const ModelParams& params, PrefactorRule rule = PrefactorRule::generalized);

/// x * coth(x) for x >= 0, with series below 1e-6 and x itself above 20.
double x_coth_x(double x) noexcept;

/// W(omega) = J(omega) omega^2 P / (m omega0^2 + m_b omega^2 + K) * coth(omega / Omega).
/// Zero at omega = 0 and for omega >= Lambda.
double noise_weight(const ModelParams& params, double omega,
                    PrefactorRule rule = PrefactorRule::generalized);

/// Continuum noise kernel nu(tau) = int_0^Lambda W(omega) cos(omega tau) d omega.
///
/// Holds the weight samples on a dyadic grid of [0, Lambda] so repeated
/// evaluations (table construction) share them. The weight used on the closed
/// interval is the left limit at Lambda, since the cutoff sits exactly on the
/// last node. Samples are identical whether taken from the cache or computed
/// fresh, so results do not depend on cache state.
class NoiseKernel {
public:
    explicit NoiseKernel(const ModelParams& params, PrefactorRule rule = PrefactorRule::generalized);

    const ModelParams& params() const noexcept { return params_; }
    PrefactorRule rule() const noexcept { return rule_; }

    /// Weight without the cutoff step, valid on [0, Lambda].
    double interior_weight(double omega) const noexcept;

    /// int_0^Lambda W, which is nu(0) and bounds |nu(tau)|. Fixed-order
    /// Simpson estimate, used to set the absolute error floor.
    double magnitude() const noexcept { return magnitude_; }

    /// Quadrature settings for nu(tau) at relative tolerance `tol`: the absolute floor
    /// is 1e-2 * tol * magnitude(), so evaluations near a zero of nu(tau)
    /// terminate.
    QuadratureSpec spec_for(double tol) const;

    /// Filon quadrature of nu(tau). Thread-safe.
    QuadratureResult evaluate(double tau, const QuadratureSpec& spec) const;

    /// Samples the weight at `intervals` + 1 nodes up front; later calls at
    /// this or any coarser dyadic level read from the cache.
    void prefetch(std::size_t intervals);

private:
    SampleView samples(std::size_t intervals, std::vector<double>& scratch) const;

    ModelParams params_;
    PrefactorRule rule_;
    double prefactor_;
    double stiffness_;  // m omega0^2 + K
    double magnitude_{0.0};
    std::vector<double> cache_;
    std::size_t cache_intervals_{0};
};

/// nu(tau) to relative accuracy `tol` in (0, 1e-2]. Throws QuadratureError
/// when the panel budget is exhausted.
double nu_of_tau(const ModelParams& params, double tau, double tol,
                 PrefactorRule rule = PrefactorRule::generalized);

/// nu(tau) on a uniform grid closed at 0 and t_max. Immutable once built.
struct KernelTable {
    double t_max{0.0};
    double step{0.0};               // 0 for the single-entry table at t_max = 0
    std::vector<double> nu;         // nu[i] = nu(i * step)
    std::uint64_t params_hash{0};
    double tol{0.0};

    std::size_t size() const noexcept { return nu.size(); }
    double tau(std::size_t i) const noexcept { return step * static_cast<double>(i); }
};

struct TableOptions {
    double max_step{0.0};        // 0 selects default_table_step; clamped to max_table_step
    unsigned workers{1};
    PrefactorRule rule{PrefactorRule::generalized};
};

/// Largest grid step allowed for `params`: pi / (10 max(a, Lambda)).
double max_table_step(const ModelParams& params);

/// Half of max_table_step. The Simpson error of the factor integrals near
/// tau = 0 and near t is otherwise about 1e-4 relative.
double default_table_step(const ModelParams& params);

/// Stable FNV-1a hash over the bit patterns of every parameter.
std::uint64_t hash_params(const ModelParams& params);

/// Entries reproduce nu_of_tau(params, tau_i, tol) bitwise. Quadrature
/// failures are rethrown as QuadratureError naming the offending tau.
KernelTable build_kernel_table(const ModelParams& params, double t_max, double tol,
                               const TableOptions& options = {});

/// Explicit bath of oscillators sharing one mass and one pair of couplings.
struct DiscreteBath {
    std::vector<double> omegas;   // strictly increasing, all > 0
    double m_b{1e-2};
    double d{1.0};
    double g{1.0};
    double Gamma{0.0};            // free parameter of the off-diagonal memory kernel
    double charge{1.0};

    void validate() const;

    /// K_j = g * sum_l m_b omega_l^2 d^2, identical for every j here.
    double spring_constant_sum() const;
};

/// N oscillators at the midpoints of N equal cells of (0, Lambda).
DiscreteBath uniform_discrete_bath(const ModelParams& params, std::size_t n);

struct MemoryKernels {
    double diagonal{0.0};
    double off_diagonal{0.0};
};

/// Diagonal and off-diagonal friction kernels at time t >= 0.
MemoryKernels discrete_memory_kernels(const DiscreteBath& bath, const ModelParams& params, double t);

/// Riemann-sum noise kernel over a uniformly spaced bath: each oscillator
/// carries the continuum weight of its cell, W(omega_j) * delta_omega.
double discrete_nu_oracle(const DiscreteBath& bath, const ModelParams& params, double tau,
                          PrefactorRule rule = PrefactorRule::generalized);

}  // namespace magdeco
