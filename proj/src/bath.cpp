#include "magdeco/bath.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <exception>
#include <numbers>
#include <string>
#include <thread>


namespace magdeco {

double coupling_prefactor(const ModelParams& params, PrefactorRule rule) {
    if (rule == PrefactorRule::literal) return params.m_r + params.m_b;
    return params.g * params.m_r + params.d * params.m_b;
}

double x_coth_x(double x) noexcept {
    if (x < 1e-6) return 1.0 + x * x / 3.0;
    if (x > 20.0) return x;
    return x / std::tanh(x);
}

namespace {

// gamma omega^2 P / (stiffness + m_b omega^2) * Omega * x coth(x), x = omega/Omega.
// Equal to J(omega) omega^2 P/(...) coth(omega/Omega) with the pole at 0 cancelled.
inline double smooth_weight(const ModelParams& p, double prefactor, double stiffness, double omega) noexcept {
    const double w2 = omega * omega;
    return p.gamma * w2 * prefactor / (stiffness + p.m_b * w2) * p.Omega * x_coth_x(omega / p.Omega);
}

}  // namespace

double noise_weight(const ModelParams& params, double omega, PrefactorRule rule) {
    if (!(omega >= 0.0) || omega >= params.Lambda) return 0.0;
    const double stiffness = params.m * params.omega0 * params.omega0 + params.K;
    return smooth_weight(params, coupling_prefactor(params, rule), stiffness, omega);
}

NoiseKernel::NoiseKernel(const ModelParams& params, PrefactorRule rule)
    : params_(params),
      rule_(rule),
      prefactor_(coupling_prefactor(params, rule)),
      stiffness_(params.m * params.omega0 * params.omega0 + params.K) {
    params_.validate();
    if (rule == PrefactorRule::literal && !(params.d == 1.0 && params.g == 1.0)) {
        throw ModelError("literal noise prefactor requires d = g = 1");
    }
    constexpr std::size_t cells = 4096;
    const double h = params_.Lambda / cells;
    double acc = interior_weight(0.0) + interior_weight(params_.Lambda);
    for (std::size_t i = 1; i < cells; ++i) {
        acc += (i % 2 == 1 ? 4.0 : 2.0) * interior_weight(h * static_cast<double>(i));
    }
    magnitude_ = acc * h / 3.0;
}

double NoiseKernel::interior_weight(double omega) const noexcept {
    return smooth_weight(params_, prefactor_, stiffness_, omega);
}

void NoiseKernel::prefetch(std::size_t intervals) {
    if (intervals <= cache_intervals_) return;
    cache_.resize(intervals + 1);
    const double n = static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) {
        cache_[i] = interior_weight(params_.Lambda * (static_cast<double>(i) / n));
    }
    cache_intervals_ = intervals;
}

SampleView NoiseKernel::samples(std::size_t intervals, std::vector<double>& scratch) const {
    if (intervals > 0 && intervals <= cache_intervals_ && cache_intervals_ % intervals == 0 &&
        std::has_single_bit(cache_intervals_ / intervals)) {
        return {cache_.data(), cache_intervals_ / intervals};
    }
    scratch.resize(intervals + 1);
    const double n = static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) {
        scratch[i] = interior_weight(params_.Lambda * (static_cast<double>(i) / n));
    }
    return {scratch.data(), 1};
}

QuadratureResult NoiseKernel::evaluate(double tau, const QuadratureSpec& spec) const {
    const SampleSource source = [this](std::size_t intervals, std::vector<double>& scratch) {
        return samples(intervals, scratch);
    };
    return integrate_cosine_sampled(source, params_.Lambda, tau, spec);
}

QuadratureSpec NoiseKernel::spec_for(double tol) const {
    if (!(tol > 0.0 && tol <= 1e-2)) {
        throw std::invalid_argument("noise kernel tolerance must lie in (0, 1e-2]");
    }
    QuadratureSpec spec;
    spec.rel_tol = tol;
    spec.abs_floor = std::max(1e-12, 1e-2 * tol * magnitude_);
    spec.max_panels = 1u << 20;
    return spec;
}

double nu_of_tau(const ModelParams& params, double tau, double tol, PrefactorRule rule) {
    const NoiseKernel kernel(params, rule);
    return kernel.evaluate(tau, kernel.spec_for(tol)).value;
}

double max_table_step(const ModelParams& params) {
    const auto freqs = derive_frequencies(params);
    return std::numbers::pi / (10.0 * std::max(freqs.fast, params.Lambda));
}

double default_table_step(const ModelParams& params) { return 0.5 * max_table_step(params); }

std::uint64_t hash_params(const ModelParams& params) {
    const double fields[] = {params.m,   params.omega0, params.omega_c, params.gamma, params.Lambda,
                             params.Omega, params.m_b,  params.m_r,     params.K,     params.d,
                             params.g,   params.dx,     params.dy};
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (double v : fields) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, sizeof bits);
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (bits >> (8 * byte)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

KernelTable build_kernel_table(const ModelParams& params, double t_max, double tol, const TableOptions& options) {
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
        throw std::invalid_argument("build_kernel_table: t_max must be finite and non-negative");
    }
    NoiseKernel kernel(params, options.rule);
    const QuadratureSpec spec = kernel.spec_for(tol);

    KernelTable table;
    table.t_max = t_max;
    table.params_hash = hash_params(params);
    table.tol = tol;
    if (t_max == 0.0) {
        table.nu = {kernel.evaluate(0.0, spec).value};
        return table;
    }
    double max_step = default_table_step(params);
    if (options.max_step > 0.0) max_step = std::min(max_table_step(params), options.max_step);
    const auto cells = static_cast<std::size_t>(std::ceil(t_max / max_step));
    table.step = t_max / static_cast<double>(cells);
    table.nu.assign(cells + 1, 0.0);

    // Finest level the initial Filon pass reaches at tau = t_max.
    const double default_width = params.Lambda / 32.0;
    const double wanted = std::ceil(params.Lambda / cosine_panel_cap(t_max, default_width));
    std::size_t coarse = 16;
    while (static_cast<double>(coarse) < wanted) coarse *= 2;
    kernel.prefetch(4 * coarse);

    const unsigned workers = std::max(1u, options.workers);
    std::vector<std::exception_ptr> failures(workers);
    auto work = [&](unsigned w) {
        try {
            for (std::size_t i = w; i < table.nu.size(); i += workers) {
                const double tau = table.tau(i);
                try {
                    table.nu[i] = kernel.evaluate(tau, spec).value;
                } catch (const QuadratureError& e) {
                    throw QuadratureError("noise kernel did not converge at tau=" + std::to_string(tau) + ": " +
                                              e.what(),
                                          e.best());
                }
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    return table;
}

void DiscreteBath::validate() const {
    if (omegas.empty()) throw ModelError("discrete bath needs at least one oscillator");
    for (std::size_t j = 0; j < omegas.size(); ++j) {
        if (!(omegas[j] > 0.0)) throw ModelError("discrete bath frequencies must be positive");
        if (j > 0 && !(omegas[j] > omegas[j - 1])) {
            throw ModelError("discrete bath frequencies must be strictly increasing");
        }
    }
    if (!(m_b > 0.0)) throw ModelError("discrete bath mass must be positive");
    if (!(d >= 0.0) || !(g >= 0.0)) throw ModelError("discrete bath couplings must be non-negative");
}

double DiscreteBath::spring_constant_sum() const {
    double sum = 0.0;
    for (double w : omegas) sum += m_b * w * w * d * d;
    return g * sum;
}

DiscreteBath uniform_discrete_bath(const ModelParams& params, std::size_t n) {
    if (n == 0) throw ModelError("uniform_discrete_bath: n must be positive");
    DiscreteBath bath;
    bath.omegas.resize(n);
    const double cell = params.Lambda / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) bath.omegas[j] = (static_cast<double>(j) + 0.5) * cell;
    bath.m_b = params.m_b;
    bath.d = params.d;
    bath.g = params.g;
    return bath;
}

MemoryKernels discrete_memory_kernels(const DiscreteBath& bath, const ModelParams& params, double t) {
    bath.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("discrete_memory_kernels: t must be non-negative");
    constexpr double c = 1.0;
    const double spring = bath.spring_constant_sum();
    const double w02 = params.omega0 * params.omega0;
    MemoryKernels mu;
    for (double wj : bath.omegas) {
        const double wj2 = wj * wj;
        const double diag_coeff = (bath.g * params.m_r + bath.d * bath.m_b) *
                                  (bath.g * params.m * w02 + bath.d * bath.m_b * wj2 + spring) / bath.m_b;
        const double off_coeff = -bath.g * bath.charge * bath.Gamma *
                                 (bath.g * params.m_r * wj2 + bath.d * bath.m_b * wj2) / (c * params.m * wj);
        mu.diagonal += diag_coeff * std::cos(wj * t);
        mu.off_diagonal += off_coeff * std::sin(wj * t);
    }
    return mu;
}

double discrete_nu_oracle(const DiscreteBath& bath, const ModelParams& params, double tau, PrefactorRule rule) {
    bath.validate();
    const std::size_t n = bath.omegas.size();
    // Cell width from the uniform spacing: omegas are cell midpoints of (0, Lambda).
    const double cell = params.Lambda / static_cast<double>(n);
    double sum = 0.0, comp = 0.0;
    for (double wj : bath.omegas) {
        const double term = noise_weight(params, wj, rule) * std::cos(wj * tau);
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return (sum + comp) * cell;
}

}  // namespace magdeco
