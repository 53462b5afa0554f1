#include "magdeco/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace magdeco {

std::vector<double>& DecoherenceSeries::factor(Channel channel) {
    switch (channel) {
        case Channel::direct: return D1;
        case Channel::cross: return D2;
        case Channel::anomalous_direct: return Danom1;
        case Channel::anomalous_cross: return Danom2;
    }
    throw std::logic_error("unknown channel");
}

const std::vector<double>& DecoherenceSeries::factor(Channel channel) const {
    return const_cast<DecoherenceSeries*>(this)->factor(channel);
}

std::vector<double> uniform_grid(double t_max, std::size_t points) {
    if (points == 0) throw std::invalid_argument("uniform_grid: needs at least one point");
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
        throw std::invalid_argument("uniform_grid: t_max must be finite and non-negative");
    }
    if (points == 1) return {0.0};
    std::vector<double> grid(points);
    const double n = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid[i] = t_max * (static_cast<double>(i) / n);
    grid.back() = t_max;
    return grid;
}

std::vector<double> default_time_grid() { return uniform_grid(10.0, 1001); }

namespace {

// int_j^{j+s} of the quintic through up to six nodes around cell j, in units
// of the grid step. Four-point Gauss-Legendre is exact for it.
double partial_cell(std::span<const double> y, std::size_t j, double s) {
    const std::size_t n = y.size();
    const std::size_t count = std::min<std::size_t>(6, n);
    std::size_t lo = j >= 2 ? j - 2 : 0;
    if (lo + count > n) lo = n - count;
    constexpr double gx[4] = {-0.861136311594052575, -0.339981043584856265, 0.339981043584856265,
                              0.861136311594052575};
    constexpr double gw[4] = {0.347854845137453857, 0.652145154862546143, 0.652145154862546143,
                              0.347854845137453857};
    double sum = 0.0;
    for (int q = 0; q < 4; ++q) {
        const double x = static_cast<double>(j) + 0.5 * s * (1.0 + gx[q]);
        double value = 0.0;
        for (std::size_t a = lo; a < lo + count; ++a) {
            double basis = 1.0;
            for (std::size_t b = lo; b < lo + count; ++b) {
                if (b != a) basis *= (x - static_cast<double>(b)) / (static_cast<double>(a) - static_cast<double>(b));
            }
            value += basis * y[a];
        }
        sum += gw[q] * value;
    }
    return 0.5 * s * sum;
}

}  // namespace

double grid_prefix_integral(std::span<const double> y, double h, double t) {
    if (t == 0.0) return 0.0;
    if (!(t > 0.0)) throw std::invalid_argument("grid_prefix_integral: t must be non-negative");
    const std::size_t n = y.size();
    if (n < 2 || !(h > 0.0)) throw std::out_of_range("grid_prefix_integral: t lies beyond the grid");

    const double x = t / h;
    auto j = static_cast<std::size_t>(std::floor(x));
    double frac = x - static_cast<double>(j);
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) {
        j = static_cast<std::size_t>(nearest);
        frac = 0.0;
    }
    if (j > n - 1 || (j == n - 1 && frac > 0.0)) {
        throw std::out_of_range("grid_prefix_integral: t=" + std::to_string(t) + " lies beyond the grid");
    }

    double whole = 0.0;
    if (j == 1) {
        if (n > 3) {
            whole = h * (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]) / 24.0;
        } else if (n > 2) {
            whole = h * (5.0 * y[0] + 8.0 * y[1] - y[2]) / 12.0;
        } else {
            whole = 0.5 * h * (y[0] + y[1]);
        }
    } else if (j >= 2) {
        const std::size_t simpson_cells = (j % 2 == 0) ? j : j - 3;
        double odd = 0.0, even = 0.0;
        for (std::size_t i = 1; i < simpson_cells; i += 2) odd += y[i];
        for (std::size_t i = 2; i < simpson_cells; i += 2) even += y[i];
        if (simpson_cells > 0) whole = h / 3.0 * (y[0] + 4.0 * odd + 2.0 * even + y[simpson_cells]);
        if (simpson_cells != j) {
            const std::size_t k = j - 3;
            whole += 3.0 * h / 8.0 * (y[k] + 3.0 * y[k + 1] + 3.0 * y[k + 2] + y[k + 3]);
        }
    }

    if (frac > 0.0) whole += h * partial_cell(y, j, frac);
    return whole;
}

namespace {

std::size_t nodes_needed(const KernelTable& table, double t) {
    if (t > table.t_max * (1.0 + 1e-12)) {
        throw std::out_of_range("t=" + std::to_string(t) + " lies beyond the kernel table (t_max=" +
                                std::to_string(table.t_max) + ")");
    }
    if (table.step == 0.0) return table.size();
    const auto j = static_cast<std::size_t>(std::ceil(t / table.step)) + 3;
    return std::min(j + 1, table.size());
}

}  // namespace

double decoherence_factor_tau_grid(const KernelTable& table, const FrequencyPair& freqs, double m,
                                   Channel channel, double t) {
    const std::size_t n = nodes_needed(table, t);
    if (t == 0.0) return 0.0;
    std::vector<double> product(n);
    for (std::size_t i = 0; i < n; ++i) {
        product[i] = table.nu[i] * eval_kernel(freqs, m, channel, table.tau(i));
    }
    return grid_prefix_integral(product, table.step, t);
}

double integrated_direct_factor_tau_grid(const KernelTable& table, const FrequencyPair& freqs, double t) {
    const std::size_t n = nodes_needed(table, t);
    if (t == 0.0) return 0.0;
    std::vector<double> product(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = table.tau(i);
        product[i] = (t - tau) * table.nu[i] * eval_kernel(freqs, 1.0, Channel::direct, tau);
    }
    return grid_prefix_integral(product, table.step, t);
}

namespace {

inline double sinc(double u) noexcept {
    if (std::abs(u) < 1e-3) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 * (1.0 - u2 / 20.0);
    }
    return std::sin(u) / u;
}

// int_0^t cos(x tau) d tau
inline double cos_integral(double x, double t) noexcept { return t * sinc(x * t); }

// int_0^t sin(x tau) d tau = 2 sin^2(x t/2) / x
inline double sin_integral(double x, double t) noexcept {
    const double u = 0.5 * x * t;
    return t * std::sin(u) * sinc(u);
}

// int_0^t (t - tau) cos(x tau) d tau = (1 - cos(x t)) / x^2
inline double ramp_cos_integral(double x, double t) noexcept {
    const double s = sinc(0.5 * x * t);
    return 0.5 * t * t * s * s;
}

// int_0^t cos(w tau) cos(f tau) d tau
inline double cos_pair(double w, double f, double t) noexcept {
    return 0.5 * (cos_integral(w - f, t) + cos_integral(w + f, t));
}

// int_0^t cos(w tau) sin(f tau) d tau
inline double sin_pair(double w, double f, double t) noexcept {
    return 0.5 * (sin_integral(f + w, t) + sin_integral(f - w, t));
}

QuadratureSpec frequency_spec(const QuadratureSpec& base, double lambda, double t) {
    QuadratureSpec spec = base;
    double width = lambda / 32.0;
    if (t > 0.0) width = std::min(width, 2.0 * std::numbers::pi / t);
    if (spec.max_panel_width > 0.0) width = std::min(width, spec.max_panel_width);
    spec.max_panel_width = width;
    // Factors cross zero as t varies; near a crossing the relative target is
    // out of reach, so accept an error small against the absolute integral.
    if (spec.l1_rel == 0.0) spec.l1_rel = 1e-2 * spec.rel_tol;
    return spec;
}

}  // namespace

double time_integrated_kernel(const FrequencyPair& freqs, double m, Channel channel, double omega, double t) {
    const double a = freqs.fast;
    const double b = freqs.slow;
    const double sum = a + b;
    switch (channel) {
        case Channel::direct: return (b * cos_pair(omega, a, t) + a * cos_pair(omega, b, t)) / sum;
        case Channel::cross: return (b * sin_pair(omega, a, t) - a * sin_pair(omega, b, t)) / sum;
        case Channel::anomalous_direct: return (sin_pair(omega, a, t) + sin_pair(omega, b, t)) / (m * sum);
        case Channel::anomalous_cross: return (cos_pair(omega, b, t) - cos_pair(omega, a, t)) / (m * sum);
    }
    return 0.0;
}

double doubly_integrated_direct_kernel(const FrequencyPair& freqs, double omega, double t) {
    const double a = freqs.fast;
    const double b = freqs.slow;
    const double ra = 0.5 * (ramp_cos_integral(omega - a, t) + ramp_cos_integral(omega + a, t));
    const double rb = 0.5 * (ramp_cos_integral(omega - b, t) + ramp_cos_integral(omega + b, t));
    return (b * ra + a * rb) / (a + b);
}

QuadratureResult decoherence_factor_omega_analytic(const ModelParams& params, Channel channel, double t,
                                                   const QuadratureSpec& spec, PrefactorRule rule) {
    if (!(t >= 0.0)) throw std::invalid_argument("decoherence factor: t must be non-negative");
    if (t == 0.0) return {0.0, 0.0, 0};
    const NoiseKernel kernel(params, rule);
    const auto freqs = derive_frequencies(params);
    const double m = params.m;
    const auto integrand = [&](double omega) {
        return kernel.interior_weight(omega) * time_integrated_kernel(freqs, m, channel, omega, t);
    };
    const double breaks[] = {freqs.slow, freqs.fast};
    return integrate_generic(integrand, 0.0, params.Lambda, frequency_spec(spec, params.Lambda, t), breaks);
}

QuadratureResult integrated_direct_factor_omega_analytic(const ModelParams& params, double t,
                                                         const QuadratureSpec& spec, PrefactorRule rule) {
    if (!(t >= 0.0)) throw std::invalid_argument("decoherence exponent: t must be non-negative");
    if (t == 0.0) return {0.0, 0.0, 0};
    const NoiseKernel kernel(params, rule);
    const auto freqs = derive_frequencies(params);
    const auto integrand = [&](double omega) {
        return kernel.interior_weight(omega) * doubly_integrated_direct_kernel(freqs, omega, t);
    };
    const double breaks[] = {freqs.slow, freqs.fast};
    return integrate_generic(integrand, 0.0, params.Lambda, frequency_spec(spec, params.Lambda, t), breaks);
}

double assemble_exponent(const ChannelIntegrals& integrals, double dx, double dy) {
    return (dx * dx + dy * dy) * integrals.direct;
}

namespace {

void check_grid(std::span<const double> t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
    if (t_grid.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
    if (t_grid.size() < 2) return;
    const double h = t_grid[1] - t_grid[0];
    if (!(h > 0.0)) throw std::invalid_argument("time grid must be increasing");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (std::abs((t_grid[i] - t_grid[i - 1]) - h) > 1e-9 * std::max(1.0, t_grid.back())) {
            throw std::invalid_argument("time grid must be uniform");
        }
    }
}

template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                failures[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
}

[[noreturn]] void rethrow_at(const QuadratureError& e, double t) {
    throw QuadratureError("at t=" + std::to_string(t) + ": " + e.what(), e.best());
}

KernelTable table_for(const ModelParams& params, double t_max, const SeriesOptions& options) {
    TableOptions table_options;
    table_options.max_step = options.table_max_step;
    table_options.workers = options.workers;
    table_options.rule = options.rule;
    return build_kernel_table(params, t_max, options.table_tol, table_options);
}

}  // namespace

DecoherenceSeries cumulative_exponent(const ModelParams& params, std::span<const double> t_grid,
                                      const SeriesOptions& options) {
    params.validate();
    options.quadrature.validate();
    check_grid(t_grid);

    DecoherenceSeries series;
    const std::size_t n = t_grid.size();
    series.t.assign(t_grid.begin(), t_grid.end());
    for (auto* v : {&series.D1, &series.D2, &series.Danom1, &series.Danom2, &series.D_total, &series.rho_ratio}) {
        v->assign(n, 0.0);
    }
    const auto freqs = derive_frequencies(params);
    const std::span<const Channel> channels =
        options.all_factors ? std::span<const Channel>(all_channels) : std::span<const Channel>(all_channels).first(1);

    if (options.strategy == Strategy::omega_analytic) {
        parallel_for(n, options.workers, [&](std::size_t i) {
            const double t = t_grid[i];
            try {
                for (Channel c : channels) {
                    series.factor(c)[i] =
                        decoherence_factor_omega_analytic(params, c, t, options.quadrature, options.rule).value;
                }
                ChannelIntegrals integrals;
                integrals.direct =
                    integrated_direct_factor_omega_analytic(params, t, options.quadrature, options.rule).value;
                series.D_total[i] = assemble_exponent(integrals, params.dx, params.dy);
            } catch (const QuadratureError& e) {
                rethrow_at(e, t);
            }
        });
    } else {
        const KernelTable table = table_for(params, t_grid.back(), options);
        // Products at the table nodes, shared by every output time.
        std::vector<std::vector<double>> products(channels.size(), std::vector<double>(table.size()));
        for (std::size_t i = 0; i < table.size(); ++i) {
            const auto k = eval_kernels(freqs, params.m, table.tau(i));
            for (std::size_t c = 0; c < channels.size(); ++c) {
                products[c][i] = table.nu[i] * k[channels[c]];
            }
        }
        parallel_for(n, options.workers, [&](std::size_t i) {
            const double t = t_grid[i];
            for (std::size_t c = 0; c < channels.size(); ++c) {
                series.factor(channels[c])[i] = grid_prefix_integral(products[c], table.step, t);
            }
            ChannelIntegrals integrals;
            integrals.direct = integrated_direct_factor_tau_grid(table, freqs, t);
            series.D_total[i] = assemble_exponent(integrals, params.dx, params.dy);
        });
    }
    for (std::size_t i = 0; i < n; ++i) series.rho_ratio[i] = std::exp(-series.D_total[i]);
    return series;
}

DecoherenceSeries rho_ratio_series(const ModelParams& params, CouplingMode mode, std::span<const double> t_grid,
                                   const SeriesOptions& options) {
    return cumulative_exponent(with_mode(params, mode), t_grid, options);
}

double exponent_at(const ModelParams& params, double t, const SeriesOptions& options) {
    params.validate();
    ChannelIntegrals integrals;
    if (options.strategy == Strategy::omega_analytic) {
        try {
            integrals.direct = integrated_direct_factor_omega_analytic(params, t, options.quadrature, options.rule).value;
        } catch (const QuadratureError& e) {
            rethrow_at(e, t);
        }
    } else {
        const KernelTable table = table_for(params, t, options);
        integrals.direct = integrated_direct_factor_tau_grid(table, derive_frequencies(params), t);
    }
    return assemble_exponent(integrals, params.dx, params.dy);
}

std::vector<double> trapezoid_exponent(const DecoherenceSeries& series, double dx, double dy) {
    std::vector<double> out(series.size(), 0.0);
    const double weight = dx * dx + dy * dy;
    double acc = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        acc += 0.5 * (series.t[i] - series.t[i - 1]) * (series.D1[i] + series.D1[i - 1]);
        out[i] = weight * acc;
    }
    return out;
}

}  // namespace magdeco
