// quadrature.hpp: oscillation-aware integration: composite Filon cosine rule
// over a smooth weight, adaptive Gauss-Kronrod for generic integrands, and a
// dense midpoint reference.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace magdeco {

struct QuadratureSpec {
    double rel_tol{1e-9};
    double abs_floor{1e-12};
    std::size_t max_panels{1u << 17};
    // Largest panel allowed before any oscillation cap; 0 selects length/32.
    double max_panel_width{0.0};
    // integrate_generic also stops once the error is below l1_rel * int |f|,
    // which bounds the cost of integrals that cancel to near zero. 0 disables.
    double l1_rel{0.0};

    /// rel_tol in (0, 1e-2], abs_floor >= 0, max_panels >= 64, l1_rel >= 0.
    void validate() const;

    bool operator==(const QuadratureSpec&) const = default;
};

struct QuadratureResult {
    double value{0.0};
    double error{0.0};        // estimated absolute error
    std::size_t panels{0};
};

/// Budget exhausted before the error target was met. Carries the best
/// estimate and its error bound.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult best)
        : std::runtime_error(what), best_(best) {}
    const QuadratureResult& best() const noexcept { return best_; }

private:
    QuadratureResult best_;
};

/// Panel width used by the Filon rule: min(default_width, pi/(4 tau)),
/// so no panel spans more than an eighth of an oscillation period.
double cosine_panel_cap(double tau, double default_width);

/// Read-only view of uniformly spaced samples, element i at data[i * stride].
struct SampleView {
    const double* data{nullptr};
    std::size_t stride{1};
};

/// Supplies weight samples on [0, length] at `intervals` + 1 uniform nodes
/// x_i = length * (i / intervals). May fill `scratch` and point into it.
using SampleSource = std::function<SampleView(std::size_t intervals, std::vector<double>& scratch)>;

/// Integral over [0, length] of w(x) cos(tau x) from samples, with w
/// interpolated by a quadratic on each panel and the cosine moments taken
/// exactly. `panels` panels use 2*panels + 1 samples.
double filon_cosine_composite(SampleView samples, std::size_t panels, double length, double tau);

/// Composite Filon rule with dyadic panel refinement; error is the gap to the
/// next coarser level.
QuadratureResult integrate_cosine_sampled(const SampleSource& source, double length, double tau,
                                          const QuadratureSpec& spec);

/// Convenience form over a callable weight on [0, length].
QuadratureResult integrate_cosine_weighted(const std::function<double(double)>& weight, double length,
                                           double tau, const QuadratureSpec& spec);

/// Globally adaptive 7/15-point Gauss-Kronrod on [lo, hi]. The interval is
/// pre-split at `breakpoints` and into panels no wider than
/// spec.max_panel_width.
QuadratureResult integrate_generic(const std::function<double(double)>& f, double lo, double hi,
                                   const QuadratureSpec& spec, std::span<const double> breakpoints = {});

/// Composite midpoint sum with compensated accumulation. Test oracle.
double riemann_reference(const std::function<double(double)>& f, double lo, double hi, std::size_t n);

}  // namespace magdeco
