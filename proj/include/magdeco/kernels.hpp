// kernels.hpp: interaction-picture coefficient functions of the position
// operators, evaluated in real trigonometric form.

#pragma once

#include <array>
#include <string_view>

#include "magdeco/model.hpp"

namespace magdeco {

/// Which commutator channel of the master equation a coefficient feeds.
///   direct            F1, multiplies [X,[X,rho]] and [Y,[Y,rho]]
///   cross             F2, multiplies [X,[Y,rho]]
///   anomalous_direct  f1, multiplies [X,[Px,rho]]
///   anomalous_cross   f2, multiplies [X,[Py,rho]]
enum class Channel { direct, cross, anomalous_direct, anomalous_cross };

inline constexpr std::array<Channel, 4> all_channels{
    Channel::direct, Channel::cross, Channel::anomalous_direct, Channel::anomalous_cross};

/// Column label used in outputs: D1, D2, Danom1, Danom2.
std::string_view factor_name(Channel channel);

struct KernelValues {
    double direct{0.0};            // F1, dimensionless
    double cross{0.0};             // F2, dimensionless
    double anomalous_direct{0.0};  // f1, 1/(m * frequency)
    double anomalous_cross{0.0};   // f2, 1/(m * frequency)

    double operator[](Channel channel) const;
};

/// F1 = (b cos(a t) + a cos(b t))/(a+b)      F2 = (b sin(a t) - a sin(b t))/(a+b)
/// f1 = (sin(a t) + sin(b t))/(m(a+b))       f2 = (cos(b t) - cos(a t))/(m(a+b))
KernelValues eval_kernels(const FrequencyPair& freqs, double m, double tau);

/// Single channel, same formulas as eval_kernels.
double eval_kernel(const FrequencyPair& freqs, double m, Channel channel, double tau);

struct ReferenceKernelValues {
    KernelValues values;      // real parts
    double imag_residue{0};   // largest |imaginary part| over the four outputs
};

/// Complex cosh/sinh form of the kernels with A, B the imaginary roots.
/// Test oracle only; throws ModelError for omega_c < 1e-8 where its forms
/// approach 0/0 structure.
ReferenceKernelValues eval_kernels_complex_reference(const ModelParams& params, double tau);

}  // namespace magdeco
