#include "magdeco/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace magdeco {

std::string_view factor_name(Channel channel) {
    switch (channel) {
        case Channel::direct: return "D1";
        case Channel::cross: return "D2";
        case Channel::anomalous_direct: return "Danom1";
        case Channel::anomalous_cross: return "Danom2";
    }
    return "?";
}

double KernelValues::operator[](Channel channel) const {
    switch (channel) {
        case Channel::direct: return direct;
        case Channel::cross: return cross;
        case Channel::anomalous_direct: return anomalous_direct;
        case Channel::anomalous_cross: return anomalous_cross;
    }
    return 0.0;
}

KernelValues eval_kernels(const FrequencyPair& freqs, double m, double tau) {
    const double a = freqs.fast;
    const double b = freqs.slow;
    const double sum = a + b;
    const double ca = std::cos(a * tau), sa = std::sin(a * tau);
    const double cb = std::cos(b * tau), sb = std::sin(b * tau);
    KernelValues k;
    k.direct = (b * ca + a * cb) / sum;
    k.cross = (b * sa - a * sb) / sum;
    k.anomalous_direct = (sa + sb) / (m * sum);
    k.anomalous_cross = (cb - ca) / (m * sum);
    return k;
}

double eval_kernel(const FrequencyPair& freqs, double m, Channel channel, double tau) {
    const double a = freqs.fast;
    const double b = freqs.slow;
    const double sum = a + b;
    switch (channel) {
        case Channel::direct: return (b * std::cos(a * tau) + a * std::cos(b * tau)) / sum;
        case Channel::cross: return (b * std::sin(a * tau) - a * std::sin(b * tau)) / sum;
        case Channel::anomalous_direct: return (std::sin(a * tau) + std::sin(b * tau)) / (m * sum);
        case Channel::anomalous_cross: return (std::cos(b * tau) - std::cos(a * tau)) / (m * sum);
    }
    return 0.0;
}

ReferenceKernelValues eval_kernels_complex_reference(const ModelParams& params, double tau) {
    using cd = std::complex<double>;
    const double w0 = params.omega0;
    const double wc = params.omega_c;
    const double m = params.m;
    if (!(wc >= 1e-8)) {
        throw ModelError("complex reference kernels are degenerate for omega_c < 1e-8");
    }
    const double s = std::sqrt(4.0 * w0 * w0 + wc * wc);
    const cd A = std::sqrt(cd(-2.0 * w0 * w0 - wc * wc - wc * s, 0.0)) / std::sqrt(2.0);
    const cd B = std::sqrt(cd(-2.0 * w0 * w0 - wc * wc + wc * s, 0.0)) / std::sqrt(2.0);
    const cd chA = std::cosh(A * tau), chB = std::cosh(B * tau);
    const cd shA = std::sinh(A * tau), shB = std::sinh(B * tau);

    const cd F1 = ((-wc + s) * chA + (wc + s) * chB) / (2.0 * s);
    const cd F2 = w0 * w0 * (B * shA - A * shB) / (A * B * s);
    const cd f1 = ((wc + s) * B * shA + (-wc + s) * A * shB) / (2.0 * A * B * m * s);
    const cd f2 = (-chA + chB) / (m * s);

    ReferenceKernelValues out;
    out.values = {F1.real(), F2.real(), f1.real(), f2.real()};
    out.imag_residue = std::max({std::abs(F1.imag()), std::abs(F2.imag()),
                                 std::abs(f1.imag()), std::abs(f2.imag())});
    return out;
}

}  // namespace magdeco
