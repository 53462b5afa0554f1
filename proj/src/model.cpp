#include "magdeco/model.hpp"

#include <cmath>

#include "magdeco/bath.hpp"

namespace magdeco {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ModelError(what);
}

}  // namespace

void ModelParams::validate() const {
    require(std::isfinite(m) && m > 0.0, "m must be positive");
    require(std::isfinite(omega0) && omega0 > 0.0, "omega0 must be positive");
    require(std::isfinite(omega_c) && omega_c >= 0.0, "omega_c must be non-negative");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be non-negative");
    require(std::isfinite(Lambda) && Lambda > 0.0, "Lambda must be positive");
    require(std::isfinite(Omega) && Omega > 0.0, "Omega must be positive");
    require(std::isfinite(m_b) && m_b > 0.0, "m_b must be positive");
    require(std::isfinite(m_r) && m_r > 0.0, "m_r must be positive");
    require(std::isfinite(K) && K >= 0.0, "K must be non-negative");
    require(std::isfinite(d) && d >= 0.0, "d must be non-negative");
    require(std::isfinite(g) && g >= 0.0, "g must be non-negative");
    require(d > 0.0 || g > 0.0, "d and g must not both be zero");
    require(std::isfinite(dx) && std::isfinite(dy), "dx and dy must be finite");
}

CouplingPreset coupling_preset(CouplingMode mode) {
    switch (mode) {
        case CouplingMode::PositionOnly: return {1.0, 0.0, 0.0};
        case CouplingMode::MomentumOnly: return {0.0, 1.0, 1e2};
        case CouplingMode::Both: return {1.0, 1.0, 1e2};
    }
    throw ModelError("unknown coupling mode");
}

ModelParams with_mode(ModelParams params, CouplingMode mode) {
    const auto preset = coupling_preset(mode);
    params.d = preset.d;
    params.g = preset.g;
    params.K = preset.K;
    return params;
}

std::string_view to_string(CouplingMode mode) {
    switch (mode) {
        case CouplingMode::PositionOnly: return "position";
        case CouplingMode::MomentumOnly: return "momentum";
        case CouplingMode::Both: return "both";
    }
    return "unknown";
}

std::optional<CouplingMode> parse_coupling_mode(std::string_view text) {
    if (text == "position") return CouplingMode::PositionOnly;
    if (text == "momentum") return CouplingMode::MomentumOnly;
    if (text == "both") return CouplingMode::Both;
    return std::nullopt;
}

FrequencyPair derive_frequencies(double omega0, double omega_c) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
        throw ModelError("derive_frequencies: omega0 must be positive");
    }
    if (!(omega_c >= 0.0) || !std::isfinite(omega_c)) {
        throw ModelError("derive_frequencies: omega_c must be non-negative");
    }
    // fast = (s + wc)/2 exactly; the slow root is formed from the product
    // identity to avoid cancellation in (s - wc)/2 when wc >> omega0.
    const double s = std::sqrt(4.0 * omega0 * omega0 + omega_c * omega_c);
    const double fast = 0.5 * (s + omega_c);
    const double slow = omega0 * omega0 / fast;
    return {fast, slow};
}

FrequencyPair derive_frequencies(const ModelParams& params) {
    return derive_frequencies(params.omega0, params.omega_c);
}

double renormalized_mass(double m, double g, int n_oscillators, double m_b) {
    if (!(m > 0.0) || !(g >= 0.0) || n_oscillators < 1 || !(m_b > 0.0)) {
        throw ModelError("renormalized_mass: requires m > 0, g >= 0, N >= 1, m_b > 0");
    }
    return m / (1.0 + static_cast<double>(n_oscillators) * g * g * m / m_b);
}

double effective_mass_m1(const ModelParams& params, const DiscreteBath& bath, std::optional<double> spring_constant) {
    bath.validate();
    const double spring = spring_constant ? *spring_constant : bath.spring_constant_sum();
    const double w02 = params.omega0 * params.omega0;
    const double prefactor = bath.g * params.m_r + bath.d * bath.m_b;
    double shift = 0.0;
    for (double wj : bath.omegas) {
        const double wj2 = wj * wj;
        const double ratio = (bath.g * params.m * w02 + bath.d * bath.m_b * wj2 + spring) / (bath.m_b * wj2);
        shift += (ratio + bath.d) * prefactor * wj2 / w02;
    }
    return params.m - shift;
}

}  // namespace magdeco
