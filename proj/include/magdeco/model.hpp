// model.hpp: physical parameters of a charged oscillator in a magnetic field
// coupled to an Ohmic bath, coupling presets and derived scalars.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace magdeco {

struct DiscreteBath;

/// Raised for parameter sets that violate a model invariant.
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// All quantities dimensionless with hbar = 1.
struct ModelParams {
    double m{1.0};          // particle mass
    double omega0{10.0};    // trap frequency
    double omega_c{1.0};    // cyclotron frequency qB/m
    double gamma{1.0};      // Ohmic damping coefficient
    double Lambda{1e3};     // abrupt bath cutoff
    double Omega{1e3};      // thermal frequency 2 k_B T / hbar
    double m_b{1e-2};       // common bath-oscillator mass
    double m_r{1e-3};       // renormalized particle mass
    double K{1e2};          // weighted spring-constant sum
    double d{1.0};          // position-coupling strength
    double g{1.0};          // momentum-coupling strength
    double dx{1.0};         // density-matrix separation x - x'
    double dy{1.0};         // density-matrix separation y - y'

    /// Throws ModelError naming the first violated invariant.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

enum class CouplingMode { PositionOnly, MomentumOnly, Both };

struct CouplingPreset {
    double d;
    double g;
    double K;
};

CouplingPreset coupling_preset(CouplingMode mode);
ModelParams with_mode(ModelParams params, CouplingMode mode);

std::string_view to_string(CouplingMode mode);
std::optional<CouplingMode> parse_coupling_mode(std::string_view text);

/// Real oscillation frequencies of the two normal modes. The complex roots of
/// the characteristic equation are purely imaginary, +-i*fast and +-i*slow.
struct FrequencyPair {
    double fast;   // a
    double slow;   // b
};

/// fast - slow = omega_c, fast * slow = omega0^2, fast + slow = sqrt(4 omega0^2 + omega_c^2).
FrequencyPair derive_frequencies(double omega0, double omega_c);
FrequencyPair derive_frequencies(const ModelParams& params);

/// m / (1 + N g^2 m / m_b).
double renormalized_mass(double m, double g, int n_oscillators, double m_b);

/// Effective mass multiplying omega0^2 in the Langevin equation, summed over
/// an explicit bath. K_j is the bath's own spring-constant sum unless given.
double effective_mass_m1(const ModelParams& params, const DiscreteBath& bath,
                         std::optional<double> spring_constant = std::nullopt);

}  // namespace magdeco
