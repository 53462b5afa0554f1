// scenario.hpp: runs driven by a ScenarioConfig and their CSV / JSON output.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "magdeco/config.hpp"
#include "magdeco/decoherence.hpp"

namespace magdeco {

/// Series options for one strategy of `config`.
SeriesOptions series_options(const ScenarioConfig& config, Strategy strategy, unsigned workers);

std::vector<double> output_grid(const ScenarioConfig& config);

struct RunResult {
    DecoherenceSeries primary;                 // omega-analytic, or tau-grid when that is the only strategy
    std::optional<DecoherenceSeries> tau_grid; // second strategy when strategy = both
};

RunResult run_scenario(const ScenarioConfig& config, unsigned workers = 1);

struct SweepResult {
    std::string param;
    std::vector<double> values;
    std::vector<double> D_total;                 // at t_max
    std::optional<std::vector<double>> tau_grid; // strategy = both
};

/// D_total(t_max) for each value of one numeric parameter, in input order.
/// Points run concurrently on up to `workers` threads.
SweepResult run_sweep(const ScenarioConfig& config, const std::string& param, std::span<const double> values,
                      unsigned workers = 1);

struct ModeComparison {
    static constexpr std::array<CouplingMode, 3> modes = {CouplingMode::PositionOnly, CouplingMode::Both,
                                                          CouplingMode::MomentumOnly};
    std::vector<double> t;
    std::array<std::vector<double>, 3> rho_ratio;
    std::array<std::vector<double>, 3> D_total;
};

/// Exponent and density ratio under the three coupling presets. Factors
/// other than D1 are not computed.
ModeComparison compare_modes(const ScenarioConfig& config, unsigned workers = 1);

/// Relative difference used in the strategy = both columns: |x - y| / |x|
/// where |x| > 1e-8, else 0.
double strategy_reldiff(double x, double y);

std::string format_run(const ScenarioConfig& config, const RunResult& result, OutputFormat format);
std::string format_sweep(const ScenarioConfig& config, const SweepResult& result, OutputFormat format);
std::string format_comparison(const ScenarioConfig& config, const ModeComparison& result, OutputFormat format);

}  // namespace magdeco
