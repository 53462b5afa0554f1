// config.hpp: flat key = value scenario files.
//
// Grammar, one entry per line:
//   line    := blank | comment | entry
//   comment := '#' anything
//   entry   := key '=' value [ '#' anything ]
// Keys and values are trimmed. Keys may appear once. Numbers use the C
// locale (std::from_chars), integers must be plain decimal.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "magdeco/bath.hpp"
#include "magdeco/model.hpp"
#include "magdeco/quadrature.hpp"

namespace magdeco {

/// Invalid configuration. `key()` names the offending key, or is empty for
/// errors not tied to one (unreadable file).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class RunStrategy { omega_analytic, tau_grid, both };
enum class OutputFormat { csv, json };

std::string_view to_string(RunStrategy s);
std::string_view to_string(OutputFormat f);
std::string_view to_string(PrefactorRule r);

struct ScenarioConfig {
    ModelParams params;
    std::optional<CouplingMode> mode;   // nullopt: d, g, K given explicitly
    PrefactorRule prefactor{PrefactorRule::generalized};
    double t_max{10.0};
    std::size_t t_points{1001};
    QuadratureSpec quadrature{};
    double nu_tol{1e-10};
    RunStrategy strategy{RunStrategy::omega_analytic};
    std::string output;                 // empty: standard output
    OutputFormat format{OutputFormat::csv};

    bool operator==(const ScenarioConfig&) const = default;
};

/// Raw string entries keyed by name.
using ConfigEntries = std::map<std::string, std::string>;

/// Every key the parser accepts, in canonical output order.
const std::vector<std::string>& config_keys();

/// Splits text into entries. Rejects malformed lines, unknown keys and
/// duplicates. `source` prefixes line-numbered messages.
ConfigEntries parse_entries(std::string_view text, std::string_view source = "config");

/// Applies one `key=value` override, replacing any existing entry.
void apply_override(ConfigEntries& entries, std::string_view assignment);

/// Typed, validated configuration from entries.
ScenarioConfig resolve_config(const ConfigEntries& entries);

ScenarioConfig parse_config(std::string_view text, std::string_view source = "config");
ConfigEntries read_config_file(const std::string& path);

/// Canonical text form. parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Names of the numeric ModelParams fields, as used in config files.
const std::vector<std::string>& param_keys();

/// Reference to a numeric parameter by config key. Throws ConfigError for
/// anything else.
double& param_field(ModelParams& params, std::string_view key);

}  // namespace magdeco
