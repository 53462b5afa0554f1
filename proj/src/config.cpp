#include "magdeco/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace magdeco {

std::string_view to_string(RunStrategy s) {
    switch (s) {
        case RunStrategy::omega_analytic: return "omega_analytic";
        case RunStrategy::tau_grid: return "tau_grid";
        case RunStrategy::both: return "both";
    }
    return "?";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::string_view to_string(PrefactorRule r) { return r == PrefactorRule::generalized ? "generalized" : "literal"; }

const std::vector<std::string>& param_keys() {
    static const std::vector<std::string> keys = {"m", "omega0", "omega_c", "gamma", "Lambda", "Omega", "m_b",
                                                  "m_r", "K", "d", "g", "dx", "dy"};
    return keys;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k = param_keys();
        for (const char* extra : {"mode", "prefactor", "t_max", "t_points", "rel_tol", "abs_floor", "max_panels",
                                  "nu_tol", "strategy", "output", "format"}) {
            k.emplace_back(extra);
        }
        return k;
    }();
    return keys;
}

double& param_field(ModelParams& p, std::string_view key) {
    if (key == "m") return p.m;
    if (key == "omega0") return p.omega0;
    if (key == "omega_c") return p.omega_c;
    if (key == "gamma") return p.gamma;
    if (key == "Lambda") return p.Lambda;
    if (key == "Omega") return p.Omega;
    if (key == "m_b") return p.m_b;
    if (key == "m_r") return p.m_r;
    if (key == "K") return p.K;
    if (key == "d") return p.d;
    if (key == "g") return p.g;
    if (key == "dx") return p.dx;
    if (key == "dy") return p.dy;
    throw ConfigError(std::string(key), "'" + std::string(key) + "' is not a numeric model parameter");
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool known_key(std::string_view key) {
    const auto& keys = config_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::pair<std::string, std::string> split_assignment(std::string_view line, const std::string& where) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        const std::string token(trim(line.substr(0, line.find_first_of(" \t"))));
        throw ConfigError(token, where + ": expected 'key = value', got '" + std::string(trim(line)) + "'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("", where + ": missing key before '='");
    if (!known_key(key)) throw ConfigError(key, where + ": unknown key '" + key + "'");
    if (value.empty() && key != "output") throw ConfigError(key, where + ": empty value for '" + key + "'");
    return {std::move(key), std::move(value)};
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ConfigError(key, "invalid number for '" + key + "': '" + text + "'");
    }
    return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
    unsigned long long v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(key, "invalid integer for '" + key + "': '" + text + "'");
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ConfigEntries parse_entries(std::string_view text, std::string_view source) {
    ConfigEntries entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        const std::string where = std::string(source) + ":" + std::to_string(line_no);
        auto [key, value] = split_assignment(line, where);
        if (entries.contains(key)) throw ConfigError(key, where + ": duplicate key '" + key + "'");
        entries.emplace(std::move(key), std::move(value));
    }
    return entries;
}

void apply_override(ConfigEntries& entries, std::string_view assignment) {
    auto [key, value] = split_assignment(assignment, "--set");
    entries[key] = value;
}

ScenarioConfig resolve_config(const ConfigEntries& entries) {
    ScenarioConfig cfg;
    auto find = [&](const std::string& key) -> const std::string* {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    if (const auto* v = find("mode"); v && *v != "custom") {
        cfg.mode = parse_coupling_mode(*v);
        if (!cfg.mode) {
            throw ConfigError("mode", "invalid value for 'mode': '" + *v + "' (position, momentum, both or custom)");
        }
    }

    for (const auto& key : param_keys()) {
        double& field = param_field(cfg.params, key);
        const auto* v = find(key);
        const bool preset_field = cfg.mode && (key == "d" || key == "g" || key == "K");
        if (preset_field) {
            const auto preset = coupling_preset(*cfg.mode);
            const double fixed = key == "d" ? preset.d : key == "g" ? preset.g : preset.K;
            if (v && to_double(key, *v) != fixed) {
                throw ConfigError(key, "'" + key + "' = " + *v + " conflicts with mode '" +
                                           std::string(to_string(*cfg.mode)) + "' (expects " +
                                           format_number(fixed) + "); use mode = custom");
            }
            field = fixed;
            continue;
        }
        if (!v) throw ConfigError(key, "missing required key '" + key + "'");
        field = to_double(key, *v);
    }
    try {
        cfg.params.validate();
    } catch (const ModelError& e) {
        const std::string what = e.what();
        throw ConfigError(what.substr(0, what.find(' ')), std::string("invalid parameters: ") + what);
    }

    if (const auto* v = find("prefactor")) {
        if (*v == "generalized") {
            cfg.prefactor = PrefactorRule::generalized;
        } else if (*v == "literal") {
            cfg.prefactor = PrefactorRule::literal;
            if (cfg.params.d != 1.0 || cfg.params.g != 1.0) {
                throw ConfigError("prefactor", "prefactor = literal requires d = g = 1");
            }
        } else {
            throw ConfigError("prefactor", "invalid value for 'prefactor': '" + *v + "' (generalized or literal)");
        }
    }
    if (const auto* v = find("t_max")) {
        cfg.t_max = to_double("t_max", *v);
        if (!(cfg.t_max > 0.0)) throw ConfigError("t_max", "t_max must be positive");
    }
    if (const auto* v = find("t_points")) {
        cfg.t_points = to_count("t_points", *v);
        if (cfg.t_points < 2) throw ConfigError("t_points", "t_points must be at least 2");
    }
    if (const auto* v = find("rel_tol")) cfg.quadrature.rel_tol = to_double("rel_tol", *v);
    if (const auto* v = find("abs_floor")) cfg.quadrature.abs_floor = to_double("abs_floor", *v);
    if (const auto* v = find("max_panels")) cfg.quadrature.max_panels = to_count("max_panels", *v);
    try {
        cfg.quadrature.validate();
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        std::string key = "rel_tol";
        if (what.find("abs_floor") != std::string::npos) key = "abs_floor";
        if (what.find("max_panels") != std::string::npos) key = "max_panels";
        throw ConfigError(key, what);
    }
    if (const auto* v = find("nu_tol")) {
        cfg.nu_tol = to_double("nu_tol", *v);
        if (!(cfg.nu_tol > 0.0 && cfg.nu_tol <= 1e-2)) throw ConfigError("nu_tol", "nu_tol must lie in (0, 1e-2]");
    }
    if (const auto* v = find("strategy")) {
        if (*v == "omega_analytic") {
            cfg.strategy = RunStrategy::omega_analytic;
        } else if (*v == "tau_grid") {
            cfg.strategy = RunStrategy::tau_grid;
        } else if (*v == "both") {
            cfg.strategy = RunStrategy::both;
        } else {
            throw ConfigError("strategy",
                              "invalid value for 'strategy': '" + *v + "' (omega_analytic, tau_grid or both)");
        }
    }
    if (const auto* v = find("output")) cfg.output = *v;
    if (const auto* v = find("format")) {
        if (*v == "csv") {
            cfg.format = OutputFormat::csv;
        } else if (*v == "json") {
            cfg.format = OutputFormat::json;
        } else {
            throw ConfigError("format", "invalid value for 'format': '" + *v + "' (csv or json)");
        }
    }
    return cfg;
}

ScenarioConfig parse_config(std::string_view text, std::string_view source) {
    return resolve_config(parse_entries(text, source));
}

ConfigEntries read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_entries(buf.str(), path);
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    ModelParams p = cfg.params;
    for (const auto& key : param_keys()) out << key << " = " << format_number(param_field(p, key)) << '\n';
    out << "mode = " << (cfg.mode ? to_string(*cfg.mode) : std::string_view("custom")) << '\n';
    out << "prefactor = " << to_string(cfg.prefactor) << '\n';
    out << "t_max = " << format_number(cfg.t_max) << '\n';
    out << "t_points = " << cfg.t_points << '\n';
    out << "rel_tol = " << format_number(cfg.quadrature.rel_tol) << '\n';
    out << "abs_floor = " << format_number(cfg.quadrature.abs_floor) << '\n';
    out << "max_panels = " << cfg.quadrature.max_panels << '\n';
    out << "nu_tol = " << format_number(cfg.nu_tol) << '\n';
    out << "strategy = " << to_string(cfg.strategy) << '\n';
    if (!cfg.output.empty()) out << "output = " << cfg.output << '\n';
    out << "format = " << to_string(cfg.format) << '\n';
    return out.str();
}

}  // namespace magdeco
