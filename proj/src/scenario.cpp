#include "magdeco/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace magdeco {

SeriesOptions series_options(const ScenarioConfig& config, Strategy strategy, unsigned workers) {
    SeriesOptions o;
    o.strategy = strategy;
    o.quadrature = config.quadrature;
    o.table_tol = config.nu_tol;
    o.rule = config.prefactor;
    o.workers = workers;
    return o;
}

std::vector<double> output_grid(const ScenarioConfig& config) { return uniform_grid(config.t_max, config.t_points); }

RunResult run_scenario(const ScenarioConfig& config, unsigned workers) {
    const auto grid = output_grid(config);
    RunResult r;
    const Strategy first = config.strategy == RunStrategy::tau_grid ? Strategy::tau_grid : Strategy::omega_analytic;
    r.primary = cumulative_exponent(config.params, grid, series_options(config, first, workers));
    if (config.strategy == RunStrategy::both) {
        r.tau_grid = cumulative_exponent(config.params, grid, series_options(config, Strategy::tau_grid, workers));
    }
    return r;
}

SweepResult run_sweep(const ScenarioConfig& config, const std::string& param, std::span<const double> values,
                      unsigned workers) {
    std::vector<ModelParams> points;
    for (double v : values) {
        ModelParams p = config.params;
        if (config.mode && (param == "d" || param == "g" || param == "K")) {
            throw ConfigError(param, "cannot sweep '" + param + "' with a coupling preset; use mode = custom");
        }
        param_field(p, param) = v;
        try {
            p.validate();
        } catch (const ModelError& e) {
            throw ConfigError(param, "sweep value " + format_number(v) + " is invalid: " + e.what());
        }
        points.push_back(p);
    }

    SweepResult r;
    r.param = param;
    r.values.assign(values.begin(), values.end());
    r.D_total.assign(points.size(), 0.0);
    const bool both = config.strategy == RunStrategy::both;
    if (both) r.tau_grid.emplace(points.size(), 0.0);
    const Strategy first = config.strategy == RunStrategy::tau_grid ? Strategy::tau_grid : Strategy::omega_analytic;

    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(points.size(), 1))));
    std::vector<std::exception_ptr> failures(n_workers);
    auto work = [&](unsigned w) {
        try {
            for (std::size_t i = w; i < points.size(); i += n_workers) {
                r.D_total[i] = exponent_at(points[i], config.t_max, series_options(config, first, 1));
                if (both) {
                    (*r.tau_grid)[i] =
                        exponent_at(points[i], config.t_max, series_options(config, Strategy::tau_grid, 1));
                }
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    if (n_workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    // Report the failure of the earliest worker, so the message is stable.
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    return r;
}

ModeComparison compare_modes(const ScenarioConfig& config, unsigned workers) {
    const auto grid = output_grid(config);
    const Strategy s = config.strategy == RunStrategy::tau_grid ? Strategy::tau_grid : Strategy::omega_analytic;
    SeriesOptions opts = series_options(config, s, workers);
    opts.all_factors = false;
    ModeComparison out;
    out.t = grid;
    for (std::size_t k = 0; k < ModeComparison::modes.size(); ++k) {
        const auto series = rho_ratio_series(config.params, ModeComparison::modes[k], grid, opts);
        out.rho_ratio[k] = series.rho_ratio;
        out.D_total[k] = series.D_total;
    }
    return out;
}

double strategy_reldiff(double x, double y) {
    if (!(std::abs(x) > 1e-8)) return 0.0;
    return std::abs(x - y) / std::abs(x);
}

namespace {

struct Table {
    std::vector<std::string> names;
    std::vector<const std::vector<double>*> columns;

    void add(std::string name, const std::vector<double>& col) {
        names.push_back(std::move(name));
        columns.push_back(&col);
    }
};

// Header without the output destination, so the same scenario written to
// different files gives identical bytes.
ScenarioConfig header_config(const ScenarioConfig& config) {
    ScenarioConfig c = config;
    c.output.clear();
    c.format = OutputFormat::csv;
    return c;
}

std::string render(const ScenarioConfig& config, const Table& table, OutputFormat format, std::string_view kind) {
    const ScenarioConfig hc = header_config(config);
    const std::size_t rows = table.columns.empty() ? 0 : table.columns.front()->size();
    if (format == OutputFormat::csv) {
        std::ostringstream out;
        out << "# magdeco " << kind << '\n';
        std::istringstream lines(serialize_config(hc));
        for (std::string line; std::getline(lines, line);) {
            if (line.rfind("format", 0) == 0) continue;
            out << "# " << line << '\n';
        }
        for (std::size_t c = 0; c < table.names.size(); ++c) out << (c ? "," : "") << table.names[c];
        out << '\n';
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t c = 0; c < table.columns.size(); ++c) {
                out << (c ? "," : "") << format_number((*table.columns[c])[i]);
            }
            out << '\n';
        }
        return out.str();
    }
    nlohmann::ordered_json doc;
    doc["kind"] = kind;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [key, value] : parse_entries(serialize_config(hc))) {
        if (key != "format") cfg[key] = value;
    }
    doc["config"] = cfg;
    doc["columns"] = table.names;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) data[table.names[c]] = *table.columns[c];
    doc["data"] = data;
    return doc.dump(2) + "\n";
}

}  // namespace

std::string format_run(const ScenarioConfig& config, const RunResult& result, OutputFormat format) {
    const auto& s = result.primary;
    Table table;
    table.add("t", s.t);
    table.add("D1", s.D1);
    table.add("D2", s.D2);
    table.add("Danom1", s.Danom1);
    table.add("Danom2", s.Danom2);
    table.add("D_total", s.D_total);
    table.add("rho_ratio", s.rho_ratio);

    std::vector<std::vector<double>> extra;
    if (result.tau_grid) {
        const auto& g = *result.tau_grid;
        const std::vector<std::pair<std::string, std::pair<const std::vector<double>*, const std::vector<double>*>>>
            pairs = {{"D1", {&s.D1, &g.D1}},
                     {"D2", {&s.D2, &g.D2}},
                     {"Danom1", {&s.Danom1, &g.Danom1}},
                     {"Danom2", {&s.Danom2, &g.Danom2}},
                     {"D_total", {&s.D_total, &g.D_total}}};
        extra.reserve(pairs.size());
        for (const auto& [name, cols] : pairs) table.add(name + "_tau_grid", *cols.second);
        for (const auto& [name, cols] : pairs) {
            std::vector<double> diff(cols.first->size());
            for (std::size_t i = 0; i < diff.size(); ++i) {
                diff[i] = strategy_reldiff((*cols.first)[i], (*cols.second)[i]);
            }
            extra.push_back(std::move(diff));
            table.add(name + "_reldiff", extra.back());
        }
    }
    return render(config, table, format, "run");
}

std::string format_sweep(const ScenarioConfig& config, const SweepResult& result, OutputFormat format) {
    Table table;
    table.add(result.param, result.values);
    table.add("D_total_at_tmax", result.D_total);
    std::vector<double> diff;
    if (result.tau_grid) {
        table.add("D_total_at_tmax_tau_grid", *result.tau_grid);
        diff.resize(result.D_total.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = strategy_reldiff(result.D_total[i], (*result.tau_grid)[i]);
        table.add("D_total_at_tmax_reldiff", diff);
    }
    return render(config, table, format, "sweep");
}

std::string format_comparison(const ScenarioConfig& config, const ModeComparison& result, OutputFormat format) {
    Table table;
    table.add("t", result.t);
    for (std::size_t k = 0; k < ModeComparison::modes.size(); ++k) {
        table.add("rho_ratio_" + std::string(to_string(ModeComparison::modes[k])), result.rho_ratio[k]);
    }
    for (std::size_t k = 0; k < ModeComparison::modes.size(); ++k) {
        table.add("D_total_" + std::string(to_string(ModeComparison::modes[k])), result.D_total[k]);
    }
    return render(config, table, format, "compare-modes");
}

}  // namespace magdeco
