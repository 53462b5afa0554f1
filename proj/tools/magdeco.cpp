// magdeco: command-line front end.
//
//   magdeco run            --config FILE [--set k=v]... [--out PATH] [--format csv|json]
//   magdeco sweep          --config FILE --param NAME --values v1,v2,...
//   magdeco compare-modes  --config FILE
//   magdeco validate       --config FILE
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure, 1 other.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "magdeco/config.hpp"
#include "magdeco/scenario.hpp"

using namespace magdeco;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out;
    std::string format;
    std::string strategy;
    std::string tol;
    unsigned workers{0};
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "scenario file (key = value lines)");
    cmd->add_option("--set", c.overrides, "override one entry, key=value; repeatable")->take_all();
    cmd->add_option("--out", c.out, "output path; standard output when omitted");
    cmd->add_option("--format", c.format, "csv or json");
    cmd->add_option("--strategy", c.strategy, "omega_analytic, tau_grid or both");
    cmd->add_option("--tol", c.tol, "relative tolerance of the frequency quadrature");
    cmd->add_option("--workers", c.workers, "worker threads; 0 uses the hardware concurrency");
}

ScenarioConfig load(const Common& c) {
    ConfigEntries entries;
    if (!c.config_path.empty()) entries = read_config_file(c.config_path);
    for (const auto& o : c.overrides) apply_override(entries, o);
    if (!c.out.empty()) entries["output"] = c.out;
    if (!c.format.empty()) entries["format"] = c.format;
    if (!c.strategy.empty()) entries["strategy"] = c.strategy;
    if (!c.tol.empty()) entries["rel_tol"] = c.tol;
    return resolve_config(entries);
}

unsigned worker_count(const Common& c) {
    if (c.workers > 0) return c.workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        pos = comma + 1;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size()) throw ConfigError("values", "invalid sweep value '" + item + "'");
        out.push_back(v);
    }
    return out;
}

void emit(const ScenarioConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.output, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + cfg.output + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + cfg.output + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decoherence of a charged oscillator in a magnetic field coupled to an Ohmic bath"};
    app.require_subcommand(1);

    Common run_opts, sweep_opts, cmp_opts, val_opts;
    auto* run = app.add_subcommand("run", "factors and exponent on the output time grid");
    add_common(run, run_opts);
    auto* sweep = app.add_subcommand("sweep", "D_total at t_max for a list of parameter values");
    add_common(sweep, sweep_opts);
    std::string param, values;
    sweep->add_option("--param", param, "numeric model parameter, e.g. omega_c")->required();
    sweep->add_option("--values", values, "comma-separated values")->required();
    auto* cmp = app.add_subcommand("compare-modes", "density ratio under the position, both and momentum presets");
    add_common(cmp, cmp_opts);
    auto* val = app.add_subcommand("validate", "parse and print the resolved configuration");
    add_common(val, val_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (*run) {
            const auto cfg = load(run_opts);
            emit(cfg, format_run(cfg, run_scenario(cfg, worker_count(run_opts)), cfg.format));
        } else if (*sweep) {
            const auto cfg = load(sweep_opts);
            const auto vals = parse_values(values);
            emit(cfg, format_sweep(cfg, run_sweep(cfg, param, vals, worker_count(sweep_opts)), cfg.format));
        } else if (*cmp) {
            const auto cfg = load(cmp_opts);
            emit(cfg, format_comparison(cfg, compare_modes(cfg, worker_count(cmp_opts)), cfg.format));
        } else if (*val) {
            std::cout << serialize_config(load(val_opts));
        }
    } catch (const ConfigError& e) {
        std::cerr << "magdeco: config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ModelError& e) {
        std::cerr << "magdeco: config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const QuadratureError& e) {
        std::cerr << "magdeco: numerical failure: " << e.what() << " (best " << e.best().value << " +- "
                  << e.best().error << ")\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "magdeco: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
