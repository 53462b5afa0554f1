#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <string>

#include "magdeco/config.hpp"

using namespace magdeco;

namespace {

const char* kMinimal = R"(# minimal custom scenario
m = 1
omega0 = 10
omega_c = 1
gamma = 1
Lambda = 1e3
Omega = 1e3
m_b = 1e-2
m_r = 1e-3
d = 1
g = 1
K = 100
dx = 1
dy = 1
)";

std::string preset(const std::string& name) { return std::string(MAGDECO_PRESET_DIR) + "/" + name + ".conf"; }

std::string error_key(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<none>";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("preset files parse") {
    for (const char* name : {"fig2a", "fig2b", "fig2c", "fig2d", "fig3"}) {
        CAPTURE(name);
        const auto cfg = resolve_config(read_config_file(preset(name)));
        CHECK(cfg.mode == CouplingMode::Both);
        CHECK(cfg.params.K == 100.0);
        CHECK(cfg.params.Lambda == 1e3);
        CHECK(cfg.params.m_b == 1e-2);
        CHECK(cfg.params.m_r == 1e-3);
        CHECK(cfg.t_points == 1001);
    }
    const auto b = resolve_config(read_config_file(preset("fig2b")));
    CHECK(b.params.Omega == 1e-2);
    const auto c = resolve_config(read_config_file(preset("fig2c")));
    CHECK((c.params.omega0 == 1 && c.params.gamma == 10));
    CHECK(resolve_config(read_config_file(preset("fig2a"))).params == ModelParams{});
}

TEST_CASE("comments, blanks and whitespace") {
    const auto entries = parse_entries("  \n# x = 1\n  omega0   =  7.5   # trailing\n\tgamma=2\n");
    CHECK(entries.size() == 2);
    CHECK(entries.at("omega0") == "7.5");
    CHECK(entries.at("gamma") == "2");
}

TEST_CASE("round trip") {
    auto base = parse_config(kMinimal);
    CHECK(parse_config(serialize_config(base)) == base);
    CHECK(serialize_config(parse_config(serialize_config(base))) == serialize_config(base));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 50.0);
    for (int i = 0; i < 200; ++i) {
        ScenarioConfig c = base;
        c.params.omega0 = u(rng);
        c.params.omega_c = u(rng);
        c.params.gamma = u(rng);
        c.params.Omega = u(rng) * 1e-3;
        c.t_max = u(rng);
        c.t_points = 2 + i;
        c.quadrature.rel_tol = 1e-9 * u(rng);
        c.nu_tol = 1e-12 * u(rng);
        c.strategy = RunStrategy(i % 3);
        c.format = OutputFormat(i % 2);
        c.output = i % 4 ? "" : "out_" + std::to_string(i) + ".csv";
        if (i % 5 == 0) c.mode = CouplingMode(i % 3);
        if (c.mode) {
            const auto p = coupling_preset(*c.mode);
            c.params.d = p.d;
            c.params.g = p.g;
            c.params.K = p.K;
        }
        CAPTURE(i);
        CHECK(parse_config(serialize_config(c)) == c);
    }
}

TEST_CASE("errors name the offending key") {
    CHECK(error_key("") == "m");
    CHECK(error_key("garbage line without equals") == "garbage");
    CHECK(error_key(std::string(kMinimal) + "colour = blue\n") == "colour");
    CHECK(error_key(std::string(kMinimal) + "gamma = 3\n") == "gamma");
    CHECK(error_key(std::string(kMinimal) + "t_points = 1.5\n") == "t_points");
    CHECK(error_key(std::string(kMinimal) + "t_max = -1\n") == "t_max");
    CHECK(error_key(std::string(kMinimal) + "strategy = fastest\n") == "strategy");
    CHECK(error_key(std::string(kMinimal) + "format = xml\n") == "format");
    CHECK(error_key(std::string(kMinimal) + "mode = sideways\n") == "mode");
    CHECK(error_key(std::string(kMinimal) + "rel_tol = 0\n") == "rel_tol");
    CHECK(error_key(std::string(kMinimal) + "nu_tol = 1\n") == "nu_tol");
    CHECK(error_key(std::string(kMinimal) + "max_panels = 3\n") == "max_panels");
    CHECK(error_key(std::string(kMinimal) + "prefactor = exact\n") == "prefactor");
    CHECK(error_key(std::string(kMinimal) + "mode = position\n") == "K");

    std::string bad_number = kMinimal;
    bad_number.replace(bad_number.find("omega0 = 10"), 11, "omega0 = 1O");
    CHECK(error_key(bad_number) == "omega0");
    std::string negative = kMinimal;
    negative.replace(negative.find("m_b = 1e-2"), 10, "m_b = -1");
    CHECK(error_key(negative) == "m_b");
    std::string nan = kMinimal;
    nan.replace(nan.find("gamma = 1"), 9, "gamma = nan");
    CHECK(error_key(nan) == "gamma");
    std::string empty = kMinimal;
    empty.replace(empty.find("dy = 1"), 6, "dy =");
    CHECK(error_key(empty) == "dy");

    try {
        parse_entries("omega0 = 1\nfoo\n", "scenario.conf");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("scenario.conf:2") != std::string::npos);
    }
    CHECK_THROWS_AS(read_config_file("/nonexistent/file.conf"), ConfigError);
}

TEST_CASE("preset mode fills the coupling constants") {
    std::string text = kMinimal;
    for (const char* key : {"d = 1\n", "g = 1\n", "K = 100\n"}) text.erase(text.find(key), std::strlen(key));
    const auto pos = parse_config(text + "mode = position\n");
    CHECK((pos.params.d == 1 && pos.params.g == 0 && pos.params.K == 0));
    CHECK(parse_config(text + "mode = both\nK = 100\n").params.K == 100);
    CHECK(error_key(text) == "K");
    CHECK(error_key(text + "mode = momentum\nprefactor = literal\n") == "prefactor");
    CHECK(parse_config(text + "mode = both\nprefactor = literal\n").prefactor == PrefactorRule::literal);
    CHECK(parse_config(text + "mode = custom\nd = 1\ng = 0\nK = 0\n").mode == std::nullopt);
}

TEST_CASE("overrides replace entries") {
    auto entries = parse_entries(kMinimal);
    apply_override(entries, "omega_c=4");
    apply_override(entries, " t_points = 11 ");
    const auto cfg = resolve_config(entries);
    CHECK(cfg.params.omega_c == 4.0);
    CHECK(cfg.t_points == 11);
    CHECK_THROWS_AS(apply_override(entries, "no_equals"), ConfigError);
    try {
        apply_override(entries, "bogus=1");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "bogus");
    }
}

TEST_CASE("number formatting round trips") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-300.0, 300.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::pow(10.0, u(rng) / 10.0) * (i % 2 ? -1 : 1);
        const auto s = format_number(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_number(10.0) == "10");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1e-3) == "0.001");
}

TEST_CASE("parameter lookup by key") {
    ModelParams p;
    for (const auto& key : param_keys()) CHECK_NOTHROW(param_field(p, key));
    param_field(p, "omega_c") = 7.0;
    CHECK(p.omega_c == 7.0);
    CHECK_THROWS_AS(param_field(p, "t_max"), ConfigError);
    CHECK(param_keys().size() == 13);
}

}  // TEST_SUITE
