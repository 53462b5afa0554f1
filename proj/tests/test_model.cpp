#include <doctest.h>

#include <cmath>
#include <random>

#include "magdeco/bath.hpp"
#include "magdeco/model.hpp"
#include "oracles.hpp"

using namespace magdeco;

TEST_SUITE("model") {

TEST_CASE("zero field gives degenerate frequencies") {
    const auto f = derive_frequencies(10.0, 0.0);
    CHECK(f.fast == 10.0);
    CHECK(f.slow == 10.0);
}

TEST_CASE("frequencies at omega0 = 10, omega_c = 1") {
    const auto f = derive_frequencies(10.0, 1.0);
    const auto ref = oracle::complex_roots(10.0L, 1.0L);
    CHECK(oracle::rel(f.fast, ref.a) < 1e-12);
    CHECK(oracle::rel(f.slow, ref.b) < 1e-12);
    CHECK(f.fast == doctest::Approx(10.512492).epsilon(1e-7));
    CHECK(f.slow == doctest::Approx(9.512492).epsilon(1e-7));
}

TEST_CASE("frequency identities over random draws") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(0.1, 100.0);
    double worst_diff = 0, worst_sum = 0, worst_prod = 0, worst_complex = 0;
    for (int i = 0; i < 1000; ++i) {
        const double w0 = u(rng), wc = u(rng);
        const auto f = derive_frequencies(w0, wc);
        REQUIRE(f.fast >= f.slow);
        REQUIRE(f.slow > 0.0);
        worst_diff = std::max(worst_diff, std::abs((f.fast - f.slow) - wc) / wc);
        worst_sum = std::max(worst_sum, std::abs((f.fast + f.slow) - std::sqrt(4 * w0 * w0 + wc * wc)) /
                                            std::sqrt(4 * w0 * w0 + wc * wc));
        worst_prod = std::max(worst_prod, std::abs(f.fast * f.slow - w0 * w0) / (w0 * w0));
        const auto ref = oracle::complex_roots(w0, wc);
        worst_complex = std::max({worst_complex, double(oracle::rel(f.fast, ref.a)), double(oracle::rel(f.slow, ref.b))});
    }
    CHECK(worst_diff <= 1e-12);
    CHECK(worst_sum <= 1e-12);
    CHECK(worst_prod <= 1e-12);
    CHECK(worst_complex <= 1e-10);
}

TEST_CASE("degenerate trap is rejected") {
    CHECK_THROWS_AS(derive_frequencies(0.0, 1.0), ModelError);
    CHECK_THROWS_AS(derive_frequencies(-1.0, 1.0), ModelError);
    CHECK_THROWS_AS(derive_frequencies(1.0, -1.0), ModelError);
    CHECK_THROWS_AS(derive_frequencies(std::nan(""), 1.0), ModelError);
}

TEST_CASE("parameter validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    auto bad = [](auto mutate) {
        ModelParams q;
        mutate(q);
        return q;
    };
    CHECK_THROWS_AS(bad([](ModelParams& q) { q.m = 0; }).validate(), ModelError);
    CHECK_THROWS_AS(bad([](ModelParams& q) { q.omega0 = 0; }).validate(), ModelError);
    CHECK_THROWS_AS(bad([](ModelParams& q) { q.omega_c = -1; }).validate(), ModelError);
    CHECK_THROWS_AS(bad([](ModelParams& q) { q.gamma = -1; }).validate(), ModelError);
    CHECK_THROWS_AS(bad([](ModelParams& q) { q.Lambda = 0; }).validate(), ModelError);
    CHECK_THROWS_AS(bad([](ModelParams& q) { q.Omega = 0; }).validate(), ModelError);
    CHECK_THROWS_AS(bad([](ModelParams& q) { q.m_b = 0; }).validate(), ModelError);
    CHECK_THROWS_AS(bad([](ModelParams& q) { q.m_r = 0; }).validate(), ModelError);
    CHECK_THROWS_AS(bad([](ModelParams& q) { q.K = -1; }).validate(), ModelError);
    CHECK_THROWS_AS(bad([](ModelParams& q) { q.d = 0; q.g = 0; }).validate(), ModelError);
    CHECK_NOTHROW(bad([](ModelParams& q) { q.gamma = 0; q.omega_c = 0; q.K = 0; }).validate());
}

TEST_CASE("coupling presets") {
    const auto pos = coupling_preset(CouplingMode::PositionOnly);
    CHECK((pos.d == 1 && pos.g == 0 && pos.K == 0));
    const auto mom = coupling_preset(CouplingMode::MomentumOnly);
    CHECK((mom.d == 0 && mom.g == 1 && mom.K == 100));
    const auto both = coupling_preset(CouplingMode::Both);
    CHECK((both.d == 1 && both.g == 1 && both.K == 100));
    for (auto mode : {CouplingMode::PositionOnly, CouplingMode::MomentumOnly, CouplingMode::Both}) {
        CHECK(parse_coupling_mode(to_string(mode)) == mode);
    }
    CHECK_FALSE(parse_coupling_mode("sideways").has_value());
}

TEST_CASE("renormalized mass") {
    CHECK(renormalized_mass(1, 0, 10, 1e-2) == 1.0);
    CHECK(renormalized_mass(1, 1, 1, 1) == 0.5);
    const long double ref = 1.0L / (1.0L + 99.0L * 1.0L / 1e-2L);
    CHECK(oracle::rel(renormalized_mass(1, 1, 99, 1e-2), ref) < 1e-14);
    CHECK(renormalized_mass(1, 1, 99, 1e-2) == doctest::Approx(1.0101e-4).epsilon(1e-4));
    double prev = 2.0;
    for (double g = 0.0; g <= 2.0; g += 0.1) {
        const double v = renormalized_mass(1, g, 5, 1e-2);
        CHECK(v < prev);
        prev = v;
    }
    prev = 2.0;
    for (int n = 1; n <= 50; ++n) {
        const double v = renormalized_mass(1, 0.3, n, 1e-2);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(renormalized_mass(1, 1, 0, 1), ModelError);
}

TEST_CASE("effective mass m1") {
    ModelParams p;
    DiscreteBath uncoupled;
    uncoupled.omegas = {1.0, 2.0, 3.0};
    uncoupled.d = 0;
    uncoupled.g = 0;
    CHECK(effective_mass_m1(p, uncoupled) == p.m);

    // Single oscillator: m = omega0 = omega_j = m_b = d = m_r = 1, g = 0.
    ModelParams q;
    q.m = 1;
    q.omega0 = 1;
    q.m_r = 1;
    DiscreteBath one;
    one.omegas = {1.0};
    one.m_b = 1;
    one.d = 1;
    one.g = 0;
    // Direct substitution: [(g m w0^2 + d m_b w^2 + K)/(m_b w^2) + d] (g m_r + m_b d) w^2 / w0^2.
    auto by_hand = [](long double K) { return 1.0L - ((0.0L + 1.0L + K) / 1.0L + 1.0L) * 1.0L * 1.0L; };
    CHECK(effective_mass_m1(q, one, 1.0) == doctest::Approx(double(by_hand(1.0L))));
    CHECK(effective_mass_m1(q, one, 1.0) == -2.0);
    // With K_j from its defining sum, g = 0 gives K_j = 0.
    CHECK(one.spring_constant_sum() == 0.0);
    CHECK(effective_mass_m1(q, one) == doctest::Approx(double(by_hand(0.0L))));

    // Doubling d with g = 0, K = 0: both d-dependent factors double, the shift quadruples.
    DiscreteBath three;
    three.omegas = {0.5, 1.3, 2.9};
    three.m_b = 0.2;
    three.d = 0.7;
    three.g = 0;
    auto brute = [&](const DiscreteBath& b) {
        long double shift = 0;
        for (double w : b.omegas) {
            const long double w2 = (long double)w * w;
            shift += ((b.d * b.m_b * w2) / (b.m_b * w2) + b.d) * (b.m_b * b.d) * w2 / (q.omega0 * q.omega0);
        }
        return shift;
    };
    DiscreteBath doubled = three;
    doubled.d = 1.4;
    const double s1 = q.m - effective_mass_m1(q, three);
    const double s2 = q.m - effective_mass_m1(q, doubled);
    CHECK(s1 == doctest::Approx(double(brute(three))).epsilon(1e-13));
    CHECK(s2 == doctest::Approx(double(brute(doubled))).epsilon(1e-13));
    CHECK(s2 / s1 == doctest::Approx(4.0).epsilon(1e-13));
}

}  // TEST_SUITE
