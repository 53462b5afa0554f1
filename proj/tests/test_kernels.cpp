#include <doctest.h>

#include <cmath>
#include <random>

#include "magdeco/kernels.hpp"
#include "oracles.hpp"

using namespace magdeco;

namespace {

ModelParams with_fields(double w0, double wc, double m) {
    ModelParams p;
    p.omega0 = w0;
    p.omega_c = wc;
    p.m = m;
    return p;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("values at tau = 0 are exact") {
    for (double wc : {0.0, 0.5, 3.0}) {
        const auto k = eval_kernels(derive_frequencies(10.0, wc), 1.0, 0.0);
        CHECK(k.direct == 1.0);
        CHECK(k.cross == 0.0);
        CHECK(k.anomalous_direct == 0.0);
        CHECK(k.anomalous_cross == 0.0);
    }
    const auto r = eval_kernels_complex_reference(with_fields(10, 1, 1), 0.0);
    CHECK(r.values.direct == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("zero-field collapse") {
    const auto f = derive_frequencies(10.0, 0.0);
    for (double tau = 0.0; tau <= 10.0; tau += 0.01) {
        const auto k = eval_kernels(f, 1.0, tau);
        CHECK(std::abs(k.direct - std::cos(10 * tau)) <= 1e-12);
        CHECK(std::abs(k.cross) <= 1e-12);
        CHECK(std::abs(k.anomalous_direct - std::sin(10 * tau) / 10) <= 1e-12);
        CHECK(std::abs(k.anomalous_cross) <= 1e-12);
    }
}

TEST_CASE("single point against the complex cosh/sinh forms") {
    const auto freqs = derive_frequencies(10.0, 1.0);
    const auto k = eval_kernels(freqs, 1.0, 0.5);
    const auto o = oracle::complex_kernels(10, 1, 1, 0.5L);
    CHECK(std::abs(k.direct - o.F1) <= 1e-10);
    CHECK(std::abs(k.cross - o.F2) <= 1e-10);
    CHECK(std::abs(k.anomalous_direct - o.f1) <= 1e-10);
    CHECK(std::abs(k.anomalous_cross - o.f2) <= 1e-10);
    const auto r = eval_kernels_complex_reference(with_fields(10, 1, 1), 1.0);
    const auto k1 = eval_kernels(freqs, 1.0, 1.0);
    for (Channel c : all_channels) CHECK(std::abs(k1[c] - r.values[c]) <= 1e-10);
}

TEST_CASE("oracle equivalence and bounds over random inputs") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> uw0(0.1, 100.0), uwc(1e-4, 100.0), ut(0.0, 10.0), um(0.1, 10.0);
    double worst = 0.0, worst_imag = 0.0;
    int bound_failures = 0;
    for (int i = 0; i < 10000; ++i) {
        const double w0 = uw0(rng), wc = uwc(rng), tau = ut(rng), m = um(rng);
        const auto freqs = derive_frequencies(w0, wc);
        const auto k = eval_kernels(freqs, m, tau);
        const auto r = eval_kernels_complex_reference(with_fields(w0, wc, m), tau);
        for (Channel c : all_channels) worst = std::max(worst, std::abs(k[c] - r.values[c]));
        worst_imag = std::max(worst_imag, r.imag_residue);
        const double amp = 2.0 / (m * (freqs.fast + freqs.slow));
        if (std::abs(k.direct) > 1.0 || std::abs(k.cross) > 1.0 || std::abs(k.anomalous_direct) > amp ||
            std::abs(k.anomalous_cross) > amp) {
            ++bound_failures;
        }
    }
    CHECK(worst <= 1e-10);
    CHECK(worst_imag <= 1e-12);
    CHECK(bound_failures == 0);
}

TEST_CASE("reference imaginary residue along a tau sweep") {
    const auto p = with_fields(10, 1, 1);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) worst = std::max(worst, eval_kernels_complex_reference(p, 0.01 * i).imag_residue);
    CHECK(worst <= 1e-12);
}

TEST_CASE("reference refuses the degenerate field") {
    CHECK_THROWS_AS(eval_kernels_complex_reference(with_fields(10, 0, 1), 1.0), ModelError);
    CHECK_THROWS_AS(eval_kernels_complex_reference(with_fields(10, 1e-9, 1), 1.0), ModelError);
}

TEST_CASE("continuity at zero field") {
    const auto f0 = derive_frequencies(10.0, 0.0);
    const auto f1 = derive_frequencies(10.0, 1e-8);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const auto a = eval_kernels(f0, 1.0, 0.01 * i);
        const auto b = eval_kernels(f1, 1.0, 0.01 * i);
        for (Channel c : all_channels) worst = std::max(worst, std::abs(a[c] - b[c]));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("single-channel evaluation matches the bundle") {
    const auto f = derive_frequencies(3.0, 2.0);
    for (double tau : {0.0, 0.3, 7.1}) {
        const auto k = eval_kernels(f, 2.0, tau);
        for (Channel c : all_channels) CHECK(eval_kernel(f, 2.0, c, tau) == k[c]);
    }
}

TEST_CASE("direct kernel dominates the anomalous one") {
    const auto f = derive_frequencies(10.0, 1.0);
    double max_F = 0, max_f = 0, sum_F = 0, sum_f = 0;
    for (int i = 0; i <= 1000; ++i) {
        const auto k = eval_kernels(f, 1.0, 0.01 * i);
        max_F = std::max(max_F, std::abs(k.direct));
        max_f = std::max(max_f, std::abs(k.anomalous_direct));
        sum_F += std::abs(k.direct);
        sum_f += std::abs(k.anomalous_direct);
    }
    CHECK(max_f <= 0.5 * max_F);
    CHECK(sum_F >= 5.0 * sum_f);
}

}  // TEST_SUITE
