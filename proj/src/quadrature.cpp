#include "magdeco/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace magdeco {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) {
        throw std::invalid_argument("quadrature rel_tol must lie in (0, 1e-2]");
    }
    if (!(abs_floor >= 0.0) || !std::isfinite(abs_floor)) {
        throw std::invalid_argument("quadrature abs_floor must be a finite non-negative number");
    }
    if (max_panels < 64) {
        throw std::invalid_argument("quadrature max_panels must be at least 64");
    }
    if (!(max_panel_width >= 0.0) || !std::isfinite(max_panel_width)) {
        throw std::invalid_argument("quadrature max_panel_width must be finite and non-negative");
    }
    if (!(l1_rel >= 0.0) || !std::isfinite(l1_rel)) {
        throw std::invalid_argument("quadrature l1_rel must be finite and non-negative");
    }
}

double cosine_panel_cap(double tau, double default_width) {
    const double t = std::abs(tau);
    if (t == 0.0) return default_width;
    return std::min(default_width, std::numbers::pi / (4.0 * t));
}

namespace {

// Moments on the unit half-panel, v in [0, 1]:
//   sinc(x) = sin(x)/x,  m1(x) = int v sin(x v),  m2(x) = int v^2 cos(x v).
// Power series below 0.5 where the closed forms cancel.
struct FilonMoments {
    double sinc;
    double m1;
    double m2;
};

FilonMoments filon_moments(double x) {
    FilonMoments mo{};
    if (std::abs(x) < 0.5) {
        const double x2 = x * x;
        double term = 1.0;  // (-1)^k x^(2k) / (2k)!
        double sinc = 0.0, m1 = 0.0, m2 = 0.0;
        for (int k = 0; k < 12; ++k) {
            const double twok = 2.0 * k;
            sinc += term / (twok + 1.0);
            m1 += term * x / ((twok + 1.0) * (twok + 3.0));
            m2 += term / (twok + 3.0);
            term *= -x2 / ((twok + 1.0) * (twok + 2.0));
        }
        mo.sinc = sinc;
        mo.m1 = m1;
        mo.m2 = m2;
        return mo;
    }
    const double s = std::sin(x), c = std::cos(x);
    mo.sinc = s / x;
    mo.m1 = (s - x * c) / (x * x);
    mo.m2 = (x * x * s + 2.0 * x * c - 2.0 * s) / (x * x * x);
    return mo;
}

}  // namespace

double filon_cosine_composite(SampleView samples, std::size_t panels, double length, double tau) {
    if (panels == 0) return 0.0;
    const double h = length / (2.0 * static_cast<double>(panels));
    const auto mo = filon_moments(tau * h);
    // Per-panel weights on the midpoint, endpoint sum and endpoint difference.
    const double w_mid = 2.0 * h * (mo.sinc - mo.m2);
    const double w_ends = h * mo.m2;
    const double w_diff = h * mo.m1;

    const double step = 2.0 * h * tau;
    const double rot_c = std::cos(step), rot_s = std::sin(step);
    constexpr std::size_t resync = 64;

    const double* f = samples.data;
    const std::size_t st = samples.stride;
    double sum = 0.0;
    double cc = 0.0, sc = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        if (p % resync == 0) {
            const double center = static_cast<double>(2 * p + 1) * h;
            cc = std::cos(tau * center);
            sc = std::sin(tau * center);
        } else {
            const double cn = cc * rot_c - sc * rot_s;
            sc = sc * rot_c + cc * rot_s;
            cc = cn;
        }
        const double fl = f[(2 * p) * st];
        const double fm = f[(2 * p + 1) * st];
        const double fr = f[(2 * p + 2) * st];
        sum += cc * (w_mid * fm + w_ends * (fl + fr)) - sc * w_diff * (fr - fl);
    }
    return sum;
}

QuadratureResult integrate_cosine_sampled(const SampleSource& source, double length, double tau,
                                          const QuadratureSpec& spec) {
    spec.validate();
    if (!(length > 0.0)) return {0.0, 0.0, 0};
    const double default_width = spec.max_panel_width > 0.0 ? spec.max_panel_width : length / 32.0;
    const double cap = cosine_panel_cap(tau, default_width);
    const double wanted = std::ceil(length / cap);
    std::size_t coarse = 16;
    while (static_cast<double>(coarse) < wanted) coarse *= 2;

    std::vector<double> scratch;
    QuadratureResult best{};
    while (true) {
        const std::size_t fine = 2 * coarse;
        if (fine > spec.max_panels) {
            throw QuadratureError("filon cosine quadrature exceeded panel budget at tau=" + std::to_string(tau),
                                  best);
        }
        const SampleView view = source(2 * fine, scratch);
        const double v_fine = filon_cosine_composite(view, fine, length, tau);
        const double v_coarse = filon_cosine_composite({view.data, 2 * view.stride}, coarse, length, tau);
        best = {v_fine, std::abs(v_fine - v_coarse), fine};
        if (best.error <= std::max(spec.rel_tol * std::abs(v_fine), spec.abs_floor)) return best;
        coarse *= 2;
    }
}

QuadratureResult integrate_cosine_weighted(const std::function<double(double)>& weight, double length,
                                           double tau, const QuadratureSpec& spec) {
    const SampleSource source = [&](std::size_t intervals, std::vector<double>& scratch) {
        scratch.resize(intervals + 1);
        const double n = static_cast<double>(intervals);
        for (std::size_t i = 0; i <= intervals; ++i) {
            scratch[i] = weight(length * (static_cast<double>(i) / n));
        }
        return SampleView{scratch.data(), 1};
    };
    return integrate_cosine_sampled(source, length, tau, spec);
}

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    double magnitude;  // Kronrod estimate of int |f|
};

Panel gauss_kronrod15(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    double abs_sum = kWgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fl = f(center - dx), fr = f(center + dx);
        const double pair = fl + fr;
        kronrod += kWgk[j] * pair;
        abs_sum += kWgk[j] * (std::abs(fl) + std::abs(fr));
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * half};
}

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.lo > y.lo;
    }
};

}  // namespace

QuadratureResult integrate_generic(const std::function<double(double)>& f, double lo, double hi,
                                   const QuadratureSpec& spec, std::span<const double> breakpoints) {
    spec.validate();
    if (hi == lo) return {0.0, 0.0, 0};
    if (!(hi > lo)) throw std::invalid_argument("integrate_generic: requires lo <= hi");

    std::vector<double> cuts{lo};
    for (double b : breakpoints) {
        if (b > lo && b < hi) cuts.push_back(b);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Panel> panels;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s], b = cuts[s + 1];
        std::size_t pieces = 1;
        if (spec.max_panel_width > 0.0) {
            pieces = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / spec.max_panel_width)));
        }
        if (panels.size() + pieces > spec.max_panels) {
            throw QuadratureError("integrate_generic: initial subdivision exceeds panel budget", {});
        }
        const double w = (b - a) / static_cast<double>(pieces);
        for (std::size_t i = 0; i < pieces; ++i) {
            const double pa = a + w * static_cast<double>(i);
            const double pb = (i + 1 == pieces) ? b : a + w * static_cast<double>(i + 1);
            panels.push_back(gauss_kronrod15(f, pa, pb));
        }
    }

    std::make_heap(panels.begin(), panels.end(), ByError{});
    auto totals = [&panels]() {
        double v = 0.0, e = 0.0, a = 0.0;
        for (const auto& p : panels) {
            v += p.value;
            e += p.error;
            a += p.magnitude;
        }
        return std::tuple{v, e, a};
    };

    auto [value, error, magnitude] = totals();
    auto target = [&] {
        return std::max({spec.rel_tol * std::abs(value), spec.abs_floor, spec.l1_rel * magnitude});
    };
    std::size_t since_resum = 0;
    while (true) {
        if (error <= target()) {
            std::tie(value, error, magnitude) = totals();
            if (error <= target()) break;
        }
        if (panels.size() + 1 > spec.max_panels) {
            std::tie(value, error, magnitude) = totals();
            throw QuadratureError("integrate_generic exceeded panel budget", {value, error, panels.size()});
        }
        std::pop_heap(panels.begin(), panels.end(), ByError{});
        const Panel worst = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Panel left = gauss_kronrod15(f, worst.lo, mid);
        const Panel right = gauss_kronrod15(f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        magnitude += left.magnitude + right.magnitude - worst.magnitude;
        panels.push_back(left);
        std::push_heap(panels.begin(), panels.end(), ByError{});
        panels.push_back(right);
        std::push_heap(panels.begin(), panels.end(), ByError{});
        if (++since_resum == 256) {
            std::tie(value, error, magnitude) = totals();
            since_resum = 0;
        }
    }
    return {value, error, panels.size()};
}

double riemann_reference(const std::function<double(double)>& f, double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("riemann_reference: requires n >= 2");
    const double h = (hi - lo) / static_cast<double>(n);
    // Neumaier compensated summation.
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + (static_cast<double>(i) + 0.5) * h;
        const double term = f(x);
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    return (sum + comp) * h;
}

}  // namespace magdeco
