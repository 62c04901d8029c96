#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace negembed {

/// Shared tolerance/budget knobs for every quadrature-backed evaluator.
struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_panels = 200000;
    enum class TailPolicy { power_bound, exponential };
    TailPolicy tail_policy = TailPolicy::power_bound;
    long mc_samples = 1000000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
        if (max_panels < 16)
            throw std::invalid_argument("QuadratureConfig: max_panels must be >= 16");
    }
};

namespace quad {

// 15-point Kronrod rule with embedded 7-point Gauss (QUADPACK dqk15 constants).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Result {
    double value = 0.0;
    double err = 0.0;       // committed absolute error bound
    double abs_value = 0.0; // integral of |f|, useful for cancellation bookkeeping
    int panels = 0;
    bool converged = false;
};

namespace detail {

struct Panel {
    double a, b;
    double value;
    double err;
    double resabs;
    std::uint64_t id; // creation order; makes the refinement order deterministic
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.err != y.err) return x.err < y.err;
        return x.id > y.id;
    }
};

template <class F>
Panel gk15(F&& f, double a, double b, std::uint64_t id) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    const double dhlgth = std::abs(hlgth);

    double fv1[7], fv2[7];
    const double fc = f(centr);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = hlgth * kXgk[jtw];
        fv1[jtw] = f(centr - absc);
        fv2[jtw] = f(centr + absc);
        const double fsum = fv1[jtw] + fv2[jtw];
        resg += kWg[j] * fsum;
        resk += kWgk[jtw] * fsum;
        resabs += kWgk[jtw] * (std::abs(fv1[jtw]) + std::abs(fv2[jtw]));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * kXgk[jtwm1];
        fv1[jtwm1] = f(centr - absc);
        fv2[jtwm1] = f(centr + absc);
        const double fsum = fv1[jtwm1] + fv2[jtwm1];
        resk += kWgk[jtwm1] * fsum;
        resabs += kWgk[jtwm1] * (std::abs(fv1[jtwm1]) + std::abs(fv2[jtwm1]));
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double value = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    double abserr = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    const double epmach = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * epmach))
        abserr = std::max(epmach * 50.0 * resabs, abserr);
    return Panel{a, b, value, abserr, resabs, id};
}

// Neumaier compensated accumulator.
struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double total() const { return s + c; }
};

} // namespace detail

/// Evenly spaced interior breakpoints so each initial panel is at most
/// `max_width` wide (capped at `max_count` panels).
inline std::vector<double> uniform_breaks(double a, double b, double max_width,
                                          int max_count = 16384) {
    std::vector<double> bp;
    if (!(max_width > 0.0)) return bp;
    const double len = b - a;
    int count = static_cast<int>(std::ceil(len / max_width));
    count = std::clamp(count, 1, max_count);
    bp.reserve(static_cast<std::size_t>(count - 1));
    for (int i = 1; i < count; ++i) bp.push_back(a + len * (static_cast<double>(i) / count));
    return bp;
}

/// Globally adaptive GK15 on [a,b]. `breakpoints` seeds the initial
/// subdivision (sorted interior points); refinement always splits the panel
/// with the largest error estimate, ties broken by creation order.
template <class F>
Result integrate(F&& f, double a, double b, double rel_tol, double abs_tol,
                 int max_panels, const std::vector<double>& breakpoints = {}) {
    Result out;
    if (a == b) {
        out.converged = true;
        return out;
    }

    std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelWorse> heap;
    std::uint64_t next_id = 0;
    double total_value = 0.0, total_err = 0.0, total_abs = 0.0;
    auto push_panel = [&](double lo, double hi) {
        detail::Panel pn = detail::gk15(f, lo, hi, next_id++);
        total_value += pn.value;
        total_err += pn.err;
        total_abs += pn.resabs;
        heap.push(pn);
    };
    double prev = a;
    for (double x : breakpoints) {
        if (x <= prev || x >= b) continue;
        push_panel(prev, x);
        prev = x;
    }
    push_panel(prev, b);

    const double epmach = std::numeric_limits<double>::epsilon();
    while (static_cast<int>(next_id) < max_panels) {
        // the 50*eps*resabs floor of the panel estimates cannot be refined away
        const double target = std::max({abs_tol, rel_tol * std::abs(total_value),
                                        64.0 * epmach * total_abs});
        if (total_err <= target) break;
        detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            heap.push(worst); // interval at floating-point resolution
            break;
        }
        total_value -= worst.value;
        total_err -= worst.err;
        total_abs -= worst.resabs;
        push_panel(worst.a, mid);
        push_panel(mid, worst.b);
    }

    // Final clean pass in interval order for a well-conditioned sum.
    std::vector<detail::Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
    detail::Kahan v, e, r;
    for (const auto& pn : panels) {
        v.add(pn.value);
        e.add(pn.err);
        r.add(pn.resabs);
    }
    out.value = v.total();
    out.err = e.total();
    out.abs_value = r.total();
    out.panels = static_cast<int>(panels.size());
    out.converged = out.err <= std::max({abs_tol, rel_tol * std::abs(out.value),
                                         64.0 * epmach * out.abs_value});
    return out;
}

template <class F>
Result integrate(F&& f, double a, double b, const QuadratureConfig& cfg,
                 const std::vector<double>& breakpoints = {}) {
    return integrate(std::forward<F>(f), a, b, cfg.rel_tol, cfg.abs_tol, cfg.max_panels,
                     breakpoints);
}

/// ∫_0^{t0} t^{alpha-1} g(t) dt for 0 < alpha, g smooth and even-ish at 0.
/// For alpha < 1.5 the endpoint is singular or steep; the substitution
/// u = t^alpha turns the integrand into g(u^{1/alpha}), which is C^1 there.
template <class G>
Result integrate_power_head(G&& g, double alpha, double t0, double rel_tol,
                            double abs_tol, int max_panels) {
    if (!(alpha > 0.0)) throw std::invalid_argument("integrate_power_head: alpha must be > 0");
    if (!(t0 > 0.0)) return Result{0.0, 0.0, 0.0, 0, true};
    if (alpha >= 1.5) {
        auto f = [&](double t) { return std::pow(t, alpha - 1.0) * g(t); };
        return integrate(f, 0.0, t0, rel_tol, abs_tol, max_panels);
    }
    const double inv_alpha = 1.0 / alpha;
    auto f = [&](double u) { return u > 0.0 ? g(std::pow(u, inv_alpha)) : g(0.0); };
    Result r = integrate(f, 0.0, std::pow(t0, alpha), rel_tol * alpha, abs_tol * alpha,
                         max_panels);
    r.value *= inv_alpha;
    r.err *= inv_alpha;
    r.abs_value *= inv_alpha;
    return r;
}

} // namespace quad
} // namespace negembed
