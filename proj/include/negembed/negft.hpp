#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "negembed/quadrature.hpp"
#include "negembed/rng.hpp"
#include "negembed/space.hpp"
#include "negembed/specfun.hpp"

namespace negembed::negft {

using specfun::kPi;
using specfun::kSqrtPi;

enum class Method { closed, quad_linf, quad_lq, lq_via_linf, sphere };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::closed: return "closed";
        case Method::quad_linf: return "quad_linf";
        case Method::quad_lq: return "quad_lq";
        case Method::lq_via_linf: return "lq_via_linf";
        case Method::sphere: return "sphere";
    }
    return "?";
}

/// One evaluation of (||x||^{-p})^ at a point. err_estimate is a bound the
/// evaluator commits to; agreement checks use the sum of two such bounds.
struct TransformValue {
    double value = 0.0;
    double err_estimate = 0.0;
    Method method = Method::closed;
    bool converged = true;
};

namespace detail {

inline void require_nonzero(std::span<const double> xi) {
    if (xi.empty()) throw std::invalid_argument("xi must be non-empty");
    for (double x : xi)
        if (x == 0.0) throw std::invalid_argument("xi must have non-zero coordinates");
}

inline double abs_product(std::span<const double> xi) {
    double p = 1.0;
    for (double x : xi) p *= std::abs(x);
    return p;
}

inline double signed_product(std::span<const double> xi) {
    double p = 1.0;
    for (double x : xi) p *= x;
    return p;
}

// Neumaier sum of terms sorted by descending magnitude; the alternating
// 2^n sums cancel catastrophically near p = n, so both the compensation and
// the |term| total (for the error bound) matter.
inline std::pair<double, double> compensated_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end(),
              [](double x, double y) { return std::abs(x) > std::abs(y); });
    double s = 0.0, c = 0.0, abs_sum = 0.0;
    for (double t : terms) {
        const double u = s + t;
        if (std::abs(s) >= std::abs(t))
            c += (s - u) + t;
        else
            c += (t - u) + s;
        s = u;
        abs_sum += std::abs(t);
    }
    return {s + c, abs_sum};
}

} // namespace detail

struct SignSum {
    double value = 0.0;
    double abs_sum = 0.0; // sum of |terms|, for cancellation-aware error bounds
};

/// Sum over all 2^n sign patterns delta of
///   delta_1...delta_n |delta . xi|^p            (with_sgn = false, h_{n,p})
///   delta_1...delta_n |delta . xi|^p sgn(...)   (with_sgn = true,  g_{n,p})
inline SignSum signed_power_sum(double p, std::span<const double> xi, bool with_sgn) {
    detail::require_nonzero(xi);
    const int n = static_cast<int>(xi.size());
    if (n > 24) throw std::invalid_argument("signed_power_sum: dimension too large");
    std::vector<double> terms;
    terms.reserve(std::size_t{1} << n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += (mask >> k & 1u) ? xi[static_cast<std::size_t>(k)] : -xi[static_cast<std::size_t>(k)];
        const int parity = __builtin_popcount(mask);
        const double dprod = ((n - parity) % 2 == 0) ? 1.0 : -1.0;
        double v;
        if (s == 0.0) {
            if (p > 0.0)
                v = 0.0;
            else
                throw std::domain_error(
                    "signed_power_sum: vanishing sign combination with p <= 0");
        } else {
            v = std::pow(std::abs(s), p);
            if (with_sgn && s < 0.0) v = -v;
        }
        terms.push_back(dprod * v);
    }
    auto [value, abs_sum] = detail::compensated_sum(terms);
    return {value, abs_sum};
}

inline double h_np(double p, std::span<const double> xi) {
    return signed_power_sum(p, xi, false).value;
}

inline double g_np(double p, std::span<const double> xi) {
    return signed_power_sum(p, xi, true).value;
}

/// u_{n,p}: the non-degenerate sign sum (g for odd n, h for even n).
inline double u_np(double p, std::span<const double> xi) {
    return signed_power_sum(p, xi, xi.size() % 2 == 1).value;
}

namespace detail {

// Gamma-ratio prefactor of the closed-form l_inf transform; the sign sum and
// the coordinate product are supplied per point.
inline double linf_closed_prefactor(int n, double p) {
    if (n % 2 == 1) {
        const double sign = (((n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
        return sign * std::pow(2.0, -p) * kSqrtPi * specfun::gamma((1.0 - p) / 2.0) /
               specfun::gamma(p / 2.0);
    }
    const double sign = ((n / 2 + 1) % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(2.0, -p) * kSqrtPi * specfun::gamma((2.0 - p) / 2.0) /
           specfun::gamma((p + 1.0) / 2.0);
}

inline TransformValue linf_closed_core(double p, std::span<const double> xi,
                                       double prefactor) {
    const int n = static_cast<int>(xi.size());
    SignSum s = signed_power_sum(p, xi, n % 2 == 1);
    const double coord = signed_product(xi);
    TransformValue out;
    out.value = prefactor * s.value / coord;
    const double eps = std::numeric_limits<double>::epsilon();
    out.err_estimate = 1e-12 * std::abs(out.value) + 1e-300 +
                       16.0 * eps * std::abs(prefactor / coord) * s.abs_sum;
    out.method = Method::closed;
    return out;
}

} // namespace detail

/// (||x||_inf^{-p})^ via the alternating-sum closed form; p > 0 non-integer.
inline TransformValue ft_linf_closed(double p, std::span<const double> xi) {
    detail::require_nonzero(xi);
    if (!(p > 0.0) || p == std::floor(p))
        throw std::domain_error("ft_linf_closed: requires non-integer p > 0");
    const int n = static_cast<int>(xi.size());
    return detail::linf_closed_core(p, xi, detail::linf_closed_prefactor(n, p));
}

namespace detail {

// J(sigma) = int_T^inf t^{-p-1} e^{i sigma t} dt via repeated integration by
// parts. Terms decay by (p+1+j)/(sigma T); the remainder after K terms is
// bounded by twice the first omitted term.
struct ComplexTail {
    std::complex<double> value{0.0, 0.0};
    double err = 0.0;
};

inline ComplexTail ibp_oscillatory_tail(double p, double sigma, double T) {
    const std::complex<double> i_sigma(0.0, sigma);
    const std::complex<double> eisT(std::cos(sigma * T), std::sin(sigma * T));
    std::complex<double> term = -eisT / i_sigma * std::pow(T, -(p + 1.0));
    std::complex<double> sum(0.0, 0.0);
    double best = std::abs(term);
    for (int j = 0; j < 64; ++j) {
        sum += term;
        std::complex<double> next = term * ((p + 1.0 + j) / (i_sigma * T));
        if (std::abs(next) >= std::abs(term)) {
            return {sum, 2.0 * std::abs(next)};
        }
        term = next;
        best = std::abs(term);
        if (2.0 * best < 1e-300) break;
    }
    return {sum, 2.0 * best};
}

// J(sigma) for sigma >= 0, with a quadrature bridge when sigma*T is too small
// for the asymptotic series to bite. Bridge panels grow geometrically (the
// integrand mass sits at the left end) but never exceed a quarter period.
inline ComplexTail oscillatory_tail(double p, double sigma, double T, double rel_tol,
                                     double abs_tol, int max_panels) {
    if (sigma == 0.0) return {std::complex<double>(std::pow(T, -p) / p, 0.0), 0.0};
    const double theta = 3.0 * (p + 12.0);
    if (sigma * T >= theta) return ibp_oscillatory_tail(p, sigma, T);
    const double T2 = theta / sigma;
    std::vector<double> bp;
    const double osc_width = kPi / (4.0 * sigma);
    for (double t = T; t < T2 && bp.size() < 5000; t = std::min(t * 1.6, t + osc_width))
        bp.push_back(t);
    if (!bp.empty()) bp.erase(bp.begin()); // keep only interior points
    auto re = quad::integrate([&](double t) { return std::pow(t, -p - 1.0) * std::cos(sigma * t); },
                              T, T2, rel_tol, abs_tol, max_panels, bp);
    auto im = quad::integrate([&](double t) { return std::pow(t, -p - 1.0) * std::sin(sigma * t); },
                              T, T2, rel_tol, abs_tol, max_panels, bp);
    ComplexTail rest = ibp_oscillatory_tail(p, sigma, T2);
    return {std::complex<double>(re.value, im.value) + rest.value,
            re.err + im.err + rest.err};
}

// |J(sigma) - J(0)| for |sigma| below the zero floor: |e^{i s t} - 1| <= s t
// up to t = 1/s and <= 2 beyond.
inline double near_zero_sigma_bound(double p, double sigma, double T) {
    if (sigma <= 0.0) return 0.0;
    if (p > 1.0 + 1e-12) return sigma * std::pow(T, 1.0 - p) / (p - 1.0);
    return std::pow(sigma, p) * (2.0 / p) + sigma * std::pow(sigma, p - 1.0); // p <= 1
}

} // namespace detail

/// (||x||_inf^{-p})^ via the oscillatory integral
///   2^n p int_0^inf t^{-p-1} prod_k sin(t xi_k)/xi_k dt,  0 < p < n.
/// [0, t0] uses the power-singularity head (integrand ~ t^{n-p-1}), the far
/// tail expands prod sin into 2^n exponentials, each integrated by parts with
/// a rigorous remainder folded into err_estimate.
inline TransformValue ft_linf_quadrature(double p, std::span<const double> xi,
                                         const QuadratureConfig& cfg = {}) {
    detail::require_nonzero(xi);
    cfg.validate();
    const int n = static_cast<int>(xi.size());
    if (!(p > 0.0 && p < n)) throw std::domain_error("ft_linf_quadrature: requires 0 < p < n");
    if (n > 20) throw std::invalid_argument("ft_linf_quadrature: dimension too large");

    std::vector<double> a(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) a[k] = std::abs(xi[k]); // even per coordinate
    const double amax = *std::max_element(a.begin(), a.end());
    const double asum = [&] {
        double s = 0.0;
        for (double v : a) s += v;
        return s;
    }();
    const double aprod = detail::abs_product(a);

    const double scale = std::pow(2.0, n) * p;
    const double alpha = n - p;
    const double T = 16.0;
    const double t0 = std::min(0.5 / amax, T / 4.0);

    auto sinc_prod = [&](double t) {
        double prod = 1.0;
        for (double ak : a) {
            const double u = t * ak;
            prod *= (u == 0.0) ? 1.0 : std::sin(u) / u;
        }
        return prod;
    };

    // [0, t0]: t^{alpha-1} * prod sinc(t a_k)
    auto head = quad::integrate_power_head(sinc_prod, alpha, t0, cfg.rel_tol * 0.25,
                                           cfg.abs_tol * 0.25 / scale, cfg.max_panels);

    // [t0, T]
    auto f = [&](double t) {
        double prod = std::pow(t, -p - 1.0);
        for (double ak : a) prod *= std::sin(t * ak) / ak;
        return prod;
    };
    auto bp = quad::uniform_breaks(t0, T, kPi / (4.0 * std::max(asum, 1e-30)));
    auto mid = quad::integrate(f, t0, T, cfg.rel_tol * 0.25, cfg.abs_tol * 0.25 / scale,
                               cfg.max_panels, bp);

    // [T, inf): prod_k sin(t a_k) = Re[(2i)^{-n} sum_delta dprod e^{i sigma t}]
    std::complex<double> acc(0.0, 0.0);
    double tail_err = 0.0;
    const double sigma_floor = 4.0 * std::numeric_limits<double>::epsilon() * asum;
    std::vector<double> contrib(a.size());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        // magnitude-sorted summation so exactly-cancelling coordinate pairs
        // produce sigma = 0 rather than a rounding-scale residue
        for (int k = 0; k < n; ++k)
            contrib[static_cast<std::size_t>(k)] =
                (mask >> k & 1u) ? a[static_cast<std::size_t>(k)] : -a[static_cast<std::size_t>(k)];
        std::sort(contrib.begin(), contrib.end(),
                  [](double x, double y) { return std::abs(x) > std::abs(y); });
        double sigma = 0.0;
        for (double c : contrib) sigma += c;
        const int parity = __builtin_popcount(mask);
        const double dprod = ((n - parity) % 2 == 0) ? 1.0 : -1.0;
        detail::ComplexTail jt;
        const double asig = std::abs(sigma);
        if (asig <= sigma_floor) {
            jt = detail::oscillatory_tail(p, 0.0, T, cfg.rel_tol * 0.25,
                                          cfg.abs_tol * 0.03 / scale, cfg.max_panels);
            jt.err += detail::near_zero_sigma_bound(p, asig, T);
        } else {
            jt = detail::oscillatory_tail(p, asig, T, cfg.rel_tol * 0.25,
                                          cfg.abs_tol * 0.03 / scale, cfg.max_panels);
            if (sigma < 0.0) jt.value = std::conj(jt.value);
        }
        acc += dprod * jt.value;
        tail_err += jt.err;
    }
    const std::complex<double> two_i_pow = std::pow(std::complex<double>(0.0, 2.0), -n);
    const double tail_value = (two_i_pow * acc).real() / aprod;
    tail_err = tail_err * std::abs(two_i_pow) / aprod;

    TransformValue out;
    out.method = Method::quad_linf;
    out.value = scale * (head.value + mid.value + tail_value);
    out.err_estimate = scale * (head.err + mid.err + tail_err) + 1e-300;
    out.converged = head.converged && mid.converged &&
                    out.err_estimate <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value)) * 64.0;
    return out;
}

/// Closed-form l_2 transform (the Riesz kernel), used as the q = 2 oracle and
/// as the scan route for l_2 spaces.
inline TransformValue riesz_closed(double p, std::span<const double> xi) {
    const int n = static_cast<int>(xi.size());
    if (n < 1) throw std::invalid_argument("riesz_closed: xi must be non-empty");
    if (!(p > 0.0 && p < n)) throw std::domain_error("riesz_closed: requires 0 < p < n");
    double norm2 = 0.0;
    for (double x : xi) norm2 += x * x;
    norm2 = std::sqrt(norm2);
    if (!(norm2 > 0.0)) throw std::invalid_argument("riesz_closed: xi must be non-zero");
    TransformValue out;
    out.value = std::pow(2.0, n - p) * std::pow(kPi, n / 2.0) *
                specfun::gamma((n - p) / 2.0) / specfun::gamma(p / 2.0) *
                std::pow(norm2, p - n);
    out.err_estimate = 1e-12 * std::abs(out.value) + 1e-300;
    out.method = Method::closed;
    return out;
}

namespace detail {

// Envelope |gamma_q(u)| <= B(u): the characteristic-function bound up to
// u_A = 40, then the Polya power law with a 1.5 safety factor (the limit is
// asymptotic, not a bound; 40 is where the artifact pins its 5% check).
struct GammaEnvelope {
    double M;      // gamma_q(0)
    double A;      // coefficient of u^{-q-1} branch
    double u_A;    // branch switch
    double q;
};

inline GammaEnvelope make_envelope(double q, const specfun::GammaQTable* table) {
    GammaEnvelope env;
    env.q = q;
    env.M = 2.0 * specfun::gamma(1.0 + 1.0 / q);
    env.u_A = 40.0;
    if (q == 1.0) {
        env.A = 2.0;  // gamma_1(u) = 2/(1+u^2) <= 2 u^{-2} exactly
        env.u_A = 0.0;
    } else if (!specfun::detail::is_even_integer(q)) {
        env.A = 1.5 * std::abs(specfun::gamma_q_tail_constant(q));
    } else {
        // even q decays exponentially; fit an empirical power envelope from
        // the tabulated values so the piecewise-power tail machinery applies
        double A = 0.0;
        if (table && table->u_max() > 45.0) {
            for (double u = 20.0; u <= std::min(table->u_max(), 120.0); u += 1.0)
                A = std::max(A, std::abs((*table)(u)) * std::pow(u, q + 1.0));
        }
        env.A = 2.0 * A + 1e-12;
        env.u_A = 20.0;
    }
    return env;
}

inline double envelope_at(const GammaEnvelope& env, double u) {
    if (u < env.u_A) return env.M;
    return std::min(env.M, env.A * std::pow(u, -env.q - 1.0));
}

// int_t^inf s^{e0-1} prod_k B(s a_k) ds, piecewise power in s.
inline double envelope_tail_integral(const GammaEnvelope& env, double e0,
                                     std::span<const double> a, double t) {
    std::vector<double> brks;
    for (double ak : a)
        if (env.u_A > 0.0 && env.u_A / ak > t) brks.push_back(env.u_A / ak);
    std::sort(brks.begin(), brks.end());
    brks.push_back(std::numeric_limits<double>::infinity());
    double total = 0.0;
    double lo = t;
    for (double hi : brks) {
        // on [lo, hi): branch per coordinate is fixed; evaluate at the midpoint
        const double probe = std::isinf(hi) ? lo * 2.0 : 0.5 * (lo + hi);
        double coef = 1.0;
        double expo = e0 - 1.0;
        for (double ak : a) {
            if (probe * ak >= env.u_A && env.A * std::pow(probe * ak, -env.q - 1.0) < env.M) {
                coef *= env.A * std::pow(ak, -env.q - 1.0);
                expo -= env.q + 1.0;
            } else {
                coef *= env.M;
            }
        }
        if (std::isinf(hi)) {
            if (expo >= -1.0) return std::numeric_limits<double>::infinity();
            total += coef * std::pow(lo, expo + 1.0) / (-(expo + 1.0));
            break;
        }
        // int_lo^hi s^expo ds
        if (expo == -1.0)
            total += coef * std::log(hi / lo);
        else
            total += coef * (std::pow(hi, expo + 1.0) - std::pow(lo, expo + 1.0)) / (expo + 1.0);
        lo = hi;
    }
    return total;
}

} // namespace detail

/// (||x||_q^{-p})^ via the one-dimensional integral
///   q / Gamma(p/q) int_0^inf t^{n-p-1} prod_k gamma_q(t xi_k) dt.
/// gamma_q comes from exact closed forms for q in {1, 2} and from a shared
/// cubic-interpolated table otherwise; the truncated tail is bounded through
/// a power-law envelope and folded into err_estimate.
inline TransformValue ft_lq_quadrature(double q, double p, std::span<const double> xi,
                                       const QuadratureConfig& cfg = {},
                                       specfun::GammaQTable* shared_table = nullptr) {
    detail::require_nonzero(xi);
    cfg.validate();
    const int n = static_cast<int>(xi.size());
    if (!(q > 0.0)) throw std::domain_error("ft_lq_quadrature: requires q > 0");
    if (!(p > 0.0 && p < n)) throw std::domain_error("ft_lq_quadrature: requires 0 < p < n");

    std::vector<double> a(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) a[k] = std::abs(xi[k]);
    const double amax = *std::max_element(a.begin(), a.end());

    const bool exact_q1 = (q == 1.0), exact_q2 = (q == 2.0);
    // beyond u_switch the large-argument expansion is cheaper and as accurate
    // as the table; the table never has to chase the slow power tail
    const double u_switch = 40.0;
    specfun::GammaQTable local_table;
    specfun::GammaQTable* table = shared_table;
    double series_rel = 0.0;
    if (!exact_q1 && !exact_q2) {
        if (!table) table = &local_table;
        if (!table->built() || table->q() != q) table->build(q, u_switch + 2.0, cfg);
        table->extend(u_switch + 2.0);
        const auto probe = specfun::gamma_q_asymptotic(q, u_switch);
        const double scale = std::max(std::abs(probe.value), 1e-300);
        series_rel = probe.abs_err / scale;
    }

    double gamma_point_err = 0.0;
    auto gamma_at = [&](double u) -> double {
        u = std::abs(u);
        if (exact_q1) return 2.0 / (1.0 + u * u);
        if (exact_q2) return kSqrtPi * std::exp(-u * u / 4.0);
        if (u <= u_switch) return (*table)(u);
        return specfun::gamma_q_asymptotic(q, u).value;
    };

    // choose the truncation point from the envelope bound
    const double pref = q / specfun::gamma(p / q);
    double tail_bound = 0.0;
    double t_T;
    if (exact_q2) {
        double R2 = 0.0;
        for (double ak : a) R2 += ak * ak;
        // bound int_t^inf s^{n-p-1} pi^{n/2} e^{-s^2 R2 / 4} ds by
        // (1/2) (R2/4)^{-(n-p)/2} pi^{n/2} * 2 x^{s-1} e^{-x}, x = t^2 R2/4
        const double s_half = (n - p) / 2.0;
        t_T = std::sqrt(4.0 * std::max(40.0, 2.0 * s_half + 2.0) / R2);
        for (int it = 0; it < 200; ++it) {
            const double x = t_T * t_T * R2 / 4.0;
            tail_bound = std::pow(kPi, n / 2.0) * 0.5 * std::pow(R2 / 4.0, -s_half) * 2.0 *
                         std::pow(x, s_half - 1.0) * std::exp(-x);
            if (std::abs(pref) * tail_bound <= 0.25 * cfg.abs_tol || t_T > 1e7) break;
            t_T *= 1.3;
        }
    } else {
        detail::GammaEnvelope env = detail::make_envelope(q, table);
        t_T = std::max(8.0, env.u_A / amax);
        for (int it = 0; it < 200; ++it) {
            tail_bound = detail::envelope_tail_integral(env, n - p, a, t_T);
            if (std::abs(pref) * tail_bound <= 0.25 * cfg.abs_tol || t_T > 1e7) break;
            t_T *= 1.3;
        }
    }
    auto g_prod = [&](double t) {
        double prod = 1.0;
        for (double ak : a) prod *= gamma_at(t * ak);
        return prod;
    };

    const double alpha = n - p;
    quad::Result head{}, main{};
    head.converged = true;
    double t0 = 0.0;
    if (alpha < 1.5) {
        t0 = std::min(0.5 / amax, t_T / 4.0);
        head = quad::integrate_power_head(g_prod, alpha, t0, cfg.rel_tol * 0.25,
                                          cfg.abs_tol * 0.25 / std::abs(pref), cfg.max_panels);
    }
    auto f = [&](double t) { return std::pow(t, alpha - 1.0) * g_prod(t); };
    // fine uniform panels while any gamma factor still has structure, then
    // geometric panels across the power-law far region
    const double t_struct = std::min(t_T, (u_switch + 20.0) / amax);
    auto bp = quad::uniform_breaks(t0, t_struct, 0.5 / amax, 8192);
    for (double t = t_struct; t < t_T; t *= 1.35) bp.push_back(t);
    main = quad::integrate(f, t0, t_T, cfg.rel_tol * 0.5, cfg.abs_tol * 0.25 / std::abs(pref),
                           cfg.max_panels, bp);

    TransformValue out;
    out.method = Method::quad_lq;
    out.value = pref * (head.value + main.value);
    if (table) {
        // tabulated-region and series-region gamma errors, propagated as
        // relative perturbations of each factor through the product integral
        const double M = 2.0 * specfun::gamma(1.0 + 1.0 / q);
        const double table_abs = n * table->point_err() * std::pow(M, n - 1) *
                                 std::pow(std::min(t_T, u_switch / amax * 2.0), alpha) / alpha;
        gamma_point_err = table_abs + n * series_rel * (std::abs(head.value) + main.abs_value);
    }
    out.err_estimate = std::abs(pref) * (head.err + main.err + tail_bound + gamma_point_err) +
                       1e-12 * std::abs(out.value) + 1e-300;
    out.converged = head.converged && main.converged && t_T <= 1e7;
    return out;
}

/// (||x||_q^{-p})^ via the l_inf reduction:
///   q^{n+1} / (p Gamma(p/q)) int_{(0,inf)^n} (t_1...t_n)^q e^{-||t||_q^q}
///     (||x||_inf^{-p})^(t_1 xi_1, ..., t_n xi_n) dt.
/// The weight factorizes into the exact per-coordinate importance density
/// q t^q e^{-t^q} / Gamma(1+1/q), i.e. t = G^{1/q} with G ~ Gamma(1 + 1/q);
/// the estimate is the plain Monte Carlo mean with err = 3 standard errors.
inline TransformValue ft_lq_via_linf(double q, double p, std::span<const double> xi,
                                     const QuadratureConfig& cfg = {},
                                     std::uint64_t seed = 0x517cc1b727220a95ull) {
    detail::require_nonzero(xi);
    cfg.validate();
    const int n = static_cast<int>(xi.size());
    if (!(q > 0.0)) throw std::domain_error("ft_lq_via_linf: requires q > 0");
    if (!(p > 0.0 && p < n) || p == std::floor(p))
        throw std::domain_error("ft_lq_via_linf: requires non-integer p in (0, n)");

    const double shape = 1.0 + 1.0 / q;
    const double constant =
        q * std::pow(specfun::gamma(shape), n) / (p * specfun::gamma(p / q));
    const double prefactor = detail::linf_closed_prefactor(n, p);

    auto sample_gamma_shape = [&](rng::Stream& st) {
        // Marsaglia-Tsang; shape > 1 here so no boost step is needed
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = st.next_gauss();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = st.next_unit_open();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    };

    const long N = std::max<long>(cfg.mc_samples, 16);
    double sum = 0.0, comp = 0.0, sumsq = 0.0;
    std::vector<double> point(xi.size());
    for (long i = 0; i < N; ++i) {
        rng::Stream st = rng::derive(seed, {0xF7u, static_cast<std::uint64_t>(i)});
        for (int k = 0; k < n; ++k)
            point[static_cast<std::size_t>(k)] =
                std::pow(sample_gamma_shape(st), 1.0 / q) * xi[static_cast<std::size_t>(k)];
        const double y = detail::linf_closed_core(p, point, prefactor).value;
        const double t = sum + y;
        if (std::abs(sum) >= std::abs(y))
            comp += (sum - t) + y;
        else
            comp += (y - t) + sum;
        sum = t;
        sumsq += y * y;
    }
    const double mean = (sum + comp) / static_cast<double>(N);
    const double var =
        std::max(0.0, (sumsq / static_cast<double>(N) - mean * mean)) *
        static_cast<double>(N) / static_cast<double>(N - 1);
    const double se = std::sqrt(var / static_cast<double>(N));

    TransformValue out;
    out.method = Method::lq_via_linf;
    out.value = constant * mean;
    out.err_estimate = 3.0 * std::abs(constant) * se + 1e-300;
    // a Monte Carlo route cannot chase quadrature-grade rel_tol; converged
    // means the 3-sigma band is small against the estimate itself
    out.converged = out.err_estimate <= std::max(cfg.abs_tol, 0.05 * std::abs(out.value));
    return out;
}

namespace detail {

// Orthonormal basis with first vector e = xi/|xi| (Householder completion).
inline std::vector<std::vector<double>> orthobasis(std::span<const double> xi) {
    const std::size_t n = xi.size();
    double nrm = 0.0;
    for (double x : xi) nrm += x * x;
    nrm = std::sqrt(nrm);
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = xi[i] / nrm;
    // Householder vector mapping e1 -> e
    std::vector<double> v = e;
    v[0] += (e[0] >= 0.0 ? 1.0 : -1.0);
    double vv = 0.0;
    for (double x : v) vv += x * x;
    std::vector<std::vector<double>> basis(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        // column j of H = I - 2 v v^T / (v^T v), then flip sign so column 0 = e
        for (std::size_t i = 0; i < n; ++i)
            basis[j][i] = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j] / vv;
        const double s = (e[0] >= 0.0 ? -1.0 : 1.0);
        for (std::size_t i = 0; i < n; ++i) basis[j][i] *= s;
    }
    return basis; // basis[0] == e, basis[1..] spans the orthogonal complement
}

} // namespace detail

/// Sphere-integral route (valid for any homogeneous norm, p in [n-1, n)):
///   f^(xi) = (pi/c) int_Omega |(theta, xi)|^{-n+p} f(theta) dtheta,
///   c = 2^{-n+p+1} sqrt(pi) Gamma((-n+p+1)/2) / Gamma((n-p)/2),
/// with the p = n-1 case integrating f over Omega ∩ xi^perp.
///
/// Decomposed as directions omega on the great sphere xi^perp (outer,
/// midpoint grids doubled until the estimate settles) times the polar angle u
/// (inner, adaptive). The kernel singularity |cos u|^{p-n}, exponent in
/// (-1, 0], sits on the inner integral, where panels are graded into it via
/// the power-head substitution; keeping the adaptive rule innermost means its
/// error control never chases outer-grid noise. Supported for n <= 4.
template <class NormFn>
TransformValue ft_sphere_norm(NormFn&& norm_at, int n, double p,
                              std::span<const double> xi, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (n < 2) throw std::domain_error("ft_sphere: requires n >= 2");
    if (n > 4) throw std::invalid_argument("ft_sphere: spherical product rule implemented for n <= 4");
    if (static_cast<int>(xi.size()) != n) throw std::invalid_argument("ft_sphere: xi dimension mismatch");
    if (!(p >= n - 1.0 - 1e-12 && p < n)) throw std::domain_error("ft_sphere: requires p in [n-1, n)");
    double xin = 0.0;
    for (double x : xi) xin += x * x;
    xin = std::sqrt(xin);
    if (!(xin > 0.0)) throw std::invalid_argument("ft_sphere: xi must be non-zero");

    auto basis = detail::orthobasis(xi);
    std::vector<double> theta(static_cast<std::size_t>(n));
    // theta = cos(u) e + sin(u) omega, omega a unit vector in xi^perp
    auto norm_pow = [&](double u, std::span<const double> omega) {
        const double cu = std::cos(u), su = std::sin(u);
        for (int i = 0; i < n; ++i) {
            double acc = cu * basis[0][static_cast<std::size_t>(i)];
            for (int j = 1; j < n; ++j)
                acc += su * omega[static_cast<std::size_t>(j - 1)] *
                       basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            theta[static_cast<std::size_t>(i)] = acc;
        }
        return std::pow(norm_at(std::span<const double>(theta)), -p);
    };

    const double homog = std::pow(xin, p - n);
    const bool edge = std::abs(p - (n - 1.0)) <= 1e-12;
    const double kappa = p - n;
    const double alpha = kappa + 1.0;
    const double inner_rel = std::min(cfg.rel_tol * 0.25, 1e-8);

    // inner polar integral along the half great circle through e and omega:
    //   int_0^pi |cos u|^kappa sin^{n-2}(u) ||theta(u, omega)||^{-p} du,
    // split at the singular equator u = pi/2 (u = pi/2 -+ s).
    double inner_err_max = 0.0;
    bool inner_ok = true;
    auto polar_integral = [&](std::span<const double> omega) {
        double total = 0.0;
        for (double side : {1.0, -1.0}) {
            auto g = [&](double s) {
                const double u = kPi / 2.0 - side * s;
                const double soft = (s == 0.0) ? 1.0 : std::sin(s) / s;
                const double lat = (n == 2) ? 1.0 : std::pow(std::cos(s), n - 2);
                return std::pow(soft, kappa) * lat * norm_pow(u, omega);
            };
            auto res = quad::integrate_power_head(g, alpha, kPi / 2.0, inner_rel, 1e-13,
                                                  cfg.max_panels);
            total += res.value;
            inner_err_max = std::max(inner_err_max, res.err);
            inner_ok = inner_ok && res.converged;
        }
        return total;
    };

    // edge case p = n-1: integrate ||theta||^{-p} over the great sphere
    // Omega ∩ xi^perp instead (u fixed at pi/2).
    auto section_value = [&](std::span<const double> omega) {
        return norm_pow(kPi / 2.0, omega);
    };

    // outer integral over omega in the (n-2)-sphere of xi^perp via midpoint
    // grids, doubled until two consecutive estimates agree.
    auto outer = [&](auto&& per_omega) {
        struct Summary {
            double value, err;
            bool converged;
        };
        auto grid_value = [&](int res) -> double {
            if (n == 2) {
                // 0-sphere: the two directions +-b1
                double o1[1] = {1.0}, o2[1] = {-1.0};
                return per_omega(std::span<const double>(o1)) +
                       per_omega(std::span<const double>(o2));
            }
            if (n == 3) {
                double acc = 0.0;
                for (int j = 0; j < res; ++j) {
                    const double v = 2.0 * kPi * (j + 0.5) / res;
                    double o[2] = {std::cos(v), std::sin(v)};
                    acc += per_omega(std::span<const double>(o));
                }
                return acc * (2.0 * kPi / res);
            }
            // n == 4: omega on S^2
            double acc = 0.0;
            const int nu = res / 2;
            for (int i = 0; i < nu; ++i) {
                const double w = kPi * (i + 0.5) / nu;
                const double sw = std::sin(w), cw = std::cos(w);
                for (int j = 0; j < res; ++j) {
                    const double v = 2.0 * kPi * (j + 0.5) / res;
                    double o[3] = {cw, sw * std::cos(v), sw * std::sin(v)};
                    acc += per_omega(std::span<const double>(o)) * sw;
                }
            }
            return acc * (2.0 * kPi / res) * (kPi / nu);
        };
        if (n == 2) return Summary{grid_value(0), 2.0 * inner_err_max, true};
        const double measure = (n == 3) ? 2.0 * kPi : 4.0 * kPi;
        int res = 16;
        double prev = grid_value(res);
        for (int it = 0; it < 9; ++it) {
            res *= 2;
            const double cur = grid_value(res);
            const double delta = std::abs(cur - prev);
            const double inner_prop = measure * inner_err_max;
            if (delta <= std::max(cfg.rel_tol * std::abs(cur), cfg.abs_tol))
                return Summary{cur, delta + inner_prop, true};
            if (res >= 4096) return Summary{cur, delta + inner_prop, false};
            prev = cur;
        }
        return Summary{prev, std::abs(prev) * 0.01, false};
    };

    TransformValue out;
    out.method = Method::sphere;
    if (edge) {
        auto sec = outer(section_value);
        out.value = homog * kPi * sec.value;
        out.err_estimate = homog * kPi * sec.err + 1e-12 * std::abs(out.value);
        out.converged = sec.converged;
        return out;
    }

    const double c_const = std::pow(2.0, -n + p + 1.0) * kSqrtPi *
                           specfun::gamma((-n + p + 1.0) / 2.0) /
                           specfun::gamma((n - p) / 2.0);
    auto body = outer(polar_integral);
    out.value = homog * (kPi / c_const) * body.value;
    out.err_estimate = homog * (kPi / c_const) * body.err + 1e-10 * std::abs(out.value) + 1e-300;
    out.converged = body.converged && inner_ok;
    return out;
}

inline TransformValue ft_sphere(const space::SpaceSpec& spec, double p,
                                std::span<const double> xi, const QuadratureConfig& cfg = {}) {
    space::validate(spec);
    const int n = space::dim(spec);
    return ft_sphere_norm([&](std::span<const double> th) { return space::norm(spec, th); },
                          n, p, xi, cfg);
}

/// Residual |u_{n,p}(xi) - p int_{-xi_n}^{xi_n} u_{n-1,p-1}(xi_1 + x, xi_2,
/// ..., xi_{n-1}) dx| of the induction identity behind the sign table.
/// Requires xi positive with xi_1 >= xi_n, p and p-1 non-integer, p > 0.
inline double u_recurrence_residual(double p, std::span<const double> xi,
                                    const QuadratureConfig& cfg = {}) {
    cfg.validate();
    const int n = static_cast<int>(xi.size());
    if (n < 3) throw std::domain_error("u_recurrence_residual: requires n >= 3");
    for (double x : xi)
        if (!(x > 0.0)) throw std::domain_error("u_recurrence_residual: xi must be positive");
    if (!(xi[0] >= xi[xi.size() - 1]))
        throw std::domain_error("u_recurrence_residual: requires xi_1 >= xi_n");
    if (!(p > 0.0) || p == std::floor(p) || (p - 1.0) == std::floor(p - 1.0))
        throw std::domain_error("u_recurrence_residual: p and p-1 must be non-integer, p > 0");

    const double lhs = u_np(p, xi);

    std::vector<double> inner(xi.begin(), xi.end() - 1);
    const double xin = xi[xi.size() - 1];
    const double xi1 = xi[0];
    auto integrand = [&](double x) {
        std::vector<double> pt = inner;
        pt[0] = xi1 + x;
        return u_np(p - 1.0, pt);
    };
    // breakpoints at the kinks: xi_1 + x = +-(combination of xi_2..xi_{n-1})
    std::vector<double> brks;
    const int m = n - 2;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        double comb = 0.0;
        for (int k = 0; k < m; ++k)
            comb += (mask >> k & 1u) ? xi[static_cast<std::size_t>(k + 1)] : -xi[static_cast<std::size_t>(k + 1)];
        for (double target : {comb, -comb}) {
            const double x = target - xi1;
            if (x > -xin && x < xin) brks.push_back(x);
        }
    }
    std::sort(brks.begin(), brks.end());
    brks.erase(std::unique(brks.begin(), brks.end()), brks.end());
    auto r = quad::integrate(integrand, -xin, xin, cfg.rel_tol, cfg.abs_tol, cfg.max_panels, brks);
    const double rhs = p * r.value;
    return std::abs(lhs - rhs);
}

} // namespace negembed::negft
