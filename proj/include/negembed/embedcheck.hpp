#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "negembed/negft.hpp"
#include "negembed/rng.hpp"
#include "negembed/space.hpp"
#include "negembed/specfun.hpp"

namespace negembed::embedcheck {

enum class Verdict { AllNonnegative, SignChange, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::AllNonnegative: return "AllNonnegative";
        case Verdict::SignChange: return "SignChange";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct ScanConfig {
    int grid_levels = 7;        // log10 levels per coordinate on [-3, 0]
    int random_samples = 256;
    std::uint64_t seed = 1;
    double coord_floor = 1e-3;  // every scanned coordinate stays above this
    double decision_tol = 0.0;  // 0 = auto: max(1e-7, 10 * median err)
};

struct Witness {
    std::vector<double> point;
    double value = 0.0;
    double err = 0.0;
};

struct SignScanReport {
    space::SpaceSpec space;
    double p = 0.0;
    int n_samples = 0;
    double min_value = 0.0, max_value = 0.0;
    std::vector<double> argmin, argmax;
    std::optional<Witness> pos_witness, neg_witness;
    double decision_tol = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    negft::Method method = negft::Method::closed;
    std::uint64_t seed = 0;
    double max_err = 0.0;
    bool continuity_endpoint = false; // p hit an endpoint covered by the
                                      // limit argument rather than a formula
};

namespace detail {

/// Route selection: closed form when available, quadrature otherwise.
struct Evaluator {
    negft::Method method;
    std::function<negft::TransformValue(std::span<const double>)> eval;
};

inline Evaluator pick_evaluator(const space::SpaceSpec& spec, double p,
                                const QuadratureConfig& cfg,
                                specfun::GammaQTable* table) {
    const int n = space::dim(spec);
    if (const auto* lq = std::get_if<space::LqNorm>(&spec)) {
        if (lq->q == space::kInf) {
            if (p != std::floor(p))
                return {negft::Method::closed,
                        [p](std::span<const double> xi) { return negft::ft_linf_closed(p, xi); }};
            return {negft::Method::quad_linf, [p, cfg](std::span<const double> xi) {
                        return negft::ft_linf_quadrature(p, xi, cfg);
                    }};
        }
        if (lq->q == 2.0)
            return {negft::Method::closed,
                    [p](std::span<const double> xi) { return negft::riesz_closed(p, xi); }};
        const double q = lq->q;
        return {negft::Method::quad_lq, [q, p, cfg, table](std::span<const double> xi) {
                    return negft::ft_lq_quadrature(q, p, xi, cfg, table);
                }};
    }
    if (p >= n - 1.0 - 1e-12 && p < n) {
        const space::SpaceSpec copy = spec;
        return {negft::Method::sphere, [copy, p, cfg](std::span<const double> xi) {
                    return negft::ft_sphere(copy, p, xi, cfg);
                }};
    }
    throw std::invalid_argument(
        "sign_scan: no transform route for a general space with p < n-1");
}

/// Deterministic scan points on the positive-orthant section of the unit
/// sphere: a log-radial grid (coordinates 10^e, e on grid_levels levels in
/// [-3, 0], canonicalized so the largest exponent is 0) plus seeded random
/// directions. All coordinates are floored away from the axes.
inline std::vector<std::vector<double>> scan_points(int n, const ScanConfig& sc) {
    std::vector<std::vector<double>> pts;
    const int L = std::max(2, sc.grid_levels);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
        if (*std::max_element(idx.begin(), idx.end()) == L - 1) {
            std::vector<double> x(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k)
                x[static_cast<std::size_t>(k)] =
                    std::pow(10.0, -3.0 * (L - 1 - idx[static_cast<std::size_t>(k)]) / (L - 1));
            pts.push_back(std::move(x));
        }
        int k = 0;
        while (k < n && ++idx[static_cast<std::size_t>(k)] == L) idx[static_cast<std::size_t>(k++)] = 0;
        if (k == n) break;
    }
    for (int r = 0; r < sc.random_samples; ++r) {
        rng::Stream st = rng::derive(sc.seed, {0x5Cu, static_cast<std::uint64_t>(r)});
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = std::abs(st.next_gauss());
        pts.push_back(std::move(x));
    }
    for (auto& x : pts) {
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (double& v : x) v = std::max(v / nrm, sc.coord_floor);
        nrm = 0.0;
        for (double v : x) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (double& v : x) v /= nrm;
    }
    return pts;
}

} // namespace detail

struct ScanSample {
    std::vector<double> point;
    double value = 0.0;
    double err = 0.0;
};

/// Scan the transform over the orthant section and classify its sign.
/// `samples_out`, when given, receives every evaluated point in scan order.
inline SignScanReport sign_scan(const space::SpaceSpec& spec, double p,
                                const ScanConfig& sc = {},
                                const QuadratureConfig& cfg = {},
                                specfun::GammaQTable* shared_table = nullptr,
                                std::vector<ScanSample>* samples_out = nullptr) {
    space::validate(spec);
    const int n = space::dim(spec);
    if (!(p > 0.0 && p < n)) throw std::domain_error("sign_scan: requires 0 < p < n");

    specfun::GammaQTable local;
    specfun::GammaQTable* table = shared_table ? shared_table : &local;
    detail::Evaluator ev = detail::pick_evaluator(spec, p, cfg, table);
    auto pts = detail::scan_points(n, sc);

    SignScanReport rep;
    rep.space = spec;
    rep.p = p;
    rep.seed = sc.seed;
    rep.method = ev.method;
    rep.n_samples = static_cast<int>(pts.size());

    std::vector<double> values(pts.size()), errs(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        negft::TransformValue tv = ev.eval(pts[i]);
        values[i] = tv.value;
        errs[i] = tv.err_estimate;
        if (samples_out) samples_out->push_back(ScanSample{pts[i], tv.value, tv.err_estimate});
    }

    std::size_t imin = 0, imax = 0;
    double max_err = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (values[i] < values[imin]) imin = i;
        if (values[i] > values[imax]) imax = i;
        max_err = std::max(max_err, errs[i]);
    }
    rep.min_value = values[imin];
    rep.max_value = values[imax];
    rep.argmin = pts[imin];
    rep.argmax = pts[imax];
    rep.max_err = max_err;

    double tol = sc.decision_tol;
    if (tol <= 0.0) {
        std::vector<double> es = errs;
        std::sort(es.begin(), es.end());
        const double med = es[es.size() / 2];
        tol = std::max(1e-7, 10.0 * med);
    }
    rep.decision_tol = tol;

    const bool has_pos = values[imax] > tol + errs[imax];
    const bool has_neg = values[imin] < -(tol + errs[imin]);
    if (has_pos) rep.pos_witness = Witness{pts[imax], values[imax], errs[imax]};
    if (has_neg) rep.neg_witness = Witness{pts[imin], values[imin], errs[imin]};

    if (has_pos && has_neg)
        rep.verdict = Verdict::SignChange;
    else if (rep.min_value >= -(tol + max_err))
        rep.verdict = Verdict::AllNonnegative;
    else
        rep.verdict = Verdict::Inconclusive;

    if (const auto* lq = std::get_if<space::LqNorm>(&spec)) {
        if (lq->q > 2.0 && p == std::floor(p) && p >= n - 3 && p <= n - 1)
            rep.continuity_endpoint = true;
    }
    return rep;
}

struct CertificateReport {
    double q = 0.0;
    int n = 0;
    double p = 0.0;
    std::vector<double> alpha_pos, alpha_neg;
    double target_pos = 0.0, target_neg = 0.0;
    double I_pos = 0.0, I_neg = 0.0;
};

/// Analytic non-embedding certificate: moment products
///   I(alpha) = S_q(alpha_1) ... S_q(alpha_{n-1}) S_q(-sum alpha - p)
/// evaluated at targets 2 -+ eps, all alpha_i equal in (-1, 0).
/// Succeeds exactly when q > 2, n > 3, p < n-3 leave room around 2.
inline CertificateReport sign_change_certificate(double q, int n, double p) {
    if (!(q > 2.0)) throw std::domain_error("sign_change_certificate: requires q > 2");
    if (n <= 3) throw std::domain_error("sign_change_certificate: requires n > 3");
    if (!(p > 0.0)) throw std::domain_error("sign_change_certificate: requires p > 0");

    // the target interval (-p, n-1-p) ∩ (-1, q) must contain (2-eps, 2+eps)
    double eps = std::min({0.1, (q - 2.0) / 2.0, (n - 3.0 - p) / 2.0});
    if (!(eps > 1e-9))
        throw std::domain_error(
            "sign_change_certificate: infeasible alpha (parameters outside q > 2, "
            "n > 3, p in (0, n-3))");

    CertificateReport rep;
    rep.q = q;
    rep.n = n;
    rep.p = p;

    auto build = [&](double target, std::vector<double>& alphas) {
        const double each = (-p - target) / (n - 1);
        if (!(each > -1.0 && each < 0.0))
            throw std::domain_error("sign_change_certificate: infeasible alpha tuple");
        alphas.assign(static_cast<std::size_t>(n - 1), each);
        double I = specfun::stable_moment(q, target);
        for (int i = 0; i < n - 1; ++i) I *= specfun::stable_moment(q, each);
        return I;
    };

    rep.target_pos = 2.0 - eps;
    rep.target_neg = 2.0 + eps;
    rep.I_pos = build(rep.target_pos, rep.alpha_pos);
    rep.I_neg = build(rep.target_neg, rep.alpha_neg);
    return rep;
}

struct CriticalResult {
    double estimate = 0.0;
    double half_width = 0.0;
    bool transition_found = false;
    std::vector<std::pair<double, Verdict>> probes;
};

/// Bisection for the boundary exponent of the sign-change region in p,
/// assuming the single-transition dichotomy of l_q spaces with q > 2.
inline CriticalResult critical_exponent(const space::SpaceSpec& spec,
                                        const ScanConfig& sc = {},
                                        const QuadratureConfig& cfg = {},
                                        double target_width = 0.05) {
    const auto* lq = std::get_if<space::LqNorm>(&spec);
    if (!lq || !(lq->q > 2.0) || lq->n < 3)
        throw std::invalid_argument("critical_exponent: requires an l_q space, q > 2, n >= 3");
    const int n = lq->n;

    specfun::GammaQTable table;
    CriticalResult out;
    auto probe = [&](double p) {
        Verdict v = sign_scan(spec, p, sc, cfg, &table).verdict;
        if (v == Verdict::Inconclusive) {
            // widen: retry at a nearby exponent before giving up on the probe
            v = sign_scan(spec, p + 0.01, sc, cfg, &table).verdict;
        }
        out.probes.emplace_back(p, v);
        return v;
    };

    double lo = 0.05, hi = n - 0.05;
    Verdict vlo = probe(lo);
    if (vlo != Verdict::SignChange) {
        // no transition anywhere: confirm on a few interior probes
        bool any = false;
        for (double p : {0.25 * (lo + hi) + 0.25 * lo, 0.5 * (lo + hi), hi}) {
            if (probe(p) == Verdict::SignChange) {
                any = true;
                lo = p;
                break;
            }
        }
        if (!any) {
            out.estimate = lo;
            out.half_width = 0.0;
            out.transition_found = false;
            return out;
        }
    }
    Verdict vhi = probe(hi);
    if (vhi == Verdict::SignChange)
        throw std::runtime_error("critical_exponent: sign change persists at p ~ n");

    while (hi - lo > target_width) {
        const double mid = 0.5 * (lo + hi);
        if (probe(mid) == Verdict::SignChange)
            lo = mid;
        else
            hi = mid;
    }
    out.estimate = 0.5 * (lo + hi);
    out.half_width = 0.5 * (hi - lo);
    out.transition_found = true;
    return out;
}

} // namespace negembed::embedcheck
