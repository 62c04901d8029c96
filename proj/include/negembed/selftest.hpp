#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "negembed/embedcheck.hpp"
#include "negembed/negft.hpp"
#include "negembed/reports.hpp"
#include "negembed/rng.hpp"
#include "negembed/space.hpp"
#include "negembed/specfun.hpp"
#include "negembed/stablesim.hpp"
#include "negembed/version.hpp"

namespace negembed::selftest {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail; // deterministic for fixed seeds; no timing inside
    double seconds = 0.0;
    double limit_seconds = 0.0;
};

struct Options {
    bool quick = false;
    std::string cli_path; // enables the subprocess determinism check (full mode)
};

namespace detail {

inline std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[192];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

inline double now_minus(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline double pick_noninteger(rng::Stream& st, double lo, double hi) {
    double p;
    do {
        p = lo + (hi - lo) * st.next_unit();
    } while (std::abs(p - std::round(p)) < 1e-2);
    return p;
}

inline std::string run_capture(const std::string& cmd) {
    std::string out;
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return out;
    char buf[4096];
    std::size_t k;
    while ((k = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, k);
    pclose(f);
    return out;
}

} // namespace detail

/// 1. Special-function oracles: gamma_q closed forms, S_2(1), S_q sign grid.
inline CriterionResult criterion1(bool) {
    CriterionResult r{1, "special function oracles", false, "", 0.0, 5.0};
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i <= 40; ++i) {
        const double t = 0.5 * i;
        const double g1 = specfun::gamma_q(1.0, t);
        const double e1 = 2.0 / (1.0 + t * t);
        worst = std::max(worst, std::abs(g1 - e1) / e1);
        const double g2 = specfun::gamma_q(2.0, t);
        const double e2 = specfun::kSqrtPi * std::exp(-t * t / 4.0);
        worst = std::max(worst, std::abs(g2 - e2) / e2);
    }
    ok = ok && worst <= 1e-8;

    const double s21 = specfun::stable_moment(2.0, 1.0);
    const double s21_rel = std::abs(s21 - 7.0898154036220635766) / 7.0898154036220635766;
    ok = ok && s21_rel <= 1e-10;

    bool grid_ok = true;
    for (double q : {2.5, 3.0, 4.7, 8.0}) {
        for (double a : {-0.5, 0.7, 1.9, 2.1, 2.9}) {
            if (!(a > -1.0 && a < q)) {
                try {
                    (void)specfun::stable_moment(q, a);
                    grid_ok = false;
                } catch (const std::domain_error&) {
                }
                continue;
            }
            const double v = specfun::stable_moment(q, a);
            if (a < 2.0 && !(v > 0.0)) grid_ok = false;
            if (a > 2.0 && a < std::min(q, 4.0) && !(v < 0.0)) grid_ok = false;
        }
    }
    ok = ok && grid_ok;

    r.seconds = detail::now_minus(t0);
    r.pass = ok && r.seconds < r.limit_seconds;
    r.detail = detail::fmt("gamma_q rel err %.3g; S_2(1) rel err %.3g; sign grid ", worst,
                           s21_rel) +
               (grid_ok ? "ok" : "BROKEN");
    return r;
}

/// 2. Cross-method agreement between the closed form and the oscillatory
///    quadrature on random (n, p, xi).
inline CriterionResult criterion2(bool quick) {
    CriterionResult r{2, "closed vs quadrature agreement", false, "", 0.0, 120.0};
    const auto t0 = std::chrono::steady_clock::now();
    const int cases = quick ? 20 : 100;
    rng::Stream st = rng::derive(0xC0FFEE, {2});
    int good = 0;
    for (int i = 0; i < cases; ++i) {
        const int n = 2 + static_cast<int>(st.next_unit() * 4.0);
        const double p = detail::pick_noninteger(st, 0.2, n - 0.2);
        std::vector<double> xi(static_cast<std::size_t>(n));
        for (auto& v : xi) v = 0.2 + 2.8 * st.next_unit();
        auto c = negft::ft_linf_closed(p, xi);
        QuadratureConfig cfg;
        auto q = negft::ft_linf_quadrature(p, xi, cfg);
        bool pass_i = std::abs(c.value - q.value) <= c.err_estimate + q.err_estimate;
        if (!pass_i) {
            QuadratureConfig tight;
            tight.rel_tol = 1e-10;
            tight.abs_tol = 1e-14;
            auto q2 = negft::ft_linf_quadrature(p, xi, tight);
            pass_i = std::abs(c.value - q2.value) <= c.err_estimate + q2.err_estimate;
        }
        if (pass_i) ++good;
    }
    r.seconds = detail::now_minus(t0);
    r.pass = good >= cases - 1 && r.seconds < r.limit_seconds;
    r.detail = detail::fmt("%.0f of %.0f cases agree within summed error bounds",
                           static_cast<double>(good), static_cast<double>(cases));
    return r;
}

/// 3. Riesz-kernel oracle for the q = 2 route.
inline CriterionResult criterion3(bool quick) {
    CriterionResult r{3, "Riesz kernel oracle (q = 2)", false, "", 0.0, 60.0};
    const auto t0 = std::chrono::steady_clock::now();
    const int cases = quick ? 5 : 20;
    rng::Stream st = rng::derive(0xC0FFEE, {3});
    double worst = 0.0;
    for (int i = 0; i < cases; ++i) {
        const int n = 2 + i % 3;
        const double p = detail::pick_noninteger(st, 0.2, n - 0.2);
        std::vector<double> xi(static_cast<std::size_t>(n));
        for (auto& v : xi) v = 0.2 + 2.8 * st.next_unit();
        QuadratureConfig cfg;
        auto tv = negft::ft_lq_quadrature(2.0, p, xi, cfg);
        auto oracle = negft::riesz_closed(p, xi);
        worst = std::max(worst, std::abs(tv.value - oracle.value) / std::abs(oracle.value));
    }
    r.seconds = detail::now_minus(t0);
    r.pass = worst <= 1e-6 && r.seconds < r.limit_seconds;
    r.detail = detail::fmt("worst rel err %.3g over %.0f cases", worst,
                           static_cast<double>(cases));
    return r;
}

/// 4. Monte Carlo l_inf reduction consistent with the l_q quadrature (q = 3).
inline CriterionResult criterion4(bool quick) {
    CriterionResult r{4, "l_q via l_inf reduction consistency", false, "", 0.0, 120.0};
    const auto t0 = std::chrono::steady_clock::now();
    const int cases = quick ? 2 : 5;
    rng::Stream st = rng::derive(0xC0FFEE, {4});
    int good = 0;
    specfun::GammaQTable table;
    for (int i = 0; i < cases; ++i) {
        const double p = detail::pick_noninteger(st, 0.3, 2.7);
        std::vector<double> xi(3);
        for (auto& v : xi) v = 0.5 + 1.5 * st.next_unit();
        QuadratureConfig cfg;
        cfg.mc_samples = quick ? 200000 : 1000000;
        auto mc = negft::ft_lq_via_linf(3.0, p, xi, cfg, 0xAB5EED + i);
        auto qd = negft::ft_lq_quadrature(3.0, p, xi, cfg, &table);
        if (std::abs(mc.value - qd.value) <= mc.err_estimate + qd.err_estimate) ++good;
    }
    r.seconds = detail::now_minus(t0);
    r.pass = good == cases && r.seconds < r.limit_seconds;
    r.detail = detail::fmt("%.0f of %.0f cases inside 3-sigma bands",
                           static_cast<double>(good), static_cast<double>(cases));
    return r;
}

/// 5. Sign tables for u_{n,p} plus scan witnesses below the window.
inline CriterionResult criterion5(bool quick) {
    CriterionResult r{5, "sign tables and witnesses", false, "", 0.0, 60.0};
    const auto t0 = std::chrono::steady_clock::now();
    const int pts = quick ? 100 : 1000;
    rng::Stream st = rng::derive(0xC0FFEE, {5});
    bool table_ok = true;
    for (int n = 2; n <= 5 && table_ok; ++n) {
        for (int i = 0; i < pts; ++i) {
            std::vector<double> xi(static_cast<std::size_t>(n));
            for (auto& v : xi) v = 0.05 + 5.0 * st.next_unit();
            const double p_pos = detail::pick_noninteger(st, n - 2.0 + 1e-3, n - 1e-3);
            const double p_neg = detail::pick_noninteger(st, n - 3.0 + 1e-3, n - 2.0 - 1e-3);
            if (!(negft::u_np(p_pos, xi) > 0.0) || !(negft::u_np(p_neg, xi) < 0.0)) {
                table_ok = false;
                break;
            }
        }
    }

    bool witness_ok = true;
    embedcheck::ScanConfig sc;
    sc.seed = 5;
    std::vector<std::pair<int, double>> scans = {{4, 0.5}};
    if (!quick) {
        scans.push_back({5, 0.5});
        scans.push_back({5, 1.5});
    }
    for (auto [n, p] : scans) {
        auto rep = embedcheck::sign_scan(space::SpaceSpec(space::LqNorm{space::kInf, n}), p, sc);
        if (rep.verdict != embedcheck::Verdict::SignChange || !rep.pos_witness ||
            !rep.neg_witness)
            witness_ok = false;
    }
    r.seconds = detail::now_minus(t0);
    r.pass = table_ok && witness_ok && r.seconds < r.limit_seconds;
    r.detail = std::string("sign table ") + (table_ok ? "ok" : "BROKEN") + "; witnesses " +
               (witness_ok ? "found" : "MISSING");
    return r;
}

/// 6. Boundary reproduction via bisection: l_inf^4 -> 1, l_3^5 -> 2,
///    no transition for l_inf^3. Quick mode replaces the l_3^5 bisection
///    with two probes bracketing the boundary.
inline CriterionResult criterion6(bool quick) {
    CriterionResult r{6, "critical exponent boundaries", false, "", 0.0, 600.0};
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string notes;

    auto r4 = embedcheck::critical_exponent(space::SpaceSpec(space::LqNorm{space::kInf, 4}));
    ok = ok && r4.transition_found && std::abs(r4.estimate - 1.0) <= 0.05;
    notes += detail::fmt("linf^4 -> %.4f; ", r4.estimate);

    auto r3 = embedcheck::critical_exponent(space::SpaceSpec(space::LqNorm{space::kInf, 3}));
    ok = ok && !r3.transition_found;
    notes += r3.transition_found ? "linf^3 SPURIOUS transition; " : "linf^3 no transition; ";

    if (quick) {
        embedcheck::ScanConfig sc;
        sc.grid_levels = 5;
        sc.random_samples = 64;
        specfun::GammaQTable table;
        auto below = embedcheck::sign_scan(space::SpaceSpec(space::LqNorm{3.0, 5}), 1.8, sc,
                                           QuadratureConfig{}, &table);
        auto above = embedcheck::sign_scan(space::SpaceSpec(space::LqNorm{3.0, 5}), 2.2, sc,
                                           QuadratureConfig{}, &table);
        ok = ok && below.verdict == embedcheck::Verdict::SignChange &&
             above.verdict == embedcheck::Verdict::AllNonnegative;
        notes += "l3^5 bracket probes";
    } else {
        auto r5 = embedcheck::critical_exponent(space::SpaceSpec(space::LqNorm{3.0, 5}));
        ok = ok && r5.transition_found && std::abs(r5.estimate - 2.0) <= 0.05;
        notes += detail::fmt("l3^5 -> %.4f", r5.estimate);
    }

    r.seconds = detail::now_minus(t0);
    r.pass = ok && r.seconds < r.limit_seconds;
    r.detail = notes;
    return r;
}

/// 7. Sphere route: nonnegative on random spectral norms in the [n-1, n)
///    window and matching the l_inf closed form.
inline CriterionResult criterion7(bool quick) {
    CriterionResult r{7, "sphere-integral route", false, "", 0.0, 120.0};
    const auto t0 = std::chrono::steady_clock::now();
    rng::Stream st = rng::derive(0xC0FFEE, {7});
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-7;
    bool ok = true;
    const int norms = quick ? 3 : 10;
    std::vector<double> ps = quick ? std::vector<double>{2.5} : std::vector<double>{2.0, 2.5, 2.9};
    double most_negative = 0.0;
    for (int i = 0; i < norms; ++i) {
        space::Matrix atoms(3, 5);
        for (int row = 0; row < 3; ++row)
            for (int col = 0; col < 5; ++col)
                atoms.at(row, col) = (col == row ? 1.0 : 0.0) + (st.next_unit() - 0.5);
        const double rr = 0.5 + 1.5 * st.next_unit();
        space::SpaceSpec sp = space::SpectralSubspace{atoms, rr};
        std::vector<double> xi(3);
        for (auto& v : xi) v = -1.0 + 2.0 * st.next_unit();
        double nrm = 0.0;
        for (double v : xi) nrm += v * v;
        if (nrm < 0.01) xi[0] += 1.0;
        for (double p : ps) {
            auto tv = negft::ft_sphere(sp, p, xi, cfg);
            most_negative = std::min(most_negative, tv.value + tv.err_estimate);
            if (tv.value < -(tv.err_estimate + 1e-9)) ok = false;
        }
    }

    auto tv = negft::ft_sphere(space::SpaceSpec(space::LqNorm{space::kInf, 3}), 2.3,
                               std::vector<double>{1.0, 0.5, 2.0}, cfg);
    auto cl = negft::ft_linf_closed(2.3, std::vector<double>{1.0, 0.5, 2.0});
    const double rel = std::abs(tv.value - cl.value) / std::abs(cl.value);
    ok = ok && rel <= 1e-4;

    r.seconds = detail::now_minus(t0);
    r.pass = ok && r.seconds < r.limit_seconds;
    r.detail = detail::fmt("l_inf match rel err %.3g; min spectral value+err %.3g", rel,
                           most_negative);
    return r;
}

/// 8. Analytic sign-change certificates.
inline CriterionResult criterion8(bool) {
    CriterionResult r{8, "moment-product certificates", false, "", 0.0, 1.0};
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    const double qs[3] = {3.0, 4.5, 8.0};
    const int ns[3] = {5, 6, 5};
    const double pvals[3] = {0.5, 1.0, 1.5};
    for (int i = 0; i < 3; ++i) {
        auto c = embedcheck::sign_change_certificate(qs[i], ns[i], pvals[i]);
        if (!(c.I_pos > 0.0 && c.I_neg < 0.0)) ok = false;
    }
    r.seconds = detail::now_minus(t0);
    r.pass = ok && r.seconds < r.limit_seconds;
    r.detail = ok ? "I_pos > 0 and I_neg < 0 for all three (q, n, p)" : "certificate FAILED";
    return r;
}

/// 9. Stable law pinning through the empirical characteristic function.
inline CriterionResult criterion9(bool quick) {
    CriterionResult r{9, "stable sampler law", false, "", 0.0, 60.0};
    const auto t0 = std::chrono::steady_clock::now();
    const long N = quick ? 200000 : 1000000;
    const double band = 3.0 / std::sqrt(static_cast<double>(N));
    double worst = 0.0;
    for (double q : {0.8, 1.0, 1.5, 2.0}) {
        double s[3] = {0.0, 0.0, 0.0};
        const double ts[3] = {0.5, 1.0, 2.0};
        for (long i = 0; i < N; ++i) {
            rng::Stream st = rng::derive(0xC0FFEE ^ 9, {static_cast<std::uint64_t>(q * 1000.0),
                                                        static_cast<std::uint64_t>(i)});
            const double x = stablesim::sample_standard_stable(q, st);
            for (int j = 0; j < 3; ++j) s[j] += std::cos(ts[j] * x);
        }
        for (int j = 0; j < 3; ++j) {
            const double dev = std::abs(s[j] / N - std::exp(-std::pow(ts[j], q)));
            worst = std::max(worst, dev / band);
        }
    }
    r.seconds = detail::now_minus(t0);
    r.pass = worst <= 1.0 && r.seconds < r.limit_seconds;
    r.detail = detail::fmt("worst deviation %.3g of the 3/sqrt(N) band", worst);
    return r;
}

namespace detail {

inline stablesim::StableExperimentReport corr(double q_stable, const space::SpaceSpec& sp,
                                              int n, int k, double p_signed, long N,
                                              std::uint64_t seed) {
    stablesim::StableSpec spec;
    spec.q = q_stable;
    spec.atoms = space::coupled_atoms(n);
    spec.k = k;
    return stablesim::correlation_experiment(sp, spec, p_signed, N, seed);
}

} // namespace detail

/// 10. Negative-moment coupling direction with the coupled preset over
///     four configurations.
inline CriterionResult criterion10(bool quick) {
    CriterionResult r{10, "negative-moment correlation inequality", false, "", 0.0, 300.0};
    const auto t0 = std::chrono::steady_clock::now();
    const long N = quick ? 50000 : 200000;
    const long N_rerun = quick ? 200000 : 1000000;
    struct Config {
        double q;
        double space_q;
    };
    std::vector<Config> configs = {{1.5, space::kInf}, {2.0, space::kInf}};
    if (!quick) {
        configs.push_back({1.5, 3.0});
        configs.push_back({2.0, 3.0});
    }
    int holds = 0, pre_inconclusive = 0, violated = 0, unresolved = 0;
    for (const auto& c : configs) {
        space::SpaceSpec sp = space::LqNorm{c.space_q, 4};
        auto rep = detail::corr(c.q, sp, 4, 2, -1.5, N, 42);
        if (rep.verdict == stablesim::InequalityVerdict::Inconclusive) {
            ++pre_inconclusive;
            rep = detail::corr(c.q, sp, 4, 2, -1.5, N_rerun, 43);
        }
        switch (rep.verdict) {
            case stablesim::InequalityVerdict::InequalityHolds: ++holds; break;
            case stablesim::InequalityVerdict::Inconclusive: ++unresolved; break;
            case stablesim::InequalityVerdict::InequalityViolated: ++violated; break;
        }
    }
    r.seconds = detail::now_minus(t0);
    const int total = static_cast<int>(configs.size());
    // at most one configuration may need the larger rerun, and afterwards
    // every one must resolve to the inequality holding
    r.pass = violated == 0 && pre_inconclusive <= 1 && holds == total &&
             r.seconds < r.limit_seconds;
    r.detail = detail::fmt("%.0f of %.0f hold (%.0f needed a rerun)",
                           static_cast<double>(holds), static_cast<double>(total),
                           static_cast<double>(pre_inconclusive)) +
               (violated ? "; VIOLATION seen" : "") + (unresolved ? "; still inconclusive" : "");
    return r;
}

/// 11. Positive-moment directions: the l_1 case may sit at exact equality
///    (the l_1 mean depends only on the marginals), so it must merely never
///    be violated; the reversed l_2, p = 3 case must resolve.
inline CriterionResult criterion11(bool quick) {
    CriterionResult r{11, "positive-moment correlation directions", false, "", 0.0, 180.0};
    const auto t0 = std::chrono::steady_clock::now();
    const long N = quick ? 50000 : 200000;
    const long N_rerun = quick ? 200000 : 1000000;

    auto ra = detail::corr(2.0, space::SpaceSpec(space::LqNorm{1.0, 3}), 3, 1, 1.0, N, 42);
    const bool a_ok = ra.verdict != stablesim::InequalityVerdict::InequalityViolated;

    auto rb = detail::corr(2.0, space::SpaceSpec(space::LqNorm{2.0, 3}), 3, 1, 3.0, N, 42);
    if (rb.verdict == stablesim::InequalityVerdict::Inconclusive)
        rb = detail::corr(2.0, space::SpaceSpec(space::LqNorm{2.0, 3}), 3, 1, 3.0, N_rerun, 43);
    const bool b_ok = rb.verdict == stablesim::InequalityVerdict::InequalityHolds;

    r.seconds = detail::now_minus(t0);
    r.pass = a_ok && b_ok && r.seconds < r.limit_seconds;
    r.detail = std::string("l1^3 p=+1 ") + (a_ok ? "consistent" : "VIOLATED") +
               "; l2^3 p=+3 " + (b_ok ? "resolved X >= Y" : "UNRESOLVED");
    return r;
}

/// 12. Clarkson inequality property suite.
inline CriterionResult criterion12(bool quick) {
    CriterionResult r{12, "Clarkson inequality suite", false, "", 0.0, 10.0};
    const auto t0 = std::chrono::steady_clock::now();
    rng::Stream st = rng::derive(0xC0FFEE, {12});
    const int cases = quick ? 1000 : 10000;
    const int rev_cases = quick ? 200 : 1000;
    bool ok = true;
    for (int i = 0; i < cases && ok; ++i) {
        const int m = 1 + static_cast<int>(st.next_unit() * 6.0);
        std::vector<double> a(static_cast<std::size_t>(m)), b(static_cast<std::size_t>(m));
        for (auto& v : a) v = -2.0 + 4.0 * st.next_unit();
        for (auto& v : b) v = -2.0 + 4.0 * st.next_unit();
        const double q = 0.05 + 1.95 * st.next_unit();
        const double p = q * (0.05 + 0.95 * st.next_unit());
        auto c = stablesim::clarkson_check(a, b, q, p);
        ok = c.ineq11 && c.ineq12 && c.ineq13;
    }
    for (int i = 0; i < rev_cases && ok; ++i) {
        std::vector<double> a(4), b(4);
        for (auto& v : a) v = -2.0 + 4.0 * st.next_unit();
        for (auto& v : b) v = -2.0 + 4.0 * st.next_unit();
        auto c = stablesim::clarkson_check(a, b, 2.0, 3.0);
        ok = c.reversed12 && c.ineq12 && c.ineq11 && c.ineq13;
    }
    r.seconds = detail::now_minus(t0);
    r.pass = ok && r.seconds < r.limit_seconds;
    r.detail = ok ? detail::fmt("all %.0f + %.0f reversal cases hold",
                                static_cast<double>(cases), static_cast<double>(rev_cases))
                  : "inequality FAILED";
    return r;
}

/// 13. Determinism. Full mode re-runs `selftest --quick` through the CLI and
///    compares bytes; without a CLI path (and in quick mode) representative
///    reports are regenerated in-process and compared byte for byte.
inline CriterionResult criterion13(const Options& opt) {
    CriterionResult r{13, "byte-identical reruns", false, "", 0.0, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    if (!opt.quick && !opt.cli_path.empty()) {
        const std::string cmd = "'" + opt.cli_path + "' selftest --quick 2>/dev/null";
        const std::string out1 = detail::run_capture(cmd);
        const std::string out2 = detail::run_capture(cmd);
        r.pass = !out1.empty() && out1 == out2;
        r.detail = r.pass ? "two selftest --quick runs byte-identical"
                          : "selftest --quick runs DIFFER";
    } else {
        auto snapshot = [] {
            embedcheck::ScanConfig sc;
            sc.seed = 13;
            sc.grid_levels = 4;
            sc.random_samples = 16;
            auto scan = embedcheck::sign_scan(
                space::SpaceSpec(space::LqNorm{space::kInf, 4}), 0.5, sc);
            stablesim::StableSpec spec;
            spec.q = 1.5;
            spec.atoms = space::coupled_atoms(4);
            spec.k = 2;
            auto exp = stablesim::correlation_experiment(
                space::SpaceSpec(space::LqNorm{space::kInf, 4}), spec, -1.5, 20000, 13);
            QuadratureConfig cfg;
            auto tv = negft::ft_linf_quadrature(1.3, std::vector<double>{0.7, 1.1, 2.3}, cfg);
            return reports::signscan_json(scan).dump_line() +
                   reports::experiment_json(exp).dump_line() +
                   reports::transform_json(tv).dump_line();
        };
        r.pass = snapshot() == snapshot();
        r.detail = r.pass ? "regenerated reports byte-identical" : "report bytes DIFFER";
    }
    r.seconds = detail::now_minus(t0);
    return r;
}

inline std::vector<CriterionResult> run_all(const Options& opt) {
    std::vector<CriterionResult> out;
    out.push_back(criterion1(opt.quick));
    out.push_back(criterion2(opt.quick));
    out.push_back(criterion3(opt.quick));
    out.push_back(criterion4(opt.quick));
    out.push_back(criterion5(opt.quick));
    out.push_back(criterion6(opt.quick));
    out.push_back(criterion7(opt.quick));
    out.push_back(criterion8(opt.quick));
    out.push_back(criterion9(opt.quick));
    out.push_back(criterion10(opt.quick));
    out.push_back(criterion11(opt.quick));
    out.push_back(criterion12(opt.quick));
    out.push_back(criterion13(opt));
    return out;
}

inline json::Value summary_json(const std::vector<CriterionResult>& rs, bool quick) {
    json::Value v = json::Value::object();
    bool all = true;
    json::Value arr = json::Value::array();
    for (const auto& r : rs) {
        all = all && r.pass;
        json::Value c = json::Value::object();
        c["id"] = static_cast<long>(r.id);
        c["name"] = r.name;
        c["pass"] = r.pass;
        c["detail"] = r.detail;
        arr.push_back(std::move(c));
    }
    v["all_pass"] = all;
    v["criteria"] = std::move(arr);
    v["mode"] = quick ? "quick" : "full";
    v["version"] = kVersion;
    return v;
}

} // namespace negembed::selftest
