#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "negembed/rng.hpp"
#include "negembed/space.hpp"

namespace negembed::stablesim {

inline constexpr double kZ99 = 2.5758293035489004; // two-sided 99% normal quantile

/// Standard symmetric q-stable variate with characteristic function
/// exp(-|t|^q), sampled by the Chambers-Mallows-Stuck construction.
/// q = 2 reduces to N(0, 2), q = 1 to the standard Cauchy.
inline double sample_standard_stable(double q, rng::Stream& st) {
    if (!(q > 0.0 && q <= 2.0))
        throw std::domain_error("sample_standard_stable: requires q in (0, 2]");
    const double U = 3.14159265358979323846 * (st.next_unit_open() - 0.5);
    const double W = -std::log(st.next_unit_open());
    if (q == 1.0) return std::tan(U);
    const double s = std::sin(q * U) / std::pow(std::cos(U), 1.0 / q);
    return s * std::pow(std::cos((1.0 - q) * U) / W, (1.0 - q) / q);
}

/// Jointly q-stable vector: X_i = sum_j s_ij U_j with U_j i.i.d. standard
/// q-stable, so the characteristic functional is exp(-sum_j |sum_i xi_i s_ij|^q)
/// -- the finite-atom spectral form. The decoupled Y keeps both block
/// marginals but draws the two blocks from independent atom sets.
struct StableSpec {
    double q = 1.0;
    space::Matrix atoms; // n x m
    int k = 1;           // block split: rows 0..k-1 vs k..n-1

    void validate() const {
        if (!(q > 0.0 && q <= 2.0)) throw std::invalid_argument("StableSpec: q must be in (0, 2]");
        if (atoms.rows < 2 || atoms.cols < 1)
            throw std::invalid_argument("StableSpec: atoms must be n x m with n >= 2");
        if (k < 1 || k >= atoms.rows)
            throw std::invalid_argument("StableSpec: k must satisfy 1 <= k < n");
    }
};

namespace detail {
inline constexpr std::uint64_t kStreamX = 0xA1;
inline constexpr std::uint64_t kStreamY1 = 0xB1;
inline constexpr std::uint64_t kStreamY2 = 0xB2;

inline void atoms_times(const space::Matrix& s, std::span<const double> u,
                        std::span<double> out, int row_begin, int row_end) {
    for (int i = row_begin; i < row_end; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s.cols; ++j) acc += s.at(i, j) * u[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = acc;
    }
}
} // namespace detail

inline void sample_X(const StableSpec& spec, std::uint64_t seed, long index,
                     std::span<double> out) {
    rng::Stream st = rng::derive(seed, {detail::kStreamX, static_cast<std::uint64_t>(index)});
    std::vector<double> u(static_cast<std::size_t>(spec.atoms.cols));
    for (auto& v : u) v = sample_standard_stable(spec.q, st);
    detail::atoms_times(spec.atoms, u, out, 0, spec.atoms.rows);
}

inline void sample_Y(const StableSpec& spec, std::uint64_t seed, long index,
                     std::span<double> out) {
    rng::Stream st1 = rng::derive(seed, {detail::kStreamY1, static_cast<std::uint64_t>(index)});
    rng::Stream st2 = rng::derive(seed, {detail::kStreamY2, static_cast<std::uint64_t>(index)});
    std::vector<double> u(static_cast<std::size_t>(spec.atoms.cols));
    for (auto& v : u) v = sample_standard_stable(spec.q, st1);
    detail::atoms_times(spec.atoms, u, out, 0, spec.k);
    for (auto& v : u) v = sample_standard_stable(spec.q, st2);
    detail::atoms_times(spec.atoms, u, out, spec.k, spec.atoms.rows);
}

enum class Estimator { mean, median_of_means };

inline const char* estimator_name(Estimator e) {
    return e == Estimator::mean ? "mean" : "median_of_means";
}

struct Estimate {
    double value = 0.0;
    double ci_half = 0.0; // 99% nominal half-width
    bool heuristic_ci = false;
    long n = 0;
    Estimator estimator = Estimator::mean;
    int partitions = 1;
};

namespace detail {

// fixed-order blockwise summation: bit-stable for a given partition count
inline double block_sum(std::span<const double> xs, int partitions) {
    const long n = static_cast<long>(xs.size());
    const long per = (n + partitions - 1) / partitions;
    double total = 0.0, comp = 0.0;
    for (int b = 0; b < partitions; ++b) {
        double s = 0.0;
        const long lo = b * per, hi = std::min(n, (b + 1) * per);
        for (long i = lo; i < hi; ++i) s += xs[static_cast<std::size_t>(i)];
        const double t = total + s;
        if (std::abs(total) >= std::abs(s))
            comp += (total - t) + s;
        else
            comp += (s - t) + total;
        total = t;
    }
    return total + comp;
}

} // namespace detail

/// Estimate E ||V||^{p_signed} from `values` = the precomputed powers.
inline Estimate summarize_powers(std::span<const double> values, Estimator est,
                                 int partitions = 64) {
    const long n = static_cast<long>(values.size());
    if (n < 4) throw std::invalid_argument("summarize_powers: need at least 4 samples");
    Estimate out;
    out.n = n;
    out.estimator = est;
    out.partitions = partitions;
    if (est == Estimator::mean) {
        const double mean = detail::block_sum(values, partitions) / static_cast<double>(n);
        std::vector<double> sq(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double d = values[i] - mean;
            sq[i] = d * d;
        }
        const double var =
            detail::block_sum(sq, partitions) / static_cast<double>(n - 1);
        out.value = mean;
        out.ci_half = kZ99 * std::sqrt(var / static_cast<double>(n));
        return out;
    }
    // median of 64 block means; the CI is a normal-approximation heuristic
    const int B = 64;
    const long per = (n + B - 1) / B;
    std::vector<double> means;
    means.reserve(B);
    for (int b = 0; b < B; ++b) {
        const long lo = b * per, hi = std::min(n, (b + 1) * per);
        if (lo >= hi) break;
        double s = 0.0;
        for (long i = lo; i < hi; ++i) s += values[static_cast<std::size_t>(i)];
        means.push_back(s / static_cast<double>(hi - lo));
    }
    std::sort(means.begin(), means.end());
    const std::size_t m = means.size();
    const double med = (m % 2 == 1) ? means[m / 2] : 0.5 * (means[m / 2 - 1] + means[m / 2]);
    double mu = 0.0;
    for (double v : means) mu += v;
    mu /= static_cast<double>(m);
    double sd = 0.0;
    for (double v : means) sd += (v - mu) * (v - mu);
    sd = std::sqrt(sd / static_cast<double>(m - 1));
    out.value = med;
    out.ci_half = kZ99 * 1.2533 * sd / std::sqrt(static_cast<double>(m));
    out.heuristic_ci = true;
    out.estimator = Estimator::median_of_means;
    out.partitions = B;
    return out;
}

/// Moment-existence and CI-honesty rules for E ||.||^{p_signed} of a q-stable
/// vector; returns the estimator to use (possibly forced to median_of_means).
inline Estimator check_exponent_regime(double q, int n, double p_signed,
                                       Estimator requested, bool* heuristic) {
    *heuristic = false;
    if (p_signed == 0.0) throw std::domain_error("exponent must be non-zero");
    if (p_signed > 0.0) {
        if (q < 2.0 && p_signed >= q)
            throw std::domain_error(
                "moment does not exist: positive exponent requires p < q when q < 2");
        if (q < 2.0 && 2.0 * p_signed >= q) {
            *heuristic = true;
            return Estimator::median_of_means;
        }
        return requested;
    }
    const double p = -p_signed;
    if (!(p < n))
        throw std::domain_error(
            "moment does not exist: negative exponent requires p < n for local "
            "integrability");
    if (2.0 * p >= n) {
        *heuristic = true;
        return Estimator::median_of_means;
    }
    return requested;
}

enum class InequalityVerdict { InequalityHolds, InequalityViolated, Inconclusive };

inline const char* inequality_verdict_name(InequalityVerdict v) {
    switch (v) {
        case InequalityVerdict::InequalityHolds: return "InequalityHolds";
        case InequalityVerdict::InequalityViolated: return "InequalityViolated";
        case InequalityVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct StableExperimentReport {
    space::SpaceSpec space;
    StableSpec spec;
    double p_signed = 0.0;
    long N = 0;
    std::uint64_t seed = 0;
    Estimate E_X, E_Y;
    Estimator estimator = Estimator::mean;
    int partitions = 64;
    // expected direction of the inequality for the regime:
    //   -p: E_X >= E_Y;  0 < p <= q: E_X <= E_Y;  q = 2, p > 2: E_X >= E_Y
    bool expect_X_ge_Y = true;
    InequalityVerdict verdict = InequalityVerdict::Inconclusive;
    std::string ci_method;
};

/// Block sign-flip symmetry ||(u, v)|| = ||(u, -v)|| at random probes.
inline bool symmetry_check(const space::SpaceSpec& spec, int k, int trials,
                           std::uint64_t seed) {
    const int n = space::dim(spec);
    if (k < 1 || k >= n) throw std::invalid_argument("symmetry_check: requires 1 <= k < n");
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int t = 0; t < trials; ++t) {
        rng::Stream st = rng::derive(seed, {0x57u, static_cast<std::uint64_t>(t)});
        for (auto& v : x) v = st.next_gauss();
        const double n1 = space::norm(spec, x);
        for (int i = k; i < n; ++i) x[static_cast<std::size_t>(i)] = -x[static_cast<std::size_t>(i)];
        const double n2 = space::norm(spec, x);
        const double scale = std::max({std::abs(n1), std::abs(n2), 1e-30});
        if (std::abs(n1 - n2) / scale > 1e-12) return false;
    }
    return true;
}

/// Paired-seed comparison of E||X||^{p_signed} and E||Y||^{p_signed}.
inline StableExperimentReport correlation_experiment(const space::SpaceSpec& sp,
                                                     const StableSpec& spec,
                                                     double p_signed, long N,
                                                     std::uint64_t seed,
                                                     Estimator requested = Estimator::mean) {
    spec.validate();
    space::validate(sp);
    const int n = space::dim(sp);
    if (n != spec.atoms.rows)
        throw std::invalid_argument("correlation_experiment: space/atoms dimension mismatch");
    if (!symmetry_check(sp, spec.k, 64, seed))
        throw std::invalid_argument(
            "correlation_experiment: the norm lacks the block sign-flip symmetry (*)");

    bool heuristic = false;
    Estimator est = check_exponent_regime(spec.q, n, p_signed, requested, &heuristic);

    std::vector<double> xs(static_cast<std::size_t>(N)), ys(static_cast<std::size_t>(N));
    std::vector<double> v(static_cast<std::size_t>(n));
    for (long i = 0; i < N; ++i) {
        sample_X(spec, seed, i, v);
        xs[static_cast<std::size_t>(i)] = std::pow(space::norm(sp, v), p_signed);
        sample_Y(spec, seed, i, v);
        ys[static_cast<std::size_t>(i)] = std::pow(space::norm(sp, v), p_signed);
    }

    StableExperimentReport rep;
    rep.space = sp;
    rep.spec = spec;
    rep.p_signed = p_signed;
    rep.N = N;
    rep.seed = seed;
    rep.estimator = est;
    rep.E_X = summarize_powers(xs, est);
    rep.E_Y = summarize_powers(ys, est);
    rep.partitions = rep.E_X.partitions;
    rep.ci_method = (est == Estimator::mean)
                        ? "normal 99% CI on the sample mean"
                        : "normal 99% CI on the median of 64 block means (heuristic)";
    if (heuristic) rep.E_X.heuristic_ci = rep.E_Y.heuristic_ci = true;

    if (p_signed < 0.0)
        rep.expect_X_ge_Y = true;
    else if (spec.q == 2.0 && p_signed > 2.0)
        rep.expect_X_ge_Y = true;
    else
        rep.expect_X_ge_Y = false;

    const double lo_x = rep.E_X.value - rep.E_X.ci_half, hi_x = rep.E_X.value + rep.E_X.ci_half;
    const double lo_y = rep.E_Y.value - rep.E_Y.ci_half, hi_y = rep.E_Y.value + rep.E_Y.ci_half;
    const bool x_above = lo_x > hi_y;
    const bool y_above = lo_y > hi_x;
    if (!x_above && !y_above)
        rep.verdict = InequalityVerdict::Inconclusive;
    else if (x_above == rep.expect_X_ge_Y)
        rep.verdict = InequalityVerdict::InequalityHolds;
    else
        rep.verdict = InequalityVerdict::InequalityViolated;
    return rep;
}

struct ClarksonResult {
    bool ineq11 = false; // exp(-||x+y||^q) + exp(-||x-y||^q) >= 2 exp(-||x||^q - ||y||^q)
    bool ineq12 = false; // ||x+y||^p + ||x-y||^p <= 2 (||x||^q + ||y||^q)^{p/q}
    bool ineq13 = false; // ||x+y||^q + ||x-y||^q <= 2 (||x||^q + ||y||^q)
    bool reversed12 = false;
};

/// Clarkson-type inequalities on coordinate vectors; (12) reverses for q = 2,
/// p > 2. Slack tolerance 1e-12 absorbs rounding.
inline ClarksonResult clarkson_check(std::span<const double> x, std::span<const double> y,
                                     double q, double p) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("clarkson_check: x, y must be same non-zero length");
    if (!(q > 0.0 && q <= 2.0)) throw std::domain_error("clarkson_check: requires q in (0, 2]");
    if (!(p > 0.0)) throw std::domain_error("clarkson_check: requires p > 0");
    const bool reversed = (q == 2.0 && p > 2.0);
    if (!reversed && p > q)
        throw std::domain_error("clarkson_check: (12) needs p <= q unless q = 2, p > 2");

    auto qq = [&](std::span<const double> v) {
        double s = 0.0;
        for (double t : v) s += std::pow(std::abs(t), q);
        return s;
    };
    std::vector<double> sum(x.size()), dif(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum[i] = x[i] + y[i];
        dif[i] = x[i] - y[i];
    }
    const double qs = qq(sum), qd = qq(dif), qx = qq(x), qy = qq(y);
    const double tol = 1e-12;

    ClarksonResult r;
    r.reversed12 = reversed;
    r.ineq11 = std::exp(-qs) + std::exp(-qd) >= 2.0 * std::exp(-qx - qy) - tol;
    r.ineq13 = qs + qd <= 2.0 * (qx + qy) + tol;
    const double lhs12 = std::pow(qs, p / q) + std::pow(qd, p / q);
    const double rhs12 = 2.0 * std::pow(qx + qy, p / q);
    r.ineq12 = reversed ? (lhs12 >= rhs12 - tol) : (lhs12 <= rhs12 + tol);
    return r;
}

} // namespace negembed::stablesim
