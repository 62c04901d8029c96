#include "doctest.h"

#include <array>
#include <cmath>
#include <vector>

#include "negembed/negft.hpp"
#include "negembed/rng.hpp"

using namespace negembed;
namespace nf = negembed::negft;
namespace sf = negembed::specfun;

namespace {
std::vector<double> vec(std::initializer_list<double> xs) { return std::vector<double>(xs); }
} // namespace

TEST_CASE("sign sums: hand-checked values") {
    CHECK(nf::h_np(1.0, vec({1.0, 1.0})) == doctest::Approx(4.0).epsilon(1e-14));
    // full sum over delta kills h for odd n and g for even n
    CHECK(nf::h_np(0.7, vec({3.0, 1.0, 1.0})) == doctest::Approx(0.0));
    CHECK(nf::g_np(0.7, vec({3.0, 1.0})) == doctest::Approx(0.0));
}

TEST_CASE("sign sums: known sign witnesses at n = 3, p < 0") {
    CHECK(nf::g_np(-0.5, vec({3.0, 1.0, 1.0})) > 0.0);
    CHECK(nf::g_np(-0.5, vec({1.0, 3.0, 3.0})) < 0.0);
}

TEST_CASE("sign sums: positive/negative bands for u_{n,p}") {
    CHECK(nf::g_np(2.5, vec({1.0, 1.0, 1.0})) > 0.0);            // n=3, p in (n-2, n)
    CHECK(nf::h_np(2.5, vec({1.0, 2.0, 0.5, 0.7})) > 0.0);       // n=4, p in (n-2, n)
    CHECK(nf::h_np(1.5, vec({1.0, 2.0, 0.5, 0.7})) < 0.0);       // n=4, p in (n-3, n-2)

    rng::Stream st = rng::derive(777, {2});
    for (int n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> xi(static_cast<std::size_t>(n));
            for (auto& v : xi) v = 0.05 + 4.0 * st.next_unit();
            auto pick = [&](double lo, double hi) {
                double p;
                do {
                    p = lo + (hi - lo) * st.next_unit();
                } while (std::abs(p - std::round(p)) < 1e-3 || p <= lo + 1e-3 || p >= hi - 1e-3);
                return p;
            };
            const double p_pos = pick(n - 2.0, n);
            CHECK(nf::u_np(p_pos, xi) > 0.0);
            const double p_neg = pick(n - 3.0, n - 2.0);
            CHECK(nf::u_np(p_neg, xi) < 0.0);
        }
    }
}

TEST_CASE("closed l_inf transform: 1-d reduction equals the dual constant") {
    // (|x|^{-p})^ = c_{-p} |xi|^{p-1}
    for (double p : {0.5, 0.3, 0.8}) {
        for (double xi : {2.0, 0.7}) {
            const double expected = sf::c_p(-p) * std::pow(xi, p - 1.0);
            auto tv = nf::ft_linf_closed(p, vec({xi}));
            CHECK(tv.value == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("closed l_inf transform: nonnegative inside [n-3, n), sign change below") {
    auto a = nf::ft_linf_closed(1.5, vec({1.0, 1.0, 1.0}));
    CHECK(a.value >= 0.0);

    // n = 4, p = 0.5 < n-3: the (small,3,1,1) and (small,1,3,3) patterns take opposite signs
    auto w1 = nf::ft_linf_closed(0.5, vec({0.05, 3.0, 1.0, 1.0}));
    auto w2 = nf::ft_linf_closed(0.5, vec({0.05, 1.0, 3.0, 3.0}));
    CHECK(w1.value * w2.value < 0.0);
}

TEST_CASE("closed l_inf transform: rejects integer p and zero coordinates") {
    CHECK_THROWS_AS(nf::ft_linf_closed(2.0, vec({1.0, 1.0, 1.0})), std::domain_error);
    CHECK_THROWS_AS(nf::ft_linf_closed(1.5, vec({1.0, 0.0, 1.0})), std::invalid_argument);
}

TEST_CASE("l_inf quadrature agrees with the closed form") {
    QuadratureConfig cfg;
    auto c = nf::ft_linf_closed(1.3, vec({0.7, 1.1, 2.3}));
    auto q = nf::ft_linf_quadrature(1.3, vec({0.7, 1.1, 2.3}), cfg);
    CHECK(q.converged);
    CHECK(std::abs(c.value - q.value) <= c.err_estimate + q.err_estimate);
}

TEST_CASE("l_inf quadrature: random cross-method agreement") {
    QuadratureConfig cfg;
    rng::Stream st = rng::derive(31415, {7});
    for (int rep = 0; rep < 24; ++rep) {
        const int n = 2 + static_cast<int>(st.next_unit() * 4.0);
        double p;
        do {
            p = 0.2 + (n - 0.4) * st.next_unit();
        } while (std::abs(p - std::round(p)) < 1e-2);
        std::vector<double> xi(static_cast<std::size_t>(n));
        for (auto& v : xi) v = 0.2 + 2.8 * st.next_unit();
        auto c = nf::ft_linf_closed(p, xi);
        auto q = nf::ft_linf_quadrature(p, xi, cfg);
        INFO("n=" << n << " p=" << p);
        CHECK(std::abs(c.value - q.value) <= c.err_estimate + q.err_estimate);
    }
}

TEST_CASE("l_inf quadrature: homogeneity and integer-p support") {
    QuadratureConfig cfg;
    std::vector<double> xi = vec({1.0, 0.8, 1.7, 0.4});
    std::vector<double> xi2 = xi;
    for (auto& v : xi2) v *= 2.0;
    const double p = 2.5;
    auto a = nf::ft_linf_quadrature(p, xi, cfg);
    auto b = nf::ft_linf_quadrature(p, xi2, cfg);
    const double scale = std::pow(2.0, p - 4.0);
    CHECK(std::abs(b.value - scale * a.value) <=
          2.0 * (b.err_estimate + scale * a.err_estimate) + 1e-12);

    auto c = nf::ft_linf_quadrature(1.0, vec({1.0, 1.0}), cfg); // integer p is fine here
    CHECK(std::isfinite(c.value));
    CHECK(c.converged);
}

TEST_CASE("coordinate symmetry: sign flips and permutations leave the value") {
    QuadratureConfig cfg;
    auto a = nf::ft_linf_quadrature(1.7, vec({0.5, 1.2, 2.0}), cfg);
    auto b = nf::ft_linf_quadrature(1.7, vec({-0.5, 2.0, -1.2}), cfg);
    CHECK(std::abs(a.value - b.value) <= a.err_estimate + b.err_estimate + 1e-13);

    auto c = nf::ft_linf_closed(0.9, vec({0.5, 1.2, 2.0}));
    auto d = nf::ft_linf_closed(0.9, vec({-1.2, 0.5, -2.0}));
    CHECK(c.value == doctest::Approx(d.value).epsilon(1e-12));
}

TEST_CASE("l_q route reproduces the Riesz kernel at q = 2") {
    QuadratureConfig cfg;
    auto tv = nf::ft_lq_quadrature(2.0, 1.5, vec({1.0, 2.0, 2.0}), cfg);
    auto oracle = nf::riesz_closed(1.5, vec({1.0, 2.0, 2.0}));
    CHECK(tv.converged);
    CHECK(std::abs(tv.value - oracle.value) <= 1e-6 * std::abs(oracle.value));
}

TEST_CASE("l_q route: q = 3 positivity inside [n-3, n)") {
    QuadratureConfig cfg;
    auto tv = nf::ft_lq_quadrature(3.0, 4.2, vec({1.0, 1.0, 1.0, 1.0, 1.0}), cfg);
    CHECK(tv.value >= -tv.err_estimate);
}

TEST_CASE("l_q route: q = 1 closed gamma and homogeneity") {
    QuadratureConfig cfg;
    std::vector<double> xi = vec({0.5, 1.0, 1.5});
    auto a = nf::ft_lq_quadrature(1.0, 1.2, xi, cfg);
    std::vector<double> xi3 = xi;
    for (auto& v : xi3) v *= 3.0;
    auto b = nf::ft_lq_quadrature(1.0, 1.2, xi3, cfg);
    const double scale = std::pow(3.0, 1.2 - 3.0);
    CHECK(std::abs(b.value - scale * a.value) <=
          2.0 * (b.err_estimate + scale * a.err_estimate) + 1e-12);
}

TEST_CASE("Monte Carlo reduction agrees with the l_q quadrature") {
    QuadratureConfig cfg;
    cfg.mc_samples = 200000;
    auto mc = nf::ft_lq_via_linf(3.0, 1.5, vec({1.0, 1.0, 2.0}), cfg, 99);
    auto qd = nf::ft_lq_quadrature(3.0, 1.5, vec({1.0, 1.0, 2.0}), cfg);
    CHECK(std::abs(mc.value - qd.value) <= mc.err_estimate + qd.err_estimate);

    auto mc2 = nf::ft_lq_via_linf(2.0, 1.3, vec({1.0, 0.7, 1.4}), cfg, 7);
    auto rz = nf::riesz_closed(1.3, vec({1.0, 0.7, 1.4}));
    CHECK(std::abs(mc2.value - rz.value) <= mc2.err_estimate + rz.err_estimate);

    auto mc3 = nf::ft_lq_via_linf(4.0, 2.5, vec({1.0, 1.0, 1.0, 1.0}), cfg, 5);
    CHECK(mc3.value > 0.0);
}

TEST_CASE("sphere route: l_2 matches Riesz for n = 2, 3") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-7;
    {
        space::SpaceSpec s = space::LqNorm{2.0, 3};
        auto tv = nf::ft_sphere(s, 2.5, vec({0.3, -1.0, 0.5}), cfg);
        auto oracle = nf::riesz_closed(2.5, vec({0.3, -1.0, 0.5}));
        CHECK(std::abs(tv.value - oracle.value) <= 1e-5 * std::abs(oracle.value));
    }
    {
        space::SpaceSpec s = space::LqNorm{2.0, 2};
        auto tv = nf::ft_sphere(s, 1.5, vec({1.0, 2.0}), cfg);
        auto oracle = nf::riesz_closed(1.5, vec({1.0, 2.0}));
        CHECK(std::abs(tv.value - oracle.value) <= 1e-5 * std::abs(oracle.value));
    }
}

TEST_CASE("sphere route: edge case p = n-1 via the great-sphere section") {
    QuadratureConfig cfg;
    space::SpaceSpec s = space::LqNorm{2.0, 3};
    auto tv = nf::ft_sphere(s, 2.0, vec({0.0, 0.0, 1.5}), cfg);
    auto oracle = nf::riesz_closed(2.0, vec({0.0, 0.0, 1.5}));
    CHECK(std::abs(tv.value - oracle.value) <= 1e-5 * std::abs(oracle.value));
}

TEST_CASE("sphere route: l_inf agreement and spectral nonnegativity") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-7;
    space::SpaceSpec s = space::LqNorm{space::kInf, 3};
    auto tv = nf::ft_sphere(s, 2.3, vec({1.0, 0.5, 2.0}), cfg);
    auto cl = nf::ft_linf_closed(2.3, vec({1.0, 0.5, 2.0}));
    CHECK(std::abs(tv.value - cl.value) <= 1e-4 * std::abs(cl.value));

    space::Matrix atoms(3, 4);
    const double vals[12] = {1.0, 0.2, -0.3, 0.4, 0.1, 0.9, 0.5, -0.2, -0.4, 0.3, 1.1, 0.6};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) atoms.at(i, j) = vals[i * 4 + j];
    space::SpaceSpec sp = space::SpectralSubspace{atoms, 1.3};
    auto nn = nf::ft_sphere(sp, 2.5, vec({0.6, 1.0, -0.8}), cfg);
    CHECK(nn.value >= -nn.err_estimate);
}

TEST_CASE("u recurrence residual") {
    QuadratureConfig cfg;
    {
        std::vector<double> xi = vec({2.0, 1.0, 1.0});
        const double r = nf::u_recurrence_residual(2.5, xi, cfg);
        const double u = nf::u_np(2.5, xi);
        CHECK(r <= 1e-6 * std::abs(u) + 1e-9);
    }
    {
        std::vector<double> xi = vec({3.0, 1.0, 1.0, 0.5});
        const double r = nf::u_recurrence_residual(3.5, xi, cfg);
        const double u = nf::u_np(3.5, xi);
        CHECK(r <= 1e-6 * std::abs(u) + 1e-9);
    }
    {
        // scaling: both sides of the identity are homogeneous of degree p in xi
        std::vector<double> xi2 = vec({4.0, 2.0, 2.0});
        const double p = 2.5;
        const double r2 = nf::u_recurrence_residual(p, xi2, cfg);
        const double u2 = nf::u_np(p, xi2);
        CHECK(r2 / std::pow(2.0, p) <= 1e-6 * std::abs(u2) / std::pow(2.0, p) + 1e-9);
    }
    CHECK_THROWS_AS(nf::u_recurrence_residual(3.0, vec({2.0, 1.0, 1.0})), std::domain_error);
    CHECK_THROWS_AS(nf::u_recurrence_residual(2.5, vec({1.0, 1.0, 2.0})), std::domain_error);
}

TEST_CASE("property: the two l_q routes agree across non-integer q") {
    QuadratureConfig cfg;
    cfg.mc_samples = 100000;
    rng::Stream st = rng::derive(60601, {1});
    specfun::GammaQTable t25, t30, t45;
    specfun::GammaQTable* tables[3] = {&t25, &t30, &t45};
    const double qs[3] = {2.5, 3.0, 4.5};
    for (int rep = 0; rep < 9; ++rep) {
        const double q = qs[rep % 3];
        double p;
        do {
            p = 0.4 + 2.2 * st.next_unit();
        } while (std::abs(p - std::round(p)) < 1e-2);
        std::vector<double> xi(3);
        for (auto& v : xi) v = 0.5 + 1.5 * st.next_unit();
        auto qd = nf::ft_lq_quadrature(q, p, xi, cfg, tables[rep % 3]);
        auto mc = nf::ft_lq_via_linf(q, p, xi, cfg, 0xFACE + rep);
        INFO("q=" << q << " p=" << p);
        CHECK(std::abs(qd.value - mc.value) <= qd.err_estimate + mc.err_estimate);
    }
}
