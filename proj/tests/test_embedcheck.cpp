#include "doctest.h"

#include <cmath>

#include "negembed/embedcheck.hpp"

using namespace negembed;
namespace ec = negembed::embedcheck;

TEST_CASE("sign scan: l_inf^4 below and inside the embedding window") {
    space::SpaceSpec s = space::LqNorm{space::kInf, 4};
    ec::ScanConfig sc;
    sc.seed = 7;

    auto low = ec::sign_scan(s, 0.5, sc);
    CHECK(low.verdict == ec::Verdict::SignChange);
    REQUIRE(low.pos_witness.has_value());
    REQUIRE(low.neg_witness.has_value());

    // witness validity: 10x tighter re-evaluation preserves the sign
    QuadratureConfig tight;
    tight.rel_tol = 1e-9;
    tight.abs_tol = 1e-13;
    auto reneg = negft::ft_linf_quadrature(0.5, low.neg_witness->point, tight);
    CHECK(reneg.value < 0.0);
    auto repos = negft::ft_linf_quadrature(0.5, low.pos_witness->point, tight);
    CHECK(repos.value > 0.0);

    auto high = ec::sign_scan(s, 2.5, sc);
    CHECK(high.verdict == ec::Verdict::AllNonnegative);
}

TEST_CASE("sign scan: l_1^3 embeds for p in (0, n)") {
    space::SpaceSpec s = space::LqNorm{1.0, 3};
    ec::ScanConfig sc;
    sc.grid_levels = 5;
    sc.random_samples = 64;
    auto rep = ec::sign_scan(s, 1.7, sc);
    CHECK(rep.verdict == ec::Verdict::AllNonnegative);
}

TEST_CASE("sign scan: determinism for fixed seed") {
    space::SpaceSpec s = space::LqNorm{space::kInf, 4};
    ec::ScanConfig sc;
    sc.seed = 11;
    auto a = ec::sign_scan(s, 0.7, sc);
    auto b = ec::sign_scan(s, 0.7, sc);
    CHECK(a.min_value == b.min_value);
    CHECK(a.max_value == b.max_value);
    CHECK(a.argmin == b.argmin);
    CHECK(a.n_samples == b.n_samples);
}

TEST_CASE("sign scan rejects spaces without an evaluator") {
    space::SpaceSpec sp = space::SpectralSubspace{space::Matrix::identity(3), 1.5};
    CHECK_THROWS_AS(ec::sign_scan(sp, 1.0, ec::ScanConfig{}), std::invalid_argument);
    // but the sphere window works
    ec::ScanConfig sc;
    sc.grid_levels = 3;
    sc.random_samples = 8;
    auto rep = ec::sign_scan(sp, 2.5, sc);
    CHECK(rep.verdict == ec::Verdict::AllNonnegative);
}

TEST_CASE("certificate: examples and infeasibility") {
    auto c1 = ec::sign_change_certificate(3.0, 5, 0.5);
    CHECK(c1.I_pos > 0.0);
    CHECK(c1.I_neg < 0.0);
    CHECK(c1.target_pos == doctest::Approx(1.9));
    CHECK(c1.target_neg == doctest::Approx(2.1));
    for (double a : c1.alpha_pos) CHECK((a > -1.0 && a < 0.0));

    auto c2 = ec::sign_change_certificate(4.5, 6, 1.0);
    CHECK(c2.I_pos > 0.0);
    CHECK(c2.I_neg < 0.0);

    CHECK_THROWS_AS(ec::sign_change_certificate(3.0, 5, 2.5), std::domain_error);
    CHECK_THROWS_AS(ec::sign_change_certificate(1.5, 5, 0.5), std::domain_error);
    CHECK_THROWS_AS(ec::sign_change_certificate(3.0, 3, 0.1), std::domain_error);
}

TEST_CASE("certificate and scan agree where both apply") {
    auto cert = ec::sign_change_certificate(3.0, 5, 0.5);
    CHECK(cert.I_pos > 0.0);
    space::SpaceSpec s = space::LqNorm{3.0, 5};
    ec::ScanConfig sc;
    sc.grid_levels = 5;
    sc.random_samples = 32;
    auto rep = ec::sign_scan(s, 0.5, sc);
    CHECK(rep.verdict == ec::Verdict::SignChange);
}

TEST_CASE("critical exponent: l_inf^4 boundary and l_inf^3 non-transition") {
    auto r4 = ec::critical_exponent(space::SpaceSpec(space::LqNorm{space::kInf, 4}));
    CHECK(r4.transition_found);
    CHECK(std::abs(r4.estimate - 1.0) <= 0.05);

    auto r3 = ec::critical_exponent(space::SpaceSpec(space::LqNorm{space::kInf, 3}));
    CHECK_FALSE(r3.transition_found);

    CHECK_THROWS_AS(ec::critical_exponent(space::SpaceSpec(space::LqNorm{1.5, 4})),
                    std::invalid_argument);
}

TEST_CASE("endpoint exponents keep the nonnegative verdict by direct quadrature") {
    // p = n-3, n-2, n-1 for l_q with q > 2: the quadrature routes evaluate
    // integer p directly; the report flags the limit-argument endpoints
    space::SpaceSpec s = space::LqNorm{space::kInf, 4};
    ec::ScanConfig sc;
    sc.grid_levels = 5;
    sc.random_samples = 32;
    for (double p : {1.0, 2.0, 3.0}) {
        auto rep = ec::sign_scan(s, p, sc);
        CHECK(rep.verdict == ec::Verdict::AllNonnegative);
        CHECK(rep.continuity_endpoint);
        CHECK(rep.method == negft::Method::quad_linf);
    }
}
