#include "doctest.h"

#include <cmath>

#include "negembed/quadrature.hpp"
#include "negembed/rng.hpp"
#include "negembed/specfun.hpp"

using namespace negembed;
namespace sf = negembed::specfun;

TEST_CASE("gamma: classical values and reflection") {
    CHECK(sf::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sf::gamma(0.5) == doctest::Approx(1.7724538509055160273).epsilon(1e-14));
    // reflection: Gamma(-1/2) = -2 Gamma(1/2)
    CHECK(sf::gamma(-0.5) == doctest::Approx(-3.5449077018110320546).epsilon(1e-13));
    CHECK(sf::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(sf::gamma(20.0) == doctest::Approx(1.21645100408832e17).epsilon(1e-12));
}

TEST_CASE("gamma: poles rejected") {
    CHECK_THROWS_AS(sf::gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(sf::gamma(-1.0), std::domain_error);
    CHECK_THROWS_AS(sf::gamma(-42.0), std::domain_error);
}

TEST_CASE("gamma: functional equation on (-50, 50)") {
    rng::Stream st = rng::derive(20240901, {1});
    int checked = 0;
    while (checked < 1000) {
        const double x = -50.0 + 100.0 * st.next_unit();
        if (std::abs(x - std::round(x)) < 1e-3) continue;       // stay off the poles
        if (std::abs(x + 1.0 - std::round(x + 1.0)) < 1e-3) continue;
        const double lhs = sf::gamma(x + 1.0);
        const double rhs = x * sf::gamma(x);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
        ++checked;
    }
}

TEST_CASE("c_p: derived values") {
    CHECK(sf::c_p(1.0) == doctest::Approx(-2.0).epsilon(1e-13));
    // Gamma(-1/4) = -4 Gamma(3/4) gives c_{1/2} = -sqrt(pi/2)
    CHECK(sf::c_p(0.5) == doctest::Approx(-1.2533141373155002512).epsilon(1e-13));
    // Gamma(-p/2) pole forces c_p -> 0 as p -> 0+
    CHECK(std::abs(sf::c_p(1e-8)) < 1e-7);
    CHECK_THROWS_AS(sf::c_p(2.0), std::domain_error);
    CHECK_THROWS_AS(sf::c_p(0.0), std::domain_error);
    CHECK_THROWS_AS(sf::c_p(-1.5), std::domain_error);
}

TEST_CASE("stable moment: quadrature oracle and frozen value for S_2(1)") {
    // oracle: S_2(1) = int |t| sqrt(pi) e^{-t^2/4} dt = 2 sqrt(pi) * 2
    auto orc = quad::integrate(
        [](double t) { return t * sf::kSqrtPi * std::exp(-t * t / 4.0); }, 0.0, 60.0, 1e-12,
        1e-14, 10000);
    REQUIRE(orc.converged);
    const double frozen = 7.0898154036220635766; // 4 sqrt(pi)
    CHECK(2.0 * orc.value == doctest::Approx(frozen).epsilon(1e-12));
    CHECK(sf::stable_moment(2.0, 1.0) == doctest::Approx(frozen).epsilon(1e-12));
}

TEST_CASE("stable moment: sign pattern and domain") {
    CHECK(sf::stable_moment(3.0, 2.5) < 0.0);
    CHECK(sf::stable_moment(3.0, -0.5) > 0.0);
    for (double q : {2.5, 3.0, 4.7, 8.0}) {
        for (double a : {-0.5, 0.7, 1.9, 2.1, 2.9}) {
            if (!(a > -1.0 && a < q)) {
                CHECK_THROWS_AS(sf::stable_moment(q, a), std::domain_error);
                continue;
            }
            const double v = sf::stable_moment(q, a);
            if (a < 2.0)
                CHECK(v > 0.0);
            else if (a < std::min(q, 4.0))
                CHECK(v < 0.0);
        }
    }
    CHECK_THROWS_AS(sf::stable_moment(3.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(sf::stable_moment(3.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(sf::stable_moment(0.5, 0.7), std::domain_error); // alpha >= q
}

TEST_CASE("gamma_q: closed forms for q = 1, 2") {
    for (double t : {0.0, 1.0, 5.0}) {
        CHECK(sf::gamma_q(1.0, t) == doctest::Approx(2.0 / (1.0 + t * t)).epsilon(1e-8));
        CHECK(sf::gamma_q(2.0, t) ==
              doctest::Approx(sf::kSqrtPi * std::exp(-t * t / 4.0)).epsilon(1e-8));
    }
}

TEST_CASE("gamma_q: value at zero is 2 Gamma(1 + 1/q)") {
    for (double q : {0.5, 0.8, 1.3, 3.0, 4.0}) {
        CHECK(sf::gamma_q(q, 0.0) ==
              doctest::Approx(2.0 * sf::gamma(1.0 + 1.0 / q)).epsilon(1e-9));
    }
}

TEST_CASE("gamma_q: even in t, bounded by value at zero") {
    for (double q : {0.5, 1.0, 1.5, 2.0}) {
        const double g0 = sf::gamma_q(q, 0.0);
        for (double t : {0.25, 1.0, 2.5, 7.0}) {
            CHECK(sf::gamma_q(q, t) == sf::gamma_q(q, -t)); // exact, via |t|
            CHECK(std::abs(sf::gamma_q(q, t)) <= g0 * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("gamma_q tail constant") {
    CHECK(sf::gamma_q_tail_constant(1.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(sf::gamma_q_tail_constant(3.0) == doctest::Approx(-12.0).epsilon(1e-13));
    CHECK_THROWS_AS(sf::gamma_q_tail_constant(2.0), std::domain_error);
    CHECK_THROWS_AS(sf::gamma_q_tail_constant(4.0), std::domain_error);

    // Polya asymptotics: t^{1+q} gamma_q(t) near the constant at t = 40
    const double q = 1.5;
    QuadratureConfig tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-15;
    const double v = sf::gamma_q(q, 40.0, tight);
    const double lim = sf::gamma_q_tail_constant(q);
    CHECK(std::abs(std::pow(40.0, 1.0 + q) * v - lim) <= 0.05 * std::abs(lim));
}

TEST_CASE("gamma_q table interpolates to its stated accuracy") {
    QuadratureConfig cfg;
    sf::GammaQTable table(3.0, 30.0, cfg);
    for (double u : {0.05, 0.7, 1.9, 5.3, 12.7, 24.9}) {
        const double direct = sf::gamma_q(3.0, u);
        CHECK(std::abs(table(u) - direct) <= table.point_err() + 1e-11);
    }
    table.extend(50.0);
    CHECK(table.u_max() >= 50.0);
}
