#include "doctest.h"

#include <cmath>
#include <sstream>

#include "negembed/rng.hpp"
#include "negembed/space.hpp"

using namespace negembed;

TEST_CASE("norm evaluation across the space kinds") {
    std::vector<double> x = {3.0, -4.0, 0.0};
    CHECK(space::norm(space::LqNorm{2.0, 3}, x) == doctest::Approx(5.0));
    CHECK(space::norm(space::LqNorm{1.0, 3}, x) == doctest::Approx(7.0));
    CHECK(space::norm(space::LqNorm{space::kInf, 3}, x) == doctest::Approx(4.0));
    CHECK(space::norm(space::LqNorm{0.5, 3}, x) ==
          doctest::Approx(std::pow(std::sqrt(3.0) + 2.0, 2.0)));

    // spectral norm with identity atoms and r = 2 is the euclidean norm
    space::SpaceSpec sp = space::SpectralSubspace{space::Matrix::identity(3), 2.0};
    CHECK(space::norm(sp, x) == doctest::Approx(5.0));
}

TEST_CASE("spectral validation requires full row rank") {
    space::Matrix degenerate(2, 2);
    degenerate.at(0, 0) = 1.0;
    degenerate.at(0, 1) = 2.0;
    degenerate.at(1, 0) = 2.0;
    degenerate.at(1, 1) = 4.0;
    CHECK_THROWS_AS(space::validate(space::SpaceSpec(space::SpectralSubspace{degenerate, 1.0})),
                    std::invalid_argument);
    CHECK(space::rank(space::coupled_atoms(3)) == 3);
    CHECK(space::rank(space::coupled_atoms(4)) == 3); // circulant(1,1,0,0) is singular
}

TEST_CASE("atoms csv round trip") {
    std::stringstream ss;
    ss << "m=3\n1,0,0.5\n0,-1,2\n";
    auto m = space::load_atoms_csv(ss);
    CHECK(m.rows == 2);
    CHECK(m.cols == 3);
    CHECK(m.at(1, 2) == doctest::Approx(2.0));

    std::stringstream bad;
    bad << "m=2\n1,2,3\n";
    CHECK_THROWS_AS(space::load_atoms_csv(bad), std::invalid_argument);
}

TEST_CASE("rng streams are deterministic and disjoint") {
    rng::Stream a = rng::derive(42, {1, 7});
    rng::Stream b = rng::derive(42, {1, 7});
    rng::Stream c = rng::derive(42, {1, 8});
    for (int i = 0; i < 16; ++i) {
        const auto va = a.next_u64();
        CHECK(va == b.next_u64());
        CHECK(va != c.next_u64());
    }
}

TEST_CASE("rng uniform moments") {
    rng::Stream st = rng::derive(7, {0});
    const long N = 200000;
    double s = 0.0, s2 = 0.0;
    for (long i = 0; i < N; ++i) {
        const double u = st.next_unit();
        s += u;
        s2 += u * u;
    }
    CHECK(s / N == doctest::Approx(0.5).epsilon(0.01));
    CHECK(s2 / N == doctest::Approx(1.0 / 3.0).epsilon(0.01));
}

TEST_CASE("rng gauss moments") {
    rng::Stream st = rng::derive(9, {0});
    const long N = 200000;
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    for (long i = 0; i < N; ++i) {
        const double g = st.next_gauss();
        s += g;
        s2 += g * g;
        s4 += g * g * g * g;
    }
    CHECK(std::abs(s / N) < 0.01);
    CHECK(s2 / N == doctest::Approx(1.0).epsilon(0.02));
    CHECK(s4 / N == doctest::Approx(3.0).epsilon(0.05));
}
