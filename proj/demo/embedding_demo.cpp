// A short tour of the library: evaluate one transform by two independent
// routes, scan a space for sign changes, certify a non-embedding, and run a
// coupled-vs-decoupled stable experiment.

#include <cstdio>
#include <vector>

#include "negembed/embedcheck.hpp"
#include "negembed/negft.hpp"
#include "negembed/stablesim.hpp"

using namespace negembed;

int main() {
    // (||x||_inf^{-p})^ at a point, closed form vs oscillatory quadrature
    std::vector<double> xi = {0.7, 1.1, 2.3};
    auto closed = negft::ft_linf_closed(1.3, xi);
    auto quad = negft::ft_linf_quadrature(1.3, xi);
    std::printf("transform:  closed %.12g   quad %.12g   |delta| %.2g (allowed %.2g)\n",
                closed.value, quad.value, std::abs(closed.value - quad.value),
                closed.err_estimate + quad.err_estimate);

    // l_inf^4 fails to embed below p = 1 and embeds on [1, 4)
    space::SpaceSpec linf4 = space::LqNorm{space::kInf, 4};
    auto low = embedcheck::sign_scan(linf4, 0.5);
    auto high = embedcheck::sign_scan(linf4, 2.5);
    std::printf("signscan:   p=0.5 -> %s   p=2.5 -> %s\n",
                embedcheck::verdict_name(low.verdict), embedcheck::verdict_name(high.verdict));

    // analytic certificate that l_3^5 does not embed at p = 0.5
    auto cert = embedcheck::sign_change_certificate(3.0, 5, 0.5);
    std::printf("certify:    I_pos %.4g > 0,  I_neg %.4g < 0\n", cert.I_pos, cert.I_neg);

    // coupled vs decoupled stable vectors: E||X||^{-p} >= E||Y||^{-p}
    stablesim::StableSpec spec;
    spec.q = 1.5;
    spec.atoms = space::coupled_atoms(4);
    spec.k = 2;
    auto rep = stablesim::correlation_experiment(linf4, spec, -1.5, 100000, 42);
    std::printf("simulate:   E_X %.5f +- %.5f   E_Y %.5f +- %.5f   %s\n", rep.E_X.value,
                rep.E_X.ci_half, rep.E_Y.value, rep.E_Y.ci_half,
                stablesim::inequality_verdict_name(rep.verdict));
    return 0;
}
