#include "doctest.h"

#include <string>

#include "negembed/canonical_json.hpp"
#include "negembed/reports.hpp"

using namespace negembed;

TEST_CASE("canonical json: sorted keys, fixed formatting, newline") {
    json::Value v = json::Value::object();
    v["zeta"] = 0.1;
    v["alpha"] = 1;
    v["mid"] = json::Value::array();
    v["mid"].push_back(true);
    v["mid"].push_back("x\"y");
    const std::string s = v.dump_line();
    CHECK(s == "{\"alpha\":1,\"mid\":[true,\"x\\\"y\"],\"zeta\":0.10000000000000001}\n");
}

TEST_CASE("canonical json: doubles are reproducible and 17 significant digits") {
    json::Value a(1.0 / 3.0);
    CHECK(a.dump() == "0.33333333333333331");
    json::Value b(2.0);
    CHECK(b.dump() == "2");
    json::Value c(-0.0);
    CHECK(c.dump() == "0");
}

TEST_CASE("sign scan report serializes byte-identically across runs") {
    space::SpaceSpec s = space::LqNorm{space::kInf, 4};
    embedcheck::ScanConfig sc;
    sc.seed = 3;
    sc.grid_levels = 4;
    sc.random_samples = 16;
    auto r1 = embedcheck::sign_scan(s, 0.5, sc);
    auto r2 = embedcheck::sign_scan(s, 0.5, sc);
    CHECK(reports::signscan_json(r1).dump_line() == reports::signscan_json(r2).dump_line());
}

TEST_CASE("experiment report serializes byte-identically across runs") {
    stablesim::StableSpec spec;
    spec.q = 1.5;
    spec.atoms = space::coupled_atoms(4);
    spec.k = 2;
    space::SpaceSpec sp = space::LqNorm{space::kInf, 4};
    auto r1 = stablesim::correlation_experiment(sp, spec, -1.5, 5000, 42);
    auto r2 = stablesim::correlation_experiment(sp, spec, -1.5, 5000, 42);
    CHECK(reports::experiment_json(r1).dump_line() == reports::experiment_json(r2).dump_line());
}
