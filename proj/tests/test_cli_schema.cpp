// End-to-end checks of the CLI surface: documents validate against the
// shipped JSON schemas, exit codes follow the contract, and repeated runs
// are byte-identical. Needs NEGEMBED_BIN and NEGEMBED_SCHEMAS (set by ctest);
// the cases are skipped when run outside the harness.

#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

using nlohmann::json;

struct RunResult {
    int rc = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const char* bin = std::getenv("NEGEMBED_BIN");
    RunResult r;
    if (!bin) return r;
    const std::string cmd = std::string("'") + bin + "' " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return r;
    char buf[8192];
    std::size_t k;
    while ((k = std::fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, k);
    const int status = pclose(f);
    r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json load_schema(const std::string& name) {
    const char* dir = std::getenv("NEGEMBED_SCHEMAS");
    REQUIRE(dir != nullptr);
    std::ifstream f(std::string(dir) + "/" + name);
    REQUIRE(f.good());
    json j;
    f >> j;
    return j;
}

// minimal draft-07 subset: type, required, properties, items, enum,
// (exclusive)minimum/maximum, $ref to a sibling file or #/definitions
bool validate(const json& inst, const json& schema, const json& root, std::string* why);

bool type_matches(const json& inst, const std::string& t) {
    if (t == "object") return inst.is_object();
    if (t == "array") return inst.is_array();
    if (t == "string") return inst.is_string();
    if (t == "boolean") return inst.is_boolean();
    if (t == "integer") return inst.is_number_integer() || inst.is_number_unsigned();
    if (t == "number") return inst.is_number();
    if (t == "null") return inst.is_null();
    return false;
}

bool validate(const json& inst, const json& schema, const json& root, std::string* why) {
    if (schema.contains("$ref")) {
        const std::string ref = schema["$ref"];
        if (ref.rfind("#/definitions/", 0) == 0) {
            return validate(inst, root["definitions"][ref.substr(14)], root, why);
        }
        json sub = load_schema(ref);
        return validate(inst, sub, sub, why);
    }
    if (schema.contains("type")) {
        const json& t = schema["type"];
        bool ok = false;
        if (t.is_string())
            ok = type_matches(inst, t.get<std::string>());
        else
            for (const auto& alt : t) ok = ok || type_matches(inst, alt.get<std::string>());
        if (!ok) {
            *why = "type mismatch: expected " + t.dump() + " got " + inst.dump().substr(0, 80);
            return false;
        }
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& e : schema["enum"]) ok = ok || e == inst;
        if (!ok) {
            *why = "enum mismatch at " + inst.dump();
            return false;
        }
    }
    if (inst.is_number()) {
        const double v = inst.get<double>();
        if (schema.contains("minimum") && v < schema["minimum"].get<double>()) {
            *why = "minimum violated";
            return false;
        }
        if (schema.contains("maximum") && v > schema["maximum"].get<double>()) {
            *why = "maximum violated";
            return false;
        }
        if (schema.contains("exclusiveMinimum") && v <= schema["exclusiveMinimum"].get<double>()) {
            *why = "exclusiveMinimum violated";
            return false;
        }
        if (schema.contains("exclusiveMaximum") && v >= schema["exclusiveMaximum"].get<double>()) {
            *why = "exclusiveMaximum violated";
            return false;
        }
    }
    if (inst.is_object()) {
        if (schema.contains("required"))
            for (const auto& k : schema["required"])
                if (!inst.contains(k.get<std::string>())) {
                    *why = "missing required key " + k.get<std::string>();
                    return false;
                }
        if (schema.contains("properties"))
            for (const auto& [k, sub] : schema["properties"].items())
                if (inst.contains(k) && !validate(inst[k], sub, root, why)) {
                    *why = k + ": " + *why;
                    return false;
                }
    }
    if (inst.is_array() && schema.contains("items"))
        for (const auto& el : inst)
            if (!validate(el, schema["items"], root, why)) return false;
    return true;
}

void check_against(const std::string& doc_text, const std::string& schema_name) {
    REQUIRE_FALSE(doc_text.empty());
    REQUIRE(doc_text.back() == '\n');
    json inst = json::parse(doc_text);
    json schema = load_schema(schema_name);
    std::string why;
    const bool ok = validate(inst, schema, schema, &why);
    INFO(schema_name << ": " << why);
    CHECK(ok);
}

bool harness() { return std::getenv("NEGEMBED_BIN") != nullptr; }

} // namespace

TEST_CASE("cli: transform document validates and is byte-stable") {
    if (!harness()) return;
    auto r1 = run("transform --space linf --n 3 --p 1.3 --xi 0.7,1.1,2.3 --method all");
    CHECK(r1.rc == 0);
    check_against(r1.out, "transform.schema.json");
    auto r2 = run("transform --space linf --n 3 --p 1.3 --xi 0.7,1.1,2.3 --method all");
    CHECK(r1.out == r2.out);

    json d = json::parse(r1.out);
    for (const auto& delta : d["deltas"]) CHECK(delta["agree"].get<bool>());
}

TEST_CASE("cli: riesz agreement through the lq route") {
    if (!harness()) return;
    auto r = run("transform --space lq --q 2 --n 3 --p 1.5 --xi 1,2,2 --method all");
    CHECK(r.rc == 0);
    check_against(r.out, "transform.schema.json");
    json d = json::parse(r.out);
    for (const auto& delta : d["deltas"]) CHECK(delta["agree"].get<bool>());
}

TEST_CASE("cli: exit codes follow the contract") {
    if (!harness()) return;
    CHECK(run("transform --space linf --n 3 --p 2 --xi 1,1,1 --method closed").rc == 2);
    CHECK(run("simulate --space l1 --n 3 --k 1 --q 1 --p 1.5 --atoms coupled --N 1000 --seed 1").rc == 2);
    CHECK(run("certify --q 1.5 --n 5 --p 0.5").rc == 2);
    CHECK(run("transform --space linf --n 3 --p 1.1 --xi 1,0,1").rc == 2);
}

TEST_CASE("cli: signscan document validates") {
    if (!harness()) return;
    auto r = run("signscan --space linf --n 4 --p 0.5 --seed 7 --grid 5 --samples 32");
    CHECK(r.rc == 0);
    check_against(r.out, "signscan.schema.json");
    json d = json::parse(r.out);
    CHECK(d["report"]["verdict"] == "SignChange");
    CHECK_FALSE(d["report"]["neg_witness"].is_null());
}

TEST_CASE("cli: certify document validates") {
    if (!harness()) return;
    auto r = run("certify --q 3 --n 5 --p 0.5");
    CHECK(r.rc == 0);
    check_against(r.out, "certificate.schema.json");
    json d = json::parse(r.out);
    CHECK(d["report"]["I_pos"].get<double>() > 0.0);
    CHECK(d["report"]["I_neg"].get<double>() < 0.0);
}

TEST_CASE("cli: critical document validates") {
    if (!harness()) return;
    auto r = run("critical --space linf --n 4 --seed 3");
    CHECK(r.rc == 0);
    check_against(r.out, "critical.schema.json");
    json d = json::parse(r.out);
    CHECK(d["report"]["transition_found"].get<bool>());
    CHECK(std::abs(d["report"]["estimate"].get<double>() - 1.0) <= 0.05);
}

TEST_CASE("cli: simulate document validates") {
    if (!harness()) return;
    auto r = run("simulate --space linf --n 4 --k 2 --q 1.5 --p -1.5 --atoms coupled --N 20000 --seed 42");
    CHECK(r.rc == 0);
    check_against(r.out, "simulate.schema.json");
    json d = json::parse(r.out);
    CHECK(d["report"]["expected_direction"] == "X_ge_Y");
}

TEST_CASE("cli: gammaq document validates") {
    if (!harness()) return;
    auto r = run("gammaq --q 3 --t-min 0 --t-max 2 --points 5");
    CHECK(r.rc == 0);
    check_against(r.out, "gammaq.schema.json");
}

TEST_CASE("cli: config file sets defaults") {
    if (!harness()) return;
    const std::string path = "/tmp/negembed_test_config";
    {
        std::ofstream f(path);
        f << "# test config\nseed=99\ngrid=4\nsamples=8\n";
    }
    auto r = run("--config " + path + " signscan --space linf --n 4 --p 0.5");
    CHECK(r.rc == 0);
    json d = json::parse(r.out);
    CHECK(d["report"]["seed"].get<std::uint64_t>() == 99);
    CHECK(d["manifest"]["params"]["grid"].get<int>() == 4);
    std::remove(path.c_str());
}

TEST_CASE("cli: env config variable is honored") {
    if (!harness()) return;
    const char* bin = std::getenv("NEGEMBED_BIN");
    const std::string path = "/tmp/negembed_env_config";
    {
        std::ofstream f(path);
        f << "seed=123\n";
    }
    const std::string cmd = std::string("NEGEMBED_CONFIG=") + path + " '" + bin +
                            "' signscan --space linf --n 4 --p 0.5 --grid 4 --samples 8 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string out;
    char buf[8192];
    std::size_t k;
    while ((k = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, k);
    pclose(f);
    json d = json::parse(out);
    CHECK(d["report"]["seed"].get<std::uint64_t>() == 123);
    std::remove(path.c_str());
}

TEST_CASE("cli: non-convergence exits 3 with the payload still emitted") {
    if (!harness()) return;
    const std::string path = "/tmp/negembed_tiny_budget";
    {
        std::ofstream f(path);
        f << "mc_samples=64\n"; // 3 sigma cannot reach the Monte Carlo band
    }
    auto r = run("--config " + path +
                 " transform --space lq --q 3 --n 3 --p 1.5 --xi 1,1,2 --method lq-via-linf");
    CHECK(r.rc == 3);
    json d = json::parse(r.out); // payload must still be a valid document
    bool any_unconverged = false;
    for (const auto& res : d["results"])
        if (!res["converged"].get<bool>()) any_unconverged = true;
    CHECK(any_unconverged);
    std::remove(path.c_str());
}

TEST_CASE("cli: corrupted gamma is caught and named by the selftest") {
    if (!harness()) return;
    auto r = run("selftest --quick --inject-fault=gamma");
    CHECK(r.rc != 0);
    json d = json::parse(r.out);
    CHECK_FALSE(d["all_pass"].get<bool>());
    bool c1_failed = false;
    for (const auto& c : d["criteria"])
        if (c["id"].get<int>() == 1 && !c["pass"].get<bool>()) c1_failed = true;
    CHECK(c1_failed);
}

TEST_CASE("cli: csv dumps, file output, and the timing flag") {
    if (!harness()) return;
    // --dump-grid: header plus one row per scanned point
    auto r = run("signscan --space linf --n 4 --p 0.5 --grid 4 --samples 8 "
                 "--dump-grid /tmp/negembed_grid.csv");
    CHECK(r.rc == 0);
    {
        std::ifstream f("/tmp/negembed_grid.csv");
        REQUIRE(f.good());
        std::string line;
        std::getline(f, line);
        CHECK(line == "value,err,xi1,xi2,xi3,xi4");
        int rows = 0;
        while (std::getline(f, line)) ++rows;
        json d = json::parse(r.out);
        CHECK(rows == d["report"]["n_samples"].get<int>());
    }
    std::remove("/tmp/negembed_grid.csv");

    // --dump-samples: one row of norm powers per draw
    auto r2 = run("simulate --space linf --n 4 --k 2 --q 1.5 --p -1.5 --atoms coupled "
                  "--N 100 --seed 7 --dump-samples /tmp/negembed_samples.csv");
    CHECK(r2.rc == 0);
    {
        std::ifstream f("/tmp/negembed_samples.csv");
        REQUIRE(f.good());
        std::string line;
        std::getline(f, line);
        CHECK(line == "norm_X_pow,norm_Y_pow");
        int rows = 0;
        while (std::getline(f, line)) ++rows;
        CHECK(rows == 100);
    }
    std::remove("/tmp/negembed_samples.csv");

    // --out writes the same document to a file
    auto r3 = run("--out /tmp/negembed_doc.json certify --q 3 --n 5 --p 0.5");
    CHECK(r3.rc == 0);
    CHECK(r3.out.empty());
    {
        std::ifstream f("/tmp/negembed_doc.json");
        REQUIRE(f.good());
        std::string content((std::istreambuf_iterator<char>(f)),
                            std::istreambuf_iterator<char>());
        check_against(content, "certificate.schema.json");
    }
    std::remove("/tmp/negembed_doc.json");

    // --timing adds wall_time_ms to the manifest (absent by default)
    auto plain = run("certify --q 3 --n 5 --p 0.5");
    CHECK_FALSE(json::parse(plain.out)["manifest"].contains("wall_time_ms"));
    auto timed = run("--timing certify --q 3 --n 5 --p 0.5");
    CHECK(json::parse(timed.out)["manifest"].contains("wall_time_ms"));
}
