// Acceptance suite runner: executes every criterion at its pinned tolerance
// and prints one PASS/FAIL line per criterion. Pass --cli <path> so the
// determinism criterion can re-execute `selftest --quick` as a subprocess;
// --quick runs the reduced variant.

#include <cstdio>
#include <cstring>
#include <string>

#include "negembed/selftest.hpp"

int main(int argc, char** argv) {
    negembed::selftest::Options opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
        if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc) opt.cli_path = argv[i + 1];
    }
    auto results = negembed::selftest::run_all(opt);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %s -- %s (%.1fs%s)\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str(), r.seconds,
                    r.limit_seconds > 0.0
                        ? (std::string(" / limit ") + std::to_string((int)r.limit_seconds) + "s").c_str()
                        : "");
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES present");
    return all ? 0 : 1;
}
