// negembed: Fourier transforms of negative norm powers, embedding scans for
// homogeneous spaces, and correlation experiments for symmetric stable
// vectors. Every subcommand emits one canonical JSON document (sorted keys,
// 17 significant digits, newline-terminated) so identical runs are
// byte-identical; wall time is only recorded with --timing.
//
// Exit codes: 0 success, 2 validation/domain error, 3 numeric non-convergence
// (the payload is still emitted, flagged converged=false).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "negembed/canonical_json.hpp"
#include "negembed/embedcheck.hpp"
#include "negembed/negft.hpp"
#include "negembed/reports.hpp"
#include "negembed/selftest.hpp"
#include "negembed/space.hpp"
#include "negembed/specfun.hpp"
#include "negembed/stablesim.hpp"
#include "negembed/version.hpp"

using namespace negembed;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;

struct Defaults {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_panels = 200000;
    long mc_samples = 1000000;
    int grid = 7;
    int samples = 256;
    std::uint64_t seed = 1;
};

Defaults load_defaults(int argc, char** argv) {
    Defaults d;
    std::string path;
    if (const char* env = std::getenv("NEGEMBED_CONFIG")) path = env;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a.rfind("--config=", 0) == 0)
            path = a.substr(9);
        else if (a == "--config" && i + 1 < argc)
            path = argv[i + 1];
    }
    if (path.empty()) return d;
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key=value, got: " + line);
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "rel_tol")
            d.rel_tol = std::stod(val);
        else if (key == "abs_tol")
            d.abs_tol = std::stod(val);
        else if (key == "max_panels")
            d.max_panels = std::stoi(val);
        else if (key == "mc_samples")
            d.mc_samples = std::stol(val);
        else if (key == "grid")
            d.grid = std::stoi(val);
        else if (key == "samples")
            d.samples = std::stoi(val);
        else if (key == "seed")
            d.seed = std::stoull(val);
        else
            throw std::invalid_argument("config: unknown key " + key);
    }
    return d;
}

std::vector<double> parse_xi(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    if (out.empty()) throw std::invalid_argument("--xi must be a comma-separated list");
    return out;
}

struct SpaceArgs {
    std::string kind = "linf"; // linf | lq | l1 | l2 | spectral
    double q = 0.0;            // for lq
    int n = 0;
    std::string atoms_file;
    double r = 1.0;
};

space::SpaceSpec build_space(const SpaceArgs& sa) {
    if (sa.kind == "linf") return space::LqNorm{space::kInf, sa.n};
    if (sa.kind == "l1") return space::LqNorm{1.0, sa.n};
    if (sa.kind == "l2") return space::LqNorm{2.0, sa.n};
    if (sa.kind == "lq") {
        if (!(sa.q > 0.0)) throw std::invalid_argument("--space lq requires --q > 0");
        return space::LqNorm{sa.q, sa.n};
    }
    if (sa.kind == "spectral") {
        if (sa.atoms_file.empty())
            throw std::invalid_argument("--space spectral requires --atoms-file");
        space::Matrix atoms = space::load_atoms_csv_file(sa.atoms_file);
        if (sa.n != 0 && sa.n != atoms.rows)
            throw std::invalid_argument("--n disagrees with the atoms file row count");
        return space::SpectralSubspace{atoms, sa.r};
    }
    throw std::invalid_argument("unknown space kind: " + sa.kind);
}

struct Emitter {
    std::string out_path;
    bool timing = false;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    json::Value manifest(const std::string& subcommand, json::Value params,
                         std::optional<std::uint64_t> seed = std::nullopt) const {
        json::Value m = json::Value::object();
        m["version"] = kVersion;
        m["subcommand"] = subcommand;
        m["params"] = std::move(params);
        if (seed) m["seed"] = *seed;
        if (timing)
            m["wall_time_ms"] =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
        return m;
    }

    void emit(json::Value doc) const {
        const std::string line = doc.dump_line();
        if (out_path.empty()) {
            std::cout << line;
        } else {
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw std::invalid_argument("cannot open output file " + out_path);
            f << line;
        }
    }
};

int cmd_transform(const Defaults& dft, const SpaceArgs& sa, double p, const std::string& xi_csv,
                  const std::string& method, double rel_tol, double abs_tol, long mc_samples,
                  std::uint64_t seed, Emitter& em) {
    auto xi = parse_xi(xi_csv);
    SpaceArgs sa2 = sa;
    if (sa2.n == 0) sa2.n = static_cast<int>(xi.size());
    space::SpaceSpec spec = build_space(sa2);
    if (space::dim(spec) != static_cast<int>(xi.size()))
        throw std::invalid_argument("--xi length must equal the space dimension");

    QuadratureConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    cfg.max_panels = dft.max_panels;
    cfg.mc_samples = mc_samples;

    const auto* lq = std::get_if<space::LqNorm>(&spec);
    const int n = space::dim(spec);
    const bool is_linf = lq && lq->q == space::kInf;
    const bool sphere_ok = p >= n - 1.0 - 1e-12 && p < n && n <= 4;

    std::vector<std::pair<std::string, negft::TransformValue>> results;
    auto want = [&](const char* m) { return method == "all" || method == m; };

    if (is_linf && want("closed")) {
        if (method == "closed" || p != std::floor(p))
            results.emplace_back("closed", negft::ft_linf_closed(p, xi));
    }
    if (is_linf && want("quad"))
        results.emplace_back("quad_linf", negft::ft_linf_quadrature(p, xi, cfg));
    if (lq && !is_linf && want("lq"))
        results.emplace_back("quad_lq", negft::ft_lq_quadrature(lq->q, p, xi, cfg));
    if (lq && !is_linf && lq->q == 2.0 && want("closed"))
        results.emplace_back("closed", negft::riesz_closed(p, xi));
    if (lq && !is_linf && want("lq-via-linf")) {
        if (method == "lq-via-linf" || p != std::floor(p))
            results.emplace_back("lq_via_linf", negft::ft_lq_via_linf(lq->q, p, xi, cfg, seed));
    }
    if (want("sphere") && (method == "sphere" || sphere_ok))
        results.emplace_back("sphere", negft::ft_sphere(spec, p, xi, cfg));

    if (results.empty())
        throw std::invalid_argument("no applicable method for this space/p combination");

    json::Value params = json::Value::object();
    params["space"] = reports::space_json(spec);
    params["p"] = p;
    params["xi"] = json::from_span(xi);
    params["method"] = method;
    params["rel_tol"] = rel_tol;
    params["abs_tol"] = abs_tol;

    json::Value doc = json::Value::object();
    doc["manifest"] = em.manifest("transform", std::move(params), seed);
    json::Value arr = json::Value::array();
    bool all_converged = true;
    for (const auto& [name, tv] : results) {
        json::Value one = reports::transform_json(tv);
        one["route"] = name;
        arr.push_back(std::move(one));
        all_converged = all_converged && tv.converged;
    }
    doc["results"] = std::move(arr);
    if (results.size() > 1) {
        json::Value deltas = json::Value::array();
        for (std::size_t i = 0; i < results.size(); ++i)
            for (std::size_t j = i + 1; j < results.size(); ++j) {
                json::Value d = json::Value::object();
                d["a"] = results[i].first;
                d["b"] = results[j].first;
                d["delta"] = std::abs(results[i].second.value - results[j].second.value);
                d["allowed"] =
                    results[i].second.err_estimate + results[j].second.err_estimate;
                d["agree"] = std::abs(results[i].second.value - results[j].second.value) <=
                             results[i].second.err_estimate + results[j].second.err_estimate;
                deltas.push_back(std::move(d));
            }
        doc["deltas"] = std::move(deltas);
    }
    em.emit(std::move(doc));
    return all_converged ? 0 : kExitNonConvergence;
}

int cmd_signscan(const Defaults& dft, const SpaceArgs& sa, double p, int grid, int samples,
                 std::uint64_t seed, const std::string& dump_grid, Emitter& em) {
    space::SpaceSpec spec = build_space(sa);
    embedcheck::ScanConfig sc;
    sc.grid_levels = grid;
    sc.random_samples = samples;
    sc.seed = seed;
    QuadratureConfig cfg;
    cfg.rel_tol = dft.rel_tol;
    cfg.abs_tol = dft.abs_tol;
    cfg.max_panels = dft.max_panels;

    std::vector<embedcheck::ScanSample> grid_samples;
    auto rep = embedcheck::sign_scan(spec, p, sc, cfg, nullptr,
                                     dump_grid.empty() ? nullptr : &grid_samples);
    if (!dump_grid.empty()) {
        std::ofstream f(dump_grid, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open " + dump_grid);
        f << "value,err";
        for (int k = 0; k < space::dim(spec); ++k) f << ",xi" << k + 1;
        f << "\n";
        char buf[64];
        for (const auto& s : grid_samples) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", s.value, s.err);
            f << buf;
            for (double v : s.point) {
                std::snprintf(buf, sizeof buf, ",%.17g", v);
                f << buf;
            }
            f << "\n";
        }
    }

    json::Value params = json::Value::object();
    params["space"] = reports::space_json(spec);
    params["p"] = p;
    params["grid"] = static_cast<long>(grid);
    params["samples"] = static_cast<long>(samples);

    json::Value doc = json::Value::object();
    doc["manifest"] = em.manifest("signscan", std::move(params), seed);
    doc["report"] = reports::signscan_json(rep);
    em.emit(std::move(doc));
    return 0;
}

int cmd_certify(double q, int n, double p, Emitter& em) {
    auto rep = embedcheck::sign_change_certificate(q, n, p);
    json::Value params = json::Value::object();
    params["q"] = q;
    params["n"] = static_cast<long>(n);
    params["p"] = p;
    json::Value doc = json::Value::object();
    doc["manifest"] = em.manifest("certify", std::move(params));
    doc["report"] = reports::certificate_json(rep);
    em.emit(std::move(doc));
    return 0;
}

int cmd_critical(const Defaults& dft, const SpaceArgs& sa, int grid, int samples,
                 std::uint64_t seed, Emitter& em) {
    space::SpaceSpec spec = build_space(sa);
    embedcheck::ScanConfig sc;
    sc.grid_levels = grid;
    sc.random_samples = samples;
    sc.seed = seed;
    QuadratureConfig cfg;
    cfg.rel_tol = dft.rel_tol;
    cfg.abs_tol = dft.abs_tol;
    cfg.max_panels = dft.max_panels;
    auto rep = embedcheck::critical_exponent(spec, sc, cfg);

    json::Value params = json::Value::object();
    params["space"] = reports::space_json(spec);
    params["grid"] = static_cast<long>(grid);
    params["samples"] = static_cast<long>(samples);
    json::Value doc = json::Value::object();
    doc["manifest"] = em.manifest("critical", std::move(params), seed);
    doc["report"] = reports::critical_json(rep);
    em.emit(std::move(doc));
    return 0;
}

int cmd_simulate(const SpaceArgs& sa, double q_stable, int k, double p_signed,
                 const std::string& atoms, const std::string& atoms_file, long N,
                 std::uint64_t seed, const std::string& estimator,
                 const std::string& dump_samples, Emitter& em) {
    stablesim::StableSpec spec;
    spec.q = q_stable;
    spec.k = k;
    if (!atoms_file.empty())
        spec.atoms = space::load_atoms_csv_file(atoms_file);
    else if (atoms == "identity")
        spec.atoms = space::Matrix::identity(sa.n);
    else if (atoms == "coupled")
        spec.atoms = space::coupled_atoms(sa.n);
    else
        throw std::invalid_argument("--atoms must be identity or coupled (or use --atoms-file)");
    if (spec.atoms.rows != sa.n)
        throw std::invalid_argument("atoms row count must equal --n");

    space::SpaceSpec sp = build_space(sa);
    stablesim::Estimator est = stablesim::Estimator::mean;
    if (estimator == "median-of-means")
        est = stablesim::Estimator::median_of_means;
    else if (estimator != "mean")
        throw std::invalid_argument("--estimator must be mean or median-of-means");

    auto rep = stablesim::correlation_experiment(sp, spec, p_signed, N, seed, est);

    if (!dump_samples.empty()) {
        std::ofstream f(dump_samples, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open " + dump_samples);
        f << "norm_X_pow,norm_Y_pow\n";
        std::vector<double> v(static_cast<std::size_t>(sa.n));
        char buf[64];
        for (long i = 0; i < N; ++i) {
            stablesim::sample_X(spec, seed, i, v);
            const double nx = std::pow(space::norm(sp, v), p_signed);
            stablesim::sample_Y(spec, seed, i, v);
            const double ny = std::pow(space::norm(sp, v), p_signed);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", nx, ny);
            f << buf;
        }
    }

    json::Value params = json::Value::object();
    params["space"] = reports::space_json(sp);
    params["q"] = q_stable;
    params["k"] = static_cast<long>(k);
    params["p"] = p_signed;
    params["N"] = static_cast<long>(N);
    params["atoms"] = atoms_file.empty() ? atoms : atoms_file;
    params["estimator"] = estimator;
    json::Value doc = json::Value::object();
    doc["manifest"] = em.manifest("simulate", std::move(params), seed);
    doc["report"] = reports::experiment_json(rep);
    em.emit(std::move(doc));
    return 0;
}

int cmd_gammaq(double q, double t_min, double t_max, int points, double rel_tol,
               double abs_tol, Emitter& em) {
    if (points < 2) throw std::invalid_argument("--points must be >= 2");
    QuadratureConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    json::Value rows = json::Value::array();
    bool all_converged = true;
    for (int i = 0; i < points; ++i) {
        const double t = t_min + (t_max - t_min) * i / (points - 1);
        auto g = specfun::gamma_q_eval(q, t, cfg);
        json::Value row = json::Value::object();
        row["t"] = t;
        row["value"] = g.value;
        row["err"] = g.err;
        row["converged"] = g.converged;
        rows.push_back(std::move(row));
        all_converged = all_converged && g.converged;
    }
    json::Value params = json::Value::object();
    params["q"] = q;
    params["t_min"] = t_min;
    params["t_max"] = t_max;
    params["points"] = static_cast<long>(points);
    params["rel_tol"] = rel_tol;
    params["abs_tol"] = abs_tol;
    json::Value doc = json::Value::object();
    doc["manifest"] = em.manifest("gammaq", std::move(params));
    doc["table"] = std::move(rows);
    em.emit(std::move(doc));
    return all_converged ? 0 : kExitNonConvergence;
}

int cmd_selftest(bool quick, const std::string& self_path, Emitter& em) {
    selftest::Options opt;
    opt.quick = quick;
    if (!quick) opt.cli_path = self_path; // full mode re-executes selftest --quick
    auto results = selftest::run_all(opt);
    bool all = true;
    for (const auto& r : results) {
        std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name
                  << " -- " << r.detail << "\n";
        all = all && r.pass;
    }
    em.emit(selftest::summary_json(results, quick));
    if (!all) {
        std::cerr << "failing criteria:";
        for (const auto& r : results)
            if (!r.pass) std::cerr << " " << r.id;
        std::cerr << "\n";
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    Defaults dft;
    try {
        dft = load_defaults(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    CLI::App app{"negembed: transforms of negative norm powers, embedding scans, and "
                 "stable-vector correlation experiments"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (or $NEGEMBED_CONFIG)");
    Emitter em;
    app.add_option("--out", em.out_path, "write the JSON document to a file instead of stdout");
    app.add_flag("--timing", em.timing, "record wall time in the manifest (breaks byte-stability)");

    auto add_space_opts = [](CLI::App* cmd, SpaceArgs& sa, bool need_n, bool with_q = true,
                             bool with_atoms_file = true) {
        cmd->add_option("--space", sa.kind, "linf | lq | l1 | l2 | spectral")->required();
        if (with_q) cmd->add_option("--q", sa.q, "norm exponent for --space lq");
        auto* n_opt = cmd->add_option("--n", sa.n, "space dimension");
        if (need_n) n_opt->required();
        if (with_atoms_file)
            cmd->add_option("--atoms-file", sa.atoms_file, "CSV atoms for --space spectral");
        cmd->add_option("--r", sa.r, "spectral norm exponent r in (0, 2]");
    };

    // transform
    auto* t = app.add_subcommand("transform", "evaluate (||x||^{-p})^ at a point");
    SpaceArgs t_sa;
    double t_p = 0.0;
    std::string t_xi, t_method = "all";
    double t_rel = dft.rel_tol, t_abs = dft.abs_tol;
    long t_mc = dft.mc_samples;
    std::uint64_t t_seed = dft.seed;
    add_space_opts(t, t_sa, false);
    t->add_option("--p", t_p, "exponent p in (0, n)")->required();
    t->add_option("--xi", t_xi, "evaluation point, comma-separated")->required();
    t->add_option("--method", t_method, "closed | quad | lq | lq-via-linf | sphere | all");
    t->add_option("--rel-tol", t_rel);
    t->add_option("--abs-tol", t_abs);
    t->add_option("--mc-samples", t_mc);
    t->add_option("--seed", t_seed);

    // signscan
    auto* s = app.add_subcommand("signscan", "scan the transform sign over the orthant section");
    SpaceArgs s_sa;
    double s_p = 0.0;
    int s_grid = dft.grid, s_samples = dft.samples;
    std::uint64_t s_seed = dft.seed;
    std::string s_dump;
    add_space_opts(s, s_sa, true);
    s->add_option("--p", s_p)->required();
    s->add_option("--grid", s_grid, "log-grid levels per coordinate");
    s->add_option("--samples", s_samples, "random directions to add");
    s->add_option("--seed", s_seed);
    s->add_option("--dump-grid", s_dump, "CSV dump of every scanned point");

    // certify
    auto* c = app.add_subcommand("certify", "analytic sign-change certificate (q > 2, n > 3)");
    double c_q = 0.0, c_p = 0.0;
    int c_n = 0;
    c->add_option("--q", c_q)->required();
    c->add_option("--n", c_n)->required();
    c->add_option("--p", c_p)->required();

    // critical
    auto* k = app.add_subcommand("critical", "bisect the embedding boundary exponent");
    SpaceArgs k_sa;
    int k_grid = dft.grid, k_samples = dft.samples;
    std::uint64_t k_seed = dft.seed;
    add_space_opts(k, k_sa, true);
    k->add_option("--grid", k_grid);
    k->add_option("--samples", k_samples);
    k->add_option("--seed", k_seed);

    // simulate
    auto* m = app.add_subcommand("simulate", "coupled vs decoupled stable-vector experiment");
    SpaceArgs m_sa;
    double m_q = 0.0, m_p = 0.0;
    int m_k = 1;
    long m_N = 200000;
    std::uint64_t m_seed = dft.seed;
    std::string m_atoms = "coupled", m_atoms_file, m_estimator = "mean", m_dump;
    add_space_opts(m, m_sa, true, false, false);
    m->add_option("--q", m_q, "stable index q in (0, 2]")->required();
    m->add_option("--space-q", m_sa.q, "norm exponent for --space lq");
    m->add_option("--space-atoms-file", m_sa.atoms_file, "CSV atoms for --space spectral");
    m->add_option("--k", m_k, "block split 1 <= k < n")->required();
    m->add_option("--p", m_p, "signed exponent of the norm moment")->required();
    m->add_option("--atoms", m_atoms, "identity | coupled");
    m->add_option("--atoms-file", m_atoms_file)->excludes("--atoms");
    m->add_option("--N", m_N, "Monte Carlo sample count");
    m->add_option("--seed", m_seed);
    m->add_option("--estimator", m_estimator, "mean | median-of-means");
    m->add_option("--dump-samples", m_dump, "CSV dump of per-sample norm powers");

    // gammaq
    auto* g = app.add_subcommand("gammaq", "emit a table of gamma_q values");
    double g_q = 0.0, g_tmin = 0.0, g_tmax = 10.0, g_rel = dft.rel_tol, g_abs = dft.abs_tol;
    int g_points = 41;
    g->add_option("--q", g_q)->required();
    g->add_option("--t-min", g_tmin);
    g->add_option("--t-max", g_tmax);
    g->add_option("--points", g_points);
    g->add_option("--rel-tol", g_rel);
    g->add_option("--abs-tol", g_abs);

    // selftest
    auto* st = app.add_subcommand("selftest", "run the acceptance suite");
    bool st_quick = false;
    std::string st_fault;
    st->add_flag("--quick", st_quick, "reduced-N variant (< 60 s)");
    st->add_option("--inject-fault", st_fault, "corrupt a component to prove the suite bites")
        ->check(CLI::IsMember({"gamma"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (t->parsed())
            return cmd_transform(dft, t_sa, t_p, t_xi, t_method, t_rel, t_abs, t_mc, t_seed, em);
        if (s->parsed()) return cmd_signscan(dft, s_sa, s_p, s_grid, s_samples, s_seed, s_dump, em);
        if (c->parsed()) return cmd_certify(c_q, c_n, c_p, em);
        if (k->parsed()) return cmd_critical(dft, k_sa, k_grid, k_samples, k_seed, em);
        if (m->parsed())
            return cmd_simulate(m_sa, m_q, m_k, m_p, m_atoms, m_atoms_file, m_N, m_seed,
                                m_estimator, m_dump, em);
        if (g->parsed()) return cmd_gammaq(g_q, g_tmin, g_tmax, g_points, g_rel, g_abs, em);
        if (st->parsed()) {
            if (st_fault == "gamma") specfun::gamma_fault() = 1e-6;
            return cmd_selftest(st_quick, argv[0], em);
        }
    } catch (const specfun::NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
