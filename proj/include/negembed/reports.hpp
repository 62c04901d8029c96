#pragma once

#include <string>
#include <variant>

#include "negembed/canonical_json.hpp"
#include "negembed/embedcheck.hpp"
#include "negembed/negft.hpp"
#include "negembed/space.hpp"
#include "negembed/stablesim.hpp"

namespace negembed::reports {

inline json::Value space_json(const space::SpaceSpec& s) {
    json::Value v = json::Value::object();
    if (const auto* lq = std::get_if<space::LqNorm>(&s)) {
        v["kind"] = "lq";
        v["n"] = static_cast<long>(lq->n);
        if (lq->q == space::kInf)
            v["q"] = "inf";
        else
            v["q"] = lq->q;
    } else {
        const auto& sp = std::get<space::SpectralSubspace>(s);
        v["kind"] = "spectral";
        v["n"] = static_cast<long>(sp.atoms.rows);
        v["m"] = static_cast<long>(sp.atoms.cols);
        v["r"] = sp.r;
        json::Value rows = json::Value::array();
        for (int i = 0; i < sp.atoms.rows; ++i) {
            json::Value row = json::Value::array();
            for (int j = 0; j < sp.atoms.cols; ++j) row.push_back(sp.atoms.at(i, j));
            rows.push_back(std::move(row));
        }
        v["atoms"] = std::move(rows);
    }
    return v;
}

inline json::Value transform_json(const negft::TransformValue& tv) {
    json::Value v = json::Value::object();
    v["value"] = tv.value;
    v["err_estimate"] = tv.err_estimate;
    v["method"] = negft::method_name(tv.method);
    v["converged"] = tv.converged;
    return v;
}

inline json::Value witness_json(const embedcheck::Witness& w) {
    json::Value v = json::Value::object();
    v["point"] = json::from_span(w.point);
    v["value"] = w.value;
    v["err"] = w.err;
    return v;
}

inline json::Value signscan_json(const embedcheck::SignScanReport& r) {
    json::Value v = json::Value::object();
    v["space"] = space_json(r.space);
    v["p"] = r.p;
    v["n_samples"] = static_cast<long>(r.n_samples);
    v["min_value"] = r.min_value;
    v["max_value"] = r.max_value;
    v["argmin"] = json::from_span(r.argmin);
    v["argmax"] = json::from_span(r.argmax);
    v["pos_witness"] = r.pos_witness ? witness_json(*r.pos_witness) : json::Value(nullptr);
    v["neg_witness"] = r.neg_witness ? witness_json(*r.neg_witness) : json::Value(nullptr);
    v["decision_tol"] = r.decision_tol;
    v["max_err"] = r.max_err;
    v["verdict"] = embedcheck::verdict_name(r.verdict);
    v["method"] = negft::method_name(r.method);
    v["seed"] = static_cast<std::uint64_t>(r.seed);
    v["continuity_endpoint"] = r.continuity_endpoint;
    return v;
}

inline json::Value certificate_json(const embedcheck::CertificateReport& r) {
    json::Value v = json::Value::object();
    v["q"] = r.q;
    v["n"] = static_cast<long>(r.n);
    v["p"] = r.p;
    v["alpha_pos"] = json::from_span(r.alpha_pos);
    v["alpha_neg"] = json::from_span(r.alpha_neg);
    v["target_pos"] = r.target_pos;
    v["target_neg"] = r.target_neg;
    v["I_pos"] = r.I_pos;
    v["I_neg"] = r.I_neg;
    return v;
}

inline json::Value critical_json(const embedcheck::CriticalResult& r) {
    json::Value v = json::Value::object();
    v["estimate"] = r.estimate;
    v["half_width"] = r.half_width;
    v["transition_found"] = r.transition_found;
    json::Value probes = json::Value::array();
    for (const auto& [p, verdict] : r.probes) {
        json::Value pr = json::Value::object();
        pr["p"] = p;
        pr["verdict"] = embedcheck::verdict_name(verdict);
        probes.push_back(std::move(pr));
    }
    v["probes"] = std::move(probes);
    return v;
}

inline json::Value estimate_json(const stablesim::Estimate& e) {
    json::Value v = json::Value::object();
    v["value"] = e.value;
    v["ci_half"] = e.ci_half;
    v["heuristic_ci"] = e.heuristic_ci;
    v["n"] = static_cast<long>(e.n);
    v["estimator"] = stablesim::estimator_name(e.estimator);
    v["partitions"] = static_cast<long>(e.partitions);
    return v;
}

inline json::Value experiment_json(const stablesim::StableExperimentReport& r) {
    json::Value v = json::Value::object();
    v["space"] = space_json(r.space);
    v["q"] = r.spec.q;
    v["k"] = static_cast<long>(r.spec.k);
    {
        json::Value rows = json::Value::array();
        for (int i = 0; i < r.spec.atoms.rows; ++i) {
            json::Value row = json::Value::array();
            for (int j = 0; j < r.spec.atoms.cols; ++j) row.push_back(r.spec.atoms.at(i, j));
            rows.push_back(std::move(row));
        }
        v["atoms"] = std::move(rows);
    }
    v["p_signed"] = r.p_signed;
    v["N"] = static_cast<long>(r.N);
    v["seed"] = static_cast<std::uint64_t>(r.seed);
    v["E_X"] = estimate_json(r.E_X);
    v["E_Y"] = estimate_json(r.E_Y);
    v["estimator"] = stablesim::estimator_name(r.estimator);
    v["partitions"] = static_cast<long>(r.partitions);
    v["expected_direction"] = r.expect_X_ge_Y ? "X_ge_Y" : "X_le_Y";
    v["verdict"] = stablesim::inequality_verdict_name(r.verdict);
    v["ci_method"] = r.ci_method;
    return v;
}

} // namespace negembed::reports
