#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "yamabe/exact.hpp"
#include "yamabe/linsolve.hpp"
#include "yamabe/pohozaev.hpp"
#include "yamabe/tensors.hpp"

namespace yamabe {

using json = nlohmann::json;

// Floating outputs are rounded to 12 significant digits before serialization
// so identical configurations produce byte-identical reports.
inline double round_for_report(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::atof(buf);
}

inline json exact_to_json(const ExactScalar& v) {
    return json{{"rat", rat_str(v.rat)}, {"pi", rat_str(v.pi)}};
}

inline json pi_value_to_json(const PiValue& v) {
    return json{{"coeff", rat_str(v.q)}, {"pi_pow", v.pi_pow}, {"value", round_for_report(v.to_double())}};
}

// ------------------------------------------------------------------------
// Verification report (the verify-constants surface)
// ------------------------------------------------------------------------

struct VerificationItem {
    std::string name;
    std::string expected;  // serialized ExactScalar (or plain rational)
    std::string computed;
    std::string match;  // "exact" | "FAIL"
    std::string anchor;  // which displayed constant this is
};

struct VerificationReport {
    std::vector<VerificationItem> items;
    bool all_match = true;

    void add_exact(const std::string& name, const ExactScalar& expected,
                   const ExactScalar& computed, const std::string& anchor) {
        VerificationItem it;
        it.name = name;
        it.expected = expected.str();
        it.computed = computed.str();
        it.match = (expected == computed) ? "exact" : "FAIL";
        it.anchor = anchor;
        if (it.match != "exact") all_match = false;
        items.push_back(std::move(it));
    }

    json to_json() const {
        json rows = json::array();
        for (const auto& it : items)
            rows.push_back(json{{"name", it.name},
                                {"expected", it.expected},
                                {"computed", it.computed},
                                {"match", it.match},
                                {"anchor", it.anchor}});
        return json{{"schema", 1}, {"items", rows}, {"all_match", all_match}};
    }
};

inline json flux_report_to_json(const FluxReport& r) {
    return json{{"rho", round_for_report(r.rho)},
                {"P_prime", round_for_report(r.P_prime)},
                {"P", round_for_report(r.P)},
                {"terms",
                 json{{"u_dnu", round_for_report(r.term_u_dnu)},
                      {"grad_sq", round_for_report(r.term_grad_sq)},
                      {"dnu_sq", round_for_report(r.term_dnu_sq)},
                      {"ring", round_for_report(r.term_ring)}}},
                {"quad_error", round_for_report(r.quad_error)}};
}

inline json mass_flux_report_to_json(const MassFluxReport& r) {
    json exact = json::object();
    for (const auto& [pow, val] : r.A_exact)
        exact["rho_pow_" + std::to_string(pow)] = pi_value_to_json(val);
    return json{{"schema", 1},
                {"rho", round_for_report(r.rho)},
                {"A_part", round_for_report(r.A_part)},
                {"A_exact", exact},
                {"G_part", round_for_report(r.G_part)},
                {"total", round_for_report(r.total)}};
}

inline json solve_report_to_json(const SolveReport& r) {
    return json{{"schema", 1},
                {"N", r.N},
                {"grid", json{{"nr", r.nr}, {"nt", r.nt}, {"R", r.R}, {"T", r.T}}},
                {"eps", round_for_report(r.eps)},
                {"linf_residual", round_for_report(r.linf_residual)},
                {"decay_exponent", round_for_report(r.decay_exponent)},
                {"point_conditions_structural", r.point_conditions_structural},
                {"ortho_gradient_pairing", round_for_report(r.ortho_gradient_pairing)},
                {"ortho_radial_factor", round_for_report(r.ortho_radial_factor)},
                {"boundary_w_integral", round_for_report(r.boundary_w_integral)},
                {"energy_value", round_for_report(r.energy_value)},
                {"energy_scale", round_for_report(r.energy_scale)},
                {"boundary_consistency_error", round_for_report(r.boundary_consistency_error)},
                {"sup_bound_constant", round_for_report(r.sup_bound_constant)}};
}

// ------------------------------------------------------------------------
// MetricJet JSON loading: a document keyed by tensor name with nested
// rational arrays ("3/4" strings or integers).
// ------------------------------------------------------------------------

namespace detail {

inline Rational json_rational(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    throw std::invalid_argument("jet entries must be integers or \"p/q\" strings");
}

template <class Setter>
inline void load_nested(const json& arr, std::vector<int>& idx, int depth, int rank,
                        Setter&& set) {
    if (depth == rank) {
        set(idx, json_rational(arr));
        return;
    }
    if (!arr.is_array()) throw std::invalid_argument("jet tensor has wrong nesting depth");
    for (std::size_t k = 0; k < arr.size(); ++k) {
        idx[depth] = static_cast<int>(k);
        load_nested(arr[k], idx, depth + 1, rank, set);
    }
}

}  // namespace detail

inline MetricJet metric_jet_from_json(const json& doc) {
    int n = doc.at("n").get<int>();
    MetricJet jet(n);
    auto load = [&](const char* key, auto& store, int rank) {
        if (!doc.contains(key)) return;
        std::vector<int> idx(rank, 0);
        detail::load_nested(doc[key], idx, 0, rank, [&](const std::vector<int>& id, Rational v) {
            std::size_t lin = 0;
            for (int d = 0; d < rank; ++d) lin = lin * n + id[d];
            store.v[lin] = std::move(v);
        });
    };
    load("II", jet.II, 2);
    load("dII", jet.dII, 3);
    load("ddII", jet.ddII, 4);
    load("Rh", jet.Rh, 4);
    load("dRh", jet.dRh, 5);
    load("RN", jet.RN, 2);
    load("dRN", jet.dRN, 3);
    load("dRNN", jet.dRNN, 2);
    jet.conformal_normalized = doc.value("conformal_normalized", false);
    if (doc.value("strict", false)) jet.validate_symmetries();
    return jet;
}

}  // namespace yamabe
