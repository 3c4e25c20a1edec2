#ifndef QDISP_REPORT_HPP
#define QDISP_REPORT_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdisp/errors.hpp"
#include "qdisp/estimation.hpp"
#include "qdisp/hilbert.hpp"

// Serialization layer: state specifications, estimation reports and run
// records, in JSON and flat CSV. Floats are formatted with 17 significant
// digits so that a re-parsed record reproduces identical numbers.

namespace qdisp {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "qdisp 1.0.0";

// Canonical float formatting used in CSV output.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Declarative description of a probe state, loadable from a JSON document
// with fields {kind, params, dim}.
struct StateSpec {
    std::string kind;
    json params;
    int dim = 64;
};

inline StateSpec parse_state_spec(const json& j) {
    StateSpec s;
    try {
        s.kind = j.at("kind").get<std::string>();
        s.params = j.value("params", json::object());
        s.dim = j.at("dim").get<int>();
    } catch (const json::exception& e) {
        throw invalid_input(std::string("state spec: ") + e.what());
    }
    return s;
}

inline StateSpec load_state_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("state spec: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw invalid_input(std::string("state spec: parse failure: ") + e.what());
    }
    return parse_state_spec(j);
}

inline json state_spec_to_json(const StateSpec& s) {
    return json{{"kind", s.kind}, {"params", s.params}, {"dim", s.dim}};
}

// Instantiate the density operator a StateSpec describes.
inline DensOp build_state(const StateSpec& s) {
    const Dim dim(s.dim);
    try {
        if (s.kind == "fock") return density(fock(s.params.at("n").get<int>(), dim));
        if (s.kind == "coherent")
            return density(coherent({s.params.at("alpha_re").get<double>(),
                                     s.params.value("alpha_im", 0.0)},
                                    dim));
        if (s.kind == "squeezed")
            return density(squeezed_vacuum(s.params.at("r").get<double>(), dim));
        if (s.kind == "fock_superposition") {
            std::vector<std::pair<Complex, Ket>> terms;
            for (const auto& t : s.params.at("terms"))
                terms.emplace_back(Complex{t.at("re").get<double>(), t.value("im", 0.0)},
                                   fock(t.at("n").get<int>(), dim));
            return density(superpose(terms));
        }
        if (s.kind == "fock_diagonal")
            return fock_diagonal_state(s.params.at("probs").get<std::vector<double>>(), dim);
        if (s.kind == "photon_added_thermal")
            return photon_added_thermal(s.params.at("lambda").get<double>(), dim);
        if (s.kind == "squeezed_mixture") {
            const double r = s.params.at("r").get<double>();
            return mix({{0.5, density(squeezed_vacuum(r, dim))},
                        {0.5, density(squeezed_vacuum(-r, dim))}});
        }
    } catch (const json::exception& e) {
        throw invalid_input(std::string("state spec params: ") + e.what());
    }
    throw invalid_input("state spec: unknown kind '" + s.kind + "'");
}

inline json matrix2_to_json(const Eigen::Matrix2d& m) {
    return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

inline json report_to_json(const EstimationReport& r) {
    json j;
    j["Q"] = matrix2_to_json(r.Q);
    j["D"] = matrix2_to_json(r.D);
    j["R"] = r.R;
    j["det_Q"] = r.det_Q;
    j["det_sigma"] = r.det_sigma;
    j["purity"] = r.purity;
    j["scalar_bound_CQ"] = r.scalar_bound_CQ;
    j["holevo_upper"] = r.holevo_upper;
    j["diagnostics"] = json{{"dim", r.diagnostics.dim},
                            {"tail_mass", r.diagnostics.tail},
                            {"support_rank", r.diagnostics.support_rank},
                            {"crosscheck_rel_err", r.diagnostics.crosscheck_rel_err},
                            {"crosscheck_route", r.diagnostics.crosscheck_route}};
    return j;
}

// A reproducible record of one CLI invocation: metadata plus one row per
// grid point. Rows are flat JSON objects sharing one column layout.
struct RunRecord {
    std::string experiment;
    json meta;
    json rows = json::array();

    json to_json() const {
        return json{{"experiment", experiment}, {"meta", meta}, {"rows", rows}};
    }

    std::string to_csv() const {
        std::ostringstream out;
        if (rows.empty()) return "";
        std::vector<std::string> cols;
        for (auto it = rows.front().begin(); it != rows.front().end(); ++it)
            cols.push_back(it.key());
        for (std::size_t c = 0; c < cols.size(); ++c)
            out << (c ? "," : "") << cols[c];
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < cols.size(); ++c) {
                if (c) out << ",";
                const auto& v = row.at(cols[c]);
                if (v.is_number_float())
                    out << format_double(v.get<double>());
                else
                    out << v.dump();
            }
            out << "\n";
        }
        return out.str();
    }
};

inline json default_meta(int dim) {
    return json{{"tool_version", kToolVersion},
                {"dim", dim},
                {"tolerances", json{{"tail_gate", kTailGate}, {"support_cutoff", kSupportCutoff}}},
                {"constants",
                 json{{"quantum_non_gaussian_threshold", 0.476},
                      {"wigner_negativity_threshold", 0.5}}},
                {"seed", 0}};
}

}  // namespace qdisp

#endif
