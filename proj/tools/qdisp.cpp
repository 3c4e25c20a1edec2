// qdisp: reproduction harness and analysis front end for two-parameter
// displacement estimation with truncated-Fock-basis probe states.
//
// Exit codes: 0 success, 1 validation failure, 2 invalid input,
// 3 physicality violation, 4 truncation diagnostic failure.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdisp/estimation.hpp"
#include "qdisp/gaussian.hpp"
#include "qdisp/hilbert.hpp"
#include "qdisp/purification.hpp"
#include "qdisp/report.hpp"
#include "qdisp/validate.hpp"

namespace {

using namespace qdisp;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitUnphysical = 3;
constexpr int kExitTruncation = 4;

struct OutputOptions {
    std::string format = "json";
    std::string out_path;
};

void emit(const RunRecord& rec, const OutputOptions& opt) {
    std::string text = (opt.format == "csv") ? rec.to_csv() : rec.to_json().dump(2) + "\n";
    if (opt.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.out_path);
        if (!out) throw invalid_input("cannot open output path " + opt.out_path);
        out << text;
    }
}

int dim_for_squeezing(double r_max) {
    int d = 2;
    const double want = 32.0 * std::exp(2.0 * std::abs(r_max));
    while (d < want) d *= 2;
    return std::max(d, 64);
}

json report_row(const EstimationReport& rep) {
    json row;
    row["q11"] = rep.Q(0, 0);
    row["q22"] = rep.Q(1, 1);
    row["det_Q"] = rep.det_Q;
    row["R"] = rep.R;
    row["scalar_bound_CQ"] = rep.scalar_bound_CQ;
    row["holevo_upper"] = rep.holevo_upper;
    return row;
}

int cmd_repro_fock(int n_max, int dim, const OutputOptions& opt) {
    if (n_max > dim - 4) throw invalid_input("repro fock: n_max must be <= dim - 4");
    RunRecord rec;
    rec.experiment = "repro-fock";
    rec.meta = default_meta(dim);
    bool all_ok = true;
    for (int n = 0; n <= n_max; ++n) {
        const EstimationReport rep = analyze(fock(n, Dim(dim)));
        const double q_closed = 4.0 * n + 2.0;
        const double r_closed = 1.0 / (2.0 * n + 1.0);
        const bool ok = std::abs(rep.Q(0, 0) - q_closed) < 1e-7 &&
                        std::abs(rep.Q(1, 1) - q_closed) < 1e-7 &&
                        std::abs(rep.R - r_closed) < 1e-7;
        all_ok = all_ok && ok;
        json row;
        row["n"] = n;
        row.update(report_row(rep));
        row["q_closed"] = q_closed;
        row["R_closed"] = r_closed;
        row["var_product_bound"] = 1.0 / (q_closed * q_closed);
        row["row_ok"] = ok;
        rec.rows.push_back(row);
    }
    emit(rec, opt);
    return all_ok ? kExitOk : kExitValidation;
}

int cmd_repro_squeezed_mixture(const std::vector<double>& r_list, std::optional<int> dim_flag,
                               const OutputOptions& opt) {
    RunRecord rec;
    rec.experiment = "repro-squeezed-mixture";
    const double r_max = r_list.empty() ? 0.0 : *std::max_element(r_list.begin(), r_list.end());
    const int dim = dim_flag.value_or(dim_for_squeezing(r_max));
    rec.meta = default_meta(dim);
    bool all_ok = true;
    double prev_r = -1.0, prev_dev = 0.0;
    for (double r : r_list) {
        DensOp rho = mix({{0.5, density(squeezed_vacuum(r, Dim(dim)))},
                          {0.5, density(squeezed_vacuum(-r, Dim(dim)))}});
        const EstimationReport rep = analyze(rho);
        const double det_target = 4.0 * std::pow(std::cosh(2.0 * r), 2);
        const double r_target = 1.0 / std::cosh(2.0 * r);
        const double dev_det = std::abs(rep.det_Q - det_target) / det_target;
        const double dev_r = std::abs(rep.R - r_target) / r_target;
        if (prev_r >= 1.0 && r > prev_r && dev_det >= prev_dev) all_ok = false;
        if (r >= 1.0) {
            prev_r = r;
            prev_dev = dev_det;
        }
        json row;
        row["r"] = r;
        row.update(report_row(rep));
        row["det_Q_asymptotic"] = det_target;
        row["R_asymptotic"] = r_target;
        row["rel_dev_det_Q"] = dev_det;
        row["rel_dev_R"] = dev_r;
        rec.rows.push_back(row);
    }
    emit(rec, opt);
    return all_ok ? kExitOk : kExitValidation;
}

int cmd_repro_vacuum_one(const std::vector<double>& lambdas, int dim, const OutputOptions& opt) {
    RunRecord rec;
    rec.experiment = "repro-vacuum-one";
    rec.meta = default_meta(dim);
    bool all_ok = true;
    for (double lam : lambdas) {
        if (lam < 0.0 || lam > 1.0) throw invalid_input("repro vacuum-one: lambda must be in [0,1]");
        const DensOp rho = fock_diagonal_state({1.0 - lam, lam}, Dim(dim));
        const double q_formula = qfi_fock_diagonal({1.0 - lam, lam});
        const double q_closed = 2.0 * (1.0 - 2.0 * lam + 4.0 * lam * lam);
        const EstimationReport rep = analyze(rho);
        const bool ok = std::abs(q_formula - q_closed) < 1e-7 &&
                        std::abs(rep.Q(0, 0) - q_closed) < 1e-7;
        all_ok = all_ok && ok;
        json row;
        row["lambda"] = lam;
        row["q_formula"] = q_formula;
        row["q_closed"] = q_closed;
        row["q_sld"] = rep.Q(0, 0);
        row["R"] = rep.R;
        row["wigner_origin"] = wigner_origin(rho);
        row["quantum_non_gaussian"] = lam > 0.476;
        row["wigner_negative"] = lam > 0.5;
        row["row_ok"] = ok;
        rec.rows.push_back(row);
    }
    emit(rec, opt);
    return all_ok ? kExitOk : kExitValidation;
}

int cmd_repro_photon_added_thermal(const std::vector<double>& lambdas, int dim,
                                   const OutputOptions& opt) {
    RunRecord rec;
    rec.experiment = "repro-photon-added-thermal";
    rec.meta = default_meta(dim);
    bool all_ok = true;
    for (double lam : lambdas) {
        const DensOp rho = photon_added_thermal(lam, Dim(dim));
        std::vector<double> probs(dim);
        for (int n = 0; n < dim; ++n) probs[n] = std::real(rho(n, n));
        const double q_formula = qfi_fock_diagonal(probs);
        const EstimationReport rep = analyze(rho);
        const double w0 = wigner_origin(rho);
        const bool ok = std::abs(rep.Q(0, 0) - q_formula) / q_formula < 1e-6 && w0 < 0.0;
        all_ok = all_ok && ok;
        json row;
        row["lambda"] = lam;
        row["q_formula"] = q_formula;
        row["q_sld"] = rep.Q(0, 0);
        row["R"] = rep.R;
        row["wigner_origin"] = w0;
        row["row_ok"] = ok;
        rec.rows.push_back(row);
    }
    emit(rec, opt);
    return all_ok ? kExitOk : kExitValidation;
}

int cmd_purify(const std::vector<double>& entries, int dim, std::optional<int> n_choice,
               const OutputOptions& opt) {
    if (entries.size() != 3) throw invalid_input("purify: expected --sigma xx,xy,pp");
    CovMat2 sigma;
    sigma << entries[0], entries[1], entries[1], entries[2];
    const auto [psi, plan] = purify_cm(sigma, Dim(dim), n_choice);
    const CovMat2 cm = cm_of_state(psi).second;
    const EstimationReport rep = analyze(psi);

    RunRecord rec;
    rec.experiment = "purify";
    rec.meta = default_meta(dim);
    rec.meta["plan"] = json{{"nu", plan.nu},
                            {"N", plan.N},
                            {"lambda", plan.lambda},
                            {"euler", json{{"theta1", plan.euler.theta1},
                                           {"r", plan.euler.r},
                                           {"theta2", plan.euler.theta2}}}};
    rec.meta["sigma"] = matrix2_to_json(sigma);
    rec.meta["cm_residual"] = (cm - sigma).cwiseAbs().maxCoeff();
    rec.meta["report"] = report_to_json(rep);

    // top 16 Fock amplitudes by magnitude
    std::vector<int> order(psi.size());
    for (int j = 0; j < psi.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::norm(psi(a)) > std::norm(psi(b)); });
    for (int j = 0; j < std::min<int>(16, static_cast<int>(order.size())); ++j) {
        json row;
        row["n"] = order[j];
        row["amp_re"] = std::real(psi(order[j]));
        row["amp_im"] = std::imag(psi(order[j]));
        row["prob"] = std::norm(psi(order[j]));
        rec.rows.push_back(row);
    }
    emit(rec, opt);
    return kExitOk;
}

int cmd_analyze(const std::string& spec_path, std::optional<int> dim_flag, bool strict,
                const OutputOptions& opt) {
    StateSpec spec = load_state_spec(spec_path);
    if (dim_flag) spec.dim = *dim_flag;
    const DensOp rho = build_state(spec);
    const EstimationReport rep = analyze(rho, strict);

    RunRecord rec;
    rec.experiment = "analyze";
    rec.meta = default_meta(spec.dim);
    rec.meta["spec"] = state_spec_to_json(spec);
    json row = report_row(rep);
    row["det_sigma"] = rep.det_sigma;
    row["purity"] = rep.purity;
    row["wigner_origin"] = wigner_origin(rho);
    rec.rows.push_back(row);
    rec.meta["report"] = report_to_json(rep);
    emit(rec, opt);
    return kExitOk;
}

int cmd_validate(const std::string& level_name, bool inject_bug, const OutputOptions& opt) {
    ValidationLevel level;
    if (level_name == "quick")
        level = ValidationLevel::quick;
    else if (level_name == "full")
        level = ValidationLevel::full;
    else
        throw invalid_input("validate: level must be quick or full");

    const auto results = run_validation(level, inject_bug);
    RunRecord rec;
    rec.experiment = "validate";
    rec.meta = default_meta(level == ValidationLevel::full ? 256 : 64);
    rec.meta["level"] = level_name;
    bool all_ok = true;
    for (const auto& r : results) {
        all_ok = all_ok && r.pass;
        rec.rows.push_back(json{{"check", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    emit(rec, opt);
    if (!all_ok) {
        for (const auto& r : results)
            if (!r.pass) std::cerr << "FAIL " << r.name << ": " << r.detail << "\n";
    }
    return all_ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint position/momentum-shift estimation toolkit"};
    app.require_subcommand(1);

    OutputOptions opt;
    app.add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--out", opt.out_path, "Write output to PATH instead of stdout");

    // repro
    auto* repro = app.add_subcommand("repro", "Reproduce the published numeric targets");
    repro->require_subcommand(1);

    int fock_n_max = 10, fock_dim = 64;
    auto* repro_fock = repro->add_subcommand("fock", "Fock ladder q = 4n+2, R = 1/(2n+1)");
    repro_fock->add_option("--n-max", fock_n_max, "Highest Fock level")->capture_default_str();
    repro_fock->add_option("--dim", fock_dim, "Truncation dimension")->capture_default_str();

    std::vector<double> sq_r = {0.5, 1.0, 1.5};
    std::optional<int> sq_dim;
    auto* repro_sq = repro->add_subcommand("squeezed-mixture",
                                           "Balanced squeezed-vacuum mixture vs asymptotics");
    repro_sq->add_option("--r", sq_r, "Squeezing values")->capture_default_str();
    repro_sq->add_option("--dim", sq_dim, "Truncation dimension (default: adaptive)");

    std::vector<double> vo_lambdas;
    int vo_dim = 64;
    auto* repro_vo = repro->add_subcommand("vacuum-one", "Vacuum/one-photon mixture sweep");
    repro_vo->add_option("--lambdas", vo_lambdas, "Mixture weights (default: 21-point grid)");
    repro_vo->add_option("--dim", vo_dim, "Truncation dimension")->capture_default_str();

    std::vector<double> pat_lambdas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int pat_dim = 256;
    auto* repro_pat = repro->add_subcommand("photon-added-thermal",
                                            "Photon-added thermal state sweep");
    repro_pat->add_option("--lambdas", pat_lambdas, "Thermal parameters")->capture_default_str();
    repro_pat->add_option("--dim", pat_dim, "Truncation dimension")->capture_default_str();

    // purify
    std::vector<double> purify_sigma;
    int purify_dim = 128;
    std::optional<int> purify_n;
    auto* purify = app.add_subcommand("purify", "Build a pure state with a prescribed CM");
    purify->add_option("--sigma", purify_sigma, "CM entries xx,xp,pp")->expected(3)->required();
    purify->add_option("--dim", purify_dim, "Truncation dimension")->capture_default_str();
    purify->add_option("--N", purify_n, "Fock component of the core superposition");

    // analyze
    std::string spec_path;
    std::optional<int> analyze_dim;
    bool strict = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a probe described by a spec file");
    analyze_cmd->add_option("spec", spec_path, "StateSpec JSON file")->required();
    analyze_cmd->add_option("--dim", analyze_dim, "Override the spec's truncation dimension");
    analyze_cmd->add_flag("--strict", strict, "Fail on closed-form cross-check discrepancies");

    // validate
    std::string level = "quick";
    bool inject_bug = false;
    auto* validate_cmd = app.add_subcommand("validate", "Run the cross-validation suite");
    validate_cmd->add_option("--level", level, "quick or full")->capture_default_str();
    validate_cmd->add_flag("--inject-bug", inject_bug)->group("");  // negative-control fixture

    // let --format/--out appear after the subcommand name
    for (CLI::App* sub : {repro, repro_fock, repro_sq, repro_vo, repro_pat, purify, analyze_cmd,
                          validate_cmd})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidInput;
    }

    try {
        if (repro_fock->parsed()) return cmd_repro_fock(fock_n_max, fock_dim, opt);
        if (repro_sq->parsed()) return cmd_repro_squeezed_mixture(sq_r, sq_dim, opt);
        if (repro_vo->parsed()) {
            if (vo_lambdas.empty())
                for (int j = 0; j <= 20; ++j) vo_lambdas.push_back(j / 20.0);
            return cmd_repro_vacuum_one(vo_lambdas, vo_dim, opt);
        }
        if (repro_pat->parsed()) return cmd_repro_photon_added_thermal(pat_lambdas, pat_dim, opt);
        if (purify->parsed()) return cmd_purify(purify_sigma, purify_dim, purify_n, opt);
        if (analyze_cmd->parsed()) return cmd_analyze(spec_path, analyze_dim, strict, opt);
        if (validate_cmd->parsed()) return cmd_validate(level, inject_bug, opt);
    } catch (const truncation_error& e) {
        std::cerr << "truncation error: " << e.what() << "\n";
        return kExitTruncation;
    } catch (const unphysical_input& e) {
        std::cerr << "physicality violation: " << e.what() << "\n";
        return kExitUnphysical;
    } catch (const invalid_input& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const degenerate_input& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const internal_inconsistency& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitInvalidInput;
}
