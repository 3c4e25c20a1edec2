#ifndef QDISP_VALIDATE_HPP
#define QDISP_VALIDATE_HPP

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "qdisp/estimation.hpp"
#include "qdisp/gaussian.hpp"
#include "qdisp/hilbert.hpp"
#include "qdisp/purification.hpp"
#include "qdisp/report.hpp"

// Desk-scale cross-validation suite: route equivalences and invariant
// checks runnable from the CLI (`qdisp validate`). Quick level stays at
// dim <= 64, full level goes up to dim <= 256.

namespace qdisp {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

enum class ValidationLevel { quick, full };

namespace validate_detail {

inline CheckResult check(const std::string& name, double worst, double tol) {
    return {name, worst < tol,
            "worst " + format_double(worst) + " vs tol " + format_double(tol)};
}

// Collection of pure probes at a given scale.
inline std::vector<Ket> pure_probes(ValidationLevel level) {
    std::vector<Ket> probes;
    const Dim d64(64);
    for (int n = 0; n <= 10; ++n) probes.push_back(fock(n, d64));
    probes.push_back(coherent(1.0, d64));
    probes.push_back(squeezed_vacuum(0.5, d64));
    probes.push_back(squeezed_vacuum(1.0, Dim(128)));
    probes.push_back(superpose({{std::sqrt(3.0 / 8.0), fock(4, d64)},
                                {std::sqrt(5.0 / 8.0), fock(0, d64)}}));
    probes.push_back(superpose({{std::sqrt(0.5), fock(1, d64)}, {std::sqrt(0.5), fock(5, d64)}}));
    if (level == ValidationLevel::full) {
        probes.push_back(squeezed_vacuum(1.5, Dim(256)));
        probes.push_back(superpose({{std::sqrt(0.3), fock(2, d64)}, {std::sqrt(0.7), fock(8, d64)}}));
    }
    return probes;
}

inline CovMat2 random_physical_cm(std::mt19937_64& rng, double nu_max, double r_max) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double nu = 0.5 + (nu_max - 0.5) * u01(rng);
    const double r = r_max * u01(rng);
    const double a = 2.0 * std::numbers::pi * (u01(rng) - 0.5);
    const double b = 2.0 * std::numbers::pi * (u01(rng) - 0.5);
    const SympMat s = rot2(a) * squeeze2(r) * rot2(b);
    return nu * (s.transpose() * s);
}

}  // namespace validate_detail

inline std::vector<CheckResult> run_validation(ValidationLevel level, bool inject_bug = false) {
    using namespace validate_detail;
    std::vector<CheckResult> results;
    const double commutator_tol = inject_bug ? 1e-16 : 1e-12;

    {  // canonical commutator on the protected sub-block
        double worst = 0.0;
        for (int d : {4, 8, 16, 32, 64}) {
            const Quadratures q = quadrature_ops(Dim(d));
            const Mat comm = q.x * q.p - q.p * q.x - kI * Mat::Identity(d, d);
            worst = std::max(worst, comm.topLeftCorner(d - 2, d - 2).cwiseAbs().maxCoeff());
        }
        results.push_back(check("commutator-subspace", worst, commutator_tol));
    }
    {  // n = (x^2 + p^2 - 1)/2 away from the truncation edge
        const int d = 16;
        const Quadratures q = quadrature_ops(Dim(d));
        const Mat res = 0.5 * (q.x * q.x + q.p * q.p - Mat::Identity(d, d)) - q.n;
        results.push_back(
            check("number-identity", res.topLeftCorner(d - 2, d - 2).cwiseAbs().maxCoeff(), 1e-12));
    }
    {  // constructor invariants: norm, hermiticity, trace, positivity
        double worst = 0.0;
        for (const Ket& psi : pure_probes(level)) worst = std::max(worst, std::abs(psi.norm() - 1.0));
        std::vector<DensOp> ops = {thermal_state(1.0, Dim(64)), photon_added_thermal(0.5, Dim(64)),
                                   mix({{0.5, density(squeezed_vacuum(1.0, Dim(128)))},
                                        {0.5, density(squeezed_vacuum(-1.0, Dim(128)))}})};
        for (const DensOp& rho : ops) {
            worst = std::max(worst, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(std::real(rho.trace()) - 1.0));
            Eigen::SelfAdjointEigenSolver<Mat> es(rho);
            worst = std::max(worst, std::max(0.0, -es.eigenvalues().minCoeff() - 1e-10));
        }
        results.push_back(check("constructor-invariants", worst, 1e-10));
    }
    {  // displacement inverse round trip (global phase dropped via densities)
        const Dim d(64);
        const Mat u = displacement_unitary(0.1, 0.07, d);
        const Mat v = displacement_unitary(-0.1, -0.07, d);
        double worst = 0.0;
        for (const Ket& psi : {fock(0, d), fock(3, d), coherent(0.5, d)}) {
            const Ket back = u * (v * psi);
            worst = std::max(worst, (density(back) - density(psi)).cwiseAbs().maxCoeff());
        }
        results.push_back(check("displacement-roundtrip", worst, 1e-8));
    }
    {  // energy bound Var <= 2E+1 and Fock saturation Var = E + 1/2
        double worst = 0.0, worst_fock = 0.0;
        for (const Ket& psi : pure_probes(level)) {
            const Dim d(static_cast<int>(psi.size()));
            const Quadratures q = quadrature_ops(d);
            const double e = mean_energy(psi);
            worst = std::max(worst, variance(q.x, psi) - (2.0 * e + 1.0));
            worst = std::max(worst, variance(q.p, psi) - (2.0 * e + 1.0));
        }
        for (int n = 0; n <= 10; ++n) {
            const Ket psi = fock(n, Dim(64));
            const Quadratures q = quadrature_ops(Dim(64));
            worst_fock = std::max(worst_fock, std::abs(variance(q.x, psi) - (n + 0.5)));
            worst_fock = std::max(worst_fock, std::abs(variance(q.p, psi) - (n + 0.5)));
        }
        results.push_back(check("energy-bound", worst, 1e-8));
        results.push_back(check("fock-variance-saturation", worst_fock, 1e-10));
    }
    {  // pure-route equivalence: covariance formula vs SLD solve
        double worst = 0.0, worst_d = 0.0, worst_r = 0.0;
        for (const Ket& psi : pure_probes(level)) {
            const DensOp rho = density(psi);
            const SLDSet slds = displacement_slds(rho);
            const QFIMat q_sld = qfi_from_slds(rho, slds);
            const QFIMat q_cov = qfi_pure_cov(psi);
            worst = std::max(worst, (q_sld - q_cov).cwiseAbs().maxCoeff() /
                                        q_cov.cwiseAbs().maxCoeff());
            const UhlmannMat d_sld = uhlmann_from_slds(rho, slds);
            worst_d = std::max(worst_d, std::abs(std::abs(d_sld(0, 1)) - 2.0));
            const double r_sld = r_parameter(q_sld, d_sld);
            const double r_cm = r_pure_from_cm(cm_of_state(psi).second);
            worst_r = std::max(worst_r, std::abs(r_sld - r_cm));
        }
        results.push_back(check("route-pure-qfi", worst, 1e-7));
        results.push_back(check("uhlmann-pure-constant", worst_d, 1e-7));
        results.push_back(check("route-pure-r", worst_r, 1e-6));
    }
    {  // mixed Gaussian: sigma^{-1} closed form vs SLD route
        double worst = 0.0;
        std::vector<double> nbars = {0.5, 1.0};
        int dim = 64;
        if (level == ValidationLevel::full) {
            nbars = {0.5, 1.0, 2.0, 5.0};
            dim = 256;
        }
        for (double nbar : nbars) {
            const DensOp rho = thermal_state(nbar, Dim(dim));
            const SLDSet slds = displacement_slds(rho);
            const QFIMat q_sld = qfi_from_slds(rho, slds);
            const QFIMat q_g = gaussian_qfi(cm_of_state(rho).second);
            worst = std::max(worst,
                             (q_sld - q_g).cwiseAbs().maxCoeff() / q_g.cwiseAbs().maxCoeff());
            const double r_sld = r_parameter(q_sld, uhlmann_from_slds(rho, slds));
            const double mu = purity_from_cm(cm_of_state(rho).second);
            worst = std::max(worst, std::abs(r_sld - mu));
        }
        results.push_back(check("route-gaussian-mixed", worst, 1e-5));
    }
    {  // Fock-diagonal closed form vs SLD route, random distributions
        std::mt19937_64 rng(20240817);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const int trials = (level == ValidationLevel::full) ? 100 : 25;
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            std::vector<double> probs(13);
            double sum = 0.0;
            for (double& p : probs) {
                p = u01(rng);
                sum += p;
            }
            for (double& p : probs) p /= sum;
            const double q_formula = qfi_fock_diagonal(probs);
            const DensOp rho = fock_diagonal_state(probs, Dim(32));
            const QFIMat q_sld = qfi_from_slds(rho, displacement_slds(rho));
            worst = std::max(worst, std::abs(q_sld(0, 0) - q_formula) / q_formula);
            worst = std::max(worst, std::abs(q_sld(1, 1) - q_formula) / q_formula);
        }
        results.push_back(check("route-fock-diagonal", worst, 1e-6));
    }
    {  // QFI is independent of the evaluation point
        const DensOp rho = thermal_state(1.0, Dim(64));
        const Mat u = displacement_unitary(0.1, 0.1, Dim(64));
        const DensOp moved = hermitize(u * rho * u.adjoint());
        const QFIMat q0 = qfi_from_slds(rho, displacement_slds(rho));
        const QFIMat q1 = qfi_from_slds(moved, displacement_slds(moved));
        results.push_back(check("origin-invariance",
                                (q0 - q1).cwiseAbs().maxCoeff() / q0.cwiseAbs().maxCoeff(), 1e-6));
    }
    {  // model derivative vs central finite differences, O(h^2) scaling
        const Dim d(64);
        const DensOp rho = thermal_state(1.0, d);
        const Mat exact = model_derivative(rho, quadrature_ops(d).p);
        double errs[2];
        const double hs[2] = {1e-3, 1e-4};
        for (int i = 0; i < 2; ++i) {
            const double h = hs[i];
            const Mat up = displacement_unitary(h, 0.0, d);
            const Mat dn = displacement_unitary(-h, 0.0, d);
            const Mat fd = (up * rho * up.adjoint() - dn * rho * dn.adjoint()) / (2.0 * h);
            errs[i] = (fd - exact).cwiseAbs().maxCoeff();
        }
        const double ratio = errs[0] / std::max(errs[1], 1e-300);
        const bool scaling_ok = ratio > 100.0 / 1.5 && ratio < 100.0 * 1.5;
        results.push_back({"derivative-finite-difference", errs[1] < 1e-7 && scaling_ok,
                           "err(1e-4) " + format_double(errs[1]) + ", ratio " +
                               format_double(ratio)});
    }
    {  // Williamson and Euler round trips on random matrices
        std::mt19937_64 rng(7);
        double worst_w = 0.0, worst_e = 0.0;
        const int trials = (level == ValidationLevel::full) ? 1000 : 200;
        const CovMat2 omega = symplectic_form();
        for (int t = 0; t < trials; ++t) {
            const CovMat2 sigma = random_physical_cm(rng, 4.0, 1.0);
            auto [s, nu] = williamson_single(sigma);
            worst_w = std::max(worst_w,
                               (s.transpose() * (nu * CovMat2::Identity()) * s - sigma)
                                   .cwiseAbs()
                                   .maxCoeff());
            worst_w = std::max(worst_w,
                               (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff());
            const EulerAngles e = euler_decompose(s);
            worst_e = std::max(
                worst_e,
                (rot2(e.theta1) * squeeze2(e.r) * rot2(e.theta2) - s).cwiseAbs().maxCoeff());
        }
        results.push_back(check("williamson-roundtrip", worst_w, 1e-10));
        results.push_back(check("euler-roundtrip", worst_e, 1e-9));
    }
    {  // purification round trip
        std::mt19937_64 rng(99);
        const bool full = level == ValidationLevel::full;
        const int trials = full ? 200 : 20;
        const Dim dim(full ? 256 : 64);
        const double nu_max = full ? 4.0 : 2.0;
        const double r_max = full ? 1.0 : 0.5;
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const CovMat2 sigma = random_physical_cm(rng, nu_max, r_max);
            const auto [psi, plan] = purify_cm(sigma, dim);
            worst = std::max(worst, (cm_of_state(psi).second - sigma).cwiseAbs().maxCoeff());
        }
        results.push_back(check("purification-roundtrip", worst, 1e-6));
    }
    return results;
}

}  // namespace qdisp

#endif
