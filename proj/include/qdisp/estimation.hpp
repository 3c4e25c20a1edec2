#ifndef QDISP_ESTIMATION_HPP
#define QDISP_ESTIMATION_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qdisp/errors.hpp"
#include "qdisp/gaussian.hpp"
#include "qdisp/hilbert.hpp"

// Multiparameter estimation core for the two-parameter displacement model
// with generators G1 = p (shift x0) and G2 = x (shift p0), evaluated at the
// origin: model derivatives, SLD operators, QFI matrix, Uhlmann curvature,
// the quantumness parameter R and scalar Cramer-Rao bounds.

namespace qdisp {

using WeightMatrix = Eigen::Matrix2d;

struct SLDSet {
    Obs L1, L2;
    int support_rank = 0;
    double support_cutoff = 0.0;
};

// Derivative of the displaced state at the origin: -i [G, rho],
// hermitized and traceless.
inline Mat model_derivative(const DensOp& rho, const Obs& g) {
    if (rho.rows() != g.rows()) throw invalid_input("model_derivative: dimension mismatch");
    return hermitize(-kI * (g * rho - rho * g));
}

inline constexpr double kSupportCutoff = 1e-12;

namespace detail {

struct RhoEig {
    Eigen::VectorXd p;
    Mat v;
};

inline RhoEig eig_rho(const DensOp& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(rho));
    RhoEig e{es.eigenvalues(), es.eigenvectors()};
    for (int j = 0; j < e.p.size(); ++j) e.p(j) = std::max(e.p(j), 0.0);
    return e;
}

// Minimal-norm SLD in the eigenbasis of rho; entries across the kernel
// are zeroed (they never affect Q or D).
inline Obs sld_in_eigenbasis(const RhoEig& e, const Mat& drho, double cutoff) {
    const double gate = cutoff * e.p.maxCoeff();
    const Mat de = e.v.adjoint() * drho * e.v;
    Mat l = Mat::Zero(de.rows(), de.cols());
    for (int j = 0; j < de.rows(); ++j)
        for (int k = 0; k < de.cols(); ++k) {
            const double den = e.p(j) + e.p(k);
            if (den > gate) l(j, k) = 2.0 * de(j, k) / den;
        }
    return hermitize(e.v * l * e.v.adjoint());
}

}  // namespace detail

// Solve the Lyapunov equation drho = (L rho + rho L)/2 for the SLD.
inline Obs solve_sld(const DensOp& rho, const Mat& drho, double support_cutoff = kSupportCutoff) {
    if (rho.rows() != drho.rows()) throw invalid_input("solve_sld: dimension mismatch");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 ||
        (drho - drho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw invalid_input("solve_sld: inputs must be Hermitian");
    return detail::sld_in_eigenbasis(detail::eig_rho(rho), drho, support_cutoff);
}

// Both SLDs of the displacement model at the origin.
inline SLDSet displacement_slds(const DensOp& rho, double support_cutoff = kSupportCutoff) {
    const Dim dim(static_cast<int>(rho.rows()));
    const Quadratures q = quadrature_ops(dim);
    const auto e = detail::eig_rho(rho);
    SLDSet s;
    s.support_cutoff = support_cutoff;
    const double gate = support_cutoff * e.p.maxCoeff();
    s.support_rank = static_cast<int>((e.p.array() > gate).count());
    s.L1 = detail::sld_in_eigenbasis(e, model_derivative(rho, q.p), support_cutoff);
    s.L2 = detail::sld_in_eigenbasis(e, model_derivative(rho, q.x), support_cutoff);
    return s;
}

// Q_jk = Tr[rho (L_j L_k + L_k L_j)/2].
inline QFIMat qfi_from_slds(const DensOp& rho, const SLDSet& s) {
    const Obs* l[2] = {&s.L1, &s.L2};
    QFIMat q;
    for (int j = 0; j < 2; ++j)
        for (int k = j; k < 2; ++k) {
            const Complex t = 0.5 * (rho * ((*l[j]) * (*l[k]) + (*l[k]) * (*l[j]))).trace();
            q(j, k) = q(k, j) = std::real(t);
        }
    return q;
}

// D_jk = -(i/2) Tr[rho [L_j, L_k]], real antisymmetric.
inline UhlmannMat uhlmann_from_slds(const DensOp& rho, const SLDSet& s) {
    const Complex t = -0.5 * kI * (rho * (s.L1 * s.L2 - s.L2 * s.L1)).trace();
    UhlmannMat d;
    d << 0.0, std::real(t), -std::real(t), 0.0;
    return d;
}

// Quantumness parameter R, computed both as the spectral norm of
// i Q^{-1} D and through the two-parameter determinant identity; the two
// routes must agree.
inline double r_parameter(const QFIMat& q, const UhlmannMat& d) {
    const double det_q = q.determinant();
    if (det_q <= 0.0) throw invalid_input("r_parameter: singular QFI matrix");
    Eigen::Matrix2cd m = kI * (q.inverse() * d).cast<Complex>();
    const Eigen::Vector2cd ev = Eigen::ComplexEigenSolver<Eigen::Matrix2cd>(m, false).eigenvalues();
    const double r_norm = std::max(std::abs(ev(0)), std::abs(ev(1)));
    const double r_det = std::sqrt(std::abs(d.determinant()) / det_q);
    if (std::abs(r_norm - r_det) > 1e-8)
        throw internal_inconsistency("r_parameter: norm and determinant routes disagree");
    if (r_norm > 1.0 + 1e-6)
        throw internal_inconsistency("r_parameter: R exceeds 1 beyond tolerance");
    return std::clamp(r_norm, 0.0, 1.0);
}

// Pure covariant model: Q = 4 Cov(G_mu, G_nu) over (p, x), equivalently
// 4 Omega^T sigma Omega.
inline QFIMat qfi_pure_cov(const Ket& psi) {
    require_tail(psi, "qfi_pure_cov");
    const Dim dim(static_cast<int>(psi.size()));
    const Quadratures quad = quadrature_ops(dim);
    const Obs* g[2] = {&quad.p, &quad.x};
    double mean[2];
    for (int j = 0; j < 2; ++j) mean[j] = expectation(*g[j], psi);
    QFIMat q;
    for (int j = 0; j < 2; ++j)
        for (int k = j; k < 2; ++k) {
            const double sym = 0.5 * expectation(Mat((*g[j]) * (*g[k]) + (*g[k]) * (*g[j])), psi);
            q(j, k) = q(k, j) = 4.0 * (sym - mean[j] * mean[k]);
        }
    return q;
}

// Pure-model Uhlmann curvature, D_mu_nu = 4 Im{<G_mu G_nu> - <G_mu><G_nu>};
// probe-independent for the displacement generators, |D12| = 2. The sign
// matches the defining route D = -(i/2) Tr[rho [L_mu, L_nu]].
inline UhlmannMat uhlmann_pure(const Ket& psi) {
    require_tail(psi, "uhlmann_pure");
    const Dim dim(static_cast<int>(psi.size()));
    const Quadratures quad = quadrature_ops(dim);
    const Complex pg = psi.dot(quad.p * (quad.x * psi));
    const double d12 = 4.0 * std::imag(pg);
    UhlmannMat d;
    d << 0.0, d12, -d12, 0.0;
    return d;
}

// Closed form for pure probes: R = 1 / sqrt(4 det sigma).
inline double r_pure_from_cm(const CovMat2& sigma) {
    const double det = sigma.determinant();
    if (det < 0.25 - 1e-9) throw invalid_input("r_pure_from_cm: det sigma < 1/4");
    return 1.0 / std::sqrt(4.0 * det);
}

// Scalar QFI coefficient q (Q = q I) for a Fock-diagonal mixture:
// q = 2 sum_n { (2n+1) p_n - 4 (n+1) p_n p_{n+1} / (p_n + p_{n+1}) }.
inline double qfi_fock_diagonal(const std::vector<double>& probs) {
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw invalid_input("qfi_fock_diagonal: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw invalid_input("qfi_fock_diagonal: probabilities must sum to 1");
    double q = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        q += (2.0 * n + 1.0) * probs[n];
        const double next = (n + 1 < probs.size()) ? probs[n + 1] : 0.0;
        if (probs[n] + next > 0.0) q -= 4.0 * (n + 1.0) * probs[n] * next / (probs[n] + next);
    }
    return 2.0 * q;
}

// Scalar SLD Cramer-Rao bound C_Q(W) = Tr[W Q^{-1}] / M.
inline double scalar_bound(const WeightMatrix& w, const QFIMat& q, int m = 1) {
    if (m < 1) throw invalid_input("scalar_bound: M must be >= 1");
    if (q.determinant() <= 0.0) throw invalid_input("scalar_bound: singular QFI matrix");
    return (w * q.inverse()).trace() / m;
}

// Holevo sandwich C_Q <= C_H <= (1 + R) C_Q.
inline std::pair<double, double> holevo_sandwich(const QFIMat& q, const UhlmannMat& d,
                                                 const WeightMatrix& w, int m = 1) {
    const double lower = scalar_bound(w, q, m);
    return {lower, (1.0 + r_parameter(q, d)) * lower};
}

struct SLDMeasurement {
    double eigval_plus, eigval_minus;
    Ket vec_plus, vec_minus;
};

// Projective measurement attaining the single-parameter SLD bound for a
// pure probe: eigenvalues +/- 2 sqrt(Var G), eigenvectors
// (|psi> -/+ i |psi_1>)/sqrt(2) with |psi_1> the normalized component of
// G|psi> orthogonal to |psi>.
inline SLDMeasurement sld_measurement_pure(const Ket& psi, const Obs& g) {
    const double var = variance(g, psi);
    if (var <= 1e-12) throw degenerate_input("sld_measurement_pure: probe is a G-eigenstate");
    const double mean = expectation(g, psi);
    const Ket psi1 = (g * psi - mean * psi) / std::sqrt(var);
    SLDMeasurement m;
    m.eigval_plus = 2.0 * std::sqrt(var);
    m.eigval_minus = -m.eigval_plus;
    m.vec_plus = (psi - kI * psi1) / std::sqrt(2.0);
    m.vec_minus = (psi + kI * psi1) / std::sqrt(2.0);
    return m;
}

struct Diagnostics {
    int dim = 0;
    double tail = 0.0;
    int support_rank = 0;
    double crosscheck_rel_err = 0.0;  // closed-form vs numeric, when applicable
    std::string crosscheck_route;
};

struct EstimationReport {
    QFIMat Q;
    UhlmannMat D;
    double R = 0.0;
    double det_Q = 0.0;
    double det_sigma = 0.0;
    double purity = 0.0;
    double scalar_bound_CQ = 0.0;  // W = I, M = 1
    double holevo_upper = 0.0;
    Diagnostics diagnostics;
};

// Full SLD-route analysis of a probe in the displacement model, with
// closed-form cross-checks when the probe is pure or Fock-diagonal.
// Strict mode turns a cross-check discrepancy above 1e-5 relative into an
// error; lenient mode records it in the diagnostics.
inline EstimationReport analyze(const DensOp& rho, bool strict = false) {
    require_tail(rho, "analyze");
    EstimationReport rep;
    rep.diagnostics.dim = static_cast<int>(rho.rows());
    rep.diagnostics.tail = tail_mass(rho, 8);

    const SLDSet slds = displacement_slds(rho);
    rep.diagnostics.support_rank = slds.support_rank;
    rep.Q = qfi_from_slds(rho, slds);
    rep.D = uhlmann_from_slds(rho, slds);
    rep.R = r_parameter(rep.Q, rep.D);
    rep.det_Q = rep.Q.determinant();
    rep.det_sigma = cm_of_state(rho).second.determinant();
    rep.purity = qdisp::purity(rho);
    rep.scalar_bound_CQ = scalar_bound(WeightMatrix::Identity(), rep.Q, 1);
    rep.holevo_upper = (1.0 + rep.R) * rep.scalar_bound_CQ;

    // cross-check against the applicable closed form
    double rel = 0.0;
    if (rep.purity > 1.0 - 1e-8) {
        const Dim dim(rep.diagnostics.dim);
        const Quadratures quad = quadrature_ops(dim);
        const Obs* g[2] = {&quad.p, &quad.x};
        QFIMat q_cov;
        for (int j = 0; j < 2; ++j)
            for (int k = j; k < 2; ++k) {
                const double sym =
                    0.5 * expectation(Mat((*g[j]) * (*g[k]) + (*g[k]) * (*g[j])), rho);
                q_cov(j, k) = q_cov(k, j) =
                    4.0 * (sym - expectation(*g[j], rho) * expectation(*g[k], rho));
            }
        rel = (rep.Q - q_cov).cwiseAbs().maxCoeff() / q_cov.cwiseAbs().maxCoeff();
        rep.diagnostics.crosscheck_route = "pure-covariance";
    } else {
        bool diagonal = true;
        for (int j = 0; j < rho.rows() && diagonal; ++j)
            for (int k = 0; k < rho.cols(); ++k)
                if (j != k && std::abs(rho(j, k)) > 1e-12) {
                    diagonal = false;
                    break;
                }
        if (diagonal) {
            std::vector<double> probs(rho.rows());
            for (int j = 0; j < rho.rows(); ++j) probs[j] = std::real(rho(j, j));
            const double q_diag = qfi_fock_diagonal(probs);
            rel = std::abs(rep.Q(0, 0) - q_diag) / q_diag;
            rep.diagnostics.crosscheck_route = "fock-diagonal";
        }
    }
    rep.diagnostics.crosscheck_rel_err = rel;
    if (strict && rel > 1e-5)
        throw internal_inconsistency("analyze: closed-form cross-check failed, rel err " +
                                     std::to_string(rel));
    return rep;
}

inline EstimationReport analyze(const Ket& psi, bool strict = false) {
    return analyze(density(psi), strict);
}

}  // namespace qdisp

#endif
