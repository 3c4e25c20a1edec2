#ifndef QDISP_GAUSSIAN_HPP
#define QDISP_GAUSSIAN_HPP

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <tuple>

#include "qdisp/errors.hpp"
#include "qdisp/hilbert.hpp"

// Covariance-matrix toolkit for a single mode: extraction from Fock-basis
// states, physicality, Williamson/Euler decompositions and the closed-form
// Gaussian metrology quantities Q = sigma^{-1} and D = sigma^{-1} Omega
// sigma^{-1} / 2.

namespace qdisp {

using CovMat2 = Eigen::Matrix2d;
using MeanVec = Eigen::Vector2d;
using SympMat = Eigen::Matrix2d;
using QFIMat = Eigen::Matrix2d;
using UhlmannMat = Eigen::Matrix2d;

inline CovMat2 symplectic_form() {
    CovMat2 omega;
    omega << 0.0, 1.0, -1.0, 0.0;
    return omega;
}

// Rotation in the (x,p) plane; chosen so that exp(-i theta n) acts on
// quadrature means as rot2(theta).
inline Eigen::Matrix2d rot2(double theta) {
    Eigen::Matrix2d r;
    r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return r;
}

// Single-mode squeeze map: positive r squeezes x.
inline Eigen::Matrix2d squeeze2(double r) {
    Eigen::Matrix2d z = Eigen::Matrix2d::Zero();
    z(0, 0) = std::exp(-r);
    z(1, 1) = std::exp(r);
    return z;
}

inline bool is_symplectic(const SympMat& s, double tol = 1e-10) {
    const CovMat2 omega = symplectic_form();
    return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() < tol;
}

// First moments and symmetrized covariance matrix of a truncated state.
template <class State>
inline std::pair<MeanVec, CovMat2> cm_of_state(const State& state) {
    require_tail(state, "cm_of_state");
    const Dim dim(static_cast<int>(state.rows()));
    const Quadratures q = quadrature_ops(dim);
    MeanVec m;
    m << expectation(q.x, state), expectation(q.p, state);
    CovMat2 sigma;
    sigma(0, 0) = expectation(Mat(q.x * q.x), state) - m(0) * m(0);
    sigma(1, 1) = expectation(Mat(q.p * q.p), state) - m(1) * m(1);
    sigma(0, 1) = sigma(1, 0) =
        0.5 * expectation(Mat(q.x * q.p + q.p * q.x), state) - m(0) * m(1);
    return {m, sigma};
}

// Heisenberg criterion for one mode: sigma > 0 and det sigma >= 1/4.
inline bool physicality(const CovMat2& sigma, double tol = 1e-10) {
    if (std::abs(sigma(0, 1) - sigma(1, 0)) > tol) return false;
    if (sigma(0, 0) <= 0.0 || sigma(1, 1) <= 0.0) return false;
    return sigma.determinant() >= 0.25 - tol;
}

// Gaussian-state purity mu = 1 / (2 sqrt(det sigma)). Gaussian-only
// identity; never meaningful for non-Gaussian states.
inline double purity_from_cm(const CovMat2& sigma) {
    if (!physicality(sigma)) throw invalid_input("purity_from_cm: unphysical covariance matrix");
    return 0.5 / std::sqrt(sigma.determinant());
}

// QFI matrix of a Gaussian displacement model, mixed states included.
inline QFIMat gaussian_qfi(const CovMat2& sigma) {
    if (!physicality(sigma)) throw invalid_input("gaussian_qfi: unphysical covariance matrix");
    const double det = sigma.determinant();
    if (det <= 0.0) throw invalid_input("gaussian_qfi: singular covariance matrix");
    return sigma.inverse();
}

// Uhlmann curvature of the Gaussian displacement model in the canonical
// normalization: D_G = -sigma^{-1} Omega sigma^{-1} / 2 = -2 mu^2 Omega,
// together with the quantumness value R = mu. The sign matches the
// defining route D = -(i/2) Tr[rho [L_mu, L_nu]] for generators (p, x).
inline std::pair<UhlmannMat, double> gaussian_uhlmann(const CovMat2& sigma) {
    if (!physicality(sigma)) throw invalid_input("gaussian_uhlmann: unphysical covariance matrix");
    const CovMat2 inv = sigma.inverse();
    UhlmannMat d = -0.5 * inv * symplectic_form() * inv;
    return {d, purity_from_cm(sigma)};
}

// Williamson decomposition sigma = S^T (nu I) S with S the symmetric
// square root of sigma/nu (automatically symplectic for one mode).
inline std::pair<SympMat, double> williamson_single(const CovMat2& sigma) {
    if (!physicality(sigma)) throw invalid_input("williamson_single: unphysical covariance matrix");
    const double nu = std::sqrt(sigma.determinant());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sigma / nu);
    Eigen::Vector2d roots = es.eigenvalues().cwiseSqrt();
    SympMat s = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
    return {s, nu};
}

struct EulerAngles {
    double theta1, r, theta2;
};

inline double wrap_angle(double t) {
    t = std::remainder(t, 2.0 * std::numbers::pi);
    if (t <= -std::numbers::pi) t += 2.0 * std::numbers::pi;
    return t;
}

// Euler (rotation-squeeze-rotation) factorization S = R(t1) Z(r) R(t2).
// Gauge: r >= 0, theta2 in (-pi/2, pi/2]; r = 0 puts all rotation in theta1.
inline EulerAngles euler_decompose(const SympMat& s) {
    if (!is_symplectic(s)) throw invalid_input("euler_decompose: input is not symplectic");
    const double half_pi = 0.5 * std::numbers::pi;
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double s1 = svd.singularValues()(0);
    EulerAngles e{};
    if (s1 - 1.0 < 1e-12) {
        // pure rotation
        e.theta1 = std::atan2(s(0, 1), s(0, 0));
        return e;
    }
    Eigen::Matrix2d u = svd.matrixU(), v = svd.matrixV();
    if (u.determinant() < 0.0) {
        u.col(1) *= -1.0;
        v.col(1) *= -1.0;
    }
    // S = R(alpha) diag(e^r, e^-r) R(beta); diag(e^r, e^-r) = R(pi/2) Z(r) R(-pi/2)
    const double alpha = std::atan2(u(0, 1), u(0, 0));
    const double beta = std::atan2(v(1, 0), v(0, 0));
    e.r = std::log(s1);
    e.theta1 = wrap_angle(alpha + half_pi);
    e.theta2 = wrap_angle(beta - half_pi);
    if (e.theta2 <= -half_pi || e.theta2 > half_pi) {
        e.theta1 = wrap_angle(e.theta1 + std::numbers::pi);
        e.theta2 = wrap_angle(e.theta2 + std::numbers::pi);
    }
    return e;
}

}  // namespace qdisp

#endif
