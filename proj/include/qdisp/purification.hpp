#ifndef QDISP_PURIFICATION_HPP
#define QDISP_PURIFICATION_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <utility>

#include "qdisp/errors.hpp"
#include "qdisp/gaussian.hpp"
#include "qdisp/hilbert.hpp"

// For any physical single-mode covariance matrix, construct a pure
// (generally non-Gaussian) Fock-basis state with exactly that covariance
// matrix: Williamson-reduce sigma, match the thermal core with a
// |0>/|N> superposition, then apply the Gaussian unitary realizing S.

namespace qdisp {

struct PurificationPlan {
    double nu = 0.5;       // Williamson eigenvalue, >= 1/2
    int N = 0;             // Fock component of the core superposition
    double lambda = 0.0;   // weight on |N>, (2 nu - 1) / (2 N)
    SympMat S = SympMat::Identity();
    EulerAngles euler{};
};

// Core state sqrt(lambda)|N> + sqrt(1-lambda)|0> whose covariance matrix
// is (lambda N + 1/2) I = nu I. N >= 3 is required: for N = 2 the
// <0|x^2|2> cross term makes the covariance matrix anisotropic.
inline Ket tau_state(double nu, int N, Dim dim) {
    if (nu < 0.5 - 1e-12) throw unphysical_input("tau_state: nu must be >= 1/2");
    const double lambda = (2.0 * nu - 1.0) / (2.0 * N);
    if (lambda > 1e-15 && N < 3) throw invalid_input("tau_state: N must be >= 3");
    if (lambda > 1.0 + 1e-12) throw invalid_input("tau_state: N too small for nu (lambda > 1)");
    if (N > dim.d - 1) throw invalid_input("tau_state: N exceeds truncation dimension");
    if (lambda <= 1e-15) return fock(0, dim);
    return superpose({{std::sqrt(std::min(lambda, 1.0)), fock(N, dim)},
                      {std::sqrt(std::max(1.0 - lambda, 0.0)), fock(0, dim)}});
}

// Fock-basis unitary realizing the symplectic map R(t1) Z(r) R(t2):
// U = exp(-i t1 n) exp((r/2)(a^2 - a^dag^2)) exp(-i t2 n).
inline Mat gaussian_unitary_fock(const EulerAngles& euler, Dim dim) {
    const int d = dim.d;
    Mat a = Mat::Zero(d, d);
    for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Mat squeeze_h = 0.5 * kI * (a * a - (a * a).adjoint());  // Hermitian generator
    Vec rot1(d), rot2v(d);
    for (int n = 0; n < d; ++n) {
        rot1(n) = std::exp(-kI * euler.theta1 * static_cast<double>(n));
        rot2v(n) = std::exp(-kI * euler.theta2 * static_cast<double>(n));
    }
    return rot1.asDiagonal() * expi(squeeze_h, euler.r) * Mat(rot2v.asDiagonal());
}

// Purify sigma: Williamson core, |0>/|N> superposition, Gaussian unitary.
inline std::pair<Ket, PurificationPlan> purify_cm(const CovMat2& sigma, Dim dim,
                                                  std::optional<int> n_choice = std::nullopt) {
    if (!physicality(sigma)) throw unphysical_input("purify_cm: unphysical covariance matrix");
    PurificationPlan plan;
    auto [s, nu] = williamson_single(sigma);
    plan.S = s;
    plan.nu = nu;
    plan.euler = euler_decompose(s);
    plan.N = n_choice.value_or(std::max(3, static_cast<int>(std::ceil(nu + 0.5))));
    const double nu_eff = (nu - 0.5 < 1e-10) ? 0.5 : nu;
    plan.lambda = (2.0 * nu_eff - 1.0) / (2.0 * plan.N);

    const Ket core = tau_state(nu_eff, plan.N, dim);
    Ket psi = gaussian_unitary_fock(plan.euler, dim) * core;
    psi /= psi.norm();
    require_tail(psi, "purify_cm");
    return {psi, plan};
}

}  // namespace qdisp

#endif
