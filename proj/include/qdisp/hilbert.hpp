#ifndef QDISP_HILBERT_HPP
#define QDISP_HILBERT_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "qdisp/errors.hpp"

// Truncated-Fock-basis engine: quadrature operators, standard probe
// states, expectation values and truncation diagnostics. Conventions:
// [x,p] = i, x = (a + a^dag)/sqrt(2), vacuum covariance matrix = I/2.

namespace qdisp {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Ket = Vec;
using DensOp = Mat;
using Obs = Mat;

inline constexpr Complex kI{0.0, 1.0};

// Truncation dimension; basis |0> ... |d-1>.
struct Dim {
    int d;
    explicit Dim(int dim) : d(dim) {
        if (d < 2) throw invalid_input("Dim: truncation dimension must be >= 2");
    }
};

inline Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }

struct Quadratures {
    Mat x, p, n;
};

// Matrix representations of x, p and the number operator on d levels.
// The identity n = (x^2 + p^2 - 1)/2 holds exactly away from the top
// two rows, where the truncated ladder products are wrong by construction.
inline Quadratures quadrature_ops(Dim dim) {
    const int d = dim.d;
    Mat a = Mat::Zero(d, d);
    for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    Quadratures q;
    q.x = (a + a.adjoint()) / std::sqrt(2.0);
    q.p = -kI * (a - a.adjoint()) / std::sqrt(2.0);
    q.n = a.adjoint() * a;
    return q;
}

inline Ket fock(int n, Dim dim) {
    if (n < 0 || n >= dim.d) throw invalid_input("fock: level out of range");
    Ket psi = Vec::Zero(dim.d);
    psi(n) = 1.0;
    return psi;
}

inline DensOp density(const Ket& psi) { return psi * psi.adjoint(); }

// Population of the top k Fock levels of a state; the basic truncation
// diagnostic used by every gate below.
inline double tail_mass(const Ket& psi, int k) {
    const int d = static_cast<int>(psi.size());
    double s = 0.0;
    for (int j = std::max(0, d - k); j < d; ++j) s += std::norm(psi(j));
    return s;
}

inline double tail_mass(const DensOp& rho, int k) {
    const int d = static_cast<int>(rho.rows());
    double s = 0.0;
    for (int j = std::max(0, d - k); j < d; ++j) s += std::real(rho(j, j));
    return s;
}

inline constexpr double kTailGate = 1e-8;

template <class State>
inline void require_tail(const State& state, const char* who, double gate = kTailGate) {
    const double t = tail_mass(state, 8);
    if (t >= gate)
        throw truncation_error(std::string(who) + ": tail mass " + std::to_string(t) +
                               " exceeds gate; increase the truncation dimension",
                               2 * static_cast<int>(state.rows()));
}

// Coherent state; amplitudes ~ alpha^n / sqrt(n!), renormalized after
// truncation. Rejects inputs whose Poisson tail does not fit in d levels.
inline Ket coherent(Complex alpha, Dim dim) {
    const int d = dim.d;
    Ket psi(d);
    psi(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < d; ++n) psi(n) = psi(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    const double captured = psi.squaredNorm();
    if (1.0 - captured >= 1e-10)
        throw truncation_error("coherent: truncated tail mass >= 1e-10", 4 * d);
    psi /= std::sqrt(captured);
    return psi;
}

// Squeezed vacuum with the sign convention that positive r squeezes x:
// CM = diag(e^{-2r}, e^{2r})/2. Even-Fock amplitudes with ratio
// -tanh(r) * sqrt((2k-1)/(2k)) between consecutive even levels.
inline Ket squeezed_vacuum(double r, Dim dim) {
    const int d = dim.d;
    Ket psi = Vec::Zero(d);
    const double th = std::tanh(r);
    double c = 1.0 / std::sqrt(std::cosh(r));
    psi(0) = c;
    for (int k = 1; 2 * k < d; ++k) {
        c *= -th * std::sqrt((2.0 * k - 1.0) / (2.0 * k));
        psi(2 * k) = c;
    }
    const double captured = psi.squaredNorm();
    if (1.0 - captured >= 1e-10)
        throw truncation_error("squeezed_vacuum: truncated tail mass >= 1e-10",
                               static_cast<int>(std::ceil(20.0 * std::exp(2.0 * std::abs(r)))));
    psi /= std::sqrt(captured);
    return psi;
}

// Normalized linear combination of kets on one common dimension.
inline Ket superpose(const std::vector<std::pair<Complex, Ket>>& terms) {
    if (terms.empty()) throw invalid_input("superpose: no terms");
    const auto d = terms.front().second.size();
    Ket psi = Vec::Zero(d);
    for (const auto& [c, k] : terms) {
        if (k.size() != d) throw invalid_input("superpose: dimension mismatch");
        psi += c * k;
    }
    const double nrm = psi.norm();
    if (nrm <= 1e-12) throw degenerate_input("superpose: resulting vector has zero norm");
    return psi / nrm;
}

// Convex combination of density operators; output is re-hermitized.
inline DensOp mix(const std::vector<std::pair<double, DensOp>>& terms) {
    if (terms.empty()) throw invalid_input("mix: no terms");
    const auto d = terms.front().second.rows();
    double wsum = 0.0;
    DensOp rho = Mat::Zero(d, d);
    for (const auto& [w, op] : terms) {
        if (w < 0.0) throw invalid_input("mix: negative weight");
        if (op.rows() != d || op.cols() != d) throw invalid_input("mix: dimension mismatch");
        rho += w * op;
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12) throw invalid_input("mix: weights must sum to 1");
    return hermitize(rho);
}

// Fock-diagonal density operator from a probability list (padded or
// truncated to d, renormalized); building block for thermal and
// vacuum/one-photon mixtures.
inline DensOp fock_diagonal_state(const std::vector<double>& probs, Dim dim) {
    const int d = dim.d;
    if (static_cast<int>(probs.size()) > d)
        throw invalid_input("fock_diagonal_state: more probabilities than levels");
    double sum = 0.0;
    for (double p : probs) {
        if (p < -1e-12) throw invalid_input("fock_diagonal_state: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw invalid_input("fock_diagonal_state: probabilities must sum to 1");
    DensOp rho = Mat::Zero(d, d);
    for (int n = 0; n < static_cast<int>(probs.size()); ++n) rho(n, n) = std::max(probs[n], 0.0) / sum;
    return rho;
}

// Thermal state with mean occupation nbar, truncated and renormalized.
inline DensOp thermal_state(double nbar, Dim dim) {
    if (nbar < 0.0) throw invalid_input("thermal_state: nbar must be >= 0");
    const double lam = nbar / (nbar + 1.0);
    const int d = dim.d;
    std::vector<double> probs(d);
    double p = 1.0 - lam, sum = 0.0;
    for (int n = 0; n < d; ++n, p *= lam) {
        probs[n] = p;
        sum += p;
    }
    if (1.0 - sum >= 1e-10)
        throw truncation_error("thermal_state: truncated tail mass >= 1e-10",
                               static_cast<int>(std::ceil(64.0 * (nbar + 1.0))));
    for (double& q : probs) q /= sum;
    return fock_diagonal_state(probs, dim);
}

// Photon-added thermal state, Fock-diagonal with p_n = n (1-lam)^2 lam^{n-1}.
inline DensOp photon_added_thermal(double lam, Dim dim) {
    if (lam < 0.0 || lam >= 1.0) throw invalid_input("photon_added_thermal: lambda must be in [0,1)");
    const int d = dim.d;
    std::vector<double> probs(d, 0.0);
    const double c = (1.0 - lam) * (1.0 - lam);
    double pw = 1.0, sum = 0.0;
    for (int n = 1; n < d; ++n, pw *= lam) {
        probs[n] = n * c * pw;
        sum += probs[n];
    }
    if (1.0 - sum >= 1e-10)
        throw truncation_error("photon_added_thermal: truncated tail mass >= 1e-10",
                               static_cast<int>(std::ceil(128.0 / (1.0 - lam))));
    for (double& q : probs) q /= sum;
    return fock_diagonal_state(probs, dim);
}

// exp(-i t H) for Hermitian H, via eigendecomposition.
inline Mat expi(const Mat& h, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(h));
    const auto& v = es.eigenvectors();
    Vec phases(h.rows());
    for (int j = 0; j < h.rows(); ++j) phases(j) = std::exp(-kI * t * es.eigenvalues()(j));
    return v * phases.asDiagonal() * v.adjoint();
}

// Displacement encoding of the two shift parameters:
// U = exp(-i p0 x) * exp(-i x0 p). The reversed order differs only by a
// global phase, so every density matrix downstream is order-independent.
inline Mat displacement_unitary(double x0, double p0, Dim dim) {
    const Quadratures q = quadrature_ops(dim);
    return expi(q.x, p0) * expi(q.p, x0);
}

inline double expectation(const Obs& obs, const DensOp& rho) {
    if (obs.rows() != rho.rows()) throw invalid_input("expectation: dimension mismatch");
    return std::real((rho * obs).trace());
}

inline double expectation(const Obs& obs, const Ket& psi) {
    if (obs.rows() != psi.size()) throw invalid_input("expectation: dimension mismatch");
    return std::real(psi.dot(obs * psi));
}

template <class State>
inline double variance(const Obs& obs, const State& state) {
    const double m = expectation(obs, state);
    return expectation(Mat(obs * obs), state) - m * m;
}

template <class State>
inline double mean_energy(const State& state) {
    const Dim dim(static_cast<int>(state.rows()));
    return expectation(quadrature_ops(dim).n, state);
}

// Wigner function at the phase-space origin: parity expectation over pi.
inline double wigner_origin(const DensOp& rho) {
    double s = 0.0;
    for (int n = 0; n < rho.rows(); ++n) s += (n % 2 == 0 ? 1.0 : -1.0) * std::real(rho(n, n));
    return s / std::numbers::pi;
}

inline double purity(const DensOp& rho) { return std::real((rho * rho).trace()); }

}  // namespace qdisp

#endif
