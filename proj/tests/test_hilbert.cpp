#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "qdisp/gaussian.hpp"
#include "qdisp/hilbert.hpp"

using namespace qdisp;
using Catch::Matchers::WithinAbs;

TEST_CASE("quadrature operators") {
    SECTION("d = 2 ladder element") {
        const Quadratures q = quadrature_ops(Dim(2));
        const double s = 1.0 / std::sqrt(2.0);
        CHECK_THAT(std::real(q.x(0, 1)), WithinAbs(s, 1e-15));
        CHECK_THAT(std::real(q.x(1, 0)), WithinAbs(s, 1e-15));
        CHECK_THAT(std::real(q.x(0, 0)), WithinAbs(0.0, 1e-15));
    }
    SECTION("vacuum energy is zero") {
        const Quadratures q = quadrature_ops(Dim(16));
        CHECK_THAT(expectation(q.n, fock(0, Dim(16))), WithinAbs(0.0, 1e-15));
    }
    SECTION("n = (x^2 + p^2 - 1)/2 away from the edge") {
        const int d = 16;
        const Quadratures q = quadrature_ops(Dim(d));
        const Mat res = 0.5 * (q.x * q.x + q.p * q.p - Mat::Identity(d, d)) - q.n;
        CHECK(res.topLeftCorner(d - 2, d - 2).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("commutator on the protected subspace") {
        for (int d : {4, 8, 16, 32}) {
            const Quadratures q = quadrature_ops(Dim(d));
            const Mat comm = q.x * q.p - q.p * q.x - kI * Mat::Identity(d, d);
            CHECK(comm.topLeftCorner(d - 2, d - 2).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SECTION("dimension below 2 is rejected") { CHECK_THROWS_AS(Dim(1), invalid_input); }
}

TEST_CASE("fock states") {
    CHECK((cm_of_state(fock(0, Dim(16))).second - 0.5 * CovMat2::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK((cm_of_state(fock(3, Dim(32))).second - 3.5 * CovMat2::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK_THROWS_AS(fock(8, Dim(8)), invalid_input);
}

TEST_CASE("coherent states") {
    SECTION("alpha = 0 is vacuum") {
        const Ket psi = coherent(0.0, Dim(8));
        CHECK_THAT(std::abs(psi(0)), WithinAbs(1.0, 1e-15));
    }
    SECTION("CM is displacement-invariant, mean is sqrt(2) Re alpha") {
        const auto [m, cm] = cm_of_state(coherent(1.0, Dim(32)));
        CHECK_THAT(m(0), WithinAbs(std::sqrt(2.0), 1e-10));
        CHECK_THAT(m(1), WithinAbs(0.0, 1e-10));
        CHECK((cm - 0.5 * CovMat2::Identity()).cwiseAbs().maxCoeff() < 1e-10);
    }
    SECTION("heavy tail rejected") { CHECK_THROWS_AS(coherent(4.0, Dim(8)), truncation_error); }
}

TEST_CASE("squeezed vacuum") {
    SECTION("r = 0 is vacuum") {
        const Ket psi = squeezed_vacuum(0.0, Dim(8));
        CHECK_THAT(std::abs(psi(0)), WithinAbs(1.0, 1e-15));
    }
    SECTION("CM convention: positive r squeezes x") {
        const CovMat2 cm = cm_of_state(squeezed_vacuum(0.5, Dim(64))).second;
        CHECK_THAT(cm(0, 0), WithinAbs(0.5 * std::exp(-1.0), 1e-8));
        CHECK_THAT(cm(1, 1), WithinAbs(0.5 * std::exp(1.0), 1e-8));
        CHECK_THAT(cm(0, 1), WithinAbs(0.0, 1e-8));
    }
    SECTION("pure Gaussian determinant") {
        const CovMat2 cm = cm_of_state(squeezed_vacuum(1.0, Dim(128))).second;
        CHECK_THAT(cm.determinant(), WithinAbs(0.25, 1e-8));
    }
    SECTION("tail gate") { CHECK_THROWS_AS(squeezed_vacuum(3.0, Dim(16)), truncation_error); }
}

TEST_CASE("superpose") {
    const Dim d(16);
    CHECK_THAT(std::abs(superpose({{1.0, fock(0, d)}})(0)), WithinAbs(1.0, 1e-15));
    SECTION("|0>/|4> superposition has CM 2 I") {
        const Ket psi = superpose(
            {{std::sqrt(3.0 / 8.0), fock(4, d)}, {std::sqrt(5.0 / 8.0), fock(0, d)}});
        CHECK((cm_of_state(psi).second - 2.0 * CovMat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(superpose({{1.0, fock(0, d)}, {-1.0, fock(0, d)}}), degenerate_input);
}

TEST_CASE("mix") {
    const Dim d(128);
    SECTION("single term") {
        const DensOp rho = mix({{1.0, density(fock(0, d))}});
        CHECK_THAT(std::real(rho(0, 0)), WithinAbs(1.0, 1e-14));
    }
    SECTION("squeezed mixture purity matches overlap oracle") {
        const Ket plus = squeezed_vacuum(1.0, d), minus = squeezed_vacuum(-1.0, d);
        const DensOp rho = mix({{0.5, density(plus)}, {0.5, density(minus)}});
        const double overlap2 = std::norm(plus.dot(minus));
        CHECK_THAT(purity(rho), WithinAbs(0.5 * (1.0 + overlap2), 1e-10));
    }
    SECTION("bad weights") {
        CHECK_THROWS_AS(mix({{0.6, density(fock(0, d))}, {0.6, density(fock(1, d))}}),
                        invalid_input);
        CHECK_THROWS_AS(mix({{-0.5, density(fock(0, d))}, {1.5, density(fock(1, d))}}),
                        invalid_input);
    }
}

TEST_CASE("photon-added thermal state") {
    SECTION("lambda = 0 is the one-photon state") {
        const DensOp rho = photon_added_thermal(0.0, Dim(8));
        CHECK_THAT(std::real(rho(1, 1)), WithinAbs(1.0, 1e-14));
    }
    SECTION("lambda = 1/2 probabilities") {
        const DensOp rho = photon_added_thermal(0.5, Dim(64));
        CHECK_THAT(std::real(rho(1, 1)), WithinAbs(0.25, 1e-12));
        CHECK_THAT(std::real(rho(2, 2)), WithinAbs(0.25, 1e-12));
    }
    CHECK_THROWS_AS(photon_added_thermal(1.0, Dim(64)), invalid_input);
    CHECK_THROWS_AS(photon_added_thermal(0.99, Dim(64)), truncation_error);
}

TEST_CASE("displacement unitary") {
    const Dim d(64);
    SECTION("zero shift is the identity") {
        CHECK((displacement_unitary(0.0, 0.0, Dim(8)) - Mat::Identity(8, 8)).cwiseAbs().maxCoeff() <
              1e-12);
    }
    SECTION("x-translation moves the mean by x0") {
        const Ket psi = displacement_unitary(0.1, 0.0, d) * fock(0, d);
        CHECK_THAT(expectation(quadrature_ops(d).x, psi), WithinAbs(0.1, 1e-6));
    }
    SECTION("operation order changes only a global phase") {
        const Quadratures q = quadrature_ops(d);
        const Mat u1 = displacement_unitary(0.05, 0.05, d);
        const Mat u2 = expi(q.p, 0.05) * expi(q.x, 0.05);
        const DensOp r1 = u1 * density(fock(0, d)) * u1.adjoint();
        const DensOp r2 = u2 * density(fock(0, d)) * u2.adjoint();
        CHECK((r1 - r2).cwiseAbs().maxCoeff() < 1e-10);
    }
    SECTION("inverse round trip") {
        const Mat u = displacement_unitary(0.1, 0.07, d);
        const Mat v = displacement_unitary(-0.1, -0.07, d);
        const Ket psi = coherent(0.3, d);
        CHECK((density(u * (v * psi)) - density(psi)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("expectations and energy") {
    const Dim d(32);
    const Quadratures q = quadrature_ops(d);
    CHECK_THAT(expectation(q.n, fock(3, d)), WithinAbs(3.0, 1e-12));
    CHECK_THAT(expectation(q.x, coherent(1.0, d)), WithinAbs(std::sqrt(2.0), 1e-10));
    CHECK_THAT(expectation(Mat(q.x * q.x), fock(0, d)), WithinAbs(0.5, 1e-12));
    CHECK_THAT(mean_energy(fock(0, d)), WithinAbs(0.0, 1e-14));
    CHECK_THAT(mean_energy(fock(5, d)), WithinAbs(5.0, 1e-12));
    SECTION("squeezed vacuum energy sinh^2 r") {
        const Ket psi = squeezed_vacuum(1.0, Dim(128));
        const double sinh2 = std::sinh(1.0) * std::sinh(1.0);
        CHECK_THAT(mean_energy(psi), WithinAbs(sinh2, 1e-6));
        // photon-population oracle: sum over even levels
        double e = 0.0;
        for (int n = 0; n < psi.size(); ++n) e += n * std::norm(psi(n));
        CHECK_THAT(mean_energy(psi), WithinAbs(e, 1e-10));
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(expectation(q.x, fock(0, Dim(8))), invalid_input);
    }
}

TEST_CASE("wigner origin") {
    CHECK_THAT(wigner_origin(density(fock(0, Dim(8)))), WithinAbs(1.0 / std::numbers::pi, 1e-14));
    CHECK_THAT(wigner_origin(density(fock(1, Dim(8)))), WithinAbs(-1.0 / std::numbers::pi, 1e-14));
    // geometric-series closed form for the photon-added thermal state
    const double lam = 0.5;
    const double closed = -(1.0 - lam) * (1.0 - lam) /
                          (std::numbers::pi * (1.0 + lam) * (1.0 + lam));
    CHECK_THAT(wigner_origin(photon_added_thermal(lam, Dim(64))), WithinAbs(closed, 1e-10));
}

TEST_CASE("tail mass") {
    CHECK_THAT(tail_mass(fock(0, Dim(4)), 4), WithinAbs(1.0, 1e-15));
    CHECK_THAT(tail_mass(fock(0, Dim(8)), 4), WithinAbs(0.0, 1e-15));
    CHECK_THAT(tail_mass(fock(7, Dim(8)), 1), WithinAbs(1.0, 1e-15));
    CHECK(tail_mass(coherent(1.0, Dim(32)), 4) < 1e-10);
}

TEST_CASE("energy bound property over random superpositions") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Dim d(32);
    const Quadratures q = quadrature_ops(d);
    for (int t = 0; t < 50; ++t) {
        Ket psi = Vec::Zero(d.d);
        for (int n = 0; n < 12; ++n) psi(n) = Complex{u(rng), u(rng)};
        psi /= psi.norm();
        const double e = mean_energy(psi);
        CHECK(variance(q.x, psi) <= 2.0 * e + 1.0 + 1e-8);
        CHECK(variance(q.p, psi) <= 2.0 * e + 1.0 + 1e-8);
    }
}
