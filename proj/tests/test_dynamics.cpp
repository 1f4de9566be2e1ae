#include "pdsq/analytic.hpp"
#include "pdsq/dynamics.hpp"
#include "pdsq/errors.hpp"
#include "pdsq/fock.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pdsq;
using dynamics::HamiltonianParams;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kDim = 128;

fock::FockVector evolved_from_coherent(const HamiltonianParams& h, double t, cplx beta) {
    return dynamics::evolve(h, t, fock::coherent_vector(kDim, beta));
}

double closed_form_fidelity(const HamiltonianParams& h, double t, cplx beta) {
    const auto corr = dynamics::squeeze_correspondence(h, t);
    const auto target = fock::prepare_state(kDim, PDState(beta, corr.sector0, corr.sector1));
    return dynamics::fidelity(evolved_from_coherent(h, t, beta), target);
}

} // namespace

TEST_CASE("hamiltonian_matrix with equal couplings is the down-conversion form") {
    const HamiltonianParams h{0.7, cplx{0.3, -0.2}, cplx{0.3, -0.2}};
    const auto hm = dynamics::hamiltonian_matrix(kDim, h);
    const auto [a, ad] = fock::ladder_matrices(kDim);
    const fock::Matrix ref = h.omega * (ad.entries * a.entries) + h.g0 * (ad.entries * ad.entries) +
                             std::conj(h.g0) * (a.entries * a.entries);
    CHECK((hm.entries - ref).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(hm.role == fock::Role::hamiltonian);
}

TEST_CASE("hamiltonian_matrix free part is the number operator") {
    const auto hm = dynamics::hamiltonian_matrix(16, {1.0, {}, {}});
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            CHECK(std::abs(hm.entries(i, j) - cplx{i == j ? double(i) : 0.0, 0.0}) < 1e-13);
}

TEST_CASE("hamiltonian_matrix is self-adjoint and parity-block-diagonal") {
    const HamiltonianParams h{1.3, cplx{-0.4, 0.25}, cplx{0.1, 0.9}};
    const auto hm = dynamics::hamiltonian_matrix(kDim, h);
    CHECK((hm.entries - hm.entries.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    for (int i = 0; i < kDim; ++i)
        for (int j = (i + 1) % 2; j < kDim; j += 2)
            CHECK(hm.entries(i, j) == cplx{0.0, 0.0});
}

TEST_CASE("hamiltonian parameters are validated") {
    CHECK_THROWS_AS(dynamics::hamiltonian_matrix(3, {}), ConfigError);
    CHECK_THROWS_AS(dynamics::hamiltonian_matrix(8, {std::nan(""), {}, {}}), DomainError);
    CHECK_THROWS_AS(dynamics::hamiltonian_matrix(8, {0.0, cplx{INFINITY, 0.0}, {}}), DomainError);
    CHECK_THROWS_AS(dynamics::evolve({}, std::nan(""), fock::coherent_vector(16, 0.5)), DomainError);
}

TEST_CASE("evolve at t = 0 returns the input") {
    const auto v = fock::coherent_vector(kDim, cplx{1.0, 0.5});
    const auto out = dynamics::evolve({1.0, 0.2, 0.1}, 0.0, v);
    CHECK(out.amplitudes == v.amplitudes);
}

TEST_CASE("free evolution rotates a coherent state") {
    const cplx beta{1.2, -0.4};
    const double omega = 0.8;
    const double t = 2.5;
    const auto out = evolved_from_coherent({omega, {}, {}}, t, beta);
    const auto ref = fock::coherent_vector(kDim, beta * std::exp(cplx{0.0, -omega * t}));
    CHECK((out.amplitudes - ref.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
    for (int n = 0; n < 20; ++n) {
        const double poisson =
            std::exp(n * std::log(std::abs(beta)) - 0.5 * std::norm(beta) - 0.5 * std::lgamma(n + 1.0));
        CHECK(std::abs(std::abs(out.amplitudes(n)) - poisson) < 1e-12);
    }
}

TEST_CASE("evolution preserves the norm and reports leakage") {
    const auto out = evolved_from_coherent({0.3, cplx{0.2, 0.1}, cplx{-0.05, 0.15}}, 1.5, cplx{1.0, 1.0});
    CHECK(std::abs(out.norm() - 1.0) <= 1e-10);
    CHECK(out.leakage <= fock::kLeakTolerance);
    CHECK_THROWS_AS(dynamics::evolve({0.0, 1.5, 1.5}, 3.0, fock::coherent_vector(32, 2.0)), TruncationError);
}

TEST_CASE("squeeze_correspondence") {
    SUBCASE("zero coupling gives no squeezing") {
        const auto c = dynamics::squeeze_correspondence({0.0, {}, cplx{0.1, 0.0}}, 2.0);
        CHECK(c.sector0.r() == 0.0);
        CHECK(c.sector1.r() == doctest::Approx(0.4).epsilon(1e-15));
    }
    SUBCASE("real positive coupling") {
        const double g0 = 0.2;
        const auto c = dynamics::squeeze_correspondence({0.0, g0, {}}, 1.0);
        CHECK(c.sector0.r() == doctest::Approx(2.0 * g0).epsilon(1e-15));
        CHECK(c.sector0.theta() == doctest::Approx(-kPi / 2).epsilon(1e-15));
        CHECK(c.sector0.lambda() == 0.0);
        CHECK(std::abs(c.sector0.xi() - cplx{0.0, -2.0 * g0}) < 1e-15);
    }
    SUBCASE("the opposite sign of theta does not reproduce the evolution") {
        const HamiltonianParams h{0.0, 0.2, {}};
        const auto flipped = fock::prepare_state(kDim, PDState(1.0, SectorParams(0.4, kPi / 2, 0.0), {}));
        CHECK(dynamics::fidelity(evolved_from_coherent(h, 1.0, 1.0), flipped) < 0.99);
        CHECK(closed_form_fidelity(h, 1.0, 1.0) >= 1.0 - 1e-8);
    }
    SUBCASE("general complex coupling") {
        const cplx g{-0.1, 0.25};
        const double t = 0.8;
        const auto c = dynamics::squeeze_correspondence({0.0, g, {}}, t);
        CHECK(std::abs(c.sector0.xi() - cplx{0.0, -2.0} * g * t) < 1e-15);
    }
    SUBCASE("nonzero omega is unsupported") {
        CHECK_THROWS_AS(dynamics::squeeze_correspondence({0.5, 0.1, 0.1}, 1.0), UnsupportedCase);
    }
}

TEST_CASE("omega = 0 evolution reaches the closed-form state") {
    CHECK(closed_form_fidelity({0.0, 0.2, 0.05}, 1.0, 1.0) >= 1.0 - 1e-8);
    for (double g0 : {0.0, 0.1, 0.25})
        for (double g1 : {0.0, 0.15, 0.3}) {
            CAPTURE(g0);
            CAPTURE(g1);
            CHECK(closed_form_fidelity({0.0, g0, g1}, 1.0, cplx{0.8, 0.6}) >= 1.0 - 1e-8);
        }
    CHECK(closed_form_fidelity({0.0, cplx{0.1, -0.2}, cplx{-0.15, 0.05}}, 1.3, cplx{-1.1, 0.4}) >= 1.0 - 1e-8);
}

TEST_CASE("equal couplings evolve into an ordinary squeezed state") {
    const HamiltonianParams h{0.0, cplx{0.12, 0.07}, cplx{0.12, 0.07}};
    const auto out = evolved_from_coherent(h, 1.2, 0.9);
    const auto c = dynamics::squeeze_correspondence(h, 1.2);
    CHECK(c.sector0 == c.sector1);
    const auto ref = fock::pd_squeeze_matrix(kDim, c.sector0, c.sector0);
    const auto sq = fock::squeeze_matrix(kDim, c.sector0);
    const auto coh = fock::coherent_vector(kDim, 0.9);
    CHECK((sq.entries * coh.amplitudes - out.amplitudes).head(kDim / 2).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((ref.entries - sq.entries).topLeftCorner(kDim / 2, kDim / 2).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("energy and parity are conserved") {
    const HamiltonianParams h{0.6, cplx{0.15, -0.1}, cplx{-0.05, 0.2}};
    const auto hm = dynamics::hamiltonian_matrix(kDim, h);
    const auto parity = fock::projector_and_parity(kDim).parity;
    const auto v0 = fock::coherent_vector(kDim, cplx{0.9, -0.7});
    const double e0 = fock::expectation(hm, v0).real();
    const double p0 = fock::expectation(parity, v0).real();
    for (double t : {0.3, 1.0, 2.2}) {
        CAPTURE(t);
        const auto v = dynamics::evolve(h, t, v0);
        CHECK(std::abs(fock::expectation(hm, v).real() - e0) <= 1e-9 * std::abs(e0));
        CHECK(std::abs(fock::expectation(parity, v).real() - p0) <= 1e-9);
    }
}

TEST_CASE("evolution has the group property") {
    const HamiltonianParams h{0.4, cplx{0.1, 0.1}, cplx{0.2, -0.05}};
    const auto v0 = fock::coherent_vector(kDim, cplx{0.5, 1.0});
    const double t1 = 0.7;
    const double t2 = 1.1;
    const auto direct = dynamics::evolve(h, t1 + t2, v0);
    const auto split = dynamics::evolve(h, t2, dynamics::evolve(h, t1, v0));
    CHECK((direct.amplitudes - split.amplitudes).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("fidelity") {
    const auto a = fock::coherent_vector(64, 1.0);
    const auto b = fock::coherent_vector(64, cplx{0.0, 1.0});
    CHECK(dynamics::fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dynamics::fidelity(a, b) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(dynamics::fidelity(a, fock::coherent_vector(32, 1.0)), ConfigError);
}
