#include "pdsq/dynamics.hpp"

#include "pdsq/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <string>

namespace pdsq::dynamics {

namespace {
constexpr cplx kI{0.0, 1.0};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
} // namespace

void HamiltonianParams::validate() const {
    if (!std::isfinite(omega) || !finite(g0) || !finite(g1))
        throw DomainError("HamiltonianParams: all fields must be finite");
}

fock::OperatorMatrix hamiltonian_matrix(int dim, const HamiltonianParams& h) {
    h.validate();
    if (dim < 4)
        throw ConfigError("hamiltonian_matrix: dim must be at least 4");
    const auto [a, ad] = fock::ladder_matrices(dim);
    const auto proj = fock::projector_and_parity(dim);
    const fock::Matrix a2 = a.entries * a.entries;
    const fock::Matrix ad2 = ad.entries * ad.entries;
    fock::Matrix m = h.omega * (ad.entries * a.entries) + proj.even.entries * (h.g0 * ad2 + std::conj(h.g0) * a2) +
                     proj.odd.entries * (h.g1 * ad2 + std::conj(h.g1) * a2);
    return {fock::Role::hamiltonian, std::move(m), 0.0, dim};
}

fock::FockVector evolve(const HamiltonianParams& h, double t, const fock::FockVector& v, double leak_tol) {
    if (!std::isfinite(t))
        throw DomainError("evolve: non-finite time");
    const int dim = v.dim();
    if (t == 0.0)
        return v;
    const int padded = 2 * dim;
    const auto hm = hamiltonian_matrix(padded, h);
    const fock::Matrix prop = (-kI * t * hm.entries).exp();
    fock::Vector in = fock::Vector::Zero(padded);
    in.head(dim) = v.amplitudes;
    const fock::Vector out = prop * in;
    const double leak = out.tail(padded - dim).squaredNorm();
    if (leak > leak_tol)
        throw TruncationError("evolve: leakage " + std::to_string(leak) + " at dim " + std::to_string(dim), leak,
                              dim);
    return {out.head(dim), v.leakage + leak};
}

SqueezeCorrespondence squeeze_correspondence(const HamiltonianParams& h, double t) {
    h.validate();
    if (h.omega != 0.0)
        throw UnsupportedCase("squeeze_correspondence: closed-form mapping only for omega = 0");
    auto sector = [t](cplx g) {
        if (g == cplx{0.0, 0.0})
            return SectorParams{};
        // -r e^{-i theta} = -2 i g t
        const cplx xi = -2.0 * kI * g * t;
        const double r = std::abs(xi);
        return SectorParams{r, -std::arg(-xi), 0.0};
    };
    return {sector(h.g0), sector(h.g1)};
}

double fidelity(const fock::FockVector& a, const fock::FockVector& b) {
    if (a.dim() != b.dim())
        throw ConfigError("fidelity: dimension mismatch");
    return std::norm(a.amplitudes.dot(b.amplitudes));
}

} // namespace pdsq::dynamics
