#pragma once

#include "pdsq/analytic.hpp"
#include "pdsq/fock.hpp"

namespace pdsq::dynamics {

/// H = omega a+a + Pi_0 (g0 a+^2 + g0* a^2) + Pi_1 (g1 a+^2 + g1* a^2), hbar = 1.
struct HamiltonianParams {
    double omega = 0.0;
    cplx g0{0.0, 0.0};
    cplx g1{0.0, 0.0};

    /// Throws DomainError on non-finite fields.
    void validate() const;
};

fock::OperatorMatrix hamiltonian_matrix(int dim, const HamiltonianParams& h);

/// exp(-i H t) v, by dense exponentiation at dimension 2*dim. The result is
/// cropped back to v.dim(); TruncationError if more than `leak_tol` escapes.
fock::FockVector evolve(const HamiltonianParams& h, double t, const fock::FockVector& v,
                        double leak_tol = fock::kLeakTolerance);

struct SqueezeCorrespondence {
    SectorParams sector0;
    SectorParams sector1;
};

/// Squeeze parameters reached from a coherent state after time t when
/// omega = 0: xi_j = -2 i g_j t, i.e. r_j = 2|g_j| t, theta_j = -(arg g_j + pi/2),
/// lambda_j = 0. UnsupportedCase for omega != 0.
SqueezeCorrespondence squeeze_correspondence(const HamiltonianParams& h, double t);

/// |<a|b>|^2 for equal-dimension vectors.
double fidelity(const fock::FockVector& a, const fock::FockVector& b);

} // namespace pdsq::dynamics
