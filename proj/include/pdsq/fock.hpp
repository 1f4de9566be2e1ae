#pragma once

#include "pdsq/analytic.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <utility>

// Brute-force reference model on a truncated Fock space. Everything here is
// built from a, a+ and matrix exponentials; nothing calls into the closed
// forms of analytic.hpp.
namespace pdsq::fock {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Role {
    identity,
    annihilation,
    creation,
    number,
    projector_even,
    projector_odd,
    parity,
    k0,
    k_plus,
    k_minus,
    squeeze,
    pd_squeeze,
    hamiltonian,
    quasiparticle,
};

std::string_view to_string(Role role);

/// Accepted squared-norm loss for prepared states.
inline constexpr double kLeakTolerance = 1e-10;
/// Accepted loss for coherent vectors.
inline constexpr double kCoherentLeakTolerance = 1e-12;

/// Dense operator on span{|0>..|dim-1>}.
struct OperatorMatrix {
    Role role = Role::identity;
    Matrix entries;
    /// Squared norm lost past `dim` by the worst of the first max(1, dim/4)
    /// columns. Informational; zero for operators built without cropping.
    double leakage = 0.0;
    /// Leading columns whose individual leakage is within kLeakTolerance.
    int supported_cols = 0;

    int dim() const { return static_cast<int>(entries.rows()); }
};

/// Truncated state vector. `leakage` is the squared norm that fell beyond
/// the retained dimension during preparation.
struct FockVector {
    Vector amplitudes;
    double leakage = 0.0;

    int dim() const { return static_cast<int>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }
};

/// Rows and columns below dim * 3/4, where truncation artifacts are absent.
int interior_size(int dim);

/// a with a|n> = sqrt(n)|n-1>, and a+ = a^dagger. ConfigError for dim < 2.
std::pair<OperatorMatrix, OperatorMatrix> ladder_matrices(int dim);

OperatorMatrix number_matrix(int dim);
OperatorMatrix identity_matrix(int dim);

struct ParityOperators {
    OperatorMatrix even;
    OperatorMatrix odd;
    OperatorMatrix parity;
};

/// Pi_0, Pi_1 and P = Pi_0 - Pi_1.
ParityOperators projector_and_parity(int dim);

struct Su11Generators {
    OperatorMatrix k0;
    OperatorMatrix k_plus;
    OperatorMatrix k_minus;
};

/// K0 = (a a+ + a+ a)/4, K+ = a+^2/2, K- = a^2/2. ConfigError for dim < 4.
Su11Generators su11_generators(int dim);

/// Largest entrywise deviation of each algebraic identity on the interior
/// block (indices < interior_size(dim)). Products are formed in long double
/// so that only the rounding of the stored entries remains.
struct IdentityReport {
    double projector_idempotent = 0.0; ///< Pi_j^2 - Pi_j
    double projector_orthogonal = 0.0; ///< Pi_0 Pi_1
    double projector_complete = 0.0;   ///< Pi_0 + Pi_1 - 1
    double parity_square = 0.0;        ///< P^2 - 1
    double parity_projectors = 0.0;    ///< P Pi_j - (-1)^j Pi_j
    double parity_ladder = 0.0;        ///< P a + a P
    double su11_commutators = 0.0;     ///< [K0, K+-] -+ K+-, [K-, K+] - 2 K0
    double casimir = 0.0;              ///< K0^2 - (K+ K- + K- K+)/2 + 3/16
    double squeeze_projector = 0.0;    ///< [S, Pi_j] for a sample S

    double worst() const;
};

IdentityReport algebraic_identities(int dim, const SectorParams& sample);

/// S(xi, lambda) computed by dense exponentiation at dimension 2*dim and
/// cropped. Identities hold on the first `supported_cols` columns; throws
/// TruncationError when not even the vacuum column fits.
OperatorMatrix squeeze_matrix(int dim, const SectorParams& p);

/// U = S(xi0, lambda0) Pi_0 + S(xi1, lambda1) Pi_1, same conventions.
OperatorMatrix pd_squeeze_matrix(int dim, const SectorParams& s0, const SectorParams& s1);

/// Glauber coherent state; TruncationError if more than `leak_tol` is lost.
FockVector coherent_vector(int dim, cplx beta, double leak_tol = kCoherentLeakTolerance);

/// U |beta>. The squeeze exponentials act directly on the vector at
/// dimension 2*dim before cropping; equal to pd_squeeze_matrix * coherent_vector.
FockVector prepare_state(int dim, const PDState& s, double leak_tol = kLeakTolerance);

/// The state prepared once at dimension 2*max_dim and cut at the smallest
/// multiple of 64 (at least `min_dim`) whose leakage is within `leak_tol`.
/// TruncationError if no cut up to `max_dim` qualifies.
FockVector prepare_state_adaptive(const PDState& s, double leak_tol, int min_dim = 256, int max_dim = 8192);

/// <v|op|v>. ConfigError on dimension mismatch.
cplx expectation(const OperatorMatrix& op, const FockVector& v);

/// a v and a+ v without forming matrices; a+ drops the top component.
Vector lower(const Vector& v);
Vector raise(const Vector& v);

struct QuasiparticleReport {
    /// max |[b, b+] - 1| over the interior block; only with the dense path.
    std::optional<double> commutator_residual;
    /// || b|s> - beta|s> ||
    double eigen_residual = 0.0;
    double mean_xb = 0.0;
    double mean_pb = 0.0;
    double var_xb = 0.0;
    double var_pb = 0.0;
};

/// Checks on b = U a U+. The eigenrelation and b-quadrature variances use
/// vector actions of U and U+; `with_commutator` additionally builds b as
/// a dense matrix.
QuasiparticleReport quasiparticle_checks(int dim, const PDState& s, bool with_commutator = false);

/// b = U a U+ as a dense matrix (computed at 2*dim, cropped).
OperatorMatrix quasiparticle_matrix(int dim, const SectorParams& s0, const SectorParams& s1);

/// Number and quadrature moments of a vector, x = (a + a+)/sqrt 2,
/// p = i (a+ - a)/sqrt 2.
struct VectorMoments {
    double mean_n = 0.0;
    double second_factorial = 0.0;
    double mean_x = 0.0;
    double mean_x2 = 0.0;
    double var_x = 0.0;
    double mean_p = 0.0;
    double mean_p2 = 0.0;
    double var_p = 0.0;
};

VectorMoments vector_moments(const FockVector& v);

/// <alpha|v> with the coherent amplitudes summed over the retained block.
cplx coherent_overlap(const FockVector& v, cplx alpha);

/// W(x, p) = (1/pi) <D(alpha) P D(alpha)+> with alpha = (x + i p)/sqrt 2.
double wigner_displaced_parity(const FockVector& v, cplx alpha);

/// sum_n c_n phi_n(x).
cplx wavefunction_from_vector(const FockVector& v, double x);

/// x <-> alpha convention used throughout: alpha = (x + i p)/sqrt 2.
cplx phase_point(double x, double p);

} // namespace pdsq::fock
