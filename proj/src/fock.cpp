#include "pdsq/fock.hpp"

#include "pdsq/errors.hpp"
#include "pdsq/linalg.hpp"
#include "pdsq/specfun.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace pdsq::fock {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_dim(int dim, int min_dim, const char* what) {
    if (dim < min_dim)
        throw ConfigError(std::string(what) + ": dim must be at least " + std::to_string(min_dim) + ", got " +
                          std::to_string(dim));
}

// exp(2 i lambda K0) is diagonal with entries e^{i lambda (n + 1/2)}.
Vector k0_phase(int dim, double lambda) {
    Vector d(dim);
    for (int n = 0; n < dim; ++n)
        d(n) = std::exp(kI * (lambda * (n + 0.5)));
    return d;
}

// xi K+ - xi* K-
linalg::SparseMatrix squeeze_generator(int dim, cplx xi) {
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(2 * static_cast<std::size_t>(dim));
    for (int n = 0; n + 2 < dim; ++n) {
        const double k = 0.5 * std::sqrt((n + 1.0) * (n + 2.0));
        t.emplace_back(n + 2, n, xi * k);
        t.emplace_back(n, n + 2, -std::conj(xi) * k);
    }
    linalg::SparseMatrix g(dim, dim);
    g.setFromTriplets(t.begin(), t.end());
    return g;
}

// alpha a+ - alpha* a
linalg::SparseMatrix displacement_generator(int dim, cplx alpha) {
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(2 * static_cast<std::size_t>(dim));
    for (int n = 0; n + 1 < dim; ++n) {
        const double k = std::sqrt(n + 1.0);
        t.emplace_back(n + 1, n, alpha * k);
        t.emplace_back(n, n + 1, -std::conj(alpha) * k);
    }
    linalg::SparseMatrix g(dim, dim);
    g.setFromTriplets(t.begin(), t.end());
    return g;
}

Vector parity_part(const Vector& v, int j) {
    Vector out = Vector::Zero(v.size());
    for (Eigen::Index n = j; n < v.size(); n += 2)
        out(n) = v(n);
    return out;
}

// U x on a vector of any (already padded) dimension.
Vector apply_pd_squeeze(const PDState& s, const Vector& x) {
    const int dim = static_cast<int>(x.size());
    Vector out = Vector::Zero(dim);
    for (int j = 0; j < 2; ++j) {
        const auto& p = s.sector(j);
        Vector part = parity_part(x, j).cwiseProduct(k0_phase(dim, p.lambda()));
        out += linalg::expm_multiply(squeeze_generator(dim, p.xi()), part);
    }
    return out;
}

// U+ x, with U+ = sum_j Pi_j exp(-2 i lambda_j K0) exp(-(xi_j K+ - xi_j* K-)).
Vector apply_pd_squeeze_adjoint(const PDState& s, const Vector& x) {
    const int dim = static_cast<int>(x.size());
    Vector out = Vector::Zero(dim);
    for (int j = 0; j < 2; ++j) {
        const auto& p = s.sector(j);
        Vector part = linalg::expm_multiply(-squeeze_generator(dim, p.xi()), parity_part(x, j));
        out += part.cwiseProduct(k0_phase(dim, -p.lambda()));
    }
    return out;
}

Vector pad(const Vector& v, int dim) {
    Vector out = Vector::Zero(dim);
    out.head(v.size()) = v;
    return out;
}

double tail_norm2(const Vector& v, int from) {
    return from >= v.size() ? 0.0 : v.tail(v.size() - from).squaredNorm();
}

// Dense S at the given (padded) dimension.
Matrix dense_squeeze(int dim, const SectorParams& p) {
    const auto k = su11_generators(dim);
    const Matrix g = p.xi() * k.k_plus.entries - std::conj(p.xi()) * k.k_minus.entries;
    const Matrix e = g.exp();
    return e * k0_phase(dim, p.lambda()).asDiagonal();
}

// Crop a padded unitary, recording the per-column loss.
OperatorMatrix crop_unitary(const Matrix& padded, int dim, Role role) {
    OperatorMatrix out;
    out.role = role;
    out.entries = padded.topLeftCorner(dim, dim);
    const int rest = static_cast<int>(padded.rows()) - dim;
    const int checked = std::max(1, dim / 4);
    bool prefix = true;
    for (int c = 0; c < dim; ++c) {
        const double leak = padded.col(c).tail(rest).squaredNorm();
        if (c < checked)
            out.leakage = std::max(out.leakage, leak);
        if (prefix && leak <= kLeakTolerance)
            ++out.supported_cols;
        else
            prefix = false;
    }
    if (out.supported_cols == 0) {
        const double leak0 = padded.col(0).tail(rest).squaredNorm();
        throw TruncationError(std::string(to_string(role)) + ": vacuum column leaks " + std::to_string(leak0) +
                                  " at dim " + std::to_string(dim),
                              leak0, dim);
    }
    return out;
}

Matrix dense_pd_squeeze(int dim, const SectorParams& s0, const SectorParams& s1) {
    const Matrix a = dense_squeeze(dim, s0);
    const Matrix b = dense_squeeze(dim, s1);
    Matrix u(dim, dim);
    for (int c = 0; c < dim; ++c)
        u.col(c) = (c % 2 == 0) ? a.col(c) : b.col(c);
    return u;
}

} // namespace

std::string_view to_string(Role role) {
    switch (role) {
    case Role::identity: return "identity";
    case Role::annihilation: return "annihilation";
    case Role::creation: return "creation";
    case Role::number: return "number";
    case Role::projector_even: return "projector_even";
    case Role::projector_odd: return "projector_odd";
    case Role::parity: return "parity";
    case Role::k0: return "k0";
    case Role::k_plus: return "k_plus";
    case Role::k_minus: return "k_minus";
    case Role::squeeze: return "squeeze";
    case Role::pd_squeeze: return "pd_squeeze";
    case Role::hamiltonian: return "hamiltonian";
    case Role::quasiparticle: return "quasiparticle";
    }
    return "unknown";
}

int interior_size(int dim) { return dim * 3 / 4; }

cplx phase_point(double x, double p) { return cplx{x, p} / std::numbers::sqrt2; }

std::pair<OperatorMatrix, OperatorMatrix> ladder_matrices(int dim) {
    require_dim(dim, 2, "ladder_matrices");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    OperatorMatrix ad{Role::creation, a.adjoint(), 0.0, dim};
    return {OperatorMatrix{Role::annihilation, std::move(a), 0.0, dim}, std::move(ad)};
}

OperatorMatrix number_matrix(int dim) {
    const auto [a, ad] = ladder_matrices(dim);
    return {Role::number, ad.entries * a.entries, 0.0, dim};
}

OperatorMatrix identity_matrix(int dim) {
    require_dim(dim, 1, "identity_matrix");
    return {Role::identity, Matrix::Identity(dim, dim), 0.0, dim};
}

ParityOperators projector_and_parity(int dim) {
    require_dim(dim, 2, "projector_and_parity");
    Matrix even = Matrix::Zero(dim, dim);
    Matrix odd = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n)
        (n % 2 == 0 ? even : odd)(n, n) = 1.0;
    Matrix parity = even - odd;
    return {{Role::projector_even, std::move(even), 0.0, dim},
            {Role::projector_odd, std::move(odd), 0.0, dim},
            {Role::parity, std::move(parity), 0.0, dim}};
}

Su11Generators su11_generators(int dim) {
    require_dim(dim, 4, "su11_generators");
    // Entries are the exact matrix elements of (a a+ + a+ a)/4, a+^2/2 and a^2/2,
    // each rounded once; multiplying the rounded ladders would round twice.
    Matrix k0 = Matrix::Zero(dim, dim);
    Matrix kp = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        k0(n, n) = (2.0 * n + 1.0) / 4.0;
        if (n + 2 < dim)
            kp(n + 2, n) = 0.5 * std::sqrt((n + 1.0) * (n + 2.0));
    }
    // Truncation removes |dim> from a a+ on the last level.
    k0(dim - 1, dim - 1) = (dim - 1.0) / 4.0;
    Matrix km = kp.adjoint();
    return {{Role::k0, std::move(k0), 0.0, dim},
            {Role::k_plus, std::move(kp), 0.0, dim},
            {Role::k_minus, std::move(km), 0.0, dim}};
}

namespace {

using LongMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

LongMatrix widen(const Matrix& m) { return m.cast<std::complex<long double>>(); }

double block_deviation(const LongMatrix& d, int m) {
    return static_cast<double>(d.topLeftCorner(m, m).cwiseAbs().maxCoeff());
}

} // namespace

double IdentityReport::worst() const {
    return std::max({projector_idempotent, projector_orthogonal, projector_complete, parity_square,
                     parity_projectors, parity_ladder, su11_commutators, casimir, squeeze_projector});
}

IdentityReport algebraic_identities(int dim, const SectorParams& sample) {
    require_dim(dim, 8, "algebraic_identities");
    const int m = interior_size(dim);
    const auto ops = projector_and_parity(dim);
    const auto [a_op, ad_op] = ladder_matrices(dim);
    const auto k = su11_generators(dim);
    const LongMatrix p0 = widen(ops.even.entries);
    const LongMatrix p1 = widen(ops.odd.entries);
    const LongMatrix par = widen(ops.parity.entries);
    const LongMatrix a = widen(a_op.entries);
    const LongMatrix k0 = widen(k.k0.entries);
    const LongMatrix kp = widen(k.k_plus.entries);
    const LongMatrix km = widen(k.k_minus.entries);
    const LongMatrix id = LongMatrix::Identity(dim, dim);

    IdentityReport r;
    r.projector_idempotent = std::max(block_deviation(p0 * p0 - p0, m), block_deviation(p1 * p1 - p1, m));
    r.projector_orthogonal = std::max(block_deviation(p0 * p1, m), block_deviation(p1 * p0, m));
    r.projector_complete = block_deviation(p0 + p1 - id, m);
    r.parity_square = block_deviation(par * par - id, m);
    r.parity_projectors = std::max(block_deviation(par * p0 - p0, m), block_deviation(par * p1 + p1, m));
    r.parity_ladder = block_deviation(par * a + a * par, m);
    r.su11_commutators = std::max({block_deviation(k0 * kp - kp * k0 - kp, m),
                                   block_deviation(k0 * km - km * k0 + km, m),
                                   block_deviation(km * kp - kp * km - 2.0L * k0, m)});
    r.casimir = block_deviation(k0 * k0 - 0.5L * (kp * km + km * kp) + (3.0L / 16.0L) * id, m);
    const LongMatrix s = widen(squeeze_matrix(dim, sample).entries);
    r.squeeze_projector = std::max(block_deviation(s * p0 - p0 * s, m), block_deviation(s * p1 - p1 * s, m));
    return r;
}

OperatorMatrix squeeze_matrix(int dim, const SectorParams& p) {
    require_dim(dim, 4, "squeeze_matrix");
    return crop_unitary(dense_squeeze(2 * dim, p), dim, Role::squeeze);
}

OperatorMatrix pd_squeeze_matrix(int dim, const SectorParams& s0, const SectorParams& s1) {
    require_dim(dim, 4, "pd_squeeze_matrix");
    return crop_unitary(dense_pd_squeeze(2 * dim, s0, s1), dim, Role::pd_squeeze);
}

FockVector coherent_vector(int dim, cplx beta, double leak_tol) {
    require_dim(dim, 1, "coherent_vector");
    const double b2 = std::norm(beta);
    Vector v = Vector::Zero(dim);
    if (beta == cplx{0.0, 0.0}) {
        v(0) = 1.0;
        return {std::move(v), 0.0};
    }
    const double log_abs = std::log(std::abs(beta));
    const double phi = std::arg(beta);
    for (int n = 0; n < dim; ++n) {
        const double log_mag = -0.5 * b2 + n * log_abs - 0.5 * specfun::log_factorial(n);
        v(n) = std::exp(log_mag) * std::exp(kI * (n * phi));
    }
    const double leak = std::max(0.0, 1.0 - v.squaredNorm());
    if (leak > leak_tol)
        throw TruncationError("coherent_vector: leakage " + std::to_string(leak) + " at dim " + std::to_string(dim),
                              leak, dim);
    return {std::move(v), leak};
}

namespace {

Vector prepare_padded(int padded_dim, const PDState& s) {
    const auto coh = coherent_vector(padded_dim, s.beta());
    return apply_pd_squeeze(s, coh.amplitudes);
}

} // namespace

FockVector prepare_state(int dim, const PDState& s, double leak_tol) {
    require_dim(dim, 2, "prepare_state");
    const Vector full = prepare_padded(2 * dim, s);
    const double leak = tail_norm2(full, dim);
    if (leak > leak_tol)
        throw TruncationError("prepare_state: leakage " + std::to_string(leak) + " exceeds " +
                                  std::to_string(leak_tol) + " at dim " + std::to_string(dim),
                              leak, dim);
    return {full.head(dim), leak};
}

FockVector prepare_state_adaptive(const PDState& s, double leak_tol, int min_dim, int max_dim) {
    constexpr int kStep = 64;
    const int start = std::max(kStep, (min_dim + kStep - 1) / kStep * kStep);
    require_dim(max_dim, start, "prepare_state_adaptive");
    const Vector full = prepare_padded(2 * max_dim, s);
    for (int cut = start; cut <= max_dim; cut += kStep) {
        const double leak = tail_norm2(full, cut);
        if (leak <= leak_tol)
            return {full.head(cut), leak};
    }
    const double leak = tail_norm2(full, max_dim);
    throw TruncationError("prepare_state_adaptive: leakage " + std::to_string(leak) + " at dim " +
                              std::to_string(max_dim) + " exceeds " + std::to_string(leak_tol),
                          leak, max_dim);
}

cplx expectation(const OperatorMatrix& op, const FockVector& v) {
    if (op.dim() != v.dim())
        throw ConfigError("expectation: operator dim " + std::to_string(op.dim()) + " vs vector dim " +
                          std::to_string(v.dim()));
    return v.amplitudes.dot(op.entries * v.amplitudes);
}

Vector lower(const Vector& v) {
    const Eigen::Index dim = v.size();
    Vector out = Vector::Zero(dim);
    for (Eigen::Index n = 0; n + 1 < dim; ++n)
        out(n) = std::sqrt(static_cast<double>(n + 1)) * v(n + 1);
    return out;
}

Vector raise(const Vector& v) {
    const Eigen::Index dim = v.size();
    Vector out = Vector::Zero(dim);
    for (Eigen::Index n = 1; n < dim; ++n)
        out(n) = std::sqrt(static_cast<double>(n)) * v(n - 1);
    return out;
}

namespace {

// b = U a U+ at the padded dimension, plus the cropped-U bookkeeping.
std::pair<Matrix, OperatorMatrix> padded_quasiparticle(int dim, const SectorParams& s0, const SectorParams& s1) {
    const int padded = 2 * dim;
    const Matrix u = dense_pd_squeeze(padded, s0, s1);
    const auto [a, ad] = ladder_matrices(padded);
    Matrix b = u * a.entries * u.adjoint();
    return {std::move(b), crop_unitary(u, dim, Role::pd_squeeze)};
}

} // namespace

OperatorMatrix quasiparticle_matrix(int dim, const SectorParams& s0, const SectorParams& s1) {
    require_dim(dim, 4, "quasiparticle_matrix");
    const auto [b, u] = padded_quasiparticle(dim, s0, s1);
    return {Role::quasiparticle, b.topLeftCorner(dim, dim), u.leakage, u.supported_cols};
}

QuasiparticleReport quasiparticle_checks(int dim, const PDState& s, bool with_commutator) {
    require_dim(dim, 4, "quasiparticle_checks");
    const int padded = 2 * dim;
    const Vector state = prepare_padded(padded, s);
    const double leak = tail_norm2(state, dim);
    if (leak > kLeakTolerance)
        throw TruncationError("quasiparticle_checks: leakage " + std::to_string(leak) + " at dim " +
                                  std::to_string(dim),
                              leak, dim);

    QuasiparticleReport rep;
    // b|s> = U a U+ |s>; compared on the retained block only.
    const Vector w = apply_pd_squeeze_adjoint(s, state);
    const Vector bs = apply_pd_squeeze(s, lower(w));
    rep.eigen_residual = (bs.head(dim) - s.beta() * state.head(dim)).norm();

    // <s| U f(a, a+) U+ |s> = <w| f |w>
    const Vector aw = lower(w);
    const Vector adw = raise(w);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const Vector xw = inv_sqrt2 * (aw + adw);
    const Vector pw = kI * inv_sqrt2 * (adw - aw);
    rep.mean_xb = w.dot(xw).real();
    rep.mean_pb = w.dot(pw).real();
    rep.var_xb = xw.squaredNorm() - rep.mean_xb * rep.mean_xb;
    rep.var_pb = pw.squaredNorm() - rep.mean_pb * rep.mean_pb;

    if (with_commutator) {
        const auto [b, u] = padded_quasiparticle(dim, s.sector0(), s.sector1());
        const int m = interior_size(dim);
        const Matrix comm = b * b.adjoint() - b.adjoint() * b;
        rep.commutator_residual = (comm.topLeftCorner(m, m) - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
    }
    return rep;
}

VectorMoments vector_moments(const FockVector& v) {
    const Vector& c = v.amplitudes;
    const Vector ac = lower(c);
    const Vector aac = lower(ac);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    // The top component of a+ c is dropped; accepted states carry no weight there.
    const Vector xc = inv_sqrt2 * (ac + raise(c));
    const Vector pc = kI * inv_sqrt2 * (raise(c) - ac);
    VectorMoments m;
    m.mean_n = ac.squaredNorm();
    m.second_factorial = aac.squaredNorm();
    m.mean_x = c.dot(xc).real();
    m.mean_x2 = xc.squaredNorm();
    m.var_x = m.mean_x2 - m.mean_x * m.mean_x;
    m.mean_p = c.dot(pc).real();
    m.mean_p2 = pc.squaredNorm();
    m.var_p = m.mean_p2 - m.mean_p * m.mean_p;
    return m;
}

cplx coherent_overlap(const FockVector& v, cplx alpha) {
    if (alpha == cplx{0.0, 0.0})
        return v.dim() > 0 ? v.amplitudes(0) : cplx{0.0, 0.0};
    const double log_abs = std::log(std::abs(alpha));
    const double phi = std::arg(alpha);
    const double base = -0.5 * std::norm(alpha);
    cplx total{0.0, 0.0};
    for (int n = 0; n < v.dim(); ++n) {
        const double log_mag = base + n * log_abs - 0.5 * specfun::log_factorial(n);
        total += std::exp(log_mag) * std::exp(-kI * (n * phi)) * v.amplitudes(n);
    }
    return total;
}

double wigner_displaced_parity(const FockVector& v, cplx alpha) {
    const int padded = 2 * v.dim();
    // D(alpha)+ = D(-alpha)
    const Vector u = linalg::expm_multiply(displacement_generator(padded, -alpha), pad(v.amplitudes, padded));
    const double leak = tail_norm2(u, interior_size(padded));
    if (leak > kLeakTolerance)
        throw TruncationError("wigner_displaced_parity: displaced state leaks " + std::to_string(leak), leak,
                              v.dim());
    double w = 0.0;
    for (int n = 0; n < padded; ++n)
        w += (n % 2 == 0 ? 1.0 : -1.0) * std::norm(u(n));
    return w / std::numbers::pi;
}

cplx wavefunction_from_vector(const FockVector& v, double x) {
    if (v.dim() == 0)
        return {0.0, 0.0};
    const auto phi = specfun::oscillator_eigenfunctions(v.dim() - 1, x);
    cplx total{0.0, 0.0};
    for (int n = 0; n < v.dim(); ++n)
        total += v.amplitudes(n) * phi[static_cast<std::size_t>(n)];
    return total;
}

} // namespace pdsq::fock
