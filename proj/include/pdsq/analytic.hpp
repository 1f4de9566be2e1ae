#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace pdsq {

using cplx = std::complex<double>;

/// Map an angle onto (-pi, pi].
double normalize_angle(double angle);

/// Squeeze parameters (r, theta, lambda) acting on one parity sector,
/// S(xi, lambda) = exp(xi K+ - xi* K-) exp(2 i lambda K0), xi = -r e^{-i theta}.
class SectorParams {
public:
    SectorParams() = default;
    /// Throws DomainError for negative or non-finite r, or non-finite angles.
    SectorParams(double r, double theta, double lambda);

    double r() const { return r_; }
    double theta() const { return theta_; }
    double lambda() const { return lambda_; }
    cplx xi() const;

    friend bool operator==(const SectorParams&, const SectorParams&) = default;

private:
    double r_ = 0.0;
    double theta_ = 0.0;
    double lambda_ = 0.0;
};

/// mu = cosh r e^{-i lambda}, nu = sinh r e^{-i(theta + lambda)}.
struct BogoliubovCoeffs {
    cplx mu;
    cplx nu;
};

BogoliubovCoeffs bogoliubov_coeffs(const SectorParams& p);

/// Coherent amplitude beta squeezed independently on the even (sector 0)
/// and odd (sector 1) Fock subspaces.
class PDState {
public:
    PDState() = default;
    PDState(cplx beta, SectorParams sector0, SectorParams sector1);

    cplx beta() const { return beta_; }
    const SectorParams& sector(int j) const { return j == 0 ? sector0_ : sector1_; }
    const SectorParams& sector0() const { return sector0_; }
    const SectorParams& sector1() const { return sector1_; }

    /// psi_j = arg(beta) + lambda_j + theta_j / 2; arg(0) is taken as 0.
    double psi(int j) const;

    /// Same squeezing on both sectors (an ordinary squeezed state).
    bool is_ordinary() const { return sector0_ == sector1_; }

private:
    cplx beta_{0.0, 0.0};
    SectorParams sector0_;
    SectorParams sector1_;
};

/// Build a state from (|beta|, arg beta) and per-sector psi_j with
/// lambda_j = arg(beta) = 0 and theta_j = 2 psi_j.
PDState state_from_psi(double beta_abs, double r0, double psi0, double r1, double psi1);

/// The state rotated by exp(-i pi N / 2), whose x-moments are the
/// p-moments of the original: beta -> -i beta, theta_j -> theta_j - pi.
PDState rotate_quarter_turn(const PDState& s);

/// Cross-sector coefficients entering the quadrature moments and the
/// Wigner function. `root_omega` is the square root of `omega` on the branch
/// that agrees with the sector phases of the Fock amplitudes.
struct SectorPairCoeffs {
    cplx omega;
    cplx root_omega;
    cplx v_plus;
    cplx v_minus;
    cplx z_coef;
    cplx t_coef;
    cplx r_coef;
    cplx k_coef;
    cplx l_coef;
};

SectorPairCoeffs sector_pair_coeffs(const PDState& s, int j, int l);

struct MomentSet {
    double mean_n = 0.0;           ///< <a+ a>
    double second_factorial = 0.0; ///< <a+^2 a^2>
    /// Empty for the vacuum, where <N> = 0 and g2 is 0/0.
    std::optional<double> g2;
    std::array<double, 2> a_plus{};
    std::array<double, 2> a_minus{};
    std::array<double, 2> b_plus{};
    std::array<double, 2> b_minus{};

    bool is_vacuum() const { return !g2.has_value(); }
};

struct QuadratureMoments {
    double mean_x = 0.0;
    double mean_x2 = 0.0;
    double var_x = 0.0;
    double mean_p = 0.0;
    double mean_p2 = 0.0;
    double var_p = 0.0;
    double uncertainty_product = 0.0;
};

/// <n|s>. The Hermite factor is evaluated in its regular form
/// (tanh-weighted polynomial in beta / mu), so r = 0 needs no special case.
cplx fock_amplitude(const PDState& s, int n);

/// <0|s>..<n_max|s>.
std::vector<cplx> fock_amplitudes(const PDState& s, int n_max);

/// P(n) = |<n|s>|^2, from the closed form in |beta|, r_j and psi_j.
double photon_distribution(const PDState& s, int n);

/// P(0)..P(n_max).
std::vector<double> photon_distributions(const PDState& s, int n_max);

/// F(z) = sum_n z^n P(n) for z in [0, 1]; DomainError outside.
double characteristic_function(const PDState& s, double z);

MomentSet photon_moments(const PDState& s);

/// Psi(x) = <x|s> with x = (a + a+)/sqrt 2.
cplx position_wavefunction(const PDState& s, double x);

/// <x>, <x^2> from the closed forms; the p-moments use rotate_quarter_turn.
QuadratureMoments quadrature_moments(const PDState& s);

/// <alpha|s>.
cplx coherent_overlap(const PDState& s, cplx alpha);

/// Husimi function (1/pi) |<alpha|s>|^2.
double q_function(const PDState& s, cplx alpha);

/// Wigner function W(x, p), normalized so that its integral over dx dp is 1.
/// Throws ConsistencyError if the closed form leaves an imaginary part
/// above kWignerImagTolerance.
double wigner(const PDState& s, double x, double p);

inline constexpr double kWignerImagTolerance = 1e-8;

/// <a|b> for two states sharing all squeeze parameters;
/// UnsupportedCase otherwise.
cplx overlap(const PDState& a, const PDState& b);

/// Fock cutoff used for series checks:
/// ceil(e^{2 max r} (|beta|^2 + 6|beta| + 20)).
int truncation_nmax(const PDState& s);

} // namespace pdsq
