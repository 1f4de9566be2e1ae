#include "pdsq/analytic.hpp"

#include "pdsq/errors.hpp"
#include "pdsq/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace pdsq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

double sector_sign(int j) { return j % 2 == 0 ? 1.0 : -1.0; }

// sqrt(mu - nu) on the branch matching the e^{i lambda / 2} phase carried by
// exp(2 i lambda K0); the remaining factor has positive real part.
cplx root_mu_minus_nu(const SectorParams& p) {
    const cplx inner = std::cosh(p.r()) - std::sinh(p.r()) * std::exp(-kI * p.theta());
    return std::exp(-0.5 * kI * p.lambda()) * std::sqrt(inner);
}

// 1 / sqrt(mu) on the same branch.
cplx inv_root_mu(const SectorParams& p) {
    return std::exp(0.5 * kI * p.lambda()) / std::sqrt(std::cosh(p.r()));
}

// (nu/2mu)^{n/2} H_n(beta / sqrt(2 mu nu)) / sqrt(n!) through the
// branch-free recurrence h_{k+1} = (beta/mu) h_k - k (nu/mu) h_{k-1},
// which stays regular as r -> 0.
std::vector<specfun::ScaledComplex> amplitude_factors(const SectorParams& p, cplx beta, int n_max) {
    const auto [mu, nu] = bogoliubov_coeffs(p);
    return specfun::normalized_recurrence_sequence(n_max, beta / mu, nu / mu);
}

cplx amplitude_prefactor_log(const SectorParams& p, cplx beta) {
    const auto [mu, nu] = bogoliubov_coeffs(p);
    return -0.5 * std::norm(beta) + std::conj(nu) / (2.0 * mu) * beta * beta + kI * (0.5 * p.lambda()) -
           0.5 * std::log(std::cosh(p.r()));
}

// (tanh r / 2)^{n/2} H_n(|beta| e^{i psi} / sqrt(sinh 2r)) / sqrt(n!), again in
// the regular form with a = |beta| e^{i psi} / cosh r and b = tanh r.
std::vector<specfun::ScaledComplex> distribution_factors(const PDState& s, int j, int n_max) {
    const double r = s.sector(j).r();
    const cplx a = std::abs(s.beta()) * std::exp(kI * s.psi(j)) / std::cosh(r);
    return specfun::normalized_recurrence_sequence(n_max, a, std::tanh(r));
}

double distribution_prefactor_log(const PDState& s, int j) {
    const double r = s.sector(j).r();
    const double b2 = std::norm(s.beta());
    return -b2 + b2 * std::tanh(r) * std::cos(2.0 * s.psi(j)) - std::log(std::cosh(r));
}

} // namespace

std::vector<cplx> fock_amplitudes(const PDState& s, int n_max) {
    if (n_max < 0)
        throw DomainError("fock_amplitudes: negative photon number");
    std::vector<cplx> out(static_cast<std::size_t>(n_max) + 1);
    for (int j = 0; j < 2; ++j) {
        const auto& p = s.sector(j);
        const cplx pref = amplitude_prefactor_log(p, s.beta());
        const auto f = amplitude_factors(p, s.beta(), n_max);
        for (int n = j; n <= n_max; n += 2) {
            const auto& h = f[static_cast<std::size_t>(n)];
            out[static_cast<std::size_t>(n)] =
                h.is_zero() ? cplx{0.0, 0.0} : std::exp(pref + h.log_magnitude) * h.phase;
        }
    }
    return out;
}

std::vector<double> photon_distributions(const PDState& s, int n_max) {
    if (n_max < 0)
        throw DomainError("photon_distributions: negative photon number");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    for (int j = 0; j < 2; ++j) {
        const double pref = distribution_prefactor_log(s, j);
        const auto f = distribution_factors(s, j, n_max);
        for (int n = j; n <= n_max; n += 2) {
            const auto& h = f[static_cast<std::size_t>(n)];
            out[static_cast<std::size_t>(n)] = h.is_zero() ? 0.0 : std::exp(pref + 2.0 * h.log_magnitude);
        }
    }
    return out;
}

double normalize_angle(double angle) {
    double a = std::remainder(angle, 2.0 * kPi);
    if (a <= -kPi)
        a += 2.0 * kPi;
    return a;
}

SectorParams::SectorParams(double r, double theta, double lambda) {
    if (!std::isfinite(r) || r < 0.0)
        throw DomainError("SectorParams: r must be finite and non-negative");
    if (!std::isfinite(theta) || !std::isfinite(lambda))
        throw DomainError("SectorParams: angles must be finite");
    r_ = r;
    theta_ = normalize_angle(theta);
    lambda_ = normalize_angle(lambda);
}

cplx SectorParams::xi() const { return -r_ * std::exp(-kI * theta_); }

BogoliubovCoeffs bogoliubov_coeffs(const SectorParams& p) {
    return {std::cosh(p.r()) * std::exp(-kI * p.lambda()),
            std::sinh(p.r()) * std::exp(-kI * (p.theta() + p.lambda()))};
}

PDState::PDState(cplx beta, SectorParams sector0, SectorParams sector1)
    : beta_(beta), sector0_(sector0), sector1_(sector1) {
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
        throw DomainError("PDState: beta must be finite");
}

double PDState::psi(int j) const {
    const double phi = beta_ == cplx{0.0, 0.0} ? 0.0 : std::arg(beta_);
    const auto& p = sector(j);
    return phi + p.lambda() + 0.5 * p.theta();
}

PDState state_from_psi(double beta_abs, double r0, double psi0, double r1, double psi1) {
    return PDState{cplx{beta_abs, 0.0}, SectorParams{r0, 2.0 * psi0, 0.0}, SectorParams{r1, 2.0 * psi1, 0.0}};
}

PDState rotate_quarter_turn(const PDState& s) {
    auto rot = [](const SectorParams& p) { return SectorParams{p.r(), p.theta() - kPi, p.lambda()}; };
    return PDState{-kI * s.beta(), rot(s.sector0()), rot(s.sector1())};
}

SectorPairCoeffs sector_pair_coeffs(const PDState& s, int j, int l) {
    const auto& pj = s.sector(j);
    const auto& pl = s.sector(l);
    const auto [mu_j, nu_j] = bogoliubov_coeffs(pj);
    const auto [mu_l, nu_l] = bogoliubov_coeffs(pl);
    const cplx beta = s.beta();
    const cplx beta_c = std::conj(beta);
    const cplx q_j = mu_j - nu_j;
    const cplx q_l_c = std::conj(mu_l - nu_l);
    const double sqrt2 = std::numbers::sqrt2;

    SectorPairCoeffs c{};
    c.omega = 1.0 / (mu_j * std::conj(mu_l) - nu_j * std::conj(nu_l));
    // sqrt(omega) = sqrt(omega q_j q_l*) / (sqrt(q_j) sqrt(q_l)*): the numerator
    // is the principal root of the Gaussian-integral prefactor.
    c.root_omega = std::sqrt(c.omega * q_j * q_l_c) / (root_mu_minus_nu(pj) * std::conj(root_mu_minus_nu(pl)));
    c.v_plus = beta_c * q_j + beta * q_l_c;
    c.v_minus = beta_c * q_j - beta * q_l_c;
    c.z_coef = std::conj(q_j) / q_j * beta * beta / 2.0 + std::conj(q_l_c) / q_l_c * beta_c * beta_c / 2.0;
    const cplx a_j = (mu_j + nu_j) / q_j;
    const cplx a_l_c = std::conj(mu_l + nu_l) / q_l_c;
    c.t_coef = a_j + a_l_c;
    c.r_coef = -a_j + a_l_c;
    c.k_coef = sqrt2 * beta / q_j + sqrt2 * beta_c / q_l_c;
    c.l_coef = -sqrt2 * beta / q_j + sqrt2 * beta_c / q_l_c;
    return c;
}

cplx fock_amplitude(const PDState& s, int n) {
    if (n < 0)
        throw DomainError("fock_amplitude: negative photon number");
    const auto& p = s.sector(n % 2);
    const auto [mu, nu] = bogoliubov_coeffs(p);
    const auto h = specfun::normalized_recurrence(n, s.beta() / mu, nu / mu);
    if (h.is_zero())
        return {0.0, 0.0};
    return std::exp(amplitude_prefactor_log(p, s.beta()) + h.log_magnitude) * h.phase;
}

double photon_distribution(const PDState& s, int n) {
    if (n < 0)
        throw DomainError("photon_distribution: negative photon number");
    const int j = n % 2;
    const double r = s.sector(j).r();
    const cplx a = std::abs(s.beta()) * std::exp(kI * s.psi(j)) / std::cosh(r);
    const auto h = specfun::normalized_recurrence(n, a, std::tanh(r));
    if (h.is_zero())
        return 0.0;
    return std::exp(distribution_prefactor_log(s, j) + 2.0 * h.log_magnitude);
}

double characteristic_function(const PDState& s, double z) {
    if (!(z >= 0.0 && z <= 1.0))
        throw DomainError("characteristic_function: z must lie in [0, 1]");
    const double b2 = std::norm(s.beta());
    double total = 0.0;
    for (int j = 0; j < 2; ++j) {
        const double r = s.sector(j).r();
        const double tau2 = 1.0 / (std::cosh(r) * std::cosh(r) - z * z * std::sinh(r) * std::sinh(r));
        const double tau = std::sqrt(tau2);
        const double tail = b2 * (1.0 - tau2 * z * z) * std::tanh(r) * std::cos(2.0 * s.psi(j));
        total += tau * (std::exp(-b2 + z * tau2 * b2 + tail) + sector_sign(j) * std::exp(-b2 - z * tau2 * b2 + tail));
    }
    return 0.5 * total;
}

MomentSet photon_moments(const PDState& s) {
    const double b2 = std::norm(s.beta());
    const double damp = std::exp(-2.0 * b2);
    MomentSet m;
    double n1 = 0.0;
    double n2 = 0.0;
    for (int j = 0; j < 2; ++j) {
        const double r = s.sector(j).r();
        const double c = std::cos(2.0 * s.psi(j));
        const double sh2 = std::sinh(r) * std::sinh(r);
        const double ch2r = std::cosh(2.0 * r);
        const double sh2r = std::sinh(2.0 * r);
        const auto idx = static_cast<std::size_t>(j);
        m.a_plus[idx] = sh2 + b2 * ch2r - b2 * sh2r * c;
        m.a_minus[idx] = sh2 - b2 * ch2r - b2 * sh2r * c;
        const double b_common = sh2 * ch2r - b2 * sh2r * (1.0 + 4.0 * sh2) * c;
        const double b_shift = 2.0 * b2 * sh2 * (1.0 + 2.0 * ch2r);
        m.b_plus[idx] = b_common + b_shift;
        m.b_minus[idx] = b_common - b_shift;

        const double sgn = sector_sign(j);
        n1 += m.a_plus[idx] + sgn * damp * m.a_minus[idx];
        n2 += m.a_plus[idx] * m.a_plus[idx] + m.b_plus[idx] +
              sgn * damp * (m.a_minus[idx] * m.a_minus[idx] + m.b_minus[idx]);
    }
    m.mean_n = 0.5 * n1;
    m.second_factorial = 0.5 * n2;
    if (!(s.beta() == cplx{0.0, 0.0} && s.sector0().r() == 0.0))
        m.g2 = m.second_factorial / (m.mean_n * m.mean_n);
    return m;
}

cplx position_wavefunction(const PDState& s, double x) {
    const cplx beta = s.beta();
    cplx total{0.0, 0.0};
    for (int j = 0; j < 2; ++j) {
        const auto& p = s.sector(j);
        const auto [mu, nu] = bogoliubov_coeffs(p);
        const cplx q = mu - nu;
        const cplx base =
            -0.5 * std::norm(beta) - std::conj(q) / q * beta * beta / 2.0 - (mu + nu) / q * (x * x / 2.0);
        const cplx shift = std::numbers::sqrt2 * beta * x / q;
        total += (std::exp(base + shift) + sector_sign(j) * std::exp(base - shift)) / root_mu_minus_nu(p);
    }
    return 0.5 * std::pow(kPi, -0.25) * total;
}

QuadratureMoments quadrature_moments(const PDState& s) {
    auto x_moments = [](const PDState& st) {
        const cplx beta = st.beta();
        const double b2 = std::norm(beta);
        cplx mean{0.0, 0.0};
        for (int j = 0; j < 2; ++j) {
            const int l = 1 - j;
            const auto c = sector_pair_coeffs(st, j, l);
            const auto [mu_j, nu_j] = bogoliubov_coeffs(st.sector(j));
            const auto [mu_l, nu_l] = bogoliubov_coeffs(st.sector(l));
            const double im = (std::conj(beta) * std::conj(beta) * (mu_j * nu_l - mu_l * nu_j)).imag();
            const cplx ph = kI * c.omega * im;
            mean += c.omega * c.root_omega *
                    (c.v_plus * std::exp((c.omega - 1.0) * b2 + ph) +
                     sector_sign(j) * c.v_minus * std::exp((-c.omega - 1.0) * b2 + ph));
        }
        mean /= 2.0 * std::numbers::sqrt2;

        const double damp = std::exp(-2.0 * b2);
        cplx second{0.0, 0.0};
        for (int j = 0; j < 2; ++j) {
            const auto c = sector_pair_coeffs(st, j, j);
            const auto [mu, nu] = bogoliubov_coeffs(st.sector(j));
            const double q2 = std::norm(mu - nu);
            second += (q2 + c.v_plus * c.v_plus) + sector_sign(j) * damp * (q2 + c.v_minus * c.v_minus);
        }
        second /= 4.0;
        return std::pair{mean.real(), second.real()};
    };

    QuadratureMoments q;
    std::tie(q.mean_x, q.mean_x2) = x_moments(s);
    std::tie(q.mean_p, q.mean_p2) = x_moments(rotate_quarter_turn(s));
    q.var_x = q.mean_x2 - q.mean_x * q.mean_x;
    q.var_p = q.mean_p2 - q.mean_p * q.mean_p;
    q.uncertainty_product = q.var_x * q.var_p;
    return q;
}

cplx coherent_overlap(const PDState& s, cplx alpha) {
    const cplx beta = s.beta();
    const cplx alpha_c = std::conj(alpha);
    const double base = -0.5 * (std::norm(alpha) + std::norm(beta));
    cplx total{0.0, 0.0};
    for (int j = 0; j < 2; ++j) {
        const auto& p = s.sector(j);
        const auto [mu, nu] = bogoliubov_coeffs(p);
        const cplx quad = std::conj(nu) / (2.0 * mu) * beta * beta - nu / (2.0 * mu) * alpha_c * alpha_c;
        const cplx lin = alpha_c * beta / mu;
        total += inv_root_mu(p) * (std::exp(base + quad + lin) + sector_sign(j) * std::exp(base + quad - lin));
    }
    return 0.5 * total;
}

double q_function(const PDState& s, cplx alpha) { return std::norm(coherent_overlap(s, alpha)) / kPi; }

double wigner(const PDState& s, double x, double p) {
    const double b2 = std::norm(s.beta());
    cplx total{0.0, 0.0};
    for (int j = 0; j < 2; ++j) {
        for (int l = 0; l < 2; ++l) {
            const auto c = sector_pair_coeffs(s, j, l);
            const cplx base = -b2 - c.z_coef - c.t_coef * (x * x / 2.0);
            const cplx u = c.r_coef * x - 2.0 * kI * p;
            const cplx two_t = 2.0 * c.t_coef;
            const cplx sum = sector_sign(j) * std::exp(base + (u - c.k_coef) * (u - c.k_coef) / two_t + c.l_coef * x) +
                             sector_sign(l) * std::exp(base + (u + c.k_coef) * (u + c.k_coef) / two_t - c.l_coef * x) +
                             sector_sign(j + l) *
                                 std::exp(base + (u + c.l_coef) * (u + c.l_coef) / two_t - c.k_coef * x) +
                             std::exp(base + (u - c.l_coef) * (u - c.l_coef) / two_t + c.k_coef * x);
            total += c.root_omega * sum;
        }
    }
    total /= 4.0 * kPi;
    if (std::abs(total.imag()) > kWignerImagTolerance)
        throw ConsistencyError("wigner: imaginary residue " + std::to_string(total.imag()) + " at x=" +
                               std::to_string(x) + ", p=" + std::to_string(p));
    return total.real();
}

cplx overlap(const PDState& a, const PDState& b) {
    if (!(a.sector0() == b.sector0() && a.sector1() == b.sector1()))
        throw UnsupportedCase("overlap: closed form requires identical squeeze parameters");
    const cplx al = a.beta();
    const cplx be = b.beta();
    return std::exp(-0.5 * std::norm(al) - 0.5 * std::norm(be) + std::conj(al) * be);
}

int truncation_nmax(const PDState& s) {
    const double r = std::max(s.sector0().r(), s.sector1().r());
    const double b = std::abs(s.beta());
    return static_cast<int>(std::ceil(std::exp(2.0 * r) * (b * b + 6.0 * b + 20.0)));
}

} // namespace pdsq
