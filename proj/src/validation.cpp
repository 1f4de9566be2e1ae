#include "pdsq/validation.hpp"

#include "pdsq/errors.hpp"
#include "pdsq/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace pdsq::validation {

namespace {

constexpr double kPi = std::numbers::pi;

enum Id {
    amplitude,
    pnd,
    mean_n,
    second_factorial,
    g2,
    wavefunction,
    var_x,
    var_p,
    q,
    wigner_fn,
    var_xb,
    var_pb,
    eigen_residual
};

std::vector<Check> make_checks() {
    return {{"amplitude", 1e-10},  {"pnd", 1e-10},          {"mean_n", 1e-10}, {"second_factorial", 1e-10},
            {"g2", 1e-10},         {"wavefunction", 1e-8},  {"var_x", 1e-8},   {"var_p", 1e-8},
            {"q", 1e-8},           {"wigner", 1e-6},        {"var_xb", 1e-8},  {"var_pb", 1e-8},
            {"eigen_residual", 1e-8}};
}

void update(Check& c, double deviation, int index) {
    if (std::isnan(deviation) || deviation > c.max_deviation) {
        c.max_deviation = std::isnan(deviation) ? INFINITY : deviation;
        c.worst_case = index;
    }
}

double relative(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

void run_case(const PDState& s, int index, std::vector<Check>& checks, int& dim) {
    const auto v = fock::prepare_state_adaptive(s, kOracleLeak, 256, kOracleMaxDim);
    dim = v.dim();

    const auto amps = fock_amplitudes(s, dim - 1);
    const auto dist = photon_distributions(s, dim - 1);
    double worst_amp = 0.0;
    double worst_p = 0.0;
    for (int n = 0; n < dim; ++n) {
        worst_amp = std::max(worst_amp, std::abs(amps[static_cast<std::size_t>(n)] - v.amplitudes(n)));
        worst_p = std::max(worst_p, std::abs(dist[static_cast<std::size_t>(n)] - std::norm(v.amplitudes(n))));
    }
    update(checks[amplitude], worst_amp, index);
    update(checks[pnd], worst_p, index);

    const auto m = photon_moments(s);
    const auto vm = fock::vector_moments(v);
    update(checks[mean_n], relative(m.mean_n, vm.mean_n), index);
    update(checks[second_factorial], relative(m.second_factorial, vm.second_factorial), index);
    if (m.g2)
        update(checks[g2], relative(*m.g2, vm.second_factorial / (vm.mean_n * vm.mean_n)), index);

    const auto qm = quadrature_moments(s);
    update(checks[var_x], std::abs(qm.var_x - vm.var_x), index);
    update(checks[var_p], std::abs(qm.var_p - vm.var_p), index);

    // Sample points follow the state's centre and spread.
    const double sx = std::sqrt(vm.var_x);
    const double sp = std::sqrt(vm.var_p);
    double worst_psi = 0.0;
    for (int k = 0; k < 9; ++k) {
        const double x = vm.mean_x + 0.5 * (k - 4) * sx;
        worst_psi = std::max(worst_psi, std::abs(position_wavefunction(s, x) - fock::wavefunction_from_vector(v, x)));
    }
    update(checks[wavefunction], worst_psi, index);

    // Room for the displaced state: (sqrt(dim) + |alpha|)^2 photons.
    double reach = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            reach = std::max(reach, std::abs(fock::phase_point(vm.mean_x + 0.75 * (i - 2) * sx,
                                                               vm.mean_p + 0.75 * (j - 2) * sp)));
    const int wide = std::max(dim, static_cast<int>(std::ceil(std::pow(std::sqrt(dim) + reach + 4.0, 2))));
    fock::FockVector padded{fock::Vector::Zero(wide), v.leakage};
    padded.amplitudes.head(dim) = v.amplitudes;

    double worst_q = 0.0;
    double worst_w = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double x = vm.mean_x + 0.75 * (i - 2) * sx;
            const double p = vm.mean_p + 0.75 * (j - 2) * sp;
            const cplx alpha = fock::phase_point(x, p);
            worst_q = std::max(worst_q, std::abs(q_function(s, alpha) - std::norm(fock::coherent_overlap(v, alpha)) / kPi));
            worst_w = std::max(worst_w, std::abs(wigner(s, x, p) - fock::wigner_displaced_parity(padded, alpha)));
        }
    update(checks[q], worst_q, index);
    update(checks[wigner_fn], worst_w, index);

    const auto qp = fock::quasiparticle_checks(dim, s);
    update(checks[var_xb], std::abs(qp.var_xb - 0.5), index);
    update(checks[var_pb], std::abs(qp.var_pb - 0.5), index);
    update(checks[eigen_residual], qp.eigen_residual, index);
}

void print_state(std::ostream& os, const Case& c) {
    const PDState& s = c.state;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "  beta=(%.17g, %.17g) r0=%.17g theta0=%.17g lambda0=%.17g r1=%.17g theta1=%.17g lambda1=%.17g "
                  "oracle_dim=%d\n",
                  s.beta().real(), s.beta().imag(), s.sector0().r(), s.sector0().theta(), s.sector0().lambda(),
                  s.sector1().r(), s.sector1().theta(), s.sector1().lambda(), c.oracle_dim);
    os << buf;
}

} // namespace

PDState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.0, 4.0);
    std::uniform_real_distribution<double> sq(0.0, 1.5);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    const cplx beta = std::polar(mag(rng), ang(rng));
    const double r0 = sq(rng);
    const double t0 = ang(rng);
    const double l0 = ang(rng);
    const double r1 = sq(rng);
    const double t1 = ang(rng);
    const double l1 = ang(rng);
    return PDState(beta, SectorParams(r0, t0, l0), SectorParams(r1, t1, l1));
}

bool Report::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

const Check& Report::check(std::string_view name) const {
    for (const auto& c : checks)
        if (c.name == name)
            return c;
    throw ConfigError("no validation check named '" + std::string(name) + "'");
}

Report run(std::uint64_t seed, int n_cases) {
    if (n_cases < 1)
        throw ConfigError("validation needs at least one case");
    Report rep;
    rep.seed = seed;
    rep.checks = make_checks();
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n_cases; ++i) {
        Case c{random_state(rng), 0};
        run_case(c.state, i, rep.checks, c.oracle_dim);
        rep.cases.push_back(c);
    }
    return rep;
}

void print(std::ostream& os, const Report& report) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "validation seed=%llu cases=%zu\n", static_cast<unsigned long long>(report.seed),
                  report.cases.size());
    os << buf;
    for (const auto& c : report.checks) {
        std::snprintf(buf, sizeof buf, "%-18s max_dev=%.3e tol=%.0e %s\n", c.name.c_str(), c.max_deviation,
                      c.tolerance, c.passed() ? "PASS" : "FAIL");
        os << buf;
    }
    for (const auto& c : report.checks)
        if (!c.passed() && c.worst_case >= 0) {
            os << "failing check " << c.name << ", case " << c.worst_case << ":\n";
            print_state(os, report.cases[static_cast<std::size_t>(c.worst_case)]);
        }
    os << (report.passed() ? "overall PASS\n" : "overall FAIL\n");
}

} // namespace pdsq::validation
