#include "pdsq/specfun.hpp"

#include "pdsq/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace pdsq::specfun {

namespace {

// Keep the running pair near unit magnitude so that neither overflow nor
// underflow can occur between renormalizations. Scaling is by powers of two,
// so it is exact and the accumulated scale carries no rounding.
struct RunningPair {
    cplx prev;
    cplx cur;
    long exponent = 0;

    void renormalize() {
        const double m = std::max(std::abs(prev), std::abs(cur));
        if (m > 0.0 && std::isfinite(m) && (m > 0x1p60 || m < 0x1p-60)) {
            int e = 0;
            std::frexp(m, &e);
            prev = {std::ldexp(prev.real(), -e), std::ldexp(prev.imag(), -e)};
            cur = {std::ldexp(cur.real(), -e), std::ldexp(cur.imag(), -e)};
            exponent += e;
        }
    }

    ScaledComplex value() const {
        if (cur == cplx{0.0, 0.0})
            return ScaledComplex::zero();
        const double mag = std::abs(cur);
        return {static_cast<double>(exponent) * std::numbers::ln2 + std::log(mag), cur / mag};
    }
};

template <class Step>
std::vector<ScaledComplex> run_recurrence(int n_max, cplx a, Step step, bool keep_all) {
    std::vector<ScaledComplex> out;
    if (keep_all)
        out.reserve(static_cast<std::size_t>(n_max) + 1);
    RunningPair p{{0.0, 0.0}, {1.0, 0.0}};
    if (keep_all || n_max == 0)
        out.push_back(p.value());
    if (n_max == 0)
        return out;
    p.prev = p.cur;
    p.cur = a;
    if (keep_all || n_max == 1)
        out.push_back(p.value());
    for (int k = 1; k < n_max; ++k) {
        const cplx next = step(k, p.cur, p.prev);
        p.prev = p.cur;
        p.cur = next;
        p.renormalize();
        if (keep_all || k + 1 == n_max)
            out.push_back(p.value());
    }
    return out;
}

std::vector<ScaledComplex> plain(int n_max, cplx a, cplx b, bool keep_all) {
    return run_recurrence(
        n_max, a, [a, b](int k, cplx cur, cplx prev) { return a * cur - static_cast<double>(k) * b * prev; },
        keep_all);
}

std::vector<ScaledComplex> normalized(int n_max, cplx a, cplx b, bool keep_all) {
    return run_recurrence(
        n_max, a,
        [a, b](int k, cplx cur, cplx prev) {
            return (a * cur - std::sqrt(static_cast<double>(k)) * b * prev) / std::sqrt(k + 1.0);
        },
        keep_all);
}

void require_order(int n, const char* what) {
    if (n < 0)
        throw DomainError(std::string(what) + ": negative order " + std::to_string(n));
}

} // namespace

ScaledComplex ScaledComplex::from(cplx value) {
    if (value == cplx{0.0, 0.0})
        return zero();
    const double mag = std::abs(value);
    return {std::log(mag), value / mag};
}

cplx ScaledComplex::reconstruct() const {
    if (is_zero())
        return {0.0, 0.0};
    return std::exp(log_magnitude) * phase;
}

ScaledComplex ScaledComplex::operator*(const ScaledComplex& other) const {
    if (is_zero() || other.is_zero())
        return zero();
    cplx ph = phase * other.phase;
    ph /= std::abs(ph);
    return {log_magnitude + other.log_magnitude, ph};
}

ScaledComplex scaled_recurrence(int n, cplx a, cplx b) {
    require_order(n, "scaled_recurrence");
    return plain(n, a, b, false).back();
}

std::vector<ScaledComplex> scaled_recurrence_sequence(int n_max, cplx a, cplx b) {
    require_order(n_max, "scaled_recurrence_sequence");
    return plain(n_max, a, b, true);
}

ScaledComplex normalized_recurrence(int n, cplx a, cplx b) {
    require_order(n, "normalized_recurrence");
    return normalized(n, a, b, false).back();
}

std::vector<ScaledComplex> normalized_recurrence_sequence(int n_max, cplx a, cplx b) {
    require_order(n_max, "normalized_recurrence_sequence");
    return normalized(n_max, a, b, true);
}

ScaledComplex hermite_scaled(int n, cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("hermite_scaled: non-finite argument");
    return scaled_recurrence(n, 2.0 * z, {2.0, 0.0});
}

double log_factorial(int n) {
    if (n < 0)
        throw DomainError("log_factorial: negative argument");
    // Products of doubles are exact up to 22! and accurate to a few ulp
    // up to 170!, which keeps the log well inside the error budget.
    static const std::array<double, 171> table = [] {
        std::array<double, 171> t{};
        double f = 1.0;
        t[0] = 0.0;
        for (int k = 1; k <= 170; ++k) {
            f *= k;
            t[static_cast<std::size_t>(k)] = std::log(f);
        }
        return t;
    }();
    if (n <= 170)
        return table[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

std::vector<double> oscillator_eigenfunctions(int n_max, double x) {
    if (n_max < 0)
        throw DomainError("oscillator_eigenfunctions: negative order");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    // phi_{k+1} = sqrt(2/(k+1)) x phi_k - sqrt(k/(k+1)) phi_{k-1}, run in a
    // rescaled frame whose log offset starts at log(phi_0).
    double log_scale = -0.25 * std::log(std::numbers::pi) - 0.5 * x * x;
    double prev = 0.0;
    double cur = 1.0;
    auto emit = [&](int k) {
        const double v = cur == 0.0 ? 0.0 : std::exp(log_scale + std::log(std::abs(cur)));
        out[static_cast<std::size_t>(k)] = std::copysign(v, cur);
    };
    emit(0);
    for (int k = 0; k < n_max; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
        const double m = std::max(std::abs(prev), std::abs(cur));
        if (m > 0x1p300 || (m < 0x1p-300 && m > 0.0)) {
            int e = 0;
            std::frexp(m, &e);
            prev = std::ldexp(prev, -e);
            cur = std::ldexp(cur, -e);
            log_scale += e * std::numbers::ln2;
        }
        emit(k + 1);
    }
    return out;
}

double oscillator_eigenfunction(int n, double x) {
    if (n < 0)
        throw DomainError("oscillator_eigenfunction: negative order");
    return oscillator_eigenfunctions(n, x).back();
}

} // namespace pdsq::specfun
