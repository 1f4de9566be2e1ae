#pragma once

#include <complex>
#include <limits>
#include <vector>

namespace pdsq::specfun {

using cplx = std::complex<double>;

/// A complex number stored as log|value| plus a unit-modulus phase.
///
/// Exact zero is represented by log_magnitude == -inf; it is absorbing
/// under multiplication.
struct ScaledComplex {
    double log_magnitude = -std::numeric_limits<double>::infinity();
    cplx phase{1.0, 0.0};

    static ScaledComplex zero() { return {}; }
    static ScaledComplex from(cplx value);

    bool is_zero() const { return log_magnitude == -std::numeric_limits<double>::infinity(); }

    /// exp(log_magnitude) * phase; overflows to inf when out of range.
    cplx reconstruct() const;

    ScaledComplex operator*(const ScaledComplex& other) const;
    ScaledComplex& operator*=(const ScaledComplex& other) { return *this = *this * other; }

    /// Multiply by a plain complex factor.
    ScaledComplex scaled(cplx factor) const { return *this * from(factor); }
};

/// y_n of the three-term recurrence
///   y_0 = 1, y_1 = a, y_{k+1} = a y_k - k b y_{k-1},
/// evaluated with per-step renormalization. With a = 2z, b = 2 this is H_n(z).
ScaledComplex scaled_recurrence(int n, cplx a, cplx b);

/// All of y_0..y_{n_max} of the same recurrence.
std::vector<ScaledComplex> scaled_recurrence_sequence(int n_max, cplx a, cplx b);

/// v_n = y_n / sqrt(n!) for the same recurrence, run directly as
///   v_{k+1} = (a v_k - sqrt(k) b v_{k-1}) / sqrt(k + 1)
/// so that no factorial ever has to be divided out of a huge value.
ScaledComplex normalized_recurrence(int n, cplx a, cplx b);

std::vector<ScaledComplex> normalized_recurrence_sequence(int n_max, cplx a, cplx b);

/// Physicists' Hermite polynomial H_n(z) in overflow-safe form.
/// Throws DomainError for negative n or non-finite z.
ScaledComplex hermite_scaled(int n, cplx z);

/// ln(n!).
double log_factorial(int n);

/// n-th normalized harmonic-oscillator eigenfunction
///   pi^{-1/4} (2^n n!)^{-1/2} H_n(x) exp(-x^2/2).
/// Returns 0 on underflow.
double oscillator_eigenfunction(int n, double x);

/// phi_0(x)..phi_{n_max}(x), same conventions as oscillator_eigenfunction.
std::vector<double> oscillator_eigenfunctions(int n_max, double x);

} // namespace pdsq::specfun
