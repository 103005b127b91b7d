#pragma once

#include <array>
#include <complex>
#include <cstddef>

namespace whdet::specfun {

using Complex = std::complex<double>;

/// Log-Gamma on the complex plane.
///
/// For Re z >= 0.5 this is the Lanczos form; below that the reflection
/// formula is applied with a branch of log(sin(pi z)) that keeps the result
/// continuous in each open half-plane. On the real axis the value is the
/// limit from above. exp(log_gamma(z)) == Gamma(z) everywhere.
///
/// Throws PoleError for z a non-positive integer.
Complex log_gamma(Complex z);

/// Digamma Psi(z) = d/dz log Gamma(z). Throws PoleError at non-positive integers.
Complex digamma(Complex z);

struct Hyp4F3Params {
  std::array<Complex, 4> top;
  std::array<Complex, 3> bottom;
};

struct SeriesOptions {
  double tolerance = 1e-15;
  std::size_t max_terms = 100000;
};

struct SeriesResult {
  Complex value;
  std::size_t terms = 0;
};

/// Generalized hypergeometric series 4F3(top; bottom; z) for |z| < 1:
///   sum_n prod (top)_n / prod (bottom)_n * z^n / n!
///
/// Terms are generated by their ratio and accumulated with Neumaier
/// compensation. Summation stops once a term is below
/// `tolerance * |partial sum|` while the terms are shrinking.
///
/// Throws PoleError if a bottom parameter is a non-positive integer,
/// DomainError if |z| >= 1, ConvergenceError if max_terms is reached.
SeriesResult hyp4f3(const Hyp4F3Params& params, Complex z,
                    const SeriesOptions& options = {});

} // namespace whdet::specfun
