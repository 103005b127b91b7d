#include "whdet/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "whdet/error.hpp"

namespace whdet::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// Godfrey's g = 7, n = 9 Lanczos coefficients (~15 digits on Re z >= 0.5).
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

Complex log_gamma_lanczos(Complex z) {
  z -= 1.0;
  Complex series = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) {
    series += kLanczos[k] / (z + static_cast<double>(k));
  }
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

// log(sin(pi z)) for Im z >= 0, continuous on the closed upper half-plane
// minus the real integers:
//   sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}),  |e^{2 pi i z}| <= 1.
Complex log_sin_pi_upper(Complex z) {
  const Complex i(0.0, 1.0);
  const Complex q = std::exp(2.0 * kPi * i * z);
  return std::log(0.5 * i) - i * kPi * z + std::log(1.0 - q);
}

// cot(pi z) for Im z >= 0, overflow-free for large Im z.
Complex cot_pi_upper(Complex z) {
  const Complex i(0.0, 1.0);
  const Complex q = std::exp(2.0 * kPi * i * z);
  return i * (q + 1.0) / (q - 1.0);
}

// Bernoulli numbers B_{2k}, k = 1..8.
constexpr std::array<double, 8> kBernoulli = {
    1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,    -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};

Complex digamma_asymptotic(Complex z) {
  const Complex inv2 = 1.0 / (z * z);
  Complex power = inv2;
  Complex sum = std::log(z) - 0.5 / z;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const double two_k = 2.0 * static_cast<double>(k + 1);
    sum -= kBernoulli[k] / two_k * power;
    power *= inv2;
  }
  return sum;
}

// Neumaier-compensated accumulator on each component.
struct CompensatedSum {
  double re = 0.0, re_c = 0.0, im = 0.0, im_c = 0.0;

  static void add(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  void operator+=(Complex x) {
    add(re, re_c, x.real());
    add(im, im_c, x.imag());
  }
  Complex value() const { return {re + re_c, im + im_c}; }
};

} // namespace

Complex log_gamma(Complex z) {
  if (is_nonpositive_integer(z)) {
    throw PoleError("log_gamma: pole at z = " + std::to_string(z.real()));
  }
  if (z.real() >= 0.5) {
    return log_gamma_lanczos(z);
  }
  // Gamma(z) Gamma(1-z) = pi / sin(pi z)
  if (z.imag() >= 0.0) {
    return std::log(kPi) - log_sin_pi_upper(z) - log_gamma_lanczos(1.0 - z);
  }
  return std::conj(std::log(kPi) - log_sin_pi_upper(std::conj(z)) -
                   log_gamma_lanczos(1.0 - std::conj(z)));
}

Complex digamma(Complex z) {
  if (is_nonpositive_integer(z)) {
    throw PoleError("digamma: pole at z = " + std::to_string(z.real()));
  }
  if (z.real() < 0.5) {
    // Psi(z) = Psi(1 - z) - pi cot(pi z)
    const Complex cot = z.imag() >= 0.0 ? cot_pi_upper(z)
                                        : std::conj(cot_pi_upper(std::conj(z)));
    return digamma(1.0 - z) - kPi * cot;
  }
  Complex shift = 0.0;
  while (z.real() < 8.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  return shift + digamma_asymptotic(z);
}

SeriesResult hyp4f3(const Hyp4F3Params& params, Complex z, const SeriesOptions& options) {
  for (const Complex& b : params.bottom) {
    if (is_nonpositive_integer(b)) {
      throw PoleError("hyp4f3: bottom parameter is a non-positive integer");
    }
  }
  if (!(std::abs(z) < 1.0)) {
    throw DomainError("hyp4f3: series requires |z| < 1");
  }

  CompensatedSum sum;
  Complex term = 1.0;
  sum += term;
  if (z == Complex(0.0)) {
    return {sum.value(), 1};
  }

  for (std::size_t n = 0; n < options.max_terms; ++n) {
    const double nd = static_cast<double>(n);
    Complex ratio = z / (nd + 1.0);
    for (const Complex& a : params.top) ratio *= a + nd;
    for (const Complex& b : params.bottom) ratio /= b + nd;
    term *= ratio;
    sum += term;

    if (term == Complex(0.0)) {
      return {sum.value(), n + 2};
    }
    const double partial = std::abs(sum.value());
    if (std::abs(term) <= options.tolerance * partial && std::abs(ratio) < 1.0) {
      return {sum.value(), n + 2};
    }
  }
  throw ConvergenceError("hyp4f3: term cap of " + std::to_string(options.max_terms) +
                         " reached");
}

} // namespace whdet::specfun
