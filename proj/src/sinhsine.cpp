#include "whdet/sinhsine.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "whdet/error.hpp"

namespace whdet::sinhsine {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
constexpr double kRealnessTolerance = 1e-10;

using specfun::digamma;
using specfun::log_gamma;

double require_real(Complex v, const char* what) {
  if (std::abs(v.imag()) > kRealnessTolerance * std::max(1.0, std::abs(v.real()))) {
    std::ostringstream msg;
    msg << what << ": imaginary part " << v.imag() << " is not negligible (real part "
        << v.real() << ")";
    throw RealnessError(msg.str());
  }
  return v.real();
}

Complex i_unit() { return {0.0, 1.0}; }

// q = i pi / g
Complex q_of(const SinhParams& p) { return {0.0, kPi / p.g}; }

} // namespace

SinhParams SinhParams::from_g(double g) {
  if (!(g > 0.0) || !std::isfinite(g)) {
    std::ostringstream msg;
    msg << "g must be finite and positive (got " << g
        << "); at g = 0 the symbol is the indicator of [-pi, pi] and the "
           "Wiener-Hopf factorization fails";
    throw AdmissibilityError(msg.str());
  }
  SinhParams p;
  p.g = g;
  p.a = std::exp(-kPi2 / g);
  if (p.a <= 0.5) {
    p.theta = 0.5 * kPi - std::asin(p.a);
  } else {
    // arccos(a) = 2 asin(sqrt((1 - a)/2)), accurate as a -> 1.
    const double one_minus_a = -std::expm1(-kPi2 / g);
    p.theta = 2.0 * std::asin(std::sqrt(0.5 * one_minus_a));
  }
  p.ratio = p.theta / kPi;
  p.lambda = g * (1.0 - p.ratio);
  p.c_closed = -kPi2 / (2.0 * g) - g * p.theta * p.theta / (2.0 * kPi2);
  return p;
}

PhaseFactors PhaseFactors::from(const SinhParams& p) {
  const Complex q = q_of(p);
  const double r = p.ratio;
  PhaseFactors f;
  f.a_mb = 0.5 * (1.0 + r);
  f.b_mb = 0.5 * (1.0 + q);
  f.beta1 = 1.0 - 0.5 * (r - q);
  f.beta2 = 1.0 - 0.5 * (r + q);
  f.gamma1 = 1.0 + 0.5 * (r - q);
  f.gamma2 = 1.0 + 0.5 * (r + q);
  return f;
}

double kernel_K(double x, const SinhParams& p) {
  const double g = p.g;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    const double c2 = (kPi2 + g * g) / 6.0;
    const double c4 = kPi2 * kPi2 / 120.0 + kPi2 * g * g / 36.0 + 7.0 * g * g * g * g / 360.0;
    return 1.0 - c2 * x2 + c4 * x2 * x2;
  }
  return g * std::sin(kPi * x) / (kPi * std::sinh(g * x));
}

double symbol_F(double xi, const SinhParams& p) {
  const double A = kPi2 / p.g;
  const double B = kPi * std::abs(xi) / p.g;
  const double M = std::max(A, B);
  const double num = std::exp(A - M) - std::exp(-A - M);
  const double den = std::exp(A - M) + std::exp(-A - M) + std::exp(B - M) + std::exp(-B - M);
  return num / den;
}

double log_one_minus_F(double xi, const SinhParams& p) {
  const double F = symbol_F(xi, p);
  if (F < 0.5) return std::log1p(-F);
  // 1 - F = (e^{-A} + cosh B) / (cosh A + cosh B)
  const double A = kPi2 / p.g;
  const double B = kPi * std::abs(xi) / p.g;
  const double M = std::max(A, B);
  const double log_num = B + std::log(std::exp(-A - B) + 0.5 * (1.0 + std::exp(-2.0 * B)));
  const double log_den =
      M + std::log(0.5 * (std::exp(A - M) + std::exp(-A - M) + std::exp(B - M) + std::exp(-B - M)));
  return log_num - log_den;
}

double psi_closed(double t, const SinhParams& p) {
  const double g = p.g;
  const double kappa = g * p.theta / kPi;
  t = std::abs(t);
  if (t < 1e-4) {
    const double k2 = kappa * kappa;
    const double n0 = -(kPi2 + k2) / 2.0;
    const double n2 = (kPi2 * kPi2 - k2 * k2) / 24.0;
    const double n4 = -(kPi2 * kPi2 * kPi2 + k2 * k2 * k2) / 720.0;
    const double d2 = g * g / 6.0;
    const double d4 = g * g * g * g / 120.0;
    const double t2 = t * t;
    return (n0 + (n2 - n0 * d2) * t2 + (n4 - n2 * d2 + n0 * (d2 * d2 - d4)) * t2 * t2) / g;
  }
  // cos(pi t) - cosh(kappa t) = -2 sin^2(pi t/2) - 2 sinh^2(kappa t/2)
  const double s = std::sin(0.5 * kPi * t);
  if (g * t <= 30.0) {
    const double sh = std::sinh(0.5 * kappa * t);
    return -2.0 * (s * s + sh * sh) / (t * std::sinh(g * t));
  }
  const double denom = -std::expm1(-2.0 * g * t);
  const double trig = 2.0 * s * s * std::exp(-g * t) / denom;
  const double hyp =
      (std::exp((kappa - g) * t) - 2.0 * std::exp(-g * t) + std::exp(-(kappa + g) * t)) /
      (2.0 * denom);
  return -2.0 * (trig + hyp) / t;
}

double phi_prime(double xi, const SinhParams& p) {
  const Complex i = i_unit();
  const double g = p.g;
  const double A = 0.5 * (1.0 + p.ratio);
  const double A1 = 0.5 * (1.0 - p.ratio);
  const Complex s = i * xi / (2.0 * g);
  const Complex plus = i * (kPi + xi) / (2.0 * g);
  const Complex minus = i * (kPi - xi) / (2.0 * g);
  const Complex sum = digamma(A - s) - digamma(0.5 + plus) + digamma(A + s) - digamma(0.5 + minus) +
                      digamma(A1 + s) - digamma(0.5 - plus) + digamma(A1 - s) -
                      digamma(0.5 - minus);
  return require_real(sum, "phi_prime") / (2.0 * g);
}

Complex phase_closed(double xi, const SinhParams& p) {
  const PhaseFactors f = PhaseFactors::from(p);
  const Complex s = i_unit() * xi / (2.0 * p.g);
  const Complex A = f.a_mb;
  const Complex B = f.b_mb;
  const Complex log_product = log_gamma(A + s) - log_gamma(A - s) + log_gamma(1.0 - A + s) -
                              log_gamma(1.0 - A - s) + log_gamma(B - s) - log_gamma(1.0 - B + s) +
                              log_gamma(1.0 - B - s) - log_gamma(B + s);
  return std::exp(log_product);
}

double phase_angle_closed(double xi, const SinhParams& p) {
  const Complex i = i_unit();
  const double g = p.g;
  const double A = 0.5 * (1.0 + p.ratio);
  const Complex s = i * xi / (2.0 * g);
  const Complex sum = log_gamma(A + s) + log_gamma(1.0 - A + s) +
                      log_gamma(0.5 + i * (kPi - xi) / (2.0 * g)) +
                      log_gamma(0.5 - i * (kPi + xi) / (2.0 * g));
  return 2.0 * sum.imag();
}

double first_prefactor(const SinhParams& p) {
  const PhaseFactors f = PhaseFactors::from(p);
  const Complex q = q_of(p);
  const double r = p.ratio;
  const Complex log_value = log_gamma(r) + log_gamma(f.beta1) + log_gamma(f.beta2) -
                            log_gamma(1.0 - r) - log_gamma(0.5 * (r + q)) -
                            log_gamma(0.5 * (r - q));
  return require_real(std::exp(log_value), "first_prefactor");
}

double second_prefactor(const SinhParams& p) {
  const PhaseFactors f = PhaseFactors::from(p);
  const Complex q = q_of(p);
  const double r = p.ratio;
  const Complex log_value = log_gamma(-r) + log_gamma(f.gamma1) + log_gamma(f.gamma2) -
                            log_gamma(1.0 + r) - log_gamma(0.5 * (q - r)) -
                            log_gamma(0.5 * (-q - r));
  return require_real(std::exp(log_value), "second_prefactor");
}

bool is_degenerate(const SinhParams& p) {
  // Bottom parameters 1 -/+ theta/pi never reach a non-positive integer for
  // theta/pi in (0, 1/2); the residue families collide as theta/pi -> 0.
  return p.ratio < 1e-8;
}

FTerms f_closed_terms(double x, const SinhParams& p) {
  if (!(x > 0.0)) throw DomainError("f_closed: x must be positive");
  const PhaseFactors f = PhaseFactors::from(p);
  const double r = p.ratio;
  const Complex z = std::exp(-2.0 * p.g * x);

  const specfun::Hyp4F3Params first_params{{f.beta1, f.beta2, f.beta2, f.beta1},
                                           {Complex(1.0 - r), Complex(1.0), Complex(1.0 - r)}};
  const specfun::Hyp4F3Params second_params{{f.gamma1, f.gamma2, f.gamma2, f.gamma1},
                                            {Complex(1.0 + r), Complex(1.0), Complex(1.0 + r)}};
  const double h1 = require_real(specfun::hyp4f3(first_params, z).value, "f_closed first 4F3");
  const double h2 = require_real(specfun::hyp4f3(second_params, z).value, "f_closed second 4F3");

  FTerms out;
  out.first = 2.0 * p.g * first_prefactor(p) * std::exp(-p.g * (1.0 - r) * x) * h1;
  out.second = 2.0 * p.g * second_prefactor(p) * std::exp(-p.g * (1.0 + r) * x) * h2;
  return out;
}

double f_closed(double x, const SinhParams& p) {
  if (is_degenerate(p)) {
    const wh::FactorizationData data = wh::FactorizationData::build(make_kernel_spec(p));
    return wh::compute_f_numeric(data, x).value;
  }
  return f_closed_terms(x, p).value();
}

double C_of_g(const SinhParams& p) {
  const PhaseFactors f = PhaseFactors::from(p);
  const Complex q = q_of(p);
  const double r = p.ratio;
  const Complex log_ratio = log_gamma(r) + log_gamma(f.beta1) + log_gamma(f.beta2) -
                            std::log(1.0 - r) - log_gamma(1.0 - r) - log_gamma(0.5 * (r + q)) -
                            log_gamma(0.5 * (r - q));
  const Complex ratio = std::exp(log_ratio);
  return require_real(ratio * ratio, "C_of_g");
}

double trace_asym(double alpha, int k, const SinhParams& p) {
  if (k < 1) throw DomainError("trace_asym: k must be at least 1");
  return std::exp(k * (std::log(C_of_g(p)) - 2.0 * p.lambda * alpha));
}

AsymptoticValue det_asym(double alpha, const SinhParams& p) {
  const double correction = trace_asym(alpha, 1, p);
  return {1.0 - correction, correction < 0.5};
}

wh::KernelSpec make_kernel_spec(const SinhParams& p) {
  wh::KernelSpec spec;
  std::ostringstream id;
  id << "sinh-sine g=" << p.g;
  spec.id = id.str();
  spec.kernel = [p](double x) { return kernel_K(x, p); };
  spec.symbol = [p](double xi) { return symbol_F(xi, p); };
  spec.log_one_minus_symbol = [p](double xi) { return log_one_minus_F(xi, p); };
  spec.kernel_decay = p.g;
  spec.factor_decay = p.lambda;
  spec.symbol_cutoff = wh::find_symbol_cutoff(spec);
  return spec;
}

IdentityInputs identity_inputs(const SinhParams& p) {
  const wh::KernelSpec spec = make_kernel_spec(p);
  return {wh::compute_Z(spec), wh::compute_c(spec)};
}

wh::RhsResult rhs_closed(const SinhParams& p, const IdentityInputs& inputs, double alpha,
                         std::size_t n_rhs) {
  if (is_degenerate(p)) {
    const wh::FactorizationData data = wh::FactorizationData::build(make_kernel_spec(p));
    return wh::rhs_det(wh::tabulate_f_numeric(data, alpha, p.lambda), inputs.Z, inputs.c, alpha,
                       n_rhs, p.lambda);
  }
  return wh::rhs_det([&p](double x) { return f_closed(x, p); }, inputs.Z, inputs.c, alpha, n_rhs,
                     p.lambda);
}

wh::IdentityReport verify_identity(const SinhParams& p, const IdentityInputs& inputs, double alpha,
                                   std::size_t n_lhs, std::size_t n_rhs, double tol) {
  if (!(alpha > 0.0)) throw DomainError("verify_identity: alpha must be positive");
  const wh::KernelSpec spec = make_kernel_spec(p);
  const fredholm::DetResult lhs = wh::lhs_det(spec, alpha, n_lhs);
  const wh::RhsResult rhs = rhs_closed(p, inputs, alpha, n_rhs);
  return wh::make_report(spec.id, alpha, lhs, rhs, n_lhs, n_rhs, tol);
}

wh::IdentityReport verify_identity(const SinhParams& p, double alpha, std::size_t n_lhs,
                                   std::size_t n_rhs, double tol) {
  return verify_identity(p, identity_inputs(p), alpha, n_lhs, n_rhs, tol);
}

} // namespace whdet::sinhsine
