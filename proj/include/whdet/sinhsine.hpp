#pragma once

#include <complex>
#include <cstddef>

#include "whdet/factorization.hpp"
#include "whdet/specfun.hpp"

/// The sinh-deformed sine kernel
///
///   K(x) = g sin(pi x) / (pi sinh(g x)),   g > 0,
///
/// whose symbol is F(xi) = sinh(pi^2/g) / (cosh(pi^2/g) + cosh(pi xi / g)).
/// Everything here is closed form; the generic pipeline in whdet::wh is what
/// the closed forms are checked against.
namespace whdet::sinhsine {

using specfun::Complex;

struct SinhParams {
  double g = 1.0;
  double a = 0.0;         // e^{-pi^2/g}
  double theta = 0.0;     // arccos(a), in (0, pi/2)
  double ratio = 0.0;     // theta / pi, in (0, 1/2)
  double lambda = 0.0;    // g (1 - theta/pi), decay rate of f
  double c_closed = 0.0;  // -pi^2/(2g) - g theta^2 / (2 pi^2)

  /// Throws AdmissibilityError unless g is finite and positive: at g = 0 the
  /// symbol is the indicator of [-pi, pi] and 1 - F vanishes.
  static SinhParams from_g(double g);
};

/// Gamma arguments of the Mellin-Barnes representation of f.
struct PhaseFactors {
  Complex a_mb;    // (1 + theta/pi) / 2
  Complex b_mb;    // (1 + i pi/g) / 2
  Complex beta1;   // 1 - (theta/pi - i pi/g) / 2
  Complex beta2;   // 1 - (theta/pi + i pi/g) / 2
  Complex gamma1;  // 1 + (theta/pi - i pi/g) / 2
  Complex gamma2;  // 1 + (theta/pi + i pi/g) / 2

  static PhaseFactors from(const SinhParams& p);
};

double kernel_K(double x, const SinhParams& p);
double symbol_F(double xi, const SinhParams& p);
/// ln(1 - F(xi)) without forming 1 - F, accurate when F is close to 1.
double log_one_minus_F(double xi, const SinhParams& p);

/// psi_t = (cos(pi t) - cosh(g theta t / pi)) / (t sinh(g t)), even in t,
/// with psi_0 = c_closed.
double psi_closed(double t, const SinhParams& p);

/// Phi'(xi) as 1/(2g) times the eight-term digamma combination.
double phi_prime(double xi, const SinhParams& p);

/// e^{i Phi(xi)} as the four-factor Gamma-ratio product, evaluated literally
/// from eight log-Gamma values.
Complex phase_closed(double xi, const SinhParams& p);

/// Phi(xi) itself (continuous, Phi(0) = 0), from the conjugate pairs
///   2 Im[lnG(A + is) + lnG(1 - A + is) + lnG(1/2 + i(pi - xi)/2g) + lnG(1/2 - i(pi + xi)/2g)],
/// with A = (1 + theta/pi)/2, s = xi/2g.
double phase_angle_closed(double xi, const SinhParams& p);

/// Real Gamma-ratio prefactors of the two decaying terms of f.
double first_prefactor(const SinhParams& p);
double second_prefactor(const SinhParams& p);

struct FTerms {
  double first = 0.0;   // 2g P e^{-g(1-theta/pi)x} 4F3(beta...; e^{-2gx})
  double second = 0.0;  // 2g Q e^{-g(1+theta/pi)x} 4F3(gamma...; e^{-2gx})
  double value() const { return first + second; }
};

/// True when theta/pi is within 1e-8 of a value where the residue sum
/// degenerates (the two families of poles collide as theta -> 0).
bool is_degenerate(const SinhParams& p);

/// The two terms of f(x), x > 0. Throws RealnessError if either term has
/// an imaginary part above 1e-10 relative.
FTerms f_closed_terms(double x, const SinhParams& p);

/// f(x) for x > 0; switches to the numeric path for degenerate parameters.
double f_closed(double x, const SinhParams& p);

/// C(g), the squared Gamma ratio controlling tr L_[alpha, inf).
double C_of_g(const SinhParams& p);

/// C(g)^k e^{-2 lambda k alpha}.
double trace_asym(double alpha, int k, const SinhParams& p);

struct AsymptoticValue {
  double value = 1.0;
  /// C e^{-2 lambda alpha} < 0.5.
  bool in_regime = true;
};

/// 1 - C(g) e^{-2 g (1 - theta/pi) alpha}.
AsymptoticValue det_asym(double alpha, const SinhParams& p);

/// Kernel spec for the generic pipeline, with closed-form ln(1 - F) and
/// decay metadata.
wh::KernelSpec make_kernel_spec(const SinhParams& p);

/// Z and c from the symbol, f from the closed form.
struct IdentityInputs {
  double Z = 1.0;
  double c = 0.0;
};
IdentityInputs identity_inputs(const SinhParams& p);

wh::RhsResult rhs_closed(const SinhParams& p, const IdentityInputs& inputs, double alpha,
                         std::size_t n_rhs);

/// Both sides of det(I - K_[0,alpha]) = Z e^{c alpha} det(I - L_[alpha, inf)).
wh::IdentityReport verify_identity(const SinhParams& p, double alpha, std::size_t n_lhs,
                                   std::size_t n_rhs, double tol);
wh::IdentityReport verify_identity(const SinhParams& p, const IdentityInputs& inputs, double alpha,
                                   std::size_t n_lhs, std::size_t n_rhs, double tol);

} // namespace whdet::sinhsine
