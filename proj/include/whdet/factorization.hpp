#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "whdet/fredholm.hpp"
#include "whdet/quadrature.hpp"

namespace whdet::wh {

using RealFunction = std::function<double(double)>;

/// A real, even convolution kernel K(x) and its symbol
/// F(xi) = int K(x) e^{i xi x} dx.
///
/// The symbol must satisfy 1 - F > 0 on the real line (zero winding, bounded
/// away from zero) and decay exponentially; the pipeline works with the real
/// logarithm ln(1 - F).
struct KernelSpec {
  std::string id;
  RealFunction kernel;
  RealFunction symbol;
  /// Optional accurate ln(1 - F(xi)); defaults to log1p(-F).
  RealFunction log_one_minus_symbol;
  /// xi beyond which |ln(1 - F)| < 1e-15. Zero means: search for it.
  double symbol_cutoff = 0.0;
  /// Exponential decay rate of |K(x)|.
  double kernel_decay = 1.0;
  /// Exponential decay rate of psi_t and of f, when known in closed form.
  std::optional<double> factor_decay;
};

/// ln(1 - F(xi)). Throws AdmissibilityError if 1 - F(xi) <= 0.
double log_symbol(const KernelSpec& spec, double xi);

/// Smallest xi = 2^k with |ln(1 - F)| below 1e-15 (times |ln(1 - F(0))| when
/// that is < 1) at xi and beyond. Throws AdmissibilityError past 1e6.
double find_symbol_cutoff(const KernelSpec& spec);

/// spec.symbol_cutoff, or the searched value when it is unset.
double symbol_cutoff(const KernelSpec& spec);

/// Samples 1 - F on [0, cutoff] and throws AdmissibilityError unless it is
/// positive and finite everywhere on the grid.
void check_admissible(const KernelSpec& spec);

/// Decay rate used for half-line rules: factor_decay if known, else kernel_decay.
double decay_rate(const KernelSpec& spec);

/// c = int ln(1 - F(xi)) dxi / 2pi.
double compute_c(const KernelSpec& spec);

/// psi_t = int ln(1 - F(xi)) e^{-i xi t} dxi / 2pi.
double compute_psi(const KernelSpec& spec, double t);

/// Z = exp int_0^inf z psi_z psi_{-z} dz on a half-line rule with rate
/// decay_rate(spec) / 2 (the integrand decays at twice that rate).
double compute_Z(const KernelSpec& spec, std::size_t n = 160);

/// Same quadrature as compute_Z, for a caller-supplied psi.
double compute_Z(const RealFunction& psi, double decay, std::size_t n = 160);

/// Phi(xi) = (1/pi) PV int ln(1 - F(eta)) / (xi - eta) d eta, the Hilbert
/// transform of ln(1 - F). Equal to 2 int_0^inf psi_t sin(xi t) dt; this form
/// stays cheap at large xi.
double phase_hilbert(const KernelSpec& spec, double xi);

/// psi_t sampled on Gauss-Legendre panels over [0, T], |psi| < 1e-14 past T.
class PsiTable {
public:
  PsiTable() = default;
  PsiTable(const KernelSpec& spec, double panel_length = 0.25);

  /// Barycentric interpolation inside the panel; psi is even, zero past T.
  double operator()(double t) const;

  /// 2 int_0^T psi_t sin(xi t) dt.
  double sine_transform(double xi) const;

  double extent() const { return extent_; }
  std::size_t panels() const { return panel_count_; }

private:
  double panel_length_ = 0.25;
  double extent_ = 0.0;
  std::size_t panel_count_ = 0;
  std::vector<double> reference_nodes_;    // on [-1, 1]
  std::vector<double> reference_weights_;  // Gauss-Legendre
  std::vector<double> barycentric_;
  std::vector<double> values_;             // panel-major
};

/// Phi on [0, inf) as a Chebyshev-Lobatto interpolant in u = xi / (xi + s),
/// sampled through phase_hilbert. Odd extension for xi < 0.
class PhaseTable {
public:
  PhaseTable() = default;
  PhaseTable(const KernelSpec& spec, std::size_t degree = 256);

  double operator()(double xi) const;

private:
  double scale_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> weights_;
};

/// Everything the identity needs from the symbol, computed once. Immutable
/// after construction and safe to share across threads.
struct FactorizationData {
  KernelSpec spec;
  double c = 0.0;
  double Z = 1.0;
  PsiTable psi;
  PhaseTable phase;

  static FactorizationData build(const KernelSpec& spec);
};

/// Phi(xi) = 2 int_0^inf psi_t sin(xi t) dt from the stored psi samples.
double compute_phase(const FactorizationData& data, double xi);

struct DampedEstimate {
  double value = 0.0;
  /// Difference between the last two extrapolated values.
  double error_estimate = 0.0;
  /// The extrapolated sequence did not settle (successive differences grew).
  bool unstable = false;
};

/// f(x) = int (e^{i Phi(xi)} - 1) e^{i xi x} dxi / 2pi for x > 0.
///
/// The integral converges only conditionally, so it is evaluated with a
/// damping factor e^{-eps xi} for eps = 0.2 x 2^{-j}, j = 0..6, and the
/// results are extrapolated polynomially to eps = 0.
DampedEstimate compute_f_numeric(const FactorizationData& data, double x);

/// Chebyshev-Lobatto interpolant of compute_f_numeric on [alpha, inf) in
/// w = exp(-rate (x - alpha)), with f = 0 at w = 0.
RealFunction tabulate_f_numeric(const FactorizationData& data, double alpha, double rate,
                                std::size_t degree = 32);

/// det(I - K) of K(x - y) on [0, alpha] with an n-point Gauss-Legendre rule.
fredholm::DetResult lhs_det(const KernelSpec& spec, double alpha, std::size_t n);

struct RhsResult {
  double Z = 1.0;
  double c = 0.0;
  fredholm::DetResult det;   // det(I - L) on [alpha, inf)
  double log_value = 0.0;    // ln Z + c alpha + ln det
  double value = 1.0;
};

/// Z e^{c alpha} det(I - L_[alpha, inf)) with L built from f as a squared
/// Hankel operator on an n-point half-line rule with the given rate.
RhsResult rhs_det(const RealFunction& f, double Z, double c, double alpha, std::size_t n,
                  double rate);

struct IdentityReport {
  std::string descriptor;
  double alpha = 0.0;
  fredholm::DetResult lhs;
  double Z = 1.0;
  double c = 0.0;
  fredholm::DetResult rhs_det;
  double rhs = 0.0;
  double rel_discrepancy = 0.0;
  std::size_t n_lhs = 0;
  std::size_t n_rhs = 0;
  double tolerance = 0.0;
  bool passed = false;
};

/// |lhs - rhs| / |lhs| evaluated from the logarithms.
double relative_discrepancy(double log_lhs, double log_rhs);

IdentityReport make_report(std::string descriptor, double alpha, const fredholm::DetResult& lhs,
                           const RhsResult& rhs, std::size_t n_lhs, std::size_t n_rhs, double tol);

/// Both sides of the identity for a generic symbol; f comes from the numeric
/// path. Considerably slower than a closed-form f.
IdentityReport verify_identity(const KernelSpec& spec, double alpha, std::size_t n_lhs,
                               std::size_t n_rhs, double tol);

} // namespace whdet::wh
