#include "whdet/factorization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "whdet/error.hpp"

namespace whdet::wh {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogThreshold = 1e-15;
constexpr std::size_t kPanelNodes = 16;

// Panel length in xi for smooth integrands over [0, cutoff]. Symbols that
// need a long cutoff vary on a correspondingly long scale.
double xi_panel(double cutoff, double base) { return std::max(base, cutoff / 512.0); }

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
  std::vector<double> w(nodes.size(), 1.0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    for (std::size_t m = 0; m < nodes.size(); ++m) {
      if (m != k) w[k] /= nodes[k] - nodes[m];
    }
  }
  return w;
}

// Second-form barycentric interpolation at x.
double barycentric(const double* nodes, const double* values, const double* weights,
                   std::size_t n, double x) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = x - nodes[k];
    if (d == 0.0) return values[k];
    const double t = weights[k] / d;
    num += t * values[k];
    den += t;
  }
  return num / den;
}

// Chebyshev-Lobatto points on [0, 1] (ascending) and their barycentric weights.
void lobatto_unit(std::size_t degree, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(degree + 1);
  weights.resize(degree + 1);
  for (std::size_t k = 0; k <= degree; ++k) {
    nodes[k] = 0.5 * (1.0 - std::cos(kPi * static_cast<double>(k) / static_cast<double>(degree)));
    weights[k] = (k % 2 == 0) ? 1.0 : -1.0;
  }
  weights.front() *= 0.5;
  weights.back() *= 0.5;
}

double psi_extent(const KernelSpec& spec) {
  if (spec.factor_decay) {
    // psi_t ~ e^{-rate t}: e^{-37} is below 1e-16.
    return 37.0 / *spec.factor_decay;
  }
  double extent = 4.0;
  while (extent < 4096.0) {
    double peak = 0.0;
    for (int k = 0; k < 8; ++k) {
      peak = std::max(peak, std::abs(compute_psi(spec, extent * (1.0 + 0.5 * k / 7.0))));
    }
    if (peak < 1e-14) return extent;
    extent *= 1.5;
  }
  throw AdmissibilityError("psi_t does not decay below 1e-14 before t = 4096");
}

} // namespace

double log_symbol(const KernelSpec& spec, double xi) {
  double value;
  if (spec.log_one_minus_symbol) {
    value = spec.log_one_minus_symbol(xi);
  } else {
    const double f = spec.symbol(xi);
    if (!(1.0 - f > 0.0)) {
      throw AdmissibilityError("1 - F(xi) <= 0 at xi = " + std::to_string(xi) +
                               ": the Wiener-Hopf factorization fails");
    }
    value = std::log1p(-f);
  }
  if (!std::isfinite(value)) {
    throw AdmissibilityError("ln(1 - F) is not finite at xi = " + std::to_string(xi) +
                             ": 1 - F is not bounded away from zero");
  }
  return value;
}

double find_symbol_cutoff(const KernelSpec& spec) {
  // Relative to the peak for symbols that are small everywhere.
  const double threshold =
      kLogThreshold * std::clamp(std::abs(log_symbol(spec, 0.0)), 1e-290, 1.0);
  double xi = 1.0;
  while (std::abs(log_symbol(spec, xi)) >= threshold) {
    xi *= 2.0;
    if (xi > 1e6) throw AdmissibilityError("symbol does not decay: no cutoff below 1e6");
  }
  return xi;
}

double symbol_cutoff(const KernelSpec& spec) {
  return spec.symbol_cutoff > 0.0 ? spec.symbol_cutoff : find_symbol_cutoff(spec);
}

void check_admissible(const KernelSpec& spec) {
  if (!spec.symbol && !spec.log_one_minus_symbol) {
    throw AdmissibilityError("kernel spec '" + spec.id + "' has no symbol");
  }
  const double cutoff = symbol_cutoff(spec);
  constexpr int kSamples = 2000;
  for (int i = 0; i <= kSamples; ++i) {
    log_symbol(spec, cutoff * i / kSamples);
  }
}

double decay_rate(const KernelSpec& spec) {
  return spec.factor_decay ? *spec.factor_decay : spec.kernel_decay;
}

double compute_c(const KernelSpec& spec) {
  check_admissible(spec);
  const double cutoff = symbol_cutoff(spec);
  const quad::QuadRule rule = quad::composite_rule(0.0, cutoff, xi_panel(cutoff, 0.25), kPanelNodes);
  return quad::integrate([&](double xi) { return log_symbol(spec, xi); }, rule) / kPi;
}

double compute_psi(const KernelSpec& spec, double t) {
  if (!std::isfinite(t)) throw DomainError("compute_psi: t must be finite");
  const double cutoff = symbol_cutoff(spec);
  return quad::fourier_coefficient_decaying([&](double xi) { return log_symbol(spec, xi); }, t,
                                            cutoff, 12, xi_panel(cutoff, 0.5))
      .value;
}

double compute_Z(const RealFunction& psi, double decay, std::size_t n) {
  const quad::QuadRule rule = quad::half_line_rule(n, 0.0, 0.5 * decay);
  return std::exp(quad::integrate([&](double z) { return z * psi(z) * psi(-z); }, rule));
}

double compute_Z(const KernelSpec& spec, std::size_t n) {
  const double cutoff = symbol_cutoff(spec);
  KernelSpec resolved = spec;
  resolved.symbol_cutoff = cutoff;
  return compute_Z([&](double t) { return compute_psi(resolved, t); }, decay_rate(spec), n);
}

double phase_hilbert(const KernelSpec& spec, double xi) {
  if (xi == 0.0) return 0.0;
  if (xi < 0.0) return -phase_hilbert(spec, -xi);
  const double cutoff = symbol_cutoff(spec);
  const auto h = [&](double eta) { return log_symbol(spec, eta); };

  if (xi >= cutoff) {
    const quad::QuadRule rule = quad::composite_rule(0.0, cutoff, xi_panel(cutoff, 0.25), kPanelNodes);
    const double s =
        quad::integrate([&](double eta) { return h(eta) / ((xi - eta) * (xi + eta)); }, rule);
    return 2.0 * xi * s / kPi;
  }

  // Subtract h(xi) to remove the pole; PV int_0^upper d eta / (xi^2 - eta^2)
  // = ln((upper + xi) / (upper - xi)) / (2 xi). The upper limit stays a
  // panel away from xi so that the second piece is never degenerate.
  const double upper = std::max(cutoff, xi + 1.0);
  const double h_xi = h(xi);
  const auto smooth = [&](double eta) { return (h(eta) - h_xi) / ((xi - eta) * (xi + eta)); };
  const double panel = xi_panel(cutoff, 0.25);
  double s = quad::integrate(smooth, quad::composite_rule(0.0, xi, panel, kPanelNodes));
  s += quad::integrate(smooth, quad::composite_rule(xi, upper, panel, kPanelNodes));
  return 2.0 * xi * s / kPi + h_xi * std::log((upper + xi) / (upper - xi)) / kPi;
}

// ---------------------------------------------------------------------------

PsiTable::PsiTable(const KernelSpec& spec, double panel_length) : panel_length_(panel_length) {
  const double cutoff = symbol_cutoff(spec);
  panel_count_ = static_cast<std::size_t>(std::ceil(psi_extent(spec) / panel_length_));
  extent_ = panel_length_ * static_cast<double>(panel_count_);

  const quad::QuadRule ref = quad::gauss_legendre_rule(kPanelNodes);
  reference_nodes_ = ref.nodes;
  reference_weights_ = ref.weights;
  barycentric_ = barycentric_weights(reference_nodes_);

  // One xi rule fine enough for the largest t; psi at every table node is a
  // cosine sum over it. cos(xi (t_p + d_k)) is split so that only one sincos
  // per (xi, panel) is needed.
  const quad::QuadRule xi_rule =
      quad::composite_rule(0.0, cutoff, std::min(xi_panel(cutoff, 0.5), kPi / (2.0 * extent_)), 12);
  const std::size_t nx = xi_rule.size();
  std::vector<double> wh(nx);
  for (std::size_t j = 0; j < nx; ++j) {
    wh[j] = xi_rule.weights[j] * log_symbol(spec, xi_rule.nodes[j]) / kPi;
  }
  std::vector<double> offs(kPanelNodes);
  for (std::size_t k = 0; k < kPanelNodes; ++k) {
    offs[k] = 0.5 * panel_length_ * (1.0 + reference_nodes_[k]);
  }
  std::vector<double> cos_off(nx * kPanelNodes);
  std::vector<double> sin_off(nx * kPanelNodes);
  for (std::size_t j = 0; j < nx; ++j) {
    for (std::size_t k = 0; k < kPanelNodes; ++k) {
      cos_off[j * kPanelNodes + k] = wh[j] * std::cos(xi_rule.nodes[j] * offs[k]);
      sin_off[j * kPanelNodes + k] = wh[j] * std::sin(xi_rule.nodes[j] * offs[k]);
    }
  }

  values_.assign(panel_count_ * kPanelNodes, 0.0);
  for (std::size_t p = 0; p < panel_count_; ++p) {
    const double start = panel_length_ * static_cast<double>(p);
    double* out = &values_[p * kPanelNodes];
    for (std::size_t j = 0; j < nx; ++j) {
      const double cp = std::cos(xi_rule.nodes[j] * start);
      const double sp = std::sin(xi_rule.nodes[j] * start);
      const double* co = &cos_off[j * kPanelNodes];
      const double* so = &sin_off[j * kPanelNodes];
      for (std::size_t k = 0; k < kPanelNodes; ++k) {
        out[k] += cp * co[k] - sp * so[k];
      }
    }
  }
}

double PsiTable::operator()(double t) const {
  t = std::abs(t);
  if (t >= extent_) return 0.0;
  const auto p = std::min(panel_count_ - 1, static_cast<std::size_t>(t / panel_length_));
  const double local = 2.0 * (t - panel_length_ * static_cast<double>(p)) / panel_length_ - 1.0;
  return barycentric(reference_nodes_.data(), &values_[p * kPanelNodes], barycentric_.data(),
                     kPanelNodes, local);
}

double PsiTable::sine_transform(double xi) const {
  if (xi == 0.0) return 0.0;
  const double half = 0.5 * panel_length_;
  // Keep xi * (sub-panel length) <= 4 so 16 Gauss nodes resolve the sine.
  const auto sub = static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(xi) * panel_length_ / 4.0)));
  double sum = 0.0;
  for (std::size_t p = 0; p < panel_count_; ++p) {
    const double start = panel_length_ * static_cast<double>(p);
    const double* vals = &values_[p * kPanelNodes];
    if (sub == 1) {
      for (std::size_t k = 0; k < kPanelNodes; ++k) {
        const double t = start + half * (1.0 + reference_nodes_[k]);
        sum += half * reference_weights_[k] * vals[k] * std::sin(xi * t);
      }
      continue;
    }
    const double sub_half = 1.0 / static_cast<double>(sub);  // in local [-1, 1] units
    for (std::size_t s = 0; s < sub; ++s) {
      const double centre = -1.0 + sub_half * (2.0 * static_cast<double>(s) + 1.0);
      for (std::size_t k = 0; k < kPanelNodes; ++k) {
        const double local = centre + sub_half * reference_nodes_[k];
        const double t = start + half * (1.0 + local);
        const double v = barycentric(reference_nodes_.data(), vals, barycentric_.data(),
                                     kPanelNodes, local);
        sum += half * sub_half * reference_weights_[k] * v * std::sin(xi * t);
      }
    }
  }
  return 2.0 * sum;
}

// ---------------------------------------------------------------------------

PhaseTable::PhaseTable(const KernelSpec& spec, std::size_t degree) {
  scale_ = std::clamp(symbol_cutoff(spec) / 8.0, 0.5, 8.0);
  lobatto_unit(degree, nodes_, weights_);
  values_.assign(degree + 1, 0.0);
  for (std::size_t k = 1; k < degree; ++k) {
    const double u = nodes_[k];
    values_[k] = phase_hilbert(spec, scale_ * u / (1.0 - u));
  }
}

double PhaseTable::operator()(double xi) const {
  if (xi < 0.0) return -(*this)(-xi);
  if (!std::isfinite(xi)) return 0.0;
  const double u = xi / (xi + scale_);
  return barycentric(nodes_.data(), values_.data(), weights_.data(), nodes_.size(), u);
}

FactorizationData FactorizationData::build(const KernelSpec& spec) {
  check_admissible(spec);
  FactorizationData data;
  data.spec = spec;
  data.spec.symbol_cutoff = symbol_cutoff(spec);
  data.c = compute_c(data.spec);
  data.Z = compute_Z(data.spec);
  data.psi = PsiTable(data.spec);
  data.phase = PhaseTable(data.spec);
  return data;
}

double compute_phase(const FactorizationData& data, double xi) {
  return data.psi.sine_transform(xi);
}

DampedEstimate compute_f_numeric(const FactorizationData& data, double x) {
  if (!(x > 0.0)) throw DomainError("compute_f_numeric: x must be positive");

  constexpr std::size_t kLevels = 7;
  std::array<double, kLevels> eps{};
  for (std::size_t j = 0; j < kLevels; ++j) eps[j] = 0.2 * x / std::ldexp(1.0, static_cast<int>(j));
  const double xi_max = 36.0 / eps.back();

  // Phi varies on O(1) scales near the origin; further out only the
  // oscillation e^{i xi x} sets the panel length.
  constexpr double kNear = 20.0;
  std::vector<quad::QuadRule> rules;
  rules.push_back(quad::composite_rule(0.0, std::min(kNear, xi_max), std::min(0.5, kPi / (2.0 * x)),
                                       kPanelNodes));
  if (xi_max > kNear) rules.push_back(quad::composite_rule(kNear, xi_max, kPi / x, kPanelNodes));

  std::array<double, kLevels> sums{};
  for (const quad::QuadRule& rule : rules) {
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double xi = rule.nodes[i];
      const double phi = data.phase(xi);
      // cos(phi + xi x) - cos(xi x), without cancellation for small phi.
      const double g = -2.0 * std::sin(0.5 * phi) * std::sin(xi * x + 0.5 * phi);
      const double wg = rule.weights[i] * g;
      for (std::size_t j = 0; j < kLevels; ++j) sums[j] += wg * std::exp(-eps[j] * xi);
    }
  }
  for (double& s : sums) s /= kPi;

  // Neville's scheme evaluated at eps = 0; diag[m] uses levels 0..m.
  std::array<double, kLevels> p = sums;
  std::array<double, kLevels> diag{};
  diag[0] = p[0];
  for (std::size_t m = 1; m < kLevels; ++m) {
    for (std::size_t i = kLevels - 1; i >= m; --i) {
      p[i] = (eps[i] * p[i - 1] - eps[i - m] * p[i]) / (eps[i] - eps[i - m]);
    }
    diag[m] = p[m];
  }

  DampedEstimate out;
  out.value = diag[kLevels - 1];
  out.error_estimate = std::abs(diag[kLevels - 1] - diag[kLevels - 2]);
  const double prev = std::abs(diag[kLevels - 2] - diag[kLevels - 3]);
  const double scale = std::max(std::abs(out.value), 1e-300);
  out.unstable = out.error_estimate > prev && out.error_estimate > 1e-12 * scale;
  return out;
}

RealFunction tabulate_f_numeric(const FactorizationData& data, double alpha, double rate,
                                std::size_t degree) {
  if (!(rate > 0.0)) throw DomainError("tabulate_f_numeric: rate must be positive");
  std::vector<double> nodes;
  std::vector<double> weights;
  lobatto_unit(degree, nodes, weights);
  std::vector<double> values(nodes.size(), 0.0);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    values[k] = compute_f_numeric(data, alpha - std::log(nodes[k]) / rate).value;
  }
  return [nodes = std::move(nodes), weights = std::move(weights), values = std::move(values),
          alpha, rate](double x) {
    const double w = std::exp(-rate * (x - alpha));
    return barycentric(nodes.data(), values.data(), weights.data(), nodes.size(), w);
  };
}

fredholm::DetResult lhs_det(const KernelSpec& spec, double alpha, std::size_t n) {
  if (!(alpha > 0.0)) throw DomainError("lhs_det: alpha must be positive");
  const quad::QuadRule rule = quad::interval_rule(n, 0.0, alpha);
  return fredholm::fredholm_det([&](double x, double y) { return spec.kernel(x - y); }, rule);
}

RhsResult rhs_det(const RealFunction& f, double Z, double c, double alpha, std::size_t n,
                  double rate) {
  if (!(Z > 0.0)) throw DomainError("rhs_det: Z must be positive");
  RhsResult out;
  out.Z = Z;
  out.c = c;
  out.det = fredholm::det_hankel_square(f, alpha, quad::half_line_rule(n, 0.0, rate));
  out.log_value = std::log(Z) + c * alpha + out.det.log_value;
  out.value = out.det.sign * std::exp(out.log_value);
  return out;
}

double relative_discrepancy(double log_lhs, double log_rhs) {
  return std::abs(std::expm1(log_rhs - log_lhs));
}

IdentityReport make_report(std::string descriptor, double alpha, const fredholm::DetResult& lhs,
                           const RhsResult& rhs, std::size_t n_lhs, std::size_t n_rhs, double tol) {
  IdentityReport r;
  r.descriptor = std::move(descriptor);
  r.alpha = alpha;
  r.lhs = lhs;
  r.Z = rhs.Z;
  r.c = rhs.c;
  r.rhs_det = rhs.det;
  r.rhs = rhs.value;
  if (lhs.sign > 0 && rhs.det.sign > 0) {
    r.rel_discrepancy = relative_discrepancy(lhs.log_value, rhs.log_value);
  } else {
    r.rel_discrepancy = std::abs(lhs.value - rhs.value) / std::max(std::abs(lhs.value), 1e-300);
  }
  r.n_lhs = n_lhs;
  r.n_rhs = n_rhs;
  r.tolerance = tol;
  r.passed = r.rel_discrepancy < tol;
  return r;
}

IdentityReport verify_identity(const KernelSpec& spec, double alpha, std::size_t n_lhs,
                               std::size_t n_rhs, double tol) {
  if (!(alpha > 0.0)) throw DomainError("verify_identity: alpha must be positive");
  const FactorizationData data = FactorizationData::build(spec);
  const double rate = decay_rate(spec);
  const fredholm::DetResult lhs = lhs_det(data.spec, alpha, n_lhs);
  const RealFunction f = tabulate_f_numeric(data, alpha, rate);
  const RhsResult rhs = rhs_det(f, data.Z, data.c, alpha, n_rhs, rate);
  return make_report(spec.id, alpha, lhs, rhs, n_lhs, n_rhs, tol);
}

} // namespace whdet::wh
