#include <doctest.h>

#include <cmath>
#include <numbers>

#include "whdet/error.hpp"
#include "whdet/factorization.hpp"
#include "whdet/sinhsine.hpp"

using namespace whdet;

namespace {

constexpr double kPi = std::numbers::pi;

wh::KernelSpec zero_spec() {
  wh::KernelSpec s;
  s.id = "zero";
  s.kernel = [](double) { return 0.0; };
  s.symbol = [](double) { return 0.0; };
  s.kernel_decay = 1.0;
  return s;
}

// The sinh-sine symbol through the generic log1p(-F) path only.
wh::KernelSpec plain_sinh_spec(double g, double scale = 1.0) {
  const auto p = sinhsine::SinhParams::from_g(g);
  wh::KernelSpec s;
  s.id = "plain";
  s.kernel = [p, scale](double x) { return scale * sinhsine::kernel_K(x, p); };
  s.symbol = [p, scale](double xi) { return scale * sinhsine::symbol_F(xi, p); };
  s.kernel_decay = g;
  return s;
}

const sinhsine::SinhParams& g1() {
  static const sinhsine::SinhParams p = sinhsine::SinhParams::from_g(1.0);
  return p;
}

const wh::FactorizationData& data_g1() {
  static const wh::FactorizationData d = wh::FactorizationData::build(sinhsine::make_kernel_spec(g1()));
  return d;
}

} // namespace

TEST_SUITE("factorization") {

TEST_CASE("zero symbol") {
  const auto s = zero_spec();
  CHECK(wh::compute_c(s) == 0.0);
  for (double t : {0.0, 0.5, 4.0}) CHECK(wh::compute_psi(s, t) == 0.0);
  CHECK(wh::compute_Z(s) == 1.0);
  const auto d = wh::FactorizationData::build(s);
  CHECK(wh::compute_phase(d, 1.5) == 0.0);
  for (double x : {0.3, 1.0, 2.0}) CHECK(wh::compute_f_numeric(d, x).value == 0.0);
}

TEST_CASE("c of the sinh-sine symbol") {
  for (double g : {0.5, 1.0, 2.0, 4.0}) {
    CAPTURE(g);
    const auto p = sinhsine::SinhParams::from_g(g);
    const double c = wh::compute_c(sinhsine::make_kernel_spec(p));
    CHECK(std::abs(c - p.c_closed) < 1e-8);
    CHECK(std::abs(c - sinhsine::psi_closed(0.0, p)) < 1e-8);
    CHECK(c < 0.0);
  }
  // Same value through the generic ln(1 - F) path.
  CHECK(std::abs(wh::compute_c(plain_sinh_spec(1.0)) - g1().c_closed) < 1e-8);
}

TEST_CASE("halving the symbol raises c") {
  const double full = wh::compute_c(plain_sinh_spec(1.0));
  const double half = wh::compute_c(plain_sinh_spec(1.0, 0.5));
  CHECK(half > full);
  CHECK(half < 0.0);
}

TEST_CASE("inadmissible symbols are rejected") {
  wh::KernelSpec s;
  s.id = "too large";
  s.kernel = [](double) { return 0.0; };
  s.symbol = [](double xi) { return 1.5 * std::exp(-xi * xi); };
  CHECK_THROWS_AS(wh::compute_c(s), AdmissibilityError);

  // The g = 0 limit: F is the indicator of [-pi, pi] and 1 - F vanishes there.
  wh::KernelSpec sine;
  sine.id = "sine";
  sine.kernel = [](double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); };
  sine.symbol = [](double xi) { return std::abs(xi) < kPi ? 1.0 : 0.0; };
  CHECK_THROWS_AS(wh::compute_c(sine), AdmissibilityError);
  CHECK_THROWS_AS(wh::verify_identity(sine, 1.0, 50, 20, 1e-6), AdmissibilityError);
  CHECK_THROWS_AS(sinhsine::SinhParams::from_g(0.0), AdmissibilityError);
}

TEST_CASE("psi from the symbol") {
  const auto s = sinhsine::make_kernel_spec(g1());
  CHECK(std::abs(wh::compute_psi(s, 1.0) - sinhsine::psi_closed(1.0, g1())) < 1e-12);
  CHECK(wh::compute_psi(s, 0.7) == wh::compute_psi(s, -0.7));
  CHECK(std::abs(wh::compute_c(s) - wh::compute_psi(s, 1e-6)) < 1e-6);
  for (double t : {0.05, 0.5, 2.0, 5.0, 12.0}) {
    CAPTURE(t);
    CHECK(std::abs(wh::compute_psi(s, t) - sinhsine::psi_closed(t, g1())) < 1e-12);
  }
}

TEST_CASE("Z") {
  const auto s = sinhsine::make_kernel_spec(g1());
  const double z160 = wh::compute_Z(s, 160);
  const double z320 = wh::compute_Z(s, 320);
  CHECK(z160 > 0.0);
  CHECK(std::abs(z320 / z160 - 1.0) < 1e-8);
  for (double g : {0.5, 1.0, 2.0, 4.0}) {
    CAPTURE(g);
    CHECK(wh::compute_Z(sinhsine::make_kernel_spec(sinhsine::SinhParams::from_g(g))) >= 1.0);
  }
  // The psi overload with the closed form gives the same number.
  const double closed = wh::compute_Z([](double t) { return sinhsine::psi_closed(t, g1()); }, g1().lambda);
  CHECK(std::abs(closed / z160 - 1.0) < 1e-10);
}

TEST_CASE("factorization data invariants") {
  const auto& d = data_g1();
  CHECK(d.c < 0.0);
  CHECK(d.Z > 0.0);
  CHECK(wh::compute_phase(d, 0.0) == 0.0);
  CHECK(d.phase(0.0) == 0.0);
  for (double xi = 0.25; xi <= 20.0; xi += 0.25) {
    CAPTURE(xi);
    CHECK(std::abs(wh::compute_phase(d, -xi) + wh::compute_phase(d, xi)) < 1e-10);
    CHECK(std::abs(d.phase(-xi) + d.phase(xi)) < 1e-10);
  }
  for (double t : {0.0, 0.3, 1.1, 7.9}) {
    CAPTURE(t);
    CHECK(std::abs(d.psi(t) - sinhsine::psi_closed(t, g1())) < 1e-12);
    CHECK(d.psi(-t) == d.psi(t));
  }
}

TEST_CASE("phase against the Gamma-ratio product") {
  const auto& d = data_g1();
  const auto s = sinhsine::make_kernel_spec(g1());
  CHECK(std::abs(std::polar(1.0, wh::compute_phase(d, 1.0)) - sinhsine::phase_closed(1.0, g1())) < 1e-8);
  double worst_sine = 0.0;
  double worst_table = 0.0;
  double worst_hilbert = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double xi = 0.1 * k;
    const double exact = sinhsine::phase_angle_closed(xi, g1());
    worst_sine = std::max(worst_sine, std::abs(wh::compute_phase(d, xi) - exact));
    worst_table = std::max(worst_table, std::abs(d.phase(xi) - exact));
    worst_hilbert = std::max(worst_hilbert, std::abs(wh::phase_hilbert(s, xi) - exact));
  }
  CHECK(worst_sine < 1e-8);
  CHECK(worst_table < 1e-8);
  CHECK(worst_hilbert < 1e-8);
}

TEST_CASE("phase next to the symbol cutoff") {
  const auto s = sinhsine::make_kernel_spec(g1());
  const double cutoff = wh::symbol_cutoff(s);
  for (double xi : {cutoff - 1e-13, cutoff - 1e-15, cutoff, cutoff + 1e-13, cutoff + 0.5}) {
    CAPTURE(xi);
    CHECK(std::abs(wh::phase_hilbert(s, xi) - sinhsine::phase_angle_closed(xi, g1())) < 1e-8);
  }
}

TEST_CASE("phase table at large xi") {
  const auto& d = data_g1();
  for (double xi : {50.0, 200.0, 1e4}) {
    CAPTURE(xi);
    CHECK(std::abs(d.phase(xi) - sinhsine::phase_angle_closed(xi, g1())) < 1e-8);
  }
}

TEST_CASE("numeric f against the closed form") {
  const auto& d = data_g1();
  for (double x : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    CAPTURE(x);
    const auto est = wh::compute_f_numeric(d, x);
    const double exact = sinhsine::f_closed(x, g1());
    CHECK(std::abs(est.value / exact - 1.0) < 1e-6);
    CHECK_FALSE(est.unstable);
    CHECK(est.error_estimate >= 0.0);
  }
  CHECK_THROWS_AS(wh::compute_f_numeric(d, 0.0), DomainError);
  CHECK_THROWS_AS(wh::compute_f_numeric(d, -1.0), DomainError);
}

TEST_CASE("the integrand of f pairs to a real value") {
  // e^{i Phi(-xi)} - 1 = conj(e^{i Phi(xi)} - 1), so the xi and -xi
  // contributions to the Fourier integral are complex conjugates.
  const auto& d = data_g1();
  for (double xi : {0.4, 3.0, 11.0}) {
    const std::complex<double> plus = std::polar(1.0, d.phase(xi)) - 1.0;
    const std::complex<double> minus = std::polar(1.0, d.phase(-xi)) - 1.0;
    CHECK(std::abs(minus - std::conj(plus)) < 1e-14);
  }
}

TEST_CASE("tabulated numeric f") {
  const auto& d = data_g1();
  const auto f = wh::tabulate_f_numeric(d, 1.0, g1().lambda);
  for (double x : {1.0, 1.3, 2.0, 4.0, 9.0}) {
    CAPTURE(x);
    const double exact = sinhsine::f_closed(x, g1());
    CHECK(std::abs(f(x) - exact) < 1e-7 * std::max(std::abs(exact), 1e-3));
  }
  CHECK_THROWS_AS(wh::tabulate_f_numeric(d, 1.0, 0.0), DomainError);
}

TEST_CASE("lhs determinant") {
  const auto s = sinhsine::make_kernel_spec(g1());
  CHECK(std::abs(wh::lhs_det(s, 1e-9, 10).value - 1.0) < 1e-8);
  CHECK(std::abs(wh::lhs_det(s, 0.01, 40).value - 0.99) <= 1e-4);
  double prev = 1.0;
  for (double alpha = 0.5; alpha <= 3.0; alpha += 0.25) {
    const double v = wh::lhs_det(s, alpha, 120).value;
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(wh::lhs_det(s, 0.0, 10), DomainError);
}

TEST_CASE("rhs determinant") {
  const auto zero = wh::rhs_det([](double) { return 0.0; }, 1.0, 0.0, 2.0, 40, 1.0);
  CHECK(zero.value == 1.0);
  CHECK(zero.det.value == 1.0);

  const auto inputs = sinhsine::identity_inputs(g1());
  const auto f = [](double x) { return sinhsine::f_closed(x, g1()); };
  const auto rhs = wh::rhs_det(f, inputs.Z, inputs.c, 2.0, 80, g1().lambda);
  const auto lhs = wh::lhs_det(sinhsine::make_kernel_spec(g1()), 2.0, 200);
  CHECK(wh::relative_discrepancy(lhs.log_value, rhs.log_value) < 1e-6);
  CHECK(std::abs(rhs.log_value - (std::log(inputs.Z) + inputs.c * 2.0 + rhs.det.log_value)) < 1e-13);

  // Large alpha: L is negligible and only Z e^{c alpha} remains.
  const auto far = wh::rhs_det(f, inputs.Z, inputs.c, 30.0, 80, g1().lambda);
  CHECK(std::abs(far.det.value - 1.0) < 1e-10);
  CHECK(std::abs(far.log_value - (std::log(inputs.Z) + inputs.c * 30.0)) < 1e-10);
}

TEST_CASE("relative discrepancy") {
  CHECK(wh::relative_discrepancy(-3.0, -3.0) == 0.0);
  CHECK(std::abs(wh::relative_discrepancy(std::log(2.0), std::log(3.0)) - 0.5) < 1e-15);
}

TEST_CASE("identity through the generic pipeline") {
  const auto s = sinhsine::make_kernel_spec(g1());
  for (double alpha : {1.0, 2.0, 3.0}) {
    CAPTURE(alpha);
    const auto report = wh::verify_identity(s, alpha, 200, 120, 1e-6);
    CHECK(report.passed);
    CHECK(report.rel_discrepancy < 1e-6);
    CHECK(report.n_lhs == 200);
    CHECK(report.n_rhs == 120);
    CHECK(std::abs(report.rhs - report.Z * std::exp(report.c * alpha) * report.rhs_det.value) <
          1e-12 * report.rhs);
  }
  const auto s2 = sinhsine::make_kernel_spec(sinhsine::SinhParams::from_g(2.0));
  CHECK(wh::verify_identity(s2, 1.5, 200, 120, 1e-6).rel_discrepancy < 1e-6);
}

TEST_CASE("identity across g and alpha with closed-form f") {
  for (double g : {0.5, 1.0, 2.0, 4.0}) {
    const auto p = sinhsine::SinhParams::from_g(g);
    const auto inputs = sinhsine::identity_inputs(p);
    for (double alpha : {0.5, 1.5, 2.5, 4.0}) {
      CAPTURE(g);
      CAPTURE(alpha);
      const auto coarse = sinhsine::verify_identity(p, inputs, alpha, 20, 16, 1e-6);
      const auto fine = sinhsine::verify_identity(p, inputs, alpha, 200, 80, 1e-6);
      CHECK(fine.rel_discrepancy < 1e-6);
      CHECK(fine.passed);
      CHECK(fine.rel_discrepancy <= std::max(coarse.rel_discrepancy, 1e-12));
    }
  }
}

} // TEST_SUITE
