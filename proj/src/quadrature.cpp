#include "whdet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

#include "whdet/error.hpp"

namespace whdet::quad {
namespace {

constexpr double kPi = std::numbers::pi;

void check_size(std::size_t n) {
  if (n < 1 || n > kMaxRuleSize) {
    throw DomainError("gauss_legendre_rule: n must lie in [1, " + std::to_string(kMaxRuleSize) +
                      "], got " + std::to_string(n));
  }
}

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t j = 2; j <= n; ++j) {
    const double jd = static_cast<double>(j);
    const double p2 = ((2.0 * jd - 1.0) * x * p1 - (jd - 1.0) * p0) / jd;
    p0 = p1;
    p1 = p2;
  }
  const double nd = static_cast<double>(n);
  const double dp = nd * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

} // namespace

QuadRule gauss_legendre_rule(std::size_t n) {
  check_size(n);
  QuadRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  if (n == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }

  const std::size_t half = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, d] = legendre(n, x);
      const double dx = p / d;
      x -= dx;
      dp = d;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[half - 1] = 0.0;
  return rule;
}

QuadRule map_to_interval(const QuadRule& rule, double a, double b) {
  if (!(a < b)) {
    throw DomainError("map_to_interval: degenerate interval [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
  }
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  QuadRule out;
  out.nodes.reserve(rule.size());
  out.weights.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    out.nodes.push_back(mid + half * rule.nodes[i]);
    out.weights.push_back(half * rule.weights[i]);
  }
  out.domain = Interval{a, b};
  return out;
}

QuadRule interval_rule(std::size_t n, double a, double b) {
  return map_to_interval(gauss_legendre_rule(n), a, b);
}

QuadRule half_line_rule(std::size_t n, double origin, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("half_line_rule: rate must be positive");
  }
  const QuadRule unit = map_to_interval(gauss_legendre_rule(n), 0.0, 1.0);
  QuadRule out;
  out.nodes.reserve(n);
  out.weights.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = unit.nodes[i];
    out.nodes.push_back(origin - std::log1p(-t) / rate);
    out.weights.push_back(unit.weights[i] / (rate * (1.0 - t)));
  }
  out.domain = HalfLine{origin, rate};
  return out;
}

QuadRule rebuild(const QuadRule& rule, std::size_t n) {
  return std::visit(
      [n](const auto& d) -> QuadRule {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, Reference>) {
          return gauss_legendre_rule(n);
        } else if constexpr (std::is_same_v<D, Interval>) {
          return interval_rule(n, d.a, d.b);
        } else {
          return half_line_rule(n, d.origin, d.rate);
        }
      },
      rule.domain);
}

QuadRule composite_rule(double a, double b, double max_panel, std::size_t nodes_per_panel) {
  if (!(a < b)) throw DomainError("composite_rule: degenerate interval");
  if (!(max_panel > 0.0)) throw DomainError("composite_rule: panel length must be positive");
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
  const double len = (b - a) / static_cast<double>(panels);
  const QuadRule base = gauss_legendre_rule(nodes_per_panel);

  QuadRule out;
  out.nodes.reserve(panels * nodes_per_panel);
  out.weights.reserve(panels * nodes_per_panel);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + len * static_cast<double>(p);
    const double mid = lo + 0.5 * len;
    for (std::size_t i = 0; i < base.size(); ++i) {
      out.nodes.push_back(mid + 0.5 * len * base.nodes[i]);
      out.weights.push_back(0.5 * len * base.weights[i]);
    }
  }
  out.domain = Interval{a, b};
  return out;
}

double integrate(const RealFunction& f, const QuadRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = f(rule.nodes[i]);
    if (!std::isfinite(v)) {
      throw EvaluationError("integrate: non-finite integrand at x = " +
                            std::to_string(rule.nodes[i]));
    }
    sum += rule.weights[i] * v;
  }
  return sum;
}

FourierCoefficient fourier_coefficient_decaying(const RealFunction& h, double t, double cutoff,
                                                std::size_t nodes_per_panel, double max_panel) {
  if (!(cutoff > 0.0)) throw DomainError("fourier_coefficient_decaying: cutoff must be positive");
  const double abs_t = std::abs(t);
  if (!(max_panel > 0.0)) throw DomainError("fourier_coefficient_decaying: panel length must be positive");
  const double panel = abs_t > 0.0 ? std::min(max_panel, kPi / (2.0 * abs_t)) : max_panel;
  const QuadRule rule = composite_rule(0.0, cutoff, panel, nodes_per_panel);

  FourierCoefficient out;
  out.value = integrate([&](double xi) { return h(xi) * std::cos(xi * t); }, rule) / kPi;
  out.cutoff_too_small = std::abs(h(cutoff)) > 1e-13;
  return out;
}

} // namespace whdet::quad
