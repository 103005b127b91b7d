#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace whdet::quad {

/// Gauss-Legendre on the reference interval [-1, 1].
struct Reference {};

/// Affine image on [a, b].
struct Interval {
  double a;
  double b;
};

/// Logarithmic map x = origin - log(1 - t) / rate of a rule on t in (0, 1).
struct HalfLine {
  double origin;
  double rate;
};

using Domain = std::variant<Reference, Interval, HalfLine>;

/// Nodes (strictly increasing) and positive weights, plus the mapping they
/// came from so that a rule of a different size can be rebuilt on the same
/// domain.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  Domain domain = Reference{};

  std::size_t size() const { return nodes.size(); }
};

inline constexpr std::size_t kMaxRuleSize = 2048;

QuadRule gauss_legendre_rule(std::size_t n);
QuadRule map_to_interval(const QuadRule& rule, double a, double b);
QuadRule half_line_rule(std::size_t n, double origin, double rate);

/// Same domain as `rule`, different number of nodes.
QuadRule rebuild(const QuadRule& rule, std::size_t n);

/// n-point Gauss-Legendre rule on [a, b].
QuadRule interval_rule(std::size_t n, double a, double b);

/// Composite Gauss-Legendre on [a, b] with panels no longer than `max_panel`.
QuadRule composite_rule(double a, double b, double max_panel, std::size_t nodes_per_panel);

using RealFunction = std::function<double(double)>;

/// sum_i w_i f(x_i), accumulated in ascending node order. Throws
/// EvaluationError if f is non-finite at a node.
double integrate(const RealFunction& f, const QuadRule& rule);

struct FourierCoefficient {
  double value = 0.0;
  /// |h(cutoff)| exceeded 1e-13: the truncation at `cutoff` is suspect.
  bool cutoff_too_small = false;
};

/// (1/pi) * int_0^cutoff h(xi) cos(xi t) dxi for an even, exponentially
/// decaying h, i.e. int h(xi) e^{-i xi t} dxi / 2pi. Composite Gauss-Legendre
/// with panels of length <= min(max_panel, pi / (2|t|)).
FourierCoefficient fourier_coefficient_decaying(const RealFunction& h, double t, double cutoff,
                                                std::size_t nodes_per_panel = 12,
                                                double max_panel = 0.5);

} // namespace whdet::quad
