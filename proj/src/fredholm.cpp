#include "whdet/fredholm.hpp"

#include <cmath>
#include <limits>

#include "whdet/error.hpp"

namespace whdet::fredholm {
namespace {

DetResult from_log(double log_value, int sign, std::size_t n, DetMethod method) {
  DetResult r;
  r.log_value = log_value;
  r.sign = sign;
  r.value = sign * std::exp(log_value);
  r.rule_size = n;
  r.method = method;
  return r;
}

DetResult singular_result(std::size_t n, DetMethod method) {
  DetResult r;
  r.value = 0.0;
  r.log_value = -std::numeric_limits<double>::infinity();
  r.sign = 0;
  r.singular = true;
  r.rule_size = n;
  r.method = method;
  return r;
}

void require_finite(const Matrix& m, const char* where) {
  if (!m.allFinite()) throw EvaluationError(std::string(where) + ": non-finite matrix entry");
}

} // namespace

std::string to_string(DetMethod method) {
  switch (method) {
    case DetMethod::nystrom: return "nystrom";
    case DetMethod::trace_series: return "trace_series";
    case DetMethod::hankel_square: return "hankel_square";
  }
  return "unknown";
}

Matrix weighted_kernel_matrix(const Kernel& kernel, const quad::QuadRule& rule) {
  const auto n = static_cast<Eigen::Index>(rule.size());
  Eigen::VectorXd sw(n);
  for (Eigen::Index i = 0; i < n; ++i) sw(i) = std::sqrt(rule.weights[static_cast<std::size_t>(i)]);

  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = rule.nodes[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      const double k = kernel(xi, rule.nodes[static_cast<std::size_t>(j)]);
      if (!std::isfinite(k)) {
        throw EvaluationError("nystrom_matrix: non-finite kernel value at (" + std::to_string(xi) +
                              ", " + std::to_string(rule.nodes[static_cast<std::size_t>(j)]) + ")");
      }
      m(i, j) = sw(i) * k * sw(j);
    }
  }
  return m;
}

NystromSystem nystrom_matrix(const Kernel& kernel, const quad::QuadRule& rule,
                             std::string kernel_id) {
  const Matrix weighted = weighted_kernel_matrix(kernel, rule);
  const auto n = weighted.rows();
  return {Matrix::Identity(n, n) - weighted, rule, std::move(kernel_id)};
}

DetResult det_lu(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols()) throw DomainError("det_lu: matrix is not square");
  require_finite(matrix, "det_lu");
  const auto n = static_cast<std::size_t>(matrix.rows());
  if (n == 0) return from_log(0.0, 1, 0, DetMethod::nystrom);

  const Eigen::PartialPivLU<Matrix> lu(matrix);
  const Matrix& packed = lu.matrixLU();
  double log_abs = 0.0;
  int sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double pivot = packed(i, i);
    if (pivot == 0.0) return singular_result(n, DetMethod::nystrom);
    if (pivot < 0.0) sign = -sign;
    log_abs += std::log(std::abs(pivot));
  }
  return from_log(log_abs, sign, n, DetMethod::nystrom);
}

DetResult det_lu(const NystromSystem& system) { return det_lu(system.matrix); }

DetResult fredholm_det(const Kernel& kernel, const quad::QuadRule& rule) {
  DetResult full = det_lu(nystrom_matrix(kernel, rule));
  if (rule.size() >= 2) {
    const DetResult half = det_lu(nystrom_matrix(kernel, quad::rebuild(rule, rule.size() / 2)));
    full.error_estimate = std::abs(full.value - half.value);
  }
  return full;
}

std::vector<double> trace_powers(const Matrix& weighted, std::size_t kmax) {
  if (kmax < 1) throw DomainError("trace_powers: kmax must be at least 1");
  if (weighted.rows() != weighted.cols()) throw DomainError("trace_powers: matrix is not square");
  std::vector<double> traces;
  traces.reserve(kmax);
  Matrix power = weighted;
  traces.push_back(power.trace());
  for (std::size_t k = 2; k <= kmax; ++k) {
    power = power * weighted;
    traces.push_back(power.trace());
  }
  return traces;
}

std::vector<double> trace_powers(const Kernel& kernel, const quad::QuadRule& rule,
                                 std::size_t kmax) {
  return trace_powers(weighted_kernel_matrix(kernel, rule), kmax);
}

DetResult det_trace_series(const Matrix& weighted, const TraceSeriesOptions& options) {
  if (weighted.rows() != weighted.cols()) throw DomainError("det_trace_series: matrix is not square");
  require_finite(weighted, "det_trace_series");
  const auto n = static_cast<std::size_t>(weighted.rows());

  double log_det = 0.0;
  double previous_term = 0.0;
  Matrix power = weighted;
  for (std::size_t k = 1; k <= options.max_terms; ++k) {
    if (k > 1) power = power * weighted;
    const double term = power.trace() / static_cast<double>(k);
    log_det -= term;

    const double magnitude = std::abs(term);
    if (magnitude == 0.0) {
      return from_log(log_det, 1, n, DetMethod::trace_series);
    }
    if (k > 1 && previous_term != 0.0) {
      const double ratio = magnitude / std::abs(previous_term);
      if (magnitude < options.tolerance && ratio < options.max_ratio) {
        DetResult r = from_log(log_det, 1, n, DetMethod::trace_series);
        // |sum_{j>k} tr A^j / j| <= |term| * ratio / (1 - ratio), applied to exp.
        r.error_estimate = std::abs(r.value) * magnitude * ratio / (1.0 - ratio);
        return r;
      }
    }
    // The spectral radius estimate |tr A^k|^{1/k} must stay below one.
    if (k >= 8 && std::pow(std::abs(power.trace()), 1.0 / static_cast<double>(k)) >= 1.0) {
      throw ConvergenceError("det_trace_series: traces do not contract (spectral radius >= 1)");
    }
    previous_term = term;
  }
  throw ConvergenceError("det_trace_series: no convergence within " +
                         std::to_string(options.max_terms) + " terms");
}

DetResult det_trace_series(const Kernel& kernel, const quad::QuadRule& rule,
                           const TraceSeriesOptions& options) {
  return det_trace_series(weighted_kernel_matrix(kernel, rule), options);
}

Matrix hankel_matrix(const std::function<double(double)>& f, double alpha,
                     const quad::QuadRule& rule) {
  const auto n = static_cast<Eigen::Index>(rule.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto si = static_cast<std::size_t>(i);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      const double v = f(rule.nodes[si] + rule.nodes[sj] + alpha);
      if (!std::isfinite(v)) {
        throw EvaluationError("hankel_matrix: non-finite f at x = " +
                              std::to_string(rule.nodes[si] + rule.nodes[sj] + alpha));
      }
      const double entry = std::sqrt(rule.weights[si] * rule.weights[sj]) * v;
      m(i, j) = entry;
      m(j, i) = entry;
    }
  }
  return m;
}

namespace {

DetResult hankel_square_det(const Matrix& m) {
  const auto n = m.rows();
  const Matrix id = Matrix::Identity(n, n);
  const DetResult minus = det_lu(Matrix(id - m));
  const DetResult plus = det_lu(Matrix(id + m));
  if (minus.singular || plus.singular) {
    return singular_result(static_cast<std::size_t>(n), DetMethod::hankel_square);
  }
  return from_log(minus.log_value + plus.log_value, minus.sign * plus.sign,
                  static_cast<std::size_t>(n), DetMethod::hankel_square);
}

} // namespace

DetResult det_hankel_square(const std::function<double(double)>& f, double alpha,
                            const quad::QuadRule& rule) {
  DetResult full = hankel_square_det(hankel_matrix(f, alpha, rule));
  if (rule.size() >= 2) {
    const DetResult half =
        hankel_square_det(hankel_matrix(f, alpha, quad::rebuild(rule, rule.size() / 2)));
    full.error_estimate = std::abs(full.value - half.value);
  }
  return full;
}

double min_eigenvalue_of_square(const Matrix& symmetric) {
  const Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric * symmetric,
                                                     Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

} // namespace whdet::fredholm
