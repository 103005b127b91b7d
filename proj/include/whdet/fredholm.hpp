#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "whdet/quadrature.hpp"

namespace whdet::fredholm {

using Matrix = Eigen::MatrixXd;
using Kernel = std::function<double(double, double)>;

/// I - W^{1/2} K W^{1/2} on the nodes of `rule`.
struct NystromSystem {
  Matrix matrix;
  quad::QuadRule rule;
  std::string kernel_id;
};

enum class DetMethod { nystrom, trace_series, hankel_square };

std::string to_string(DetMethod method);

struct DetResult {
  double value = 1.0;
  double log_value = 0.0;  // log |value|
  int sign = 1;
  bool singular = false;
  std::size_t rule_size = 0;
  double error_estimate = 0.0;
  DetMethod method = DetMethod::nystrom;
};

/// W^{1/2} K W^{1/2}. Throws EvaluationError on a non-finite kernel value.
Matrix weighted_kernel_matrix(const Kernel& kernel, const quad::QuadRule& rule);

NystromSystem nystrom_matrix(const Kernel& kernel, const quad::QuadRule& rule,
                             std::string kernel_id = {});

/// Determinant by partially pivoted LU with the log-magnitude accumulated
/// directly from the pivots, so that tiny determinants do not underflow.
/// An exactly singular matrix yields value 0 and `singular = true`.
DetResult det_lu(const Matrix& matrix);
DetResult det_lu(const NystromSystem& system);

/// det(I - K) on the domain of `rule`. error_estimate compares against the
/// rule of half the size on the same domain.
DetResult fredholm_det(const Kernel& kernel, const quad::QuadRule& rule);

/// tr(A^k), k = 1..kmax, for a square matrix A.
std::vector<double> trace_powers(const Matrix& weighted, std::size_t kmax);

/// tr of the k-th power of W^{1/2} L W^{1/2}, k = 1..kmax.
std::vector<double> trace_powers(const Kernel& kernel, const quad::QuadRule& rule,
                                 std::size_t kmax);

struct TraceSeriesOptions {
  double tolerance = 1e-15;
  double max_ratio = 0.9;
  std::size_t max_terms = 500;
};

/// det(I - A) = exp(-sum_k tr(A^k) / k). Stops when the last term is below
/// `tolerance` and the term ratio is below `max_ratio`; the geometric bound on
/// the dropped tail goes into error_estimate. Throws ConvergenceError when
/// the traces do not contract.
DetResult det_trace_series(const Matrix& weighted, const TraceSeriesOptions& options = {});
DetResult det_trace_series(const Kernel& kernel, const quad::QuadRule& rule,
                           const TraceSeriesOptions& options = {});

/// Symmetric Nystrom matrix of the Hankel kernel H(u, v) = f(u + v + alpha)
/// on a rule over [0, inf).
Matrix hankel_matrix(const std::function<double(double)>& f, double alpha,
                     const quad::QuadRule& rule);

/// det(I - L) on L^2[alpha, inf) for L(x, y) = int_0^inf f(x+z) f(z+y) dz.
/// L shifted to [0, inf) is H^2 with H(u, v) = f(u + v + alpha), so the
/// determinant is det(I - M) det(I + M) with M the Nystrom matrix of H.
/// error_estimate compares against the half-size rule.
DetResult det_hankel_square(const std::function<double(double)>& f, double alpha,
                            const quad::QuadRule& rule);

/// Smallest eigenvalue of M^2 (with M symmetric); used to confirm L = H^2
/// is positive semidefinite after discretization.
double min_eigenvalue_of_square(const Matrix& symmetric);

} // namespace whdet::fredholm
