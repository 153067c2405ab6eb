#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bandcast/linalg.hpp"
#include "bandcast/sinc_ops.hpp"

namespace bandcast {

enum class SolveMethod { direct_factorization, conjugate_gradient };

const char* to_string(SolveMethod method) noexcept;

/// Diagnostics of one solve of M y = b.
struct SolveReport {
  SolveMethod method = SolveMethod::direct_factorization;
  int iterations = 0;               // 0 for the direct route
  double achieved_residual = 0.0;   // ||M y - b||_2
  double condition_estimate = 0.0;  // lambda_max / lambda_min, capped at 1 / machine epsilon
  double lambda_max_estimate = 0.0;
  double lambda_min_estimate = 0.0;
};

struct SolveOutcome {
  Vector y;
  SolveReport report;
};

/// R + epsilon I. Off-diagonal entries are copied untouched.
Matrix regularize(const GramMatrix& gram, double epsilon);
Matrix regularize(const Matrix& m, double epsilon);

/// Lower-triangular Cholesky factor L with M = L L^T.
class CholeskyFactor {
 public:
  /// Returns nullopt if a pivot is not safely positive, i.e. falls at or below
  /// n * machine epsilon * max diagonal of M.
  static std::optional<CholeskyFactor> factor(const Matrix& m);

  Vector solve(std::span<const double> b) const;
  const Matrix& lower() const noexcept { return lower_; }

 private:
  explicit CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {}
  Matrix lower_;
};

struct CgResult {
  Vector y;
  int iterations = 0;
  double relative_residual = 0.0;  // ||M y - b|| / ||b||
  bool converged = false;
};

/// Conjugate gradient started at the zero vector. Stops once the relative residual
/// drops to `tol` or after `max_iter` iterations; the last iterate is returned either way.
CgResult conjugate_gradient(const Matrix& m, std::span<const double> b, double tol, int max_iter);

/// Conjugate gradient for (A^T A + shift I) y = A^T x that applies A and A^T separately
/// (CGLS), started at the zero vector. `at` is A^T, one row per unknown. Same iterates as
/// conjugate_gradient on the product in exact arithmetic, but rounding is governed by the
/// conditioning of A rather than of A^T A. Convergence is judged on A^T (x - A y) - shift y
/// recomputed from the final iterate. `m` = A^T A + shift I and `b` = A^T x are used for
/// shape checks and the zero right-hand side.
CgResult conjugate_gradient_factored(const Matrix& at, std::span<const double> x, double shift, const Matrix& m,
                                     std::span<const double> b, double tol, int max_iter);

/// Direct Cholesky solve, falling back to conjugate gradient when the factorization
/// fails. Throws NotPositiveDefinite if CG does not reach `tol` within `max_iter`.
SolveOutcome solve_spd(const Matrix& m, std::span<const double> b, double tol, int max_iter);

/// solve_spd for m = A^T A + shift I and b = A^T x, with the fallback run as
/// conjugate_gradient_factored. With `try_direct` false the factorization is skipped,
/// which selects the minimum-norm solution when m is singular.
SolveOutcome solve_spd_factored(const Matrix& m, std::span<const double> b, const Matrix& at,
                                std::span<const double> x, double shift, double tol, int max_iter,
                                bool try_direct = true);

struct EigenBounds {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
};

/// Power iteration on M for lambda_max, then on (lambda_max I - M) for lambda_min.
/// Estimates only; accuracy depends on `iters` and the spectral gaps.
EigenBounds condition_estimate(const Matrix& m, int iters);

inline constexpr int kDefaultConditionIters = 300;

/// lambda_max / lambda_min, capped at 1 / machine epsilon when lambda_min is tiny or negative.
double condition_number(const EigenBounds& bounds) noexcept;

/// Full ascending spectrum of a symmetric matrix (self-adjoint QR eigensolver).
Vector symmetric_eigenvalues(const Matrix& m);

}  // namespace bandcast
