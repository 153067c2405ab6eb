#pragma once

#include <string>
#include <vector>

#include "bandcast/signal_model.hpp"
#include "bandcast/solver.hpp"

namespace bandcast {

/// Solver diagnostics attached to a fit, including how the degenerate-regime tie was broken.
struct SolverInfo : SolveReport {
  std::string note;
};

struct FitResult {
  TimeWindow window;
  BandlimitedModel model;
  Vector fitted_values;          // x_hat(t) for t in the window
  double residual_l2 = 0.0;      // sqrt(sum (x_hat - x)^2) over the window
  double normal_residual = 0.0;  // ||Q*x - (R + eps I) y||
  bool unique_regime = false;
  SolverInfo solver_info;
};

/// Least-squares band-limited approximation of the window: solves
/// (R + eps I) y = Q*x and synthesizes x_hat on the window.
FitResult fit(const Signal& signal, const FitConfig& config);

/// Values of the fitted model at s+1, ..., s+horizon. When the fit is outside the
/// unique regime these extrapolate one member of the manifold of minimizers.
Vector forecast(const FitResult& result, int horizon);

/// F(x_hat, x) = sum_{t=q}^{s} (x_hat(t) - x(t))^2.
double objective(const Signal& signal, const BandlimitedModel& model);

/// F(x_hat, x) + eps^2 ||y||^2. Its minimizer solves (R + eps^2 I) y = Q*x, whereas
/// fit() shifts the diagonal by eps itself.
double objective_regularized(const Signal& signal, const BandlimitedModel& model, double epsilon);

/// Reference solution for testing: forms A^T A + eps I and A^T x from the design
/// matrix (descending-t accumulation) and solves by Gaussian elimination with partial
/// pivoting. Limited to 2N+1 <= 64. Throws SingularSystem on a zero pivot column.
Vector brute_force_fit(const Signal& signal, const FitConfig& config);

/// Fit by a process supported on [-pi, -pi+omega] U [pi-omega, pi]: fits (-1)^t x(t)
/// in the low band and maps the reconstruction back.
FitResult fit_highband(const Signal& signal, const FitConfig& config);

}  // namespace bandcast
