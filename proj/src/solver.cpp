#include "bandcast/solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>

#include "bandcast/error.hpp"

namespace bandcast {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const Matrix& m, std::size_t rhs_size) {
  if (!m.is_square() || m.rows() != rhs_size) {
    throw InvalidArgument("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                          " but right-hand side has length " + std::to_string(rhs_size));
  }
}

Vector residual(const Matrix& m, std::span<const double> y, std::span<const double> b) {
  Vector r = matvec(m, y);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

// Power iteration on (shift I - M) when subtract is true, on M otherwise.
double power_iteration(const Matrix& m, int iters, double shift, bool subtract) {
  const std::size_t n = m.rows();
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = unif(rng);
  double nv = norm2(v);
  for (auto& x : v) x /= nv;

  auto apply = [&](const Vector& x) {
    Vector w = matvec(m, x);
    if (subtract) {
      for (std::size_t i = 0; i < n; ++i) w[i] = shift * x[i] - w[i];
    }
    return w;
  };

  for (int it = 0; it < iters; ++it) {
    Vector w = apply(v);
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
  }
  return dot(v, apply(v));
}

}  // namespace

const char* to_string(SolveMethod method) noexcept {
  switch (method) {
    case SolveMethod::direct_factorization:
      return "direct_factorization";
    case SolveMethod::conjugate_gradient:
      return "conjugate_gradient";
  }
  return "unknown";
}

Matrix regularize(const Matrix& m, double epsilon) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  Matrix out = m;
  const std::size_t n = std::min(m.rows(), m.cols());
  for (std::size_t i = 0; i < n; ++i) out(i, i) += epsilon;
  return out;
}

Matrix regularize(const GramMatrix& gram, double epsilon) { return regularize(gram.entries, epsilon); }

std::optional<CholeskyFactor> CholeskyFactor::factor(const Matrix& m) {
  const std::size_t n = m.rows();
  if (!m.is_square()) return std::nullopt;
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, m(i, i));
  const double floor = static_cast<double>(n) * kEps * max_diag;

  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t p = 0; p < j; ++p) d -= l(j, p) * l(j, p);
    if (!(d > floor)) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
      l(i, j) = s / ljj;
    }
  }
  return CholeskyFactor(std::move(l));
}

Vector CholeskyFactor::solve(std::span<const double> b) const {
  const std::size_t n = lower_.rows();
  Vector z(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = z[i];
    for (std::size_t p = 0; p < i; ++p) s -= lower_(i, p) * z[p];
    z[i] = s / lower_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = z[i];
    for (std::size_t p = i + 1; p < n; ++p) s -= lower_(p, i) * z[p];
    z[i] = s / lower_(i, i);
  }
  return z;
}

CgResult conjugate_gradient(const Matrix& m, std::span<const double> b, double tol, int max_iter) {
  require_square(m, b.size());
  const std::size_t n = b.size();
  CgResult out;
  out.y.assign(n, 0.0);
  const double b_norm = norm2(b);
  if (b_norm == 0.0) {
    out.converged = true;
    return out;
  }
  Vector r(b.begin(), b.end());
  Vector p = r;
  double rr = dot(r, r);
  for (int it = 0; it < max_iter; ++it) {
    const Vector mp = matvec(m, p);
    const double pmp = dot(p, mp);
    if (!(pmp > 0.0)) break;  // direction of non-positive curvature
    const double alpha = rr / pmp;
    for (std::size_t i = 0; i < n; ++i) {
      out.y[i] += alpha * p[i];
      r[i] -= alpha * mp[i];
    }
    out.iterations = it + 1;
    const double rr_next = dot(r, r);
    if (std::sqrt(rr_next) <= tol * b_norm) {
      rr = rr_next;
      break;
    }
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  // The recurrence drifts on ill-conditioned systems; judge convergence on the true residual.
  out.relative_residual = norm2(residual(m, out.y, b)) / b_norm;
  out.converged = out.relative_residual <= tol;
  return out;
}

CgResult conjugate_gradient_factored(const Matrix& at, std::span<const double> x, double shift, const Matrix& m,
                                     std::span<const double> b, double tol, int max_iter) {
  require_square(m, b.size());
  if (at.rows() != b.size() || at.cols() != x.size()) {
    throw InvalidArgument("factor is " + std::to_string(at.rows()) + "x" + std::to_string(at.cols()) +
                          ", inconsistent with the system or the data");
  }
  const std::size_t n = at.rows(), len = at.cols();
  CgResult out;
  out.y.assign(n, 0.0);
  const double b_norm = norm2(b);
  if (b_norm == 0.0) {
    out.converged = true;
    return out;
  }
  Vector r(len), s(n), q(len), p;
  // Sets r = x - A y and s = A^T r - shift y from scratch; returns ||s||.
  auto refresh = [&] {
    r.assign(x.begin(), x.end());
    for (std::size_t k = 0; k < n; ++k) {
      const auto row = at.row(k);
      for (std::size_t t = 0; t < len; ++t) r[t] -= row[t] * out.y[k];
    }
    for (std::size_t k = 0; k < n; ++k) s[k] = dot(at.row(k), r) - shift * out.y[k];
    return norm2(s);
  };
  double true_norm = refresh();
  p = s;
  double gamma = dot(s, s);
  while (out.iterations < max_iter && true_norm > tol * b_norm) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const auto row = at.row(k);
      for (std::size_t t = 0; t < len; ++t) q[t] += row[t] * p[k];
    }
    const double curvature = dot(q, q) + shift * dot(p, p);
    if (!(curvature > 0.0)) break;
    const double alpha = gamma / curvature;
    for (std::size_t k = 0; k < n; ++k) out.y[k] += alpha * p[k];
    for (std::size_t t = 0; t < len; ++t) r[t] -= alpha * q[t];
    for (std::size_t k = 0; k < n; ++k) s[k] = dot(at.row(k), r) - shift * out.y[k];
    ++out.iterations;
    const double gamma_next = dot(s, s);
    if (std::sqrt(gamma_next) <= tol * b_norm) {
      // The recurrence drifts; confirm on a fresh residual and restart if it disagrees.
      true_norm = refresh();
      p = s;
      gamma = dot(s, s);
      continue;
    }
    const double beta = gamma_next / gamma;
    gamma = gamma_next;
    for (std::size_t k = 0; k < n; ++k) p[k] = s[k] + beta * p[k];
  }
  out.relative_residual = refresh() / b_norm;
  out.converged = out.relative_residual <= tol;
  return out;
}

namespace {

template <class Fallback>
SolveOutcome solve_with(const Matrix& m, std::span<const double> b, bool try_direct, Fallback&& fallback) {
  SolveOutcome out;
  std::optional<CholeskyFactor> chol;
  if (try_direct) chol = CholeskyFactor::factor(m);
  if (chol) {
    out.y = chol->solve(b);
    out.report.method = SolveMethod::direct_factorization;
    out.report.iterations = 0;
  } else {
    CgResult cg = fallback();
    if (!cg.converged) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "factorization failed and conjugate gradient stalled at relative residual %.3g after %d "
                    "iterations; increase epsilon",
                    cg.relative_residual, cg.iterations);
      throw NotPositiveDefinite(msg);
    }
    out.y = std::move(cg.y);
    out.report.method = SolveMethod::conjugate_gradient;
    out.report.iterations = cg.iterations;
  }
  out.report.achieved_residual = norm2(residual(m, out.y, b));
  const EigenBounds bounds = condition_estimate(m, kDefaultConditionIters);
  out.report.lambda_max_estimate = bounds.lambda_max;
  out.report.lambda_min_estimate = bounds.lambda_min;
  out.report.condition_estimate = condition_number(bounds);
  return out;
}

}  // namespace

SolveOutcome solve_spd(const Matrix& m, std::span<const double> b, double tol, int max_iter) {
  require_square(m, b.size());
  return solve_with(m, b, true, [&] { return conjugate_gradient(m, b, tol, max_iter); });
}

SolveOutcome solve_spd_factored(const Matrix& m, std::span<const double> b, const Matrix& at,
                                std::span<const double> x, double shift, double tol, int max_iter,
                                bool try_direct) {
  require_square(m, b.size());
  return solve_with(m, b, try_direct, [&] { return conjugate_gradient_factored(at, x, shift, m, b, tol, max_iter); });
}

EigenBounds condition_estimate(const Matrix& m, int iters) {
  if (!m.is_square()) throw InvalidArgument("condition_estimate needs a square matrix");
  if (m.rows() == 0) return {};
  EigenBounds out;
  out.lambda_max = power_iteration(m, iters, 0.0, false);
  out.lambda_min = out.lambda_max - power_iteration(m, iters, out.lambda_max, true);
  return out;
}

double condition_number(const EigenBounds& bounds) noexcept {
  const double cap = 1.0 / kEps;
  if (!(bounds.lambda_max > 0.0) || bounds.lambda_min <= bounds.lambda_max * kEps) return cap;
  return std::min(cap, bounds.lambda_max / bounds.lambda_min);
}

Vector symmetric_eigenvalues(const Matrix& m) {
  if (!m.is_square()) throw InvalidArgument("symmetric_eigenvalues needs a square matrix");
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXd dense(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) dense(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return Vector(ev.data(), ev.data() + ev.size());
}

}  // namespace bandcast
