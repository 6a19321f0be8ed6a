#include "newton.hpp"

#include <algorithm>
#include <cmath>

#include "stencil.hpp"

namespace kwc::detail {

int pcg(ConvexProblem& problem, std::span<const double> b, std::span<double> x, double rel_tol,
        int max_iter) {
  const std::size_t n = b.size();
  std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n), diag(n);
  problem.hessian_diagonal(diag);
  std::fill(x.begin(), x.end(), 0.0);

  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) return 0;
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = dot(r, z);
  int it = 0;
  for (; it < max_iter; ++it) {
    problem.apply_hessian(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) break;
    const double a = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += a * p[i];
      r[i] -= a * q[i];
    }
    if (std::sqrt(dot(r, r)) <= rel_tol * bnorm) {
      ++it;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return it;
}

NewtonOutcome newton_solve(ConvexProblem& problem, std::vector<double> x0,
                           const SolverOptions& options) {
  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-12;
  constexpr int kMaxNoiseSteps = 5;
  int noise_steps = 0;
  const std::size_t n = x0.size();
  NewtonOutcome out;
  out.x = std::move(x0);
  std::vector<double> g(n), p(n), trial(n), rhs(n);

  double J = problem.energy(out.x);
  for (int iter = 0;; ++iter) {
    problem.gradient(out.x, g);
    out.residual = sup_norm(g);
    out.history.push_back(out.residual);
    if (out.residual <= options.newton_tol) {
      out.converged = true;
      out.iterations = iter;
      return out;
    }
    if (iter >= options.max_iter || !std::isfinite(out.residual)) {
      out.iterations = iter;
      return out;
    }

    problem.prepare_hessian(out.x);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -g[i];
    pcg(problem, rhs, p, options.linear_tol, 4 * static_cast<int>(n) + 100);

    const double slope = dot(g, p);
    // Energy differences below this are rounding noise.
    const double noise = 1e-14 * (1.0 + std::abs(J));
    double step = 1.0;
    bool accepted = false;
    while (step >= kMinStep) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = out.x[i] + step * p[i];
      const double Jt = problem.energy(trial);
      if (std::isfinite(Jt) && Jt <= J + kArmijo * step * slope + noise) {
        noise_steps = Jt <= J + kArmijo * step * slope ? 0 : noise_steps + 1;
        J = Jt;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || noise_steps >= kMaxNoiseSteps) {
      out.iterations = iter + 1;
      out.stalled = true;
      return out;
    }
    out.x.swap(trial);
  }
}

}  // namespace kwc::detail
