#pragma once

// Damped Newton for smooth strongly convex functionals on R^n, with the
// linear systems solved by Jacobi-preconditioned conjugate gradients.

#include <span>
#include <vector>

#include "kwc/stepper.hpp"

namespace kwc::detail {

class ConvexProblem {
 public:
  virtual ~ConvexProblem() = default;
  /// Objective, scaled so that gradient() is its exact gradient.
  virtual double energy(std::span<const double> x) = 0;
  virtual void gradient(std::span<const double> x, std::span<double> out) = 0;
  /// Freeze the Hessian at x; apply()/diagonal() then refer to it.
  virtual void prepare_hessian(std::span<const double> x) = 0;
  virtual void apply_hessian(std::span<const double> p, std::span<double> out) = 0;
  virtual void hessian_diagonal(std::span<double> out) = 0;
};

struct NewtonOutcome {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;
  bool converged = false;
  bool stalled = false;  // no further decrease above rounding noise
};

/// Converged when sup|gradient| <= options.newton_tol.
NewtonOutcome newton_solve(ConvexProblem& problem, std::vector<double> x0,
                           const SolverOptions& options);

/// Returns the number of iterations used.
int pcg(ConvexProblem& problem, std::span<const double> b, std::span<double> x, double rel_tol,
        int max_iter);

}  // namespace kwc::detail
