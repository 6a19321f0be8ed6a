#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kwc/energy.hpp"
#include "kwc/grid.hpp"
#include "kwc/model.hpp"
#include "kwc/regularizers.hpp"

namespace kwc {

struct SolverOptions {
  double newton_tol = 1e-10;  // sup-norm of the cellwise weak-form residual
  int max_iter = 100;
  double linear_tol = 1e-12;  // relative residual of the inner CG solves
};

struct State {
  ScalarField eta;
  ScalarField theta;
  double t = 0.0;
  int step_index = 0;
};

struct SubStepDiagnostics {
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
};

struct StepReport {
  int step = 0;  // index of the new state
  double t = 0.0;
  double eta_residual = 0.0;
  double theta_residual = 0.0;
  int newton_iterations_eta = 0;
  int newton_iterations_theta = 0;
  double eta_convexity_margin = 0.0;
  EnergyBreakdown energy_before;
  EnergyBreakdown energy_after;
  double eta_increment_sq = 0.0;             // |eta_i - eta_{i-1}|^2
  double theta_weighted_increment_sq = 0.0;  // |sqrt(alpha0(eta_i)) (theta_i - theta_{i-1})|^2
  double ene_inq_slack = 0.0;
  bool dissipation_ok = true;  // slack >= -10 * newton_tol
};

struct EtaStepResult {
  ScalarField eta;
  SubStepDiagnostics diagnostics;
  double convexity_margin = 0.0;
};

struct ThetaStepResult {
  ScalarField theta;
  SubStepDiagnostics diagnostics;
};

/// 1/h + min(0, inf g') + min(0, inf alpha'') * max_cell C, where C is the
/// per-cell load of |grad theta_prev|_nu. Positive means the eta functional
/// is strongly convex on [0,1].
double eta_convexity_margin(const State& prev, const ModelFunctions& m, const Regularizer& reg,
                            double h);

// Minimizes (1/2h)|eta - eta_prev|^2 + 1/2 |grad eta|^2 + int ghat(eta)
//   + sum_corners mean(alpha(eta)) |grad theta_prev|_nu dx^d.
// Throws StepSizeError if the convexity margin is not positive and
// SolverError on Newton non-convergence.
EtaStepResult eta_step(const State& prev, const ModelFunctions& m, const Regularizer& reg,
                       double h, const SolverOptions& options = {});

// Minimizes (1/2h) int alpha0(eta_new) (theta - theta_prev)^2
//   + sum_corners mean(alpha(eta_new)) |grad theta|_nu dx^d + nu/2 |grad theta|^2.
ThetaStepResult theta_step(const ScalarField& eta_new, const State& prev,
                           const ModelFunctions& m, const Regularizer& reg, double h,
                           const SolverOptions& options = {});

/// One time step: eta first with lagged theta, then theta with the new eta.
std::pair<State, StepReport> step(const State& state, const ModelFunctions& m,
                                  const Regularizer& reg, double h,
                                  const SolverOptions& options = {});

// Initial-data presets: "uniform", "jump", "checker", "random", and
// "file:<stem>" which reads <stem>_eta.txt and <stem>_theta.txt.
struct InitialSpec {
  std::string preset = "jump";
  double eta = 1.0;         // eta level for uniform, jump, checker
  double theta = 0.0;       // uniform theta
  double theta_lo = 0.0;    // jump: theta for the lower half along axis; checker: even blocks
  double theta_hi = 1.0;    // jump: upper half; checker: odd blocks
  int axis = 0;             // jump direction
  int blocks = 2;           // checker blocks per axis
  unsigned seed = 1;        // random: eta ~ U[0,1], theta ~ U[theta_lo, theta_hi]
};

struct GridSpec {
  int dimension = 2;
  std::array<int, 2> extents{32, 32};
  double dx = 1.0 / 32.0;
  Grid make() const { return Grid(dimension, extents, dx); }
};

struct RunConfig {
  GridSpec grid;
  double delta_alpha = 0.5;
  RegularizerFamily family = RegularizerFamily::hyperbola;
  double nu = 0.05;
  double h = 0.05;
  int steps = 200;
  InitialSpec initial;
  SolverOptions solver;

  void validate() const;
};

State make_initial_state(const InitialSpec& spec, const Grid& grid);

struct Trajectory {
  std::vector<State> states;
  std::vector<StepReport> reports;
  double h = 0.0;
  std::optional<Regularizer> reg;
  std::optional<ModelFunctions> model;
  std::optional<std::string> failure;
  bool complete() const { return !failure.has_value(); }
};

/// Iterates step() from a given initial state.
Trajectory run_from(const State& initial, const ModelFunctions& m, const Regularizer& reg,
                    double h, int steps, const SolverOptions& options = {});
/// Canonical model with the configured delta_alpha and initial preset.
Trajectory run(const RunConfig& config);

}  // namespace kwc
