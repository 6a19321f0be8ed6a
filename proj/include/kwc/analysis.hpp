#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kwc/grid.hpp"
#include "kwc/model.hpp"
#include "kwc/regularizers.hpp"
#include "kwc/stepper.hpp"

namespace kwc {

// Piecewise-in-time interpolants of a discrete trajectory with nodes t_i = i*h:
//   overline(t)  = state ceil(t/h)   (backward-constant)
//   underline(t) = state floor(t/h)  (forward-constant)
//   hat(t)       = affine between the bracketing states
// Times within 1e-9*h of a node snap to it, so all three agree there.
class Interpolants {
 public:
  explicit Interpolants(const Trajectory& traj);

  double h() const { return h_; }
  double horizon() const;

  const State& overline(double t) const;
  const State& underline(double t) const;
  State hat(double t) const;

 private:
  std::size_t node_below(double t) const;
  std::size_t node_above(double t) const;

  const Trajectory& traj_;
  double h_;
};

struct InequalityCheck {
  std::string name;
  bool pass = true;
  double worst_slack = 0.0;
  int worst_index = 0;
  double tolerance = 0.0;
};

struct AuditOptions {
  double newton_tol = 1e-10;  // dissipation tolerances are 10x this
  double range_tolerance = 1e-9;
};

// Per-step values are indexed by step i = 1..n (entry i-1); per-m values by
// m = 1..n. energy[i] is F_nu at state i, recomputed from the states.
struct AuditReport {
  std::vector<double> energy;
  std::vector<double> ene_inq_slack;
  std::vector<double> weighted_lhs, weighted_rhs, weighted_slack;    // i-weighted sums
  std::vector<double> reference_lhs, reference_rhs, reference_slack; // against [w0, v0]
  std::vector<double> time_weighted_slack;  // t-weighted integral bound at node times
  std::vector<double> trace_increase; // F_i - F_{i-1}
  std::vector<double> vi_slack;       // worst variational-inequality slack over the test family
  double eta_min = 0.0, eta_max = 0.0, theta_sup = 0.0, theta0_sup = 0.0;
  bool nu_admissible = false;  // nu < nu_star, where the reference bound is guaranteed
  std::vector<InequalityCheck> checks;

  bool pass() const;
  const InequalityCheck& check(const std::string& name) const;
};

/// Throws PreconditionError if the trajectory is incomplete or the
/// reference pair violates 0 <= w0 <= 1, |v0| <= sup|theta0|.
AuditReport energy_inequality_audit(const Trajectory& traj, const ModelFunctions& m,
                                    const StabilityConstants& consts, const ScalarField& w0,
                                    const ScalarField& v0, const AuditOptions& options = {});

struct GammaRow {
  double nu = 0.0;
  double width = 0.0;          // mollifier standard deviation
  double phi0 = 0.0;           // Phi_0(beta; v)
  double phi_nu_recovery = 0.0;
  double error = 0.0;          // |Phi_nu(beta; v_nu) - Phi_0(beta; v)|
  double phi_nu_v = 0.0;       // Phi_nu(beta; v)
  double liminf_bound = 0.0;   // q0 Phi_0(beta; v) - r0 * corner mass of beta
  bool liminf_ok = true;
};

struct GammaTable {
  std::vector<GammaRow> rows;
  bool errors_decreasing() const;  // strictly
  bool errors_nonincreasing() const;
  bool liminf_ok() const;
};

/// Discrete Gaussian mollification with reflecting boundaries, truncated at 4 sigma;
/// sigma is measured in length units.
ScalarField mollify(const ScalarField& v, double sigma);

/// Requires beta > 0 cellwise and nus strictly decreasing in (0,1).
GammaTable gamma_diagnostic(const ScalarField& beta, const ScalarField& v,
                            RegularizerFamily family, const std::vector<double>& nus);

struct RefinementPair {
  double nu = 0.0;
  double h = 0.0;
};

struct RefinementRow {
  double nu = 0.0;
  double h = 0.0;
  int steps = 0;
  double hF0 = 0.0;  // h * F_nu(eta_0, theta_0)
  bool completed = false;
  std::string failure;
  double final_energy = 0.0;
  double state_distance = 0.0;  // L2 distance of the final state to the previous pair's
  double trace_distance = 0.0;  // sup over common times of |F trace difference|
};

struct RefinementReport {
  std::vector<RefinementRow> rows;
  double horizon = 0.0;
  bool gate_strict = true;         // hF0 strictly decreasing
  bool distances_decreasing() const;
  bool all_completed() const;
};

/// Runs each pair of the template to the common horizon, concurrently.
/// Throws PreconditionError if h_n * F_{nu_n}(eta_0, theta_0) increases along
/// the pairs or if a horizon is not a whole number of steps.
RefinementReport refinement_experiment(const RunConfig& base,
                                       const std::vector<RefinementPair>& pairs, double horizon);

struct OmegaOptions {
  double sd_threshold = 1e-3;
  double wtv_threshold = 1e-3;
  double steady_threshold = 1e-5;
  double range_tolerance = 1e-9;
  double monotone_tolerance = 1e-12;
};

struct OmegaReport {
  double theta_sd = 0.0;
  double weighted_tv = 0.0;
  double steady_residual = 0.0;  // sup |-Lap eta_T + g(eta_T)|
  double eta_min = 0.0, eta_max = 0.0, theta_sup = 0.0, theta0_sup = 0.0;
  std::vector<double> sd_trace;  // sd(theta_i) for every state
  bool tail_sd_nonincreasing = true;
  std::vector<InequalityCheck> checks;

  bool pass() const;
};

double spatial_sd(const ScalarField& v);

/// Requires at least 10 steps.
OmegaReport omega_limit_audit(const Trajectory& traj, const ModelFunctions& m,
                              const OmegaOptions& options = {});

// CSV writers (header line first).
void write_energy_trace_csv(std::ostream& out, const Trajectory& traj);
void write_audit_csv(std::ostream& out, const AuditReport& report);
void write_gamma_csv(std::ostream& out, const GammaTable& table);
void write_refinement_csv(std::ostream& out, const RefinementReport& report);
void write_omega_csv(std::ostream& out, const OmegaReport& report);
void write_checks(std::ostream& out, const std::vector<InequalityCheck>& checks);

}  // namespace kwc
