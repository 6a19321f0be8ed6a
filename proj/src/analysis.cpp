#include "kwc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>

#include "kwc/energy.hpp"
#include "kwc/errors.hpp"

namespace kwc {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

InequalityCheck summarize(const std::string& name, const std::vector<double>& slack,
                          const std::vector<double>& tolerance, int first_index) {
  InequalityCheck c;
  c.name = name;
  c.worst_slack = std::numeric_limits<double>::infinity();
  double tol_used = 0.0;
  for (std::size_t k = 0; k < slack.size(); ++k) {
    if (slack[k] < c.worst_slack) {
      c.worst_slack = slack[k];
      c.worst_index = static_cast<int>(k) + first_index;
      tol_used = tolerance[k];
    }
    if (!(slack[k] >= -tolerance[k])) c.pass = false;
  }
  if (slack.empty()) c.worst_slack = 0.0;
  c.tolerance = tol_used;
  return c;
}

InequalityCheck threshold_check(const std::string& name, double value, double limit) {
  InequalityCheck c;
  c.name = name;
  c.worst_slack = limit - value;
  c.tolerance = 0.0;
  c.pass = value < limit;
  return c;
}

const Regularizer& require_reg(const Trajectory& traj) {
  if (!traj.reg) throw PreconditionError("trajectory carries no regularizer");
  return *traj.reg;
}

double l2_distance_sq(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s * a.grid().cell_volume();
}

std::vector<double> energy_trace(const Trajectory& traj, const ModelFunctions& m) {
  const auto& reg = require_reg(traj);
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& s : traj.states) out.push_back(relaxed_free_energy(m, s.eta, s.theta, reg).total);
  return out;
}

}  // namespace

// Interpolants

Interpolants::Interpolants(const Trajectory& traj) : traj_(traj), h_(traj.h) {
  if (traj.states.empty()) throw PreconditionError("Interpolants: empty trajectory");
  if (!(h_ > 0.0)) throw PreconditionError("Interpolants: h must be positive");
}

double Interpolants::horizon() const { return h_ * static_cast<double>(traj_.states.size() - 1); }

std::size_t Interpolants::node_below(double t) const {
  const double n = static_cast<double>(traj_.states.size() - 1);
  const double s = t / h_;
  if (!(s >= -1e-9) || !(s <= n + 1e-9)) {
    throw PreconditionError("Interpolants: time outside the trajectory horizon");
  }
  const double r = std::round(s);
  if (std::abs(s - r) <= 1e-9) return static_cast<std::size_t>(std::clamp(r, 0.0, n));
  return static_cast<std::size_t>(std::floor(s));
}

std::size_t Interpolants::node_above(double t) const {
  const std::size_t k = node_below(t);
  const double s = t / h_;
  if (std::abs(s - std::round(s)) <= 1e-9) return k;
  return k + 1;
}

const State& Interpolants::overline(double t) const { return traj_.states[node_above(t)]; }

const State& Interpolants::underline(double t) const { return traj_.states[node_below(t)]; }

State Interpolants::hat(double t) const {
  const std::size_t lo = node_below(t), hi = node_above(t);
  if (lo == hi) return traj_.states[lo];
  const double lam = t / h_ - static_cast<double>(lo);
  const auto& a = traj_.states[lo];
  const auto& b = traj_.states[hi];
  std::vector<double> eta(a.eta.size()), theta(a.eta.size());
  for (std::size_t k = 0; k < eta.size(); ++k) {
    eta[k] = (1.0 - lam) * a.eta[k] + lam * b.eta[k];
    theta[k] = (1.0 - lam) * a.theta[k] + lam * b.theta[k];
  }
  return State{ScalarField(a.eta.grid(), std::move(eta)), ScalarField(a.eta.grid(), std::move(theta)),
               t, static_cast<int>(lo)};
}

// Energy inequalities

bool AuditReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const InequalityCheck& AuditReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no audit check named " + name);
}

AuditReport energy_inequality_audit(const Trajectory& traj, const ModelFunctions& m,
                                    const StabilityConstants& consts, const ScalarField& w0,
                                    const ScalarField& v0, const AuditOptions& options) {
  if (!traj.complete()) throw PreconditionError("audit: trajectory is incomplete: " + *traj.failure);
  if (traj.states.empty()) throw PreconditionError("audit: empty trajectory");
  const auto& reg = require_reg(traj);
  const auto& s0 = traj.states.front();
  require_same_grid(w0.grid(), s0.eta.grid(), "audit reference w0");
  require_same_grid(v0.grid(), s0.eta.grid(), "audit reference v0");

  AuditReport r;
  r.theta0_sup = s0.theta.sup_abs();
  const double rt = options.range_tolerance;
  if (w0.min() < 0.0 || w0.max() > 1.0 || v0.sup_abs() > r.theta0_sup + rt) {
    throw PreconditionError("audit: reference pair must satisfy 0 <= w0 <= 1 and |v0| <= sup|theta0|");
  }

  const double h = traj.h;
  const double tol = 10.0 * options.newton_tol;
  const std::size_t n = traj.states.size() - 1;
  r.energy = energy_trace(traj, m);
  r.nu_admissible = reg.nu() < consts.nu_star;

  r.eta_min = std::numeric_limits<double>::infinity();
  r.eta_max = -r.eta_min;
  r.theta_sup = 0.0;
  for (const auto& s : traj.states) {
    r.eta_min = std::min(r.eta_min, s.eta.min());
    r.eta_max = std::max(r.eta_max, s.eta.max());
    r.theta_sup = std::max(r.theta_sup, s.theta.sup_abs());
  }

  const double ref_const = consts.C_star * (1.0 + h1_norm_sq(w0) + h1_norm_sq(v0));
  const double ref_base = 0.5 * (l2_distance_sq(s0.eta, w0) +
                                 consts.A_star * l2_distance_sq(s0.theta, v0)) +
                          h / consts.B_star * r.energy[0];

  std::vector<double> step_tol, weighted_tol, ref_tol, trace_tol, vi_tol;
  double sum_prev = 0.0;       // sum_{i=1}^m F_{i-1}
  double weighted_inc = 0.0;   // sum_i i (1/2 |d eta|^2 + |sqrt(a0) d theta|^2)
  double time_weighted_inc = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& a = traj.states[i - 1];
    const auto& b = traj.states[i];
    const double de = l2_distance_sq(b.eta, a.eta);
    double dt = 0.0;
    for (std::size_t k = 0; k < b.eta.size(); ++k) {
      const double d = b.theta[k] - a.theta[k];
      dt += m.alpha0(b.eta[k]) * d * d;
    }
    dt *= b.eta.grid().cell_volume();
    const double di = static_cast<double>(i);

    r.ene_inq_slack.push_back(r.energy[i - 1] - r.energy[i] - de / (2.0 * h) - dt / h);
    step_tol.push_back(tol);
    r.trace_increase.push_back(r.energy[i] - r.energy[i - 1]);
    trace_tol.push_back(tol);

    sum_prev += r.energy[i - 1];
    weighted_inc += di * (0.5 * de + dt);
    time_weighted_inc += 0.5 * (2.0 * di - 1.0) * (0.5 * de + dt);
    const double mhF = di * h * r.energy[i];
    r.weighted_lhs.push_back(weighted_inc + mhF);
    r.weighted_rhs.push_back(h * sum_prev);
    r.weighted_slack.push_back(r.weighted_rhs.back() - r.weighted_lhs.back());
    weighted_tol.push_back(tol * h * di * (di + 1.0) / 2.0);
    r.time_weighted_slack.push_back(h * sum_prev - time_weighted_inc - mhF);

    r.reference_lhs.push_back(0.5 * (l2_distance_sq(b.eta, w0) +
                                     consts.A_star * l2_distance_sq(b.theta, v0)) +
                              0.5 * consts.B_star * h * sum_prev);
    r.reference_rhs.push_back(ref_base + di * h * ref_const);
    r.reference_slack.push_back(r.reference_rhs.back() - r.reference_lhs.back());
    ref_tol.push_back(tol * (1.0 + std::abs(r.reference_rhs.back())));

    // theta_i against the finite test family {0, theta_{i-1}, constants, theta_i +- 1}.
    const auto weight = apply(b.eta, m.alpha);
    const double phi_i = relaxed_wtv(weight, b.theta, reg);
    const Grid& grid = b.eta.grid();
    std::vector<ScalarField> family;
    family.emplace_back(grid, 0.0);
    family.push_back(a.theta);
    family.emplace_back(grid, s0.theta.min());
    family.emplace_back(grid, s0.theta.max());
    for (double shift : {-1.0, 1.0}) {
      std::vector<double> v(b.theta.values().begin(), b.theta.values().end());
      for (double& x : v) x += shift;
      family.emplace_back(grid, std::move(v));
    }
    // Keep the member closest to violating its own tolerance tol * (1 + |theta_i - v|_1).
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_slack = 0.0, worst_allowed = 0.0;
    for (const auto& v : family) {
      double pairing = 0.0, l1 = 0.0;
      for (std::size_t k = 0; k < b.eta.size(); ++k) {
        pairing += m.alpha0(b.eta[k]) * (b.theta[k] - a.theta[k]) / h * (b.theta[k] - v[k]);
        l1 += std::abs(b.theta[k] - v[k]);
      }
      pairing *= grid.cell_volume();
      l1 *= grid.cell_volume();
      const double slack = relaxed_wtv(weight, v, reg) - phi_i - pairing;
      const double allowed = tol * (1.0 + l1);
      if (slack + allowed < worst_margin) {
        worst_margin = slack + allowed;
        worst_slack = slack;
        worst_allowed = allowed;
      }
    }
    r.vi_slack.push_back(worst_slack);
    vi_tol.push_back(worst_allowed);
  }

  std::vector<double> time_tol = weighted_tol;
  r.checks.push_back(summarize("step_dissipation", r.ene_inq_slack, step_tol, 1));
  r.checks.push_back(summarize("energy_monotone", [&] {
    std::vector<double> neg(r.trace_increase.size());
    for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = -r.trace_increase[k];
    return neg;
  }(), trace_tol, 1));
  r.checks.push_back(summarize("weighted_dissipation", r.weighted_slack, weighted_tol, 1));
  r.checks.push_back(summarize("time_weighted_bound", r.time_weighted_slack, time_tol, 1));
  r.checks.push_back(summarize("reference_stability", r.reference_slack, ref_tol, 1));
  r.checks.push_back(summarize("variational_inequality", r.vi_slack, vi_tol, 1));

  InequalityCheck eta_range{"eta_range", r.eta_min >= -rt && r.eta_max <= 1.0 + rt,
                            std::min(r.eta_min, 1.0 - r.eta_max), 0, rt};
  InequalityCheck theta_range{"theta_range", r.theta_sup <= r.theta0_sup + rt,
                              r.theta0_sup - r.theta_sup, 0, rt};
  r.checks.push_back(eta_range);
  r.checks.push_back(theta_range);
  return r;
}

// Gamma diagnostic

bool GammaTable::errors_decreasing() const {
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (!(rows[k].error < rows[k - 1].error)) return false;
  return true;
}

bool GammaTable::errors_nonincreasing() const {
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (!(rows[k].error <= rows[k - 1].error)) return false;
  return true;
}

bool GammaTable::liminf_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.liminf_ok; });
}

ScalarField mollify(const ScalarField& v, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("mollify: sigma must be >= 0");
  const Grid& grid = v.grid();
  if (sigma == 0.0) return v;
  const double dx = grid.dx();
  const int reach = static_cast<int>(std::ceil(4.0 * sigma / dx));
  std::vector<double> kernel(static_cast<std::size_t>(2 * reach + 1));
  double total = 0.0;
  for (int k = -reach; k <= reach; ++k) {
    const double x = k * dx;
    total += kernel[static_cast<std::size_t>(k + reach)] = std::exp(-x * x / (2.0 * sigma * sigma));
  }
  for (double& w : kernel) w /= total;

  // Half-sample mirror: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
  auto mirror = [](int i, int n) {
    const int period = 2 * n;
    int m = ((i % period) + period) % period;
    return m < n ? m : period - 1 - m;
  };

  std::vector<double> cur(v.values().begin(), v.values().end()), next(cur.size());
  const int n0 = grid.extent(0), n1 = grid.extent(1);
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        double s = 0.0;
        for (int k = -reach; k <= reach; ++k) {
          const double w = kernel[static_cast<std::size_t>(k + reach)];
          const std::size_t src = axis == 0 ? grid.cell(mirror(i + k, n0), j)
                                            : grid.cell(i, mirror(j + k, n1));
          s += w * cur[src];
        }
        next[grid.cell(i, j)] = s;
      }
    cur.swap(next);
  }
  return ScalarField(grid, std::move(cur));
}

GammaTable gamma_diagnostic(const ScalarField& beta, const ScalarField& v,
                            RegularizerFamily family, const std::vector<double>& nus) {
  require_same_grid(beta.grid(), v.grid(), "gamma_diagnostic");
  if (!(beta.min() > 0.0)) throw PreconditionError("gamma_diagnostic: beta must be positive");
  for (std::size_t k = 0; k < nus.size(); ++k) {
    if (!(nus[k] > 0.0 && nus[k] < 1.0)) throw PreconditionError("gamma_diagnostic: nu outside (0,1)");
    if (k > 0 && !(nus[k] < nus[k - 1])) {
      throw PreconditionError("gamma_diagnostic: nus must be strictly decreasing");
    }
  }
  const Grid& grid = beta.grid();
  const double length = std::max(grid.extent(0), grid.dimension() == 2 ? grid.extent(1) : 0) * grid.dx();
  const auto w = corner_mean(beta);
  double mass = 0.0;
  for (double x : w) mass += x;
  mass *= grid.cell_volume();

  GammaTable table;
  const double phi0 = weighted_tv(beta, v);
  for (double nu : nus) {
    const Regularizer reg(family, nu);
    const auto prof = reg.ap2_profile();
    GammaRow row;
    row.nu = nu;
    row.width = std::sqrt(nu) * length;
    row.phi0 = phi0;
    row.phi_nu_recovery = relaxed_wtv(beta, mollify(v, row.width), reg);
    row.error = std::abs(row.phi_nu_recovery - phi0);
    row.phi_nu_v = relaxed_wtv(beta, v, reg);
    row.liminf_bound = prof.q0 * phi0 - prof.r0 * mass;
    row.liminf_ok = row.phi_nu_v >= row.liminf_bound - 1e-12 * (1.0 + std::abs(row.liminf_bound));
    table.rows.push_back(row);
  }
  return table;
}

// Refinement

bool RefinementReport::distances_decreasing() const {
  for (std::size_t k = 2; k < rows.size(); ++k)
    if (!(rows[k].state_distance < rows[k - 1].state_distance)) return false;
  return true;
}

bool RefinementReport::all_completed() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.completed; });
}

RefinementReport refinement_experiment(const RunConfig& base,
                                       const std::vector<RefinementPair>& pairs, double horizon) {
  if (pairs.empty()) throw PreconditionError("refinement: no pairs");
  if (!(horizon > 0.0)) throw PreconditionError("refinement: horizon must be positive");
  base.validate();
  const Grid grid = base.grid.make();
  const auto m = canonical(base.delta_alpha);
  const State init = make_initial_state(base.initial, grid);

  RefinementReport report;
  report.horizon = horizon;
  std::vector<RunConfig> configs;
  for (const auto& p : pairs) {
    RunConfig c = base;
    c.nu = p.nu;
    c.h = p.h;
    c.validate();
    const double s = horizon / p.h;
    c.steps = static_cast<int>(std::lround(s));
    if (std::abs(s - c.steps) > 1e-9 * std::max(1.0, s)) {
      throw PreconditionError("refinement: horizon is not a whole number of steps of h = " +
                              fmt(p.h));
    }
    RefinementRow row;
    row.nu = p.nu;
    row.h = p.h;
    row.steps = c.steps;
    row.hF0 = p.h * relaxed_free_energy(m, init.eta, init.theta, Regularizer(base.family, p.nu)).total;
    if (!report.rows.empty()) {
      const double prev = report.rows.back().hF0;
      if (row.hF0 > prev) {
        throw PreconditionError("refinement: h * F_nu(initial) must decrease along the pairs (" +
                                fmt(row.hF0) + " > " + fmt(prev) + ")");
      }
      if (!(row.hF0 < prev)) report.gate_strict = false;
    }
    report.rows.push_back(row);
    configs.push_back(c);
  }

  std::vector<std::future<Trajectory>> jobs;
  for (const auto& c : configs) {
    jobs.push_back(std::async(std::launch::async, [&m, &init, c] {
      return run_from(init, m, Regularizer(c.family, c.nu), c.h, c.steps, c.solver);
    }));
  }
  std::vector<Trajectory> trajs;
  for (auto& j : jobs) trajs.push_back(j.get());

  std::vector<std::vector<double>> traces;
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    auto& row = report.rows[k];
    row.completed = trajs[k].complete();
    if (!row.completed) row.failure = *trajs[k].failure;
    traces.push_back(energy_trace(trajs[k], m));
    row.final_energy = traces.back().back();
  }
  for (std::size_t k = 1; k < trajs.size(); ++k) {
    auto& row = report.rows[k];
    const auto& a = trajs[k - 1].states.back();
    const auto& b = trajs[k].states.back();
    row.state_distance = std::sqrt(l2_distance_sq(a.eta, b.eta) + l2_distance_sq(a.theta, b.theta));
    // Compare traces at the nodes of the coarser run.
    const bool prev_coarse = trajs[k - 1].h >= trajs[k].h;
    const auto& coarse = prev_coarse ? trajs[k - 1] : trajs[k];
    const auto& fine = prev_coarse ? trajs[k] : trajs[k - 1];
    const auto& coarse_trace = prev_coarse ? traces[k - 1] : traces[k];
    const auto& fine_trace = prev_coarse ? traces[k] : traces[k - 1];
    const Interpolants fi(fine);
    double d = 0.0;
    for (std::size_t i = 0; i < coarse.states.size(); ++i) {
      const double t = static_cast<double>(i) * coarse.h;
      if (t > fi.horizon() + 1e-9 * fine.h) break;
      const auto& s = fi.overline(t);
      d = std::max(d, std::abs(coarse_trace[i] - fine_trace[static_cast<std::size_t>(s.step_index)]));
    }
    row.trace_distance = d;
  }
  return report;
}

// Omega-limit

double spatial_sd(const ScalarField& v) {
  double mean = 0.0;
  for (double x : v.values()) mean += x;
  mean /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v.values()) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

bool OmegaReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

OmegaReport omega_limit_audit(const Trajectory& traj, const ModelFunctions& m,
                              const OmegaOptions& options) {
  if (traj.states.size() < 11) throw PreconditionError("omega_limit_audit: need at least 10 steps");
  OmegaReport r;
  const auto& last = traj.states.back();
  r.theta0_sup = traj.states.front().theta.sup_abs();
  for (const auto& s : traj.states) r.sd_trace.push_back(spatial_sd(s.theta));
  r.theta_sd = r.sd_trace.back();
  r.weighted_tv = weighted_tv(apply(last.eta, m.alpha), last.theta);
  const auto lap = neumann_laplacian(last.eta);
  for (std::size_t k = 0; k < last.eta.size(); ++k) {
    r.steady_residual = std::max(r.steady_residual, std::abs(-lap[k] + m.g(last.eta[k])));
  }
  r.eta_min = last.eta.min();
  r.eta_max = last.eta.max();
  r.theta_sup = last.theta.sup_abs();

  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = r.sd_trace.size() / 2 + 1; i < r.sd_trace.size(); ++i) {
    const double slack = r.sd_trace[i - 1] - r.sd_trace[i];
    worst = std::min(worst, slack);
    if (slack < -options.monotone_tolerance) r.tail_sd_nonincreasing = false;
  }

  const double rt = options.range_tolerance;
  r.checks.push_back(threshold_check("theta_sd", r.theta_sd, options.sd_threshold));
  r.checks.push_back(threshold_check("weighted_tv", r.weighted_tv, options.wtv_threshold));
  r.checks.push_back(threshold_check("steady_residual", r.steady_residual, options.steady_threshold));
  r.checks.push_back({"eta_range", r.eta_min >= -rt && r.eta_max <= 1.0 + rt,
                      std::min(r.eta_min, 1.0 - r.eta_max), 0, rt});
  r.checks.push_back({"theta_range", r.theta_sup <= r.theta0_sup + rt, r.theta0_sup - r.theta_sup, 0, rt});
  r.checks.push_back({"tail_sd_monotone", r.tail_sd_nonincreasing, worst, 0,
                      options.monotone_tolerance});
  return r;
}

// CSV

void write_energy_trace_csv(std::ostream& out, const Trajectory& traj) {
  out << "step,t,F_nu_total,dirichlet,potential,wtv,tikhonov,eta_inc_sq,theta_winc_sq,"
         "ene_inq_slack,newton_iters_eta,newton_iters_theta\n";
  if (traj.states.empty()) return;
  auto row = [&out](int step, double t, const EnergyBreakdown& e, double de, double dt,
                    double slack, int ie, int it) {
    out << step << ',' << fmt(t) << ',' << fmt(e.total) << ',' << fmt(e.dirichlet) << ','
        << fmt(e.potential) << ',' << fmt(e.weighted_tv) << ',' << fmt(e.tikhonov) << ','
        << fmt(de) << ',' << fmt(dt) << ',' << fmt(slack) << ',' << ie << ',' << it << '\n';
  };
  const auto& s0 = traj.states.front();
  EnergyBreakdown e0;
  if (!traj.reports.empty()) {
    e0 = traj.reports.front().energy_before;
  } else if (traj.model && traj.reg) {
    e0 = relaxed_free_energy(*traj.model, s0.eta, s0.theta, *traj.reg);
  }
  row(s0.step_index, s0.t, e0, 0.0, 0.0, 0.0, 0, 0);
  for (const auto& r : traj.reports) {
    row(r.step, r.t, r.energy_after, r.eta_increment_sq, r.theta_weighted_increment_sq,
        r.ene_inq_slack, r.newton_iterations_eta, r.newton_iterations_theta);
  }
}

void write_audit_csv(std::ostream& out, const AuditReport& report) {
  out << "step,F_nu,ene_inq_slack,energy_increase,weighted_slack,time_weighted_slack,"
         "reference_lhs,reference_rhs,reference_slack,vi_slack\n";
  for (std::size_t k = 0; k < report.ene_inq_slack.size(); ++k) {
    out << k + 1 << ',' << fmt(report.energy[k + 1]) << ',' << fmt(report.ene_inq_slack[k]) << ','
        << fmt(report.trace_increase[k]) << ',' << fmt(report.weighted_slack[k]) << ','
        << fmt(report.time_weighted_slack[k]) << ',' << fmt(report.reference_lhs[k]) << ','
        << fmt(report.reference_rhs[k]) << ',' << fmt(report.reference_slack[k]) << ','
        << fmt(report.vi_slack[k]) << '\n';
  }
}

void write_gamma_csv(std::ostream& out, const GammaTable& table) {
  out << "nu,width,phi0,phi_nu_recovery,error,phi_nu_v,liminf_bound,liminf_ok\n";
  for (const auto& r : table.rows) {
    out << fmt(r.nu) << ',' << fmt(r.width) << ',' << fmt(r.phi0) << ','
        << fmt(r.phi_nu_recovery) << ',' << fmt(r.error) << ',' << fmt(r.phi_nu_v) << ','
        << fmt(r.liminf_bound) << ',' << (r.liminf_ok ? 1 : 0) << '\n';
  }
}

void write_refinement_csv(std::ostream& out, const RefinementReport& report) {
  out << "nu,h,steps,hF0,completed,final_energy,state_distance,trace_distance\n";
  for (const auto& r : report.rows) {
    out << fmt(r.nu) << ',' << fmt(r.h) << ',' << r.steps << ',' << fmt(r.hF0) << ','
        << (r.completed ? 1 : 0) << ',' << fmt(r.final_energy) << ',' << fmt(r.state_distance)
        << ',' << fmt(r.trace_distance) << '\n';
  }
}

void write_omega_csv(std::ostream& out, const OmegaReport& report) {
  out << "step,theta_sd\n";
  for (std::size_t k = 0; k < report.sd_trace.size(); ++k) {
    out << k << ',' << fmt(report.sd_trace[k]) << '\n';
  }
}

void write_checks(std::ostream& out, const std::vector<InequalityCheck>& checks) {
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << "  worst_slack=" << fmt(c.worst_slack);
    if (c.worst_index > 0) out << " at " << c.worst_index;
    out << "  tol=" << fmt(c.tolerance) << '\n';
  }
}

}  // namespace kwc
