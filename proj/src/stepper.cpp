#include "kwc/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "kwc/errors.hpp"
#include "kwc/snapshot.hpp"
#include "newton.hpp"
#include "stencil.hpp"

namespace kwc {

namespace {

using detail::Stencil;

// Per-corner isotropic gradient from face arrays; missing faces read as 0.
void corner_vector(const Corner& c, const std::vector<double>& f0, const std::vector<double>& f1,
                   double out[2]) {
  out[0] = c.face[0] >= 0 ? f0[static_cast<std::size_t>(c.face[0])] : 0.0;
  out[1] = c.face[1] >= 0 ? f1[static_cast<std::size_t>(c.face[1])] : 0.0;
}

// |G_c theta|_nu at every corner.
std::vector<double> corner_penalty(const Stencil& st, std::span<const double> theta,
                                   const Regularizer& reg) {
  std::vector<double> f0, f1;
  st.grad(theta, f0, f1);
  const auto& cs = st.corner_list();
  std::vector<double> out(cs.size());
  for (std::size_t c = 0; c < cs.size(); ++c) {
    double xi[2];
    corner_vector(cs[c], f0, f1, xi);
    out[c] = reg.phi(std::hypot(xi[0], xi[1]));
  }
  return out;
}

// Functionals are divided by dx^d so gradients are strong-form residuals.
class EtaProblem final : public detail::ConvexProblem {
 public:
  EtaProblem(const Stencil& st, const ModelFunctions& m, std::span<const double> eta_prev,
             std::vector<double> penalty, double h)
      : st_(st), m_(m), prev_(eta_prev), penalty_(std::move(penalty)), h_(h),
        load_(corner_mean_transpose(st.grid(), penalty_)), diag_(st.cells()) {}

  const std::vector<double>& load() const { return load_; }

  double energy(std::span<const double> x) override {
    double s = 0.5 * st_.grad_sq_sum(x);
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double d = x[k] - prev_[k];
      s += d * d / (2.0 * h_) + m_.ghat(x[k]);
    }
    const auto& cs = st_.corner_list();
    for (std::size_t c = 0; c < cs.size(); ++c) {
      double a = m_.alpha(x[cs[c].base]);
      for (long nb : cs[c].neighbour)
        if (nb >= 0) a += m_.alpha(x[static_cast<std::size_t>(nb)]);
      s += a / cs[c].stencil_size * penalty_[c];
    }
    return s;
  }

  void gradient(std::span<const double> x, std::span<double> out) override {
    for (std::size_t k = 0; k < x.size(); ++k) {
      out[k] = (x[k] - prev_[k]) / h_ + m_.g(x[k]) + m_.alpha_prime(x[k]) * load_[k];
    }
    st_.dirichlet_add(x, 1.0, out);
  }

  void prepare_hessian(std::span<const double> x) override {
    for (std::size_t k = 0; k < x.size(); ++k) {
      diag_[k] = 1.0 / h_ + m_.g_prime(x[k]) + m_.alpha_second(x[k]) * load_[k];
    }
  }

  void apply_hessian(std::span<const double> p, std::span<double> out) override {
    for (std::size_t k = 0; k < p.size(); ++k) out[k] = diag_[k] * p[k];
    st_.dirichlet_add(p, 1.0, out);
  }

  void hessian_diagonal(std::span<double> out) override {
    const double inv2 = 1.0 / (st_.grid().dx() * st_.grid().dx());
    const auto& deg = st_.face_degree();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = diag_[k] + deg[k] * inv2;
  }

 private:
  const Stencil& st_;
  const ModelFunctions& m_;
  std::span<const double> prev_;
  std::vector<double> penalty_;
  double h_;
  std::vector<double> load_;
  std::vector<double> diag_;
};

class ThetaProblem final : public detail::ConvexProblem {
 public:
  ThetaProblem(const Stencil& st, const Regularizer& reg, std::vector<double> mobility,
               std::vector<double> weight, std::span<const double> theta_prev, double h)
      : st_(st), reg_(reg), a_(std::move(mobility)), w_(std::move(weight)), prev_(theta_prev),
        h_(h), hess_(4 * st.corner_list().size()) {}

  double energy(std::span<const double> x) override {
    st_.grad(x, f0_, f1_);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double d = x[k] - prev_[k];
      s += a_[k] * d * d / (2.0 * h_);
    }
    const auto& cs = st_.corner_list();
    for (std::size_t c = 0; c < cs.size(); ++c) {
      double xi[2];
      corner_vector(cs[c], f0_, f1_, xi);
      s += w_[c] * reg_.phi(std::hypot(xi[0], xi[1]));
    }
    double tik = 0.0;
    for (double v : f0_) tik += v * v;
    for (double v : f1_) tik += v * v;
    return s + 0.5 * reg_.nu() * tik;
  }

  void gradient(std::span<const double> x, std::span<double> out) override {
    st_.grad(x, f0_, f1_);
    const double nu = reg_.nu();
    const auto& cs = st_.corner_list();
    for (std::size_t c = 0; c < cs.size(); ++c) {
      double xi[2];
      corner_vector(cs[c], f0_, f1_, xi);
      const double s = w_[c] * reg_.dphi_over_t(std::hypot(xi[0], xi[1]));
      for (std::size_t a = 0; a < 2; ++a) {
        const long f = cs[c].face[a];
        if (f < 0) continue;
        auto& comp = a == 0 ? f0_ : f1_;
        comp[static_cast<std::size_t>(f)] = (s + nu) * xi[a];
      }
    }
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = a_[k] * (x[k] - prev_[k]) / h_;
    st_.grad_transpose_add(f0_, f1_, out);
  }

  void prepare_hessian(std::span<const double> x) override {
    st_.grad(x, f0_, f1_);
    const int dim = st_.grid().dimension();
    const auto& cs = st_.corner_list();
    for (std::size_t c = 0; c < cs.size(); ++c) {
      double xi[2], h[4];
      corner_vector(cs[c], f0_, f1_, xi);
      reg_.hessian(std::span<const double>(xi, static_cast<std::size_t>(dim)),
                   std::span<double>(h, static_cast<std::size_t>(dim * dim)));
      double* dst = &hess_[4 * c];
      if (dim == 1) {
        dst[0] = w_[c] * h[0];
        dst[1] = dst[2] = dst[3] = 0.0;
      } else {
        for (int i = 0; i < 4; ++i) dst[i] = w_[c] * h[i];
      }
    }
  }

  void apply_hessian(std::span<const double> p, std::span<double> out) override {
    st_.grad(p, f0_, f1_);
    const double nu = reg_.nu();
    const auto& cs = st_.corner_list();
    for (std::size_t c = 0; c < cs.size(); ++c) {
      double q[2];
      corner_vector(cs[c], f0_, f1_, q);
      const double* H = &hess_[4 * c];
      const double y[2] = {H[0] * q[0] + H[1] * q[1], H[2] * q[0] + H[3] * q[1]};
      for (std::size_t a = 0; a < 2; ++a) {
        const long f = cs[c].face[a];
        if (f < 0) continue;
        auto& comp = a == 0 ? f0_ : f1_;
        comp[static_cast<std::size_t>(f)] = y[a] + nu * q[a];
      }
    }
    for (std::size_t k = 0; k < p.size(); ++k) out[k] = a_[k] / h_ * p[k];
    st_.grad_transpose_add(f0_, f1_, out);
  }

  void hessian_diagonal(std::span<double> out) override {
    const double inv2 = 1.0 / (st_.grid().dx() * st_.grid().dx());
    const double nu = reg_.nu();
    const auto& deg = st_.face_degree();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a_[k] / h_ + nu * deg[k] * inv2;
    const auto& cs = st_.corner_list();
    for (std::size_t c = 0; c < cs.size(); ++c) {
      const double* H = &hess_[4 * c];
      const bool has0 = cs[c].face[0] >= 0, has1 = cs[c].face[1] >= 0;
      double base = 0.0;
      if (has0) base += H[0];
      if (has1) base += H[3];
      if (has0 && has1) base += H[1] + H[2];
      out[cs[c].base] += base * inv2;
      if (has0) out[static_cast<std::size_t>(cs[c].neighbour[0])] += H[0] * inv2;
      if (has1) out[static_cast<std::size_t>(cs[c].neighbour[1])] += H[3] * inv2;
    }
  }

 private:
  const Stencil& st_;
  const Regularizer& reg_;
  std::vector<double> a_;
  std::vector<double> w_;
  std::span<const double> prev_;
  double h_;
  std::vector<double> hess_;
  std::vector<double> f0_, f1_;
};

void require_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("time step h must be positive");
}

std::string residual_message(const char* which, const detail::NewtonOutcome& out) {
  std::ostringstream os;
  if (out.stalled) {
    os << which << ": Newton stalled at working precision after " << out.iterations
       << " iterations (residual " << out.residual << ")";
  } else {
    os << which << ": Newton did not converge in " << out.iterations
       << " iterations (residual " << out.residual << ")";
  }
  return os.str();
}

}  // namespace

double eta_convexity_margin(const State& prev, const ModelFunctions& m, const Regularizer& reg,
                            double h) {
  require_step(h);
  const Stencil st(prev.theta.grid());
  const auto load = corner_mean_transpose(st.grid(), corner_penalty(st, prev.theta.values(), reg));
  const double cmax = load.empty() ? 0.0 : *std::max_element(load.begin(), load.end());
  return 1.0 / h + std::min(0.0, m.bounds.g_prime_inf) +
         std::min(0.0, m.bounds.alpha_second_inf) * cmax;
}

EtaStepResult eta_step(const State& prev, const ModelFunctions& m, const Regularizer& reg,
                       double h, const SolverOptions& options) {
  require_same_grid(prev.eta.grid(), prev.theta.grid(), "eta_step");
  const double margin = eta_convexity_margin(prev, m, reg, h);
  if (!(margin > 0.0)) {
    std::ostringstream os;
    os << "eta_step: convexity margin " << margin << " is not positive; reduce h";
    throw StepSizeError(os.str(), margin);
  }
  const Stencil st(prev.eta.grid());
  EtaProblem problem(st, m, prev.eta.values(),
                     corner_penalty(st, prev.theta.values(), reg), h);
  auto out = detail::newton_solve(
      problem, std::vector<double>(prev.eta.values().begin(), prev.eta.values().end()), options);
  if (!out.converged) throw SolverError(residual_message("eta_step", out), out.history);
  EtaStepResult r{ScalarField(prev.eta.grid(), std::move(out.x)),
                  {out.iterations, out.residual, std::move(out.history)},
                  margin};
  return r;
}

ThetaStepResult theta_step(const ScalarField& eta_new, const State& prev,
                           const ModelFunctions& m, const Regularizer& reg, double h,
                           const SolverOptions& options) {
  require_step(h);
  require_same_grid(eta_new.grid(), prev.theta.grid(), "theta_step");
  const Stencil st(eta_new.grid());
  const auto mobility = apply(eta_new, m.alpha0);
  if (mobility.min() <= 0.0) throw PreconditionError("theta_step: alpha0(eta) must be positive");
  const auto alpha = apply(eta_new, m.alpha);
  if (alpha.min() < 0.0) throw PreconditionError("theta_step: alpha(eta) must be nonnegative");
  ThetaProblem problem(st, reg, std::vector<double>(mobility.values().begin(), mobility.values().end()),
                       corner_mean(alpha), prev.theta.values(), h);
  auto out = detail::newton_solve(
      problem, std::vector<double>(prev.theta.values().begin(), prev.theta.values().end()),
      options);
  if (!out.converged) throw SolverError(residual_message("theta_step", out), out.history);
  return {ScalarField(eta_new.grid(), std::move(out.x)),
          {out.iterations, out.residual, std::move(out.history)}};
}

std::pair<State, StepReport> step(const State& state, const ModelFunctions& m,
                                  const Regularizer& reg, double h,
                                  const SolverOptions& options) {
  auto er = eta_step(state, m, reg, h, options);
  auto tr = theta_step(er.eta, state, m, reg, h, options);

  StepReport rep;
  rep.step = state.step_index + 1;
  rep.t = state.t + h;
  rep.eta_residual = er.diagnostics.residual;
  rep.theta_residual = tr.diagnostics.residual;
  rep.newton_iterations_eta = er.diagnostics.iterations;
  rep.newton_iterations_theta = tr.diagnostics.iterations;
  rep.eta_convexity_margin = er.convexity_margin;
  rep.energy_before = relaxed_free_energy(m, state.eta, state.theta, reg);
  rep.energy_after = relaxed_free_energy(m, er.eta, tr.theta, reg);

  const double vol = state.eta.grid().cell_volume();
  double de = 0.0, dt = 0.0;
  for (std::size_t k = 0; k < er.eta.size(); ++k) {
    const double a = er.eta[k] - state.eta[k];
    const double b = tr.theta[k] - state.theta[k];
    de += a * a;
    dt += m.alpha0(er.eta[k]) * b * b;
  }
  rep.eta_increment_sq = de * vol;
  rep.theta_weighted_increment_sq = dt * vol;
  rep.ene_inq_slack = rep.energy_before.total - rep.energy_after.total -
                      rep.eta_increment_sq / (2.0 * h) - rep.theta_weighted_increment_sq / h;
  rep.dissipation_ok = rep.ene_inq_slack >= -10.0 * options.newton_tol;

  State next{std::move(er.eta), std::move(tr.theta), rep.t, rep.step};
  return {std::move(next), rep};
}

void RunConfig::validate() const {
  (void)grid.make();
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("time.h must be positive");
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("regularizer.nu must lie in (0,1)");
  if (!(delta_alpha > 0.0 && delta_alpha < 1.0)) {
    throw DomainError("(H4) violated: delta_alpha must lie in (0,1)");
  }
  if (steps < 0) throw DomainError("time.steps must be nonnegative");
  if (!(solver.newton_tol > 0.0) || solver.max_iter < 1 || !(solver.linear_tol > 0.0)) {
    throw DomainError("solver tolerances must be positive");
  }
}

State make_initial_state(const InitialSpec& spec, const Grid& grid) {
  const std::size_t n = grid.cell_count();
  std::vector<double> eta(n, spec.eta), theta(n, spec.theta);
  const int n0 = grid.extent(0), n1 = grid.extent(1);
  const std::string& p = spec.preset;

  if (p == "uniform") {
  } else if (p == "jump") {
    if (spec.axis < 0 || spec.axis >= grid.dimension()) {
      throw DomainError("initial.axis out of range");
    }
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        const bool hi = spec.axis == 0 ? 2 * i >= n0 : 2 * j >= n1;
        theta[grid.cell(i, j)] = hi ? spec.theta_hi : spec.theta_lo;
      }
  } else if (p == "checker") {
    if (spec.blocks < 1) throw DomainError("initial.blocks must be positive");
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        const int bi = i * spec.blocks / n0;
        const int bj = grid.dimension() == 2 ? j * spec.blocks / n1 : 0;
        theta[grid.cell(i, j)] = (bi + bj) % 2 ? spec.theta_hi : spec.theta_lo;
      }
  } else if (p == "random") {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> ue(0.0, 1.0), ut(spec.theta_lo, spec.theta_hi);
    for (std::size_t k = 0; k < n; ++k) {
      eta[k] = ue(rng);
      theta[k] = ut(rng);
    }
  } else if (p.rfind("file:", 0) == 0) {
    const std::string stem = p.substr(5);
    auto e = read_snapshot_file(stem + "_eta.txt");
    auto t = read_snapshot_file(stem + "_theta.txt");
    require_same_grid(e.field.grid(), grid, "initial file (eta)");
    require_same_grid(t.field.grid(), grid, "initial file (theta)");
    return State{std::move(e.field), std::move(t.field), e.t, 0};
  } else {
    throw DomainError("unknown initial preset '" + p + "'");
  }

  State s{ScalarField(grid, std::move(eta)), ScalarField(grid, std::move(theta)), 0.0, 0};
  if (s.eta.min() < 0.0 || s.eta.max() > 1.0) {
    throw DomainError("initial eta must lie in [0,1]");
  }
  return s;
}

Trajectory run_from(const State& initial, const ModelFunctions& m, const Regularizer& reg,
                    double h, int steps, const SolverOptions& options) {
  require_step(h);
  Trajectory traj;
  traj.h = h;
  traj.reg = reg;
  traj.model = m;
  traj.states.reserve(static_cast<std::size_t>(std::max(steps, 0)) + 1);
  traj.states.push_back(initial);
  for (int i = 0; i < steps; ++i) {
    try {
      auto [next, rep] = step(traj.states.back(), m, reg, h, options);
      traj.states.push_back(std::move(next));
      traj.reports.push_back(rep);
    } catch (const std::exception& e) {
      traj.failure = "step " + std::to_string(i + 1) + ": " + e.what();
      break;
    }
  }
  return traj;
}

Trajectory run(const RunConfig& config) {
  config.validate();
  const Grid grid = config.grid.make();
  const auto m = canonical(config.delta_alpha);
  const Regularizer reg(config.family, config.nu);
  const State init = make_initial_state(config.initial, grid);
  return run_from(init, m, reg, config.h, config.steps, config.solver);
}

}  // namespace kwc
