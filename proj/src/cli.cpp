#include "kwc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "kwc/analysis.hpp"
#include "kwc/config.hpp"
#include "kwc/errors.hpp"
#include "kwc/snapshot.hpp"

namespace kwc {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string trace;
  std::vector<std::string> sets;
  int snapshot_every = -1;
  bool quiet = false;
};

AppConfig resolve(const Options& o) {
  AppConfig cfg = o.config.empty() ? parse_config("{}", o.sets) : load_config(o.config, o.sets);
  if (o.snapshot_every >= 0) cfg.output.snapshot_every = o.snapshot_every;
  return cfg;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".kwc_write_test";
  {
    std::ofstream p(probe);
    if (!p) throw ConfigError("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  return f;
}

StabilityBranch branch_for(RegularizerFamily family) {
  return family == RegularizerFamily::pgrowth ? StabilityBranch::r1_positive
                                              : StabilityBranch::r1_zero;
}

std::string snapshot_stem(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "step_%06d", step);
  return buf;
}

void write_run_outputs(const fs::path& dir, const AppConfig& cfg, const Trajectory& traj) {
  {
    auto f = open_out(dir / "config.json");
    f << to_json(cfg);
  }
  {
    auto f = open_out(dir / "energy_trace.csv");
    write_energy_trace_csv(f, traj);
  }
  const fs::path snaps = dir / "snapshots";
  ensure_dir(snaps);
  const int every = cfg.output.snapshot_every;
  const std::size_t last = traj.states.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    const auto& s = traj.states[i];
    if (i != 0 && i != last && (every == 0 || s.step_index % every != 0)) continue;
    const std::string stem = snapshot_stem(s.step_index);
    write_snapshot_file(snaps / (stem + "_eta.txt"), s.eta, s.t);
    write_snapshot_file(snaps / (stem + "_theta.txt"), s.theta, s.t);
  }
}

// Checks every run must satisfy: completion, per-step dissipation, ranges.
std::vector<InequalityCheck> run_checks(const Trajectory& traj, double newton_tol,
                                       double range_tol) {
  std::vector<InequalityCheck> out;
  out.push_back({"completed", traj.complete(), 0.0, 0, 0.0});
  InequalityCheck diss{"step_dissipation", true, 0.0, 0, 10.0 * newton_tol};
  for (const auto& r : traj.reports) {
    if (r.ene_inq_slack < diss.worst_slack || diss.worst_index == 0) {
      diss.worst_slack = r.ene_inq_slack;
      diss.worst_index = r.step;
    }
    if (!r.dissipation_ok) diss.pass = false;
  }
  out.push_back(diss);
  const double t0 = traj.states.front().theta.sup_abs();
  double lo = 1.0, hi = 0.0, th = 0.0;
  for (const auto& s : traj.states) {
    lo = std::min(lo, s.eta.min());
    hi = std::max(hi, s.eta.max());
    th = std::max(th, s.theta.sup_abs());
  }
  out.push_back({"eta_range", lo >= -range_tol && hi <= 1.0 + range_tol, std::min(lo, 1.0 - hi), 0,
                 range_tol});
  out.push_back({"theta_range", th <= t0 + range_tol, t0 - th, 0, range_tol});
  return out;
}

bool all_pass(const std::vector<InequalityCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void warn_nu(const AppConfig& cfg, const State& init, const ModelFunctions& m, bool quiet,
             std::ostream& err) {
  if (quiet) return;
  const auto c = stability_constants(m, init.theta.sup_abs(), init.eta.grid().measure(),
                                     branch_for(cfg.run.family));
  if (cfg.run.nu >= c.nu_star) {
    err << "note: nu = " << cfg.run.nu << " is not below nu_star = " << c.nu_star
        << "; the a-priori energy bound is not guaranteed in this regime\n";
  }
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw ConfigError("run requires --out <dir>");
  const AppConfig cfg = resolve(o);
  cfg.run.validate();
  const auto m = canonical(cfg.run.delta_alpha);
  const State init = make_initial_state(cfg.run.initial, cfg.run.grid.make());
  warn_nu(cfg, init, m, o.quiet, err);
  const fs::path dir(o.out);
  ensure_dir(dir);

  const Regularizer reg(cfg.run.family, cfg.run.nu);
  const Trajectory traj = run_from(init, m, reg, cfg.run.h, cfg.run.steps, cfg.run.solver);
  write_run_outputs(dir, cfg, traj);

  const auto checks = run_checks(traj, cfg.run.solver.newton_tol, cfg.audit.range_tolerance);
  if (!o.quiet) {
    out << "run: " << traj.reports.size() << " steps written to " << dir.string() << '\n';
    if (traj.failure) out << "failure: " << *traj.failure << '\n';
    write_checks(out, checks);
  }
  return all_pass(checks) ? kExitOk : kExitAuditFailure;
}

// Stored trace columns needed for the reproduction check.
struct TraceRow {
  double total, dirichlet, potential, wtv, tikhonov;
};

std::vector<TraceRow> read_trace(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("malformed row in " + path.string());
      }
    }
    if (v.size() < 7) throw ConfigError("malformed row in " + path.string());
    rows.push_back({v[2], v[3], v[4], v[5], v[6]});
  }
  return rows;
}

int cmd_audit(const Options& o, std::ostream& out, std::ostream& err) {
  Options opt = o;
  fs::path dir;
  if (!o.trace.empty()) {
    dir = o.trace;
    if (opt.config.empty()) opt.config = (dir / "config.json").string();
  } else if (o.config.empty()) {
    throw ConfigError("audit requires --trace <dir> or --config <path>");
  }
  const AppConfig cfg = resolve(opt);
  cfg.run.validate();
  const auto m = canonical(cfg.run.delta_alpha);
  const State init = make_initial_state(cfg.run.initial, cfg.run.grid.make());
  warn_nu(cfg, init, m, o.quiet, err);
  const Regularizer reg(cfg.run.family, cfg.run.nu);
  const Trajectory traj = run_from(init, m, reg, cfg.run.h, cfg.run.steps, cfg.run.solver);

  std::vector<InequalityCheck> checks{{"completed", traj.complete(), 0.0, 0, 0.0}};
  if (!traj.complete()) {
    if (!o.quiet) {
      out << "failure: " << *traj.failure << '\n';
      write_checks(out, checks);
    }
    return kExitAuditFailure;
  }

  if (!dir.empty() && fs::exists(dir / "energy_trace.csv")) {
    const auto stored = read_trace(dir / "energy_trace.csv");
    InequalityCheck sum{"trace_sum_identity", true, 0.0, 0, 1e-12};
    InequalityCheck rep{"trace_reproduced", stored.size() == traj.states.size(), 0.0, 0, 1e-12};
    for (std::size_t i = 0; i < stored.size(); ++i) {
      const auto& s = stored[i];
      const double parts = s.dirichlet + s.potential + s.wtv + s.tikhonov;
      const double e1 = std::abs(s.total - parts);
      if (e1 > 1e-12 * (1.0 + std::abs(s.total))) sum.pass = false;
      sum.worst_slack = std::min(sum.worst_slack, -e1);
      if (i < traj.states.size()) {
        const double f = relaxed_free_energy(m, traj.states[i].eta, traj.states[i].theta, reg).total;
        const double e2 = std::abs(f - s.total);
        if (e2 > 1e-12 * (1.0 + std::abs(f))) rep.pass = false;
        rep.worst_slack = std::min(rep.worst_slack, -e2);
      }
    }
    checks.push_back(sum);
    checks.push_back(rep);
  }

  const auto consts = stability_constants(m, init.theta.sup_abs(), init.eta.grid().measure(),
                                          branch_for(cfg.run.family));
  AuditOptions ao;
  ao.newton_tol = cfg.run.solver.newton_tol;
  ao.range_tolerance = cfg.audit.range_tolerance;
  const auto report = energy_inequality_audit(traj, m, consts, init.eta, init.theta, ao);
  for (const auto& c : report.checks) checks.push_back(c);

  const fs::path dest = !o.out.empty() ? fs::path(o.out) : dir;
  if (!dest.empty()) {
    ensure_dir(dest);
    auto f = open_out(dest / "audit.csv");
    write_audit_csv(f, report);
  }
  if (cfg.audit.omega) {
    const auto om = omega_limit_audit(traj, m, cfg.audit.omega_options);
    for (const auto& c : om.checks) checks.push_back(c);
    if (!dest.empty()) {
      auto f = open_out(dest / "omega.csv");
      write_omega_csv(f, om);
    }
  }
  const bool ok = all_pass(checks);
  if (!o.quiet) {
    out << "audit: " << traj.reports.size() << " steps, h = " << cfg.run.h << ", nu = " << cfg.run.nu
        << " (" << to_string(cfg.run.family) << ")\n";
    write_checks(out, checks);
    out << (ok ? "all checks passed\n" : "audit FAILED\n");
  }
  return ok ? kExitOk : kExitAuditFailure;
}

int cmd_gamma(const Options& o, std::ostream& out, std::ostream&) {
  const AppConfig cfg = resolve(o);
  const int n = cfg.gamma.cells;
  const Grid grid = Grid::line(n, 1.0 / n);
  std::vector<double> jump(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) jump[static_cast<std::size_t>(i)] = 2 * i >= n ? 1.0 : 0.0;
  const auto table = gamma_diagnostic(ScalarField(grid, cfg.gamma.beta),
                                      ScalarField(grid, std::move(jump)), cfg.run.family,
                                      cfg.gamma.nus);
  if (!o.out.empty()) {
    ensure_dir(o.out);
    auto f = open_out(fs::path(o.out) / "gamma.csv");
    write_gamma_csv(f, table);
  } else if (!o.quiet) {
    write_gamma_csv(out, table);
  }
  const std::vector<InequalityCheck> checks{
      {"errors_decreasing", table.errors_decreasing(), 0.0, 0, 0.0},
      {"liminf_bound", table.liminf_ok(), 0.0, 0, 0.0}};
  if (!o.quiet) write_checks(out, checks);
  return all_pass(checks) ? kExitOk : kExitAuditFailure;
}

int cmd_refine(const Options& o, std::ostream& out, std::ostream&) {
  const AppConfig cfg = resolve(o);
  const auto report = refinement_experiment(cfg.run, cfg.refine.pairs, cfg.refine.horizon);
  if (!o.out.empty()) {
    ensure_dir(o.out);
    auto f = open_out(fs::path(o.out) / "refine.csv");
    write_refinement_csv(f, report);
  } else if (!o.quiet) {
    write_refinement_csv(out, report);
  }
  const std::vector<InequalityCheck> checks{
      {"all_completed", report.all_completed(), 0.0, 0, 0.0},
      {"energy_gate_strict", report.gate_strict, 0.0, 0, 0.0},
      {"distances_decreasing", report.distances_decreasing(), 0.0, 0, 0.0}};
  if (!o.quiet) write_checks(out, checks);
  return all_pass(checks) ? kExitOk : kExitAuditFailure;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const AppConfig cfg = resolve(o);
  cfg.run.validate();
  const auto m = canonical(cfg.run.delta_alpha);
  const auto hyp = validate_hypotheses(m, default_hypothesis_samples());
  if (!o.quiet) {
    for (const auto& c : hyp.checks) {
      out << (c.pass ? "PASS " : "FAIL ") << c.name << "  worst_slack=" << c.worst_slack;
      if (!c.detail.empty()) out << "  " << c.detail;
      out << '\n';
    }
  }
  if (!hyp.pass()) {
    for (const auto& c : hyp.checks)
      if (!c.pass) err << "(" << c.name << ") violated: " << c.detail << '\n';
    return kExitConfigError;
  }
  const State init = make_initial_state(cfg.run.initial, cfg.run.grid.make());
  const Regularizer reg(cfg.run.family, cfg.run.nu);
  const auto consts = stability_constants(m, init.theta.sup_abs(), init.eta.grid().measure(),
                                          branch_for(cfg.run.family));
  const auto suit = verify_suitability(reg, log_spaced_samples(1000, 1e-6, 1e3, 2, 7));
  const double margin = eta_convexity_margin(init, m, reg, cfg.run.h);
  if (!o.quiet) {
    const auto p = reg.ap2_profile();
    out << "regularizer " << to_string(reg.family()) << " nu=" << reg.nu() << "  profile q0=" << p.q0
        << " q1=" << p.q1 << " r0=" << p.r0 << " r1=" << p.r1 << '\n';
    out << (suit.pass() ? "PASS " : "FAIL ") << "suitability (1000 samples)\n";
    out << "R*=" << consts.R_star << " A*=" << consts.A_star << " B*=" << consts.B_star
        << " C*=" << consts.C_star << " nu*=" << consts.nu_star << '\n';
    out << "eta step convexity margin at the initial state: " << margin << '\n';
  }
  warn_nu(cfg, init, m, o.quiet, err);
  if (!(margin > 0.0)) {
    err << "time step too large: eta step convexity margin " << margin << " <= 0\n";
    return kExitConfigError;
  }
  return suit.pass() ? kExitOk : kExitAuditFailure;
}

template <class F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    err << "configuration error: " << e.what() << '\n';
  } catch (const StructuralError& e) {
    err << "configuration error: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    err << "configuration error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAuditFailure;
  }
  return kExitConfigError;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularized KWC grain-boundary solver and audits"};
  app.name("kwc");
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--set", o.sets, "override a configuration key (key=value)")->take_all();
    sub->add_flag("--quiet", o.quiet, "suppress the report");
  };
  auto* run = app.add_subcommand("run", "simulate and write the energy trace and snapshots");
  add_common(run);
  run->add_option("--snapshot-every", o.snapshot_every, "write snapshots every k steps")
      ->check(CLI::NonNegativeNumber);
  auto* audit = app.add_subcommand("audit", "re-run a configuration and audit the inequalities");
  add_common(audit);
  audit->add_option("--trace", o.trace, "directory written by `run`");
  auto* gamma = app.add_subcommand("gamma", "relaxation convergence diagnostic");
  add_common(gamma);
  auto* refine = app.add_subcommand("refine", "joint (nu, h) refinement experiment");
  add_common(refine);
  auto* validate = app.add_subcommand("validate", "check the model, regularizer and step size");
  add_common(validate);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kExitConfigError;
  }

  return guarded([&] {
    if (run->parsed()) return cmd_run(o, out, err);
    if (audit->parsed()) return cmd_audit(o, out, err);
    if (gamma->parsed()) return cmd_gamma(o, out, err);
    if (refine->parsed()) return cmd_refine(o, out, err);
    return cmd_validate(o, out, err);
  }, err);
}

}  // namespace kwc
