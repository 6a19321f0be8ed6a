#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "kwc/energy.hpp"
#include "kwc/errors.hpp"
#include "kwc/stepper.hpp"
#include "oracles.hpp"

using namespace kwc;

namespace {

State state_of(const Grid& g, std::vector<double> eta, std::vector<double> theta) {
  return State{ScalarField(g, std::move(eta)), ScalarField(g, std::move(theta)), 0.0, 0};
}

State uniform_state(const Grid& g, double eta, double theta) {
  return State{ScalarField(g, eta), ScalarField(g, theta), 0.0, 0};
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s = std::max(s, std::abs(a[k] - b[k]));
  return s;
}

RunConfig small_config(int n0, int n1, const std::string& preset, int steps) {
  RunConfig c;
  c.grid.dimension = n1 > 1 ? 2 : 1;
  c.grid.extents = {n0, n1};
  c.grid.dx = 1.0 / n0;
  c.initial.preset = preset;
  c.steps = steps;
  return c;
}

}  // namespace

TEST_CASE("eta step examples") {
  const auto m = canonical(0.5);
  const Regularizer reg(RegularizerFamily::hyperbola, 0.05);
  const Grid g = Grid::rectangle(6, 5, 0.2);

  const auto one = eta_step(uniform_state(g, 1.0, 0.3), m, reg, 0.1);
  for (std::size_t k = 0; k < one.eta.size(); ++k) CHECK(one.eta[k] == 1.0);
  CHECK(one.diagnostics.residual == 0.0);

  const auto half = eta_step(uniform_state(g, 0.5, 0.3), m, reg, 0.1);
  for (std::size_t k = 0; k < half.eta.size(); ++k) CHECK(half.eta[k] == doctest::Approx(6.0 / 11.0).epsilon(1e-12));
  CHECK(half.diagnostics.residual <= 1e-10);
  CHECK(half.convexity_margin == doctest::Approx(10.0));
}

TEST_CASE("eta step matches brute force with a theta jump") {
  const auto m = canonical(0.5);
  const Regularizer reg(RegularizerFamily::hyperbola, 0.05);
  const Grid g = Grid::line(8, 1.0 / 8);
  const std::vector<double> eta0{1, 0.9, 0.8, 0.7, 0.75, 0.85, 0.95, 1};
  const std::vector<double> th0{0, 0, 0, 0, 1, 1, 1, 1};
  const double h = 0.05;
  const auto res = eta_step(state_of(g, eta0, th0), m, reg, h);
  oracle::EtaProblem1D o{g.dx(), h, eta0, th0, m.ghat, m.alpha, oracle::profile("hyperbola", 0.05)};
  CHECK(sup_diff(res.eta.values(), o.solve()) <= 1e-6);
}

TEST_CASE("theta step examples") {
  const auto m = canonical(0.5);
  const Regularizer reg(RegularizerFamily::tanh, 0.1);
  const Grid g = Grid::rectangle(5, 4, 0.25);
  const auto prev = uniform_state(g, 0.7, -0.25);
  const auto res = theta_step(ScalarField(g, 0.6), prev, m, reg, 0.1);
  for (std::size_t k = 0; k < res.theta.size(); ++k) CHECK(res.theta[k] == -0.25);
  CHECK(res.diagnostics.residual == 0.0);
}

TEST_CASE("theta step two-cell example") {
  const auto unit = [](double) { return 1.0; };
  const auto zero = [](double) { return 0.0; };
  const auto m = custom_model([](double t) { return t - 1; }, unit,
                              [](double t) { return 0.5 * (t - 1) * (t - 1); }, unit, unit, zero,
                              zero, 0.5);
  const Regularizer reg(RegularizerFamily::hyperbola, 0.1);
  const Grid g = Grid::line(2, 1.0);
  const auto prev = state_of(g, {1, 1}, {0, 1});
  const auto res = theta_step(ScalarField(g, 1.0), prev, m, reg, 1.0);
  const auto phi = oracle::profile("hyperbola", 0.1);
  const auto [a, b] = oracle::grid_search_2d(
      [&](double x, double y) {
        return 0.5 * x * x + 0.5 * (y - 1) * (y - 1) + phi(std::abs(y - x)) + 0.05 * (y - x) * (y - x);
      },
      -0.5, 1.5);
  CHECK(std::abs(res.theta[0] - a) <= 1e-8);
  CHECK(std::abs(res.theta[1] - b) <= 1e-8);
  CHECK(res.theta[0] + res.theta[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sub-steps match brute force on random small grids") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0, 1);
  const char* families[] = {"hyperbola", "yosida", "tanh", "arctan", "pgrowth"};
  const auto m = canonical(0.5);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 3 + trial;
    const Grid g = Grid::line(n, 1.0 / n);
    std::vector<double> eta(static_cast<std::size_t>(n)), th(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      eta[static_cast<std::size_t>(k)] = u(rng);
      th[static_cast<std::size_t>(k)] = 2 * u(rng) - 1;
    }
    const double h = 0.02 + 0.1 * u(rng), nu = 0.05 + 0.3 * u(rng);
    const std::string fam = families[trial % 5];
    const Regularizer reg(parse_family(fam), nu);
    const auto prev = state_of(g, eta, th);
    const auto er = eta_step(prev, m, reg, h);
    oracle::EtaProblem1D oe{g.dx(), h, eta, th, m.ghat, m.alpha, oracle::profile(fam, nu)};
    CHECK(sup_diff(er.eta.values(), oe.solve()) <= 1e-6);
    const auto tr = theta_step(er.eta, prev, m, reg, h);
    oracle::ThetaProblem1D ot{g.dx(), h, nu, std::vector<double>(er.eta.values().begin(), er.eta.values().end()),
                              th, m.alpha0, m.alpha, oracle::profile(fam, nu)};
    CHECK(sup_diff(tr.theta.values(), ot.solve()) <= 1e-6);
  }
}

TEST_CASE("step on stationary data is the identity") {
  const Grid g = Grid::rectangle(4, 4, 0.25);
  const auto s0 = uniform_state(g, 1.0, 0.4);
  const auto [s1, rep] = step(s0, canonical(0.5), Regularizer(RegularizerFamily::hyperbola, 0.05), 0.05);
  CHECK(s1.eta == s0.eta);
  CHECK(s1.theta == s0.theta);
  CHECK(rep.ene_inq_slack == 0.0);
  CHECK(rep.dissipation_ok);
  CHECK(s1.step_index == 1);
  CHECK(s1.t == 0.05);
}

TEST_CASE("one step dissipates on a 16x16 grid") {
  auto cfg = small_config(16, 16, "checker", 1);
  const auto traj = run(cfg);
  REQUIRE(traj.complete());
  const auto& r = traj.reports.at(0);
  CHECK(r.energy_after.total <= r.energy_before.total + 1e-9);
  CHECK(r.ene_inq_slack >= -1e-9);
  const double expected = r.energy_before.total - r.energy_after.total -
                          r.eta_increment_sq / (2 * cfg.h) - r.theta_weighted_increment_sq / cfg.h;
  CHECK(r.ene_inq_slack == doctest::Approx(expected).epsilon(1e-12));
  // The quadratic forms recomputed from the states.
  const auto& a = traj.states[0];
  const auto& b = traj.states[1];
  const auto m = canonical(0.5);
  double de = 0.0, dt = 0.0;
  for (std::size_t k = 0; k < a.eta.size(); ++k) {
    de += std::pow(b.eta[k] - a.eta[k], 2);
    dt += m.alpha0(b.eta[k]) * std::pow(b.theta[k] - a.theta[k], 2);
  }
  const double vol = b.eta.grid().cell_volume();
  CHECK(r.eta_increment_sq == doctest::Approx(de * vol).epsilon(1e-12));
  CHECK(r.theta_weighted_increment_sq == doctest::Approx(dt * vol).epsilon(1e-12));
}

TEST_CASE("weighted sum over m steps") {
  auto cfg = small_config(12, 12, "random", 15);
  const auto traj = run(cfg);
  REQUIRE(traj.complete());
  const double h = cfg.h;
  double sum_f = 0.0, weighted = 0.0;
  for (int mm = 1; mm <= cfg.steps; ++mm) {
    const auto& r = traj.reports[static_cast<std::size_t>(mm - 1)];
    sum_f += r.energy_before.total;
    weighted += mm * (0.5 * r.eta_increment_sq + r.theta_weighted_increment_sq);
    const double slack = h * sum_f - mm * h * r.energy_after.total - weighted;
    CHECK(slack >= -1e-9 * h * mm * (mm + 1) / 2);
  }
}

TEST_CASE("maximum principles on random data") {
  for (unsigned seed : {1u, 2u, 3u}) {
    auto cfg = small_config(10, seed == 2 ? 1 : 8, "random", 10);
    cfg.initial.seed = seed;
    cfg.initial.theta_lo = -0.8;
    cfg.initial.theta_hi = 0.6;
    cfg.family = kAllFamilies[seed % 5];
    const auto traj = run(cfg);
    REQUIRE(traj.complete());
    const double sup0 = traj.states[0].theta.sup_abs();
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
      const auto& s = traj.states[i];
      CHECK(s.eta.min() >= -1e-9);
      CHECK(s.eta.max() <= 1 + 1e-9);
      CHECK(s.theta.sup_abs() <= traj.states[i - 1].theta.sup_abs() + 1e-9);
      CHECK(s.theta.sup_abs() <= sup0 + 1e-9);
    }
  }
}

TEST_CASE("runs are deterministic") {
  const auto cfg = small_config(10, 10, "random", 5);
  const auto a = run(cfg), b = run(cfg);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    CHECK(a.states[i].eta == b.states[i].eta);
    CHECK(a.states[i].theta == b.states[i].theta);
  }
}

TEST_CASE("zero steps") {
  const auto traj = run(small_config(6, 1, "jump", 0));
  CHECK(traj.states.size() == 1);
  CHECK(traj.reports.empty());
  CHECK(traj.complete());
}

TEST_CASE("errors") {
  const auto m = canonical(0.5);
  const Regularizer reg(RegularizerFamily::hyperbola, 0.05);
  const Grid g = Grid::line(8, 1.0 / 8);
  std::vector<double> th(8);
  for (int i = 0; i < 8; ++i) th[static_cast<std::size_t>(i)] = i >= 4 ? 1.0 : 0.0;
  const auto prev = state_of(g, std::vector<double>(8, 0.3), th);

  const auto bumpy = custom_model([](double t) { return -20 * (t - 0.5); }, [](double) { return -20.0; },
                                  [](double t) { return 2.5 - 10 * (t - 0.5) * (t - 0.5); }, m.alpha0,
                                  m.alpha, m.alpha_prime, m.alpha_second, 0.5);
  CHECK(eta_convexity_margin(prev, bumpy, reg, 0.1) < 0.0);
  CHECK_THROWS_AS(eta_step(prev, bumpy, reg, 0.1), StepSizeError);
  CHECK(eta_convexity_margin(prev, bumpy, reg, 0.01) > 0.0);

  SolverOptions tight;
  tight.max_iter = 1;
  try {
    theta_step(ScalarField(g, 0.3), prev, m, reg, 0.5, tight);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK_FALSE(e.residual_history().empty());
  }
  CHECK_THROWS_AS(eta_step(prev, m, reg, 0.0), DomainError);
  CHECK_THROWS_AS(theta_step(ScalarField(Grid::line(7, 0.125), 0.5), prev, m, reg, 0.1), StructuralError);

  auto cfg = small_config(8, 1, "jump", 3);
  cfg.delta_alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.delta_alpha = 0.5;
  cfg.nu = 1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.nu = 0.05;
  cfg.initial.preset = "spiral";
  CHECK_THROWS_AS(run(cfg), DomainError);
  cfg.initial.preset = "uniform";
  cfg.initial.eta = 1.5;
  CHECK_THROWS_AS(run(cfg), DomainError);

  // A failing step returns the partial trajectory.
  const auto partial = run_from(prev, bumpy, reg, 0.1, 3);
  CHECK_FALSE(partial.complete());
  CHECK(partial.states.size() == 1);
}

TEST_CASE("initial presets") {
  const Grid g = Grid::rectangle(4, 4, 0.25);
  InitialSpec s;
  s.preset = "checker";
  s.blocks = 2;
  s.theta_lo = -1;
  s.theta_hi = 2;
  const auto c = make_initial_state(s, g);
  CHECK(c.theta.at(0, 0) == -1);
  CHECK(c.theta.at(2, 0) == 2);
  CHECK(c.theta.at(2, 2) == -1);
  s.preset = "jump";
  s.axis = 1;
  const auto j = make_initial_state(s, g);
  CHECK(j.theta.at(3, 1) == -1);
  CHECK(j.theta.at(0, 2) == 2);
  s.preset = "random";
  const auto r = make_initial_state(s, g);
  CHECK(r.eta.min() >= 0);
  CHECK(r.eta.max() <= 1);
  CHECK(r.theta.min() >= -1);
  CHECK(r.theta.max() <= 2);
}

TEST_CASE("pgrowth at small nu stalls at working precision") {
  // Near a vanishing difference the pgrowth flux jumps by (ulp/dx)^nu, far above
  // the residual tolerance, so the solver must report a stall instead of looping.
  const Grid g = Grid::line(7, 1.0 / 7);
  const std::vector<double> eta{0.238445, 0.242513, 0.242837, 0.325085, 0.414880, 0.505875, 0.541490};
  const std::vector<double> th{0.981022, -0.728885, 0.944980, -0.537738, -0.530863, -0.814437, -0.885329};
  const auto prev = state_of(g, eta, th);
  try {
    theta_step(ScalarField(g, eta), prev, canonical(0.5), Regularizer(RegularizerFamily::pgrowth, 0.0502881),
               0.111398);
    MESSAGE("converged");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("stalled") != std::string::npos);
    CHECK(e.residual_history().size() < 100);
  }
}
