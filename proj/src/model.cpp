#include "kwc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kwc/errors.hpp"

namespace kwc {

double ModelBounds::alpha0_c1() const { return std::max(alpha0_sup, alpha0_prime_sup); }
double ModelBounds::alpha_c1() const { return std::max(alpha_sup, alpha_prime_sup); }
double ModelBounds::ghat_c1() const { return std::max(ghat_sup, ghat_prime_sup); }

ModelFunctions canonical(double delta_alpha) {
  if (!(delta_alpha > 0.0 && delta_alpha < 1.0)) {
    std::ostringstream msg;
    msg << "(H4) violated: delta_alpha must lie in (0,1), got " << delta_alpha;
    throw DomainError(msg.str());
  }
  const double d = delta_alpha;
  ModelFunctions m;
  m.g = [](double t) { return t - 1.0; };
  m.g_prime = [](double) { return 1.0; };
  m.ghat = [](double t) { return 0.5 * (t - 1.0) * (t - 1.0); };
  m.alpha0 = [d](double t) { return t * t + d; };
  m.alpha = [d](double t) { return t * t + d; };
  m.alpha_prime = [](double t) { return 2.0 * t; };
  m.alpha_second = [](double) { return 2.0; };
  m.delta_alpha = d;

  // Monotone or constant on [0,1]; extremes at the endpoints.
  ModelBounds& b = m.bounds;
  b.g_sup = 1.0;
  b.g_prime_sup = 1.0;
  b.g_prime_inf = 1.0;
  b.ghat_sup = 0.5;
  b.ghat_prime_sup = 1.0;
  b.alpha0_sup = 1.0 + d;
  b.alpha0_prime_sup = 2.0;
  b.alpha_sup = 1.0 + d;
  b.alpha_prime_sup = 2.0;
  b.alpha_second_sup = 2.0;
  b.alpha_second_inf = 2.0;
  return m;
}

ModelFunctions custom_model(ScalarFunction g, ScalarFunction g_prime, ScalarFunction ghat,
                            ScalarFunction alpha0, ScalarFunction alpha,
                            ScalarFunction alpha_prime, ScalarFunction alpha_second,
                            double delta_alpha) {
  ModelFunctions m{std::move(g),          std::move(g_prime),     std::move(ghat),
                   std::move(alpha0),     std::move(alpha),       std::move(alpha_prime),
                   std::move(alpha_second), delta_alpha,          {}};
  constexpr int kSamples = 10001;
  constexpr double kFd = 1e-6;
  ModelBounds& b = m.bounds;
  b.g_prime_inf = std::numeric_limits<double>::infinity();
  b.alpha_second_inf = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kSamples; ++k) {
    const double t = static_cast<double>(k) / (kSamples - 1);
    b.g_sup = std::max(b.g_sup, std::abs(m.g(t)));
    b.g_prime_sup = std::max(b.g_prime_sup, std::abs(m.g_prime(t)));
    b.g_prime_inf = std::min(b.g_prime_inf, m.g_prime(t));
    b.ghat_sup = std::max(b.ghat_sup, std::abs(m.ghat(t)));
    b.alpha0_sup = std::max(b.alpha0_sup, std::abs(m.alpha0(t)));
    const double a0p = (m.alpha0(t + kFd) - m.alpha0(t - kFd)) / (2.0 * kFd);
    b.alpha0_prime_sup = std::max(b.alpha0_prime_sup, std::abs(a0p));
    b.alpha_sup = std::max(b.alpha_sup, std::abs(m.alpha(t)));
    b.alpha_prime_sup = std::max(b.alpha_prime_sup, std::abs(m.alpha_prime(t)));
    b.alpha_second_sup = std::max(b.alpha_second_sup, std::abs(m.alpha_second(t)));
    b.alpha_second_inf = std::min(b.alpha_second_inf, m.alpha_second(t));
  }
  b.ghat_prime_sup = b.g_sup;
  return m;
}

bool HypothesisReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const HypothesisCheck& HypothesisReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw PreconditionError("no hypothesis named " + name);
}

std::vector<double> default_hypothesis_samples() {
  std::vector<double> s;
  constexpr int n = 3001;
  for (int k = 0; k < n; ++k) s.push_back(-1.0 + 3.0 * k / (n - 1));
  return s;
}

namespace {

// Accumulates margins; a check fails on the first margin below -tol.
struct Margin {
  HypothesisCheck& c;
  void require(double margin, double tol, const std::string& what) {
    if (margin < c.worst_slack) c.worst_slack = margin;
    if (margin < -tol) {
      if (c.pass) c.detail = what;
      c.pass = false;
    }
  }
};

}  // namespace

HypothesisReport validate_hypotheses(const ModelFunctions& m, const std::vector<double>& samples) {
  if (samples.empty()) throw PreconditionError("validate_hypotheses: empty sample set");
  HypothesisReport report;
  for (const char* name : {"H1", "H2", "H3", "H4"}) report.checks.push_back(HypothesisCheck{name, true, 0.0, ""});
  Margin h1{report.checks[0]}, h2{report.checks[1]}, h3{report.checks[2]}, h4{report.checks[3]};
  constexpr double tol = 1e-12;
  constexpr double fd = 1e-5;

  h1.require(-m.g(0.0), tol, "g(0) > 0");
  h1.require(m.g(1.0), tol, "g(1) < 0");
  h3.require(-std::abs(m.alpha_prime(0.0)), tol, "alpha'(0) != 0");
  if (!(m.delta_alpha > 0.0 && m.delta_alpha < 1.0)) {
    h4.c.pass = false;
    h4.c.detail = "delta_alpha outside (0,1)";
  }

  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double t = samples[k];
    h1.require(m.ghat(t), tol, "ghat negative");
    // ghat must be a primitive of g.
    const double dghat = (m.ghat(t + fd) - m.ghat(t - fd)) / (2.0 * fd);
    h1.require(-std::abs(dghat - m.g(t)), 1e-6 * (1.0 + std::abs(m.g(t))), "ghat' != g");

    const double a0 = m.alpha0(t);
    const double a = m.alpha(t);
    h2.require(a0 > 0.0 ? a0 : -1.0, 0.0, "alpha0 not positive");
    h3.require(a > 0.0 ? a : -1.0, 0.0, "alpha not positive");
    h3.require(m.alpha_second(t), tol, "alpha'' negative");
    const double dalpha = (m.alpha(t + fd) - m.alpha(t - fd)) / (2.0 * fd);
    h3.require(-std::abs(dalpha - m.alpha_prime(t)), 1e-6 * (1.0 + std::abs(dalpha)),
               "alpha' inconsistent with alpha");
    for (std::size_t stride : {std::size_t{1}, samples.size() / 7 + 1}) {
      const double u = samples[(k + stride) % samples.size()];
      const double mid = m.alpha(0.5 * (t + u));
      const double avg = 0.5 * (a + m.alpha(u));
      h3.require(avg - mid, tol * (1.0 + std::abs(avg)), "alpha not midpoint convex");
    }

    h4.require(a0 - m.delta_alpha, tol, "alpha0 below delta_alpha");
    h4.require(a - m.delta_alpha, tol, "alpha below delta_alpha");
  }
  return report;
}

StabilityConstants stability_constants(const ModelFunctions& m, double theta0_sup,
                                       double omega_measure, StabilityBranch branch,
                                       double q1_sup) {
  if (!(theta0_sup >= 0.0) || !(omega_measure > 0.0)) {
    throw PreconditionError("stability_constants: need theta0_sup >= 0 and measure > 0");
  }
  const auto report = validate_hypotheses(m, default_hypothesis_samples());
  if (!report.pass()) {
    for (const auto& c : report.checks)
      if (!c.pass) throw PreconditionError("stability_constants: (" + c.name + ") " + c.detail);
  }
  const ModelBounds& b = m.bounds;
  const double d = m.delta_alpha;
  const double base = (1.0 + b.alpha0_c1()) * (1.0 + b.alpha_c1()) * (1.0 + b.ghat_c1()) *
                      (1.0 + theta0_sup) * (1.0 + omega_measure) / (d * d);
  StabilityConstants c;
  c.branch = branch;
  c.R_star = base * base;
  const double a0 = b.alpha0_sup;
  const double a = b.alpha_sup;
  if (branch == StabilityBranch::r1_zero) {
    c.A_star = a0 * a / d;
    c.B_star = d / a;
    c.C_star = 12.0 * c.R_star * c.R_star * q1_sup * q1_sup;
    c.nu_star = std::min(1.0 / (32.0 * a0 * c.A_star * c.R_star), a);
  } else {
    c.A_star = 2.0 * a0 * a / d;
    c.B_star = std::min(0.5, d / a);
    c.C_star = 7.0e3 * std::pow(c.R_star, 6);
    c.nu_star = std::min(1.0 / (32.0 * a0 * c.A_star * c.R_star), 0.5);
  }
  return c;
}

}  // namespace kwc
