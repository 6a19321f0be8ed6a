#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "kwc/errors.hpp"
#include "kwc/regularizers.hpp"

using namespace kwc;

namespace {

std::vector<double> central_difference(const Regularizer& reg, std::vector<double> xi) {
  std::vector<double> out(xi.size());
  for (std::size_t a = 0; a < xi.size(); ++a) {
    const double step = 1e-6 * std::max(1.0, std::abs(xi[a]));
    const double keep = xi[a];
    xi[a] = keep + step;
    const double fp = reg.eval(xi);
    xi[a] = keep - step;
    const double fm = reg.eval(xi);
    xi[a] = keep;
    out[a] = (fp - fm) / (2 * step);
  }
  return out;
}

}  // namespace

TEST_CASE("family names") {
  for (auto f : kAllFamilies) CHECK(parse_family(to_string(f)) == f);
  CHECK_THROWS_AS(parse_family("huber2"), DomainError);
  CHECK_THROWS_AS(Regularizer(RegularizerFamily::tanh, 0.0), DomainError);
  CHECK_THROWS_AS(Regularizer(RegularizerFamily::tanh, 1.5), DomainError);
}

TEST_CASE("eval examples") {
  const std::vector<double> x{3, 4};
  CHECK(Regularizer(RegularizerFamily::hyperbola, 1.0).eval(x) ==
        doctest::Approx(std::sqrt(26.0) - 1.0).epsilon(1e-14));
  const std::vector<double> zero{0, 0};
  for (auto f : kAllFamilies) {
    const Regularizer r(f, 0.3);
    CHECK(r.eval(zero) == 0.0);
    const auto g = grad(r, zero);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
  }
  CHECK(Regularizer(RegularizerFamily::pgrowth, 1e-12).eval(x) == doctest::Approx(5.0).epsilon(1e-10));

  // Closed forms evaluated independently.
  const double t = 0.7, nu = 0.2;
  const std::vector<double> xi{t};
  CHECK(Regularizer(RegularizerFamily::yosida, nu).eval(xi) == doctest::Approx(t - nu / 2));
  CHECK(Regularizer(RegularizerFamily::yosida, nu).eval(std::vector<double>{0.1}) ==
        doctest::Approx(0.01 / (2 * nu)));
  CHECK(Regularizer(RegularizerFamily::tanh, nu).eval(xi) ==
        doctest::Approx(nu * std::log(std::cosh(t / nu))));
  CHECK(Regularizer(RegularizerFamily::arctan, nu).eval(xi) ==
        doctest::Approx(2 / std::numbers::pi * (t * std::atan(t / nu) - nu / 2 * std::log(1 + t * t / (nu * nu)))));
  CHECK(Regularizer(RegularizerFamily::pgrowth, nu).eval(xi) ==
        doctest::Approx(std::pow(t, 1 + nu) / (1 + nu)));
}

TEST_CASE("gradient examples") {
  const auto g = grad(Regularizer(RegularizerFamily::hyperbola, 1.0), std::vector<double>{3, 4});
  CHECK(g[0] == doctest::Approx(3 / std::sqrt(26.0)).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(4 / std::sqrt(26.0)).epsilon(1e-14));
}

TEST_CASE("gradients match central differences") {
  std::mt19937_64 rng(2);
  for (auto f : kAllFamilies)
    for (double nu : {0.5, 0.1, 0.01}) {
      const Regularizer r(f, nu);
      for (const auto& xi : log_spaced_samples(200, 1e-3, 1e3, 2, 9)) {
        const auto g = grad(r, xi);
        const auto fd = central_difference(r, xi);
        const double scale = std::hypot(g[0], g[1]);
        CHECK(std::hypot(g[0] - fd[0], g[1] - fd[1]) <= 1e-6 * std::max(scale, 1e-3));
      }
    }
}

TEST_CASE("hessian matches differences of the gradient") {
  for (auto f : kAllFamilies) {
    const Regularizer r(f, 0.1);
    const std::vector<double> xi{0.3, -0.45};
    double hess[4];
    r.hessian(xi, hess);
    for (std::size_t b = 0; b < 2; ++b) {
      auto p = xi, m = xi;
      p[b] += 1e-6;
      m[b] -= 1e-6;
      const auto gp = grad(r, p), gm = grad(r, m);
      for (std::size_t a = 0; a < 2; ++a)
        CHECK(hess[a * 2 + b] == doctest::Approx((gp[a] - gm[a]) / 2e-6).epsilon(1e-5));
    }
  }
}

TEST_CASE("profiles") {
  const auto h = Regularizer(RegularizerFamily::hyperbola, 0.25).ap2_profile();
  CHECK(h.q0 == 1.0);
  CHECK(h.q1 == 1.0);
  CHECK(h.r0 == 0.25);
  CHECK(h.r1 == 0.0);
  CHECK(Regularizer(RegularizerFamily::pgrowth, 0.1).ap2_profile().r1 == doctest::Approx(0.1));
  // Huber lies below |.| by nu/2 at infinity, so r0 cannot vanish.
  CHECK(Regularizer(RegularizerFamily::yosida, 0.5).ap2_profile().r0 == doctest::Approx(0.25));

  for (auto f : kAllFamilies) {
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double nu : {0.1, 0.01, 0.001, 0.0001}) {
      const auto p = Regularizer(f, nu).ap2_profile();
      const double gap = std::abs(p.q0 - 1) + std::abs(p.q1 - 1) + std::abs(p.r0) + std::abs(p.r1);
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap < 2e-3);
  }
}

TEST_CASE("suitability") {
  const auto samples = log_spaced_samples(1000, 1e-6, 1e3, 2, 7);
  CHECK(samples.size() == 1000);
  CHECK(verify_suitability(Regularizer(RegularizerFamily::hyperbola, 0.1), samples).pass());

  const auto at_zero = verify_suitability(Regularizer(RegularizerFamily::tanh, 0.1), {{0.0, 0.0}});
  CHECK(at_zero.pass());
  CHECK(at_zero.samples[0].lower_bound_slack >= 0.0);
  CHECK(at_zero.samples[0].chain_lower_slack == 0.0);

  auto broken = as_norm_approximation(Regularizer(RegularizerFamily::hyperbola, 0.1));
  auto inner = broken.eval;
  broken.eval = [inner](std::span<const double> xi) { return inner(xi) - 0.1; };
  const auto report = verify_suitability(broken, samples);
  CHECK_FALSE(report.lower_bound_ok);
  CHECK_FALSE(report.pass());

  auto steep = as_norm_approximation(Regularizer(RegularizerFamily::hyperbola, 0.1));
  auto g = steep.grad;
  steep.grad = [g](std::span<const double> xi, std::span<double> out) {
    g(xi, out);
    for (auto& x : out) x *= 1.5;
  };
  CHECK_FALSE(verify_suitability(steep, samples).grad_bound_ok);
}

TEST_CASE("tanh derivative in 1D") {
  const Regularizer r(RegularizerFamily::tanh, 0.1);
  for (double t : {0.1, 1.0, 10.0}) {
    const double d = r.dphi(t);
    CHECK(d == doctest::Approx(std::tanh(t / 0.1)).epsilon(1e-14));
    const double step = 1e-7 * std::max(1.0, t);
    const double fd = (r.phi(t + step) - r.phi(t - step)) / (2 * step);
    CHECK(std::abs(fd - d) <= 1e-6 * d);
  }
}
