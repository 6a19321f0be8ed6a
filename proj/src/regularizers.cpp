#include "kwc/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "kwc/errors.hpp"

namespace kwc {

namespace {

double norm(std::span<const double> xi) {
  double s = 0.0;
  for (double x : xi) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// log(cosh(x)) for x >= 0 without overflow or cancellation.
double log_cosh(double x) {
  if (x > 20.0) return x - std::numbers::ln2 + std::log1p(std::exp(-2.0 * x));
  const double s = std::sinh(0.5 * x);
  return std::log1p(2.0 * s * s);
}

constexpr double kRoundoff = 1e-12;

bool within(double slack, double scale) { return slack >= -kRoundoff * (1.0 + scale); }

}  // namespace

RegularizerFamily parse_family(std::string_view key) {
  if (key == "hyperbola") return RegularizerFamily::hyperbola;
  if (key == "yosida") return RegularizerFamily::yosida;
  if (key == "tanh") return RegularizerFamily::tanh;
  if (key == "arctan") return RegularizerFamily::arctan;
  if (key == "pgrowth") return RegularizerFamily::pgrowth;
  throw DomainError("unknown regularizer family '" + std::string(key) + "'");
}

std::string_view to_string(RegularizerFamily family) {
  switch (family) {
    case RegularizerFamily::hyperbola: return "hyperbola";
    case RegularizerFamily::yosida: return "yosida";
    case RegularizerFamily::tanh: return "tanh";
    case RegularizerFamily::arctan: return "arctan";
    case RegularizerFamily::pgrowth: return "pgrowth";
  }
  return "unknown";
}

Regularizer::Regularizer(RegularizerFamily family, double nu) : family_(family), nu_(nu) {
  if (!(nu > 0.0 && nu <= 1.0)) {
    throw DomainError("regularizer: nu must lie in (0,1], got " + std::to_string(nu));
  }
}

double Regularizer::phi(double t) const {
  const double nu = nu_;
  switch (family_) {
    case RegularizerFamily::hyperbola:
      return t * t / (std::sqrt(t * t + nu * nu) + nu);
    case RegularizerFamily::yosida:
      return t <= nu ? t * t / (2.0 * nu) : t - 0.5 * nu;
    case RegularizerFamily::tanh:
      return nu * log_cosh(t / nu);
    case RegularizerFamily::arctan: {
      const double x = t / nu;
      return (2.0 / std::numbers::pi) * (t * std::atan(x) - 0.5 * nu * std::log1p(x * x));
    }
    case RegularizerFamily::pgrowth: {
      const double p = 1.0 + nu;
      return std::pow(t, p) / p;
    }
  }
  return 0.0;
}

double Regularizer::dphi(double t) const {
  const double nu = nu_;
  switch (family_) {
    case RegularizerFamily::hyperbola: return t / std::sqrt(t * t + nu * nu);
    case RegularizerFamily::yosida: return t <= nu ? t / nu : 1.0;
    case RegularizerFamily::tanh: return std::tanh(t / nu);
    case RegularizerFamily::arctan: return (2.0 / std::numbers::pi) * std::atan(t / nu);
    case RegularizerFamily::pgrowth: return t > 0.0 ? std::pow(t, nu) : 0.0;
  }
  return 0.0;
}

double Regularizer::dphi_over_t(double t) const {
  const double nu = nu_;
  switch (family_) {
    case RegularizerFamily::hyperbola: return 1.0 / std::sqrt(t * t + nu * nu);
    case RegularizerFamily::yosida: return t <= nu ? 1.0 / nu : 1.0 / t;
    case RegularizerFamily::tanh: return t > 0.0 ? std::tanh(t / nu) / t : 1.0 / nu;
    case RegularizerFamily::arctan:
      return t > 0.0 ? (2.0 / std::numbers::pi) * std::atan(t / nu) / t
                     : 2.0 / (std::numbers::pi * nu);
    case RegularizerFamily::pgrowth:
      return std::pow(std::max(t, kCurvatureFloor), nu - 1.0);
  }
  return 0.0;
}

double Regularizer::d2phi(double t) const {
  const double nu = nu_;
  switch (family_) {
    case RegularizerFamily::hyperbola: {
      const double s = std::sqrt(t * t + nu * nu);
      return nu * nu / (s * s * s);
    }
    case RegularizerFamily::yosida: return t <= nu ? 1.0 / nu : 0.0;
    case RegularizerFamily::tanh: {
      const double c = std::cosh(t / nu);
      return 1.0 / (nu * c * c);
    }
    case RegularizerFamily::arctan: {
      const double x = t / nu;
      return (2.0 / std::numbers::pi) / (nu * (1.0 + x * x));
    }
    case RegularizerFamily::pgrowth:
      return nu * std::pow(std::max(t, kCurvatureFloor), nu - 1.0);
  }
  return 0.0;
}

double Regularizer::eval(std::span<const double> xi) const { return phi(norm(xi)); }

void Regularizer::grad(std::span<const double> xi, std::span<double> out) const {
  const double t = norm(xi);
  const double s = t > 0.0 ? dphi(t) / t : 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) out[i] = s * xi[i];
}

void Regularizer::hessian(std::span<const double> xi, std::span<double> out) const {
  const std::size_t n = xi.size();
  const double t = norm(xi);
  const double radial = d2phi(t);
  if (n == 1) {
    out[0] = radial;
    return;
  }
  const double tangential = dphi_over_t(t);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double id = i == j ? 1.0 : 0.0;
      if (t == 0.0) {
        out[i * n + j] = tangential * id;
      } else {
        const double uu = xi[i] * xi[j] / (t * t);
        out[i * n + j] = radial * uu + tangential * (id - uu);
      }
    }
  }
}

// Profiles. With g(t) = t - phi(t):
//   hyperbola: g increases to nu.                         r0 = nu
//   yosida:    g = t - t^2/(2nu) <= nu/2, then nu/2.       r0 = nu/2
//   tanh:      log cosh x >= x - log 2.                    r0 = nu log 2
//   arctan:    g grows like (nu/pi) log(t^2), so q0 < 1 is required. With
//              q0 = 1 - nu the minimum of phi(t) - q0 t sits at
//              t* = nu tan(pi q0 / 2) and equals (2nu/pi) log cos(pi q0 / 2),
//              giving r0 = -(2nu/pi) log sin(pi nu / 2) -> 0.
//   pgrowth:   min of t^p/p - t is at t = 1, value -nu/(1+nu); |grad| = t^nu.
Ap2Profile Regularizer::ap2_profile() const {
  const double nu = nu_;
  switch (family_) {
    case RegularizerFamily::hyperbola: return {1.0, 1.0, nu, 0.0};
    case RegularizerFamily::yosida: return {1.0, 1.0, 0.5 * nu, 0.0};
    case RegularizerFamily::tanh: return {1.0, 1.0, nu * std::numbers::ln2, 0.0};
    case RegularizerFamily::arctan:
      return {1.0 - nu, 1.0,
              -(2.0 * nu / std::numbers::pi) * std::log(std::sin(0.5 * std::numbers::pi * nu)),
              0.0};
    case RegularizerFamily::pgrowth: return {1.0, 1.0, nu / (1.0 + nu), nu};
  }
  return {};
}

std::vector<double> grad(const Regularizer& reg, std::span<const double> xi) {
  std::vector<double> out(xi.size());
  reg.grad(xi, out);
  return out;
}

NormApproximation as_norm_approximation(const Regularizer& reg) {
  return NormApproximation{
      [reg](std::span<const double> xi) { return reg.eval(xi); },
      [reg](std::span<const double> xi, std::span<double> out) { reg.grad(xi, out); },
      reg.ap2_profile()};
}

SuitabilityReport verify_suitability(const NormApproximation& candidate,
                                     const std::vector<std::vector<double>>& samples) {
  if (samples.empty()) throw PreconditionError("verify_suitability: empty sample set");
  const Ap2Profile prof = candidate.profile;
  SuitabilityReport report;

  const std::size_t dim = samples.front().size();
  const std::vector<double> zero(dim, 0.0);
  report.zero_ok = std::abs(candidate.eval(zero)) <= kRoundoff;

  std::vector<double> g(dim), mid(dim), neg(dim);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& xi = samples[s];
    if (xi.size() != dim) throw PreconditionError("verify_suitability: mixed sample dimensions");
    SuitabilitySample rec;
    rec.xi = xi;
    const double f = candidate.eval(xi);
    const double t = norm(xi);
    candidate.grad(xi, g);

    // Midpoint convexity against the next sample, the origin and -xi.
    const auto& partner = samples[(s + 1) % samples.size()];
    for (std::size_t i = 0; i < dim; ++i) neg[i] = -xi[i];
    double worst = std::numeric_limits<double>::infinity();
    double scale = std::abs(f);
    const std::vector<double>* partners[] = {&partner, &zero, &neg};
    for (const auto* other : partners) {
      for (std::size_t i = 0; i < dim; ++i) mid[i] = 0.5 * (xi[i] + (*other)[i]);
      const double fo = candidate.eval(*other);
      worst = std::min(worst, 0.5 * (f + fo) - candidate.eval(mid));
      scale = std::max(scale, std::abs(fo));
    }
    rec.convexity_slack = worst;
    rec.convex_ok = within(worst, scale);

    const double lower = prof.q0 * t - prof.r0;
    rec.lower_bound_slack = f - lower;
    rec.lower_bound_ok = within(rec.lower_bound_slack, std::max(std::abs(f), std::abs(lower)));

    const double gbound = prof.q1 * std::pow(t, prof.r1);
    const double gnorm = norm(g);
    rec.grad_bound_slack = gbound - gnorm;
    rec.grad_bound_ok = within(rec.grad_bound_slack, gbound);

    const double gx = dot(g, xi);
    const double upper = prof.q1 * std::pow(t, 1.0 + prof.r1);
    rec.chain_lower_slack = gx - f;
    rec.chain_upper_slack = upper - gx;
    rec.chain_ok = within(rec.chain_lower_slack, std::max(std::abs(gx), std::abs(f))) &&
                   within(rec.chain_upper_slack, std::max(std::abs(gx), upper));

    report.convex_ok = report.convex_ok && rec.convex_ok;
    report.lower_bound_ok = report.lower_bound_ok && rec.lower_bound_ok;
    report.grad_bound_ok = report.grad_bound_ok && rec.grad_bound_ok;
    report.chain_ok = report.chain_ok && rec.chain_ok;
    report.samples.push_back(std::move(rec));
  }
  return report;
}

SuitabilityReport verify_suitability(const Regularizer& reg,
                                     const std::vector<std::vector<double>>& samples) {
  return verify_suitability(as_norm_approximation(reg), samples);
}

std::vector<std::vector<double>> log_spaced_samples(std::size_t count, double lo, double hi,
                                                    int dimension, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::bernoulli_distribution sign(0.5);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) {
    const double frac = count > 1 ? static_cast<double>(k) / static_cast<double>(count - 1) : 0.0;
    const double r = std::exp(llo + frac * (lhi - llo));
    if (dimension == 1) {
      out.push_back({sign(rng) ? r : -r});
    } else {
      const double a = angle(rng);
      out.push_back({r * std::cos(a), r * std::sin(a)});
    }
  }
  return out;
}

}  // namespace kwc
