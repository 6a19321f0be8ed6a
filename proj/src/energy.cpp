#include "kwc/energy.hpp"

#include <algorithm>
#include <vector>

#include "kwc/errors.hpp"

namespace kwc {

namespace {

void require_nonnegative(const ScalarField& beta, const char* where) {
  if (beta.min() < 0.0) {
    throw PreconditionError(std::string(where) + ": weight must be nonnegative");
  }
}

// Corner-weighted sum of a radial function of the isotropic gradient.
template <class Radial>
double corner_sum(const ScalarField& beta, const ScalarField& v, Radial&& radial) {
  require_same_grid(beta.grid(), v.grid(), "weighted total variation");
  const auto w = corner_mean(beta);
  const auto t = corner_norms(gradient(v));
  double s = 0.0;
  for (std::size_t c = 0; c < w.size(); ++c) s += w[c] * radial(t[c]);
  return s * v.grid().cell_volume();
}

}  // namespace

ScalarField apply(const ScalarField& v, const ScalarFunction& f) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = f(v[k]);
  return ScalarField(v.grid(), std::move(out));
}

double weighted_tv(const ScalarField& beta, const ScalarField& v) {
  require_nonnegative(beta, "weighted_tv");
  return corner_sum(beta, v, [](double t) { return t; });
}

double generalized_weighted_tv(const ScalarField& beta, const ScalarField& v) {
  std::vector<double> plus(beta.size()), minus(beta.size());
  for (std::size_t k = 0; k < beta.size(); ++k) {
    plus[k] = std::max(beta[k], 0.0);
    minus[k] = std::max(-beta[k], 0.0);
  }
  return weighted_tv(ScalarField(beta.grid(), std::move(plus)), v) -
         weighted_tv(ScalarField(beta.grid(), std::move(minus)), v);
}

double relaxed_wtv(const ScalarField& beta, const ScalarField& v, const Regularizer& reg) {
  require_nonnegative(beta, "relaxed_wtv");
  const double smooth = corner_sum(beta, v, [&reg](double t) { return reg.phi(t); });
  const auto gv = gradient(v);
  return smooth + 0.5 * reg.nu() * inner(gv, gv);
}

EnergyBreakdown free_energy(const ModelFunctions& m, const ScalarField& eta,
                            const ScalarField& theta) {
  require_same_grid(eta.grid(), theta.grid(), "free_energy");
  EnergyBreakdown e;
  const auto ge = gradient(eta);
  e.dirichlet = 0.5 * inner(ge, ge);
  e.potential = integrate(apply(eta, m.ghat));
  e.weighted_tv = weighted_tv(apply(eta, m.alpha), theta);
  e.tikhonov = 0.0;
  e.total = e.dirichlet + e.potential + e.weighted_tv + e.tikhonov;
  return e;
}

EnergyBreakdown relaxed_free_energy(const ModelFunctions& m, const ScalarField& eta,
                                    const ScalarField& theta, const Regularizer& reg) {
  require_same_grid(eta.grid(), theta.grid(), "relaxed_free_energy");
  EnergyBreakdown e;
  const auto ge = gradient(eta);
  e.dirichlet = 0.5 * inner(ge, ge);
  e.potential = integrate(apply(eta, m.ghat));
  const auto alpha = apply(eta, m.alpha);
  require_nonnegative(alpha, "relaxed_free_energy");
  e.weighted_tv = corner_sum(alpha, theta, [&reg](double t) { return reg.phi(t); });
  const auto gt = gradient(theta);
  e.tikhonov = 0.5 * reg.nu() * inner(gt, gt);
  e.total = e.dirichlet + e.potential + e.weighted_tv + e.tikhonov;
  return e;
}

double time_integrated(std::span<const double> values, double h) {
  if (!(h > 0.0)) throw PreconditionError("time_integrated: h must be positive");
  double s = 0.0;
  for (double v : values) s += v;
  return h * s;
}

}  // namespace kwc
