#pragma once

#include <span>

#include "kwc/grid.hpp"
#include "kwc/model.hpp"
#include "kwc/regularizers.hpp"

namespace kwc {

struct EnergyBreakdown {
  double dirichlet = 0.0;    // 1/2 int |grad eta|^2
  double potential = 0.0;    // int ghat(eta)
  double weighted_tv = 0.0;  // int alpha(eta) |grad theta| (or |.|_nu when relaxed)
  double tikhonov = 0.0;     // nu/2 int |grad theta|^2, zero when unrelaxed
  double total = 0.0;
};

ScalarField apply(const ScalarField& v, const ScalarFunction& f);

/// Sum over corners of (stencil-mean beta) * |grad v| * dx^d. Requires beta >= 0.
double weighted_tv(const ScalarField& beta, const ScalarField& v);
/// weighted_tv(beta+, v) - weighted_tv(beta-, v) for beta of any sign.
double generalized_weighted_tv(const ScalarField& beta, const ScalarField& v);
/// Sum over corners of beta * |grad v|_nu * dx^d plus nu/2 * sum_faces |grad v|^2 * dx^d.
double relaxed_wtv(const ScalarField& beta, const ScalarField& v, const Regularizer& reg);

EnergyBreakdown free_energy(const ModelFunctions& m, const ScalarField& eta,
                            const ScalarField& theta);
EnergyBreakdown relaxed_free_energy(const ModelFunctions& m, const ScalarField& eta,
                                    const ScalarField& theta, const Regularizer& reg);

/// Rectangle rule h * sum(values).
double time_integrated(std::span<const double> values, double h);

}  // namespace kwc
