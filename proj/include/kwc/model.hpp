#pragma once

#include <functional>
#include <string>
#include <vector>

namespace kwc {

using ScalarFunction = std::function<double(double)>;

// Sup-norms over [0,1], the invariant range of the order parameter.
struct ModelBounds {
  double g_sup = 0.0;
  double g_prime_sup = 0.0;
  double g_prime_inf = 0.0;  // signed infimum of g'
  double ghat_sup = 0.0;
  double ghat_prime_sup = 0.0;  // sup |g| again, as ghat' = g
  double alpha0_sup = 0.0;
  double alpha0_prime_sup = 0.0;
  double alpha_sup = 0.0;
  double alpha_prime_sup = 0.0;
  double alpha_second_sup = 0.0;
  double alpha_second_inf = 0.0;  // signed infimum of alpha''

  // |f|_{C^1} = |f|_{W^{1,inf}} = max(sup|f|, sup|f'|) over [0,1].
  double alpha0_c1() const;
  double alpha_c1() const;
  double ghat_c1() const;
};

// Coefficients of the grain-boundary model: g = ghat' (phase potential
// derivative), alpha0 (mobility weight on theta_t) and alpha (weight of the
// orientation total variation), with first and second derivatives where the
// solvers need them.
struct ModelFunctions {
  ScalarFunction g;
  ScalarFunction g_prime;
  ScalarFunction ghat;
  ScalarFunction alpha0;
  ScalarFunction alpha;
  ScalarFunction alpha_prime;
  ScalarFunction alpha_second;
  double delta_alpha = 0.0;
  ModelBounds bounds;
};

/// g(t) = t - 1, ghat(t) = (t-1)^2/2, alpha0(t) = alpha(t) = t^2 + delta_alpha.
ModelFunctions canonical(double delta_alpha);

/// User-supplied coefficients; bounds over [0,1] are estimated on a fine
/// uniform sample (derivatives of alpha0 by central differences).
ModelFunctions custom_model(ScalarFunction g, ScalarFunction g_prime, ScalarFunction ghat,
                            ScalarFunction alpha0, ScalarFunction alpha,
                            ScalarFunction alpha_prime, ScalarFunction alpha_second,
                            double delta_alpha);

struct HypothesisCheck {
  std::string name;  // "H1".."H4"
  bool pass = true;
  double worst_slack = 0.0;  // most negative margin found (>= 0 when passing)
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool pass() const;
  const HypothesisCheck& check(const std::string& name) const;
};

/// Checks (H1)-(H4) on the given samples (which should cover [-1, 2]).
HypothesisReport validate_hypotheses(const ModelFunctions& m, const std::vector<double>& samples);
std::vector<double> default_hypothesis_samples();

enum class StabilityBranch { r1_zero, r1_positive };

struct StabilityConstants {
  double R_star = 0.0;
  double A_star = 0.0;
  double B_star = 0.0;
  double C_star = 0.0;
  /// Admissible relaxations are nu < nu_star.
  double nu_star = 0.0;
  StabilityBranch branch = StabilityBranch::r1_zero;
};

// The constants of the a-priori energy estimate. q1_sup is sup over nu of the
// AP2 gradient constant q1, entering C* in the r1 = 0 branch (1 for every
// built-in family). Throws PreconditionError if the model fails (H1)-(H4).
StabilityConstants stability_constants(const ModelFunctions& m, double theta0_sup,
                                       double omega_measure, StabilityBranch branch,
                                       double q1_sup = 1.0);

}  // namespace kwc
