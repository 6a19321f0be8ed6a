#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kwc {

enum class RegularizerFamily { hyperbola, yosida, tanh, arctan, pgrowth };

RegularizerFamily parse_family(std::string_view key);
std::string_view to_string(RegularizerFamily family);
inline constexpr std::array<RegularizerFamily, 5> kAllFamilies{
    RegularizerFamily::hyperbola, RegularizerFamily::yosida, RegularizerFamily::tanh,
    RegularizerFamily::arctan, RegularizerFamily::pgrowth};

/// Bounds in |xi|_nu >= q0 |xi| - r0 and |grad|xi|_nu| <= q1 |xi|^r1.
struct Ap2Profile {
  double q0 = 1.0;
  double q1 = 1.0;
  double r0 = 0.0;
  double r1 = 0.0;
};

// Smooth convex radial approximation of the Euclidean norm, |xi|_nu = phi(|xi|).
//
//   hyperbola  sqrt(t^2 + nu^2) - nu
//   yosida     Moreau envelope of |.| with parameter nu (Huber):
//              t^2 / (2 nu) for t <= nu, t - nu/2 otherwise
//   tanh       int_0^t tanh(s/nu) ds = nu log cosh(t/nu)
//   arctan     (2/pi) int_0^t atan(s/nu) ds
//              = (2/pi) (t atan(t/nu) - (nu/2) log(1 + t^2/nu^2))
//   pgrowth    t^p / p with p = 1 + nu
//
// All five vanish at 0 and are C^1. nu may be 1 for evaluation; time stepping
// requires nu < 1.
class Regularizer {
 public:
  Regularizer(RegularizerFamily family, double nu);

  RegularizerFamily family() const { return family_; }
  double nu() const { return nu_; }
  /// Growth exponent; only meaningful for pgrowth (1 + nu), 1 otherwise.
  double p() const { return family_ == RegularizerFamily::pgrowth ? 1.0 + nu_ : 1.0; }

  double eval(std::span<const double> xi) const;
  void grad(std::span<const double> xi, std::span<double> out) const;
  /// Row-major dim x dim Hessian. For pgrowth the curvature is evaluated at
  /// max(|xi|, kCurvatureFloor) because phi'' is unbounded at 0.
  void hessian(std::span<const double> xi, std::span<double> out) const;

  // Radial profile: phi(t), phi'(t), phi''(t), and phi'(t)/t (its limit at 0).
  double phi(double t) const;
  double dphi(double t) const;
  double d2phi(double t) const;
  double dphi_over_t(double t) const;

  Ap2Profile ap2_profile() const;

  static constexpr double kCurvatureFloor = 1e-6;

 private:
  RegularizerFamily family_;
  double nu_;
};

inline double eval(const Regularizer& reg, std::span<const double> xi) { return reg.eval(xi); }
std::vector<double> grad(const Regularizer& reg, std::span<const double> xi);
inline Ap2Profile ap2_profile(const Regularizer& reg) { return reg.ap2_profile(); }

/// Anything that looks like a norm approximation; lets the verifier audit
/// deliberately broken candidates as well as the built-in families.
struct NormApproximation {
  std::function<double(std::span<const double>)> eval;
  std::function<void(std::span<const double>, std::span<double>)> grad;
  Ap2Profile profile;
};

NormApproximation as_norm_approximation(const Regularizer& reg);

struct SuitabilitySample {
  std::vector<double> xi;
  double convexity_slack;   // min over partners of (f(a)+f(b))/2 - f((a+b)/2)
  double lower_bound_slack; // eval - (q0 |xi| - r0)
  double grad_bound_slack;  // q1 |xi|^r1 - |grad|
  double chain_lower_slack; // grad.xi - eval
  double chain_upper_slack; // q1 |xi|^(1+r1) - grad.xi
  bool convex_ok;
  bool lower_bound_ok;
  bool grad_bound_ok;
  bool chain_ok;
};

struct SuitabilityReport {
  std::vector<SuitabilitySample> samples;
  bool convex_ok = true;
  bool lower_bound_ok = true;
  bool grad_bound_ok = true;
  bool chain_ok = true;
  bool zero_ok = true;  // |0|_nu == 0
  bool pass() const { return convex_ok && lower_bound_ok && grad_bound_ok && chain_ok && zero_ok; }
};

// Checks (AP1)-(AP2) and the consequence eval <= grad.xi <= q1 |xi|^(1+r1)
// pointwise. Each comparison allows a rounding slack of 1e-12 * (1 + scale),
// where scale is the largest magnitude entering that comparison.
SuitabilityReport verify_suitability(const NormApproximation& candidate,
                                     const std::vector<std::vector<double>>& samples);
SuitabilityReport verify_suitability(const Regularizer& reg,
                                     const std::vector<std::vector<double>>& samples);

/// Samples with log-spaced magnitudes in [lo, hi] and seeded random directions.
std::vector<std::vector<double>> log_spaced_samples(std::size_t count, double lo, double hi,
                                                    int dimension, unsigned seed);

}  // namespace kwc
