#pragma once

// Brute-force reference minimizers for the two sub-step functionals on 1D
// grids, written directly from the formulas with no library numerics. Every
// one-dimensional search is a nested grid refinement (21 points, shrink to
// the best bracket).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;

inline double nested_search(const std::function<double(double)>& f, double lo, double hi,
                            double width = 1e-11) {
  constexpr int kPoints = 21;
  while (hi - lo > width) {
    const double step = (hi - lo) / (kPoints - 1);
    int best = 0;
    double fbest = f(lo);
    for (int k = 1; k < kPoints; ++k) {
      const double v = f(lo + k * step);
      if (v < fbest) {
        fbest = v;
        best = k;
      }
    }
    const double c = lo + best * step;
    lo = c - step;
    hi = c + step;
  }
  return 0.5 * (lo + hi);
}

// Minimizes f by repeated exact line searches along the unit coordinates and
// the suffix shifts e_k + ... + e_{n-1}; the latter move a block rigidly, so
// strongly coupled differences do not stall the sweep.
inline std::vector<double> direction_search(std::vector<double> x, double radius,
                                            const std::function<double(const std::vector<double>&)>& f,
                                            double tol = 1e-10, int max_sweeps = 2000) {
  const std::size_t n = x.size();
  std::vector<double> trial(n);
  auto along = [&](std::size_t k, bool suffix) {
    auto line = [&](double s) {
      trial = x;
      for (std::size_t j = k; j < (suffix ? n : k + 1); ++j) trial[j] += s;
      return f(trial);
    };
    const double s = nested_search(line, -radius, radius);
    if (line(s) < f(x)) {
      for (std::size_t j = k; j < (suffix ? n : k + 1); ++j) x[j] += s;
      return std::abs(s);
    }
    return 0.0;
  };
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t k = 0; k < n; ++k) change = std::max(change, along(k, false));
    for (std::size_t k = 1; k < n; ++k) change = std::max(change, along(k, true));
    if (change < tol) break;
  }
  return x;
}

// Radial profiles of the five families, written from their closed forms.
inline Fn profile(const std::string& family, double nu) {
  if (family == "hyperbola") return [nu](double t) { return std::sqrt(t * t + nu * nu) - nu; };
  if (family == "yosida")
    return [nu](double t) { return t <= nu ? t * t / (2 * nu) : t - nu / 2; };
  if (family == "tanh")
    return [nu](double t) {
      const double a = t / nu;
      return nu * (a + std::log1p(std::exp(-2 * a)) - std::numbers::ln2);
    };
  if (family == "arctan")
    return [nu](double t) {
      return 2 / std::numbers::pi * (t * std::atan(t / nu) - nu / 2 * std::log1p(t * t / (nu * nu)));
    };
  return [nu](double t) { return std::pow(t, 1 + nu) / (1 + nu); };
}

struct EtaProblem1D {
  double dx, h;
  std::vector<double> eta_prev, theta_prev;
  Fn ghat, alpha, phi;  // phi: radial relaxed norm

  double energy(const std::vector<double>& x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      s += (x[k] - eta_prev[k]) * (x[k] - eta_prev[k]) / (2 * h) + ghat(x[k]);
      if (k + 1 < x.size()) {
        const double d = (x[k + 1] - x[k]) / dx;
        const double T = phi(std::abs(theta_prev[k + 1] - theta_prev[k]) / dx);
        s += 0.5 * d * d + 0.5 * (alpha(x[k]) + alpha(x[k + 1])) * T;
      }
    }
    return s;
  }

  std::vector<double> solve() const {
    return direction_search(eta_prev, 2.0, [this](const std::vector<double>& x) { return energy(x); });
  }
};

struct ThetaProblem1D {
  double dx, h, nu;
  std::vector<double> eta_new, theta_prev;
  Fn alpha0, alpha, phi;

  double energy(const std::vector<double>& x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      s += alpha0(eta_new[k]) * (x[k] - theta_prev[k]) * (x[k] - theta_prev[k]) / (2 * h);
      if (k + 1 < x.size()) {
        const double g = (x[k + 1] - x[k]) / dx;
        s += 0.5 * (alpha(eta_new[k]) + alpha(eta_new[k + 1])) * phi(std::abs(g)) + 0.5 * nu * g * g;
      }
    }
    return s;
  }

  std::vector<double> solve() const {
    const auto [lo, hi] = std::minmax_element(theta_prev.begin(), theta_prev.end());
    return direction_search(theta_prev, *hi - *lo + 1.0,
                            [this](const std::vector<double>& x) { return energy(x); });
  }
};

// Dense two-variable search with refinement.
inline std::pair<double, double> grid_search_2d(const std::function<double(double, double)>& f,
                                                double lo, double hi, double width = 1e-10) {
  double a0 = lo, b0 = hi, a1 = lo, b1 = hi;
  constexpr int kPoints = 41;
  double x0 = 0.5 * (a0 + b0), x1 = 0.5 * (a1 + b1);
  while (b0 - a0 > width || b1 - a1 > width) {
    const double s0 = (b0 - a0) / (kPoints - 1), s1 = (b1 - a1) / (kPoints - 1);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kPoints; ++i)
      for (int j = 0; j < kPoints; ++j) {
        const double u = a0 + i * s0, v = a1 + j * s1;
        const double val = f(u, v);
        if (val < best) {
          best = val;
          x0 = u;
          x1 = v;
        }
      }
    a0 = x0 - 2 * s0;
    b0 = x0 + 2 * s0;
    a1 = x1 - 2 * s1;
    b1 = x1 + 2 * s1;
  }
  return {x0, x1};
}

}  // namespace oracle
