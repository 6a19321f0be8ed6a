#include "stencil.hpp"

#include <algorithm>
#include <cmath>

namespace kwc::detail {

Stencil::Stencil(const Grid& grid)
    : grid_(grid), corners_(corners(grid)), degree_(grid.cell_count(), 0) {
  for (const auto& c : corners_) {
    for (int a = 0; a < 2; ++a) {
      const long nb = c.neighbour[static_cast<std::size_t>(a)];
      if (nb >= 0) {
        ++degree_[c.base];
        ++degree_[static_cast<std::size_t>(nb)];
      }
    }
  }
}

void Stencil::grad(std::span<const double> x, std::vector<double>& f0,
                   std::vector<double>& f1) const {
  const int n0 = grid_.extent(0);
  const int n1 = grid_.extent(1);
  const double inv = 1.0 / grid_.dx();
  f0.resize(faces(0));
  for (int j = 0; j < n1; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * static_cast<std::size_t>(n0);
    const std::size_t frow = static_cast<std::size_t>(j) * static_cast<std::size_t>(n0 - 1);
    for (int i = 0; i + 1 < n0; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      f0[frow + ui] = (x[row + ui + 1] - x[row + ui]) * inv;
    }
  }
  f1.resize(faces(1));
  if (grid_.dimension() == 2) {
    const auto w = static_cast<std::size_t>(n0);
    for (std::size_t k = 0; k < f1.size(); ++k) f1[k] = (x[k + w] - x[k]) * inv;
  }
}

void Stencil::grad_transpose_add(std::span<const double> f0, std::span<const double> f1,
                                 std::span<double> out) const {
  const int n0 = grid_.extent(0);
  const int n1 = grid_.extent(1);
  const double inv = 1.0 / grid_.dx();
  for (int j = 0; j < n1; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * static_cast<std::size_t>(n0);
    const std::size_t frow = static_cast<std::size_t>(j) * static_cast<std::size_t>(n0 - 1);
    for (int i = 0; i + 1 < n0; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double v = f0[frow + ui] * inv;
      out[row + ui] -= v;
      out[row + ui + 1] += v;
    }
  }
  if (grid_.dimension() == 2) {
    const auto w = static_cast<std::size_t>(n0);
    for (std::size_t k = 0; k < f1.size(); ++k) {
      const double v = f1[k] * inv;
      out[k] -= v;
      out[k + w] += v;
    }
  }
}

void Stencil::dirichlet_add(std::span<const double> x, double scale, std::span<double> out) const {
  grad(x, f0_, f1_);
  for (double& v : f0_) v *= scale;
  for (double& v : f1_) v *= scale;
  grad_transpose_add(f0_, f1_, out);
}

double Stencil::grad_sq_sum(std::span<const double> x) const {
  grad(x, f0_, f1_);
  double s = 0.0;
  for (double v : f0_) s += v * v;
  for (double v : f1_) s += v * v;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sup_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace kwc::detail
