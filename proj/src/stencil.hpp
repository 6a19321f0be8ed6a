#pragma once

// In-place difference kernels on raw cell/face arrays for the inner solver
// loops. Conventions match grid.hpp: (G x)_f = (x_R - x_L)/dx and G^T is the
// plain transpose, so G^T G = -neumann_laplacian.

#include <cstddef>
#include <span>
#include <vector>

#include "kwc/grid.hpp"

namespace kwc::detail {

class Stencil {
 public:
  explicit Stencil(const Grid& grid);

  const Grid& grid() const { return grid_; }
  const std::vector<Corner>& corner_list() const { return corners_; }
  std::size_t cells() const { return grid_.cell_count(); }
  std::size_t faces(int axis) const { return grid_.face_count(axis); }

  /// faces[a] = G_a x.
  void grad(std::span<const double> x, std::vector<double>& f0, std::vector<double>& f1) const;
  /// out += G^T f (transpose of grad).
  void grad_transpose_add(std::span<const double> f0, std::span<const double> f1,
                          std::span<double> out) const;
  /// out += scale * G^T G x.
  void dirichlet_add(std::span<const double> x, double scale, std::span<double> out) const;
  /// sum_f (G x)_f^2 (no quadrature weight).
  double grad_sq_sum(std::span<const double> x) const;
  /// Number of interior faces touching each cell.
  const std::vector<int>& face_degree() const { return degree_; }

 private:
  Grid grid_;
  std::vector<Corner> corners_;
  std::vector<int> degree_;
  mutable std::vector<double> f0_, f1_;
};

double dot(std::span<const double> a, std::span<const double> b);
double sup_norm(std::span<const double> a);

}  // namespace kwc::detail
