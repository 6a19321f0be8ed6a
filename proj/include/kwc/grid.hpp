#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace kwc {

// Uniform cell-centred grid on a 1D interval or a 2D rectangle.
//
// Cells are indexed row-major with the first axis fastest: k = j*n0 + i.
// Axis-a faces sit between a cell and its forward neighbour along a; only
// interior faces are stored, the boundary-normal flux being zero.
//   axis 0 faces: (n0-1) x n1, index j*(n0-1) + i, between (i,j) and (i+1,j)
//   axis 1 faces: n0 x (n1-1), index j*n0 + i,     between (i,j) and (i,j+1)
class Grid {
 public:
  Grid(int dimension, std::array<int, 2> extents, double dx);

  static Grid line(int n, double dx) { return Grid(1, {n, 1}, dx); }
  static Grid rectangle(int n0, int n1, double dx) { return Grid(2, {n0, n1}, dx); }

  int dimension() const { return dim_; }
  int extent(int axis) const { return extents_[static_cast<std::size_t>(axis)]; }
  std::array<int, 2> extents() const { return extents_; }
  double dx() const { return dx_; }

  std::size_t cell_count() const;
  std::size_t face_count(int axis) const;
  /// dx^dimension.
  double cell_volume() const;
  /// Total volume of the domain.
  double measure() const;

  std::size_t cell(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(extents_[0]) +
           static_cast<std::size_t>(i);
  }

  bool operator==(const Grid& other) const = default;

 private:
  int dim_;
  std::array<int, 2> extents_;
  double dx_;
};

class ScalarField {
 public:
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double at(int i, int j = 0) const { return values_[grid_.cell(i, j)]; }
  std::span<const double> values() const { return values_; }

  double min() const;
  double max() const;
  double sup_abs() const;

  bool operator==(const ScalarField& other) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

class FaceVectorField {
 public:
  explicit FaceVectorField(const Grid& grid);
  FaceVectorField(const Grid& grid, std::array<std::vector<double>, 2> components);

  const Grid& grid() const { return grid_; }
  std::span<const double> component(int axis) const {
    return components_[static_cast<std::size_t>(axis)];
  }

  bool operator==(const FaceVectorField& other) const = default;

 private:
  Grid grid_;
  std::array<std::vector<double>, 2> components_;
};

/// Forward differences on interior faces.
FaceVectorField gradient(const ScalarField& v);
/// Exact negative adjoint of gradient under the cell/face inner products.
ScalarField divergence(const FaceVectorField& p);
/// Cell quadrature of the integral over the domain.
double integrate(const ScalarField& v);
/// divergence(gradient(v)).
ScalarField neumann_laplacian(const ScalarField& v);

/// L2 inner products including the dx^d quadrature weight.
double inner(const ScalarField& u, const ScalarField& v);
double inner(const FaceVectorField& p, const FaceVectorField& q);
double l2_norm_sq(const ScalarField& v);
double h1_norm_sq(const ScalarField& v);

// Corners carry the isotropic gradient: at each cell with at least one
// forward neighbour, the vector of its forward faces (missing components are
// boundary faces and contribute zero). The stencil of a corner is the base
// cell plus its existing forward neighbours; corner weights are the arithmetic
// mean of a cell field over the stencil.
struct Corner {
  std::size_t base;
  std::array<long, 2> face{-1, -1};      // face index per axis, -1 if absent
  std::array<long, 2> neighbour{-1, -1}; // forward cell per axis, -1 if absent
  int stencil_size = 1;
};

std::vector<Corner> corners(const Grid& grid);

/// Euclidean norm of the isotropic gradient at each corner.
std::vector<double> corner_norms(const FaceVectorField& p);
/// Mean of a cell field over each corner stencil.
std::vector<double> corner_mean(const ScalarField& beta);
/// Transpose of corner_mean: per cell, sum over stencils containing it of
/// value / stencil_size.
std::vector<double> corner_mean_transpose(const Grid& grid, std::span<const double> corner_values);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace kwc
