#include "kwc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kwc/errors.hpp"

namespace kwc {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double x : values) {
    if (!std::isfinite(x)) {
      throw StructuralError(std::string(what) + ": non-finite entry");
    }
  }
}

}  // namespace

Grid::Grid(int dimension, std::array<int, 2> extents, double dx)
    : dim_(dimension), extents_(extents), dx_(dx) {
  if (dim_ != 1 && dim_ != 2) {
    throw StructuralError("Grid: dimension must be 1 or 2");
  }
  if (dim_ == 1) {
    extents_[1] = 1;
  }
  for (int a = 0; a < dim_; ++a) {
    if (extents_[static_cast<std::size_t>(a)] < 2) {
      throw StructuralError("Grid: every axis needs at least 2 cells");
    }
  }
  if (!(dx_ > 0.0) || !std::isfinite(dx_)) {
    throw StructuralError("Grid: dx must be positive and finite");
  }
}

std::size_t Grid::cell_count() const {
  return static_cast<std::size_t>(extents_[0]) * static_cast<std::size_t>(extents_[1]);
}

std::size_t Grid::face_count(int axis) const {
  if (axis >= dim_) {
    return 0;
  }
  const auto n0 = static_cast<std::size_t>(extents_[0]);
  const auto n1 = static_cast<std::size_t>(extents_[1]);
  return axis == 0 ? (n0 - 1) * n1 : n0 * (n1 - 1);
}

double Grid::cell_volume() const { return dim_ == 1 ? dx_ : dx_ * dx_; }

double Grid::measure() const { return static_cast<double>(cell_count()) * cell_volume(); }

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) {
    throw StructuralError(std::string(where) + ": fields live on different grids");
  }
}

ScalarField::ScalarField(const Grid& grid, double fill)
    : grid_(grid), values_(grid.cell_count(), fill) {
  require_finite(values_, "ScalarField");
}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cell_count()) {
    throw StructuralError("ScalarField: value count does not match cell count");
  }
  require_finite(values_, "ScalarField");
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::sup_abs() const {
  double s = 0.0;
  for (double x : values_) s = std::max(s, std::abs(x));
  return s;
}

FaceVectorField::FaceVectorField(const Grid& grid) : grid_(grid) {
  for (int a = 0; a < 2; ++a) {
    components_[static_cast<std::size_t>(a)].assign(grid.face_count(a), 0.0);
  }
}

FaceVectorField::FaceVectorField(const Grid& grid, std::array<std::vector<double>, 2> components)
    : grid_(grid), components_(std::move(components)) {
  for (int a = 0; a < 2; ++a) {
    const auto& c = components_[static_cast<std::size_t>(a)];
    if (c.size() != grid_.face_count(a)) {
      throw StructuralError("FaceVectorField: component size does not match face count");
    }
    require_finite(c, "FaceVectorField");
  }
}

FaceVectorField gradient(const ScalarField& v) {
  const Grid& g = v.grid();
  const int n0 = g.extent(0);
  const int n1 = g.extent(1);
  const double inv = 1.0 / g.dx();
  std::array<std::vector<double>, 2> c;
  c[0].resize(g.face_count(0));
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i + 1 < n0; ++i)
      c[0][static_cast<std::size_t>(j * (n0 - 1) + i)] = (v.at(i + 1, j) - v.at(i, j)) * inv;
  if (g.dimension() == 2) {
    c[1].resize(g.face_count(1));
    for (int j = 0; j + 1 < n1; ++j)
      for (int i = 0; i < n0; ++i)
        c[1][static_cast<std::size_t>(j * n0 + i)] = (v.at(i, j + 1) - v.at(i, j)) * inv;
  }
  return FaceVectorField(g, std::move(c));
}

ScalarField divergence(const FaceVectorField& p) {
  const Grid& g = p.grid();
  const int n0 = g.extent(0);
  const int n1 = g.extent(1);
  const double inv = 1.0 / g.dx();
  std::vector<double> out(g.cell_count(), 0.0);
  auto px = p.component(0);
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i + 1 < n0; ++i) {
      const double f = px[static_cast<std::size_t>(j * (n0 - 1) + i)] * inv;
      out[g.cell(i, j)] += f;
      out[g.cell(i + 1, j)] -= f;
    }
  if (g.dimension() == 2) {
    auto py = p.component(1);
    for (int j = 0; j + 1 < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        const double f = py[static_cast<std::size_t>(j * n0 + i)] * inv;
        out[g.cell(i, j)] += f;
        out[g.cell(i, j + 1)] -= f;
      }
  }
  return ScalarField(g, std::move(out));
}

double integrate(const ScalarField& v) {
  double s = 0.0;
  for (double x : v.values()) s += x;
  return s * v.grid().cell_volume();
}

ScalarField neumann_laplacian(const ScalarField& v) { return divergence(gradient(v)); }

double inner(const ScalarField& u, const ScalarField& v) {
  require_same_grid(u.grid(), v.grid(), "inner");
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
  return s * u.grid().cell_volume();
}

double inner(const FaceVectorField& p, const FaceVectorField& q) {
  require_same_grid(p.grid(), q.grid(), "inner");
  double s = 0.0;
  for (int a = 0; a < 2; ++a) {
    auto pa = p.component(a);
    auto qa = q.component(a);
    for (std::size_t f = 0; f < pa.size(); ++f) s += pa[f] * qa[f];
  }
  return s * p.grid().cell_volume();
}

double l2_norm_sq(const ScalarField& v) { return inner(v, v); }

double h1_norm_sq(const ScalarField& v) {
  const auto gv = gradient(v);
  return inner(v, v) + inner(gv, gv);
}

std::vector<Corner> corners(const Grid& grid) {
  const int n0 = grid.extent(0);
  const int n1 = grid.extent(1);
  std::vector<Corner> out;
  out.reserve(grid.cell_count());
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n0; ++i) {
      Corner c;
      c.base = grid.cell(i, j);
      if (i + 1 < n0) {
        c.face[0] = static_cast<long>(j * (n0 - 1) + i);
        c.neighbour[0] = static_cast<long>(grid.cell(i + 1, j));
        ++c.stencil_size;
      }
      if (grid.dimension() == 2 && j + 1 < n1) {
        c.face[1] = static_cast<long>(j * n0 + i);
        c.neighbour[1] = static_cast<long>(grid.cell(i, j + 1));
        ++c.stencil_size;
      }
      if (c.stencil_size > 1) {
        out.push_back(c);
      }
    }
  }
  return out;
}

std::vector<double> corner_norms(const FaceVectorField& p) {
  const auto cs = corners(p.grid());
  std::vector<double> out(cs.size());
  for (std::size_t c = 0; c < cs.size(); ++c) {
    double s = 0.0;
    for (int a = 0; a < 2; ++a) {
      const long f = cs[c].face[static_cast<std::size_t>(a)];
      if (f >= 0) {
        const double x = p.component(a)[static_cast<std::size_t>(f)];
        s += x * x;
      }
    }
    out[c] = std::sqrt(s);
  }
  return out;
}

std::vector<double> corner_mean(const ScalarField& beta) {
  const auto cs = corners(beta.grid());
  std::vector<double> out(cs.size());
  for (std::size_t c = 0; c < cs.size(); ++c) {
    double s = beta[cs[c].base];
    for (long nb : cs[c].neighbour)
      if (nb >= 0) s += beta[static_cast<std::size_t>(nb)];
    out[c] = s / cs[c].stencil_size;
  }
  return out;
}

std::vector<double> corner_mean_transpose(const Grid& grid, std::span<const double> corner_values) {
  const auto cs = corners(grid);
  if (corner_values.size() != cs.size()) {
    throw StructuralError("corner_mean_transpose: corner count mismatch");
  }
  std::vector<double> out(grid.cell_count(), 0.0);
  for (std::size_t c = 0; c < cs.size(); ++c) {
    const double w = corner_values[c] / cs[c].stencil_size;
    out[cs[c].base] += w;
    for (long nb : cs[c].neighbour)
      if (nb >= 0) out[static_cast<std::size_t>(nb)] += w;
  }
  return out;
}

}  // namespace kwc
