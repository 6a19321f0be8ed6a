#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "kwc/errors.hpp"
#include "kwc/grid.hpp"
#include "kwc/snapshot.hpp"

using namespace kwc;

namespace {

ScalarField random_field(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<double> v(g.cell_count());
  for (auto& x : v) x = d(rng);
  return ScalarField(g, v);
}

FaceVectorField random_faces(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::array<std::vector<double>, 2> c;
  for (int a = 0; a < g.dimension(); ++a) {
    c[static_cast<std::size_t>(a)].resize(g.face_count(a));
    for (auto& x : c[static_cast<std::size_t>(a)]) x = d(rng);
  }
  return FaceVectorField(g, c);
}

// Plain loops over the index formulas, without the library's operators.
double brute_grad_dot(const ScalarField& v, const FaceVectorField& p) {
  const Grid& g = v.grid();
  const int n0 = g.extent(0), n1 = g.extent(1);
  double s = 0.0;
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i + 1 < n0; ++i)
      s += (v.at(i + 1, j) - v.at(i, j)) / g.dx() * p.component(0)[static_cast<std::size_t>(j * (n0 - 1) + i)];
  if (g.dimension() == 2)
    for (int j = 0; j + 1 < n1; ++j)
      for (int i = 0; i < n0; ++i)
        s += (v.at(i, j + 1) - v.at(i, j)) / g.dx() * p.component(1)[static_cast<std::size_t>(j * n0 + i)];
  return s * g.cell_volume();
}

}  // namespace

TEST_CASE("gradient examples") {
  const Grid g = Grid::line(4, 0.25);
  const auto p = gradient(ScalarField(g, {0, 0, 1, 1}));
  REQUIRE(p.component(0).size() == 3);
  CHECK(p.component(0)[0] == 0.0);
  CHECK(p.component(0)[1] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(p.component(0)[2] == 0.0);

  const Grid g2 = Grid::rectangle(5, 3, 0.1);
  const auto q = gradient(ScalarField(g2, 2.5));
  for (int a = 0; a < 2; ++a)
    for (double x : q.component(a)) CHECK(x == 0.0);

  const Grid g3 = Grid::line(10, 0.1);
  std::vector<double> lin(10);
  for (int i = 0; i < 10; ++i) lin[static_cast<std::size_t>(i)] = i * 0.1;
  const auto pl = gradient(ScalarField(g3, lin));
  for (double x : pl.component(0)) CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("divergence is the negative adjoint of gradient") {
  std::mt19937_64 rng(3);
  const Grid g = Grid::line(5, 0.2);
  const auto z = divergence(FaceVectorField(g));
  for (std::size_t k = 0; k < z.size(); ++k) CHECK(z[k] == 0.0);
  for (const Grid& grid : {g, Grid::rectangle(7, 4, 0.3), Grid::rectangle(32, 32, 1.0 / 32)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto v = random_field(grid, rng);
      const auto p = random_faces(grid, rng);
      const double lhs = brute_grad_dot(v, p);
      const double rhs = -inner(v, divergence(p));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
      CHECK(std::abs(inner(gradient(v), p) - lhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("integrate") {
  CHECK(integrate(ScalarField(Grid::rectangle(4, 4, 0.25), 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(integrate(ScalarField(Grid::rectangle(4, 4, 0.25), 0.0)) == 0.0);
  CHECK(integrate(ScalarField(Grid::line(4, 1.0), {1, 2, 3, 4})) == 10.0);
  std::mt19937_64 rng(5);
  const Grid g = Grid::rectangle(6, 5, 0.2);
  CHECK(std::abs(integrate(divergence(random_faces(g, rng)))) < 1e-12);
}

TEST_CASE("neumann laplacian") {
  const Grid g = Grid::line(12, 0.1);
  const auto zero = neumann_laplacian(ScalarField(g, 3.0));
  for (std::size_t k = 0; k < zero.size(); ++k) CHECK(zero[k] == doctest::Approx(0.0));
  std::vector<double> lin(12), quad(12);
  for (int i = 0; i < 12; ++i) {
    lin[static_cast<std::size_t>(i)] = 2.0 * i * 0.1 - 1.0;
    quad[static_cast<std::size_t>(i)] = (i * 0.1) * (i * 0.1);
  }
  const auto l = neumann_laplacian(ScalarField(g, lin));
  const auto q = neumann_laplacian(ScalarField(g, quad));
  for (std::size_t k = 1; k + 1 < 12; ++k) {
    CHECK(std::abs(l[k]) < 1e-10);
    CHECK(q[k] == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("norms") {
  const Grid g = Grid::line(4, 0.25);
  const ScalarField v(g, {0, 0, 1, 1});
  CHECK(l2_norm_sq(v) == doctest::Approx(0.5));
  CHECK(h1_norm_sq(v) == doctest::Approx(0.5 + 16.0 * 0.25));
}

TEST_CASE("corners") {
  const Grid g = Grid::rectangle(3, 2, 1.0);
  const auto cs = corners(g);
  std::size_t faces = 0;
  for (const auto& c : cs) {
    for (int a = 0; a < 2; ++a) faces += c.face[static_cast<std::size_t>(a)] >= 0 ? 1 : 0;
    CHECK(c.stencil_size >= 2);
  }
  CHECK(faces == g.face_count(0) + g.face_count(1));

  std::mt19937_64 rng(11);
  const auto beta = random_field(g, rng);
  std::vector<double> w(cs.size());
  for (auto& x : w) x = std::uniform_real_distribution<double>(-1, 1)(rng);
  const auto mean = corner_mean(beta);
  const auto tr = corner_mean_transpose(g, w);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t c = 0; c < w.size(); ++c) lhs += w[c] * mean[c];
  for (std::size_t k = 0; k < beta.size(); ++k) rhs += tr[k] * beta[k];
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("grid mismatch is a structural error") {
  const ScalarField a(Grid::line(4, 0.25));
  const FaceVectorField p(Grid::line(5, 0.25));
  CHECK_THROWS_AS(inner(a, ScalarField(Grid::line(5, 0.25))), StructuralError);
  CHECK_THROWS_AS(ScalarField(Grid::line(4, 0.25), std::vector<double>{1, 2}), StructuralError);
  CHECK_THROWS_AS(Grid(3, {2, 2}, 1.0), StructuralError);
  CHECK(divergence(p).size() == 5);
}

TEST_CASE("snapshot round trip is exact") {
  std::mt19937_64 rng(17);
  const Grid g = Grid::rectangle(5, 3, 1.0 / 3.0);
  const auto v = random_field(g, rng);
  std::stringstream ss;
  write_snapshot(ss, v, 0.1 + 0.2);
  const auto s = read_snapshot(ss);
  CHECK(s.field == v);
  CHECK(s.t == 0.1 + 0.2);

  std::stringstream bad("# dim 1\n# extents 3\n# dx 0.5\n# t 0\n1 2\n");
  CHECK_THROWS_AS(read_snapshot(bad), StructuralError);
}
