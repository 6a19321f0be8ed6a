#include "kwc/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "kwc/errors.hpp"

namespace kwc {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string expect_header(std::istream& in, const std::string& key) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) break;
  }
  const std::string prefix = "# " + key;
  if (line.rfind(prefix, 0) != 0) {
    throw StructuralError("snapshot: expected header '" + prefix + "', got '" + line + "'");
  }
  return line.substr(prefix.size());
}

double parse_double(const std::string& token) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    throw StructuralError("snapshot: bad number '" + token + "'");
  }
  if (pos != token.size()) throw StructuralError("snapshot: bad number '" + token + "'");
  return v;
}

}  // namespace

void write_snapshot(std::ostream& out, const ScalarField& field, double t) {
  const Grid& g = field.grid();
  out << "# dim " << g.dimension() << '\n';
  out << "# extents " << g.extent(0);
  if (g.dimension() == 2) out << ' ' << g.extent(1);
  out << '\n';
  out << "# dx " << format_double(g.dx()) << '\n';
  out << "# t " << format_double(t) << '\n';
  for (int j = 0; j < g.extent(1); ++j) {
    for (int i = 0; i < g.extent(0); ++i) {
      if (i) out << ' ';
      out << format_double(field.at(i, j));
    }
    out << '\n';
  }
}

Snapshot read_snapshot(std::istream& in) {
  const int dim = static_cast<int>(parse_double(expect_header(in, "dim").substr(1)));
  std::istringstream ext(expect_header(in, "extents"));
  std::array<int, 2> extents{0, 1};
  ext >> extents[0];
  if (dim == 2) ext >> extents[1];
  if (!ext) throw StructuralError("snapshot: bad extents header");
  const double dx = parse_double(expect_header(in, "dx").substr(1));
  const double t = parse_double(expect_header(in, "t").substr(1));
  Grid grid(dim, extents, dx);

  std::vector<double> values;
  values.reserve(grid.cell_count());
  std::string token;
  while (in >> token) values.push_back(parse_double(token));
  if (values.size() != grid.cell_count()) {
    throw StructuralError("snapshot: expected " + std::to_string(grid.cell_count()) +
                          " values, found " + std::to_string(values.size()));
  }
  return Snapshot{ScalarField(grid, std::move(values)), t};
}

void write_snapshot_file(const std::filesystem::path& path, const ScalarField& field, double t) {
  std::ofstream out(path);
  if (!out) throw StructuralError("snapshot: cannot open " + path.string() + " for writing");
  write_snapshot(out, field, t);
}

Snapshot read_snapshot_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("snapshot: cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace kwc
