#pragma once

#include <filesystem>
#include <iosfwd>

#include "kwc/grid.hpp"

namespace kwc {

struct Snapshot {
  ScalarField field;
  double t = 0.0;
};

// Plain-text field snapshot:
//   # dim <d>
//   # extents <n0> [<n1>]
//   # dx <dx>
//   # t <t>
// followed by n1 rows (one per grid row along axis 1) of n0 space-separated
// values printed with 17 significant digits, which round-trips doubles.
void write_snapshot(std::ostream& out, const ScalarField& field, double t);
Snapshot read_snapshot(std::istream& in);

void write_snapshot_file(const std::filesystem::path& path, const ScalarField& field, double t);
Snapshot read_snapshot_file(const std::filesystem::path& path);

}  // namespace kwc
