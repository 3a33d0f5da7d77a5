/// @file snapshot.hpp
/// @brief Binary field snapshots and CSV table output.
///
/// Snapshot layout (little-endian):
///   bytes 0..7   magic "TNSNAP01"
///   u32          dim
///   u32          n (points per axis)
///   u32          ncomp
///   u32          reserved (0)
///   f64          sample time
///   f64[ncomp * n^dim]  component-major field data
/// CSV values are written with 17 significant digits so rewritten runs are
/// bit-comparable.
#pragma once

#include <string>
#include <vector>

#include "tns/field.hpp"
#include "tns/grid.hpp"

namespace tns {

void write_snapshot(const std::string& path, const Grid& g, const Field& f, real time);

struct Snapshot {
  int dim = 0;
  int n = 0;
  int ncomp = 0;
  real time = 0.0;
  std::vector<real> data;
};

/// Read and validate a snapshot; throws invalid_parameter on mismatch.
Snapshot read_snapshot(const std::string& path);

/// Largest absolute entry difference between two snapshots of equal shape.
real snapshot_max_diff(const Snapshot& a, const Snapshot& b);

/// Write a CSV table (header row + numeric rows, %.17g formatting).
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<real>>& rows);

}  // namespace tns
