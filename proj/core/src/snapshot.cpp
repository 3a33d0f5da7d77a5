#include "tns/snapshot.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace tns {

namespace {

constexpr char kMagic[8] = {'T', 'N', 'S', 'N', 'A', 'P', '0', '1'};

void put_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::ifstream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const Grid& g, const Field& f, real time) {
  if (f.npts != g.size()) throw invalid_parameter("write_snapshot: field/grid size mismatch");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw invalid_parameter("write_snapshot: cannot open '" + path + "'");
  out.write(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(g.dim()));
  put_u32(out, static_cast<std::uint32_t>(g.n()));
  put_u32(out, static_cast<std::uint32_t>(f.ncomp));
  put_u32(out, 0u);
  out.write(reinterpret_cast<const char*>(&time), sizeof time);
  out.write(reinterpret_cast<const char*>(f.data.data()),
            static_cast<std::streamsize>(f.data.size() * sizeof(real)));
  if (!out) throw invalid_parameter("write_snapshot: write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_parameter("read_snapshot: cannot open '" + path + "'");
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw invalid_parameter("read_snapshot: '" + path + "' is not a snapshot file");
  Snapshot s;
  s.dim = static_cast<int>(get_u32(in));
  s.n = static_cast<int>(get_u32(in));
  s.ncomp = static_cast<int>(get_u32(in));
  const std::uint32_t reserved = get_u32(in);
  in.read(reinterpret_cast<char*>(&s.time), sizeof s.time);
  if (!in || reserved != 0 || s.dim < 2 || s.dim > 3 || s.n < 4 || s.ncomp < 1)
    throw invalid_parameter("read_snapshot: corrupt header in '" + path + "'");
  index_t npts = 1;
  for (int a = 0; a < s.dim; ++a) npts *= s.n;
  s.data.resize(static_cast<std::size_t>(npts) * s.ncomp);
  in.read(reinterpret_cast<char*>(s.data.data()),
          static_cast<std::streamsize>(s.data.size() * sizeof(real)));
  if (!in) throw invalid_parameter("read_snapshot: truncated data in '" + path + "'");
  return s;
}

real snapshot_max_diff(const Snapshot& a, const Snapshot& b) {
  if (a.dim != b.dim || a.n != b.n || a.ncomp != b.ncomp)
    throw invalid_parameter("snapshot_max_diff: shape mismatch");
  real worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  return worst;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<real>>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw invalid_parameter("write_csv: cannot open '" + path + "'");
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ",";
    out << columns[c];
  }
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw invalid_parameter("write_csv: row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      out << format_real(row[c]);
    }
    out << "\n";
  }
  if (!out) throw invalid_parameter("write_csv: write failed for '" + path + "'");
}

}  // namespace tns
