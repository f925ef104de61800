#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ashll/errors.hpp"
#include "ashll/field.hpp"
#include "ashll/gas_state.hpp"
#include "ashll/mesh.hpp"
#include "ashll/solver.hpp"

namespace ashll {

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// RFC 4180 field quoting.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

inline void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// VTK
// ---------------------------------------------------------------------------

/// Legacy ASCII structured grid with cell data rho, u, v, p, mach.
inline void write_vtk(const std::filesystem::path& path, const StructuredMesh& mesh,
                      const CellField<PrimitiveState>& w, const GasModel& gas) {
  auto out = open_for_write(path);
  const int ni = mesh.ni();
  const int nj = mesh.nj();
  out << "# vtk DataFile Version 3.0\nashll\nASCII\nDATASET STRUCTURED_GRID\n";
  out << "DIMENSIONS " << ni + 1 << ' ' << nj + 1 << " 1\n";
  out << "POINTS " << (ni + 1) * (nj + 1) << " double\n";
  for (int j = 0; j <= nj; ++j) {
    for (int i = 0; i <= ni; ++i) {
      const auto& p = mesh.node(i, j);
      out << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
    }
  }
  out << "CELL_DATA " << ni * nj << '\n';
  auto scalar = [&](const char* name, auto&& value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < nj; ++j) {
      for (int i = 0; i < ni; ++i) out << format_double(value(w(i, j))) << '\n';
    }
  };
  scalar("rho", [](const PrimitiveState& s) { return s.rho; });
  scalar("u", [](const PrimitiveState& s) { return s.u; });
  scalar("v", [](const PrimitiveState& s) { return s.v; });
  scalar("p", [](const PrimitiveState& s) { return s.p; });
  scalar("mach", [&](const PrimitiveState& s) { return mach_number(s, gas); });
  finish_write(out, path);
}

// ---------------------------------------------------------------------------
// CSV extracts
// ---------------------------------------------------------------------------

struct CsvRow {
  double x = 0.0, y = 0.0, rho = 0.0, u = 0.0, v = 0.0, p = 0.0, mach = 0.0;
  bool operator==(const CsvRow&) const = default;
};

inline constexpr std::string_view kCsvHeader = "x,y,rho,u,v,p,mach";

inline CsvRow make_row(Point c, const PrimitiveState& s, const GasModel& gas) {
  return {c.x, c.y, s.rho, s.u, s.v, s.p, mach_number(s, gas)};
}

/// Cells along i at fixed j (`along_i`) or along j at fixed i.
inline std::vector<CsvRow> line_extract(const StructuredMesh& mesh,
                                        const CellField<PrimitiveState>& w, const GasModel& gas,
                                        bool along_i, int fixed) {
  std::vector<CsvRow> rows;
  if (along_i) {
    for (int i = 0; i < mesh.ni(); ++i) rows.push_back(make_row(mesh.center(i, fixed), w(i, fixed), gas));
  } else {
    for (int j = 0; j < mesh.nj(); ++j) rows.push_back(make_row(mesh.center(fixed, j), w(fixed, j), gas));
  }
  return rows;
}

inline void write_csv(const std::filesystem::path& path, const std::vector<CsvRow>& rows) {
  auto out = open_for_write(path);
  out << kCsvHeader << "\r\n";
  for (const auto& r : rows) {
    out << format_double(r.x) << ',' << format_double(r.y) << ',' << format_double(r.rho) << ','
        << format_double(r.u) << ',' << format_double(r.v) << ',' << format_double(r.p) << ','
        << format_double(r.mach) << "\r\n";
  }
  finish_write(out, path);
}

inline std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::vector<CsvRow> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      if (line != kCsvHeader) throw IoError("unexpected CSV header in " + path.string());
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::array<double, 7> v{};
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= v.size()) throw IoError("too many columns in " + path.string());
      // strtod rather than stod: subnormals must parse, not throw
      char* end = nullptr;
      const double value = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw IoError("bad number '" + cell + "' in " + path.string());
      }
      v[k++] = value;
    }
    if (k != v.size()) throw IoError("too few columns in " + path.string());
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return rows;
}

inline void write_history_csv(const std::filesystem::path& path,
                              const std::vector<HistoryEntry>& history) {
  auto out = open_for_write(path);
  out << "iteration,time,dt,res_rho,res_rhou,res_rhov,res_rhoE\r\n";
  for (const auto& h : history) {
    out << h.iteration << ',' << format_double(h.time) << ',' << format_double(h.dt);
    for (double r : h.residual_l2) out << ',' << format_double(r);
    out << "\r\n";
  }
  finish_write(out, path);
}

/// field.vtk plus two line extracts: centerline.csv (along i at j = nj/2)
/// and wall.csv (along j next to the i = ni boundary).
inline void write_outputs(const FieldSnapshot& snap, const StructuredMesh& mesh,
                          const GasModel& gas, const std::filesystem::path& dir) {
  const auto w = primitives(snap.cells, gas);
  write_vtk(dir / "field.vtk", mesh, w, gas);
  write_csv(dir / "centerline.csv", line_extract(mesh, w, gas, true, mesh.nj() / 2));
  write_csv(dir / "wall.csv", line_extract(mesh, w, gas, false, mesh.ni() - 1));
}

}  // namespace ashll
