#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ashll/errors.hpp"
#include "ashll/gas_state.hpp"

namespace ashll {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryKind {
  inflow,
  outflow,
  slip_wall,
  noslip_isothermal_wall,
  farfield,
  dmr_exact_top,
  periodic,
};

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::outflow;
  double wall_temperature = 0.0;  // noslip_isothermal_wall only
  double wall_u = 0.0;            // wall velocity for moving no-slip walls
  double wall_v = 0.0;
};

enum class Edge { i_min, i_max, j_min, j_max };

struct FaceGeometry {
  UnitNormal normal;  // points toward increasing grid index
  double length = 0.0;
  Point center;
  // length * normal, kept unrounded for the closure sum
  double sx = 0.0;
  double sy = 0.0;
};

/// Two-dimensional curvilinear structured grid of (ni+1) x (nj+1) nodes.
/// Cell (i, j) has corners (i,j), (i+1,j), (i+1,j+1), (i,j+1) in counterclockwise
/// order. "i-faces" have constant i and separate cells (i-1, j) and (i, j);
/// "j-faces" have constant j and separate cells (i, j-1) and (i, j).
class StructuredMesh {
 public:
  StructuredMesh() = default;
  StructuredMesh(int ni, int nj, std::vector<Point> nodes)
      : ni_(ni), nj_(nj), nodes_(std::move(nodes)) {
    if (ni < 1 || nj < 1) {
      throw std::invalid_argument("StructuredMesh: need at least one cell per direction");
    }
    if (nodes_.size() != static_cast<std::size_t>(ni + 1) * (nj + 1)) {
      throw std::invalid_argument("StructuredMesh: node count does not match dimensions");
    }
    boundary_[0].assign(nj, {});
    boundary_[1].assign(nj, {});
    boundary_[2].assign(ni, {});
    boundary_[3].assign(ni, {});
  }

  int ni() const noexcept { return ni_; }
  int nj() const noexcept { return nj_; }
  int cell_count() const noexcept { return ni_ * nj_; }

  const Point& node(int i, int j) const noexcept { return nodes_[node_offset(i, j)]; }
  Point& node(int i, int j) noexcept { return nodes_[node_offset(i, j)]; }

  bool has_metrics() const noexcept { return !areas_.empty(); }

  double area(int i, int j) const noexcept { return areas_[cell_offset(i, j)]; }
  Point center(int i, int j) const noexcept { return centers_[cell_offset(i, j)]; }

  /// i in [0, ni], j in [0, nj)
  const FaceGeometry& i_face(int i, int j) const noexcept {
    return i_faces_[static_cast<std::size_t>(j) * (ni_ + 1) + i];
  }
  /// i in [0, ni), j in [0, nj]
  const FaceGeometry& j_face(int i, int j) const noexcept {
    return j_faces_[static_cast<std::size_t>(j) * ni_ + i];
  }

  const std::vector<BoundaryCondition>& boundary(Edge e) const noexcept {
    return boundary_[static_cast<int>(e)];
  }
  std::vector<BoundaryCondition>& boundary(Edge e) noexcept {
    return boundary_[static_cast<int>(e)];
  }
  void set_boundary(Edge e, BoundaryCondition bc) {
    auto& faces = boundary(e);
    faces.assign(faces.size(), bc);
  }

  bool periodic_i() const noexcept {
    return boundary(Edge::i_min).front().kind == BoundaryKind::periodic;
  }
  bool periodic_j() const noexcept {
    return boundary(Edge::j_min).front().kind == BoundaryKind::periodic;
  }

  friend StructuredMesh compute_metrics(StructuredMesh mesh);

 private:
  std::size_t node_offset(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * (ni_ + 1) + i;
  }
  std::size_t cell_offset(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * ni_ + i;
  }

  int ni_ = 0;
  int nj_ = 0;
  std::vector<Point> nodes_;
  std::vector<double> areas_;
  std::vector<Point> centers_;
  std::vector<FaceGeometry> i_faces_;
  std::vector<FaceGeometry> j_faces_;
  std::vector<BoundaryCondition> boundary_[4];
};

namespace detail {

inline FaceGeometry make_face(const Point& a, const Point& b, bool rotate_clockwise) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  FaceGeometry f;
  f.sx = rotate_clockwise ? dy : -dy;
  f.sy = rotate_clockwise ? -dx : dx;
  f.length = std::hypot(dx, dy);
  f.normal = {f.sx / f.length, f.sy / f.length};
  f.center = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  return f;
}

}  // namespace detail

/// Fills face normals/lengths, cell areas (shoelace) and centers.
/// Throws DegenerateCell on any non-positive area or zero-length face.
inline StructuredMesh compute_metrics(StructuredMesh mesh) {
  const int ni = mesh.ni_;
  const int nj = mesh.nj_;
  mesh.areas_.assign(static_cast<std::size_t>(ni) * nj, 0.0);
  mesh.centers_.assign(static_cast<std::size_t>(ni) * nj, {});
  mesh.i_faces_.assign(static_cast<std::size_t>(ni + 1) * nj, {});
  mesh.j_faces_.assign(static_cast<std::size_t>(ni) * (nj + 1), {});

  for (int j = 0; j < nj; ++j) {
    for (int i = 0; i < ni; ++i) {
      const Point& p0 = mesh.node(i, j);
      const Point& p1 = mesh.node(i + 1, j);
      const Point& p2 = mesh.node(i + 1, j + 1);
      const Point& p3 = mesh.node(i, j + 1);
      const double area = 0.5 * ((p2.x - p0.x) * (p3.y - p1.y) - (p3.x - p1.x) * (p2.y - p0.y));
      if (!(area > 0.0)) {
        throw DegenerateCell("cell (" + std::to_string(i) + ", " + std::to_string(j) +
                                 ") has non-positive area",
                             {i, j});
      }
      mesh.areas_[mesh.cell_offset(i, j)] = area;
      mesh.centers_[mesh.cell_offset(i, j)] = {0.25 * (p0.x + p1.x + p2.x + p3.x),
                                               0.25 * (p0.y + p1.y + p2.y + p3.y)};
    }
  }
  for (int j = 0; j < nj; ++j) {
    for (int i = 0; i <= ni; ++i) {
      auto& f = mesh.i_faces_[static_cast<std::size_t>(j) * (ni + 1) + i];
      f = detail::make_face(mesh.node(i, j), mesh.node(i, j + 1), true);
      if (!(f.length > 0.0)) throw DegenerateCell("zero-length i-face", {i, j});
    }
  }
  for (int j = 0; j <= nj; ++j) {
    for (int i = 0; i < ni; ++i) {
      auto& f = mesh.j_faces_[static_cast<std::size_t>(j) * ni + i];
      f = detail::make_face(mesh.node(i, j), mesh.node(i + 1, j), false);
      if (!(f.length > 0.0)) throw DegenerateCell("zero-length j-face", {i, j});
    }
  }
  return mesh;
}

/// Sum of outward length-weighted normals of cell (i, j); zero for a closed cell.
inline Point closure_defect(const StructuredMesh& mesh, int i, int j) {
  const auto& w = mesh.i_face(i, j);
  const auto& e = mesh.i_face(i + 1, j);
  const auto& s = mesh.j_face(i, j);
  const auto& n = mesh.j_face(i, j + 1);
  return {(e.sx - w.sx) + (n.sx - s.sx), (e.sy - w.sy) + (n.sy - s.sy)};
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

enum class CylinderMeshKind { mesh_a, mesh_b };

namespace detail {

/// Symmetric parameter grid on [-eta_max, eta_max]; mirrored nodes get exactly
/// negated parameters.
inline double symmetric_eta(int j, int n_eta) {
  constexpr double eta_max = 2.0 * std::numbers::pi / 5.0;
  return eta_max * (static_cast<double>(2 * j - n_eta) / n_eta);
}

inline Point cylinder_point(CylinderMeshKind kind, double xi, double eta) {
  if (kind == CylinderMeshKind::mesh_a) {
    constexpr double a1 = 2.45;
    constexpr double a2 = 4.736;
    constexpr double a3 = 3.185;
    return {(1.0 - xi) * (a1 * std::cosh(eta) - a2) - xi * std::cos(eta),
            a3 * (1.0 - xi) * std::sinh(eta) + xi * std::sin(eta)};
  }
  const double r = 3.8 - 2.8 * xi;
  return {-r * std::cos(eta), r * std::sin(eta)};
}

template <class XiOf>
StructuredMesh cylinder_mesh(CylinderMeshKind kind, int n_xi, int n_eta, XiOf xi_of) {
  if (n_xi < 4 || n_eta < 4) {
    throw std::invalid_argument("cylinder mesh: n_xi and n_eta must be >= 4");
  }
  std::vector<Point> nodes(static_cast<std::size_t>(n_xi + 1) * (n_eta + 1));
  for (int j = 0; j <= n_eta; ++j) {
    const double eta = symmetric_eta(j, n_eta);
    for (int i = 0; i <= n_xi; ++i) {
      nodes[static_cast<std::size_t>(j) * (n_xi + 1) + i] = cylinder_point(kind, xi_of(i), eta);
    }
  }
  StructuredMesh mesh(n_xi, n_eta, std::move(nodes));
  mesh.set_boundary(Edge::i_min, {BoundaryKind::inflow});
  mesh.set_boundary(Edge::i_max, {BoundaryKind::slip_wall});
  mesh.set_boundary(Edge::j_min, {BoundaryKind::outflow});
  mesh.set_boundary(Edge::j_max, {BoundaryKind::outflow});
  return compute_metrics(std::move(mesh));
}

}  // namespace detail

/// Shock-aligned blunt-body grid. i = 0 is the outer boundary (xi = 1/2),
/// i = n_xi the unit cylinder (xi = 1); eta spans [-2pi/5, 2pi/5].
inline StructuredMesh generate_mesh_a(int n_xi, int n_eta) {
  return detail::cylinder_mesh(CylinderMeshKind::mesh_a, n_xi, n_eta, [n_xi](int i) {
    return 0.5 + 0.5 * static_cast<double>(i) / n_xi;
  });
}

/// Polar grid with radius 3.8 - 2.8 xi, same parameter ranges as Mesh-A.
inline StructuredMesh generate_mesh_b(int n_xi, int n_eta) {
  return detail::cylinder_mesh(CylinderMeshKind::mesh_b, n_xi, n_eta, [n_xi](int i) {
    return 0.5 + 0.5 * static_cast<double>(i) / n_xi;
  });
}

/// Wall-clustered xi = (81 - 41 exp(-s)) / 80 with s uniform on [0, ln 41].
inline double stretched_xi(int i, int n_xi) {
  const double s = std::log(41.0) * static_cast<double>(i) / n_xi;
  return (81.0 - 41.0 * std::exp(-s)) / 80.0;
}

inline StructuredMesh apply_viscous_stretching(CylinderMeshKind kind, int n_xi, int n_eta) {
  return detail::cylinder_mesh(kind, n_xi, n_eta,
                               [n_xi](int i) { return stretched_xi(i, n_xi); });
}

inline StructuredMesh generate_box(double x0, double x1, double y0, double y1, int nx, int ny) {
  if (!(x1 > x0) || !(y1 > y0)) {
    throw std::invalid_argument("generate_box: empty extent");
  }
  std::vector<Point> nodes(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    const double y = (j == ny) ? y1 : y0 + (y1 - y0) * static_cast<double>(j) / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? x1 : x0 + (x1 - x0) * static_cast<double>(i) / nx;
      nodes[static_cast<std::size_t>(j) * (nx + 1) + i] = {x, y};
    }
  }
  return compute_metrics(StructuredMesh(nx, ny, std::move(nodes)));
}

/// Full circular O-grid around the unit cylinder: i = 0 on r = r_outer,
/// i = n_radial on the wall, radii geometric; j wraps around the cylinder
/// (periodic), with the seam on the downstream axis.
inline StructuredMesh generate_o_mesh(int n_radial, int n_circ, double r_outer) {
  if (n_radial < 4 || n_circ < 4 || !(r_outer > 1.0)) {
    throw std::invalid_argument("generate_o_mesh: bad parameters");
  }
  std::vector<Point> nodes(static_cast<std::size_t>(n_radial + 1) * (n_circ + 1));
  const double growth = std::log(r_outer) / n_radial;
  for (int j = 0; j <= n_circ; ++j) {
    const int jj = j % n_circ;
    // eta measured from the upstream stagnation point, seam at eta = pi
    const double eta = -std::numbers::pi + 2.0 * std::numbers::pi * jj / n_circ;
    for (int i = 0; i <= n_radial; ++i) {
      const double r = (i == n_radial) ? 1.0 : std::exp(growth * (n_radial - i));
      nodes[static_cast<std::size_t>(j) * (n_radial + 1) + i] = {-r * std::cos(eta),
                                                                 r * std::sin(eta)};
    }
  }
  StructuredMesh mesh(n_radial, n_circ, std::move(nodes));
  mesh.set_boundary(Edge::i_min, {BoundaryKind::farfield});
  mesh.set_boundary(Edge::i_max, {BoundaryKind::slip_wall});
  mesh.set_boundary(Edge::j_min, {BoundaryKind::periodic});
  mesh.set_boundary(Edge::j_max, {BoundaryKind::periodic});
  return compute_metrics(std::move(mesh));
}

}  // namespace ashll
