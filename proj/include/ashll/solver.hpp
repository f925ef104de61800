#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ashll/allspeed.hpp"
#include "ashll/errors.hpp"
#include "ashll/field.hpp"
#include "ashll/gas_state.hpp"
#include "ashll/mesh.hpp"
#include "ashll/parallel.hpp"
#include "ashll/reconstruction.hpp"
#include "ashll/riemann_core.hpp"

namespace ashll {

// ---------------------------------------------------------------------------
// Configuration and snapshot
// ---------------------------------------------------------------------------

enum class TimeMode { global_dt, local_dt };

struct StopCriterion {
  std::optional<double> final_time;
  std::optional<long> max_iters;
  /// Orders of magnitude of density-residual L2 reduction relative to its
  /// peak over the run so far.
  std::optional<double> residual_drop;
  /// Absolute level that counts as converged when every equation's residual
  /// is below it.
  double residual_floor = 1e-12;
};

/// Straight shock line moving into quiescent gas; feeds the top boundary of
/// the double Mach reflection. The foot sits at x0 on y = 0 at t = 0.
struct ShockLineBoundary {
  double x0 = 1.0 / 6.0;
  double angle_deg = 60.0;
  double normal_speed = 10.0;
  PrimitiveState pre;
  PrimitiveState post;

  double shock_x(double y, double t) const noexcept {
    const double angle = angle_deg * std::numbers::pi / 180.0;
    return x0 + (y + normal_speed * t / std::cos(angle)) / std::tan(angle);
  }
};

struct SolverConfig {
  FluxScheme scheme = FluxScheme::hllc;
  LimiterKind limiter = LimiterKind::first_order;
  double kappa = 1.0 / 3.0;
  double cfl = 0.5;
  TimeMode time_mode = TimeMode::global_dt;
  int rk_order = 1;
  bool viscous = false;
  GasModel gas;
  StopCriterion stop;
  PrimitiveState freestream;  // inflow and farfield state
  std::optional<ShockLineBoundary> shock_line;
  int threads = 1;

  void validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must be in (0, 1]");
    if (rk_order < 1 || rk_order > 3) throw ConfigError("rk_order must be 1, 2 or 3");
    if (!(gas.gamma > 1.0)) throw ConfigError("gamma must exceed 1");
    if (kappa < -1.0 || kappa >= 1.0) throw ConfigError("kappa must be in [-1, 1)");
    if (time_mode == TimeMode::local_dt && stop.final_time) {
      throw ConfigError("local time stepping is only valid for steady runs");
    }
    if (!stop.final_time && !stop.max_iters && !stop.residual_drop) {
      throw ConfigError("no stop criterion");
    }
  }
};

struct FieldSnapshot {
  CellField<ConservedState> cells;  // ghost entries unused
  double time = 0.0;
  long iteration = 0;
  std::array<double, 4> residual_l2{};
};

template <class Init>
FieldSnapshot make_snapshot(const StructuredMesh& mesh, Init&& init, const GasModel& gas) {
  FieldSnapshot s;
  s.cells = CellField<ConservedState>(mesh.ni(), mesh.nj());
  for (int j = 0; j < mesh.nj(); ++j) {
    for (int i = 0; i < mesh.ni(); ++i) {
      s.cells(i, j) = primitive_to_conserved(init(mesh.center(i, j)), gas);
    }
  }
  return s;
}

/// Interior primitives; throws NonPhysicalState tagged with the cell index.
inline CellField<PrimitiveState> primitives(const CellField<ConservedState>& cells,
                                            const GasModel& gas) {
  CellField<PrimitiveState> w(cells.ni(), cells.nj());
  for (int j = 0; j < cells.nj(); ++j) {
    for (int i = 0; i < cells.ni(); ++i) {
      try {
        w(i, j) = conserved_to_primitive(cells(i, j), gas);
      } catch (const NonPhysicalState& e) {
        throw NonPhysicalState(std::string(e.what()) + " in cell (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ")",
                               CellIndex{i, j});
      }
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Boundary conditions
// ---------------------------------------------------------------------------

/// Characteristic farfield from the 1D Riemann invariants normal to the face.
/// Supersonic faces take the freestream (inflow) or the interior (outflow).
inline PrimitiveState farfield_state(const PrimitiveState& in, const PrimitiveState& inf,
                                     UnitNormal n, const GasModel& gas) {
  const double g = gas.gamma;
  const double q_in = normal_velocity(in, n);
  const double q_inf = normal_velocity(inf, n);
  const double a_in = sound_speed(in, gas);
  const double a_inf = sound_speed(inf, gas);
  if (q_inf <= -a_inf) return inf;
  if (q_in >= a_in) return in;

  const double r_out = q_in + 2.0 * a_in / (g - 1.0);
  const double r_in = q_inf - 2.0 * a_inf / (g - 1.0);
  const double q = 0.5 * (r_out + r_in);
  const double a = 0.25 * (g - 1.0) * (r_out - r_in);
  const PrimitiveState& donor = (q < 0.0) ? inf : in;
  const double entropy = donor.p / std::pow(donor.rho, g);
  const double rho = std::pow(a * a / (g * entropy), 1.0 / (g - 1.0));
  const double q_donor = normal_velocity(donor, n);
  return {rho, donor.u + (q - q_donor) * n.nx, donor.v + (q - q_donor) * n.ny, rho * a * a / g};
}

/// Ghost state across a boundary face with outward unit normal `n`.
inline PrimitiveState ghost_state(const BoundaryCondition& bc, const PrimitiveState& in,
                                  UnitNormal n, Point face_center, const SolverConfig& config,
                                  double time) {
  switch (bc.kind) {
    case BoundaryKind::inflow:
      return config.freestream;
    case BoundaryKind::outflow:
    case BoundaryKind::periodic:
      return in;
    case BoundaryKind::slip_wall: {
      const double q = normal_velocity(in, n);
      return {in.rho, in.u - 2.0 * q * n.nx, in.v - 2.0 * q * n.ny, in.p};
    }
    case BoundaryKind::noslip_isothermal_wall: {
      const double t_in = temperature(in, config.gas);
      double t_ghost = 2.0 * bc.wall_temperature - t_in;
      if (!(t_ghost > 0.0)) t_ghost = bc.wall_temperature;
      return {in.p / (config.gas.gas_constant * t_ghost), 2.0 * bc.wall_u - in.u,
              2.0 * bc.wall_v - in.v, in.p};
    }
    case BoundaryKind::farfield:
      return farfield_state(in, config.freestream, n, config.gas);
    case BoundaryKind::dmr_exact_top: {
      if (!config.shock_line) throw ConfigError("dmr_exact_top requires a shock line");
      const auto& s = *config.shock_line;
      return (face_center.x < s.shock_x(face_center.y, time)) ? s.post : s.pre;
    }
  }
  return in;
}

/// Fills the ghost ring of `w` (interior already set), corners included.
inline void apply_boundaries(CellField<PrimitiveState>& w, const StructuredMesh& mesh,
                             const SolverConfig& config, double time) {
  const int ni = mesh.ni();
  const int nj = mesh.nj();
  const bool wrap_i = mesh.periodic_i();
  const bool wrap_j = mesh.periodic_j();

  if (!wrap_i) {
    for (int j = 0; j < nj; ++j) {
      const auto& fw = mesh.i_face(0, j);
      w(-1, j) = ghost_state(mesh.boundary(Edge::i_min)[j], w(0, j), -fw.normal, fw.center,
                             config, time);
      const auto& fe = mesh.i_face(ni, j);
      w(ni, j) = ghost_state(mesh.boundary(Edge::i_max)[j], w(ni - 1, j), fe.normal, fe.center,
                             config, time);
    }
  }
  if (!wrap_j) {
    for (int i = 0; i < ni; ++i) {
      const auto& fs = mesh.j_face(i, 0);
      w(i, -1) = ghost_state(mesh.boundary(Edge::j_min)[i], w(i, 0), -fs.normal, fs.center,
                             config, time);
      const auto& fn = mesh.j_face(i, nj);
      w(i, nj) = ghost_state(mesh.boundary(Edge::j_max)[i], w(i, nj - 1), fn.normal, fn.center,
                             config, time);
    }
  } else {
    for (int i = 0; i < ni; ++i) {
      w(i, -1) = w(i, nj - 1);
      w(i, nj) = w(i, 0);
    }
  }
  if (wrap_i) {
    for (int j = -1; j <= nj; ++j) {
      w(-1, j) = w(ni - 1, j);
      w(ni, j) = w(0, j);
    }
    return;
  }
  if (wrap_j) {
    w(-1, -1) = w(-1, nj - 1);
    w(-1, nj) = w(-1, 0);
    w(ni, -1) = w(ni, nj - 1);
    w(ni, nj) = w(ni, 0);
    return;
  }
  auto average = [](const PrimitiveState& a, const PrimitiveState& b) {
    return PrimitiveState{0.5 * (a.rho + b.rho), 0.5 * (a.u + b.u), 0.5 * (a.v + b.v),
                          0.5 * (a.p + b.p)};
  };
  w(-1, -1) = average(w(-1, 0), w(0, -1));
  w(ni, -1) = average(w(ni, 0), w(ni - 1, -1));
  w(-1, nj) = average(w(-1, nj - 1), w(0, nj));
  w(ni, nj) = average(w(ni, nj - 1), w(ni - 1, nj));
}

/// Cell centers including ghosts; a ghost center is the point reflection of
/// its interior neighbor through the boundary face center (corners through
/// the corner node).
inline CellField<Point> centers_with_ghosts(const StructuredMesh& mesh) {
  const int ni = mesh.ni();
  const int nj = mesh.nj();
  CellField<Point> c(ni, nj);
  for (int j = 0; j < nj; ++j) {
    for (int i = 0; i < ni; ++i) c(i, j) = mesh.center(i, j);
  }
  auto reflect = [](Point p, Point about) { return Point{2.0 * about.x - p.x, 2.0 * about.y - p.y}; };
  for (int j = 0; j < nj; ++j) {
    c(-1, j) = reflect(c(0, j), mesh.i_face(0, j).center);
    c(ni, j) = reflect(c(ni - 1, j), mesh.i_face(ni, j).center);
  }
  for (int i = 0; i < ni; ++i) {
    c(i, -1) = reflect(c(i, 0), mesh.j_face(i, 0).center);
    c(i, nj) = reflect(c(i, nj - 1), mesh.j_face(i, nj).center);
  }
  c(-1, -1) = reflect(c(0, 0), mesh.node(0, 0));
  c(ni, -1) = reflect(c(ni - 1, 0), mesh.node(ni, 0));
  c(-1, nj) = reflect(c(0, nj - 1), mesh.node(0, nj));
  c(ni, nj) = reflect(c(ni - 1, nj - 1), mesh.node(ni, nj));
  return c;
}

// ---------------------------------------------------------------------------
// Viscous flux
// ---------------------------------------------------------------------------

struct FaceRef {
  bool is_i_face = true;
  int i = 0;
  int j = 0;
};

namespace detail {

struct VelocityTemperature {
  double u = 0.0;
  double v = 0.0;
  double T = 0.0;
};

inline VelocityTemperature vt_of(const PrimitiveState& w, const GasModel& gas) noexcept {
  return {w.u, w.v, temperature(w, gas)};
}

inline VelocityTemperature node_average(const CellField<PrimitiveState>& w, int i, int j,
                                        const GasModel& gas) noexcept {
  // node (i, j) is shared by cells (i-1, j-1), (i, j-1), (i-1, j), (i, j)
  const auto a = vt_of(w(i - 1, j - 1), gas);
  const auto b = vt_of(w(i, j - 1), gas);
  const auto c = vt_of(w(i - 1, j), gas);
  const auto d = vt_of(w(i, j), gas);
  return {0.25 * ((a.u + b.u) + (c.u + d.u)), 0.25 * ((a.v + b.v) + (c.v + d.v)),
          0.25 * ((a.T + b.T) + (c.T + d.T))};
}

struct Gradients {
  double ux = 0.0, uy = 0.0, vx = 0.0, vy = 0.0, tx = 0.0, ty = 0.0;
};

/// Green-Gauss gradient over a counterclockwise quadrilateral. Values are
/// taken relative to the first vertex so a constant field gives exactly zero.
inline Gradients diamond_gradients(const std::array<Point, 4>& p,
                                   const std::array<VelocityTemperature, 4>& f) noexcept {
  Gradients g;
  double area2 = 0.0;
  const auto& ref = f[0];
  for (int k = 0; k < 4; ++k) {
    const int m = (k + 1) % 4;
    const double sx = p[m].y - p[k].y;
    const double sy = -(p[m].x - p[k].x);
    const double u = 0.5 * ((f[k].u - ref.u) + (f[m].u - ref.u));
    const double v = 0.5 * ((f[k].v - ref.v) + (f[m].v - ref.v));
    const double t = 0.5 * ((f[k].T - ref.T) + (f[m].T - ref.T));
    g.ux += u * sx;
    g.uy += u * sy;
    g.vx += v * sx;
    g.vy += v * sy;
    g.tx += t * sx;
    g.ty += t * sy;
    area2 += p[k].x * p[m].y - p[m].x * p[k].y;
  }
  const double inv = 2.0 / area2;
  g.ux *= inv;
  g.uy *= inv;
  g.vx *= inv;
  g.vy *= inv;
  g.tx *= inv;
  g.ty *= inv;
  return g;
}

}  // namespace detail

/// Newtonian stress (Stokes hypothesis) and Fourier heat flux on one face,
/// per unit length, oriented along the face normal. Gradients come from a
/// Green-Gauss central difference over the diamond spanned by the two cell
/// centers and the two face end nodes; node values average the four
/// surrounding cells. The convective residual subtracts this vector.
inline FluxVector viscous_face_flux(const CellField<PrimitiveState>& w,
                                    const CellField<Point>& centers, const StructuredMesh& mesh,
                                    FaceRef face, const GasModel& gas) {
  const int i = face.i;
  const int j = face.j;
  std::array<Point, 4> p;
  std::array<detail::VelocityTemperature, 4> f;
  PrimitiveState left;
  PrimitiveState right;
  UnitNormal n;
  if (face.is_i_face) {
    left = w(i - 1, j);
    right = w(i, j);
    n = mesh.i_face(i, j).normal;
    p = {centers(i - 1, j), mesh.node(i, j), centers(i, j), mesh.node(i, j + 1)};
    f = {detail::vt_of(left, gas), detail::node_average(w, i, j, gas), detail::vt_of(right, gas),
         detail::node_average(w, i, j + 1, gas)};
  } else {
    left = w(i, j - 1);
    right = w(i, j);
    n = mesh.j_face(i, j).normal;
    p = {centers(i, j - 1), mesh.node(i + 1, j), centers(i, j), mesh.node(i, j)};
    f = {detail::vt_of(left, gas), detail::node_average(w, i + 1, j, gas),
         detail::vt_of(right, gas), detail::node_average(w, i, j, gas)};
  }
  const auto g = detail::diamond_gradients(p, f);

  const double u = 0.5 * (left.u + right.u);
  const double v = 0.5 * (left.v + right.v);
  const double t_face = 0.5 * (temperature(left, gas) + temperature(right, gas));
  const double mu = gas.dynamic_viscosity(t_face);
  const double k = gas.conductivity(mu);

  const double div = g.ux + g.vy;
  const double txx = mu * (2.0 * g.ux - (2.0 / 3.0) * div);
  const double tyy = mu * (2.0 * g.vy - (2.0 / 3.0) * div);
  const double txy = mu * (g.uy + g.vx);
  return {0.0, txx * n.nx + txy * n.ny, txy * n.nx + tyy * n.ny,
          (u * txx + v * txy + k * g.tx) * n.nx + (u * txy + v * tyy + k * g.ty) * n.ny};
}

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

/// One stage of the Shu-Osher TVD Runge-Kutta schemes:
/// u <- w_old u^n + w_new (u + dt L(u, t^n + input_time dt)).
struct RkStage {
  double w_old = 0.0;
  double w_new = 1.0;
  double input_time = 0.0;
};

inline std::span<const RkStage> tvd_rk_stages(int order) {
  static constexpr RkStage euler[] = {{0.0, 1.0, 0.0}};
  static constexpr RkStage rk2[] = {{0.0, 1.0, 0.0}, {0.5, 0.5, 1.0}};
  static constexpr RkStage rk3[] = {{0.0, 1.0, 0.0}, {0.75, 0.25, 1.0}, {1.0 / 3.0, 2.0 / 3.0, 0.5}};
  switch (order) {
    case 1: return euler;
    case 2: return rk2;
    case 3: return rk3;
  }
  throw ConfigError("rk_order must be 1, 2 or 3");
}

struct HistoryEntry {
  long iteration = 0;
  double time = 0.0;
  double dt = 0.0;
  std::array<double, 4> residual_l2{};
};

struct RunResult {
  FieldSnapshot snapshot;  // last valid state
  std::vector<HistoryEntry> history;
  bool failed = false;
  bool converged = false;
  std::string failure;
};

/// Semi-discrete residual dU/dt = -(1/|Omega|) sum |Gamma| (F_c - F_v) and
/// explicit Runge-Kutta stepping on a fixed mesh. Holds scratch buffers; the
/// mesh must outlive the solver.
class Solver {
 public:
  Solver(const StructuredMesh& mesh, SolverConfig config)
      : mesh_(&mesh),
        config_(std::move(config)),
        w_(mesh.ni(), mesh.nj()),
        pressure_(mesh.ni(), mesh.nj(), 1.0),
        rate_(mesh.ni(), mesh.nj()),
        i_flux_(static_cast<std::size_t>(mesh.ni() + 1) * mesh.nj()),
        j_flux_(static_cast<std::size_t>(mesh.ni()) * (mesh.nj() + 1)) {
    config_.validate();
    if (config_.viscous) centers_ = centers_with_ghosts(mesh);
  }

  const SolverConfig& config() const noexcept { return config_; }
  const StructuredMesh& mesh() const noexcept { return *mesh_; }

  /// Primitive field with ghost ring from the last residual evaluation.
  const CellField<PrimitiveState>& last_primitives() const noexcept { return w_; }
  const ShockSensorField& last_sensor() const noexcept { return sensor_; }

  const CellField<ConservedState>& residual(const CellField<ConservedState>& cells, double time) {
    const auto& mesh = *mesh_;
    const int ni = mesh.ni();
    const int nj = mesh.nj();
    w_ = primitives(cells, config_.gas);
    apply_boundaries(w_, mesh, config_, time);

    const bool sensor = uses_shock_sensor(config_.scheme);
    if (sensor) {
      for (int j = -1; j <= nj; ++j) {
        for (int i = -1; i <= ni; ++i) pressure_(i, j) = w_(i, j).p;
      }
      sensor_ = shock_sensor(mesh, pressure_);
    }

    parallel_for(nj, config_.threads, [&](int j) { i_face_row(j, sensor); });
    parallel_for(ni, config_.threads, [&](int i) { j_face_column(i, sensor); });

    parallel_for(nj, config_.threads, [&](int j) {
      for (int i = 0; i < ni; ++i) {
        const FluxVector di = i_flux(i + 1, j) - i_flux(i, j);
        const FluxVector dj = j_flux(i, j + 1) - j_flux(i, j);
        const FluxVector net = di + dj;
        const double inv = -1.0 / mesh.area(i, j);
        rate_(i, j) = {net[0] * inv, net[1] * inv, net[2] * inv, net[3] * inv};
      }
    });
    return rate_;
  }

  /// Local stable step per cell (ghost entries unused).
  CellField<double> local_dt(const CellField<ConservedState>& cells) const {
    return local_dt_from(primitives(cells, config_.gas));
  }

  /// Same from primitives; only interior entries of `prim` are read.
  CellField<double> local_dt_from(const CellField<PrimitiveState>& prim) const {
    const auto& mesh = *mesh_;
    const auto& gas = config_.gas;
    CellField<double> dt(mesh.ni(), mesh.nj(), 0.0);
    for (int j = 0; j < mesh.nj(); ++j) {
      for (int i = 0; i < mesh.ni(); ++i) {
        const PrimitiveState& w = prim(i, j);
        const double a = sound_speed(w, gas);
        auto face_rate = [&](const FaceGeometry& f) {
          return f.length * (std::fabs(normal_velocity(w, f.normal)) + a);
        };
        const double lambda = (face_rate(mesh.i_face(i, j)) + face_rate(mesh.i_face(i + 1, j))) +
                              (face_rate(mesh.j_face(i, j)) + face_rate(mesh.j_face(i, j + 1)));
        double step = config_.cfl * mesh.area(i, j) / lambda;
        if (config_.viscous) {
          const double mu = gas.dynamic_viscosity(temperature(w, gas));
          const double nu = std::max(4.0 * mu / (3.0 * w.rho), gas.gamma * mu / (w.rho * gas.prandtl));
          if (nu > 0.0) {
            const double longest = std::max(
                std::max(mesh.i_face(i, j).length, mesh.i_face(i + 1, j).length),
                std::max(mesh.j_face(i, j).length, mesh.j_face(i, j + 1).length));
            const double h = mesh.area(i, j) / longest;
            step = std::min(step, config_.cfl * h * h / (2.0 * nu));
          }
        }
        dt(i, j) = step;
      }
    }
    return dt;
  }

  double global_dt(const CellField<ConservedState>& cells) const {
    const auto dt = local_dt(cells);
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < mesh_->nj(); ++j) {
      for (int i = 0; i < mesh_->ni(); ++i) m = std::min(m, dt(i, j));
    }
    return m;
  }

  /// One explicit step. `max_dt` clips the global step (final-time landing).
  /// Returns the global dt taken (or the minimum local dt).
  double advance(FieldSnapshot& snap, std::optional<double> max_dt = std::nullopt) {
    const auto& mesh = *mesh_;
    const int ni = mesh.ni();
    const int nj = mesh.nj();
    const double t0 = snap.time;
    // first-stage residual; its primitives also give the stable step
    (void)residual(snap.cells, t0);
    CellField<double> dt = local_dt_from(w_);
    double dt_global = std::numeric_limits<double>::infinity();
    for (int j = 0; j < nj; ++j) {
      for (int i = 0; i < ni; ++i) dt_global = std::min(dt_global, dt(i, j));
    }
    bool clipped = false;
    if (config_.time_mode == TimeMode::global_dt) {
      if (max_dt && *max_dt <= dt_global) {
        dt_global = *max_dt;
        clipped = true;
      }
      for (int j = 0; j < nj; ++j) {
        for (int i = 0; i < ni; ++i) dt(i, j) = dt_global;
      }
    }

    const CellField<ConservedState> u0 = snap.cells;
    snap.residual_l2 = l2_norms(rate_);

    bool first = true;
    for (const auto& st : tvd_rk_stages(config_.rk_order)) {
      const auto& r = first ? rate_ : residual(snap.cells, t0 + st.input_time * dt_global);
      first = false;
      for (int j = 0; j < nj; ++j) {
        for (int i = 0; i < ni; ++i) {
          const ConservedState advanced = snap.cells(i, j) + dt(i, j) * r(i, j);
          snap.cells(i, j) =
              (st.w_old == 0.0) ? advanced : st.w_old * u0(i, j) + st.w_new * advanced;
        }
      }
    }
    (void)primitives(snap.cells, config_.gas);  // validates the new state

    snap.time = (config_.time_mode == TimeMode::global_dt) ? t0 + dt_global : t0;
    if (clipped && max_dt) snap.time = t0 + *max_dt;
    ++snap.iteration;
    return dt_global;
  }

  std::array<double, 4> l2_norms(const CellField<ConservedState>& r) const {
    std::array<double, 4> sum{};
    for (int j = 0; j < mesh_->nj(); ++j) {
      for (int i = 0; i < mesh_->ni(); ++i) {
        for (int k = 0; k < 4; ++k) sum[k] += r(i, j)[k] * r(i, j)[k];
      }
    }
    const double n = static_cast<double>(mesh_->cell_count());
    for (auto& s : sum) s = std::sqrt(s / n);
    return sum;
  }

 private:
  FluxVector& i_flux(int i, int j) noexcept {
    return i_flux_[static_cast<std::size_t>(j) * (mesh_->ni() + 1) + i];
  }
  FluxVector& j_flux(int i, int j) noexcept {
    return j_flux_[static_cast<std::size_t>(j) * mesh_->ni() + i];
  }

  /// Reconstructs a line of primitives (ghosts at both ends) to face pairs.
  void reconstruct_line(std::span<const PrimitiveState> line,
                        std::vector<std::pair<PrimitiveState, PrimitiveState>>& out) const {
    const std::size_t n = line.size();
    out.resize(n - 1);
    if (config_.limiter == LimiterKind::first_order) {
      for (std::size_t f = 0; f + 1 < n; ++f) out[f] = {line[f], line[f + 1]};
      return;
    }
    thread_local std::vector<double> values;
    thread_local std::vector<FaceValues> faces;
    values.resize(n);
    faces.resize(n - 1);
    for (std::size_t f = 0; f + 1 < n; ++f) out[f] = {line[f], line[f + 1]};
    for (int k = 0; k < 4; ++k) {
      for (std::size_t c = 0; c < n; ++c) values[c] = line[c].as_array()[k];
      muscl_faces_into(values, config_.limiter, config_.kappa, faces);
      for (std::size_t f = 0; f + 1 < n; ++f) {
        auto l = out[f].first.as_array();
        auto r = out[f].second.as_array();
        l[k] = faces[f].left;
        r[k] = faces[f].right;
        out[f] = {PrimitiveState::from_array(l), PrimitiveState::from_array(r)};
      }
    }
    for (std::size_t f = 0; f + 1 < n; ++f) {
      const auto& [l, r] = out[f];
      if (!(l.rho > 0.0 && l.p > 0.0 && r.rho > 0.0 && r.p > 0.0)) {
        out[f] = {line[f], line[f + 1]};
      }
    }
  }

  void i_face_row(int j, bool sensor) {
    const auto& mesh = *mesh_;
    const int ni = mesh.ni();
    thread_local std::vector<PrimitiveState> line;
    thread_local std::vector<std::pair<PrimitiveState, PrimitiveState>> states;
    line.resize(ni + 2);
    for (int i = -1; i <= ni; ++i) line[i + 1] = w_(i, j);
    reconstruct_line(line, states);
    for (int i = 0; i <= ni; ++i) {
      const auto& face = mesh.i_face(i, j);
      const double fp = sensor ? sensor_.i_fp(i, j) : 1.0;
      FluxVector f = face_flux(config_.scheme, states[i].first, states[i].second, face.normal, fp,
                               config_.gas);
      if (config_.viscous) f -= viscous_face_flux(w_, centers_, mesh, {true, i, j}, config_.gas);
      i_flux(i, j) = face.length * f;
    }
  }

  void j_face_column(int i, bool sensor) {
    const auto& mesh = *mesh_;
    const int nj = mesh.nj();
    thread_local std::vector<PrimitiveState> line;
    thread_local std::vector<std::pair<PrimitiveState, PrimitiveState>> states;
    line.resize(nj + 2);
    for (int j = -1; j <= nj; ++j) line[j + 1] = w_(i, j);
    reconstruct_line(line, states);
    for (int j = 0; j <= nj; ++j) {
      const auto& face = mesh.j_face(i, j);
      const double fp = sensor ? sensor_.j_fp(i, j) : 1.0;
      FluxVector f = face_flux(config_.scheme, states[j].first, states[j].second, face.normal, fp,
                               config_.gas);
      if (config_.viscous) f -= viscous_face_flux(w_, centers_, mesh, {false, i, j}, config_.gas);
      j_flux(i, j) = face.length * f;
    }
  }

  const StructuredMesh* mesh_;
  SolverConfig config_;
  CellField<PrimitiveState> w_;
  CellField<double> pressure_;
  CellField<ConservedState> rate_;
  CellField<Point> centers_;
  ShockSensorField sensor_;
  std::vector<FluxVector> i_flux_;
  std::vector<FluxVector> j_flux_;
};

// ---------------------------------------------------------------------------
// Free-function surface
// ---------------------------------------------------------------------------

inline CellField<ConservedState> compute_residual(const FieldSnapshot& snap,
                                                  const StructuredMesh& mesh,
                                                  const SolverConfig& config, double time) {
  Solver solver(mesh, config);
  return solver.residual(snap.cells, time);
}

/// Per-cell stable step for local_dt mode, uniform minimum for global_dt.
inline CellField<double> stable_dt(const FieldSnapshot& snap, const StructuredMesh& mesh,
                                   const SolverConfig& config) {
  Solver solver(mesh, config);
  auto dt = solver.local_dt(snap.cells);
  if (config.time_mode == TimeMode::global_dt) {
    const double m = solver.global_dt(snap.cells);
    for (int j = 0; j < mesh.nj(); ++j) {
      for (int i = 0; i < mesh.ni(); ++i) dt(i, j) = m;
    }
  }
  return dt;
}

inline FieldSnapshot rk_advance(FieldSnapshot snap, const StructuredMesh& mesh,
                                const SolverConfig& config) {
  Solver solver(mesh, config);
  solver.advance(snap);
  return snap;
}

/// Marches until the first satisfied stop criterion. NonPhysicalState marks
/// the run failed and keeps the last valid snapshot. `observer` is called
/// after every completed step.
inline RunResult run_to_stop(FieldSnapshot initial, const StructuredMesh& mesh,
                             const SolverConfig& config,
                             const std::function<void(const FieldSnapshot&)>& observer = {}) {
  Solver solver(mesh, config);
  const auto& stop = config.stop;
  RunResult result;
  result.snapshot = std::move(initial);
  double peak_residual = 0.0;

  while (true) {
    if (stop.final_time && result.snapshot.time >= *stop.final_time) break;
    if (stop.max_iters && result.snapshot.iteration >= *stop.max_iters) break;

    FieldSnapshot next = result.snapshot;
    std::optional<double> max_dt;
    if (stop.final_time) max_dt = *stop.final_time - next.time;
    double dt = 0.0;
    try {
      dt = solver.advance(next, max_dt);
    } catch (const NonPhysicalState& e) {
      result.failed = true;
      result.failure = e.what();
      return result;
    }
    result.snapshot = std::move(next);
    if (max_dt && dt == *max_dt) result.snapshot.time = *stop.final_time;
    const double res = result.snapshot.residual_l2[0];
    result.history.push_back({result.snapshot.iteration, result.snapshot.time, dt,
                              result.snapshot.residual_l2});
    if (observer) observer(result.snapshot);
    if (!std::isfinite(res)) {
      result.failed = true;
      result.failure = "residual is not finite";
      return result;
    }
    peak_residual = std::max(peak_residual, res);
    if (stop.residual_drop) {
      const auto& all = result.snapshot.residual_l2;
      const bool floor_hit = std::all_of(all.begin(), all.end(),
                                         [&](double r) { return r <= stop.residual_floor; });
      const bool dropped = peak_residual > 0.0 &&
                           res <= peak_residual * std::pow(10.0, -*stop.residual_drop);
      if (floor_hit || dropped) {
        result.converged = true;
        break;
      }
    }
  }
  if (stop.final_time && result.snapshot.time >= *stop.final_time) result.converged = true;
  return result;
}

/// log10(peak / last) of the density residual history.
inline double residual_drop_orders(const std::vector<HistoryEntry>& history) {
  if (history.empty()) return 0.0;
  double peak = 0.0;
  for (const auto& h : history) peak = std::max(peak, h.residual_l2[0]);
  const double last = history.back().residual_l2[0];
  if (!(peak > 0.0)) return 0.0;
  if (!(last > 0.0)) return std::numeric_limits<double>::infinity();
  return std::log10(peak / last);
}

}  // namespace ashll
