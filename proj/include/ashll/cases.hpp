#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ashll/allspeed.hpp"
#include "ashll/errors.hpp"
#include "ashll/io.hpp"
#include "ashll/mesh.hpp"
#include "ashll/oracles.hpp"
#include "ashll/solver.hpp"

namespace ashll {

enum class CaseId {
  sod,
  stationary_contact,
  quirk_shock,
  dmr,
  cylinder_m20_inviscid,
  cylinder_lowmach_sweep,
  couette
};

enum class Preset { ci, paper };

inline constexpr std::array kAllCases = {
    CaseId::sod,  CaseId::stationary_contact,    CaseId::quirk_shock,
    CaseId::dmr,  CaseId::cylinder_m20_inviscid, CaseId::cylinder_lowmach_sweep,
    CaseId::couette};

constexpr std::string_view to_string(CaseId id) noexcept {
  switch (id) {
    case CaseId::sod: return "sod";
    case CaseId::stationary_contact: return "stationary_contact";
    case CaseId::quirk_shock: return "quirk_shock";
    case CaseId::dmr: return "dmr";
    case CaseId::cylinder_m20_inviscid: return "cylinder_m20_inviscid";
    case CaseId::cylinder_lowmach_sweep: return "cylinder_lowmach_sweep";
    case CaseId::couette: return "couette";
  }
  return "?";
}

constexpr std::string_view describe(CaseId id) noexcept {
  switch (id) {
    case CaseId::sod: return "Sod shock tube on a 1-cell-high box, t = 0.2";
    case CaseId::stationary_contact: return "isolated stationary contact, 100 steps";
    case CaseId::quirk_shock: return "Mach 6 shock on a 400x20 box with a perturbed centerline";
    case CaseId::dmr: return "double Mach reflection on [0,4]x[0,1], t = 0.2";
    case CaseId::cylinder_m20_inviscid: return "Mach 20 inviscid cylinder on Mesh-B";
    case CaseId::cylinder_lowmach_sweep: return "low-Mach inviscid cylinder on an O-mesh, Mach sweep";
    case CaseId::couette: return "steady compressible Couette flow between isothermal walls";
  }
  return "";
}

struct MeshParams {
  int ni = 0;
  int nj = 0;
  double r_outer = 50.0;  // O-mesh only
  std::string label() const { return std::to_string(ni) + "x" + std::to_string(nj); }
};

struct OutputControls {
  std::string directory;      // empty: no files
  long snapshot_interval = 0;  // 0: final field only
};

struct CaseConfig {
  CaseId case_id = CaseId::sod;
  Preset preset = Preset::ci;
  MeshParams mesh;
  SolverConfig solver;
  std::vector<double> mach_numbers;  // low-Mach sweep
  double wall_speed = 0.2;           // Couette moving wall
  OutputControls output;
};

// ---------------------------------------------------------------------------
// Defaults
// ---------------------------------------------------------------------------

inline PrimitiveState dmr_pre_shock() { return {1.4, 0.0, 0.0, 1.0}; }

inline PrimitiveState dmr_post_shock(const GasModel& gas) {
  return oblique_post_shock(dmr_pre_shock(), 10.0, 60.0, gas);
}

inline CaseConfig default_case(CaseId id, Preset preset = Preset::ci) {
  CaseConfig c;
  c.case_id = id;
  c.preset = preset;
  auto& s = c.solver;
  const bool paper = preset == Preset::paper;
  switch (id) {
    case CaseId::sod:
      c.mesh = {100, 1};
      s.scheme = FluxScheme::hllc;
      s.stop.final_time = 0.2;
      break;
    case CaseId::stationary_contact:
      c.mesh = {100, 1};
      s.scheme = FluxScheme::ashllc;
      s.stop.max_iters = 100;
      break;
    case CaseId::quirk_shock:
      c.mesh = {400, 20};
      s.scheme = FluxScheme::ashllc;
      s.stop.max_iters = 2000;
      s.freestream = {1.0, 0.0, 0.0, 1.0 / s.gas.gamma};
      break;
    case CaseId::dmr:
      c.mesh = paper ? MeshParams{960, 240} : MeshParams{480, 120};
      s.scheme = FluxScheme::ashllc;
      s.rk_order = 3;
      s.stop.final_time = 0.2;
      break;
    case CaseId::cylinder_m20_inviscid:
      c.mesh = paper ? MeshParams{120, 320} : MeshParams{60, 160};
      s.scheme = FluxScheme::ashllc;
      s.rk_order = 2;
      s.time_mode = TimeMode::local_dt;
      s.freestream = {1.4, 20.0, 0.0, 1.0};
      s.stop.residual_drop = 4.0;
      s.stop.max_iters = paper ? 120000 : 40000;
      break;
    case CaseId::cylinder_lowmach_sweep:
      c.mesh = paper ? MeshParams{127, 128, 50.0} : MeshParams{63, 64, 20.0};
      s.scheme = FluxScheme::ashllem;
      s.cfl = 1.0;
      s.time_mode = TimeMode::local_dt;
      s.freestream = {1.0, 0.0, 0.0, 1.0 / s.gas.gamma};
      s.stop.residual_drop = 6.0;
      s.stop.max_iters = paper ? 2000000 : 500000;
      c.mach_numbers = {0.1, 0.01, 0.001};
      break;
    case CaseId::couette:
      c.mesh = {4, 32};
      s.scheme = FluxScheme::hllc;
      s.limiter = LimiterKind::van_albada;
      s.rk_order = 2;
      s.time_mode = TimeMode::local_dt;
      s.viscous = true;
      s.gas.viscosity = ConstantViscosity{0.05};
      s.freestream = {1.0, 0.0, 0.0, 1.0 / s.gas.gamma};
      s.stop.residual_drop = 8.0;
      s.stop.max_iters = 200000;
      break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// JSON configuration
// ---------------------------------------------------------------------------

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& j, std::string_view where,
                           std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <class Enum, std::size_t N>
Enum parse_enum(const json& j, std::string_view what,
                const std::array<std::pair<std::string_view, Enum>, N>& table) {
  if (!j.is_string()) throw ConfigError(std::string(what) + " must be a string");
  const auto text = j.get<std::string>();
  for (const auto& [name, value] : table) {
    if (name == text) return value;
  }
  throw ConfigError("invalid " + std::string(what) + " '" + text + "'");
}

inline constexpr std::array<std::pair<std::string_view, CaseId>, 7> kCaseNames{{
    {"sod", CaseId::sod},
    {"stationary_contact", CaseId::stationary_contact},
    {"quirk_shock", CaseId::quirk_shock},
    {"dmr", CaseId::dmr},
    {"cylinder_m20_inviscid", CaseId::cylinder_m20_inviscid},
    {"cylinder_lowmach_sweep", CaseId::cylinder_lowmach_sweep},
    {"couette", CaseId::couette},
}};

inline constexpr std::array<std::pair<std::string_view, FluxScheme>, 5> kSchemeNames{{
    {"HLL", FluxScheme::hll},
    {"HLLEM", FluxScheme::hllem},
    {"HLLC", FluxScheme::hllc},
    {"ASHLLEM", FluxScheme::ashllem},
    {"ASHLLC", FluxScheme::ashllc},
}};

inline constexpr std::array<std::pair<std::string_view, LimiterKind>, 3> kLimiterNames{{
    {"first_order", LimiterKind::first_order},
    {"minmod", LimiterKind::minmod},
    {"van_albada", LimiterKind::van_albada},
}};

inline constexpr std::array<std::pair<std::string_view, TimeMode>, 2> kTimeModeNames{{
    {"global", TimeMode::global_dt},
    {"local", TimeMode::local_dt},
}};

inline constexpr std::array<std::pair<std::string_view, Preset>, 2> kPresetNames{{
    {"ci", Preset::ci},
    {"paper", Preset::paper},
}};

inline double number(const json& j, std::string_view what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
  return v;
}

inline long integer(const json& j, std::string_view what) {
  if (!j.is_number_integer()) throw ConfigError(std::string(what) + " must be an integer");
  return j.get<long>();
}

inline void check_minimum_mesh(const CaseConfig& c) {
  struct Minimum {
    int ni, nj;
  };
  Minimum m{4, 1};
  switch (c.case_id) {
    case CaseId::sod:
    case CaseId::stationary_contact: m = {10, 1}; break;
    case CaseId::quirk_shock: m = {40, 4}; break;
    case CaseId::dmr: m = {16, 4}; break;
    case CaseId::cylinder_m20_inviscid: m = {4, 4}; break;
    case CaseId::cylinder_lowmach_sweep: m = {8, 8}; break;
    case CaseId::couette: m = {1, 4}; break;
  }
  if (c.mesh.ni < m.ni || c.mesh.nj < m.nj) {
    throw ConfigError("mesh " + c.mesh.label() + " below the minimum " + std::to_string(m.ni) +
                      "x" + std::to_string(m.nj) + " for " + std::string(to_string(c.case_id)));
  }
  if (c.case_id == CaseId::cylinder_m20_inviscid && c.mesh.nj % 2 != 0) {
    throw ConfigError("cylinder_m20_inviscid needs an even nj for the symmetry metric");
  }
}

}  // namespace detail

/// Case defaults for the chosen preset, overridden by the keys present in
/// `j`. `preset_override` (from the command line) wins over a "preset" key.
inline CaseConfig parse_case_config(const nlohmann::json& j,
                                    std::optional<Preset> preset_override = std::nullopt) {
  using detail::integer;
  using detail::number;
  detail::reject_unknown(j, "config",
                         {"case", "preset", "scheme", "limiter", "kappa", "cfl", "time_mode",
                          "rk_order", "mesh", "stop", "gas", "freestream", "mach_numbers",
                          "wall_speed", "output"});
  if (!j.contains("case")) throw ConfigError("missing key 'case'");
  const CaseId id = detail::parse_enum(j.at("case"), "case", detail::kCaseNames);
  Preset preset = Preset::ci;
  if (j.contains("preset")) preset = detail::parse_enum(j.at("preset"), "preset", detail::kPresetNames);
  if (preset_override) preset = *preset_override;

  CaseConfig c = default_case(id, preset);
  auto& s = c.solver;
  if (j.contains("scheme")) s.scheme = detail::parse_enum(j["scheme"], "scheme", detail::kSchemeNames);
  if (j.contains("limiter")) s.limiter = detail::parse_enum(j["limiter"], "limiter", detail::kLimiterNames);
  if (j.contains("kappa")) s.kappa = number(j["kappa"], "kappa");
  if (j.contains("cfl")) s.cfl = number(j["cfl"], "cfl");
  if (j.contains("time_mode")) s.time_mode = detail::parse_enum(j["time_mode"], "time_mode", detail::kTimeModeNames);
  if (j.contains("rk_order")) s.rk_order = static_cast<int>(integer(j["rk_order"], "rk_order"));

  if (j.contains("mesh")) {
    const auto& m = j["mesh"];
    detail::reject_unknown(m, "mesh", {"ni", "nj", "r_outer"});
    if (m.contains("ni")) c.mesh.ni = static_cast<int>(integer(m["ni"], "mesh.ni"));
    if (m.contains("nj")) c.mesh.nj = static_cast<int>(integer(m["nj"], "mesh.nj"));
    if (m.contains("r_outer")) {
      if (id != CaseId::cylinder_lowmach_sweep) throw ConfigError("mesh.r_outer only applies to cylinder_lowmach_sweep");
      c.mesh.r_outer = number(m["r_outer"], "mesh.r_outer");
      if (!(c.mesh.r_outer > 2.0)) throw ConfigError("mesh.r_outer must exceed 2");
    }
  }
  if (j.contains("stop")) {
    const auto& st = j["stop"];
    detail::reject_unknown(st, "stop", {"final_time", "max_iters", "residual_drop"});
    auto read_optional = [&](const char* key, auto& target, auto convert) {
      if (!st.contains(key)) return;
      if (st[key].is_null()) {
        target.reset();
      } else {
        target = convert(st[key], std::string("stop.") + key);
      }
    };
    read_optional("final_time", s.stop.final_time, number);
    read_optional("max_iters", s.stop.max_iters, integer);
    read_optional("residual_drop", s.stop.residual_drop, number);
  }
  if (j.contains("gas")) {
    const auto& g = j["gas"];
    detail::reject_unknown(g, "gas", {"gamma", "prandtl", "gas_constant", "viscosity"});
    const double gamma_before = s.gas.gamma;
    if (g.contains("gamma")) s.gas.gamma = number(g["gamma"], "gas.gamma");
    if (g.contains("prandtl")) s.gas.prandtl = number(g["prandtl"], "gas.prandtl");
    if (g.contains("gas_constant")) s.gas.gas_constant = number(g["gas_constant"], "gas.gas_constant");
    if (g.contains("viscosity")) {
      const double mu = number(g["viscosity"], "gas.viscosity");
      if (!(mu > 0.0)) throw ConfigError("gas.viscosity must be positive");
      s.gas.viscosity = ConstantViscosity{mu};
    }
    // keep the unit-sound-speed reference state consistent with gamma
    if (s.gas.gamma != gamma_before &&
        (id == CaseId::quirk_shock || id == CaseId::cylinder_lowmach_sweep || id == CaseId::couette)) {
      s.freestream.p = s.freestream.rho / s.gas.gamma;
    }
  }
  if (j.contains("freestream")) {
    if (id != CaseId::cylinder_m20_inviscid && id != CaseId::couette) {
      throw ConfigError("freestream is fixed by the case definition of " + std::string(to_string(id)));
    }
    const auto& f = j["freestream"];
    detail::reject_unknown(f, "freestream", {"rho", "u", "v", "p"});
    if (f.contains("rho")) s.freestream.rho = number(f["rho"], "freestream.rho");
    if (f.contains("u")) s.freestream.u = number(f["u"], "freestream.u");
    if (f.contains("v")) s.freestream.v = number(f["v"], "freestream.v");
    if (f.contains("p")) s.freestream.p = number(f["p"], "freestream.p");
    if (!is_physical(s.freestream)) throw ConfigError("freestream is not a physical state");
  }
  if (j.contains("mach_numbers")) {
    if (id != CaseId::cylinder_lowmach_sweep) throw ConfigError("mach_numbers only applies to cylinder_lowmach_sweep");
    const auto& m = j["mach_numbers"];
    if (!m.is_array() || m.size() < 2) throw ConfigError("mach_numbers must list at least two values");
    c.mach_numbers.clear();
    for (const auto& v : m) {
      const double mach = number(v, "mach_numbers[]");
      if (!(mach > 0.0 && mach < 1.0)) throw ConfigError("mach_numbers must lie in (0, 1)");
      c.mach_numbers.push_back(mach);
    }
  }
  if (j.contains("wall_speed")) {
    if (id != CaseId::couette) throw ConfigError("wall_speed only applies to couette");
    c.wall_speed = number(j["wall_speed"], "wall_speed");
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    detail::reject_unknown(o, "output", {"directory", "snapshot_interval"});
    if (o.contains("directory")) {
      if (!o["directory"].is_string()) throw ConfigError("output.directory must be a string");
      c.output.directory = o["directory"].get<std::string>();
    }
    if (o.contains("snapshot_interval")) {
      c.output.snapshot_interval = integer(o["snapshot_interval"], "output.snapshot_interval");
      if (c.output.snapshot_interval < 0) throw ConfigError("output.snapshot_interval must be >= 0");
    }
  }

  detail::check_minimum_mesh(c);
  if (id == CaseId::couette && !s.viscous) throw ConfigError("couette is viscous");
  s.validate();
  return c;
}

inline CaseConfig load_case_config(const std::filesystem::path& path,
                                   std::optional<Preset> preset_override = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_case_config(j, preset_override);
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

struct Metric {
  std::string name;
  double value = 0.0;
};

struct MetricReport {
  std::string case_id;
  std::string scheme;
  std::string mesh;
  std::vector<Metric> metrics;

  void add(std::string name, double value) { metrics.push_back({std::move(name), value}); }

  std::optional<double> find(std::string_view name) const {
    for (const auto& m : metrics) {
      if (m.name == name) return m.value;
    }
    return std::nullopt;
  }

  double at(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw std::out_of_range("no metric " + std::string(name));
  }
};

inline void write_metrics_csv(const std::filesystem::path& path, const MetricReport& r) {
  auto out = open_for_write(path);
  out << "case_id,scheme,mesh,metric,value\r\n";
  for (const auto& m : r.metrics) {
    out << csv_field(r.case_id) << ',' << csv_field(r.scheme) << ',' << csv_field(r.mesh) << ','
        << csv_field(m.name) << ',' << format_double(m.value) << "\r\n";
  }
  finish_write(out, path);
}

/// Thrown by run_case when the solver produced a non-physical state. Carries
/// the metrics gathered up to that point.
class CaseFailedWithReport : public CaseFailed {
 public:
  CaseFailedWithReport(const std::string& what, MetricReport report)
      : CaseFailed(what), report_(std::move(report)) {}
  const MetricReport& report() const noexcept { return report_; }

 private:
  MetricReport report_;
};

/// (max p - min p) / max p over interior cells.
inline double pressure_fluctuation(const FieldSnapshot& snap, const GasModel& gas) {
  const auto w = primitives(snap.cells, gas);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int j = 0; j < snap.cells.nj(); ++j) {
    for (int i = 0; i < snap.cells.ni(); ++i) {
      lo = std::min(lo, w(i, j).p);
      hi = std::max(hi, w(i, j).p);
    }
  }
  return (hi - lo) / hi;
}

/// Max over mirrored pairs (i, j) <-> (i, nj-1-j) of |rho_a - rho_b| / max rho.
inline double symmetry_error(const FieldSnapshot& snap, const StructuredMesh& mesh) {
  const int ni = mesh.ni();
  const int nj = mesh.nj();
  double worst = 0.0;
  double rho_max = 0.0;
  for (int j = 0; j < nj; ++j) {
    for (int i = 0; i < ni; ++i) {
      rho_max = std::max(rho_max, snap.cells(i, j).rho());
      worst = std::max(worst, std::fabs(snap.cells(i, j).rho() - snap.cells(i, nj - 1 - j).rho()));
    }
  }
  return worst / rho_max;
}

/// Density just behind the captured bow shock on the row next to the
/// stagnation line. The shock position is the jump-weighted centroid of the
/// density differences on the two faces either side of the largest jump
/// along i. The smooth post-shock profile, sampled three and four cells
/// behind that position, is extrapolated linearly back to it.
inline double post_shock_density(const FieldSnapshot& snap, const StructuredMesh& mesh) {
  const int j = mesh.nj() / 2;
  const int ni = mesh.ni();
  auto jump_at = [&](int i) { return std::fabs(snap.cells(i + 1, j).rho() - snap.cells(i, j).rho()); };
  int face = 0;
  double jump = -1.0;
  for (int i = 0; i + 1 < ni; ++i) {
    const double d = jump_at(i);
    if (d > jump) {
      jump = d;
      face = i;
    }
  }
  double weight = 0.0;
  double moment = 0.0;
  for (int i = std::max(face - 2, 0); i <= std::min(face + 2, ni - 2); ++i) {
    const double d = jump_at(i);
    weight += d;
    moment += d * (i + 0.5);
  }
  const double shock_pos = weight > 0.0 ? moment / weight : face + 0.5;
  const int a = std::min(static_cast<int>(std::ceil(shock_pos)) + 2, ni - 2);
  const int b = a + 1;
  const double ra = snap.cells(a, j).rho();
  const double rb = snap.cells(b, j).rho();
  return ra + (rb - ra) * (shock_pos - a);
}

/// Mean exact density over [x0, x0 + dx] at time t (diaphragm at x = 0.5),
/// midpoint rule on 256 sub-intervals.
inline double exact_cell_average(const RiemannExactSolution& exact, double x0, double dx, double t) {
  constexpr int kSub = 256;
  if (!(t > 0.0)) return exact.sample(x0 + 0.5 * dx < 0.5 ? -1.0 : 1.0).rho;
  double sum = 0.0;
  for (int k = 0; k < kSub; ++k) {
    const double x = x0 + (k + 0.5) * dx / kSub;
    sum += exact.sample((x - 0.5) / t).rho;
  }
  return sum / kSub;
}

/// Least-squares slope of log(y) against log(x).
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Case setup
// ---------------------------------------------------------------------------

struct CaseSetup {
  StructuredMesh mesh;
  SolverConfig solver;
  FieldSnapshot initial;
};

inline constexpr double kQuirkShockX = 10.0;
inline constexpr double kQuirkPerturbation = 1e-6;
inline constexpr double kQuirkMach = 6.0;

inline StructuredMesh quirk_mesh(int ni, int nj) {
  auto box = generate_box(0.0, ni, 0.0, nj, ni, nj);
  std::vector<Point> nodes;
  nodes.reserve(static_cast<std::size_t>(ni + 1) * (nj + 1));
  for (int j = 0; j <= nj; ++j) {
    for (int i = 0; i <= ni; ++i) {
      Point p = box.node(i, j);
      if (j == nj / 2) p.y += (i % 2 == 0) ? kQuirkPerturbation : -kQuirkPerturbation;
      nodes.push_back(p);
    }
  }
  return compute_metrics(StructuredMesh(ni, nj, std::move(nodes)));
}

/// Mesh, boundary tags, solver settings and initial field for one run.
/// `mach` selects the sweep member for the low-Mach case.
inline CaseSetup make_setup(const CaseConfig& c, double mach = 0.0) {
  SolverConfig s = c.solver;
  const GasModel& gas = s.gas;
  const int ni = c.mesh.ni;
  const int nj = c.mesh.nj;
  auto uniform = [](PrimitiveState w) { return [w](Point) { return w; }; };

  switch (c.case_id) {
    case CaseId::sod: {
      auto mesh = generate_box(0.0, 1.0, 0.0, 1.0, ni, nj);
      mesh.set_boundary(Edge::j_min, {BoundaryKind::slip_wall});
      mesh.set_boundary(Edge::j_max, {BoundaryKind::slip_wall});
      auto init = make_snapshot(mesh, [](Point p) {
        return p.x < 0.5 ? PrimitiveState{1.0, 0.0, 0.0, 1.0} : PrimitiveState{0.125, 0.0, 0.0, 0.1};
      }, gas);
      return {std::move(mesh), s, std::move(init)};
    }
    case CaseId::stationary_contact: {
      auto mesh = generate_box(0.0, 1.0, 0.0, 1.0, ni, nj);
      mesh.set_boundary(Edge::j_min, {BoundaryKind::slip_wall});
      mesh.set_boundary(Edge::j_max, {BoundaryKind::slip_wall});
      auto init = make_snapshot(mesh, [](Point p) {
        return p.x < 0.5 ? PrimitiveState{1.4, 0.0, 0.0, 1.0} : PrimitiveState{1.0, 0.0, 0.0, 1.0};
      }, gas);
      return {std::move(mesh), s, std::move(init)};
    }
    case CaseId::quirk_shock: {
      auto mesh = quirk_mesh(ni, nj);
      mesh.set_boundary(Edge::i_min, {BoundaryKind::inflow});
      mesh.set_boundary(Edge::j_min, {BoundaryKind::slip_wall});
      mesh.set_boundary(Edge::j_max, {BoundaryKind::slip_wall});
      const PrimitiveState pre = s.freestream;
      const PrimitiveState post = oblique_post_shock(pre, kQuirkMach, 90.0, gas);
      s.freestream = post;
      auto init = make_snapshot(mesh, [&](Point p) { return p.x < kQuirkShockX ? post : pre; }, gas);
      return {std::move(mesh), s, std::move(init)};
    }
    case CaseId::dmr: {
      auto mesh = generate_box(0.0, 4.0, 0.0, 1.0, ni, nj);
      ShockLineBoundary line;
      line.pre = dmr_pre_shock();
      line.post = dmr_post_shock(gas);
      s.shock_line = line;
      s.freestream = line.post;
      mesh.set_boundary(Edge::i_min, {BoundaryKind::inflow});
      mesh.set_boundary(Edge::i_max, {BoundaryKind::outflow});
      mesh.set_boundary(Edge::j_max, {BoundaryKind::dmr_exact_top});
      auto& bottom = mesh.boundary(Edge::j_min);
      for (int i = 0; i < ni; ++i) {
        bottom[i] = {mesh.j_face(i, 0).center.x < line.x0 ? BoundaryKind::inflow
                                                          : BoundaryKind::slip_wall};
      }
      auto init = make_snapshot(mesh, [&](Point p) {
        return p.x < line.shock_x(p.y, 0.0) ? line.post : line.pre;
      }, gas);
      return {std::move(mesh), s, std::move(init)};
    }
    case CaseId::cylinder_m20_inviscid: {
      auto mesh = generate_mesh_b(ni, nj);
      auto init = make_snapshot(mesh, uniform(s.freestream), gas);
      return {std::move(mesh), s, std::move(init)};
    }
    case CaseId::cylinder_lowmach_sweep: {
      auto mesh = generate_o_mesh(ni, nj, c.mesh.r_outer);
      s.freestream.u = mach * sound_speed(s.freestream, gas);
      s.freestream.v = 0.0;
      auto init = make_snapshot(mesh, uniform(s.freestream), gas);
      return {std::move(mesh), s, std::move(init)};
    }
    case CaseId::couette: {
      auto mesh = generate_box(0.0, 1.0, 0.0, 1.0, ni, nj);
      const double t_wall = temperature(s.freestream, gas);
      mesh.set_boundary(Edge::i_min, {BoundaryKind::periodic});
      mesh.set_boundary(Edge::i_max, {BoundaryKind::periodic});
      mesh.set_boundary(Edge::j_min, {BoundaryKind::noslip_isothermal_wall, t_wall, 0.0, 0.0});
      mesh.set_boundary(Edge::j_max, {BoundaryKind::noslip_isothermal_wall, t_wall, c.wall_speed, 0.0});
      auto init = make_snapshot(mesh, uniform(s.freestream), gas);
      return {std::move(mesh), s, std::move(init)};
    }
  }
  throw ConfigError("unknown case");
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

namespace detail {

inline std::string mach_tag(double mach) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "mach_%g", mach);
  return buf;
}

struct SingleRun {
  CaseSetup setup;
  RunResult result;
  double max_abs_rho_v = 0.0;  // over all steps
};

inline SingleRun run_single(const CaseConfig& c, double mach,
                            const std::optional<std::filesystem::path>& dir) {
  SingleRun run{make_setup(c, mach), {}, 0.0};
  auto& setup = run.setup;
  const long every = c.output.snapshot_interval;
  auto observer = [&](const FieldSnapshot& snap) {
    if (c.case_id == CaseId::quirk_shock) {
      for (int j = 0; j < snap.cells.nj(); ++j) {
        for (int i = 0; i < snap.cells.ni(); ++i) {
          run.max_abs_rho_v = std::max(run.max_abs_rho_v, std::fabs(snap.cells(i, j).rho_v()));
        }
      }
    }
    if (dir && every > 0 && snap.iteration % every == 0) {
      char name[48];
      std::snprintf(name, sizeof name, "field_%08ld.vtk", snap.iteration);
      write_vtk(*dir / name, setup.mesh, primitives(snap.cells, setup.solver.gas), setup.solver.gas);
    }
  };
  run.result = run_to_stop(setup.initial, setup.mesh, setup.solver, observer);
  if (dir) {
    write_outputs(run.result.snapshot, setup.mesh, setup.solver.gas, *dir);
    write_history_csv(*dir / "history.csv", run.result.history);
  }
  return run;
}

inline void add_run_metrics(MetricReport& r, const RunResult& result, std::string_view prefix = "") {
  const std::string p(prefix);
  r.add(p + "iterations", static_cast<double>(result.snapshot.iteration));
  r.add(p + "final_time", result.snapshot.time);
  r.add(p + "residual_drop_orders", residual_drop_orders(result.history));
  r.add(p + "converged", result.converged ? 1.0 : 0.0);
  r.add(p + "failed", result.failed ? 1.0 : 0.0);
}

inline void density_range(MetricReport& r, const FieldSnapshot& snap) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int j = 0; j < snap.cells.nj(); ++j) {
    for (int i = 0; i < snap.cells.ni(); ++i) {
      lo = std::min(lo, snap.cells(i, j).rho());
      hi = std::max(hi, snap.cells(i, j).rho());
    }
  }
  r.add("min_density", lo);
  r.add("max_density", hi);
}

}  // namespace detail

/// Runs one case end to end. With `out_dir` set, writes field.vtk,
/// centerline.csv, wall.csv, history.csv and metrics.csv there (one
/// subdirectory per Mach number for the sweep). Throws CaseFailedWithReport
/// when the solver hits a non-physical state; metrics.csv is written first.
inline MetricReport run_case(const CaseConfig& c,
                             const std::optional<std::filesystem::path>& out_dir = std::nullopt) {
  MetricReport report;
  report.case_id = std::string(to_string(c.case_id));
  report.scheme = std::string(to_string(c.solver.scheme));
  report.mesh = c.mesh.label();
  std::string failure;

  if (c.case_id == CaseId::cylinder_lowmach_sweep) {
    std::vector<double> fluct;
    for (double mach : c.mach_numbers) {
      const std::string tag = detail::mach_tag(mach);
      std::optional<std::filesystem::path> dir;
      if (out_dir) dir = *out_dir / tag;
      auto run = detail::run_single(c, mach, dir);
      detail::add_run_metrics(report, run.result, tag + ".");
      if (run.result.failed) {
        failure = tag + ": " + run.result.failure;
        break;
      }
      fluct.push_back(pressure_fluctuation(run.result.snapshot, run.setup.solver.gas));
      report.add(tag + ".pressure_fluctuation", fluct.back());
    }
    if (failure.empty()) report.add("fluctuation_slope", log_log_slope(c.mach_numbers, fluct));
  } else {
    auto run = detail::run_single(c, 0.0, out_dir);
    const auto& setup = run.setup;
    const auto& snap = run.result.snapshot;
    const GasModel& gas = setup.solver.gas;
    detail::add_run_metrics(report, run.result);
    if (run.result.failed) failure = run.result.failure;

    switch (c.case_id) {
      case CaseId::sod:
      case CaseId::stationary_contact: {
        const auto w = primitives(snap.cells, gas);
        const auto w0 = primitives(setup.initial.cells, gas);
        const auto exact = exact_riemann(w0(0, 0), w0(setup.mesh.ni() - 1, 0), gas);
        double l1_exact = 0.0, l1_change = 0.0, max_change = 0.0;
        double min_rho = std::numeric_limits<double>::infinity();
        double min_p = min_rho;
        for (int i = 0; i < setup.mesh.ni(); ++i) {
          const double dx = setup.mesh.i_face(i + 1, 0).center.x - setup.mesh.i_face(i, 0).center.x;
          const double x0 = setup.mesh.i_face(i, 0).center.x;
          const double ref = exact_cell_average(exact, x0, dx, snap.time);
          l1_exact += std::fabs(w(i, 0).rho - ref) * dx;
          l1_change += std::fabs(w(i, 0).rho - w0(i, 0).rho) * dx;
          max_change = std::max(max_change, std::fabs(w(i, 0).rho - w0(i, 0).rho));
          min_rho = std::min(min_rho, w(i, 0).rho);
          min_p = std::min(min_p, w(i, 0).p);
        }
        if (c.case_id == CaseId::sod) {
          report.add("l1_density_error", l1_exact);
        } else {
          report.add("l1_density_change", l1_change);
          report.add("max_density_change", max_change);
        }
        report.add("min_density", min_rho);
        report.add("min_pressure", min_p);
        break;
      }
      case CaseId::quirk_shock: {
        const PrimitiveState pre = c.solver.freestream;
        report.add("max_rho_v_normalized", run.max_abs_rho_v / (pre.rho * sound_speed(pre, gas)));
        break;
      }
      case CaseId::dmr:
        detail::density_range(report, snap);
        break;
      case CaseId::cylinder_m20_inviscid: {
        const double ratio = post_shock_density(snap, setup.mesh) / setup.solver.freestream.rho;
        const double mach = setup.solver.freestream.u / sound_speed(setup.solver.freestream, gas);
        const double oracle = normal_shock_rh(std::max(mach, 1.0), gas).density_ratio;
        report.add("symmetry_error", symmetry_error(snap, setup.mesh));
        report.add("post_shock_density_ratio", ratio);
        report.add("rh_density_ratio", oracle);
        report.add("density_ratio_rel_error", std::fabs(ratio - oracle) / oracle);
        break;
      }
      case CaseId::couette: {
        const auto w = primitives(snap.cells, gas);
        const auto& bc = setup.mesh.boundary(Edge::j_max)[0];
        const double mu = gas.dynamic_viscosity(bc.wall_temperature);
        const auto exact = couette_exact(c.wall_speed, 1.0, mu, gas, bc.wall_temperature, bc.wall_temperature);
        double err_u = 0.0, err_t = 0.0, max_v = 0.0;
        for (int j = 0; j < setup.mesh.nj(); ++j) {
          for (int i = 0; i < setup.mesh.ni(); ++i) {
            const double y = setup.mesh.center(i, j).y;
            err_u = std::max(err_u, std::fabs(w(i, j).u - exact.velocity(y)));
            err_t = std::max(err_t, std::fabs(temperature(w(i, j), gas) - exact.temperature(y)));
            max_v = std::max(max_v, std::fabs(w(i, j).v));
          }
        }
        report.add("linf_velocity_error", err_u);
        report.add("linf_temperature_error", err_t);
        report.add("max_abs_v", max_v);
        break;
      }
      case CaseId::cylinder_lowmach_sweep:
        break;
    }
  }

  if (out_dir) write_metrics_csv(*out_dir / "metrics.csv", report);
  if (!failure.empty()) throw CaseFailedWithReport(failure, report);
  return report;
}

}  // namespace ashll
