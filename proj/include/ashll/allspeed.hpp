#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "ashll/field.hpp"
#include "ashll/gas_state.hpp"
#include "ashll/mesh.hpp"
#include "ashll/riemann_core.hpp"

namespace ashll {

// ---------------------------------------------------------------------------
// Pressure-based shock sensor
// ---------------------------------------------------------------------------

/// f = min(pL/pR, pR/pL)^3; 1 in smooth flow, -> 0 across strong shocks.
inline double face_pressure_function(double pl, double pr) noexcept {
  const double r = std::min(pl / pr, pr / pl);
  return r * r * r;
}

/// Per-face f and its neighborhood minimum f_p, stored in mesh face order.
class ShockSensorField {
 public:
  ShockSensorField() = default;
  ShockSensorField(int ni, int nj)
      : ni_(ni),
        nj_(nj),
        i_f_(static_cast<std::size_t>(ni + 1) * nj, 1.0),
        i_fp_(i_f_.size(), 1.0),
        j_f_(static_cast<std::size_t>(ni) * (nj + 1), 1.0),
        j_fp_(j_f_.size(), 1.0) {}

  double i_f(int i, int j) const noexcept { return i_f_[i_index(i, j)]; }
  double i_fp(int i, int j) const noexcept { return i_fp_[i_index(i, j)]; }
  double j_f(int i, int j) const noexcept { return j_f_[j_index(i, j)]; }
  double j_fp(int i, int j) const noexcept { return j_fp_[j_index(i, j)]; }

  double& i_f(int i, int j) noexcept { return i_f_[i_index(i, j)]; }
  double& i_fp(int i, int j) noexcept { return i_fp_[i_index(i, j)]; }
  double& j_f(int i, int j) noexcept { return j_f_[j_index(i, j)]; }
  double& j_fp(int i, int j) noexcept { return j_fp_[j_index(i, j)]; }

  int ni() const noexcept { return ni_; }
  int nj() const noexcept { return nj_; }

 private:
  std::size_t i_index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * (ni_ + 1) + i;
  }
  std::size_t j_index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * ni_ + i;
  }

  int ni_ = 0;
  int nj_ = 0;
  std::vector<double> i_f_, i_fp_, j_f_, j_fp_;
};

/// Two-pass gather over cell pressures (ghost layer filled). f_p on a face is
/// the minimum of f over every face of its two adjacent cells. Ghost cells
/// contribute no faces (treated as f = 1) unless the direction is periodic,
/// in which case the wrapped interior cell is used.
inline ShockSensorField shock_sensor(const StructuredMesh& mesh, const CellField<double>& pressure) {
  const int ni = mesh.ni();
  const int nj = mesh.nj();
  ShockSensorField s(ni, nj);

  for (int j = 0; j < nj; ++j) {
    for (int i = 0; i <= ni; ++i) {
      s.i_f(i, j) = face_pressure_function(pressure(i - 1, j), pressure(i, j));
    }
  }
  for (int j = 0; j <= nj; ++j) {
    for (int i = 0; i < ni; ++i) {
      s.j_f(i, j) = face_pressure_function(pressure(i, j - 1), pressure(i, j));
    }
  }

  std::vector<double> cell_min(static_cast<std::size_t>(ni) * nj);
  for (int j = 0; j < nj; ++j) {
    for (int i = 0; i < ni; ++i) {
      cell_min[static_cast<std::size_t>(j) * ni + i] =
          std::min(std::min(s.i_f(i, j), s.i_f(i + 1, j)), std::min(s.j_f(i, j), s.j_f(i, j + 1)));
    }
  }
  const bool wrap_i = mesh.periodic_i();
  const bool wrap_j = mesh.periodic_j();
  auto min_of = [&](int i, int j) {
    if (i < 0 || i >= ni) {
      if (!wrap_i) return 1.0;
      i = (i + ni) % ni;
    }
    if (j < 0 || j >= nj) {
      if (!wrap_j) return 1.0;
      j = (j + nj) % nj;
    }
    return cell_min[static_cast<std::size_t>(j) * ni + i];
  };

  for (int j = 0; j < nj; ++j) {
    for (int i = 0; i <= ni; ++i) {
      s.i_fp(i, j) = std::min(min_of(i - 1, j), min_of(i, j));
    }
  }
  for (int j = 0; j <= nj; ++j) {
    for (int i = 0; i < ni; ++i) {
      s.j_fp(i, j) = std::min(min_of(i, j - 1), min_of(i, j));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Pressure dissipative flux
// ---------------------------------------------------------------------------

/// F_p = (f_p - 1) S_L S_R/(S_R - S_L) delta_2 (dp / a^2) R_2, subsonic branch only.
inline FluxVector pressure_dissipation_flux(const RoeAverage& roe, const WaveSpeeds& speeds,
                                            double f_p, double dp) noexcept {
  const double delta2 = detail::antidiffusion_coefficient(roe);
  const double coeff = (f_p - 1.0) * detail::hll_weight(speeds) * delta2 * dp /
                       (roe.a_hat * roe.a_hat);
  const ConservedState r2 = roe.entropy_eigenvector();
  return rate(coeff, r2);
}

// ---------------------------------------------------------------------------
// Low-Mach velocity fix
// ---------------------------------------------------------------------------

/// z = min(max(M_L, M_R), 1) with M from the full velocity magnitude.
inline double low_mach_z(const PrimitiveState& wl, const PrimitiveState& wr,
                         const GasModel& gas) noexcept {
  return std::min(std::max(mach_number(wl, gas), mach_number(wr, gas)), 1.0);
}

/// Scales the interface velocity jump by z, then blends back toward the
/// unmodified velocities by (1 - f_p) so the fix is off at strong shocks.
inline std::pair<PrimitiveState, PrimitiveState> modify_velocities(const PrimitiveState& wl,
                                                                   const PrimitiveState& wr,
                                                                   double z, double f_p) noexcept {
  const double a = 0.5 * (1.0 + z);
  const double b = 0.5 * (1.0 - z);
  const double ul_star = a * wl.u + b * wr.u;
  const double vl_star = a * wl.v + b * wr.v;
  const double ur_star = a * wr.u + b * wl.u;
  const double vr_star = a * wr.v + b * wl.v;

  PrimitiveState l = wl;
  PrimitiveState r = wr;
  l.u = f_p * ul_star + (1.0 - f_p) * wl.u;
  l.v = f_p * vl_star + (1.0 - f_p) * wl.v;
  r.u = f_p * ur_star + (1.0 - f_p) * wr.u;
  r.v = f_p * vr_star + (1.0 - f_p) * wr.v;
  return {l, r};
}

// ---------------------------------------------------------------------------
// Assembled all-speed fluxes
// ---------------------------------------------------------------------------

enum class AllSpeedKind { ashllem, ashllc };

struct AllSpeedFaceInput {
  PrimitiveState wl;
  PrimitiveState wr;
  double f_p = 1.0;
  UnitNormal n;
};

/// Base HLLEM/HLLC flux on the velocity-modified states plus F_p in the
/// subsonic branch; supersonic faces get the plain upwind flux. Roe averages
/// and Davis speeds inside F_p use the modified states as well.
inline FluxVector ashll_flux(AllSpeedKind kind, const AllSpeedFaceInput& in,
                             const GasModel& gas) {
  const double z = low_mach_z(in.wl, in.wr, gas);
  const auto [wl, wr] = (z == 1.0) ? std::pair{in.wl, in.wr}
                                   : modify_velocities(in.wl, in.wr, z, in.f_p);
  const WaveSpeeds s = davis_wave_speeds(wl, wr, in.n, gas);
  if (s.s_l >= 0.0) return physical_flux(in.wl, in.n, gas);
  if (s.s_r <= 0.0) return physical_flux(in.wr, in.n, gas);

  FluxVector f = (kind == AllSpeedKind::ashllem) ? hllem_flux(wl, wr, in.n, gas)
                                                 : hllc_flux(wl, wr, in.n, gas);
  if (in.f_p < 1.0) {
    const RoeAverage roe = roe_average(wl, wr, in.n, gas);
    f += pressure_dissipation_flux(roe, s, in.f_p, wr.p - wl.p);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Scheme dispatch
// ---------------------------------------------------------------------------

enum class FluxScheme { hll, hllem, hllc, ashllem, ashllc };

constexpr bool uses_shock_sensor(FluxScheme s) noexcept {
  return s == FluxScheme::ashllem || s == FluxScheme::ashllc;
}

constexpr std::string_view to_string(FluxScheme s) noexcept {
  switch (s) {
    case FluxScheme::hll: return "HLL";
    case FluxScheme::hllem: return "HLLEM";
    case FluxScheme::hllc: return "HLLC";
    case FluxScheme::ashllem: return "ASHLLEM";
    case FluxScheme::ashllc: return "ASHLLC";
  }
  return "?";
}

/// Interface flux for any scheme. HLLC-based schemes fall back to HLL on
/// coincident waves.
inline FluxVector face_flux(FluxScheme scheme, const PrimitiveState& wl, const PrimitiveState& wr,
                            UnitNormal n, double f_p, const GasModel& gas) {
  try {
    switch (scheme) {
      case FluxScheme::hll: return hll_flux(wl, wr, n, gas);
      case FluxScheme::hllem: return hllem_flux(wl, wr, n, gas);
      case FluxScheme::hllc: return hllc_flux(wl, wr, n, gas);
      case FluxScheme::ashllem: return ashll_flux(AllSpeedKind::ashllem, {wl, wr, f_p, n}, gas);
      case FluxScheme::ashllc: return ashll_flux(AllSpeedKind::ashllc, {wl, wr, f_p, n}, gas);
    }
  } catch (const DegenerateWaveSpeeds&) {
    return hll_flux(wl, wr, n, gas);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Perturbation damping coefficient xi_p
// ---------------------------------------------------------------------------

enum class PerturbationDirection { normal, transverse };

/// Coefficient multiplying the pressure perturbation in the mass-flux update
/// driven by F_p. `speeds` carries (S_M, S_R) for the shock-normal form and
/// (S_L, S_R) for the transverse form; the star velocity is u* resp. v*.
inline double xi_p_diagnostic(PerturbationDirection dir, const PrimitiveState& star,
                              const WaveSpeeds& speeds, double f_p, double courant,
                              const GasModel& gas) noexcept {
  const double a = sound_speed(star, gas);
  const double vel = (dir == PerturbationDirection::normal) ? star.u : star.v;
  const double weight = speeds.s_l * speeds.s_r / (speeds.s_r - speeds.s_l);
  const double factor = (dir == PerturbationDirection::normal) ? 1.0 : 4.0;
  return factor * (1.0 - f_p) * weight * courant * vel / (a * (vel + a) * (vel + a));
}

}  // namespace ashll
