#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "ashll/errors.hpp"
#include "ashll/gas_state.hpp"

namespace ashll {

struct WaveSpeeds {
  double s_l = 0.0;
  double s_r = 0.0;
  std::optional<double> s_star;
};

/// S_L = min(q_L - a_L, q_R - a_R), S_R = max(q_L + a_L, q_R + a_R).
inline WaveSpeeds davis_wave_speeds(const PrimitiveState& wl, const PrimitiveState& wr,
                                    UnitNormal n, const GasModel& gas) noexcept {
  const double ql = normal_velocity(wl, n);
  const double qr = normal_velocity(wr, n);
  const double al = sound_speed(wl, gas);
  const double ar = sound_speed(wr, gas);
  return {std::min(ql - al, qr - ar), std::max(ql + al, qr + ar), std::nullopt};
}

namespace detail {

inline double hll_weight(const WaveSpeeds& s) noexcept {
  return s.s_l * s.s_r / (s.s_r - s.s_l);
}

/// Subsonic-branch HLL flux (S_R F_L - S_L F_R)/(S_R - S_L) + c (U_R - U_L).
inline FluxVector hll_middle(const FluxVector& fl, const FluxVector& fr, const ConservedState& ul,
                             const ConservedState& ur, const WaveSpeeds& s) noexcept {
  const double inv = 1.0 / (s.s_r - s.s_l);
  FluxVector f = (s.s_r * inv) * fl - (s.s_l * inv) * fr;
  f += rate(hll_weight(s), ur - ul);
  return f;
}

/// Anti-diffusion coefficient a/(a + |q|) on the linearly degenerate fields.
inline double antidiffusion_coefficient(const RoeAverage& roe) noexcept {
  return roe.a_hat / (roe.a_hat + std::fabs(roe.q_hat));
}

/// Combined shear-wave term rho_hat (0, du - dq nx, dv - dq ny, u du + v dv - q dq).
inline ConservedState shear_wave_term(const PrimitiveState& wl, const PrimitiveState& wr,
                                      const RoeAverage& roe, UnitNormal n) noexcept {
  const double du = wr.u - wl.u;
  const double dv = wr.v - wl.v;
  const double dq = normal_velocity(wr, n) - normal_velocity(wl, n);
  return roe.rho_hat * ConservedState{0.0, du - dq * n.nx, dv - dq * n.ny,
                                      roe.u_hat * du + roe.v_hat * dv - roe.q_hat * dq};
}

}  // namespace detail

inline FluxVector hll_flux(const PrimitiveState& wl, const PrimitiveState& wr, UnitNormal n,
                           const GasModel& gas) noexcept {
  const WaveSpeeds s = davis_wave_speeds(wl, wr, n, gas);
  if (s.s_l >= 0.0) return physical_flux(wl, n, gas);
  if (s.s_r <= 0.0) return physical_flux(wr, n, gas);
  return detail::hll_middle(physical_flux(wl, n, gas), physical_flux(wr, n, gas),
                            primitive_to_conserved(wl, gas), primitive_to_conserved(wr, gas), s);
}

/// HLL with the entropy and shear waves restored by Roe-averaged anti-diffusion.
/// With delta evaluated on the Roe normal velocity a stationary contact is exact.
inline FluxVector hllem_flux(const PrimitiveState& wl, const PrimitiveState& wr, UnitNormal n,
                             const GasModel& gas) noexcept {
  const WaveSpeeds s = davis_wave_speeds(wl, wr, n, gas);
  if (s.s_l >= 0.0) return physical_flux(wl, n, gas);
  if (s.s_r <= 0.0) return physical_flux(wr, n, gas);

  const RoeAverage roe = roe_average(wl, wr, n, gas);
  const double delta = detail::antidiffusion_coefficient(roe);
  const double alpha2 = (wr.rho - wl.rho) - (wr.p - wl.p) / (roe.a_hat * roe.a_hat);

  const ConservedState ul = primitive_to_conserved(wl, gas);
  const ConservedState ur = primitive_to_conserved(wr, gas);
  ConservedState jump = ur - ul;
  jump -= (delta * alpha2) * roe.entropy_eigenvector();
  jump -= delta * detail::shear_wave_term(wl, wr, roe, n);

  const FluxVector fl = physical_flux(wl, n, gas);
  const FluxVector fr = physical_flux(wr, n, gas);
  const double inv = 1.0 / (s.s_r - s.s_l);
  FluxVector f = (s.s_r * inv) * fl - (s.s_l * inv) * fr;
  f += rate(detail::hll_weight(s), jump);
  return f;
}

namespace detail {

/// HLLC star state behind the K-wave: alpha_K = rho_K (S_K - q_K).
inline ConservedState hllc_star_state(const PrimitiveState& w, double q, double alpha,
                                      double s_k, double s_star, UnitNormal n,
                                      const GasModel& gas) noexcept {
  const double rho_star = alpha / (s_k - s_star);
  const double u_star = w.u + n.nx * (s_star - q);
  const double v_star = w.v + n.ny * (s_star - q);
  const double e_star = specific_total_energy(w, gas) + (s_star - q) * (s_star + w.p / alpha);
  return {rho_star, rho_star * u_star, rho_star * v_star, rho_star * e_star};
}

}  // namespace detail

/// Contact speed S* of the HLLC fan. Throws DegenerateWaveSpeeds when
/// alpha_R - alpha_L vanishes.
inline double hllc_contact_speed(const PrimitiveState& wl, const PrimitiveState& wr,
                                 UnitNormal n, const WaveSpeeds& s) {
  const double ql = normal_velocity(wl, n);
  const double qr = normal_velocity(wr, n);
  const double alpha_l = wl.rho * (s.s_l - ql);
  const double alpha_r = wr.rho * (s.s_r - qr);
  const double den = alpha_r - alpha_l;
  if (!(den != 0.0) || !std::isfinite(den)) {
    throw DegenerateWaveSpeeds("HLLC: alpha_R - alpha_L is zero");
  }
  return (alpha_r * qr - alpha_l * ql + wl.p - wr.p) / den;
}

/// Star-region pressure p* consistent with hllc_contact_speed.
inline double hllc_star_pressure(const PrimitiveState& wl, const PrimitiveState& wr,
                                 UnitNormal n, const WaveSpeeds& s) {
  const double ql = normal_velocity(wl, n);
  const double qr = normal_velocity(wr, n);
  const double alpha_l = wl.rho * (s.s_l - ql);
  const double alpha_r = wr.rho * (s.s_r - qr);
  const double den = alpha_r - alpha_l;
  if (!(den != 0.0) || !std::isfinite(den)) {
    throw DegenerateWaveSpeeds("HLLC: alpha_R - alpha_L is zero");
  }
  return (alpha_r * wl.p - alpha_l * wr.p - alpha_l * alpha_r * (ql - qr)) / den;
}

inline FluxVector hllc_flux(const PrimitiveState& wl, const PrimitiveState& wr, UnitNormal n,
                            const GasModel& gas) {
  const WaveSpeeds s = davis_wave_speeds(wl, wr, n, gas);
  if (s.s_l >= 0.0) return physical_flux(wl, n, gas);
  if (s.s_r <= 0.0) return physical_flux(wr, n, gas);

  const double s_star = hllc_contact_speed(wl, wr, n, s);
  if (s_star >= 0.0) {
    const double ql = normal_velocity(wl, n);
    const double alpha_l = wl.rho * (s.s_l - ql);
    const ConservedState star = detail::hllc_star_state(wl, ql, alpha_l, s.s_l, s_star, n, gas);
    return physical_flux(wl, n, gas) + rate(s.s_l, star - primitive_to_conserved(wl, gas));
  }
  const double qr = normal_velocity(wr, n);
  const double alpha_r = wr.rho * (s.s_r - qr);
  const ConservedState star = detail::hllc_star_state(wr, qr, alpha_r, s.s_r, s_star, n, gas);
  return physical_flux(wr, n, gas) + rate(s.s_r, star - primitive_to_conserved(wr, gas));
}

}  // namespace ashll
