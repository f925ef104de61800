#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <variant>

#include "ashll/errors.hpp"

namespace ashll {

// ---------------------------------------------------------------------------
// Gas model
// ---------------------------------------------------------------------------

struct ConstantViscosity {
  double mu = 0.0;
};

/// mu = mu_ref * (T/T_ref)^{3/2} * (T_ref + S) / (T + S)
struct SutherlandViscosity {
  double mu_ref = 1.716e-5;
  double T_ref = 273.15;
  double S = 110.4;
};

using ViscosityModel = std::variant<ConstantViscosity, SutherlandViscosity>;

/// Calorically perfect gas. Temperature is T = p / (rho * gas_constant); the
/// case configuration fixes the nondimensionalization through gas_constant.
struct GasModel {
  double gamma = 1.4;
  double prandtl = 0.72;
  double gas_constant = 1.0;
  ViscosityModel viscosity = ConstantViscosity{0.0};

  double cp() const noexcept { return gamma * gas_constant / (gamma - 1.0); }

  double dynamic_viscosity(double T) const noexcept {
    if (const auto* c = std::get_if<ConstantViscosity>(&viscosity)) {
      return c->mu;
    }
    const auto& s = std::get<SutherlandViscosity>(viscosity);
    return s.mu_ref * std::pow(T / s.T_ref, 1.5) * (s.T_ref + s.S) / (T + s.S);
  }

  double conductivity(double mu) const noexcept { return mu * cp() / prandtl; }
};

// ---------------------------------------------------------------------------
// Four-component vector arithmetic shared by conserved states and fluxes
// ---------------------------------------------------------------------------

template <class Derived>
struct Vec4 {
  std::array<double, 4> c{};

  constexpr double& operator[](std::size_t k) noexcept { return c[k]; }
  constexpr double operator[](std::size_t k) const noexcept { return c[k]; }

  constexpr Derived& operator+=(const Derived& o) noexcept {
    for (std::size_t k = 0; k < 4; ++k) c[k] += o.c[k];
    return self();
  }
  constexpr Derived& operator-=(const Derived& o) noexcept {
    for (std::size_t k = 0; k < 4; ++k) c[k] -= o.c[k];
    return self();
  }
  constexpr Derived& operator*=(double s) noexcept {
    for (auto& x : c) x *= s;
    return self();
  }

  friend constexpr Derived operator+(Derived a, const Derived& b) noexcept { return a += b; }
  friend constexpr Derived operator-(Derived a, const Derived& b) noexcept { return a -= b; }
  friend constexpr Derived operator*(double s, Derived a) noexcept { return a *= s; }
  friend constexpr Derived operator*(Derived a, double s) noexcept { return a *= s; }
  friend constexpr Derived operator/(Derived a, double s) noexcept { return a *= (1.0 / s); }
  friend constexpr Derived operator-(Derived a) noexcept { return a *= -1.0; }
  friend constexpr bool operator==(const Vec4& a, const Vec4& b) noexcept { return a.c == b.c; }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double x : c) m = std::fmax(m, std::fabs(x));
    return m;
  }

  bool finite() const noexcept {
    for (double x : c) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  }

 private:
  constexpr Derived& self() noexcept { return static_cast<Derived&>(*this); }
};

struct ConservedState : Vec4<ConservedState> {
  constexpr ConservedState() = default;
  constexpr ConservedState(double rho, double rho_u, double rho_v, double rho_E) noexcept
      : Vec4<ConservedState>{{rho, rho_u, rho_v, rho_E}} {}

  constexpr double rho() const noexcept { return c[0]; }
  constexpr double rho_u() const noexcept { return c[1]; }
  constexpr double rho_v() const noexcept { return c[2]; }
  constexpr double rho_E() const noexcept { return c[3]; }
};

/// Numerical or physical flux per unit face length.
struct FluxVector : Vec4<FluxVector> {
  constexpr FluxVector() = default;
  constexpr FluxVector(double mass, double x_momentum, double y_momentum, double energy) noexcept
      : Vec4<FluxVector>{{mass, x_momentum, y_momentum, energy}} {}

  constexpr double mass() const noexcept { return c[0]; }
  constexpr double x_momentum() const noexcept { return c[1]; }
  constexpr double y_momentum() const noexcept { return c[2]; }
  constexpr double energy() const noexcept { return c[3]; }
};

/// Flux carried by a conserved jump travelling at `speed`.
constexpr FluxVector rate(double speed, const ConservedState& jump) noexcept {
  return {speed * jump[0], speed * jump[1], speed * jump[2], speed * jump[3]};
}

struct PrimitiveState {
  double rho = 1.0;
  double u = 0.0;
  double v = 0.0;
  double p = 1.0;

  constexpr std::array<double, 4> as_array() const noexcept { return {rho, u, v, p}; }
  static constexpr PrimitiveState from_array(const std::array<double, 4>& a) noexcept {
    return {a[0], a[1], a[2], a[3]};
  }
  friend constexpr bool operator==(const PrimitiveState&, const PrimitiveState&) = default;
};

struct UnitNormal {
  double nx = 1.0;
  double ny = 0.0;

  constexpr UnitNormal operator-() const noexcept { return {-nx, -ny}; }
};

// ---------------------------------------------------------------------------
// Pointwise relations
// ---------------------------------------------------------------------------

constexpr double normal_velocity(const PrimitiveState& w, UnitNormal n) noexcept {
  return w.u * n.nx + w.v * n.ny;
}

inline double sound_speed(const PrimitiveState& w, const GasModel& gas) noexcept {
  return std::sqrt(gas.gamma * w.p / w.rho);
}

inline double temperature(const PrimitiveState& w, const GasModel& gas) noexcept {
  return w.p / (w.rho * gas.gas_constant);
}

inline double mach_number(const PrimitiveState& w, const GasModel& gas) noexcept {
  return std::sqrt(w.u * w.u + w.v * w.v) / sound_speed(w, gas);
}

/// Specific total energy E.
constexpr double specific_total_energy(const PrimitiveState& w, const GasModel& gas) noexcept {
  return w.p / ((gas.gamma - 1.0) * w.rho) + 0.5 * (w.u * w.u + w.v * w.v);
}

inline bool is_physical(const PrimitiveState& w) noexcept {
  return w.rho > 0.0 && w.p > 0.0 && std::isfinite(w.rho) && std::isfinite(w.u) &&
         std::isfinite(w.v) && std::isfinite(w.p);
}

constexpr ConservedState primitive_to_conserved(const PrimitiveState& w,
                                                const GasModel& gas) noexcept {
  const double kinetic = 0.5 * w.rho * (w.u * w.u + w.v * w.v);
  return {w.rho, w.rho * w.u, w.rho * w.v, w.p / (gas.gamma - 1.0) + kinetic};
}

/// Throws NonPhysicalState when rho <= 0 or the inferred pressure is <= 0.
inline PrimitiveState conserved_to_primitive(const ConservedState& U, const GasModel& gas) {
  const double rho = U.rho();
  if (!(rho > 0.0)) {
    throw NonPhysicalState("non-positive density");
  }
  const double u = U.rho_u() / rho;
  const double v = U.rho_v() / rho;
  const double p = (gas.gamma - 1.0) * (U.rho_E() - 0.5 * rho * (u * u + v * v));
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw NonPhysicalState("non-positive pressure");
  }
  return {rho, u, v, p};
}

/// Convective flux (rho q, rho u q + p nx, rho v q + p ny, (rho E + p) q).
constexpr FluxVector physical_flux(const PrimitiveState& w, UnitNormal n,
                                   const GasModel& gas) noexcept {
  const double q = normal_velocity(w, n);
  const double mass = w.rho * q;
  const double rhoE = w.p / (gas.gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v);
  return {mass, mass * w.u + w.p * n.nx, mass * w.v + w.p * n.ny, (rhoE + w.p) * q};
}

// ---------------------------------------------------------------------------
// Roe average
// ---------------------------------------------------------------------------

struct RoeAverage {
  double rho_hat = 1.0;
  double u_hat = 0.0;
  double v_hat = 0.0;
  double a_hat = 1.0;
  double q_hat = 0.0;

  /// Entropy-wave eigenvector (1, u, v, (u^2+v^2)/2).
  constexpr ConservedState entropy_eigenvector() const noexcept {
    return {1.0, u_hat, v_hat, 0.5 * (u_hat * u_hat + v_hat * v_hat)};
  }
};

/// sqrt(rho)-weighted averages of u, v and total enthalpy; rho_hat = sqrt(rho_L rho_R).
inline RoeAverage roe_average(const PrimitiveState& wl, const PrimitiveState& wr, UnitNormal n,
                              const GasModel& gas) noexcept {
  const double sl = std::sqrt(wl.rho);
  const double sr = std::sqrt(wr.rho);
  const double inv = 1.0 / (sl + sr);
  const double hl = specific_total_energy(wl, gas) + wl.p / wl.rho;
  const double hr = specific_total_energy(wr, gas) + wr.p / wr.rho;

  RoeAverage r;
  r.rho_hat = sl * sr;
  r.u_hat = (sl * wl.u + sr * wr.u) * inv;
  r.v_hat = (sl * wl.v + sr * wr.v) * inv;
  const double h_hat = (sl * hl + sr * hr) * inv;
  const double a2 = (gas.gamma - 1.0) * (h_hat - 0.5 * (r.u_hat * r.u_hat + r.v_hat * r.v_hat));
  r.a_hat = std::sqrt(a2);
  r.q_hat = r.u_hat * n.nx + r.v_hat * n.ny;
  return r;
}

}  // namespace ashll
