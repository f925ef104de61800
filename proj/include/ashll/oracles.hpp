#pragma once

// Reference solutions. Deliberately independent of the flux code.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ashll/errors.hpp"
#include "ashll/gas_state.hpp"

namespace ashll {

// ---------------------------------------------------------------------------
// Exact Riemann solver
// ---------------------------------------------------------------------------

enum class WaveKind { shock, rarefaction };

/// Exact solution of the 1D Riemann problem in x; v is advected passively.
class RiemannExactSolution {
 public:
  RiemannExactSolution(PrimitiveState wl, PrimitiveState wr, double gamma, double p_star,
                       double u_star)
      : wl_(wl), wr_(wr), gamma_(gamma), p_star_(p_star), u_star_(u_star) {}

  double star_pressure() const noexcept { return p_star_; }
  double star_velocity() const noexcept { return u_star_; }
  WaveKind left_wave() const noexcept { return p_star_ > wl_.p ? WaveKind::shock : WaveKind::rarefaction; }
  WaveKind right_wave() const noexcept { return p_star_ > wr_.p ? WaveKind::shock : WaveKind::rarefaction; }

  double star_density_left() const noexcept { return star_density(wl_); }
  double star_density_right() const noexcept { return star_density(wr_); }

  /// State at similarity coordinate s = x/t.
  PrimitiveState sample(double s) const noexcept {
    const double g = gamma_;
    if (s <= u_star_) {
      const auto& w = wl_;
      const double a = std::sqrt(g * w.p / w.rho);
      if (p_star_ > w.p) {
        const double shock = w.u - a * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / w.p +
                                                 (g - 1.0) / (2.0 * g));
        if (s <= shock) return w;
        return {star_density(w), u_star_, w.v, p_star_};
      }
      const double head = w.u - a;
      if (s <= head) return w;
      const double a_star = a * std::pow(p_star_ / w.p, (g - 1.0) / (2.0 * g));
      const double tail = u_star_ - a_star;
      if (s >= tail) return {star_density(w), u_star_, w.v, p_star_};
      const double c = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * a) * (w.u - s);
      return {w.rho * std::pow(c, 2.0 / (g - 1.0)),
              2.0 / (g + 1.0) * (a + 0.5 * (g - 1.0) * w.u + s), w.v,
              w.p * std::pow(c, 2.0 * g / (g - 1.0))};
    }
    const auto& w = wr_;
    const double a = std::sqrt(g * w.p / w.rho);
    if (p_star_ > w.p) {
      const double shock = w.u + a * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / w.p +
                                               (g - 1.0) / (2.0 * g));
      if (s >= shock) return w;
      return {star_density(w), u_star_, w.v, p_star_};
    }
    const double head = w.u + a;
    if (s >= head) return w;
    const double a_star = a * std::pow(p_star_ / w.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star_ + a_star;
    if (s <= tail) return {star_density(w), u_star_, w.v, p_star_};
    const double c = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * a) * (w.u - s);
    return {w.rho * std::pow(c, 2.0 / (g - 1.0)),
            2.0 / (g + 1.0) * (-a + 0.5 * (g - 1.0) * w.u + s), w.v,
            w.p * std::pow(c, 2.0 * g / (g - 1.0))};
  }

  /// Wave speeds bounding the fan: left head, right head.
  double left_head_speed() const noexcept {
    const double a = std::sqrt(gamma_ * wl_.p / wl_.rho);
    if (p_star_ > wl_.p) {
      return wl_.u - a * std::sqrt((gamma_ + 1.0) / (2.0 * gamma_) * p_star_ / wl_.p +
                                   (gamma_ - 1.0) / (2.0 * gamma_));
    }
    return wl_.u - a;
  }
  double right_head_speed() const noexcept {
    const double a = std::sqrt(gamma_ * wr_.p / wr_.rho);
    if (p_star_ > wr_.p) {
      return wr_.u + a * std::sqrt((gamma_ + 1.0) / (2.0 * gamma_) * p_star_ / wr_.p +
                                   (gamma_ - 1.0) / (2.0 * gamma_));
    }
    return wr_.u + a;
  }

 private:
  double star_density(const PrimitiveState& w) const noexcept {
    const double g = gamma_;
    const double r = p_star_ / w.p;
    if (p_star_ > w.p) {
      const double k = (g - 1.0) / (g + 1.0);
      return w.rho * (r + k) / (k * r + 1.0);
    }
    return w.rho * std::pow(r, 1.0 / g);
  }

  PrimitiveState wl_;
  PrimitiveState wr_;
  double gamma_;
  double p_star_;
  double u_star_;
};

namespace detail {

struct PressureFunction {
  double f = 0.0;
  double df = 0.0;
};

inline PressureFunction pressure_function(double p, const PrimitiveState& w, double g) noexcept {
  const double a = std::sqrt(g * w.p / w.rho);
  if (p > w.p) {
    const double A = 2.0 / ((g + 1.0) * w.rho);
    const double B = (g - 1.0) / (g + 1.0) * w.p;
    const double q = std::sqrt(A / (p + B));
    return {(p - w.p) * q, q * (1.0 - 0.5 * (p - w.p) / (B + p))};
  }
  const double r = p / w.p;
  return {2.0 * a / (g - 1.0) * (std::pow(r, (g - 1.0) / (2.0 * g)) - 1.0),
          std::pow(r, -(g + 1.0) / (2.0 * g)) / (w.rho * a)};
}

}  // namespace detail

/// Newton iteration on the pressure function from a two-rarefaction guess.
inline RiemannExactSolution exact_riemann(const PrimitiveState& wl, const PrimitiveState& wr,
                                          const GasModel& gas) {
  const double g = gas.gamma;
  if (!(wl.rho > 0.0 && wl.p > 0.0 && wr.rho > 0.0 && wr.p > 0.0)) {
    throw NonPhysicalState("exact_riemann: nonpositive density or pressure");
  }
  const double al = std::sqrt(g * wl.p / wl.rho);
  const double ar = std::sqrt(g * wr.p / wr.rho);
  const double du = wr.u - wl.u;
  if (2.0 * (al + ar) / (g - 1.0) <= du) {
    throw VacuumGenerated("exact_riemann: initial data generate vacuum");
  }

  const double z = (g - 1.0) / (2.0 * g);
  double p = std::pow((al + ar - 0.5 * (g - 1.0) * du) /
                          (al / std::pow(wl.p, z) + ar / std::pow(wr.p, z)),
                      1.0 / z);
  for (int it = 0; it < 200; ++it) {
    const auto fl = detail::pressure_function(p, wl, g);
    const auto fr = detail::pressure_function(p, wr, g);
    double next = p - (fl.f + fr.f + du) / (fl.df + fr.df);
    if (!(next > 0.0)) next = 0.5 * p;
    const double change = std::fabs(next - p);
    p = next;
    if (change < 1e-12 * std::max(1.0, p)) break;
  }
  const auto fl = detail::pressure_function(p, wl, g);
  const auto fr = detail::pressure_function(p, wr, g);
  const double u = 0.5 * (wl.u + wr.u) + 0.5 * (fr.f - fl.f);
  return RiemannExactSolution(wl, wr, g, p, u);
}

// ---------------------------------------------------------------------------
// Shock relations
// ---------------------------------------------------------------------------

struct NormalShockRatios {
  double density_ratio = 1.0;
  double pressure_ratio = 1.0;
  double velocity_ratio = 1.0;  // shock-frame normal velocity u2/u1
};

inline NormalShockRatios normal_shock_rh(double mach, const GasModel& gas) {
  if (!(mach >= 1.0)) throw std::domain_error("normal_shock_rh: upstream Mach below 1");
  const double g = gas.gamma;
  const double m2 = mach * mach;
  const double rho = (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0);
  const double p = 1.0 + 2.0 * g * (m2 - 1.0) / (g + 1.0);
  return {rho, p, 1.0 / rho};
}

/// State behind a shock moving with Mach `mach` relative to `upstream`. The
/// shock line makes `shock_angle_deg` with the x axis and propagates along
/// n = (sin, -cos); tangential velocity is unchanged.
inline PrimitiveState oblique_post_shock(const PrimitiveState& upstream, double mach,
                                         double shock_angle_deg, const GasModel& gas) {
  const auto r = normal_shock_rh(mach, gas);
  const double angle = shock_angle_deg * std::numbers::pi / 180.0;
  const double nx = std::sin(angle);
  const double ny = -std::cos(angle);
  const double a1 = std::sqrt(gas.gamma * upstream.p / upstream.rho);
  const double jump = mach * a1 * (1.0 - 1.0 / r.density_ratio);
  return {upstream.rho * r.density_ratio, upstream.u + jump * nx, upstream.v + jump * ny,
          upstream.p * r.pressure_ratio};
}

// ---------------------------------------------------------------------------
// Couette flow
// ---------------------------------------------------------------------------

/// Plane Couette flow between a resting wall at y = 0 (temperature t_bottom)
/// and a wall at y = h moving with u_wall (temperature t_top); constant mu.
struct CouetteProfile {
  double u_wall = 0.0;
  double h = 1.0;
  double mu = 0.0;
  double conductivity = 0.0;
  double t_bottom = 1.0;
  double t_top = 1.0;

  double velocity(double y) const noexcept { return u_wall * y / h; }
  double temperature(double y) const noexcept {
    const double eta = y / h;
    return t_bottom + (t_top - t_bottom) * eta +
           mu * u_wall * u_wall / (2.0 * conductivity) * eta * (1.0 - eta);
  }
};

inline CouetteProfile couette_exact(double u_wall, double h, double mu, const GasModel& gas,
                                    double t_bottom = 1.0, double t_top = 1.0) {
  if (!(h > 0.0) || !(mu > 0.0)) throw std::invalid_argument("couette_exact: need h > 0, mu > 0");
  return {u_wall, h, mu, gas.conductivity(mu), t_bottom, t_top};
}

}  // namespace ashll
