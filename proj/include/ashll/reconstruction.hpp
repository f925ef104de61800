#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace ashll {

enum class LimiterKind { first_order, minmod, van_albada };

inline constexpr double kVanAlbadaEpsilon = 1e-12;

inline double minmod(double a, double b) noexcept {
  if (a * b <= 0.0) return 0.0;
  return (a > 0.0) ? std::min(a, b) : std::max(a, b);
}

/// Smooth weight s = (2ab + eps)/(a^2 + b^2 + eps), clipped to zero at extrema.
inline double van_albada_weight(double a, double b) noexcept {
  if (a * b <= 0.0) return 0.0;
  return (2.0 * a * b + kVanAlbadaEpsilon) / (a * a + b * b + kVanAlbadaEpsilon);
}

/// Limited cell slope from backward/forward differences.
inline double limited_slope(double d_minus, double d_plus, LimiterKind kind) noexcept {
  switch (kind) {
    case LimiterKind::first_order: return 0.0;
    case LimiterKind::minmod: return minmod(d_minus, d_plus);
    case LimiterKind::van_albada:
      return 0.5 * van_albada_weight(d_minus, d_plus) * (d_minus + d_plus);
  }
  return 0.0;
}

struct FaceValues {
  double left = 0.0;   // extrapolated from the cell on the low-index side
  double right = 0.0;  // extrapolated from the cell on the high-index side
};

/// Values a cell extrapolates to its low-index (`minus`) and high-index
/// (`plus`) faces.
struct CellExtrapolation {
  double minus = 0.0;
  double plus = 0.0;
};

inline CellExtrapolation extrapolate_cell(double u, double d_minus, double d_plus,
                                          LimiterKind kind, double kappa) noexcept {
  switch (kind) {
    case LimiterKind::first_order:
      return {u, u};
    case LimiterKind::minmod: {
      // compression beta = (3 - kappa)/(1 - kappa) keeps face values inside the
      // neighbor range
      const double beta = (3.0 - kappa) / (1.0 - kappa);
      const double dm = minmod(d_minus, beta * d_plus);
      const double dp = minmod(d_plus, beta * d_minus);
      return {u - 0.25 * ((1.0 - kappa) * dp + (1.0 + kappa) * dm),
              u + 0.25 * ((1.0 - kappa) * dm + (1.0 + kappa) * dp)};
    }
    case LimiterKind::van_albada: {
      const double s = van_albada_weight(d_minus, d_plus);
      return {u - 0.25 * s * ((1.0 - kappa * s) * d_plus + (1.0 + kappa * s) * d_minus),
              u + 0.25 * s * ((1.0 - kappa * s) * d_minus + (1.0 + kappa * s) * d_plus)};
    }
  }
  return {u, u};
}

/// MUSCL face values along one grid line, written into `faces` (size n-1).
/// `line` holds n >= 2 cell values, first and last being ghost cells; face f
/// lies between line[f] and line[f+1]. Faces touching a ghost cell stay first
/// order.
inline void muscl_faces_into(std::span<const double> line, LimiterKind kind, double kappa,
                             std::span<FaceValues> faces) noexcept {
  const std::size_t n = line.size();
  for (std::size_t f = 0; f + 1 < n; ++f) faces[f] = {line[f], line[f + 1]};
  if (kind == LimiterKind::first_order) return;

  for (std::size_t c = 1; c + 1 < n; ++c) {
    const auto e = extrapolate_cell(line[c], line[c] - line[c - 1], line[c + 1] - line[c], kind,
                                    kappa);
    if (c + 2 < n) faces[c].left = e.plus;
    if (c > 1) faces[c - 1].right = e.minus;
  }
}

inline std::vector<FaceValues> muscl_faces(std::span<const double> line, LimiterKind kind,
                                           double kappa) {
  if (line.size() < 2) throw std::invalid_argument("muscl_faces: line needs at least two cells");
  if (kappa >= 1.0 || kappa < -1.0) throw std::invalid_argument("muscl_faces: kappa in [-1, 1)");
  std::vector<FaceValues> faces(line.size() - 1);
  muscl_faces_into(line, kind, kappa, faces);
  return faces;
}

}  // namespace ashll
