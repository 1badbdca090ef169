#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "carleson/normed_space.hpp"
#include "carleson/quadrature.hpp"
#include "carleson/trig_polynomial.hpp"

namespace carleson {

/// Dyadic arc grid on the circle: at depth j the arcs have normalized length
/// 2^-j with centers at resolution 2^-j / centers_per_level. Depth 0 is the
/// full circle.
struct ArcGrid {
  int max_depth = 5;
  int centers_per_level = 4;
};

struct Arc {
  double center = 0.0;  // normalized position in [0, 1)
  double length = 1.0;  // normalized arclength
  int depth = 0;
};

struct CarlesonReport {
  double value = 0.0;  // the supremum of the q-integral (not rooted)
  // argmax location: interior point for Poisson-type suprema, arc for tents.
  std::optional<Complex> argmax_point;
  std::optional<Arc> argmax_arc;
  std::string grid;  // resolution metadata
  double error_estimate = 0.0;
};

/// Hyperbolically quasi-uniform z0 sampling: z0 = (1-2^-j) e^{2 pi i m / M_j},
/// j = 0..J, M_j = max(8, 2^{j+3}); j = 0 is the single point z0 = 0.
std::vector<Complex> poisson_center_grid(int levels);

struct DiscGridSpec {
  int m = 0;      // circle nodes; 0 means max(64, 2N+1)
  int j = 10;     // dyadic radial levels
  int order = 6;  // Gauss-Legendre points per panel
  int resolved_m(int degree) const;
};

// sup over grid arcs (full circle included) of |I|^-1 int_I ||f - f_I|| dm.
double bmo_arc(const NormedSpace& space, const TrigPolynomial& f, const ArcGrid& grid);

// sup over the z0 grid of (int_T ||f(z)-f(z0)||^q P_z0(z) dm(z))^{1/q};
// the inner rule uses M >= max(2N+1, 2^{j+4}) circle nodes at level j.
double bmo_poisson_q(const NormedSpace& space, const TrigPolynomial& f, double q,
                     int z0_levels = 4);

enum class GradientMode { Full, Radial };

// (int_0^1 (1-r)^{q-1} ||grad f(r e^{i theta})||^q dr)^{1/q}; Radial mode
// replaces the gradient norm by ||d f / dr||.
double g_function(const NormedSpace& space, const TrigPolynomial& f, double q,
                  double theta, GradientMode mode = GradientMode::Full,
                  int radial_levels = 16, int radial_order = 8);

// (int_T g_function(., theta)^p dm)^{1/p}.
double g_Lp(const NormedSpace& space, const TrigPolynomial& f, double q, double p,
            int circle_m = 0, GradientMode mode = GradientMode::Full);

// (int over the Stolz region {|z - e^{i theta}| <= alpha (1-|z|)} of
//  (1-|z|)^{q-1} ||grad f||^q dA / (1-|z|)^2)^{1/q}.
double lusin_area(const NormedSpace& space, const TrigPolynomial& f, double q,
                  double theta, double aperture, GradientMode mode = GradientMode::Full,
                  const DiscGridSpec& disc = {});

struct PoissonCarlesonOptions {
  DiscGridSpec disc;
  int z0_levels = 4;
  bool with_error_estimate = true;
};

// sup_{z0} int_D (1-|z|^2)^{q-1} ||grad f(z)||^q P_z0(z) dA(z), the Poisson
// kernel extended into the disc.
CarlesonReport carleson_poisson(const NormedSpace& space, const TrigPolynomial& f,
                                double q, const PoissonCarlesonOptions& opts = {});

// Same supremum with ||f(z)||^q in place of the gradient and weight
// (1-|z|)^{q-1}: the lacunary-series functional.
CarlesonReport carleson_poisson_values(const NormedSpace& space, const TrigPolynomial& f,
                                       double q, const PoissonCarlesonOptions& opts = {});

// sup over dyadic tents T(I) = {r e^{i theta}: e^{i theta} in I, 1-r <= |I|}
// of |I|^-1 int_{T(I)} (1-|z|)^{q-1} ||grad f||^q dA.
CarlesonReport carleson_tent(const NormedSpace& space, const TrigPolynomial& f, double q,
                             const ArcGrid& grid, const DiscGridSpec& disc = {});

// carleson_tent restricted to arcs containing e^{i theta}.
double c_q_pointwise(const NormedSpace& space, const TrigPolynomial& f, double q,
                     double theta, const ArcGrid& grid, const DiscGridSpec& disc = {});

std::string report_to_json(const CarlesonReport& report, const std::string& functional,
                           double q);

}  // namespace carleson
