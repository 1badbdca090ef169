#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace carleson {

/// Deterministic integration rules for the circle, the radial interval
/// [0, 1-2^-J] with dyadic clustering at 1, the truncated disc, and
/// refinement-based error estimation.
struct QuadratureRule {
  enum class Kind { Circle, Radial, Disc };

  Kind kind = Kind::Circle;
  // Circle: x = angle in [0, 2pi). Radial: x = radius in [0, 1).
  // Disc: (x, y) = (radius, angle) pairs.
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> w;

  int m = 0;      // circle node count
  int j = 0;      // dyadic radial levels
  int order = 0;  // Gauss-Legendre points per panel

  std::size_t size() const { return x.size(); }
  double total_weight() const;
};

// M equispaced angles 2*pi*i/M, weight 1/M each (normalized measure dm).
// Spectrally exact for trigonometric polynomials of degree < M.
QuadratureRule circle_nodes(int m);

// Dyadic panels [1-2^-j, 1-2^-(j+1)], j = 0..J-1, an `order`-point
// Gauss-Legendre rule on each; covers [0, 1-2^-J] with plain dr weight.
QuadratureRule radial_composite(int j, int order);

// Product of circle_nodes(m) and radial_composite(j, order) with weight
// r dr dtheta (Lebesgue area; total mass pi*(1-2^-j)^2).
QuadratureRule disc_rule(int m, int j, int order);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);
double integrate(const QuadratureRule& rule,
                 const std::function<double(double, double)>& f);

struct RefinementEstimate {
  double value = 0.0;           // finest-level result
  double error_estimate = 0.0;  // |last - previous|
  int levels_used = 0;
};

// Evaluates the integral at successively doubled resolutions (level k uses
// circle 2^k*m nodes, radial j+k levels). Throws on non-finite samples.
RefinementEstimate refine_and_estimate(const std::function<double(double)>& f,
                                       const QuadratureRule& base, int levels);
RefinementEstimate refine_and_estimate(const std::function<double(double, double)>& f,
                                       const QuadratureRule& base, int levels);

}  // namespace carleson
