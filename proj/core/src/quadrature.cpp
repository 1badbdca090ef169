#include "carleson/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace carleson {

double QuadratureRule::total_weight() const {
  double s = 0.0;
  for (double wi : w) s += wi;
  return s;
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev initial guess, Newton on P_n.
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    nodes[i] = -t;
    nodes[n - 1 - i] = t;
    double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    weights[i] = wi;
    weights[n - 1 - i] = wi;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

QuadratureRule circle_nodes(int m) {
  if (m < 1) throw std::invalid_argument("circle_nodes: M must be >= 1");
  QuadratureRule r;
  r.kind = QuadratureRule::Kind::Circle;
  r.m = m;
  r.x.resize(m);
  r.w.assign(m, 1.0 / m);
  for (int i = 0; i < m; ++i) r.x[i] = 2.0 * std::numbers::pi * i / m;
  return r;
}

QuadratureRule radial_composite(int j, int order) {
  if (j < 1 || order < 1) throw std::invalid_argument("radial_composite: J, order must be >= 1");
  std::vector<double> gn, gw;
  gauss_legendre(order, gn, gw);
  QuadratureRule r;
  r.kind = QuadratureRule::Kind::Radial;
  r.j = j;
  r.order = order;
  r.x.reserve(static_cast<std::size_t>(j) * order);
  r.w.reserve(static_cast<std::size_t>(j) * order);
  for (int p = 0; p < j; ++p) {
    const double a = 1.0 - std::ldexp(1.0, -p);
    const double b = 1.0 - std::ldexp(1.0, -p - 1);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < order; ++i) {
      r.x.push_back(mid + half * gn[i]);
      r.w.push_back(half * gw[i]);
    }
  }
  return r;
}

QuadratureRule disc_rule(int m, int j, int order) {
  QuadratureRule circ = circle_nodes(m);
  QuadratureRule rad = radial_composite(j, order);
  QuadratureRule r;
  r.kind = QuadratureRule::Kind::Disc;
  r.m = m;
  r.j = j;
  r.order = order;
  const std::size_t n = rad.size() * circ.size();
  r.x.reserve(n);
  r.y.reserve(n);
  r.w.reserve(n);
  // Ring-major ordering: all angles of one radius are contiguous.
  for (std::size_t ir = 0; ir < rad.size(); ++ir) {
    const double rr = rad.x[ir];
    // dm carries 1/(2 pi); undo it so the product is r dr dtheta.
    const double wr = rad.w[ir] * rr * 2.0 * std::numbers::pi;
    for (std::size_t ic = 0; ic < circ.size(); ++ic) {
      r.x.push_back(rr);
      r.y.push_back(circ.x[ic]);
      r.w.push_back(wr * circ.w[ic]);
    }
  }
  return r;
}

namespace {

void check_finite(double v) {
  if (!std::isfinite(v)) throw std::domain_error("quadrature: non-finite integrand sample");
}

}  // namespace

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  if (rule.kind == QuadratureRule::Kind::Disc)
    throw std::invalid_argument("integrate: disc rule needs a two-argument integrand");
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double v = f(rule.x[i]);
    check_finite(v);
    s += rule.w[i] * v;
  }
  return s;
}

double integrate(const QuadratureRule& rule,
                 const std::function<double(double, double)>& f) {
  if (rule.kind != QuadratureRule::Kind::Disc)
    throw std::invalid_argument("integrate: two-argument integrand needs a disc rule");
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double v = f(rule.x[i], rule.y[i]);
    check_finite(v);
    s += rule.w[i] * v;
  }
  return s;
}

namespace {

QuadratureRule refined(const QuadratureRule& base, int level) {
  switch (base.kind) {
    case QuadratureRule::Kind::Circle:
      return circle_nodes(base.m << level);
    case QuadratureRule::Kind::Radial:
      return radial_composite(base.j + level, base.order);
    case QuadratureRule::Kind::Disc:
      return disc_rule(base.m << level, base.j + level, base.order);
  }
  throw std::logic_error("unreachable");
}

template <class F>
RefinementEstimate refine_impl(const F& f, const QuadratureRule& base, int levels) {
  if (levels < 2) throw std::invalid_argument("refine_and_estimate: levels must be >= 2");
  RefinementEstimate est;
  double prev = 0.0;
  for (int k = 0; k < levels; ++k) {
    double v = integrate(refined(base, k), f);
    est.error_estimate = (k > 0) ? std::abs(v - prev) : 0.0;
    prev = v;
    est.value = v;
  }
  est.levels_used = levels;
  return est;
}

}  // namespace

RefinementEstimate refine_and_estimate(const std::function<double(double)>& f,
                                       const QuadratureRule& base, int levels) {
  return refine_impl(f, base, levels);
}

RefinementEstimate refine_and_estimate(const std::function<double(double, double)>& f,
                                       const QuadratureRule& base, int levels) {
  return refine_impl(f, base, levels);
}

}  // namespace carleson
