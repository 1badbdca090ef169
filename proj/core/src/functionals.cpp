#include "carleson/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <json.hpp>

namespace carleson {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double power_q(double base, double q) {
  if (q == 2.0) return base * base;
  if (q == 3.0) return base * base * base;
  if (q == 1.0) return base;
  return std::pow(base, q);
}

// Per-ring accumulation of sum_k c_k e^{i e_k theta_j} over M equispaced
// angles via phase recurrences; one complex multiply per (frequency, node).
struct RingBuffers {
  std::vector<CoeffVector> a;  // analytic-part sums k a_k z^{k-1}
  std::vector<CoeffVector> c;  // conjugate-part sums |k| a_{k} conj(z)^{|k|-1}
};

void ring_gradient_parts(const TrigPolynomial& f, double r, int m, RingBuffers& buf) {
  const int d = f.dim();
  buf.a.assign(m, CoeffVector(d, Complex(0, 0)));
  buf.c.assign(m, CoeffVector(d, Complex(0, 0)));
  const double dtheta = kTwoPi / m;
  for (int k : f.active_frequencies()) {
    if (k == 0) continue;
    const int ak = std::abs(k);
    const double scale = ak * std::pow(r, ak - 1);
    const int e = (k > 0) ? (k - 1) : -(ak - 1);
    const Complex step = std::polar(1.0, e * dtheta);
    Complex cur(scale, 0.0);
    const CoeffVector& coeff = f.coeff(k);
    auto& target = (k > 0) ? buf.a : buf.c;
    for (int jn = 0; jn < m; ++jn) {
      CoeffVector& row = target[jn];
      for (int i = 0; i < d; ++i) row[i] += coeff[i] * cur;
      cur *= step;
    }
  }
}

void ring_values(const TrigPolynomial& f, double r, int m, std::vector<CoeffVector>& out) {
  const int d = f.dim();
  out.assign(m, CoeffVector(d, Complex(0, 0)));
  const double dtheta = kTwoPi / m;
  for (int k : f.active_frequencies()) {
    const double scale = std::pow(r, std::abs(k));
    const Complex step = std::polar(1.0, k * dtheta);
    Complex cur(scale, 0.0);
    const CoeffVector& coeff = f.coeff(k);
    for (int jn = 0; jn < m; ++jn) {
      CoeffVector& row = out[jn];
      for (int i = 0; i < d; ++i) row[i] += coeff[i] * cur;
      cur *= step;
    }
  }
}

// Gradient norms (sum convention or radial) on one ring of the disc rule.
void ring_gradient_norms(const NormedSpace& space, const TrigPolynomial& f, double r,
                         int m, GradientMode mode, std::vector<double>& norms) {
  static thread_local RingBuffers buf;
  ring_gradient_parts(f, r, m, buf);
  const int d = f.dim();
  norms.assign(m, 0.0);
  const double dtheta = kTwoPi / m;
  CoeffVector dx(d), dy(d), dr(d);
  for (int jn = 0; jn < m; ++jn) {
    const CoeffVector& a = buf.a[jn];
    const CoeffVector& c = buf.c[jn];
    if (mode == GradientMode::Full) {
      for (int i = 0; i < d; ++i) {
        dx[i] = a[i] + c[i];
        dy[i] = Complex(0, 1) * (a[i] - c[i]);
      }
      norms[jn] = space.norm(dx) + space.norm(dy);
    } else {
      const Complex ei = std::polar(1.0, jn * dtheta);
      for (int i = 0; i < d; ++i) dr[i] = ei * a[i] + std::conj(ei) * c[i];
      norms[jn] = space.norm(dr);
    }
  }
}

std::vector<CoeffVector> boundary_samples(const TrigPolynomial& f, int m) {
  std::vector<CoeffVector> out;
  ring_values(f, 1.0, m, out);
  return out;
}

struct DiscSamples {
  std::vector<Complex> z;
  std::vector<double> base;  // quadrature weight times weighted integrand
};

enum class DiscIntegrand { GradientQ, ValueQ };

// Weight exponent semantics: GradientQ uses (1-r^2)^{q-1}, ValueQ uses
// (1-r)^{q-1} (the lacunary convention).
DiscSamples disc_weighted_samples(const NormedSpace& space, const TrigPolynomial& f,
                                  double q, const QuadratureRule& rule,
                                  DiscIntegrand integrand) {
  DiscSamples s;
  const std::size_t n = rule.size();
  s.z.resize(n);
  s.base.resize(n);
  const int m = rule.m;
  std::vector<double> norms;
  std::vector<CoeffVector> values;
  std::size_t idx = 0;
  // Ring-major layout from disc_rule.
  for (std::size_t ring = 0; ring * m < n; ++ring) {
    const double r = rule.x[ring * m];
    double weight;
    if (integrand == DiscIntegrand::GradientQ) {
      ring_gradient_norms(space, f, r, m, GradientMode::Full, norms);
      weight = std::pow(1.0 - r * r, q - 1.0);
    } else {
      ring_values(f, r, m, values);
      weight = std::pow(1.0 - r, q - 1.0);
    }
    for (int jn = 0; jn < m; ++jn, ++idx) {
      const double theta = rule.y[idx];
      s.z[idx] = std::polar(r, theta);
      const double v = (integrand == DiscIntegrand::GradientQ) ? norms[jn]
                                                               : space.norm(values[jn]);
      s.base[idx] = rule.w[idx] * weight * power_q(v, q);
    }
  }
  return s;
}

double poisson_sum(const DiscSamples& s, Complex z0) {
  const double c0 = 1.0 - std::norm(z0);
  const Complex z0c = std::conj(z0);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.z.size(); ++i)
    acc += s.base[i] * c0 / std::norm(1.0 - z0c * s.z[i]);
  return acc;
}

CarlesonReport poisson_sup_report(const NormedSpace& space, const TrigPolynomial& f,
                                  double q, const PoissonCarlesonOptions& opts,
                                  DiscIntegrand integrand) {
  if (!(q > 1.0)) throw std::invalid_argument("carleson functional: q must be > 1");
  const int m = opts.disc.resolved_m(f.degree());
  const QuadratureRule rule = disc_rule(m, opts.disc.j, opts.disc.order);
  const DiscSamples samples = disc_weighted_samples(space, f, q, rule, integrand);
  const auto centers = poisson_center_grid(opts.z0_levels);

  CarlesonReport report;
  report.value = -1.0;
  for (const Complex& z0 : centers) {
    const double v = poisson_sum(samples, z0);
    if (v > report.value) {
      report.value = v;
      report.argmax_point = z0;
    }
  }
  report.grid = "disc(m=" + std::to_string(m) + ",j=" + std::to_string(opts.disc.j) +
                ",order=" + std::to_string(opts.disc.order) +
                "),z0_levels=" + std::to_string(opts.z0_levels);
  if (opts.with_error_estimate && report.argmax_point) {
    const QuadratureRule fine = disc_rule(m, opts.disc.j + 2, opts.disc.order + 2);
    const DiscSamples fs = disc_weighted_samples(space, f, q, fine, integrand);
    report.error_estimate = std::abs(poisson_sum(fs, *report.argmax_point) - report.value);
  }
  return report;
}

struct ArcSampleGrid {
  int grid_size = 0;                  // uniform boundary nodes
  std::vector<Arc> arcs;              // dyadic arcs, full circle first
  std::vector<int> start_index;       // first sample of each arc
  std::vector<int> sample_count;
};

ArcSampleGrid build_arc_grid(const ArcGrid& grid) {
  if (grid.max_depth < 1) throw std::invalid_argument("ArcGrid: depth must be >= 1");
  int cpl = grid.centers_per_level;
  if (cpl < 1 || (cpl & (cpl - 1)) != 0)
    throw std::invalid_argument("ArcGrid: centers_per_level must be a power of two");
  const int s = std::max(8, 2 * cpl);
  ArcSampleGrid g;
  g.grid_size = s << grid.max_depth;
  for (int depth = 0; depth <= grid.max_depth; ++depth) {
    const int len = g.grid_size >> depth;            // samples per arc
    const int step = (depth == 0) ? g.grid_size : std::max(1, len / cpl);
    for (int c = 0; c * step < g.grid_size; ++c) {
      Arc arc;
      arc.depth = depth;
      arc.length = std::ldexp(1.0, -depth);
      arc.center = static_cast<double>(c * step) / g.grid_size;
      g.arcs.push_back(arc);
      g.start_index.push_back(c * step - len / 2);
      g.sample_count.push_back(len);
    }
  }
  return g;
}

}  // namespace

int DiscGridSpec::resolved_m(int degree) const {
  if (m > 0) return m;
  return std::max(64, 2 * degree + 1);
}

std::vector<Complex> poisson_center_grid(int levels) {
  if (levels < 0) throw std::invalid_argument("poisson_center_grid: levels must be >= 0");
  std::vector<Complex> out;
  out.emplace_back(0.0, 0.0);
  for (int j = 1; j <= levels; ++j) {
    const double rho = 1.0 - std::ldexp(1.0, -j);
    const int mj = std::max(8, 1 << (j + 3));
    for (int i = 0; i < mj; ++i) out.push_back(std::polar(rho, kTwoPi * i / mj));
  }
  return out;
}

double bmo_arc(const NormedSpace& space, const TrigPolynomial& f, const ArcGrid& grid) {
  const ArcSampleGrid g = build_arc_grid(grid);
  const auto samples = boundary_samples(f, g.grid_size);
  const int d = f.dim();
  double best = 0.0;
  CoeffVector mean(d), diff(d);
  for (std::size_t ai = 0; ai < g.arcs.size(); ++ai) {
    const int len = g.sample_count[ai];
    const int start = g.start_index[ai];
    std::fill(mean.begin(), mean.end(), Complex(0, 0));
    for (int t = 0; t < len; ++t) {
      const auto& v = samples[((start + t) % g.grid_size + g.grid_size) % g.grid_size];
      for (int i = 0; i < d; ++i) mean[i] += v[i];
    }
    for (int i = 0; i < d; ++i) mean[i] /= static_cast<double>(len);
    double osc = 0.0;
    for (int t = 0; t < len; ++t) {
      const auto& v = samples[((start + t) % g.grid_size + g.grid_size) % g.grid_size];
      for (int i = 0; i < d; ++i) diff[i] = v[i] - mean[i];
      osc += space.norm(diff);
    }
    best = std::max(best, osc / len);
  }
  return best;
}

double bmo_poisson_q(const NormedSpace& space, const TrigPolynomial& f, double q,
                     int z0_levels) {
  if (!(q >= 1.0)) throw std::invalid_argument("bmo_poisson_q: q must be >= 1");
  const int d = f.dim();
  std::map<int, std::vector<CoeffVector>> cache;
  auto samples_for = [&](int m) -> const std::vector<CoeffVector>& {
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, boundary_samples(f, m)).first;
    return it->second;
  };

  double best = 0.0;
  CoeffVector diff(d);
  for (int j = 0; j <= z0_levels; ++j) {
    const int m = std::max(2 * f.degree() + 1, 1 << (j + 4));
    const auto& samples = samples_for(m);
    const double rho = (j == 0) ? 0.0 : 1.0 - std::ldexp(1.0, -j);
    const int mj = (j == 0) ? 1 : std::max(8, 1 << (j + 3));
    for (int i0 = 0; i0 < mj; ++i0) {
      const Complex z0 = std::polar(rho, kTwoPi * i0 / mj);
      const CoeffVector fz0 = f.eval(z0);
      const double c0 = 1.0 - std::norm(z0);
      const Complex z0c = std::conj(z0);
      double acc = 0.0;
      for (int t = 0; t < m; ++t) {
        const auto& v = samples[t];
        for (int i = 0; i < d; ++i) diff[i] = v[i] - fz0[i];
        const Complex w = std::polar(1.0, kTwoPi * t / m);
        acc += power_q(space.norm(diff), q) * c0 / std::norm(1.0 - z0c * w);
      }
      best = std::max(best, acc / m);
    }
  }
  return std::pow(best, 1.0 / q);
}

double g_function(const NormedSpace& space, const TrigPolynomial& f, double q,
                  double theta, GradientMode mode, int radial_levels, int radial_order) {
  if (!(q > 1.0)) throw std::invalid_argument("g_function: q must be > 1");
  const QuadratureRule rad = radial_composite(radial_levels, radial_order);
  double acc = 0.0;
  for (std::size_t i = 0; i < rad.size(); ++i) {
    const double r = rad.x[i];
    const Complex z = std::polar(r, theta);
    const double gn = (mode == GradientMode::Full) ? gradient_norm(space, f, z)
                                                   : radial_gradient_norm(space, f, z);
    acc += rad.w[i] * std::pow(1.0 - r, q - 1.0) * power_q(gn, q);
  }
  return std::pow(acc, 1.0 / q);
}

double g_Lp(const NormedSpace& space, const TrigPolynomial& f, double q, double p,
            int circle_m, GradientMode mode) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("g_Lp: p must be in (1, inf)");
  const int m = (circle_m > 0) ? circle_m : std::max(64, 2 * f.degree() + 1);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double g = g_function(space, f, q, kTwoPi * i / m, mode);
    acc += power_q(g, p) / m;
  }
  return std::pow(acc, 1.0 / p);
}

double lusin_area(const NormedSpace& space, const TrigPolynomial& f, double q,
                  double theta, double aperture, GradientMode mode,
                  const DiscGridSpec& disc) {
  if (!(q > 1.0) || !(aperture > 0.0))
    throw std::invalid_argument("lusin_area: need q > 1 and positive aperture");
  const int m = disc.resolved_m(f.degree());
  const QuadratureRule rule = disc_rule(m, disc.j, disc.order);
  const Complex apex = std::polar(1.0, theta);
  std::vector<double> norms;
  double acc = 0.0;
  std::size_t idx = 0;
  for (std::size_t ring = 0; ring * m < rule.size(); ++ring) {
    const double r = rule.x[ring * m];
    norms.clear();
    bool ring_done = false;
    for (int jn = 0; jn < m; ++jn, ++idx) {
      const Complex z = std::polar(r, rule.y[idx]);
      if (std::abs(z - apex) > aperture * (1.0 - r)) continue;
      if (!ring_done) {
        ring_gradient_norms(space, f, r, m, mode, norms);
        ring_done = true;
      }
      acc += rule.w[idx] * std::pow(1.0 - r, q - 3.0) * power_q(norms[jn], q);
    }
  }
  return std::pow(acc, 1.0 / q);
}

CarlesonReport carleson_poisson(const NormedSpace& space, const TrigPolynomial& f,
                                double q, const PoissonCarlesonOptions& opts) {
  return poisson_sup_report(space, f, q, opts, DiscIntegrand::GradientQ);
}

CarlesonReport carleson_poisson_values(const NormedSpace& space, const TrigPolynomial& f,
                                       double q, const PoissonCarlesonOptions& opts) {
  return poisson_sup_report(space, f, q, opts, DiscIntegrand::ValueQ);
}

namespace {

std::vector<std::pair<Arc, double>> tent_arc_values(const NormedSpace& space,
                                                    const TrigPolynomial& f, double q,
                                                    const ArcGrid& grid,
                                                    const DiscGridSpec& disc) {
  if (!(q > 1.0)) throw std::invalid_argument("carleson_tent: q must be > 1");
  const int m = disc.resolved_m(f.degree());
  const QuadratureRule rule = disc_rule(m, disc.j, disc.order);
  // Node mass g_i = w_i (1-r)^{q-1} ||grad f||^q, tent membership by angle
  // and height.
  const std::size_t n = rule.size();
  std::vector<double> mass(n), height(n), pos(n);
  std::vector<double> norms;
  std::size_t idx = 0;
  for (std::size_t ring = 0; ring * m < n; ++ring) {
    const double r = rule.x[ring * m];
    ring_gradient_norms(space, f, r, m, GradientMode::Full, norms);
    const double weight = std::pow(1.0 - r, q - 1.0);
    for (int jn = 0; jn < m; ++jn, ++idx) {
      mass[idx] = rule.w[idx] * weight * power_q(norms[jn], q);
      height[idx] = 1.0 - r;
      pos[idx] = rule.y[idx] / kTwoPi;  // normalized position in [0, 1)
    }
  }

  const ArcSampleGrid g = build_arc_grid(grid);
  std::vector<std::pair<Arc, double>> out;
  out.reserve(g.arcs.size());
  for (const Arc& arc : g.arcs) {
    double acc = 0.0;
    const double half = 0.5 * arc.length;
    for (std::size_t i = 0; i < n; ++i) {
      if (height[i] > arc.length) continue;
      double dpos = std::abs(pos[i] - arc.center);
      dpos = std::min(dpos, 1.0 - dpos);
      if (dpos <= half) acc += mass[i];
    }
    out.emplace_back(arc, acc / arc.length);
  }
  return out;
}

bool arc_contains(const Arc& arc, double normalized_pos) {
  double dpos = std::abs(normalized_pos - arc.center);
  dpos = std::min(dpos, 1.0 - dpos);
  return dpos <= 0.5 * arc.length;
}

}  // namespace

CarlesonReport carleson_tent(const NormedSpace& space, const TrigPolynomial& f, double q,
                             const ArcGrid& grid, const DiscGridSpec& disc) {
  const auto values = tent_arc_values(space, f, q, grid, disc);
  CarlesonReport report;
  report.value = 0.0;
  for (const auto& [arc, v] : values) {
    if (v >= report.value) {
      report.value = v;
      report.argmax_arc = arc;
    }
  }
  report.grid = "arcs(depth=" + std::to_string(grid.max_depth) +
                "),disc(m=" + std::to_string(disc.resolved_m(f.degree())) +
                ",j=" + std::to_string(disc.j) + ")";
  return report;
}

double c_q_pointwise(const NormedSpace& space, const TrigPolynomial& f, double q,
                     double theta, const ArcGrid& grid, const DiscGridSpec& disc) {
  const auto values = tent_arc_values(space, f, q, grid, disc);
  double pos = theta / kTwoPi;
  pos -= std::floor(pos);
  double best = 0.0;
  for (const auto& [arc, v] : values)
    if (arc_contains(arc, pos)) best = std::max(best, v);
  return best;
}

std::string report_to_json(const CarlesonReport& report, const std::string& functional,
                           double q) {
  nlohmann::ordered_json j;
  j["functional"] = functional;
  j["q"] = q;
  j["value"] = report.value;
  if (report.argmax_point)
    j["argmax"] = {{"z0", {report.argmax_point->real(), report.argmax_point->imag()}}};
  else if (report.argmax_arc)
    j["argmax"] = {{"arc_center", report.argmax_arc->center},
                   {"arc_length", report.argmax_arc->length}};
  j["grid"] = report.grid;
  j["error_estimate"] = report.error_estimate;
  return j.dump();
}

}  // namespace carleson
