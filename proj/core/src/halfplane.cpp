#include "carleson/halfplane.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

namespace carleson {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

double poisson_kernel_halfplane(double t, double x) {
  require_positive(t, "poisson kernel: t");
  return t / (kPi * (t * t + x * x));
}

double phi_kernel(double t, double x) {
  require_positive(t, "phi kernel: t");
  const double denom = t * t + x * x;
  return t * (x * x - t * t) / (kPi * denom * denom);
}

double poisson_second_radial(double r, double x) {
  require_positive(r, "poisson second derivative: r");
  const double denom = r * r + x * x;
  return 2.0 * r * (r * r - 3.0 * x * x) / (kPi * denom * denom * denom);
}

double k_kernel(double s, double t, double x) {
  require_positive(s, "k kernel: s");
  require_positive(t, "k kernel: t");
  return s * t * poisson_second_radial(s + t, x);
}

double kernel_eval(KernelKind kind, double s, double t, double x) {
  switch (kind) {
    case KernelKind::Poisson:
      return poisson_kernel_halfplane(t, x);
    case KernelKind::Phi:
      return phi_kernel(t, x);
    case KernelKind::K:
      return k_kernel(s, t, x);
  }
  throw std::logic_error("unreachable");
}

double decay_ratio(double s, double t, double x) {
  const double scale = s + t + std::abs(x);
  return std::abs(k_kernel(s, t, x)) * scale * scale * scale / (s * t);
}

double decay_ratio_sup(int per_octave) {
  if (per_octave < 1) throw std::invalid_argument("decay_ratio_sup: per_octave >= 1");
  std::vector<double> st, xs{0.0};
  for (int i = -8 * per_octave; i <= 8 * per_octave; ++i)
    st.push_back(std::exp2(static_cast<double>(i) / per_octave));
  for (int i = 0; i <= 10 * per_octave; ++i) {
    const double v = std::exp2(static_cast<double>(i) / per_octave);
    xs.push_back(v);
    xs.push_back(-v);
  }
  double sup = 0.0;
  for (double s : st)
    for (double t : st)
      for (double x : xs) sup = std::max(sup, decay_ratio(s, t, x));
  return sup;
}

ConvolveCheck convolve_check(double s, double t, double x, int intervals) {
  require_positive(s, "convolve_check: s");
  require_positive(t, "convolve_check: t");
  if (intervals < 16) throw std::invalid_argument("convolve_check: intervals too small");
  if (intervals % 2 != 0) ++intervals;

  const double window = 400.0 * (s + t) + std::abs(x);
  auto integrand = [&](double y) { return phi_kernel(s, x - y) * phi_kernel(t, y); };
  auto simpson = [&](int n) {
    const double h = 2.0 * window / n;
    double acc = integrand(-window) + integrand(window);
    for (int i = 1; i < n; ++i) acc += integrand(-window + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  };

  ConvolveCheck out;
  const double coarse = simpson(intervals / 2);
  out.numeric = simpson(intervals);
  out.closed_form = k_kernel(s, t, x);
  // phi_s phi_t decays like s t / y^4 past the window.
  const double tail = 2.0 * s * t / (3.0 * kPi * kPi * window * window * window);
  out.quadrature_error_estimate = std::abs(out.numeric - coarse) + tail;
  const double denom = std::max(std::abs(out.closed_form), 1e-300);
  out.relative_error = std::abs(out.numeric - out.closed_form) / denom;
  return out;
}

ConeGrid ConeGrid::make(double t_min, double t_max, int z_per_level) {
  require_positive(t_min, "ConeGrid: t_min");
  if (!(t_max > t_min)) throw std::invalid_argument("ConeGrid: t_max must exceed t_min");
  if (z_per_level < 1) throw std::invalid_argument("ConeGrid: z_per_level >= 1");
  ConeGrid g;
  g.t_min = t_min;
  g.t_max = t_max;
  g.z_per_level = z_per_level;
  int level = 0;
  for (double hi = t_max; hi > t_min * (1.0 + 1e-12); hi *= 0.5, ++level) {
    const double lo = std::max(hi * 0.5, t_min);
    const double rep = 0.5 * (lo + hi);
    g.level_t.push_back(rep);
    const double band = 1.0 / lo - 1.0 / hi;  // integral of dt/t^2
    const double dz = 2.0 * rep / z_per_level;
    for (int i = 0; i < z_per_level; ++i) {
      Cell c;
      c.level = level;
      c.t = rep;
      c.z = -rep + (i + 0.5) * dz;
      c.measure = dz * band;
      g.cells.push_back(c);
    }
  }
  return g;
}

double ConeGrid::total_measure() const {
  double s = 0.0;
  for (const Cell& c : cells) s += c.measure;
  return s;
}

std::string ConeGrid::to_json() const {
  nlohmann::ordered_json j;
  j["t_min"] = t_min;
  j["t_max"] = t_max;
  j["z_per_level"] = z_per_level;
  auto& arr = j["cells"] = nlohmann::ordered_json::array();
  for (const Cell& c : cells) arr.push_back({c.z, c.t, c.measure, c.level});
  return j.dump();
}

LineGrid LineGrid::make(double x_max, int count) {
  require_positive(x_max, "LineGrid: x_max");
  if (count < 1) throw std::invalid_argument("LineGrid: count >= 1");
  LineGrid g;
  g.x.resize(count);
  g.weight = 2.0 * x_max / count;
  for (int i = 0; i < count; ++i) g.x[i] = -x_max + (i + 0.5) * g.weight;
  return g;
}

ConeFunction ConeFunction::zeros(const ConeGrid& cone, const LineGrid& line,
                                 const NormedSpace& space) {
  ConeFunction h;
  h.cone = cone;
  h.line = line;
  h.space = space;
  h.values.assign(line.x.size(),
                  std::vector<CoeffVector>(cone.cells.size(),
                                           CoeffVector(space.dim(), Complex(0, 0))));
  return h;
}

double ConeFunction::lq_norm(double q) const {
  double acc = 0.0;
  for (const auto& per_x : values) {
    for (std::size_t c = 0; c < per_x.size(); ++c)
      acc += std::pow(space.norm(per_x[c]), q) * cone.cells[c].measure;
  }
  return std::pow(acc * line.weight, 1.0 / q);
}

std::string ConeFunction::to_json() const {
  nlohmann::ordered_json j;
  j["cone"] = nlohmann::json::parse(cone.to_json());
  j["line"] = {{"weight", line.weight}, {"x", line.x}};
  j["space"] = {{"p", std::isinf(space.p()) ? nlohmann::ordered_json("inf")
                                            : nlohmann::ordered_json(space.p())},
                {"d", space.dim()}};
  auto& vals = j["values"] = nlohmann::ordered_json::array();
  for (const auto& per_x : values) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (const auto& v : per_x) {
      nlohmann::ordered_json cell = nlohmann::ordered_json::array();
      for (const Complex& c : v) cell.push_back({c.real(), c.imag()});
      row.push_back(std::move(cell));
    }
    vals.push_back(std::move(row));
  }
  return j.dump();
}

namespace {

void check_grids(const ConeFunction& h) {
  if (h.values.size() != h.line.x.size())
    throw std::invalid_argument("ConeFunction: x-node count mismatch");
  for (const auto& per_x : h.values)
    if (per_x.size() != h.cone.cells.size())
      throw std::invalid_argument("ConeFunction: cone cell count mismatch");
}

}  // namespace

ConeFunction apply_Phi(const ConeFunction& h) {
  check_grids(h);
  ConeFunction out = ConeFunction::zeros(h.cone, h.line, h.space);
  const int d = h.space.dim();
  const auto& cells = h.cone.cells;
  for (std::size_t ix = 0; ix < h.line.x.size(); ++ix) {
    for (std::size_t oc = 0; oc < cells.size(); ++oc) {
      const double u = cells[oc].z, s = cells[oc].t;
      CoeffVector acc(d, Complex(0, 0));
      for (std::size_t iy = 0; iy < h.line.x.size(); ++iy) {
        const double base = h.line.x[ix] + u - h.line.x[iy];
        for (std::size_t ic = 0; ic < cells.size(); ++ic) {
          const double kv = k_kernel(s, cells[ic].t, base + cells[ic].z) *
                            cells[ic].measure * h.line.weight;
          if (kv == 0.0) continue;
          const CoeffVector& v = h.values[iy][ic];
          for (int i = 0; i < d; ++i) acc[i] += kv * v[i];
        }
      }
      out.values[ix][oc] = std::move(acc);
    }
  }
  return out;
}

std::vector<std::vector<CoeffVector>> apply_Phi_slice(const ConeFunction& h) {
  check_grids(h);
  const int d = h.space.dim();
  const auto& cells = h.cone.cells;
  std::vector<std::vector<CoeffVector>> out(
      h.line.x.size(),
      std::vector<CoeffVector>(h.cone.level_t.size(), CoeffVector(d, Complex(0, 0))));
  for (std::size_t ix = 0; ix < h.line.x.size(); ++ix) {
    for (std::size_t lev = 0; lev < h.cone.level_t.size(); ++lev) {
      const double s = h.cone.level_t[lev];
      CoeffVector acc(d, Complex(0, 0));
      for (std::size_t iy = 0; iy < h.line.x.size(); ++iy) {
        const double base = h.line.x[ix] - h.line.x[iy];
        for (std::size_t ic = 0; ic < cells.size(); ++ic) {
          const double kv = k_kernel(s, cells[ic].t, base + cells[ic].z) *
                            cells[ic].measure * h.line.weight;
          const CoeffVector& v = h.values[iy][ic];
          for (int i = 0; i < d; ++i) acc[i] += kv * v[i];
        }
      }
      out[ix][lev] = std::move(acc);
    }
  }
  return out;
}

std::vector<CoeffVector> apply_Psi(const ConeFunction& h) {
  check_grids(h);
  const int d = h.space.dim();
  const auto& cells = h.cone.cells;
  std::vector<CoeffVector> out(h.line.x.size(), CoeffVector(d, Complex(0, 0)));
  for (std::size_t ix = 0; ix < h.line.x.size(); ++ix) {
    CoeffVector acc(d, Complex(0, 0));
    for (std::size_t iy = 0; iy < h.line.x.size(); ++iy) {
      const double base = h.line.x[ix] - h.line.x[iy];
      for (std::size_t ic = 0; ic < cells.size(); ++ic) {
        const double kv = phi_kernel(cells[ic].t, base + cells[ic].z) *
                          cells[ic].measure * h.line.weight;
        const CoeffVector& v = h.values[iy][ic];
        for (int i = 0; i < d; ++i) acc[i] += kv * v[i];
      }
    }
    out[ix] = std::move(acc);
  }
  return out;
}

std::vector<OpNormEstimate> op_norm_estimate(double q, const std::vector<int>& resolutions,
                                             int trials, std::uint64_t seed) {
  if (!(q > 1.0) || std::isinf(q))
    throw std::invalid_argument("op_norm_estimate: q must be in (1, inf)");
  if (trials < 1) throw std::invalid_argument("op_norm_estimate: trials >= 1");
  std::vector<OpNormEstimate> out;
  const NormedSpace scalar(2.0, 1);
  for (int res : resolutions) {
    if (res < 1) throw std::invalid_argument("op_norm_estimate: resolution >= 1");
    const ConeGrid cone = ConeGrid::make(1.0 / 64.0, 8.0, 2 * res);
    const LineGrid line = LineGrid::make(32.0, 8 * res + 1);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    OpNormEstimate est;
    est.resolution = res;
    est.trials = trials;
    est.seed = seed;
    for (int trial = 0; trial < trials; ++trial) {
      ConeFunction h = ConeFunction::zeros(cone, line, scalar);
      for (auto& per_x : h.values)
        for (auto& v : per_x) v[0] = Complex(gauss(rng), 0.0);
      const double hn = h.lq_norm(q);
      if (hn == 0.0) continue;
      const ConeFunction ph = apply_Phi(h);
      est.estimate = std::max(est.estimate, ph.lq_norm(q) / hn);
    }
    out.push_back(est);
  }
  return out;
}

std::string op_norm_csv(const std::vector<OpNormEstimate>& estimates, double q) {
  std::ostringstream os;
  os << "resolution,q,estimate,trials,seed\n";
  for (const auto& e : estimates) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", e.estimate);
    os << e.resolution << "," << q << "," << buf << "," << e.trials << "," << e.seed
       << "\n";
  }
  return os.str();
}

}  // namespace carleson
