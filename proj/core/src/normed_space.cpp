#include "carleson/normed_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace carleson {

NormedSpace::NormedSpace(double p, int d) : p_(p), d_(d) {
  if (!(p >= 1.0)) throw std::invalid_argument("NormedSpace: p must be in [1, inf]");
  if (d < 1) throw std::invalid_argument("NormedSpace: dimension must be >= 1");
}

NormedSpace::NormedSpace(double p, int d, const Eigen::MatrixXd& transform)
    : NormedSpace(p, d) {
  if (transform.rows() != d || transform.cols() != d)
    throw std::invalid_argument("NormedSpace: transform must be d x d");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(transform);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(d - 1);
  if (!(smin > 1e-12 * smax) || smax == 0.0)
    throw std::invalid_argument("NormedSpace: transform is singular");
  transform_ = transform;
  condition_ = smax / smin;
}

double NormedSpace::aggregate(std::span<const double> moduli) const {
  if (std::isinf(p_)) {
    double mx = 0.0;
    for (double m : moduli) mx = std::max(mx, m);
    return mx;
  }
  double mx = 0.0;
  for (double m : moduli) mx = std::max(mx, m);
  if (mx == 0.0) return 0.0;
  double s = 0.0;
  for (double m : moduli) s += std::pow(m / mx, p_);
  return mx * std::pow(s, 1.0 / p_);
}

double NormedSpace::norm(std::span<const std::complex<double>> v) const {
  if (static_cast<int>(v.size()) != d_)
    throw std::invalid_argument("NormedSpace::norm: dimension mismatch");
  std::vector<double> moduli(d_);
  if (transform_) {
    Eigen::VectorXd re(d_), im(d_);
    for (int i = 0; i < d_; ++i) {
      re(i) = v[i].real();
      im(i) = v[i].imag();
    }
    Eigen::VectorXd tre = *transform_ * re, tim = *transform_ * im;
    for (int i = 0; i < d_; ++i) moduli[i] = std::hypot(tre(i), tim(i));
  } else {
    for (int i = 0; i < d_; ++i) moduli[i] = std::abs(v[i]);
  }
  return aggregate(moduli);
}

double NormedSpace::norm(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != d_)
    throw std::invalid_argument("NormedSpace::norm: dimension mismatch");
  std::vector<double> moduli(d_);
  if (transform_) {
    Eigen::VectorXd x(d_);
    for (int i = 0; i < d_; ++i) x(i) = v[i];
    Eigen::VectorXd tx = *transform_ * x;
    for (int i = 0; i < d_; ++i) moduli[i] = std::abs(tx(i));
  } else {
    for (int i = 0; i < d_; ++i) moduli[i] = std::abs(v[i]);
  }
  return aggregate(moduli);
}

namespace {

using Vec = std::vector<double>;

Vec normalized(const NormedSpace& sp, const Vec& v) {
  double n = sp.norm(v);
  if (n <= 0.0) return Vec(v.size(), 0.0);
  Vec out(v);
  for (double& x : out) x /= n;
  return out;
}

double dist(const NormedSpace& sp, const Vec& a, const Vec& b) {
  Vec diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return sp.norm(diff);
}

Vec axpy(const Vec& a, double t, const Vec& u) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * u[i];
  return out;
}

// b on the unit sphere along the chord a + tau*u with ||a - b|| = eps.
// Returns false when the chord never reaches distance eps.
bool chord_point(const NormedSpace& sp, const Vec& a, const Vec& u, double eps, Vec& b) {
  double lo = 0.0, hi = 1.0;
  double d_hi = 0.0;
  int expand = 0;
  for (; expand < 80; ++expand) {
    b = normalized(sp, axpy(a, hi, u));
    d_hi = dist(sp, a, b);
    if (d_hi >= eps) break;
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) return false;
  }
  if (expand == 80) return false;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    b = normalized(sp, axpy(a, mid, u));
    double dm = dist(sp, a, b);
    if (std::abs(dm - eps) < 1e-12) return true;
    (dm < eps ? lo : hi) = mid;
    if (hi - lo < 1e-14 * (1.0 + hi)) break;
  }
  b = normalized(sp, axpy(a, 0.5 * (lo + hi), u));
  return std::abs(dist(sp, a, b) - eps) < 1e-10;
}

// Symmetric pair a = N(c + tau v), b = N(c - tau v) with ||a - b|| = eps.
bool symmetric_pair(const NormedSpace& sp, const Vec& c, const Vec& v, double eps,
                    Vec& a, Vec& b) {
  auto make = [&](double tau) {
    a = normalized(sp, axpy(c, tau, v));
    b = normalized(sp, axpy(c, -tau, v));
  };
  double lo = 0.0, hi = 1.0, d_hi = 0.0;
  int expand = 0;
  for (; expand < 80; ++expand) {
    make(hi);
    d_hi = dist(sp, a, b);
    if (d_hi >= eps) break;
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) return false;
  }
  if (expand == 80) return false;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    make(mid);
    double dm = dist(sp, a, b);
    if (std::abs(dm - eps) < 1e-12) return true;
    (dm < eps ? lo : hi) = mid;
    if (hi - lo < 1e-14 * (1.0 + hi)) break;
  }
  make(0.5 * (lo + hi));
  return std::abs(dist(sp, a, b) - eps) < 1e-10;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Generic coordinate descent on a raw state vector; the objective owns all
// normalization and constraint handling. Minimizes.
double coordinate_descent(Vec& state, const std::function<double(const Vec&)>& obj,
                          int sweeps) {
  double best = obj(state);
  double step = 0.2;
  for (int sweep = 0; sweep < sweeps && step > 1e-7; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < state.size(); ++i) {
      const double scale = step * std::max(1.0, std::abs(state[i]));
      for (double sgn : {1.0, -1.0}) {
        Vec trial(state);
        trial[i] += sgn * scale;
        double v = obj(trial);
        if (v < best - 1e-15) {
          best = v;
          state = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

struct Candidate {
  Vec state;
  double value = kInf;
};

double multistart_minimize(std::vector<Vec> starts,
                           const std::function<double(const Vec&)>& obj,
                           const ModulusBudget& budget) {
  const int quick = std::min(15, budget.sweeps);
  std::vector<Candidate> cands;
  cands.reserve(starts.size());
  for (auto& s : starts) {
    Candidate c;
    c.state = std::move(s);
    c.value = coordinate_descent(c.state, obj, quick);
    cands.push_back(std::move(c));
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& x, const Candidate& y) { return x.value < y.value; });
  double best = cands.empty() ? kInf : cands.front().value;
  const int npolish = std::min<int>(budget.polish, static_cast<int>(cands.size()));
  for (int i = 0; i < npolish; ++i) {
    double v = coordinate_descent(cands[i].state, obj, budget.sweeps);
    best = std::min(best, v);
  }
  return best;
}

Vec basis(int d, int i) {
  Vec e(d, 0.0);
  e[i] = 1.0;
  return e;
}

}  // namespace

double modulus_convexity(const NormedSpace& space, double eps, const ModulusBudget& budget) {
  if (!(eps > 0.0 && eps < 2.0))
    throw std::invalid_argument("modulus_convexity: eps must be in (0, 2)");
  const int d = space.dim();

  // State layout: [0] family flag (frozen by huge cost of flipping is avoided
  // by running the two parametrizations separately instead).
  auto chord_obj = [&](const Vec& st) -> double {
    Vec a_raw(st.begin(), st.begin() + d), u(st.begin() + d, st.end());
    Vec a = normalized(space, a_raw);
    if (space.norm(a) == 0.0) return kInf;
    Vec b;
    if (!chord_point(space, a, u, eps, b)) return kInf;
    Vec mid(d);
    for (int i = 0; i < d; ++i) mid[i] = 0.5 * (a[i] + b[i]);
    return 1.0 - space.norm(mid);
  };
  auto sym_obj = [&](const Vec& st) -> double {
    Vec c(st.begin(), st.begin() + d), v(st.begin() + d, st.end());
    Vec a, b;
    if (space.norm(c) == 0.0) return kInf;
    if (!symmetric_pair(space, c, v, eps, a, b)) return kInf;
    Vec mid(d);
    for (int i = 0; i < d; ++i) mid[i] = 0.5 * (a[i] + b[i]);
    return 1.0 - space.norm(mid);
  };

  std::mt19937 rng(budget.seed);
  std::normal_distribution<double> gauss;
  auto random_state = [&]() {
    Vec st(2 * d);
    for (double& x : st) x = gauss(rng);
    return st;
  };
  auto cat = [](Vec x, const Vec& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };

  std::vector<Vec> chord_starts, sym_starts;
  const int dmax = std::min(d, 6);
  for (int i = 0; i < dmax; ++i)
    for (int jj = i + 1; jj < dmax; ++jj) {
      Vec ei = basis(d, i), ej = basis(d, jj);
      Vec pij(d), mij(d);
      for (int k = 0; k < d; ++k) {
        pij[k] = ei[k] + ej[k];
        mij[k] = ei[k] - ej[k];
      }
      chord_starts.push_back(cat(ei, ej));
      chord_starts.push_back(cat(normalized(space, pij), mij));
      sym_starts.push_back(cat(ei, ej));      // Hanner-type pairs
      sym_starts.push_back(cat(pij, mij));    // rotated pairs
    }
  for (int k = 0; k < budget.multistarts; ++k) {
    chord_starts.push_back(random_state());
    sym_starts.push_back(random_state());
  }

  double best = std::min(multistart_minimize(std::move(chord_starts), chord_obj, budget),
                         multistart_minimize(std::move(sym_starts), sym_obj, budget));
  return std::clamp(best, 0.0, 1.0);
}

double modulus_smoothness(const NormedSpace& space, double t, const ModulusBudget& budget) {
  if (!(t > 0.0)) throw std::invalid_argument("modulus_smoothness: t must be positive");
  const int d = space.dim();

  auto obj = [&](const Vec& st) -> double {
    Vec a = normalized(space, Vec(st.begin(), st.begin() + d));
    Vec b = normalized(space, Vec(st.begin() + d, st.end()));
    if (space.norm(a) == 0.0 || space.norm(b) == 0.0) return kInf;
    Vec plus(d), minus(d);
    for (int i = 0; i < d; ++i) {
      plus[i] = a[i] + t * b[i];
      minus[i] = a[i] - t * b[i];
    }
    // Negated: the descent machinery minimizes.
    return -(0.5 * (space.norm(plus) + space.norm(minus)) - 1.0);
  };

  std::mt19937 rng(budget.seed);
  std::normal_distribution<double> gauss;
  std::vector<Vec> starts;
  const int dmax = std::min(d, 8);
  for (int i = 0; i < dmax; ++i)
    for (int jj = 0; jj < dmax; ++jj) {
      if (i == jj && d > 1) continue;
      Vec st = basis(d, i);
      Vec ej = basis(d, jj);
      st.insert(st.end(), ej.begin(), ej.end());
      starts.push_back(std::move(st));
    }
  for (int k = 0; k < budget.multistarts; ++k) {
    Vec st(2 * d);
    for (double& x : st) x = gauss(rng);
    starts.push_back(std::move(st));
  }

  double best = -multistart_minimize(std::move(starts), obj, budget);
  return std::clamp(best, 0.0, t);  // triangle inequality cap
}

ModulusCurve convexity_curve(const NormedSpace& space, const std::vector<double>& eps,
                             const ModulusBudget& budget) {
  ModulusCurve curve;
  curve.side = ModulusCurve::Side::UpperBiased;
  curve.budget = budget;
  curve.abscissae = eps;
  for (double e : eps) curve.estimates.push_back(modulus_convexity(space, e, budget));
  // Isotonic cleanup: delta is nondecreasing; the searched upper bounds may
  // wiggle, so propagate running maxima from the left.
  for (std::size_t i = 1; i < curve.estimates.size(); ++i)
    curve.estimates[i] = std::max(curve.estimates[i], curve.estimates[i - 1]);
  return curve;
}

ModulusCurve smoothness_curve(const NormedSpace& space, const std::vector<double>& ts,
                              const ModulusBudget& budget) {
  ModulusCurve curve;
  curve.side = ModulusCurve::Side::LowerBiased;
  curve.budget = budget;
  curve.abscissae = ts;
  for (double t : ts) curve.estimates.push_back(modulus_smoothness(space, t, budget));
  for (std::size_t i = 1; i < curve.estimates.size(); ++i)
    curve.estimates[i] = std::max(curve.estimates[i], curve.estimates[i - 1]);
  return curve;
}

PowerTypeFit power_type_fit(const ModulusCurve& curve) {
  const std::size_t n = curve.abscissae.size();
  if (n < 4 || curve.estimates.size() != n)
    throw std::invalid_argument("power_type_fit: need >= 4 curve points");
  for (double y : curve.estimates)
    if (!(y > 1e-8)) throw DegenerateModulusError("power_type_fit: degenerate modulus");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double lx = std::log(curve.abscissae[i]);
    double ly = std::log(curve.estimates[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  PowerTypeFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / n;
  fit.coefficient = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = intercept + fit.exponent * std::log(curve.abscissae[i]);
    double res = std::log(curve.estimates[i]) - pred;
    ss += res * res;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace carleson
