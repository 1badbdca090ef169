#include "carleson/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "carleson/quadrature.hpp"

namespace carleson {

namespace {

using nlohmann::ordered_json;

NormedSpace config_space(const StudyConfig& c) { return NormedSpace(c.p, c.d); }

std::uint64_t item_seed(std::uint64_t base, int a, int b) {
  // splitmix-style mixing keeps corpus items decorrelated but reproducible
  std::uint64_t x = base + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(a) * 65537u +
                                                    static_cast<std::uint64_t>(b) + 1u);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

double median_of(std::vector<double> v) {
  if (v.empty()) throw std::logic_error("median of empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string p_label(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

void push(StudyRow& row, const std::string& key, double value) {
  row.values.emplace_back(key, value);
}

GateResult gate_le(const std::string& name, double value, double threshold,
                   const std::string& detail = {}) {
  return {name, value <= threshold, value, threshold, detail.empty() ? "<=" : detail};
}

GateResult gate_ge(const std::string& name, double value, double threshold,
                   const std::string& detail = {}) {
  return {name, value >= threshold, value, threshold, detail.empty() ? ">=" : detail};
}

GateResult gate_abs_le(const std::string& name, double value, double threshold) {
  return {name, std::abs(value) <= threshold, value, threshold, "|value| <="};
}

void add_environment(StudyReport& r, const StudyConfig& c) {
  std::ostringstream grid;
  grid << "m=" << c.grid.m << " j=" << c.grid.j << " order=" << c.grid.order
       << " depth=" << c.grid.depth << " z0_levels=" << c.grid.z0_levels
       << " refine=" << c.grid.refine;
  r.environment.emplace_back("grid", grid.str());
  r.environment.emplace_back("space", "l^" + p_label(c.p) + "_" + std::to_string(c.d));
}

struct CorpusItem {
  TrigPolynomial f;
  int degree;
  double decay;
  std::uint64_t seed;
  std::string id;
};

std::vector<CorpusItem> build_corpus(const CorpusSpec& spec, const NormedSpace& space) {
  std::vector<CorpusItem> out;
  for (std::size_t di = 0; di < spec.degrees.size(); ++di) {
    const int degree = spec.degrees[di];
    for (int i = 0; i < spec.count; ++i) {
      const double decay = spec.decays[i % spec.decays.size()];
      const std::uint64_t seed = item_seed(spec.seed, static_cast<int>(di), i);
      std::ostringstream id;
      id << "N" << degree << "/i" << i;
      out.push_back({random_polynomial(degree, decay, space, seed), degree, decay, seed,
                     id.str()});
    }
  }
  return out;
}

double boundary_lp_norm(const NormedSpace& space, const TrigPolynomial& f, double p,
                        bool subtract_mean) {
  const int m = std::max(128, 4 * f.degree() + 2);
  const QuadratureRule circ = circle_nodes(m);
  CoeffVector mean(space.dim(), Complex(0, 0));
  if (subtract_mean) mean = f.coeff(0);
  double acc = 0.0;
  CoeffVector v(space.dim());
  for (std::size_t i = 0; i < circ.size(); ++i) {
    CoeffVector b = f.eval_boundary(circ.x[i]);
    for (int j = 0; j < space.dim(); ++j) v[j] = b[j] - mean[j];
    acc += std::pow(space.norm(v), p) * circ.w[i];
  }
  return std::pow(acc, 1.0 / p);
}

std::vector<CoeffVector> unit_vectors(int d) {
  std::vector<CoeffVector> out(d, CoeffVector(d, Complex(0, 0)));
  for (int k = 0; k < d; ++k) out[k][k] = Complex(1.0, 0.0);
  return out;
}

}  // namespace

double StudyRow::get(const std::string& key) const {
  for (const auto& [k, v] : values)
    if (k == key) return v;
  throw std::out_of_range("StudyRow: missing key " + key);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need matched samples, >= 2");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Config / report plumbing

std::string StudyConfig::to_json() const {
  ordered_json j;
  j["study"] = study;
  j["space"] = {{"p", std::isinf(p) ? ordered_json("inf") : ordered_json(p)}, {"d", d}};
  j["dims"] = dims;
  j["corpus"] = {{"count", corpus.count},
                 {"degrees", corpus.degrees},
                 {"decays", corpus.decays},
                 {"seed", corpus.seed}};
  j["q"] = q;
  j["p_outer"] = p_outer;
  j["grid"] = {{"m", grid.m},         {"j", grid.j},
               {"order", grid.order}, {"depth", grid.depth},
               {"aperture", grid.aperture}, {"z0_levels", grid.z0_levels},
               {"refine", grid.refine}};
  j["out"] = out;
  return j.dump(2);
}

StudyConfig StudyConfig::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  StudyConfig c;
  if (j.contains("study")) c.study = j.at("study").get<std::string>();
  if (j.contains("space")) {
    const auto& s = j.at("space");
    if (s.contains("p"))
      c.p = s.at("p").is_string() ? kInfinityExponent : s.at("p").get<double>();
    if (s.contains("d")) c.d = s.at("d").get<int>();
  }
  if (j.contains("dims")) c.dims = j.at("dims").get<std::vector<int>>();
  if (j.contains("corpus")) {
    const auto& s = j.at("corpus");
    if (s.contains("count")) c.corpus.count = s.at("count").get<int>();
    if (s.contains("degrees")) c.corpus.degrees = s.at("degrees").get<std::vector<int>>();
    if (s.contains("decays")) c.corpus.decays = s.at("decays").get<std::vector<double>>();
    if (s.contains("seed")) c.corpus.seed = s.at("seed").get<std::uint64_t>();
  }
  if (j.contains("q")) c.q = j.at("q").get<double>();
  if (j.contains("p_outer")) c.p_outer = j.at("p_outer").get<std::vector<double>>();
  if (j.contains("grid")) {
    const auto& s = j.at("grid");
    if (s.contains("m")) c.grid.m = s.at("m").get<int>();
    if (s.contains("j")) c.grid.j = s.at("j").get<int>();
    if (s.contains("order")) c.grid.order = s.at("order").get<int>();
    if (s.contains("depth")) c.grid.depth = s.at("depth").get<int>();
    if (s.contains("aperture")) c.grid.aperture = s.at("aperture").get<double>();
    if (s.contains("z0_levels")) c.grid.z0_levels = s.at("z0_levels").get<int>();
    if (s.contains("refine")) c.grid.refine = s.at("refine").get<int>();
  }
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  if (c.corpus.count < 1 || c.corpus.degrees.empty() || c.corpus.decays.empty())
    throw std::invalid_argument("StudyConfig: corpus must be nonempty");
  for (int n : c.corpus.degrees)
    if (n < 1) throw std::invalid_argument("StudyConfig: degrees must be positive");
  if (c.d < 1 || c.grid.j < 1 || c.grid.order < 1 || c.grid.depth < 0 ||
      c.grid.z0_levels < 0 || c.grid.refine < 0)
    throw std::invalid_argument("StudyConfig: resolutions must be positive");
  return c;
}

bool StudyReport::all_passed() const {
  for (const auto& g : gates)
    if (!g.passed) return false;
  return true;
}

std::string StudyReport::to_json() const {
  ordered_json j;
  j["config"] = nlohmann::json::parse(config.to_json());
  auto& rows_j = j["rows"] = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r;
    r["id"] = row.id;
    ordered_json vals;
    for (const auto& [k, v] : row.values) vals[k] = v;
    r["values"] = std::move(vals);
    rows_j.push_back(std::move(r));
  }
  ordered_json sum;
  for (const auto& [k, v] : summary) sum[k] = v;
  j["summary"] = std::move(sum);
  auto& gates_j = j["gates"] = ordered_json::array();
  for (const auto& g : gates)
    gates_j.push_back({{"name", g.name},
                       {"passed", g.passed},
                       {"value", g.value},
                       {"threshold", g.threshold},
                       {"detail", g.detail}});
  ordered_json env;
  for (const auto& [k, v] : environment) env[k] = v;
  j["environment"] = std::move(env);
  j["all_passed"] = all_passed();
  return j.dump(2);
}

std::string StudyReport::to_csv() const {
  std::ostringstream os;
  os << "id,key,value\n";
  for (const auto& row : rows)
    for (const auto& [k, v] : row.values)
      os << row.id << "," << k << "," << format_float(v) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Equivalence study

StudyReport run_equivalence_study(const StudyConfig& config) {
  StudyReport report;
  report.config = config;
  add_environment(report, config);
  const NormedSpace space = config_space(config);
  const double q = config.q;

  const ArcGrid arcs{config.grid.depth, 4};
  PoissonCarlesonOptions opts;
  opts.disc = {config.grid.m, config.grid.j, config.grid.order};
  opts.z0_levels = config.grid.z0_levels;
  opts.with_error_estimate = false;

  std::vector<double> log_n, log_ratio_arc, log_ratio_poi, ratio_arc_all;
  for (const CorpusItem& item : build_corpus(config.corpus, space)) {
    const double bmo = bmo_arc(space, item.f, arcs);
    const double bmoq = bmo_poisson_q(space, item.f, q, config.grid.z0_levels);
    const double car = carleson_poisson(space, item.f, q, opts).value;
    const double ratio_arc = car / std::pow(bmo, q);
    const double ratio_poi = car / std::pow(bmoq, q);

    StudyRow row{item.id, {}};
    push(row, "degree", item.degree);
    push(row, "decay", item.decay);
    push(row, "seed", static_cast<double>(item.seed));
    push(row, "bmo_arc", bmo);
    push(row, "bmo_poisson", bmoq);
    push(row, "carleson", car);
    push(row, "ratio_arc", ratio_arc);
    push(row, "ratio_poisson", ratio_poi);
    report.rows.push_back(std::move(row));

    log_n.push_back(std::log(item.degree));
    log_ratio_arc.push_back(std::log(ratio_arc));
    log_ratio_poi.push_back(std::log(ratio_poi));
    ratio_arc_all.push_back(ratio_arc);
  }

  // resolution probe: first corpus item at one extra radial level
  {
    const CorpusItem probe = build_corpus(config.corpus, space).front();
    PoissonCarlesonOptions fine = opts;
    fine.disc.j += config.grid.refine;
    fine.disc.order += 2;
    const double base = carleson_poisson(space, probe.f, q, opts).value;
    const double refined = carleson_poisson(space, probe.f, q, fine).value;
    StudyRow row{"resolution_probe", {}};
    push(row, "carleson_base", base);
    push(row, "carleson_refined", refined);
    push(row, "relative_shift", std::abs(refined - base) / std::max(refined, 1e-300));
    report.rows.push_back(std::move(row));
  }

  const double rmin = *std::min_element(ratio_arc_all.begin(), ratio_arc_all.end());
  const double rmax = *std::max_element(ratio_arc_all.begin(), ratio_arc_all.end());
  const double slope_arc = fit_slope(log_n, log_ratio_arc);
  const double slope_poi = fit_slope(log_n, log_ratio_poi);
  report.summary.emplace_back("ratio_arc_min", rmin);
  report.summary.emplace_back("ratio_arc_max", rmax);
  report.summary.emplace_back("ratio_arc_median", median_of(ratio_arc_all));
  report.summary.emplace_back("band_arc", rmax / rmin);
  report.summary.emplace_back("slope_arc", slope_arc);
  report.summary.emplace_back("slope_poisson", slope_poi);

  report.gates.push_back(gate_le("band_arc", rmax / rmin, 64.0));
  report.gates.push_back(gate_abs_le("slope_arc", slope_arc, 0.15));
  report.gates.push_back(gate_abs_le("slope_poisson", slope_poi, 0.15));
  return report;
}

// ---------------------------------------------------------------------------
// Lacunary study

namespace {

double lacunary_reference(const NormedSpace& space, const std::vector<CoeffVector>& b,
                          double q) {
  double acc = 0.0;
  for (std::size_t k = 1; k <= b.size(); ++k)
    acc += std::pow(2.0, -q * static_cast<double>(k)) * std::pow(space.norm(b[k - 1]), q);
  return acc;
}

}  // namespace

StudyReport run_lacunary_study(const StudyConfig& config) {
  StudyReport report;
  report.config = config;
  add_environment(report, config);
  const double q = config.q;

  std::vector<double> ms, log_unit_ratio, all_ratios;
  for (int m = 3; m <= 8; ++m) {
    const NormedSpace space(config.p, m);
    const std::vector<CoeffVector> units = unit_vectors(m);

    std::vector<std::pair<std::string, std::vector<CoeffVector>>> variants;
    variants.emplace_back("unit", units);
    {
      std::vector<CoeffVector> single(m, CoeffVector(m, Complex(0, 0)));
      single[0][0] = Complex(1.0, 0.0);
      variants.emplace_back("single", std::move(single));
    }
    {
      std::mt19937_64 rng(item_seed(config.corpus.seed, 100 + m, 0));
      std::normal_distribution<double> gauss;
      std::vector<CoeffVector> rnd(m, CoeffVector(m, Complex(0, 0)));
      for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
          rnd[k][i] = Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
      variants.emplace_back("random", std::move(rnd));
    }

    PoissonCarlesonOptions opts;
    opts.disc = {config.grid.m, std::max(config.grid.j, m + 6), 8};
    opts.z0_levels = config.grid.z0_levels;
    opts.with_error_estimate = false;

    for (const auto& [name, b] : variants) {
      const TrigPolynomial f = lacunary_polynomial(b, space);
      const double lhs = carleson_poisson_values(space, f, q, opts).value;
      const double rhs = lacunary_reference(space, b, q);
      const double ratio = lhs / rhs;
      StudyRow row{"m" + std::to_string(m) + "/" + name, {}};
      push(row, "terms", m);
      push(row, "lhs_poisson_sup", lhs);
      push(row, "rhs_coefficient_sum", rhs);
      push(row, "ratio", ratio);
      report.rows.push_back(std::move(row));
      all_ratios.push_back(ratio);
      if (name == "unit") {
        ms.push_back(m);
        log_unit_ratio.push_back(std::log(ratio));
      }
    }
  }

  // resolution probe: m = 6 unit data at one extra radial level
  {
    const NormedSpace space(config.p, 6);
    const TrigPolynomial f = lacunary_polynomial(unit_vectors(6), space);
    PoissonCarlesonOptions base_opts;
    base_opts.disc = {config.grid.m, std::max(config.grid.j, 12), 8};
    base_opts.z0_levels = config.grid.z0_levels;
    base_opts.with_error_estimate = false;
    PoissonCarlesonOptions fine = base_opts;
    fine.disc.j += config.grid.refine;
    const double base = carleson_poisson_values(space, f, q, base_opts).value;
    const double refined = carleson_poisson_values(space, f, q, fine).value;
    StudyRow row{"resolution_probe", {}};
    push(row, "lhs_base", base);
    push(row, "lhs_refined", refined);
    push(row, "relative_shift", std::abs(refined - base) / std::max(refined, 1e-300));
    report.rows.push_back(std::move(row));
  }

  const double rmin = *std::min_element(all_ratios.begin(), all_ratios.end());
  const double rmax = *std::max_element(all_ratios.begin(), all_ratios.end());
  const double slope = fit_slope(ms, log_unit_ratio);
  report.summary.emplace_back("ratio_min", rmin);
  report.summary.emplace_back("ratio_max", rmax);
  report.summary.emplace_back("unit_trend_slope", slope);

  report.gates.push_back(gate_ge("ratio_lower", rmin, 1.0 / 32.0));
  report.gates.push_back(gate_le("ratio_upper", rmax, 32.0));
  report.gates.push_back(gate_abs_le("unit_trend_slope", slope, 0.15));
  return report;
}

// ---------------------------------------------------------------------------
// Witness study

StudyReport run_witness_study(const StudyConfig& config) {
  if (config.dims.size() < 3)
    throw std::invalid_argument("run_witness_study: need >= 3 dimensions");
  StudyReport report;
  report.config = config;
  add_environment(report, config);

  struct SpaceCase {
    double p;
    std::string label;
  };
  const std::vector<SpaceCase> cases = {
      {kInfinityExponent, "linf"}, {1.0, "l1"}, {2.0, "l2"}};

  std::vector<double> linf_ratio, l1_ratio, l2_ratio;
  for (const SpaceCase& sc : cases) {
    for (int d : config.dims) {
      const NormedSpace space(sc.p, d);
      const TrigPolynomial f = lacunary_polynomial(unit_vectors(d), space);
      PoissonCarlesonOptions opts;
      // the gradient-norm integrand of f is radial, so a modest circle count
      // suffices even at degree 2^d; the radial grid must resolve 2^-d
      opts.disc = {256, d + 6, 8};
      opts.z0_levels = config.grid.z0_levels;
      opts.with_error_estimate = false;
      const double car = carleson_poisson(space, f, 2.0, opts).value;
      const double bmoq = bmo_poisson_q(space, f, 2.0, config.grid.z0_levels);
      const double grow = car / (bmoq * bmoq);   // convexity-failure direction
      const double shrink = (bmoq * bmoq) / car; // smoothness-failure direction

      StudyRow row{sc.label + "/d" + std::to_string(d), {}};
      push(row, "dim", d);
      push(row, "carleson", car);
      push(row, "bmo_poisson", bmoq);
      push(row, "ratio_convexity", grow);
      push(row, "ratio_smoothness", shrink);
      report.rows.push_back(std::move(row));

      if (sc.label == "linf") linf_ratio.push_back(grow);
      if (sc.label == "l1") l1_ratio.push_back(shrink);
      if (sc.label == "l2") l2_ratio.push_back(grow);
    }
  }

  // resolution probe: smallest l2 witness at one extra radial level
  {
    const int d = config.dims.front();
    const NormedSpace space(2.0, d);
    const TrigPolynomial f = lacunary_polynomial(unit_vectors(d), space);
    PoissonCarlesonOptions opts;
    opts.disc = {256, d + 6, 8};
    opts.z0_levels = config.grid.z0_levels;
    opts.with_error_estimate = false;
    PoissonCarlesonOptions fine = opts;
    fine.disc.j += config.grid.refine;
    const double base = carleson_poisson(space, f, 2.0, opts).value;
    const double refined = carleson_poisson(space, f, 2.0, fine).value;
    StudyRow row{"resolution_probe", {}};
    push(row, "carleson_base", base);
    push(row, "carleson_refined", refined);
    push(row, "relative_shift", std::abs(refined - base) / std::max(refined, 1e-300));
    report.rows.push_back(std::move(row));
  }

  auto monotone_min_step = [](const std::vector<double>& v) {
    double worst = kInfinityExponent;
    for (std::size_t i = 1; i < v.size(); ++i) worst = std::min(worst, v[i] / v[i - 1]);
    return worst;
  };

  const double linf_growth = linf_ratio.back() / linf_ratio.front();
  const double l1_growth = l1_ratio.back() / l1_ratio.front();
  const double l2_band =
      *std::max_element(l2_ratio.begin(), l2_ratio.end()) /
      *std::min_element(l2_ratio.begin(), l2_ratio.end());
  report.summary.emplace_back("linf_growth", linf_growth);
  report.summary.emplace_back("l1_growth", l1_growth);
  report.summary.emplace_back("l2_band", l2_band);

  report.gates.push_back(
      gate_ge("linf_monotone", monotone_min_step(linf_ratio), 1.0, "every step > 1"));
  report.gates.push_back(gate_ge("linf_growth", linf_growth, 4.0));
  report.gates.push_back(
      gate_ge("l1_monotone", monotone_min_step(l1_ratio), 1.0, "every step > 1"));
  // the l^1 denominator carries a slowly decaying cross-term transient
  // (exactly computable: it caps the d=16 growth near 2.3), so this gate sits
  // at 2 rather than mirroring the l^inf one
  report.gates.push_back(gate_ge("l1_growth", l1_growth, 2.0));
  report.gates.push_back(gate_le("l2_band", l2_band, 2.0));
  return report;
}

// ---------------------------------------------------------------------------
// Mobius check

namespace {

struct MobiusPair {
  double lhs;  // pulled-back side: grad (f . phi) against (1-|z|^2) dA
  double rhs;  // direct side with the transformed weight
};

MobiusPair mobius_sides(const TrigPolynomial& f, Complex z0, int m, int j, int order) {
  const QuadratureRule disc = disc_rule(m, j, order);
  MobiusPair out{0.0, 0.0};
  for (std::size_t i = 0; i < disc.size(); ++i) {
    const double r = disc.x[i], theta = disc.y[i], w = disc.w[i];
    const Complex z = std::polar(r, theta);
    const MobiusImage img = mobius_map(z0, z);
    const double gl = gradient_norm_euclidean(f, img.w) * img.deriv_modulus;
    out.lhs += w * (1.0 - r * r) * gl * gl;
    const double gr = gradient_norm_euclidean(f, z);
    out.rhs += w * gr * gr * poisson_kernel_disc(z0, z) * (1.0 - r * r);
  }
  return out;
}

}  // namespace

StudyReport run_mobius_check(const StudyConfig& config) {
  if (!(config.p == 2.0 || config.d == 1))
    throw std::invalid_argument("run_mobius_check: Hilbert targets only");
  StudyReport report;
  report.config = config;
  add_environment(report, config);
  const NormedSpace space(2.0, config.d);

  // f . phi has angular bandwidth ~ N (1+|z0|)/(1-|z0|); 128 nodes cover the
  // default |z0| <= 0.7, N = 16 sweep with margin
  const int m0 = config.grid.m > 0 ? config.grid.m : 128;
  const int j0 = std::min(config.grid.j, 8);
  const int o0 = config.grid.order;
  const int m1 = 2 * m0, j1 = j0 + 2, o1 = o0 + 2;

  struct Item {
    TrigPolynomial f;
    Complex z0;
    std::string id;
    double coarse_tol;
  };
  std::vector<Item> items;
  {
    TrigPolynomial ident(1, space);
    CoeffVector one(space.dim(), Complex(0, 0));
    one[0] = Complex(1.0, 0.0);
    ident.set_coeff(1, one);
    items.push_back({ident, Complex(0.0, 0.0), "identity_map/z0=0", 1e-12});
    items.push_back({ident, Complex(0.5, 0.0), "linear/z0=0.5", 1e-3});
  }
  const std::vector<Complex> centers = {Complex(0.3, 0.0), Complex(0.0, 0.5),
                                        Complex(-0.7, 0.0)};
  for (int i = 0; i < 10; ++i) {
    const TrigPolynomial f =
        random_polynomial(16, 0.5, space, item_seed(config.corpus.seed, 200, i));
    for (std::size_t c = 0; c < centers.size(); ++c) {
      std::ostringstream id;
      id << "random" << i << "/z" << c;
      items.push_back({f, centers[c], id.str(), 1e-2});
    }
  }

  bool all_coarse_ok = true, all_decreasing = true;
  double worst_coarse = 0.0;
  for (const Item& item : items) {
    const MobiusPair coarse = mobius_sides(item.f, item.z0, m0, j0, o0);
    const MobiusPair fine = mobius_sides(item.f, item.z0, m1, j1, o1);
    const double dc = std::abs(coarse.lhs - coarse.rhs) / std::max(coarse.rhs, 1e-300);
    const double df = std::abs(fine.lhs - fine.rhs) / std::max(fine.rhs, 1e-300);
    StudyRow row{item.id, {}};
    push(row, "z0_re", item.z0.real());
    push(row, "z0_im", item.z0.imag());
    push(row, "lhs_coarse", coarse.lhs);
    push(row, "rhs_coarse", coarse.rhs);
    push(row, "rel_diff_coarse", dc);
    push(row, "lhs_fine", fine.lhs);
    push(row, "rhs_fine", fine.rhs);
    push(row, "rel_diff_fine", df);
    report.rows.push_back(std::move(row));
    if (dc > item.coarse_tol) all_coarse_ok = false;
    if (item.z0 != Complex(0.0, 0.0) && !(df < dc)) all_decreasing = false;
    worst_coarse = std::max(worst_coarse, dc);
  }

  report.summary.emplace_back("worst_rel_diff_coarse", worst_coarse);
  report.gates.push_back({"coarse_within_tolerance", all_coarse_ok, worst_coarse, 1e-2,
                          "per-item tolerances"});
  report.gates.push_back({"refinement_decreases_error", all_decreasing,
                          all_decreasing ? 1.0 : 0.0, 1.0, "fine < coarse for z0 != 0"});
  return report;
}

// ---------------------------------------------------------------------------
// Moduli study

StudyReport run_moduli_study(const StudyConfig& config) {
  StudyReport report;
  report.config = config;
  add_environment(report, config);
  const int d = std::max(config.d, 2);
  const std::vector<double> ps = {1.5, 2.0, 3.0, 4.0};
  const std::vector<double> eps = {0.1, 0.2, 0.4, 0.8};
  const std::vector<double> ts = {0.1, 0.2, 0.4, 0.8};

  bool exponents_ok = true, rho_ok = true;
  for (double p : ps) {
    const NormedSpace space(p, d);
    const ModulusCurve delta = convexity_curve(space, eps);
    const PowerTypeFit fit = power_type_fit(delta);
    const double target = std::max(2.0, p);
    StudyRow row{"convexity/p" + p_label(p), {}};
    push(row, "p", p);
    push(row, "fitted_exponent", fit.exponent);
    push(row, "target_exponent", target);
    push(row, "coefficient", fit.coefficient);
    push(row, "residual", fit.residual);
    for (std::size_t i = 0; i < eps.size(); ++i)
      push(row, "delta_eps" + std::to_string(i), delta.estimates[i]);
    report.rows.push_back(std::move(row));
    if (std::abs(fit.exponent - target) > 0.3) exponents_ok = false;

    const ModulusCurve rho = smoothness_curve(space, ts);
    StudyRow srow{"smoothness/p" + p_label(p), {}};
    push(srow, "p", p);
    double worst_excess = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      push(srow, "rho_t" + std::to_string(i), rho.estimates[i]);
      worst_excess = std::max(worst_excess, rho.estimates[i] - ts[i]);
    }
    push(srow, "worst_rho_minus_t", worst_excess);
    report.rows.push_back(std::move(srow));
    if (worst_excess > 1e-9) rho_ok = false;
  }

  bool l1_degenerate = false;
  double l1_delta_08 = 0.0;
  try {
    const NormedSpace l1(1.0, d);
    const ModulusCurve c = convexity_curve(l1, eps);
    l1_delta_08 = c.estimates.back();
    power_type_fit(c);
  } catch (const DegenerateModulusError&) {
    l1_degenerate = true;
  }
  {
    StudyRow row{"convexity/l1", {}};
    push(row, "degenerate", l1_degenerate ? 1.0 : 0.0);
    push(row, "delta_at_0.8", l1_delta_08);
    report.rows.push_back(std::move(row));
  }

  // budget probe: the search is monotone in its budget, so report one point
  // at double the multistart count
  {
    const NormedSpace space(3.0, d);
    ModulusBudget big;
    big.multistarts *= 2;
    const double base = modulus_convexity(space, 0.4);
    const double refined = modulus_convexity(space, 0.4, big);
    StudyRow row{"resolution_probe", {}};
    push(row, "delta_base_budget", base);
    push(row, "delta_double_budget", refined);
    push(row, "relative_shift", std::abs(refined - base) / std::max(base, 1e-300));
    report.rows.push_back(std::move(row));
  }

  report.gates.push_back({"convexity_exponents", exponents_ok, exponents_ok ? 1.0 : 0.0,
                          1.0, "|fit - max(2,p)| <= 0.3 for all p"});
  report.gates.push_back(
      {"l1_flagged_degenerate", l1_degenerate, l1_degenerate ? 1.0 : 0.0, 1.0, ""});
  report.gates.push_back(
      {"smoothness_below_t", rho_ok, rho_ok ? 1.0 : 0.0, 1.0, "rho(t) <= t"});
  return report;
}

// ---------------------------------------------------------------------------
// Kernel checks

StudyReport run_kernel_checks(const StudyConfig& config) {
  StudyReport report;
  report.config = config;
  add_environment(report, config);
  constexpr double kPi = std::numbers::pi;

  bool closed_forms_ok = true;
  auto check_value = [&](const std::string& id, double got, double want) {
    StudyRow row{id, {}};
    push(row, "value", got);
    push(row, "reference", want);
    const double rel = std::abs(got - want) / std::abs(want);
    push(row, "relative_error", rel);
    report.rows.push_back(std::move(row));
    if (rel > 1e-12) closed_forms_ok = false;
  };
  check_value("closed_form/poisson_1_0", poisson_kernel_halfplane(1.0, 0.0), 1.0 / kPi);
  check_value("closed_form/phi_1_0", phi_kernel(1.0, 0.0), -1.0 / kPi);
  check_value("closed_form/k_1_1_0", k_kernel(1.0, 1.0, 0.0), 1.0 / (4.0 * kPi));

  double worst_convolve = 0.0;
  for (double s : {0.5, 1.0, 2.0})
    for (double t : {0.5, 1.0, 2.0})
      for (double x : {0.0, 1.0, -3.0}) {
        const ConvolveCheck c = convolve_check(s, t, x);
        std::ostringstream id;
        id << "convolve/s" << s << "_t" << t << "_x" << x;
        StudyRow row{id.str(), {}};
        push(row, "numeric", c.numeric);
        push(row, "closed_form", c.closed_form);
        push(row, "relative_error", c.relative_error);
        push(row, "quadrature_error_estimate", c.quadrature_error_estimate);
        report.rows.push_back(std::move(row));
        worst_convolve = std::max(worst_convolve, c.relative_error);
      }

  const double sup1 = decay_ratio_sup(1);
  const double sup2 = decay_ratio_sup(2);
  {
    StudyRow row{"decay/sweep", {}};
    push(row, "sup_per_octave_1", sup1);
    push(row, "sup_per_octave_2", sup2);
    push(row, "doubling_ratio", sup2 / sup1);
    report.rows.push_back(std::move(row));
  }

  bool op_norm_ok = true;
  for (double q : {1.5, 2.0, 3.0}) {
    const auto est = op_norm_estimate(q, {1, 2, 3}, 3, config.corpus.seed);
    for (const auto& e : est) {
      std::ostringstream id;
      id << "op_norm/q" << q << "_res" << e.resolution;
      StudyRow row{id.str(), {}};
      push(row, "estimate", e.estimate);
      push(row, "trials", e.trials);
      report.rows.push_back(std::move(row));
    }
    const double stability = est.back().estimate / est.front().estimate;
    std::ostringstream id;
    id << "op_norm/q" << q << "_stability";
    StudyRow row{id.str(), {}};
    push(row, "final_over_first", stability);
    report.rows.push_back(std::move(row));
    if (!(stability <= 2.0)) op_norm_ok = false;
  }

  report.summary.emplace_back("worst_convolve_error", worst_convolve);
  report.summary.emplace_back("decay_sup", sup2);
  report.gates.push_back({"closed_forms", closed_forms_ok, closed_forms_ok ? 1.0 : 0.0,
                          1.0, "worked kernel values"});
  report.gates.push_back(gate_le("convolve_identity", worst_convolve, 1e-6));
  report.gates.push_back({"decay_sup_finite", std::isfinite(sup2) && sup2 > 0.0, sup2,
                          0.0, "finite positive sup"});
  report.gates.push_back(gate_le("decay_sup_stable_upper", sup2 / sup1, 2.0));
  report.gates.push_back(gate_ge("decay_sup_stable_lower", sup2 / sup1, 0.5));
  report.gates.push_back({"op_norm_stable", op_norm_ok, op_norm_ok ? 1.0 : 0.0, 1.0,
                          "final/first <= 2 per q"});
  return report;
}

// ---------------------------------------------------------------------------
// Lusin cotype study

StudyReport run_lp_cotype_study(const StudyConfig& config) {
  StudyReport report;
  report.config = config;
  add_environment(report, config);
  const NormedSpace space(2.0, config.d);

  double max_ratio = 0.0;
  bool slopes_ok = true;
  std::vector<CorpusItem> corpus = build_corpus(config.corpus, space);
  for (double p_out : config.p_outer) {
    std::vector<double> log_n, log_ratio;
    for (const CorpusItem& item : corpus) {
      const double g = g_Lp(space, item.f, 2.0, p_out);
      const double base = boundary_lp_norm(space, item.f, p_out, true);
      const double ratio = g / base;
      std::ostringstream id;
      id << "p" << p_out << "/" << item.id;
      StudyRow row{id.str(), {}};
      push(row, "degree", item.degree);
      push(row, "decay", item.decay);
      push(row, "g_lp", g);
      push(row, "centered_lp", base);
      push(row, "ratio", ratio);
      report.rows.push_back(std::move(row));
      max_ratio = std::max(max_ratio, ratio);
      log_n.push_back(std::log(item.degree));
      log_ratio.push_back(std::log(ratio));
    }
    const double slope = fit_slope(log_n, log_ratio);
    std::ostringstream key;
    key << "slope_p" << p_out;
    report.summary.emplace_back(key.str(), slope);
    if (std::abs(slope) > 0.15) slopes_ok = false;
  }

  // resolution probe: first item with a finer radial rule inside g
  {
    const CorpusItem& probe = corpus.front();
    const double base = g_Lp(space, probe.f, 2.0, 2.0);
    double refined = 0.0;
    {
      const int m = std::max(2 * probe.f.degree() + 1, 64);
      const QuadratureRule circ = circle_nodes(m);
      double acc = 0.0;
      for (std::size_t i = 0; i < circ.size(); ++i) {
        const double g = g_function(space, probe.f, 2.0, circ.x[i], GradientMode::Full,
                                    16 + config.grid.refine, 10);
        acc += g * g * circ.w[i];
      }
      refined = std::sqrt(acc);
    }
    StudyRow row{"resolution_probe", {}};
    push(row, "g_l2_base", base);
    push(row, "g_l2_refined", refined);
    push(row, "relative_shift", std::abs(refined - base) / std::max(refined, 1e-300));
    report.rows.push_back(std::move(row));
  }

  report.summary.emplace_back("max_ratio", max_ratio);
  report.gates.push_back(gate_le("max_ratio", max_ratio, 8.0));
  report.gates.push_back(
      {"no_degree_trend", slopes_ok, slopes_ok ? 1.0 : 0.0, 1.0, "|slope| <= 0.15 per p"});
  return report;
}

StudyReport run_study(const StudyConfig& config) {
  if (config.study == "equivalence") return run_equivalence_study(config);
  if (config.study == "lacunary") return run_lacunary_study(config);
  if (config.study == "witness") return run_witness_study(config);
  if (config.study == "mobius") return run_mobius_check(config);
  if (config.study == "moduli") return run_moduli_study(config);
  if (config.study == "kernels") return run_kernel_checks(config);
  if (config.study == "cotype") return run_lp_cotype_study(config);
  throw std::invalid_argument("run_study: unknown study " + config.study);
}

}  // namespace carleson
