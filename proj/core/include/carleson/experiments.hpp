#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "carleson/functionals.hpp"
#include "carleson/halfplane.hpp"
#include "carleson/normed_space.hpp"
#include "carleson/trig_polynomial.hpp"

namespace carleson {

struct CorpusSpec {
  int count = 10;  // polynomials per degree; decay exponents are cycled
  std::vector<int> degrees = {8, 16, 32, 64, 128};
  std::vector<double> decays = {0.0, 0.5, 1.0};
  std::uint64_t seed = 1234;
};

struct GridSpec {
  int m = 0;      // circle nodes, 0 = automatic
  int j = 10;     // dyadic radial levels
  int order = 6;  // Gauss-Legendre points per radial panel
  int depth = 5;  // arc-grid depth
  double aperture = 2.0;
  int z0_levels = 4;
  int refine = 1;  // extra refinement levels reported alongside the base grid
};

struct StudyConfig {
  std::string study;
  double p = 2.0;
  int d = 1;
  std::vector<int> dims = {2, 4, 8, 16};  // witness study dimension sweep
  CorpusSpec corpus;
  double q = 2.0;
  std::vector<double> p_outer = {1.5, 2.0, 4.0};  // outer exponents (cotype study)
  GridSpec grid;
  std::string out;

  std::string to_json() const;
  static StudyConfig from_json(const std::string& text);
};

struct GateResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;  // direction of the comparison, context
};

struct StudyRow {
  std::string id;
  std::vector<std::pair<std::string, double>> values;
  double get(const std::string& key) const;
};

struct StudyReport {
  StudyConfig config;
  std::vector<StudyRow> rows;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<GateResult> gates;
  std::vector<std::pair<std::string, std::string>> environment;

  bool all_passed() const;
  std::string to_json() const;
  std::string to_csv() const;  // long format: id,key,value with 17 significant digits
};

// Ratio bands carleson_poisson(f,q) / bmo^q on a random corpus: checks the
// band width and the absence of a degree trend.
StudyReport run_equivalence_study(const StudyConfig& config);

// f = sum a_k z^{2^k}: compares the weighted Poisson supremum of ||f||^q with
// sum 2^{-qk} ||a_k||^q, two-sided, across m and coefficient patterns.
StudyReport run_lacunary_study(const StudyConfig& config);

// Growth witnesses f_d = sum_{k<=d} e_k z^{2^k} in l^inf_d / l^1_d (ratios
// must grow with d) against the flat l^2_d control.
StudyReport run_witness_study(const StudyConfig& config);

// Conformal change-of-variables identity for the gradient measure
// ||grad f||^2 (1-|z|^2) dA, checked at two grid resolutions.
StudyReport run_mobius_check(const StudyConfig& config);

// Convexity/smoothness moduli of l^p with power-type exponent fits.
StudyReport run_moduli_study(const StudyConfig& config);

// Closed-form kernel values, the convolution identity, decay-ratio sweeps,
// and random operator-norm probes at increasing resolutions.
StudyReport run_kernel_checks(const StudyConfig& config);

// ||G_2(f)||_p vs ||f - a_0||_p on a Hilbert-valued corpus.
StudyReport run_lp_cotype_study(const StudyConfig& config);

StudyReport run_study(const StudyConfig& config);  // dispatch on config.study

// Least-squares slope of y against x; helper shared by trend gates.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string format_float(double v);  // %.17g

}  // namespace carleson
