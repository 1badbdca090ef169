#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carleson/normed_space.hpp"
#include "carleson/trig_polynomial.hpp"

namespace carleson {

// Half-plane (n = 1) kernels in closed form:
//   P_t(x)   = (1/pi) t / (t^2 + x^2)
//   phi_t(x) = t d/dt P_t(x) = (1/pi) t (x^2 - t^2) / (t^2 + x^2)^2
//   k_{s,t}(x) = s t d^2/dr^2 P_r(x) |_{r=s+t},
//   d^2/dr^2 P_r(x) = (2/pi) r (r^2 - 3 x^2) / (r^2 + x^2)^3.
double poisson_kernel_halfplane(double t, double x);
double phi_kernel(double t, double x);
double poisson_second_radial(double r, double x);
double k_kernel(double s, double t, double x);

enum class KernelKind { Poisson, Phi, K };
// Unified entry; s is used only for KernelKind::K.
double kernel_eval(KernelKind kind, double s, double t, double x);

// |k_{s,t}(x)| (s + t + |x|)^3 / (s t), the normalized decay ratio.
double decay_ratio(double s, double t, double x);

// sup of decay_ratio over the log grid s, t in [2^-8, 2^8], x in
// [-2^10, 2^10], sampled per_octave points per octave (plus x = 0).
double decay_ratio_sup(int per_octave);

struct ConvolveCheck {
  double numeric = 0.0;
  double closed_form = 0.0;
  double relative_error = 0.0;
  double quadrature_error_estimate = 0.0;  // tail bound + step refinement gap
};

// Verifies phi_s * phi_t = k_{s,t} at one point: windowed composite-Simpson
// convolution against the closed form. Reports, never hides, a coarse
// resolution through quadrature_error_estimate.
ConvolveCheck convolve_check(double s, double t, double x, int intervals = 1 << 20);

/// Truncated cone {(z, t): |z| < t} with measure dz dt/t^2: dyadic t-bands
/// [t_max 2^-(i+1), t_max 2^-i] down to t_min, each carrying z midpoints
/// uniform in (-t*, t*) at the band's representative t*.
struct ConeGrid {
  struct Cell {
    double z = 0.0;
    double t = 0.0;        // band representative (midpoint)
    double measure = 0.0;  // dz * integral of dt/t^2 over the band
    int level = 0;
  };

  double t_min = 1.0 / 64.0;  // 2^-6
  double t_max = 8.0;         // 2^3
  int z_per_level = 8;
  std::vector<Cell> cells;
  std::vector<double> level_t;  // representative t per level

  static ConeGrid make(double t_min, double t_max, int z_per_level);
  double total_measure() const;
  std::string to_json() const;
};

struct LineGrid {
  std::vector<double> x;
  double weight = 0.0;  // uniform dx

  static LineGrid make(double x_max, int count);
};

/// Discrete restriction of h in L^p(R; A), A = L^q(cone; B): one B-valued
/// sample per (x-node, cone cell).
struct ConeFunction {
  ConeGrid cone;
  LineGrid line;
  NormedSpace space{2.0, 1};
  std::vector<std::vector<CoeffVector>> values;  // [x-node][cell]

  static ConeFunction zeros(const ConeGrid& cone, const LineGrid& line,
                            const NormedSpace& space);
  // Discrete L^q(line; L^q(cone; B)) norm.
  double lq_norm(double q) const;
  std::string to_json() const;
};

// Output(x, u, s) = sum over (y, z, t) of k_{s,t}(x + u + z - y) h(y, z, t)
// with cone-cell and line weights; output lives on the same grids.
ConeFunction apply_Phi(const ConeFunction& h);

// The u = 0 slice: values[x-node][t-level].
std::vector<std::vector<CoeffVector>> apply_Phi_slice(const ConeFunction& h);

// Psi(h)(x) = sum over (y, z, t) of phi_t(x + z - y) h(y, z, t).
std::vector<CoeffVector> apply_Psi(const ConeFunction& h);

struct OpNormEstimate {
  int resolution = 0;
  double estimate = 0.0;  // max over trials of ||Phi h||_q / ||h||_q
  int trials = 0;
  std::uint64_t seed = 0;
};

// Random-input probes of the discrete operator norm of Phi on L^q(line; A)
// at increasing grid resolutions (scalar B).
std::vector<OpNormEstimate> op_norm_estimate(double q, const std::vector<int>& resolutions,
                                             int trials, std::uint64_t seed);

std::string op_norm_csv(const std::vector<OpNormEstimate>& estimates, double q);

}  // namespace carleson
