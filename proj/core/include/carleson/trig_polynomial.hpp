#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "carleson/normed_space.hpp"

namespace carleson {

using Complex = std::complex<double>;
using CoeffVector = std::vector<Complex>;  // one value in C^d

/// A B-valued trigonometric polynomial on the circle together with its exact
/// Poisson extension into the disc. Coefficients a_k in C^d for k = -N..N;
/// the extension of e^{ik theta} is r^{|k|} e^{ik theta}, so evaluation and
/// gradients are term-by-term exact (no quadrature).
class TrigPolynomial {
 public:
  TrigPolynomial(int degree, const NormedSpace& space);

  int degree() const { return degree_; }
  int dim() const { return space_.dim(); }
  const NormedSpace& space() const { return space_; }

  const CoeffVector& coeff(int k) const { return coeffs_[k + degree_]; }
  void set_coeff(int k, const CoeffVector& a);

  // Frequencies with a nonzero coefficient, ascending. Lacunary data stays
  // cheap to evaluate through this list.
  const std::vector<int>& active_frequencies() const { return active_; }

  CoeffVector eval(Complex z) const;              // Poisson extension, |z| <= 1
  CoeffVector eval_boundary(double theta) const;  // f(e^{i theta})

  struct Gradient {
    CoeffVector dx, dy, dr;
  };
  Gradient eval_gradient(Complex z) const;  // |z| < 1 only

  // f rotated: g(w) = f(e^{i alpha} w).
  TrigPolynomial rotated(double alpha) const;

  std::string to_json() const;
  static TrigPolynomial from_json(const std::string& text);

  std::uint64_t seed = 0;  // recorded provenance for random corpora

 private:
  void rebuild_active();

  int degree_;
  NormedSpace space_;
  std::vector<CoeffVector> coeffs_;  // index k + N
  std::vector<int> active_;
};

// ||df/dx||_B + ||df/dy||_B (the sum convention).
double gradient_norm(const NormedSpace& space, const TrigPolynomial& f, Complex z);

// Per-coordinate Euclidean aggregate sqrt(sum_j |dx_j|^2 + |dy_j|^2); this is
// the conformally covariant variant used by the Mobius study.
double gradient_norm_euclidean(const TrigPolynomial& f, Complex z);

// ||d f/dr||_B, the radial-derivative variant.
double radial_gradient_norm(const NormedSpace& space, const TrigPolynomial& f, Complex z);

// (1-|z0|^2)/|1 - conj(z0) w|^2, defined for w in the closed disc.
double poisson_kernel_disc(Complex z0, Complex w);

struct MobiusImage {
  Complex w;             // (z + z0)/(1 + conj(z0) z)
  double deriv_modulus;  // |phi'(z)| = (1-|z0|^2)/|1 + conj(z0) z|^2
};
MobiusImage mobius_map(Complex z0, Complex z);

// Coefficients i.i.d. complex Gaussian per coordinate scaled by
// (1+|k|)^-gamma; deterministic in the seed.
TrigPolynomial random_polynomial(int degree, double decay, const NormedSpace& space,
                                 std::uint64_t seed);

// f(z) = sum_k a_k z^{2^k}, k = 1..m.
TrigPolynomial lacunary_polynomial(const std::vector<CoeffVector>& vectors,
                                   const NormedSpace& space);

}  // namespace carleson
