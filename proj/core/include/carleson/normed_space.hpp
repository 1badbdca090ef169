#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace carleson {

inline constexpr double kInfinityExponent = std::numeric_limits<double>::infinity();

/// A finite-dimensional normed space l^p_d, optionally renormed through an
/// invertible linear map T: ||x|| = ||Tx||_p. Complex vectors are measured
/// through the l^p aggregate of coordinate moduli.
class NormedSpace {
 public:
  NormedSpace(double p, int d);
  NormedSpace(double p, int d, const Eigen::MatrixXd& transform);

  double p() const { return p_; }
  int dim() const { return d_; }
  bool has_transform() const { return transform_.has_value(); }
  const Eigen::MatrixXd& transform() const { return *transform_; }
  double transform_condition() const { return condition_; }

  double norm(std::span<const std::complex<double>> v) const;
  double norm(std::span<const double> v) const;
  double norm(const std::vector<std::complex<double>>& v) const {
    return norm(std::span<const std::complex<double>>(v));
  }
  double norm(const std::vector<double>& v) const {
    return norm(std::span<const double>(v));
  }

 private:
  double aggregate(std::span<const double> moduli) const;

  double p_;
  int d_;
  std::optional<Eigen::MatrixXd> transform_;
  double condition_ = 1.0;
};

inline NormedSpace make_space(double p, int d) { return NormedSpace(p, d); }
inline NormedSpace make_space(double p, int d, const Eigen::MatrixXd& t) {
  return NormedSpace(p, d, t);
}

struct ModulusBudget {
  int multistarts = 48;
  int sweeps = 120;
  int polish = 3;       // best candidates receiving the full sweep budget
  unsigned seed = 20240811;
};

// Upper-biased estimate of the modulus of convexity
//   delta(eps) = inf { 1 - ||(a+b)/2|| : ||a||=||b||=1, ||a-b||=eps },
// by structured starts, random multistart, and coordinate descent. The
// constraint ||a-b|| = eps is enforced by bisection along chords to 1e-10.
double modulus_convexity(const NormedSpace& space, double eps,
                         const ModulusBudget& budget = {});

// Lower-biased estimate of the modulus of smoothness
//   rho(t) = sup { (||a+tb|| + ||a-tb||)/2 - 1 : ||a||=||b||=1 }.
double modulus_smoothness(const NormedSpace& space, double t,
                          const ModulusBudget& budget = {});

struct ModulusCurve {
  enum class Side { UpperBiased, LowerBiased };
  std::vector<double> abscissae;
  std::vector<double> estimates;
  Side side = Side::UpperBiased;
  ModulusBudget budget;
};

ModulusCurve convexity_curve(const NormedSpace& space, const std::vector<double>& eps,
                             const ModulusBudget& budget = {});
ModulusCurve smoothness_curve(const NormedSpace& space, const std::vector<double>& ts,
                              const ModulusBudget& budget = {});

struct PowerTypeFit {
  double exponent = 0.0;
  double coefficient = 0.0;
  double residual = 0.0;  // RMS log residual
};

class DegenerateModulusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Least-squares fit of estimate ~ c * x^q on log-log values. Throws
// DegenerateModulusError when the curve contains (numerical) zeros.
PowerTypeFit power_type_fit(const ModulusCurve& curve);

}  // namespace carleson
