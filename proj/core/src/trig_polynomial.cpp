#include "carleson/trig_polynomial.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

namespace carleson {

namespace {

Complex unit_power(double r_pow, int k, double theta) {
  return std::polar(r_pow, k * theta);
}

}  // namespace

TrigPolynomial::TrigPolynomial(int degree, const NormedSpace& space)
    : degree_(degree), space_(space) {
  if (degree < 0) throw std::invalid_argument("TrigPolynomial: degree must be >= 0");
  coeffs_.assign(2 * degree + 1, CoeffVector(space.dim(), Complex(0.0, 0.0)));
}

void TrigPolynomial::set_coeff(int k, const CoeffVector& a) {
  if (k < -degree_ || k > degree_)
    throw std::out_of_range("TrigPolynomial::set_coeff: frequency out of range");
  if (static_cast<int>(a.size()) != space_.dim())
    throw std::invalid_argument("TrigPolynomial::set_coeff: dimension mismatch");
  coeffs_[k + degree_] = a;
  rebuild_active();
}

void TrigPolynomial::rebuild_active() {
  active_.clear();
  for (int k = -degree_; k <= degree_; ++k) {
    for (const Complex& c : coeffs_[k + degree_]) {
      if (c != Complex(0.0, 0.0)) {
        active_.push_back(k);
        break;
      }
    }
  }
}

CoeffVector TrigPolynomial::eval(Complex z) const {
  const double r = std::abs(z);
  if (r > 1.0 + 1e-12)
    throw std::invalid_argument("TrigPolynomial::eval: point outside closed disc");
  const double theta = std::arg(z);
  CoeffVector out(space_.dim(), Complex(0.0, 0.0));
  for (int k : active_) {
    const Complex phase = unit_power(std::pow(r, std::abs(k)), k, theta);
    const CoeffVector& a = coeffs_[k + degree_];
    for (int i = 0; i < space_.dim(); ++i) out[i] += a[i] * phase;
  }
  return out;
}

CoeffVector TrigPolynomial::eval_boundary(double theta) const {
  CoeffVector out(space_.dim(), Complex(0.0, 0.0));
  for (int k : active_) {
    const Complex phase = unit_power(1.0, k, theta);
    const CoeffVector& a = coeffs_[k + degree_];
    for (int i = 0; i < space_.dim(); ++i) out[i] += a[i] * phase;
  }
  return out;
}

TrigPolynomial::Gradient TrigPolynomial::eval_gradient(Complex z) const {
  const double r = std::abs(z);
  if (!(r < 1.0))
    throw std::invalid_argument("TrigPolynomial::eval_gradient: boundary point rejected");
  const double theta = std::arg(z);
  const int d = space_.dim();
  Gradient g{CoeffVector(d, Complex(0, 0)), CoeffVector(d, Complex(0, 0)),
             CoeffVector(d, Complex(0, 0))};
  // Analytic part contributes k a_k z^{k-1}, conjugate-analytic part
  // |k| a_k conj(z)^{|k|-1}; dy = i (analytic - conjugate-analytic).
  for (int k : active_) {
    if (k == 0) continue;
    const int ak = std::abs(k);
    const double rp = std::pow(r, ak - 1);
    const CoeffVector& a = coeffs_[k + degree_];
    if (k > 0) {
      const Complex zp = unit_power(rp, k - 1, theta);
      for (int i = 0; i < d; ++i) {
        const Complex term = static_cast<double>(k) * a[i] * zp;
        g.dx[i] += term;
        g.dy[i] += Complex(0, 1) * term;
      }
    } else {
      const Complex zbp = unit_power(rp, -(ak - 1), theta);
      for (int i = 0; i < d; ++i) {
        const Complex term = static_cast<double>(ak) * a[i] * zbp;
        g.dx[i] += term;
        g.dy[i] -= Complex(0, 1) * term;
      }
    }
    const Complex rphase = unit_power(rp, k, theta);
    for (int i = 0; i < d; ++i) g.dr[i] += static_cast<double>(ak) * a[i] * rphase;
  }
  return g;
}

TrigPolynomial TrigPolynomial::rotated(double alpha) const {
  TrigPolynomial out(degree_, space_);
  for (int k = -degree_; k <= degree_; ++k) {
    CoeffVector a = coeffs_[k + degree_];
    const Complex phase = std::polar(1.0, k * alpha);
    for (Complex& c : a) c *= phase;
    out.coeffs_[k + degree_] = a;
  }
  out.rebuild_active();
  out.seed = seed;
  return out;
}

double gradient_norm(const NormedSpace& space, const TrigPolynomial& f, Complex z) {
  auto g = f.eval_gradient(z);
  return space.norm(g.dx) + space.norm(g.dy);
}

double gradient_norm_euclidean(const TrigPolynomial& f, Complex z) {
  auto g = f.eval_gradient(z);
  double s = 0.0;
  for (std::size_t i = 0; i < g.dx.size(); ++i) s += std::norm(g.dx[i]) + std::norm(g.dy[i]);
  return std::sqrt(s);
}

double radial_gradient_norm(const NormedSpace& space, const TrigPolynomial& f, Complex z) {
  return space.norm(f.eval_gradient(z).dr);
}

double poisson_kernel_disc(Complex z0, Complex w) {
  if (!(std::abs(z0) < 1.0))
    throw std::invalid_argument("poisson_kernel_disc: z0 must be interior");
  return (1.0 - std::norm(z0)) / std::norm(1.0 - std::conj(z0) * w);
}

MobiusImage mobius_map(Complex z0, Complex z) {
  if (!(std::abs(z0) < 1.0)) throw std::invalid_argument("mobius_map: z0 must be interior");
  const Complex denom = 1.0 + std::conj(z0) * z;
  MobiusImage out;
  out.w = (z + z0) / denom;
  out.deriv_modulus = (1.0 - std::norm(z0)) / std::norm(denom);
  return out;
}

TrigPolynomial random_polynomial(int degree, double decay, const NormedSpace& space,
                                 std::uint64_t seed) {
  if (decay < 0.0) throw std::invalid_argument("random_polynomial: decay must be >= 0");
  TrigPolynomial f(degree, space);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = -degree; k <= degree; ++k) {
    const double scale = std::pow(1.0 + std::abs(k), -decay);
    CoeffVector a(space.dim());
    for (int i = 0; i < space.dim(); ++i)
      a[i] = scale * Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
    f.set_coeff(k, a);
  }
  f.seed = seed;
  return f;
}

TrigPolynomial lacunary_polynomial(const std::vector<CoeffVector>& vectors,
                                   const NormedSpace& space) {
  const int m = static_cast<int>(vectors.size());
  if (m < 1 || m > 16)
    throw std::invalid_argument("lacunary_polynomial: need 1 <= m <= 16 terms");
  const int degree = 1 << m;
  TrigPolynomial f(degree, space);
  for (int k = 1; k <= m; ++k) f.set_coeff(1 << k, vectors[k - 1]);
  return f;
}

std::string TrigPolynomial::to_json() const {
  nlohmann::ordered_json j;
  j["space"]["p"] = std::isinf(space_.p()) ? nlohmann::ordered_json("inf")
                                           : nlohmann::ordered_json(space_.p());
  j["space"]["d"] = space_.dim();
  j["degree"] = degree_;
  j["seed"] = seed;
  auto& coeffs = j["coefficients"] = nlohmann::ordered_json::array();
  for (int k = -degree_; k <= degree_; ++k) {
    nlohmann::ordered_json freq = nlohmann::ordered_json::array();
    for (const Complex& c : coeffs_[k + degree_])
      freq.push_back({c.real(), c.imag()});
    coeffs.push_back(std::move(freq));
  }
  return j.dump();
}

TrigPolynomial TrigPolynomial::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  double p = j.at("space").at("p").is_string() ? kInfinityExponent
                                               : j.at("space").at("p").get<double>();
  const int d = j.at("space").at("d").get<int>();
  const int degree = j.at("degree").get<int>();
  NormedSpace space(p, d);
  TrigPolynomial f(degree, space);
  const auto& coeffs = j.at("coefficients");
  if (static_cast<int>(coeffs.size()) != 2 * degree + 1)
    throw std::invalid_argument("TrigPolynomial::from_json: coefficient count mismatch");
  for (int k = -degree; k <= degree; ++k) {
    const auto& freq = coeffs.at(k + degree);
    CoeffVector a(d);
    for (int i = 0; i < d; ++i)
      a[i] = Complex(freq.at(i).at(0).get<double>(), freq.at(i).at(1).get<double>());
    f.set_coeff(k, a);
  }
  if (j.contains("seed")) f.seed = j.at("seed").get<std::uint64_t>();
  return f;
}

}  // namespace carleson
