#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "carleson/quadrature.hpp"

using namespace carleson;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("circle nodes are equispaced with uniform normalized weights") {
  const QuadratureRule r = circle_nodes(4);
  REQUIRE(r.size() == 4);
  CHECK(r.x[0] == doctest::Approx(0.0));
  CHECK(r.x[1] == doctest::Approx(kPi / 2));
  CHECK(r.x[2] == doctest::Approx(kPi));
  CHECK(r.x[3] == doctest::Approx(3 * kPi / 2));
  for (double w : r.w) CHECK(w == doctest::Approx(0.25));
  CHECK(r.total_weight() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("circle rule annihilates nonzero frequencies below M") {
  const QuadratureRule r = circle_nodes(16);
  for (int k = 1; k < 16; ++k) {
    std::complex<double> acc(0, 0);
    for (std::size_t i = 0; i < r.size(); ++i)
      acc += std::polar(r.w[i], k * r.x[i]);
    CHECK(std::abs(acc) < 1e-14);
  }
}

TEST_CASE("radial composite integrates constants and (1-r) exactly") {
  for (int J : {4, 8, 12}) {
    const QuadratureRule r = radial_composite(J, 6);
    CHECK(r.total_weight() == doctest::Approx(1.0 - std::pow(2.0, -J)).epsilon(1e-12));
    const double v = integrate(r, [](double) { return 1.0; });
    CHECK(v == doctest::Approx(1.0 - std::pow(2.0, -J)).epsilon(1e-12));
  }
  // tail of int_0^1 (1-r) dr past 1-2^-J is 2^-2J-1
  for (int J : {6, 10}) {
    const QuadratureRule r = radial_composite(J, 8);
    const double v = integrate(r, [](double rr) { return 1.0 - rr; });
    CHECK(std::abs(v - (0.5 - std::pow(2.0, -2.0 * J - 1))) < 1e-12);
  }
  // int_0^{1-2^-12} r dr, exact for a polynomial integrand
  const QuadratureRule r = radial_composite(12, 8);
  const double rmax = 1.0 - std::pow(2.0, -12);
  CHECK(integrate(r, [](double rr) { return rr; }) ==
        doctest::Approx(0.5 * rmax * rmax).epsilon(1e-12));
}

TEST_CASE("all weights strictly positive") {
  for (const QuadratureRule& r :
       {circle_nodes(7), radial_composite(5, 3), disc_rule(8, 5, 3)})
    for (double w : r.w) CHECK(w > 0.0);
}

TEST_CASE("disc rule mass, moment, and symmetry") {
  const QuadratureRule d = disc_rule(32, 8, 6);
  const double mass = integrate(d, [](double, double) { return 1.0; });
  const double trunc = 1.0 - std::pow(2.0, -8);
  CHECK(mass == doctest::Approx(kPi * trunc * trunc).epsilon(1e-10));

  const double weighted =
      integrate(d, [](double r, double) { return 1.0 - r * r; });
  CHECK(weighted == doctest::Approx(kPi / 2).epsilon(1e-4));

  std::complex<double> first(0, 0);
  for (std::size_t i = 0; i < d.size(); ++i)
    first += d.w[i] * std::polar(d.x[i], d.y[i]);
  CHECK(std::abs(first) < 1e-13);
}

TEST_CASE("disc mass converges to pi at rate 2^-J") {
  double prev_err = 1.0;
  for (int J = 4; J <= 10; ++J) {
    const QuadratureRule d = disc_rule(16, J, 6);
    const double err = kPi - integrate(d, [](double, double) { return 1.0; });
    CHECK(err > 0.0);
    CHECK(err < prev_err);
    if (J > 4) CHECK(prev_err / err == doctest::Approx(2.0).epsilon(0.2));
    prev_err = err;
  }
}

TEST_CASE("rules are deterministic") {
  const QuadratureRule a = disc_rule(16, 6, 4);
  const QuadratureRule b = disc_rule(16, 6, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.x[i] == b.x[i]);
    CHECK(a.y[i] == b.y[i]);
    CHECK(a.w[i] == b.w[i]);
  }
}

TEST_CASE("gauss-legendre nodes reproduce known order-3 rule") {
  std::vector<double> nodes, weights;
  gauss_legendre(3, nodes, weights);
  REQUIRE(nodes.size() == 3);
  CHECK(nodes[0] == doctest::Approx(-std::sqrt(0.6)).epsilon(1e-14));
  CHECK(nodes[1] == doctest::Approx(0.0));
  CHECK(weights[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-14));
  CHECK(weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("refine_and_estimate converges on (1-r) and flags bad input") {
  const QuadratureRule base = radial_composite(4, 2);
  const RefinementEstimate e =
      refine_and_estimate([](double r) { return 1.0 - r; }, base, 4);
  CHECK(e.value == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(e.levels_used == 4);
  CHECK(e.error_estimate >= 0.0);

  // refining a J=4 radial rule to J=6 moves the cutoff; for a constant the
  // last shift is exactly 3 (2^-5 - 2^-6)
  const RefinementEstimate c =
      refine_and_estimate([](double) { return 3.0; }, base, 3);
  CHECK(c.value == doctest::Approx(3.0 * (1.0 - std::pow(2.0, -6))).epsilon(1e-12));
  CHECK(c.error_estimate == doctest::Approx(3.0 * std::pow(2.0, -6)).epsilon(1e-12));

  CHECK_THROWS_AS(refine_and_estimate(
                      [](double r) { return r < 0.5 ? 1.0 : std::nan(""); },
                      base, 2),
                  std::domain_error);
  CHECK_THROWS_AS(refine_and_estimate([](double) { return 1.0; }, base, 1),
                  std::invalid_argument);
}

TEST_CASE("refinement error decreases with levels on a smooth integrand") {
  const QuadratureRule base = radial_composite(3, 2);
  auto f = [](double r) { return std::sqrt(1.0 + r); };
  const RefinementEstimate lo = refine_and_estimate(f, base, 2);
  const RefinementEstimate hi = refine_and_estimate(f, base, 5);
  CHECK(hi.error_estimate < lo.error_estimate);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(circle_nodes(0), std::invalid_argument);
  CHECK_THROWS_AS(radial_composite(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(radial_composite(4, 0), std::invalid_argument);
}
