#include <cmath>
#include <numbers>

#include "carleman/quadrature.hpp"
#include "carleman/series.hpp"
#include "carleman/types.hpp"
#include "carleman/verification.hpp"
#include "doctest.h"

using namespace carleman;

TEST_CASE("gauss-legendre is exact for polynomials up to degree 2n-1") {
  for (int n : {1, 2, 5, 12, 40}) {
    const auto q = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(q.integrate([&](double x) { return std::pow(x, d); }) == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("newton nodes agree with the eigenvalue construction") {
  for (int n : {3, 16, 64}) {
    const auto q = gauss_legendre(n);
    const auto [x, w] = golub_welsch(n);
    for (int m = 0; m < n; ++m) {
      CHECK(q.nodes[m] == doctest::Approx(x[m]).epsilon(1e-12));
      CHECK(q.weights[m] == doctest::Approx(w[m]).epsilon(1e-11));
    }
  }
}

TEST_CASE("composite and graded rules") {
  const auto c = composite_gauss_legendre(0.0, std::numbers::pi, 7, 10);
  CHECK(c.size() == 70);
  CHECK(c.integrate([](double x) { return std::sin(x); }) == doctest::Approx(2.0).epsilon(1e-14));

  const auto g = graded_gauss_legendre(1.0 / 64, 32, 200, 12);
  CHECK(g.nodes.front() >= -200.0);
  CHECK(g.nodes.back() <= 200.0);
  CHECK(g.integrate([](double x) { return std::exp(-x * x); }) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  // narrow feature at the origin and a wide one far out
  CHECK(g.integrate([](double x) { return std::exp(-1e4 * x * x); }) ==
        doctest::Approx(std::sqrt(std::numbers::pi) / 100).epsilon(1e-10));
  CHECK(g.integrate([](double x) { return std::exp(-(x - 100) * (x - 100) / 400); }) ==
        doctest::Approx(20 * std::sqrt(std::numbers::pi)).epsilon(1e-10));

  CHECK_THROWS_AS(gauss_legendre(0), Error);
  CHECK_THROWS_AS(composite_gauss_legendre(0, 1, 0, 4), Error);
}

TEST_CASE("series certificates") {
  std::vector<double> geo, pw, harmonic;
  for (int k = 1; k <= 40; ++k) {
    geo.push_back(std::ldexp(1.0, -k));
    pw.push_back(1.0 / (double(k) * k));
    harmonic.push_back(1.0 / k);
  }
  const auto g = certify_series(geo);
  CHECK(g.model == "geometric");
  CHECK(g.decay_ok);
  CHECK(g.total() == doctest::Approx(1.0 - std::ldexp(1.0, -40)).epsilon(1e-15));
  CHECK(g.tail_ratio == doctest::Approx(0.5));

  const auto p = certify_series(pw);
  CHECK(p.model == "power");
  CHECK(p.tail_exponent > 1.9);
  double direct = 0.0;
  for (int k = 1; k <= 40; ++k) direct += 1.0 / (double(k) * k);
  CHECK(p.total() == doctest::Approx(direct).epsilon(1e-15));

  const auto h = certify_series(harmonic);
  CHECK(h.model == "none");
  CHECK_FALSE(h.decay_ok);

  const auto z = certify_series({0.0, 0.0, 0.0});
  CHECK(z.model == "zero");
  CHECK(z.total() == 0.0);

  // a late spike keeps the monotone envelope flat, whatever the last ratio says
  std::vector<double> spike;
  for (int k = 1; k <= 10; ++k) spike.push_back(std::ldexp(1.0, -k));
  spike.push_back(0.9);
  spike.push_back(std::ldexp(1.0, -12));
  const auto s = certify_series(spike, {4, 0.95, 1.05});
  CHECK(s.model == "none");
  CHECK(s.tail_ratio == doctest::Approx(1.0));

  CHECK_THROWS_AS(certify_series({1.0, -1.0}), Error);
  CHECK_THROWS_AS(certify_series({1.0, std::nan("")}), Error);
}

TEST_CASE("geometric majorant violations are reported 1-based") {
  CHECK(first_majorant_violation({0.5, 0.25, 0.125}, 1.0) == 0);
  CHECK(first_majorant_violation({0.5, 0.3, 0.125}, 1.0) == 2);
  CHECK(first_majorant_violation({0.5, 0.25 * (1 + 1e-9)}, 1.0, 1e-8) == 0);
  CHECK(first_majorant_violation({}, 1.0) == 0);
}
