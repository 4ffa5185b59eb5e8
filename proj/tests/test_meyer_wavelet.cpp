#include <cmath>
#include <numbers>
#include <sstream>

#include "carleman/meyer_wavelet.hpp"
#include "carleman/verification.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace carleman;
using std::numbers::pi;

namespace {

// w(s) = (1/pi) int b(xi) sin(xi (s + 1/2)) dxi by composite Simpson, independent of the library rule
double simpson_w(int i, double s) {
  const int n = 40000;
  const double a = 2 * pi / 3, b = 8 * pi / 3, h = (b - a) / n;
  auto f = [&](double xi) {
    const double th = xi * (s + 0.5) + i * pi / 2;
    return bell_eval(xi) * std::pow(xi, i) * std::sin(th);
  };
  double acc = f(a) + f(b);
  for (int m = 1; m < n; ++m) acc += (m % 2 ? 4.0 : 2.0) * f(a + m * h);
  return acc * h / 3 / pi;
}

double inner(const MotherWavelet& w, int j1, long k1, int j2, long k2) {
  const auto [x, wt] = golub_welsch(20);
  double acc = 0.0;
  const double h = 1.0 / 16;
  for (double left = -256; left < 256; left += h)
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double s = left + 0.5 * h * (x[q] + 1);
      acc += 0.5 * h * wt[q] * w.dyadic(j1, k1, 0, s) * w.dyadic(j2, k2, 0, s);
    }
  return acc;
}

}  // namespace

TEST_CASE("smooth step and bell") {
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  for (double x : {0.01, 0.2, 0.37, 0.8, 0.99}) CHECK(smooth_step(x) + smooth_step(1 - x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bell_eval(pi) == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(bell_eval(4 * pi / 3) == doctest::Approx(1.0));
  CHECK(bell_eval(2 * pi / 3 - 1e-9) == 0.0);
  CHECK(bell_eval(8 * pi / 3 + 1e-9) == 0.0);
  CHECK(bell_eval(0.0) == 0.0);
  // b(xi)^2 + b(2 xi)^2 = 1 on [2pi/3, 4pi/3]
  for (double t = 0.0; t <= 1.0; t += 0.0625) {
    const double xi = 2 * pi / 3 + t * 2 * pi / 3;
    CHECK(bell_eval(xi) * bell_eval(xi) + bell_eval(2 * xi) * bell_eval(2 * xi) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("scale constants") {
  CHECK(MotherWavelet::D(-6) == doctest::Approx(0.125));
  CHECK(MotherWavelet::D(0) == 1.0);
  CHECK(MotherWavelet::D(2) == 16.0);
  CHECK(MotherWavelet::D(3) == 512.0);
  CHECK(MotherWavelet::D(-1) == doctest::Approx(std::sqrt(0.5)));
  const auto& w = test::wavelet();
  for (int i = 0; i <= 3; ++i) CHECK(w.A(i) == doctest::Approx(std::pow(2.0, (i + 0.5) * (i + 0.5)) * w.sup_norm(i)));
  CHECK(MotherWavelet::phase() == Complex(0.0, 1.0));
}

TEST_CASE("direct quadrature and tables agree with an independent Simpson rule") {
  const auto& w = test::wavelet();
  for (double s : {-7.3, -1.0, -0.5, 0.0, 0.25, 0.5, 1.7, 12.9}) {
    for (int i = 0; i <= 3; ++i) {
      const double ref = simpson_w(i, s);
      const double scale = std::pow(8 * pi / 3, i);
      CHECK(std::abs(w.eval_direct(i, s) - ref) <= 1e-10 * scale);
      CHECK(std::abs(w.eval(i, s) - ref) <= 1e-8 * scale);
    }
  }
  CHECK(w.mother_eval(0, 0.3) == Complex(0.0, w.eval_direct(0, 0.3)));
}

TEST_CASE("odd symmetry about s = -1/2 and derivatives by differences") {
  const auto& w = test::wavelet();
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const double s = rng.uniform(-20, 20);
    CHECK(w.eval(0, -1 - s) == doctest::Approx(-w.eval(0, s)).epsilon(1e-9));
    const double h = 1e-5;
    for (int i = 0; i < 3; ++i) {
      const double fd = (w.eval_direct(i, s + h) - w.eval_direct(i, s - h)) / (2 * h);
      CHECK(std::abs(fd - w.eval(i + 1, s)) <= 1e-6 * std::pow(8.4, i + 1));
    }
  }
}

TEST_CASE("dyadic scaling and cutoff") {
  const auto& w = test::wavelet();
  for (int j : {-3, 0, 2})
    for (long k : {-2L, 0L, 1L})
      for (int i = 0; i <= 2; ++i) {
        const double s = 0.37;
        const double expect = std::pow(2.0, j / 2.0) * std::pow(2.0, i * j) * w.eval(i, std::ldexp(s, j) - k);
        CHECK(w.dyadic(j, k, i, s) == doctest::Approx(expect).epsilon(1e-14));
      }
  CHECK(w.eval(0, 300.0) == 0.0);
  CHECK(std::abs(w.eval(0, 255.0)) < 1e-6);
  CHECK_THROWS_AS(w.eval(w.max_order() + 1, 0.0), Error);
  CHECK_THROWS_AS(w.eval(-1, 0.0), Error);
}

TEST_CASE("sup norms match a plain scan") {
  const auto& w = test::wavelet();
  for (int i = 0; i <= 3; ++i) {
    double best = 0.0;
    for (double s = -8; s <= 8; s += 1.0 / 1024) best = std::max(best, std::abs(w.eval(i, s)));
    CHECK(w.sup_norm(i) >= best - 1e-9);
    CHECK(w.sup_norm(i) <= best * (1 + 1e-5));
  }
}

TEST_CASE("a few dyadic inner products") {
  const auto& w = test::wavelet();
  CHECK(inner(w, 0, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(inner(w, 1, -1, 1, -1) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(inner(w, 0, 0, 0, 1)) < 1e-8);
  CHECK(std::abs(inner(w, 0, 0, 1, 0)) < 1e-8);
  CHECK(std::abs(inner(w, -2, 1, 2, -2)) < 1e-8);
}

TEST_CASE("sample table text") {
  const auto& w = test::wavelet();
  std::ostringstream os;
  w.write_sample_table(os, 1, -1.0, 1.0, 3);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "s,w1");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
  CHECK_THROWS_AS(w.write_sample_table(os, 0, 0, 1, 1), Error);
}
