#include "carleman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "carleman/types.hpp"

namespace carleman {

void QuadratureRule::append(const QuadratureRule& other) {
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "gauss_legendre: n must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const auto legendre = [n](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int n) {
  if (panels < 1) throw Error(ErrorCode::invalid_argument, "composite rule needs at least one panel");
  const QuadratureRule ref = gauss_legendre(n);
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * n);
  rule.weights.reserve(static_cast<std::size_t>(panels) * n);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (int q = 0; q < n; ++q) {
      rule.nodes.push_back(mid + 0.5 * h * ref.nodes[q]);
      rule.weights.push_back(0.5 * h * ref.weights[q]);
    }
  }
  return rule;
}

QuadratureRule graded_gauss_legendre(double min_width, double grading, double extent, int n) {
  if (!(min_width > 0.0) || !(grading > 0.0) || !(extent > 0.0))
    throw Error(ErrorCode::invalid_argument, "graded rule: widths and extent must be positive");
  const QuadratureRule ref = gauss_legendre(n);
  std::vector<double> breaks{0.0};
  double x = 0.0;
  while (x < extent) {
    x = std::min(extent, x + std::max(min_width, x / grading));
    breaks.push_back(x);
  }
  QuadratureRule rule;
  const std::size_t panels = breaks.size() - 1;
  rule.nodes.reserve(2 * panels * n);
  rule.weights.reserve(2 * panels * n);
  // negative half in increasing order, then positive half
  for (std::size_t p = panels; p-- > 0;) {
    const double lo = -breaks[p + 1], hi = -breaks[p];
    const double mid = 0.5 * (lo + hi), h = hi - lo;
    for (int q = 0; q < n; ++q) {
      rule.nodes.push_back(mid + 0.5 * h * ref.nodes[q]);
      rule.weights.push_back(0.5 * h * ref.weights[q]);
    }
  }
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = breaks[p], hi = breaks[p + 1];
    const double mid = 0.5 * (lo + hi), h = hi - lo;
    for (int q = 0; q < n; ++q) {
      rule.nodes.push_back(mid + 0.5 * h * ref.nodes[q]);
      rule.weights.push_back(0.5 * h * ref.weights[q]);
    }
  }
  return rule;
}

}  // namespace carleman
