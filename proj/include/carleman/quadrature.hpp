#pragma once

#include <vector>

namespace carleman {

/// Nodes and weights of a quadrature rule; `integrate` sums w_q f(x_q).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  void append(const QuadratureRule& other);

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R acc{};
    for (std::size_t q = 0; q < nodes.size(); ++q) acc += weights[q] * f(nodes[q]);
    return acc;
  }
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(int n);

/// `panels` equal panels on [a, b], each carrying an n-point Gauss-Legendre rule.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int n);

/// Scale-graded composite rule on [-extent, extent]: panel width is
/// max(min_width, |x| / grading), so functions of every dyadic scale centred
/// near the origin are resolved with the same number of nodes per feature.
QuadratureRule graded_gauss_legendre(double min_width, double grading, double extent, int n);

}  // namespace carleman
