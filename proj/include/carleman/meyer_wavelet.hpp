#pragma once

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <vector>

#include "carleman/types.hpp"

namespace carleman {

/// Smooth monotone step: nu(x) = e(x) / (e(x) + e(1 - x)), e(x) = exp(-1/x)
/// for x > 0 and 0 otherwise. C-infinity, nu(x) + nu(1 - x) = 1.
double smooth_step(double x);

/// Meyer bell on [2pi/3, 8pi/3]; 0 elsewhere, 1 at 4pi/3.
double bell_eval(double xi);

struct WaveletOptions {
  int max_order = 8;              // highest derivative order served by eval()
  int quad_order = 256;           // starting Gauss-Legendre node count on the support
  double convergence_tol = 1e-10; // doubling stops when successive orders agree to this
  double table_step = 1.0 / 64;   // spacing of the interpolation tables
  double table_half_width = 256;  // |x| beyond which u^(i)(x) is taken as 0
  double sup_horizon = 64;        // grid half-width for the sup-norms behind A_i
  double sup_step = 1.0 / 256;
};

/// Lemarie-Meyer mother wavelet
///   u(s) = (1/2pi) int e^{i xi (1/2 + s)} sgn(xi) b(|xi|) dxi = i w(s),
///   w(s) = (1/pi) int_0^{8pi/3} b(xi) sin(xi (s + 1/2)) dxi.
///
/// The library stores and evaluates the real function w. The constant factor
/// i = phase() is carried explicitly by mother_eval/dyadic_eval; multiplying
/// a whole orthonormal basis by one unimodular constant changes neither
/// orthonormality nor sup-norms, and it cancels in U S U^{-1}, so kernels
/// assembled from w coincide with kernels assembled from u.
///
/// Derivatives are taken under the integral. eval() serves them from quintic
/// Hermite tables built with the direct quadrature at construction; the
/// object is immutable afterwards and safe to share between threads.
class MotherWavelet {
 public:
  explicit MotherWavelet(WaveletOptions opts = {});

  static Complex phase() { return {0.0, 1.0}; }

  /// w^(i)(s) by direct Gauss-Legendre quadrature (any order i >= 0).
  double eval_direct(int i, double s) const;
  /// u^(i)(s) = phase() * w^(i)(s), the integral as printed.
  Complex mother_eval(int i, double s) const { return phase() * eval_direct(i, s); }

  /// w^(i)(s) from the tables; 0 for |s| beyond table_half_width.
  double eval(int i, double s) const;
  /// 2^{j/2} 2^{ij} w^(i)(2^j s - k), the i-th derivative of w_{jk}.
  double dyadic(int j, long k, int i, double s) const;
  Complex dyadic_eval(int j, long k, int i, double s) const { return phase() * dyadic(j, k, i, s); }

  /// Empirical ||u^(i)||_C over the sup grid (refined around the argmax).
  double sup_norm(int i) const;
  /// A_i = 2^{(i + 1/2)^2} ||u^(i)||_C.
  double A(int i) const;
  /// D = 2^{j^2} for j > 0, (1/sqrt 2)^{|j|} for j <= 0.
  static double D(int j);

  int max_order() const { return opts_.max_order; }
  int quad_order() const { return base_order_; }
  const WaveletOptions& options() const { return opts_; }

  /// CSV rows "s,w^(i)(s)" of the real reduced form on a uniform grid.
  void write_sample_table(std::ostream& os, int i, double lo, double hi, int points) const;

 private:
  struct Rule {
    std::vector<double> xi;
    std::vector<double> wb;  // weight * b(xi) / pi
  };

  Rule make_rule(int multiplier, int base_order) const;
  const Rule& rule_for(double x, Rule& scratch) const;
  void direct_all_orders(const Rule& rule, double x, int orders, double* out) const;
  void fill_table_block(const Rule& rule, std::size_t first, std::size_t last, int orders);
  static double multiplier_for(double x);

  WaveletOptions opts_;
  int base_order_ = 0;
  std::vector<Rule> rules_;                 // index m-1 holds multiplier m
  std::vector<std::vector<double>> table_;  // table_[i][m] = w^(i)(x_m)
  std::size_t table_points_ = 0;
  std::vector<double> sup_;
};

/// Sup of |f| over [lo, hi]: uniform scan with `step`, then golden-section
/// refinement around the best sample.
template <class F>
double scan_sup(F&& f, double lo, double hi, double step) {
  const long n = static_cast<long>(std::ceil((hi - lo) / step));
  double best = 0.0, arg = lo;
  for (long m = 0; m <= n; ++m) {
    const double x = std::min(hi, lo + m * step);
    const double v = std::abs(f(x));
    if (v > best) best = v, arg = x;
  }
  double a = std::max(lo, arg - step), b = std::min(hi, arg + step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = std::abs(f(c)), fd = std::abs(f(d));
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a);
      fc = std::abs(f(c));
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a);
      fd = std::abs(f(d));
    }
  }
  return std::max({best, fc, fd});
}

}  // namespace carleman
