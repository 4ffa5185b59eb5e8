#include "carleman/meyer_wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "carleman/quadrature.hpp"

namespace carleman {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLo = 2.0 * kPi / 3.0;
constexpr double kMid = 4.0 * kPi / 3.0;
constexpr double kHi = 8.0 * kPi / 3.0;
constexpr int kPanelNodes = 16;

double step_exp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = step_exp(x), b = step_exp(1.0 - x);
  return a / (a + b);
}

double bell_eval(double xi) {
  if (xi < kLo || xi > kHi) return 0.0;
  if (xi <= kMid) return std::sin(0.5 * kPi * smooth_step(3.0 * xi / (2.0 * kPi) - 1.0));
  return std::cos(0.5 * kPi * smooth_step(3.0 * xi / (4.0 * kPi) - 1.0));
}

MotherWavelet::Rule MotherWavelet::make_rule(int multiplier, int base_order) const {
  // node budget split in proportion to the two bell pieces (lengths 1 : 2)
  const int p1 = std::max(1, (base_order + 3 * kPanelNodes / 2) / (3 * kPanelNodes)) * multiplier;
  const int p2 = std::max(1, (2 * base_order + 3 * kPanelNodes / 2) / (3 * kPanelNodes)) * multiplier;
  QuadratureRule q = composite_gauss_legendre(kLo, kMid, p1, kPanelNodes);
  q.append(composite_gauss_legendre(kMid, kHi, p2, kPanelNodes));
  Rule r;
  r.xi = q.nodes;
  r.wb.resize(q.size());
  for (std::size_t n = 0; n < q.size(); ++n) r.wb[n] = q.weights[n] * bell_eval(q.nodes[n]) / kPi;
  return r;
}

const MotherWavelet::Rule& MotherWavelet::rule_for(double x, Rule& scratch) const {
  // one extra multiple of the base rule per 32 units of |s + 1/2|
  const double m = multiplier_for(x);
  if (m <= static_cast<double>(rules_.size())) return rules_[static_cast<std::size_t>(m) - 1];
  if (m > 1e6) throw Error(ErrorCode::out_of_range, "wavelet argument too large for direct quadrature");
  scratch = make_rule(static_cast<int>(m), base_order_);
  return scratch;
}

double MotherWavelet::multiplier_for(double x) {
  return 1.0 + std::ceil(std::abs(x + 0.5) / 32.0);
}

namespace {

// d^i/ds^i sin(xi (s + 1/2)) = xi^i sin(theta + i pi / 2): even orders
// accumulate sin(theta), odd orders cos(theta); the sign cycles with i mod 4.
inline void accumulate(double wb, double xi, double sn, double cs, int orders, double* out) {
  double pw = wb;
  for (int i = 0; i < orders; i += 2) {
    out[i] += pw * sn;
    pw *= xi;
    if (i + 1 < orders) out[i + 1] += pw * cs;
    pw *= xi;
  }
}

inline void apply_signs(int orders, double* out) {
  for (int i = 0; i < orders; ++i)
    if ((i & 3) >= 2) out[i] = -out[i];
}

}  // namespace

void MotherWavelet::direct_all_orders(const Rule& rule, double x, int orders, double* out) const {
  const double shifted = x + 0.5;
  std::fill(out, out + orders, 0.0);
  for (std::size_t q = 0; q < rule.xi.size(); ++q) {
    const double theta = rule.xi[q] * shifted;
    accumulate(rule.wb[q], rule.xi[q], std::sin(theta), std::cos(theta), orders, out);
  }
  apply_signs(orders, out);
}

void MotherWavelet::fill_table_block(const Rule& rule, std::size_t first, std::size_t last, int orders) {
  // Phases advance by a fixed rotation per grid step; resynchronised exactly
  // every kResync steps to keep the recurrence drift at roundoff level.
  constexpr std::size_t kResync = 32;
  const double h = opts_.table_step;
  const double x0 = -opts_.table_half_width;
  const std::size_t count = last - first;
  std::vector<double> acc(count * static_cast<std::size_t>(orders), 0.0);
  for (std::size_t q = 0; q < rule.xi.size(); ++q) {
    const double xi = rule.xi[q];
    const double cr = std::cos(xi * h), sr = std::sin(xi * h);
    double sn = 0.0, cs = 1.0;
    for (std::size_t m = 0; m < count; ++m) {
      if (m % kResync == 0) {
        const double theta = xi * (x0 + static_cast<double>(first + m) * h + 0.5);
        sn = std::sin(theta);
        cs = std::cos(theta);
      }
      accumulate(rule.wb[q], xi, sn, cs, orders, &acc[m * orders]);
      const double nsn = sn * cr + cs * sr;
      cs = cs * cr - sn * sr;
      sn = nsn;
    }
  }
  for (std::size_t m = 0; m < count; ++m) {
    apply_signs(orders, &acc[m * orders]);
    for (int i = 0; i < orders; ++i) table_[i][first + m] = acc[m * orders + i];
  }
}

MotherWavelet::MotherWavelet(WaveletOptions opts) : opts_(opts) {
  if (opts_.max_order < 0) throw Error(ErrorCode::invalid_argument, "max_order must be non-negative");
  if (opts_.quad_order < kPanelNodes) throw Error(ErrorCode::invalid_argument, "quad_order too small");
  if (!(opts_.table_step > 0.0) || !(opts_.table_half_width > 1.0))
    throw Error(ErrorCode::invalid_argument, "table step and half width must be positive");
  const int orders = opts_.max_order + 3;

  // Double the base order until two successive rules agree at the probes.
  const double probes[] = {-2.3, -0.5, 0.0, 1.1, 3.7};
  int n = opts_.quad_order;
  std::vector<double> a(orders), b(orders);
  for (;; n *= 2) {
    if (n > (1 << 16)) throw Error(ErrorCode::numeric, "wavelet quadrature failed to converge");
    const Rule coarse = make_rule(1, n), fine = make_rule(1, 2 * n);
    bool agree = true;
    for (double s : probes) {
      direct_all_orders(coarse, s, orders, a.data());
      direct_all_orders(fine, s, orders, b.data());
      for (int i = 0; i < orders; ++i) {
        const double scale = std::max(1.0, std::pow(kHi, i));
        if (std::abs(a[i] - b[i]) > opts_.convergence_tol * scale) agree = false;
      }
    }
    if (agree) {
      base_order_ = 2 * n;
      break;
    }
  }

  const double half = opts_.table_half_width;
  const int max_mult = 1 + static_cast<int>(std::ceil((half + 0.5 + opts_.table_step) / 32.0));
  rules_.reserve(max_mult);
  for (int m = 1; m <= max_mult; ++m) rules_.push_back(make_rule(m, base_order_));

  table_points_ = static_cast<std::size_t>(std::llround(2.0 * half / opts_.table_step)) + 1;
  table_.assign(orders, std::vector<double>(table_points_, 0.0));
  std::size_t first = 0;
  while (first < table_points_) {
    const double mult = multiplier_for(-half + static_cast<double>(first) * opts_.table_step);
    std::size_t last = first + 1;
    while (last < table_points_ && multiplier_for(-half + static_cast<double>(last) * opts_.table_step) == mult)
      ++last;
    fill_table_block(rules_[static_cast<std::size_t>(mult) - 1], first, last, orders);
    first = last;
  }

  sup_.resize(opts_.max_order + 1);
  for (int i = 0; i <= opts_.max_order; ++i)
    sup_[i] = scan_sup([&](double x) { return eval(i, x); }, -opts_.sup_horizon, opts_.sup_horizon,
                       opts_.sup_step);
}

double MotherWavelet::eval_direct(int i, double s) const {
  if (i < 0) throw Error(ErrorCode::invalid_argument, "negative derivative order");
  if (!std::isfinite(s)) throw Error(ErrorCode::numeric, "wavelet argument must be finite");
  std::vector<double> out(i + 1);
  Rule scratch;
  direct_all_orders(rule_for(s, scratch), s, i + 1, out.data());
  return out[i];
}

double MotherWavelet::eval(int i, double s) const {
  if (i < 0 || i > opts_.max_order)
    throw Error(ErrorCode::out_of_range, "derivative order beyond the configured maximum");
  const double half = opts_.table_half_width;
  if (!(std::abs(s) <= half)) return 0.0;
  const double pos = (s + half) / opts_.table_step;
  std::size_t m = static_cast<std::size_t>(pos);
  if (m >= table_points_ - 1) m = table_points_ - 2;
  const double t = pos - static_cast<double>(m);
  const double h = opts_.table_step;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  // quintic Hermite basis on [0, 1]
  const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const double h5 = 0.5 * t3 - t4 + 0.5 * t5;
  const auto& f0 = table_[i];
  const auto& f1 = table_[i + 1];
  const auto& f2 = table_[i + 2];
  return f0[m] * h0 + h * f1[m] * h1 + h * h * f2[m] * h2 + f0[m + 1] * h3 + h * f1[m + 1] * h4 +
         h * h * f2[m + 1] * h5;
}

double MotherWavelet::dyadic(int j, long k, int i, double s) const {
  const double x = std::ldexp(s, j) - static_cast<double>(k);
  const double v = eval(i, x);
  if (v == 0.0) return 0.0;
  return std::exp2(0.5 * j + static_cast<double>(i) * j) * v;
}

double MotherWavelet::sup_norm(int i) const {
  if (i < 0 || i > opts_.max_order) throw Error(ErrorCode::out_of_range, "sup_norm: order out of range");
  return sup_[i];
}

double MotherWavelet::A(int i) const {
  const double e = i + 0.5;
  return std::exp2(e * e) * sup_norm(i);
}

double MotherWavelet::D(int j) {
  if (j > 0) return std::exp2(static_cast<double>(j) * j);
  return std::exp2(-0.5 * std::abs(j));
}

void MotherWavelet::write_sample_table(std::ostream& os, int i, double lo, double hi, int points) const {
  if (points < 2) throw Error(ErrorCode::invalid_argument, "sample table needs at least two points");
  os << "s,w" << i << "\n";
  os.precision(17);
  for (int m = 0; m < points; ++m) {
    const double s = lo + (hi - lo) * m / (points - 1);
    os << s << ',' << eval(i, s) << '\n';
  }
}

}  // namespace carleman
