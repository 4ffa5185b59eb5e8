#include "carleman/verification.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace carleman {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

CheckReport bound_check(std::string name, double measured, double bound, double tol, std::string details) {
  CheckReport r;
  r.name = std::move(name);
  r.measured = measured;
  r.bound = bound;
  r.tolerance = tol;
  r.pass = std::isfinite(measured) && measured <= bound + tol;
  r.details = std::move(details);
  return r;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> golub_welsch(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "golub_welsch: n must be positive");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k - 1, k) = b;
    jac(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  std::vector<double> x(n), w(n);
  for (int k = 0; k < n; ++k) {
    x[k] = eig.eigenvalues()(k);
    const double v = eig.eigenvectors()(0, k);
    w[k] = 2.0 * v * v;
  }
  return {x, w};
}

HarnessGrid harness_grid(double h0, double grading, double extent, int n) {
  if (!(h0 > 0.0) || !(grading > 0.0) || !(extent > 0.0))
    throw Error(ErrorCode::invalid_argument, "harness_grid: parameters must be positive");
  const auto [x, w] = golub_welsch(n);
  std::vector<std::pair<double, double>> right;
  double a = 0.0;
  while (a < extent) {
    const double b = std::min(extent, a + std::max(h0, a / grading));
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int q = 0; q < n; ++q) right.emplace_back(mid + half * x[q], half * w[q]);
    a = b;
  }
  HarnessGrid g;
  for (auto it = right.rbegin(); it != right.rend(); ++it) {
    g.nodes.push_back(-it->first);
    g.weights.push_back(it->second);
  }
  for (const auto& [node, weight] : right) {
    g.nodes.push_back(node);
    g.weights.push_back(weight);
  }
  return g;
}

HarnessGrid harness_grid_for(const KernelModel& model, const VerifyOptions& opts) {
  int j_max = 0;
  double extent = opts.base_horizon;
  for (const auto& p : model.slots()) {
    j_max = std::max(j_max, p.j);
    extent = std::max(extent, std::ldexp(std::abs(static_cast<double>(p.k)) + opts.base_horizon, -p.j));
  }
  return harness_grid(std::ldexp(0.25, -j_max), opts.grading, extent, opts.panel_nodes);
}

CheckReport check_orthonormality(const MotherWavelet& w, const VerifyOptions& opts) {
  std::vector<std::pair<int, long>> set = opts.gram_set;
  if (set.empty())
    for (int j = -2; j <= 2; ++j)
      for (long k = -2; k <= 2; ++k) set.emplace_back(j, k);
  if (set.empty()) return bound_check("orthonormality", 0.0, opts.gram_tol, 0.0, "empty index set");

  const auto [x, wt] = golub_welsch(16);
  const double h = opts.gram_panel;
  const long panels = static_cast<long>(std::ceil(2.0 * opts.gram_horizon / h));
  const std::size_t m = set.size();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Index>(m), static_cast<Index>(m));
  Eigen::VectorXd vals(static_cast<Index>(m));
  for (long p = 0; p < panels; ++p) {
    const double a = -opts.gram_horizon + p * h;
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double s = a + 0.5 * h * (x[q] + 1.0);
      // u_a conj(u_b) = w_a w_b
      for (std::size_t n = 0; n < m; ++n) vals(static_cast<Index>(n)) = w.dyadic(set[n].first, set[n].second, 0, s);
      gram.noalias() += (0.5 * h * wt[q]) * vals * vals.transpose();
    }
  }
  double worst = 0.0;
  std::size_t wa = 0, wb = 0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const double dev = std::abs(gram(static_cast<Index>(a), static_cast<Index>(b)) - (a == b ? 1.0 : 0.0));
      if (dev > worst) worst = dev, wa = a, wb = b;
    }
  auto r = bound_check("orthonormality", worst, opts.gram_tol, 0.0,
                       std::to_string(m) + " functions over [-" + fmt(opts.gram_horizon) + ", " +
                           fmt(opts.gram_horizon) + "], max |G - I|");
  r.argmax = {static_cast<double>(set[wa].first), static_cast<double>(set[wa].second),
              static_cast<double>(set[wb].first), static_cast<double>(set[wb].second)};
  return r;
}

CheckReport check_hs_bound(const OperatorSpec& spec, const AuxOperators& aux) {
  // sum_k ||S* e_k^perp||^2 / (k z_k)^2, recomputed from the dense matrix
  const CMatrix a = CMatrix(spec.matrix);
  double sum = 0.0;
  for (std::size_t k = 0; k < spec.perp_indices.size(); ++k) {
    const double norm = a.row(spec.perp_indices[k]).norm();
    const double lam = 1.0 / (static_cast<double>(k + 1) * (norm + 1.0));
    sum += lam * lam * norm * norm;
  }
  const double bound = std::numbers::pi * std::numbers::pi / 6.0;
  auto r = bound_check("hilbert_schmidt_bound", sum, bound, 1e-12,
                       "sum_n ||Gamma* f_n||^2 against pi^2/6; library value " + fmt(aux.hs_sum));
  if (std::abs(sum - aux.hs_sum) > 1e-12 * std::max(1.0, sum)) {
    r.pass = false;
    r.details += "; library value disagrees with the recomputation";
  }
  return r;
}

CheckReport check_supnorm_table(const BasisAssignment& as, const MotherWavelet& w, const VerifyOptions& opts) {
  constexpr double kSpan = 64.0, kStep = 1.0 / 512;
  double worst = -1.0;
  std::size_t checked = 0, violations = 0;
  std::vector<double> where;
  const int i_max = std::min(opts.sup_i_max, w.max_order());
  for (const auto& e : as.enumeration) {
    if (std::abs(e.j) > opts.sup_j_cap) continue;
    for (int i = 0; i <= i_max; ++i) {
      double sup = 0.0;
      const long n = static_cast<long>(2.0 * kSpan / kStep);
      for (long m = 0; m <= n; ++m) {
        const double x = -kSpan + m * kStep;
        const double s = std::ldexp(x + static_cast<double>(e.k), -e.j);
        sup = std::max(sup, std::abs(w.dyadic_eval(e.j, e.k, i, s)));
      }
      const double cert = MotherWavelet::D(e.j) * w.A(i);
      ++checked;
      if (sup > cert) ++violations;
      if (sup / cert > worst) {
        worst = sup / cert;
        where = {static_cast<double>(e.j), static_cast<double>(e.k), static_cast<double>(i)};
      }
    }
  }
  auto r = bound_check("supnorm_certificates", static_cast<double>(violations), 0.0, 0.0,
                       std::to_string(checked) + " (j, k, i) rows with |j| <= " + std::to_string(opts.sup_j_cap) +
                           ", worst empirical/certified ratio " + fmt(worst));
  r.argmax = where;
  return r;
}

CheckReport check_conditions(const BasisAssignment& as, const AuxOperators& aux) {
  std::size_t violations = 0, checked = 0;
  double worst = 0.0;
  std::vector<double> where;
  for (int i = 0; i <= as.i_max; ++i)
    for (std::size_t k = 1; k <= as.nk.size(); ++k) {
      const auto& e = as.enumeration[as.h_enum[as.nk[k - 1] - 1]];
      const double term = static_cast<double>(k) * aux.z_perp[k - 1] * (e.D * as.A[static_cast<std::size_t>(i)]);
      const double target = std::ldexp(1.0, -static_cast<int>(k));
      ++checked;
      if (term > target) ++violations;
      if (term / target > worst) {
        worst = term / target;
        where = {static_cast<double>(k), static_cast<double>(i)};
      }
    }
  auto r = bound_check("sumrk_certificates", static_cast<double>(violations), 0.0, 0.0,
                       std::to_string(checked) + " terms k z(e_k^perp) H_{n(k),i} against 2^-k, worst ratio " +
                           fmt(worst));
  r.argmax = where;
  return r;
}

CheckReport check_gamma_route(const KernelModel& model) {
  return bound_check("gamma_route", model.gamma_route_gap(), 1e-10, 0.0,
                     "direct vs Gamma-route coefficients of T* h_{n(k)}");
}

CheckReport check_equivalence(const KernelModel& model, const OperatorSpec& spec, const VerifyOptions& opts) {
  const auto& slots = model.slots();
  const std::size_t m_test = std::min<std::size_t>(static_cast<std::size_t>(opts.m_test), slots.size());
  const HarnessGrid g = harness_grid_for(model, opts);
  const MotherWavelet& w = model.wavelet();
  const CMatrix a = CMatrix(spec.matrix);

  std::vector<std::vector<Complex>> u(m_test);
  for (std::size_t m = 0; m < m_test; ++m)
    for (double s : g.nodes) u[m].push_back(w.dyadic_eval(slots[m].j, slots[m].k, 0, s));

  double worst = 0.0;
  std::vector<double> where{1.0, 1.0};
  for (std::size_t m = 0; m < m_test; ++m) {
    const std::vector<Complex> tu = model.integral_apply(g.nodes, g.nodes, g.weights, u[m]);
    for (std::size_t l = 0; l < m_test; ++l) {
      Complex quad = 0.0;
      for (std::size_t q = 0; q < g.nodes.size(); ++q) quad += g.weights[q] * tu[q] * std::conj(u[l][q]);
      const Complex exact = a(slots[l].op, slots[m].op);
      const double err = std::abs(quad - exact);
      if (err > worst) {
        worst = err;
        where = {static_cast<double>(m + 1), static_cast<double>(l + 1)};
      }
    }
  }
  auto r = bound_check("unitary_equivalence", worst, opts.equiv_tol, 0.0,
                       "max |<T u_m, u_l> - <S f'_m, f'_l>| over m, l <= " + std::to_string(m_test) + ", " +
                           std::to_string(g.nodes.size()) + " nodes per axis");
  r.argmax = where;
  return r;
}

CheckReport check_smoothness(const KernelModel& model, const VerifyOptions& opts) {
  // per-variable step from the finest wavelet that actually enters K in that variable
  const Index n = model.size();
  int js = std::numeric_limits<int>::min(), jt = js;
  for (Index b = 0; b < n; ++b) {
    CVector e = CVector::Zero(n);
    e(b) = 1.0;
    const CVector col = model.apply_T(e);
    if (col.norm() == 0.0) continue;
    jt = std::max(jt, model.slots()[b].j);
    for (Index a = 0; a < n; ++a)
      if (col(a) != Complex(0.0)) js = std::max(js, model.slots()[a].j);
  }
  const double hs = js == std::numeric_limits<int>::min() ? 1e-4 : std::ldexp(1e-4, -js);
  const double ht = jt == std::numeric_limits<int>::min() ? 1e-4 : std::ldexp(1e-4, -jt);
  Rng rng(opts.seed);
  std::vector<std::pair<double, double>> pts;
  for (int p = 0; p < opts.smooth_points; ++p) {
    const double s = rng.uniform(-opts.smooth_box, opts.smooth_box);
    const double t = rng.uniform(-opts.smooth_box, opts.smooth_box);
    pts.emplace_back(s, t);
  }
  auto K = [&](double s, double t) { return model.eval(0, 0, s, t); };
  auto fd = [&](int i, int j, double s, double t) -> Complex {
    if (i == 1 && j == 0) return (K(s + hs, t) - K(s - hs, t)) / (2 * hs);
    if (i == 0 && j == 1) return (K(s, t + ht) - K(s, t - ht)) / (2 * ht);
    if (i == 2 && j == 0) return (K(s + hs, t) - 2.0 * K(s, t) + K(s - hs, t)) / (hs * hs);
    if (i == 0 && j == 2) return (K(s, t + ht) - 2.0 * K(s, t) + K(s, t - ht)) / (ht * ht);
    return (K(s + hs, t + ht) - K(s + hs, t - ht) - K(s - hs, t + ht) + K(s - hs, t - ht)) / (4 * hs * ht);
  };
  double worst = 0.0;
  std::vector<double> where;
  int pairs = 0;
  for (int order = 1; order <= std::min(opts.smooth_order, 2); ++order) {
    struct Sample {
      int i, j;
      std::size_t p;
      Complex ex, approx;
    };
    std::vector<Sample> samples;
    double scale = 0.0;  // largest derivative of this total order
    for (int i = order; i >= 0; --i) {
      ++pairs;
      for (std::size_t p = 0; p < pts.size(); ++p) {
        const auto [s, t] = pts[p];
        samples.push_back({i, order - i, p, model.eval(i, order - i, s, t), fd(i, order - i, s, t)});
        scale = std::max(scale, std::abs(samples.back().ex));
      }
    }
    for (const auto& q : samples) {
      const double denom = std::max(std::abs(q.ex), 1e-3 * scale);
      const double rel = denom > 0.0 ? std::abs(q.approx - q.ex) / denom : std::abs(q.approx);
      if (rel > worst) {
        worst = rel;
        where = {pts[q.p].first, pts[q.p].second, static_cast<double>(q.i), static_cast<double>(q.j)};
      }
    }
  }
  auto r = bound_check("smoothness", worst, opts.smooth_tol, 0.0,
                       std::to_string(pairs) + " derivative pairs at " + std::to_string(pts.size()) +
                           " points, central differences with steps " + fmt(hs) + ", " + fmt(ht) +
                           ", error relative to max(|value|, 1e-3 * largest derivative of the same order)");
  r.argmax = where;
  return r;
}

CheckReport check_vanishing(const KernelModel& model, const VerifyOptions& opts) {
  std::vector<double> maxima;
  std::vector<double> where;
  for (double R : opts.radii) {
    const int cells = 4 * opts.vanish_cells;
    const double step = 4.0 * R / cells;
    double best = 0.0;
    for (int a = 0; a <= cells; ++a)
      for (int b = 0; b <= cells; ++b) {
        const double s = -2.0 * R + a * step, t = -2.0 * R + b * step;
        const double frame = std::max(std::abs(s), std::abs(t));
        if (frame < R) continue;
        const double v = std::abs(model.eval(0, 0, s, t));
        if (v > best) best = v;
      }
    maxima.push_back(best);
  }
  bool monotone = true;
  for (std::size_t q = 1; q < maxima.size(); ++q)
    if (maxima[q] > maxima[q - 1] + 1e-12) monotone = false;
  const double last = maxima.empty() ? 0.0 : maxima.back();
  std::ostringstream det;
  det << "annulus maxima";
  for (std::size_t q = 0; q < maxima.size(); ++q) det << ' ' << opts.radii[q] << ':' << fmt(maxima[q]);
  det << (monotone ? ", non-increasing" : ", NOT non-increasing");
  auto r = bound_check("vanishing_at_infinity", last, opts.vanish_threshold, 0.0, det.str());
  r.pass = r.pass && monotone;
  r.argmax = maxima;
  return r;
}

CheckReport check_carleman(const KernelModel& model, const VerifyOptions& opts) {
  const HarnessGrid g = harness_grid_for(model, opts);
  Rng rng(opts.seed + 1);
  double worst = 0.0, worst_jump = 0.0;
  std::vector<double> where;
  for (int p = 0; p < opts.carleman_points; ++p) {
    const double s = rng.uniform(-opts.smooth_box, opts.smooth_box);
    const CarlemanRow row = model.carleman_function(s);
    double quad = 0.0;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) quad += g.weights[q] * std::norm(model.eval(0, 0, s, g.nodes[q]));
    const double n2 = row.norm * row.norm;
    const double err = std::abs(quad - n2) / std::max(1.0, n2);
    if (err > worst || where.empty()) {
      worst = err;
      where = {s};
    }
    const CarlemanRow next = model.carleman_function(s + opts.continuity_step);
    worst_jump = std::max(worst_jump, (next.coeffs - row.coeffs).norm());
  }
  auto r = bound_check("carleman_row_norms", worst, opts.carleman_tol, 0.0,
                       "| ||k(s)||^2 - int |K(s,t)|^2 dt | / max(1, ||k(s)||^2); max ||k(s+" +
                           fmt(opts.continuity_step) + ") - k(s)|| = " + fmt(worst_jump));
  if (!(worst_jump <= opts.continuity_tol)) {
    r.pass = false;
    r.details += " exceeds " + fmt(opts.continuity_tol);
  }
  r.argmax = where;
  return r;
}

std::vector<CheckReport> run_verification(const VerifyInputs& in, const VerifyOptions& opts) {
  if (!in.spec || !in.aux || !in.assignment || !in.model)
    throw Error(ErrorCode::invalid_argument, "run_verification: missing inputs");
  std::vector<CheckReport> out;
  out.push_back(check_orthonormality(in.model->wavelet(), opts));
  out.push_back(check_hs_bound(*in.spec, *in.aux));
  out.push_back(check_supnorm_table(*in.assignment, in.model->wavelet(), opts));
  out.push_back(check_conditions(*in.assignment, *in.aux));
  out.push_back(check_gamma_route(*in.model));
  out.push_back(check_equivalence(*in.model, *in.spec, opts));
  out.push_back(check_smoothness(*in.model, opts));
  out.push_back(check_vanishing(*in.model, opts));
  out.push_back(check_carleman(*in.model, opts));
  return out;
}

}  // namespace carleman
