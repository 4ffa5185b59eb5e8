#include "carleman/kernel_assembly.hpp"

#include <algorithm>
#include <cmath>

namespace carleman {

namespace {

// operator coordinates -> frame coordinates
CVector to_frame(const CVector& v, const std::vector<Pairing>& slots) {
  CVector out(static_cast<Index>(slots.size()));
  for (std::size_t a = 0; a < slots.size(); ++a) out(static_cast<Index>(a)) = v(slots[a].op);
  return out;
}

double weighted_l1(const CVector& c, const std::vector<Pairing>& slots, double a_j) {
  double acc = 0.0;
  for (Index b = 0; b < c.size(); ++b) acc += std::abs(c(b)) * slots[static_cast<std::size_t>(b)].D * a_j;
  return acc;
}

}  // namespace

KernelModel::KernelModel(const OperatorSpec& spec, const AuxOperators& aux, const SchmidtSystem& sys,
                         const BOperator& B, const BasisAssignment& as,
                         std::shared_ptr<const MotherWavelet> wavelet, KernelTruncation trunc)
    : wavelet_(std::move(wavelet)), slots_(as.slots) {
  if (!wavelet_) throw Error(ErrorCode::invalid_argument, "kernel: wavelet handle is empty");
  if (static_cast<Index>(slots_.size()) != spec.dim || sys.dim != spec.dim || aux.J.rows() != spec.dim)
    throw Error(ErrorCode::invalid_argument, "kernel: inputs come from different operator sizes");

  // <S* e_k^perp, f_n> = conj(a_{perp_k, n}); row perp_k of the matrix
  const SparseC rows = SparseC(spec.matrix.transpose());  // column r = row r of the matrix
  const std::size_t kp = trunc.k_p == 0 ? spec.perp_indices.size() : std::min(trunc.k_p, spec.perp_indices.size());
  for (std::size_t k = 1; k <= spec.perp_indices.size(); ++k) {
    const Index perp = spec.perp_indices[k - 1];
    CVector direct = CVector::Zero(spec.dim);
    for (SparseC::InnerIterator it(rows, perp); it; ++it) direct(it.row()) = std::conj(it.value());
    // Gamma route: S* e_k^perp = k z_k Gamma e_k^perp
    const double kz = static_cast<double>(k) * aux.z_perp[k - 1];
    CVector via_gamma = CVector::Zero(spec.dim);
    for (SparseC::InnerIterator it(aux.Gamma, perp); it; ++it) via_gamma(it.row()) = kz * it.value();
    gamma_gap_ = std::max(gamma_gap_, (direct - via_gamma).cwiseAbs().maxCoeff());

    PTerm term;
    term.k = k;
    term.slot = as.slot_of_op[static_cast<std::size_t>(perp)];
    term.kz = kz;
    term.c = to_frame(direct, slots_);
    (k <= kp ? p_ : p_dropped_).push_back(std::move(term));
  }

  const std::size_t r = static_cast<std::size_t>(sys.rank());
  const std::size_t kf = trunc.k_f == 0 ? r : std::min(trunc.k_f, r);
  for (std::size_t n = 0; n < r; ++n) {
    FTerm term;
    term.sqrt_s = std::sqrt(sys.s[n]);
    term.beta = to_frame(B.apply_adjoint(sys.q.col(static_cast<Index>(n))), slots_);
    term.alpha = to_frame(B.apply(sys.p.col(static_cast<Index>(n))), slots_);
    (n < kf ? f_ : f_dropped_).push_back(std::move(term));
  }
}

void KernelModel::check_order(int i, int j) const {
  if (i < 0 || j < 0 || i + j > max_order())
    throw Error(ErrorCode::out_of_range, "derivative orders exceed the configured maximum");
}

RVector KernelModel::basis_values(int i, double s) const {
  RVector out(size());
  for (std::size_t a = 0; a < slots_.size(); ++a)
    out(static_cast<Index>(a)) = wavelet_->dyadic(slots_[a].j, slots_[a].k, i, s);
  return out;
}

Complex KernelModel::eval_P(int i, int j, double s, double t) const {
  check_order(i, j);
  if (p_.empty()) return {};
  const RVector ws = basis_values(i, s), wt = basis_values(j, t);
  Complex acc = 0.0;
  // c.dot(w) = conj(sum_b c_b w_b) since w is real
  for (const auto& term : p_) acc += ws(static_cast<Index>(term.slot)) * term.c.dot(wt.cast<Complex>());
  return acc;
}

Complex KernelModel::eval_F(int i, int j, double s, double t) const {
  check_order(i, j);
  if (f_.empty()) return {};
  const CVector ws = basis_values(i, s).cast<Complex>(), wt = basis_values(j, t).cast<Complex>();
  Complex acc = 0.0;
  // Eigen's dot conjugates its left operand
  for (const auto& term : f_) acc += term.sqrt_s * ws.dot(term.beta) * term.alpha.dot(wt);
  return acc;
}

Complex KernelModel::eval(int i, int j, double s, double t, double* residual_out) const {
  if (residual_out) *residual_out = residual(i, j);
  return eval_P(i, j, s, t) + eval_F(i, j, s, t);
}

double KernelModel::residual(int i, int j) const {
  check_order(i, j);
  const double ai = wavelet_->A(i), aj = wavelet_->A(j);
  double acc = 0.0;
  for (const auto& term : p_dropped_) acc += slots_[term.slot].D * ai * weighted_l1(term.c, slots_, aj);
  for (const auto& term : f_dropped_)
    acc += term.sqrt_s * weighted_l1(term.beta, slots_, ai) * weighted_l1(term.alpha, slots_, aj);
  return acc;
}

CarlemanRow KernelModel::carleman_function(double s, int i) const {
  check_order(i, 0);
  const RVector ws = basis_values(i, s);
  CVector acc = CVector::Zero(size());
  for (const auto& term : p_) acc += ws(static_cast<Index>(term.slot)) * term.c;
  for (const auto& term : f_) {
    const Complex proj = term.beta.dot(ws.cast<Complex>());  // conj(sum_a beta_a w_a(s))
    acc += term.sqrt_s * proj * term.alpha;
  }
  // conj(u_a(s)) = -i w_a(s)
  CarlemanRow row;
  row.coeffs = Complex(0.0, -1.0) * acc;
  row.norm = row.coeffs.norm();
  return row;
}

CVector KernelModel::apply_T(const CVector& f) const {
  if (f.size() != size()) throw Error(ErrorCode::invalid_argument, "apply_T: dimension mismatch");
  CVector out = CVector::Zero(size());
  for (const auto& term : p_) out(static_cast<Index>(term.slot)) += term.c.dot(f);  // <f, T* h>
  for (const auto& term : f_) out += term.sqrt_s * term.alpha.dot(f) * term.beta;
  return out;
}

std::vector<Complex> KernelModel::integral_apply(const std::vector<double>& s_nodes,
                                                 const std::vector<double>& t_nodes,
                                                 const std::vector<double>& t_weights,
                                                 const std::vector<Complex>& f_values) const {
  if (t_nodes.size() != t_weights.size() || t_nodes.size() != f_values.size())
    throw Error(ErrorCode::invalid_argument, "integral_apply: node, weight and value counts differ");
  // y_b = int w_b(t) f(t) dt
  CVector y = CVector::Zero(size());
  for (std::size_t q = 0; q < t_nodes.size(); ++q) {
    const RVector wt = basis_values(0, t_nodes[q]);
    y += (t_weights[q] * f_values[q]) * wt.cast<Complex>();
  }
  const CVector ty = apply_T(y);
  std::vector<Complex> out;
  out.reserve(s_nodes.size());
  for (double s : s_nodes) out.push_back(basis_values(0, s).cast<Complex>().dot(ty));
  return out;
}

std::vector<double> KernelModel::bound_constants(int i_max, const std::vector<double>& samples) const {
  check_order(i_max, 0);
  std::vector<double> out(static_cast<std::size_t>(i_max + 1), 0.0);
  for (int i = 0; i <= i_max; ++i) {
    std::vector<RVector> w;
    w.reserve(samples.size());
    for (double t : samples) w.push_back(basis_values(i, t));
    for (const auto& term : p_) {
      double sup = 0.0;
      for (const auto& wt : w) sup = std::max(sup, std::abs(term.c.dot(wt.cast<Complex>())));
      out[static_cast<std::size_t>(i)] = std::max(out[static_cast<std::size_t>(i)], sup / term.kz);
    }
  }
  return out;
}

}  // namespace carleman
