#include "carleman/schmidt.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace carleman {

CMatrix SchmidtSystem::reconstruct() const {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Index n = 0; n < rank(); ++n)
    out.noalias() += s[static_cast<std::size_t>(n)] * q.col(n) * p.col(n).adjoint();
  return out;
}

SchmidtSystem schmidt_decompose(const CMatrix& J, double rank_tol) {
  if (J.rows() != J.cols()) throw Error(ErrorCode::invalid_argument, "schmidt_decompose: J must be square");
  if (!J.allFinite()) throw Error(ErrorCode::numeric, "schmidt_decompose: non-finite entries");
  SchmidtSystem sys;
  sys.dim = J.rows();
  sys.p.resize(sys.dim, 0);
  sys.q.resize(sys.dim, 0);
  if (sys.dim == 0) return sys;

  // J = U S V*, so J v_n = s_n u_n: p_n = v_n, q_n = u_n.
  Eigen::JacobiSVD<CMatrix> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  const double s1 = sv.size() ? sv(0) : 0.0;
  sys.rank_tol = rank_tol > 0.0 ? rank_tol : 1e-12 * s1;
  Index r = 0;
  while (r < sv.size() && sv(r) > sys.rank_tol && sv(r) > 0.0) ++r;

  sys.p = svd.matrixV().leftCols(r);
  sys.q = svd.matrixU().leftCols(r);
  for (Index n = 0; n < r; ++n) {
    sys.s.push_back(sv(n));
    const double big = sys.p.col(n).cwiseAbs().maxCoeff();
    for (Index i = 0; i < sys.dim; ++i) {
      const Complex c = sys.p(i, n);
      if (std::abs(c) > 1e-12 * big) {
        const Complex phase = std::conj(c) / std::abs(c);
        sys.p.col(n) *= phase;
        sys.q.col(n) *= phase;
        sys.p(i, n) = Complex(std::abs(sys.p(i, n)), 0.0);
        break;
      }
    }
  }
  return sys;
}

BOperator::BOperator(const SchmidtSystem& sys) : p_(sys.p), q_(sys.q) {
  quarter_.reserve(sys.s.size());
  for (double v : sys.s) quarter_.push_back(std::pow(v, 0.25));
}

CVector BOperator::apply(const CVector& f) const {
  if (f.size() != p_.rows()) throw Error(ErrorCode::invalid_argument, "B: dimension mismatch");
  CVector coeff = p_.adjoint() * f;  // <f, p_n>
  for (Index n = 0; n < coeff.size(); ++n) coeff(n) *= quarter_[static_cast<std::size_t>(n)];
  return q_ * coeff;
}

CVector BOperator::apply_adjoint(const CVector& f) const {
  if (f.size() != q_.rows()) throw Error(ErrorCode::invalid_argument, "B*: dimension mismatch");
  CVector coeff = q_.adjoint() * f;  // <f, q_n>
  for (Index n = 0; n < coeff.size(); ++n) coeff(n) *= quarter_[static_cast<std::size_t>(n)];
  return p_ * coeff;
}

CMatrix BOperator::dense() const {
  CMatrix out = CMatrix::Zero(p_.rows(), p_.rows());
  for (Index n = 0; n < p_.cols(); ++n)
    out.noalias() += quarter_[static_cast<std::size_t>(n)] * q_.col(n) * p_.col(n).adjoint();
  return out;
}

NuclearityReport nuclearity_report(const SchmidtSystem& sys, int tail_len) {
  std::vector<double> half, quarter;
  for (double v : sys.s) {
    half.push_back(std::sqrt(v));
    quarter.push_back(std::pow(v, 0.25));
  }
  DecayFitOptions opts;
  opts.tail_len = tail_len;
  return {certify_series(std::move(half), opts), certify_series(std::move(quarter), opts)};
}

}  // namespace carleman
