#pragma once

#include <vector>

#include "carleman/series.hpp"
#include "carleman/types.hpp"

namespace carleman {

/// Schmidt expansion J = sum_n s_n <., p_n> q_n. Columns of `p` are
/// eigenvectors of J*J, columns of `q` eigenvectors of JJ*.
struct SchmidtSystem {
  Index dim = 0;
  std::vector<double> s;  // non-increasing, all above rank_tol
  CMatrix p;              // dim x rank
  CMatrix q;              // dim x rank
  double rank_tol = 0.0;

  Index rank() const { return static_cast<Index>(s.size()); }
  CMatrix reconstruct() const;
};

/// Singular triples above `rank_tol` (a non-positive value selects
/// 1e-12 * s_1). The first coordinate of each p_n above roundoff is made real
/// and positive; q_n receives the same phase.
SchmidtSystem schmidt_decompose(const CMatrix& J, double rank_tol = 0.0);

/// B = sum_n s_n^{1/4} <., p_n> q_n, stored as the scaled triple.
class BOperator {
 public:
  explicit BOperator(const SchmidtSystem& sys);

  CVector apply(const CVector& f) const;          // B f
  CVector apply_adjoint(const CVector& f) const;  // B* f
  CMatrix dense() const;
  const std::vector<double>& quarter_values() const { return quarter_; }
  double norm() const { return quarter_.empty() ? 0.0 : quarter_.front(); }

 private:
  std::vector<double> quarter_;
  CMatrix p_;
  CMatrix q_;
};

inline BOperator build_B(const SchmidtSystem& sys) { return BOperator(sys); }

struct NuclearityReport {
  SeriesCertificate sqrt_series;     // sum s_n^{1/2}
  SeriesCertificate quarter_series;  // sum s_n^{1/4}
};

NuclearityReport nuclearity_report(const SchmidtSystem& sys, int tail_len = 8);

}  // namespace carleman
