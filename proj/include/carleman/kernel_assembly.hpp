#pragma once

#include <memory>
#include <vector>

#include "carleman/basis_assignment.hpp"
#include "carleman/meyer_wavelet.hpp"
#include "carleman/operator_model.hpp"
#include "carleman/schmidt.hpp"

namespace carleman {

struct KernelTruncation {
  std::size_t k_p = 0;  // P-series terms kept, 0 = all
  std::size_t k_f = 0;  // F-series terms kept, 0 = all
};

/// One row of the P series: h_{n(k)}(s) conj((T* h_{n(k)})(t)).
struct PTerm {
  std::size_t k = 0;     // 1-based perp ordinal
  std::size_t slot = 0;  // frame slot of h_{n(k)}
  double kz = 0.0;       // k z(e_k^perp)
  CVector c;             // frame coefficients of T* h_{n(k)}
};

/// One Schmidt term of F: s_n^{1/2} (U B* q_n)(s) conj((U B p_n)(t)).
struct FTerm {
  double sqrt_s = 0.0;
  CVector beta;   // frame coefficients of U B* q_n
  CVector alpha;  // frame coefficients of U B p_n
};

struct CarlemanRow {
  CVector coeffs;  // frame coefficients of k(s) = conj(K(s, .))
  double norm = 0.0;
};

/// K = P + F over the frame {u_slot} of paired wavelets. Frame slots follow
/// the assignment's slot order; all functions are evaluated through the real
/// reduced wavelet, whose unimodular factor cancels in every kernel value.
class KernelModel {
 public:
  KernelModel(const OperatorSpec& spec, const AuxOperators& aux, const SchmidtSystem& sys, const BOperator& B,
              const BasisAssignment& as, std::shared_ptr<const MotherWavelet> wavelet, KernelTruncation trunc = {});

  Index size() const { return static_cast<Index>(slots_.size()); }
  const std::vector<Pairing>& slots() const { return slots_; }
  const std::vector<PTerm>& p_terms() const { return p_; }
  const std::vector<FTerm>& f_terms() const { return f_; }
  const MotherWavelet& wavelet() const { return *wavelet_; }
  int max_order() const { return wavelet_->max_order(); }
  /// Largest |coefficient difference| between the direct and the Gamma route to T* h_{n(k)}.
  double gamma_route_gap() const { return gamma_gap_; }

  /// w_slot^(i)(s) for every slot.
  RVector basis_values(int i, double s) const;

  Complex eval(int i, int j, double s, double t, double* residual = nullptr) const;
  Complex eval_P(int i, int j, double s, double t) const;
  Complex eval_F(int i, int j, double s, double t) const;
  /// Majorant of the terms dropped by the truncation at (i, j).
  double residual(int i, int j) const;

  CarlemanRow carleman_function(double s, int i = 0) const;

  /// Tf in the frame, through the P and F coefficient algebra.
  CVector apply_T(const CVector& f) const;

  /// (Tf)(s) = int K(s, t) f(t) dt at each s node, with the t-integral taken
  /// by the caller's rule (nodes, weights, f sampled at the nodes).
  std::vector<Complex> integral_apply(const std::vector<double>& s_nodes, const std::vector<double>& t_nodes,
                                      const std::vector<double>& t_weights,
                                      const std::vector<Complex>& f_values) const;

  /// C_i = max_k sup_t |(T* h_{n(k)})^(i)(t)| / (k z(e_k^perp)) over `samples`.
  std::vector<double> bound_constants(int i_max, const std::vector<double>& samples) const;

 private:
  void check_order(int i, int j) const;

  std::shared_ptr<const MotherWavelet> wavelet_;
  std::vector<Pairing> slots_;
  std::vector<PTerm> p_;
  std::vector<FTerm> f_;
  std::vector<PTerm> p_dropped_;
  std::vector<FTerm> f_dropped_;
  double gamma_gap_ = 0.0;
};

}  // namespace carleman
