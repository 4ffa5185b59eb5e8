#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "carleman/basis_assignment.hpp"
#include "carleman/kernel_assembly.hpp"
#include "carleman/meyer_wavelet.hpp"
#include "carleman/operator_model.hpp"

namespace carleman {

struct CheckReport {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  std::string details;
  std::vector<double> argmax;  // location of the worst case, when meaningful
};

struct VerifyOptions {
  // orthonormality
  std::vector<std::pair<int, long>> gram_set;  // empty: |j| <= 2, |k| <= 2
  double gram_horizon = 256;
  double gram_panel = 1.0 / 16;
  double gram_tol = 1e-6;
  // sup-norm certificates
  int sup_j_cap = 6;
  int sup_i_max = 3;
  // double quadrature
  int m_test = 12;
  double equiv_tol = 1e-4;
  double grading = 32;
  int panel_nodes = 20;
  double base_horizon = 64;
  // smoothness
  int smooth_points = 10;
  int smooth_order = 2;
  double smooth_tol = 1e-3;
  double smooth_box = 2.0;
  // vanishing
  std::vector<double> radii{16, 32, 64, 128};
  double vanish_threshold = 1e-3;
  int vanish_cells = 32;
  // Carleman function
  int carleman_points = 10;
  double carleman_tol = 1e-4;
  double continuity_step = 1e-3;
  double continuity_tol = 1e-2;
  std::uint64_t seed = 1;
};

/// Gauss-Legendre nodes and weights on [-1, 1] from the Jacobi matrix
/// eigenproblem. Kept separate from the library's Newton-based rule.
std::pair<std::vector<double>, std::vector<double>> golub_welsch(int n);

/// Tensor-free product grid used by every double quadrature of the harness:
/// panels of width max(h0, |x| / grading) out to `extent`, `n` nodes each.
struct HarnessGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};
HarnessGrid harness_grid(double h0, double grading, double extent, int n);
/// Grid wide enough for every slot of `model`.
HarnessGrid harness_grid_for(const KernelModel& model, const VerifyOptions& opts);

CheckReport check_orthonormality(const MotherWavelet& w, const VerifyOptions& opts);
CheckReport check_hs_bound(const OperatorSpec& spec, const AuxOperators& aux);
CheckReport check_supnorm_table(const BasisAssignment& as, const MotherWavelet& w, const VerifyOptions& opts);
CheckReport check_conditions(const BasisAssignment& as, const AuxOperators& aux);
CheckReport check_gamma_route(const KernelModel& model);
CheckReport check_equivalence(const KernelModel& model, const OperatorSpec& spec, const VerifyOptions& opts);
CheckReport check_smoothness(const KernelModel& model, const VerifyOptions& opts);
CheckReport check_vanishing(const KernelModel& model, const VerifyOptions& opts);
CheckReport check_carleman(const KernelModel& model, const VerifyOptions& opts);

struct VerifyInputs {
  const OperatorSpec* spec = nullptr;
  const AuxOperators* aux = nullptr;
  const BasisAssignment* assignment = nullptr;
  const KernelModel* model = nullptr;
};

/// Every check above, in a fixed order.
std::vector<CheckReport> run_verification(const VerifyInputs& in, const VerifyOptions& opts);

}  // namespace carleman
