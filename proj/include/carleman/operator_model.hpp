#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carleman/series.hpp"
#include "carleman/types.hpp"
#include "json.hpp"

namespace carleman {

/// Truncated matrix of a closed operator S in an orthonormal basis {f_n}:
/// matrix(m, n) = <S f_n, f_m>. Indices are 0-based internally and 1-based in
/// config documents. `null_indices` picks the sequence {e_k} inside {f_n}
/// (its span is H), `perp_indices` the complementary basis {e_k^perp} of H^perp.
struct OperatorSpec {
  Index dim = 0;
  SparseC matrix;
  std::vector<Index> null_indices;
  std::vector<Index> perp_indices;
  std::vector<double> adjoint_norms;  // ||S* f_n||, filled by make_operator
  std::vector<std::string> warnings;

  /// Matrix of S*, the conjugate transpose.
  SparseC adjoint() const { return SparseC(matrix.adjoint()); }
  /// ||S* f_n|| for a basis vector; equals the norm of row n of the matrix.
  double adjoint_basis_norm(Index n) const { return adjoint_norms[static_cast<std::size_t>(n)]; }
  bool is_null(Index n) const;
};

/// Validates index sets and finiteness, derives `perp_indices` as the
/// complement when not given, and attaches size warnings. Throws Error.
OperatorSpec make_operator(SparseC matrix, std::vector<Index> null_indices,
                           std::optional<std::vector<Index>> perp_indices = std::nullopt);

/// Reads the "operator" table of a config (or a bare operator table).
OperatorSpec load_operator(const nlohmann::json& config);
OperatorSpec load_operator(std::string_view json_text);

struct NullSequenceReport {
  double power = 0.25;
  std::vector<double> norms;  // ||S* e_k||
  SeriesCertificate series;   // terms ||S* e_k||^power
};

/// Partial sums of sum_k ||S* e_k||^power and the tail decay flag.
NullSequenceReport validate_null_sequence(const OperatorSpec& spec, double power = 0.25,
                                          int tail_len = 8);

struct SplitParts {
  SparseC J;  // S* E
  SparseC Q;  // (1 - E) S
};

/// S = (1 - E)S + ES with ES = J*. Exact at truncation.
SplitParts split(const OperatorSpec& spec);

struct GammaParts {
  SparseC Gamma;                       // S* Lambda
  std::vector<double> z_perp;          // ||S* e_k^perp|| + 1
  std::vector<double> lambda_weights;  // 1 / (k z_perp[k]), k from 1
  double hs_sum = 0.0;                 // sum_n ||Gamma* f_n||^2
};

GammaParts gamma_operator(const OperatorSpec& spec);

/// Everything the basis assignment and kernel assembly need from S.
struct AuxOperators {
  SparseC J;
  SparseC Q;
  SparseC Gamma;
  std::vector<double> z_perp;
  std::vector<double> lambda_weights;
  double hs_sum = 0.0;
};

AuxOperators build_aux(const OperatorSpec& spec);

/// z(f) = ||S* f|| + 1.
double z_value(const OperatorSpec& spec, const CVector& f);

/// d(h) = ||J h||^{1/4} + ||J* h||^{1/4} + ||Gamma* h||.
double d_value(const AuxOperators& aux, const CVector& h);

}  // namespace carleman
