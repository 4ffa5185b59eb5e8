#pragma once

#include <memory>

#include "carleman/basis_assignment.hpp"
#include "carleman/kernel_assembly.hpp"
#include "carleman/operator_model.hpp"
#include "carleman/run_config.hpp"
#include "carleman/schmidt.hpp"
#include "carleman/verification.hpp"
#include "json.hpp"

namespace carleman {

/// One wavelet per distinct option set, built on first use and shared.
std::shared_ptr<const MotherWavelet> shared_wavelet(const WaveletOptions& opts);

/// Every stage of one run, in construction order.
struct Pipeline {
  RunConfig config;
  OperatorSpec spec;
  AuxOperators aux;
  SchmidtSystem schmidt;
  std::unique_ptr<BOperator> B;
  std::shared_ptr<const MotherWavelet> wavelet;
  BasisAssignment assignment;
  std::vector<ConditionSeries> conditions;
  std::unique_ptr<KernelModel> kernel;
};

std::unique_ptr<Pipeline> build_pipeline(const RunConfig& config);

/// Operator-side validation only: null sequence, Hilbert-Schmidt sum,
/// nuclearity of J. The "pass" field is the verdict.
nlohmann::json validate_config(const RunConfig& config);

nlohmann::json assignment_report(const Pipeline& p);
/// Versioned text serialization of the kernel model.
nlohmann::json model_document(const Pipeline& p);
nlohmann::json verify_report(const std::vector<CheckReport>& checks);
std::vector<CheckReport> verify_pipeline(const Pipeline& p);

/// Pretty-printed JSON with a trailing newline; key order is sorted, so equal
/// documents give equal bytes.
std::string dump_report(const nlohmann::json& doc);

}  // namespace carleman
