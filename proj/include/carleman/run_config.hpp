#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "carleman/basis_assignment.hpp"
#include "carleman/kernel_assembly.hpp"
#include "carleman/meyer_wavelet.hpp"
#include "carleman/verification.hpp"
#include "json.hpp"

namespace carleman {

struct RunConfig {
  nlohmann::json operator_doc;  // the "operator" table, parsed by load_operator
  WaveletOptions wavelet;

  struct Assignment {
    int i_max = 2;
    std::size_t budget = 0;
    int j_lo = -96, j_hi = 4;
    long k_lo = -4, k_hi = 4;
    std::string order = "diagonal";
    double d_scale = 0.0;
  } assignment;

  KernelTruncation truncation;
  double rank_tol = 0.0;

  struct Validation {
    double power = 0.25;
    int tail_len = 8;
  } validation;

  VerifyOptions verify;

  struct Output {
    std::string dir = "out";
    bool heatmap = false;
  } output;

  std::uint64_t seed = 1;

  /// The effective configuration, every default filled in.
  nlohmann::json to_json() const;
};

/// Reads a config document. Unknown keys are errors so typos surface.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig parse_run_config(std::string_view text);

/// Applies CARLEMAN_<TABLE>__<KEY>=value overrides: the name after the prefix
/// is lower-cased and split on "__" into a key path; the value is read as
/// JSON when it parses and as a string otherwise. Applied in sorted order.
nlohmann::json apply_env_overrides(nlohmann::json doc, const std::map<std::string, std::string>& env);
/// The CARLEMAN_* variables of the current process environment.
std::map<std::string, std::string> carleman_environment();

}  // namespace carleman
