#pragma once

#include <limits>
#include <string>
#include <vector>

namespace carleman {

/// Thresholds of the tail decay heuristic. A finite prefix can never certify
/// convergence; the flag only says the tail looks like a summable model.
struct DecayFitOptions {
  int tail_len = 8;
  double max_ratio = 0.95;        // geometric model: envelope ratios at most this
  double min_exponent = 1.05;     // power model: local exponents at least this
};

/// Partial sums of a non-negative series plus the tail decay verdict.
struct SeriesCertificate {
  std::vector<double> terms;
  std::vector<double> partial_sums;
  bool decay_ok = true;
  std::string model;  // "zero", "geometric", "power" or "none"
  double tail_ratio = 0.0;
  double tail_exponent = std::numeric_limits<double>::infinity();

  double total() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
};

/// Builds partial sums and runs the decay heuristic on the last
/// `opts.tail_len` terms of the non-increasing envelope
/// env_k = max_{m >= k} t_m (the smallest monotone majorant).
SeriesCertificate certify_series(std::vector<double> terms, const DecayFitOptions& opts = {});

/// First-order check of a geometric majorant: every term t_k (k from 1)
/// satisfies t_k <= scale * 2^{-k} * (1 + rel_tol). Returns the offending
/// 1-based index, or 0 when the majorant holds everywhere.
std::size_t first_majorant_violation(const std::vector<double>& terms, double scale,
                                     double rel_tol = 0.0);

}  // namespace carleman
