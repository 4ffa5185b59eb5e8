#include "carleman/series.hpp"

#include <algorithm>
#include <cmath>

#include "carleman/types.hpp"

namespace carleman {

SeriesCertificate certify_series(std::vector<double> terms, const DecayFitOptions& opts) {
  SeriesCertificate cert;
  cert.partial_sums.reserve(terms.size());
  double acc = 0.0;
  for (double t : terms) {
    if (!std::isfinite(t) || t < 0.0)
      throw Error(ErrorCode::numeric, "series terms must be finite and non-negative");
    acc += t;
    cert.partial_sums.push_back(acc);
  }
  cert.terms = std::move(terms);

  const std::size_t n = cert.terms.size();
  std::vector<double> env(n);
  double running = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    running = std::max(running, cert.terms[k]);
    env[k] = running;
  }

  const std::size_t tail = std::min<std::size_t>(n, std::max(2, opts.tail_len));
  const std::size_t first = n - tail;
  if (n == 0 || env[first] == 0.0) {
    cert.model = "zero";
    return cert;
  }
  if (tail < 2) {
    cert.model = "geometric";
    return cert;
  }

  double max_ratio = 0.0;
  double min_exponent = std::numeric_limits<double>::infinity();
  for (std::size_t k = first; k + 1 < n; ++k) {
    const double a = env[k], b = env[k + 1];
    if (a == 0.0) continue;  // envelope is zero from here on
    const double ratio = b / a;
    max_ratio = std::max(max_ratio, ratio);
    if (b > 0.0) {
      // 1-based indices k+1 -> k+2
      const double idx = static_cast<double>(k + 1);
      min_exponent = std::min(min_exponent, std::log(a / b) / std::log1p(1.0 / idx));
    }
  }
  cert.tail_ratio = max_ratio;
  cert.tail_exponent = min_exponent;
  if (max_ratio <= opts.max_ratio) {
    cert.model = "geometric";
  } else if (min_exponent >= opts.min_exponent) {
    cert.model = "power";
  } else {
    cert.model = "none";
    cert.decay_ok = false;
  }
  return cert;
}

std::size_t first_majorant_violation(const std::vector<double>& terms, double scale,
                                     double rel_tol) {
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const double bound = scale * std::ldexp(1.0, -static_cast<int>(k + 1));
    if (terms[k] > bound * (1.0 + rel_tol)) return k + 1;
  }
  return 0;
}

}  // namespace carleman
