#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace carleman {

using Complex = std::complex<double>;
using Index = Eigen::Index;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using SparseC = Eigen::SparseMatrix<Complex, Eigen::ColMajor, Index>;

enum class ErrorCode {
  invalid_argument = 1,
  parse = 2,
  out_of_range = 3,
  budget_exhausted = 4,
  numeric = 5,
  io = 6,
};

/// Every failure raised by the library carries a code that maps one-to-one
/// onto the C API status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Deterministic uniform deviates on top of mt19937_64 (whose output sequence
/// is fixed by the standard). The standard distributions are
/// implementation-defined, so bits are mapped to [0,1) by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace carleman
