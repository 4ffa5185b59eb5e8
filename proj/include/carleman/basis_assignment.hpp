#pragma once

#include <string>
#include <vector>

#include "carleman/meyer_wavelet.hpp"
#include "carleman/operator_model.hpp"
#include "carleman/series.hpp"

namespace carleman {

struct DyadicIndex {
  int j = 0;
  long k = 0;
  double D = 1.0;  // 2^{j^2} for j > 0, (1/sqrt 2)^{|j|} otherwise
};

enum class EnumerationOrder { diagonal };

/// Deterministic bijection n -> (j_n, k_n) over a box. Diagonal order sorts by
/// |j| + |k|, ties by j then k, both ascending.
std::vector<DyadicIndex> enumerate_dyadic(int j_lo, int j_hi, long k_lo, long k_hi,
                                          EnumerationOrder order = EnumerationOrder::diagonal);

struct AssignOptions {
  int i_max = 2;
  std::size_t budget = 0;  // enumeration entries the scan may consume, 0 = all
  // x_k is the next e with d(e) <= d_scale * 2^{1-k}; 0 picks max_k d(e_k)
  double d_scale = 0.0;
};

/// One operator basis vector and the wavelet it is sent to.
struct Pairing {
  Index op = 0;            // 0-based index into {f_n}
  std::size_t enum_index = 0;  // position in the enumeration
  int j = 0;
  long k = 0;
  double D = 1.0;
  char role = 'h';         // 'h' or 'g'
  std::size_t seq = 0;     // 1-based position in the h- or g-sequence
};

struct BasisAssignment {
  std::vector<DyadicIndex> enumeration;
  std::vector<double> A;  // A_i for i = 0..i_max, imported from the wavelet
  int i_max = 2;

  std::vector<Index> x_ops;      // {x_k}: chosen null vectors, operator indices
  std::vector<Index> xperp_ops;  // {x_k^perp}: remaining vectors in operator order
  std::vector<std::size_t> h_enum;  // h_r -> enumeration index, r from 1
  std::vector<std::size_t> g_enum;  // g_k -> enumeration index
  std::vector<std::size_t> nk;      // n(k), 1-based h positions of e_k^perp
  std::vector<double> d_x;          // d(x_k)
  double d_scale = 0.0;

  // Slots sorted by enumeration index; slot order is the ordering {f_n} of
  // the operator basis that the kernel frame follows.
  std::vector<Pairing> slots;
  std::vector<std::size_t> slot_of_op;  // operator index -> slot

  double H(std::size_t r, int i) const;  // sup bound of h_r^(i), r from 1
  double G(std::size_t k, int i) const;  // sup bound of g_k^(i), k from 1
};

/// Greedy construction of {x_k}, {g_k}, {h_k} and n(k). Throws Error with
/// code budget_exhausted naming the failing k and the required scale.
BasisAssignment assign(const OperatorSpec& spec, const AuxOperators& aux, const MotherWavelet& wavelet,
                       std::vector<DyadicIndex> enumeration, const AssignOptions& opts = {});

struct ConditionSeries {
  int i = 0;
  SeriesCertificate hki;    // terms H_{k,i}
  SeriesCertificate zndn;   // terms d(x_k) (G_{k,i} + 1)
  SeriesCertificate sumrk;  // terms k z(e_k^perp) H_{n(k),i}
  std::size_t hki_violation = 0;    // first k with H_{k,i} > 2^{-k}
  std::size_t zndn_violation = 0;   // first k above d_scale * 2^{1-k} (G_{k,i} + 1)
  std::size_t sumrk_violation = 0;  // first k above 2^{-k}
};

std::vector<ConditionSeries> condition_report(const BasisAssignment& as, const AuxOperators& aux,
                                              int tail_len = 8);

}  // namespace carleman
