#include "carleman/basis_assignment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace carleman {

std::vector<DyadicIndex> enumerate_dyadic(int j_lo, int j_hi, long k_lo, long k_hi, EnumerationOrder) {
  if (j_lo > j_hi || k_lo > k_hi) throw Error(ErrorCode::invalid_argument, "enumeration ranges must be non-empty");
  std::vector<DyadicIndex> out;
  out.reserve(static_cast<std::size_t>(j_hi - j_lo + 1) * static_cast<std::size_t>(k_hi - k_lo + 1));
  for (int j = j_lo; j <= j_hi; ++j)
    for (long k = k_lo; k <= k_hi; ++k) out.push_back({j, k, MotherWavelet::D(j)});
  std::sort(out.begin(), out.end(), [](const DyadicIndex& a, const DyadicIndex& b) {
    const long la = std::abs(a.j) + std::abs(a.k), lb = std::abs(b.j) + std::abs(b.k);
    if (la != lb) return la < lb;
    if (a.j != b.j) return a.j < b.j;
    return a.k < b.k;
  });
  return out;
}

double BasisAssignment::H(std::size_t r, int i) const {
  return enumeration.at(h_enum.at(r - 1)).D * A.at(static_cast<std::size_t>(i));
}

double BasisAssignment::G(std::size_t k, int i) const {
  return enumeration.at(g_enum.at(k - 1)).D * A.at(static_cast<std::size_t>(i));
}

namespace {

CVector unit(Index dim, Index n) {
  CVector v = CVector::Zero(dim);
  v(n) = 1.0;
  return v;
}

}  // namespace

BasisAssignment assign(const OperatorSpec& spec, const AuxOperators& aux, const MotherWavelet& wavelet,
                       std::vector<DyadicIndex> enumeration, const AssignOptions& opts) {
  if (opts.i_max < 0 || opts.i_max > wavelet.max_order())
    throw Error(ErrorCode::out_of_range, "i_max outside the wavelet's derivative range");
  if (std::none_of(enumeration.begin(), enumeration.end(), [](const DyadicIndex& e) { return e.j <= 0; }))
    throw Error(ErrorCode::invalid_argument,
                "enumeration has no entries with j <= 0; no subsequence with j -> -infinity exists");

  BasisAssignment as;
  as.enumeration = std::move(enumeration);
  as.i_max = opts.i_max;
  for (int i = 0; i <= opts.i_max; ++i) as.A.push_back(wavelet.A(i));
  const std::size_t limit =
      opts.budget == 0 ? as.enumeration.size() : std::min(opts.budget, as.enumeration.size());

  // {x_k}: thin the null sequence until d(x_k) <= d_scale * 2^{1-k}
  std::vector<double> d_null;
  for (Index n : spec.null_indices) d_null.push_back(d_value(aux, unit(spec.dim, n)));
  as.d_scale = opts.d_scale > 0.0 ? opts.d_scale : *std::max_element(d_null.begin(), d_null.end());
  for (std::size_t q = 0; q < d_null.size(); ++q) {
    const int k = static_cast<int>(as.x_ops.size()) + 1;
    if (d_null[q] <= as.d_scale * std::ldexp(1.0, 1 - k)) {
      as.x_ops.push_back(spec.null_indices[q]);
      as.d_x.push_back(d_null[q]);
    }
  }
  for (Index n = 0; n < spec.dim; ++n)
    if (std::find(as.x_ops.begin(), as.x_ops.end(), n) == as.x_ops.end()) as.xperp_ops.push_back(n);

  std::vector<long> perp_ordinal(static_cast<std::size_t>(spec.dim), 0);
  for (std::size_t k = 0; k < spec.perp_indices.size(); ++k)
    perp_ordinal[static_cast<std::size_t>(spec.perp_indices[k])] = static_cast<long>(k + 1);
  as.nk.assign(spec.perp_indices.size(), 0);

  // h_r: forward scan for the first j <= 0 entry meeting every target.
  std::vector<char> used(as.enumeration.size(), 0);
  std::size_t pos = 0;
  const double a_max = *std::max_element(as.A.begin(), as.A.end());
  for (std::size_t r = 1; r <= as.xperp_ops.size(); ++r) {
    const Index op = as.xperp_ops[r - 1];
    const long k = perp_ordinal[static_cast<std::size_t>(op)];
    const double z = k > 0 ? aux.z_perp[static_cast<std::size_t>(k - 1)] : 1.0;
    auto meets = [&](double D) {
      for (double a : as.A) {
        const double h = D * a;
        if (h > std::ldexp(1.0, -static_cast<int>(r))) return false;
        if (k > 0 && static_cast<double>(k) * z * h > std::ldexp(1.0, -static_cast<int>(k))) return false;
      }
      return true;
    };
    while (pos < limit && !(as.enumeration[pos].j <= 0 && meets(as.enumeration[pos].D))) ++pos;
    if (pos == limit) {
      double target = std::ldexp(1.0, -static_cast<int>(r));
      if (k > 0) target = std::min(target, std::ldexp(1.0, -static_cast<int>(k)) / (static_cast<double>(k) * z));
      const int need = static_cast<int>(std::ceil(2.0 * std::log2(a_max / target)));
      std::ostringstream msg;
      msg << "assignment budget exhausted at h_" << r;
      if (k > 0) msg << " (e_" << k << "^perp, n(k) condition)";
      msg << ": needs a scale j <= " << -need << " beyond enumeration position " << limit;
      throw Error(ErrorCode::budget_exhausted, msg.str());
    }
    as.h_enum.push_back(pos);
    used[pos] = 1;
    if (k > 0) as.nk[static_cast<std::size_t>(k - 1)] = r;
    ++pos;
  }

  // g_k: earliest unused entries, paired with x_k
  for (std::size_t q = 0; q < limit && as.g_enum.size() < as.x_ops.size(); ++q)
    if (!used[q]) as.g_enum.push_back(q);
  if (as.g_enum.size() < as.x_ops.size())
    throw Error(ErrorCode::budget_exhausted, "assignment budget exhausted while choosing g_k");

  for (std::size_t k = 0; k < as.x_ops.size(); ++k) {
    const auto& e = as.enumeration[as.g_enum[k]];
    as.slots.push_back({as.x_ops[k], as.g_enum[k], e.j, e.k, e.D, 'g', k + 1});
  }
  for (std::size_t r = 0; r < as.xperp_ops.size(); ++r) {
    const auto& e = as.enumeration[as.h_enum[r]];
    as.slots.push_back({as.xperp_ops[r], as.h_enum[r], e.j, e.k, e.D, 'h', r + 1});
  }
  std::sort(as.slots.begin(), as.slots.end(),
            [](const Pairing& a, const Pairing& b) { return a.enum_index < b.enum_index; });
  as.slot_of_op.assign(static_cast<std::size_t>(spec.dim), 0);
  for (std::size_t s = 0; s < as.slots.size(); ++s) as.slot_of_op[static_cast<std::size_t>(as.slots[s].op)] = s;
  return as;
}

std::vector<ConditionSeries> condition_report(const BasisAssignment& as, const AuxOperators& aux, int tail_len) {
  DecayFitOptions fit;
  fit.tail_len = tail_len;
  std::vector<ConditionSeries> out;
  for (int i = 0; i <= as.i_max; ++i) {
    ConditionSeries c;
    c.i = i;
    std::vector<double> hki, zndn, sumrk;
    for (std::size_t r = 1; r <= as.h_enum.size(); ++r) hki.push_back(as.H(r, i));
    for (std::size_t k = 1; k <= as.x_ops.size(); ++k) {
      zndn.push_back(as.d_x[k - 1] * (as.G(k, i) + 1.0));
      if (!c.zndn_violation && as.d_x[k - 1] > as.d_scale * std::ldexp(1.0, 1 - static_cast<int>(k)))
        c.zndn_violation = k;
    }
    for (std::size_t k = 1; k <= as.nk.size(); ++k)
      sumrk.push_back(static_cast<double>(k) * aux.z_perp[k - 1] * as.H(as.nk[k - 1], i));
    c.hki_violation = first_majorant_violation(hki, 1.0);
    c.sumrk_violation = first_majorant_violation(sumrk, 1.0);
    c.hki = certify_series(std::move(hki), fit);
    c.zndn = certify_series(std::move(zndn), fit);
    c.sumrk = certify_series(std::move(sumrk), fit);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace carleman
