#include "carleman/operator_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace carleman {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::parse, "operator config: " + what);
}

double number_at(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) parse_error(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

double diagonal_law(const json& law, Index k) {
  const std::string kind = law.value("law", std::string("zero"));
  const double scale = number_at(law, "scale", 1.0);
  const double kd = static_cast<double>(k);
  if (kind == "zero") return 0.0;
  if (kind == "constant") return scale;
  if (kind == "linear") return scale * kd;
  if (kind == "geometric") return scale * std::pow(number_at(law, "ratio", 0.5), kd);
  if (kind == "power") return scale * std::pow(std::max(kd, 1.0), number_at(law, "exponent", -1.0));
  parse_error("unknown diagonal law '" + kind + "'");
}

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) parse_error(std::string(what) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

SparseC matrix_from_json(const json& m, Index dim) {
  if (!m.is_object() || !m.contains("kind")) parse_error("'matrix' needs a 'kind'");
  const std::string kind = m.at("kind").get<std::string>();
  std::vector<Eigen::Triplet<Complex, Index>> trip;
  auto check = [dim](Index r, Index c) {
    if (r < 0 || r >= dim || c < 0 || c >= dim)
      throw Error(ErrorCode::out_of_range, "operator config: matrix entry index out of range");
  };

  if (kind == "zero") {
    // nothing
  } else if (kind == "dense") {
    const json& re = m.at("re");
    if (!re.is_array() || static_cast<Index>(re.size()) != dim) parse_error("dense 're' must have dim rows");
    const json* im = m.contains("im") ? &m.at("im") : nullptr;
    if (im && (!im->is_array() || static_cast<Index>(im->size()) != dim)) parse_error("dense 'im' must have dim rows");
    for (Index r = 0; r < dim; ++r) {
      auto row_re = number_array(re.at(r), "dense row");
      if (static_cast<Index>(row_re.size()) != dim) parse_error("dense rows must have dim entries");
      std::vector<double> row_im(dim, 0.0);
      if (im) {
        row_im = number_array(im->at(r), "dense row");
        if (static_cast<Index>(row_im.size()) != dim) parse_error("dense rows must have dim entries");
      }
      for (Index c = 0; c < dim; ++c)
        if (row_re[c] != 0.0 || row_im[c] != 0.0) trip.emplace_back(r, c, Complex(row_re[c], row_im[c]));
    }
  } else if (kind == "diagonal") {
    auto re = number_array(m.at("re"), "diagonal 're'");
    std::vector<double> im(re.size(), 0.0);
    if (m.contains("im")) im = number_array(m.at("im"), "diagonal 'im'");
    if (static_cast<Index>(re.size()) != dim || im.size() != re.size()) parse_error("diagonal needs dim entries");
    for (Index n = 0; n < dim; ++n)
      if (re[n] != 0.0 || im[n] != 0.0) trip.emplace_back(n, n, Complex(re[n], im[n]));
  } else if (kind == "banded") {
    if (!m.contains("bands") || !m.at("bands").is_array()) parse_error("banded needs a 'bands' array");
    for (const auto& band : m.at("bands")) {
      const Index offset = band.at("offset").get<Index>();
      auto re = number_array(band.at("re"), "band 're'");
      std::vector<double> im(re.size(), 0.0);
      if (band.contains("im")) im = number_array(band.at("im"), "band 'im'");
      if (im.size() != re.size()) parse_error("band 're' and 'im' lengths differ");
      // offset > 0: superdiagonal, entry (r, r + offset)
      for (std::size_t q = 0; q < re.size(); ++q) {
        const Index r = offset >= 0 ? static_cast<Index>(q) : static_cast<Index>(q) - offset;
        const Index c = r + offset;
        check(r, c);
        if (re[q] != 0.0 || im[q] != 0.0) trip.emplace_back(r, c, Complex(re[q], im[q]));
      }
    }
  } else if (kind == "sparse") {
    if (!m.contains("entries") || !m.at("entries").is_array()) parse_error("sparse needs 'entries'");
    for (const auto& e : m.at("entries")) {
      if (!e.is_array() || e.size() < 3 || e.size() > 4) parse_error("sparse entry is [row, col, re, (im)]");
      const Index r = e.at(0).get<Index>() - 1, c = e.at(1).get<Index>() - 1;
      check(r, c);
      trip.emplace_back(r, c, Complex(e.at(2).get<double>(), e.size() == 4 ? e.at(3).get<double>() : 0.0));
    }
  } else if (kind == "diagonal_rule") {
    // S f_{2k} = even(k) f_{2k},  S f_{2k+1} = odd(k) f_{2k+1}, positions 1-based
    const json even = m.value("even", json::object());
    const json odd = m.value("odd", json::object());
    for (Index n = 0; n < dim; ++n) {
      const Index pos = n + 1;
      const double v = (pos % 2 == 0) ? diagonal_law(even, pos / 2) : diagonal_law(odd, pos / 2);
      if (v != 0.0) trip.emplace_back(n, n, Complex(v, 0.0));
    }
  } else if (kind == "random_dense") {
    Rng rng(m.value("seed", std::uint64_t{1}));
    const double scale = number_at(m, "scale", 1.0);
    for (Index c = 0; c < dim; ++c)
      for (Index r = 0; r < dim; ++r) {
        const double re = rng.uniform(-scale, scale), im = rng.uniform(-scale, scale);
        trip.emplace_back(r, c, Complex(re, im));
      }
  } else {
    parse_error("unknown matrix kind '" + kind + "'");
  }

  SparseC a(dim, dim);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  return a;
}

std::vector<Index> index_set(const json& j, Index dim, const char* what) {
  std::vector<Index> out;
  if (j.is_string()) {
    const std::string rule = j.get<std::string>();
    for (Index n = 0; n < dim; ++n) {
      const Index pos = n + 1;
      if (rule == "all" || (rule == "odd" && pos % 2 == 1) || (rule == "even" && pos % 2 == 0))
        out.push_back(n);
      else if (rule != "odd" && rule != "even")
        parse_error(std::string(what) + ": unknown rule '" + rule + "'");
    }
    return out;
  }
  if (!j.is_array()) parse_error(std::string(what) + " must be a list or one of odd/even/all");
  for (const auto& v : j) {
    if (!v.is_number_integer()) parse_error(std::string(what) + " must hold integers");
    const Index pos = v.get<Index>();
    if (pos < 1 || pos > dim)
      throw Error(ErrorCode::out_of_range, std::string("operator config: ") + what + " index out of range");
    out.push_back(pos - 1);
  }
  return out;
}

}  // namespace

bool OperatorSpec::is_null(Index n) const {
  return std::find(null_indices.begin(), null_indices.end(), n) != null_indices.end();
}

OperatorSpec make_operator(SparseC matrix, std::vector<Index> null_indices,
                           std::optional<std::vector<Index>> perp_indices) {
  OperatorSpec spec;
  spec.dim = matrix.rows();
  if (spec.dim < 1 || matrix.cols() != spec.dim)
    throw Error(ErrorCode::invalid_argument, "operator matrix must be square and non-empty");
  for (Index c = 0; c < matrix.outerSize(); ++c)
    for (SparseC::InnerIterator it(matrix, c); it; ++it)
      if (!std::isfinite(it.value().real()) || !std::isfinite(it.value().imag()))
        throw Error(ErrorCode::numeric, "operator matrix has non-finite entries");
  if (null_indices.empty()) throw Error(ErrorCode::invalid_argument, "null_indices must be non-empty");

  std::set<Index> seen;
  for (Index n : null_indices) {
    if (n < 0 || n >= spec.dim) throw Error(ErrorCode::out_of_range, "null index out of range");
    if (!seen.insert(n).second) throw Error(ErrorCode::invalid_argument, "null_indices repeat an index");
  }
  std::vector<Index> perp;
  if (perp_indices) {
    std::set<Index> perp_seen;
    for (Index n : *perp_indices) {
      if (n < 0 || n >= spec.dim) throw Error(ErrorCode::out_of_range, "perp index out of range");
      if (seen.count(n)) throw Error(ErrorCode::invalid_argument, "null_indices and perp_indices overlap");
      if (!perp_seen.insert(n).second) throw Error(ErrorCode::invalid_argument, "perp_indices repeat an index");
    }
    if (seen.size() + perp_seen.size() != static_cast<std::size_t>(spec.dim))
      throw Error(ErrorCode::invalid_argument, "null_indices and perp_indices must cover every basis index");
    perp = *perp_indices;
  } else {
    for (Index n = 0; n < spec.dim; ++n)
      if (!seen.count(n)) perp.push_back(n);
  }

  spec.matrix = std::move(matrix);
  spec.matrix.makeCompressed();
  spec.null_indices = std::move(null_indices);
  spec.perp_indices = std::move(perp);

  spec.adjoint_norms.assign(static_cast<std::size_t>(spec.dim), 0.0);
  for (Index c = 0; c < spec.matrix.outerSize(); ++c)
    for (SparseC::InnerIterator it(spec.matrix, c); it; ++it)
      spec.adjoint_norms[static_cast<std::size_t>(it.row())] += std::norm(it.value());
  for (double& v : spec.adjoint_norms) v = std::sqrt(v);

  if (spec.null_indices.size() < 4)
    spec.warnings.push_back("fewer than 4 null indices; H is small at this truncation");
  if (spec.perp_indices.size() < 4)
    spec.warnings.push_back("fewer than 4 perp indices; H-perp is small at this truncation");
  return spec;
}

OperatorSpec load_operator(const nlohmann::json& config) {
  const json& op = config.contains("operator") ? config.at("operator") : config;
  if (!op.is_object()) parse_error("expected an object");
  if (!op.contains("dim") || !op.at("dim").is_number_integer()) parse_error("'dim' must be an integer");
  const Index dim = op.at("dim").get<Index>();
  if (dim < 1) parse_error("'dim' must be positive");
  if (!op.contains("matrix")) parse_error("missing 'matrix'");
  if (!op.contains("null_indices")) parse_error("missing 'null_indices'");
  SparseC a = matrix_from_json(op.at("matrix"), dim);
  auto null_idx = index_set(op.at("null_indices"), dim, "null_indices");
  std::optional<std::vector<Index>> perp;
  if (op.contains("perp_indices")) perp = index_set(op.at("perp_indices"), dim, "perp_indices");
  return make_operator(std::move(a), std::move(null_idx), std::move(perp));
}

OperatorSpec load_operator(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed config document: ") + e.what());
  }
  try {
    return load_operator(doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("operator config: ") + e.what());
  }
}

NullSequenceReport validate_null_sequence(const OperatorSpec& spec, double power, int tail_len) {
  if (spec.null_indices.empty()) throw Error(ErrorCode::invalid_argument, "empty null_indices");
  if (!(power > 0.0 && power <= 1.0)) throw Error(ErrorCode::invalid_argument, "power must lie in (0, 1]");
  NullSequenceReport rep;
  rep.power = power;
  std::vector<double> terms;
  for (Index n : spec.null_indices) {
    const double norm = spec.adjoint_basis_norm(n);
    rep.norms.push_back(norm);
    terms.push_back(norm == 0.0 ? 0.0 : std::pow(norm, power));
  }
  DecayFitOptions opts;
  opts.tail_len = tail_len;
  rep.series = certify_series(std::move(terms), opts);
  return rep;
}

namespace {

SparseC projection(Index dim, const std::vector<Index>& idx) {
  SparseC e(dim, dim);
  std::vector<Eigen::Triplet<Complex, Index>> trip;
  for (Index n : idx) trip.emplace_back(n, n, Complex(1.0, 0.0));
  e.setFromTriplets(trip.begin(), trip.end());
  return e;
}

}  // namespace

SplitParts split(const OperatorSpec& spec) {
  const SparseC e = projection(spec.dim, spec.null_indices);
  SparseC one_minus_e = projection(spec.dim, spec.perp_indices);
  SplitParts parts;
  parts.J = SparseC(spec.adjoint() * e);
  parts.Q = SparseC(one_minus_e * spec.matrix);
  parts.J.prune(Complex(0.0, 0.0));
  parts.Q.prune(Complex(0.0, 0.0));
  return parts;
}

GammaParts gamma_operator(const OperatorSpec& spec) {
  GammaParts g;
  std::vector<Eigen::Triplet<Complex, Index>> trip;
  for (std::size_t k = 0; k < spec.perp_indices.size(); ++k) {
    const double z = spec.adjoint_basis_norm(spec.perp_indices[k]) + 1.0;
    const double w = 1.0 / (static_cast<double>(k + 1) * z);
    g.z_perp.push_back(z);
    g.lambda_weights.push_back(w);
    trip.emplace_back(spec.perp_indices[k], spec.perp_indices[k], Complex(w, 0.0));
  }
  SparseC lambda(spec.dim, spec.dim);
  lambda.setFromTriplets(trip.begin(), trip.end());
  g.Gamma = SparseC(spec.adjoint() * lambda);
  g.Gamma.prune(Complex(0.0, 0.0));
  // sum_n ||Gamma* f_n||^2 is the squared Frobenius norm
  double acc = 0.0;
  for (Index c = 0; c < g.Gamma.outerSize(); ++c)
    for (SparseC::InnerIterator it(g.Gamma, c); it; ++it) acc += std::norm(it.value());
  g.hs_sum = acc;
  return g;
}

AuxOperators build_aux(const OperatorSpec& spec) {
  SplitParts s = split(spec);
  GammaParts g = gamma_operator(spec);
  AuxOperators aux;
  aux.J = std::move(s.J);
  aux.Q = std::move(s.Q);
  aux.Gamma = std::move(g.Gamma);
  aux.z_perp = std::move(g.z_perp);
  aux.lambda_weights = std::move(g.lambda_weights);
  aux.hs_sum = g.hs_sum;
  return aux;
}

double z_value(const OperatorSpec& spec, const CVector& f) {
  if (f.size() != spec.dim) throw Error(ErrorCode::invalid_argument, "z_value: dimension mismatch");
  return (spec.adjoint() * f).norm() + 1.0;
}

double d_value(const AuxOperators& aux, const CVector& h) {
  if (h.size() != aux.J.cols()) throw Error(ErrorCode::invalid_argument, "d_value: dimension mismatch");
  const double jh = (aux.J * h).norm();
  const double jsh = (SparseC(aux.J.adjoint()) * h).norm();
  const double gsh = (SparseC(aux.Gamma.adjoint()) * h).norm();
  return std::pow(jh, 0.25) + std::pow(jsh, 0.25) + gsh;
}

}  // namespace carleman
