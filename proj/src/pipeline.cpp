#include "carleman/pipeline.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace carleman {

std::shared_ptr<const MotherWavelet> shared_wavelet(const WaveletOptions& o) {
  using Key = std::tuple<int, int, double, double, double, double, double>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const MotherWavelet>> cache;
  const Key key{o.max_order, o.quad_order, o.convergence_tol, o.table_step, o.table_half_width, o.sup_horizon,
                o.sup_step};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto w = std::make_shared<const MotherWavelet>(o);
  cache.emplace(key, w);
  return w;
}

std::unique_ptr<Pipeline> build_pipeline(const RunConfig& config) {
  auto p = std::make_unique<Pipeline>();
  p->config = config;
  p->spec = load_operator(config.operator_doc);
  p->aux = build_aux(p->spec);
  p->schmidt = schmidt_decompose(CMatrix(p->aux.J), config.rank_tol);
  p->B = std::make_unique<BOperator>(p->schmidt);
  p->wavelet = shared_wavelet(config.wavelet);

  const auto& a = config.assignment;
  AssignOptions opts;
  opts.i_max = a.i_max;
  opts.budget = a.budget;
  opts.d_scale = a.d_scale;
  p->assignment = assign(p->spec, p->aux, *p->wavelet, enumerate_dyadic(a.j_lo, a.j_hi, a.k_lo, a.k_hi), opts);
  p->conditions = condition_report(p->assignment, p->aux, config.validation.tail_len);
  p->kernel = std::make_unique<KernelModel>(p->spec, p->aux, p->schmidt, *p->B, p->assignment, p->wavelet,
                                            config.truncation);
  return p;
}

namespace {

using nlohmann::json;

json series_json(const SeriesCertificate& c) {
  return json{{"terms", c.terms},
              {"partial_sums", c.partial_sums},
              {"total", c.total()},
              {"decay_ok", c.decay_ok},
              {"model", c.model},
              {"tail_ratio", c.tail_ratio},
              {"tail_exponent", std::isfinite(c.tail_exponent) ? json(c.tail_exponent) : json("inf")}};
}

json complex_array(const CVector& v) {
  json out = json::array();
  for (Index n = 0; n < v.size(); ++n) out.push_back({v(n).real(), v(n).imag()});
  return out;
}

json one_based(const std::vector<Index>& idx) {
  json out = json::array();
  for (Index n : idx) out.push_back(n + 1);
  return out;
}

}  // namespace

json validate_config(const RunConfig& config) {
  const OperatorSpec spec = load_operator(config.operator_doc);
  const NullSequenceReport nulls = validate_null_sequence(spec, config.validation.power, config.validation.tail_len);
  const AuxOperators aux = build_aux(spec);
  const SchmidtSystem sys = schmidt_decompose(CMatrix(aux.J), config.rank_tol);
  const NuclearityReport nuc = nuclearity_report(sys, config.validation.tail_len);
  const double hs_bound = std::numbers::pi * std::numbers::pi / 6.0;
  const bool hs_ok = aux.hs_sum <= hs_bound + 1e-12;
  return json{
      {"dim", spec.dim},
      {"null_indices", one_based(spec.null_indices)},
      {"perp_indices", one_based(spec.perp_indices)},
      {"warnings", spec.warnings},
      {"null_sequence", {{"power", nulls.power}, {"norms", nulls.norms}, {"series", series_json(nulls.series)}}},
      {"hilbert_schmidt", {{"sum", aux.hs_sum}, {"bound", hs_bound}, {"pass", hs_ok}}},
      {"z_perp", aux.z_perp},
      {"schmidt", {{"rank", sys.rank()}, {"s", sys.s}}},
      {"nuclearity", {{"sqrt_series", series_json(nuc.sqrt_series)}, {"quarter_series", series_json(nuc.quarter_series)}}},
      {"decay_check", "heuristic: tail model over the last tail_len terms of a finite prefix"},
      {"pass", nulls.series.decay_ok && hs_ok},
  };
}

json assignment_report(const Pipeline& p) {
  const BasisAssignment& as = p.assignment;
  json slots = json::array();
  for (const auto& s : as.slots)
    slots.push_back({{"op", s.op + 1},
                     {"enum_index", s.enum_index + 1},
                     {"j", s.j},
                     {"k", s.k},
                     {"D", s.D},
                     {"role", std::string(1, s.role)},
                     {"seq", s.seq}});
  json conds = json::array();
  for (const auto& c : p.conditions)
    conds.push_back({{"i", c.i},
                     {"hki", series_json(c.hki)},
                     {"zndn", series_json(c.zndn)},
                     {"sumrk", series_json(c.sumrk)},
                     {"hki_violation", c.hki_violation},
                     {"zndn_violation", c.zndn_violation},
                     {"sumrk_violation", c.sumrk_violation}});
  json h = json::array(), g = json::array();
  for (std::size_t e : as.h_enum) h.push_back(e + 1);
  for (std::size_t e : as.g_enum) g.push_back(e + 1);
  return json{{"enumeration_size", as.enumeration.size()},
              {"A", as.A},
              {"i_max", as.i_max},
              {"x", one_based(as.x_ops)},
              {"x_perp", one_based(as.xperp_ops)},
              {"d_x", as.d_x},
              {"d_scale", as.d_scale},
              {"h_enum", h},
              {"g_enum", g},
              {"n_k", as.nk},
              {"pairing", slots},
              {"majorants",
               {{"hki", "H_{k,i} <= 2^-k"},
                {"zndn", "d(x_k) (G_{k,i} + 1) <= d_scale 2^{1-k} (G_{k,i} + 1)"},
                {"sumrk", "k z(e_k^perp) H_{n(k),i} <= 2^-k"}}},
              {"conditions", conds}};
}

json model_document(const Pipeline& p) {
  const KernelModel& m = *p.kernel;
  json frame = json::array();
  for (const auto& s : m.slots()) frame.push_back({{"op", s.op + 1}, {"j", s.j}, {"k", s.k}});
  json pt = json::array();
  for (const auto& t : m.p_terms())
    pt.push_back({{"k", t.k}, {"slot", t.slot + 1}, {"kz", t.kz}, {"c", complex_array(t.c)}});
  json ft = json::array();
  for (const auto& t : m.f_terms())
    ft.push_back({{"sqrt_s", t.sqrt_s}, {"beta", complex_array(t.beta)}, {"alpha", complex_array(t.alpha)}});
  const auto& w = p.wavelet->options();
  return json{{"format", "carleman-kernel-model"},
              {"version", 1},
              {"wavelet",
               {{"phase", {0.0, 1.0}},
                {"max_order", w.max_order},
                {"quad_order", p.wavelet->quad_order()},
                {"table_step", w.table_step},
                {"table_half_width", w.table_half_width}}},
              {"frame", frame},
              {"p_terms", pt},
              {"f_terms", ft},
              {"residual_00", m.residual(0, 0)}};
}

std::vector<CheckReport> verify_pipeline(const Pipeline& p) {
  VerifyInputs in;
  in.spec = &p.spec;
  in.aux = &p.aux;
  in.assignment = &p.assignment;
  in.model = p.kernel.get();
  return run_verification(in, p.config.verify);
}

json verify_report(const std::vector<CheckReport>& checks) {
  json list = json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    list.push_back({{"name", c.name},
                    {"status", c.pass ? "pass" : "fail"},
                    {"measured", c.measured},
                    {"bound", c.bound},
                    {"tolerance", c.tolerance},
                    {"details", c.details},
                    {"argmax", c.argmax}});
  }
  return json{{"checks", list}, {"all_pass", all}};
}

std::string dump_report(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace carleman
