#include "carleman/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <set>

extern char** environ;

namespace carleman {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::parse, "config: " + what); }

// Reads keys of one table, rejecting any key it was not asked about.
class Table {
 public:
  Table(const json& doc, const char* name) : name_(name) {
    if (doc.contains(name)) {
      if (!doc.at(name).is_object()) bad(std::string("'") + name + "' must be a table");
      t_ = &doc.at(name);
    }
  }
  void done() const {
    if (!t_) return;
    for (const auto& [key, value] : t_->items())
      if (!seen_.count(key)) bad("unknown key '" + name_ + "." + key + "'");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!t_ || !t_->contains(key)) return;
    try {
      out = t_->at(key).get<T>();
    } catch (const json::exception&) {
      bad("'" + name_ + "." + key + "' has the wrong type");
    }
  }
  void positive(const char* key, double& out) {
    get(key, out);
    if (!(out > 0.0)) bad("'" + name_ + "." + key + "' must be positive");
  }
  void positive(const char* key, int& out) {
    get(key, out);
    if (out <= 0) bad("'" + name_ + "." + key + "' must be positive");
  }

 private:
  std::string name_;
  const json* t_ = nullptr;
  std::set<std::string> seen_;
};

}  // namespace

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) bad("document must be a table");
  static const std::set<std::string> top{"operator", "wavelet", "assignment", "truncation",
                                         "validation", "verify", "output", "seed"};
  for (const auto& [key, value] : doc.items())
    if (!top.count(key)) bad("unknown table '" + key + "'");
  if (!doc.contains("operator")) bad("missing 'operator' table");

  RunConfig c;
  c.operator_doc = doc.at("operator");
  if (doc.contains("seed")) {
    const json& sd = doc.at("seed");
    if (!sd.is_number_unsigned() && !(sd.is_number_integer() && sd.get<std::int64_t>() >= 0)) bad("'seed' must be a non-negative integer");
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  {
    Table t(doc, "wavelet");
    t.get("max_order", c.wavelet.max_order);
    if (c.wavelet.max_order < 0) bad("'wavelet.max_order' must be non-negative");
    t.positive("quad_order", c.wavelet.quad_order);
    t.positive("convergence_tol", c.wavelet.convergence_tol);
    t.positive("table_step", c.wavelet.table_step);
    t.positive("table_half_width", c.wavelet.table_half_width);
    t.positive("sup_horizon", c.wavelet.sup_horizon);
    t.positive("sup_step", c.wavelet.sup_step);
    t.done();
  }
  {
    Table t(doc, "assignment");
    t.get("i_max", c.assignment.i_max);
    if (c.assignment.i_max < 0) bad("'assignment.i_max' must be non-negative");
    t.get("budget", c.assignment.budget);
    std::vector<long> jr{c.assignment.j_lo, c.assignment.j_hi}, kr{c.assignment.k_lo, c.assignment.k_hi};
    t.get("j_range", jr);
    t.get("k_range", kr);
    if (jr.size() != 2 || kr.size() != 2 || jr[0] > jr[1] || kr[0] > kr[1])
      bad("'assignment.j_range' and 'k_range' are [lo, hi] with lo <= hi");
    c.assignment.j_lo = static_cast<int>(jr[0]);
    c.assignment.j_hi = static_cast<int>(jr[1]);
    c.assignment.k_lo = kr[0];
    c.assignment.k_hi = kr[1];
    t.get("order", c.assignment.order);
    if (c.assignment.order != "diagonal") bad("'assignment.order' supports only \"diagonal\"");
    t.get("d_scale", c.assignment.d_scale);
    if (c.assignment.d_scale < 0.0) bad("'assignment.d_scale' must be non-negative");
    t.done();
  }
  {
    Table t(doc, "truncation");
    t.get("k_p", c.truncation.k_p);
    t.get("k_f", c.truncation.k_f);
    t.get("rank_tol", c.rank_tol);
    if (c.rank_tol < 0.0) bad("'truncation.rank_tol' must be non-negative");
    t.done();
  }
  {
    Table t(doc, "validation");
    t.get("power", c.validation.power);
    if (!(c.validation.power > 0.0 && c.validation.power <= 1.0)) bad("'validation.power' must lie in (0, 1]");
    t.positive("tail_len", c.validation.tail_len);
    t.done();
  }
  {
    Table t(doc, "verify");
    VerifyOptions& v = c.verify;
    t.positive("gram_horizon", v.gram_horizon);
    t.positive("gram_panel", v.gram_panel);
    t.positive("gram_tol", v.gram_tol);
    t.get("sup_j_cap", v.sup_j_cap);
    t.get("sup_i_max", v.sup_i_max);
    t.positive("m_test", v.m_test);
    t.positive("equiv_tol", v.equiv_tol);
    t.positive("grading", v.grading);
    t.positive("panel_nodes", v.panel_nodes);
    t.positive("base_horizon", v.base_horizon);
    t.positive("smooth_points", v.smooth_points);
    t.positive("smooth_order", v.smooth_order);
    t.positive("smooth_tol", v.smooth_tol);
    t.positive("smooth_box", v.smooth_box);
    t.get("radii", v.radii);
    for (double r : v.radii)
      if (!(r > 0.0)) bad("'verify.radii' must be positive");
    t.positive("vanish_threshold", v.vanish_threshold);
    t.positive("vanish_cells", v.vanish_cells);
    t.positive("carleman_points", v.carleman_points);
    t.positive("carleman_tol", v.carleman_tol);
    t.positive("continuity_step", v.continuity_step);
    t.positive("continuity_tol", v.continuity_tol);
    t.done();
  }
  c.verify.seed = c.seed;
  {
    Table t(doc, "output");
    t.get("dir", c.output.dir);
    t.get("heatmap", c.output.heatmap);
    t.done();
  }
  return c;
}

RunConfig parse_run_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed config document: ") + e.what());
  }
  return parse_run_config(doc);
}

json RunConfig::to_json() const {
  const VerifyOptions& v = verify;
  return json{
      {"operator", operator_doc},
      {"seed", seed},
      {"wavelet",
       {{"max_order", wavelet.max_order},
        {"quad_order", wavelet.quad_order},
        {"convergence_tol", wavelet.convergence_tol},
        {"table_step", wavelet.table_step},
        {"table_half_width", wavelet.table_half_width},
        {"sup_horizon", wavelet.sup_horizon},
        {"sup_step", wavelet.sup_step}}},
      {"assignment",
       {{"i_max", assignment.i_max},
        {"budget", assignment.budget},
        {"j_range", {assignment.j_lo, assignment.j_hi}},
        {"k_range", {assignment.k_lo, assignment.k_hi}},
        {"order", assignment.order},
        {"d_scale", assignment.d_scale}}},
      {"truncation", {{"k_p", truncation.k_p}, {"k_f", truncation.k_f}, {"rank_tol", rank_tol}}},
      {"validation", {{"power", validation.power}, {"tail_len", validation.tail_len}}},
      {"verify",
       {{"gram_horizon", v.gram_horizon},     {"gram_panel", v.gram_panel},
        {"gram_tol", v.gram_tol},             {"sup_j_cap", v.sup_j_cap},
        {"sup_i_max", v.sup_i_max},           {"m_test", v.m_test},
        {"equiv_tol", v.equiv_tol},           {"grading", v.grading},
        {"panel_nodes", v.panel_nodes},       {"base_horizon", v.base_horizon},
        {"smooth_points", v.smooth_points},   {"smooth_order", v.smooth_order},
        {"smooth_tol", v.smooth_tol},         {"smooth_box", v.smooth_box},
        {"radii", v.radii},                   {"vanish_threshold", v.vanish_threshold},
        {"vanish_cells", v.vanish_cells},     {"carleman_points", v.carleman_points},
        {"carleman_tol", v.carleman_tol},     {"continuity_step", v.continuity_step},
        {"continuity_tol", v.continuity_tol}}},
      {"output", {{"dir", output.dir}, {"heatmap", output.heatmap}}},
  };
}

json apply_env_overrides(json doc, const std::map<std::string, std::string>& env) {
  static const std::string prefix = "CARLEMAN_";
  for (const auto& [name, value] : env) {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) continue;
    std::string path = name.substr(prefix.size());
    std::transform(path.begin(), path.end(), path.begin(), [](unsigned char ch) { return std::tolower(ch); });
    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
      const std::size_t cut = path.find("__", start);
      const std::string key = path.substr(start, cut == std::string::npos ? std::string::npos : cut - start);
      if (key.empty()) bad("malformed override variable " + name);
      if (!node->is_object()) bad("override " + name + " descends into a non-table value");
      if (cut == std::string::npos) {
        json parsed = json::parse(value, nullptr, false);
        (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
        break;
      }
      node = &(*node)[key];
      if (node->is_null()) *node = json::object();
      start = cut + 2;
    }
  }
  return doc;
}

std::map<std::string, std::string> carleman_environment() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e && *e; ++e) {
    const std::string entry(*e);
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    if (entry.rfind("CARLEMAN_", 0) == 0) out.emplace(entry.substr(0, eq), entry.substr(eq + 1));
  }
  return out;
}

}  // namespace carleman
