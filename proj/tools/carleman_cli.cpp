// carleman: validate | build | eval | verify on one config document.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "carleman.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Failure {
  int code;
  std::string message;
};

void check(ck_status st, const char* what) {
  if (st != CK_OK) throw Failure{2, std::string(what) + ": " + ck_last_error()};
}

std::string take(char* s) {
  std::string out(s);
  ck_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{2, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{2, "cannot write " + path.string()};
}

struct Axis {
  double lo, hi;
  std::size_t n;
  std::vector<double> points() const {
    std::vector<double> v(n);
    for (std::size_t a = 0; a < n; ++a) v[a] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(a) / (n - 1);
    return v;
  }
};

Axis parse_axis(const std::string& text) {
  Axis ax{};
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> ax.lo >> c1 >> ax.hi >> c2 >> ax.n) || c1 != ':' || c2 != ':' || ax.n == 0 || !in.eof())
    throw Failure{2, "bad grid axis '" + text + "', expected lo:hi:n"};
  return ax;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Pipeline {
  ck_pipeline* p = nullptr;
  ~Pipeline() { ck_pipeline_free(p); }
};

struct Options {
  std::string config;
  std::string out;
  std::string grid = "-4:4:81,-4:4:81";
  std::string deriv = "0,0";
  int threads = 1;
  long long seed = -1;
  bool heatmap = false;
  int sample_order = -1;
};

// Config text with environment overrides applied, plus the output directory.
std::pair<std::string, fs::path> load(Options& o) {
  char* merged = nullptr;
  check(ck_config_apply_env(read_file(o.config).c_str(), &merged), "config");
  std::string text = take(merged);
  const auto doc = nlohmann::json::parse(text);
  std::string dir = o.out;
  const auto output = doc.value("output", nlohmann::json::object());
  if (dir.empty()) dir = output.value("dir", std::string("out"));
  o.heatmap = o.heatmap || output.value("heatmap", false);
  fs::create_directories(dir);
  return {text, fs::path(dir)};
}

int cmd_validate(Options& o) {
  const auto [text, dir] = load(o);
  char* report = nullptr;
  int pass = 0;
  check(ck_validate(text.c_str(), &report, &pass), "validate");
  const std::string r = take(report);
  write_file(dir / "validation.json", r);
  std::cout << r;
  return pass ? 0 : 1;
}

int cmd_build(Options& o) {
  const auto [text, dir] = load(o);
  Pipeline pl;
  check(ck_pipeline_build(text.c_str(), &pl.p), "build");
  char* model = nullptr;
  char* report = nullptr;
  check(ck_pipeline_model_text(pl.p, &model), "model");
  check(ck_pipeline_assignment_report(pl.p, &report), "assignment");
  write_file(dir / "model.json", take(model));
  write_file(dir / "assignment.json", take(report));
  if (o.sample_order >= 0) {
    char* table = nullptr;
    check(ck_wavelet_sample_table(pl.p, o.sample_order, -8.0, 8.0, 1025, &table), "sample table");
    write_file(dir / ("wavelet_w" + std::to_string(o.sample_order) + ".csv"), take(table));
  }
  size_t n = 0;
  check(ck_pipeline_size(pl.p, &n), "size");
  std::cout << "model with frame size " << n << " written to " << dir.string() << "\n";
  return 0;
}

int cmd_eval(Options& o) {
  const auto [text, dir] = load(o);
  const auto comma = o.grid.find(',');
  if (comma == std::string::npos) throw Failure{2, "grid needs two axes 's0:s1:ns,t0:t1:nt'"};
  const std::vector<double> s = parse_axis(o.grid.substr(0, comma)).points();
  const std::vector<double> t = parse_axis(o.grid.substr(comma + 1)).points();
  int i = 0, j = 0;
  char c = 0;
  std::istringstream din(o.deriv);
  if (!(din >> i >> c >> j) || c != ',' || !din.eof()) throw Failure{2, "bad --deriv '" + o.deriv + "', expected i,j"};

  Pipeline pl;
  check(ck_pipeline_build(text.c_str(), &pl.p), "build");
  double re0 = 0, im0 = 0, residual = 0;
  check(ck_kernel_eval(pl.p, i, j, 0.0, 0.0, &re0, &im0, &residual), "eval");

  std::vector<double> re(s.size() * t.size()), im(s.size() * t.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(o.threads, s.size()));
  std::vector<ck_status> status(workers, CK_OK);
  std::vector<std::string> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      // contiguous block of s rows per worker
      const std::size_t a0 = s.size() * w / workers, a1 = s.size() * (w + 1) / workers;
      status[w] = ck_kernel_eval_grid(pl.p, i, j, s.data() + a0, a1 - a0, t.data(), t.size(),
                                      re.data() + a0 * t.size(), im.data() + a0 * t.size());
      if (status[w] != CK_OK) errors[w] = ck_last_error();
    });
  for (auto& th : pool) th.join();
  for (std::size_t w = 0; w < workers; ++w)
    if (status[w] != CK_OK) throw Failure{2, "eval: " + errors[w]};

  std::ostringstream csv;
  csv << "s,t,ReK,ImK,residual\n";
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < t.size(); ++b) {
      const std::size_t q = a * t.size() + b;
      csv << fmt17(s[a]) << ',' << fmt17(t[b]) << ',' << fmt17(re[q]) << ',' << fmt17(im[q]) << ','
          << fmt17(residual) << '\n';
    }
  write_file(dir / "grid.csv", csv.str());

  if (o.heatmap) {
    double top = 0.0;
    for (std::size_t q = 0; q < re.size(); ++q) top = std::max(top, std::hypot(re[q], im[q]));
    std::ostringstream pgm;
    pgm << "P2\n" << t.size() << ' ' << s.size() << "\n255\n";
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = 0; b < t.size(); ++b) {
        const std::size_t q = a * t.size() + b;
        const double v = top > 0.0 ? std::hypot(re[q], im[q]) / top : 0.0;
        pgm << (b ? " " : "") << static_cast<int>(std::lround(255.0 * v));
      }
      pgm << '\n';
    }
    write_file(dir / "heatmap.pgm", pgm.str());
  }
  std::cout << s.size() * t.size() << " values written to " << (dir / "grid.csv").string() << "\n";
  return 0;
}

int cmd_verify(Options& o) {
  const auto [text, dir] = load(o);
  std::uint64_t seed = 1;
  if (o.seed >= 0) {
    seed = static_cast<std::uint64_t>(o.seed);
  } else {
    const auto doc = nlohmann::json::parse(text);
    if (doc.contains("seed")) seed = doc["seed"].get<std::uint64_t>();
  }
  Pipeline pl;
  check(ck_pipeline_build(text.c_str(), &pl.p), "build");
  char* report = nullptr;
  int all = 0;
  check(ck_pipeline_verify(pl.p, seed, &report, &all), "verify");
  const std::string r = take(report);
  write_file(dir / "verify.json", r);
  const auto doc = nlohmann::json::parse(r);
  for (const auto& c : doc.at("checks"))
    std::cout << (c["status"] == "pass" ? "PASS " : "FAIL ") << c["name"].get<std::string>() << " measured "
              << c["measured"].dump() << " bound " << c["bound"].dump() << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smooth Carleman kernels for truncated closed operators"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "config document (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (default: output.dir of the config)");
  };
  auto* validate = app.add_subcommand("validate", "check the operator description");
  auto* build = app.add_subcommand("build", "build the kernel model and assignment report");
  auto* eval = app.add_subcommand("eval", "evaluate the kernel on a grid");
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  for (auto* sub : {validate, build, eval, verify}) common(sub);
  build->add_option("--sample-table", o.sample_order, "also write a wavelet sample table of this order");
  eval->add_option("--grid", o.grid, "s0:s1:ns,t0:t1:nt");
  eval->add_option("--deriv", o.deriv, "derivative orders i,j");
  eval->add_option("--threads", o.threads, "grid workers")->check(CLI::PositiveNumber);
  eval->add_flag("--heatmap", o.heatmap, "also write a graymap of |K|");
  verify->add_option("--seed", o.seed, "seed for randomized checks")->check(CLI::NonNegativeNumber);
  verify->add_option("--threads", o.threads, "accepted for symmetry; checks run sequentially");
  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(o);
    if (*build) return cmd_build(o);
    if (*eval) return cmd_eval(o);
    return cmd_verify(o);
  } catch (const Failure& f) {
    std::cerr << "carleman: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "carleman: " << e.what() << "\n";
    return 2;
  }
}
