#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "carleman.h"
#include "doctest.h"

namespace {

std::string config_text(const char* name) {
  std::ifstream in(std::string(CONFIG_DIR) + "/" + name + ".json");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string take(char* s) {
  std::string out(s);
  ck_string_free(s);
  return out;
}

struct Handle {
  ck_pipeline* p = nullptr;
  ~Handle() { ck_pipeline_free(p); }
};

}  // namespace

TEST_CASE("version and argument errors") {
  CHECK(std::string(ck_version()) == "1.0.0");
  CHECK(ck_pipeline_build(nullptr, nullptr) == CK_INVALID_ARGUMENT);
  CHECK(std::string(ck_last_error()).size() > 0);
  ck_pipeline* p = nullptr;
  CHECK(ck_pipeline_build("{oops", &p) == CK_PARSE);
  CHECK(p == nullptr);
  CHECK(ck_pipeline_build(R"({"operator": {"dim": 2, "matrix": {"kind": "zero"}, "null_indices": [5]}})", &p) == CK_RANGE);
  CHECK(ck_pipeline_build(R"({"operator": {"dim": 2, "matrix": {"kind": "zero"}, "null_indices": [1]}, "bogus": 1})", &p) ==
        CK_PARSE);
  CHECK(ck_pipeline_build(R"({"operator": {"dim": 4, "matrix": {"kind": "zero"}, "null_indices": [1]},
                              "assignment": {"j_range": [-10, 2]}})",
                          &p) == CK_BUDGET);
  CHECK(std::string(ck_last_error()).find("budget") != std::string::npos);
  ck_pipeline_free(nullptr);
  ck_operator_free(nullptr);
}

TEST_CASE("operator handle") {
  ck_operator* op = nullptr;
  REQUIRE(ck_operator_load(config_text("rank1").c_str(), &op) == CK_OK);
  size_t dim = 0;
  CHECK(ck_operator_dim(op, &dim) == CK_OK);
  CHECK(dim == 8);
  ck_operator_free(op);
}

TEST_CASE("validate report") {
  char* report = nullptr;
  int pass = -1;
  REQUIRE(ck_validate(config_text("diagonal_mixed").c_str(), &report, &pass) == CK_OK);
  const std::string r = take(report);
  CHECK(pass == 1);
  CHECK(r.find("\"hilbert_schmidt\"") != std::string::npos);
}

TEST_CASE("build, evaluate, and read back") {
  Handle h;
  REQUIRE(ck_pipeline_build(config_text("random_dense").c_str(), &h.p) == CK_OK);
  size_t n = 0;
  REQUIRE(ck_pipeline_size(h.p, &n) == CK_OK);
  CHECK(n == 6);

  char* model = nullptr;
  REQUIRE(ck_pipeline_model_text(h.p, &model) == CK_OK);
  CHECK(take(model).find("\"carleman-kernel-model\"") != std::string::npos);
  char* assignment = nullptr;
  REQUIRE(ck_pipeline_assignment_report(h.p, &assignment) == CK_OK);
  CHECK(take(assignment).find("\"pairing\"") != std::string::npos);

  const std::vector<double> s{-1.0, 0.0, 0.5}, t{-0.25, 0.75};
  std::vector<double> re(6), im(6);
  REQUIRE(ck_kernel_eval_grid(h.p, 1, 0, s.data(), s.size(), t.data(), t.size(), re.data(), im.data()) == CK_OK);
  for (size_t a = 0; a < s.size(); ++a)
    for (size_t b = 0; b < t.size(); ++b) {
      double r1 = 0, i1 = 0;
      REQUIRE(ck_kernel_eval(h.p, 1, 0, s[a], t[b], &r1, &i1, nullptr) == CK_OK);
      CHECK(r1 == re[a * t.size() + b]);
      CHECK(i1 == im[a * t.size() + b]);
    }
  double r = 0, i = 0, residual = -1;
  CHECK(ck_kernel_eval(h.p, 0, 0, 0.1, 0.2, &r, &i, &residual) == CK_OK);
  CHECK(residual == 0.0);
  CHECK(ck_kernel_eval(h.p, 40, 0, 0.1, 0.2, &r, &i, nullptr) == CK_RANGE);

  double norm = 0;
  CHECK(ck_carleman_function(h.p, 0.3, nullptr, 0, &norm) == CK_OK);
  std::vector<double> coeffs(2 * n);
  CHECK(ck_carleman_function(h.p, 0.3, coeffs.data(), 2, &norm) == CK_INVALID_ARGUMENT);
  REQUIRE(ck_carleman_function(h.p, 0.3, coeffs.data(), coeffs.size(), &norm) == CK_OK);
  double sq = 0.0;
  for (double c : coeffs) sq += c * c;
  CHECK(std::sqrt(sq) == doctest::Approx(norm).epsilon(1e-14));

  char* table = nullptr;
  REQUIRE(ck_wavelet_sample_table(h.p, 0, -1, 1, 5, &table) == CK_OK);
  CHECK(take(table).rfind("s,w0\n", 0) == 0);
}

TEST_CASE("concurrent evaluation on one handle") {
  Handle h;
  REQUIRE(ck_pipeline_build(config_text("diagonal_mixed").c_str(), &h.p) == CK_OK);
  std::vector<double> s(40), t(40);
  for (int m = 0; m < 40; ++m) s[m] = t[m] = -2.0 + 0.1 * m;
  std::vector<double> re1(1600), im1(1600), re2(1600), im2(1600);
  REQUIRE(ck_kernel_eval_grid(h.p, 0, 1, s.data(), 40, t.data(), 40, re1.data(), im1.data()) == CK_OK);
  std::vector<std::thread> pool;
  std::vector<ck_status> st(4, CK_INTERNAL);
  for (int w = 0; w < 4; ++w)
    pool.emplace_back([&, w] {
      st[w] = ck_kernel_eval_grid(h.p, 0, 1, s.data() + 10 * w, 10, t.data(), 40, re2.data() + 400 * w, im2.data() + 400 * w);
    });
  for (auto& th : pool) th.join();
  for (auto v : st) CHECK(v == CK_OK);
  CHECK(re1 == re2);
  CHECK(im1 == im2);
}

TEST_CASE("verify is deterministic and honours the seed") {
  Handle h;
  REQUIRE(ck_pipeline_build(config_text("zero").c_str(), &h.p) == CK_OK);
  char* a = nullptr;
  char* b = nullptr;
  int pa = 0, pb = 0;
  REQUIRE(ck_pipeline_verify(h.p, 5, &a, &pa) == CK_OK);
  REQUIRE(ck_pipeline_verify(h.p, 5, &b, &pb) == CK_OK);
  const std::string ra = take(a), rb = take(b);
  CHECK(ra == rb);
  CHECK(pa == 1);
  CHECK(ra.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("environment overrides through the C API") {
  setenv("CARLEMAN_OUTPUT__DIR", "from_env", 1);
  char* merged = nullptr;
  REQUIRE(ck_config_apply_env(config_text("zero").c_str(), &merged) == CK_OK);
  CHECK(take(merged).find("\"from_env\"") != std::string::npos);
  unsetenv("CARLEMAN_OUTPUT__DIR");
  CHECK(ck_config_apply_env("not json", &merged) == CK_PARSE);
}
