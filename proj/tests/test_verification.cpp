#include <cmath>
#include <numbers>

#include "carleman/verification.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace carleman;

TEST_CASE("golub-welsch rule") {
  const auto [x, w] = golub_welsch(10);
  double sum = 0.0;
  for (double v : w) sum += v;
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  for (std::size_t m = 1; m < x.size(); ++m) CHECK(x[m - 1] < x[m]);
  double x18 = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) x18 += w[m] * std::pow(x[m], 18);
  CHECK(x18 == doctest::Approx(2.0 / 19).epsilon(1e-13));
  CHECK_THROWS_AS(golub_welsch(0), Error);
}

TEST_CASE("harness grid resolves narrow and wide features") {
  const auto g = harness_grid(1.0 / 256, 32, 4096, 20);
  double narrow = 0.0, wide = 0.0;
  for (std::size_t q = 0; q < g.nodes.size(); ++q) {
    narrow += g.weights[q] * std::exp(-std::pow(100 * g.nodes[q], 2));
    wide += g.weights[q] * std::exp(-std::pow(g.nodes[q] / 500, 2));
  }
  CHECK(narrow == doctest::Approx(std::sqrt(std::numbers::pi) / 100).epsilon(1e-12));
  CHECK(wide == doctest::Approx(500 * std::sqrt(std::numbers::pi)).epsilon(1e-12));
  CHECK_THROWS_AS(harness_grid(0, 32, 1, 4), Error);
}

TEST_CASE("checks pass on a sound pipeline and report in a fixed order") {
  const auto p = test::pipeline("diagonal_mixed");
  VerifyInputs in{&p->spec, &p->aux, &p->assignment, p->kernel.get()};
  const auto reports = run_verification(in, p->config.verify);
  const std::vector<std::string> names{"orthonormality",   "hilbert_schmidt_bound", "supnorm_certificates",
                                       "sumrk_certificates", "gamma_route",         "unitary_equivalence",
                                       "smoothness",        "vanishing_at_infinity", "carleman_row_norms"};
  REQUIRE(reports.size() == names.size());
  for (std::size_t n = 0; n < names.size(); ++n) {
    CAPTURE(names[n]);
    CHECK(reports[n].name == names[n]);
    CHECK(reports[n].pass);
  }
}

TEST_CASE("orthonormality notices a truncated horizon") {
  VerifyOptions o;
  o.gram_set = {{0, 0}, {-2, 0}};
  CHECK(check_orthonormality(test::wavelet(), o).pass);
  o.gram_horizon = 4;
  const auto r = check_orthonormality(test::wavelet(), o);
  CHECK_FALSE(r.pass);
  CHECK(r.measured > 1e-3);
}

TEST_CASE("Hilbert-Schmidt check recomputes and compares") {
  const auto spec = load_operator(test::config("random_dense"));
  auto aux = build_aux(spec);
  CHECK(check_hs_bound(spec, aux).pass);
  aux.hs_sum *= 1.01;
  CHECK_FALSE(check_hs_bound(spec, aux).pass);
  // sum_k 1/(k z)^2 ||S* e||^2 with a huge row stays near sum 1/k^2
  const auto big = load_operator(nlohmann::json{
      {"dim", 200},
      {"matrix", {{"kind", "diagonal_rule"}, {"even", {{"law", "constant"}, {"scale", 1e9}}}, {"odd", {{"law", "zero"}}}}},
      {"null_indices", "odd"}});
  const auto r = check_hs_bound(big, build_aux(big));
  CHECK(r.pass);
  CHECK(r.measured < std::numbers::pi * std::numbers::pi / 6);
}

TEST_CASE("condition check flags a shallow h_{n(k)}") {
  const auto p = test::pipeline("diagonal_mixed");
  CHECK(check_conditions(p->assignment, p->aux).pass);
  auto broken = p->assignment;
  broken.h_enum[broken.nk[0] - 1] = 0;  // (j, k) = (0, 0): D = 1
  const auto r = check_conditions(broken, p->aux);
  CHECK_FALSE(r.pass);
  CHECK(r.measured >= 1.0);
}

TEST_CASE("sup-norm certificates hold on the enumeration") {
  const auto p = test::pipeline("zero");
  const auto r = check_supnorm_table(p->assignment, *p->wavelet, p->config.verify);
  CHECK(r.pass);
  CHECK(r.measured == 0.0);
}

TEST_CASE("zero kernel") {
  const auto p = test::pipeline("zero");
  const auto v = check_vanishing(*p->kernel, p->config.verify);
  CHECK(v.pass);
  CHECK(v.measured == 0.0);
  CHECK(check_smoothness(*p->kernel, p->config.verify).pass);
  CHECK(check_carleman(*p->kernel, p->config.verify).pass);
}

TEST_CASE("smoothness and Carleman checks on a dense operator") {
  const auto p = test::pipeline("random_dense");
  const auto s = check_smoothness(*p->kernel, p->config.verify);
  CHECK(s.pass);
  CHECK(s.argmax.size() == 4);
  const auto c = check_carleman(*p->kernel, p->config.verify);
  CHECK(c.pass);
  const auto e = check_equivalence(*p->kernel, p->spec, p->config.verify);
  CHECK(e.pass);
  CHECK(e.measured <= 1e-4);
}
