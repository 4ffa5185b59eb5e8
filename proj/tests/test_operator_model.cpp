#include <cmath>
#include <numbers>

#include "carleman/operator_model.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace carleman;
using nlohmann::json;

namespace {

CMatrix projector(Index dim, const std::vector<Index>& idx) {
  CMatrix e = CMatrix::Zero(dim, dim);
  for (Index n : idx) e(n, n) = 1.0;
  return e;
}

json diag_rule(int dim, json even, json odd, json nulls = "odd") {
  return json{{"dim", dim},
              {"matrix", {{"kind", "diagonal_rule"}, {"even", even}, {"odd", odd}}},
              {"null_indices", nulls}};
}

}  // namespace

TEST_CASE("matrix kinds load with 1-based indices") {
  const auto sp = load_operator(json{{"dim", 3},
                                     {"matrix", {{"kind", "sparse"}, {"entries", {{1, 3, 0.5, -2.0}, {2, 2, 4.0}}}}},
                                     {"null_indices", {1}}});
  const CMatrix a = test::dense(sp.matrix);
  CHECK(a(0, 2) == Complex(0.5, -2.0));
  CHECK(a(1, 1) == Complex(4.0, 0.0));
  CHECK(a.cwiseAbs().sum() == doctest::Approx(std::abs(Complex(0.5, -2.0)) + 4.0));
  CHECK(sp.null_indices == std::vector<Index>{0});
  CHECK(sp.perp_indices == std::vector<Index>{1, 2});
  // ||S* f_n|| is the norm of row n
  CHECK(sp.adjoint_basis_norm(0) == doctest::Approx(std::abs(Complex(0.5, -2.0))));
  CHECK(sp.adjoint_basis_norm(2) == 0.0);

  const auto dr = load_operator(diag_rule(6, {{"law", "linear"}, {"scale", 2.0}}, {{"law", "geometric"}, {"ratio", 0.5}}));
  const CMatrix d = test::dense(dr.matrix);
  // positions 1..6: odd k = pos/2 -> 0.5^k, even -> 2 * pos/2
  const double expect[] = {1.0, 2.0, 0.5, 4.0, 0.25, 6.0};
  for (int n = 0; n < 6; ++n) CHECK(d(n, n).real() == doctest::Approx(expect[n]));
  CHECK(dr.null_indices == std::vector<Index>{0, 2, 4});

  const auto banded = load_operator(json{
      {"dim", 4},
      {"matrix", {{"kind", "banded"}, {"bands", {{{"offset", 0}, {"re", {1, 2, 3, 4}}}, {{"offset", 1}, {"re", {5, 6, 7}}}}}}},
      {"null_indices", "even"}});
  const CMatrix b = test::dense(banded.matrix);
  CHECK(b(0, 0).real() == 1.0);
  CHECK(b(0, 1).real() == 5.0);
  CHECK(b(2, 3).real() == 7.0);
  CHECK(b(1, 0) == Complex(0.0));

  const auto rd1 = load_operator(json{{"dim", 5}, {"matrix", {{"kind", "random_dense"}, {"seed", 4}}}, {"null_indices", "all"}});
  const auto rd2 = load_operator(json{{"dim", 5}, {"matrix", {{"kind", "random_dense"}, {"seed", 4}}}, {"null_indices", "all"}});
  CHECK(test::dense(rd1.matrix) == test::dense(rd2.matrix));
  CHECK(rd1.perp_indices.empty());
  CHECK_FALSE(rd1.warnings.empty());
}

TEST_CASE("bad operator documents fail with their codes") {
  auto code = [](const json& j) {
    try {
      load_operator(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode{};
  };
  const json ok = json{{"dim", 2}, {"matrix", {{"kind", "zero"}}}, {"null_indices", {1}}};
  CHECK_NOTHROW(load_operator(ok));
  json j = ok;
  j["matrix"]["kind"] = "mystery";
  CHECK(code(j) == ErrorCode::parse);
  j = ok;
  j["null_indices"] = {3};
  CHECK(code(j) == ErrorCode::out_of_range);
  j = ok;
  j["null_indices"] = {1, 1};
  CHECK(code(j) == ErrorCode::invalid_argument);
  j = ok;
  j["perp_indices"] = {1};
  CHECK(code(j) == ErrorCode::invalid_argument);
  j = ok;
  j.erase("dim");
  CHECK(code(j) == ErrorCode::parse);
  j = ok;
  j["matrix"] = {{"kind", "sparse"}, {"entries", {{1, 9, 1.0}}}};
  CHECK(code(j) == ErrorCode::out_of_range);
  CHECK_THROWS_AS(load_operator(std::string_view("{not json")), Error);

  SparseC inf(2, 2);
  inf.insert(0, 0) = Complex(INFINITY, 0);
  try {
    make_operator(inf, {0});
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::numeric);
  }
}

TEST_CASE("split reassembles S and matches the projector products") {
  for (const char* name : {"random_dense", "diagonal_mixed", "rank1"}) {
    const auto spec = load_operator(test::config(name));
    const CMatrix s = test::dense(spec.matrix);
    const CMatrix e = projector(spec.dim, spec.null_indices);
    const CMatrix one = CMatrix::Identity(spec.dim, spec.dim);
    const auto parts = split(spec);
    const CMatrix J = test::dense(parts.J), Q = test::dense(parts.Q);
    CHECK((J - s.adjoint() * e).norm() <= 1e-14 * (1 + s.norm()));
    CHECK((Q - (one - e) * s).norm() <= 1e-14 * (1 + s.norm()));
    CHECK((Q + J.adjoint() - s).norm() <= 1e-14 * (1 + s.norm()));
  }
}

TEST_CASE("Gamma, z and the Hilbert-Schmidt sum") {
  const auto spec = load_operator(test::config("random_dense"));
  const auto g = gamma_operator(spec);
  const CMatrix s = test::dense(spec.matrix);
  CMatrix lambda = CMatrix::Zero(spec.dim, spec.dim);
  double hs = 0.0;
  for (std::size_t k = 0; k < spec.perp_indices.size(); ++k) {
    const Index n = spec.perp_indices[k];
    const double z = s.row(n).norm() + 1.0;
    CHECK(g.z_perp[k] == doctest::Approx(z).epsilon(1e-14));
    lambda(n, n) = 1.0 / ((k + 1) * z);
  }
  const CMatrix gamma = s.adjoint() * lambda;
  for (Index n = 0; n < spec.dim; ++n) hs += (gamma.adjoint() * CMatrix::Identity(spec.dim, spec.dim).col(n)).squaredNorm();
  CHECK((test::dense(g.Gamma) - gamma).norm() <= 1e-14);
  CHECK(g.hs_sum == doctest::Approx(hs).epsilon(1e-13));
  CHECK(g.hs_sum <= std::numbers::pi * std::numbers::pi / 6);

  // S* e_k^perp = e_k^perp: every z is 2 and the sum is sum_k 1 / (4 k^2)
  const auto id = load_operator(diag_rule(400, {{"law", "constant"}}, {{"law", "zero"}}));
  const auto gi = gamma_operator(id);
  double direct = 0.0;
  for (int k = 1; k <= 200; ++k) direct += 1.0 / (4.0 * k * k);
  CHECK(gi.hs_sum == doctest::Approx(direct).epsilon(1e-13));
  for (double z : gi.z_perp) CHECK(z == 2.0);

  CVector f = CVector::Zero(spec.dim);
  f(1) = Complex(0.6, 0.0);
  f(2) = Complex(0.0, 0.8);
  CHECK(z_value(spec, f) == doctest::Approx((s.adjoint() * f).norm() + 1.0));
}

TEST_CASE("d(h) from its three norms") {
  const auto spec = load_operator(test::config("random_dense"));
  const auto aux = build_aux(spec);
  const CMatrix s = test::dense(spec.matrix);
  const CMatrix e = projector(spec.dim, spec.null_indices);
  const CMatrix J = s.adjoint() * e;
  const CMatrix gamma = test::dense(aux.Gamma);
  Rng rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    CVector h(spec.dim);
    for (Index n = 0; n < spec.dim; ++n) h(n) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double expect = std::pow((J * h).norm(), 0.25) + std::pow((J.adjoint() * h).norm(), 0.25) +
                          (gamma.adjoint() * h).norm();
    CHECK(d_value(aux, h) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK_THROWS_AS(d_value(aux, CVector::Zero(2)), Error);
}

TEST_CASE("null-sequence partial sums follow the geometric closed form") {
  // odd positions carry 2^{-k}, k = 0, 1, ...; terms are 2^{-k/4}
  const int n_null = 40;
  const auto spec = load_operator(diag_rule(2 * n_null, {{"law", "linear"}}, {{"law", "geometric"}, {"ratio", 0.5}}));
  const auto rep = validate_null_sequence(spec, 0.25, 8);
  const double q = std::pow(2.0, -0.25);
  REQUIRE(rep.series.partial_sums.size() == n_null);
  for (int m = 1; m <= n_null; ++m)
    CHECK(rep.series.partial_sums[m - 1] == doctest::Approx((1 - std::pow(q, m)) / (1 - q)).epsilon(1e-13));
  CHECK(rep.series.model == "geometric");
  CHECK(1.0 / (1 - q) - 1.0 == doctest::Approx(1.0 / (std::pow(2.0, 0.25) - 1)).epsilon(1e-14));
  CHECK(1.0 / (std::pow(2.0, 0.25) - 1) == doctest::Approx(5.2852).epsilon(1e-4));

  // zero operator: every term vanishes
  const auto zero = validate_null_sequence(load_operator(test::config("zero")));
  CHECK(zero.series.model == "zero");
  CHECK(zero.series.total() == 0.0);
  CHECK_THROWS_AS(validate_null_sequence(spec, 0.0), Error);
}
