#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bornless/qstate.hpp"
#include "bornless/stories.hpp"
#include "oracles.hpp"

using namespace bornless;

TEST_CASE("born weights of the polarization states") {
  auto fam = ProjectorFamily::computational(2);
  CHECK(born_weight(ket_h(), fam["h"]) == doctest::Approx(1.0));
  CHECK(born_weight(ket_h(), fam["v"]) == doctest::Approx(0.0));
  CHECK(born_weight(ket_d(), fam["h"]) == doctest::Approx(0.5));
}

TEST_CASE("born_weight rejects malformed input") {
  auto fam3 = ProjectorFamily::computational(3);
  CHECK_THROWS_AS(born_weight(ket_h(), fam3["0"]), DimensionError);
  Ket unnormalized{Complex{1.0, 0.0}, Complex{1.0, 0.0}};
  CHECK_THROWS_AS(born_weight(unnormalized, ProjectorFamily::computational(2)["h"]), std::invalid_argument);
}

TEST_CASE("tensor powers") {
  Ket hh = tensor_power(ket_h(), 2);
  REQUIRE(hh.dim() == 4);
  CHECK(hh.amplitudes()(0) == Complex{1.0, 0.0});
  for (int i = 1; i < 4; ++i) CHECK(std::abs(hh.amplitudes()(i)) == 0.0);

  Ket dd = tensor_power(ket_d(), 2);
  for (int i = 0; i < 4; ++i) CHECK(dd.amplitudes()(i).real() == doctest::Approx(0.5));

  Ket unit = tensor_power(ket_h(), 0);
  CHECK(unit.dim() == 1);
  CHECK(unit.amplitudes()(0) == Complex{1.0, 0.0});
}

TEST_CASE("tensor_power guards the dense size") {
  CHECK_THROWS_AS(tensor_power(ket_d(), 21), DenseLimitError);
  try {
    tensor_power(ket_d(), 30);
  } catch (const DenseLimitError& e) {
    CHECK(std::string(e.what()).find("dense oracle limit") != std::string::npos);
  }
  CHECK_NOTHROW(tensor_power(ket_d(), 20));
}

TEST_CASE("validate_family") {
  auto fam = ProjectorFamily::computational(2);
  CHECK(validate_family(fam).valid());

  ProjectorFamily twice({"a", "b"}, {fam["h"], fam["h"]});
  auto rep = validate_family(twice);
  REQUIRE_FALSE(rep.valid());
  bool saw_completeness = false;
  for (const auto& v : rep.violations)
    if (v.invariant == "completeness") {
      saw_completeness = true;
      CHECK(v.max_residual == doctest::Approx(1.0));
    }
  CHECK(saw_completeness);

  ProjectorFamily alone({"h"}, {fam["h"]});
  auto rep2 = validate_family(alone);
  REQUIRE(rep2.violations.size() == 1);
  CHECK(rep2.violations[0].invariant == "completeness");
}

TEST_CASE("projector validation") {
  Matrix m(2, 2);
  m << 1, 1, 0, 0;
  CHECK_THROWS_AS(Projector::from_matrix(m), std::invalid_argument);  // not Hermitian
  Matrix twice = 2.0 * Matrix::Identity(2, 2);
  CHECK_THROWS_AS(Projector::from_matrix(twice), std::invalid_argument);  // not idempotent
  CHECK_NOTHROW(Projector::from_matrix(Matrix::Identity(3, 3)));
}

TEST_CASE("family labels are unique") {
  auto fam = ProjectorFamily::computational(2);
  CHECK_THROWS_AS(ProjectorFamily({"a", "a"}, {fam["h"], fam["v"]}), std::invalid_argument);
  CHECK_THROWS_AS(fam["x"], std::out_of_range);
}

TEST_CASE("property: Born weights over a family sum to one") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 2 + trial % 7;
    auto psi = oracle::random_ket(rng, dim);
    auto fam = oracle::random_family(rng, dim);
    REQUIRE(validate_family(fam).valid());
    double total = 0.0;
    for (std::size_t i = 0; i < fam.size(); ++i) total += born_weight(psi, fam.at(i));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("property: product rule for tensor powers") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 2 + trial % 2;
    const unsigned n = 1 + static_cast<unsigned>(trial % 4);
    auto psi = oracle::random_ket(rng, dim);
    auto fam = oracle::random_family(rng, dim);
    std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
    Projector prod = fam.at(pick(rng));
    double expected = born_weight(psi, prod);
    for (unsigned i = 1; i < n; ++i) {
      const auto& next = fam.at(pick(rng));
      prod = prod.tensor(next);
      expected *= born_weight(psi, next);
    }
    CHECK(std::abs(born_weight(tensor_power(psi, n), prod) - expected) <= 1e-9);
  }
}

TEST_CASE("property: tensor powers stay normalized") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    auto psi = oracle::random_ket(rng, 2 + trial % 3);
    const unsigned n = static_cast<unsigned>(trial % 9);
    CHECK(std::abs(tensor_power(psi, n).norm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("FockVector invariants") {
  const double s = 1.0 / std::sqrt(2.0);
  FockVector ok(ket_d(), {{0, Complex{s, 0.0}}, {3, Complex{0.0, s}}});
  CHECK(ok.coeff(3) == Complex{0.0, s});
  CHECK(ok.coeff(2) == Complex{});
  CHECK_THROWS_AS(FockVector(ket_d(), {{0, Complex{1.0, 0.0}}, {1, Complex{1.0, 0.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(FockVector(ket_d(), {{100, Complex{1.0, 0.0}}}), std::invalid_argument);
  CHECK_NOTHROW(FockVector(ket_d(), {{100, Complex{1.0, 0.0}}}, 100));
}
