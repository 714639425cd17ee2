#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rtflab/engine.hpp"
#include "rtflab/errors.hpp"
#include "rtflab/flsuite.hpp"
#include "rtflab/geom.hpp"

using namespace rtflab;

namespace {

bool has_failing_witness(const SuiteResult& r, const char* needle = "") {
  for (const auto& c : r.cases)
    if (!c.pass && c.witness.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("unit and generator suite over representative grids") {
  for (long q : {3, 2}) {
    const FqField& F = FqField::get(static_cast<int>(q), 1);
    SuiteResult r = verify_FL(F, {0, 2}, -4, 4, 2, 11);
    CHECK(r.suite == "fl");
    CHECK(r.total() > 0);
    CHECK(r.passed() == r.total());
    CHECK(r.pass());
  }
}

TEST_CASE("empty grid yields an empty summary") {
  const FqField& F = FqField::get(3, 1);
  SuiteResult r = verify_FL(F, {}, -2, 2, 1, 1);
  CHECK(r.total() == 0);
  CHECK(r.passed() == 0);
  CHECK(r.pass());
}

TEST_CASE("an injected mismatch is reported with a witness") {
  const FqField& F = FqField::get(3, 1);
  SuiteResult clean = verify_FL(F, {0}, -2, 2, 1, 7);
  REQUIRE(clean.pass());
  SuiteResult r = verify_FL(F, {0}, -2, 2, 1, 7, {}, 0);
  CHECK_FALSE(r.pass());
  CHECK(r.passed() == r.total() - 1);
  CHECK_FALSE(r.cases[0].pass);
  CHECK_FALSE(r.cases[0].witness.empty());
}

TEST_CASE("derivative identity suite") {
  const FqField& F = FqField::get(3, 1);
  SuiteResult r = verify_AFL(F, {0, 2}, {-3, -1, 1, 3}, 1, 3);
  CHECK(r.total() > 0);
  CHECK(r.pass());
  CHECK_THROWS_AS(verify_AFL(FqField::get(2, 1), {0}, {1}, 1, 1), ConfigError);
}

TEST_CASE("trace ball matching suite over both flavors") {
  const FqField& F = FqField::get(3, 1);
  for (auto flavor : {ExtFlavor::Unramified, ExtFlavor::RamifiedTame}) {
    SuiteResult r = verify_matching(F, flavor, 1, 1, 5);
    CHECK(r.total() > 0);
    CHECK(r.pass());
  }
  CHECK_THROWS_AS(verify_matching(F, ExtFlavor::Unramified, 0, 1, 1), ConfigError);
  CHECK_THROWS_AS(verify_matching(FqField::get(2, 1), ExtFlavor::RamifiedTame, 1, 1, 1),
                  ConfigError);
}

TEST_CASE("split matching suite") {
  for (long q : {2, 3}) {
    const FqField& F = FqField::get(static_cast<int>(q), 1);
    SuiteResult r = verify_split_matching(F, 12, 17);
    CHECK(r.total() == 12);
    CHECK(r.pass());
    CHECK(r.warning.empty());
  }
}

TEST_CASE("gauss sum suite") {
  for (auto [p, k] : {std::pair{3, 1}, {3, 2}}) {
    SuiteResult r = verify_gauss(FqField::get(p, k));
    CHECK(r.total() > 0);
    CHECK(r.pass());
  }
}

TEST_CASE("metric identity suite") {
  const FqField& F = FqField::get(3, 1);
  SuiteResult u = verify_minf(F, ExtFlavor::Unramified, 30, 9);
  CHECK(u.total() == 30);
  CHECK(u.pass());
  CHECK(u.warning.empty());
  SuiteResult r = verify_minf(F, ExtFlavor::RamifiedTame, 10, 9);
  CHECK(r.pass());
  CHECK_FALSE(r.warning.empty());
}

TEST_CASE("multiplicity axiom suites") {
  const FqField& F = FqField::get(3, 1);
  SuiteResult good = verify_multiplicity_axioms(F, unramified_multiplicity_candidate(), 2, 8, 13);
  CHECK(good.total() > 0);
  CHECK(good.pass());

  SuiteResult zero = verify_multiplicity_axioms(F, zero_multiplicity_candidate(), 2, 8, 13);
  CHECK(zero.pass());
  CHECK_FALSE(zero.warning.empty());

  SuiteResult bad = verify_multiplicity_axioms(F, det_violating_candidate(), 2, 8, 13);
  CHECK_FALSE(bad.pass());
  CHECK(has_failing_witness(bad, "(b)"));
}

TEST_CASE("cell index is invariant under unit translations") {
  const FqField& F = FqField::get(3, 1);
  std::mt19937_64 rng(29);
  LocalElem zero = LocalElem::zero_of(F);
  auto random_k = [&]() {
    while (true) {
      Mat2F g;
      for (int i = 0; i < 4; ++i)
        g.m[i] = random_unit(F, rng, 3).shifted(static_cast<int>(rng() % 3));
      LocalElem det = mat_det(g);
      if (!det.zero && det.v() == 0) return g;
    }
  };
  for (int c = 0; c <= 2; ++c) {
    Mat2F hc{LocalElem::one(F), zero, zero, LocalElem::t_pow(F, c)};
    for (int i = 0; i < 5; ++i) CHECK(cartan_c(mat_mul(random_k(), mat_mul(hc, random_k()))) == c);
  }
}

TEST_CASE("multiplicity value on the maximal cell") {
  for (long q : {2, 3, 5}) {
    for (int v = 1; v <= 9; v += 2)
      CHECK(multiplicity_value(q, 0, v) == mpq_class(v + 1) / 2);
    // deeper cells scale down by the shell index
    CHECK(multiplicity_value(q, 2, 5) == multiplicity_value(q, 1, 5) / q);
  }
}
