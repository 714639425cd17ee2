#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "rtflab/chars.hpp"
#include "rtflab/cyclo.hpp"
#include "rtflab/errors.hpp"
#include "rtflab/fq.hpp"
#include "rtflab/local.hpp"

using namespace rtflab;

namespace {

LocalElem random_elem(const FqField& F, std::mt19937_64& rng, bool allow_zero = true) {
  std::uniform_int_distribution<int> vd(-3, 3), cd(0, F.q - 1), ld(1, 5);
  int len = ld(rng);
  std::vector<int> cs(len);
  for (auto& c : cs) c = cd(rng);
  LocalElem e = LocalElem::from_coeffs(F, vd(rng), cs);
  if (!allow_zero && e.is_exact_zero()) return LocalElem::one(F);
  return e;
}

}  // namespace

TEST_CASE("finite field laws") {
  for (auto [p, k] : {std::pair{2, 1}, {3, 1}, {2, 2}, {5, 1}, {2, 3}, {3, 2},
                      {2, 4}, {5, 2}, {3, 3}, {7, 2}, {2, 6}}) {
    const FqField& F = FqField::get(p, k);
    CHECK(F.q <= 4096);
    std::mt19937_64 rng(17 * F.q);
    std::uniform_int_distribution<int> d(0, F.q - 1);
    // generator has full order
    if (F.q > 2) {
      std::set<int> seen;
      int x = 1;
      for (int i = 0; i < F.q - 1; ++i) {
        seen.insert(x);
        x = F.mul(x, F.gen());
      }
      CHECK(x == 1);
      CHECK(static_cast<int>(seen.size()) == F.q - 1);
    }
    for (int it = 0; it < 200; ++it) {
      int a = d(rng), b = d(rng), c = d(rng);
      CHECK(F.add(a, b) == F.add(b, a));
      CHECK(F.mul(a, b) == F.mul(b, a));
      CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
      CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
      CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      CHECK(F.add(a, F.neg(a)) == 0);
      if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
      // Frobenius is an additive and multiplicative map
      CHECK(F.frob_pow(F.add(a, b), 1) == F.add(F.frob_pow(a, 1), F.frob_pow(b, 1)));
      CHECK(F.frob_pow(F.mul(a, b), 1) == F.mul(F.frob_pow(a, 1), F.frob_pow(b, 1)));
      // trace is additive and lands in F_p
      CHECK(F.trace_to_prime(a) < p);
      CHECK(F.trace_to_prime(F.add(a, b)) ==
            (F.trace_to_prime(a) + F.trace_to_prime(b)) % p);
    }
    // trace surjective onto F_p
    std::set<int> tr;
    for (int a = 0; a < F.q; ++a) tr.insert(F.trace_to_prime(a));
    CHECK(static_cast<int>(tr.size()) == p);
    if (p != 2) {
      int squares = 0;
      for (int a = 0; a < F.q; ++a)
        if (F.is_square(a)) ++squares;
      CHECK(squares == (F.q + 1) / 2);
    }
  }
}

TEST_CASE("local element arithmetic") {
  const FqField& F3 = FqField::get(3, 1);
  SUBCASE("geometric series inverse") {
    LocalElem a = LocalElem::from_coeffs(F3, 0, {1, 1});  // 1 + t
    LocalElem b = a.inv(8);
    // 1/(1+t) = 1 - t + t^2 - ... = 1 + 2t + t^2 + 2t^3 + ...
    for (int i = 0; i < 8; ++i) CHECK(b.coeff(i) == (i % 2 == 0 ? 1 : 2));
    LocalElem prod = a * b;
    CHECK(prod.coeff(0) == 1);
    for (int i = 1; i < 8; ++i) CHECK(prod.coeff(i) == 0);
    CHECK(prod.prec == 8);
  }
  SUBCASE("ring axioms") {
    for (int q : {2, 3, 4, 5, 9}) {
      const FqField& F = q == 4 ? FqField::get(2, 2) : (q == 9 ? FqField::get(3, 2) : FqField::get(q, 1));
      std::mt19937_64 rng(1000 + q);
      for (int it = 0; it < 60; ++it) {
        LocalElem a = random_elem(F, rng), b = random_elem(F, rng), c = random_elem(F, rng);
        CHECK((a + b) == (b + a));
        CHECK(((a + b) + c) == (a + (b + c)));
        CHECK((a * b) == (b * a));
        CHECK(((a * b) * c) == (a * (b * c)));
        CHECK((a * (b + c)) == (a * b + a * c));
        CHECK((a - a).is_exact_zero());
        if (!a.is_exact_zero() && !b.is_exact_zero())
          CHECK((a * b).v() == a.v() + b.v());
        if (!a.is_exact_zero()) {
          LocalElem ai = a.inv(12);
          LocalElem one = a * ai;
          CHECK(one.coeff(0) == 1);
          for (int i = 1; i < 10; ++i) CHECK(one.coeff(i) == 0);
        }
      }
    }
  }
  SUBCASE("precision semantics") {
    LocalElem a = LocalElem::from_coeffs(F3, 0, {1, 2, 1}).truncated(2);
    CHECK(a.prec == 2);
    CHECK_THROWS_AS(a.coeff(2), PrecisionUnderflow);
    LocalElem z = (a - a);
    CHECK(z.zero);
    CHECK(z.prec == 2);
    CHECK_THROWS_AS(z.v(), UncertainValuation);
    CHECK_THROWS_AS(z.inv(), PrecisionUnderflow);
    CHECK(z.vge(2));
    CHECK_THROWS_AS(z.vge(3), PrecisionUnderflow);
    CHECK_THROWS_AS(LocalElem::zero_of(F3).inv(), InversionOfZero);
    // truncation propagates through multiplication
    LocalElem b = LocalElem::t_pow(F3, 5);
    CHECK((z * b).prec == 7);
    // equality against a tail beyond precision is undecidable
    LocalElem c = LocalElem::from_coeffs(F3, 0, {1, 2});
    LocalElem d = c + LocalElem::t_pow(F3, 4);
    CHECK_THROWS_AS((void)(c.truncated(3) == d.truncated(3) && false), PrecisionUnderflow);
    CHECK(c.truncated(3).congruent(d.truncated(3), 3));
  }
  SUBCASE("literal grammar roundtrip") {
    const FqField& F9 = FqField::get(3, 2);
    LocalElem x = parse_local(F9, "g^2*t^-1 + 1 + 2*t^3");
    CHECK(x.v() == -1);
    CHECK(x.coeff(-1) == F9.pow(F9.gen(), 2));
    CHECK(x.coeff(0) == 1);
    CHECK(x.coeff(3) == 2);
    CHECK(parse_local(F9, x.str()) == x);
    LocalElem y = parse_local(F3, "2*t^-1 + 1 - t^2");
    CHECK(y.coeff(2) == 2);
    CHECK(parse_local(F3, y.str()) == y);
    CHECK(parse_local(F3, "t - t").is_exact_zero());
    CHECK_THROWS_AS(parse_local(F3, "q + 1"), ConfigError);
  }
}

TEST_CASE("shell representatives") {
  const FqField& F3 = FqField::get(3, 1);
  auto s1 = shell_representatives(F3, 0, 1);
  CHECK(s1.size() == 2);
  auto s2 = shell_representatives(F3, 2, 2);
  CHECK(s2.size() == 6);
  for (const auto& e : s2) CHECK(e.v() == 2);
  const FqField& F2 = FqField::get(2, 1);
  auto s3 = shell_representatives(F2, 0, 3);
  CHECK(s3.size() == 4);
  std::set<std::string> distinct;
  for (const auto& e : s3) distinct.insert(e.str());
  CHECK(distinct.size() == s3.size());
  CHECK_THROWS_AS(shell_representatives(F3, 0, 20, 1000), BudgetExceeded);
}

TEST_CASE("cyclotomic values") {
  for (auto [p, M] : {std::pair{3, 2}, {3, 8}, {5, 4}, {2, 1}, {7, 6}}) {
    const CycloRing& R = CycloRing::get(p, M);
    // zeta_p^p = 1, zeta_M^M = 1
    CHECK(CycloValue::root(R, p, 0) == CycloValue::rational(R, 1));
    CHECK(CycloValue::root(R, 0, M) == CycloValue::rational(R, 1));
    // vanishing sum of all p-th roots
    CycloValue s(R);
    for (int i = 0; i < p; ++i) s = s + CycloValue::root(R, i, 0);
    CHECK(s.is_zero());
    // conj is the inverse on roots
    CycloValue z = CycloValue::root(R, 1, 1);
    CHECK(z * z.conj() == CycloValue::rational(R, 1));
    CHECK(z.mag2() == 1);
    // ring laws on a few combinations
    CycloValue a = CycloValue::root(R, 1, 0) + CycloValue::root(R, 0, 1) * mpq_class(2, 3);
    CycloValue b = CycloValue::root(R, p - 1, M - 1) - CycloValue::rational(R, 5);
    CycloValue c = CycloValue::root(R, 1, 1);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b).conj() == a.conj() + b.conj());
    CHECK((a * b).conj() == a.conj() * b.conj());
  }
  // |1 + zeta_3|^2 = 1
  const CycloRing& R3 = CycloRing::get(3, 2);
  CycloValue w = CycloValue::rational(R3, 1) + CycloValue::root(R3, 1, 0);
  CHECK(w.mag2() == 1);
}

TEST_CASE("additive character conductor") {
  const FqField& F3 = FqField::get(3, 1);
  for (int c : {0, 1, 2}) {
    AdditiveCharacter psi(F3, c);
    // trivial on p^{-c}
    CHECK(psi.exponent(LocalElem::t_pow(F3, -c)) == 0);
    // nontrivial on p^{-c-1}
    CHECK(psi.exponent(LocalElem::t_pow(F3, -c - 1)) != 0);
  }
}

TEST_CASE("multiplicative characters") {
  const FqField& F5 = FqField::get(5, 1);
  const CycloRing& R = gauss_ring(F5);
  std::mt19937_64 rng(99);
  for (int e : {0, 1, 2}) {
    for (int lam : {0, 1, 3}) {
      MultiplicativeCharacter chi;
      chi.F = &F5;
      chi.e = e;
      chi.lam = lam;
      chi.unif_sign = -1;
      CHECK(chi.conductor() == (lam ? 2 : (e ? 1 : 0)));
      for (int it = 0; it < 40; ++it) {
        LocalElem x = random_elem(F5, rng, false);
        LocalElem y = random_elem(F5, rng, false);
        CHECK(chi.value(R, x * y) == chi.value(R, x) * chi.value(R, y));
      }
      // conductor invariant: trivial on 1 + p^cond, nontrivial one level down
      int c = chi.conductor();
      if (c > 0) {
        bool nontriv = false;
        for (int r = 1; r < F5.q; ++r) {
          LocalElem z = LocalElem::one(F5) + LocalElem::residue(F5, r, c - 1);
          if (z.is_exact_zero() || z.v() != 0) continue;  // left O^x
          if (!(chi.value(R, z) == CycloValue::rational(R, 1))) nontriv = true;
          LocalElem w = LocalElem::one(F5) + LocalElem::residue(F5, r, c);
          CHECK(chi.value(R, w) == CycloValue::rational(R, 1));
        }
        CHECK(nontriv);
      }
    }
  }
}

TEST_CASE("gauss sum laws") {
  // the support law tau_n = 0 unless n = -(c(chi)+c(psi)) holds as stated
  // for ramified chi; for unramified chi the complete description is
  //   tau_n = chi(t^n) Vol(O^x)              for n >= -c(psi),
  //   tau_{-c(psi)-1} = -chi(t^n) Vol(O^x)/(q-1),
  //   tau_n = 0                              for n <= -c(psi)-2
  for (int q : {3, 5}) {
    const FqField& F = FqField::get(q, 1);
    const CycloRing& R = gauss_ring(F);
    for (int cpsi : {0, 1, 2}) {
      AdditiveCharacter psi(F, cpsi);
      for (int cchi : {0, 1, 2}) {
        MultiplicativeCharacter chi;
        chi.F = &F;
        if (cchi >= 1) chi.e = 1;
        if (cchi == 2) chi.lam = 1;
        chi.unif_sign = -1;
        REQUIRE(chi.conductor() == cchi);
        for (int n = -6; n <= 2; ++n) {
          GaussValue g = gauss_sum(chi, psi, n);
          CHECK(g.q_half == cpsi);
          if (cchi > 0) {
            CHECK(g.v.is_zero() == (n != -(cchi + cpsi)));
          } else {
            if (n >= -cpsi)
              CHECK(g.v == chi.value_at_unif_pow(R, n));
            else if (n == -cpsi - 1)
              CHECK(g.v == chi.value_at_unif_pow(R, n) * mpq_class(-1, q - 1));
            else
              CHECK(g.v.is_zero());
          }
        }
        // twist law: tau_n(chi, psi_a) = chi(a^{-1}) tau_n(chi, psi)
        for (int a = 1; a < q; ++a) {
          LocalElem tw = LocalElem::residue(F, a);
          for (int n = -(cchi + cpsi) - 1; n <= -(cchi + cpsi) + 1; ++n) {
            GaussValue l = gauss_sum(chi, psi, n, &tw);
            GaussValue r = gauss_sum(chi, psi, n);
            CHECK(l.v == r.v * chi.value(R, LocalElem::residue(F, F.inv(a))));
          }
        }
      }
    }
    // classical magnitude: |(q-1) tau_{-1}|^2 = q for conductor-1 chi, c(psi)=0
    MultiplicativeCharacter chi;
    chi.F = &F;
    chi.e = 1;
    AdditiveCharacter psi(F, 0);
    GaussValue g = gauss_sum(chi, psi, -1);
    CHECK((g.v * mpq_class(q - 1)).mag2() == q);
  }
}
