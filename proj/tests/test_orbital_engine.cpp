#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rtflab/engine.hpp"
#include "rtflab/errors.hpp"
#include "rtflab/flsuite.hpp"
#include "rtflab/geom.hpp"

using namespace rtflab;

namespace {

XiPoly xi(int k, const mpq_class& c = 1) { return XiPoly::mono(k, 0, c); }

XiPoly s_at_zero(const QuadExt& E, const TestFnS& f, const LocalElem& x,
                 const EngineOptions& opts = {}) {
  return orbital_S_x(E, f, x, opts).value_at_zero();
}

}  // namespace

TEST_CASE("unit value on the regular unit locus") {
  const FqField& F = FqField::get(3, 1);
  // x = -1: v(x) = v(1 - x) = 0
  LocalElem x = -LocalElem::one(F);
  {
    const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
    OrbitalValue o = orbital_S(E, TestFnS::k_cap_s(), gamma_of_x(E, x));
    CHECK(o == const_value(E, Scalar{1, 0}));
  }
  {
    // ramified eta averages to zero over the unconstrained z-unit classes
    const QuadExt& E = QuadExt::get(F, ExtFlavor::RamifiedTame);
    CHECK(orbital_S(E, TestFnS::k_cap_s(), gamma_of_x(E, x)).is_zero());
  }
}

TEST_CASE("unit element values on the norm classes") {
  const FqField& F = FqField::get(3, 1);
  const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
  std::mt19937_64 rng(11);
  auto f0 = TestFnS::k_cap_s();

  CHECK(s_at_zero(E, f0, random_unit(F, rng).shifted(2)) == xi(0));
  CHECK(s_at_zero(E, f0, random_unit(F, rng).shifted(4)) == xi(0));
  CHECK(s_at_zero(E, f0, random_unit(F, rng).shifted(-2)) == xi(1));
  CHECK(s_at_zero(E, f0, random_unit(F, rng).shifted(-4)) == xi(2));
  CHECK(s_at_zero(E, f0, random_unit(F, rng).shifted(1)).is_zero());
  CHECK(s_at_zero(E, f0, random_unit(F, rng).shifted(-3)).is_zero());
  // v(x) = 0: nonzero iff v(1-x) = 0
  LocalElem one = LocalElem::one(F);
  CHECK(s_at_zero(E, f0, one + random_unit(F, rng).shifted(2)).is_zero());
  CHECK(s_at_zero(E, f0, -one) == xi(0));
}

TEST_CASE("determinant cell values") {
  const FqField& F = FqField::get(3, 1);
  const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
  std::mt19937_64 rng(12);
  LocalElem one = LocalElem::one(F);
  auto f2 = TestFnS::integral_det(2);

  CHECK(s_at_zero(E, f2, random_unit(F, rng).shifted(2)) == xi(1));
  CHECK(s_at_zero(E, f2, random_unit(F, rng).shifted(-2)) == xi(2));
  CHECK(s_at_zero(E, f2, random_unit(F, rng).shifted(-1)).is_zero());
  // v(x) = 0 rows through v(1-x)
  CHECK(s_at_zero(E, f2, one + random_unit(F, rng).shifted(2)) == xi(0));
  CHECK(s_at_zero(E, f2, one + random_unit(F, rng).shifted(1)).is_zero());
  CHECK(s_at_zero(E, f2, one + random_unit(F, rng).shifted(4)).is_zero());
  CHECK(s_at_zero(E, f2, -one) == xi(1));
  // closed-form helper agrees row by row
  for (int vx : {-4, -2, 2, 4}) {
    LocalElem x = random_unit(F, rng).shifted(vx);
    CHECK(s_at_zero(E, f2, x) == closed_fl_S(2, (one - x).v()));
  }
}

TEST_CASE("matrix-model side equals hermitian side on norms") {
  for (auto [p, k] : {std::pair{3, 1}, {2, 1}, {2, 2}, {5, 1}}) {
    const FqField& F = FqField::get(p, k);
    const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
    std::mt19937_64 rng(13 * F.q);
    for (int m : {0, 2}) {
      for (int vx : {-2, 0, 2}) {
        LocalElem x = random_unit(F, rng).shifted(vx);
        if ((x - LocalElem::one(F)).zero) continue;
        XiPoly s = s_at_zero(E, TestFnS::integral_det(m), x);
        XiPoly g = orbital_G1_x(E, TestFnG::integral_det(m), x).value_at_zero();
        CHECK(s == g);
      }
    }
  }
}

TEST_CASE("characteristic 2 cell rows") {
  const FqField& F = FqField::get(2, 1);
  const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
  std::mt19937_64 rng(14);
  LocalElem one = LocalElem::one(F);

  // m = 2 cell: nonzero only at v(x) = 0, v(1+x) = 2
  LocalElem x22 = one + random_unit(F, rng).shifted(2);
  CHECK(orbital_G1_x(E, TestFnG::cm(2), x22).value_at_zero() == xi(0));
  LocalElem x21 = one + random_unit(F, rng).shifted(1);
  CHECK(orbital_G1_x(E, TestFnG::cm(2), x21).value_at_zero().is_zero());
  CHECK(orbital_G1_x(E, TestFnG::cm(2), random_unit(F, rng).shifted(2)).value_at_zero().is_zero());
  // m = 0 cell
  CHECK(orbital_G1_x(E, TestFnG::cm(0), random_unit(F, rng).shifted(2)).value_at_zero() == xi(0));
  CHECK(orbital_G1_x(E, TestFnG::cm(0), random_unit(F, rng).shifted(-2)).value_at_zero() == xi(1));
  CHECK(orbital_G1_x(E, TestFnG::cm(0), x22).value_at_zero().is_zero());
  // norm valuations are even: v(Nm(a + b xi)) = 2 min(v(a), v(b))
  for (int i = 0; i < 40; ++i) {
    LocalElem a = random_unit(F, rng).shifted(static_cast<int>(rng() % 5) - 2);
    LocalElem b = random_unit(F, rng).shifted(static_cast<int>(rng() % 5) - 2);
    CHECK(E.norm(E.make(a, b)).v() == 2 * std::min(a.v(), b.v()));
  }
}

TEST_CASE("derivative rows and the arithmetic side") {
  const FqField& F = FqField::get(3, 1);
  const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
  std::mt19937_64 rng(15);

  for (int m : {0, 2}) {
    for (int vx : {-3, -1, 1, 3}) {
      LocalElem x = random_unit(F, rng).shifted(vx);
      LogValue d = orbital_S_x(E, TestFnS::integral_det(m), x).derivative_at_zero();
      CHECK(d == closed_afl_deriv(E, m, vx));
      XiPoly i = arith_orbital_i_x(E, TestFnG::integral_det(m), x);
      if (vx > 0) {
        CHECK(i == xi(m / 2, mpq_class(vx + m + 1, 2)));
      } else {
        CHECK(i.is_zero());
      }
      LogValue lhs;
      lhs.q = F.q;
      lhs.grade = 1;
      lhs.c = i * mpq_class(2);
      CHECK(lhs == d);
    }
  }
}

TEST_CASE("trace ball values against the closed volumes") {
  for (auto flavor : {ExtFlavor::Unramified, ExtFlavor::RamifiedTame}) {
    const FqField& F = FqField::get(3, 1);
    const QuadExt& E = QuadExt::get(F, flavor);
    std::mt19937_64 rng(16);
    bool unram = flavor == ExtFlavor::Unramified;
    LocalElem trxi = unram ? LocalElem::t_pow(F, 1) : LocalElem::one(F);
    int n = 2, l = 3;
    int lF = (l + E.e - 1) / E.e;
    Scalar vols = vol_mult_one_plus_pn(E, n) * vol_mult_unit_ball(E, trxi.v(), lF);
    int thr = (n + E.e * trxi.v() + E.e - 1) / E.e;
    for (int k = thr - 2; k <= thr + 1; ++k) {
      LocalElem x = random_unit(F, rng).shifted(k);
      OrbitalValue o = orbital_S_x(E, TestFnS::klxi(l, trxi, n, false), x);
      OrbitalValue op = orbital_S_x(E, TestFnS::klxi(l, trxi, n, true), x);
      bool in_support = E.e * k >= n + E.e * trxi.v();
      if (in_support) {
        // the values agree at s = 0 (the T-polynomials differ)
        OrbitalValue c1 = const_value(E, vols * mpq_class(E.eta(-(x * trxi))));
        OrbitalValue c2 = const_value(E, vols * mpq_class(E.eta(-trxi)));
        CHECK(o.value_at_zero() == c1.value_at_zero());
        CHECK(o.q_half == c1.q_half);
        CHECK(op.value_at_zero() == c2.value_at_zero());
        CHECK(op.q_half == c2.q_half);
      } else {
        CHECK(o.value_at_zero().is_zero());
        CHECK(op.value_at_zero().is_zero());
      }
    }
  }
}

TEST_CASE("congruence subgroup values over both classes") {
  for (auto flavor : {ExtFlavor::Unramified, ExtFlavor::RamifiedTame}) {
    const FqField& F = FqField::get(3, 1);
    const QuadExt& E = QuadExt::get(F, flavor);
    std::mt19937_64 rng(17);
    int m = 1;
    Scalar target = vol_mult_one_plus_pn(E, m) * vol_torus_quotient(E);
    std::vector<LocalElem> eps_reps = {LocalElem::one(F)};
    eps_reps.push_back(flavor == ExtFlavor::Unramified ? LocalElem::t_pow(F, 1)
                                                       : LocalElem::residue(F, E.u));
    for (const LocalElem& eps : eps_reps) {
      for (int j = m - 1; j <= m + 1; ++j) {
        EElem y = random_E_unit(E, rng);
        for (int i = 0; i < std::abs(j); ++i) y = E.mul(y, j > 0 ? E.unif() : E.inv(E.unif()));
        LocalElem x = eps * E.norm(y);
        if ((x - LocalElem::one(F)).zero) continue;
        OrbitalValue g = orbital_G_x(E, eps, TestFnG::keps(m), x);
        if (E.e * x.v() >= 2 * m + eps.v()) {
          CHECK(g == const_value(E, target));
        } else {
          CHECK(g.is_zero());
        }
      }
    }
  }
}

TEST_CASE("fast path agrees with brute enumeration") {
  const FqField& F = FqField::get(3, 1);
  EngineOptions brute;
  brute.brute = true;
  for (auto flavor : {ExtFlavor::Unramified, ExtFlavor::RamifiedTame}) {
    const QuadExt& E = QuadExt::get(F, flavor);
    std::mt19937_64 rng(18);
    LocalElem trxi = flavor == ExtFlavor::Unramified ? LocalElem::t_pow(F, 1)
                                                     : LocalElem::one(F);
    for (bool primed : {false, true}) {
      TestFnS ball = TestFnS::klxi(2, trxi, 1, primed);
      for (int k : {0, 1, 2, 3}) {
        LocalElem x = random_unit(F, rng).shifted(k);
        if ((x - LocalElem::one(F)).zero) x = -LocalElem::one(F);
        CHECK(orbital_S_x(E, ball, x) == orbital_S_x(E, ball, x, brute));
      }
    }
  }
}

TEST_CASE("orbit representative and epsilon independence") {
  const FqField& F = FqField::get(3, 1);
  const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
  std::mt19937_64 rng(19);

  // translating gamma(x) by unit torus elements preserves the integral
  LocalElem x = random_unit(F, rng).shifted(2);
  Mat2E g = gamma_of_x(E, x);
  EElem a0 = random_E_unit(E, rng);
  LocalElem z0 = random_unit(F, rng);
  Mat2E g2 = herm_action(E, a0, z0, g);
  auto f = TestFnS::integral_det(2);
  CHECK(orbital_S(E, f, g) == orbital_S(E, f, g2));

  // scaling eps by a norm leaves the quaternion orbital unchanged
  LocalElem eps1 = LocalElem::t_pow(F, 1);
  LocalElem eps2 = eps1 * E.norm(random_E_unit(E, rng));
  for (int j : {2, 3}) {
    LocalElem xx = eps1 * E.norm(random_E_unit(E, rng)).shifted(2 * j);
    CHECK(orbital_G_x(E, eps1, TestFnG::keps(1), xx) ==
          orbital_G_x(E, eps2, TestFnG::keps(1), xx));
  }
}

TEST_CASE("center quotient support agrees with the plain support") {
  const FqField& F = FqField::get(3, 1);
  const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
  std::mt19937_64 rng(20);
  LocalElem eps = LocalElem::t_pow(F, 1);
  for (int j : {1, 2}) {
    LocalElem x = eps * E.norm(random_E_unit(E, rng)).shifted(2 * j);
    CHECK(orbital_G_x(E, eps, TestFnG::keps_z(1), x) ==
          orbital_G_x(E, eps, TestFnG::keps(1), x));
  }
}

TEST_CASE("precision stability of the engine") {
  const FqField& F = FqField::get(3, 1);
  const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
  std::mt19937_64 rng(21);
  EngineOptions lo, hi;
  lo.relprec = 32;
  hi.relprec = 34;
  LocalElem x = random_unit(F, rng).shifted(-2);
  CHECK(orbital_S_x(E, TestFnS::integral_det(2), x, lo) ==
        orbital_S_x(E, TestFnS::integral_det(2), x, hi));
  LocalElem trxi = LocalElem::t_pow(F, 1);
  LocalElem x2 = random_unit(F, rng).shifted(3);
  CHECK(orbital_S_x(E, TestFnS::klxi(2, trxi, 1, false), x2, lo) ==
        orbital_S_x(E, TestFnS::klxi(2, trxi, 1, false), x2, hi));
}

TEST_CASE("multiplicity values and invariant stability") {
  const FqField& F = FqField::get(3, 1);
  CHECK(multiplicity_value(3, 0, 3) == 2);
  CHECK(multiplicity_value(3, 1, 5) == mpq_class(1, 4));
  CHECK(multiplicity_value(3, 2, 5) == mpq_class(1, 12));

  const QuadExt& E = QuadExt::get(F, ExtFlavor::Unramified);
  std::mt19937_64 rng(22);
  LocalElem eps = LocalElem::t_pow(F, 1);
  for (int i = 0; i < 20; ++i) {
    QuatElem d{random_E_unit(E, rng), random_E_unit(E, rng)};
    if (!quat_regular(E, d)) continue;
    EElem t1 = random_E_unit(E, rng), t2 = random_E_unit(E, rng);
    QuatElem d2{E.mul(E.mul(E.inv(t1), d.a), t2), E.mul(E.mul(E.inv(t1), d.b), E.conj(t2))};
    CHECK(invp_T(E, eps, d).v() == invp_T(E, eps, d2).v());
  }
}

TEST_CASE("split ball guards") {
  const FqField& F = FqField::get(3, 1);
  LocalElem one = LocalElem::one(F), zero = LocalElem::zero_of(F);
  // an unpinned off-diagonal entry is rejected
  Mat2F g0{one, LocalElem::t_pow(F, 4), zero + LocalElem::t_pow(F, 5), one};
  std::vector<std::pair<mpq_class, SplitBall>> phi;
  phi.emplace_back(1, SplitBall(g0, 1));
  CHECK_THROWS_AS(split_orbital_S(F, phi, -one), ConfigError);
}

TEST_CASE("split sides agree through the Weyl twist") {
  for (auto [p, k] : {std::pair{2, 1}, {3, 1}}) {
    const FqField& F = FqField::get(p, k);
    std::mt19937_64 rng(23 * F.q);
    LocalElem one = LocalElem::one(F), zero = LocalElem::zero_of(F);
    Mat2F w{zero, one, one, zero};
    for (int i = 0; i < 6; ++i) {
      Mat2F g0;
      for (int j = 0; j < 4; ++j) g0.m[j] = random_unit(F, rng, 3);
      LocalElem det = mat_det(g0);
      if (det.zero || cartan_c(g0) > 2) continue;
      LocalElem x = random_unit(F, rng).shifted(static_cast<int>(rng() % 3) - 1);
      if ((x - one).zero) continue;
      std::vector<std::pair<mpq_class, SplitBall>> phi, feps;
      phi.emplace_back(1, SplitBall(g0, 1));
      feps.emplace_back(1, SplitBall(mat_mul(w, mat_mul(g0, w)), 1));
      // trivial character pair: the formal character grades collapse
      CHECK(split_orbital_S(F, phi, x).value_at_zero().coeff_sum() ==
            split_orbital_G(F, feps, x).value_at_zero().coeff_sum());
    }
  }
}
