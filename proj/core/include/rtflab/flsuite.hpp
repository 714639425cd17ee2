#pragma once
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rtflab/chars.hpp"
#include "rtflab/engine.hpp"

namespace rtflab {

// exact volume scalar c * q^(q_half/2) under the fixed measure conventions:
// psi conductor 0, Vol(O_F) = Vol(O_F^x) = 1, Vol(O_E^x) = q^((e-1)/2)
struct Scalar {
  mpq_class c;
  int q_half = 0;

  Scalar operator*(const Scalar& o) const { return {c * o.c, q_half + o.q_half}; }
  Scalar operator*(const mpq_class& s) const { return {c * s, q_half}; }
};

Scalar vol_mult_one_plus_pn(const QuadExt& E, int n);   // Vol^x(1 + p_E^n)
Scalar vol_mult_unit_ball(const QuadExt& E, int vu, int lF);  // Vol^x(u + p_F^lF), v(u)=vu<lF
Scalar vol_torus_quotient(const QuadExt& E);            // Vol(E^x/F^x)
Scalar vol_add_pE(const QuadExt& E, int l);             // Vol^+(p_E^l)

// constant orbital value s * xi^xi_exp with the engine's q_half offset baked in
OrbitalValue const_value(const QuadExt& E, const Scalar& s, int xi_exp = 0);
LogValue log_value(const QuadExt& E, const Scalar& s, int xi_exp, const mpq_class& mult);

// closed forms of the verified identities
// S-side unit/generator value: xi^((m - v(1-x))/2) when v(1-x) is even and <= m, else 0
XiPoly closed_fl_S(int m, int v1mx);
// G_1-side cell value in characteristic 2 for 1_{C_m}
XiPoly closed_cm_char2(int m, int vx, int v1px);
// derivative value xi^(m/2) (v(x)+m+1)/2 (-log q^2) for v(x) odd > 0, zero for v(x) < 0
LogValue closed_afl_deriv(const QuadExt& E, int m, int vx);

// deterministic exact random elements
LocalElem random_unit(const FqField& F, std::mt19937_64& rng, int len = 4);
EElem random_E_unit(const QuadExt& E, std::mt19937_64& rng, int len = 4);

struct CaseResult {
  std::string x;  // rendered input
  int valuation = 0;
  std::string lhs, rhs;
  bool pass = true;
  std::string witness;
};

struct SuiteResult {
  std::string suite;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<CaseResult> cases;
  std::string warning;

  int total() const { return static_cast<int>(cases.size()); }
  int passed() const;
  bool pass() const { return passed() == total(); }
  void add(CaseResult c) { cases.push_back(std::move(c)); }
};

// unit/generator matching on the norm classes, with the closed rows checked
// row-for-row; covers odd characteristic and characteristic 2.
// inject_fault >= 0 perturbs the computed value of that case before the
// comparison (test fixture for the mismatch reporting path)
SuiteResult verify_FL(const FqField& F, const std::vector<int>& ms, int vx_lo, int vx_hi,
                      int unit_samples, unsigned seed, const EngineOptions& opts = {},
                      int inject_fault = -1);

// derivative identity 2 i(delta(x), f) (-log q) = O'(0, x, Phi)
SuiteResult verify_AFL(const FqField& F, const std::vector<int>& ms, const std::vector<int>& vxs,
                       int unit_samples, unsigned seed, const EngineOptions& opts = {});

// smooth matching: trace-ball values, the solved two-ball combination against
// the congruence subgroup values, the involution twist, pure matching, and
// the derivative values
SuiteResult verify_matching(const FqField& F, ExtFlavor flavor, int m, int unit_samples,
                            unsigned seed, const EngineOptions& opts = {});

// split-model matching f_eps(g) = Phi(g w) on random ball combinations
SuiteResult verify_split_matching(const FqField& F, int pairs, unsigned seed,
                                  const EngineOptions& opts = {});

// Gauss sum support laws on conductors <= 2 and the nonvanishing of the
// two-ball combinations
SuiteResult verify_gauss(const FqField& F);

// half-plane metric identity d(z, delta z) = |inv'(delta)| (unramified; the
// ramified relation is reported, not asserted)
SuiteResult verify_minf(const FqField& F, ExtFlavor flavor, int samples, unsigned seed);

// special multiplicity function axioms at level U = K_{eps,level}
struct MultiplicityCandidate {
  std::function<mpq_class(const QuadExt&, const LocalElem& eps, const QuatElem&)> value;
  bool is_zero = false;
};
MultiplicityCandidate unramified_multiplicity_candidate();
MultiplicityCandidate zero_multiplicity_candidate();
MultiplicityCandidate det_violating_candidate();  // fails the det-support axiom
SuiteResult verify_multiplicity_axioms(const FqField& F, const MultiplicityCandidate& cand,
                                       int level, int samples, unsigned seed);

// qualitative profile of a G_eps-side orbital over a valuation window
struct ProfileReport {
  bool vanishes_near_one = false;
  bool constant_near_zero = false;
  bool bounded_near_infty = false;  // zero or pure character behavior at v -> -inf
  std::vector<CaseResult> plateau;  // per-v local constancy across unit samples
  bool pass() const;
};
ProfileReport orbital_profile(const QuadExt& E, const LocalElem& eps, const TestFnG& f,
                              int v_lo, int v_hi, unsigned seed, const EngineOptions& opts = {});

}  // namespace rtflab
