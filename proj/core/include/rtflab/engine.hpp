#pragma once
#include "rtflab/testfn.hpp"
#include "rtflab/values.hpp"

namespace rtflab {

struct EngineOptions {
  int relprec = 48;    // relative precision of inversions
  int guard = 2;       // extra shells scanned on each side of the derived window
  bool brute = false;  // disable the support-pinned enumeration fast path
  long budget = 50'000'000;
};

// number of worker threads: min(RTF_LAB_THREADS, hardware), at least 1
int engine_threads();

// S-side orbital with s-variable: double integral over z in F^x, a in E^x of
// phi(z diag(a,1) gamma diag(conj a,1)) eta(z) omega^-1(z) Omega^-1(a) |a|_E^s
OrbitalValue orbital_S(const QuadExt& E, const TestFnS& phi, const Mat2E& gamma,
                       const EngineOptions& opts = {});
OrbitalValue orbital_S(const QuadExt& E, const SLinComb& phi, const Mat2E& gamma,
                       const EngineOptions& opts = {});
// at gamma(x) = [[x,1],[1,1]]; x in F^x - {1}
OrbitalValue orbital_S_x(const QuadExt& E, const TestFnS& phi, const LocalElem& x,
                         const EngineOptions& opts = {});
OrbitalValue orbital_S_x(const QuadExt& E, const SLinComb& phi, const LocalElem& x,
                         const EngineOptions& opts = {});

// G_eps-side orbital over (h1, h2) in (E^x/F^x) x E^x of
// f(h1^-1 delta h2) Omega(h1) Omega^-1(h2); constant in T.
// xi_quotient replaces the h2-integral by T_eps / varpi^Z (then Omega must be
// trivial on varpi; xi-exponents of h2 are taken at the shell representative
// in [0, e))
OrbitalValue orbital_G(const QuadExt& E, const LocalElem& eps, const TestFnG& f,
                       const QuatElem& delta, const EngineOptions& opts = {});
OrbitalValue orbital_G_x(const QuadExt& E, const LocalElem& eps, const TestFnG& f,
                         const LocalElem& x, const EngineOptions& opts = {});

// same integral with the group element realized in the GL2(F) model of the
// eps = 1 unit group (E unramified); delta_mat = g1_matrix of delta
OrbitalValue orbital_G1(const QuadExt& E, const TestFnG& f, const Mat2F& delta_mat,
                        const EngineOptions& opts = {});
OrbitalValue orbital_G1_x(const QuadExt& E, const TestFnG& f, const LocalElem& x,
                          const EngineOptions& opts = {});

// split-model orbitals; the test function is a rational combination of balls.
// S-side: triple integral of phi([[abxz, az],[bz, z]]) xi1^(v(a)+v(z)) xi2^(v(b)+v(z));
// G-side: f([[ax/c, b/c],[a, b]]) xi1^(v(a)-v(c)) xi2^(v(b))
OrbitalValue split_orbital_S(const FqField& F, const std::vector<std::pair<mpq_class, SplitBall>>& phi,
                             const LocalElem& x, const EngineOptions& opts = {});
OrbitalValue split_orbital_G(const FqField& F, const std::vector<std::pair<mpq_class, SplitBall>>& f,
                             const LocalElem& x, const EngineOptions& opts = {});

// unramified multiplicity value: c the torus-Cartan coordinate of g^-1,
// vinvp = v(inv'(delta)); callers pin the determinant condition
mpq_class multiplicity_value(long q, int c, int vinvp);

// arithmetic orbital integral i(delta, f) for delta in G_varpi, f a
// bi-K_1-invariant function on G_1 given by a matrix-model TestFnG
XiPoly arith_orbital_i(const QuadExt& E, const TestFnG& f, const QuatElem& delta,
                       const EngineOptions& opts = {});
XiPoly arith_orbital_i_x(const QuadExt& E, const TestFnG& f, const LocalElem& x,
                         const EngineOptions& opts = {});

}  // namespace rtflab
