#pragma once
#include <gmpxx.h>

#include <utility>
#include <vector>

#include "rtflab/geom.hpp"

namespace rtflab {

// Hermitian-side supports. All variants are subsets of the integral matrices,
// so the evaluation shells are pinned by entry-valuation inequalities.
struct TestFnS {
  enum class Kind { KcapS, IntegralDet, HeckeCell, Klxi, KlxiPrime };

  Kind kind = Kind::KcapS;
  int m = 0;       // v_F(det) for IntegralDet, v_E-Cartan cell for HeckeCell
  int l = 0;       // trace-ball level of the Klxi kinds
  int n = 0;       // congruence depth of the Klxi kinds
  LocalElem trxi;  // tr(xi), a nonzero element of F

  static TestFnS k_cap_s() { return {}; }
  static TestFnS integral_det(int m);
  static TestFnS hecke_cell(int m);
  static TestFnS klxi(int l, const LocalElem& trxi, int n, bool primed);

  // v_E(det) values met by the support
  std::vector<int> det_vals(const QuadExt& E) const;
  // unit congruence depth (in p_E) on which membership is constant
  int unit_depth(const QuadExt& E) const;
  bool contains(const QuadExt& E, const Mat2E& M) const;
};

// rational combination, e.g. the two-ball difference of (ppn)
struct SLinComb {
  std::vector<std::pair<mpq_class, TestFnS>> terms;
};

// G_eps-side supports. Cm / IntegralDet live in the GL2(F) model of the
// eps = 1 unit group; KepsM lives in quaternion coordinates over any eps.
struct TestFnG {
  enum class Kind { Cm, IntegralDet, KepsM, KepsMZ };

  Kind kind = Kind::KepsM;
  int m = 0;

  static TestFnG cm(int m) { return {Kind::Cm, m}; }
  static TestFnG integral_det(int m) { return {Kind::IntegralDet, m}; }
  static TestFnG keps(int m) { return {Kind::KepsM, m}; }
  static TestFnG keps_z(int m) { return {Kind::KepsMZ, m}; }  // K_{eps,m} varpi^Z

  bool matrix_model() const { return kind == Kind::Cm || kind == Kind::IntegralDet; }
  std::vector<int> det_vals(const QuadExt& E) const;  // v_E(det) (v_F in the matrix model)
  int unit_depth(const QuadExt& E) const;
  bool contains_matrix(const Mat2F& g) const;
  bool contains_quat(const QuadExt& E, const LocalElem& eps, const QuatElem& g) const;
};

// split-model ball g0 (1 + p^N M2(O)); supports of split test functions are
// finite unions of these
struct SplitBall {
  Mat2F g0;
  int N = 1;
  Mat2F g0_inv;  // cached, to relative precision 2N + spread

  SplitBall(const Mat2F& g, int depth);

  bool contains(const Mat2F& g) const;
  // exact valuation of each entry on the ball (or INT_MIN when the entry
  // valuation is not pinned below the cutoff; such balls are rejected)
  std::array<int, 4> entry_vals() const;
};

}  // namespace rtflab
