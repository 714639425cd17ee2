#include "rtflab/testfn.hpp"

#include <climits>

#include "rtflab/errors.hpp"

namespace rtflab {
namespace {

bool mat_integral_E(const QuadExt& E, const Mat2E& M) {
  for (const auto& z : M.m)
    if (!E.vge(z, 0)) return false;
  return true;
}

// F-rational part of an entry known to lie in F; throws otherwise
LocalElem f_entry(const QuadExt& E, const EElem& z) {
  auto [x, y] = E.components(z);
  if (!y.zero) throw Error("expected an F-rational entry");
  return x;
}

}  // namespace

TestFnS TestFnS::integral_det(int m) {
  TestFnS f;
  f.kind = Kind::IntegralDet;
  f.m = m;
  return f;
}

TestFnS TestFnS::hecke_cell(int m) {
  if (m < 0) throw ConfigError("negative cell index");
  TestFnS f;
  f.kind = Kind::HeckeCell;
  f.m = m;
  return f;
}

TestFnS TestFnS::klxi(int l, const LocalElem& trxi, int n, bool primed) {
  if (n < 1 || l < 1) throw ConfigError("trace-ball support needs l, n >= 1");
  if (trxi.zero) throw ConfigError("tr(xi) must be nonzero");
  TestFnS f;
  f.kind = primed ? Kind::KlxiPrime : Kind::Klxi;
  f.l = l;
  f.n = n;
  f.trxi = trxi;
  return f;
}

std::vector<int> TestFnS::det_vals(const QuadExt& E) const {
  switch (kind) {
    case Kind::KcapS:
    case Kind::Klxi:
    case Kind::KlxiPrime:
      return {0};
    case Kind::IntegralDet:
      return {E.e * m};
    case Kind::HeckeCell:
      return {E.e * m};
  }
  throw Error("unreachable");
}

int TestFnS::unit_depth(const QuadExt& E) const {
  switch (kind) {
    case Kind::KcapS:
    case Kind::IntegralDet:
    case Kind::HeckeCell:
      return 1;
    case Kind::Klxi:
    case Kind::KlxiPrime: {
      int lE = E.e * ((l + E.e - 1) / E.e);  // trace ball p_F^ceil(l/e) in p_E units
      return std::max(n, lE);
    }
  }
  throw Error("unreachable");
}

bool TestFnS::contains(const QuadExt& E, const Mat2E& M) const {
  if (!mat_integral_E(E, M)) return false;
  EElem det = mat_det(E, M);
  switch (kind) {
    case Kind::KcapS:
      return E.vE(det) == 0;
    case Kind::IntegralDet:
      return E.vE(det) == E.e * m;
    case Kind::HeckeCell: {
      if (E.vE(det) != E.e * m) return false;
      if (m == 0) return true;
      for (const auto& z : M.m)
        if (!E.vge(z, 1)) return true;  // some entry is a unit
      return false;
    }
    case Kind::Klxi:
    case Kind::KlxiPrime: {
      if (E.vE(det) != 0) return false;
      int lF = (l + E.e - 1) / E.e;
      EElem one = E.one();
      if (kind == Kind::Klxi) {
        if (!E.congruent(M.m[1], one, n)) return false;
        if (!E.congruent(M.m[2], one, n)) return false;
        if (!E.vge(M.m[3], n)) return false;
        return (f_entry(E, M.m[0]) + trxi).vge(lF);
      }
      EElem mone = E.neg(one);
      if (!E.vge(M.m[0], n)) return false;
      if (!E.congruent(M.m[1], mone, n)) return false;
      if (!E.congruent(M.m[2], mone, n)) return false;
      return (f_entry(E, M.m[3]) + trxi).vge(lF);
    }
  }
  throw Error("unreachable");
}

std::vector<int> TestFnG::det_vals(const QuadExt& E) const {
  (void)E;
  switch (kind) {
    case Kind::Cm:
    case Kind::IntegralDet:
      return {m};
    case Kind::KepsM:
    case Kind::KepsMZ:
      return {0};
  }
  throw Error("unreachable");
}

int TestFnG::unit_depth(const QuadExt& E) const {
  (void)E;
  return std::max(1, matrix_model() ? 1 : m);
}

bool TestFnG::contains_matrix(const Mat2F& g) const {
  if (!mat_integral(g)) return false;
  LocalElem det = mat_det(g);
  if (det.zero || det.v() != m) return false;
  if (kind == Kind::Cm && m > 0) {
    for (const auto& e : g.m)
      if (!e.vge(1)) return true;  // some entry is a unit
    return false;
  }
  return true;
}

bool TestFnG::contains_quat(const QuadExt& E, const LocalElem& eps, const QuatElem& g) const {
  if (matrix_model()) throw Error("matrix-model support evaluated in quaternion coordinates");
  if (!E.vge(g.a, 0) || !E.vge(g.b, 0)) return false;
  if (m == 0) {
    LocalElem det = quat_det(E, eps, g);
    return !det.zero && det.v() == 0;
  }
  return E.congruent(g.a, E.one(), m) && E.vge(g.b, m);
}

SplitBall::SplitBall(const Mat2F& g, int depth) : g0(g), N(depth) {
  if (N < 1) throw ConfigError("ball depth must be >= 1");
  LocalElem det = mat_det(g0);
  int relprec = 2 * N + 32;
  LocalElem di = det.inv(relprec);
  g0_inv = {g0.m[3] * di, -(g0.m[1] * di), -(g0.m[2] * di), g0.m[0] * di};
}

bool SplitBall::contains(const Mat2F& g) const {
  Mat2F r = mat_mul(g0_inv, g);
  LocalElem one = LocalElem::one(*g0.m[0].F);
  return r.m[0].congruent(one, N) && r.m[3].congruent(one, N) && r.m[1].vge(N) && r.m[2].vge(N);
}

std::array<int, 4> SplitBall::entry_vals() const {
  int mv = mat_min_val(g0);
  std::array<int, 4> out;
  for (int i = 0; i < 4; ++i) {
    const LocalElem& e = g0.m[i];
    bool pinned = !e.zero && e.v() < N + mv;
    out[i] = pinned ? e.v() : INT_MIN;
  }
  return out;
}

}  // namespace rtflab
