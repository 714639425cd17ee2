#include "rtflab/geom.hpp"

#include <algorithm>

namespace rtflab {
namespace {

// certainty helper: true if exactly zero, throws if zero only up to precision
bool certain_zero(const LocalElem& e) {
  if (!e.zero) return false;
  if (!e.exact()) throw PrecisionUnderflow("zero test beyond precision");
  return true;
}

LocalElem f_part(const QuadExt& E, const EElem& z) {
  auto [x, y] = E.components(z);
  if (!y.zero) throw Error("expected an F-rational entry");
  return x;
}

}  // namespace

Mat2E mat_mul(const QuadExt& E, const Mat2E& x, const Mat2E& y) {
  Mat2E r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.m[2 * i + j] = E.add(E.mul(x.m[2 * i], y.m[j]), E.mul(x.m[2 * i + 1], y.m[2 + j]));
  return r;
}

EElem mat_det(const QuadExt& E, const Mat2E& x) {
  return E.sub(E.mul(x.m[0], x.m[3]), E.mul(x.m[1], x.m[2]));
}

Mat2E mat_conj_transpose(const QuadExt& E, const Mat2E& x) {
  return {E.conj(x.m[0]), E.conj(x.m[2]), E.conj(x.m[1]), E.conj(x.m[3])};
}

Mat2F mat_mul(const Mat2F& x, const Mat2F& y) {
  Mat2F r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.m[2 * i + j] = x.m[2 * i] * y.m[j] + x.m[2 * i + 1] * y.m[2 + j];
  return r;
}

LocalElem mat_det(const Mat2F& x) { return x.m[0] * x.m[3] - x.m[1] * x.m[2]; }

bool mat_integral(const Mat2F& x) {
  for (const auto& e : x.m)
    if (!e.vge(0)) return false;
  return true;
}

int mat_min_val(const Mat2F& x) {
  int mv = LocalElem::EXACT;
  int zprec = LocalElem::EXACT;
  for (const auto& e : x.m) {
    if (e.zero)
      zprec = std::min(zprec, e.prec);
    else
      mv = std::min(mv, e.v());
  }
  if (mv == LocalElem::EXACT) throw Error("min valuation of zero matrix");
  if (zprec <= mv) throw PrecisionUnderflow("min valuation beyond precision");
  return mv;
}

Mat2E gamma_of_x(const QuadExt& E, const LocalElem& x) {
  EElem one = E.one();
  return {E.from_F(x), one, one, one};
}

Mat2E herm_action(const QuadExt& E, const EElem& a, const LocalElem& z, const Mat2E& s) {
  EElem ac = E.conj(a), ez = E.from_F(z);
  Mat2E r;
  r.m[0] = E.mul(E.mul(a, s.m[0]), ac);
  r.m[1] = E.mul(a, s.m[1]);
  r.m[2] = E.mul(s.m[2], ac);
  r.m[3] = s.m[3];
  for (auto& e : r.m) e = E.mul(ez, e);
  return r;
}

LocalElem inv_S(const QuadExt& E, const Mat2E& s, int relprec) {
  LocalElem num = f_part(E, E.mul(s.m[0], s.m[3]));
  LocalElem den = E.norm(s.m[1]);
  return num.div(den, relprec);
}

LocalElem invp_S(const QuadExt& E, const Mat2E& s, int relprec) {
  // inv/(1 - inv) = alpha delta / (beta conj(beta) - alpha delta) = -alpha delta / det
  LocalElem num = f_part(E, E.mul(s.m[0], s.m[3]));
  LocalElem den = f_part(E, mat_det(E, s));
  return -num.div(den, relprec);
}

bool in_w_cell(const QuadExt& E, const Mat2E& s) {
  return E.is_norm(-f_part(E, mat_det(E, s)));
}

QuatElem quat_mul(const QuadExt& E, const LocalElem& eps, const QuatElem& x, const QuatElem& y) {
  EElem ee = E.from_F(eps);
  return {E.add(E.mul(x.a, y.a), E.mul(ee, E.mul(x.b, E.conj(y.b)))),
          E.add(E.mul(x.a, y.b), E.mul(x.b, E.conj(y.a)))};
}

QuatElem quat_conj(const QuadExt& E, const QuatElem& x) { return {E.conj(x.a), E.neg(x.b)}; }

LocalElem quat_det(const QuadExt& E, const LocalElem& eps, const QuatElem& x) {
  return E.norm(x.a) - eps * E.norm(x.b);
}

QuatElem quat_inv(const QuadExt& E, const LocalElem& eps, const QuatElem& x, int relprec) {
  LocalElem di = quat_det(E, eps, x).inv(relprec);
  EElem d = E.from_F(di);
  return {E.mul(E.conj(x.a), d), E.neg(E.mul(x.b, d))};
}

Mat2E quat_matrix(const QuadExt& E, const LocalElem& eps, const QuatElem& x) {
  return {x.a, E.mul(x.b, E.from_F(eps)), E.conj(x.b), E.conj(x.a)};
}

LocalElem inv_T(const QuadExt& E, const LocalElem& eps, const QuatElem& x, int relprec) {
  return (eps * E.norm(x.b)).div(E.norm(x.a), relprec);
}

LocalElem invp_T(const QuadExt& E, const LocalElem& eps, const QuatElem& x, int relprec) {
  return (eps * E.norm(x.b)).div(quat_det(E, eps, x), relprec);
}

QuatElem delta_of_x(const QuadExt& E, const LocalElem& eps, const LocalElem& x, int relprec) {
  LocalElem ratio = x.div(eps, relprec + 8);
  auto b = E.norm_preimage(ratio, relprec);
  if (!b) throw NonRegularInput("x is not in eps Nm(E^x)");
  return {E.one(), *b};
}

bool quat_regular(const QuadExt& E, const QuatElem& x) {
  auto certain = [&](const EElem& z) {
    if (E.flavor == ExtFlavor::Split) return !certain_zero(z.a) && !certain_zero(z.b);
    return !certain_zero(z.a);
  };
  return certain(x.a) && certain(x.b);
}

Mat2F g1_embed(const QuadExt& E, const EElem& z) {
  auto [x, y] = E.components(z);
  const FqField& F = *E.Fres;
  if (E.flavor == ExtFlavor::RamifiedTame) return {x, y.scaled(E.u).shifted(1), y, x};
  if (F.p == 2) return {x, y, y.scaled(E.tau), x + y};
  return {x, y, y.scaled(E.u), x};
}

Mat2F g1_j(const QuadExt& E) {
  const FqField& F = *E.Fres;
  LocalElem one = LocalElem::one(F), zero = LocalElem::zero_of(F);
  if (F.p == 2) return {one, zero, one, one};
  return {one, zero, zero, -one};
}

Mat2F g1_matrix(const QuadExt& E, const QuatElem& x) {
  Mat2F ea = g1_embed(E, x.a), eb = mat_mul(g1_embed(E, x.b), g1_j(E));
  Mat2F r;
  for (int i = 0; i < 4; ++i) r.m[i] = ea.m[i] + eb.m[i];
  return r;
}

QuatElem g1_decompose(const QuadExt& E, const Mat2F& g) {
  const FqField& F = *E.Fres;
  const LocalElem &al = g.m[0], &be = g.m[1], &ga = g.m[2], &de = g.m[3];
  LocalElem a1(F), b1(F), a2(F), b2(F);
  if (F.p == 2) {
    b1 = al + de;
    b2 = al + be + de;
    a2 = ga + be.scaled(E.tau) + b2;
    a1 = al + ga + be.scaled(E.tau);
  } else {
    int h = F.inv(F.from_int(2));
    LocalElem gu = ga.scaled(F.inv(E.u));
    a1 = (al + de).scaled(h);
    a2 = (al - de).scaled(h);
    b1 = (be + gu).scaled(h);
    b2 = (gu - be).scaled(h);
  }
  return {E.make(a1, b1), E.make(a2, b2)};
}

int cartan_c(const Mat2F& g) {
  LocalElem d = mat_det(g);
  return d.v() - 2 * mat_min_val(g);
}

std::pair<int, int> smith_divisors(const Mat2F& g) {
  int d1 = mat_min_val(g);
  return {d1, mat_det(g).v() - d1};
}

std::vector<Mat2F> hecke_coset_reps(const FqField& F, int m) {
  if (m < 0) throw ConfigError("negative determinant valuation");
  std::vector<Mat2F> out;
  LocalElem zero = LocalElem::zero_of(F);
  for (int a = 0; a <= m; ++a) {
    long count = 1;
    for (int i = 0; i < a; ++i) count *= F.q;
    for (long code = 0; code < count; ++code) {
      std::vector<int> digits(std::max(1, a), 0);
      long c = code;
      for (int i = 0; i < a; ++i) {
        digits[i] = static_cast<int>(c % F.q);
        c /= F.q;
      }
      LocalElem r = LocalElem::from_coeffs(F, 0, digits);
      out.push_back({LocalElem::t_pow(F, a), r, zero, LocalElem::t_pow(F, m - a)});
    }
  }
  return out;
}

bool split_is_singular(const Mat2F& s) {
  auto nz = [&](const LocalElem& e) { return !certain_zero(e); };
  auto z = [&](const LocalElem& e) { return certain_zero(e); };
  const LocalElem &al = s.m[0], &be = s.m[1], &ga = s.m[2], &de = s.m[3];
  if (z(ga) && nz(al) && nz(de)) return true;   // C
  if (z(de) && nz(be) && nz(ga)) return true;   // Cw
  if (z(al) && nz(be) && nz(ga)) return true;   // wC
  if (z(be) && nz(al) && nz(de)) return true;   // wCw
  return false;
}

int abs_exponent2(const QuadExt& E, const EElem& z) {
  // |z| = q^{-vE(z) * (2/e) / 2} ... exponent2 = 2 vE / e
  return 2 * E.vE(z) / E.e;
}

int imag_exponent2(const QuadExt& E, const EElem& z) {
  auto [x, y] = E.components(z);
  if (certain_zero(y)) throw NonRegularInput("point lies on the boundary F");
  if (E.flavor == ExtFlavor::Unramified) return 2 * y.v();
  if (E.flavor == ExtFlavor::RamifiedTame) return 2 * y.v() + 1;
  throw Error("half plane needs a field");
}

int distance_exponent2(const QuadExt& E, const EElem& z1, const EElem& z2) {
  EElem d = E.sub(z1, z2);
  return 2 * abs_exponent2(E, d) - imag_exponent2(E, z1) - imag_exponent2(E, z2);
}

EElem moebius(const QuadExt& E, const Mat2F& g, const EElem& z, int relprec) {
  EElem num = E.add(E.mul(E.from_F(g.m[0]), z), E.from_F(g.m[1]));
  EElem den = E.add(E.mul(E.from_F(g.m[2]), z), E.from_F(g.m[3]));
  return E.mul(num, E.inv(den, relprec));
}

EElem torus_fixed_point(const QuadExt& E, int relprec) {
  (void)relprec;
  const FqField& F = *E.Fres;
  switch (E.flavor) {
    case ExtFlavor::Unramified:
      if (F.p == 2) return {LocalElem::residue(*E.Eres, E.Eres->inv(E.omega)), LocalElem()};
      return E.make(LocalElem::zero_of(F), LocalElem::residue(F, F.inv(E.u)));
    case ExtFlavor::RamifiedTame:
      return E.unif();
    case ExtFlavor::Split:
      break;
  }
  throw Error("no fixed point for the split algebra");
}

}  // namespace rtflab
