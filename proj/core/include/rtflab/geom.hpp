#pragma once
#include <vector>

#include "rtflab/quadext.hpp"

namespace rtflab {

// 2x2 matrix over E, row major
struct Mat2E {
  EElem m[4];
};

// 2x2 matrix over F, row major
struct Mat2F {
  LocalElem m[4];
};

Mat2E mat_mul(const QuadExt& E, const Mat2E& x, const Mat2E& y);
EElem mat_det(const QuadExt& E, const Mat2E& x);
Mat2E mat_conj_transpose(const QuadExt& E, const Mat2E& x);

Mat2F mat_mul(const Mat2F& x, const Mat2F& y);
LocalElem mat_det(const Mat2F& x);
bool mat_integral(const Mat2F& x);
// min entry valuation; requires at least one entry of certain valuation
int mat_min_val(const Mat2F& x);

// Hermitian space: gamma(x) = [[x,1],[1,1]]
Mat2E gamma_of_x(const QuadExt& E, const LocalElem& x);
// orbit action (a, z) . s = z * diag(a,1) s diag(conj(a),1)
Mat2E herm_action(const QuadExt& E, const EElem& a, const LocalElem& z, const Mat2E& s);
// invariants of s = [[alpha, beta],[conj(beta), delta]]
LocalElem inv_S(const QuadExt& E, const Mat2E& s, int relprec = 48);
LocalElem invp_S(const QuadExt& E, const Mat2E& s, int relprec = 48);
// the w-cell test: s lies over the quaternion side iff -det(s) is a norm
bool in_w_cell(const QuadExt& E, const Mat2E& s);

// quaternion algebra E + E j, j^2 = eps in F^x, j z = conj(z) j
struct QuatElem {
  EElem a, b;
};

QuatElem quat_mul(const QuadExt& E, const LocalElem& eps, const QuatElem& x, const QuatElem& y);
QuatElem quat_conj(const QuadExt& E, const QuatElem& x);  // main involution a - b j
LocalElem quat_det(const QuadExt& E, const LocalElem& eps, const QuatElem& x);
QuatElem quat_inv(const QuadExt& E, const LocalElem& eps, const QuatElem& x, int relprec = 48);
// matrix model [[a, b eps],[conj(b), conj(a)]]
Mat2E quat_matrix(const QuadExt& E, const LocalElem& eps, const QuatElem& x);
// invariants on G_eps - T_eps
LocalElem inv_T(const QuadExt& E, const LocalElem& eps, const QuatElem& x, int relprec = 48);
LocalElem invp_T(const QuadExt& E, const LocalElem& eps, const QuatElem& x, int relprec = 48);
// delta(x) = 1 + b j with eps Nm(b) = x; requires x/eps a norm
QuatElem delta_of_x(const QuadExt& E, const LocalElem& eps, const LocalElem& x, int relprec = 48);
bool quat_regular(const QuadExt& E, const QuatElem& x);

// G_1 = GL_2(F) model of the quaternion algebra at eps = 1 (E unramified):
// p odd:  a + b omega -> [[a, b],[u b, a]],           j -> diag(1, -1)
// p = 2:  a + b xi    -> [[a, b],[b tau, a + b]],     j -> [[1, 0],[1, 1]]
Mat2F g1_embed(const QuadExt& E, const EElem& z);
Mat2F g1_j(const QuadExt& E);
Mat2F g1_matrix(const QuadExt& E, const QuatElem& x);  // embed(a) + embed(b) j
QuatElem g1_decompose(const QuadExt& E, const Mat2F& g);

// Cartan coordinate of an integral matrix: g in K h_c K Z-translates;
// c(g) = v(det g) - 2 min-val(g)
int cartan_c(const Mat2F& g);
// elementary divisors (d1 <= d2) of an integral matrix
std::pair<int, int> smith_divisors(const Mat2F& g);

// coset representatives of {g in M_2(O) : v(det g) = m} / K: upper
// triangular [[t^a, r],[0, t^(m-a)]], r mod p^a
std::vector<Mat2F> hecke_coset_reps(const FqField& F, int m);

// split-model singular set: the four cells C, Cw, wC, wCw
bool split_is_singular(const Mat2F& s);

// upper half plane over E at the infinite place
// twice the exponent of |z|_i = inf_{a in F} |z - a| (|.| normalized so
// |t| = 1/q; the factor 2 keeps ramified half-integer exponents integral)
int imag_exponent2(const QuadExt& E, const EElem& z);
int abs_exponent2(const QuadExt& E, const EElem& z);
// twice the exponent of d(z1, z2) = |z1 - z2|^2 / (|z1|_i |z2|_i)
int distance_exponent2(const QuadExt& E, const EElem& z1, const EElem& z2);
// Moebius action of g in GL_2(F) on z
EElem moebius(const QuadExt& E, const Mat2F& g, const EElem& z, int relprec = 48);
// the torus fixed point on the half plane (p odd: 1/omega; p = 2: 1/xi)
EElem torus_fixed_point(const QuadExt& E, int relprec = 48);

}  // namespace rtflab
