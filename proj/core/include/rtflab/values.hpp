#pragma once
#include <gmpxx.h>

#include <array>
#include <map>
#include <string>

namespace rtflab {

// Laurent polynomial in the formal character values xi1, xi2 (nonsplit values
// only use xi1, rendered "xi"; split orbitals use both)
struct XiPoly {
  std::map<std::array<int, 2>, mpq_class> c;

  static XiPoly mono(int i, int j, const mpq_class& v) {
    XiPoly r;
    if (v != 0) r.c[{i, j}] = v;
    return r;
  }
  static XiPoly constant(const mpq_class& v) { return mono(0, 0, v); }

  void add_mono(int i, int j, const mpq_class& v);
  XiPoly operator+(const XiPoly& o) const;
  XiPoly operator-(const XiPoly& o) const;
  XiPoly operator*(const mpq_class& s) const;
  XiPoly shifted(int di, int dj) const;  // times xi1^di xi2^dj
  bool is_zero() const;
  bool operator==(const XiPoly& o) const { return (*this - o).is_zero(); }
  mpq_class coeff_sum() const;
  std::string str() const;
};

// coefficient times (-log q^grade), scaled by q^(q_half/2); two values agree
// iff the folded c1*grade1 == c2*grade2 with the same residual q_half
struct LogValue {
  XiPoly c;
  int grade = 1;
  int q_half = 0;
  long q = 0;

  LogValue normalized() const;  // fold even q_half into c
  bool operator==(const LogValue& o) const;
  bool is_zero() const { return c.is_zero(); }
  std::string str() const;
};

// orbital integral as a function of s through T = q_E^{-s}: a Laurent
// polynomial in T with XiPoly coefficients, times a global q^(q_half/2)
struct OrbitalValue {
  std::map<int, XiPoly> tc;
  int q_half = 0;
  int e_res_deg = 1;  // residue degree of E over F
  long q = 0;         // residue size of F, for folding q_half

  void add_term(int texp, int xi1, int xi2, const mpq_class& v);
  OrbitalValue operator+(const OrbitalValue& o) const;
  OrbitalValue operator*(const mpq_class& s) const;
  OrbitalValue shifted_xi(int di, int dj) const;
  XiPoly value_at_zero() const;
  LogValue derivative_at_zero() const;  // grade = e_res_deg
  // fold even part of q_half into the coefficients, drop zero terms
  OrbitalValue normalized() const;
  bool operator==(const OrbitalValue& o) const;
  bool is_zero() const;
  std::string str() const;
};

std::string render_q_half(int q_half);

}  // namespace rtflab
