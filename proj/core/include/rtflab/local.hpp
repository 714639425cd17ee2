#pragma once
#include <climits>
#include <cstdint>
#include <string>
#include <vector>

#include "rtflab/fq.hpp"

namespace rtflab {

// Truncated formal Laurent series over F_q in the uniformizer t.
// Coefficients at indices i < prec are exact; prec == EXACT means the element
// is a genuine Laurent polynomial. An element that is zero up to its precision
// is kept in an explicit zero state (val is then meaningless).
struct LocalElem {
  static constexpr int EXACT = INT_MAX / 4;

  const FqField* F = nullptr;
  bool zero = true;
  int val = 0;
  int prec = EXACT;
  std::vector<int16_t> c;  // c[j] is the coefficient of t^(val+j); c[0] != 0

  LocalElem() = default;
  explicit LocalElem(const FqField& f) : F(&f) {}

  static LocalElem zero_of(const FqField& f) { return LocalElem(f); }
  static LocalElem from_coeffs(const FqField& f, int val, const std::vector<int>& coeffs);
  static LocalElem one(const FqField& f) { return from_coeffs(f, 0, {1}); }
  static LocalElem t_pow(const FqField& f, int k) { return from_coeffs(f, k, {1}); }
  // the residue r (0..q-1) times t^k
  static LocalElem residue(const FqField& f, int r, int k = 0) {
    return from_coeffs(f, k, {r});
  }

  bool is_exact_zero() const { return zero && prec == EXACT; }
  bool exact() const { return prec == EXACT; }

  // valuation; EXACT sentinel for the exact zero, throws for truncated zero
  int v() const;
  // is v(x) >= n decidable from the tracked coefficients?
  bool vge(int n) const;
  // coefficient of t^i; throws PrecisionUnderflow at or beyond prec
  int coeff(int i) const;

  LocalElem operator-() const;
  LocalElem operator+(const LocalElem& o) const;
  LocalElem operator-(const LocalElem& o) const { return *this + (-o); }
  LocalElem operator*(const LocalElem& o) const;
  bool operator==(const LocalElem& o) const;

  // multiplicative inverse to relative precision min(own, relprec)
  LocalElem inv(int relprec = 64) const;
  LocalElem div(const LocalElem& o, int relprec = 64) const { return *this * o.inv(relprec); }
  // forget coefficients at indices >= abs_prec
  LocalElem truncated(int abs_prec) const;
  LocalElem scaled(int r) const;       // times a residue
  LocalElem shifted(int k) const;      // times t^k
  bool congruent(const LocalElem& o, int n) const { return (*this - o).vge(n); }

  std::string str() const;

 private:
  void normalize();
};

// parse the element literal grammar: sums of c*t^k, coefficients integers or
// residue generator powers g^j, e.g. "g^2*t^-1 + 1 + 2*t^3"
LocalElem parse_local(const FqField& f, const std::string& s);

// representatives of t^n u, u a unit known mod t^N (N >= 1):
// count q^(N-1)(q-1), exact elements
std::vector<LocalElem> shell_representatives(const FqField& f, int n, int N,
                                             long budget = 50'000'000);

}  // namespace rtflab
