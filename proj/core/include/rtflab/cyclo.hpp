#pragma once
#include <gmpxx.h>

#include <string>
#include <vector>

#include "rtflab/errors.hpp"

namespace rtflab {

// Q(zeta_p, zeta_M) realized as Q[x,y]/(Phi_p(x), Phi_M(y)), canonical basis
// x^i y^j with i < p-1, j < phi(M). Vanishing in this ring is vanishing of the
// complex value, which is what the Gauss-sum support laws assert.
class CycloRing {
 public:
  int p, M, dx, dy;

  static const CycloRing& get(int p, int M);

  // reduced coordinates of x^a y^b (group exponents a mod p, b mod M)
  const std::vector<mpq_class>& monomial(int a, int b) const;
  // reduced coordinates of basis product x^(i1+i2) y^(j1+j2)
  const std::vector<mpq_class>& basis_product(int i1, int j1, int i2, int j2) const;

  CycloRing(const CycloRing&) = delete;

 private:
  CycloRing(int p, int M);
  std::vector<std::vector<mpq_class>> mono_;  // (a mod p)*M + (b mod M)
  std::vector<std::vector<mpq_class>> prod_;  // (i1+i2)*(2dy) + (j1+j2)
};

class CycloValue {
 public:
  CycloValue() : R_(nullptr) {}
  explicit CycloValue(const CycloRing& R) : R_(&R), co_(R.dx * R.dy, 0) {}

  static CycloValue zero(const CycloRing& R) { return CycloValue(R); }
  static CycloValue rational(const CycloRing& R, const mpq_class& r) {
    CycloValue v(R);
    v.co_[0] = r;
    return v;
  }
  // c * zeta_p^a * zeta_M^b
  static CycloValue root(const CycloRing& R, int a, int b, const mpq_class& c = 1);

  const CycloRing& ring() const { return *R_; }
  bool is_zero() const;
  bool is_rational() const;
  mpq_class rational_part() const { return co_.empty() ? mpq_class(0) : co_[0]; }

  CycloValue operator+(const CycloValue& o) const;
  CycloValue operator-(const CycloValue& o) const;
  CycloValue operator*(const CycloValue& o) const;
  CycloValue operator*(const mpq_class& s) const;
  CycloValue conj() const;
  // v * conj(v); rational and nonnegative
  mpq_class mag2() const;
  bool operator==(const CycloValue& o) const;

  std::string str() const;

 private:
  const CycloRing* R_;
  std::vector<mpq_class> co_;
};

}  // namespace rtflab
