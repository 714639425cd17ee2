#pragma once
#include "rtflab/cyclo.hpp"
#include "rtflab/local.hpp"

namespace rtflab {

// psi_c(x) = zeta_p^{Tr(coefficient of t^(-c-1) in x)}:
// trivial on p^{-c}, nontrivial on p^{-c-1}
struct AdditiveCharacter {
  const FqField* F = nullptr;
  int c = 0;

  AdditiveCharacter(const FqField& f, int cond) : F(&f), c(cond) {}
  // exponent of zeta_p, in 0..p-1
  int exponent(const LocalElem& x) const {
    if (x.zero && x.prec > -c - 1) return 0;
    return F->trace_to_prime(x.coeff(-c - 1));
  }
  CycloValue value(const CycloRing& R, const LocalElem& x) const {
    return CycloValue::root(R, exponent(x), 0);
  }
};

// Character of F^x of conductor <= 2: on units t^0(u0 + u1 t + ...),
//   chi = zeta_M^{e dlog(u0)} * zeta_p^{Tr(lam * u1/u0)},  M = q-1,
// and chi(t) = unif_sign * zeta_p^{unif_a} * zeta_M^{unif_b}.
struct MultiplicativeCharacter {
  const FqField* F = nullptr;
  int e = 0;         // tame exponent mod M
  int lam = 0;       // level-2 parameter (conductor 2 iff nonzero)
  int unif_sign = 1; // +1 or -1
  int unif_a = 0, unif_b = 0;

  static MultiplicativeCharacter trivial(const FqField& f) {
    MultiplicativeCharacter x;
    x.F = &f;
    return x;
  }
  // the unramified quadratic character (chi(t) = -1, trivial on units)
  static MultiplicativeCharacter unramified_quadratic(const FqField& f) {
    MultiplicativeCharacter x;
    x.F = &f;
    x.unif_sign = -1;
    return x;
  }

  int conductor() const {
    if (lam != 0) return 2;
    if (F->q > 2 && e % (F->q - 1) != 0) return 1;
    return 0;
  }
  CycloValue value(const CycloRing& R, const LocalElem& x) const;
  CycloValue value_at_unif_pow(const CycloRing& R, long n) const;
};

struct GaussValue {
  CycloValue v;
  int q_half = 0;  // value is v * q^(q_half/2)
};

const CycloRing& gauss_ring(const FqField& f);

// tau_n(chi, psi) = integral over O^x of chi(t^n x) psi(a t^n x) d^x x,
// Vol(O^x) = q^(c(psi)/2); twist a defaults to 1
GaussValue gauss_sum(const MultiplicativeCharacter& chi, const AdditiveCharacter& psi, int n,
                     const LocalElem* twist = nullptr);

// integral over F^x of (psi(trxi2 b) 1_{v(b) >= -(l2+cE)} - psi(trxi1 b) 1_{v(b) >= -(l1+cE)}) eta(b)
// evaluated shell by shell; finite support
GaussValue two_ball_combination(const MultiplicativeCharacter& eta, const AdditiveCharacter& psi,
                                const LocalElem& trxi1, int l1, const LocalElem& trxi2, int l2,
                                int cE);

}  // namespace rtflab
