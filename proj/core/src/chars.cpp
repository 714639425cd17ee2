#include "rtflab/chars.hpp"

#include <algorithm>

namespace rtflab {

const CycloRing& gauss_ring(const FqField& f) {
  return CycloRing::get(f.p, std::max(1, f.q - 1));
}

CycloValue MultiplicativeCharacter::value(const CycloRing& R, const LocalElem& x) const {
  int v = x.v();
  if (x.is_exact_zero()) throw Error("character of zero");
  int M = std::max(1, F->q - 1);
  int u0 = x.coeff(v);
  long b = (static_cast<long>(e) * F->dlog(u0)) % M;
  long a = 0;
  if (lam != 0) a = F->trace_to_prime(F->mul(lam, F->mul(x.coeff(v + 1), F->inv(u0))));
  a += static_cast<long>(v) * unif_a;
  b += static_cast<long>(v) * unif_b;
  mpq_class s = (unif_sign < 0 && (v % 2 != 0)) ? -1 : 1;
  return CycloValue::root(R, static_cast<int>(a % F->p), static_cast<int>(b % M), s);
}

CycloValue MultiplicativeCharacter::value_at_unif_pow(const CycloRing& R, long n) const {
  int M = std::max(1, F->q - 1);
  mpq_class s = (unif_sign < 0 && (n % 2 != 0)) ? -1 : 1;
  return CycloValue::root(R, static_cast<int>((n * unif_a) % F->p),
                          static_cast<int>((n * unif_b) % M), s);
}

GaussValue gauss_sum(const MultiplicativeCharacter& chi, const AdditiveCharacter& psi, int n,
                     const LocalElem* twist) {
  const FqField& f = *psi.F;
  const CycloRing& R = gauss_ring(f);
  if (twist && twist->is_exact_zero()) throw ConfigError("zero twist");
  if (twist && !twist->exact()) throw PrecisionUnderflow("gauss twist must be exact");
  int vtw = twist ? twist->v() : 0;
  // psi(a t^n x) reads the unit digits of x up to index -c(psi)-1 - v(a) - n
  int depth = std::max({1, chi.conductor(), -psi.c - vtw - n});
  int p = f.p, q = f.q;
  int M = std::max(1, q - 1);
  // the additive exponent is Tr(lam u1/u0 + sum_j w_j u_j) with fixed weights
  std::vector<int> w(depth, 0);
  for (int j = 0; j < depth; ++j) {
    int idx = -psi.c - 1 - n - j;
    w[j] = twist ? twist->coeff(idx) : (idx == 0 ? 1 : 0);
  }
  std::vector<long> cnt(static_cast<size_t>(p) * M, 0);
  std::vector<int> u(depth, 0);
  u[0] = 1;
  long count = 0;
  while (true) {
    int dot = 0;
    for (int j = 0; j < depth; ++j)
      if (u[j] && w[j]) dot = f.add(dot, f.mul(u[j], w[j]));
    if (chi.lam != 0 && depth >= 2)
      dot = f.add(dot, f.mul(chi.lam, f.mul(u[1], f.inv(u[0]))));
    int a = f.trace_to_prime(dot);
    int b = M > 1 ? static_cast<int>((static_cast<long>(chi.e) * f.dlog(u[0])) % M) : 0;
    ++cnt[static_cast<size_t>(a) * M + b];
    ++count;
    int j = depth - 1;
    for (; j >= 1; --j) {
      if (++u[j] < q) break;
      u[j] = 0;
    }
    if (j == 0 && ++u[0] >= q) break;
  }
  CycloValue acc(R);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < M; ++b) {
      long c = cnt[static_cast<size_t>(a) * M + b];
      if (c != 0) acc = acc + CycloValue::root(R, a, b, mpq_class(c));
    }
  GaussValue g;
  g.v = acc * chi.value_at_unif_pow(R, n) * mpq_class(1, count);
  g.q_half = psi.c;
  return g;
}

GaussValue two_ball_combination(const MultiplicativeCharacter& eta, const AdditiveCharacter& psi,
                                const LocalElem& trxi1, int l1, const LocalElem& trxi2, int l2,
                                int cE) {
  const FqField& f = *psi.F;
  const CycloRing& R = gauss_ring(f);
  int v1 = trxi1.v(), v2 = trxi2.v();
  int nlo = std::min(-(l1 + cE), -(l2 + cE)) - 2;
  int nhi = std::max(-psi.c - v1, -psi.c - v2) + 2;
  CycloValue acc(R);
  for (int n = nlo; n <= nhi; ++n) {
    bool in1 = n >= -(l1 + cE), in2 = n >= -(l2 + cE);
    if (!in1 && !in2) continue;
    GaussValue t2 = in2 ? gauss_sum(eta, psi, n, &trxi2) : GaussValue{CycloValue(R), psi.c};
    GaussValue t1 = in1 ? gauss_sum(eta, psi, n, &trxi1) : GaussValue{CycloValue(R), psi.c};
    acc = acc + (t2.v - t1.v);
  }
  return GaussValue{acc, psi.c};
}

}  // namespace rtflab
