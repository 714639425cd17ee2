#pragma once
#include <cstdint>
#include <vector>

#include "rtflab/errors.hpp"

namespace rtflab {

// F_q, q = p^k. Elements are encoded as 0..q-1: the base-p digit string
// (d_0, d_1, ..., d_{k-1}) encodes d_0 + d_1 x + ... + d_{k-1} x^{k-1} in
// F_p[x]/(f), f the lexicographically smallest monic irreducible of degree k.
// Addition is digitwise mod p; multiplication goes through discrete-log
// tables on the smallest primitive element.
class FqField {
 public:
  int p, k, q;

  static const FqField& get(int p, int k);

  int add(int a, int b) const;
  int neg(int a) const;
  int sub(int a, int b) const { return add(a, neg(b)); }
  int mul(int a, int b) const {
    if (a == 0 || b == 0) return 0;
    return pow_[(dlog_[a] + dlog_[b]) % (q - 1)];
  }
  int inv(int a) const {
    if (a == 0) throw InversionOfZero("inversion of zero residue");
    return pow_[(q - 1 - dlog_[a]) % (q - 1)];
  }
  int pow(int a, long e) const;
  int gen() const { return gen_; }
  int dlog(int a) const {
    if (a == 0) throw Error("dlog of zero");
    return dlog_[a];
  }
  // x -> x^(p^m)
  int frob_pow(int a, int m) const;
  // Tr_{F_q / F_p}, value in 0..p-1
  int trace_to_prime(int a) const { return trace_[a]; }
  int from_int(long n) const {
    long r = n % p;
    return static_cast<int>(r < 0 ? r + p : r);
  }
  bool is_square(int a) const {
    if (a == 0) return true;
    if (p == 2) return true;
    return dlog_[a] % 2 == 0;
  }
  // reduction polynomial: x^k = modpoly_tail (k digits, low to high)
  const std::vector<int>& modpoly_tail() const { return tail_; }

  FqField(const FqField&) = delete;

 private:
  FqField(int p, int k);
  std::vector<int> pow_, dlog_, trace_, tail_;
  std::vector<int> frob_;  // x -> x^p table
  int gen_ = 0;
};

}  // namespace rtflab
