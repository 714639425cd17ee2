#include "rtflab/fq.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace rtflab {
namespace {

using Poly = std::vector<int>;  // coeffs mod p, low to high, no trailing zeros

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmul(const Poly& a, const Poly& b, int p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

// reduce a mod monic f
Poly pmod(Poly a, const Poly& f, int p) {
  trim(a);
  int df = static_cast<int>(f.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= df) {
    int da = static_cast<int>(a.size()) - 1;
    int c = a.back();
    for (int i = 0; i <= df; ++i) {
      int& t = a[da - df + i];
      t = ((t - c * f[i]) % p + p) % p;
    }
    trim(a);
  }
  return a;
}

Poly ppowmod(Poly base, long e, const Poly& f, int p) {
  Poly r{1};
  base = pmod(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) r = pmod(pmul(r, base, p), f, p);
    base = pmod(pmul(base, base, p), f, p);
    e >>= 1;
  }
  return r;
}

// x^(p^e) mod f
Poly frob_pow_poly(int e, const Poly& f, int p) {
  Poly r{0, 1};
  for (int i = 0; i < e; ++i) r = ppowmod(r, p, f, p);
  return r;
}

bool irreducible(const Poly& f, int p) {
  int k = static_cast<int>(f.size()) - 1;
  if (k == 1) return true;
  // x^(p^k) == x mod f
  Poly xpk = frob_pow_poly(k, f, p);
  if (xpk != Poly{0, 1}) return false;
  // for every prime divisor d of k: x^(p^(k/d)) != x
  for (int d = 2; d <= k; ++d) {
    if (k % d != 0) continue;
    bool prime = true;
    for (int e = 2; e * e <= d; ++e)
      if (d % e == 0) prime = false;
    if (!prime) continue;
    if (frob_pow_poly(k / d, f, p) == Poly{0, 1}) return false;
  }
  return true;
}

std::vector<long> prime_divisors(long n) {
  std::vector<long> r;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      r.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) r.push_back(n);
  return r;
}

}  // namespace

FqField::FqField(int p_, int k_) : p(p_), k(k_) {
  if (p < 2 || k < 1) throw ConfigError("bad field parameters");
  long qq = 1;
  for (int i = 0; i < k; ++i) {
    qq *= p;
    if (qq > 4096) throw ConfigError("field too large (q > 4096)");
  }
  q = static_cast<int>(qq);

  // smallest monic irreducible of degree k over F_p, ordered by the code
  // sum tail[i] p^i of its non-leading coefficients
  Poly f(k + 1, 0);
  f[k] = 1;
  if (k == 1) {
    tail_ = {0};
  } else {
    long code = 0;
    for (;; ++code) {
      long c = code;
      for (int i = 0; i < k; ++i) {
        f[i] = static_cast<int>(c % p);
        c /= p;
      }
      if (irreducible(f, p)) break;
      if (code > qq) throw Error("no irreducible found");
    }
    tail_.assign(k, 0);
    // x^k = -(f_0 + f_1 x + ...) mod f
    for (int i = 0; i < k; ++i) tail_[i] = (p - f[i]) % p;
  }
  for (int i = 0; i < k; ++i) f[i] = (p - tail_[i]) % p;
  f[k] = 1;

  auto decode = [&](int a) {
    Poly r;
    for (int i = 0; i < k; ++i) {
      r.push_back(a % p);
      a /= p;
    }
    trim(r);
    return r;
  };
  auto encode = [&](const Poly& a) {
    int r = 0;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) r = r * p + a[i];
    return r;
  };

  // smallest primitive element
  auto divs = prime_divisors(q - 1);
  for (int a = 2; a < q; ++a) {
    Poly pa = decode(a);
    bool prim = true;
    for (long d : divs) {
      if (encode(ppowmod(pa, (q - 1) / d, f, p)) == 1) {
        prim = false;
        break;
      }
    }
    if (prim) {
      gen_ = a;
      break;
    }
  }
  if (gen_ == 0 && q == 2) gen_ = 1;
  if (gen_ == 0) throw Error("no generator found");

  pow_.assign(q - 1, 0);
  dlog_.assign(q, -1);
  Poly g = decode(gen_), acc{1};
  for (int i = 0; i < q - 1; ++i) {
    pow_[i] = encode(acc);
    dlog_[pow_[i]] = i;
    acc = pmod(pmul(acc, g, p), f, p);
  }
  if (encode(acc) != 1) throw Error("generator order check failed");

  frob_.assign(q, 0);
  trace_.assign(q, 0);
  for (int a = 0; a < q; ++a) {
    frob_[a] = encode(ppowmod(decode(a), p, f, p));
  }
  for (int a = 0; a < q; ++a) {
    // sum of conjugates a^(p^i); lands in F_p, i.e. a single digit
    int t = 0, c = a;
    for (int i = 0; i < k; ++i) {
      t = add(t, c);
      c = frob_[c];
    }
    trace_[a] = t;
  }
}

int FqField::add(int a, int b) const {
  int r = 0, m = 1;
  while (a > 0 || b > 0) {
    r += ((a % p + b % p) % p) * m;
    a /= p;
    b /= p;
    m *= p;
  }
  return r;
}

int FqField::neg(int a) const {
  int r = 0, m = 1;
  while (a > 0) {
    r += ((p - a % p) % p) * m;
    a /= p;
    m *= p;
  }
  return r;
}

int FqField::pow(int a, long e) const {
  if (a == 0) {
    if (e < 0) throw InversionOfZero();
    return e == 0 ? 1 : 0;
  }
  long d = (dlog_[a] * (e % (q - 1))) % (q - 1);
  if (d < 0) d += q - 1;
  return pow_[d];
}

int FqField::frob_pow(int a, int m) const {
  m %= k;
  if (m < 0) m += k;
  for (int i = 0; i < m; ++i) a = frob_[a];
  return a;
}

const FqField& FqField::get(int p, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<FqField>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto& slot = cache[{p, k}];
  if (!slot) slot.reset(new FqField(p, k));
  return *slot;
}

}  // namespace rtflab
