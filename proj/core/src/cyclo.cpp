#include "rtflab/cyclo.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace rtflab {
namespace {

using ZPoly = std::vector<mpz_class>;  // low to high

void trim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// exact division by a monic divisor
ZPoly divide_monic(ZPoly num, const ZPoly& den) {
  trim(num);
  ZPoly quo(num.empty() ? 0 : (num.size() >= den.size() ? num.size() - den.size() + 1 : 0), 0);
  while (num.size() >= den.size()) {
    mpz_class c = num.back();
    size_t off = num.size() - den.size();
    quo[off] = c;
    for (size_t i = 0; i < den.size(); ++i) num[off + i] -= c * den[i];
    trim(num);
  }
  if (!num.empty()) throw Error("inexact cyclotomic division");
  return quo;
}

ZPoly cyclotomic(int n) {
  ZPoly num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) num = divide_monic(std::move(num), cyclotomic(d));
  return num;
}

// reduce y^e (e >= 0) mod monic Phi of degree dy to a length-dy row
std::vector<mpq_class> reduce_power(int e, const ZPoly& phi) {
  int dy = static_cast<int>(phi.size()) - 1;
  std::vector<mpq_class> row(dy, 0);
  if (dy == 0) throw Error("degenerate cyclotomic modulus");
  std::vector<mpq_class> cur(dy, 0);
  cur[0] = 1;
  for (int step = 0; step < e; ++step) {
    // multiply by y
    mpq_class top = dy >= 1 ? cur[dy - 1] : mpq_class(0);
    for (int i = dy - 1; i >= 1; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0)
      for (int i = 0; i < dy; ++i) cur[i] -= top * mpq_class(phi[i]);
  }
  return cur;
}

}  // namespace

CycloRing::CycloRing(int p_, int M_) : p(p_), M(M_) {
  ZPoly phip = cyclotomic(p);
  ZPoly phim = cyclotomic(M);
  dx = static_cast<int>(phip.size()) - 1;
  dy = static_cast<int>(phim.size()) - 1;

  // reduced rows for x^a (a < 2p) and y^b (b < 2M or 2dy, whichever larger)
  int xmax = 2 * p, ymax = 2 * (M > dy ? M : dy) + 2;
  std::vector<std::vector<mpq_class>> xr(xmax), yr(ymax);
  for (int a = 0; a < xmax; ++a) xr[a] = reduce_power(a, phip);
  for (int b = 0; b < ymax; ++b) yr[b] = reduce_power(b, phim);

  auto outer = [&](const std::vector<mpq_class>& X, const std::vector<mpq_class>& Y) {
    std::vector<mpq_class> r(dx * dy, 0);
    for (int i = 0; i < dx; ++i)
      for (int j = 0; j < dy; ++j) r[i * dy + j] = X[i] * Y[j];
    return r;
  };

  mono_.resize(p * M);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < M; ++b) mono_[a * M + b] = outer(xr[a], yr[b]);

  prod_.resize((2 * dx) * (2 * dy));
  for (int i = 0; i < 2 * dx - 1; ++i)
    for (int j = 0; j < 2 * dy - 1; ++j) prod_[i * (2 * dy) + j] = outer(xr[i], yr[j]);
}

const std::vector<mpq_class>& CycloRing::monomial(int a, int b) const {
  a %= p;
  if (a < 0) a += p;
  b %= M;
  if (b < 0) b += M;
  return mono_[a * M + b];
}

const std::vector<mpq_class>& CycloRing::basis_product(int i1, int j1, int i2, int j2) const {
  return prod_[(i1 + i2) * (2 * dy) + (j1 + j2)];
}

const CycloRing& CycloRing::get(int p, int M) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<CycloRing>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto& slot = cache[{p, M}];
  if (!slot) slot.reset(new CycloRing(p, M));
  return *slot;
}

CycloValue CycloValue::root(const CycloRing& R, int a, int b, const mpq_class& c) {
  CycloValue v(R);
  const auto& m = R.monomial(a, b);
  for (size_t i = 0; i < m.size(); ++i) v.co_[i] = c * m[i];
  return v;
}

bool CycloValue::is_zero() const {
  for (const auto& c : co_)
    if (c != 0) return false;
  return true;
}

bool CycloValue::is_rational() const {
  for (size_t i = 1; i < co_.size(); ++i)
    if (co_[i] != 0) return false;
  return true;
}

CycloValue CycloValue::operator+(const CycloValue& o) const {
  CycloValue r = *this;
  for (size_t i = 0; i < co_.size(); ++i) r.co_[i] += o.co_[i];
  return r;
}

CycloValue CycloValue::operator-(const CycloValue& o) const {
  CycloValue r = *this;
  for (size_t i = 0; i < co_.size(); ++i) r.co_[i] -= o.co_[i];
  return r;
}

CycloValue CycloValue::operator*(const CycloValue& o) const {
  CycloValue r(*R_);
  int dx = R_->dx, dy = R_->dy;
  for (int i1 = 0; i1 < dx; ++i1)
    for (int j1 = 0; j1 < dy; ++j1) {
      const mpq_class& a = co_[i1 * dy + j1];
      if (a == 0) continue;
      for (int i2 = 0; i2 < dx; ++i2)
        for (int j2 = 0; j2 < dy; ++j2) {
          const mpq_class& b = o.co_[i2 * dy + j2];
          if (b == 0) continue;
          mpq_class ab = a * b;
          const auto& row = R_->basis_product(i1, j1, i2, j2);
          for (size_t m = 0; m < row.size(); ++m)
            if (row[m] != 0) r.co_[m] += ab * row[m];
        }
    }
  return r;
}

CycloValue CycloValue::operator*(const mpq_class& s) const {
  CycloValue r = *this;
  for (auto& c : r.co_) c *= s;
  return r;
}

CycloValue CycloValue::conj() const {
  CycloValue r(*R_);
  int dy = R_->dy;
  for (int i = 0; i < R_->dx; ++i)
    for (int j = 0; j < dy; ++j) {
      const mpq_class& c = co_[i * dy + j];
      if (c == 0) continue;
      // basis monomial x^i y^j is the group element (i mod p, j mod M)
      const auto& m = R_->monomial(-i, -j);
      for (size_t t = 0; t < m.size(); ++t)
        if (m[t] != 0) r.co_[t] += c * m[t];
    }
  return r;
}

mpq_class CycloValue::mag2() const {
  CycloValue m = *this * conj();
  if (!m.is_rational()) throw Error("non-rational magnitude");
  return m.rational_part();
}

bool CycloValue::operator==(const CycloValue& o) const {
  return (*this - o).is_zero();
}

std::string CycloValue::str() const {
  std::ostringstream os;
  bool first = true;
  int dy = R_ ? R_->dy : 0;
  for (size_t i = 0; i < co_.size(); ++i) {
    if (co_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << co_[i].get_str();
    int xi = static_cast<int>(i) / dy, yj = static_cast<int>(i) % dy;
    if (xi > 0) os << "*zp^" << xi;
    if (yj > 0) os << "*zm^" << yj;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace rtflab
