#include "rtflab/local.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rtflab {

void LocalElem::normalize() {
  size_t lead = 0;
  while (lead < c.size() && c[lead] == 0) ++lead;
  if (lead > 0) {
    c.erase(c.begin(), c.begin() + lead);
    val += static_cast<int>(lead);
  }
  while (!c.empty() && c.back() == 0 && exact()) c.pop_back();
  if (!exact()) {
    // drop coefficients at or beyond prec
    if (val >= prec) c.clear();
    else if (val + static_cast<int>(c.size()) > prec) c.resize(prec - val);
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  if (c.empty()) {
    zero = true;
    val = 0;
  } else {
    zero = false;
  }
}

LocalElem LocalElem::from_coeffs(const FqField& f, int val, const std::vector<int>& coeffs) {
  LocalElem r(f);
  r.val = val;
  r.prec = EXACT;
  r.c.assign(coeffs.begin(), coeffs.end());
  for (int x : coeffs)
    if (x < 0 || x >= f.q) throw ConfigError("residue code out of range");
  r.normalize();
  return r;
}

int LocalElem::v() const {
  if (!zero) return val;
  if (exact()) return EXACT;
  throw UncertainValuation();
}

bool LocalElem::vge(int n) const {
  if (!zero) return val >= n;
  if (prec >= n) return true;
  throw PrecisionUnderflow("vge needs precision " + std::to_string(n));
}

int LocalElem::coeff(int i) const {
  if (i >= prec) throw PrecisionUnderflow("coefficient at t^" + std::to_string(i));
  if (zero) return 0;
  int j = i - val;
  if (j < 0 || j >= static_cast<int>(c.size())) return 0;
  return c[j];
}

LocalElem LocalElem::operator-() const {
  LocalElem r = *this;
  for (auto& x : r.c) x = static_cast<int16_t>(F->neg(x));
  return r;
}

LocalElem LocalElem::operator+(const LocalElem& o) const {
  if (!F || !o.F || F != o.F) throw ConfigError("field mismatch in add");
  LocalElem r(*F);
  r.prec = std::min(prec, o.prec);
  if (zero && o.zero) {
    r.normalize();
    return r;
  }
  int lo = zero ? o.val : (o.zero ? val : std::min(val, o.val));
  int hi = lo;
  if (!zero) hi = std::max(hi, val + static_cast<int>(c.size()));
  if (!o.zero) hi = std::max(hi, o.val + static_cast<int>(o.c.size()));
  if (r.prec != EXACT) hi = std::min(hi, r.prec);
  if (hi <= lo) {
    r.normalize();
    return r;
  }
  r.val = lo;
  r.c.assign(hi - lo, 0);
  auto acc = [&](const LocalElem& e) {
    if (e.zero) return;
    for (size_t j = 0; j < e.c.size(); ++j) {
      int i = e.val + static_cast<int>(j);
      if (i >= hi) break;
      r.c[i - lo] = static_cast<int16_t>(F->add(r.c[i - lo], e.c[j]));
    }
  };
  acc(*this);
  acc(o);
  r.normalize();
  return r;
}

LocalElem LocalElem::operator*(const LocalElem& o) const {
  if (!F || !o.F || F != o.F) throw ConfigError("field mismatch in mul");
  LocalElem r(*F);
  if (is_exact_zero() || o.is_exact_zero()) return r;
  if (zero || o.zero) {
    // zero up to precision times something of known valuation
    if (zero && o.zero) {
      r.prec = std::min(prec == EXACT ? EXACT : prec + o.prec, EXACT);
      r.normalize();
      return r;
    }
    const LocalElem& z = zero ? *this : o;
    const LocalElem& n = zero ? o : *this;
    long p2 = static_cast<long>(z.prec) + n.val;
    r.prec = static_cast<int>(std::min<long>(p2, EXACT));
    r.normalize();
    return r;
  }
  int va = val, vb = o.val;
  long ra = exact() ? EXACT : prec - va;
  long rb = o.exact() ? EXACT : o.prec - vb;
  long rel = std::min(ra, rb);
  long full = static_cast<long>(c.size()) + o.c.size() - 1;
  long len = std::min(rel, full);
  r.val = va + vb;
  r.prec = (rel >= full && exact() && o.exact()) ? EXACT
                                                 : static_cast<int>(std::min<long>(r.val + rel, EXACT));
  r.c.assign(len, 0);
  const FqField& f = *F;
  for (size_t i = 0; i < c.size() && static_cast<long>(i) < len; ++i) {
    if (c[i] == 0) continue;
    int ci = c[i];
    long jmax = std::min<long>(o.c.size(), len - i);
    for (long j = 0; j < jmax; ++j) {
      if (o.c[j] == 0) continue;
      r.c[i + j] = static_cast<int16_t>(f.add(r.c[i + j], f.mul(ci, o.c[j])));
    }
  }
  r.normalize();
  return r;
}

bool LocalElem::operator==(const LocalElem& o) const {
  if (F != o.F) return false;
  LocalElem d = *this - o;
  if (!d.zero) return false;
  if (!d.exact())
    throw PrecisionUnderflow("equality undecidable at available precision");
  return true;
}

LocalElem LocalElem::inv(int relprec) const {
  if (zero) {
    if (exact()) throw InversionOfZero();
    throw PrecisionUnderflow("inverting an element zero up to precision");
  }
  long ra = exact() ? relprec : std::min<long>(relprec, prec - val);
  if (ra < 1) throw PrecisionUnderflow("no unit coefficient available");
  LocalElem r(*F);
  r.zero = false;
  r.val = -val;
  r.prec = static_cast<int>(std::min<long>(r.val + ra, EXACT));
  r.c.assign(ra, 0);
  const FqField& f = *F;
  int a0i = f.inv(c[0]);
  r.c[0] = static_cast<int16_t>(a0i);
  for (long n = 1; n < ra; ++n) {
    int s = 0;
    long imax = std::min<long>(n, static_cast<long>(c.size()) - 1);
    for (long i = 1; i <= imax; ++i)
      if (c[i] && r.c[n - i]) s = f.add(s, f.mul(c[i], r.c[n - i]));
    r.c[n] = static_cast<int16_t>(f.mul(f.neg(s), a0i));
  }
  r.normalize();
  return r;
}

LocalElem LocalElem::truncated(int abs_prec) const {
  LocalElem r = *this;
  r.prec = std::min(prec, abs_prec);
  r.normalize();
  return r;
}

LocalElem LocalElem::scaled(int res) const {
  if (res == 0) {
    LocalElem r(*F);
    r.prec = prec;
    return r;
  }
  LocalElem r = *this;
  for (auto& x : r.c) x = static_cast<int16_t>(F->mul(x, res));
  return r;
}

LocalElem LocalElem::shifted(int k) const {
  LocalElem r = *this;
  if (!r.zero) r.val += k;
  if (r.prec != EXACT) r.prec += k;
  return r;
}

std::string LocalElem::str() const {
  std::ostringstream os;
  if (zero) {
    os << "0";
  } else {
    bool first = true;
    for (size_t j = 0; j < c.size(); ++j) {
      if (c[j] == 0) continue;
      if (!first) os << " + ";
      first = false;
      int k = val + static_cast<int>(j);
      int r = c[j];
      std::string cs = r < F->p ? std::to_string(r)
                                : (F->dlog(r) == 1 ? "g" : "g^" + std::to_string(F->dlog(r)));
      if (k == 0) {
        os << cs;
      } else {
        if (cs != "1") os << cs << "*";
        os << (k == 1 ? "t" : "t^" + std::to_string(k));
      }
    }
    if (first) os << "0";
  }
  if (!exact()) os << " + O(t^" << prec << ")";
  return os.str();
}

LocalElem parse_local(const FqField& f, const std::string& s) {
  size_t i = 0;
  auto skip = [&] { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; };
  auto parse_int = [&]() -> long {
    skip();
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw ConfigError("expected integer at position " + std::to_string(i) + " in '" + s + "'");
    long v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
    return neg ? -v : v;
  };
  LocalElem total = LocalElem::zero_of(f);
  skip();
  bool lead_neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) lead_neg = s[i++] == '-';
  while (true) {
    skip();
    if (i >= s.size()) throw ConfigError("expected term in '" + s + "'");
    int coeff = 1;
    bool have_coeff = false;
    if (s[i] == 'g') {
      ++i;
      long e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        e = parse_int();
      }
      coeff = f.pow(f.gen(), e);
      have_coeff = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      coeff = f.from_int(parse_int());
      have_coeff = true;
    }
    int k = 0;
    skip();
    if (have_coeff && i < s.size() && s[i] == '*') {
      ++i;
      skip();
    }
    if (i < s.size() && s[i] == 't') {
      ++i;
      k = 1;
      skip();
      if (i < s.size() && s[i] == '^') {
        ++i;
        k = static_cast<int>(parse_int());
      }
    } else if (!have_coeff) {
      throw ConfigError("expected term at position " + std::to_string(i) + " in '" + s + "'");
    }
    if (lead_neg) coeff = f.neg(coeff);
    total = total + LocalElem::residue(f, coeff, k);
    skip();
    if (i >= s.size()) break;
    if (s[i] == '+') lead_neg = false;
    else if (s[i] == '-') lead_neg = true;
    else throw ConfigError("unexpected character '" + std::string(1, s[i]) + "' in '" + s + "'");
    ++i;
  }
  return total;
}

std::vector<LocalElem> shell_representatives(const FqField& f, int n, int N, long budget) {
  if (N < 1) throw ConfigError("shell depth must be >= 1");
  long count = f.q - 1;
  for (int i = 1; i < N; ++i) {
    count *= f.q;
    if (count > budget) throw BudgetExceeded();
  }
  if (count > budget) throw BudgetExceeded();
  std::vector<LocalElem> out;
  out.reserve(count);
  std::vector<int> digits(N, 0);
  digits[0] = 1;
  while (true) {
    out.push_back(LocalElem::from_coeffs(f, n, digits));
    int j = N - 1;
    for (; j >= 1; --j) {
      if (++digits[j] < f.q) break;
      digits[j] = 0;
    }
    if (j == 0) {
      if (++digits[0] >= f.q) break;
    }
  }
  return out;
}

}  // namespace rtflab
