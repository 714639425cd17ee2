#include "rtflab/values.hpp"

#include <sstream>

#include "rtflab/errors.hpp"

namespace rtflab {

void XiPoly::add_mono(int i, int j, const mpq_class& v) {
  if (v == 0) return;
  auto it = c.find({i, j});
  if (it == c.end()) {
    c.emplace(std::array<int, 2>{i, j}, v);
  } else {
    it->second += v;
    if (it->second == 0) c.erase(it);
  }
}

XiPoly XiPoly::operator+(const XiPoly& o) const {
  XiPoly r = *this;
  for (const auto& [k, v] : o.c) r.add_mono(k[0], k[1], v);
  return r;
}

XiPoly XiPoly::operator-(const XiPoly& o) const {
  XiPoly r = *this;
  for (const auto& [k, v] : o.c) r.add_mono(k[0], k[1], -v);
  return r;
}

XiPoly XiPoly::operator*(const mpq_class& s) const {
  XiPoly r;
  if (s == 0) return r;
  for (const auto& [k, v] : c) r.c[k] = v * s;
  return r;
}

XiPoly XiPoly::shifted(int di, int dj) const {
  XiPoly r;
  for (const auto& [k, v] : c) r.c[{k[0] + di, k[1] + dj}] = v;
  return r;
}

bool XiPoly::is_zero() const { return c.empty(); }

mpq_class XiPoly::coeff_sum() const {
  mpq_class s = 0;
  for (const auto& [k, v] : c) s += v;
  return s;
}

std::string XiPoly::str() const {
  if (c.empty()) return "0";
  bool two_var = false;
  for (const auto& [k, v] : c)
    if (k[1] != 0) two_var = true;
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : c) {
    if (!first) os << " + ";
    first = false;
    bool head = false;
    if (two_var) {
      if (k[0] != 0) {
        os << "xi1^" << k[0];
        head = true;
      }
      if (k[1] != 0) {
        os << (head ? "*" : "") << "xi2^" << k[1];
        head = true;
      }
    } else if (k[0] != 0) {
      os << "xi^" << k[0];
      head = true;
    }
    if (!head || v != 1) {
      if (head) os << " * ";
      os << v.get_str();
    }
  }
  return os.str();
}

LogValue LogValue::normalized() const {
  LogValue r = *this;
  if (r.c.is_zero()) {
    r.q_half = 0;
    return r;
  }
  int h = q_half;
  mpq_class scale = 1;
  if (h != 0 && q <= 0) throw Error("q required to normalize q_half");
  while (h >= 2) {
    scale *= q;
    h -= 2;
  }
  while (h <= -2) {
    scale /= q;
    h += 2;
  }
  r.q_half = h;
  r.c = c * scale;
  return r;
}

bool LogValue::operator==(const LogValue& o) const {
  LogValue a = normalized(), b = o.normalized();
  if (a.c.is_zero() && b.c.is_zero()) return true;
  if (a.q_half != b.q_half) return false;
  return a.c * mpq_class(a.grade) == b.c * mpq_class(b.grade);
}

std::string LogValue::str() const {
  LogValue n = normalized();
  if (n.c.is_zero()) return "0";
  std::ostringstream os;
  os << n.c.str() << render_q_half(n.q_half) << " * (-logq";
  if (n.grade != 1) os << "^" << n.grade;
  os << ")";
  return os.str();
}

void OrbitalValue::add_term(int texp, int xi1, int xi2, const mpq_class& v) {
  if (v == 0) return;
  tc[texp].add_mono(xi1, xi2, v);
  if (tc[texp].is_zero()) tc.erase(texp);
}

OrbitalValue OrbitalValue::operator+(const OrbitalValue& o) const {
  if (o.tc.empty()) return *this;
  if (tc.empty()) return o;
  if (q_half != o.q_half || e_res_deg != o.e_res_deg)
    throw Error("incompatible orbital values in addition");
  OrbitalValue r = *this;
  for (const auto& [k, xp] : o.tc) {
    for (const auto& [m, v] : xp.c) r.tc[k].add_mono(m[0], m[1], v);
    if (r.tc.count(k) && r.tc[k].is_zero()) r.tc.erase(k);
  }
  return r;
}

OrbitalValue OrbitalValue::operator*(const mpq_class& s) const {
  OrbitalValue r = *this;
  if (s == 0) {
    r.tc.clear();
    return r;
  }
  for (auto& [k, xp] : r.tc) xp = xp * s;
  return r;
}

OrbitalValue OrbitalValue::shifted_xi(int di, int dj) const {
  OrbitalValue r = *this;
  for (auto& [k, xp] : r.tc) xp = xp.shifted(di, dj);
  return r;
}

XiPoly OrbitalValue::value_at_zero() const {
  XiPoly s;
  for (const auto& [k, xp] : tc) s = s + xp;
  return s;
}

LogValue OrbitalValue::derivative_at_zero() const {
  // d/ds of sum c_k T^k at s=0, T = q_E^{-s}, in units of (-log q_E)
  LogValue r;
  r.grade = e_res_deg;
  r.q_half = q_half;
  r.q = q;
  for (const auto& [k, xp] : tc) r.c = r.c + xp * mpq_class(k);
  return r;
}

OrbitalValue OrbitalValue::normalized() const {
  OrbitalValue r;
  r.e_res_deg = e_res_deg;
  r.q = q;
  int h = q_half;
  mpq_class scale = 1;
  if (h != 0 && q <= 0) throw Error("q required to normalize q_half");
  while (h >= 2) {
    scale *= q;
    h -= 2;
  }
  while (h <= -2) {
    scale /= q;
    h += 2;
  }
  r.q_half = h;
  for (const auto& [k, xp] : tc) {
    XiPoly s = xp * scale;
    if (!s.is_zero()) r.tc[k] = s;
  }
  if (r.tc.empty()) r.q_half = 0;
  return r;
}

bool OrbitalValue::operator==(const OrbitalValue& o) const {
  OrbitalValue a = normalized(), b = o.normalized();
  if (a.tc.empty() && b.tc.empty()) return true;
  if (a.q_half != b.q_half) return false;
  if (a.tc.size() != b.tc.size()) return false;
  for (const auto& [k, xp] : a.tc) {
    auto it = b.tc.find(k);
    if (it == b.tc.end() || !(it->second == xp)) return false;
  }
  return true;
}

bool OrbitalValue::is_zero() const {
  for (const auto& [k, xp] : tc)
    if (!xp.is_zero()) return false;
  return true;
}

std::string render_q_half(int q_half) {
  if (q_half == 0) return "";
  if (q_half % 2 == 0) return " * q^" + std::to_string(q_half / 2);
  return " * q^(" + std::to_string(q_half) + "/2)";
}

std::string OrbitalValue::str() const {
  OrbitalValue n = normalized();
  if (n.tc.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, xp] : n.tc) {
    if (!first) os << " + ";
    first = false;
    if (k != 0) os << "T^" << k << " * ";
    os << "(" << xp.str() << ")";
  }
  os << render_q_half(n.q_half);
  return os.str();
}

}  // namespace rtflab
