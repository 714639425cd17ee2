#include "rtflab/quadext.hpp"

#include <algorithm>
#include <map>
#include <memory>

namespace rtflab {

std::string flavor_name(ExtFlavor f) {
  switch (f) {
    case ExtFlavor::Split: return "split";
    case ExtFlavor::Unramified: return "unramified";
    case ExtFlavor::RamifiedTame: return "ramified";
  }
  return "?";
}

QuadExt::QuadExt(const FqField& F, ExtFlavor fl) : flavor(fl), Fres(&F) {
  int p = F.p, k = F.k, q = F.q;
  switch (fl) {
    case ExtFlavor::Split:
      Eres = &F;
      e = 1;
      res_deg = 1;
      return;
    case ExtFlavor::RamifiedTame: {
      if (p == 2) throw ConfigError("wild ramification (p = 2) is out of scope");
      Eres = &F;
      e = 2;
      res_deg = 1;
      for (int c = 2; c < q; ++c)
        if (!F.is_square(c)) {
          u = c;
          break;
        }
      if (u == 0) throw Error("no nonsquare found");
      return;
    }
    case ExtFlavor::Unramified:
      break;
  }
  e = 1;
  res_deg = 2;
  const FqField& E = FqField::get(p, 2 * k);
  Eres = &E;

  // embedding F_q -> F_{q^2}: evaluate digits at the smallest root of the
  // reduction polynomial of F_q inside F_{q^2}
  int root = -1;
  if (k == 1) {
    root = 0;  // unused: prime field digits are constants in both codings
  } else {
    const auto& tail = F.modpoly_tail();
    for (int r = 0; r < E.q && root < 0; ++r) {
      // f(r) = r^k - tail(r)
      int acc = E.pow(r, k);
      int tv = 0, rp = 1;
      for (int i = 0; i < k; ++i) {
        tv = E.add(tv, E.mul(tail[i], rp));
        rp = E.mul(rp, r);
      }
      if (acc == tv) root = r;
    }
    if (root < 0) throw Error("no embedding root found");
  }
  emb_.assign(q, 0);
  for (int a = 0; a < q; ++a) {
    if (k == 1) {
      emb_[a] = a;
      continue;
    }
    int acc = 0, rp = 1, x = a;
    for (int i = 0; i < k; ++i) {
      acc = E.add(acc, E.mul(x % p, rp));
      rp = E.mul(rp, root);
      x /= p;
    }
    emb_[a] = acc;
  }

  if (p != 2) {
    for (int c = 2; c < q; ++c)
      if (!F.is_square(c)) {
        u = c;
        break;
      }
    for (int b = 0; b < E.q; ++b)
      if (E.mul(b, b) == emb_[u]) {
        omega = b;
        break;
      }
  } else {
    // smallest tau with X^2 + X + tau rootless over F_q
    std::vector<char> hit(q, 0);
    for (int z = 0; z < q; ++z) hit[F.add(F.mul(z, z), z)] = 1;
    for (int c = 0; c < q; ++c)
      if (!hit[c]) {
        tau = c;
        break;
      }
    for (int b = 0; b < E.q; ++b)
      if (E.add(E.mul(b, b), E.add(b, emb_[tau])) == 0) {
        omega = b;
        break;
      }
  }
  if (omega == 0) throw Error("no basis generator found");

  decomp_.assign(E.q, {-1, -1});
  for (int x = 0; x < q; ++x)
    for (int y = 0; y < q; ++y)
      decomp_[E.add(emb_[x], E.mul(emb_[y], omega))] = {x, y};
  for (auto& d : decomp_)
    if (d.first < 0) throw Error("basis decomposition incomplete");

  trace_section_.assign(q, -1);
  for (int b = 0; b < E.q; ++b) {
    int tr = E.add(b, E.frob_pow(b, k));
    // tr lies in the embedded copy of F_q
    for (int c = 0; c < q; ++c)
      if (emb_[c] == tr && trace_section_[c] < 0) trace_section_[c] = b;
  }
  for (int c = 0; c < q; ++c)
    if (trace_section_[c] < 0) throw Error("relative trace not surjective");
}

const QuadExt& QuadExt::get(const FqField& F, ExtFlavor flavor) {
  static std::mutex mu;
  static std::map<std::pair<const FqField*, int>, std::unique_ptr<QuadExt>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto& slot = cache[{&F, static_cast<int>(flavor)}];
  if (!slot) slot.reset(new QuadExt(F, flavor));
  return *slot;
}

EElem QuadExt::zero() const {
  if (flavor == ExtFlavor::Split)
    return {LocalElem::zero_of(*Fres), LocalElem::zero_of(*Fres)};
  return {LocalElem::zero_of(*Eres), LocalElem()};
}

EElem QuadExt::unif() const {
  if (flavor == ExtFlavor::Split)
    return {LocalElem::t_pow(*Fres, 1), LocalElem::t_pow(*Fres, 1)};
  return {LocalElem::t_pow(*Eres, 1), LocalElem()};
}

EElem QuadExt::from_F(const LocalElem& x) const {
  switch (flavor) {
    case ExtFlavor::Split:
      return {x, x};
    case ExtFlavor::Unramified: {
      LocalElem r = x;
      r.F = Eres;
      for (auto& c : r.c) c = static_cast<int16_t>(emb_[c]);
      return {r, LocalElem()};
    }
    case ExtFlavor::RamifiedTame: {
      LocalElem r(*Eres);
      if (x.zero) {
        r.prec = x.prec == LocalElem::EXACT ? LocalElem::EXACT : 2 * x.prec;
        return {r, LocalElem()};
      }
      r.zero = false;
      r.val = 2 * x.val;
      r.prec = x.prec == LocalElem::EXACT ? LocalElem::EXACT : 2 * x.prec;
      r.c.assign(2 * x.c.size() - 1, 0);
      for (size_t i = 0; i < x.c.size(); ++i)
        r.c[2 * i] = static_cast<int16_t>(
            Fres->mul(x.c[i], Fres->pow(u, -(x.val + static_cast<long>(i)))));
      return {r, LocalElem()};
    }
  }
  throw Error("unreachable");
}

namespace {
inline int floordiv2(int a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }
inline int mod2(long a) { return static_cast<int>(((a % 2) + 2) % 2); }
}  // namespace

LocalElem QuadExt::to_F(const LocalElem& z) const {
  // ramified: z must be supported on even powers of s; t^i <- u^i s^(2i)
  LocalElem r(*Fres);
  r.prec = z.prec == LocalElem::EXACT ? LocalElem::EXACT : floordiv2(z.prec - 1) + 1;
  if (z.zero) return r;
  int lo = z.val, hi = lo + static_cast<int>(z.c.size());
  for (int i = lo; i < hi; ++i)
    if (mod2(i) == 1 && z.c[i - lo] != 0)
      throw Error("element not in F: odd coefficient present");
  std::vector<int16_t> out;
  int fval = 0;
  bool started = false;
  for (int i = mod2(lo) == 0 ? lo : lo + 1; i < hi; i += 2) {
    int cc = z.c[i - lo];
    if (!started) {
      if (cc == 0) continue;
      started = true;
      fval = i / 2;
    }
    out.push_back(static_cast<int16_t>(Fres->mul(cc, Fres->pow(u, i / 2))));
  }
  if (!started) return r;
  r.zero = false;
  r.val = fval;
  r.c = std::move(out);
  int keep = r.prec;
  r = r.truncated(keep);
  r.prec = keep;
  return r;
}

EElem QuadExt::make(const LocalElem& x, const LocalElem& y) const {
  switch (flavor) {
    case ExtFlavor::Split:
      return {x, y};
    case ExtFlavor::Unramified: {
      EElem ex = from_F(x), ey = from_F(y);
      return {ex.a + ey.a.scaled(omega), LocalElem()};
    }
    case ExtFlavor::RamifiedTame: {
      EElem ex = from_F(x), ey = from_F(y);
      return {ex.a + ey.a.shifted(1), LocalElem()};
    }
  }
  throw Error("unreachable");
}

std::pair<LocalElem, LocalElem> QuadExt::components(const EElem& z) const {
  switch (flavor) {
    case ExtFlavor::Split:
      return {z.a, z.b};
    case ExtFlavor::Unramified: {
      LocalElem x(*Fres), y(*Fres);
      x.prec = y.prec = z.a.prec;
      if (z.a.zero) return {x, y};
      x.zero = y.zero = false;
      x.val = y.val = z.a.val;
      x.c.assign(z.a.c.size(), 0);
      y.c.assign(z.a.c.size(), 0);
      for (size_t i = 0; i < z.a.c.size(); ++i) {
        auto [cx, cy] = decomp_[z.a.c[i]];
        x.c[i] = static_cast<int16_t>(cx);
        y.c[i] = static_cast<int16_t>(cy);
      }
      x = x + LocalElem::zero_of(*Fres);  // normalize
      y = y + LocalElem::zero_of(*Fres);
      x.prec = std::min(x.prec, z.a.prec);
      y.prec = std::min(y.prec, z.a.prec);
      return {x, y};
    }
    case ExtFlavor::RamifiedTame: {
      // z = x + y s: even part gives x, odd part shifted by s^(-1) gives y
      auto even_part = [&](LocalElem w) {
        if (!w.zero)
          for (size_t i = 0; i < w.c.size(); ++i)
            if (mod2(w.val + static_cast<long>(i)) == 1) w.c[i] = 0;
        int keep = w.prec;
        w = w.truncated(keep);
        w.prec = keep;
        return w;
      };
      LocalElem x = to_F(even_part(z.a));
      LocalElem y = to_F(even_part(z.a.shifted(-1)));
      return {x, y};
    }
  }
  throw Error("unreachable");
}

EElem QuadExt::add(const EElem& x, const EElem& y) const {
  if (flavor == ExtFlavor::Split) return {x.a + y.a, x.b + y.b};
  return {x.a + y.a, LocalElem()};
}

EElem QuadExt::sub(const EElem& x, const EElem& y) const {
  if (flavor == ExtFlavor::Split) return {x.a - y.a, x.b - y.b};
  return {x.a - y.a, LocalElem()};
}

EElem QuadExt::neg(const EElem& x) const {
  if (flavor == ExtFlavor::Split) return {-x.a, -x.b};
  return {-x.a, LocalElem()};
}

EElem QuadExt::mul(const EElem& x, const EElem& y) const {
  if (flavor == ExtFlavor::Split) return {x.a * y.a, x.b * y.b};
  return {x.a * y.a, LocalElem()};
}

EElem QuadExt::inv(const EElem& x, int relprec) const {
  if (flavor == ExtFlavor::Split) return {x.a.inv(relprec), x.b.inv(relprec)};
  return {x.a.inv(relprec), LocalElem()};
}

EElem QuadExt::conj(const EElem& x) const {
  switch (flavor) {
    case ExtFlavor::Split:
      return {x.b, x.a};
    case ExtFlavor::Unramified: {
      LocalElem r = x.a;
      for (auto& c : r.c) c = static_cast<int16_t>(Eres->frob_pow(c, Fres->k));
      return {r, LocalElem()};
    }
    case ExtFlavor::RamifiedTame: {
      LocalElem r = x.a;
      if (!r.zero)
        for (size_t i = 0; i < r.c.size(); ++i)
          if (((r.val + static_cast<long>(i)) % 2 + 2) % 2 == 1)
            r.c[i] = static_cast<int16_t>(Eres->neg(r.c[i]));
      return {r, LocalElem()};
    }
  }
  throw Error("unreachable");
}

LocalElem QuadExt::norm(const EElem& x) const {
  if (flavor == ExtFlavor::Split) return x.a * x.b;
  EElem n = mul(x, conj(x));
  if (flavor == ExtFlavor::RamifiedTame) return to_F(n.a);
  auto [re, im] = components(n);
  if (!im.zero) throw Error("norm not Galois invariant");
  return re;
}

LocalElem QuadExt::trace(const EElem& x) const {
  if (flavor == ExtFlavor::Split) return x.a + x.b;
  EElem t = add(x, conj(x));
  if (flavor == ExtFlavor::RamifiedTame) return to_F(t.a);
  auto [re, im] = components(t);
  if (!im.zero) throw Error("trace not Galois invariant");
  return re;
}

bool QuadExt::is_exact_zero(const EElem& x) const {
  if (flavor == ExtFlavor::Split) return x.a.is_exact_zero() && x.b.is_exact_zero();
  return x.a.is_exact_zero();
}

int QuadExt::vE(const EElem& x) const {
  if (flavor == ExtFlavor::Split) throw Error("vE undefined for split algebra");
  return x.a.v();
}

bool QuadExt::vge(const EElem& x, int n) const {
  if (flavor == ExtFlavor::Split) return x.a.vge(n) && x.b.vge(n);
  return x.a.vge(n);
}

bool QuadExt::congruent(const EElem& x, const EElem& y, int n) const {
  return vge(sub(x, y), n);
}

std::string QuadExt::str(const EElem& x) const {
  if (flavor == ExtFlavor::Split) return "(" + x.a.str() + ", " + x.b.str() + ")";
  return x.a.str();
}

int QuadExt::eta(const LocalElem& x) const {
  if (flavor == ExtFlavor::Split) return 1;
  int v = x.v();
  if (x.is_exact_zero()) throw Error("eta of zero");
  if (flavor == ExtFlavor::Unramified) return v % 2 == 0 ? 1 : -1;
  int w0 = x.coeff(v);
  int s = Fres->is_square(w0) ? 1 : -1;
  if (((v % 2) + 2) % 2 == 1) s *= Fres->is_square(Fres->neg(u)) ? 1 : -1;
  return s;
}

namespace {
// p odd Hensel square root of x (even valuation, square leading unit)
LocalElem hensel_sqrt(const FqField& F, const LocalElem& x, int relprec) {
  int v = x.v();
  int c0 = F.pow(F.gen(), F.dlog(x.coeff(v)) / 2);
  LocalElem c = LocalElem::residue(F, c0, v / 2);
  int inv2c0 = F.inv(F.mul(F.from_int(2), c0));
  while (true) {
    LocalElem d = x - c * c;
    if (d.zero) break;
    int r = d.v();
    if (r - v >= relprec) break;
    c = c + LocalElem::residue(F, F.mul(d.coeff(r), inv2c0), r - v / 2);
  }
  return c.truncated(v / 2 + relprec);
}
}  // namespace

std::optional<EElem> QuadExt::norm_preimage(const LocalElem& x, int relprec) const {
  if (x.is_exact_zero()) throw Error("norm preimage of zero");
  if (eta(x) != 1) return std::nullopt;
  switch (flavor) {
    case ExtFlavor::Split:
      return EElem{x, LocalElem::one(*Fres)};
    case ExtFlavor::Unramified: {
      int v = x.v(), k2 = v / 2;
      int x0 = x.coeff(v);
      int beta = -1;
      for (int b = 1; b < Eres->q; ++b)
        if (Eres->mul(b, Eres->frob_pow(b, Fres->k)) == emb_[x0]) {
          beta = b;
          break;
        }
      if (beta < 0) throw Error("residue norm not surjective");
      EElem y{LocalElem::residue(*Eres, beta, k2), LocalElem()};
      for (int guard = 0; guard < relprec + 4; ++guard) {
        LocalElem nm = norm(y);
        LocalElem d = x.div(nm, relprec + 2) - LocalElem::one(*Fres);
        if (d.zero || d.v() >= relprec) break;
        int r = d.v();
        int eps = trace_section_[d.coeff(r)];
        LocalElem corr = LocalElem::one(*Eres) + LocalElem::residue(*Eres, eps, r);
        y.a = y.a * corr;
      }
      y.a = y.a.truncated(k2 + relprec);
      return y;
    }
    case ExtFlavor::RamifiedTame: {
      int v = x.v();
      if (((v % 2) + 2) % 2 == 0) {
        LocalElem c = hensel_sqrt(*Fres, x, relprec);
        return from_F(c);
      }
      // x = -u t c^2 with c = sqrt(x / (-u t))
      LocalElem x2 = x.shifted(-1).scaled(Fres->inv(Fres->neg(u)));
      LocalElem c = hensel_sqrt(*Fres, x2, relprec);
      EElem fc = from_F(c);
      return EElem{fc.a.shifted(1), LocalElem()};
    }
  }
  throw Error("unreachable");
}

const std::vector<EElem>& QuadExt::unit_reps(int depth) const {
  if (flavor == ExtFlavor::Split) throw Error("unit_reps is nonsplit-only");
  std::lock_guard<std::mutex> lk(mu_);
  if (static_cast<int>(unit_cache_.size()) <= depth) unit_cache_.resize(depth + 1);
  auto& slot = unit_cache_[depth];
  if (slot.empty()) {
    auto us = shell_representatives(*Eres, 0, depth);
    slot.reserve(us.size());
    for (auto& u : us) slot.push_back(EElem{std::move(u), LocalElem()});
  }
  return slot;
}

const std::vector<EElem>& QuadExt::torus_quotient_reps(int depth) const {
  if (flavor == ExtFlavor::Split) throw Error("torus_quotient_reps is nonsplit-only");
  std::lock_guard<std::mutex> lk(mu_);
  if (static_cast<int>(tq_cache_.size()) <= depth) tq_cache_.resize(depth + 1);
  auto& slot = tq_cache_[depth];
  if (!slot.empty()) return slot;

  auto eunits = shell_representatives(*Eres, 0, depth);
  int fdepth = flavor == ExtFlavor::RamifiedTame ? (depth + 1) / 2 : depth;
  auto funits = shell_representatives(*Fres, 0, std::max(1, fdepth));
  std::vector<LocalElem> fimg;
  fimg.reserve(funits.size());
  for (const auto& f : funits) fimg.push_back(from_F(f).a);

  auto encode = [&](const LocalElem& z) {
    long code = 0;
    for (int i = depth - 1; i >= 0; --i) code = code * Eres->q + z.coeff(i);
    return code;
  };
  for (const auto& eu : eunits) {
    long self = encode(eu);
    bool minimal = true;
    for (const auto& f : fimg) {
      long other = encode((eu * f).truncated(depth));
      if (other < self) {
        minimal = false;
        break;
      }
    }
    if (minimal) slot.push_back(EElem{eu, LocalElem()});
  }
  if (flavor == ExtFlavor::RamifiedTame) {
    size_t n = slot.size();
    for (size_t i = 0; i < n; ++i)
      slot.push_back(EElem{slot[i].a.shifted(1), LocalElem()});
  }
  return slot;
}

}  // namespace rtflab
