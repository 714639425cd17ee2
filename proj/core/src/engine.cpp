#include "rtflab/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <thread>

#include "rtflab/errors.hpp"

namespace rtflab {
namespace {

// multiply by the E-uniformizer to the k-th power
EElem eshift(const QuadExt& E, const EElem& z, int k) {
  if (k == 0) return z;
  if (E.flavor == ExtFlavor::Split) return {z.a.shifted(k), z.b.shifted(k)};
  return {z.a.shifted(k), z.b};
}

// coset representatives of sign * (1 + p_E^n) modulo 1 + p_E^d (nonsplit):
// sign + digits at the E-uniformizer powers n .. d-1
std::vector<EElem> trans_unit_classes(const QuadExt& E, int sign, int n, int d) {
  if (E.flavor == ExtFlavor::Split) throw Error("nonsplit classes requested for split algebra");
  int w = std::max(0, d - n);
  long count = 1;
  for (int i = 0; i < w; ++i) count *= E.Eres->q;
  std::vector<EElem> out;
  out.reserve(count);
  for (long code = 0; code < count; ++code) {
    std::vector<int> coeffs(n + w, 0);
    coeffs[0] = sign > 0 ? 1 : E.Eres->neg(1);
    long c = code;
    for (int i = 0; i < w; ++i) {
      coeffs[n + i] = static_cast<int>(c % E.Eres->q);
      c /= E.Eres->q;
    }
    out.push_back({LocalElem::from_coeffs(*E.Eres, 0, coeffs), LocalElem()});
  }
  return out;
}

void check_budget(long its, long budget) {
  if (its > budget) throw BudgetExceeded("shell enumeration of size " + std::to_string(its));
}

template <class Fn>
OrbitalValue parallel_sum(long n, const OrbitalValue& zero, const Fn& fn) {
  int T = engine_threads();
  if (T <= 1 || n < 2) {
    OrbitalValue acc = zero;
    for (long i = 0; i < n; ++i) acc = acc + fn(i);
    return acc;
  }
  long chunk = (n + T - 1) / T;
  std::vector<std::future<OrbitalValue>> futs;
  for (long s = 0; s < n; s += chunk) {
    long t = std::min(s + chunk, n);
    futs.push_back(std::async(std::launch::async, [&zero, &fn, s, t] {
      OrbitalValue acc = zero;
      for (long i = s; i < t; ++i) acc = acc + fn(i);
      return acc;
    }));
  }
  OrbitalValue acc = zero;
  for (auto& f : futs) acc = acc + f.get();
  return acc;
}

OrbitalValue empty_value(const QuadExt& E, int q_half) {
  OrbitalValue v;
  v.q_half = q_half;
  v.e_res_deg = E.res_deg;
  v.q = E.Fres->q;
  return v;
}

}  // namespace

int engine_threads() {
  static int n = [] {
    unsigned hw = std::thread::hardware_concurrency();
    int v = hw ? static_cast<int>(std::min(hw, 8u)) : 1;
    if (const char* s = std::getenv("RTF_LAB_THREADS")) {
      int cap = std::atoi(s);
      if (cap >= 1) v = std::min(v, cap);
    }
    return std::max(v, 1);
  }();
  return n;
}

OrbitalValue orbital_S(const QuadExt& E, const TestFnS& phi, const Mat2E& gamma,
                       const EngineOptions& opts) {
  if (E.flavor == ExtFlavor::Split) throw ConfigError("use the split-model evaluator");
  const FqField& F = *E.Fres;
  for (const auto& entry : gamma.m)
    if (E.zero_known(entry)) throw NonRegularInput("orbit representative has a vanishing entry");
  int v11 = E.vE(gamma.m[0]), v12 = E.vE(gamma.m[1]);
  int v22 = E.vE(gamma.m[3]);
  EElem det = mat_det(E, gamma);
  if (E.zero_known(det)) throw NonRegularInput("singular orbit representative");
  int vdet = E.vE(det);

  int dE = std::max(1, phi.unit_depth(E));
  int dF = (dE + E.e - 1) / E.e;
  auto zu = shell_representatives(F, 0, dF, opts.budget);
  const auto& au = E.unit_reps(dE);
  long Nz = static_cast<long>(zu.size());
  long Na = static_cast<long>(au.size());
  mpq_class weight(1);
  weight /= mpq_class(Nz) * mpq_class(Na);

  bool pin = (phi.kind == TestFnS::Kind::Klxi || phi.kind == TestFnS::Kind::KlxiPrime) &&
             !opts.brute;
  std::vector<EElem> bcl;
  if (pin) {
    int sign = phi.kind == TestFnS::Kind::Klxi ? 1 : -1;
    bcl = trans_unit_classes(E, sign, phi.n, dE);
  }

  OrbitalValue out = empty_value(E, E.e - 1);
  for (int w : phi.det_vals(E)) {
    if ((w - vdet) % 2 != 0) continue;
    int sigma = (w - vdet) / 2;
    // b := z a gamma_12 must be a unit on the support of the pinned kinds
    if (pin && sigma + v12 != 0) continue;
    // entry integrality window for e * v(z)
    int lo = -v22, hi = 2 * sigma + v11;
    int zlo = (lo >= 0 ? (lo + E.e - 1) / E.e : -((-lo) / E.e)) - opts.guard;
    int zhi = (hi >= 0 ? hi / E.e : -((-hi + E.e - 1) / E.e)) + opts.guard;
    if (zhi < zlo) continue;
    long per_z = pin ? static_cast<long>(bcl.size()) : Na;
    check_budget(static_cast<long>(zhi - zlo + 1) * Nz * per_z, opts.budget);

    OrbitalValue part = parallel_sum(
        static_cast<long>(zhi - zlo + 1) * Nz, empty_value(E, E.e - 1), [&](long idx) {
          int zeta = zlo + static_cast<int>(idx / Nz);
          const LocalElem& uz = zu[idx % Nz];
          OrbitalValue acc = empty_value(E, E.e - 1);
          LocalElem z = uz.shifted(zeta);
          int alpha = sigma - E.e * zeta;
          int eta_z = E.eta(z);
          EElem zinv12;
          if (pin) zinv12 = E.inv(E.mul(E.from_F(z), gamma.m[1]), opts.relprec);
          long n_inner = pin ? static_cast<long>(bcl.size()) : Na;
          for (long j = 0; j < n_inner; ++j) {
            EElem a = pin ? E.mul(bcl[j], zinv12) : eshift(E, au[j], alpha);
            Mat2E M = herm_action(E, a, z, gamma);
            if (!phi.contains(E, M)) continue;
            if (E.e * zeta < lo || E.e * zeta > hi)
              throw Error("support hit outside the derived shell window");
            acc.add_term(alpha, E.e * zeta + alpha, 0, mpq_class(eta_z) * weight);
          }
          return acc;
        });
    out = out + part;
  }
  return out;
}

OrbitalValue orbital_S(const QuadExt& E, const SLinComb& phi, const Mat2E& gamma,
                       const EngineOptions& opts) {
  OrbitalValue out = empty_value(E, E.e - 1);
  for (const auto& [c, fn] : phi.terms) out = out + orbital_S(E, fn, gamma, opts) * c;
  return out;
}

OrbitalValue orbital_S_x(const QuadExt& E, const TestFnS& phi, const LocalElem& x,
                         const EngineOptions& opts) {
  if (x.zero || (x - LocalElem::one(*E.Fres)).zero)
    throw NonRegularInput("x must avoid 0 and 1");
  return orbital_S(E, phi, gamma_of_x(E, x), opts);
}

OrbitalValue orbital_S_x(const QuadExt& E, const SLinComb& phi, const LocalElem& x,
                         const EngineOptions& opts) {
  OrbitalValue out = empty_value(E, E.e - 1);
  for (const auto& [c, fn] : phi.terms) out = out + orbital_S_x(E, fn, x, opts) * c;
  return out;
}

OrbitalValue orbital_G(const QuadExt& E, const LocalElem& eps, const TestFnG& f,
                       const QuatElem& delta, const EngineOptions& opts) {
  if (E.flavor == ExtFlavor::Split) throw ConfigError("use the split-model evaluator");
  if (f.matrix_model()) throw ConfigError("matrix-model support needs the GL2(F) evaluator");
  if (!quat_regular(E, delta)) throw NonRegularInput("singular delta");
  LocalElem det = quat_det(E, eps, delta);
  if (det.zero) throw NonRegularInput("delta has vanishing determinant");
  int vdet = det.v();

  int d = std::max(1, f.unit_depth(E));
  const auto& h1s = E.torus_quotient_reps(d);
  const auto& us = E.unit_reps(d);
  check_budget(static_cast<long>(h1s.size()) * us.size() * (2 * opts.guard + 1), opts.budget);
  mpq_class weight(E.e == 1 ? 1 : 2);
  weight /= mpq_class(static_cast<long>(h1s.size())) * mpq_class(static_cast<long>(us.size()));
  TestFnG keps = TestFnG::keps(f.m);
  bool quotient = f.kind == TestFnG::Kind::KepsMZ;

  OrbitalValue out = parallel_sum(
      static_cast<long>(h1s.size()), empty_value(E, 2 * (E.e - 1)), [&](long i1) {
        OrbitalValue acc = empty_value(E, 2 * (E.e - 1));
        const EElem& h1 = h1s[i1];
        int h1v = E.vE(h1);
        EElem h1i = E.inv(h1, opts.relprec);
        EElem AL = E.mul(h1i, delta.a), BL = E.mul(h1i, delta.b);
        if (!quotient) {
          for (int w : f.det_vals(E)) {
            if ((E.e * (w - vdet)) % 2 != 0) continue;
            int k = h1v + E.e * (w - vdet) / 2;
            for (int kk = k - opts.guard; kk <= k + opts.guard; ++kk) {
              for (const auto& u : us) {
                EElem h2 = eshift(E, u, kk);
                QuatElem g{E.mul(AL, h2), E.mul(BL, E.conj(h2))};
                if (!f.contains_quat(E, eps, g)) continue;
                if (kk != k) throw Error("support hit outside the pinned determinant shell");
                acc.add_term(0, kk - h1v, 0, weight);
              }
            }
          }
        } else {
          // h2 runs over T_eps / varpi^Z: valuation classes 0 .. e-1
          for (int v = 0; v < E.e; ++v) {
            int num = 2 * (v - h1v) + E.e * vdet;  // e * v_F(det g)
            if (num % (2 * E.e) != 0) continue;
            int j = num / (2 * E.e);
            for (const auto& u : us) {
              EElem h2 = eshift(E, u, v);
              QuatElem g{eshift(E, E.mul(AL, h2), -E.e * j),
                         eshift(E, E.mul(BL, E.conj(h2)), -E.e * j)};
              if (!keps.contains_quat(E, eps, g)) continue;
              acc.add_term(0, v - h1v, 0, weight);
            }
          }
        }
        return acc;
      });
  return out;
}

OrbitalValue orbital_G_x(const QuadExt& E, const LocalElem& eps, const TestFnG& f,
                         const LocalElem& x, const EngineOptions& opts) {
  if (x.zero || (x - LocalElem::one(*E.Fres)).zero)
    throw NonRegularInput("x must avoid 0 and 1");
  return orbital_G(E, eps, f, delta_of_x(E, eps, x, opts.relprec), opts);
}

OrbitalValue orbital_G1(const QuadExt& E, const TestFnG& f, const Mat2F& delta_mat,
                        const EngineOptions& opts) {
  if (E.flavor != ExtFlavor::Unramified)
    throw ConfigError("the GL2(F) model needs E/F unramified");
  if (!f.matrix_model()) throw ConfigError("quaternion-coordinate support in the GL2(F) model");
  LocalElem det = mat_det(delta_mat);
  if (det.zero) throw NonRegularInput("delta has vanishing determinant");
  int vdet = det.v();

  int d = std::max(1, f.unit_depth(E));
  const auto& h1s = E.torus_quotient_reps(d);
  const auto& us = E.unit_reps(d);
  check_budget(static_cast<long>(h1s.size()) * us.size() * (2 * opts.guard + 1), opts.budget);
  mpq_class weight(1);
  weight /= mpq_class(static_cast<long>(h1s.size())) * mpq_class(static_cast<long>(us.size()));

  OrbitalValue out =
      parallel_sum(static_cast<long>(h1s.size()), empty_value(E, 0), [&](long i1) {
        OrbitalValue acc = empty_value(E, 0);
        const EElem& h1 = h1s[i1];
        int h1v = E.vE(h1);
        Mat2F L = mat_mul(g1_embed(E, E.inv(h1, opts.relprec)), delta_mat);
        for (int w : f.det_vals(E)) {
          if ((w - vdet) % 2 != 0) continue;
          int k = h1v + (w - vdet) / 2;
          for (int kk = k - opts.guard; kk <= k + opts.guard; ++kk) {
            for (const auto& u : us) {
              Mat2F g = mat_mul(L, g1_embed(E, eshift(E, u, kk)));
              if (!f.contains_matrix(g)) continue;
              if (kk != k) throw Error("support hit outside the pinned determinant shell");
              acc.add_term(0, kk - h1v, 0, weight);
            }
          }
        }
        return acc;
      });
  return out;
}

OrbitalValue orbital_G1_x(const QuadExt& E, const TestFnG& f, const LocalElem& x,
                          const EngineOptions& opts) {
  if (x.zero || (x - LocalElem::one(*E.Fres)).zero)
    throw NonRegularInput("x must avoid 0 and 1");
  QuatElem delta = delta_of_x(E, LocalElem::one(*E.Fres), x, opts.relprec);
  return orbital_G1(E, f, g1_matrix(E, delta), opts);
}

OrbitalValue split_orbital_S(const FqField& F,
                             const std::vector<std::pair<mpq_class, SplitBall>>& phi,
                             const LocalElem& x, const EngineOptions& opts) {
  if (x.zero || (x - LocalElem::one(F)).zero) throw NonRegularInput("x must avoid 0 and 1");
  int vx = x.v();
  QuadExt const& E = QuadExt::get(F, ExtFlavor::Split);
  OrbitalValue out = empty_value(E, 0);
  for (const auto& [coef, ball] : phi) {
    auto ev = ball.entry_vals();
    for (int v : ev)
      if (v == INT_MIN) throw ConfigError("ball entry valuation not pinned at its depth");
    int vz = ev[3], va = ev[1] - vz, vb = ev[2] - vz;
    if (ev[0] != va + vb + vx + vz) continue;  // no orbit point meets the ball
    int d = ball.N + cartan_c(ball.g0);
    auto ua = shell_representatives(F, va, d, opts.budget);
    auto ub = shell_representatives(F, vb, d, opts.budget);
    auto uz = shell_representatives(F, vz, d, opts.budget);
    long Nu = static_cast<long>(ua.size());
    check_budget(Nu * Nu * Nu, opts.budget);
    mpq_class w = coef / (mpq_class(Nu) * mpq_class(Nu) * mpq_class(Nu));
    OrbitalValue part = parallel_sum(Nu, empty_value(E, 0), [&](long ia) {
      OrbitalValue acc = empty_value(E, 0);
      const LocalElem& a = ua[ia];
      LocalElem ax = a * x;
      for (const auto& b : ub) {
        LocalElem abx = ax * b;
        for (const auto& z : uz) {
          Mat2F M{abx * z, a * z, b * z, z};
          if (ball.contains(M)) acc.add_term(0, va + vz, vb + vz, w);
        }
      }
      return acc;
    });
    out = out + part;
  }
  return out;
}

OrbitalValue split_orbital_G(const FqField& F,
                             const std::vector<std::pair<mpq_class, SplitBall>>& f,
                             const LocalElem& x, const EngineOptions& opts) {
  if (x.zero || (x - LocalElem::one(F)).zero) throw NonRegularInput("x must avoid 0 and 1");
  int vx = x.v();
  QuadExt const& E = QuadExt::get(F, ExtFlavor::Split);
  OrbitalValue out = empty_value(E, 0);
  for (const auto& [coef, ball] : f) {
    auto ev = ball.entry_vals();
    for (int v : ev)
      if (v == INT_MIN) throw ConfigError("ball entry valuation not pinned at its depth");
    int va = ev[2], vb = ev[3], vc = vb - ev[1];
    if (ev[0] != va + vx - vc) continue;
    int d = ball.N + cartan_c(ball.g0);
    auto ua = shell_representatives(F, va, d, opts.budget);
    auto ub = shell_representatives(F, vb, d, opts.budget);
    auto uc = shell_representatives(F, vc, d, opts.budget);
    long Nu = static_cast<long>(ua.size());
    check_budget(Nu * Nu * Nu, opts.budget);
    mpq_class w = coef / (mpq_class(Nu) * mpq_class(Nu) * mpq_class(Nu));
    OrbitalValue part = parallel_sum(Nu, empty_value(E, 0), [&](long ia) {
      OrbitalValue acc = empty_value(E, 0);
      const LocalElem& a = ua[ia];
      LocalElem ax = a * x;
      for (const auto& c : uc) {
        LocalElem ci = c.inv(opts.relprec);
        LocalElem m11 = ax * ci;
        for (const auto& b : ub) {
          Mat2F M{m11, b * ci, a, b};
          if (ball.contains(M)) acc.add_term(0, va - vc, vb, w);
        }
      }
      return acc;
    });
    out = out + part;
  }
  return out;
}

mpq_class multiplicity_value(long q, int c, int vinvp) {
  if (c == 0) return mpq_class(vinvp + 1) / 2;
  mpq_class den(q + 1);
  for (int i = 1; i < c; ++i) den *= q;
  return 1 / den;
}

XiPoly arith_orbital_i(const QuadExt& E, const TestFnG& f, const QuatElem& delta,
                       const EngineOptions& opts) {
  if (E.flavor != ExtFlavor::Unramified)
    throw ConfigError("arithmetic orbital integrals need E/F unramified");
  if (!f.matrix_model()) throw ConfigError("f must be a GL2(F)-model support");
  const FqField& F = *E.Fres;
  LocalElem eps = LocalElem::t_pow(F, 1);
  if (!quat_regular(E, delta)) throw NonRegularInput("singular delta");
  LocalElem det = quat_det(E, eps, delta);
  if (det.zero) throw NonRegularInput("delta has vanishing determinant");
  int vdet = det.v();

  std::vector<int> ws = f.det_vals(E);
  int m = ws.at(0);
  if ((m - vdet) % 2 != 0) return XiPoly();  // det(delta) det(g^-1) never a unit

  std::vector<Mat2F> cosets;
  for (const auto& g : hecke_coset_reps(F, m))
    if (f.contains_matrix(g)) cosets.push_back(g);

  const auto& t1s = E.torus_quotient_reps(1);
  const auto& us = E.unit_reps(1);
  check_budget(static_cast<long>(t1s.size()) * us.size() * cosets.size(), opts.budget);
  mpq_class weight(1);
  weight /= mpq_class(static_cast<long>(t1s.size())) * mpq_class(static_cast<long>(us.size()));

  XiPoly out;
  for (const auto& t1 : t1s) {
    int t1v = E.vE(t1);
    int k2 = t1v + (m - vdet) / 2;
    EElem t1i = E.inv(t1, opts.relprec);
    EElem AL = E.mul(t1i, delta.a), BL = E.mul(t1i, delta.b);
    for (const auto& u : us) {
      EElem t2 = eshift(E, u, k2);
      QuatElem dp{E.mul(AL, t2), E.mul(BL, E.conj(t2))};
      int vinvp = invp_T(E, eps, dp, opts.relprec).v();
      for (const auto& g : cosets) {
        // the torus-Cartan coordinate of g^-1 equals that of adj(g) = det g^-1,
        // and the coordinate is insensitive to central factors
        int c = cartan_c(g);
        out.add_mono(k2 - t1v, 0, multiplicity_value(F.q, c, vinvp) * weight);
      }
    }
  }
  return out;
}

XiPoly arith_orbital_i_x(const QuadExt& E, const TestFnG& f, const LocalElem& x,
                         const EngineOptions& opts) {
  const FqField& F = *E.Fres;
  if (x.zero || (x - LocalElem::one(F)).zero) throw NonRegularInput("x must avoid 0 and 1");
  QuatElem delta = delta_of_x(E, LocalElem::t_pow(F, 1), x, opts.relprec);
  return arith_orbital_i(E, f, delta, opts);
}

}  // namespace rtflab
