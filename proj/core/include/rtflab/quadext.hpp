#pragma once
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "rtflab/local.hpp"

namespace rtflab {

enum class ExtFlavor { Split, Unramified, RamifiedTame };

std::string flavor_name(ExtFlavor);

// Element of the etale quadratic F-algebra E. Nonsplit: a single Laurent
// series over the residue field of E in the uniformizer of E (t if E/F is
// unramified, s with s^2 = u t if ramified). Split: the pair (a, b) in F + F.
struct EElem {
  LocalElem a, b;
};

class QuadExt {
 public:
  ExtFlavor flavor;
  const FqField* Fres;
  const FqField* Eres;
  int e;        // ramification index of E/F
  int res_deg;  // residue degree
  int u = 0;    // p odd: smallest nonsquare (omega^2 = u, resp. s^2 = u t)
  int tau = 0;  // char 2 unramified: xi^2 + xi + tau = 0
  int omega = 0;  // Eres code of the basis generator (unramified)

  static const QuadExt& get(const FqField& Fres, ExtFlavor flavor);

  // q_E = size of the residue field of E
  int qE() const { return Eres->q; }

  EElem zero() const;
  EElem one() const { return from_F(LocalElem::one(*Fres)); }
  EElem unif() const;  // uniformizer of E
  EElem from_F(const LocalElem& x) const;
  // x + y * omega (unramified), x + y * s (ramified), (x, y) (split)
  EElem make(const LocalElem& x, const LocalElem& y) const;
  std::pair<LocalElem, LocalElem> components(const EElem& z) const;

  EElem add(const EElem& x, const EElem& y) const;
  EElem sub(const EElem& x, const EElem& y) const;
  EElem neg(const EElem& x) const;
  EElem mul(const EElem& x, const EElem& y) const;
  EElem inv(const EElem& x, int relprec = 64) const;
  EElem conj(const EElem& x) const;
  LocalElem norm(const EElem& x) const;
  LocalElem trace(const EElem& x) const;

  bool is_exact_zero(const EElem& x) const;
  bool zero_known(const EElem& x) const { return x.a.zero && (flavor != ExtFlavor::Split || x.b.zero); }
  int vE(const EElem& x) const;  // nonsplit valuation in the E-uniformizer
  bool vge(const EElem& x, int n) const;
  bool congruent(const EElem& x, const EElem& y, int n) const;
  std::string str(const EElem& x) const;

  // quadratic character of F^x attached to E (trivial for split)
  int eta(const LocalElem& x) const;
  bool is_norm(const LocalElem& x) const { return eta(x) == 1; }
  // y with Nm(y) = x up to relative precision relprec; empty iff x not a norm
  std::optional<EElem> norm_preimage(const LocalElem& x, int relprec = 64) const;

  // unit representatives of O_E^x mod 1+p_E^depth (nonsplit)
  const std::vector<EElem>& unit_reps(int depth) const;
  // representatives of E^x/F^x at unit depth `depth`: valuations 0..e-1
  // crossed with unit classes mod the image of O_F^x
  const std::vector<EElem>& torus_quotient_reps(int depth) const;

  QuadExt(const QuadExt&) = delete;

 private:
  QuadExt(const FqField& Fres, ExtFlavor flavor);
  std::vector<int> emb_;                      // F_q -> F_{q^2} (unramified)
  std::vector<std::pair<int, int>> decomp_;   // beta -> (x, y) over (1, omega)
  std::vector<int> trace_section_;            // c -> eps with Tr_{Eres/Fres}(eps) = c
  mutable std::vector<std::vector<EElem>> unit_cache_, tq_cache_;
  mutable std::mutex mu_;
  LocalElem to_F(const LocalElem& even_series) const;  // ramified helper
};

}  // namespace rtflab
