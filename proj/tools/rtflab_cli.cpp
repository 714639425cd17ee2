#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "rtflab/engine.hpp"
#include "rtflab/errors.hpp"
#include "rtflab/flsuite.hpp"

using namespace rtflab;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kGrammar =
    "Element literals are sums of monomials c*t^k joined by ' + ': k is any\n"
    "integer, c is a residue 0..p-1 or g^j with g the multiplicative generator\n"
    "of a non-prime residue field. Examples: '1', '2*t + t^3', 'g^2*t^-1 + 1'.\n"
    "Integer lists are comma separated ('0,2,4'); windows are ranges ('-4..4').\n"
    "The env var RTF_LAB_THREADS caps evaluation parallelism.";

const FqField& field_of(long q) {
  if (q < 2) throw ConfigError("q must be a prime power >= 2");
  long p = q;
  for (long d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  long r = q;
  int k = 0;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  if (r != 1) throw ConfigError("q must be a prime power");
  return FqField::get(static_cast<int>(p), k);
}

ExtFlavor flavor_of(const std::string& s, const FqField& F) {
  if (s == "unramified") return ExtFlavor::Unramified;
  if (s == "ramified") {
    if (F.p == 2) throw ConfigError("tame ramification needs odd residue characteristic");
    return ExtFlavor::RamifiedTame;
  }
  throw ConfigError("flavor must be unramified or ramified");
}

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    int v = std::stoi(item, &pos);
    if (pos != item.size()) throw ConfigError("bad integer list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void parse_range(const std::string& s, int& lo, int& hi) {
  size_t dots = s.find("..");
  if (dots == std::string::npos) throw ConfigError("range must look like 'lo..hi'");
  lo = std::stoi(s.substr(0, dots));
  hi = std::stoi(s.substr(dots + 2));
  if (lo > hi) throw ConfigError("empty range '" + s + "'");
}

json provenance(unsigned seed, const EngineOptions& opts) {
  json p;
  p["seed"] = seed;
  p["depth"] = opts.relprec;
  p["psi_conductor"] = 0;
  p["measure"] = "Vol(O_F)=Vol(O_F^x)=1, Vol(O_E^x)=q^((e-1)/2)";
  p["omega_convention"] = "central character trivial; xi tracks Omega^-1(pi_E)";
  return p;
}

std::string render(const SuiteResult& R, const std::string& format, const std::string& warning,
                   unsigned seed, const EngineOptions& opts) {
  std::ostringstream os;
  if (format == "json") {
    json out;
    out["suite"] = R.suite;
    json params;
    for (const auto& [k, v] : R.params) params[k] = v;
    out["params"] = params;
    json cases = json::array();
    for (const auto& c : R.cases) {
      json jc;
      jc["x"] = {{"valuation", c.valuation}, {"unit_repr", c.x}};
      jc["lhs"] = c.lhs;
      jc["rhs"] = c.rhs;
      jc["pass"] = c.pass;
      if (!c.witness.empty()) jc["witness"] = c.witness;
      cases.push_back(jc);
    }
    out["cases"] = cases;
    out["summary"] = {{"total", R.total()}, {"passed", R.passed()}};
    if (!warning.empty()) out["warning"] = warning;
    out["provenance"] = provenance(seed, opts);
    os << out.dump(2) << "\n";
    return os.str();
  }
  os << R.suite;
  for (const auto& [k, v] : R.params) os << " " << k << "=" << v;
  os << "\n";
  size_t wx = 1, wl = 3, wr = 3;
  for (const auto& c : R.cases) {
    wx = std::max(wx, c.x.size());
    wl = std::max(wl, c.lhs.size());
    wr = std::max(wr, c.rhs.size());
  }
  for (const auto& c : R.cases) {
    os << (c.pass ? "  ok   " : "  FAIL ") << std::left << std::setw(static_cast<int>(wx)) << c.x
       << "  v=" << std::setw(3) << c.valuation << "  lhs=" << std::setw(static_cast<int>(wl))
       << c.lhs << "  rhs=" << std::setw(static_cast<int>(wr)) << c.rhs;
    if (!c.witness.empty()) os << "  " << c.witness;
    os << "\n";
  }
  os << "summary: " << R.passed() << "/" << R.total() << " passed\n";
  return os.str();
}

int emit(const SuiteResult& R, const std::string& format, const std::string& out_path,
         unsigned seed, const EngineOptions& opts) {
  std::string warning = R.warning;
  if (R.total() == 0 && warning.empty()) warning = "empty case grid";
  std::string text = render(R, format, warning, seed, opts);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 1;
    }
    f << text;
  }
  if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
  return R.pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("exact local orbital integral laboratory\n\n") + kGrammar};
  app.require_subcommand(1);

  std::string format = "table", out_path;
  long q = 3;
  unsigned seed = 1;
  int samples = 2;
  EngineOptions opts;
  std::string flavor = "unramified";

  auto add_common = [&](CLI::App* sub, bool with_flavor) {
    sub->add_option("--format", format, "output format: table or json")
        ->check(CLI::IsMember({"table", "json"}));
    sub->add_option("--out", out_path, "write the report to this path instead of stdout");
    sub->add_option("--q", q, "residue field size (prime power)");
    sub->add_option("--seed", seed, "deterministic sampling seed");
    sub->add_option("--samples", samples, "unit samples per grid point");
    sub->add_option("--depth", opts.relprec, "relative precision of inversions");
    if (with_flavor)
      sub->add_option("--flavor", flavor, "extension flavor: unramified or ramified");
  };

  auto* fl = app.add_subcommand("fl", "unit and generator matching on the norm classes");
  std::string fl_ms = "0,2,4", fl_vx = "-6..6";
  int inject = -1;
  fl->add_option("--m", fl_ms, "determinant cell indices (even), comma separated");
  fl->add_option("--vx", fl_vx, "v(x) window, 'lo..hi'");
  fl->add_option("--inject-fault", inject, "test fixture: corrupt the given case index")
      ->group("");
  add_common(fl, false);

  auto* afl = app.add_subcommand("afl", "derivative identity against the arithmetic side");
  std::string afl_ms = "0,2", afl_vx = "-3,-1,1,3,5";
  afl->add_option("--m", afl_ms, "determinant cell indices (even), comma separated");
  afl->add_option("--vx", afl_vx, "valuations of x, comma separated");
  add_common(afl, false);

  auto* match = app.add_subcommand("match", "trace-ball construction and matching values");
  int match_m = 1;
  match->add_option("--m", match_m, "congruence level (>= 1)");
  add_common(match, true);

  auto* split = app.add_subcommand("split", "split-model matching on random ball pairs");
  int pairs = 20;
  split->add_option("--pairs", pairs, "number of (Phi, x) pairs");
  add_common(split, false);

  auto* gauss = app.add_subcommand("gauss", "Gauss sum support laws and two-ball combinations");
  add_common(gauss, false);

  auto* orb = app.add_subcommand("orbital", "evaluate one orbital integral");
  orb->allow_extras();  // tolerate a bare 'eval' mode word
  std::string side = "S", phi_name = "det", xlit = "t", epslit = "1";
  int orb_m = 0;
  orb->add_option("--side", side, "S or G")->check(CLI::IsMember({"S", "G"}));
  orb->add_option("--phi,--support", phi_name,
                  "S side: KcapS | det | cell; G side: KepsM | KepsMZ | Cm | Gdet");
  orb->add_option("--m", orb_m, "support level");
  orb->add_option("--x", xlit, "invariant x (element literal)");
  orb->add_option("--eps", epslit, "class representative eps (element literal)");
  add_common(orb, true);

  auto* minf = app.add_subcommand("minf", "half-plane metric identity");
  add_common(minf, true);

  auto* axioms = app.add_subcommand("axioms", "special multiplicity function axioms");
  std::string candidate = "unramified";
  int level = 2;
  axioms->add_option("--candidate", candidate, "unramified | zero | det")
      ->check(CLI::IsMember({"unramified", "zero", "det"}));
  axioms->add_option("--level", level, "congruence level of U");
  add_common(axioms, false);

  CLI11_PARSE(app, argc, argv);

  try {
    const FqField& F = field_of(q);
    SuiteResult R;
    if (fl->parsed()) {
      int lo, hi;
      parse_range(fl_vx, lo, hi);
      R = verify_FL(F, parse_list(fl_ms), lo, hi, samples, seed, opts, inject);
    } else if (afl->parsed()) {
      R = verify_AFL(F, parse_list(afl_ms), parse_list(afl_vx), samples, seed, opts);
    } else if (match->parsed()) {
      R = verify_matching(F, flavor_of(flavor, F), match_m, samples, seed, opts);
    } else if (split->parsed()) {
      R = verify_split_matching(F, pairs, seed, opts);
    } else if (gauss->parsed()) {
      R = verify_gauss(F);
    } else if (minf->parsed()) {
      R = verify_minf(F, flavor_of(flavor, F), samples, seed);
    } else if (axioms->parsed()) {
      MultiplicityCandidate cand = candidate == "zero"  ? zero_multiplicity_candidate()
                                   : candidate == "det" ? det_violating_candidate()
                                                        : unramified_multiplicity_candidate();
      R = verify_multiplicity_axioms(F, cand, level, samples, seed);
    } else if (orb->parsed()) {
      LocalElem x = parse_local(F, xlit);
      R.suite = "orbital";
      R.params = {{"q", std::to_string(q)},
                  {"side", side},
                  {"phi", phi_name},
                  {"m", std::to_string(orb_m)},
                  {"flavor", flavor}};
      const QuadExt& E = QuadExt::get(F, flavor_of(flavor, F));
      OrbitalValue v;
      if (side == "S") {
        TestFnS fn = phi_name == "KcapS"  ? TestFnS::k_cap_s()
                     : phi_name == "cell" ? TestFnS::hecke_cell(orb_m)
                     : phi_name == "det"
                         ? TestFnS::integral_det(orb_m)
                         : throw ConfigError("unknown S-side support '" + phi_name + "'");
        v = orbital_S_x(E, fn, x, opts);
      } else if (phi_name == "KepsM" || phi_name == "KepsMZ") {
        LocalElem eps = parse_local(F, epslit);
        v = orbital_G_x(E, eps,
                        phi_name == "KepsM" ? TestFnG::keps(orb_m) : TestFnG::keps_z(orb_m), x,
                        opts);
      } else if (phi_name == "Cm" || phi_name == "Gdet") {
        v = orbital_G1_x(E, phi_name == "Cm" ? TestFnG::cm(orb_m) : TestFnG::integral_det(orb_m),
                         x, opts);
      } else {
        throw ConfigError("unknown G-side support '" + phi_name + "'");
      }
      CaseResult c;
      c.x = xlit;
      c.valuation = x.v();
      c.lhs = v.str();
      c.rhs = v.value_at_zero().str() + render_q_half(v.q_half);
      c.pass = true;
      R.add(c);
    }
    return emit(R, format, out_path, seed, opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
