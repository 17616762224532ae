#include "arithbf/verify.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "arithbf/bfcore.hpp"
#include "arithbf/randomizers.hpp"

namespace arithbf {
namespace {

std::string coord_str(const std::vector<Int>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + "]";
}

std::string field_str(const FieldPoint& rho) {
  return coord_str(rho.cls1) + "x" + coord_str(rho.cls2);
}

std::vector<std::vector<Int>> subgroup_gens(const Subgroup& s) {
  std::vector<std::vector<Int>> gens;
  for (int i = 0; i < s.group.dim(); ++i) {
    std::vector<Int> u(s.group.dim(), Int(0));
    u[i] = 1;
    gens.push_back(s.embed(u));
  }
  return gens;
}

bool sub_eq(const Subgroup& a, const Subgroup& b) {
  if (a.order() != b.order()) return false;
  for (const auto& g : subgroup_gens(a))
    if (!b.contains(g)) return false;
  return true;
}

// image of a local condition on the middle module under the quotient map
Subgroup push_to_quotient(const FixtureContext& ctx, int pl, const Subgroup& w) {
  const PlaceContext& p = ctx.place(pl);
  GroupHom ph{p.m.grp, p.m2.grp, ctx.fixture().pi};
  std::vector<std::vector<Int>> gens;
  for (const auto& g : subgroup_gens(w))
    gens.push_back(p.h1_m2.project(map_coefficients(ph, p.m2, p.h1_m.representative(g))));
  return subgroup_from_generators(p.h1_m2.group(), gens);
}

// classes on the kernel module whose pushforward lands in the condition
Subgroup pull_to_kernel(const FixtureContext& ctx, int pl, const Subgroup& w) {
  const PlaceContext& p = ctx.place(pl);
  GroupHom ih{p.m1.grp, p.m.grp, ctx.fixture().iota};
  std::vector<std::vector<Int>> kept;
  for (const auto& e : p.h1_m1.group().elements()) {
    auto img = p.h1_m.project(map_coefficients(ih, p.m, p.h1_m1.representative(e)));
    if (w.contains(img)) kept.push_back(e);
  }
  return subgroup_from_generators(p.h1_m1.group(), kept);
}

// annihilator of a kernel-module condition under the local duality pairing
Subgroup annihilator_dual(const FixtureContext& ctx, int pl, const Subgroup& w1) {
  const PlaceContext& p = ctx.place(pl);
  auto gens = subgroup_gens(w1);
  std::vector<std::vector<Int>> kept;
  for (const auto& e : p.h1_m1d.group().elements()) {
    bool ann = true;
    for (const auto& g : gens)
      if (!local_tate_pairing(ctx, pl, Mod::M1, e, g).is_zero()) {
        ann = false;
        break;
      }
    if (ann) kept.push_back(e);
  }
  return subgroup_from_generators(p.h1_m1d.group(), kept);
}

// the two factors of the unramified image at a place
std::pair<Subgroup, Subgroup> unramified_factors(const PlaceContext& p) {
  int d1 = p.h1_m1d.group().dim();
  int d2 = p.h1_m2.group().dim();
  std::vector<std::vector<Int>> g1, g2;
  for (int j = 0; j < p.ur.to_fx.mat.cols; ++j) {
    auto col = p.ur.to_fx.mat.column(j);
    g1.emplace_back(col.begin(), col.begin() + d1);
    g2.emplace_back(col.begin() + d1, col.begin() + d1 + d2);
  }
  return {subgroup_from_generators(p.h1_m1d.group(), g1),
          subgroup_from_generators(p.h1_m2.group(), g2)};
}

std::vector<int> mask_places(int mask, int n) {
  std::vector<int> v;
  for (int i = 0; i < n; ++i)
    if (mask & (1 << i)) v.push_back(i);
  return v;
}

std::string places_str(const FixtureContext& ctx, const std::vector<int>& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += ctx.place(s[i]).data.id;
  }
  return out + "}";
}

SectionXi make_xi(const FixtureContext& ctx, const std::vector<int>& places, uint64_t seed) {
  if (places.empty()) return SectionXi{};
  return seed == 0 ? default_xi(ctx, places) : random_xi(ctx, places, seed);
}

// the nested (s, t) cut pairs a suite ranges over, honoring overrides
std::vector<std::pair<std::vector<int>, std::vector<int>>> cut_pairs(
    const FixtureContext& ctx, const std::optional<std::vector<int>>& s,
    const std::optional<std::vector<int>>& t) {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  int n = ctx.place_count();
  if (s && t) {
    for (int i : *s)
      if (std::find(t->begin(), t->end(), i) == t->end())
        throw std::invalid_argument("S must be contained in T");
    out.push_back({*s, *t});
    return out;
  }
  if (s) {
    std::vector<int> all = mask_places((1 << n) - 1, n);
    out.push_back({*s, all});
    return out;
  }
  if (t) {
    // all subsets of the given T, as masks over positions into T
    int k = int(t->size());
    for (int sm = 0; sm < (1 << k); ++sm) {
      std::vector<int> sp;
      for (int i = 0; i < k; ++i)
        if (sm & (1 << i)) sp.push_back((*t)[i]);
      out.push_back({sp, *t});
    }
    return out;
  }
  for (int tm = 0; tm < (1 << n); ++tm)
    for (int sm = tm;; sm = (sm - 1) & tm) {
      out.push_back({mask_places(sm, n), mask_places(tm, n)});
      if (sm == 0) break;
    }
  return out;
}

SuiteReport suite_decomposition(const FixtureContext& ctx, uint64_t seed,
                                const std::optional<std::vector<int>>& s,
                                const std::optional<std::vector<int>>& t) {
  SuiteReport rep{"decomposition", {}};
  for (const auto& [sp, tp] : cut_pairs(ctx, s, t)) {
    std::vector<int> ts;
    std::set_difference(tp.begin(), tp.end(), sp.begin(), sp.end(), std::back_inserter(ts));
    DecompositionReport dr =
        verify_decomposition(ctx, sp, tp, make_xi(ctx, sp, seed), make_xi(ctx, ts, seed));
    rep.checks.push_back({"S=" + places_str(ctx, sp) + " T=" + places_str(ctx, tp), dr.pass,
                          dr.pass ? dr.note : dr.mismatches.front()});
  }
  return rep;
}

SuiteReport suite_gluing(const FixtureContext& ctx, uint64_t seed,
                         const std::optional<std::vector<int>>& s,
                         const std::optional<std::vector<int>>& t) {
  SuiteReport rep{"gluing", {}};
  for (const auto& [sp, tp] : cut_pairs(ctx, s, t)) {
    std::vector<int> ts;
    std::set_difference(tp.begin(), tp.end(), sp.begin(), sp.end(), std::back_inserter(ts));
    AmplitudeSection zs = partition_relative(ctx, sp, make_xi(ctx, sp, seed), seed);
    AmplitudeSection zt = partition_relative(ctx, tp, make_xi(ctx, tp, seed), seed);
    AmplitudeSection bd =
        boundary_partition(ctx, ts, make_xi(ctx, ts, seed), Orientation::reversed, seed);
    AmplitudeSection g = glue(ctx, zt, bd);
    bool pass = g.s == zs.s && g.table == zs.table;
    rep.checks.push_back({"S=" + places_str(ctx, sp) + " T=" + places_str(ctx, tp), pass,
                          pass ? std::to_string(zs.table.size()) + " fibers"
                               : "glued section differs from the direct one"});
  }
  return rep;
}

SuiteReport suite_ctp_independence(const FixtureContext& ctx, uint64_t seed, int resamples) {
  SuiteReport rep{"ctp-independence", {}};
  SelmerBundle b = selmer_bundle(ctx);
  for (const auto& r1 : b.on_m1dual.elements)
    for (const auto& r2 : b.on_m2.elements) {
      QmodZ base = cassels_tate_pairing(ctx, b.triple, r1, r2, 0);
      bool stable = true;
      uint64_t bad = 0;
      for (int k = 1; k <= resamples; ++k) {
        uint64_t sk = seed * 0x9e3779b97f4a7c15ULL + uint64_t(k);
        if (!(cassels_tate_pairing(ctx, b.triple, r1, r2, sk) == base)) {
          stable = false;
          bad = sk;
          break;
        }
      }
      rep.checks.push_back({"pairing " + coord_str(r1) + "," + coord_str(r2), stable,
                            stable ? "value " + base.str() + " under " +
                                         std::to_string(resamples) + " re-choices"
                                   : "re-choice seed " + std::to_string(bad) + " changed the value"});
    }
  return rep;
}

SuiteReport suite_ctp_kernels(const FixtureContext& ctx) {
  SuiteReport rep{"ctp-kernels", {}};
  SelmerBundle b = selmer_bundle(ctx);
  CtpKernelReport kr = ctp_kernels(ctx, b.triple);
  bool left = sub_eq(kr.kernel_first, kr.expected_first);
  bool right = sub_eq(kr.kernel_second, kr.expected_second);
  rep.checks.push_back({"left kernel = dual-image Selmer subgroup", left,
                        "|kernel| = " + kr.kernel_first.order().get_str() +
                            ", |expected| = " + kr.expected_first.order().get_str()});
  rep.checks.push_back({"right kernel = pushed middle Selmer subgroup", right,
                        "|kernel| = " + kr.kernel_second.order().get_str() +
                            ", |expected| = " + kr.expected_second.order().get_str()});
  return rep;
}

SuiteReport suite_ctp_equals_bf(const FixtureContext& ctx, uint64_t seed) {
  SuiteReport rep{"ctp-equals-bf", {}};
  std::vector<CheckResult> align = alignment_checks(ctx);
  for (CheckResult& c : align) rep.checks.push_back(std::move(c));

  SelmerBundle b = selmer_bundle(ctx);
  FieldsSpace fs = space_of_fields(ctx, {});
  std::set<std::vector<Int>> fields, pairs;
  for (const auto& rho : fs.elements) {
    auto key = rho.cls1;
    key.insert(key.end(), rho.cls2.begin(), rho.cls2.end());
    fields.insert(key);
  }
  for (const auto& a : b.on_m1dual.elements)
    for (const auto& c : b.on_m2.elements) {
      auto key = a;
      key.insert(key.end(), c.begin(), c.end());
      pairs.insert(key);
    }
  rep.checks.push_back({"closed fields = Selmer class pairs", fields == pairs,
                        std::to_string(fields.size()) + " fields"});

  for (const auto& rho : fs.elements) {
    QmodZ pv = cassels_tate_pairing(ctx, b.triple, rho.cls1, rho.cls2, seed);
    QmodZ bv = bf_closed(ctx, rho, seed);
    rep.checks.push_back({"field " + field_str(rho), pv == bv,
                          "pairing " + pv.str() + ", action " + bv.str()});
  }
  return rep;
}

SuiteReport suite_onshell(const FixtureContext& ctx, uint64_t seed) {
  SuiteReport rep{"onshell", {}};
  SelmerBundle b = selmer_bundle(ctx);
  CycInt z = partition_closed(ctx, seed);
  rep.checks.push_back(
      {"closed partition value is a rational integer", z.is_rational_integer(), z.str()});
  Int expect = pushed_selmer_order(ctx, b.on_m) * b.on_m1dual.group.order();
  bool eq = z.is_rational_integer() && z.rational_value() == expect;
  rep.checks.push_back({"partition value = pushed Selmer x dual Selmer", eq,
                        z.str() + " vs " + expect.get_str()});
  return rep;
}

SuiteReport suite_tensor(const FixtureContext& ctx, uint64_t seed, int resamples) {
  SuiteReport rep{"tensor", {}};
  std::vector<int> all = mask_places((1 << ctx.place_count()) - 1, ctx.place_count());
  TensorReport tr = tensor_factor_check(ctx, all, seed, resamples);
  rep.checks.push_back({"amplitudes factor over disjoint cuts", tr.pass,
                        tr.pass ? std::to_string(resamples) + " seeded sections"
                                : tr.witnesses.front()});
  return rep;
}

// menu entry for the product rule suite: module pair with an equivariant
// evaluation
struct LeibnizEntry {
  std::string name;
  Pairing ev;
};

IntMatrix swap2() {
  IntMatrix m(2, 2);
  m.at(0, 1) = 1;
  m.at(1, 0) = 1;
  return m;
}

IntMatrix diag1(long v) {
  IntMatrix m(1, 1);
  m.at(0, 0) = v;
  return m;
}

std::vector<LeibnizEntry> leibniz_menu() {
  std::vector<LeibnizEntry> menu;
  auto add = [&](const std::string& name, const GModule& a, const GModule& b, const GModule& out,
                 IntMatrix bilin) {
    Pairing ev{a, b, out, std::move(bilin)};
    if (!ev.equivariant()) throw std::logic_error("menu pairing not equivariant: " + name);
    menu.push_back({name, std::move(ev)});
  };

  std::vector<std::pair<std::string, FiniteGroup>> groups = {
      {"1", FiniteGroup::trivial()},
      {"C2", FiniteGroup::cyclic(2)},
      {"C3", FiniteGroup::cyclic(3)},
      {"C4", FiniteGroup::cyclic(4)},
      {"C2xC2", FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))}};

  for (const auto& [gname, g] : groups) {
    FinAbGroup z4({4});
    GModule triv = GModule::trivial(g, z4);
    IntMatrix mult = diag1(1);
    add(gname + " trivial Z4", triv, triv, triv, mult);

    // involutions act by negation; the product pairing stays equivariant
    // into the trivial module
    std::vector<IntMatrix> sign_act;
    bool has_sign = false;
    sign_act.reserve(g.n);
    for (int e = 0; e < g.n; ++e) {
      bool invol = e != 0 && g.mul(e, e) == 0;
      sign_act.push_back(diag1(invol ? 3 : 1));
      if (invol) has_sign = true;
    }
    if (has_sign) {
      GModule sgn{g, z4, sign_act};
      if (sgn.valid()) add(gname + " sign Z4", sgn, sgn, triv, mult);
    }

    // swap action on a rank-two two-torsion module, paired by the doubled
    // dot product into Z4
    FinAbGroup z22({2, 2});
    std::vector<IntMatrix> swap_act;
    bool has_swap = false;
    for (int e = 0; e < g.n; ++e) {
      bool invol = e != 0 && g.mul(e, e) == 0;
      swap_act.push_back(invol ? swap2() : IntMatrix::identity(2));
      if (invol) has_swap = true;
    }
    if (has_swap) {
      GModule sw{g, z22, swap_act};
      IntMatrix dot(1, 4);
      dot.at(0, 0) = 2;
      dot.at(0, 3) = 2;
      if (sw.valid()) add(gname + " swap (Z2)^2", sw, sw, GModule::trivial(g, z4), dot);
    }
  }
  return menu;
}

bool cochain_equal(const Cochain& a, const Cochain& b) { return a.vals == b.vals; }

}  // namespace

bool SuiteReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {
      "leibniz",     "decomposition", "gluing",  "ctp-independence",
      "ctp-kernels", "ctp-equals-bf", "onshell", "tensor"};
  return names;
}

SuiteReport verify_leibniz(uint64_t seed, int pairs) {
  SuiteReport rep{"leibniz", {}};
  std::vector<LeibnizEntry> menu = leibniz_menu();
  std::mt19937_64 eng(seed);
  int done = 0;
  for (int i = 0; i < pairs; ++i) {
    const LeibnizEntry& m = menu[eng() % menu.size()];
    int p = int(eng() % 3), q = int(eng() % 3);
    Cochain a = random_cochain(eng, m.ev.left, p);
    Cochain b = random_cochain(eng, m.ev.right, q);
    Cochain lhs = differential(cup(a, b, m.ev));
    Cochain second = cup(a, differential(b), m.ev);
    if (p % 2 == 1) second = cochain_neg(second);
    Cochain rhs = cochain_add(cup(differential(a), b, m.ev), second);
    if (!cochain_equal(lhs, rhs)) {
      rep.checks.push_back({"pair " + std::to_string(i) + " on " + m.name, false,
                            "degrees (" + std::to_string(p) + "," + std::to_string(q) + ")"});
      return rep;
    }
    ++done;
  }
  rep.checks.push_back({"graded product rule", true,
                        std::to_string(done) + " seeded pairs over " +
                            std::to_string(menu.size()) + " module menus, all exact"});
  return rep;
}

SelmerBundle selmer_bundle(const FixtureContext& ctx) {
  SelmerBundle b;
  SelmerCondition w = fixture_condition(ctx);
  b.triple = induced_triple(ctx, w);
  b.on_m = selmer_group(ctx, w);
  b.on_m1dual = selmer_group(ctx, orthogonal_complement(ctx, b.triple.w1));
  b.on_m2 = selmer_group(ctx, b.triple.w2);
  b.on_mdual = selmer_group(ctx, orthogonal_complement(ctx, w));
  b.exactness = check_selmer_exactness(ctx, b.triple);
  return b;
}

Int pushed_selmer_order(const FixtureContext& ctx, const SelmerGroup& on_m) {
  GroupHom ph{ctx.module(Mod::M).grp, ctx.module(Mod::M2).grp, ctx.fixture().pi};
  std::set<std::vector<Int>> pushed;
  for (const auto& e : on_m.elements)
    pushed.insert(ctx.h1(Mod::M2).project(
        map_coefficients(ph, ctx.module(Mod::M2), ctx.h1(Mod::M).representative(e))));
  return Int(long(pushed.size()));
}

std::vector<CheckResult> alignment_checks(const FixtureContext& ctx) {
  std::vector<CheckResult> out;
  for (int i = 0; i < ctx.place_count(); ++i) {
    const PlaceContext& p = ctx.place(i);
    if (!p.data.in_y) continue;
    Subgroup a1 = annihilator_dual(ctx, i, pull_to_kernel(ctx, i, p.w));
    Subgroup a2 = push_to_quotient(ctx, i, p.w);
    auto [u1, u2] = unramified_factors(p);
    bool ok = sub_eq(a1, u1) && sub_eq(a2, u2);
    out.push_back({"alignment at " + p.data.id, ok,
                   "condition induces (" + a1.order().get_str() + "," + a2.order().get_str() +
                       "), unramified image (" + u1.order().get_str() + "," +
                       u2.order().get_str() + ")"});
    bool inj = image(p.ur.to_fx).order() == p.ur.fnr.order();
    out.push_back({"profile map injective at " + p.data.id, inj,
                   "|image| = " + image(p.ur.to_fx).order().get_str() +
                       ", |unramified data| = " + p.ur.fnr.order().get_str()});
  }
  return out;
}

SuiteReport run_verify_suite(const FixtureContext& ctx, const std::string& which, uint64_t seed,
                             int resamples, const std::optional<std::vector<int>>& s,
                             const std::optional<std::vector<int>>& t) {
  if (which == "leibniz") return verify_leibniz(seed);
  if (which == "decomposition") return suite_decomposition(ctx, seed, s, t);
  if (which == "gluing") return suite_gluing(ctx, seed, s, t);
  if (which == "ctp-independence") return suite_ctp_independence(ctx, seed, resamples);
  if (which == "ctp-kernels") return suite_ctp_kernels(ctx);
  if (which == "ctp-equals-bf") return suite_ctp_equals_bf(ctx, seed);
  if (which == "onshell") return suite_onshell(ctx, seed);
  if (which == "tensor") return suite_tensor(ctx, seed, resamples);
  throw std::invalid_argument("unknown verify suite: " + which);
}

}  // namespace arithbf
