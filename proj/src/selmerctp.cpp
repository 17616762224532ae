#include "arithbf/selmerctp.hpp"

#include <random>
#include <stdexcept>

#include "arithbf/errors.hpp"
#include "arithbf/randomizers.hpp"

namespace arithbf {

namespace {

bool is_dual(Mod m) { return m == Mod::M1d || m == Mod::Md || m == Mod::M2d; }

// the map a coefficient homomorphism induces on cohomology class groups
GroupHom induced_on_classes(const Cohomology& src, const Cohomology& dst, const GroupHom& coeff,
                            const GModule& dst_mod) {
  int n = src.group().dim();
  std::vector<std::vector<Int>> cols;
  for (int j = 0; j < n; ++j) {
    std::vector<Int> e(n, Int(0));
    e[j] = 1;
    cols.push_back(dst.project(map_coefficients(coeff, dst_mod, src.representative(e))));
  }
  return GroupHom{src.group(), dst.group(), IntMatrix::from_columns(dst.group().dim(), cols)};
}

GroupHom coeff_iota(const FixtureContext& ctx) {
  return GroupHom{ctx.module(Mod::M1).grp, ctx.module(Mod::M).grp, ctx.triple().iota};
}
GroupHom coeff_pi(const FixtureContext& ctx) {
  return GroupHom{ctx.module(Mod::M).grp, ctx.module(Mod::M2).grp, ctx.triple().pi};
}
GroupHom coeff_pi_dual(const FixtureContext& ctx) {  // dual of pi: M2d -> Md
  return GroupHom{ctx.module(Mod::M2d).grp, ctx.module(Mod::Md).grp, ctx.dual_triple().iota};
}
GroupHom coeff_iota_dual(const FixtureContext& ctx) {  // dual of iota: Md -> M1d
  return GroupHom{ctx.module(Mod::Md).grp, ctx.module(Mod::M1d).grp, ctx.dual_triple().pi};
}

}  // namespace

Mod dual_module(Mod m) {
  switch (m) {
    case Mod::M1: return Mod::M1d;
    case Mod::M: return Mod::Md;
    case Mod::M2: return Mod::M2d;
    case Mod::M1d: return Mod::M1;
    case Mod::Md: return Mod::M;
    case Mod::M2d: return Mod::M2;
  }
  throw std::logic_error("unreachable");
}

SelmerCondition full_condition(const FixtureContext& ctx, Mod module) {
  SelmerCondition c;
  c.module = module;
  for (int i = 0; i < ctx.place_count(); ++i)
    c.local.emplace(i, full_subgroup(ctx.place(i).h1(module).group()));
  return c;
}

SelmerCondition zero_condition(const FixtureContext& ctx, Mod module) {
  SelmerCondition c;
  c.module = module;
  for (int i = 0; i < ctx.place_count(); ++i)
    c.local.emplace(i, zero_subgroup(ctx.place(i).h1(module).group()));
  return c;
}

SelmerCondition fixture_condition(const FixtureContext& ctx) {
  SelmerCondition c;
  c.module = Mod::M;
  for (int i = 0; i < ctx.place_count(); ++i) c.local.emplace(i, ctx.place(i).w);
  return c;
}

Subgroup condition_at(const FixtureContext& ctx, const SelmerCondition& c, int place) {
  auto it = c.local.find(place);
  if (it != c.local.end()) return it->second;
  return full_subgroup(ctx.place(place).h1(c.module).group());
}

SelmerGroup selmer_group(const FixtureContext& ctx, const SelmerCondition& cond) {
  SelmerGroup s;
  s.condition = cond;
  const FinAbGroup& h1 = ctx.h1(cond.module).group();
  for (const std::vector<Int>& cls : h1.elements()) {
    bool ok = true;
    for (const auto& [place, sub] : cond.local) {
      if (place < 0 || place >= ctx.place_count())
        throw std::invalid_argument("condition names a place outside the fixture");
      if (!sub.contains(ctx.restrict_class(cond.module, cls, place))) {
        ok = false;
        break;
      }
    }
    if (ok) s.elements.push_back(cls);
  }
  s.group = subgroup_from_generators(h1, s.elements);
  return s;
}

SelmerCondition orthogonal_complement(const FixtureContext& ctx, const SelmerCondition& cond) {
  Mod dm = dual_module(cond.module);
  Mod primal = is_dual(cond.module) ? dm : cond.module;
  SelmerCondition out;
  out.module = dm;
  for (int x = 0; x < ctx.place_count(); ++x) {
    Subgroup w = condition_at(ctx, cond, x);
    const FinAbGroup& dh1 = ctx.place(x).h1(dm).group();
    std::vector<std::vector<Int>> ann;
    for (const std::vector<Int>& cand : dh1.elements()) {
      bool kills = true;
      for (const std::vector<Int>& p : w.element_list()) {
        QmodZ v = is_dual(cond.module) ? local_tate_pairing(ctx, x, primal, p, cand)
                                       : local_tate_pairing(ctx, x, primal, cand, p);
        if (!v.is_zero()) {
          kills = false;
          break;
        }
      }
      if (kills) ann.push_back(cand);
    }
    Subgroup a = subgroup_from_generators(dh1, ann);
    if (w.order() * a.order() != ctx.place(x).h1(cond.module).group().order())
      throw DualityNotPerfect("place " + ctx.place(x).data.id +
                              ": annihilator order does not complement the condition");
    out.local.emplace(x, std::move(a));
  }
  return out;
}

SelmerTriple induced_triple(const FixtureContext& ctx, const SelmerCondition& w) {
  if (w.module != Mod::M) throw std::invalid_argument("induced_triple expects a condition on M");
  SelmerTriple t;
  t.w = w;
  t.w1.module = Mod::M1;
  t.w2.module = Mod::M2;
  for (int x = 0; x < ctx.place_count(); ++x) {
    const PlaceContext& pc = ctx.place(x);
    Subgroup wx = condition_at(ctx, w, x);
    GroupHom ip = induced_on_classes(pc.h1(Mod::M1), pc.h1(Mod::M), coeff_iota(ctx),
                                     pc.module(Mod::M));
    GroupHom pp = induced_on_classes(pc.h1(Mod::M), pc.h1(Mod::M2), coeff_pi(ctx),
                                     pc.module(Mod::M2));
    t.w1.local.emplace(x, preimage_subgroup(ip, wx));
    t.w2.local.emplace(x, image_subgroup(pp, wx));
  }
  return t;
}

ExactnessReport check_selmer_exactness(const FixtureContext& ctx, const SelmerTriple& t) {
  ExactnessReport r;
  if (t.w1.module != Mod::M1 || t.w.module != Mod::M || t.w2.module != Mod::M2) {
    r.pass = false;
    r.witnesses.push_back("triple conditions are not on (M1, M, M2)");
    return r;
  }
  SelmerCondition wp = orthogonal_complement(ctx, t.w);
  SelmerCondition w1p = orthogonal_complement(ctx, t.w1);
  SelmerCondition w2p = orthogonal_complement(ctx, t.w2);
  for (int x = 0; x < ctx.place_count(); ++x) {
    const PlaceContext& pc = ctx.place(x);
    Subgroup wx = condition_at(ctx, t.w, x);
    GroupHom ip = induced_on_classes(pc.h1(Mod::M1), pc.h1(Mod::M), coeff_iota(ctx),
                                     pc.module(Mod::M));
    GroupHom pp = induced_on_classes(pc.h1(Mod::M), pc.h1(Mod::M2), coeff_pi(ctx),
                                     pc.module(Mod::M2));
    if (!subgroup_equal(preimage_subgroup(ip, wx), condition_at(ctx, t.w1, x)))
      r.witnesses.push_back("place " + pc.data.id + ": first condition is not the preimage");
    if (!subgroup_equal(image_subgroup(pp, wx), condition_at(ctx, t.w2, x)))
      r.witnesses.push_back("place " + pc.data.id + ": second condition is not the image");

    GroupHom ipd = induced_on_classes(pc.h1(Mod::M2d), pc.h1(Mod::Md), coeff_pi_dual(ctx),
                                      pc.module(Mod::Md));
    GroupHom ppd = induced_on_classes(pc.h1(Mod::Md), pc.h1(Mod::M1d), coeff_iota_dual(ctx),
                                      pc.module(Mod::M1d));
    Subgroup wpx = condition_at(ctx, wp, x);
    if (!subgroup_equal(preimage_subgroup(ipd, wpx), condition_at(ctx, w2p, x)))
      r.witnesses.push_back("place " + pc.data.id +
                            ": complement of the second condition mismatches the dual preimage");
    if (!subgroup_equal(image_subgroup(ppd, wpx), condition_at(ctx, w1p, x)))
      r.witnesses.push_back("place " + pc.data.id +
                            ": complement of the first condition mismatches the dual image");
  }
  r.pass = r.witnesses.empty();
  return r;
}

QmodZ cassels_tate_pairing(const FixtureContext& ctx, const SelmerTriple& t,
                           const std::vector<Int>& rho1_in, const std::vector<Int>& rho2_in,
                           uint64_t seed) {
  const ModuleTriple& tri = ctx.triple();
  std::vector<Int> rho1 = ctx.h1(Mod::M1d).group().reduce(rho1_in);
  std::vector<Int> rho2 = ctx.h1(Mod::M2).group().reduce(rho2_in);

  SelmerCondition w1p = orthogonal_complement(ctx, t.w1);
  for (int x = 0; x < ctx.place_count(); ++x) {
    if (!condition_at(ctx, w1p, x).contains(ctx.restrict_class(Mod::M1d, rho1, x)))
      throw std::invalid_argument("first class violates the dual condition at place " +
                                  ctx.place(x).data.id);
    if (!condition_at(ctx, t.w2, x).contains(ctx.restrict_class(Mod::M2, rho2, x)))
      throw std::invalid_argument("second class violates the condition at place " +
                                  ctx.place(x).data.id);
  }

  std::mt19937_64 eng(seed);
  Cochain a1 = ctx.h1(Mod::M1d).representative(rho1);
  Cochain a2 = ctx.h1(Mod::M2).representative(rho2);
  SetSection sigma = ctx.sigma();
  if (seed != 0) {
    a1 = cochain_add(a1, differential(constant_cochain(ctx.module(Mod::M1d),
                                             random_group_elem(eng, ctx.module(Mod::M1d).grp))));
    a2 = cochain_add(a2, differential(constant_cochain(ctx.module(Mod::M2),
                                             random_group_elem(eng, ctx.module(Mod::M2).grp))));
    sigma = randomized_section(tri, eng());
  }

  Cochain f = compose_section(tri, sigma, a2);
  if (seed != 0)
    f = cochain_add(f, map_coefficients(coeff_iota(ctx), ctx.module(Mod::M),
                                        random_cochain(eng, ctx.module(Mod::M1), 1)));

  Cochain v = iota_preimage_cochain(tri, differential(f));
  auto eps = solve_differential(cup(a1, v, ctx.ev(Mod::M1)));
  if (!eps) throw ObstructionNonzero("no global primitive for the coupling obstruction");
  Cochain e = *eps;
  if (seed != 0) e = cochain_add(e, random_cocycle(eng, ctx.fixture().dualizing, 2));

  QmodZ total;
  for (int x = 0; x < ctx.place_count(); ++x) {
    const PlaceContext& pc = ctx.place(x);
    const std::vector<int>& sub = pc.data.subgroup;
    Cochain le = restrict_cochain(e, sub);
    Cochain la1 = restrict_cochain(a1, sub);
    Cochain la2 = restrict_cochain(a2, sub);
    Cochain lf = restrict_cochain(f, sub);

    // a class inside the condition on M lifting the restricted quotient class
    std::vector<Int> target = pc.h1_m2.project(la2);
    Subgroup wx = condition_at(ctx, t.w, x);
    GroupHom pp = induced_on_classes(pc.h1(Mod::M), pc.h1(Mod::M2), coeff_pi(ctx),
                                     pc.module(Mod::M2));
    std::vector<std::vector<Int>> hits;
    for (const std::vector<Int>& wc : wx.element_list())
      if (pc.h1_m2.group().reduce(pp.apply(wc)) == target) hits.push_back(wc);
    if (hits.empty())
      throw NoLocalLift("place " + pc.data.id + ": restricted class has no lift in the condition");
    const std::vector<Int>& wcls = seed == 0 ? hits.front() : hits[size_t(eng() % hits.size())];

    Cochain m = pc.h1_m.representative(wcls);
    if (seed != 0)
      m = cochain_add(m, differential(constant_cochain(pc.m, random_group_elem(eng, pc.m.grp))));

    // correct the lift so it projects to the restricted cocycle on the nose
    GroupHom cp = coeff_pi(ctx);
    Cochain defect = cochain_sub(map_coefficients(cp, pc.m2, m), la2);
    auto h0 = solve_differential(defect);
    if (!h0) throw SectionMismatch("place " + pc.data.id + ": lift projects to a different class");
    m = cochain_sub(m, differential(constant_cochain(pc.m, sigma.apply(h0->vals[0]))));

    Cochain w1c = iota_preimage_cochain(pc.triple, cochain_sub(m, lf));
    Cochain gamma = cochain_sub(le, cup(la1, w1c, pc.ev_m1));
    total = total.add(local_invariant(ctx, x, gamma));
  }
  return total;
}

CtpKernelReport ctp_kernels(const FixtureContext& ctx, const SelmerTriple& t) {
  CtpKernelReport r;
  r.sel_first = selmer_group(ctx, orthogonal_complement(ctx, t.w1));
  r.sel_second = selmer_group(ctx, t.w2);
  size_t n1 = r.sel_first.elements.size(), n2 = r.sel_second.elements.size();

  r.table.assign(n1, std::vector<QmodZ>(n2));
  for (size_t i = 0; i < n1; ++i)
    for (size_t j = 0; j < n2; ++j)
      r.table[i][j] = cassels_tate_pairing(ctx, t, r.sel_first.elements[i],
                                           r.sel_second.elements[j]);

  std::vector<std::vector<Int>> k1, k2;
  for (size_t i = 0; i < n1; ++i) {
    bool all0 = true;
    for (size_t j = 0; j < n2; ++j) all0 = all0 && r.table[i][j].is_zero();
    if (all0) k1.push_back(r.sel_first.elements[i]);
  }
  for (size_t j = 0; j < n2; ++j) {
    bool all0 = true;
    for (size_t i = 0; i < n1; ++i) all0 = all0 && r.table[i][j].is_zero();
    if (all0) k2.push_back(r.sel_second.elements[j]);
  }
  r.kernel_first = subgroup_from_generators(ctx.h1(Mod::M1d).group(), k1);
  r.kernel_second = subgroup_from_generators(ctx.h1(Mod::M2).group(), k2);

  SelmerGroup sel_mid = selmer_group(ctx, t.w);
  SelmerGroup sel_mid_dual = selmer_group(ctx, orthogonal_complement(ctx, t.w));
  GroupHom gp = induced_on_classes(ctx.h1(Mod::M), ctx.h1(Mod::M2), coeff_pi(ctx),
                                   ctx.module(Mod::M2));
  GroupHom gi = induced_on_classes(ctx.h1(Mod::Md), ctx.h1(Mod::M1d), coeff_iota_dual(ctx),
                                   ctx.module(Mod::M1d));
  r.expected_second = image_subgroup(gp, sel_mid.group);
  r.expected_first = image_subgroup(gi, sel_mid_dual.group);

  if (!subgroup_equal(r.kernel_first, r.expected_first))
    r.witnesses.push_back("kernel on the dual side differs from the image of the dual Selmer group");
  if (!subgroup_equal(r.kernel_second, r.expected_second))
    r.witnesses.push_back("kernel on the quotient side differs from the image of the middle Selmer group");
  r.pass = r.witnesses.empty();
  return r;
}

}  // namespace arithbf
