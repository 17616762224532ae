#include "arithbf/bfcore.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "arithbf/errors.hpp"
#include "arithbf/randomizers.hpp"

namespace arithbf {

namespace {

// right-hand side of the connection equation: a1 cup iota^{-1} d(sigma a2)
Cochain connection_rhs(const ModuleTriple& t, const Pairing& ev1, const SetSection& sigma,
                       const Cochain& a1, const Cochain& a2) {
  Cochain sa = compose_section(t, sigma, a2);
  Cochain w = iota_preimage_cochain(t, differential(sa));
  return cup(a1, w, ev1);
}

// degree-0 cochain g with d(g) = rhs; the inputs are cohomologous 1-cocycles
std::vector<Int> solve_constant(const Cochain& rhs, const char* what) {
  auto g = solve_differential(rhs);
  if (!g) throw SectionMismatch(std::string(what) + ": representatives do not lie in the same class");
  return g->vals[0];
}

// transport the component (a1, a2, sigma, phi) to the datum (b1, b2, tau)
Cochain transport_phi(const ModuleTriple& t, const Pairing& ev1, const Cochain& a1,
                      const Cochain& a2, const SetSection& sigma, const Cochain& phi,
                      const Cochain& b1, const Cochain& b2, const SetSection& tau) {
  std::vector<Int> g1 = solve_constant(cochain_sub(b1, a1), "transport");
  std::vector<Int> g2 = solve_constant(cochain_sub(b2, a2), "transport");
  Cochain theta = theta_action(t, ev1, sigma, tau, g1, g2, a1, a2);
  return cochain_add(phi, theta);
}

std::vector<int> sorted_unique(std::vector<int> s, int bound, const char* what) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (int x : s)
    if (x < 0 || x >= bound) throw std::invalid_argument(std::string(what) + ": place index out of range");
  return s;
}

std::vector<Int> point_key(const TorsorPoint& p) {
  std::vector<Int> key;
  for (size_t i = 0; i < p.s.size(); ++i) {
    key.insert(key.end(), p.cls1[i].begin(), p.cls1[i].end());
    key.insert(key.end(), p.cls2[i].begin(), p.cls2[i].end());
  }
  return key;
}

// split an fnr element into the two H¹ factors
std::pair<std::vector<Int>, std::vector<Int>> split_fnr(const UnramifiedSpace& ur,
                                                        const std::vector<Int>& e) {
  int d1 = ur.h1_first.group().dim();
  int d2 = ur.h1_second.group().dim();
  if (int(e.size()) != d1 + d2) throw std::invalid_argument("unramified datum has wrong length");
  return {std::vector<Int>(e.begin(), e.begin() + d1), std::vector<Int>(e.begin() + d1, e.end())};
}

// evaluation pairing of the invariant modules with values in D^ur, over qx
Pairing unramified_pairing(const PlaceContext& pc) {
  const UnramifiedSpace& ur = pc.ur;
  int ld = ur.m1d_inv.grp.dim(), rd = ur.m1_inv.grp.dim(), od = ur.dur.grp.dim();
  IntMatrix b(od, ld * rd);
  for (int i = 0; i < ld; ++i) {
    std::vector<Int> ei(ld, Int(0));
    ei[i] = 1;
    std::vector<Int> li = ur.m1d_inv_sub.embed(ei);
    for (int j = 0; j < rd; ++j) {
      std::vector<Int> ej(rd, Int(0));
      ej[j] = 1;
      std::vector<Int> v = pc.ev_m1.eval(li, ur.m1_inv_sub.embed(ej));
      std::vector<Int> c;
      try {
        c = ur.dur_sub.coords(v);
      } catch (const NoSolution&) {
        throw ObstructionNonzero("place " + pc.data.id +
                                 ": evaluation of invariants leaves the unramified coefficients");
      }
      for (int k = 0; k < od; ++k) b.at(k, i * rd + j) = c[k];
    }
  }
  return Pairing{ur.m1d_inv, ur.m1_inv, ur.dur, b};
}

// sigma(embedded a2q) expressed in invariant-submodule coordinates, over qx
Cochain section_on_invariants(const PlaceContext& pc, const SetSection& sigma, const Cochain& a2q) {
  const UnramifiedSpace& ur = pc.ur;
  Cochain out = Cochain::zero(ur.m_inv, a2q.degree);
  for (int i = 0; i < a2q.points(); ++i) {
    std::vector<Int> amb = sigma.apply(ur.mpi_inv_sub.embed(a2q.vals[i]));
    try {
      out.vals[i] = ur.m_inv_sub.coords(amb);
    } catch (const NoSolution&) {
      throw SectionMismatch("place " + pc.data.id +
                            ": section does not preserve inertia invariants");
    }
  }
  return out;
}

// entrywise iota-preimage at the invariant level, over qx
Cochain iota_preimage_invariant(const FixtureContext& ctx, const PlaceContext& pc, const Cochain& c) {
  const UnramifiedSpace& ur = pc.ur;
  Cochain out = Cochain::zero(ur.m1_inv, c.degree);
  for (int i = 0; i < c.points(); ++i) {
    std::vector<Int> amb = ctx.triple().iota_preimage(ur.m_inv_sub.embed(c.vals[i]));
    out.vals[i] = ur.m1_inv_sub.coords(amb);
  }
  return out;
}

// section of the local pi shifted within the freedom that keeps an
// unramified connection datum inside its fiber: shifts by iota(k) where k is
// an inertia invariant whose evaluation against every dual invariant stays
// inside the unramified coefficient subgroup
SetSection randomized_section_ur(const FixtureContext& ctx, int place, uint64_t seed) {
  const PlaceContext& pc = ctx.place(place);
  const UnramifiedSpace& ur = pc.ur;
  SetSection s = ctx.sigma_unramified(place);

  std::vector<std::vector<Int>> admissible;
  int dd = ur.m1d_inv.grp.dim();
  for (const std::vector<Int>& m : ur.m1_inv.grp.elements()) {
    std::vector<Int> amb = ur.m1_inv_sub.embed(m);
    bool ok = true;
    for (int j = 0; j < dd && ok; ++j) {
      std::vector<Int> ej(dd, Int(0));
      ej[j] = 1;
      ok = ur.dur_sub.contains(pc.ev_m1.eval(ur.m1d_inv_sub.embed(ej), amb));
    }
    if (ok) admissible.push_back(std::move(amb));
  }

  std::mt19937_64 eng(seed);
  for (size_t i = 1; i < s.vals.size(); ++i) {
    const std::vector<Int>& k = admissible[size_t(eng() % admissible.size())];
    s.vals[i] = ctx.module(Mod::M).grp.add(s.vals[i], ctx.triple().apply_iota(k));
  }
  return s;
}

struct GlobalDatum {
  Cochain a1, a2;  // global 1-cocycle representatives
  SetSection sigma;
  Cochain phi;  // global connection 2-cochain in D
};

// canonical (seed 0) or seeded choice of representatives, section, and
// connection for a field; cocycle_shift widens the connection freedom from
// coboundaries to arbitrary 2-cocycles
GlobalDatum global_datum(const FixtureContext& ctx, const FieldPoint& rho, uint64_t seed,
                         bool cocycle_shift) {
  GlobalDatum g;
  g.a1 = ctx.h1(Mod::M1d).representative(rho.cls1);
  g.a2 = ctx.h1(Mod::M2).representative(rho.cls2);
  g.sigma = ctx.sigma();
  if (seed != 0) {
    std::mt19937_64 eng(seed);
    g.a1 = cochain_add(g.a1, differential(constant_cochain(ctx.module(Mod::M1d), random_group_elem(eng, ctx.module(Mod::M1d).grp))));
    g.a2 = cochain_add(g.a2, differential(constant_cochain(ctx.module(Mod::M2), random_group_elem(eng, ctx.module(Mod::M2).grp))));
    g.sigma = randomized_section(ctx.triple(), eng());
  }
  Cochain rhs = connection_rhs(ctx.triple(), ctx.ev(Mod::M1), g.sigma, g.a1, g.a2);
  auto phi = solve_differential(rhs);
  if (!phi) throw ObstructionNonzero("no global connection for this field");
  g.phi = *phi;
  if (seed != 0) {
    std::mt19937_64 eng(seed ^ 0x9e3779b97f4a7c15ULL);
    const GModule& d = ctx.fixture().dualizing;
    g.phi = cochain_add(g.phi, cocycle_shift ? random_cocycle(eng, d, 2) : random_coboundary(eng, d, 2));
  }
  return g;
}

}  // namespace

//=== fields ==================================================================

FieldPoint field_point(const FixtureContext& ctx, std::vector<Int> cls1, std::vector<Int> cls2) {
  FieldPoint p;
  p.cls1 = ctx.h1(Mod::M1d).group().reduce(std::move(cls1));
  p.cls2 = ctx.h1(Mod::M2).group().reduce(std::move(cls2));
  for (int i = 0; i < ctx.place_count(); ++i)
    p.profile.emplace_back(ctx.restrict_class(Mod::M1d, p.cls1, i),
                           ctx.restrict_class(Mod::M2, p.cls2, i));
  return p;
}

FieldsSpace space_of_fields(const FixtureContext& ctx, const std::vector<int>& s_places) {
  FieldsSpace fs;
  fs.s = sorted_unique(s_places, ctx.place_count(), "space_of_fields");
  const FinAbGroup& g1 = ctx.h1(Mod::M1d).group();
  const FinAbGroup& g2 = ctx.h1(Mod::M2).group();
  std::vector<Int> mod = g1.mod;
  mod.insert(mod.end(), g2.mod.begin(), g2.mod.end());
  fs.ambient = FinAbGroup{mod};

  std::vector<Subgroup> nr_images;
  for (int i = 0; i < ctx.place_count(); ++i)
    nr_images.push_back(image(ctx.place(i).ur.to_fx));

  std::vector<std::vector<Int>> members;
  for (const std::vector<Int>& v : fs.ambient.elements()) {
    FieldPoint p = field_point(ctx, std::vector<Int>(v.begin(), v.begin() + g1.dim()),
                               std::vector<Int>(v.begin() + g1.dim(), v.end()));
    bool ok = true;
    for (int i = 0; ok && i < ctx.place_count(); ++i) {
      const PlaceContext& pc = ctx.place(i);
      const auto& [c1, c2] = p.profile[i];
      if (std::binary_search(fs.s.begin(), fs.s.end(), i)) {
        ok = pc.bc1.contains(c1) && pc.bc2.contains(c2);
      } else if (pc.data.in_y) {
        std::vector<Int> cat = c1;
        cat.insert(cat.end(), c2.begin(), c2.end());
        ok = nr_images[i].contains(cat);
      } else {
        ok = pc.h1_m1d.group().is_zero(c1) && pc.h1_m2.group().is_zero(c2);
      }
    }
    if (ok) {
      members.push_back(v);
      fs.elements.push_back(std::move(p));
    }
  }
  fs.sub = subgroup_from_generators(fs.ambient, members);
  return fs;
}

std::vector<Int> boundary_key(const std::vector<int>& s_places, const FieldPoint& rho) {
  std::vector<Int> key;
  for (int i : s_places) {
    key.insert(key.end(), rho.profile[i].first.begin(), rho.profile[i].first.end());
    key.insert(key.end(), rho.profile[i].second.begin(), rho.profile[i].second.end());
  }
  return key;
}

//=== torsor points ===========================================================

TorsorPoint combine(const std::vector<TorsorPoint>& parts) {
  std::vector<std::pair<int, std::pair<const TorsorPoint*, int>>> order;
  for (const TorsorPoint& p : parts)
    for (size_t i = 0; i < p.s.size(); ++i) order.push_back({p.s[i], {&p, int(i)}});
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  TorsorPoint out;
  for (size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && order[i].first == order[i - 1].first)
      throw std::invalid_argument("combine: duplicate place");
    const auto& [src, idx] = order[i].second;
    out.s.push_back(order[i].first);
    out.cls1.push_back(src->cls1[idx]);
    out.cls2.push_back(src->cls2[idx]);
    out.a1.push_back(src->a1[idx]);
    out.a2.push_back(src->a2[idx]);
    out.sigma.push_back(src->sigma[idx]);
    out.phi.push_back(src->phi[idx]);
  }
  return out;
}

TorsorPoint translate(const TorsorPoint& p, int idx, const Cochain& z) {
  TorsorPoint q = p;
  q.phi.at(idx) = cochain_add(q.phi.at(idx), z);
  return q;
}

//=== transport ===============================================================

Cochain theta_action(const ModuleTriple& t, const Pairing& ev1, const SetSection& sigma,
                     const SetSection& tau, const std::vector<Int>& g1, const std::vector<Int>& g2,
                     const Cochain& a1, const Cochain& a2) {
  if (a1.degree != 1 || a2.degree != 1)
    throw std::invalid_argument("theta_action: representatives must be 1-cochains");
  Cochain c2 = constant_cochain(t.quo, g2);
  Cochain b2 = cochain_add(a2, differential(c2));
  Cochain tb2 = compose_section(t, tau, b2);
  Cochain u = cochain_sub(cochain_sub(tb2, compose_section(t, sigma, a2)),
                          differential(compose_section(t, tau, c2)));
  Cochain m1c = iota_preimage_cochain(t, u);
  Cochain w = iota_preimage_cochain(t, differential(tb2));
  return cochain_sub(cup(constant_cochain(ev1.left, g1), w, ev1), cup(a1, m1c, ev1));
}

//=== the invariant and its boundary values ===================================

TorsorPoint global_bf(const FixtureContext& ctx, const std::vector<int>& s_places,
                      const FieldPoint& rho, uint64_t seed) {
  std::vector<int> s = sorted_unique(s_places, ctx.place_count(), "global_bf");
  if (s.empty()) throw std::invalid_argument("global_bf: the cut must be nonempty");
  GlobalDatum g = global_datum(ctx, rho, seed, false);
  TorsorPoint p;
  p.s = s;
  for (int i : s) {
    const std::vector<int>& sub = ctx.place(i).data.subgroup;
    p.cls1.push_back(rho.profile[i].first);
    p.cls2.push_back(rho.profile[i].second);
    p.a1.push_back(restrict_cochain(g.a1, sub));
    p.a2.push_back(restrict_cochain(g.a2, sub));
    p.sigma.push_back(g.sigma);
    p.phi.push_back(restrict_cochain(g.phi, sub));
  }
  return p;
}

TorsorPoint local_bf_unramified(const FixtureContext& ctx, int place,
                                const std::vector<Int>& fnr_elem, uint64_t seed) {
  const PlaceContext& pc = ctx.place(place);
  const UnramifiedSpace& ur = pc.ur;
  std::vector<Int> e = ur.fnr.reduce(fnr_elem);
  auto [e1, e2] = split_fnr(ur, e);

  Cochain a1q = ur.h1_first.representative(e1);
  Cochain a2q = ur.h1_second.representative(e2);
  SetSection sx = ctx.sigma_unramified(place);
  std::mt19937_64 eng(seed);
  if (seed != 0) {
    if (pc.data.in_y) {
      a1q = cochain_add(a1q, differential(constant_cochain(ur.m1d_inv, random_group_elem(eng, ur.m1d_inv.grp))));
      a2q = cochain_add(a2q, differential(constant_cochain(ur.mpi_inv, random_group_elem(eng, ur.mpi_inv.grp))));
    }
    sx = randomized_section_ur(ctx, place, eng());
  }

  Cochain rhs = Cochain::zero(ur.dur, 3);
  if (!a1q.is_zero()) {
    Cochain sa = section_on_invariants(pc, sx, a2q);
    Cochain w = iota_preimage_invariant(ctx, pc, differential(sa));
    if (!w.is_zero()) rhs = cup(a1q, w, unramified_pairing(pc));
  }
  auto phinr = solve_differential(rhs);
  if (!phinr) throw ObstructionNonzero("place " + pc.data.id + ": unramified connection unsolvable");
  Cochain phi_q = *phinr;
  if (seed != 0) phi_q = cochain_add(phi_q, random_coboundary(eng, ur.dur, 2));

  const FiniteGroup& gx = pc.d.gamma;
  GroupHom emb_d{ur.dur.grp, pc.d.grp, ur.dur_sub.embed_mat};
  GroupHom emb_1{ur.m1d_inv.grp, pc.m1d.grp, ur.m1d_inv_sub.embed_mat};
  GroupHom emb_2{ur.mpi_inv.grp, pc.m2.grp, ur.mpi_inv_sub.embed_mat};

  TorsorPoint p;
  p.s = {place};
  p.a1.push_back(map_coefficients(emb_1, pc.m1d, inflate_cochain(a1q, gx, ur.proj)));
  p.a2.push_back(map_coefficients(emb_2, pc.m2, inflate_cochain(a2q, gx, ur.proj)));
  p.sigma.push_back(sx);
  p.phi.push_back(map_coefficients(emb_d, pc.d, inflate_cochain(phi_q, gx, ur.proj)));
  p.cls1.push_back(pc.h1_m1d.project(p.a1[0]));
  p.cls2.push_back(pc.h1_m2.project(p.a2[0]));
  return p;
}

QmodZ bf_closed(const FixtureContext& ctx, const FieldPoint& rho, uint64_t seed) {
  GlobalDatum g = global_datum(ctx, rho, seed, true);
  std::mt19937_64 eng(seed ^ 0xc2b2ae3d27d4eb4fULL);
  QmodZ total;
  for (int i = 0; i < ctx.place_count(); ++i) {
    const PlaceContext& pc = ctx.place(i);
    std::vector<Int> target = rho.profile[i].first;
    target.insert(target.end(), rho.profile[i].second.begin(), rho.profile[i].second.end());
    auto e = try_solve_mod(pc.ur.to_fx, target);
    if (!e) throw NoLocalLift("place " + pc.data.id + ": field is not unramified");
    TorsorPoint nr = local_bf_unramified(ctx, i, *e, seed == 0 ? 0 : eng());

    const std::vector<int>& sub = pc.data.subgroup;
    Cochain b1 = restrict_cochain(g.a1, sub), b2 = restrict_cochain(g.a2, sub);
    Cochain moved = transport_phi(pc.triple, pc.ev_m1, nr.a1[0], nr.a2[0], nr.sigma[0], nr.phi[0],
                                  b1, b2, g.sigma);
    total = total.add(local_invariant(ctx, i, cochain_sub(restrict_cochain(g.phi, sub), moved)));
  }
  return total;
}

TorsorPoint unramified_profile_point(const FixtureContext& ctx, const std::vector<int>& places,
                                     const FieldPoint& rho, uint64_t seed) {
  std::vector<int> s = sorted_unique(places, ctx.place_count(), "unramified_profile_point");
  std::mt19937_64 eng(seed);
  std::vector<TorsorPoint> parts;
  for (int i : s) {
    std::vector<Int> target = rho.profile[i].first;
    target.insert(target.end(), rho.profile[i].second.begin(), rho.profile[i].second.end());
    auto e = try_solve_mod(ctx.place(i).ur.to_fx, target);
    if (!e) throw NoLocalLift("place " + ctx.place(i).data.id + ": profile is not unramified");
    parts.push_back(local_bf_unramified(ctx, i, *e, seed == 0 ? 0 : eng()));
  }
  return combine(parts);
}

//=== sections and trivialization =============================================

namespace {

SectionXi build_xi(const FixtureContext& ctx, const std::vector<int>& s_places, uint64_t seed) {
  SectionXi xi;
  xi.s = sorted_unique(s_places, ctx.place_count(), "section");
  // enumerate the admissible profile product over the cut places
  std::vector<std::vector<std::pair<std::vector<Int>, std::vector<Int>>>> local;
  for (int i : xi.s) {
    const PlaceContext& pc = ctx.place(i);
    std::vector<std::pair<std::vector<Int>, std::vector<Int>>> opts;
    for (const auto& c1 : pc.bc1.element_list())
      for (const auto& c2 : pc.bc2.element_list())
        opts.push_back({pc.bc1.embed(c1), pc.bc2.embed(c2)});
    local.push_back(std::move(opts));
  }
  std::vector<size_t> idx(local.size(), 0);
  std::mt19937_64 eng(seed);
  while (true) {
    TorsorPoint p;
    p.s = xi.s;
    for (size_t k = 0; k < xi.s.size(); ++k) {
      const PlaceContext& pc = ctx.place(xi.s[k]);
      const auto& [c1, c2] = local[k][idx[k]];
      Cochain a1 = pc.h1_m1d.representative(c1);
      Cochain a2 = pc.h1_m2.representative(c2);
      SetSection sig = ctx.sigma();
      if (seed != 0) {
        a1 = cochain_add(a1, differential(constant_cochain(pc.m1d, random_group_elem(eng, pc.m1d.grp))));
        a2 = cochain_add(a2, differential(constant_cochain(pc.m2, random_group_elem(eng, pc.m2.grp))));
        sig = randomized_section(pc.triple, eng());
      }
      auto phi = solve_differential(connection_rhs(pc.triple, pc.ev_m1, sig, a1, a2));
      if (!phi)
        throw ObstructionNonzero("place " + pc.data.id + ": no connection over a boundary profile");
      Cochain ph = *phi;
      if (seed != 0) ph = cochain_add(ph, random_coboundary(eng, pc.d, 2));
      p.cls1.push_back(c1);
      p.cls2.push_back(c2);
      p.a1.push_back(std::move(a1));
      p.a2.push_back(std::move(a2));
      p.sigma.push_back(std::move(sig));
      p.phi.push_back(std::move(ph));
    }
    xi.points[point_key(p)] = std::move(p);
    size_t k = 0;
    while (k < idx.size() && ++idx[k] == local[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return xi;
}

}  // namespace

SectionXi default_xi(const FixtureContext& ctx, const std::vector<int>& s_places) {
  return build_xi(ctx, s_places, 0);
}

SectionXi random_xi(const FixtureContext& ctx, const std::vector<int>& s_places, uint64_t seed) {
  return build_xi(ctx, s_places, seed ? seed : 1);
}

SectionXi boxplus(const SectionXi& a, const SectionXi& b) {
  for (int x : a.s)
    if (std::binary_search(b.s.begin(), b.s.end(), x))
      throw std::invalid_argument("boxplus: cuts must be disjoint");
  SectionXi out;
  out.s = a.s;
  out.s.insert(out.s.end(), b.s.begin(), b.s.end());
  std::sort(out.s.begin(), out.s.end());
  for (const auto& [ka, pa] : a.points)
    for (const auto& [kb, pb] : b.points) {
      TorsorPoint p = combine({pa, pb});
      out.points[point_key(p)] = std::move(p);
    }
  return out;
}

QmodZ trivialize(const FixtureContext& ctx, const SectionXi& xi, const TorsorPoint& p,
                 Orientation o) {
  if (p.s != xi.s) throw FiberMismatch("point and section live over different cuts");
  auto it = xi.points.find(point_key(p));
  if (it == xi.points.end()) throw FiberMismatch("profile is outside the section's fiber space");
  const TorsorPoint& q = it->second;
  QmodZ total;
  for (size_t i = 0; i < p.s.size(); ++i) {
    const PlaceContext& pc = ctx.place(p.s[i]);
    Cochain moved = transport_phi(pc.triple, pc.ev_m1, p.a1[i], p.a2[i], p.sigma[i], p.phi[i],
                                  q.a1[i], q.a2[i], q.sigma[i]);
    total = total.add(local_invariant(ctx, p.s[i], cochain_sub(moved, q.phi[i])));
  }
  return o == Orientation::reversed ? total.neg() : total;
}

//=== cutting and gluing ======================================================

DecompositionReport verify_decomposition(const FixtureContext& ctx, const std::vector<int>& s_places,
                                         const std::vector<int>& t_places, const SectionXi& xi_s,
                                         const SectionXi& xi_ts) {
  DecompositionReport rep;
  std::vector<int> s = sorted_unique(s_places, ctx.place_count(), "verify_decomposition");
  std::vector<int> t = sorted_unique(t_places, ctx.place_count(), "verify_decomposition");
  std::vector<int> ts;
  for (int x : t)
    if (!std::binary_search(s.begin(), s.end(), x)) ts.push_back(x);
  if (int(s.size() + ts.size()) != int(t.size()))
    throw std::invalid_argument("verify_decomposition: the first cut must be inside the second");
  if (xi_s.s != s || xi_ts.s != ts)
    throw FiberMismatch("sections do not match the requested cuts");

  SectionXi xi_t = s.empty() ? xi_ts : (ts.empty() ? xi_s : boxplus(xi_s, xi_ts));
  FieldsSpace fs = space_of_fields(ctx, s);
  rep.note = s.empty() ? "closed case: interior profiles are unramified or vanish by admissibility"
                       : "cut case: comparison in the coordinates of the combined section";

  for (const FieldPoint& rho : fs.elements) {
    QmodZ val_t = t.empty() ? bf_closed(ctx, rho) : trivialize(ctx, xi_t, global_bf(ctx, t, rho));
    QmodZ val_s = s.empty() ? bf_closed(ctx, rho) : trivialize(ctx, xi_s, global_bf(ctx, s, rho));
    QmodZ val_nr = ts.empty() ? QmodZ{} : trivialize(ctx, xi_ts, unramified_profile_point(ctx, ts, rho));
    if (!(val_t == val_s.add(val_nr))) {
      std::string m = "field (";
      for (const Int& c : rho.cls1) m += c.get_str() + " ";
      m += "|";
      for (const Int& c : rho.cls2) m += " " + c.get_str();
      m += "): larger cut " + val_t.str() + " != " + val_s.str() + " + " + val_nr.str();
      rep.mismatches.push_back(std::move(m));
    }
  }
  rep.pass = rep.mismatches.empty();
  return rep;
}

}  // namespace arithbf
