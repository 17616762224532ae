#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "arithbf/sitemodel.hpp"

using namespace arithbf;

namespace {

// Two places over Z/2 with sign action on Z/4 coefficients: local duality is
// perfect at both places and the two local invariants cancel globally.
const char* kT1 = R"json({
  "name": "t1",
  "modulus": 4,
  "global_group": {"order": 2, "mul_table": [0, 1, 1, 0]},
  "modules": {
    "M1": {"invariant_factors": [2], "action": [[[1]], [[1]]]},
    "M":  {"invariant_factors": [4], "action": [[[1]], [[3]]]},
    "M2": {"invariant_factors": [2], "action": [[[1]], [[1]]]},
    "D":  {"invariant_factors": [4], "action": [[[1]], [[3]]]}
  },
  "maps": {"iota": [[2]], "pi": [[1]]},
  "places": [
    {"id": "v1", "subgroup": [0, 1], "inertia": [0], "in_Y": false,
     "dualizing_unramified": [], "inv_on_h2": [[2]]},
    {"id": "v2", "subgroup": [0, 1], "inertia": [0], "in_Y": false,
     "dualizing_unramified": [], "inv_on_h2": [[2]]}
  ],
  "boundary_conditions": {
    "v1": {"m1dual": [], "m2": []},
    "v2": {"m1dual": [], "m2": []}
  },
  "selmer_W": {"v1": [], "v2": []}
})json";

SiteFixture t1() { return parse_fixture(kT1); }

bool axiom_fails(const SiteFixture& f, const std::string& key) {
  ValidationReport r = validate_fixture(f);
  const AxiomResult* a = r.find(key);
  REQUIRE(a != nullptr);
  return !a->pass;
}

GModule swap_module() {
  FiniteGroup c2 = FiniteGroup::cyclic(2);
  GModule m;
  m.gamma = c2;
  m.grp = FinAbGroup{{Int(2), Int(2)}};
  IntMatrix sw(2, 2);
  sw.at(0, 1) = 1;
  sw.at(1, 0) = 1;
  m.act = {IntMatrix::identity(2), sw};
  return m;
}

}  // namespace

TEST_CASE("QmodZ reduces to canonical form") {
  QmodZ a = QmodZ::of(Int(6), Int(4));
  CHECK(a.num == 1);
  CHECK(a.den == 2);
  CHECK(QmodZ::of(Int(-1), Int(4)).num == 3);
  CHECK(QmodZ::of(Int(8), Int(4)).is_zero());
  CHECK(QmodZ::of(Int(8), Int(4)).den == 1);
  CHECK(a.add(a).is_zero());
  CHECK(a.add(QmodZ::of(Int(1), Int(4))) == QmodZ::of(Int(3), Int(4)));
  CHECK(a.neg() == a);
  CHECK(QmodZ::of(Int(1), Int(4)).neg() == QmodZ::of(Int(3), Int(4)));
  CHECK(QmodZ::of(Int(1), Int(3)).times(Int(5)) == QmodZ::of(Int(2), Int(3)));
  CHECK(QmodZ::of(Int(1), Int(4)) < QmodZ::of(Int(1), Int(3)));
  CHECK(QmodZ::of(Int(1), Int(2)).str() == "1/2");
  CHECK(QmodZ().str() == "0/1");
  CHECK_THROWS(QmodZ::of(Int(1), Int(0)));
}

TEST_CASE("fixture digest is FNV-1a") {
  CHECK(fixture_digest("") == "cbf29ce484222325");
  CHECK(fixture_digest("a") == "af63dc4c8601ec8c");
  CHECK(fixture_digest("ab") != fixture_digest("ba"));
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS(parse_fixture("not json"));
  CHECK_THROWS(parse_fixture("{}"));
  std::string bad = kT1;
  bad.replace(bad.find("[0, 1, 1, 0]"), 12, "[0, 1, 1]");
  CHECK_THROWS(parse_fixture(bad));
}

TEST_CASE("reference fixture passes every validation axiom") {
  SiteFixture f = t1();
  ValidationReport r = validate_fixture(f);
  for (const AxiomResult& a : r.axioms) {
    INFO(a.key, ": ", a.witness);
    CHECK(a.pass);
  }
  CHECK(r.all_pass());
  // report is sorted and stable across runs
  for (size_t i = 0; i + 1 < r.axioms.size(); ++i) CHECK(r.axioms[i].key < r.axioms[i + 1].key);
  ValidationReport r2 = validate_fixture(f);
  REQUIRE(r2.axioms.size() == r.axioms.size());
  for (size_t i = 0; i < r.axioms.size(); ++i) {
    CHECK(r.axioms[i].key == r2.axioms[i].key);
    CHECK(r.axioms[i].pass == r2.axioms[i].pass);
    CHECK(r.axioms[i].witness == r2.axioms[i].witness);
  }
  // the invariants-surjectivity check reports where its hypothesis fails
  const AxiomResult* a14 = r.find("14_pi_invariants_surjective");
  REQUIRE(a14 != nullptr);
  CHECK(a14->witness.rfind("skipped", 0) == 0);
}

TEST_CASE("dual modules carry the conjugation action") {
  SiteFixture f = t1();
  DualData d1 = dual_module(f.m1, f.dualizing);
  // Hom(Z/2, Z/4) has one invariant factor gcd(2,4) = 2 and trivial action
  REQUIRE(d1.mod.grp.mod == std::vector<Int>{Int(2)});
  CHECK(d1.mod.act[1] == IntMatrix::identity(1));
  CHECK(d1.mod.valid());
  CHECK(d1.eval.equivariant());
  // evaluation of the generator hom on the generator of M1 is 2 in D
  CHECK(d1.eval.eval({Int(1)}, {Int(1)}) == std::vector<Int>{Int(2)});

  DualData dm = dual_module(f.m, f.dualizing);
  REQUIRE(dm.mod.grp.mod == std::vector<Int>{Int(4)});
  CHECK(dm.mod.act[1] == IntMatrix::identity(1));  // sign twice cancels
  CHECK(dm.eval.equivariant());

  // permutation modules dualize to permutation modules
  GModule sw = swap_module();
  GModule d2 = GModule::trivial(sw.gamma, FinAbGroup{{Int(2)}});
  DualData dsw = dual_module(sw, d2);
  REQUIRE(dsw.mod.grp.mod == std::vector<Int>(2, Int(2)));
  IntMatrix expect(2, 2);
  expect.at(0, 1) = 1;
  expect.at(1, 0) = 1;
  CHECK(dsw.mod.act[1] == expect);
  CHECK(dsw.mod.valid());
  CHECK(dsw.eval.equivariant());
}

TEST_CASE("dual maps reverse with exactness preserved") {
  SiteFixture f = t1();
  IntMatrix pid = dual_hom(f.m, f.m2, f.dualizing, f.pi);
  IntMatrix iod = dual_hom(f.m1, f.m, f.dualizing, f.iota);
  // iota^dual ∘ pi^dual = (pi ∘ iota)^dual = 0
  IntMatrix comp = iod.mul(pid);
  DualData d1 = dual_module(f.m1, f.dualizing);
  for (int j = 0; j < comp.cols; ++j)
    CHECK(d1.mod.grp.is_zero(d1.mod.grp.reduce(comp.column(j))));
  ValidationReport r = validate_fixture(f);
  CHECK(r.find("12_dual_exactness")->pass);
}

TEST_CASE("double dual is the identity-like isomorphism") {
  GModule sw = swap_module();
  GModule d = GModule::trivial(sw.gamma, FinAbGroup{{Int(2)}});
  IntMatrix w = double_dual_map(sw, d);
  DualData dd = dual_module(dual_module(sw, d).mod, d);
  GroupHom h{sw.grp, dd.mod.grp, w};
  CHECK(h.well_defined());
  CHECK(kernel(h).order() == 1);
  CHECK(image(h).order() == sw.grp.order());
}

TEST_CASE("normalization keeps the class and clears identity arguments") {
  SiteFixture f = t1();
  FixtureContext ctx(f);
  const PlaceContext& pc = ctx.place(0);
  Cochain rep = pc.h2_d.representative({Int(1)});
  // add the differential of a 1-cochain that does not vanish at the identity
  Cochain h = Cochain::zero(pc.d, 1);
  h.vals[0] = {Int(3)};
  h.vals[1] = {Int(1)};
  Cochain messy = cochain_add(rep, differential(h));
  REQUIRE(!messy.is_normalized());
  Cochain back = normalize_cocycle2(messy);
  CHECK(back.is_normalized());
  CHECK(pc.h2_d.project(back) == std::vector<Int>{Int(1)});
  Cochain notclosed = messy;
  notclosed.vals[3] = pc.d.grp.add(notclosed.vals[3], {Int(1)});
  CHECK_THROWS_AS(normalize_cocycle2(notclosed), NotACocycle);
}

TEST_CASE("context computes the frozen cohomology ranks") {
  FixtureContext ctx(t1());
  for (Mod w : {Mod::M1, Mod::M, Mod::M2, Mod::M1d, Mod::Md, Mod::M2d}) {
    CHECK(ctx.h1(w).group().order() == 2);
    CHECK(ctx.place(0).h1(w).group().order() == 2);
  }
  CHECK(ctx.place(0).h2_d.group().order() == 2);
  CHECK(section_valid(ctx.triple(), ctx.sigma()));
  CHECK(ctx.dual_triple().valid());
  CHECK(ctx.place("v2").data.id == "v2");
  CHECK_THROWS(ctx.place("nope"));
}

TEST_CASE("restriction of global classes to full-subgroup places is the identity") {
  FixtureContext ctx(t1());
  for (Mod w : {Mod::M1d, Mod::M2, Mod::M}) {
    CHECK(ctx.restrict_class(w, {Int(0)}, 0) == std::vector<Int>{Int(0)});
    CHECK(ctx.restrict_class(w, {Int(1)}, 0) == std::vector<Int>{Int(1)});
  }
}

TEST_CASE("local invariant is a class function with the declared values") {
  FixtureContext ctx(t1());
  const PlaceContext& pc = ctx.place(0);
  Cochain rep = pc.h2_d.representative({Int(1)});
  CHECK(local_invariant(ctx, 0, rep) == QmodZ::of(Int(1), Int(2)));
  // coboundaries vanish, including non-normalized ones
  std::mt19937_64 eng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Cochain h = Cochain::zero(pc.d, 1);
    for (auto& v : h.vals) v = {Int(long(eng() % 4))};
    CHECK(local_invariant(ctx, 0, differential(h)).is_zero());
    CHECK(local_invariant(ctx, 0, cochain_add(rep, differential(h))) ==
          QmodZ::of(Int(1), Int(2)));
  }
  Cochain bad = rep;
  bad.vals[3] = pc.d.grp.add(bad.vals[3], {Int(1)});
  CHECK_THROWS_AS(local_invariant(ctx, 0, bad), NotACocycle);
}

TEST_CASE("local Tate pairing is perfect on the reference fixture") {
  FixtureContext ctx(t1());
  for (Mod primal : {Mod::M1, Mod::M, Mod::M2}) {
    CHECK(local_tate_pairing(ctx, 0, primal, {Int(1)}, {Int(1)}) == QmodZ::of(Int(1), Int(2)));
    CHECK(local_tate_pairing(ctx, 0, primal, {Int(0)}, {Int(1)}).is_zero());
    CHECK(local_tate_pairing(ctx, 0, primal, {Int(1)}, {Int(0)}).is_zero());
  }
  // bilinearity: value at the sum equals the sum of values
  QmodZ two = local_tate_pairing(ctx, 1, Mod::M, {Int(0)}, {Int(1)});
  CHECK(two == QmodZ::of(Int(1), Int(2)).add(QmodZ::of(Int(1), Int(2))));
}

TEST_CASE("unramified layer at an inertia-free place") {
  SiteFixture f = t1();
  UnramifiedSpace u = unramified_field_space(f, 0);
  CHECK(u.qx.n == 2);
  CHECK(u.fnr.order() == 4);  // Z/2 x Z/2
  // inflation along the trivial-inertia quotient hits the full local classes
  CHECK(kernel(u.to_fx).order() == 1);
  CHECK(u.to_fx.apply({Int(1), Int(0)}) == std::vector<Int>{Int(1), Int(0)});
  CHECK(u.to_fx.apply({Int(0), Int(1)}) == std::vector<Int>{Int(0), Int(1)});
  CHECK(u.mpi_inv_sub.order() == 2);  // pi is surjective on invariants here
}

TEST_CASE("unramified layer with full inertia collapses") {
  SiteFixture f = t1();
  for (PlaceData& p : f.places) p.inertia = {0, 1};
  REQUIRE(validate_fixture(f).all_pass());
  UnramifiedSpace u = unramified_field_space(f, 0);
  CHECK(u.qx.n == 1);
  CHECK(u.fnr.order() == 1);
  CHECK(u.m_inv_sub.order() == 2);    // invariants of the sign action on Z/4
  CHECK(u.mpi_inv_sub.order() == 1);  // they map to 0 downstairs
}

TEST_CASE("invariant-preferring sections stay sections") {
  SiteFixture f = t1();
  FixtureContext ctx(f);
  for (int i = 0; i < ctx.place_count(); ++i) {
    const SetSection& s = ctx.sigma_unramified(i);
    CHECK(section_valid(ctx.triple(), s));
    const UnramifiedSpace& u = ctx.place(i).ur;
    for (const auto& x : ctx.module(Mod::M2).grp.elements())
      if (u.mpi_inv_sub.contains(x)) CHECK(u.m_inv_sub.contains(s.apply(x)));
  }
  // with trivial inertia the invariant lift is the canonical lift
  CHECK(ctx.sigma_unramified(0).vals == ctx.sigma().vals);
}

TEST_CASE("each validation axiom can be made to fail") {
  SUBCASE("group axioms") {
    SiteFixture f = t1();
    f.gamma.table[3] = 1;
    CHECK(axiom_fails(f, "01_group_axioms"));
  }
  SUBCASE("action compatibility") {
    SiteFixture f = t1();
    f.m.act[1] = IntMatrix::diag({Int(2)});
    CHECK(axiom_fails(f, "02_action_compatibility"));
  }
  SUBCASE("triple exactness") {
    SiteFixture f = t1();
    f.iota = IntMatrix::identity(1);
    CHECK(axiom_fails(f, "03_triple_exactness"));
  }
  SUBCASE("modulus exponents") {
    SiteFixture f = t1();
    f.modulus = 3;
    CHECK(axiom_fails(f, "04_modulus_exponents"));
  }
  SUBCASE("invariant map injectivity") {
    SiteFixture f = t1();
    f.places[0].inv_on_h2 = IntMatrix(1, 1);
    CHECK(axiom_fails(f, "05_inv_injective"));
  }
  SUBCASE("unramified vanishing") {
    SiteFixture f = t1();
    f.places[0].dualizing_unramified = {{Int(1)}};
    CHECK(axiom_fails(f, "06_unramified_vanishing"));
  }
  SUBCASE("evaluation containment") {
    SiteFixture f = t1();
    f.places[0].in_y = true;
    CHECK(axiom_fails(f, "07_evaluation_unramified"));
  }
  SUBCASE("local duality") {
    SiteFixture f = t1();
    f.dualizing.act[1] = IntMatrix::identity(1);
    CHECK(axiom_fails(f, "08_local_duality"));
  }
  SUBCASE("reciprocity") {
    SiteFixture f = t1();
    f.places[1].inv_on_h2 = IntMatrix::identity(1);
    CHECK(axiom_fails(f, "09_reciprocity"));
  }
  SUBCASE("boundary conditions contain the unramified image") {
    SiteFixture f = t1();
    f.places[0].in_y = true;
    f.places[0].dualizing_unramified = {{Int(1)}};
    CHECK(axiom_fails(f, "10_bc_unramified"));
  }
  SUBCASE("local condition well-formedness") {
    SiteFixture f = t1();
    f.selmer_w["v1"] = {{{Int(1)}, {Int(0)}}};
    CHECK(axiom_fails(f, "11_local_conditions"));
  }
  SUBCASE("dual exactness and double dual need a large enough dualizing module") {
    SiteFixture f = t1();
    f.dualizing.grp = FinAbGroup{{Int(2)}};
    f.dualizing.act = {IntMatrix::identity(1), IntMatrix::identity(1)};
    CHECK(axiom_fails(f, "12_dual_exactness"));
    CHECK(axiom_fails(f, "13_double_dual"));
  }
}
