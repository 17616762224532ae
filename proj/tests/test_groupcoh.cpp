#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "arithbf/groupcoh.hpp"
#include "oracle_cohomology.hpp"

using namespace arithbf;

namespace {

uint64_t rnd(std::mt19937_64& eng, uint64_t n) { return eng() % n; }

IntMatrix mat2(long a, long b, long c, long d) {
  IntMatrix m(2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  return m;
}

// Z/2 acting on Z/4 by negation
GModule sign_module() {
  GModule m;
  m.gamma = FiniteGroup::cyclic(2);
  m.grp = FinAbGroup{{Int(4)}};
  m.act = {IntMatrix::identity(1), IntMatrix::diag({Int(-1)})};
  return m;
}

// Z/2 swapping the coordinates of (Z/2)^2
GModule swap_module() {
  GModule m;
  m.gamma = FiniteGroup::cyclic(2);
  m.grp = FinAbGroup{{Int(2), Int(2)}};
  m.act = {IntMatrix::identity(2), mat2(0, 1, 1, 0)};
  return m;
}

// Z/3 acting on (Z/2)^2 by an order-three automorphism
GModule shift_module() {
  GModule m;
  m.gamma = FiniteGroup::cyclic(3);
  m.grp = FinAbGroup{{Int(2), Int(2)}};
  IntMatrix g = mat2(0, 1, 1, 1);
  m.act = {IntMatrix::identity(2), g, g.mul(g)};
  return m;
}

Cochain random_cochain(std::mt19937_64& eng, const GModule& m, int degree,
                       bool normalized = false) {
  Cochain c = Cochain::zero(m, degree);
  int n = m.gamma.n;
  for (int idx = 0; idx < c.points(); ++idx) {
    // decode to test normalization
    bool has_id = false;
    int rem = idx;
    for (int i = 0; i < degree; ++i) {
      if (rem % n == 0) has_id = true;
      rem /= n;
    }
    if (normalized && has_id) continue;
    std::vector<Int> v(m.grp.dim());
    for (int j = 0; j < m.grp.dim(); ++j) v[j] = Int(long(rnd(eng, m.grp.mod[j].get_ui())));
    c.vals[idx] = v;
  }
  return c;
}

oracle::TinyModule to_tiny(const GModule& m) {
  oracle::TinyModule t;
  t.n = m.gamma.n;
  t.table = m.gamma.table;
  for (const Int& v : m.grp.mod) t.mod.push_back(int(v.get_si()));
  for (const IntMatrix& a : m.act) {
    std::vector<int> flat;
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < a.cols; ++j) {
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), a.at(i, j).get_mpz_t(), m.grp.mod[i].get_mpz_t());
        flat.push_back(int(r.get_si()));
      }
    t.act.push_back(flat);
  }
  return t;
}

struct LeibnizCase {
  GModule m1, m2;
  Pairing pr;
};

std::vector<LeibnizCase> leibniz_pool() {
  std::vector<LeibnizCase> pool;
  // multiplication on Z/4 with trivial action of Z/4
  {
    FiniteGroup g4 = FiniteGroup::cyclic(4);
    GModule a = GModule::trivial(g4, FinAbGroup{{Int(4)}});
    Pairing pr{a, a, a, IntMatrix::identity(1)};
    pool.push_back({a, a, pr});
  }
  // sign x sign -> trivial Z/4 over Z/2
  {
    GModule s = sign_module();
    GModule d = GModule::trivial(s.gamma, s.grp);
    Pairing pr{s, s, d, IntMatrix::identity(1)};
    pool.push_back({s, s, pr});
  }
  // dot product on the swap module, values in trivial Z/2
  {
    GModule s = swap_module();
    GModule d = GModule::trivial(s.gamma, FinAbGroup{{Int(2)}});
    IntMatrix b(1, 4);
    b.at(0, 0) = 1;  // e1.e1
    b.at(0, 3) = 1;  // e2.e2
    Pairing pr{s, s, d, b};
    pool.push_back({s, s, pr});
  }
  // determinant form on the shift module, values in trivial Z/2
  {
    GModule s = shift_module();
    GModule d = GModule::trivial(s.gamma, FinAbGroup{{Int(2)}});
    IntMatrix b(1, 4);
    b.at(0, 1) = 1;   // e1^e2
    b.at(0, 2) = -1;  // e2^e1
    Pairing pr{s, s, d, b};
    pool.push_back({s, s, pr});
  }
  // multiplication Z/2 x Z/2 -> Z/2 over the Klein group
  {
    FiniteGroup v4 = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
    GModule a = GModule::trivial(v4, FinAbGroup{{Int(2)}});
    Pairing pr{a, a, a, IntMatrix::identity(1)};
    pool.push_back({a, a, pr});
  }
  return pool;
}

}  // namespace

TEST_CASE("finite group constructions") {
  FiniteGroup c4 = FiniteGroup::cyclic(4);
  CHECK(c4.valid());
  CHECK(c4.is_abelian());
  CHECK(c4.inv(1) == 3);
  FiniteGroup v4 = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  CHECK(v4.valid());
  CHECK(v4.n == 4);
  for (int g = 0; g < 4; ++g) CHECK(v4.mul(g, g) == 0);
  CHECK(c4.subgroup_closure({2}) == std::vector<int>{0, 2});
  CHECK(c4.subgroup_closure({1}) == std::vector<int>{0, 1, 2, 3});
  CHECK(v4.subgroup_closure({}) == std::vector<int>{0});
}

TEST_CASE("quotient group and projection") {
  FiniteGroup c4 = FiniteGroup::cyclic(4);
  std::vector<int> proj;
  FiniteGroup q = quotient_group(c4, {0, 2}, proj);
  CHECK(q.n == 2);
  CHECK(q.valid());
  CHECK(proj == std::vector<int>{0, 1, 0, 1});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(proj[c4.mul(a, b)] == q.mul(proj[a], proj[b]));
}

TEST_CASE("module validity") {
  CHECK(sign_module().valid());
  CHECK(swap_module().valid());
  CHECK(shift_module().valid());
  GModule bad = sign_module();
  bad.act[1] = IntMatrix::diag({Int(2)});  // not an automorphism action
  CHECK_FALSE(bad.valid());
}

TEST_CASE("invariants match brute force") {
  for (const GModule& m : {sign_module(), swap_module(), shift_module()}) {
    std::vector<int> all(m.gamma.n);
    for (int g = 0; g < m.gamma.n; ++g) all[g] = g;
    Subgroup inv = invariants(m, all);
    Int count = 0;
    for (const auto& x : m.grp.elements()) {
      bool fixed = true;
      for (int g = 0; g < m.gamma.n; ++g)
        if (!m.grp.is_zero(m.grp.sub(m.apply(g, x), x))) fixed = false;
      CHECK(inv.contains(x) == fixed);
      if (fixed) count += 1;
    }
    CHECK(count == inv.order());
  }
}

TEST_CASE("pairing pool is equivariant") {
  for (const auto& cs : leibniz_pool()) {
    CHECK(cs.m1.valid());
    CHECK(cs.m2.valid());
    CHECK(cs.pr.equivariant());
  }
}

TEST_CASE("differential squares to zero") {
  std::mt19937_64 eng(21);
  std::vector<GModule> mods = {sign_module(), swap_module(), shift_module(),
                               GModule::trivial(FiniteGroup::cyclic(4), FinAbGroup{{Int(4)}})};
  for (int it = 0; it < 500; ++it) {
    const GModule& m = mods[rnd(eng, mods.size())];
    int p = int(rnd(eng, 3));
    Cochain c = random_cochain(eng, m, p);
    CHECK(differential(differential(c)).is_zero());
  }
}

TEST_CASE("differential agrees with the independent model") {
  std::mt19937_64 eng(22);
  std::vector<GModule> mods = {sign_module(), swap_module(), shift_module()};
  for (int it = 0; it < 200; ++it) {
    const GModule& m = mods[rnd(eng, mods.size())];
    oracle::TinyModule t = to_tiny(m);
    int p = int(rnd(eng, 3));
    Cochain c = random_cochain(eng, m, p);
    oracle::Flat flat;
    for (const auto& v : c.vals)
      for (const Int& x : v) flat.push_back(int(x.get_si()));
    oracle::Flat want = oracle::differential(t, flat, p);
    Cochain dc = differential(c);
    oracle::Flat got;
    for (const auto& v : dc.vals)
      for (const Int& x : v) got.push_back(int(x.get_si()));
    CHECK(got == want);
  }
}

TEST_CASE("cup product satisfies the graded Leibniz identity") {
  std::mt19937_64 eng(23);
  auto pool = leibniz_pool();
  for (int it = 0; it < 500; ++it) {
    const LeibnizCase& cs = pool[rnd(eng, pool.size())];
    int p = int(rnd(eng, 3)), q = int(rnd(eng, 3));
    Cochain a = random_cochain(eng, cs.m1, p);
    Cochain b = random_cochain(eng, cs.m2, q);
    Cochain lhs = differential(cup(a, b, cs.pr));
    Cochain rhs = cup(differential(a), b, cs.pr);
    Cochain second = cup(a, differential(b), cs.pr);
    rhs = p % 2 == 0 ? cochain_add(rhs, second) : cochain_sub(rhs, second);
    CHECK(cochain_sub(lhs, rhs).is_zero());
  }
}

TEST_CASE("cup in degree zero is the pairing") {
  auto pool = leibniz_pool();
  const LeibnizCase& cs = pool[2];
  Cochain a = Cochain::zero(cs.m1, 0), b = Cochain::zero(cs.m2, 0);
  a.vals[0] = {Int(1), Int(0)};
  b.vals[0] = {Int(1), Int(1)};
  Cochain c = cup(a, b, cs.pr);
  CHECK(c.degree == 0);
  CHECK(c.vals[0] == cs.pr.eval(a.vals[0], b.vals[0]));
}

TEST_CASE("cohomology orders match exhaustive enumeration") {
  struct Case {
    GModule m;
    int pmax;
    std::vector<long long> expect;  // frozen |H^p| where known, -1 to skip
  };
  GModule triv22 = GModule::trivial(FiniteGroup::cyclic(2), FinAbGroup{{Int(2)}});
  GModule triv33 = GModule::trivial(FiniteGroup::cyclic(3), FinAbGroup{{Int(3)}});
  GModule triv1 = GModule::trivial(FiniteGroup::trivial(), FinAbGroup{{Int(4)}});
  std::vector<Case> cases = {
      {triv1, 2, {4, 1, 1}},
      {triv22, 2, {2, 2, 2}},
      {triv33, 2, {3, 3, 3}},
      {sign_module(), 2, {2, 2, 2}},
      {swap_module(), 2, {2, 1, 1}},
      {shift_module(), 2, {1, 1, 1}},
      {GModule::trivial(FiniteGroup::cyclic(3), FinAbGroup{{Int(4)}}), 2, {4, 1, 1}},
  };
  for (const auto& cs : cases) {
    oracle::TinyModule t = to_tiny(cs.m);
    for (int p = 0; p <= cs.pmax; ++p) {
      oracle::Counts counts = oracle::enumerate_cohomology(t, p);
      Cohomology h = cohomology(cs.m, p);
      CHECK(h.group().order() == Int(long(counts.classes)));
      if (cs.expect[p] >= 0) CHECK(h.group().order() == Int(long(cs.expect[p])));
    }
  }
}

TEST_CASE("projection and representatives are mutually inverse") {
  for (const GModule& m : {sign_module(), swap_module(), shift_module()}) {
    for (int p = 1; p <= 2; ++p) {
      Cohomology h = cohomology(m, p);
      for (const auto& cls : h.group().elements()) {
        Cochain rep = h.representative(cls);
        CHECK(rep.is_normalized());
        CHECK(h.is_cocycle(rep));
        CHECK(h.project(rep) == cls);
      }
    }
  }
}

TEST_CASE("matrix differential agrees with the cochain differential") {
  std::mt19937_64 eng(24);
  for (const GModule& m : {sign_module(), swap_module(), shift_module()}) {
    for (int p = 0; p <= 2; ++p) {
      CochainSpace sp(m, p), sp1(m, p + 1);
      IntMatrix dm = differential_matrix(m, p);
      for (int it = 0; it < 20; ++it) {
        Cochain c = random_cochain(eng, m, p, /*normalized=*/true);
        std::vector<Int> lhs = FinAbGroup{sp1.carrier}.reduce(dm.apply(sp.to_vec(c)));
        std::vector<Int> rhs = sp1.to_vec(differential(c));
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("round trip between normalized cochains and vectors") {
  std::mt19937_64 eng(25);
  for (const GModule& m : {sign_module(), shift_module()}) {
    for (int p = 0; p <= 3; ++p) {
      CochainSpace sp(m, p);
      Cochain c = random_cochain(eng, m, p, /*normalized=*/true);
      Cochain back = sp.from_vec(sp.to_vec(c));
      CHECK(cochain_sub(back, c).is_zero());
    }
  }
  Cochain bad = random_cochain(eng, sign_module(), 1);
  bad.vals[0] = {Int(1)};  // value at the identity
  CHECK_THROWS_AS(CochainSpace(sign_module(), 1).to_vec(bad), NotACocycle);
}

TEST_CASE("solve_differential inverts the differential exactly") {
  std::mt19937_64 eng(26);
  for (const GModule& m : {sign_module(), swap_module(), shift_module()}) {
    for (int p = 0; p <= 2; ++p) {
      for (int it = 0; it < 10; ++it) {
        Cochain phi = random_cochain(eng, m, p, /*normalized=*/true);
        Cochain rhs = differential(phi);
        auto psi = solve_differential(rhs);
        REQUIRE(psi.has_value());
        CHECK(cochain_sub(differential(*psi), rhs).is_zero());
        CHECK(psi->is_normalized());
      }
    }
  }
}

TEST_CASE("solve_differential rejects nontrivial classes") {
  // the nonzero class in H^1 of the sign module is not a coboundary
  GModule m = sign_module();
  Cohomology h1 = cohomology(m, 1);
  REQUIRE(h1.group().order() == 2);
  Cochain rep = h1.representative({Int(1)});
  CHECK_FALSE(solve_differential(rep).has_value());
}

TEST_CASE("restriction commutes with the differential") {
  std::mt19937_64 eng(27);
  FiniteGroup c4 = FiniteGroup::cyclic(4);
  GModule m;
  m.gamma = c4;
  m.grp = FinAbGroup{{Int(4)}};
  m.act = {IntMatrix::identity(1), IntMatrix::diag({Int(-1)}), IntMatrix::identity(1),
           IntMatrix::diag({Int(-1)})};
  REQUIRE(m.valid());
  std::vector<int> sub = c4.subgroup_closure({2});
  for (int it = 0; it < 50; ++it) {
    int p = int(rnd(eng, 3));
    Cochain c = random_cochain(eng, m, p);
    Cochain lhs = restrict_cochain(differential(c), sub);
    Cochain rhs = differential(restrict_cochain(c, sub));
    CHECK(cochain_sub(lhs, rhs).is_zero());
  }
}

TEST_CASE("inflation commutes with the differential and is injective on H^1") {
  FiniteGroup c4 = FiniteGroup::cyclic(4);
  std::vector<int> proj;
  FiniteGroup q = quotient_group(c4, {0, 2}, proj);
  // sign action of the quotient on Z/4
  GModule mq;
  mq.gamma = q;
  mq.grp = FinAbGroup{{Int(4)}};
  mq.act = {IntMatrix::identity(1), IntMatrix::diag({Int(-1)})};
  REQUIRE(mq.valid());
  GModule mg = inflate_module(mq, c4, proj);
  REQUIRE(mg.valid());

  std::mt19937_64 eng(28);
  for (int it = 0; it < 50; ++it) {
    int p = int(rnd(eng, 3));
    Cochain c = random_cochain(eng, mq, p);
    Cochain lhs = inflate_cochain(differential(c), c4, proj);
    Cochain rhs = differential(inflate_cochain(c, c4, proj));
    CHECK(cochain_sub(lhs, rhs).is_zero());
  }

  Cohomology hq = cohomology(mq, 1), hg = cohomology(mg, 1);
  std::set<std::vector<Int>> images;
  for (const auto& cls : hq.group().elements()) {
    Cochain rep = hq.representative(cls);
    Cochain inf = inflate_cochain(rep, c4, proj);
    images.insert(hg.project(inf));
  }
  CHECK(images.size() == size_t(hq.group().order().get_ui()));
}

TEST_CASE("connecting map of the doubling extension") {
  // 0 -> Z/2 -> Z/4 -> Z/2 -> 0 with trivial actions of Z/2
  FiniteGroup c2 = FiniteGroup::cyclic(2);
  ModuleTriple t{GModule::trivial(c2, FinAbGroup{{Int(2)}}),
                 GModule::trivial(c2, FinAbGroup{{Int(4)}}),
                 GModule::trivial(c2, FinAbGroup{{Int(2)}}),
                 IntMatrix::diag({Int(2)}), IntMatrix::identity(1)};
  REQUIRE(t.valid());
  SetSection s = canonical_section(t);
  CHECK(section_valid(t, s));
  CHECK(s.vals[0] == std::vector<Int>{Int(0)});
  CHECK(s.vals[1] == std::vector<Int>{Int(1)});

  // the nontrivial hom Z/2 -> Z/2 as a 1-cocycle
  Cochain z = Cochain::zero(t.quo, 1);
  z.set({1}, {Int(1)});
  REQUIRE(differential(z).is_zero());

  Cochain delta = connecting_rep(t, s, z);
  Cohomology h2 = cohomology(t.sub, 2);
  std::vector<Int> cls = h2.project(delta);
  CHECK(h2.group().order() == 2);
  CHECK(cls == std::vector<Int>{Int(1)});  // the extension is not split

  // independence of the section
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    SetSection rs = randomized_section(t, seed);
    CHECK(section_valid(t, rs));
    CHECK(h2.project(connecting_rep(t, rs, z)) == cls);
  }
  // the zero cocycle connects to zero
  Cochain z0 = Cochain::zero(t.quo, 1);
  CHECK(h2.project(connecting_rep(t, s, z0)) == h2.group().zero());
  // non-cocycles are rejected
  Cochain nc = Cochain::zero(t.quo, 1);
  nc.set({0}, {Int(1)});
  CHECK_THROWS_AS(connecting_rep(t, s, nc), NotACocycle);
}

TEST_CASE("connecting map with nontrivial action") {
  // 0 -> Z/2 -> (Z/2)^2 -> Z/2 -> 0 over Z/2; middle is the swap module,
  // sub the diagonal, quo the quotient by it
  GModule mid = swap_module();
  FiniteGroup c2 = mid.gamma;
  GModule sub = GModule::trivial(c2, FinAbGroup{{Int(2)}});
  GModule quo = GModule::trivial(c2, FinAbGroup{{Int(2)}});
  IntMatrix iota(2, 1);
  iota.at(0, 0) = 1;
  iota.at(1, 0) = 1;
  IntMatrix pi(1, 2);
  pi.at(0, 0) = 1;  // class of e1; e2 maps to the same class... pi must kill diagonal
  pi.at(0, 1) = 1;
  // pi(e1+e2) = 2 = 0, pi equivariant since swap preserves the sum
  ModuleTriple t{sub, mid, quo, iota, pi};
  REQUIRE(t.valid());
  SetSection s = canonical_section(t);
  CHECK(section_valid(t, s));

  Cochain z = Cochain::zero(t.quo, 1);
  z.set({1}, {Int(1)});
  REQUIRE(differential(z).is_zero());
  Cochain delta = connecting_rep(t, s, z);
  Cohomology h2 = cohomology(t.sub, 2);
  std::vector<Int> cls = h2.project(delta);
  for (uint64_t seed = 1; seed <= 10; ++seed)
    CHECK(h2.project(connecting_rep(t, randomized_section(t, seed), z)) == cls);
}

TEST_CASE("restricted triples stay exact") {
  GModule mid = swap_module();
  GModule sub = GModule::trivial(mid.gamma, FinAbGroup{{Int(2)}});
  GModule quo = GModule::trivial(mid.gamma, FinAbGroup{{Int(2)}});
  IntMatrix iota(2, 1);
  iota.at(0, 0) = 1;
  iota.at(1, 0) = 1;
  IntMatrix pi(1, 2);
  pi.at(0, 0) = 1;
  pi.at(0, 1) = 1;
  ModuleTriple t{sub, mid, quo, iota, pi};
  ModuleTriple rt = restrict_triple(t, {0});
  CHECK(rt.valid());
  CHECK(rt.mid.gamma.n == 1);
}
