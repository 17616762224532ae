#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "arithbf/exactalg.hpp"

using namespace arithbf;

namespace {

uint64_t rnd(std::mt19937_64& eng, uint64_t n) { return eng() % n; }

Int rint(std::mt19937_64& eng, int lo, int hi) {
  return Int(static_cast<long>(lo + int(rnd(eng, uint64_t(hi - lo + 1)))));
}

IntMatrix random_matrix(std::mt19937_64& eng, int r, int c, int lo = -9, int hi = 9) {
  IntMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = rint(eng, lo, hi);
  return m;
}

bool divisibility_chain(const std::vector<Int>& d) {
  for (size_t i = 0; i + 1 < d.size(); ++i) {
    if (d[i] < 0) return false;
    if (d[i] == 0 && d[i + 1] != 0) return false;
    if (d[i] != 0 && d[i + 1] % d[i] != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("smith normal form of diag(2,3)") {
  IntMatrix m = IntMatrix::diag({Int(2), Int(3)});
  SnfResult f = smith_normal_form(m);
  CHECK(f.s.at(0, 0) == 1);
  CHECK(f.s.at(1, 1) == 6);
  CHECK(f.s.at(0, 1) == 0);
  CHECK(f.s.at(1, 0) == 0);
  CHECK(abs(det(f.u)) == 1);
  CHECK(abs(det(f.v)) == 1);
  CHECK(f.u.mul(m).mul(f.v) == f.s);
}

TEST_CASE("smith normal form round trips on random matrices") {
  std::mt19937_64 eng(1);
  for (int it = 0; it < 500; ++it) {
    int r = 1 + int(rnd(eng, 5)), c = 1 + int(rnd(eng, 5));
    IntMatrix m = random_matrix(eng, r, c);
    SnfResult f = smith_normal_form(m);
    CHECK(f.u.mul(m).mul(f.v) == f.s);
    CHECK(abs(det(f.u)) == 1);
    CHECK(abs(det(f.v)) == 1);
    CHECK(divisibility_chain(f.diagonal()));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (i != j) CHECK(f.s.at(i, j) == 0);
  }
}

TEST_CASE("smith normal form is deterministic") {
  std::mt19937_64 e1(7), e2(7);
  IntMatrix a = random_matrix(e1, 4, 5);
  IntMatrix b = random_matrix(e2, 4, 5);
  SnfResult fa = smith_normal_form(a), fb = smith_normal_form(b);
  CHECK(fa.u == fb.u);
  CHECK(fa.s == fb.s);
  CHECK(fa.v == fb.v);
}

TEST_CASE("determinant agrees with cofactor expansion on small matrices") {
  std::mt19937_64 eng(2);
  for (int it = 0; it < 200; ++it) {
    IntMatrix m = random_matrix(eng, 3, 3);
    Int ref = m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
              m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
              m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
    CHECK(det(m) == ref);
  }
}

TEST_CASE("inverse of unimodular matrices") {
  std::mt19937_64 eng(3);
  int done = 0;
  while (done < 50) {
    IntMatrix m = random_matrix(eng, 3, 3, -3, 3);
    if (abs(det(m)) != 1) continue;
    IntMatrix inv = inverse_unimodular(m);
    CHECK(m.mul(inv) == IntMatrix::identity(3));
    CHECK(inv.mul(m) == IntMatrix::identity(3));
    ++done;
  }
  CHECK_THROWS_AS(inverse_unimodular(IntMatrix::diag({Int(2)})), NoSolution);
}

TEST_CASE("integer linear solve") {
  std::mt19937_64 eng(4);
  for (int it = 0; it < 300; ++it) {
    int r = 1 + int(rnd(eng, 4)), c = 1 + int(rnd(eng, 4));
    IntMatrix m = random_matrix(eng, r, c);
    std::vector<Int> x(c);
    for (int j = 0; j < c; ++j) x[j] = rint(eng, -5, 5);
    std::vector<Int> b = m.apply(x);
    auto sol = solve(m, b);
    REQUIRE(sol.has_value());
    CHECK(m.apply(*sol) == b);
  }
  // 2x = 1 has no integer solution
  CHECK_FALSE(solve(IntMatrix::diag({Int(2)}), {Int(1)}).has_value());
}

TEST_CASE("kernel lattice spans the kernel") {
  std::mt19937_64 eng(5);
  for (int it = 0; it < 200; ++it) {
    int r = 1 + int(rnd(eng, 3)), c = 1 + int(rnd(eng, 4));
    IntMatrix m = random_matrix(eng, r, c, -4, 4);
    IntMatrix k = kernel_lattice(m);
    for (int j = 0; j < k.cols; ++j) {
      std::vector<Int> img = m.apply(k.column(j));
      for (const Int& v : img) CHECK(v == 0);
    }
    // rank-nullity over Q
    SnfResult f = smith_normal_form(m);
    CHECK(k.cols == c - f.rank());
  }
}

TEST_CASE("hermite column form is canonical and spans the lattice") {
  std::mt19937_64 eng(6);
  for (int it = 0; it < 200; ++it) {
    int n = 1 + int(rnd(eng, 3));
    IntMatrix gens = random_matrix(eng, n, n + 1 + int(rnd(eng, 2)), -6, 6);
    // guarantee full rank by appending a diagonal
    std::vector<Int> d(n);
    for (int i = 0; i < n; ++i) d[i] = Int(2 + long(rnd(eng, 7)));
    IntMatrix full = gens.hstack(IntMatrix::diag(d));
    IntMatrix h = hermite_col(full, n);
    // shape: lower triangular, positive diagonal, left-of-diagonal reduced
    for (int i = 0; i < n; ++i) {
      CHECK(h.at(i, i) > 0);
      for (int j = i + 1; j < n; ++j) CHECK(h.at(i, j) == 0);
      for (int j = 0; j < i; ++j) {
        CHECK(h.at(i, j) >= 0);
        CHECK(h.at(i, j) < h.at(i, i));
      }
    }
    // every generator lies in the Hermite lattice
    for (int j = 0; j < full.cols; ++j) CHECK(solve(h, full.column(j)).has_value());
    // same lattice: every Hermite column solvable from the generators
    for (int j = 0; j < n; ++j) CHECK(solve(full, h.column(j)).has_value());
    // canonical: recomputing from shuffled generators gives the same form
    std::vector<std::vector<Int>> cols;
    for (int j = 0; j < full.cols; ++j) cols.push_back(full.column(j));
    std::shuffle(cols.begin(), cols.end(), eng);
    CHECK(hermite_col(IntMatrix::from_columns(n, cols), n) == h);
  }
}

TEST_CASE("box reduction picks one representative per lattice coset") {
  std::mt19937_64 eng(7);
  for (int it = 0; it < 200; ++it) {
    int n = 1 + int(rnd(eng, 3));
    std::vector<Int> d(n);
    for (int i = 0; i < n; ++i) d[i] = Int(2 + long(rnd(eng, 7)));
    IntMatrix h = hermite_col(random_matrix(eng, n, n, -6, 6).hstack(IntMatrix::diag(d)), n);
    std::vector<Int> x(n);
    for (int i = 0; i < n; ++i) x[i] = rint(eng, -20, 20);
    std::vector<Int> r0 = reduce_into_box(x, h);
    // shifting by random lattice vectors does not change the representative
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<Int> y = x;
      for (int j = 0; j < n; ++j) {
        Int c = rint(eng, -3, 3);
        for (int i = 0; i < n; ++i) y[i] += c * h.at(i, j);
      }
      CHECK(reduce_into_box(y, h) == r0);
    }
    for (int i = 0; i < n; ++i) {
      CHECK(r0[i] >= 0);
      CHECK(r0[i] < h.at(i, i));
    }
  }
}

TEST_CASE("finite abelian group arithmetic") {
  FinAbGroup g{{Int(2), Int(4)}};
  CHECK(g.order() == 8);
  CHECK(g.is_canonical());
  CHECK(g.elements().size() == 8);
  CHECK(g.add({Int(1), Int(3)}, {Int(1), Int(2)}) == std::vector<Int>{Int(0), Int(1)});
  CHECK(g.neg({Int(1), Int(1)}) == std::vector<Int>{Int(1), Int(3)});
  CHECK(g.is_zero({Int(2), Int(4)}));
  FinAbGroup bad{{Int(4), Int(2)}};
  CHECK_FALSE(bad.is_canonical());
  FinAbGroup trivial{};
  CHECK(trivial.order() == 1);
  CHECK(trivial.elements().size() == 1);
}

TEST_CASE("canonicalize produces invariant factors") {
  CoordChange cc = canonicalize({Int(4), Int(2), Int(3)});
  CHECK(cc.group.is_canonical());
  CHECK(cc.group.order() == 24);
  REQUIRE(cc.group.dim() == 2);
  CHECK(cc.group.mod[0] == 2);
  CHECK(cc.group.mod[1] == 12);
  // round trip on every element class
  FinAbGroup raw{{Int(4), Int(2), Int(3)}};
  for (const auto& x : raw.elements()) {
    std::vector<Int> c = cc.group.reduce(cc.to_canon.apply(x));
    std::vector<Int> back = raw.reduce(cc.from_canon.apply(c));
    CHECK(raw.is_zero(raw.sub(back, x)));
  }
  // classes are separated
  auto els = raw.elements();
  for (size_t i = 0; i < els.size(); ++i)
    for (size_t j = i + 1; j < els.size(); ++j) {
      auto ci = cc.group.reduce(cc.to_canon.apply(els[i]));
      auto cj = cc.group.reduce(cc.to_canon.apply(els[j]));
      CHECK(ci != cj);
    }
}

TEST_CASE("canonical solution of x -> 2x on Z/4") {
  FinAbGroup z4{{Int(4)}};
  GroupHom dbl{z4, z4, IntMatrix::diag({Int(2)})};
  CHECK(dbl.well_defined());
  CHECK(solve_mod(dbl, {Int(2)}) == std::vector<Int>{Int(1)});
  CHECK_THROWS_AS(solve_mod(dbl, {Int(1)}), NoSolution);
  CHECK_FALSE(try_solve_mod(dbl, {Int(1)}).has_value());
}

TEST_CASE("solve_mod returns the lexicographically least representative") {
  std::mt19937_64 eng(8);
  for (int it = 0; it < 120; ++it) {
    int n = 1 + int(rnd(eng, 2)), m = 1 + int(rnd(eng, 2));
    std::vector<Int> sm(n), dm(m);
    for (int i = 0; i < n; ++i) sm[i] = Int(2 + long(rnd(eng, 4)));
    for (int i = 0; i < m; ++i) dm[i] = Int(2 + long(rnd(eng, 4)));
    FinAbGroup src{sm}, dst{dm};
    GroupHom h{src, dst, IntMatrix(m, n)};
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        Int g;
        mpz_gcd(g.get_mpz_t(), dm[i].get_mpz_t(), sm[j].get_mpz_t());
        h.mat.at(i, j) = (dm[i] / g) * Int(long(rnd(eng, 4)));
      }
    REQUIRE(h.well_defined());
    std::vector<Int> b(m);
    for (int i = 0; i < m; ++i) b[i] = rint(eng, 0, 5);
    b = dst.reduce(b);

    // brute force the lexicographically least solution among reduced tuples
    std::optional<std::vector<Int>> best;
    for (const auto& x : src.elements()) {
      if (!dst.is_zero(dst.sub(h.apply(x), b))) continue;
      if (!best || x < *best) best = x;
    }
    auto got = try_solve_mod(h, b);
    CHECK(got.has_value() == best.has_value());
    if (got && best) CHECK(*got == *best);
  }
}

TEST_CASE("solve_mod with a tall system exercises row compression") {
  std::mt19937_64 eng(9);
  for (int it = 0; it < 10; ++it) {
    int n = 3, m = 60;
    FinAbGroup src{{Int(4), Int(4), Int(2)}}, dst{std::vector<Int>(m, Int(4))};
    for (int i = 0; i < m; i += 3) dst.mod[i] = 2;  // mixed powers of two
    GroupHom h{src, dst, IntMatrix(m, n)};
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        Int g;
        mpz_gcd(g.get_mpz_t(), dst.mod[i].get_mpz_t(), src.mod[j].get_mpz_t());
        h.mat.at(i, j) = (dst.mod[i] / g) * Int(long(rnd(eng, 4)));
      }
    REQUIRE(h.well_defined());
    std::vector<Int> x0(n);
    for (int j = 0; j < n; ++j) x0[j] = rint(eng, 0, 3);
    std::vector<Int> b = h.apply(src.reduce(x0));

    std::optional<std::vector<Int>> best;
    for (const auto& x : src.elements()) {
      if (!h.dst.is_zero(h.dst.sub(h.apply(x), b))) continue;
      if (!best || x < *best) best = x;
    }
    REQUIRE(best.has_value());
    CHECK(solve_mod(h, b) == *best);
    // unsolvable variant detected identically
    std::vector<Int> bad = b;
    bad[0] += 1;
    bad = h.dst.reduce(bad);
    std::optional<std::vector<Int>> bbest;
    for (const auto& x : src.elements())
      if (h.dst.is_zero(h.dst.sub(h.apply(x), bad))) { bbest = x; break; }
    CHECK(try_solve_mod(h, bad).has_value() == bbest.has_value());
  }
}

TEST_CASE("kernel and image orders multiply to the source order") {
  std::mt19937_64 eng(10);
  for (int it = 0; it < 80; ++it) {
    int n = 1 + int(rnd(eng, 3)), m = 1 + int(rnd(eng, 3));
    std::vector<Int> sm(n), dm(m);
    for (int i = 0; i < n; ++i) sm[i] = Int(2 + long(rnd(eng, 5)));
    for (int i = 0; i < m; ++i) dm[i] = Int(2 + long(rnd(eng, 5)));
    FinAbGroup src{sm}, dst{dm};
    GroupHom h{src, dst, IntMatrix(m, n)};
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        // keep it well defined: coefficient divisible by dm_i / gcd(dm_i, sm_j)
        Int g;
        mpz_gcd(g.get_mpz_t(), dm[i].get_mpz_t(), sm[j].get_mpz_t());
        Int step = dm[i] / g;
        h.mat.at(i, j) = step * Int(long(rnd(eng, 4)));
      }
    REQUIRE(h.well_defined());
    Subgroup k = kernel(h), im = image(h);
    CHECK(k.order() * im.order() == src.order());
    // brute-force check of membership on all source elements
    Int kcount = 0;
    for (const auto& x : src.elements()) {
      bool inker = dst.is_zero(h.apply(x));
      CHECK(k.contains(x) == inker);
      if (inker) kcount += 1;
    }
    CHECK(kcount == k.order());
  }
}

TEST_CASE("subgroup lattice operations") {
  std::mt19937_64 eng(11);
  for (int it = 0; it < 60; ++it) {
    int n = 1 + int(rnd(eng, 2));
    std::vector<Int> mods(n);
    for (int i = 0; i < n; ++i) mods[i] = Int(2 + long(rnd(eng, 6)));
    FinAbGroup g{mods};
    auto rand_sub = [&]() {
      std::vector<std::vector<Int>> gens;
      int k = int(rnd(eng, 3));
      for (int j = 0; j < k; ++j) {
        std::vector<Int> v(n);
        for (int i = 0; i < n; ++i) v[i] = rint(eng, 0, 7);
        gens.push_back(g.reduce(v));
      }
      return subgroup_from_generators(g, gens);
    };
    Subgroup a = rand_sub(), b = rand_sub();
    Subgroup s = subgroup_sum(a, b), x = subgroup_intersection(a, b);
    CHECK(s.order() * x.order() == a.order() * b.order());
    CHECK(subgroup_leq(a, s));
    CHECK(subgroup_leq(b, s));
    CHECK(subgroup_leq(x, a));
    CHECK(subgroup_leq(x, b));
    // membership against brute force
    for (const auto& e : g.elements()) {
      bool ina = a.contains(e), inb = b.contains(e);
      CHECK(x.contains(e) == (ina && inb));
      if (ina) CHECK(s.contains(e));
    }
    // coords/embed round trip on subgroup elements
    for (const auto& e : a.element_list()) {
      CHECK(g.is_zero(g.sub(a.embed(a.coords(e)), e)));
    }
    CHECK(subgroup_equal(subgroup_sum(a, a), a));
    CHECK(subgroup_equal(subgroup_intersection(a, a), a));
    CHECK(subgroup_equal(subgroup_sum(a, zero_subgroup(g)), a));
    CHECK(subgroup_equal(subgroup_intersection(a, full_subgroup(g)), a));
    CHECK(full_subgroup(g).order() == g.order());
    CHECK(zero_subgroup(g).order() == 1);
  }
}

TEST_CASE("preimage and image subgroups") {
  std::mt19937_64 eng(12);
  for (int it = 0; it < 40; ++it) {
    FinAbGroup src{{Int(4), Int(2)}}, dst{{Int(8)}};
    GroupHom h{src, dst, IntMatrix(1, 2)};
    h.mat.at(0, 0) = 2 * long(rnd(eng, 4));
    h.mat.at(0, 1) = 4 * long(rnd(eng, 2));
    REQUIRE(h.well_defined());
    std::vector<std::vector<Int>> tg{{Int(long(rnd(eng, 8)))}};
    Subgroup t = subgroup_from_generators(dst, tg);
    Subgroup pre = preimage_subgroup(h, t);
    for (const auto& x : src.elements())
      CHECK(pre.contains(x) == t.contains(h.apply(x)));
    Subgroup sub = subgroup_from_generators(src, {{Int(1), Int(0)}});
    Subgroup img = image_subgroup(h, sub);
    for (const auto& y : dst.elements()) {
      bool hit = false;
      for (const auto& x : sub.element_list())
        if (dst.is_zero(dst.sub(h.apply(x), y))) hit = true;
      CHECK(img.contains(y) == hit);
    }
  }
}

TEST_CASE("subquotient projection and lift") {
  // carrier Z/4 x Z/4; kernel = <(1,1),(0,2)>, image = <(2,2)>
  std::vector<Int> carrier{Int(4), Int(4)};
  IntMatrix kg = IntMatrix::from_columns(2, {{Int(1), Int(1)}, {Int(0), Int(2)}});
  IntMatrix ig = IntMatrix::from_columns(2, {{Int(2), Int(2)}});
  Subquotient sq = make_subquotient(carrier, kg, ig);
  // kernel has order 8, image has order 2 -> quotient of order 4
  CHECK(sq.group.order() == 4);
  FinAbGroup amb{carrier};
  // project is defined exactly on kernel members and additive
  int members = 0;
  for (const auto& x : amb.elements()) {
    bool inker = sq.member(x);
    if (!inker) {
      CHECK_THROWS_AS(sq.project(x), NoSolution);
      continue;
    }
    ++members;
    std::vector<Int> cls = sq.project(x);
    std::vector<Int> back = sq.lift(cls);
    // x - lift(project(x)) lies in the image sublattice
    std::vector<Int> diff = amb.sub(x, back);
    Subgroup imsub = subgroup_from_generators(amb, {{Int(2), Int(2)}});
    CHECK(imsub.contains(diff));
  }
  CHECK(members == 8);
  // distinct classes count
  std::set<std::vector<Int>> classes;
  for (const auto& x : amb.elements())
    if (sq.member(x)) classes.insert(sq.project(x));
  CHECK(classes.size() == 4);
  // lift of zero is an image element
  CHECK(sq.member(sq.lift(sq.group.zero())));
  CHECK_THROWS_AS(make_subquotient(carrier, ig, kg), NoSolution);
}

TEST_CASE("subquotient respects addition") {
  std::mt19937_64 eng(13);
  std::vector<Int> carrier{Int(2), Int(4), Int(2)};
  IntMatrix kg = IntMatrix::from_columns(3, {{Int(1), Int(0), Int(1)},
                                             {Int(0), Int(2), Int(0)},
                                             {Int(0), Int(0), Int(1)}});
  IntMatrix ig = IntMatrix::from_columns(3, {{Int(1), Int(2), Int(1)}});
  Subquotient sq = make_subquotient(carrier, kg, ig);
  FinAbGroup amb{carrier};
  std::vector<std::vector<Int>> members;
  for (const auto& x : amb.elements())
    if (sq.member(x)) members.push_back(x);
  for (int it = 0; it < 100; ++it) {
    const auto& x = members[rnd(eng, members.size())];
    const auto& y = members[rnd(eng, members.size())];
    auto lhs = sq.project(amb.add(x, y));
    auto rhs = sq.group.add(sq.project(x), sq.project(y));
    CHECK(lhs == rhs);
  }
}
