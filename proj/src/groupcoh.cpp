#include "arithbf/groupcoh.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <set>

namespace arithbf {

namespace {

std::vector<int> decode_tuple(int idx, int p, int n) {
  std::vector<int> t(p);
  for (int i = p - 1; i >= 0; --i) {
    t[i] = idx % n;
    idx /= n;
  }
  return t;
}

int encode_tuple(const std::vector<int>& t, int n) {
  int idx = 0;
  for (int g : t) idx = idx * n + g;
  return idx;
}

int pow_int(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// mixed-radix index of a reduced group element, lex order
int group_index(const FinAbGroup& g, const std::vector<Int>& x) {
  Int idx = 0;
  for (int i = 0; i < g.dim(); ++i) idx = idx * g.mod[i] + x[i];
  assert(idx.fits_sint_p());
  return int(idx.get_si());
}

bool hom_matrices_equal(const IntMatrix& a, const IntMatrix& b, const FinAbGroup& dst) {
  assert(a.rows == b.rows && a.cols == b.cols);
  for (int j = 0; j < a.cols; ++j)
    if (!dst.is_zero(dst.sub(dst.reduce(a.column(j)), dst.reduce(b.column(j))))) return false;
  return true;
}

}  // namespace

//=== FiniteGroup =============================================================

int FiniteGroup::inv(int g) const {
  for (int h = 0; h < n; ++h)
    if (mul(g, h) == 0) return h;
  return -1;
}

bool FiniteGroup::valid() const {
  if (int(table.size()) != n * n) return false;
  for (int v : table)
    if (v < 0 || v >= n) return false;
  for (int g = 0; g < n; ++g)
    if (mul(0, g) != g || mul(g, 0) != g) return false;
  for (int g = 0; g < n; ++g)
    if (inv(g) < 0) return false;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) return false;
  return true;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

FiniteGroup FiniteGroup::trivial() { return cyclic(1); }

FiniteGroup FiniteGroup::cyclic(int n) {
  FiniteGroup g;
  g.n = n;
  g.table.resize(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.table[a * n + b] = (a + b) % n;
  return g;
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  FiniteGroup g;
  g.n = a.n * b.n;
  g.table.resize(g.n * g.n);
  for (int x = 0; x < g.n; ++x)
    for (int y = 0; y < g.n; ++y) {
      int xa = x / b.n, xb = x % b.n, ya = y / b.n, yb = y % b.n;
      g.table[x * g.n + y] = a.mul(xa, ya) * b.n + b.mul(xb, yb);
    }
  return g;
}

std::vector<int> FiniteGroup::subgroup_closure(const std::vector<int>& gens) const {
  std::set<int> seen{0};
  std::vector<int> frontier{0};
  for (int g : gens)
    if (seen.insert(g).second) frontier.push_back(g);
  while (!frontier.empty()) {
    int g = frontier.back();
    frontier.pop_back();
    for (int h : std::set<int>(seen))
      for (int prod : {mul(g, h), mul(h, g)})
        if (seen.insert(prod).second) frontier.push_back(prod);
  }
  return std::vector<int>(seen.begin(), seen.end());
}

FiniteGroup quotient_group(const FiniteGroup& g, const std::vector<int>& normal_elems,
                           std::vector<int>& proj) {
  proj.assign(g.n, -1);
  std::vector<int> reps;
  for (int x = 0; x < g.n; ++x) {
    if (proj[x] >= 0) continue;
    int idx = int(reps.size());
    reps.push_back(x);
    for (int h : normal_elems) proj[g.mul(x, h)] = idx;
  }
  FiniteGroup q;
  q.n = int(reps.size());
  q.table.resize(q.n * q.n);
  for (int a = 0; a < q.n; ++a)
    for (int b = 0; b < q.n; ++b) q.table[a * q.n + b] = proj[g.mul(reps[a], reps[b])];
  return q;
}

//=== GModule =================================================================

bool GModule::valid() const {
  if (!gamma.valid()) return false;
  if (int(act.size()) != gamma.n) return false;
  int m = grp.dim();
  for (const IntMatrix& a : act)
    if (a.rows != m || a.cols != m) return false;
  GroupHom id = GroupHom::identity(grp);
  if (!hom_matrices_equal(act[0], id.mat, grp)) return false;
  for (const IntMatrix& a : act) {
    GroupHom h{grp, grp, a};
    if (!h.well_defined()) return false;
  }
  for (int g = 0; g < gamma.n; ++g)
    for (int h = 0; h < gamma.n; ++h)
      if (!hom_matrices_equal(act[g].mul(act[h]), act[gamma.mul(g, h)], grp)) return false;
  return true;
}

GModule GModule::trivial(const FiniteGroup& gamma, const FinAbGroup& grp) {
  GModule m;
  m.gamma = gamma;
  m.grp = grp;
  m.act.assign(gamma.n, IntMatrix::identity(grp.dim()));
  return m;
}

GModule restrict_module(const GModule& m, const std::vector<int>& elems) {
  int k = int(elems.size());
  GModule r;
  r.gamma.n = k;
  r.gamma.table.resize(k * k);
  auto pos = [&](int g) {
    return int(std::lower_bound(elems.begin(), elems.end(), g) - elems.begin());
  };
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) r.gamma.table[a * k + b] = pos(m.gamma.mul(elems[a], elems[b]));
  r.grp = m.grp;
  for (int g : elems) r.act.push_back(m.act[g]);
  return r;
}

GModule inflate_module(const GModule& mq, const FiniteGroup& g, const std::vector<int>& proj) {
  GModule r;
  r.gamma = g;
  r.grp = mq.grp;
  for (int x = 0; x < g.n; ++x) r.act.push_back(mq.act[proj[x]]);
  return r;
}

Subgroup invariants(const GModule& m, const std::vector<int>& elems) {
  int d = m.grp.dim();
  int k = int(elems.size());
  IntMatrix stacked(k * d, d);
  std::vector<Int> dst_mod;
  for (int t = 0; t < k; ++t) {
    const IntMatrix& a = m.act[elems[t]];
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) stacked.at(t * d + i, j) = a.at(i, j) - (i == j ? 1 : 0);
      dst_mod.push_back(m.grp.mod[i]);
    }
  }
  GroupHom h{m.grp, FinAbGroup{dst_mod}, stacked};
  return kernel(h);
}

//=== Pairing =================================================================

std::vector<Int> Pairing::eval(const std::vector<Int>& x, const std::vector<Int>& y) const {
  int ld = left.grp.dim(), rd = right.grp.dim(), od = out.grp.dim();
  std::vector<Int> r(od, Int(0));
  for (int i = 0; i < ld; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < rd; ++j) {
      if (y[j] == 0) continue;
      Int c = x[i] * y[j];
      for (int k = 0; k < od; ++k) r[k] += c * bilin.at(k, i * rd + j);
    }
  }
  return out.grp.reduce(r);
}

bool Pairing::equivariant() const {
  int ld = left.grp.dim(), rd = right.grp.dim();
  for (int g = 0; g < left.gamma.n; ++g) {
    for (int i = 0; i < ld; ++i)
      for (int j = 0; j < rd; ++j) {
        std::vector<Int> ei(ld, Int(0)), ej(rd, Int(0));
        ei[i] = 1;
        ej[j] = 1;
        std::vector<Int> lhs = eval(left.apply(g, ei), right.apply(g, ej));
        std::vector<Int> rhs = out.apply(g, eval(ei, ej));
        if (!out.grp.is_zero(out.grp.sub(lhs, rhs))) return false;
      }
  }
  return true;
}

//=== Cochain =================================================================

Cochain Cochain::zero(const GModule& m, int degree) {
  Cochain c;
  c.mod = m;
  c.degree = degree;
  c.vals.assign(pow_int(m.gamma.n, degree), m.grp.zero());
  return c;
}

const std::vector<Int>& Cochain::at(const std::vector<int>& tuple) const {
  assert(int(tuple.size()) == degree);
  return vals[encode_tuple(tuple, mod.gamma.n)];
}

void Cochain::set(const std::vector<int>& tuple, std::vector<Int> v) {
  assert(int(tuple.size()) == degree);
  vals[encode_tuple(tuple, mod.gamma.n)] = mod.grp.reduce(std::move(v));
}

bool Cochain::is_zero() const {
  for (const auto& v : vals)
    if (!mod.grp.is_zero(v)) return false;
  return true;
}

bool Cochain::is_normalized() const {
  int n = mod.gamma.n;
  for (int idx = 0; idx < points(); ++idx) {
    std::vector<int> t = decode_tuple(idx, degree, n);
    if (std::find(t.begin(), t.end(), 0) == t.end()) continue;
    if (!mod.grp.is_zero(vals[idx])) return false;
  }
  return true;
}

Cochain cochain_add(const Cochain& a, const Cochain& b) {
  assert(a.degree == b.degree && a.points() == b.points());
  Cochain r = a;
  for (int i = 0; i < r.points(); ++i) r.vals[i] = a.mod.grp.add(a.vals[i], b.vals[i]);
  return r;
}

Cochain cochain_sub(const Cochain& a, const Cochain& b) {
  assert(a.degree == b.degree && a.points() == b.points());
  Cochain r = a;
  for (int i = 0; i < r.points(); ++i) r.vals[i] = a.mod.grp.sub(a.vals[i], b.vals[i]);
  return r;
}

Cochain cochain_neg(const Cochain& a) {
  Cochain r = a;
  for (int i = 0; i < r.points(); ++i) r.vals[i] = a.mod.grp.neg(a.vals[i]);
  return r;
}

Cochain differential(const Cochain& c) {
  const GModule& m = c.mod;
  int n = m.gamma.n, p = c.degree;
  Cochain r = Cochain::zero(m, p + 1);
  for (int idx = 0; idx < r.points(); ++idx) {
    std::vector<int> t = decode_tuple(idx, p + 1, n);
    std::vector<Int> acc = m.apply(t[0], c.at({t.begin() + 1, t.end()}));
    int sign = 1;
    for (int i = 1; i <= p; ++i) {
      sign = -sign;
      std::vector<int> u;
      u.reserve(p);
      for (int j = 0; j < i - 1; ++j) u.push_back(t[j]);
      u.push_back(m.gamma.mul(t[i - 1], t[i]));
      for (int j = i + 1; j <= p; ++j) u.push_back(t[j]);
      const std::vector<Int>& v = c.at(u);
      acc = sign > 0 ? m.grp.add(acc, v) : m.grp.sub(acc, v);
    }
    sign = -sign;
    const std::vector<Int>& last = c.at({t.begin(), t.end() - 1});
    acc = sign > 0 ? m.grp.add(acc, last) : m.grp.sub(acc, last);
    r.vals[idx] = acc;
  }
  return r;
}

Cochain cup(const Cochain& a, const Cochain& b, const Pairing& pr) {
  int p = a.degree, q = b.degree;
  int n = pr.left.gamma.n;
  Cochain r = Cochain::zero(pr.out, p + q);
  for (int idx = 0; idx < r.points(); ++idx) {
    std::vector<int> t = decode_tuple(idx, p + q, n);
    std::vector<int> front(t.begin(), t.begin() + p), back(t.begin() + p, t.end());
    int g = 0;
    for (int i = 0; i < p; ++i) g = pr.left.gamma.mul(g, t[i]);
    r.vals[idx] = pr.eval(a.at(front), pr.right.apply(g, b.at(back)));
  }
  return r;
}

Cochain restrict_cochain(const Cochain& c, const std::vector<int>& elems) {
  GModule rm = restrict_module(c.mod, elems);
  Cochain r = Cochain::zero(rm, c.degree);
  int k = int(elems.size());
  for (int idx = 0; idx < r.points(); ++idx) {
    std::vector<int> t = decode_tuple(idx, c.degree, k);
    std::vector<int> big(c.degree);
    for (int i = 0; i < c.degree; ++i) big[i] = elems[t[i]];
    r.vals[idx] = c.at(big);
  }
  return r;
}

Cochain inflate_cochain(const Cochain& cq, const FiniteGroup& g, const std::vector<int>& proj) {
  GModule im = inflate_module(cq.mod, g, proj);
  Cochain r = Cochain::zero(im, cq.degree);
  for (int idx = 0; idx < r.points(); ++idx) {
    std::vector<int> t = decode_tuple(idx, cq.degree, g.n);
    std::vector<int> qt(cq.degree);
    for (int i = 0; i < cq.degree; ++i) qt[i] = proj[t[i]];
    r.vals[idx] = cq.at(qt);
  }
  return r;
}

Cochain map_coefficients(const GroupHom& h, const GModule& dst_mod, const Cochain& c) {
  Cochain r = Cochain::zero(dst_mod, c.degree);
  for (int i = 0; i < c.points(); ++i) r.vals[i] = h.apply(c.vals[i]);
  return r;
}

//=== normalized linear algebra ===============================================

CochainSpace::CochainSpace(const GModule& m, int d) : mod(m), degree(d) {
  points = pow_int(m.gamma.n - 1, d);
  carrier.reserve(size_t(points) * m.grp.dim());
  for (int i = 0; i < points; ++i)
    for (const Int& md : m.grp.mod) carrier.push_back(md);
}

namespace {

// position of a normalized tuple (all entries nonzero), or -1
int normalized_pos(const std::vector<int>& t, int n) {
  int pos = 0;
  for (int g : t) {
    if (g == 0) return -1;
    pos = pos * (n - 1) + (g - 1);
  }
  return pos;
}

std::vector<int> normalized_tuple(int pos, int p, int n) {
  std::vector<int> t(p);
  for (int i = p - 1; i >= 0; --i) {
    t[i] = pos % (n - 1) + 1;
    pos /= (n - 1);
  }
  return t;
}

}  // namespace

std::vector<Int> CochainSpace::to_vec(const Cochain& c) const {
  if (!c.is_normalized()) throw NotACocycle("to_vec: cochain is not normalized");
  int m = mod.grp.dim();
  std::vector<Int> v(size_t(points) * m);
  for (int pos = 0; pos < points; ++pos) {
    const std::vector<Int>& x = c.at(normalized_tuple(pos, degree, mod.gamma.n));
    for (int i = 0; i < m; ++i) v[size_t(pos) * m + i] = x[i];
  }
  return v;
}

Cochain CochainSpace::from_vec(const std::vector<Int>& v) const {
  int m = mod.grp.dim();
  assert(int(v.size()) == points * m);
  Cochain c = Cochain::zero(mod, degree);
  for (int pos = 0; pos < points; ++pos) {
    std::vector<Int> x(v.begin() + size_t(pos) * m, v.begin() + size_t(pos + 1) * m);
    c.set(normalized_tuple(pos, degree, mod.gamma.n), std::move(x));
  }
  return c;
}

IntMatrix differential_matrix(const GModule& mod, int p) {
  int n = mod.gamma.n, m = mod.grp.dim();
  int rows_pts = pow_int(n - 1, p + 1), cols_pts = pow_int(n - 1, p);
  IntMatrix d(rows_pts * m, cols_pts * m);
  auto add_block = [&](int rpos, const std::vector<int>& src_tuple, const IntMatrix* a, int sign) {
    int cpos = normalized_pos(src_tuple, n);
    if (cpos < 0) return;  // normalized cochains vanish there
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Int coef = a ? a->at(i, j) : Int(i == j ? 1 : 0);
        if (coef != 0) d.at(rpos * m + i, cpos * m + j) += sign * coef;
      }
  };
  for (int rpos = 0; rpos < rows_pts; ++rpos) {
    std::vector<int> t = normalized_tuple(rpos, p + 1, n);
    add_block(rpos, {t.begin() + 1, t.end()}, &mod.act[t[0]], 1);
    int sign = 1;
    for (int i = 1; i <= p; ++i) {
      sign = -sign;
      std::vector<int> u;
      u.reserve(p);
      for (int j = 0; j < i - 1; ++j) u.push_back(t[j]);
      u.push_back(mod.gamma.mul(t[i - 1], t[i]));
      for (int j = i + 1; j <= p; ++j) u.push_back(t[j]);
      add_block(rpos, u, nullptr, sign);
    }
    sign = -sign;
    add_block(rpos, {t.begin(), t.end() - 1}, nullptr, sign);
  }
  return d;
}

Cohomology cohomology(const GModule& m, int p) {
  CochainSpace sp(m, p);
  CochainSpace sp1(m, p + 1);
  IntMatrix dp = differential_matrix(m, p);
  IntMatrix zk = congruence_kernel(dp, sp.carrier, sp1.carrier);
  IntMatrix img(int(sp.carrier.size()), 0);
  if (p > 0) img = differential_matrix(m, p - 1);
  return Cohomology{sp, make_subquotient(sp.carrier, zk, img)};
}

bool Cohomology::is_cocycle(const Cochain& c) const { return differential(c).is_zero(); }

std::vector<Int> Cohomology::project(const Cochain& c) const {
  if (!is_cocycle(c)) throw NotACocycle("project: differential does not vanish");
  return classes.project(space.to_vec(c));
}

Cochain Cohomology::representative(const std::vector<Int>& cls) const {
  return space.from_vec(classes.lift(cls));
}

std::optional<Cochain> solve_differential(const Cochain& rhs) {
  assert(rhs.degree >= 1);
  const GModule& m = rhs.mod;
  CochainSpace sp(m, rhs.degree - 1), sp1(m, rhs.degree);
  IntMatrix dmat = differential_matrix(m, rhs.degree - 1);
  GroupHom h{FinAbGroup{sp.carrier}, FinAbGroup{sp1.carrier}, dmat};
  auto x = try_solve_mod(h, sp1.to_vec(rhs));
  if (!x) return std::nullopt;
  return sp.from_vec(*x);
}

//=== module triples and sections =============================================

bool ModuleTriple::valid() const {
  GroupHom hi{sub.grp, mid.grp, iota}, hp{mid.grp, quo.grp, pi};
  if (!hi.well_defined() || !hp.well_defined()) return false;
  for (int g = 0; g < mid.gamma.n; ++g) {
    if (!hom_matrices_equal(mid.act[g].mul(iota), iota.mul(sub.act[g]), mid.grp)) return false;
    if (!hom_matrices_equal(quo.act[g].mul(pi), pi.mul(mid.act[g]), quo.grp)) return false;
  }
  if (!hom_matrices_equal(pi.mul(iota), IntMatrix(quo.grp.dim(), sub.grp.dim()), quo.grp))
    return false;
  if (kernel(hi).order() != 1) return false;
  if (image(hp).order() != quo.grp.order()) return false;
  return sub.grp.order() * quo.grp.order() == mid.grp.order();
}

std::vector<Int> ModuleTriple::apply_iota(const std::vector<Int>& x) const {
  return mid.grp.reduce(iota.apply(x));
}

std::vector<Int> ModuleTriple::apply_pi(const std::vector<Int>& x) const {
  return quo.grp.reduce(pi.apply(x));
}

std::vector<Int> ModuleTriple::iota_preimage(const std::vector<Int>& v) const {
  GroupHom hi{sub.grp, mid.grp, iota};
  auto x = try_solve_mod(hi, v);
  if (!x) throw LiftOutsideKernel("iota_preimage: element is not in the injected submodule");
  return *x;
}

Cochain iota_preimage_cochain(const ModuleTriple& t, const Cochain& c) {
  if (c.mod.grp.dim() != t.mid.grp.dim()) throw std::invalid_argument("iota_preimage_cochain: cochain not valued in the middle module");
  Cochain r = Cochain::zero(t.sub, c.degree);
  for (int i = 0; i < c.points(); ++i) r.vals[i] = t.iota_preimage(c.vals[i]);
  return r;
}

ModuleTriple restrict_triple(const ModuleTriple& t, const std::vector<int>& elems) {
  return ModuleTriple{restrict_module(t.sub, elems), restrict_module(t.mid, elems),
                      restrict_module(t.quo, elems), t.iota, t.pi};
}

std::vector<Int> SetSection::apply(const std::vector<Int>& m2) const {
  return vals[group_index(quo, quo.reduce(m2))];
}

SetSection canonical_section(const ModuleTriple& t) {
  GroupHom hp{t.mid.grp, t.quo.grp, t.pi};
  SetSection s;
  s.quo = t.quo.grp;
  for (const auto& x : t.quo.grp.elements()) s.vals.push_back(solve_mod(hp, x));
  return s;
}

SetSection randomized_section(const ModuleTriple& t, uint64_t seed) {
  SetSection s = canonical_section(t);
  std::mt19937_64 eng(seed);
  GroupHom hi{t.sub.grp, t.mid.grp, t.iota};
  for (size_t i = 1; i < s.vals.size(); ++i) {
    std::vector<Int> k(t.sub.grp.dim());
    for (int j = 0; j < t.sub.grp.dim(); ++j)
      k[j] = Int(long(eng() % t.sub.grp.mod[j].get_ui()));
    s.vals[i] = t.mid.grp.add(s.vals[i], hi.apply(k));
  }
  return s;
}

bool section_valid(const ModuleTriple& t, const SetSection& s) {
  if (!t.mid.grp.is_zero(s.apply(t.quo.grp.zero()))) return false;
  for (const auto& x : t.quo.grp.elements())
    if (!t.quo.grp.is_zero(t.quo.grp.sub(t.apply_pi(s.apply(x)), x))) return false;
  return true;
}

Cochain compose_section(const ModuleTriple& t, const SetSection& s, const Cochain& c) {
  Cochain r = Cochain::zero(t.mid, c.degree);
  for (int i = 0; i < c.points(); ++i) r.vals[i] = t.mid.grp.reduce(s.vals[group_index(s.quo, c.vals[i])]);
  return r;
}

Cochain connecting_rep(const ModuleTriple& t, const SetSection& s, const Cochain& z) {
  if (!differential(z).is_zero()) throw NotACocycle("connecting_rep: input is not closed");
  Cochain w = compose_section(t, s, z);
  Cochain dw = differential(w);
  Cochain r = Cochain::zero(t.sub, z.degree + 1);
  for (int i = 0; i < dw.points(); ++i) r.vals[i] = t.iota_preimage(dw.vals[i]);
  return r;
}

}  // namespace arithbf
