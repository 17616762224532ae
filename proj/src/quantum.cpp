#include "arithbf/quantum.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "arithbf/errors.hpp"
#include "arithbf/randomizers.hpp"

namespace arithbf {

namespace {

void trim(std::vector<Int>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// quotient of an exact division by a monic polynomial
std::vector<Int> poly_div_exact(std::vector<Int> num, const std::vector<Int>& den) {
  trim(num);
  int dd = int(den.size()) - 1;
  if (dd < 0 || den[dd] != 1) throw std::logic_error("divisor is not monic");
  std::vector<Int> q(num.size() > size_t(dd) ? num.size() - dd : 1, Int(0));
  for (int i = int(num.size()) - 1; i >= dd; --i) {
    Int c = num[i];
    if (c == 0) continue;
    q[i - dd] = c;
    for (int j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
  }
  trim(num);
  if (!num.empty()) throw std::logic_error("division is not exact");
  return q;
}

// remainder of division by a monic polynomial
std::vector<Int> poly_mod(std::vector<Int> num, const std::vector<Int>& den) {
  int dd = int(den.size()) - 1;
  for (int i = int(num.size()) - 1; i >= dd; --i) {
    Int c = num[i];
    if (c == 0) continue;
    for (int j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
  }
  num.resize(dd, Int(0));
  return num;
}

std::vector<Int> poly_mul(const std::vector<Int>& a, const std::vector<Int>& b) {
  std::vector<Int> p(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) p[i + j] += a[i] * b[j];
  return p;
}

const std::vector<Int>& cyclo_cached(unsigned long n) {
  static std::map<unsigned long, std::vector<Int>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  for (unsigned long m = 1; m <= n; ++m) {
    if (n % m || cache.count(m)) continue;
    std::vector<Int> p(m + 1, Int(0));
    p[0] = -1;
    p[m] = 1;
    for (unsigned long d = 1; d < m; ++d)
      if (m % d == 0) p = poly_div_exact(std::move(p), cache.at(d));
    cache.emplace(m, std::move(p));
  }
  return cache.at(n);
}

unsigned long order_of(const Int& n) {
  if (n <= 0) throw std::invalid_argument("root order must be positive");
  return n.get_ui();
}

void check_same_ring(const CycInt& a, const CycInt& b) {
  if (a.n != b.n) throw std::invalid_argument("cyclotomic values of different root orders");
}

std::vector<Int> zip_entrywise(const CycInt& a, const CycInt& b, int sign) {
  std::vector<Int> c(a.c.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.c[i] + sign * b.c[i];
  return c;
}

}  // namespace

std::vector<Int> cyclotomic_polynomial(const Int& n) { return cyclo_cached(order_of(n)); }

CycInt CycInt::zero(const Int& n) {
  return CycInt{n, std::vector<Int>(cyclo_cached(order_of(n)).size() - 1, Int(0))};
}

CycInt CycInt::one(const Int& n) {
  CycInt r = zero(n);
  r.c[0] = 1;
  return r;
}

CycInt CycInt::reduce(const Int& n, std::vector<Int> poly) {
  return CycInt{n, poly_mod(std::move(poly), cyclo_cached(order_of(n)))};
}

CycInt CycInt::add(const CycInt& o) const {
  check_same_ring(*this, o);
  return CycInt{n, zip_entrywise(*this, o, 1)};
}

CycInt CycInt::sub(const CycInt& o) const {
  check_same_ring(*this, o);
  return CycInt{n, zip_entrywise(*this, o, -1)};
}

CycInt CycInt::mul(const CycInt& o) const {
  check_same_ring(*this, o);
  return reduce(n, poly_mul(c, o.c));
}

CycInt CycInt::neg() const {
  CycInt r = *this;
  for (Int& x : r.c) x = -x;
  return r;
}

CycInt CycInt::conj() const {
  unsigned long nn = order_of(n);
  std::vector<Int> p(nn, Int(0));
  for (size_t i = 0; i < c.size(); ++i) p[i == 0 ? 0 : nn - i] += c[i];
  return reduce(n, std::move(p));
}

bool CycInt::is_zero() const {
  for (const Int& x : c)
    if (x != 0) return false;
  return true;
}

bool CycInt::is_rational_integer() const {
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i] != 0) return false;
  return true;
}

Int CycInt::rational_value() const {
  if (!is_rational_integer()) throw std::logic_error("value is not a rational integer");
  return c[0];
}

std::string CycInt::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < c.size(); ++i) os << (i ? ", " : "") << c[i].get_str();
  os << "] mod Phi_" << n.get_str();
  return os.str();
}

CycInt amplitude(const QmodZ& t, const Int& n) {
  if (t.den <= 0 || n % t.den != 0)
    throw DenominatorMismatch("amplitude denominator " + t.den.get_str() +
                              " does not divide the root order " + n.get_str());
  Int e = ((t.num % t.den) + t.den) % t.den * (n / t.den);
  std::vector<Int> p(e.get_ui() + 1, Int(0));
  p.back() = 1;
  return CycInt::reduce(n, std::move(p));
}

CycInt inner_product(const AmplitudeSection& a, const AmplitudeSection& b) {
  if (a.s != b.s || a.xi.s != b.xi.s || a.table.size() != b.table.size())
    throw SectionMismatch("inner product of sections over different cuts");
  if (a.table.empty()) return CycInt::zero(Int(1));
  CycInt acc = CycInt::zero(a.table.begin()->second.n);
  auto ib = b.table.begin();
  for (auto ia = a.table.begin(); ia != a.table.end(); ++ia, ++ib) {
    if (ia->first != ib->first)
      throw SectionMismatch("inner product of sections over different boundary profiles");
    acc = acc.add(ia->second.mul(ib->second.conj()));
  }
  return acc;
}

CycInt partition_closed(const FixtureContext& ctx, uint64_t seed) {
  CycInt acc = CycInt::zero(ctx.modulus());
  for (const FieldPoint& rho : space_of_fields(ctx, {}).elements)
    acc = acc.add(amplitude(bf_closed(ctx, rho, seed), ctx.modulus()));
  return acc;
}

AmplitudeSection partition_relative(const FixtureContext& ctx, const std::vector<int>& s,
                                    const SectionXi& xi, uint64_t seed) {
  AmplitudeSection out;
  out.s = s;
  out.xi = xi;
  if (s.empty()) {
    out.table[{}] = partition_closed(ctx, seed);
    return out;
  }
  for (const auto& [key, p] : xi.points) out.table.emplace(key, CycInt::zero(ctx.modulus()));
  for (const FieldPoint& rho : space_of_fields(ctx, s).elements) {
    std::vector<Int> key = boundary_key(s, rho);
    QmodZ v = trivialize(ctx, xi, global_bf(ctx, s, rho, seed));
    auto it = out.table.find(key);
    if (it == out.table.end())
      throw FiberMismatch("admissible field lies outside the section domain");
    it->second = it->second.add(amplitude(v, ctx.modulus()));
  }
  return out;
}

AmplitudeSection boundary_partition(const FixtureContext& ctx, const std::vector<int>& places,
                                    const SectionXi& xi, Orientation o, uint64_t seed) {
  AmplitudeSection out;
  out.s = places;
  out.xi = xi;
  for (const auto& [key, p] : xi.points) out.table.emplace(key, CycInt::zero(ctx.modulus()));
  if (places.empty()) {
    out.table[{}] = CycInt::one(ctx.modulus());  // empty product over no places
    return out;
  }

  std::vector<std::vector<std::vector<Int>>> fnr_elems;
  for (int x : places) fnr_elems.push_back(ctx.place(x).ur.fnr.elements());
  std::vector<size_t> idx(places.size(), 0);
  while (true) {
    std::vector<Int> key;
    std::vector<TorsorPoint> parts;
    for (size_t i = 0; i < places.size(); ++i) {
      parts.push_back(local_bf_unramified(ctx, places[i], fnr_elems[i][idx[i]], seed));
      key.insert(key.end(), parts.back().cls1[0].begin(), parts.back().cls1[0].end());
      key.insert(key.end(), parts.back().cls2[0].begin(), parts.back().cls2[0].end());
    }
    auto it = out.table.find(key);
    if (it != out.table.end()) {
      QmodZ v = trivialize(ctx, xi, combine(parts), o);
      it->second = it->second.add(amplitude(v, ctx.modulus()));
    }
    size_t k = 0;
    for (; k < idx.size(); ++k) {
      if (++idx[k] < fnr_elems[k].size()) break;
      idx[k] = 0;
    }
    if (k == idx.size()) break;
  }
  return out;
}

AmplitudeSection glue(const FixtureContext& ctx, const AmplitudeSection& zt,
                      const AmplitudeSection& c) {
  for (int x : c.s)
    if (std::find(zt.s.begin(), zt.s.end(), x) == zt.s.end())
      throw SectionMismatch("gluing places are not part of the larger cut");

  std::vector<int> s_out;
  std::vector<bool> glued;  // per entry of zt.s
  std::vector<int> width;
  for (int x : zt.s) {
    bool g = std::find(c.s.begin(), c.s.end(), x) != c.s.end();
    glued.push_back(g);
    if (!g) s_out.push_back(x);
    width.push_back(ctx.place(x).h1_m1d.group().dim() + ctx.place(x).h1_m2.group().dim());
  }

  auto split = [&](const std::vector<Int>& key) {
    std::pair<std::vector<Int>, std::vector<Int>> parts;  // (kept, glued)
    size_t pos = 0;
    for (size_t i = 0; i < glued.size(); ++i) {
      auto& dst = glued[i] ? parts.second : parts.first;
      dst.insert(dst.end(), key.begin() + pos, key.begin() + pos + width[i]);
      pos += width[i];
    }
    return parts;
  };

  AmplitudeSection out;
  out.s = s_out;
  for (const auto& [key, val] : zt.table) {
    auto [alpha, gamma] = split(key);
    auto ic = c.table.find(gamma);
    if (ic == c.table.end())
      throw SectionMismatch("boundary profile is missing from the glued section");
    CycInt term = val.mul(ic->second);
    auto io = out.table.find(alpha);
    if (io == out.table.end())
      out.table.emplace(alpha, term);
    else
      io->second = io->second.add(term);
  }
  return out;
}

TensorReport tensor_factor_check(const FixtureContext& ctx, const std::vector<int>& s,
                                 uint64_t seed, int count) {
  TensorReport r;
  if (s.empty()) return r;

  std::vector<SectionXi> xis;
  for (int x : s) xis.push_back(default_xi(ctx, {x}));
  SectionXi xi_s = xis[0];
  for (size_t i = 1; i < xis.size(); ++i) xi_s = boxplus(xi_s, xis[i]);

  std::mt19937_64 eng(seed);
  FieldsSpace fs = space_of_fields(ctx, s);
  const Int n = ctx.modulus();

  for (int it = 0; it < count; ++it) {
    const FieldPoint& rho = fs.elements[size_t(eng() % fs.elements.size())];
    TorsorPoint p = global_bf(ctx, s, rho);
    for (size_t i = 0; i < s.size(); ++i)
      p = translate(p, int(i), random_cocycle(eng, ctx.place(s[i]).d, 2));

    CycInt whole = amplitude(trivialize(ctx, xi_s, p), n);
    CycInt prod = CycInt::one(n);
    for (size_t i = 0; i < s.size(); ++i) {
      TorsorPoint q;
      q.s = {s[i]};
      q.cls1 = {p.cls1[i]};
      q.cls2 = {p.cls2[i]};
      q.a1 = {p.a1[i]};
      q.a2 = {p.a2[i]};
      q.sigma = {p.sigma[i]};
      q.phi = {p.phi[i]};
      prod = prod.mul(amplitude(trivialize(ctx, xis[i], q), n));
    }
    if (!(whole == prod))
      r.witnesses.push_back("trivialized point " + std::to_string(it) +
                            " does not factor: " + whole.str() + " vs " + prod.str());
  }

  auto random_section = [&](size_t i) {
    AmplitudeSection f;
    f.s = {s[i]};
    f.xi = xis[i];
    for (const auto& [key, pt] : xis[i].points)
      f.table.emplace(key, amplitude(QmodZ::of(Int(long(eng() % n.get_ui())), n), n));
    return f;
  };
  auto product_section = [&](const std::vector<AmplitudeSection>& fs_per) {
    AmplitudeSection f;
    f.s = s;
    f.xi = xi_s;
    for (const auto& [key, pt] : xi_s.points) {
      CycInt v = CycInt::one(n);
      size_t pos = 0;
      for (size_t i = 0; i < s.size(); ++i) {
        int w = ctx.place(s[i]).h1_m1d.group().dim() + ctx.place(s[i]).h1_m2.group().dim();
        std::vector<Int> sub(key.begin() + pos, key.begin() + pos + w);
        pos += w;
        v = v.mul(fs_per[i].table.at(sub));
      }
      f.table.emplace(key, v);
    }
    return f;
  };

  for (int it = 0; it < count; ++it) {
    std::vector<AmplitudeSection> fu, gu;
    for (size_t i = 0; i < s.size(); ++i) {
      fu.push_back(random_section(i));
      gu.push_back(random_section(i));
    }
    CycInt lhs = inner_product(product_section(fu), product_section(gu));
    CycInt rhs = CycInt::one(n);
    for (size_t i = 0; i < s.size(); ++i) rhs = rhs.mul(inner_product(fu[i], gu[i]));
    if (!(lhs == rhs))
      r.witnesses.push_back("inner product " + std::to_string(it) +
                            " does not factor: " + lhs.str() + " vs " + rhs.str());
  }

  r.pass = r.witnesses.empty();
  return r;
}

}  // namespace arithbf
