#include "arithbf/exactalg.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>

namespace arithbf {

//=== IntMatrix ===============================================================

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diag(const std::vector<Int>& d) {
  IntMatrix m(int(d.size()), int(d.size()));
  for (int i = 0; i < int(d.size()); ++i) m.at(i, i) = d[i];
  return m;
}

IntMatrix IntMatrix::from_columns(int dim, const std::vector<std::vector<Int>>& cols) {
  IntMatrix m(dim, int(cols.size()));
  for (int j = 0; j < int(cols.size()); ++j) {
    assert(int(cols[j].size()) == dim);
    for (int i = 0; i < dim; ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

IntMatrix IntMatrix::mul(const IntMatrix& o) const {
  assert(cols == o.rows);
  IntMatrix r(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const Int& x = at(i, k);
      if (x == 0) continue;
      for (int j = 0; j < o.cols; ++j) r.at(i, j) += x * o.at(k, j);
    }
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix r(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
  return r;
}

IntMatrix IntMatrix::hstack(const IntMatrix& o) const {
  assert(rows == o.rows);
  IntMatrix r(rows, cols + o.cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) r.at(i, j) = at(i, j);
    for (int j = 0; j < o.cols; ++j) r.at(i, cols + j) = o.at(i, j);
  }
  return r;
}

IntMatrix IntMatrix::cols_slice(int c0, int c1) const {
  IntMatrix r(rows, c1 - c0);
  for (int i = 0; i < rows; ++i)
    for (int j = c0; j < c1; ++j) r.at(i, j - c0) = at(i, j);
  return r;
}

std::vector<Int> IntMatrix::apply(const std::vector<Int>& x) const {
  assert(int(x.size()) == cols);
  std::vector<Int> r(rows, Int(0));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (at(i, j) != 0 && x[j] != 0) r[i] += at(i, j) * x[j];
  return r;
}

std::vector<Int> IntMatrix::column(int j) const {
  std::vector<Int> c(rows);
  for (int i = 0; i < rows; ++i) c[i] = at(i, j);
  return c;
}

Int det(const IntMatrix& m) {
  assert(m.rows == m.cols);
  int n = m.rows;
  if (n == 0) return 1;
  IntMatrix w = m;
  Int prev = 1, sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (w.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (w.at(i, k) != 0) { p = i; break; }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int t = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
        mpz_divexact(w.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = w.at(k, k);
  }
  return sign * w.at(n - 1, n - 1);
}

//=== Smith normal form =======================================================

namespace {

void row_axpy(IntMatrix& m, int dst, int src, const Int& q) {
  // row dst -= q * row src
  if (q == 0) return;
  for (int j = 0; j < m.cols; ++j) m.at(dst, j) -= q * m.at(src, j);
}

void col_axpy(IntMatrix& m, int dst, int src, const Int& q) {
  if (q == 0) return;
  for (int i = 0; i < m.rows; ++i) m.at(i, dst) -= q * m.at(i, src);
}

void row_swap(IntMatrix& m, int i0, int i1) {
  if (i0 == i1) return;
  for (int j = 0; j < m.cols; ++j) std::swap(m.at(i0, j), m.at(i1, j));
}

void col_swap(IntMatrix& m, int j0, int j1) {
  if (j0 == j1) return;
  for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, j0), m.at(i, j1));
}

}  // namespace

std::vector<Int> SnfResult::diagonal() const {
  std::vector<Int> d;
  for (int i = 0; i < std::min(s.rows, s.cols); ++i) d.push_back(s.at(i, i));
  return d;
}

int SnfResult::rank() const {
  int r = 0;
  for (int i = 0; i < std::min(s.rows, s.cols); ++i)
    if (s.at(i, i) != 0) ++r;
  return r;
}

SnfResult smith_normal_form(const IntMatrix& m) {
  int r = m.rows, c = m.cols;
  SnfResult out{IntMatrix::identity(r), m, IntMatrix::identity(c)};
  IntMatrix& s = out.s;
  IntMatrix& u = out.u;
  IntMatrix& v = out.v;

  int steps = std::min(r, c);
  for (int t = 0; t < steps; ++t) {
    for (;;) {
      // deterministic pivot: smallest |nonzero| in the active submatrix,
      // ties broken in row-major order
      int pi = -1, pj = -1;
      Int best;
      for (int i = t; i < r; ++i)
        for (int j = t; j < c; ++j) {
          if (s.at(i, j) == 0) continue;
          Int v2 = abs(s.at(i, j));
          if (pi < 0 || v2 < best) { best = v2; pi = i; pj = j; }
        }
      if (pi < 0) { pi = -2; break; }  // submatrix all zero
      row_swap(s, t, pi); row_swap(u, t, pi);
      col_swap(s, t, pj); col_swap(v, t, pj);

      bool clean = true;
      for (int i = t + 1; i < r; ++i) {
        if (s.at(i, t) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), s.at(i, t).get_mpz_t(), s.at(t, t).get_mpz_t());
        row_axpy(s, i, t, q); row_axpy(u, i, t, q);
        if (s.at(i, t) != 0) clean = false;
      }
      for (int j = t + 1; j < c; ++j) {
        if (s.at(t, j) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), s.at(t, j).get_mpz_t(), s.at(t, t).get_mpz_t());
        col_axpy(s, j, t, q); col_axpy(v, j, t, q);
        if (s.at(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility sweep over the untouched block
      bool fixed = true;
      for (int i = t + 1; i < r && fixed; ++i)
        for (int j = t + 1; j < c && fixed; ++j)
          if (s.at(i, j) % s.at(t, t) != 0) {
            row_axpy(s, t, i, Int(-1)); row_axpy(u, t, i, Int(-1));
            fixed = false;
          }
      if (fixed) break;
    }
    if (s.at(t, t) < 0) {
      for (int j = 0; j < c; ++j) s.at(t, j) = -s.at(t, j);
      for (int j = 0; j < r; ++j) u.at(t, j) = -u.at(t, j);
    }
  }
  return out;
}

IntMatrix inverse_unimodular(const IntMatrix& m) {
  assert(m.rows == m.cols);
  SnfResult f = smith_normal_form(m);
  for (int i = 0; i < m.rows; ++i)
    if (f.s.at(i, i) != 1) throw NoSolution("matrix is not unimodular");
  return f.v.mul(f.u);
}

std::optional<std::vector<Int>> solve(const IntMatrix& m, const std::vector<Int>& b) {
  assert(int(b.size()) == m.rows);
  SnfResult f = smith_normal_form(m);
  std::vector<Int> c = f.u.apply(b);
  std::vector<Int> y(m.cols, Int(0));
  int dlen = std::min(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i) {
    if (i < dlen && f.s.at(i, i) != 0) {
      if (c[i] % f.s.at(i, i) != 0) return std::nullopt;
      y[i] = c[i] / f.s.at(i, i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return f.v.apply(y);
}

IntMatrix kernel_lattice(const IntMatrix& m) {
  SnfResult f = smith_normal_form(m);
  int dlen = std::min(m.rows, m.cols);
  std::vector<int> free_cols;
  for (int j = 0; j < m.cols; ++j)
    if (j >= dlen || f.s.at(j, j) == 0) free_cols.push_back(j);
  IntMatrix k(m.cols, int(free_cols.size()));
  for (int idx = 0; idx < int(free_cols.size()); ++idx)
    for (int i = 0; i < m.cols; ++i) k.at(i, idx) = f.v.at(i, free_cols[idx]);
  return k;
}

IntMatrix hermite_col(const IntMatrix& gens, int dim) {
  assert(gens.rows == dim);
  IntMatrix w = gens;
  int k = w.cols;
  int col0 = 0;
  for (int row = 0; row < dim; ++row) {
    for (;;) {
      int pj = -1;
      Int best;
      for (int j = col0; j < k; ++j) {
        if (w.at(row, j) == 0) continue;
        Int v2 = abs(w.at(row, j));
        if (pj < 0 || v2 < best) { best = v2; pj = j; }
      }
      if (pj < 0) throw NoSolution("hermite_col: lattice not full rank");
      col_swap(w, col0, pj);
      bool clean = true;
      for (int j = col0 + 1; j < k; ++j) {
        if (w.at(row, j) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), w.at(row, j).get_mpz_t(), w.at(row, col0).get_mpz_t());
        col_axpy(w, j, col0, q);
        if (w.at(row, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (w.at(row, col0) < 0)
      for (int i = 0; i < dim; ++i) w.at(i, col0) = -w.at(i, col0);
    for (int cpr = 0; cpr < col0; ++cpr) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), w.at(row, cpr).get_mpz_t(), w.at(row, col0).get_mpz_t());
      col_axpy(w, cpr, col0, q);
    }
    ++col0;
  }
  return w.cols_slice(0, dim);
}

std::vector<Int> reduce_into_box(std::vector<Int> x, const IntMatrix& hnf) {
  int n = hnf.rows;
  assert(int(x.size()) == n && hnf.cols == n);
  for (int i = 0; i < n; ++i) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x[i].get_mpz_t(), hnf.at(i, i).get_mpz_t());
    if (q == 0) continue;
    for (int r = i; r < n; ++r) x[r] -= q * hnf.at(r, i);
  }
  return x;
}

//=== FinAbGroup ==============================================================

Int FinAbGroup::order() const {
  Int o = 1;
  for (const Int& m : mod) o *= m;
  return o;
}

bool FinAbGroup::is_canonical() const {
  for (size_t i = 0; i < mod.size(); ++i) {
    if (mod[i] < 2) return false;
    if (i + 1 < mod.size() && mod[i + 1] % mod[i] != 0) return false;
  }
  return true;
}

std::vector<Int> FinAbGroup::reduce(std::vector<Int> x) const {
  assert(x.size() == mod.size());
  for (size_t i = 0; i < mod.size(); ++i)
    mpz_fdiv_r(x[i].get_mpz_t(), x[i].get_mpz_t(), mod[i].get_mpz_t());
  return x;
}

std::vector<Int> FinAbGroup::add(const std::vector<Int>& x, const std::vector<Int>& y) const {
  std::vector<Int> r(mod.size());
  for (size_t i = 0; i < mod.size(); ++i) r[i] = x[i] + y[i];
  return reduce(std::move(r));
}

std::vector<Int> FinAbGroup::sub(const std::vector<Int>& x, const std::vector<Int>& y) const {
  std::vector<Int> r(mod.size());
  for (size_t i = 0; i < mod.size(); ++i) r[i] = x[i] - y[i];
  return reduce(std::move(r));
}

std::vector<Int> FinAbGroup::neg(const std::vector<Int>& x) const {
  std::vector<Int> r(mod.size());
  for (size_t i = 0; i < mod.size(); ++i) r[i] = -x[i];
  return reduce(std::move(r));
}

std::vector<Int> FinAbGroup::smul(const Int& k, const std::vector<Int>& x) const {
  std::vector<Int> r(mod.size());
  for (size_t i = 0; i < mod.size(); ++i) r[i] = k * x[i];
  return reduce(std::move(r));
}

bool FinAbGroup::is_zero(const std::vector<Int>& x) const {
  for (size_t i = 0; i < mod.size(); ++i) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x[i].get_mpz_t(), mod[i].get_mpz_t());
    if (r != 0) return false;
  }
  return true;
}

std::vector<std::vector<Int>> FinAbGroup::elements() const {
  std::vector<std::vector<Int>> out;
  std::vector<Int> cur = zero();
  for (;;) {
    out.push_back(cur);
    int i = dim() - 1;
    while (i >= 0) {
      cur[i] += 1;
      if (cur[i] < mod[i]) break;
      cur[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

CoordChange canonicalize(const std::vector<Int>& mod) {
  int n = int(mod.size());
  SnfResult f = smith_normal_form(IntMatrix::diag(mod));
  // y = U x identifies Z^n / diag(mod) with Z^n / S
  std::vector<int> kept;
  std::vector<Int> inv;
  for (int i = 0; i < n; ++i)
    if (f.s.at(i, i) != 1) { kept.push_back(i); inv.push_back(f.s.at(i, i)); }
  CoordChange cc;
  cc.group = FinAbGroup{inv};
  cc.old_mod = mod;
  cc.to_canon = IntMatrix(int(kept.size()), n);
  for (int r = 0; r < int(kept.size()); ++r)
    for (int j = 0; j < n; ++j) cc.to_canon.at(r, j) = f.u.at(kept[r], j);
  IntMatrix uinv = inverse_unimodular(f.u);
  cc.from_canon = IntMatrix(n, int(kept.size()));
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < int(kept.size()); ++r) cc.from_canon.at(i, r) = uinv.at(i, kept[r]);
  return cc;
}

//=== GroupHom ================================================================

std::vector<Int> GroupHom::apply(const std::vector<Int>& x) const {
  return dst.reduce(mat.apply(x));
}

bool GroupHom::well_defined() const {
  for (int i = 0; i < src.dim(); ++i)
    for (int j = 0; j < dst.dim(); ++j)
      if ((mat.at(j, i) * src.mod[i]) % dst.mod[j] != 0) return false;
  return true;
}

GroupHom GroupHom::compose(const GroupHom& inner) const {
  assert(inner.dst.mod == src.mod);
  return GroupHom{inner.src, dst, mat.mul(inner.mat)};
}

GroupHom GroupHom::add(const GroupHom& o) const {
  assert(src.mod == o.src.mod && dst.mod == o.dst.mod);
  IntMatrix m(mat.rows, mat.cols);
  for (size_t i = 0; i < mat.a.size(); ++i) m.a[i] = mat.a[i] + o.mat.a[i];
  return GroupHom{src, dst, std::move(m)};
}

GroupHom GroupHom::negate() const {
  IntMatrix m(mat.rows, mat.cols);
  for (size_t i = 0; i < mat.a.size(); ++i) m.a[i] = -mat.a[i];
  return GroupHom{src, dst, std::move(m)};
}

GroupHom GroupHom::zero(const FinAbGroup& s, const FinAbGroup& d) {
  return GroupHom{s, d, IntMatrix(d.dim(), s.dim())};
}

GroupHom GroupHom::identity(const FinAbGroup& g) {
  return GroupHom{g, g, IntMatrix::identity(g.dim())};
}

//=== congruence solving ======================================================

namespace {

// Row compression of the congruence system mat*x ≡ b (mod dst_mod) over a
// single prime-power modulus q: returns an equivalent small system with all
// rows taken mod q. Works in machine words; only usable when q fits and all
// dst moduli divide q.
struct Compressed {
  std::vector<std::vector<int64_t>> rows;
  std::vector<int64_t> rhs;
  int64_t q = 0;
  bool consistent = true;
};

int64_t to_i64_mod(const Int& x, int64_t q) {
  Int r;
  Int qq(static_cast<long>(q));
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), qq.get_mpz_t());
  return r.get_si();
}

int64_t inv_unit_mod(int64_t u, int64_t q) {
  // extended euclid; u must be a unit mod q
  int64_t a = u % q, b = q, x0 = 1, x1 = 0;
  while (b != 0) {
    int64_t t = a / b;
    a -= t * b; std::swap(a, b);
    x0 -= t * x1; std::swap(x0, x1);
  }
  assert(a == 1 || a == -1);
  int64_t inv = a == 1 ? x0 : -x0;
  inv %= q; if (inv < 0) inv += q;
  return inv;
}

std::optional<Compressed> compress_rows(const IntMatrix& mat,
                                        const std::vector<Int>& dst_mod,
                                        const std::vector<Int>& b,
                                        int64_t p, int64_t q) {
  int m = mat.rows, n = mat.cols;
  Compressed out;
  out.q = q;
  std::vector<std::vector<int64_t>> rows(m, std::vector<int64_t>(n + 1, 0));
  for (int i = 0; i < m; ++i) {
    int64_t mi = dst_mod[i].get_si();
    int64_t scale = q / mi;
    for (int j = 0; j < n; ++j)
      rows[i][j] = (to_i64_mod(mat.at(i, j), q) * scale) % q;
    rows[i][n] = (to_i64_mod(b[i], q) * scale) % q;
  }
  auto val = [&](int64_t x) {
    if (x == 0) return int64_t(63);
    int64_t v = 0;
    while (x % p == 0) { x /= p; ++v; }
    return v;
  };
  int r0 = 0;
  for (int col = 0; col < n && r0 < m; ++col) {
    int piv = -1;
    int64_t bestv = 63;
    for (int i = r0; i < m; ++i) {
      int64_t v = val(rows[i][col]);
      if (v < bestv) { bestv = v; piv = i; }
    }
    if (piv < 0 || rows[piv][col] == 0) continue;
    std::swap(rows[r0], rows[piv]);
    int64_t pv = 1;
    for (int64_t t = 0; t < bestv; ++t) pv *= p;
    int64_t unit = (rows[r0][col] / pv) % q;
    int64_t uinv = inv_unit_mod(unit, q);
    for (int j = col; j <= n; ++j) rows[r0][j] = (rows[r0][j] * uinv) % q;
    for (int i = r0 + 1; i < m; ++i) {
      if (rows[i][col] == 0) continue;
      int64_t f = (rows[i][col] / pv) % q;
      for (int j = col; j <= n; ++j) {
        rows[i][j] = (rows[i][j] - f * rows[r0][j]) % q;
        if (rows[i][j] < 0) rows[i][j] += q;
      }
    }
    ++r0;
  }
  for (int i = r0; i < m; ++i)
    if (rows[i][n] % q != 0) { out.consistent = false; return out; }
  rows.resize(r0);
  out.rhs.resize(r0);
  for (int i = 0; i < r0; ++i) {
    out.rhs[i] = rows[i][n];
    rows[i].resize(n);
  }
  out.rows = std::move(rows);
  return out;
}

// q = p^k if dst moduli share a single small prime p; 0 otherwise
std::pair<int64_t, int64_t> common_prime_power(const std::vector<Int>& dst_mod) {
  int64_t q = 1;
  for (const Int& m : dst_mod) {
    if (!m.fits_slong_p()) return {0, 0};
    int64_t v = m.get_si();
    if (v < 1) return {0, 0};
    q = std::max(q, v);
  }
  if (q == 1) return {0, 0};
  int64_t p = 0;
  for (int64_t cand : {2, 3, 5, 7, 11, 13}) {
    if (q % cand == 0) { p = cand; break; }
  }
  if (p == 0) return {0, 0};
  int64_t t = q;
  while (t % p == 0) t /= p;
  if (t != 1) return {0, 0};
  for (const Int& m : dst_mod)
    if (q % m.get_si() != 0) return {0, 0};
  if (q > (int64_t(1) << 20)) return {0, 0};
  return {p, q};
}

}  // namespace

struct CongruenceSystem {
  IntMatrix mat;
  std::vector<Int> dst_mod;
  std::vector<Int> b;
};

// Solves mat*x ≡ b (mod dst_mod componentwise) for x defined modulo src_mod.
// Returns the canonical box-reduced particular solution and the Hermite basis
// of the full solution lattice (differences plus the src moduli lattice).
struct CongruenceSolution {
  std::vector<Int> particular;
  IntMatrix lattice_hnf;
};

static std::optional<CongruenceSolution> solve_congruence_impl(
    const IntMatrix& mat_in, const std::vector<Int>& src_mod,
    const std::vector<Int>& dst_mod_in, const std::vector<Int>& b_in) {
  int n = mat_in.cols;
  assert(int(src_mod.size()) == n);
  IntMatrix mat = mat_in;
  std::vector<Int> dst_mod = dst_mod_in, b = b_in;

  if (mat.rows > 48) {
    auto [p, q] = common_prime_power(dst_mod);
    if (p != 0) {
      auto cr = compress_rows(mat, dst_mod, b, p, q);
      if (cr && !cr->consistent) return std::nullopt;
      if (cr) {
        int m2 = int(cr->rows.size());
        IntMatrix m2x(m2, n);
        std::vector<Int> b2(m2), dm2(m2, Int(static_cast<long>(cr->q)));
        for (int i = 0; i < m2; ++i) {
          for (int j = 0; j < n; ++j) m2x.at(i, j) = Int(static_cast<long>(cr->rows[i][j]));
          b2[i] = Int(static_cast<long>(cr->rhs[i]));
        }
        mat = std::move(m2x);
        dst_mod = std::move(dm2);
        b = std::move(b2);
      }
    }
  }

  int m = mat.rows;
  IntMatrix w = mat.hstack(IntMatrix::diag(dst_mod));
  auto sol = solve(w, b);
  if (!sol) return std::nullopt;
  std::vector<Int> x0(sol->begin(), sol->begin() + n);

  IntMatrix kfull = kernel_lattice(w);
  IntMatrix gens(n, kfull.cols + n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < kfull.cols; ++j) gens.at(i, j) = kfull.at(i, j);
    gens.at(i, kfull.cols + i) = src_mod[i];
  }
  CongruenceSolution out;
  out.lattice_hnf = hermite_col(gens, n);
  out.particular = reduce_into_box(std::move(x0), out.lattice_hnf);
  (void)m;
  return out;
}

std::optional<std::vector<Int>> try_solve_mod(const GroupHom& h, const std::vector<Int>& b) {
  if (h.src.dim() == 0) {
    if (h.dst.is_zero(b)) return std::vector<Int>{};
    return std::nullopt;
  }
  auto s = solve_congruence_impl(h.mat, h.src.mod, h.dst.mod, b);
  if (!s) return std::nullopt;
  return s->particular;
}

std::vector<Int> solve_mod(const GroupHom& h, const std::vector<Int>& b) {
  auto s = try_solve_mod(h, b);
  if (!s) throw NoSolution("solve_mod: congruence has no solution");
  return *s;
}

// Hermite basis of {x : mat*x ≡ 0 (mod dst_mod)} + src moduli lattice.
IntMatrix congruence_kernel(const IntMatrix& mat, const std::vector<Int>& src_mod,
                            const std::vector<Int>& dst_mod) {
  auto s = solve_congruence_impl(mat, src_mod, dst_mod,
                                 std::vector<Int>(mat.rows, Int(0)));
  assert(s);
  return s->lattice_hnf;
}

//=== subgroups ===============================================================

namespace {

Subgroup subgroup_from_lattice(const FinAbGroup& ambient, IntMatrix lattice_hnf) {
  int n = ambient.dim();
  Subgroup s;
  s.ambient = ambient;
  s.lattice = std::move(lattice_hnf);
  if (n == 0) {
    s.group = FinAbGroup{};
    s.embed_mat = IntMatrix(0, 0);
    return s;
  }
  // columns of Y express the ambient moduli lattice in the subgroup basis
  IntMatrix y(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<Int> e(n, Int(0));
    e[j] = ambient.mod[j];
    auto c = solve(s.lattice, e);
    assert(c);
    for (int i = 0; i < n; ++i) y.at(i, j) = (*c)[i];
  }
  SnfResult f = smith_normal_form(y);
  std::vector<int> kept;
  std::vector<Int> inv;
  for (int i = 0; i < n; ++i)
    if (f.s.at(i, i) != 1) { kept.push_back(i); inv.push_back(f.s.at(i, i)); }
  s.group = FinAbGroup{inv};
  IntMatrix uinv = inverse_unimodular(f.u);
  s.embed_mat = IntMatrix(n, int(kept.size()));
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < int(kept.size()); ++r) {
      Int acc = 0;
      for (int t = 0; t < n; ++t) acc += s.lattice.at(i, t) * uinv.at(t, kept[r]);
      s.embed_mat.at(i, r) = acc;
    }
  // stash the SNF transform for coords(): recompute there via solve instead
  return s;
}

}  // namespace

std::vector<Int> Subgroup::embed(const std::vector<Int>& c) const {
  return ambient.reduce(embed_mat.apply(c));
}

bool Subgroup::contains(const std::vector<Int>& x) const {
  if (ambient.dim() == 0) return true;
  return solve(lattice, x).has_value();
}

std::vector<Int> Subgroup::coords(const std::vector<Int>& x) const {
  // solve embed_mat * c ≡ x (mod ambient)
  GroupHom h{group, ambient, embed_mat};
  return solve_mod(h, x);
}

std::vector<std::vector<Int>> Subgroup::element_list() const {
  std::vector<std::vector<Int>> out;
  for (const auto& c : group.elements()) out.push_back(embed(c));
  return out;
}

Subgroup subgroup_from_generators(const FinAbGroup& ambient,
                                  const std::vector<std::vector<Int>>& gens) {
  int n = ambient.dim();
  if (n == 0) return subgroup_from_lattice(ambient, IntMatrix(0, 0));
  IntMatrix g(n, int(gens.size()) + n);
  for (int j = 0; j < int(gens.size()); ++j) {
    assert(int(gens[j].size()) == n);
    for (int i = 0; i < n; ++i) g.at(i, j) = gens[j][i];
  }
  for (int i = 0; i < n; ++i) g.at(i, int(gens.size()) + i) = ambient.mod[i];
  return subgroup_from_lattice(ambient, hermite_col(g, n));
}

Subgroup kernel(const GroupHom& h) {
  if (h.src.dim() == 0) return subgroup_from_lattice(h.src, IntMatrix(0, 0));
  IntMatrix lat = congruence_kernel(h.mat, h.src.mod, h.dst.mod);
  return subgroup_from_lattice(h.src, std::move(lat));
}

Subgroup image(const GroupHom& h) {
  std::vector<std::vector<Int>> gens;
  for (int j = 0; j < h.src.dim(); ++j) gens.push_back(h.dst.reduce(h.mat.column(j)));
  return subgroup_from_generators(h.dst, gens);
}

Subgroup full_subgroup(const FinAbGroup& g) {
  std::vector<std::vector<Int>> gens;
  for (int i = 0; i < g.dim(); ++i) {
    std::vector<Int> e(g.dim(), Int(0));
    e[i] = 1;
    gens.push_back(e);
  }
  return subgroup_from_generators(g, gens);
}

Subgroup zero_subgroup(const FinAbGroup& g) {
  return subgroup_from_generators(g, {});
}

Subgroup subgroup_sum(const Subgroup& a, const Subgroup& b) {
  assert(a.ambient.mod == b.ambient.mod);
  std::vector<std::vector<Int>> gens;
  for (int j = 0; j < a.embed_mat.cols; ++j) gens.push_back(a.ambient.reduce(a.embed_mat.column(j)));
  for (int j = 0; j < b.embed_mat.cols; ++j) gens.push_back(b.ambient.reduce(b.embed_mat.column(j)));
  return subgroup_from_generators(a.ambient, gens);
}

Subgroup subgroup_intersection(const Subgroup& a, const Subgroup& b) {
  assert(a.ambient.mod == b.ambient.mod);
  int n = a.ambient.dim();
  if (n == 0) return a;
  // x = A u = B v  ->  [A | -B] (u,v)^T = 0
  IntMatrix stacked = a.lattice.hstack(b.lattice);
  for (int i = 0; i < n; ++i)
    for (int j = n; j < 2 * n; ++j) stacked.at(i, j) = -stacked.at(i, j);
  IntMatrix k = kernel_lattice(stacked);
  IntMatrix gens(n, k.cols);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k.cols; ++j) {
      Int acc = 0;
      for (int t = 0; t < n; ++t) acc += a.lattice.at(i, t) * k.at(t, j);
      gens.at(i, j) = acc;
    }
  return subgroup_from_lattice(a.ambient, hermite_col(gens.hstack(IntMatrix::diag(a.ambient.mod)), n));
}

Subgroup preimage_subgroup(const GroupHom& h, const Subgroup& of_dst) {
  assert(of_dst.ambient.mod == h.dst.mod);
  int n = h.src.dim(), m = h.dst.dim();
  if (n == 0) return subgroup_from_lattice(h.src, IntMatrix(0, 0));
  // mat*x ≡ lattice-member (mod dst): x-part of ker[mat | -L_dst] + src moduli
  IntMatrix w(m, n + m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) w.at(i, j) = h.mat.at(i, j);
    for (int j = 0; j < m; ++j) w.at(i, n + j) = -of_dst.lattice.at(i, j);
  }
  IntMatrix k = kernel_lattice(w);
  IntMatrix gens(n, k.cols + n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k.cols; ++j) gens.at(i, j) = k.at(i, j);
    gens.at(i, k.cols + i) = h.src.mod[i];
  }
  return subgroup_from_lattice(h.src, hermite_col(gens, n));
}

Subgroup image_subgroup(const GroupHom& h, const Subgroup& of_src) {
  assert(of_src.ambient.mod == h.src.mod);
  std::vector<std::vector<Int>> gens;
  for (int j = 0; j < of_src.embed_mat.cols; ++j)
    gens.push_back(h.apply(of_src.ambient.reduce(of_src.embed_mat.column(j))));
  return subgroup_from_generators(h.dst, gens);
}

bool subgroup_leq(const Subgroup& a, const Subgroup& b) {
  assert(a.ambient.mod == b.ambient.mod);
  for (int j = 0; j < a.embed_mat.cols; ++j)
    if (!b.contains(a.ambient.reduce(a.embed_mat.column(j)))) return false;
  return true;
}

bool subgroup_equal(const Subgroup& a, const Subgroup& b) {
  return a.lattice == b.lattice;  // Hermite form is canonical
}

//=== subquotients ============================================================

bool Subquotient::member(const std::vector<Int>& x) const {
  return solve(k_basis, x).has_value();
}

std::vector<Int> Subquotient::project(const std::vector<Int>& x) const {
  auto y = solve(k_basis, x);
  if (!y) throw NoSolution("subquotient: element outside the kernel sublattice");
  std::vector<Int> full = u.apply(*y);
  std::vector<Int> cls(keep.size());
  for (size_t r = 0; r < keep.size(); ++r) {
    mpz_fdiv_r(cls[r].get_mpz_t(), full[keep[r]].get_mpz_t(), sigma[keep[r]].get_mpz_t());
  }
  return cls;
}

std::vector<Int> Subquotient::lift(const std::vector<Int>& cls) const {
  int n = int(carrier_mod.size());
  std::vector<Int> full(n, Int(0));
  assert(cls.size() == keep.size());
  for (size_t r = 0; r < keep.size(); ++r) full[keep[r]] = cls[r];
  std::vector<Int> y = u_inv.apply(full);
  std::vector<Int> x = k_basis.apply(y);
  for (int i = 0; i < n; ++i)
    mpz_fdiv_r(x[i].get_mpz_t(), x[i].get_mpz_t(), carrier_mod[i].get_mpz_t());
  return x;
}

Subquotient make_subquotient(const std::vector<Int>& carrier_mod,
                             const IntMatrix& kernel_gens,
                             const IntMatrix& image_gens) {
  int n = int(carrier_mod.size());
  Subquotient sq;
  sq.carrier_mod = carrier_mod;
  if (n == 0) {
    sq.group = FinAbGroup{};
    sq.k_basis = IntMatrix(0, 0);
    sq.u = IntMatrix(0, 0);
    sq.u_inv = IntMatrix(0, 0);
    return sq;
  }
  IntMatrix kg(n, kernel_gens.cols + n);
  IntMatrix ig(n, image_gens.cols + n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < kernel_gens.cols; ++j) kg.at(i, j) = kernel_gens.at(i, j);
    kg.at(i, kernel_gens.cols + i) = carrier_mod[i];
    for (int j = 0; j < image_gens.cols; ++j) ig.at(i, j) = image_gens.at(i, j);
    ig.at(i, image_gens.cols + i) = carrier_mod[i];
  }
  sq.k_basis = hermite_col(kg, n);
  IntMatrix ib = hermite_col(ig, n);
  IntMatrix y(n, n);
  for (int j = 0; j < n; ++j) {
    auto c = solve(sq.k_basis, ib.column(j));
    if (!c) throw NoSolution("subquotient: image not contained in kernel");
    for (int i = 0; i < n; ++i) y.at(i, j) = (*c)[i];
  }
  SnfResult f = smith_normal_form(y);
  sq.u = f.u;
  sq.u_inv = inverse_unimodular(f.u);
  sq.sigma.resize(n);
  std::vector<Int> inv;
  for (int i = 0; i < n; ++i) {
    sq.sigma[i] = f.s.at(i, i);
    if (sq.sigma[i] != 1) {
      sq.keep.push_back(i);
      inv.push_back(sq.sigma[i]);
    }
  }
  sq.group = FinAbGroup{inv};
  return sq;
}

}  // namespace arithbf
