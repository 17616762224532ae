#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arithbf {

using Int = mpz_class;

struct NoSolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//=== dense integer matrices ==================================================

struct IntMatrix {
  int rows = 0, cols = 0;
  std::vector<Int> a;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c), Int(0)) {}

  Int& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const Int& at(int i, int j) const { return a[size_t(i) * cols + j]; }

  static IntMatrix identity(int n);
  static IntMatrix diag(const std::vector<Int>& d);
  static IntMatrix from_columns(int dim, const std::vector<std::vector<Int>>& cols);

  IntMatrix mul(const IntMatrix& o) const;
  IntMatrix transpose() const;
  IntMatrix hstack(const IntMatrix& o) const;
  IntMatrix cols_slice(int c0, int c1) const;
  std::vector<Int> apply(const std::vector<Int>& x) const;
  std::vector<Int> column(int j) const;

  bool operator==(const IntMatrix& o) const = default;
};

// Exact determinant (Bareiss fraction-free elimination).
Int det(const IntMatrix& m);

// Inverse of a matrix with det = ±1; throws NoSolution otherwise.
IntMatrix inverse_unimodular(const IntMatrix& m);

//=== Smith normal form =======================================================

// u * m * v = s with u, v unimodular, s diagonal, nonnegative, s1 | s2 | ...
// Pivot choice is deterministic: smallest |nonzero| entry of the active
// submatrix, ties broken in row-major order.
struct SnfResult {
  IntMatrix u, s, v;
  std::vector<Int> diagonal() const;
  int rank() const;
};

SnfResult smith_normal_form(const IntMatrix& m);

// One integer solution of m*x = b, if any.
std::optional<std::vector<Int>> solve(const IntMatrix& m, const std::vector<Int>& b);

// Column basis of the lattice {x : m*x = 0}.
IntMatrix kernel_lattice(const IntMatrix& m);

// Column Hermite form of the full-rank lattice spanned by the columns of
// gens inside Z^dim: lower triangular, positive pivots, entries to the left
// of each pivot reduced into [0, pivot).
IntMatrix hermite_col(const IntMatrix& gens, int dim);

// Lex-least nonnegative representative of x + L for a full-rank lattice in
// Hermite column form.
std::vector<Int> reduce_into_box(std::vector<Int> x, const IntMatrix& hnf);

//=== finite abelian groups ===================================================

// Moduli vector (each entry >= 1). Public groups are kept in canonical
// invariant-factor form (entries >= 2, each dividing the next); cochain
// carriers may use arbitrary moduli.
struct FinAbGroup {
  std::vector<Int> mod;

  FinAbGroup() = default;
  explicit FinAbGroup(std::vector<Int> m) : mod(std::move(m)) {}

  int dim() const { return int(mod.size()); }
  Int order() const;
  bool is_canonical() const;

  std::vector<Int> zero() const { return std::vector<Int>(mod.size(), Int(0)); }
  std::vector<Int> reduce(std::vector<Int> x) const;
  std::vector<Int> add(const std::vector<Int>& x, const std::vector<Int>& y) const;
  std::vector<Int> sub(const std::vector<Int>& x, const std::vector<Int>& y) const;
  std::vector<Int> neg(const std::vector<Int>& x) const;
  std::vector<Int> smul(const Int& k, const std::vector<Int>& x) const;
  bool is_zero(const std::vector<Int>& x) const;

  // All elements in mixed-radix order; requires order() to be small.
  std::vector<std::vector<Int>> elements() const;

  bool operator==(const FinAbGroup& o) const = default;
};

// Renormalization of an arbitrary moduli vector to canonical invariant
// factors together with the coordinate change in both directions:
// canonical = to_canon * old (mod canonical), old = from_canon * canonical.
struct CoordChange {
  FinAbGroup group;
  std::vector<Int> old_mod;
  IntMatrix to_canon, from_canon;
};

CoordChange canonicalize(const std::vector<Int>& mod);

//=== homomorphisms ===========================================================

struct GroupHom {
  FinAbGroup src, dst;
  IntMatrix mat;  // one dst-coordinate column per src generator

  std::vector<Int> apply(const std::vector<Int>& x) const;
  bool well_defined() const;
  GroupHom compose(const GroupHom& inner) const;  // this ∘ inner
  GroupHom add(const GroupHom& o) const;
  GroupHom negate() const;

  static GroupHom zero(const FinAbGroup& s, const FinAbGroup& d);
  static GroupHom identity(const FinAbGroup& g);
};

// Canonical (lex-least nonnegative) x with mat*x ≡ b modulo dst; throws
// NoSolution when the congruence has no solution.
std::vector<Int> solve_mod(const GroupHom& h, const std::vector<Int>& b);
std::optional<std::vector<Int>> try_solve_mod(const GroupHom& h, const std::vector<Int>& b);

// Hermite basis of {x : mat*x ≡ 0 (mod dst_mod)}; always full rank since it
// contains the src moduli lattice.
IntMatrix congruence_kernel(const IntMatrix& mat, const std::vector<Int>& src_mod,
                            const std::vector<Int>& dst_mod);

//=== subgroups and subquotients ==============================================

struct Subgroup {
  FinAbGroup ambient;
  FinAbGroup group;      // canonical abstract form
  IntMatrix embed_mat;   // abstract coordinates -> ambient coordinates
  IntMatrix lattice;     // Hermite basis of the preimage lattice in Z^n

  std::vector<Int> embed(const std::vector<Int>& c) const;
  bool contains(const std::vector<Int>& x) const;
  std::vector<Int> coords(const std::vector<Int>& x) const;  // throws NoSolution
  Int order() const { return group.order(); }
  std::vector<std::vector<Int>> element_list() const;
};

Subgroup subgroup_from_generators(const FinAbGroup& ambient,
                                  const std::vector<std::vector<Int>>& gens);
Subgroup kernel(const GroupHom& h);
Subgroup image(const GroupHom& h);
Subgroup full_subgroup(const FinAbGroup& g);
Subgroup zero_subgroup(const FinAbGroup& g);
Subgroup subgroup_sum(const Subgroup& a, const Subgroup& b);
Subgroup subgroup_intersection(const Subgroup& a, const Subgroup& b);
Subgroup preimage_subgroup(const GroupHom& h, const Subgroup& of_dst);
Subgroup image_subgroup(const GroupHom& h, const Subgroup& of_src);
bool subgroup_leq(const Subgroup& a, const Subgroup& b);
bool subgroup_equal(const Subgroup& a, const Subgroup& b);

// Quotient K/I of two sublattices of a moduli carrier (I ⊆ K, both containing
// the moduli lattice). project maps a carrier element of K to canonical class
// coordinates; lift returns a distinguished representative.
struct Subquotient {
  std::vector<Int> carrier_mod;
  FinAbGroup group;  // canonical K/I
  IntMatrix k_basis;
  IntMatrix u, u_inv;      // SNF change of basis on K-coordinates
  std::vector<Int> sigma;  // all diagonal entries of the SNF
  std::vector<int> keep;   // positions with sigma != 1

  bool member(const std::vector<Int>& x) const;
  std::vector<Int> project(const std::vector<Int>& x) const;  // throws NoSolution
  std::vector<Int> lift(const std::vector<Int>& cls) const;
};

Subquotient make_subquotient(const std::vector<Int>& carrier_mod,
                             const IntMatrix& kernel_gens,
                             const IntMatrix& image_gens);

}  // namespace arithbf
