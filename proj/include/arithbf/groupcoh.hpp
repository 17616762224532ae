#pragma once

// Group cohomology of finite groups with coefficients in finite abelian
// modules, in the inhomogeneous cochain model. All linear algebra runs on
// the normalized subcomplex (cochains vanishing whenever an argument is the
// identity), which computes the same cohomology and keeps systems small.

#include <optional>
#include <vector>

#include "arithbf/errors.hpp"
#include "arithbf/exactalg.hpp"

namespace arithbf {

// Finite group as a multiplication table; element 0 is the identity.
struct FiniteGroup {
  int n = 1;
  std::vector<int> table;  // table[g*n + h] = g*h

  int mul(int g, int h) const { return table[g * n + h]; }
  int inv(int g) const;
  bool valid() const;
  bool is_abelian() const;

  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

  // sorted element list of the subgroup generated by gens
  std::vector<int> subgroup_closure(const std::vector<int>& gens) const;
};

// quotient of g by the (normal) subgroup with the given sorted element list;
// proj maps each element of g to its coset index, with proj[0] = 0
FiniteGroup quotient_group(const FiniteGroup& g, const std::vector<int>& normal_elems,
                           std::vector<int>& proj);

// Finite abelian group with an action of gamma by automorphisms.
struct GModule {
  FiniteGroup gamma;
  FinAbGroup grp;
  std::vector<IntMatrix> act;  // one matrix per element; act[0] = identity

  std::vector<Int> apply(int g, const std::vector<Int>& x) const {
    return grp.reduce(act[g].apply(x));
  }
  bool valid() const;

  static GModule trivial(const FiniteGroup& gamma, const FinAbGroup& grp);
};

// module with the same coefficients restricted to the subgroup listed by
// elems (sorted, closed under multiplication)
GModule restrict_module(const GModule& m, const std::vector<int>& elems);

// pull a module on a quotient group back along proj
GModule inflate_module(const GModule& mq, const FiniteGroup& g, const std::vector<int>& proj);

// invariant elements under the listed group elements, as a subgroup of m.grp
Subgroup invariants(const GModule& m, const std::vector<int>& elems);

// Gamma-equivariant bilinear pairing left x right -> out.
// bilin has out.dim rows and left.dim*right.dim columns; column i*rdim + j
// holds the value of (e_i, e_j).
struct Pairing {
  GModule left, right, out;
  IntMatrix bilin;

  std::vector<Int> eval(const std::vector<Int>& x, const std::vector<Int>& y) const;
  bool equivariant() const;
};

// Inhomogeneous p-cochain: map gamma^p -> module, stored densely in lex order.
struct Cochain {
  GModule mod;
  int degree = 0;
  std::vector<std::vector<Int>> vals;  // n^degree entries, reduced

  static Cochain zero(const GModule& m, int degree);

  int points() const { return int(vals.size()); }
  const std::vector<Int>& at(const std::vector<int>& tuple) const;
  void set(const std::vector<int>& tuple, std::vector<Int> v);
  bool is_zero() const;
  bool is_normalized() const;  // vanishes whenever an argument is identity
};

Cochain cochain_add(const Cochain& a, const Cochain& b);
Cochain cochain_sub(const Cochain& a, const Cochain& b);
Cochain cochain_neg(const Cochain& a);

Cochain differential(const Cochain& c);
Cochain cup(const Cochain& a, const Cochain& b, const Pairing& p);

Cochain restrict_cochain(const Cochain& c, const std::vector<int>& elems);
Cochain inflate_cochain(const Cochain& cq, const FiniteGroup& g, const std::vector<int>& proj);

// apply an equivariant coefficient map entrywise
Cochain map_coefficients(const GroupHom& h, const GModule& dst_mod, const Cochain& c);

// Coordinates for normalized p-cochains: (n-1)^p blocks of module coordinates.
struct CochainSpace {
  GModule mod;
  int degree = 0;
  int points = 1;  // (n-1)^degree
  std::vector<Int> carrier;

  CochainSpace() = default;
  CochainSpace(const GModule& m, int degree);
  std::vector<Int> to_vec(const Cochain& c) const;  // requires normalized c
  Cochain from_vec(const std::vector<Int>& v) const;
};

// matrix of the differential on normalized cochains, degree p -> p+1
IntMatrix differential_matrix(const GModule& m, int p);

// Cohomology in degree p as a subquotient of normalized cochains.
struct Cohomology {
  CochainSpace space;
  Subquotient classes;

  const FinAbGroup& group() const { return classes.group; }
  bool is_cocycle(const Cochain& c) const;
  std::vector<Int> project(const Cochain& c) const;  // throws NotACocycle
  Cochain representative(const std::vector<Int>& cls) const;
};

Cohomology cohomology(const GModule& m, int p);

// normalized phi with d(phi) = rhs, or nullopt when rhs is not a coboundary;
// deterministic in rhs
std::optional<Cochain> solve_differential(const Cochain& rhs);

// Short exact sequence of modules over a common group, with equivariant
// injection iota and surjection pi given on coordinates.
struct ModuleTriple {
  GModule sub, mid, quo;
  IntMatrix iota, pi;

  bool valid() const;
  std::vector<Int> apply_iota(const std::vector<Int>& x) const;
  std::vector<Int> apply_pi(const std::vector<Int>& x) const;
  // unique x with iota(x) = v; throws LiftOutsideKernel when v is not in the image
  std::vector<Int> iota_preimage(const std::vector<Int>& v) const;
};

ModuleTriple restrict_triple(const ModuleTriple& t, const std::vector<int>& elems);

// entrywise preimage under iota of a mid-valued cochain whose values all lie
// in iota(sub); throws LiftOutsideKernel otherwise
Cochain iota_preimage_cochain(const ModuleTriple& t, const Cochain& c);

// Set-theoretic section of pi with sigma(0) = 0, tabulated over quo elements.
struct SetSection {
  FinAbGroup quo;
  std::vector<std::vector<Int>> vals;  // indexed in quo element lex order

  std::vector<Int> apply(const std::vector<Int>& m2) const;
};

// lex-least preimage section
SetSection canonical_section(const ModuleTriple& t);
// canonical section shifted by seeded kernel elements, still sending 0 to 0
SetSection randomized_section(const ModuleTriple& t, uint64_t seed);
// verify pi(sigma(x)) = x for all x
bool section_valid(const ModuleTriple& t, const SetSection& s);

// entrywise sigma(c) for a quo-valued cochain, as a mid-valued cochain
Cochain compose_section(const ModuleTriple& t, const SetSection& s, const Cochain& c);

// sub-valued representative iota^{-1}(d(sigma(z))) of the connecting image of
// a quo-valued cocycle z
Cochain connecting_rep(const ModuleTriple& t, const SetSection& s, const Cochain& z);

}  // namespace arithbf
