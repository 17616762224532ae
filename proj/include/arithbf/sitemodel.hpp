#pragma once

// Finite arithmetic site fixtures: a global group with a short exact triple
// of modules, a dualizing module, and a finite set of places carrying
// decomposition/inertia subgroups, local invariant maps, local duality, and
// declared boundary/Selmer conditions.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arithbf/groupcoh.hpp"

namespace arithbf {

//=== exact values in Q/Z =====================================================

struct QmodZ {
  Int num = 0;
  Int den = 1;  // 0 <= num < den, gcd(num, den) = 1

  static QmodZ of(const Int& num, const Int& den);
  QmodZ add(const QmodZ& o) const;
  QmodZ sub(const QmodZ& o) const;
  QmodZ neg() const;
  QmodZ times(const Int& k) const;
  bool is_zero() const { return num == 0; }
  bool operator==(const QmodZ& o) const { return num == o.num && den == o.den; }
  bool operator<(const QmodZ& o) const;  // by value in [0,1)
  std::string str() const;
};

//=== fixture data ============================================================

struct PlaceData {
  std::string id;
  std::vector<int> subgroup;  // sorted element list, closed under the product
  std::vector<int> inertia;   // sorted, normal in subgroup
  bool in_y = false;
  std::vector<std::vector<Int>> dualizing_unramified;  // generators in D coords
  IntMatrix inv_on_h2;  // 1 x dim H²(subgroup, D), values in Z/N
};

// a 1-cochain over a place subgroup, one module element per subgroup element
// (in sorted-subgroup order)
using CochainTable = std::vector<std::vector<Int>>;

struct LocalConditions {
  std::vector<CochainTable> m1dual;  // generators in H¹(Γ_x, M₁^∨)
  std::vector<CochainTable> m2;      // generators in H¹(Γ_x, M₂)
};

struct SiteFixture {
  std::string name;
  Int modulus = 1;
  FiniteGroup gamma;
  GModule m1, m, m2, dualizing;
  IntMatrix iota, pi;
  std::vector<PlaceData> places;
  std::map<std::string, LocalConditions> boundary_conditions;
  std::map<std::string, std::vector<CochainTable>> selmer_w;
  std::string digest;  // content hash of the source file, set by the loader

  ModuleTriple triple() const { return ModuleTriple{m1, m, m2, iota, pi}; }
  int place_index(const std::string& id) const;  // -1 if absent
};

SiteFixture parse_fixture(const std::string& json_text);
SiteFixture load_fixture(const std::string& path);
std::string fixture_digest(const std::string& bytes);  // FNV-1a, hex

//=== dual modules ============================================================

// Hom(A, D) with the conjugation action, together with the evaluation pairing
// Hom(A,D) x A -> D. Basis: phi_{i,j} sends the i-th generator of A to
// (d_j / gcd(a_i, d_j)) times the j-th generator of D; coordinate (i,j) has
// modulus gcd(a_i, d_j) and index i*dim(D)+j.
struct DualData {
  GModule mod;
  Pairing eval;  // left = dual, right = A, out = D
};

DualData dual_module(const GModule& a, const GModule& d);

// coordinates of a homomorphism A -> D (given as a matrix) in the dual basis
std::vector<Int> hom_to_dual_coords(const GModule& a, const GModule& d, const IntMatrix& w);

// dual of an equivariant map f: A -> B, as (B^dual -> A^dual)
IntMatrix dual_hom(const GModule& a, const GModule& b, const GModule& d, const IntMatrix& f);

// the canonical map A -> (A^dual)^dual; iso iff duality is perfect enough
IntMatrix double_dual_map(const GModule& a, const GModule& d);

Pairing restrict_pairing(const Pairing& p, const std::vector<int>& elems);

//=== normalization ===========================================================

// 2-cocycle cohomologous to c vanishing whenever an argument is the identity
Cochain normalize_cocycle2(const Cochain& c);

//=== validation ==============================================================

struct AxiomResult {
  std::string key;
  bool pass = false;
  std::string witness;  // failure description, or skip notes on a passing check
};

struct ValidationReport {
  std::vector<AxiomResult> axioms;  // sorted by key
  bool all_pass() const;
  const AxiomResult* find(const std::string& key) const;
};

ValidationReport validate_fixture(const SiteFixture& f);

//=== computed per-place and global context ==================================

enum class Mod { M1, M, M2, M1d, Md, M2d };

struct UnramifiedSpace {
  FiniteGroup qx;          // decomposition / inertia (local element indices)
  std::vector<int> proj;   // local element -> qx element
  GModule m1d_inv, mpi_inv, m1_inv, m_inv, dur;  // qx-modules on subgroup coords
  Subgroup m1d_inv_sub, mpi_inv_sub, m1_inv_sub, m_inv_sub, dur_sub;  // in ambient coords
  Cohomology h1_first, h1_second;  // H¹(qx, (M₁^∨)^I), H¹(qx, π(M^I))
  FinAbGroup fnr;                  // product of the two H¹ groups
  GroupHom to_fx;                  // fnr -> H¹(Γ_x,M₁^∨) x H¹(Γ_x,M₂) class coords
};

struct PlaceContext {
  PlaceData data;
  GModule m1, m, m2, d, m1d, md, m2d;  // modules over the place subgroup
  ModuleTriple triple;                  // local (M1, M, M2)
  Pairing ev_m1, ev_m, ev_m2;           // local evaluation pairings
  Cohomology h1_m1, h1_m, h1_m2, h1_m1d, h1_md, h1_m2d, h2_d;
  UnramifiedSpace ur;
  Subgroup bc1, bc2;  // boundary conditions, class coords in h1_m1d / h1_m2
  Subgroup w;         // Selmer condition on M, class coords in h1_m

  const Cohomology& h1(Mod which) const;
  const GModule& module(Mod which) const;
};

class FixtureContext {
 public:
  explicit FixtureContext(SiteFixture f);

  const SiteFixture& fixture() const { return fx_; }
  const FiniteGroup& gamma() const { return fx_.gamma; }
  Int modulus() const { return fx_.modulus; }

  const GModule& module(Mod which) const;
  const ModuleTriple& triple() const { return triple_; }
  const ModuleTriple& dual_triple() const { return dual_triple_; }
  const Pairing& ev(Mod primal) const;  // evaluation pairing A^dual x A -> D for A in {M1,M,M2}
  const Cohomology& h1(Mod which) const;
  const SetSection& sigma() const { return sigma_; }

  int place_count() const { return int(places_.size()); }
  const PlaceContext& place(int i) const { return places_[i]; }
  const PlaceContext& place(const std::string& id) const;

  // section of the local pi preferring inertia-invariant lifts, for place i
  const SetSection& sigma_unramified(int i) const { return sigma_ur_[i]; }

  // restriction of a global class to place i, in local class coordinates
  std::vector<Int> restrict_class(Mod which, const std::vector<Int>& cls, int i) const;

 private:
  SiteFixture fx_;
  GModule m1d_, md_, m2d_;
  ModuleTriple triple_, dual_triple_;
  Pairing ev_m1_, ev_m_, ev_m2_;
  Cohomology g_h1_m1_, g_h1_m_, g_h1_m2_, g_h1_m1d_, g_h1_md_, g_h1_m2d_;
  SetSection sigma_;
  std::vector<PlaceContext> places_;
  std::vector<SetSection> sigma_ur_;
};

//=== local invariants and duality ============================================

// value of the place's invariant map on the class of a 2-cocycle over the
// place subgroup with coefficients in D
QmodZ local_invariant(const FixtureContext& ctx, int place, const Cochain& c);

// inv_x of the cup of H¹ classes of A^dual and A (class coordinates)
QmodZ local_tate_pairing(const FixtureContext& ctx, int place, Mod primal,
                         const std::vector<Int>& dual_cls, const std::vector<Int>& primal_cls);

// the unramified layer of a place (also cached in PlaceContext::ur)
UnramifiedSpace unramified_field_space(const SiteFixture& f, int place);

}  // namespace arithbf
