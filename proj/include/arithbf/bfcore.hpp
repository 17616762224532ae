#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "arithbf/sitemodel.hpp"

namespace arithbf {

// Field configurations, the boundary-anchored line bundle, and the closed
// invariant built from a connection 2-cochain and its unramified comparison
// data. Values live in (1/N)Z/Z throughout.

//=== spaces of fields ========================================================

// One field configuration: a pair of global degree-one classes together with
// its restriction to every declared place.
struct FieldPoint {
  std::vector<Int> cls1;  // class coords in H¹(Γ, M₁^∨)
  std::vector<Int> cls2;  // class coords in H¹(Γ, M₂)
  // per place: restricted class coords in H¹(Γ_x, M₁^∨) x H¹(Γ_x, M₂)
  std::vector<std::pair<std::vector<Int>, std::vector<Int>>> profile;
};

FieldPoint field_point(const FixtureContext& ctx, std::vector<Int> cls1, std::vector<Int> cls2);

// All fields whose local profiles satisfy the boundary constraints of the cut
// along s_places: declared conditions at the cut places, unramified classes at
// interior places, and vanishing at the remaining places.
struct FieldsSpace {
  std::vector<int> s;                // cut places, sorted fixture indices
  FinAbGroup ambient;                // H¹(Γ,M₁^∨) x H¹(Γ,M₂), concatenated coords
  Subgroup sub;                      // the admissible subgroup of ambient
  std::vector<FieldPoint> elements;  // enumerated in ambient lex order
};

FieldsSpace space_of_fields(const FixtureContext& ctx, const std::vector<int>& s_places);

// flattened local profile of a field over the given places, usable as a fiber key
std::vector<Int> boundary_key(const std::vector<int>& s_places, const FieldPoint& rho);

//=== torsor points and sections ==============================================

// A point of the boundary line over a tuple of local profiles: per cut place,
// a connection 2-cochain together with the representative data it solves
// against. Two points over the same profile differ by 2-cocycles; their
// separation is measured by local invariants after transporting to a common
// representative datum.
struct TorsorPoint {
  std::vector<int> s;  // places, sorted fixture indices
  // parallel arrays over s:
  std::vector<std::vector<Int>> cls1, cls2;  // local profile class coords
  std::vector<Cochain> a1;                   // 1-cocycle reps, M₁^∨ over Γ_x
  std::vector<Cochain> a2;                   // 1-cocycle reps, M₂ over Γ_x
  std::vector<SetSection> sigma;             // section of pi used at this place
  std::vector<Cochain> phi;                  // 2-cochains in D over Γ_x
};

// merge single-place or disjoint multi-place points into one point
TorsorPoint combine(const std::vector<TorsorPoint>& parts);

// translate the component at position idx (into p.s) by a 2-cocycle in D
TorsorPoint translate(const TorsorPoint& p, int idx, const Cochain& z);

// A chosen base point of the boundary line over every admissible profile,
// keyed by flattened profile coordinates.
struct SectionXi {
  std::vector<int> s;
  std::map<std::vector<Int>, TorsorPoint> points;
};

// canonical section: lex-least representatives, the canonical global section
// of pi, lex-least connection solve per profile
SectionXi default_xi(const FixtureContext& ctx, const std::vector<int>& s_places);
// seeded re-choice of every family entering the section
SectionXi random_xi(const FixtureContext& ctx, const std::vector<int>& s_places, uint64_t seed);
// section over a disjoint union of cuts, composing fibers placewise
SectionXi boxplus(const SectionXi& a, const SectionXi& b);

enum class Orientation { standard, reversed };

// coordinate of a point against the section through its fiber: the sum over
// places of inv_x of the transported difference; reversed orientation negates
QmodZ trivialize(const FixtureContext& ctx, const SectionXi& xi, const TorsorPoint& p,
                 Orientation o = Orientation::standard);

//=== transport between representative data ===================================

// 2-cochain in D correcting a connection when the representative datum moves
// from (a1, a2, sigma) to (a1 + d g1, a2 + d g2, tau): the corrected cochain
// solves the moved equation exactly, vanishes for the identity move, and is
// additive across composed moves up to 2-coboundaries.
Cochain theta_action(const ModuleTriple& t, const Pairing& ev1, const SetSection& sigma,
                     const SetSection& tau, const std::vector<Int>& g1, const std::vector<Int>& g2,
                     const Cochain& a1, const Cochain& a2);

//=== the invariant and its boundary values ===================================

// Point of the boundary line over the cut s_places attached to a field: solve
// d phi = a1 cup iota^{-1} d(sigma a2) globally and restrict to the cut.
// seed 0 picks every choice canonically; nonzero seeds re-choose the
// representatives, the section, and the connection within their freedom.
// Throws ObstructionNonzero when no global connection exists.
TorsorPoint global_bf(const FixtureContext& ctx, const std::vector<int>& s_places,
                      const FieldPoint& rho, uint64_t seed = 0);

// Point over a single place built from an unramified datum: solve at the
// quotient level with unramified coefficients, then inflate.
TorsorPoint local_bf_unramified(const FixtureContext& ctx, int place,
                                const std::vector<Int>& fnr_elem, uint64_t seed = 0);

// closed invariant of a field on the uncut space: sum over all declared
// places of inv_x(restricted connection - unramified comparison point)
QmodZ bf_closed(const FixtureContext& ctx, const FieldPoint& rho, uint64_t seed = 0);

// combined unramified point over the given places at the profiles of rho,
// lifting each profile through the unramified inclusion (lex-least preimage);
// throws NoLocalLift when a profile is not unramified
TorsorPoint unramified_profile_point(const FixtureContext& ctx, const std::vector<int>& places,
                                     const FieldPoint& rho, uint64_t seed = 0);

//=== cutting and gluing ======================================================

struct DecompositionReport {
  bool pass = false;
  std::vector<std::string> mismatches;
  std::string note;
};

// Check, for every field admissible for the cut along S, that the invariant
// over the larger cut T splits as the invariant over S plus the unramified
// contribution over T minus S, in the coordinates given by the sections. An
// empty S compares against the closed invariant.
DecompositionReport verify_decomposition(const FixtureContext& ctx, const std::vector<int>& s_places,
                                         const std::vector<int>& t_places, const SectionXi& xi_s,
                                         const SectionXi& xi_ts);

}  // namespace arithbf
