#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "arithbf/sitemodel.hpp"

namespace arithbf {

// Per-place constraint on local first cohomology of one fixture module.
// Places absent from the map impose nothing (equivalently: the full local
// group). Subgroups are stored in local class coordinates.
struct SelmerCondition {
  Mod module = Mod::M;
  std::map<int, Subgroup> local;
};

// the module paired with the given one under the evaluation duality
Mod dual_module(Mod m);

SelmerCondition full_condition(const FixtureContext& ctx, Mod module);
SelmerCondition zero_condition(const FixtureContext& ctx, Mod module);
// the condition on M shipped with the fixture
SelmerCondition fixture_condition(const FixtureContext& ctx);

// the local subgroup a condition imposes at one place (full when absent)
Subgroup condition_at(const FixtureContext& ctx, const SelmerCondition& c, int place);

// Global classes whose restriction lies in the condition at every place.
struct SelmerGroup {
  SelmerCondition condition;
  Subgroup group;                           // subgroup of the global class group
  std::vector<std::vector<Int>> elements;   // enumerated members, class coords
};
SelmerGroup selmer_group(const FixtureContext& ctx, const SelmerCondition& cond);

// Per-place annihilator of the condition under the local duality pairing;
// lives on the dual module. Throws DualityNotPerfect when the order count
// |W| * |W_perp| does not match the local group at some place.
SelmerCondition orthogonal_complement(const FixtureContext& ctx, const SelmerCondition& cond);

// Conditions on the three modules of the coefficient sequence.
struct SelmerTriple {
  SelmerCondition w1;  // on M1
  SelmerCondition w;   // on M
  SelmerCondition w2;  // on M2
};

// derives w1 as the local preimage of w and w2 as the local image of w
SelmerTriple induced_triple(const FixtureContext& ctx, const SelmerCondition& w);

struct ExactnessReport {
  bool pass = true;
  std::vector<std::string> witnesses;
};

// Verifies, place by place, that w1 is the preimage of w, that w2 is the
// image of w, and the mirrored statements for the complements on the dual
// sequence.
ExactnessReport check_selmer_exactness(const FixtureContext& ctx, const SelmerTriple& t);

// The pairing between a class rho1 (on the dual of M1, lying in the Selmer
// group of the complement of w1) and rho2 (on M2, lying in the Selmer group
// of w2). Built from a global primitive of the coupling obstruction and
// per-place comparison cocycles; the result is the sum of local invariants.
// seed = 0 uses canonical choices; other seeds redraw every choice family.
// Throws ObstructionNonzero when no global primitive exists and NoLocalLift
// when some place admits no lift of the restricted class inside w.
QmodZ cassels_tate_pairing(const FixtureContext& ctx, const SelmerTriple& t,
                           const std::vector<Int>& rho1, const std::vector<Int>& rho2,
                           uint64_t seed = 0);

// Full value table of the pairing over the two Selmer groups, its kernels on
// both sides, and the subgroups predicted for them: the image of the middle
// Selmer group on the quotient side, and the image of the dual middle Selmer
// group on the other.
struct CtpKernelReport {
  SelmerGroup sel_first;   // classes on the dual of M1 feeding the left slot
  SelmerGroup sel_second;  // classes on M2 feeding the right slot
  std::vector<std::vector<QmodZ>> table;  // [first index][second index]
  Subgroup kernel_first, kernel_second;   // computed from the table
  Subgroup expected_first, expected_second;
  bool pass = false;
  std::vector<std::string> witnesses;
};
CtpKernelReport ctp_kernels(const FixtureContext& ctx, const SelmerTriple& t);

}  // namespace arithbf
