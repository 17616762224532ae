#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arithbf/quantum.hpp"
#include "arithbf/selmerctp.hpp"

namespace arithbf {

// Named verification suites over a fixture: each runs a family of exact
// identity checks and reports every comparison it made. Shared by the
// command-line driver and the acceptance tests so both observe the same
// computations.

// One exact check: a stable key, the outcome, and the values compared (or the
// failure witness).
struct CheckResult {
  std::string key;
  bool pass = true;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass() const;
};

// leibniz, decomposition, gluing, ctp-independence, ctp-kernels,
// ctp-equals-bf, onshell, tensor
const std::vector<std::string>& verify_suite_names();

// Runs one suite on a validated fixture. s/t restrict the cut pairs the
// decomposition and gluing suites range over (default: every nested pair of
// place subsets); resamples scales the seeded re-choice counts; the seed
// determines every random draw.
SuiteReport run_verify_suite(const FixtureContext& ctx, const std::string& which,
                             uint64_t seed = 0, int resamples = 10,
                             const std::optional<std::vector<int>>& s = std::nullopt,
                             const std::optional<std::vector<int>>& t = std::nullopt);

// The graded product rule d(a∪b) = da∪b + (−1)^p a∪db checked on seeded
// random cochain pairs over every group of order at most four. Fixture
// independent.
SuiteReport verify_leibniz(uint64_t seed = 0, int pairs = 500);

// The four Selmer groups cut out by the fixture's declared local conditions,
// together with the exactness comparison of the induced triple.
struct SelmerBundle {
  SelmerTriple triple;
  SelmerGroup on_m;       // conditions as declared, on the middle module
  SelmerGroup on_m1dual;  // dual of the kernel module, complement conditions
  SelmerGroup on_m2;      // quotient module, induced conditions
  SelmerGroup on_mdual;   // dual of the middle module, complement conditions
  ExactnessReport exactness;
};

SelmerBundle selmer_bundle(const FixtureContext& ctx);

// order of the image of the middle Selmer group in first cohomology of the
// quotient module
Int pushed_selmer_order(const FixtureContext& ctx, const SelmerGroup& on_m);

// Whether the declared local condition at each interior place induces exactly
// the unramified boundary pair (the hypothesis under which the pairing agrees
// with the closed action). One result per interior place.
std::vector<CheckResult> alignment_checks(const FixtureContext& ctx);

}  // namespace arithbf
