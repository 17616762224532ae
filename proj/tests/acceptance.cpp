// Acceptance battery: drives the library end to end on the shipped fixtures
// and prints one pass/fail line per criterion. Exits nonzero if any fails.
//
// usage: acceptance <fixtures-dir> <driver-binary>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "arithbf/bfcore.hpp"
#include "arithbf/selmerctp.hpp"
#include "arithbf/sitemodel.hpp"
#include "arithbf/verify.hpp"
#include "json.hpp"
#include "oracle_cohomology.hpp"

using namespace arithbf;
using nlohmann::json;

#define EXPECT(cond, ...)                \
  do {                                   \
    if (!(cond)) {                       \
      std::printf("      fault: ");      \
      std::printf(__VA_ARGS__);          \
      std::printf("\n");                 \
      return false;                      \
    }                                    \
  } while (0)

namespace {

std::string g_dir, g_bin;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

//=== criterion 1: cup-product boundary rule ==================================

bool crit_leibniz() {
  SuiteReport r = verify_leibniz(0, 500);
  for (const CheckResult& c : r.checks)
    EXPECT(c.pass, "%s -- %s", c.key.c_str(), c.detail.c_str());
  return true;
}

//=== criterion 2: cohomology vs exhaustive enumeration =======================

oracle::TinyModule to_tiny(const GModule& m) {
  oracle::TinyModule t;
  t.n = m.gamma.n;
  t.table = m.gamma.table;
  for (const Int& v : m.grp.mod) t.mod.push_back(int(v.get_si()));
  for (const IntMatrix& a : m.act) {
    std::vector<int> flat;
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < a.cols; ++j) {
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), a.at(i, j).get_mpz_t(), m.grp.mod[i].get_mpz_t());
        flat.push_back(int(r.get_si()));
      }
    t.act.push_back(flat);
  }
  return t;
}

// every matrix with canonical entries, row i taken mod the i-th factor
std::vector<IntMatrix> matrix_pool(const FinAbGroup& a) {
  int d = a.dim();
  std::vector<long> caps(d * d, 1);
  long total = 1;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      caps[i * d + j] = a.mod[i].get_si();
      total *= caps[i * d + j];
    }
  std::vector<IntMatrix> out;
  for (long code = 0; code < total; ++code) {
    IntMatrix m(d, d);
    long rem = code;
    for (int k = d * d - 1; k >= 0; --k) {
      m.at(k / d, k % d) = Int(rem % caps[k]);
      rem /= caps[k];
    }
    out.push_back(m);
  }
  return out;
}

// every module structure of gamma on a, by brute assignment of one matrix per
// nonidentity element
std::vector<GModule> all_modules(const FiniteGroup& gamma, const FinAbGroup& a) {
  std::vector<IntMatrix> pool = matrix_pool(a);
  int k = gamma.n - 1;
  std::vector<size_t> pick(k, 0);
  std::vector<GModule> out;
  while (true) {
    GModule m;
    m.gamma = gamma;
    m.grp = a;
    m.act.push_back(IntMatrix::identity(a.dim()));
    for (int i = 0; i < k; ++i) m.act.push_back(pool[pick[i]]);
    if (m.valid()) out.push_back(m);
    int i = 0;
    for (; i < k; ++i) {
      if (++pick[i] < pool.size()) break;
      pick[i] = 0;
    }
    if (i == k) break;
  }
  return out;
}

bool crit_cohomology_oracle() {
  std::vector<FiniteGroup> groups = {FiniteGroup::trivial(), FiniteGroup::cyclic(2),
                                     FiniteGroup::cyclic(3)};
  std::vector<FinAbGroup> coeffs = {FinAbGroup{{}},
                                    FinAbGroup{{Int(2)}},
                                    FinAbGroup{{Int(3)}},
                                    FinAbGroup{{Int(4)}},
                                    FinAbGroup{{Int(2), Int(2)}}};
  long structures = 0;
  for (const FiniteGroup& g : groups)
    for (const FinAbGroup& a : coeffs)
      for (const GModule& m : all_modules(g, a)) {
        ++structures;
        oracle::TinyModule t = to_tiny(m);
        for (int p = 0; p <= 2; ++p) {
          oracle::Counts want = oracle::enumerate_cohomology(t, p);
          Int got = cohomology(m, p).group().order();
          EXPECT(got == Int(long(want.classes)),
                 "group %d, coeff dim %d, degree %d: rank %s vs enumerated %lld", g.n, a.dim(), p,
                 got.get_str().c_str(), want.classes);
        }
      }
  EXPECT(structures == 22, "expected 22 module structures, enumerated %ld", structures);
  return true;
}

//=== criterion 3: axiom battery with fault injection =========================

bool crit_axioms() {
  for (const char* name : {"f1_trivial.json", "f2_cyclic_ramified.json"}) {
    ValidationReport r = validate_fixture(parse_fixture(slurp(g_dir + "/" + name)));
    EXPECT(r.axioms.size() == 14, "%s: expected 14 axiom checks, got %zu", name, r.axioms.size());
    for (const AxiomResult& a : r.axioms)
      EXPECT(a.pass, "%s: axiom %s failed: %s", name, a.key.c_str(), a.witness.c_str());
  }

  // one targeted corruption per axiom; each must make exactly its own checker
  // report the fault (other checkers may legitimately fail alongside)
  json modules_nonsplit = json::parse(R"({
    "M1": {"invariant_factors": [2], "action": [[[1]],[[1]],[[1]],[[1]]]},
    "M":  {"invariant_factors": [4], "action": [[[1]],[[1]],[[1]],[[1]]]},
    "M2": {"invariant_factors": [2], "action": [[[1]],[[1]],[[1]],[[1]]]},
    "D":  {"invariant_factors": [2], "action": [[[1]],[[1]],[[1]],[[1]]]}
  })");
  auto swap_to_nonsplit = [&](json& j) {
    j["modules"] = modules_nonsplit;
    j["maps"] = json::parse(R"({"iota": [[2]], "pi": [[1]]})");
    for (auto& [k, v] : j["boundary_conditions"].items())
      v = json::parse(R"({"m1dual": [], "m2": []})");
    for (auto& [k, v] : j["selmer_W"].items()) v = json::array();
    j["places"][1]["dualizing_unramified"] = json::array();
  };

  std::vector<std::pair<std::string, std::function<void(json&)>>> menu = {
      {"01_group_axioms", [](json& j) { j["global_group"]["mul_table"][1] = 0; }},
      {"02_action_compatibility",
       [](json& j) { j["modules"]["M1"]["action"][1] = json::parse("[[0,0],[0,0]]"); }},
      {"03_triple_exactness",
       [](json& j) { j["maps"]["iota"] = json::parse("[[0,0],[0,0],[0,0]]"); }},
      {"04_modulus_exponents", [](json& j) { j["modulus"] = 3; }},
      {"05_inv_injective", [](json& j) { j["places"][0]["inv_on_h2"] = json::parse("[[0]]"); }},
      {"06_unramified_vanishing",
       [](json& j) { j["places"][1]["dualizing_unramified"] = json::parse("[[1]]"); }},
      {"07_evaluation_unramified", [](json& j) { j["places"][0]["in_Y"] = true; }},
      {"08_local_duality",
       [](json& j) { j["modules"]["D"]["action"] = json::parse("[[[1]],[[1]],[[3]],[[3]]]"); }},
      {"09_reciprocity",
       [](json& j) {
         j["places"].erase(1);
         j["boundary_conditions"].erase("v2");
         j["selmer_W"].erase("v2");
       }},
      {"10_bc_unramified",
       [](json& j) {
         j["places"][0]["in_Y"] = true;
         j["boundary_conditions"]["v1"]["m2"] = json::array();
       }},
      {"11_local_conditions",
       [](json& j) { j["selmer_W"]["v1"] = json::parse("[[[0,0,0],[1,0,0]]]"); }},
      {"12_dual_exactness", swap_to_nonsplit},
      {"13_double_dual", swap_to_nonsplit},
      {"14_pi_invariants_surjective",
       [](json& j) {
         j["maps"]["iota"] = json::parse("[[0,0],[0,0],[0,0]]");
         j["modules"]["M"]["action"] = json::parse(
             "[[[1,0,0],[0,1,0],[0,0,1]],[[1,0,1],[0,1,0],[0,0,1]],"
             "[[1,0,0],[0,1,0],[0,0,1]],[[1,0,1],[0,1,0],[0,0,1]]]");
         j["selmer_W"]["v1"] = json::array();
       }},
  };

  json base = json::parse(slurp(g_dir + "/f2_cyclic_ramified.json"));
  EXPECT(menu.size() == 14, "fault menu does not cover all 14 axioms");
  for (auto& [key, corrupt] : menu) {
    json j = base;
    corrupt(j);
    ValidationReport r = validate_fixture(parse_fixture(j.dump()));
    const AxiomResult* a = r.find(key);
    EXPECT(a != nullptr, "%s: axiom missing from the report", key.c_str());
    EXPECT(!a->pass, "%s: fault injection was not detected", key.c_str());
  }
  return true;
}

//=== criterion 4: invariance under re-chosen internal data ===================

constexpr int kResamples = 10;

bool crit_rechoice(const FixtureContext& ctx) {
  // closed invariant of every field
  for (const FieldPoint& rho : space_of_fields(ctx, {}).elements) {
    QmodZ v0 = bf_closed(ctx, rho, 0);
    for (uint64_t k = 1; k <= kResamples; ++k)
      EXPECT(bf_closed(ctx, rho, k) == v0, "closed value moved under seed %llu",
             (unsigned long long)k);
  }

  // relative invariant over every nonempty cut, in fixed section coordinates
  int n = int(ctx.fixture().places.size());
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.push_back(i);
    SectionXi xi = default_xi(ctx, s);
    for (const FieldPoint& rho : space_of_fields(ctx, s).elements) {
      QmodZ v0 = trivialize(ctx, xi, global_bf(ctx, s, rho, 0));
      for (uint64_t k = 1; k <= kResamples; ++k)
        EXPECT(trivialize(ctx, xi, global_bf(ctx, s, rho, k)) == v0,
               "relative value moved under seed %llu (cut mask %d)", (unsigned long long)k, mask);
    }
  }

  // unramified local points over each place, per profile element
  for (int i = 0; i < n; ++i) {
    SectionXi xi = default_xi(ctx, {i});
    for (const std::vector<Int>& e : ctx.place(i).ur.fnr.elements()) {
      QmodZ v0 = trivialize(ctx, xi, local_bf_unramified(ctx, i, e, 0));
      for (uint64_t k = 1; k <= kResamples; ++k)
        EXPECT(trivialize(ctx, xi, local_bf_unramified(ctx, i, e, k)) == v0,
               "local unramified value moved under seed %llu (place %d)", (unsigned long long)k,
               i);
    }
  }

  // the pairing on every class pair
  SelmerBundle b = selmer_bundle(ctx);
  for (const std::vector<Int>& r1 : b.on_m1dual.elements)
    for (const std::vector<Int>& r2 : b.on_m2.elements) {
      QmodZ v0 = cassels_tate_pairing(ctx, b.triple, r1, r2, 0);
      for (uint64_t k = 1; k <= kResamples; ++k)
        EXPECT(cassels_tate_pairing(ctx, b.triple, r1, r2, k) == v0,
               "pairing value moved under seed %llu", (unsigned long long)k);
    }
  return true;
}

//=== criteria 5-9: shared verification suites ================================

bool run_suite(const FixtureContext& ctx, const std::string& which, size_t min_checks) {
  SuiteReport r = run_verify_suite(ctx, which);
  EXPECT(r.checks.size() >= min_checks, "%s: expected at least %zu checks, ran %zu", which.c_str(),
         min_checks, r.checks.size());
  for (const CheckResult& c : r.checks)
    EXPECT(c.pass, "%s: %s -- %s", which.c_str(), c.key.c_str(), c.detail.c_str());
  return true;
}

//=== criterion 10: driver determinism ========================================

bool run_capture(const std::string& cmd, std::string& out) {
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return false;
  char buf[4096];
  size_t got;
  out.clear();
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  return pclose(pipe) == 0;
}

bool crit_deterministic_reports() {
  for (const std::string& which : verify_suite_names()) {
    std::string cmd =
        g_bin + " verify " + which + " --fixture " + g_dir + "/f2_cyclic_ramified.json --seed 0";
    std::string first, second;
    EXPECT(run_capture(cmd, first), "%s: driver run failed", which.c_str());
    EXPECT(run_capture(cmd, second), "%s: second driver run failed", which.c_str());
    EXPECT(!first.empty(), "%s: empty report", which.c_str());
    EXPECT(first == second, "%s: reports differ between runs", which.c_str());
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <fixtures-dir> <driver-binary>\n");
    return 2;
  }
  g_dir = argv[1];
  g_bin = argv[2];

  SiteFixture f2 = parse_fixture(slurp(g_dir + "/f2_cyclic_ramified.json"));
  FixtureContext ctx(f2);

  struct Row {
    const char* label;
    double budget;
    std::function<bool()> fn;
  };
  std::vector<Row> rows = {
      {"cup-product boundary rule on seeded cochain pairs", 5.0, crit_leibniz},
      {"cohomology ranks against exhaustive enumeration", 10.0, crit_cohomology_oracle},
      {"fixture axiom battery with per-axiom fault injection", 10.0, crit_axioms},
      {"invariants stable under re-chosen internal data", 30.0, [&] { return crit_rechoice(ctx); }},
      {"cut additivity of the relative invariant", 30.0,
       [&] { return run_suite(ctx, "decomposition", 27); }},
      {"boundary gluing of partition values", 30.0, [&] { return run_suite(ctx, "gluing", 27); }},
      {"pairing kernels match predicted subgroups", 60.0,
       [&] { return run_suite(ctx, "ctp-kernels", 2); }},
      {"pairing agrees with the field invariant", 30.0,
       [&] { return run_suite(ctx, "ctp-equals-bf", 3); }},
      {"closed partition value counts Selmer classes", 30.0,
       [&] { return run_suite(ctx, "onshell", 2); }},
      {"driver reports are deterministic", 120.0, crit_deterministic_reports},
  };

  int failures = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = rows[i].fn();
    } catch (const std::exception& e) {
      std::printf("      fault: unexpected exception: %s\n", e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > rows[i].budget) {
      std::printf("      fault: took %.2fs, budget %.0fs\n", secs, rows[i].budget);
      ok = false;
    }
    if (!ok) ++failures;
    std::printf("%s  %2zu  %-55s %7.2fs\n", ok ? "pass" : "FAIL", i + 1, rows[i].label, secs);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
