// Command-line driver: loads a fixture, runs one computation or verification
// command, and prints a deterministic machine-readable report on stdout.
// Exit codes: 0 all checks pass, 1 a check failed, 2 input or validation
// error, 3 nonvanishing obstruction class.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arithbf/bfcore.hpp"
#include "arithbf/errors.hpp"
#include "arithbf/quantum.hpp"
#include "arithbf/selmerctp.hpp"
#include "arithbf/sitemodel.hpp"
#include "arithbf/verify.hpp"
#include "json.hpp"

using namespace arithbf;
using ordered_json = nlohmann::ordered_json;

namespace {

struct Config {
  std::string fixture_path;
  uint64_t seed = 0;
  int resamples = 10;
  std::string format = "json";
  std::vector<std::string> sets;  // raw S=v1,v2 / T=... options
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open fixture file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json coords_json(const std::vector<Int>& v) {
  ordered_json a = ordered_json::array();
  for (const Int& x : v) a.push_back(x.get_si());
  return a;
}

ordered_json table_json(const Cochain& c) {
  ordered_json t = ordered_json::array();
  for (const auto& v : c.vals) t.push_back(coords_json(v));
  return t;
}

ordered_json checks_json(const std::vector<CheckResult>& checks) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json o;
    o["key"] = c.key;
    o["pass"] = c.pass;
    o["detail"] = c.detail;
    arr.push_back(o);
  }
  return arr;
}

int place_index(const FixtureContext& ctx, const std::string& id) {
  for (int i = 0; i < ctx.place_count(); ++i)
    if (ctx.place(i).data.id == id) return i;
  throw std::invalid_argument("unknown place id: " + id);
}

// parses the raw --set options into sorted place index lists
std::map<std::string, std::vector<int>> parse_sets(const FixtureContext& ctx,
                                                   const std::vector<std::string>& sets) {
  std::map<std::string, std::vector<int>> out;
  for (const std::string& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects NAME=ids: " + s);
    std::string name = s.substr(0, eq);
    if (name != "S" && name != "T") throw std::invalid_argument("--set name must be S or T");
    std::vector<int> idx;
    std::string rest = s.substr(eq + 1);
    std::stringstream ss(rest);
    std::string id;
    while (std::getline(ss, id, ','))
      if (!id.empty()) idx.push_back(place_index(ctx, id));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    out[name] = idx;
  }
  return out;
}

ordered_json places_json(const FixtureContext& ctx, const std::vector<int>& idx) {
  ordered_json a = ordered_json::array();
  for (int i : idx) a.push_back(ctx.place(i).data.id);
  return a;
}

// module selector shared by the cohomology command and the bindings
GModule select_module(const FixtureContext& ctx, const std::string& name) {
  if (name == "M1") return ctx.module(Mod::M1);
  if (name == "M") return ctx.module(Mod::M);
  if (name == "M2") return ctx.module(Mod::M2);
  if (name == "M1dual") return ctx.module(Mod::M1d);
  if (name == "Mdual") return ctx.module(Mod::Md);
  if (name == "M2dual") return ctx.module(Mod::M2d);
  if (name == "D") return ctx.fixture().dualizing;
  throw std::invalid_argument("unknown module name: " + name);
}

struct CommandOutput {
  ordered_json args = ordered_json::object();
  ordered_json data = ordered_json::object();
  std::vector<CheckResult> checks;
};

CommandOutput cmd_cohomology(const FixtureContext& ctx, const std::string& module_name,
                             int degree, const std::string& place) {
  CommandOutput out;
  out.args["module"] = module_name;
  out.args["degree"] = degree;
  GModule m = select_module(ctx, module_name);
  if (!place.empty()) {
    out.args["place"] = place;
    m = restrict_module(m, ctx.place(place_index(ctx, place)).data.subgroup);
  }
  Cohomology coh = cohomology(m, degree);
  ordered_json inv = ordered_json::array();
  for (const Int& x : coh.group().mod) inv.push_back(x.get_si());
  out.data["invariant_factors"] = inv;
  out.data["order"] = coh.group().order().get_str();
  ordered_json gens = ordered_json::array();
  bool all_cocycles = true;
  for (int i = 0; i < coh.group().dim(); ++i) {
    std::vector<Int> u(coh.group().dim(), Int(0));
    u[i] = 1;
    Cochain rep = coh.representative(u);
    all_cocycles = all_cocycles && coh.is_cocycle(rep);
    ordered_json g;
    g["class"] = coords_json(u);
    g["cocycle"] = table_json(rep);
    gens.push_back(g);
  }
  out.data["generators"] = gens;
  out.checks.push_back({"generator representatives are cocycles", all_cocycles,
                        std::to_string(coh.group().dim()) + " generators"});
  return out;
}

ordered_json selmer_group_json(const FixtureContext& ctx, Mod mod, const SelmerGroup& g) {
  ordered_json o;
  o["order"] = g.group.order().get_str();
  ordered_json els = ordered_json::array();
  for (const auto& e : g.elements) {
    ordered_json r;
    r["class"] = coords_json(e);
    r["cocycle"] = table_json(ctx.h1(mod).representative(e));
    els.push_back(r);
  }
  o["elements"] = els;
  return o;
}

CommandOutput cmd_selmer(const FixtureContext& ctx, const std::string& which) {
  CommandOutput out;
  out.args["which"] = which;
  SelmerBundle b = selmer_bundle(ctx);
  if (which == "M")
    out.data = selmer_group_json(ctx, Mod::M, b.on_m);
  else if (which == "M1dual")
    out.data = selmer_group_json(ctx, Mod::M1d, b.on_m1dual);
  else if (which == "M2")
    out.data = selmer_group_json(ctx, Mod::M2, b.on_m2);
  else if (which == "Mdual")
    out.data = selmer_group_json(ctx, Mod::Md, b.on_mdual);
  else
    throw std::invalid_argument("unknown Selmer selector: " + which);
  out.checks.push_back({"induced triple is exact", b.exactness.pass,
                        b.exactness.witnesses.empty() ? "kernel and image agree at every stage"
                                                      : b.exactness.witnesses.front()});
  return out;
}

CommandOutput cmd_ctp(const FixtureContext& ctx) {
  CommandOutput out;
  SelmerBundle b = selmer_bundle(ctx);
  CtpKernelReport kr = ctp_kernels(ctx, b.triple);
  ordered_json rows = ordered_json::array();
  for (const auto& e : kr.sel_first.elements) rows.push_back(coords_json(e));
  ordered_json cols = ordered_json::array();
  for (const auto& e : kr.sel_second.elements) cols.push_back(coords_json(e));
  ordered_json table = ordered_json::array();
  for (const auto& row : kr.table) {
    ordered_json r = ordered_json::array();
    for (const QmodZ& v : row) r.push_back(v.str());
    table.push_back(r);
  }
  out.data["rows"] = rows;
  out.data["cols"] = cols;
  out.data["table"] = table;
  out.data["left_kernel_order"] = kr.kernel_first.order().get_str();
  out.data["right_kernel_order"] = kr.kernel_second.order().get_str();
  out.checks = run_verify_suite(ctx, "ctp-kernels").checks;
  return out;
}

CommandOutput cmd_bf(const FixtureContext& ctx, const std::vector<int>& s, uint64_t seed) {
  CommandOutput out;
  out.args["S"] = places_json(ctx, s);
  FieldsSpace fs = space_of_fields(ctx, s);
  ordered_json vals = ordered_json::array();
  if (s.empty()) {
    for (const auto& rho : fs.elements) {
      ordered_json r;
      r["field"] = coords_json(rho.cls1);
      r["field2"] = coords_json(rho.cls2);
      r["value"] = bf_closed(ctx, rho, seed).str();
      vals.push_back(r);
    }
  } else {
    SectionXi xi = seed == 0 ? default_xi(ctx, s) : random_xi(ctx, s, seed);
    for (const auto& rho : fs.elements) {
      ordered_json r;
      r["field"] = coords_json(rho.cls1);
      r["field2"] = coords_json(rho.cls2);
      r["value"] = trivialize(ctx, xi, global_bf(ctx, s, rho, seed)).str();
      vals.push_back(r);
    }
  }
  out.data["fields"] = ordered_json(fs.elements.size());
  out.data["values"] = vals;
  return out;
}

ordered_json cycint_json(const CycInt& z) {
  ordered_json o;
  ordered_json c = ordered_json::array();
  for (const Int& x : z.c) c.push_back(x.get_str());
  o["coefficients"] = c;
  o["str"] = z.str();
  o["rational_integer"] = z.is_rational_integer();
  if (z.is_rational_integer()) o["rational_value"] = z.rational_value().get_str();
  return o;
}

CommandOutput cmd_partition(const FixtureContext& ctx, const std::vector<int>& s, uint64_t seed) {
  CommandOutput out;
  out.args["S"] = places_json(ctx, s);
  if (s.empty()) {
    CycInt z = partition_closed(ctx, seed);
    out.data["value"] = cycint_json(z);
    out.checks = run_verify_suite(ctx, "onshell", seed).checks;
  } else {
    SectionXi xi = seed == 0 ? default_xi(ctx, s) : random_xi(ctx, s, seed);
    AmplitudeSection sec = partition_relative(ctx, s, xi, seed);
    ordered_json fibers = ordered_json::array();
    for (const auto& [key, z] : sec.table) {
      ordered_json f;
      f["profile"] = coords_json(key);
      f["value"] = cycint_json(z);
      fibers.push_back(f);
    }
    out.data["fibers"] = fibers;
  }
  return out;
}

int run(const Config& cfg, const std::string& command, const std::string& module_name, int degree,
        const std::string& place, const std::string& which) {
  auto t0 = std::chrono::steady_clock::now();

  std::string bytes = slurp(cfg.fixture_path);
  std::string digest = fixture_digest(bytes);
  SiteFixture fixture = parse_fixture(bytes);

  ordered_json report;
  report["schema_version"] = 1;
  report["command"] = command;
  report["fixture"] = fixture.name;
  report["digest"] = digest;
  report["seed"] = cfg.seed;
  report["resamples"] = cfg.resamples;

  auto emit = [&](int code) {
    if (cfg.format == "json") {
      std::cout << report.dump(2) << "\n";
    } else {
      std::cout << "command: " << command << "\n"
                << "fixture: " << fixture.name << " (digest " << digest << ")\n"
                << "seed " << cfg.seed << ", resamples " << cfg.resamples << "\n";
      if (report.contains("args") && !report["args"].empty())
        std::cout << "args: " << report["args"].dump() << "\n";
      if (report.contains("data") && !report["data"].empty())
        std::cout << report["data"].dump(2) << "\n";
      for (const auto& c : report["checks"])
        std::cout << (c["pass"].get<bool>() ? "[ok]   " : "[FAIL] ") << c["key"].get<std::string>()
                  << " -- " << c["detail"].get<std::string>() << "\n";
      std::cout << "result: " << (report["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::cerr << "elapsed_ms=" << ms << "\n";
    return code;
  };

  ValidationReport vr = validate_fixture(fixture);
  if (command == "validate") {
    std::vector<CheckResult> checks;
    for (const auto& ax : vr.axioms) checks.push_back({ax.key, ax.pass, ax.witness});
    report["args"] = ordered_json::object();
    report["data"] = ordered_json::object();
    report["checks"] = checks_json(checks);
    report["pass"] = vr.all_pass();
    return emit(vr.all_pass() ? 0 : 2);
  }
  if (!vr.all_pass()) {
    std::vector<CheckResult> checks;
    for (const auto& ax : vr.axioms)
      if (!ax.pass) checks.push_back({ax.key, false, ax.witness});
    report["args"] = ordered_json::object();
    report["data"] = ordered_json::object();
    report["checks"] = checks_json(checks);
    report["pass"] = false;
    return emit(2);
  }

  FixtureContext ctx(fixture);
  auto sets = parse_sets(ctx, cfg.sets);
  std::optional<std::vector<int>> s_opt, t_opt;
  if (sets.count("S")) s_opt = sets["S"];
  if (sets.count("T")) t_opt = sets["T"];

  CommandOutput out;
  if (command == "cohomology") {
    out = cmd_cohomology(ctx, module_name, degree, place);
  } else if (command == "selmer") {
    out = cmd_selmer(ctx, which);
  } else if (command == "ctp") {
    out = cmd_ctp(ctx);
  } else if (command == "bf") {
    out = cmd_bf(ctx, s_opt.value_or(std::vector<int>{}), cfg.seed);
    if (s_opt) out.args["S"] = places_json(ctx, *s_opt);
  } else if (command == "partition") {
    out = cmd_partition(ctx, s_opt.value_or(std::vector<int>{}), cfg.seed);
  } else if (command == "verify") {
    SuiteReport sr = run_verify_suite(ctx, which, cfg.seed, cfg.resamples, s_opt, t_opt);
    out.args["which"] = which;
    if (s_opt) out.args["S"] = places_json(ctx, *s_opt);
    if (t_opt) out.args["T"] = places_json(ctx, *t_opt);
    out.checks = sr.checks;
  } else {
    throw std::invalid_argument("unknown command: " + command);
  }

  bool pass = true;
  for (const auto& c : out.checks) pass = pass && c.pass;
  report["args"] = out.args;
  report["data"] = out.data;
  report["checks"] = checks_json(out.checks);
  report["pass"] = pass;
  return emit(pass ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verification toolkit for arithmetic site fixtures"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--fixture", cfg.fixture_path, "fixture json file")->required();
  app.add_option("--seed", cfg.seed, "seed for randomized re-choices");
  app.add_option("--resamples", cfg.resamples, "re-choice count for independence suites");
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "human"}));
  app.add_option("--set", cfg.sets, "place set, e.g. S=v1,v2 (repeatable)");

  std::string module_name, place, which;
  int degree = 1;

  app.add_subcommand("validate", "run every fixture axiom");
  auto* coh = app.add_subcommand("cohomology", "cohomology of a module");
  coh->add_option("module", module_name, "M1|M|M2|D|M1dual|Mdual|M2dual")->required();
  coh->add_option("degree", degree, "cohomological degree")->check(CLI::NonNegativeNumber);
  coh->add_option("--place", place, "restrict to the decomposition group of this place");
  auto* sel = app.add_subcommand("selmer", "Selmer group under the declared conditions");
  sel->add_option("which", which, "M|M1dual|M2|Mdual")->required();
  app.add_subcommand("ctp", "pairing table over the two Selmer groups with kernel comparison");
  app.add_subcommand("bf", "action values over the fields of a cut (closed when S empty)");
  app.add_subcommand("partition", "partition value, closed or fiberwise over a cut");
  auto* ver = app.add_subcommand("verify", "run a named verification suite");
  ver->add_option("which", which, "suite name")
      ->required()
      ->check(CLI::IsMember(verify_suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(cfg, app.get_subcommands().front()->get_name(), module_name, degree, place, which);
  } catch (const ObstructionNonzero& e) {
    std::cerr << "obstruction: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
