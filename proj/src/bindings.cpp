// Python bindings: fixture loading, validation, and the main computations,
// mirroring the command-line driver's report shapes as dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "arithbf/bfcore.hpp"
#include "arithbf/quantum.hpp"
#include "arithbf/selmerctp.hpp"
#include "arithbf/sitemodel.hpp"
#include "arithbf/verify.hpp"

namespace py = pybind11;
using namespace arithbf;

namespace {

py::list coords_list(const std::vector<Int>& v) {
  py::list out;
  for (const Int& x : v) out.append(long(x.get_si()));
  return out;
}

py::dict cycint_dict(const CycInt& v) {
  py::dict d;
  py::list coeff;
  for (const Int& c : v.c) coeff.append(long(c.get_si()));
  d["coefficients"] = coeff;
  d["str"] = v.str();
  d["rational_integer"] = v.is_rational_integer();
  if (v.is_rational_integer()) d["rational_value"] = long(v.rational_value().get_si());
  return d;
}

py::list checks_list(const std::vector<CheckResult>& checks) {
  py::list out;
  for (const CheckResult& c : checks) {
    py::dict d;
    d["key"] = c.key;
    d["pass"] = c.pass;
    d["detail"] = c.detail;
    out.append(d);
  }
  return out;
}

py::dict suite_dict(const SuiteReport& r) {
  py::dict d;
  d["suite"] = r.suite;
  d["pass"] = r.pass();
  d["checks"] = checks_list(r.checks);
  return d;
}

Mod mod_from_name(const std::string& name) {
  if (name == "M1") return Mod::M1;
  if (name == "M") return Mod::M;
  if (name == "M2") return Mod::M2;
  if (name == "M1dual") return Mod::M1d;
  if (name == "Mdual") return Mod::Md;
  if (name == "M2dual") return Mod::M2d;
  throw std::invalid_argument("unknown module name: " + name);
}

// A loaded fixture. Validation is explicit and cheap; every computation first
// requires the axioms to hold, so invalid inputs fail with a clear error
// instead of running on inconsistent data.
class Fixture {
 public:
  explicit Fixture(const std::string& text) : text_(text), fx_(parse_fixture(text)) {}

  const std::string& name() const { return fx_.name; }
  std::string digest() const { return fixture_digest(text_); }

  py::list validate() {
    py::list out;
    for (const AxiomResult& a : report().axioms) {
      py::dict d;
      d["key"] = a.key;
      d["pass"] = a.pass;
      d["witness"] = a.witness;
      out.append(d);
    }
    return out;
  }

  bool is_valid() { return report().all_pass(); }

  py::dict cohomology_of(const std::string& module, int degree,
                         const std::optional<std::string>& place) {
    const FixtureContext& c = ctx();
    GModule m = module == "D" ? c.fixture().dualizing : c.module(mod_from_name(module));
    if (place) m = restrict_module(m, c.place(*place).data.subgroup);
    Cohomology h = cohomology(m, degree);
    py::dict d;
    d["order"] = long(h.group().order().get_si());
    py::list inv;
    for (const Int& v : h.group().mod) inv.append(long(v.get_si()));
    d["invariant_factors"] = inv;
    return d;
  }

  py::dict selmer(const std::string& which) {
    const SelmerBundle& b = bundle();
    const SelmerGroup* g = nullptr;
    if (which == "M") g = &b.on_m;
    else if (which == "M1dual") g = &b.on_m1dual;
    else if (which == "M2") g = &b.on_m2;
    else if (which == "Mdual") g = &b.on_mdual;
    else throw std::invalid_argument("unknown Selmer side: " + which);
    py::dict d;
    d["order"] = long(g->group.order().get_si());
    py::list elems;
    for (const std::vector<Int>& e : g->elements) elems.append(coords_list(e));
    d["elements"] = elems;
    d["exact"] = b.exactness.pass;
    return d;
  }

  py::dict ctp() {
    CtpKernelReport r = ctp_kernels(ctx(), bundle().triple);
    py::dict d;
    py::list rows, cols, table;
    for (const auto& e : r.sel_first.elements) rows.append(coords_list(e));
    for (const auto& e : r.sel_second.elements) cols.append(coords_list(e));
    for (const auto& row : r.table) {
      py::list pr;
      for (const QmodZ& v : row) pr.append(v.str());
      table.append(pr);
    }
    d["rows"] = rows;
    d["cols"] = cols;
    d["table"] = table;
    d["left_kernel_order"] = long(r.kernel_first.group.order().get_si());
    d["right_kernel_order"] = long(r.kernel_second.group.order().get_si());
    d["pass"] = r.pass;
    return d;
  }

  py::list bf(const std::vector<std::string>& s_ids, uint64_t seed) {
    const FixtureContext& c = ctx();
    std::vector<int> s = place_indices(s_ids);
    py::list out;
    if (s.empty()) {
      for (const FieldPoint& rho : space_of_fields(c, {}).elements)
        out.append(bf_row(rho, bf_closed(c, rho, seed)));
    } else {
      SectionXi xi = seed == 0 ? default_xi(c, s) : random_xi(c, s, seed);
      for (const FieldPoint& rho : space_of_fields(c, s).elements)
        out.append(bf_row(rho, trivialize(c, xi, global_bf(c, s, rho, seed))));
    }
    return out;
  }

  py::dict partition(const std::vector<std::string>& s_ids, uint64_t seed) {
    const FixtureContext& c = ctx();
    std::vector<int> s = place_indices(s_ids);
    py::dict d;
    if (s.empty()) {
      d["value"] = cycint_dict(partition_closed(c, seed));
    } else {
      SectionXi xi = seed == 0 ? default_xi(c, s) : random_xi(c, s, seed);
      AmplitudeSection z = partition_relative(c, s, xi, seed);
      py::list fibers;
      for (const auto& [profile, value] : z.table) {
        py::dict f;
        f["profile"] = coords_list(profile);
        f["value"] = cycint_dict(value);
        fibers.append(f);
      }
      d["fibers"] = fibers;
    }
    return d;
  }

  py::dict verify(const std::string& which, uint64_t seed, int resamples,
                  const std::optional<std::vector<std::string>>& s,
                  const std::optional<std::vector<std::string>>& t) {
    std::optional<std::vector<int>> si, ti;
    if (s) si = place_indices(*s);
    if (t) ti = place_indices(*t);
    return suite_dict(run_verify_suite(ctx(), which, seed, resamples, si, ti));
  }

 private:
  std::string text_;
  SiteFixture fx_;
  std::optional<ValidationReport> report_;
  std::optional<FixtureContext> ctx_;
  std::optional<SelmerBundle> bundle_;

  const ValidationReport& report() {
    if (!report_) report_ = validate_fixture(fx_);
    return *report_;
  }

  const FixtureContext& ctx() {
    if (!ctx_) {
      const ValidationReport& r = report();
      if (!r.all_pass()) {
        std::string keys;
        for (const AxiomResult& a : r.axioms)
          if (!a.pass) keys += (keys.empty() ? "" : ", ") + a.key;
        throw std::invalid_argument("fixture fails validation: " + keys);
      }
      ctx_.emplace(fx_);
    }
    return *ctx_;
  }

  const SelmerBundle& bundle() {
    if (!bundle_) bundle_ = selmer_bundle(ctx());
    return *bundle_;
  }

  std::vector<int> place_indices(const std::vector<std::string>& ids) {
    std::vector<int> out;
    for (const std::string& id : ids) {
      int idx = fx_.place_index(id);
      if (idx < 0) throw std::invalid_argument("unknown place: " + id);
      out.push_back(idx);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  py::dict bf_row(const FieldPoint& rho, const QmodZ& v) {
    py::dict d;
    d["field1"] = coords_list(rho.cls1);
    d["field2"] = coords_list(rho.cls2);
    d["value"] = v.str();
    return d;
  }
};

Fixture load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open fixture file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return Fixture(ss.str());
}

}  // namespace

PYBIND11_MODULE(arithbf_py, m) {
  m.doc() = "exact verification toolkit for arithmetic site fixtures";

  py::class_<Fixture>(m, "Fixture")
      .def(py::init<const std::string&>(), py::arg("text"))
      .def_property_readonly("name", &Fixture::name)
      .def_property_readonly("digest", &Fixture::digest)
      .def("validate", &Fixture::validate)
      .def("is_valid", &Fixture::is_valid)
      .def("cohomology", &Fixture::cohomology_of, py::arg("module"), py::arg("degree") = 1,
           py::arg("place") = std::nullopt)
      .def("selmer", &Fixture::selmer, py::arg("which"))
      .def("ctp", &Fixture::ctp)
      .def("bf", &Fixture::bf, py::arg("s") = std::vector<std::string>{}, py::arg("seed") = 0)
      .def("partition", &Fixture::partition, py::arg("s") = std::vector<std::string>{},
           py::arg("seed") = 0)
      .def("verify", &Fixture::verify, py::arg("which"), py::arg("seed") = 0,
           py::arg("resamples") = 10, py::arg("s") = std::nullopt, py::arg("t") = std::nullopt);

  m.def("load", &load, py::arg("path"), "load a fixture from a json file");
  m.def("loads", [](const std::string& text) { return Fixture(text); }, py::arg("text"),
        "load a fixture from a json string");
  m.def("suite_names", [] { return verify_suite_names(); },
        "names accepted by Fixture.verify");
  m.def("verify_leibniz",
        [](uint64_t seed, int pairs) { return suite_dict(verify_leibniz(seed, pairs)); },
        py::arg("seed") = 0, py::arg("pairs") = 500,
        "check the cup-product boundary rule on seeded random cochain pairs");
}
