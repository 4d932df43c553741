#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qpfb/corpus.hpp"
#include "qpfb/workspace.hpp"
#include "run_cli.hpp"

using namespace qpfb;
using testing::files_arg;
using testing::run_qpfb;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string data_file(const std::string& name) { return std::string(QPFB_TEST_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string failure_of(const Report& r) {
  const Record* f = r.first_failure();
  if (f == nullptr) return "";
  std::string s = f->name;
  if (f->witness) s += " at " + f->witness->where + ": " + f->witness->lhs + " vs " + f->witness->rhs;
  return s;
}

void require_report(Outcome& o, const Report& r, const std::string& what) {
  o.require(r.passed(), what + ": " + failure_of(r));
}

Outcome hopf_axioms() {
  Outcome o;
  for (const char* name : {"U1", "S1", "SUnu2"}) {
    require_report(o, check_hopf_axioms(*standard_hopf(name), 3), name);
  }
  o.detail = o.ok ? "U1, S1, SUnu2 at degree 3" : o.detail;
  return o;
}

Outcome convolution_inverses() {
  Outcome o;
  auto ws = load_example_workspace();
  for (int n = 1; n <= 3; ++n) {
    auto fam = example_family(*ws, n);
    for (ChartId c : {ChartId(1), ChartId(2)}) {
      Report r = check_conv_inverse(*fam.taus.at(c), *fam.tau_invs.at(c), 2, InverseSide::Both, false);
      require_report(o, r, "n = " + std::to_string(n) + " chart " + std::to_string(c));
    }
  }
  if (o.ok) o.detail = "n = 1..3, both charts, monomials of degree <= 2";
  return o;
}

Outcome printed_compatibility() {
  Outcome o;
  auto ws = load_example_workspace();
  for (int n = 1; n <= 3; ++n) {
    require_report(o, check_printed_compatibility(example_family(*ws, n)), "n = " + std::to_string(n));
  }
  if (o.ok) o.detail = "n = 1..3 on alpha, alpha*, gamma, gamma*";
  return o;
}

Outcome example_gauges() {
  Outcome o;
  for (int n = 1; n <= 2; ++n) {
    try {
      Example ex = build_example({n, {}, 2, true});
      require_report(o, ex.report, "n = " + std::to_string(n));
    } catch (const Error& e) {
      o.require(false, "n = " + std::to_string(n) + ": " + e.what());
    }
  }
  if (o.ok) o.detail = "g1 and g2 built and verified";
  return o;
}

Outcome automorphism_witness() {
  Outcome o;
  Example sym = build_example({1, {}, 2, false});
  auto w = find_non_automorphism_witness(sym.gauge, 2);
  o.require(w.has_value(), "no witness found for symbolic q");
  if (w) {
    o.require(w->factor.has_value() && *w->factor == Scalar::param("q", 1), "factor is not q");
  }
  Example one = build_example({1, {{"q", 1}, {"nu", 1}}, 2, false});
  o.require(!find_non_automorphism_witness(one.gauge, 2).has_value(), "witness found at q = nu = 1");
  if (o.ok) o.detail = "f = " + w->f_label + ", g = " + w->g_label + ", rhs = q lhs; none at q = nu = 1";
  return o;
}

Outcome group_laws() {
  Outcome o;
  auto ws = load_example_workspace();
  auto g1 = GaugeTransformation::from_family(example_family(*ws, 1), 2);
  auto g2 = GaugeTransformation::unchecked(example_family(*ws, 2));
  auto id = compose(g1, invert(g1));
  auto sq = compose(g1, g1);
  auto span = ws->bundle("tube")->spanning_set(2);
  for (const auto& f : span) {
    o.require(id.apply(f) == f, "g1 o g1^-1 moves an element");
    o.require(sq.apply(f) == g2.apply(f), "g1 o g1 differs from g2");
  }
  if (o.ok) o.detail = std::to_string(span.size()) + " spanning elements";
  return o;
}

Outcome connection_covariance() {
  Outcome o;
  auto ws = load_example_workspace();
  for (const auto& [name, decl] : ws->connections()) {
    auto unit = LinMap::unit(decl.hopf, decl.base);
    auto same = gauge_transform_connection(decl.form, unit, unit);
    for (const auto& w : decl.hopf->algebra()->basis(2)) {
      o.require(same.A->apply(w) == decl.form.A->apply(w), name + ": identity gauge changes A");
    }
    for (const auto& [fam, chart] : decl.gauges) {
      const auto& f = ws->family(fam).family;
      auto t = gauge_transform_connection(decl.form, f.taus.at(chart), f.tau_invs.at(chart));
      o.require(t.A->apply(Word{}).is_zero(), name + ": A'(1) != 0");
      require_report(o, check_curvature_covariance(decl.form, f.taus.at(chart), f.tau_invs.at(chart), 2), name);
    }
  }
  if (o.ok) o.detail = "A and Ar: F' = tau^-1 F tau, A'(1) = 0, identity gauge fixes A";
  return o;
}

Outcome ideal_conditions() {
  Outcome o;
  Workspace ws;
  for (const char* stem : {"u1", "s1", "sunu2", "tube", "u1_central"}) ws.parse_file(corpus_file(stem));
  ws.parse_file(data_file("noncentral_ideal.qpfb"));
  require_report(o, check_ideal_conditions(ws.ideal("R").spec, 2), "R");
  Report bad = check_ideal_conditions(ws.ideal("Rx").spec, 2);
  const Record* c = bad.find("centrality of d(y) against tau(H) for Rx");
  o.require(!bad.passed(), "Rx passed");
  o.require(c != nullptr && c->status == Status::Fail && c->witness.has_value(), "no d(y) centrality witness for Rx");
  if (o.ok) o.detail = "R passes; Rx fails at " + c->witness->where + ": " + c->witness->lhs + " vs " + c->witness->rhs;
  return o;
}

Outcome corep_inverses() {
  Outcome o;
  auto ws = load_example_workspace();
  const auto& u = ws->corep("u").u;
  for (int n = 1; n <= 2; ++n) {
    for (auto order : {CompatOrder::Gluing, CompatOrder::Printed}) {
      Report r;
      auto m = corep_matrix_check(example_family(*ws, n), u, 2, r, order);
      require_report(o, r, "n = " + std::to_string(n));
      o.require(m.inverses.size() == 2, "missing chart inverse");
    }
  }
  if (o.ok) o.detail = "b_i invertible, matrix overlap relation in both orders, n = 1, 2";
  return o;
}

Outcome cli_behaviour() {
  Outcome o;
  // each file is formatted together with the files it depends on
  std::string files, expected;
  for (const char* stem : {"u1", "s1", "sunu2", "tube", "example", "u1_central"}) {
    files += files_arg({corpus_file(stem)});
    expected += slurp(corpus_file(stem)) + "\n";
    auto r = run_qpfb("format" + files);
    o.require(r.status == 0 && normalize_layout(r.out) == normalize_layout(expected),
              std::string("round trip of ") + stem);
  }
  std::string example =
      files_arg({corpus_file("sunu2"), corpus_file("s1"), corpus_file("tube"), corpus_file("example")});
  auto a = run_qpfb("check" + example + " -s example --json --no-timing");
  auto b = run_qpfb("check" + example + " -s example --json --no-timing");
  o.require(a.status == 0, "example suite exit " + std::to_string(a.status));
  o.require(a.out == b.out && !a.out.empty(), "json differs between runs");
  auto bad = run_qpfb("check" +
                      files_arg({corpus_file("sunu2"), corpus_file("s1"), corpus_file("tube"),
                                 data_file("corrupt_family.qpfb")}) +
                      " -s gauge --json");
  o.require(bad.status == 1, "corrupt family exit " + std::to_string(bad.status));
  o.require(bad.out.find("\"witness\": {") != std::string::npos, "corrupt family has no witness");
  auto syn = run_qpfb("check" + files_arg({data_file("bad_syntax.qpfb")}));
  o.require(syn.status == 2, "syntax error exit " + std::to_string(syn.status));
  if (o.ok) o.detail = "6 files round-trip, json stable, exits 0/1/2";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Hopf axioms of the shipped algebras", hopf_axioms},
      {"convolution inverses of tau^(n)", convolution_inverses},
      {"printed overlap identity of tau^(n)", printed_compatibility},
      {"g^(n) is a gauge transformation", example_gauges},
      {"non-automorphism witness with factor q", automorphism_witness},
      {"group laws of gauge transformations", group_laws},
      {"connection transformation and curvature covariance", connection_covariance},
      {"ideal conditions and centrality witness", ideal_conditions},
      {"corepresentation inverses and matrix relation", corep_inverses},
      {"round trip, deterministic JSON, exit codes", cli_behaviour},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.ok) ++failed;
    std::printf("criterion %zu: %s - %s (%s) [%.1fs]\n", i + 1, o.ok ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
