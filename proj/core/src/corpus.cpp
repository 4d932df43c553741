#include "qpfb/corpus.hpp"

#include <cstdlib>
#include <mutex>

#ifndef QPFB_CORPUS_DIR
#define QPFB_CORPUS_DIR "corpus"
#endif

namespace qpfb {

std::string corpus_dir() {
  if (const char* env = std::getenv("QPFB_CORPUS_DIR"); env && *env) return env;
  return QPFB_CORPUS_DIR;
}

std::string corpus_file(const std::string& stem) { return corpus_dir() + "/" + stem + ".qpfb"; }

HopfPtr standard_hopf(const std::string& name) {
  static const std::map<std::string, std::string> files = {{"U1", "u1"}, {"S1", "s1"}, {"SUnu2", "sunu2"}};
  static std::mutex mutex;
  static std::map<std::string, HopfPtr> cache;

  auto it = files.find(name);
  if (it == files.end()) throw Error("unknown standard Hopf algebra '" + name + "' (expected U1, S1 or SUnu2)");
  std::lock_guard lock(mutex);
  if (auto c = cache.find(name); c != cache.end()) return c->second;

  Workspace ws;
  ws.parse_file(corpus_file(it->second));
  HopfPtr h = ws.hopf(name);
  Report r = check_presentation(h->algebra(), 3);
  r.append(check_hopf_axioms(*h, 3));
  if (const Record* f = r.first_failure()) {
    throw Error("standard Hopf algebra '" + name + "' failed " + f->name);
  }
  cache.emplace(name, h);
  return h;
}

std::shared_ptr<Workspace> load_example_workspace(const ParseOptions& options) {
  auto ws = std::make_shared<Workspace>(options);
  for (const char* stem : {"sunu2", "s1", "tube", "example"}) ws->parse_file(corpus_file(stem));
  return ws;
}

GaugeFamily example_family(const Workspace& ws, int n) {
  if (n < 1) throw Error("example family index must be >= 1, got " + std::to_string(n));
  BundlePtr b = ws.bundle("tube");
  const HopfPtr& H = b->fibre();
  GaugeFamily fam;
  fam.name = "g" + std::to_string(n);
  fam.side = Side::Left;
  fam.bundle = b;
  fam.taus[1] = LinMap::hom(H, ws.morphism("tau1"), n);
  fam.tau_invs[1] = LinMap::precompose_S(fam.taus[1]);
  fam.taus[2] = LinMap::power(LinMap::identity(H), n);
  fam.tau_invs[2] = LinMap::power_via_antipode(LinMap::identity(H), n);
  return fam;
}

Report check_printed_compatibility(const GaugeFamily& fam) {
  Report report;
  const auto& b = *fam.bundle;
  const auto& H = b.fibre_algebra();
  CheckScope s("printed overlap identity for " + fam.name,
               "pi^i_j(tau_i(h)) = sum tau_ij(h_1) pi^j_i(tau_j(h_2)) tau_ji(h_3)");
  for (const auto& [i, j] : b.overlap_pairs()) {
    if (i > j) continue;
    for (Gen g = 0; g < H->generator_count(); ++g) {
      Word w{g};
      Element lhs = b.restriction(i, j)->apply(fam.taus.at(i)->apply(w));
      s.expect_equal(H->generators()[g] + " on overlap " + std::to_string(i) + std::to_string(j), lhs,
                     compatibility_rhs(fam, i, j, w, CompatOrder::Printed));
    }
  }
  report.add(s.finish("generators"));
  return report;
}

Example build_example(const ExampleConfig& cfg) {
  if (cfg.n < 1) throw Error("example family index must be >= 1, got " + std::to_string(cfg.n));
  ParseOptions opts;
  opts.specialize = cfg.specialize;
  opts.degree = cfg.degree;
  std::shared_ptr<const Workspace> ws = load_example_workspace(opts);
  GaugeFamily fam = example_family(*ws, cfg.n);
  Report report = check_printed_compatibility(fam);
  if (const Record* f = report.first_failure()) {
    throw WitnessError("example identity fails for n = " + std::to_string(cfg.n), f->witness->where, f->witness->lhs,
                       f->witness->rhs);
  }
  GaugeTransformation g = GaugeTransformation::from_family(std::move(fam), cfg.degree);
  if (cfg.verify) report.append(verify_gauge(g, cfg.degree));
  BundlePtr b = ws->bundle("tube");
  return Example{std::move(ws), std::move(b), std::move(g), std::move(report)};
}

}  // namespace qpfb
