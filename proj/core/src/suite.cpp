#include "qpfb/suite.hpp"

#include <algorithm>
#include <functional>
#include <atomic>
#include <thread>
#include <utility>

#include "qpfb/corpus.hpp"

namespace qpfb {

std::string to_string(Suite s) {
  switch (s) {
    case Suite::Hopf:
      return "hopf";
    case Suite::Bundle:
      return "bundle";
    case Suite::Gauge:
      return "gauge";
    case Suite::Connection:
      return "connection";
    case Suite::Example:
      return "example";
    case Suite::All:
      return "all";
  }
  return "?";
}

std::optional<Suite> parse_suite(std::string_view name) {
  for (Suite s : {Suite::Hopf, Suite::Bundle, Suite::Gauge, Suite::Connection, Suite::Example, Suite::All}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

namespace {

using Task = std::pair<std::string, std::function<Report()>>;

Record failed_record(const std::string& name, const std::string& anchor, const std::string& where,
                     const std::string& lhs, const std::string& rhs, const std::string& detail) {
  Record r;
  r.name = name;
  r.anchor = anchor;
  r.status = Status::Fail;
  r.witness = Witness{where, lhs, rhs};
  r.detail = detail;
  return r;
}

// Turns an exception escaping a check into a failed record.
Report guarded(const std::string& label, const std::function<Report()>& fn) {
  try {
    return fn();
  } catch (const WitnessError& e) {
    Report r;
    r.add(failed_record(label, "construction", e.where(), e.lhs(), e.rhs(), e.what()));
    return r;
  } catch (const Error& e) {
    Report r;
    Record rec;
    rec.name = label;
    rec.anchor = "construction";
    rec.status = Status::Fail;
    rec.detail = e.what();
    r.add(std::move(rec));
    return r;
  }
}

void hopf_tasks(const Workspace& ws, int d, std::vector<Task>& out) {
  const int dh = std::max(d, 3);
  for (const auto& [name, p] : ws.algebras()) {
    out.emplace_back("hopf", [p = p, dh] { return check_presentation(p, dh); });
  }
  for (const auto& [name, h] : ws.hopfs()) {
    out.emplace_back("hopf", [h = h, dh] { return check_hopf_axioms(*h, dh); });
  }
  for (const auto& [name, m] : ws.morphisms()) {
    out.emplace_back("hopf", [name = name, m = m] {
      if (m.failure) {
        Report r;
        Report inner = m.morphism->check();
        if (const Record* f = inner.first_failure()) {
          Record rec = *f;
          rec.name = "morphism " + name + ": " + f->name;
          r.add(std::move(rec));
        } else {
          Record rec;
          rec.name = "morphism " + name;
          rec.anchor = "images respect the relations";
          rec.status = Status::Fail;
          rec.detail = *m.failure;
          r.add(std::move(rec));
        }
        return r;
      }
      Report r = m.morphism->check();
      Report named;
      for (auto rec : r.records()) {
        rec.name = "morphism " + name + ": " + rec.name;
        named.add(std::move(rec));
      }
      return named;
    });
  }
}

void bundle_tasks(const Workspace& ws, int d, std::vector<Task>& out) {
  for (const auto& [name, b] : ws.bundles()) {
    out.emplace_back("bundle", [b = b, d] { return check_transition_consistency(*b, d); });
  }
}

Report witness_report(const GaugeTransformation& g, int d) {
  Report r;
  CheckScope s("non-automorphism search for " + g.name(), "g(f f') = g(f) g(f') on spanning pairs");
  std::size_t pairs = 0;
  auto w = find_non_automorphism_witness(g, d, &pairs);
  s.pass();
  Record rec = s.finish();
  if (w) {
    rec.witness = Witness{w->f_label + " * " + w->g_label, w->lhs.str(), w->rhs.str()};
    rec.detail = "not an algebra map";
    if (w->factor) rec.detail += ": rhs = " + w->factor->str() + " * lhs";
  } else {
    rec.detail = "multiplicative on " + std::to_string(pairs) + " pairs of total degree <= " + std::to_string(d);
  }
  r.add(std::move(rec));
  return r;
}

void gauge_tasks(const Workspace& ws, int d, std::vector<Task>& out) {
  for (const auto& [name, fd] : ws.families()) {
    const GaugeFamily& fam = fd.family;
    out.emplace_back("gauge", [&fam, d] { return check_family(fam, d); });
    out.emplace_back("gauge", [&fam, d] { return verify_gauge(GaugeTransformation::unchecked(fam), d); });
    out.emplace_back("gauge", [&fam, d] { return witness_report(GaugeTransformation::unchecked(fam), d); });
    if (fam.side != Side::Left) continue;
    for (const auto& [cname, c] : ws.coreps()) {
      if (c.hopf != fam.bundle->fibre()) continue;
      out.emplace_back("gauge", [&fam, &c, d] {
        Report r;
        corep_matrix_check(fam, c.u, d, r);
        return r;
      });
    }
  }
}

void connection_tasks(const Workspace& ws, int d, std::vector<Task>& out) {
  for (const auto& [name, c] : ws.connections()) {
    for (const auto& [fname, chart] : c.gauges) {
      const GaugeFamily& fam = ws.family(fname).family;
      out.emplace_back("connection", [&c, &fam, chart = chart, d] {
        return check_curvature_covariance(c.form, fam.taus.at(chart), fam.tau_invs.at(chart), d);
      });
    }
    out.emplace_back("connection", [&c, name = name, d] {
      Report r;
      CheckScope s("identity gauge leaves " + name + " unchanged", "A' = A for tau = eps 1");
      auto unit = LinMap::unit(c.hopf, c.base);
      ConnectionForm t = gauge_transform_connection(c.form, unit, unit);
      for (const auto& w : c.hopf->algebra()->basis(d)) {
        s.expect_equal(w.empty() ? std::string("1") : c.hopf->algebra()->word_str(w), t.A->apply(w), c.form.A->apply(w));
      }
      r.add(s.finish("monomials"));
      return r;
    });
  }
  for (const auto& [name, idl] : ws.ideals()) {
    out.emplace_back("connection", [&idl, d] { return check_ideal_conditions(idl.spec, d); });
  }
}

void example_tasks(const Workspace& ws, int d, std::vector<Task>& out) {
  for (const auto& [name, fd] : ws.families()) {
    const GaugeFamily& fam = fd.family;
    if (fam.side != Side::Left) continue;
    out.emplace_back("example", [&fam] { return check_printed_compatibility(fam); });
    for (const auto& [cname, c] : ws.coreps()) {
      if (c.hopf != fam.bundle->fibre()) continue;
      out.emplace_back("example", [&fam, &c, d] {
        Report r;
        corep_matrix_check(fam, c.u, d, r, CompatOrder::Printed);
        return r;
      });
    }
  }
}

}  // namespace

Report run_suite(const Workspace& ws, Suite suite, const SuiteOptions& options) {
  const int d = options.degree;
  std::vector<Task> tasks;
  auto want = [&](Suite s) { return suite == s || suite == Suite::All; };
  if (want(Suite::Hopf)) hopf_tasks(ws, d, tasks);
  if (want(Suite::Bundle)) bundle_tasks(ws, d, tasks);
  if (want(Suite::Gauge)) gauge_tasks(ws, d, tasks);
  if (want(Suite::Connection)) connection_tasks(ws, d, tasks);
  if (want(Suite::Example)) example_tasks(ws, d, tasks);

  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  std::vector<Report> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < tasks.size();) {
      results[k] = guarded(tasks[k].first + " check", tasks[k].second);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < std::min<std::size_t>(jobs, tasks.size()); ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Report report;
  for (std::size_t k = 0; k < tasks.size(); ++k) report.append(results[k], tasks[k].first);
  return report;
}

}  // namespace qpfb
