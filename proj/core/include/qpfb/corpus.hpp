#pragma once

#include <map>
#include <memory>
#include <string>

#include "qpfb/gauge.hpp"
#include "qpfb/hopf.hpp"
#include "qpfb/report.hpp"
#include "qpfb/workspace.hpp"

namespace qpfb {

/// Directory of the shipped presentation files. The QPFB_CORPUS_DIR
/// environment variable overrides the compiled-in location.
std::string corpus_dir();
/// Path of a shipped file by stem, e.g. "example" -> <dir>/example.qpfb.
std::string corpus_file(const std::string& stem);

/// Certified standard Hopf algebra: "U1", "S1" or "SUnu2". The presentation
/// and the Hopf axioms are checked at degree 3 on first use; throws Error for
/// unknown names or a failed certificate.
HopfPtr standard_hopf(const std::string& name);

struct ExampleConfig {
  /// Index of the family tau^(n); n >= 1.
  int n = 1;
  /// Parameter values (q, nu) substituted at parse time; empty keeps them symbolic.
  std::map<std::string, Rational> specialize;
  int degree = 2;
  /// Run verify_gauge on the result (the expensive part for n >= 2).
  bool verify = true;
};

/// The tube bundle with the gauge transformation g^(n):
/// tau_1 = (alpha -> x^n), tau_2 = n-th convolution power of id,
/// with inverses tau_1 o S and h -> sum S(h_1) ... S(h_n).
struct Example {
  std::shared_ptr<const Workspace> workspace;
  BundlePtr bundle;
  GaugeTransformation gauge;
  /// Overlap identity on the fibre generators, then verify_gauge if requested.
  Report report;
};

/// Throws Error for n < 1 and WitnessError if a construction check fails.
Example build_example(const ExampleConfig& cfg);

/// Workspace with the files the example needs (sunu2, s1, tube, example).
std::shared_ptr<Workspace> load_example_workspace(const ParseOptions& options = {});

/// tau^(n) family over the tube of a workspace from load_example_workspace.
GaugeFamily example_family(const Workspace& ws, int n);

/// pi^1_2(tau_1(h)) = sum tau_12(h_1) pi^2_1(tau_2(h_2)) tau_21(h_3) on every
/// generator of the fibre.
Report check_printed_compatibility(const GaugeFamily& fam);

}  // namespace qpfb
