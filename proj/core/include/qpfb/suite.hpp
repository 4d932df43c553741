#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpfb/report.hpp"
#include "qpfb/workspace.hpp"

namespace qpfb {

enum class Suite { Hopf, Bundle, Gauge, Connection, Example, All };

std::string to_string(Suite s);
std::optional<Suite> parse_suite(std::string_view name);

struct SuiteOptions {
  int degree = 2;
  /// Worker threads for independent checks; 0 picks the hardware count.
  unsigned jobs = 0;
};

/// Runs the selected checks on everything declared in the workspace.
/// Records come out in declaration order regardless of scheduling, each
/// tagged with the suite that produced it.
///
///   hopf        presentations (local confluence), Hopf axioms, morphisms
///   bundle      transition data of every bundle
///   gauge       families, verify_gauge, non-automorphism search, coreps
///   connection  curvature covariance per declared gauge, identity gauge, ideals
///   example     printed overlap identity and printed-order corep relation
Report run_suite(const Workspace& ws, Suite suite, const SuiteOptions& options = {});

}  // namespace qpfb
