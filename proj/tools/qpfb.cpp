// qpfb: exact verifier for gauge transformations on quantum principal bundles.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse error.

#include <iostream>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "json_report.hpp"
#include "qpfb/suite.hpp"
#include "qpfb/workspace.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

bool parse_assignment(const std::string& text, std::string& name, qpfb::Rational& value) {
  static const std::regex re(R"(\s*([A-Za-z_]\w*)\s*=\s*(-?\d+(/\d+)?)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) return false;
  name = m[1];
  value = qpfb::Rational(m[2].str());
  value.canonicalize();
  return value.get_den() != 0;
}

int emit_error(const RunInfo& info, bool json, const std::string& kind, const std::string& message) {
  if (json) {
    std::cout << error_json(info, kind, message, kUsage).dump(2) << '\n';
  }
  std::cerr << "qpfb: " << message << '\n';
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verifier for gauge transformations on quantum principal fibre bundles"};
  app.set_version_flag("--version", QPFB_VERSION);
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string suite_name = "all";
  int degree = 2;
  std::vector<std::string> sets;
  bool json = false;
  bool no_timing = false;
  unsigned jobs = 0;

  auto* check = app.add_subcommand("check", "Run verification suites on presentation files");
  check->add_option("-f,--file", files, "Presentation file(s), read in order")->required();
  check->add_option("-s,--suite", suite_name, "hopf | bundle | gauge | connection | example | all")
      ->capture_default_str();
  check->add_option("-d,--degree", degree, "Degree bound for the checks")->check(CLI::Range(1, 4))->capture_default_str();
  check->add_option("--set", sets, "Specialize a parameter, e.g. --set q=1");
  check->add_flag("--json", json, "Print the report as JSON");
  check->add_flag("--no-timing", no_timing, "Zero all timings (for reproducible output)");
  check->add_option("-j,--jobs", jobs, "Worker threads (0 = hardware concurrency)");

  std::vector<std::string> format_files;
  auto* format = app.add_subcommand("format", "Print presentation files in canonical form");
  format->add_option("-f,--file", format_files, "Presentation file(s)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*format) {
    qpfb::Workspace ws;
    try {
      for (const auto& f : format_files) ws.parse_file(f);
    } catch (const qpfb::Error& e) {
      std::cerr << "qpfb: " << e.what() << '\n';
      return kUsage;
    }
    for (std::size_t i = 0; i < ws.document_count(); ++i) {
      if (i > 0) std::cout << '\n';
      std::cout << ws.print(i);
    }
    return kPass;
  }

  RunInfo info;
  info.files = files;
  info.suite = suite_name;
  info.degree = degree;
  info.timing = !no_timing;

  for (const auto& s : sets) {
    std::string name;
    qpfb::Rational value;
    if (!parse_assignment(s, name, value)) {
      return emit_error(info, json, "usage", "--set expects NAME=RATIONAL, got '" + s + "'");
    }
    if (value == 0) return emit_error(info, json, "usage", "parameter '" + name + "' cannot be specialized to 0");
    info.specialize[name] = value;
  }
  auto suite = qpfb::parse_suite(suite_name);
  if (!suite) return emit_error(info, json, "usage", "unknown suite '" + suite_name + "'");

  qpfb::ParseOptions options;
  options.specialize = info.specialize;
  options.degree = degree;
  qpfb::Workspace ws(options);
  try {
    for (const auto& f : files) ws.parse_file(f);
  } catch (const qpfb::ParseError& e) {
    return emit_error(info, json, "parse", e.what());
  } catch (const qpfb::Error& e) {
    return emit_error(info, json, "parse", e.what());
  }

  qpfb::Report report = qpfb::run_suite(ws, *suite, {degree, jobs});
  const int status = report.passed() ? kPass : kFail;
  if (json) {
    std::cout << report_json(report, info, status).dump(2) << '\n';
  } else {
    std::cout << report.to_text(info.timing);
  }
  return status;
}
