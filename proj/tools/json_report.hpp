#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpfb/report.hpp"
#include "qpfb/scalar.hpp"

struct RunInfo {
  std::vector<std::string> files;
  std::string suite;
  int degree = 2;
  std::map<std::string, qpfb::Rational> specialize;
  bool timing = true;
};

nlohmann::ordered_json report_json(const qpfb::Report& report, const RunInfo& info, int exit_status);
nlohmann::ordered_json error_json(const RunInfo& info, const std::string& kind, const std::string& message,
                                  int exit_status);
