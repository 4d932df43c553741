#include "json_report.hpp"

using nlohmann::ordered_json;

namespace {

ordered_json config_json(const RunInfo& info) {
  ordered_json set = ordered_json::object();
  for (const auto& [k, v] : info.specialize) set[k] = v.get_str();
  return {{"files", info.files}, {"suite", info.suite}, {"degree", info.degree}, {"set", set}};
}

}  // namespace

ordered_json report_json(const qpfb::Report& report, const RunInfo& info, int exit_status) {
  ordered_json records = ordered_json::array();
  for (const auto& r : report.records()) {
    ordered_json witness = nullptr;
    if (r.witness) witness = {{"where", r.witness->where}, {"lhs", r.witness->lhs}, {"rhs", r.witness->rhs}};
    records.push_back({{"suite", r.suite},
                       {"name", r.name},
                       {"anchor", r.anchor},
                       {"status", qpfb::to_string(r.status)},
                       {"detail", r.detail},
                       {"witness", witness},
                       {"time_ms", info.timing ? r.time_ms : 0.0}});
  }
  return {{"tool", "qpfb"},
          {"version", QPFB_VERSION},
          {"config", config_json(info)},
          {"records", records},
          {"notes", report.notes()},
          {"summary",
           {{"pass", report.count(qpfb::Status::Pass)},
            {"fail", report.count(qpfb::Status::Fail)},
            {"vacuous", report.count(qpfb::Status::Vacuous)}}},
          {"exit_status", exit_status}};
}

ordered_json error_json(const RunInfo& info, const std::string& kind, const std::string& message, int exit_status) {
  return {{"tool", "qpfb"},
          {"version", QPFB_VERSION},
          {"config", config_json(info)},
          {"error", {{"kind", kind}, {"message", message}}},
          {"exit_status", exit_status}};
}
