#include "qpfb/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace qpfb {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Vacuous:
      return "vacuous";
  }
  return "?";
}

void Report::append(const Report& other, const std::string& suite) {
  for (auto r : other.records_) {
    if (!suite.empty() && r.suite.empty()) r.suite = suite;
    records_.push_back(std::move(r));
  }
  for (const auto& n : other.notes_) note(n);
}

void Report::note(const std::string& text) {
  if (std::find(notes_.begin(), notes_.end(), text) == notes_.end()) notes_.push_back(text);
}

bool Report::passed() const {
  return std::none_of(records_.begin(), records_.end(),
                      [](const Record& r) { return r.status == Status::Fail; });
}

std::size_t Report::count(Status s) const {
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(), [s](const Record& r) { return r.status == s; }));
}

const Record* Report::find(const std::string& name) const {
  for (const auto& r : records_)
    if (r.name == name) return &r;
  return nullptr;
}

const Record* Report::first_failure() const {
  for (const auto& r : records_)
    if (r.status == Status::Fail) return &r;
  return nullptr;
}

std::string Report::to_text(bool timing) const {
  std::ostringstream os;
  for (const auto& r : records_) {
    os << '[' << to_string(r.status) << "] ";
    if (!r.suite.empty()) os << r.suite << ": ";
    os << r.name;
    if (!r.detail.empty()) os << " -- " << r.detail;
    if (timing) os << " (" << std::fixed << std::setprecision(1) << r.time_ms << " ms)";
    os << '\n';
    if (r.witness) {
      os << "    at " << r.witness->where << '\n'
         << "    lhs: " << r.witness->lhs << '\n'
         << "    rhs: " << r.witness->rhs << '\n';
    }
  }
  for (const auto& n : notes_) os << "note: " << n << '\n';
  os << "summary: " << count(Status::Pass) << " pass, " << count(Status::Fail) << " fail, "
     << count(Status::Vacuous) << " vacuous\n";
  return os.str();
}

CheckScope::CheckScope(std::string name, std::string anchor)
    : name_(std::move(name)), anchor_(std::move(anchor)), start_(std::chrono::steady_clock::now()) {}

void CheckScope::fail(std::string where, std::string lhs, std::string rhs) {
  ++cases_;
  ++failures_;
  if (!witness_) witness_ = Witness{std::move(where), std::move(lhs), std::move(rhs)};
}

Record CheckScope::finish(const std::string& unit) {
  Record r;
  r.name = name_;
  r.anchor = anchor_;
  if (failures_ > 0)
    r.status = Status::Fail;
  else if (vacuous_ || cases_ == 0)
    r.status = Status::Vacuous;
  else
    r.status = Status::Pass;
  r.witness = witness_;
  std::ostringstream os;
  if (!detail_.empty()) {
    os << detail_;
  } else {
    os << cases_ << ' ';
    // "1 case", "1 generator"
    if (cases_ == 1 && unit.size() > 1 && unit.back() == 's')
      os << unit.substr(0, unit.size() - 1);
    else
      os << unit;
    if (failures_ > 0) os << ", " << failures_ << " failing";
  }
  r.detail = os.str();
  r.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  return r;
}

}  // namespace qpfb
