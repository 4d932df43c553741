#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace qpfb {

enum class Status { Pass, Fail, Vacuous };

std::string to_string(Status s);

/// Both sides of a failed (or, for searches, a found) identity, in normal form.
struct Witness {
  std::string where;
  std::string lhs;
  std::string rhs;
};

struct Record {
  std::string suite;
  std::string name;
  /// The identity being checked, written out in plain ASCII.
  std::string anchor;
  Status status = Status::Pass;
  std::optional<Witness> witness;
  std::string detail;
  double time_ms = 0.0;
};

class Report {
 public:
  void add(Record r) { records_.push_back(std::move(r)); }
  void append(const Report& other, const std::string& suite = {});
  void note(const std::string& text);

  /// True iff no record failed.
  bool passed() const;
  std::size_t count(Status s) const;
  const Record* find(const std::string& name) const;
  const Record* first_failure() const;

  const std::vector<Record>& records() const { return records_; }
  const std::vector<std::string>& notes() const { return notes_; }

  std::string to_text(bool timing = true) const;

 private:
  std::vector<Record> records_;
  std::vector<std::string> notes_;
};

/// Accumulates one record: counts cases, keeps the first failure.
class CheckScope {
 public:
  CheckScope(std::string name, std::string anchor);

  void pass() { ++cases_; }
  void fail(std::string where, std::string lhs, std::string rhs);
  /// Record a result for one case: equal sides pass, otherwise fail with both.
  template <typename T>
  bool expect_equal(const std::string& where, const T& lhs, const T& rhs) {
    if (lhs == rhs) {
      pass();
      return true;
    }
    fail(where, lhs.str(), rhs.str());
    return false;
  }
  bool failed() const { return failures_ > 0; }
  std::size_t cases() const { return cases_; }

  void set_detail(std::string d) { detail_ = std::move(d); }
  void mark_vacuous() { vacuous_ = true; }
  Record finish(const std::string& unit = "cases");

 private:
  std::string name_;
  std::string anchor_;
  std::string detail_;
  std::size_t cases_ = 0;
  std::size_t failures_ = 0;
  bool vacuous_ = false;
  std::optional<Witness> witness_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace qpfb
