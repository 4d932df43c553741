#include <doctest.h>
#include <json.hpp>

#include "helpers.hpp"
#include "run_cli.hpp"

using namespace testing;
using nlohmann::json;

namespace {

std::string example_files() {
  return files_arg({corpus_file("sunu2"), corpus_file("s1"), corpus_file("tube"), corpus_file("example")});
}

}  // namespace

TEST_SUITE("qpfb check") {
  TEST_CASE("example suite passes") {
    auto r = run_qpfb("check" + example_files() + " -s example --json --no-timing");
    CHECK(r.status == 0);
    auto j = json::parse(r.out);
    CHECK(j["exit_status"] == 0);
    CHECK(j["config"]["suite"] == "example");
    CHECK(j["summary"]["fail"] == 0);
    CHECK(j["summary"]["pass"].get<int>() >= 2);
    for (const auto& rec : j["records"]) CHECK(rec["time_ms"] == 0.0);
  }

  TEST_CASE("corrupt family fails with a witness") {
    auto r = run_qpfb("check" +
                      files_arg({corpus_file("sunu2"), corpus_file("s1"), corpus_file("tube"),
                                 data_file("corrupt_family.qpfb")}) +
                      " -s gauge --json --no-timing");
    CHECK(r.status == 1);
    auto j = json::parse(r.out);
    CHECK(j["exit_status"] == 1);
    bool found = false;
    for (const auto& rec : j["records"]) {
      if (rec["status"] != "fail") continue;
      REQUIRE(rec["witness"].is_object());
      if (rec["name"] == "overlap compatibility of bad") {
        found = true;
        CHECK(rec["witness"]["where"] == "alpha on overlap 12");
        CHECK(rec["witness"]["lhs"] == "a");
        CHECK(rec["witness"]["rhs"] == "a a");
      }
    }
    CHECK(found);
  }

  TEST_CASE("text output") {
    auto r = run_qpfb("check" + example_files() + " -s hopf", true);
    CHECK(r.status == 0);
    CHECK(r.out.find("[pass] hopf: coassociativity of SUnu2") != std::string::npos);
  }

  TEST_CASE("usage errors exit 2") {
    CHECK(run_qpfb("check" + example_files() + " -s nosuch").status == 2);
    CHECK(run_qpfb("check" + example_files() + " -d 9").status == 2);
    CHECK(run_qpfb("check").status == 2);
    CHECK(run_qpfb("check" + example_files() + " --set q=0").status == 2);
    CHECK(run_qpfb("check" + example_files() + " --set q=abc").status == 2);
  }

  TEST_CASE("syntax errors exit 2 with a location") {
    auto r = run_qpfb("check" + files_arg({data_file("bad_syntax.qpfb")}), true);
    CHECK(r.status == 2);
    CHECK(r.out.find("bad_syntax.qpfb:3:17: expected ')'") != std::string::npos);
    auto j = run_qpfb("check" + files_arg({data_file("bad_syntax.qpfb")}) + " --json");
    CHECK(j.status == 2);
    auto doc = json::parse(j.out);
    CHECK(doc["exit_status"] == 2);
  }

  TEST_CASE("json output is deterministic without timing") {
    std::string args = "check" + example_files() + " -s example --json --no-timing";
    auto a = run_qpfb(args), b = run_qpfb(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }

  TEST_CASE("specialized run") {
    auto r = run_qpfb("check" + example_files() + " -s example --set q=1 --set nu=1 --json --no-timing");
    CHECK(r.status == 0);
    auto j = json::parse(r.out);
    CHECK(j["config"]["set"]["q"] == "1");
  }
}

TEST_SUITE("qpfb format") {
  TEST_CASE("formatting is idempotent") {
    auto once = run_qpfb("format" + files_arg({corpus_file("sunu2")}));
    CHECK(once.status == 0);
    CHECK(normalize_layout(once.out) == normalize_layout(
        run_qpfb("format" + files_arg({corpus_file("sunu2")})).out));
    CHECK(once.out.find("algebra SUnu2") != std::string::npos);
  }
}
