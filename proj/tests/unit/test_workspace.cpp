#include <doctest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"

using namespace testing;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ParseError parse_failure(const std::string& text, const std::string& name = "t.qpfb") {
  Workspace ws;
  try {
    ws.parse_text(text, name);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError(name, 0, 0, "");
}

}  // namespace

TEST_SUITE("workspace") {
  TEST_CASE("B1 as shipped") {
    auto p = corpus().algebra("B1");
    CHECK(p->generator_count() == 3);
    CHECK(p->rules().size() == 4);
    CHECK(p->spec().star_pairs.size() == 2);
    CHECK(p->params() == std::vector<std::string>{"q"});
  }

  TEST_CASE("declarations are registered") {
    const auto& ws = corpus();
    for (const char* h : {"U1", "S1", "SUnu2"}) CHECK(ws.hopf(h) != nullptr);
    CHECK(ws.bundle("tube")->charts().size() == 2);
    CHECK_NOTHROW(ws.family("g1"));
    CHECK_NOTHROW(ws.connection("A"));
    CHECK_NOTHROW(ws.ideal("R"));
    CHECK(ws.algebra("nope") == nullptr);
  }

  TEST_CASE("print then parse is the identity on every shipped file") {
    for (const char* stem : {"u1", "s1", "sunu2", "tube", "example", "u1_central"}) {
      CAPTURE(stem);
      const auto& ws = corpus();
      std::size_t doc = 0;
      for (; doc < ws.document_count(); ++doc) {
        if (ws.document_name(doc) == corpus_file(stem)) break;
      }
      REQUIRE(doc < ws.document_count());
      std::string printed = ws.print(doc);
      CHECK(normalize_layout(printed) == normalize_layout(slurp(corpus_file(stem))));

      Workspace again;
      for (std::size_t i = 0; i < doc; ++i) again.parse_text(ws.print(i), ws.document_name(i));
      again.parse_text(printed, "reprinted");
      CHECK(again.print(doc) == printed);
    }
  }

  TEST_CASE("specialized parameters") {
    auto p = corpus_at_one().algebra("B1");
    CHECK(p->is_commutative());
    CHECK_FALSE(corpus().algebra("B1")->is_commutative());
  }
}

TEST_SUITE("parse errors") {
  TEST_CASE("empty generator list") {
    auto e = parse_failure("algebra E\ngens\n");
    CHECK(e.line() == 2);
    CHECK(e.message().find("empty generator list") != std::string::npos);
  }

  TEST_CASE("undefined symbol is named") {
    auto e = parse_failure("algebra U\ngens x y\nrule y x -> z x\n");
    CHECK(e.line() == 3);
    CHECK(e.column() == 13);
    CHECK(e.message().find("'z'") != std::string::npos);
  }

  TEST_CASE("rule that does not lower the order") {
    auto e = parse_failure("algebra N\ngens x y\nrule x y -> y x y\n");
    CHECK(e.line() == 3);
    CHECK(e.message().find("does not lower") != std::string::npos);
  }

  TEST_CASE("unbalanced parenthesis in a file") {
    Workspace ws;
    try {
      ws.parse_file(data_file("bad_syntax.qpfb"));
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() == 17);
      CHECK(e.message() == "expected ')'");
      CHECK(std::string(e.what()).find("bad_syntax.qpfb:3:17") != std::string::npos);
    }
  }

  TEST_CASE("missing file") {
    Workspace ws;
    CHECK_THROWS_AS(ws.parse_file(data_file("does_not_exist.qpfb")), Error);
  }

  TEST_CASE("layout normalization") {
    CHECK(normalize_layout("# c\n\nalgebra  A \n gens x\n") == normalize_layout("algebra A\ngens x"));
  }
}
