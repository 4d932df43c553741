#include <doctest.h>

#include "helpers.hpp"

using namespace testing;

namespace {

std::vector<Word> fibre_generators(const HopfPtr& H) {
  std::vector<Word> out;
  for (Gen g = 0; g < H->algebra()->generator_count(); ++g) out.push_back(Word{g});
  return out;
}

}  // namespace

TEST_SUITE("standard Hopf algebras") {
  TEST_CASE("lookup and certification") {
    auto U = standard_hopf("U1");
    CHECK(U->algebra()->generator_count() == 2);
    CHECK(standard_hopf("U1") == U);
    auto H = standard_hopf("SUnu2");
    CHECK(H->algebra()->generator_count() == 4);
    CHECK(H->algebra()->rules().size() == 7);
    CHECK_NOTHROW(standard_hopf("S1"));
    CHECK_THROWS_AS(standard_hopf("bogus"), Error);
  }

  TEST_CASE("corpus paths") {
    CHECK(corpus_file("tube").size() > corpus_dir().size());
    CHECK(corpus_file("tube").find("tube.qpfb") != std::string::npos);
  }
}

TEST_SUITE("example") {
  TEST_CASE("n = 1 builds and verifies") {
    Example ex = build_example({});
    CHECK(ex.report.passed());
    CHECK(ex.report.count(Status::Fail) == 0);
    CHECK(ex.gauge.name() == "g1");
    auto p = ex.workspace->algebra("B1");
    auto H = ex.workspace->hopf("SUnu2");
    const auto& fam = ex.gauge.family();
    CHECK(fam.taus.at(1)->apply(word_of(H->algebra(), {"alpha"})) == Element::generator(p, "x"));
    CHECK(fam.taus.at(1)->apply(word_of(H->algebra(), {"gamma"})).is_zero());
  }

  TEST_CASE("n = 2 builds and verifies") {
    Example ex = build_example({2, {}, 2, true});
    CHECK(ex.report.passed());
    auto p = ex.workspace->algebra("B1");
    auto H = ex.workspace->hopf("SUnu2");
    auto x = Element::generator(p, "x");
    CHECK(ex.gauge.family().taus.at(1)->apply(word_of(H->algebra(), {"alpha"})) == x * x);
  }

  TEST_CASE("invalid configurations") {
    CHECK_THROWS_AS(build_example({0, {}, 2, false}), Error);
  }

  TEST_CASE("printed compatibility for n <= 3") {
    auto ws = load_example_workspace();
    for (int n = 1; n <= 3; ++n) {
      CAPTURE(n);
      Report r = check_printed_compatibility(example_family(*ws, n));
      CHECK(r.passed());
      CHECK(r.count(Status::Pass) == 1);
    }
  }

  TEST_CASE("compose(g1, g1) = g2 on the spanning set") {
    auto ws = load_example_workspace();
    auto g1 = GaugeTransformation::from_family(example_family(*ws, 1), 2);
    auto g2 = GaugeTransformation::unchecked(example_family(*ws, 2));
    auto gg = compose(g1, g1);
    auto id = compose(g1, invert(g1));
    for (const auto& f : ws->bundle("tube")->spanning_set(2)) {
      CHECK(gg.apply(f) == g2.apply(f));
      CHECK(id.apply(f) == f);
    }
  }

  TEST_CASE("g1 is an automorphism at q = nu = 1") {
    Example ex = build_example({1, {{"q", 1}, {"nu", 1}}, 2, false});
    CHECK_FALSE(find_non_automorphism_witness(ex.gauge, 2).has_value());
    Example sym = build_example({1, {}, 2, false});
    auto w = find_non_automorphism_witness(sym.gauge, 2);
    REQUIRE(w.has_value());
    REQUIRE(w->factor.has_value());
    CHECK(*w->factor == q());
  }

  TEST_CASE("chart maps send generators into the charts") {
    auto ws = load_example_workspace();
    auto fam = example_family(*ws, 3);
    auto H = ws->hopf("SUnu2");
    for (const auto& w : fibre_generators(H)) {
      CHECK(fam.taus.at(1)->apply(w).presentation() == ws->algebra("B1"));
      CHECK(fam.taus.at(2)->apply(w).presentation() == H->algebra());
    }
  }
}
