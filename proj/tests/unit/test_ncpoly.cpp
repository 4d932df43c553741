#include <doctest.h>

#include "helpers.hpp"

using namespace testing;

namespace {

// The tube algebra built directly from a spec, independent of the file reader.
PresentationPtr make_b1() {
  Presentation::Spec s;
  s.name = "B1";
  s.params = {"q"};
  s.generators = {"x", "x*", "y"};
  s.star_pairs = {{"x", "x*"}, {"y", "y"}};
  const Gen x = 0, xs = 1, y = 2;
  s.rules = {
      {{x, xs}, {{Word{}, Scalar(1L)}}},
      {{xs, x}, {{Word{}, Scalar(1L)}}},
      {{y, x}, {{Word{x, y}, q(-1)}}},
      {{y, xs}, {{Word{xs, y}, q()}}},
  };
  return Presentation::create(s);
}

const PresentationPtr& b1() {
  static const PresentationPtr p = make_b1();
  return p;
}

}  // namespace

TEST_SUITE("scalar") {
  TEST_CASE("exact Laurent arithmetic") {
    CHECK(q() * q(-1) == Scalar(1L));
    CHECK((q() + Scalar(1L)) * (q() - Scalar(1L)) == q(2) - Scalar(1L));
    CHECK((q() - q()).is_zero());
    CHECK((q() - q()).terms().empty());
    CHECK(Scalar(Rational(1, 3)) * Scalar(3L) == Scalar(1L));
    CHECK(q(3).unit_inverse() == q(-3));
    CHECK_THROWS_AS((q() + Scalar(1L)).unit_inverse(), std::domain_error);
  }

  TEST_CASE("specialization is a separate evaluation") {
    const int qid = *ParamRegistry::find("q");
    Scalar s = q(2) - Scalar(2L) * q(-1);
    CHECK(s.specialize({{qid, Rational(1)}}) == Scalar(-1L));
    CHECK(s.specialize({{qid, Rational(2)}}) == Scalar(3L));
    CHECK(s == q(2) - Scalar(2L) * q(-1));
  }

  TEST_CASE("canonical text") {
    CHECK(Scalar(1L).str() == "1");
    CHECK((q() + Scalar(1L)).str() == "(q + 1)");
    CHECK((Scalar(1L) - nu(-2)).str() == "(1 - nu^-2)");
    CHECK((-nu()).str() == "-nu");
    CHECK(Scalar(Rational(-2, 3)).str() == "-2/3");
  }
}

TEST_SUITE("normalize") {
  TEST_CASE("quantum plane relation and inverse pair") {
    auto p = b1();
    CHECK(Element::normalize(p, {{word_of(p, {"y", "x"}), Scalar(1L)}}) == mono(p, {"x", "y"}, q(-1)));
    CHECK(Element::normalize(p, {{word_of(p, {"x", "x*"}), Scalar(1L)}}) == Element::one(p));
    CHECK(Element::normalize(p, {{word_of(p, {"x*", "x"}), Scalar(1L)}}) == Element::one(p));
  }

  TEST_CASE("irreducible words are fixed") {
    auto p = b1();
    for (const auto& w : p->basis(4)) {
      CHECK(Element::normalize(p, {{w, Scalar(1L)}}) == Element::word(p, w));
    }
  }

  TEST_CASE("idempotent on every word of degree <= 4") {
    auto p = b1();
    std::vector<Word> words{Word{}};
    for (int len = 1; len <= 4; ++len) {
      std::vector<Word> next;
      for (const auto& w : words) {
        if (static_cast<int>(w.size()) != len - 1) continue;
        for (Gen g = 0; g < p->generator_count(); ++g) {
          Word v = w;
          v.push_back(g);
          next.push_back(v);
        }
      }
      words.insert(words.end(), next.begin(), next.end());
    }
    for (const auto& w : words) {
      Element once = Element::normalize(p, {{w, Scalar(1L)}});
      RawSum raw;
      for (const auto& [u, c] : once.terms()) raw.emplace_back(u, c);
      CHECK(Element::normalize(p, raw) == once);
      for (const auto& [u, c] : once.terms()) CHECK(p->is_irreducible(u));
    }
  }

  TEST_CASE("step budget guard names the word") {
    Presentation::Spec s = b1()->spec();
    auto tight = Presentation::create(s, 3);
    Word w = word_of(tight, {"y", "y", "y", "x", "x", "x"});
    try {
      (void)Element::normalize(tight, {{w, Scalar(1L)}});
      FAIL("expected NonTerminationError");
    } catch (const NonTerminationError& e) {
      CHECK(e.word() == "y y y x x x");
    }
  }
}

TEST_SUITE("presentation") {
  TEST_CASE("validation") {
    Presentation::Spec s;
    s.name = "Empty";
    CHECK_THROWS_AS(Presentation::create(s), Error);

    Presentation::Spec up = b1()->spec();
    up.rules.push_back({{0, 2}, {{Word{2, 0}, Scalar(1L)}}});  // x y -> y x raises the order
    CHECK_THROWS_AS(Presentation::create(up), Error);

    Presentation::Spec bad_star = b1()->spec();
    bad_star.star_pairs = {{"x", "x*"}, {"x*", "y"}};
    CHECK_THROWS_AS(Presentation::create(bad_star), Error);
  }

  TEST_CASE("shipped presentations are locally confluent at degree 4") {
    const auto& ws = corpus();
    for (const char* name : {"SUnu2", "B1", "S1", "U1"}) {
      CAPTURE(name);
      Report r = check_presentation(ws.algebra(name), 4);
      CHECK(r.passed());
      CHECK(r.count(Status::Pass) >= 1);
    }
  }

  TEST_CASE("conflicting rules are reported at the overlap") {
    Presentation::Spec s;
    s.name = "Clash";
    s.params = {"q"};
    s.generators = {"x", "y"};
    s.rules = {{{1, 0}, {{Word{0, 1}, q()}}}, {{1, 0}, {{Word{0, 1}, Scalar(1L)}}}};
    Report r = check_presentation(Presentation::create(s), 2);
    const Record* f = r.first_failure();
    REQUIRE(f != nullptr);
    REQUIRE(f->witness);
    CHECK(f->witness->where.find("y x") != std::string::npos);
    CHECK(f->witness->lhs != f->witness->rhs);
  }
}

TEST_SUITE("multiply") {
  TEST_CASE("examples") {
    auto p = b1();
    auto x = mono(p, {"x"}), xs = mono(p, {"x*"}), y = mono(p, {"y"});
    CHECK(x * y == mono(p, {"x", "y"}));
    CHECK(y * x == mono(p, {"x", "y"}, q(-1)));
    CHECK(xs * x == Element::one(p));
    CHECK(multiply(y, xs) == mono(p, {"x*", "y"}, q()));
  }

  TEST_CASE("mismatched presentations") {
    auto other = corpus().algebra("S1");
    CHECK_THROWS_AS(mono(b1(), {"x"}) * Element::generator(other, "a"), MismatchError);
  }

  TEST_CASE("associative and unital on normal monomials") {
    for (const char* name : {"B1", "SUnu2"}) {
      auto p = corpus().algebra(name);
      auto basis = p->basis(2);
      auto one = Element::one(p);
      for (const auto& a : basis) {
        Element ea = Element::word(p, a);
        CHECK(one * ea == ea);
        CHECK(ea * one == ea);
        for (const auto& b : basis) {
          Element eb = Element::word(p, b);
          Element ab = ea * eb;
          for (const auto& c : basis) {
            Element ec = Element::word(p, c);
            CHECK(ab * ec == ea * (eb * ec));
          }
        }
      }
    }
  }

  TEST_CASE("tube becomes commutative at q = 1") {
    auto p = corpus_at_one().algebra("B1");
    CHECK(p->is_commutative());
    for (const auto& a : p->basis(3)) {
      for (const auto& b : p->basis(3)) {
        CHECK(Element::word(p, a) * Element::word(p, b) == Element::word(p, b) * Element::word(p, a));
      }
    }
    CHECK_FALSE(corpus().algebra("B1")->is_commutative());
  }
}

TEST_SUITE("star") {
  TEST_CASE("examples") {
    auto p = b1();
    CHECK(star(mono(p, {"x"})) == mono(p, {"x*"}));
    CHECK(star(mono(p, {"x", "y"})) == mono(p, {"x*", "y"}, q()));
    CHECK(star(Element::one(p)) == Element::one(p));
    CHECK(star(q() * mono(p, {"y"})) == q() * mono(p, {"y"}));
  }

  TEST_CASE("antimultiplicative involution") {
    for (const char* name : {"B1", "SUnu2"}) {
      auto p = corpus().algebra(name);
      for (const auto& a : p->basis(3)) {
        Element ea = Element::word(p, a);
        CHECK(star(star(ea)) == ea);
        for (const auto& b : p->basis(2)) {
          Element eb = Element::word(p, b);
          CHECK(star(ea * eb) == star(eb) * star(ea));
        }
      }
    }
  }
}

TEST_SUITE("morphism") {
  TEST_CASE("restriction of the tube") {
    const auto& ws = corpus();
    auto pi = ws.morphism("pi12");
    auto B = ws.algebra("B1");
    auto S = ws.algebra("S1");
    CHECK(pi->apply(mono(B, {"x"})) == Element::generator(S, "a"));
    CHECK(pi->apply(mono(B, {"x", "x", "y"})).is_zero());
    CHECK(pi->apply(Element::one(B)) == Element::one(S));
  }

  TEST_CASE("identity morphism") {
    auto p = corpus().algebra("SUnu2");
    auto id = Morphism::identity(p);
    for (const auto& w : p->basis(2)) CHECK(id->apply(Element::word(p, w)) == Element::word(p, w));
  }

  TEST_CASE("multiplicative on monomial pairs") {
    const auto& ws = corpus();
    for (const char* name : {"pi12", "pi21", "tau12", "tau1"}) {
      auto m = ws.morphism(name);
      auto p = m->source();
      for (const auto& a : p->basis(2)) {
        for (const auto& b : p->basis(2)) {
          Element ea = Element::word(p, a), eb = Element::word(p, b);
          CHECK(m->apply(ea * eb) == m->apply(ea) * m->apply(eb));
        }
      }
    }
  }

  TEST_CASE("uncertified images are rejected") {
    const auto& ws = corpus();
    Morphism::Spec s;
    s.name = "broken";
    s.source = ws.algebra("B1");
    s.target = ws.algebra("S1");
    auto a = Element::generator(s.target, "a");
    s.images = {a, Element::generator(s.target, "a*"), a};  // y -> a breaks y x = q^-1 x y
    CHECK_THROWS_AS(Morphism::create(s), WitnessError);
    auto unchecked = Morphism::create_unchecked(s);
    CHECK_FALSE(unchecked->certified());
    CHECK_THROWS_AS(unchecked->apply(mono(s.source, {"y"})), CertificateError);
    CHECK_FALSE(unchecked->check().passed());
  }
}
