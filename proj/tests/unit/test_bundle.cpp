#include <doctest.h>

#include "helpers.hpp"

using namespace testing;

namespace {

BundlePtr tube() { return corpus().bundle("tube"); }
PresentationPtr B1() { return corpus().algebra("B1"); }
PresentationPtr SU() { return corpus().algebra("SUnu2"); }
PresentationPtr S1() { return corpus().algebra("S1"); }
Element g(const PresentationPtr& p, const char* name) { return Element::generator(p, name); }

TensorElement t2(const Element& b, const Element& h) { return TensorElement::product_of({b, h}); }

TotalElement total(const TensorElement& l1, const TensorElement& l2) {
  TotalElement f;
  f.locals[1] = l1;
  f.locals[2] = l2;
  return f;
}

// (Delta_P (x) id) Delta_P: coproduct on the first H leg of the rank-3 locals.
TotalElement coaction_on_first_leg(const TotalElement& f) {
  TotalElement out;
  const auto& H = *tube()->fibre();
  for (const auto& [i, t] : f.locals) {
    out.locals[i] = t.expand_slot(1, [&](const Word& w) { return H.coproduct(w); });
  }
  return out;
}

}  // namespace

TEST_SUITE("chart change") {
  TEST_CASE("phi_12 on the example") {
    auto phi = tube()->build_phi(1, 2);
    auto one_s = Element::one(S1());
    CHECK(phi.apply(t2(one_s, g(SU(), "alpha"))) == t2(g(S1(), "a"), g(SU(), "alpha")));
    CHECK(phi.apply(t2(one_s, g(SU(), "gamma"))) == t2(g(S1(), "a*"), g(SU(), "gamma")));
    for (const auto& w : S1()->basis(2)) {
      auto b = Element::word(S1(), w);
      CHECK(phi.apply(t2(b, Element::one(SU()))) == t2(b, Element::one(SU())));
    }
  }

  TEST_CASE("phi_12 and phi_21 are mutually inverse") {
    auto p12 = tube()->build_phi(1, 2), p21 = tube()->build_phi(2, 1);
    for (const auto& b : S1()->basis(2)) {
      for (const auto& h : SU()->basis(2)) {
        auto t = t2(Element::word(S1(), b), Element::word(SU(), h));
        CHECK(p12.apply(p21.apply(t)) == t);
        CHECK(p21.apply(p12.apply(t)) == t);
      }
    }
  }
}

TEST_SUITE("transition data") {
  TEST_CASE("the example transition passes at degree 3") {
    Report r = check_transition_consistency(*tube(), 3);
    CHECK(r.passed());
    CHECK(r.count(Status::Pass) >= 4);
    CHECK(tube()->consistent());
    const Record* c = r.find("centrality of transition images");
    REQUIRE(c != nullptr);
    CHECK(c->status == Status::Pass);
  }

  TEST_CASE("tau_12(gamma) = a breaks the relations") {
    Bundle::Spec s{"broken", tube()->fibre(), tube()->cover(), {}};
    Morphism::Spec m;
    m.name = "bad12";
    m.source = SU();
    m.target = S1();
    auto a = g(S1(), "a"), as = g(S1(), "a*");
    m.images = {a, as, a, Element(S1())};
    CHECK_THROWS_AS(Morphism::create(m), WitnessError);
    s.transitions.fibre = tube()->fibre();
    s.transitions.maps[{1, 2}] = Morphism::create_unchecked(m);
    auto b = Bundle::create(s, 2);
    CHECK_FALSE(b->consistent());
    const Record* f = b->consistency_report().first_failure();
    REQUIRE(f != nullptr);
    CHECK(f->witness.has_value());
    CHECK_THROWS_AS(b->build_phi(1, 2), CertificateError);
  }
}

TEST_SUITE("gluing") {
  TEST_CASE("glue_element examples") {
    auto one1 = Element::one(B1());
    auto oneH = Element::one(SU());
    CHECK_NOTHROW(tube()->glue_element(total(t2(g(B1(), "y"), oneH), TensorElement({SU(), SU()})).locals));
    CHECK_NOTHROW(tube()->glue_element(total(t2(one1, oneH), t2(oneH, oneH)).locals));
    try {
      tube()->glue_element(total(t2(g(B1(), "x"), oneH), t2(oneH, oneH)).locals);
      FAIL("expected a gluing violation");
    } catch (const WitnessError& e) {
      CHECK(e.lhs() == t2(g(S1(), "a"), oneH).str());
      CHECK(e.rhs() == t2(Element::one(S1()), oneH).str());
    }
  }

  TEST_CASE("products of valid elements are valid") {
    auto span = tube()->spanning_set(2);
    REQUIRE(span.size() > 10);
    for (std::size_t i = 0; i < span.size(); i += 3) {
      for (std::size_t j = 0; j < span.size(); j += 4) {
        if (span[i].degree() + span[j].degree() > 3) continue;
        CHECK_FALSE(tube()->gluing_violation(span[i] * span[j]).has_value());
      }
    }
  }
}

TEST_SUITE("base algebra") {
  TEST_CASE("embedding examples") {
    auto b = tube();
    auto unit = b->base_element({{1, Element::one(B1())}, {2, Element::one(SU())}});
    CHECK(b->base_embed(unit) == b->one());
    auto yb = b->base_element({{1, g(B1(), "y")}, {2, Element(SU())}});
    CHECK(b->base_embed(yb) == total(t2(g(B1(), "y"), Element::one(SU())), TensorElement({SU(), SU()})));
    CHECK_NOTHROW(b->base_element({{1, g(B1(), "x")}, {2, g(SU(), "alpha")}}));
    CHECK_THROWS_AS(b->base_element({{1, g(B1(), "x")}, {2, Element::one(SU())}}), WitnessError);
  }

  TEST_CASE("iota is an algebra map") {
    auto b = tube();
    auto base = b->base_spanning_set(2);
    REQUIRE_FALSE(base.empty());
    for (const auto& u : base) {
      for (const auto& v : base) {
        CHECK(b->base_embed(b->base_multiply(u, v)) == b->base_embed(u) * b->base_embed(v));
      }
    }
  }
}

TEST_SUITE("coaction") {
  TEST_CASE("examples") {
    auto b = tube();
    auto yb = b->base_embed(b->base_element({{1, g(B1(), "y")}, {2, Element(SU())}}));
    TotalElement expected;
    for (const auto& [i, t] : yb.locals) {
      TensorElement r({t.slots()[0], SU(), SU()});
      for (const auto& [k, c] : t.terms()) r.add_normal({k[0], k[1], Word{}}, c);
      expected.locals[i] = r;
    }
    CHECK(b->coaction(yb) == expected);

    auto f = b->glue_element(total(t2(Element::one(B1()), g(SU(), "alpha")), t2(g(SU(), "alpha*"), g(SU(), "alpha"))).locals);
    TensorElement first({B1(), SU(), SU()});
    first.add_product({Element::one(B1()), g(SU(), "alpha"), g(SU(), "alpha")}, Scalar(1L));
    first.add_product({Element::one(B1()), g(SU(), "gamma*"), g(SU(), "gamma")}, -nu());
    CHECK(b->coaction(f).locals.at(1) == first);
  }

  TEST_CASE("coassociative and counital on the spanning set") {
    auto b = tube();
    for (const auto& f : b->spanning_set(2)) {
      auto cf = b->coaction(f);
      CHECK(b->counit_leg(cf) == f);
      CHECK(b->coaction(cf) == coaction_on_first_leg(cf));
      CHECK_FALSE(b->gluing_violation(cf).has_value());
    }
  }
}
