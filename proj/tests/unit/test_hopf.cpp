#include <doctest.h>

#include "helpers.hpp"

using namespace testing;

namespace {

HopfPtr su2() { return corpus().hopf("SUnu2"); }
PresentationPtr su2_alg() { return su2()->algebra(); }
Element gen(const PresentationPtr& p, const char* g) { return Element::generator(p, g); }

TensorElement pair_sum(const PresentationPtr& p, std::initializer_list<std::tuple<Scalar, Element, Element>> terms) {
  TensorElement t({p, p});
  for (const auto& [c, a, b] : terms) t.add_product({a, b}, c);
  return t;
}

}  // namespace

TEST_SUITE("coproduct") {
  TEST_CASE("group-like generator of U(1)") {
    auto H = corpus().hopf("U1");
    auto a = gen(H->algebra(), "a");
    CHECK(H->coproduct(a) == TensorElement::product_of({a, a}));
    CHECK(H->coproduct_iterated(a, 2) == TensorElement::product_of({a, a, a}));
    CHECK(H->coproduct_iterated(a, 0) == TensorElement::product_of({a}));
  }

  TEST_CASE("compact matrix coproduct of SU_nu(2)") {
    auto p = su2_alg();
    auto al = gen(p, "alpha"), als = gen(p, "alpha*"), ga = gen(p, "gamma"), gas = gen(p, "gamma*");
    CHECK(su2()->coproduct(al) == pair_sum(p, {{Scalar(1L), al, al}, {-nu(), gas, ga}}));
    CHECK(su2()->coproduct(ga) == pair_sum(p, {{Scalar(1L), ga, al}, {Scalar(1L), als, ga}}));
  }

  TEST_CASE("coassociativity on monomials of degree <= 3") {
    for (const char* name : {"U1", "S1", "SUnu2"}) {
      auto H = corpus().hopf(name);
      for (const auto& w : H->algebra()->basis(3)) {
        Element h = Element::word(H->algebra(), w);
        CHECK(H->coproduct_iterated(h, 2) == H->coproduct_iterated_right(h, 2));
      }
    }
  }

  TEST_CASE("Delta is multiplicative on monomial pairs") {
    auto H = su2();
    auto basis = H->algebra()->basis(2);
    for (const auto& a : basis) {
      for (const auto& b : basis) {
        Element ea = Element::word(H->algebra(), a), eb = Element::word(H->algebra(), b);
        CHECK(H->coproduct(ea * eb) == H->coproduct(ea) * H->coproduct(eb));
      }
    }
  }
}

TEST_SUITE("structure maps") {
  TEST_CASE("values on generators") {
    auto p = su2_alg();
    CHECK(su2()->counit(gen(p, "alpha")) == Scalar(1L));
    CHECK(su2()->counit(gen(p, "gamma")).is_zero());
    CHECK(su2()->structure_map(StructureKind::Counit, gen(p, "alpha")) == Element::one(p));
    CHECK(su2()->antipode(gen(p, "gamma")) == -nu() * gen(p, "gamma"));
    CHECK(su2()->antipode(gen(p, "alpha")) == gen(p, "alpha*"));
    CHECK(su2()->antipode_inv(gen(p, "gamma")) == -nu(-1) * gen(p, "gamma"));
    auto U = corpus().hopf("U1");
    CHECK(U->antipode(gen(U->algebra(), "a")) == gen(U->algebra(), "a*"));
  }

  TEST_CASE("antipode is antimultiplicative and inverted by S^-1") {
    auto H = su2();
    auto p = H->algebra();
    for (const auto& a : p->basis(3)) {
      Element ea = Element::word(p, a);
      CHECK(H->antipode_inv(H->antipode(ea)) == ea);
      CHECK(H->antipode(H->antipode_inv(ea)) == ea);
      for (const auto& b : p->basis(1)) {
        Element eb = Element::word(p, b);
        CHECK(H->antipode(ea * eb) == H->antipode(eb) * H->antipode(ea));
      }
    }
  }

  TEST_CASE("missing inverse antipode") {
    HopfAlgebra::Spec s = corpus().hopf("U1")->spec();
    s.antipode_inv.reset();
    auto H = HopfAlgebra::create(s);
    CHECK_FALSE(H->has_antipode_inv());
    CHECK_THROWS_AS(H->structure_map(StructureKind::AntipodeInv, gen(s.algebra, "a")), Error);
  }
}

TEST_SUITE("hopf axioms") {
  TEST_CASE("shipped Hopf algebras pass at degree 3") {
    for (const char* name : {"U1", "S1", "SUnu2"}) {
      CAPTURE(name);
      Report r = check_hopf_axioms(*corpus().hopf(name), 3);
      CHECK(r.passed());
      CHECK(r.count(Status::Fail) == 0);
      CHECK(r.count(Status::Pass) >= 6);
    }
  }

  TEST_CASE("wrong antipode sign is caught at gamma") {
    HopfAlgebra::Spec s = su2()->spec();
    auto p = s.algebra;
    s.antipode[p->generator("gamma")] = nu() * gen(p, "gamma");
    s.antipode_inv.reset();
    auto H = HopfAlgebra::create(s);
    Report r = check_hopf_axioms(*H, 2);
    const Record* f = r.first_failure();
    REQUIRE(f != nullptr);
    CHECK(f->name == "left antipode of SUnu2");
    // alpha* precedes gamma in the monomial order and already involves S(gamma)
    REQUIRE(f->witness);
    CHECK(f->witness->where == "alpha*");
    // at gamma itself: S(gamma) alpha + S(alpha*) gamma = 2 nu gamma alpha != eps(gamma) 1 = 0
    Element g = gen(p, "gamma");
    Element lhs(p);
    for (const auto& [k, c] : H->coproduct(g).terms()) lhs += c * (H->antipode(k[0]) * Element::word(p, k[1]));
    CHECK(lhs == Scalar(2L) * nu() * (g * gen(p, "alpha")));
  }
}

TEST_SUITE("convolution") {
  TEST_CASE("unit map is the convolution unit") {
    auto H = su2();
    auto id = LinMap::identity(H);
    auto u = LinMap::unit(H, H->algebra());
    auto left = LinMap::convolve(u, id), right = LinMap::convolve(id, u);
    for (const auto& w : H->algebra()->basis(2)) {
      CHECK(left->apply(w) == Element::word(H->algebra(), w));
      CHECK(right->apply(w) == Element::word(H->algebra(), w));
    }
  }

  TEST_CASE("id * S is eps 1 on generators") {
    auto H = su2();
    auto f = LinMap::convolve(LinMap::identity(H), LinMap::precompose_S(LinMap::identity(H)));
    for (Gen g = 0; g < H->algebra()->generator_count(); ++g) {
      CHECK(f->apply(Word{g}) == Element::scalar(H->algebra(), H->counit(Word{g})));
    }
  }

  TEST_CASE("square of the identity on alpha") {
    auto H = su2();
    auto p = H->algebra();
    Element expected = gen(p, "alpha") * gen(p, "alpha") - nu() * (gen(p, "gamma*") * gen(p, "gamma"));
    CHECK(LinMap::convolve(LinMap::identity(H), LinMap::identity(H))->apply(gen(p, "alpha")) == expected);
    CHECK(LinMap::power(LinMap::identity(H), 2)->apply(gen(p, "alpha")) == expected);
  }

  TEST_CASE("powers") {
    auto H = su2();
    auto p = H->algebra();
    auto id = LinMap::identity(H);
    for (const auto& w : p->basis(2)) CHECK(LinMap::power(id, 1)->apply(w) == Element::word(p, w));
    // sum S(alpha_1) S(alpha_2) with S(alpha) = alpha*, S(gamma*) = -nu^-1 gamma*, S(gamma) = -nu gamma
    Element expected = gen(p, "alpha*") * gen(p, "alpha*") - nu() * (gen(p, "gamma*") * gen(p, "gamma"));
    CHECK(LinMap::power_via_antipode(id, 2)->apply(gen(p, "alpha")) == expected);
    CHECK_THROWS_AS(LinMap::power(id, 0), Error);
  }

  TEST_CASE("associativity on triples of maps") {
    auto H = su2();
    auto id = LinMap::identity(H);
    std::vector<LinMapPtr> maps{id, LinMap::precompose_S(id), LinMap::power(id, 2)};
    for (const auto& f : maps) {
      for (const auto& g : maps) {
        for (const auto& h : maps) {
          auto a = LinMap::convolve(LinMap::convolve(f, g), h);
          auto b = LinMap::convolve(f, LinMap::convolve(g, h));
          for (const auto& w : H->algebra()->basis(2)) CHECK(a->apply(w) == b->apply(w));
        }
      }
    }
  }

  TEST_CASE("powers of id invert through S for n <= 3") {
    auto H = su2();
    auto id = LinMap::identity(H);
    for (int n = 1; n <= 3; ++n) {
      CAPTURE(n);
      auto f = LinMap::power(id, n);
      auto g = LinMap::power_via_antipode(id, n);
      CHECK(check_conv_inverse(*f, *g, 2, InverseSide::Both, false).passed());
      auto fg = LinMap::convolve(f, g);
      for (const auto& w : H->algebra()->basis(2)) {
        CHECK(fg->apply(w) == Element::scalar(H->algebra(), H->counit(w)));
      }
    }
  }

  TEST_CASE("check_conv_inverse examples") {
    const auto& ws = corpus();
    auto H = su2();
    auto id = LinMap::identity(H);
    CHECK(check_conv_inverse(*LinMap::power(id, 2), *LinMap::power_via_antipode(id, 2), 2, InverseSide::Both, false)
              .passed());
    auto t1 = LinMap::hom(H, ws.morphism("tau1"));
    CHECK(check_conv_inverse(*t1, *LinMap::precompose_S(t1), 2, InverseSide::Both, false).passed());

    Report r = check_conv_inverse(*id, *id, 2, InverseSide::Left, false);
    const Record* f = r.first_failure();
    REQUIRE(f != nullptr);
    REQUIRE(f->witness);
    CHECK(f->witness->where == "alpha");
  }

  TEST_CASE("twisted inverse of a right map") {
    auto H = su2();
    auto t1 = LinMap::hom(H, corpus().morphism("tau1"));
    auto r = LinMap::precompose_Sinv(t1);
    CHECK(check_conv_inverse(*r, *r->convolution_inverse(Side::Right), 2, InverseSide::Both, true).passed());
  }
}
