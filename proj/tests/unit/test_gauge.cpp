#include <doctest.h>

#include "helpers.hpp"

using namespace testing;

namespace {

BundlePtr tube() { return corpus().bundle("tube"); }
PresentationPtr B1() { return corpus().algebra("B1"); }
PresentationPtr SU() { return corpus().algebra("SUnu2"); }
HopfPtr H() { return corpus().hopf("SUnu2"); }
Element g(const PresentationPtr& p, const char* name) { return Element::generator(p, name); }

const GaugeTransformation& g1() {
  static const GaugeTransformation t = GaugeTransformation::from_family(example_family(corpus(), 1), 2);
  return t;
}

const std::vector<TotalElement>& span() {
  static const std::vector<TotalElement> s = tube()->spanning_set(2);
  return s;
}

// Same action on the degree-2 spanning set of P.
void check_same_action(const GaugeTransformation& s, const GaugeTransformation& t) {
  for (const auto& f : span()) CHECK(s.apply(f) == t.apply(f));
}

GaugeFamily with_tau1(LinMapPtr tau1, const std::string& name) {
  GaugeFamily fam = example_family(corpus(), 1);
  fam.name = name;
  fam.taus[1] = std::move(tau1);
  fam.tau_invs[1] = LinMap::precompose_S(fam.taus[1]);
  return fam;
}

}  // namespace

TEST_SUITE("construction") {
  TEST_CASE("the n = 1 family builds and is unital") {
    CHECK(g1().name() == "g1");
    CHECK(g1().side() == Side::Left);
    CHECK(g1().g(Word{}) == tube()->one());
    CHECK(g1().g(Word{}, true) == tube()->one());
  }

  TEST_CASE("a family violating the overlap identity is rejected at alpha") {
    auto fallback = LinMap::hom(H(), corpus().morphism("tau1"));
    std::map<Word, Element, DegLex> values{{Word{SU()->generator("alpha")}, g(B1(), "x*")}};
    auto fam = with_tau1(LinMap::table(H(), B1(), values, fallback), "perturbed");
    try {
      GaugeTransformation::from_family(fam, 2);
      FAIL("expected rejection");
    } catch (const WitnessError& e) {
      CHECK(e.where() == "alpha on overlap 12");
      CHECK(e.lhs() == "a*");
      CHECK(e.rhs() == "a");
    }
    // without the construction check the gluing record fails first
    Report r = verify_gauge(GaugeTransformation::unchecked(fam), 2);
    REQUIRE(r.first_failure() != nullptr);
    CHECK(r.first_failure()->name == "gluing of the chart g-maps");
  }

  TEST_CASE("g(1) != 1 fails unitality") {
    auto fallback = LinMap::hom(H(), corpus().morphism("tau1"));
    std::map<Word, Element, DegLex> values{{Word{}, Element::one(B1()) + g(B1(), "y")}};
    auto fam = with_tau1(LinMap::table(H(), B1(), values, fallback), "nonunital");
    Report r = verify_gauge(GaugeTransformation::unchecked(fam), 1);
    // pi^1_2(y) = 0, so the chart maps still glue and the defect shows up as g(1) != 1
    CHECK(r.find("gluing of the chart g-maps")->status == Status::Pass);
    const Record* u = r.find("unitality of g");
    REQUIRE(u != nullptr);
    CHECK(u->status == Status::Fail);
    REQUIRE(u->witness);
    CHECK(u->witness->where == "1");
    CHECK(u->witness->lhs == "(y (x) 1 + 1 (x) 1, 1 (x) 1)");
    CHECK_FALSE(check_family(fam, 1).passed());
    CHECK(check_family(fam, 1).first_failure()->name == "unitality of nonunital");
  }
}

TEST_SUITE("action") {
  TEST_CASE("fixes the embedded base") {
    for (const auto& b : tube()->base_spanning_set(2)) {
      auto ib = tube()->base_embed(b);
      CHECK(g1().apply(ib) == ib);
    }
  }

  TEST_CASE("chart formula sum a tau(h_1) (x) h_2") {
    const auto& fam = g1().family();
    for (const auto& f : span()) {
      auto out = g1().apply(f);
      for (const auto& [i, local] : f.locals) {
        TensorElement expected(local.slots());
        for (const auto& [k, c] : local.terms()) {
          Element a = Element::word(local.slots()[0], k[0]);
          for (const auto& [kk, cc] : H()->coproduct(k[1]).terms()) {
            expected.add_product({a * fam.taus.at(i)->apply(kk[0]), Element::word(SU(), kk[1])}, c * cc);
          }
        }
        CHECK(out.locals.at(i) == expected);
      }
      CHECK_FALSE(tube()->gluing_violation(out).has_value());
    }
  }

  TEST_CASE("equivariance and left iota(B)-linearity") {
    for (const auto& f : span()) {
      // Delta_P o alpha = (alpha (x) id) o Delta_P, with alpha acting on the P leg
      CHECK(tube()->coaction(g1().apply(f)) == g1().apply(tube()->coaction(f)));
    }
    auto base = tube()->base_spanning_set(1);
    for (const auto& b : base) {
      auto ib = tube()->base_embed(b);
      for (std::size_t k = 0; k < span().size(); k += 5) {
        CHECK(g1().apply(ib * span()[k]) == ib * g1().apply(span()[k]));
      }
    }
  }
}

TEST_SUITE("group structure") {
  TEST_CASE("identity and inverses") {
    auto id = GaugeTransformation::identity(tube(), Side::Left);
    for (const auto& f : span()) CHECK(id.apply(f) == f);
    check_same_action(compose(g1(), id), g1());
    check_same_action(compose(id, g1()), g1());
    check_same_action(invert(id), id);
    auto inv = invert(g1());
    for (const auto& f : span()) {
      CHECK(g1().apply(inv.apply(f)) == f);
      CHECK(inv.apply(g1().apply(f)) == f);
    }
    check_same_action(compose(g1(), inv), id);
  }

  TEST_CASE("inverse chart map is tau o S") {
    auto inv = invert(g1());
    CHECK(inv.family().taus.at(1)->apply(Word{SU()->generator("alpha")}) == g(B1(), "x*"));
    auto back = invert(inv);
    for (ChartId i : {1, 2}) {
      for (Gen k = 0; k < SU()->generator_count(); ++k) {
        CHECK(back.family().taus.at(i)->apply(Word{k}) == g1().family().taus.at(i)->apply(Word{k}));
      }
    }
  }

  TEST_CASE("compose(g1, g_n) = g_(n+1) for n <= 2") {
    for (int n = 1; n <= 2; ++n) {
      CAPTURE(n);
      auto gn = GaugeTransformation::unchecked(example_family(corpus(), n));
      auto gn1 = GaugeTransformation::unchecked(example_family(corpus(), n + 1));
      check_same_action(compose(g1(), gn), gn1);
    }
  }

  TEST_CASE("composition is associative") {
    auto g2 = GaugeTransformation::unchecked(example_family(corpus(), 2));
    auto inv = invert(g1());
    check_same_action(compose(compose(g1(), g2), inv), compose(g1(), compose(g2, inv)));
  }

  TEST_CASE("composition needs one side") {
    auto r = left_to_right(g1());
    CHECK_THROWS_AS(compose(g1(), r), Error);
  }
}

TEST_SUITE("left and right") {
  TEST_CASE("left_to_right of g1") {
    auto r = left_to_right(g1());
    CHECK(r.side() == Side::Right);
    Report fam = check_family(r.family(), 2);
    CHECK(fam.passed());
    for (ChartId i : {1, 2}) {
      CHECK(check_conv_inverse(*r.family().taus.at(i), *r.family().tau_invs.at(i), 2, InverseSide::Both, true)
                .passed());
    }
    auto back = right_to_left(r);
    for (ChartId i : {1, 2}) {
      for (Gen k = 0; k < SU()->generator_count(); ++k) {
        CHECK(back.family().taus.at(i)->apply(Word{k}) == g1().family().taus.at(i)->apply(Word{k}));
      }
    }
  }

  TEST_CASE("identity maps to identity") {
    auto r = left_to_right(GaugeTransformation::identity(tube(), Side::Left));
    for (const auto& f : span()) CHECK(r.apply(f) == f);
  }
}

TEST_SUITE("verify_gauge") {
  TEST_CASE("g1 passes every check at degree 2") {
    Report r = verify_gauge(g1(), 2);
    CHECK(r.passed());
    CHECK(r.count(Status::Fail) == 0);
    CHECK(r.count(Status::Pass) == 9);
    bool noted = false;
    for (const auto& n : r.notes()) noted |= n.find("reconstructed chart-change convention") != std::string::npos;
    CHECK(noted);
  }
}

TEST_SUITE("non-automorphism") {
  TEST_CASE("g1 with symbolic q: sides differ by q") {
    auto w = find_non_automorphism_witness(g1(), 2);
    REQUIRE(w.has_value());
    REQUIRE(w->factor.has_value());
    CHECK(*w->factor == q());
    CHECK(w->rhs == *w->factor * w->lhs);
    CHECK_FALSE(w->lhs == w->rhs);
  }

  TEST_CASE("the pair (1 (x) alpha, alpha* (x) alpha) and iota((y, 0))") {
    TotalElement f;
    f.locals[1] = TensorElement::product_of({Element::one(B1()), g(SU(), "alpha")});
    f.locals[2] = TensorElement::product_of({g(SU(), "alpha*"), g(SU(), "alpha")});
    REQUIRE_FALSE(tube()->gluing_violation(f).has_value());
    auto y = tube()->base_embed(tube()->base_element({{1, g(B1(), "y")}, {2, Element(SU())}}));
    auto lhs = g1().apply(f * y);
    auto rhs = g1().apply(f) * g1().apply(y);
    CHECK_FALSE(lhs == rhs);
    CHECK(rhs == q() * lhs);
    // chart 1: alpha(y (x) alpha) = y x (x) alpha = q^-1 x y (x) alpha
    auto xy = Element::word(B1(), Word{B1()->generator("x"), B1()->generator("y")});
    CHECK(lhs.locals.at(1) == TensorElement::product_of({q(-1) * xy, g(SU(), "alpha")}));
    CHECK(rhs.locals.at(1) == TensorElement::product_of({xy, g(SU(), "alpha")}));
  }

  TEST_CASE("identity gauge has no witness") {
    CHECK_FALSE(find_non_automorphism_witness(GaugeTransformation::identity(tube(), Side::Left), 2).has_value());
  }

  TEST_CASE("classical limit q = nu = 1 has no witness at degree 2") {
    const auto& ws = corpus_at_one();
    auto t = GaugeTransformation::from_family(example_family(ws, 1), 2);
    std::size_t pairs = 0;
    CHECK_FALSE(find_non_automorphism_witness(t, 2, &pairs).has_value());
    CHECK(pairs > 0);
  }
}

TEST_SUITE("corepresentation matrices") {
  TEST_CASE("fundamental corep with g1") {
    Report r;
    auto m = corep_matrix_check(g1().family(), corpus().corep("u").u, 2, r);
    CHECK(r.passed());
    auto x = g(B1(), "x"), xs = g(B1(), "x*"), zero = Element(B1());
    CHECK(m.per_chart.at(1) == ElementMatrix{{x, zero}, {zero, xs}});
    CHECK(m.inverses.at(1) == ElementMatrix{{xs, zero}, {zero, x}});
    for (ChartId i : {1, 2}) {
      const auto& b = m.per_chart.at(i);
      const auto& inv = m.inverses.at(i);
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          Element e(b[0][0].presentation()), f(b[0][0].presentation());
          for (int j = 0; j < 2; ++j) {
            e += b[k][j] * inv[j][l];
            f += inv[k][j] * b[j][l];
          }
          Element expected = k == l ? Element::one(e.presentation()) : Element(e.presentation());
          CHECK(e == expected);
          CHECK(f == expected);
        }
      }
    }
  }

  TEST_CASE("trivial corep") {
    Report r;
    auto m = corep_matrix_check(g1().family(), ElementMatrix{{Element::one(SU())}}, 2, r);
    CHECK(r.passed());
    CHECK(m.per_chart.at(1) == ElementMatrix{{Element::one(B1())}});
    CHECK(m.per_chart.at(2) == ElementMatrix{{Element::one(SU())}});
  }

  TEST_CASE("tau_1(alpha) = y is not invertible") {
    auto fallback = LinMap::hom(H(), corpus().morphism("tau1"));
    std::map<Word, Element, DegLex> values{{Word{SU()->generator("alpha")}, g(B1(), "y")}};
    auto fam = with_tau1(LinMap::table(H(), B1(), values, fallback), "singular");
    Report r;
    corep_matrix_check(fam, corpus().corep("u").u, 2, r);
    const Record* f = r.find("invertibility of b_1");
    REQUIRE(f != nullptr);
    CHECK(f->status == Status::Fail);
    CHECK(f->witness.has_value());
  }

  TEST_CASE("matrix inverse over B1") {
    auto x = g(B1(), "x"), xs = g(B1(), "x*"), y = g(B1(), "y"), zero = Element(B1());
    auto inv = matrix_inverse({{x, y}, {zero, xs}}, 2);
    REQUIRE(inv.has_value());
    CHECK((*inv)[0][0] == xs);
    CHECK((*inv)[1][1] == x);
    CHECK_FALSE(matrix_inverse({{y}}, 3).has_value());
  }
}
