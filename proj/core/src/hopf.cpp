#include "qpfb/hopf.hpp"

#include "qpfb/error.hpp"

namespace qpfb {

HopfPtr HopfAlgebra::create(Spec spec) {
  if (!spec.algebra) throw Error("Hopf structure without an algebra");
  const auto& p = spec.algebra;
  const auto n = p->generator_count();
  const std::string where = "Hopf structure on '" + p->name() + "'";
  if (spec.coproduct.size() != n) throw Error(where + ": Delta must be given on every generator");
  if (spec.counit.size() != n) throw Error(where + ": eps must be given on every generator");
  if (spec.antipode.size() != n) throw Error(where + ": S must be given on every generator");
  if (spec.antipode_inv && spec.antipode_inv->size() != n)
    throw Error(where + ": Sinv must be given on every generator");
  for (const auto& t : spec.coproduct) {
    if (t.slots() != std::vector<PresentationPtr>{p, p}) throw MismatchError(where + ": Delta image outside H (x) H");
  }
  for (const auto& e : spec.antipode) {
    if (e.presentation() != p) throw MismatchError(where + ": S image outside H");
  }
  if (spec.antipode_inv) {
    for (const auto& e : *spec.antipode_inv) {
      if (e.presentation() != p) throw MismatchError(where + ": Sinv image outside H");
    }
  }
  return std::shared_ptr<HopfAlgebra>(new HopfAlgebra(std::move(spec)));
}

TensorElement HopfAlgebra::coproduct(const Word& w) const {
  {
    std::lock_guard lock(memo_mutex_);
    auto it = delta_memo_.find(w);
    if (it != delta_memo_.end()) return it->second;
  }
  TensorElement v;
  if (w.empty()) {
    v = TensorElement::unit({spec_.algebra, spec_.algebra});
  } else if (w.size() == 1) {
    v = spec_.coproduct.at(w[0]);
  } else {
    Word head(w.begin(), w.end() - 1);
    v = coproduct(head) * spec_.coproduct.at(w.back());
  }
  std::lock_guard lock(memo_mutex_);
  delta_memo_.emplace(w, v);
  return v;
}

TensorElement HopfAlgebra::coproduct(const Element& h) const {
  if (h.presentation() != spec_.algebra) throw MismatchError("coproduct applied outside '" + name() + "'");
  TensorElement out({spec_.algebra, spec_.algebra});
  for (const auto& [w, c] : h.terms()) out += c * coproduct(w);
  return out;
}

TensorElement HopfAlgebra::coproduct_iterated(const Element& h, int k) const {
  if (k < 0) throw Error("iterated coproduct needs k >= 0");
  if (h.presentation() != spec_.algebra) throw MismatchError("coproduct applied outside '" + name() + "'");
  TensorElement t({spec_.algebra});
  for (const auto& [w, c] : h.terms()) t.add_normal({w}, c);
  for (int i = 0; i < k; ++i) {
    t = t.expand_slot(0, [&](const Word& w) { return coproduct(w); });
  }
  return t;
}

TensorElement HopfAlgebra::coproduct_iterated_right(const Element& h, int k) const {
  if (k < 0) throw Error("iterated coproduct needs k >= 0");
  TensorElement t({spec_.algebra});
  for (const auto& [w, c] : h.terms()) t.add_normal({w}, c);
  for (int i = 0; i < k; ++i) {
    t = t.expand_slot(t.rank() - 1, [&](const Word& w) { return coproduct(w); });
  }
  return t;
}

Scalar HopfAlgebra::counit(const Word& w) const {
  Scalar s(1L);
  for (Gen g : w) {
    s = s * spec_.counit.at(g);
    if (s.is_zero()) break;
  }
  return s;
}

Scalar HopfAlgebra::counit(const Element& h) const {
  Scalar s;
  for (const auto& [w, c] : h.terms()) s += c * counit(w);
  return s;
}

Element HopfAlgebra::anti_extend(const std::vector<Element>& images, const Word& w) const {
  Element out = Element::one(spec_.algebra);
  for (auto it = w.rbegin(); it != w.rend(); ++it) out = out * images.at(*it);
  return out;
}

Element HopfAlgebra::antipode(const Word& w) const { return anti_extend(spec_.antipode, w); }

Element HopfAlgebra::antipode(const Element& h) const {
  Element out(spec_.algebra);
  for (const auto& [w, c] : h.terms()) out += c * antipode(w);
  return out;
}

Element HopfAlgebra::antipode_inv(const Word& w) const {
  if (!spec_.antipode_inv) throw Error("'" + name() + "' declares no inverse antipode");
  return anti_extend(*spec_.antipode_inv, w);
}

Element HopfAlgebra::antipode_inv(const Element& h) const {
  Element out(spec_.algebra);
  for (const auto& [w, c] : h.terms()) out += c * antipode_inv(w);
  return out;
}

Element HopfAlgebra::structure_map(StructureKind kind, const Element& h) const {
  if (h.presentation() != spec_.algebra) throw MismatchError("structure map applied outside '" + name() + "'");
  switch (kind) {
    case StructureKind::Counit:
      return Element::scalar(spec_.algebra, counit(h));
    case StructureKind::Antipode:
      return antipode(h);
    case StructureKind::AntipodeInv:
      return antipode_inv(h);
  }
  throw Error("unknown structure map");
}

namespace {

Element contract(const TensorElement& t, const PresentationPtr& p,
                 const std::function<Element(const Word&)>& left,
                 const std::function<Element(const Word&)>& right) {
  Element out(p);
  for (const auto& [k, c] : t.terms()) out += c * (left(k[0]) * right(k[1]));
  return out;
}

}  // namespace

Report check_hopf_axioms(const HopfAlgebra& h, int d) {
  Report report;
  const auto& p = h.algebra();
  const std::string H = h.name();
  const auto basis = p->basis(d);
  const std::string bound = "monomials of degree <= " + std::to_string(d);

  {
    CheckScope s("coassociativity of " + H, "(Delta (x) id) Delta(h) = (id (x) Delta) Delta(h)");
    for (const auto& w : basis) {
      Element e = Element::word(p, w);
      s.expect_equal(p->word_str(w), h.coproduct_iterated(e, 2), h.coproduct_iterated_right(e, 2));
    }
    s.set_detail(bound);
    report.add(s.finish("monomials"));
  }
  {
    CheckScope l("left counit of " + H, "sum eps(h_1) h_2 = h");
    CheckScope r("right counit of " + H, "sum h_1 eps(h_2) = h");
    for (const auto& w : basis) {
      Element e = Element::word(p, w);
      TensorElement t = h.coproduct(w);
      Element lv(p), rv(p);
      for (const auto& [k, c] : t.terms()) {
        lv += (c * h.counit(k[0])) * Element::word(p, k[1]);
        rv += (c * h.counit(k[1])) * Element::word(p, k[0]);
      }
      l.expect_equal(p->word_str(w), lv, e);
      r.expect_equal(p->word_str(w), rv, e);
    }
    l.set_detail(bound);
    r.set_detail(bound);
    report.add(l.finish("monomials"));
    report.add(r.finish("monomials"));
  }
  {
    auto word = [&](const Word& w) { return Element::word(p, w); };
    auto S = [&](const Word& w) { return h.antipode(w); };
    CheckScope l("left antipode of " + H, "sum S(h_1) h_2 = eps(h) 1");
    CheckScope r("right antipode of " + H, "sum h_1 S(h_2) = eps(h) 1");
    for (const auto& w : basis) {
      TensorElement t = h.coproduct(w);
      Element eps = Element::scalar(p, h.counit(w));
      l.expect_equal(p->word_str(w), contract(t, p, S, word), eps);
      r.expect_equal(p->word_str(w), contract(t, p, word, S), eps);
    }
    l.set_detail(bound);
    r.set_detail(bound);
    report.add(l.finish("monomials"));
    report.add(r.finish("monomials"));
  }
  {
    CheckScope m("Delta is an algebra map on " + H, "Delta(u v) = Delta(u) Delta(v)");
    CheckScope e("eps is an algebra map on " + H, "eps(u v) = eps(u) eps(v)");
    for (const auto& rule : p->rules()) {
      // Both sides through generator images, bypassing normal forms.
      TensorElement raw_l = TensorElement::unit({p, p});
      for (Gen g : rule.lhs) raw_l = raw_l * h.spec().coproduct.at(g);
      TensorElement raw_r({p, p});
      Scalar el = h.counit(rule.lhs), er;
      for (const auto& [w, c] : rule.rhs) {
        TensorElement term = TensorElement::unit({p, p});
        for (Gen g : w) term = term * h.spec().coproduct.at(g);
        raw_r += c * term;
        er += c * h.counit(w);
      }
      m.expect_equal("relation " + p->word_str(rule.lhs), raw_l, raw_r);
      e.expect_equal("relation " + p->word_str(rule.lhs), el, er);
    }
    for (const auto& u : basis) {
      for (const auto& v : basis) {
        if (u.empty() || v.empty() || u.size() + v.size() > static_cast<std::size_t>(d)) continue;
        Element uv = Element::word(p, u) * Element::word(p, v);
        std::string where = p->word_str(u) + " * " + p->word_str(v);
        m.expect_equal(where, h.coproduct(uv), h.coproduct(u) * h.coproduct(v));
        e.expect_equal(where, h.counit(uv), h.counit(u) * h.counit(v));
      }
    }
    m.set_detail("relations and monomial pairs of total degree <= " + std::to_string(d));
    e.set_detail("relations and monomial pairs of total degree <= " + std::to_string(d));
    report.add(m.finish());
    report.add(e.finish());
  }
  {
    auto anti_raw = [&](const std::vector<Element>& images, const Word& w) {
      Element out = Element::one(p);
      for (auto it = w.rbegin(); it != w.rend(); ++it) out = out * images.at(*it);
      return out;
    };
    auto relations = [&](const std::string& label, const std::vector<Element>& images) {
      CheckScope s(label + " respects the relations of " + H, label + "(lhs) = " + label + "(rhs), antimultiplicative");
      for (const auto& rule : p->rules()) {
        Element l = anti_raw(images, rule.lhs);
        Element r(p);
        for (const auto& [w, c] : rule.rhs) r += c * anti_raw(images, w);
        s.expect_equal("relation " + p->word_str(rule.lhs), l, r);
      }
      if (p->rules().empty()) s.set_detail("free algebra");
      report.add(s.finish("relations"));
    };
    relations("S", h.spec().antipode);
    if (h.has_antipode_inv()) {
      relations("Sinv", *h.spec().antipode_inv);
      CheckScope s("S^-1 inverts S on " + H, "Sinv(S(h)) = h = S(Sinv(h))");
      for (const auto& w : basis) {
        Element e = Element::word(p, w);
        s.expect_equal(p->word_str(w) + " (Sinv S)", h.antipode_inv(h.antipode(e)), e);
        s.expect_equal(p->word_str(w) + " (S Sinv)", h.antipode(h.antipode_inv(e)), e);
      }
      s.set_detail(bound);
      report.add(s.finish("monomials"));
    }
  }
  return report;
}

}  // namespace qpfb
