#include "qpfb/morphism.hpp"

#include "qpfb/error.hpp"

namespace qpfb {

namespace {

void validate_shape(const Morphism::Spec& s) {
  if (!s.source || !s.target) throw Error("morphism '" + s.name + "' lacks a source or target");
  if (s.images.size() != s.source->generator_count())
    throw Error("morphism '" + s.name + "' must give one image per generator of '" + s.source->name() + "'");
  for (const auto& e : s.images) {
    if (e.presentation() != s.target)
      throw MismatchError("morphism '" + s.name + "': image outside target '" + s.target->name() + "'");
  }
}

}  // namespace

MorphismPtr Morphism::create(Spec spec) {
  validate_shape(spec);
  auto m = std::shared_ptr<Morphism>(new Morphism(std::move(spec)));
  Report r = m->check();
  if (const Record* f = r.first_failure()) {
    throw WitnessError("morphism '" + m->name() + "' is not well defined: " + f->name, f->witness->where,
                       f->witness->lhs, f->witness->rhs);
  }
  m->certified_ = true;
  return m;
}

MorphismPtr Morphism::create_unchecked(Spec spec) {
  validate_shape(spec);
  return std::shared_ptr<Morphism>(new Morphism(std::move(spec)));
}

MorphismPtr Morphism::identity(const PresentationPtr& p) {
  Spec s;
  s.name = "id_" + p->name();
  s.source = p;
  s.target = p;
  for (Gen g = 0; g < p->generator_count(); ++g) s.images.push_back(Element::word(p, Word{g}));
  s.star_preserving = p->has_star();
  auto m = std::shared_ptr<Morphism>(new Morphism(std::move(s)));
  m->certified_ = true;
  return m;
}

Element Morphism::apply_raw(const Word& w) const {
  Element out = Element::one(spec_.target);
  if (spec_.antimultiplicative) {
    for (auto it = w.rbegin(); it != w.rend(); ++it) out = out * spec_.images.at(*it);
  } else {
    for (Gen g : w) out = out * spec_.images.at(g);
  }
  return out;
}

Report Morphism::check() const {
  Report report;
  const auto& src = *spec_.source;
  CheckScope wd("well-definedness of " + spec_.name,
                "image(lhs) = image(rhs) for every relation of " + src.name());
  for (const auto& rule : src.rules()) {
    Element lhs = apply_raw(rule.lhs);
    Element rhs(spec_.target);
    for (const auto& [w, c] : rule.rhs) rhs += c * apply_raw(w);
    wd.expect_equal("relation " + src.word_str(rule.lhs), lhs, rhs);
  }
  if (src.rules().empty()) wd.set_detail("free source algebra");
  report.add(wd.finish("relations"));

  if (spec_.star_preserving) {
    CheckScope st("star compatibility of " + spec_.name, "image(g*) = star(image(g))");
    if (!src.has_star() || !spec_.target->has_star()) {
      st.fail("involution", "source or target has no star", "");
    } else {
      for (Gen g = 0; g < src.generator_count(); ++g) {
        st.expect_equal("generator " + src.generators()[g], spec_.images[src.star_of(g)],
                        spec_.images[g].star());
      }
    }
    report.add(st.finish("generators"));
  }
  return report;
}

Element Morphism::apply_word(const Word& w) const {
  if (!certified_) throw CertificateError("morphism '" + spec_.name + "' has no well-definedness certificate");
  {
    std::lock_guard lock(memo_mutex_);
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
  }
  Element v = apply_raw(w);
  std::lock_guard lock(memo_mutex_);
  memo_.emplace(w, v);
  return v;
}

Element Morphism::apply(const Element& a) const {
  if (a.presentation() != spec_.source)
    throw MismatchError("morphism '" + spec_.name + "' applied outside its source '" + spec_.source->name() + "'");
  Element out(spec_.target);
  for (const auto& [w, c] : a.terms()) out += c * apply_word(w);
  return out;
}

MorphismPtr Morphism::generator_power(int n, const std::string& name) const {
  if (n < 1) throw Error("generator power needs n >= 1");
  Spec s = spec_;
  s.name = name;
  for (auto& img : s.images) {
    Element p = img;
    for (int k = 1; k < n; ++k) p = p * img;
    img = p;
  }
  return create(std::move(s));
}

Element apply_morphism(const Morphism& m, const Element& a) { return m.apply(a); }

}  // namespace qpfb
