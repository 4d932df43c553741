#include "qpfb/linmap.hpp"

#include <sstream>

#include "qpfb/error.hpp"

namespace qpfb {

std::string to_string(Side s) { return s == Side::Left ? "left" : "right"; }

std::shared_ptr<LinMap> LinMap::make(Kind k, HopfPtr src, PresentationPtr tgt) {
  if (!src || !tgt) throw Error("linear map without source or target");
  auto m = std::shared_ptr<LinMap>(new LinMap(k, std::move(src), std::move(tgt)));
  m->self_ = m;
  return m;
}

namespace {

void require_compatible(const LinMapPtr& f, const LinMapPtr& g, const char* what) {
  if (!f || !g) throw Error(std::string(what) + " of a null map");
  if (f->source() != g->source()) throw MismatchError(std::string(what) + ": maps have different sources");
  if (f->target() != g->target())
    throw MismatchError(std::string(what) + ": targets '" + f->target()->name() + "' and '" + g->target()->name() +
                        "' do not multiply");
}

}  // namespace

LinMapPtr LinMap::hom(HopfPtr h, MorphismPtr m, int power) {
  if (!m) throw Error("hom of a null morphism");
  if (m->source() != h->algebra())
    throw MismatchError("hom(" + m->name() + "): source is not '" + h->name() + "'");
  if (power < 1) throw Error("hompow(" + m->name() + "," + std::to_string(power) + "): exponent must be >= 1");
  auto out = make(Kind::Hom, std::move(h), m->target());
  out->morphism_ = m;
  out->n_ = power;
  out->powered_ = power == 1 ? m : m->generator_power(power, m->name() + "^" + std::to_string(power));
  return out;
}

LinMapPtr LinMap::unit(HopfPtr h, PresentationPtr target) { return make(Kind::Unit, std::move(h), std::move(target)); }

LinMapPtr LinMap::identity(HopfPtr h) {
  auto tgt = h->algebra();
  return make(Kind::Identity, std::move(h), std::move(tgt));
}

LinMapPtr LinMap::convolve(const LinMapPtr& f, const LinMapPtr& g) {
  require_compatible(f, g, "convolution");
  auto out = make(Kind::Convolve, f->source(), f->target());
  out->children_ = {f, g};
  return out;
}

LinMapPtr LinMap::twisted_convolve(const LinMapPtr& f, const LinMapPtr& g) {
  require_compatible(f, g, "twisted convolution");
  auto out = make(Kind::TwistedConvolve, f->source(), f->target());
  out->children_ = {f, g};
  return out;
}

LinMapPtr LinMap::power(const LinMapPtr& f, int n) {
  if (!f) throw Error("convolution power of a null map");
  if (n < 1) throw Error("convolution power needs n >= 1 (got " + std::to_string(n) + ")");
  auto out = make(Kind::Power, f->source(), f->target());
  out->n_ = n;
  out->children_ = {f};
  if (n > 1) out->children_.push_back(power(f, n - 1));
  return out;
}

LinMapPtr LinMap::twisted_power(const LinMapPtr& f, int n) {
  if (!f) throw Error("convolution power of a null map");
  if (n < 1) throw Error("twisted convolution power needs n >= 1 (got " + std::to_string(n) + ")");
  auto out = make(Kind::TwistedPower, f->source(), f->target());
  out->n_ = n;
  out->children_ = {f};
  if (n > 1) out->children_.push_back(twisted_power(f, n - 1));
  return out;
}

LinMapPtr LinMap::power_via_antipode(const LinMapPtr& f, int n) { return power(precompose_S(f), n); }

LinMapPtr LinMap::precompose_S(const LinMapPtr& f) {
  if (!f) throw Error("compose_S of a null map");
  auto out = make(Kind::PrecomposeS, f->source(), f->target());
  out->children_ = {f};
  return out;
}

LinMapPtr LinMap::precompose_Sinv(const LinMapPtr& f) {
  if (!f) throw Error("compose_Sinv of a null map");
  if (!f->source()->has_antipode_inv())
    throw Error("compose_Sinv: '" + f->source()->name() + "' declares no inverse antipode");
  auto out = make(Kind::PrecomposeSInv, f->source(), f->target());
  out->children_ = {f};
  return out;
}

LinMapPtr LinMap::postcompose(MorphismPtr m, const LinMapPtr& f) {
  if (!m || !f) throw Error("postcomposition with a null map");
  if (m->source() != f->target())
    throw MismatchError("post(" + m->name() + ", ...): source '" + m->source()->name() + "' is not the map's target '" +
                        f->target()->name() + "'");
  auto out = make(Kind::Postcompose, f->source(), m->target());
  out->morphism_ = std::move(m);
  out->children_ = {f};
  return out;
}

LinMapPtr LinMap::table(HopfPtr h, PresentationPtr target, std::map<Word, Element, DegLex> values,
                        LinMapPtr fallback) {
  for (const auto& [w, e] : values) {
    if (!h->algebra()->is_irreducible(w))
      throw Error("table entry '" + h->algebra()->word_str(w) + "' is not a normal monomial of '" + h->name() + "'");
    if (e.presentation() != target) throw MismatchError("table value outside '" + target->name() + "'");
  }
  if (fallback && (fallback->source() != h || fallback->target() != target))
    throw MismatchError("patched map has a different source or target");
  auto out = make(Kind::Table, std::move(h), std::move(target));
  out->table_ = std::move(values);
  if (fallback) out->children_ = {std::move(fallback)};
  return out;
}

Element LinMap::apply(const Word& w) const {
  {
    std::lock_guard lock(memo_mutex_);
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
  }
  Element v = compute(w);
  std::lock_guard lock(memo_mutex_);
  memo_.emplace(w, v);
  return v;
}

Element LinMap::apply(const Element& h) const {
  if (h.presentation() != source_->algebra())
    throw MismatchError(describe() + " applied outside '" + source_->name() + "'");
  Element out(target_);
  for (const auto& [w, c] : h.terms()) out += c * apply(w);
  return out;
}

Element convolve_at(const LinMap& f, const LinMap& g, const Word& w, bool twisted) {
  Element out(f.target());
  for (const auto& [k, c] : f.source()->coproduct(w).terms()) {
    if (twisted) {
      out += c * (f.apply(k[1]) * g.apply(k[0]));
    } else {
      out += c * (f.apply(k[0]) * g.apply(k[1]));
    }
  }
  return out;
}

Element LinMap::compute(const Word& w) const {
  const auto& H = source_->algebra();
  switch (kind_) {
    case Kind::Hom:
      return powered_->apply_word(w);
    case Kind::Unit:
      return Element::scalar(target_, source_->counit(w));
    case Kind::Identity:
      return Element::word(H, w);
    case Kind::Convolve:
      return convolve_at(*children_[0], *children_[1], w, false);
    case Kind::TwistedConvolve:
      return convolve_at(*children_[0], *children_[1], w, true);
    case Kind::Power:
      if (n_ == 1) return children_[0]->apply(w);
      return convolve_at(*children_[1], *children_[0], w, false);
    case Kind::TwistedPower:
      if (n_ == 1) return children_[0]->apply(w);
      return convolve_at(*children_[1], *children_[0], w, true);
    case Kind::PrecomposeS:
      return children_[0]->apply(source_->antipode(w));
    case Kind::PrecomposeSInv:
      return children_[0]->apply(source_->antipode_inv(w));
    case Kind::Postcompose:
      return morphism_->apply(children_[0]->apply(w));
    case Kind::Table: {
      auto it = table_.find(w);
      if (it != table_.end()) return it->second;
      if (!children_.empty()) return children_[0]->apply(w);
      throw Error("table map has no value on monomial '" + H->word_str(w) + "'");
    }
  }
  throw Error("unknown linear map constructor");
}

std::string LinMap::describe() const {
  switch (kind_) {
    case Kind::Hom:
      if (n_ == 1) return "hom(" + morphism_->name() + ")";
      return "hompow(" + morphism_->name() + "," + std::to_string(n_) + ")";
    case Kind::Unit:
      return "unit";
    case Kind::Identity:
      return "id";
    case Kind::Convolve:
      return "conv(" + children_[0]->describe() + "," + children_[1]->describe() + ")";
    case Kind::TwistedConvolve:
      return "tconv(" + children_[0]->describe() + "," + children_[1]->describe() + ")";
    case Kind::Power:
      return "convpow(" + children_[0]->describe() + "," + std::to_string(n_) + ")";
    case Kind::TwistedPower:
      return "tconvpow(" + children_[0]->describe() + "," + std::to_string(n_) + ")";
    case Kind::PrecomposeS:
      return "compose_S(" + children_[0]->describe() + ")";
    case Kind::PrecomposeSInv:
      return "compose_Sinv(" + children_[0]->describe() + ")";
    case Kind::Postcompose:
      return "post(" + morphism_->name() + "," + children_[0]->describe() + ")";
    case Kind::Table: {
      std::ostringstream os;
      if (children_.empty()) {
        os << "table {";
      } else {
        os << "patch(" << children_[0]->describe() << ") {";
      }
      bool first = true;
      for (const auto& [w, e] : table_) {
        os << (first ? " " : "; ") << source_->algebra()->word_str(w) << " -> " << e.str();
        first = false;
      }
      os << " }";
      return os.str();
    }
  }
  return "?";
}

LinMapPtr LinMap::convolution_inverse(Side side) const {
  auto fail = [&]() -> LinMapPtr {
    throw Error("no symbolic " + to_string(side) + " convolution inverse for " + describe() +
                "; declare one explicitly");
  };
  const bool left = side == Side::Left;
  auto is_hom_like = [](const LinMapPtr& f) { return f->kind() == Kind::Hom || f->kind() == Kind::Identity; };
  switch (kind_) {
    case Kind::Hom:
    case Kind::Identity:
      return left ? precompose_S(self()) : precompose_Sinv(self());
    case Kind::Unit:
      return self();
    case Kind::Convolve:
      if (!left) return fail();
      return convolve(children_[1]->convolution_inverse(side), children_[0]->convolution_inverse(side));
    case Kind::TwistedConvolve:
      if (left) return fail();
      return twisted_convolve(children_[1]->convolution_inverse(side), children_[0]->convolution_inverse(side));
    case Kind::Power:
      if (!left) return fail();
      return power(children_[0]->convolution_inverse(side), n_);
    case Kind::TwistedPower:
      if (left) return fail();
      return twisted_power(children_[0]->convolution_inverse(side), n_);
    case Kind::PrecomposeS:
      if (!left) return fail();
      if (is_hom_like(children_[0])) return children_[0];
      // Delta(S h) = S h_2 (x) S h_1 turns a twisted inverse into an untwisted one.
      return precompose_S(children_[0]->convolution_inverse(Side::Right));
    case Kind::PrecomposeSInv:
      if (left) return fail();
      if (is_hom_like(children_[0])) return children_[0];
      return precompose_Sinv(children_[0]->convolution_inverse(Side::Left));
    case Kind::Postcompose:
      return postcompose(morphism_, children_[0]->convolution_inverse(side));
    case Kind::Table:
      return fail();
  }
  return fail();
}

Report check_conv_inverse(const LinMap& f, const LinMap& g, int d, InverseSide side, bool twisted,
                          const std::string& label) {
  Report report;
  if (f.source() != g.source() || f.target() != g.target())
    throw MismatchError("convolution-inverse check of maps with different source or target");
  const auto& H = f.source()->algebra();
  const std::string name = label.empty() ? f.describe() : label;
  const std::string star = twisted ? " *' " : " * ";
  auto run = [&](const LinMap& a, const LinMap& b, const std::string& tag) {
    std::string anchor = twisted ? "sum a(h_2) b(h_1) = eps(h) 1" : "sum a(h_1) b(h_2) = eps(h) 1";
    CheckScope s(tag + " convolution inverse of " + name, anchor);
    for (const auto& w : H->basis(d)) {
      s.expect_equal(H->word_str(w), convolve_at(a, b, w, twisted),
                     Element::scalar(f.target(), f.source()->counit(w)));
    }
    s.set_detail(a.describe() + star + b.describe() + " on monomials of degree <= " + std::to_string(d));
    report.add(s.finish("monomials"));
  };
  if (side != InverseSide::Right) run(f, g, "left");
  if (side != InverseSide::Left) run(g, f, "right");
  return report;
}

}  // namespace qpfb
