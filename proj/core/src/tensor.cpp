#include "qpfb/tensor.hpp"

#include <sstream>

#include "qpfb/error.hpp"

namespace qpfb {

TensorElement TensorElement::product_of(const std::vector<Element>& factors) {
  std::vector<PresentationPtr> slots;
  for (const auto& f : factors) slots.push_back(f.presentation());
  TensorElement t(std::move(slots));
  t.add_product(factors, Scalar(1L));
  return t;
}

TensorElement TensorElement::unit(std::vector<PresentationPtr> slots) {
  TensorElement t(std::move(slots));
  t.add_normal(Key(t.rank()), Scalar(1L));
  return t;
}

int TensorElement::degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) {
    int s = 0;
    for (const auto& w : k) s += static_cast<int>(w.size());
    d = std::max(d, s);
  }
  return d;
}

void TensorElement::add_normal(const Key& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void TensorElement::add_product(const std::vector<Element>& factors, const Scalar& c) {
  if (factors.size() != rank()) throw MismatchError("tensor rank mismatch");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].presentation() != slots_[i]) throw MismatchError("tensor slot algebra mismatch");
    if (factors[i].is_zero()) return;
  }
  Key key(rank());
  std::function<void(std::size_t, const Scalar&)> rec = [&](std::size_t i, const Scalar& acc) {
    if (i == factors.size()) {
      add_normal(key, acc);
      return;
    }
    for (const auto& [w, wc] : factors[i].terms()) {
      key[i] = w;
      rec(i + 1, acc * wc);
    }
  };
  rec(0, c);
}

void TensorElement::require_same(const TensorElement& o) const {
  if (slots_ != o.slots_) throw MismatchError("tensor elements live in different spaces");
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
  require_same(o);
  for (const auto& [k, c] : o.terms_) add_normal(k, c);
  return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
  require_same(o);
  for (const auto& [k, c] : o.terms_) add_normal(k, -c);
  return *this;
}

TensorElement& TensorElement::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  Terms out;
  for (auto& [k, c] : terms_) {
    Scalar v = c * s;
    if (!v.is_zero()) out.emplace(k, std::move(v));
  }
  terms_ = std::move(out);
  return *this;
}

TensorElement operator*(const TensorElement& a, const TensorElement& b) {
  a.require_same(b);
  TensorElement out(a.slots_);
  std::vector<Element> factors(a.rank());
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      for (std::size_t i = 0; i < a.rank(); ++i) {
        Word w = ka[i];
        w.insert(w.end(), kb[i].begin(), kb[i].end());
        factors[i] = Element::word(a.slots_[i], w);
      }
      out.add_product(factors, ca * cb);
    }
  }
  return out;
}

TensorElement TensorElement::expand_slot(std::size_t i, const std::function<TensorElement(const Word&)>& f) const {
  std::vector<PresentationPtr> slots;
  std::optional<TensorElement> out;
  for (const auto& [k, c] : terms_) {
    TensorElement v = f(k[i]);
    if (!out) {
      slots.assign(slots_.begin(), slots_.begin() + static_cast<long>(i));
      slots.insert(slots.end(), v.slots().begin(), v.slots().end());
      slots.insert(slots.end(), slots_.begin() + static_cast<long>(i) + 1, slots_.end());
      out.emplace(slots);
    }
    for (const auto& [vk, vc] : v.terms()) {
      Key nk(k.begin(), k.begin() + static_cast<long>(i));
      nk.insert(nk.end(), vk.begin(), vk.end());
      nk.insert(nk.end(), k.begin() + static_cast<long>(i) + 1, k.end());
      out->add_normal(nk, c * vc);
    }
  }
  if (!out) {
    // Zero input: the output space is unknown without evaluating f; use f(1) for its shape.
    TensorElement shape = f(Word{});
    slots.assign(slots_.begin(), slots_.begin() + static_cast<long>(i));
    slots.insert(slots.end(), shape.slots().begin(), shape.slots().end());
    slots.insert(slots.end(), slots_.begin() + static_cast<long>(i) + 1, slots_.end());
    return TensorElement(slots);
  }
  return *out;
}

TensorElement TensorElement::map_slot(std::size_t i, const std::function<Element(const Word&)>& f) const {
  return expand_slot(i, [&](const Word& w) {
    Element e = f(w);
    TensorElement t({e.presentation()});
    for (const auto& [ew, ec] : e.terms()) t.add_normal(Key{ew}, ec);
    return t;
  });
}

std::string TensorElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [k, c] = *it;
    bool neg = false;
    std::string coeff;
    if (c.is_unit()) {
      neg = c.terms().begin()->second < 0;
      coeff = (neg ? -c : c).str();
    } else {
      coeff = c.str();
    }
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    if (coeff != "1") os << coeff << ' ';
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (i) os << " (x) ";
      os << slots_[i]->word_str(k[i]);
    }
    first = false;
  }
  return os.str();
}

}  // namespace qpfb
