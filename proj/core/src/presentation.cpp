#include "qpfb/presentation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qpfb/error.hpp"

namespace qpfb {

namespace {

RawSum star_raw(const Presentation& p, const RawSum& raw) {
  RawSum out;
  out.reserve(raw.size());
  for (const auto& [w, c] : raw) {
    Word s(w.rbegin(), w.rend());
    for (auto& g : s) g = p.star_of(g);
    out.emplace_back(std::move(s), c);
  }
  return out;
}

}  // namespace

Presentation::Presentation(Spec spec, std::size_t budget)
    : spec_(std::move(spec)), step_budget_(budget) {}

PresentationPtr Presentation::create(Spec spec, std::size_t step_budget) {
  if (spec.generators.empty())
    throw Error("algebra '" + spec.name + "': empty generator list");
  std::set<std::string> seen;
  for (const auto& g : spec.generators) {
    if (!seen.insert(g).second) throw Error("algebra '" + spec.name + "': duplicate generator '" + g + "'");
  }
  for (const auto& par : spec.params) {
    if (seen.count(par)) throw Error("algebra '" + spec.name + "': '" + par + "' is both a parameter and a generator");
  }
  if (spec.generators.size() > 0xFFFF) throw Error("too many generators");

  auto p = std::shared_ptr<Presentation>(new Presentation(std::move(spec), step_budget));
  const auto n = p->spec_.generators.size();

  if (!p->spec_.star_pairs.empty()) {
    p->star_.assign(n, static_cast<Gen>(0xFFFF));
    for (const auto& [a, b] : p->spec_.star_pairs) {
      auto ga = p->find_generator(a);
      auto gb = p->find_generator(b);
      if (!ga) throw Error("algebra '" + p->name() + "': star pair uses unknown generator '" + a + "'");
      if (!gb) throw Error("algebra '" + p->name() + "': star pair uses unknown generator '" + b + "'");
      for (auto [x, y] : {std::pair{*ga, *gb}, std::pair{*gb, *ga}}) {
        if (p->star_[x] != 0xFFFF && p->star_[x] != y)
          throw Error("algebra '" + p->name() + "': star is not an involution at '" + p->spec_.generators[x] + "'");
        p->star_[x] = y;
      }
    }
    for (std::size_t g = 0; g < n; ++g) {
      if (p->star_[g] == 0xFFFF)
        throw Error("algebra '" + p->name() + "': generator '" + p->spec_.generators[g] + "' has no star partner");
    }
  }

  DegLex less;
  for (std::size_t i = 0; i < p->spec_.rules.size(); ++i) {
    const auto& r = p->spec_.rules[i];
    if (r.lhs.empty()) throw Error("algebra '" + p->name() + "': rule " + std::to_string(i + 1) + " has an empty left side");
    for (const auto& [w, c] : r.rhs) {
      for (Gen g : w)
        if (g >= n) throw Error("algebra '" + p->name() + "': rule uses an unknown generator");
      if (!c.is_zero() && !less(w, r.lhs)) {
        throw Error("algebra '" + p->name() + "': rule " + p->word_str(r.lhs) +
                    " -> ... is not degree-lowering (term " + p->word_str(w) + ")");
      }
    }
    p->lhs_.push_back(r.lhs);
  }
  return p;
}

std::optional<Gen> Presentation::find_generator(const std::string& name) const {
  for (std::size_t i = 0; i < spec_.generators.size(); ++i)
    if (spec_.generators[i] == name) return static_cast<Gen>(i);
  return std::nullopt;
}

Gen Presentation::generator(const std::string& name) const {
  auto g = find_generator(name);
  if (!g) throw Error("algebra '" + spec_.name + "' has no generator '" + name + "'");
  return *g;
}

std::optional<std::pair<std::size_t, std::size_t>> Presentation::find_redex(const Word& w) const {
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    for (std::size_t r = 0; r < lhs_.size(); ++r) {
      const Word& l = lhs_[r];
      if (pos + l.size() <= w.size() && std::equal(l.begin(), l.end(), w.begin() + static_cast<long>(pos)))
        return std::pair{r, pos};
    }
  }
  return std::nullopt;
}

RawSum Presentation::rewrite_at(const Word& w, std::size_t rule, std::size_t pos) const {
  const Rule& r = spec_.rules.at(rule);
  RawSum out;
  out.reserve(r.rhs.size());
  for (const auto& [rw, c] : r.rhs) {
    Word nw(w.begin(), w.begin() + static_cast<long>(pos));
    nw.insert(nw.end(), rw.begin(), rw.end());
    nw.insert(nw.end(), w.begin() + static_cast<long>(pos + r.lhs.size()), w.end());
    out.emplace_back(std::move(nw), c);
  }
  return out;
}

std::map<Word, Scalar, DegLex> Presentation::normal_form(const Word& w) const {
  std::size_t steps = 0;
  return normal_form_impl(w, steps, w);
}

std::map<Word, Scalar, DegLex> Presentation::normal_form_impl(const Word& w, std::size_t& steps,
                                                              const Word& top) const {
  {
    std::lock_guard lock(memo_mutex_);
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
  }
  std::map<Word, Scalar, DegLex> result;
  auto redex = find_redex(w);
  if (!redex) {
    result.emplace(w, Scalar(1L));
  } else {
    if (++steps > step_budget_) {
      throw NonTerminationError("rewriting exceeded the step budget of " + std::to_string(step_budget_) +
                                    " while normalizing '" + word_str(top) + "'",
                                word_str(top));
    }
    for (const auto& [nw, c] : rewrite_at(w, redex->first, redex->second)) {
      if (c.is_zero()) continue;
      for (const auto& [fw, fc] : normal_form_impl(nw, steps, top)) {
        auto [it, inserted] = result.try_emplace(fw, c * fc);
        if (!inserted) {
          it->second += c * fc;
          if (it->second.is_zero()) result.erase(it);
        }
      }
    }
  }
  std::lock_guard lock(memo_mutex_);
  memo_.emplace(w, result);
  return result;
}

std::vector<Word> Presentation::basis(int max_degree) const {
  {
    std::lock_guard lock(memo_mutex_);
    auto it = basis_memo_.find(max_degree);
    if (it != basis_memo_.end()) return it->second;
  }
  std::vector<Word> out{Word{}};
  std::vector<Word> layer{Word{}};
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (Gen g = 0; g < generator_count(); ++g) {
        Word nw = w;
        nw.push_back(g);
        bool ok = true;
        for (const auto& l : lhs_) {
          if (l.size() <= nw.size() && std::equal(l.rbegin(), l.rend(), nw.rbegin())) {
            ok = false;
            break;
          }
        }
        if (ok) next.push_back(std::move(nw));
      }
    }
    std::sort(next.begin(), next.end(), DegLex{});
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  std::lock_guard lock(memo_mutex_);
  basis_memo_.emplace(max_degree, out);
  return out;
}

std::string Presentation::word_str(const Word& w) const {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += spec_.generators.at(w[i]);
  }
  return s;
}

bool Presentation::is_commutative() const {
  for (Gen a = 0; a < generator_count(); ++a) {
    for (Gen b = static_cast<Gen>(a + 1); b < generator_count(); ++b) {
      if (normal_form(Word{a, b}) != normal_form(Word{b, a})) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- Element

Element Element::scalar(const PresentationPtr& p, const Scalar& s) {
  Element e(p);
  if (!s.is_zero()) e.terms_.emplace(Word{}, s);
  return e;
}

Element Element::generator(const PresentationPtr& p, const std::string& name) {
  return word(p, Word{p->generator(name)});
}

Element Element::word(const PresentationPtr& p, const Word& w, const Scalar& c) {
  Element e(p);
  e.add_word(w, c);
  return e;
}

Element Element::normalize(const PresentationPtr& p, const RawSum& raw) {
  Element e(p);
  for (const auto& [w, c] : raw) {
    for (Gen g : w)
      if (g >= p->generator_count()) throw Error("expression uses a symbol outside algebra '" + p->name() + "'");
    e.add_word(w, c);
  }
  return e;
}

Scalar Element::constant_term() const {
  auto it = terms_.find(Word{});
  return it == terms_.end() ? Scalar() : it->second;
}

int Element::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.rbegin()->first.size());
}

void Element::add_normal(const Word& w, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Element::add_word(const Word& w, const Scalar& c) {
  if (c.is_zero()) return;
  if (pres_->is_irreducible(w)) {
    add_normal(w, c);
    return;
  }
  for (const auto& [nw, nc] : pres_->normal_form(w)) add_normal(nw, c * nc);
}

void Element::require_same(const Element& o) const {
  if (pres_ != o.pres_) {
    throw MismatchError("elements belong to different algebras ('" + (pres_ ? pres_->name() : "?") + "' vs '" +
                        (o.pres_ ? o.pres_->name() : "?") + "')");
  }
}

Element& Element::operator+=(const Element& o) {
  require_same(o);
  for (const auto& [w, c] : o.terms_) add_normal(w, c);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  require_same(o);
  for (const auto& [w, c] : o.terms_) add_normal(w, -c);
  return *this;
}

Element& Element::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, c] : terms_) c *= s;
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.is_zero())
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

Element operator*(const Element& a, const Element& b) {
  a.require_same(b);
  Element out(a.pres_);
  for (const auto& [u, cu] : a.terms_) {
    for (const auto& [v, cv] : b.terms_) {
      Word w = u;
      w.insert(w.end(), v.begin(), v.end());
      out.add_word(w, cu * cv);
    }
  }
  return out;
}

Element Element::operator-() const {
  Element out = *this;
  for (auto& [w, c] : out.terms_) c = -c;
  return out;
}

bool operator==(const Element& a, const Element& b) {
  return a.pres_ == b.pres_ && a.terms_ == b.terms_;
}

Element Element::star() const {
  if (!pres_->has_star()) throw Error("algebra '" + pres_->name() + "' has no involution");
  RawSum raw;
  for (const auto& [w, c] : terms_) raw.emplace_back(w, c);
  return normalize(pres_, star_raw(*pres_, raw));
}

std::string Element::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [w, c] = *it;
    std::string coeff;
    bool neg = false;
    if (c.is_unit()) {
      const auto& [e, r] = *c.terms().begin();
      neg = r < 0;
      coeff = (neg ? -c : c).str();
    } else {
      coeff = c.str();
    }
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    if (w.empty()) {
      os << coeff;
    } else {
      if (coeff != "1") os << coeff << ' ';
      os << pres_->word_str(w);
    }
    first = false;
  }
  return os.str();
}

Element multiply(const Element& a, const Element& b) { return a * b; }
Element star(const Element& a) { return a.star(); }

// ---------------------------------------------------------- confluence check

Report check_presentation(const PresentationPtr& pres, int degree) {
  Report report;
  const Presentation& p = *pres;
  const auto& rules = p.rules();

  CheckScope conf("critical pairs of " + p.name(),
                  "every overlap of rule left sides resolves to one normal form");
  auto resolve = [&](const Word& w, std::size_t r1, std::size_t pos1, std::size_t r2, std::size_t pos2) {
    if (static_cast<int>(w.size()) > degree) return;
    Element a = Element::normalize(pres, p.rewrite_at(w, r1, pos1));
    Element b = Element::normalize(pres, p.rewrite_at(w, r2, pos2));
    conf.expect_equal(p.word_str(w), a, b);
  };
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Word& l1 = rules[i].lhs;
    for (std::size_t j = 0; j < rules.size(); ++j) {
      const Word& l2 = rules[j].lhs;
      // Proper overlaps: a suffix of l1 equals a prefix of l2.
      for (std::size_t k = 1; k < std::min(l1.size(), l2.size()); ++k) {
        if (std::equal(l1.end() - static_cast<long>(k), l1.end(), l2.begin())) {
          Word w = l1;
          w.insert(w.end(), l2.begin() + static_cast<long>(k), l2.end());
          resolve(w, i, 0, j, l1.size() - k);
        }
      }
      // Inclusions: l2 occurs inside l1.
      if (i != j && l2.size() <= l1.size()) {
        for (std::size_t pos = 0; pos + l2.size() <= l1.size(); ++pos) {
          if (std::equal(l2.begin(), l2.end(), l1.begin() + static_cast<long>(pos))) resolve(l1, i, 0, j, pos);
        }
      }
    }
  }
  conf.set_detail(std::to_string(conf.cases()) + " critical pairs up to degree " + std::to_string(degree) +
                  " (local confluence certified only up to this bound)");
  report.add(conf.finish());

  if (p.has_star()) {
    CheckScope st("star compatibility of " + p.name(), "star(lhs) = star(rhs) for every rule");
    for (const auto& r : rules) {
      RawSum lhs{{r.lhs, Scalar(1L)}};
      Element a = Element::normalize(pres, star_raw(p, lhs));
      Element b = Element::normalize(pres, star_raw(p, r.rhs));
      st.expect_equal("star of rule " + p.word_str(r.lhs), a, b);
    }
    report.add(st.finish("rules"));
  }
  return report;
}

}  // namespace qpfb
