#include "qpfb/bundle.hpp"

#include <algorithm>
#include <sstream>

#include "qpfb/error.hpp"
#include "qpfb/linalg.hpp"

namespace qpfb {

namespace {

std::string pair_str(ChartId i, ChartId j) { return std::to_string(i) + std::to_string(j); }

ChartPair ordered(ChartId i, ChartId j) { return i < j ? ChartPair{i, j} : ChartPair{j, i}; }

}  // namespace

// ------------------------------------------------------------ elements

std::string BaseElement::str() const {
  std::string s = "(";
  bool first = true;
  for (const auto& [i, e] : parts) {
    if (!first) s += ", ";
    s += e.str();
    first = false;
  }
  return s + ")";
}

TotalElement& TotalElement::operator+=(const TotalElement& o) {
  for (const auto& [i, t] : o.locals) {
    auto it = locals.find(i);
    if (it == locals.end()) throw MismatchError("total elements over different charts");
    it->second += t;
  }
  return *this;
}

TotalElement& TotalElement::operator-=(const TotalElement& o) {
  for (const auto& [i, t] : o.locals) {
    auto it = locals.find(i);
    if (it == locals.end()) throw MismatchError("total elements over different charts");
    it->second -= t;
  }
  return *this;
}

TotalElement operator*(const TotalElement& a, const TotalElement& b) {
  TotalElement out;
  for (const auto& [i, t] : a.locals) {
    auto it = b.locals.find(i);
    if (it == b.locals.end()) throw MismatchError("total elements over different charts");
    out.locals.emplace(i, t * it->second);
  }
  return out;
}

TotalElement operator*(const Scalar& s, TotalElement a) {
  for (auto& [i, t] : a.locals) t *= s;
  return a;
}

bool TotalElement::is_zero() const {
  return std::all_of(locals.begin(), locals.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

int TotalElement::degree() const {
  int d = -1;
  for (const auto& [i, t] : locals) d = std::max(d, t.degree());
  return d;
}

std::string TotalElement::str() const {
  std::string s = "(";
  bool first = true;
  for (const auto& [i, t] : locals) {
    if (!first) s += ", ";
    s += t.str();
    first = false;
  }
  return s + ")";
}

TensorElement map_slot(const TensorElement& t, std::size_t i, const Morphism& m) {
  if (t.slots().at(i) != m.source())
    throw MismatchError("morphism '" + m.name() + "' applied to a tensor slot outside its source");
  auto out = t.map_slot(i, [&](const Word& w) { return m.apply_word(w); });
  return out;
}

TensorElement ChartChange::apply(const TensorElement& t) const {
  const auto& H = tau_->source();
  if (t.rank() < 2 || t.slots()[0] != tau_->target() || t.slots()[1] != H->algebra())
    throw MismatchError("chart change phi_" + pair_str(i_, j_) + " applied outside B_ij (x) H");
  TensorElement out(t.slots());
  std::vector<Element> factors(t.rank());
  for (const auto& [k, c] : t.terms()) {
    Element b = Element::word(t.slots()[0], k[0]);
    for (std::size_t s = 2; s < k.size(); ++s) factors[s] = Element::word(t.slots()[s], k[s]);
    for (const auto& [dk, dc] : H->coproduct(k[1]).terms()) {
      factors[0] = b * tau_->apply(dk[0]);
      factors[1] = Element::word(H->algebra(), dk[1]);
      out.add_product(factors, c * dc);
    }
  }
  return out;
}

// -------------------------------------------------------------- bundle

BundlePtr Bundle::create(Spec spec, int degree) {
  const std::string where = "bundle '" + spec.name + "'";
  if (!spec.fibre) throw Error(where + ": no fibre");
  if (spec.transitions.fibre && spec.transitions.fibre != spec.fibre)
    throw MismatchError(where + ": transition functions use a different fibre");
  auto& cov = spec.cover;
  if (cov.charts.empty()) throw Error(where + ": no charts");
  std::sort(cov.charts.begin(), cov.charts.end());
  for (ChartId i : cov.charts) {
    if (!cov.chart_algebras.count(i)) throw Error(where + ": chart " + std::to_string(i) + " has no algebra");
  }
  for (const auto& [key, alg] : cov.overlap_algebras) {
    auto [i, j] = key;
    if (i >= j) throw Error(where + ": overlap keys must be ordered");
    if (!cov.chart_algebras.count(i) || !cov.chart_algebras.count(j))
      throw Error(where + ": overlap " + pair_str(i, j) + " names an unknown chart");
    for (auto [a, b] : {ChartPair{i, j}, ChartPair{j, i}}) {
      auto it = cov.restrictions.find({a, b});
      if (it == cov.restrictions.end()) throw Error(where + ": missing restriction " + pair_str(a, b));
      if (it->second->source() != cov.chart_algebras.at(a) || it->second->target() != alg)
        throw MismatchError(where + ": restriction " + pair_str(a, b) + " must map B_" + std::to_string(a) +
                            " to the overlap algebra");
    }
  }
  auto b = std::shared_ptr<Bundle>(new Bundle(std::move(spec)));
  for (const auto& [key, m] : b->spec_.transitions.maps) {
    auto [i, j] = key;
    if (!b->spec_.cover.overlap_algebras.count(ordered(i, j)))
      throw Error(where + ": transition " + pair_str(i, j) + " has no overlap");
    if (m->source() != b->spec_.fibre->algebra() || m->target() != b->overlap(i, j))
      throw MismatchError(where + ": transition " + pair_str(i, j) + " must map H to B_" + pair_str(i, j));
    b->taus_[key] = LinMap::hom(b->spec_.fibre, m);
  }
  for (const auto& [key, alg] : b->spec_.cover.overlap_algebras) {
    auto [i, j] = key;
    bool fwd = b->taus_.count({i, j}) > 0, bwd = b->taus_.count({j, i}) > 0;
    if (!fwd && !bwd) throw Error(where + ": overlap " + pair_str(i, j) + " has no transition function");
    if (!fwd) b->taus_[{i, j}] = LinMap::precompose_S(b->taus_.at({j, i}));
    if (!bwd) b->taus_[{j, i}] = LinMap::precompose_S(b->taus_.at({i, j}));
  }
  b->consistency_ = b->check_consistency(degree);
  return b;
}

const PresentationPtr& Bundle::chart_algebra(ChartId i) const {
  auto it = spec_.cover.chart_algebras.find(i);
  if (it == spec_.cover.chart_algebras.end()) throw Error("bundle '" + name() + "' has no chart " + std::to_string(i));
  return it->second;
}

const PresentationPtr& Bundle::overlap(ChartId i, ChartId j) const {
  auto it = spec_.cover.overlap_algebras.find(ordered(i, j));
  if (it == spec_.cover.overlap_algebras.end())
    throw Error("bundle '" + name() + "' has no overlap " + pair_str(i, j));
  return it->second;
}

const MorphismPtr& Bundle::restriction(ChartId i, ChartId j) const {
  auto it = spec_.cover.restrictions.find({i, j});
  if (it == spec_.cover.restrictions.end())
    throw Error("bundle '" + name() + "' has no restriction " + pair_str(i, j));
  return it->second;
}

std::vector<ChartPair> Bundle::overlap_pairs() const {
  std::vector<ChartPair> out;
  for (const auto& [key, alg] : spec_.cover.overlap_algebras) {
    out.push_back(key);
    out.emplace_back(key.second, key.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const LinMapPtr& Bundle::transition(ChartId i, ChartId j) const {
  auto it = taus_.find({i, j});
  if (it == taus_.end()) throw Error("bundle '" + name() + "' has no transition " + pair_str(i, j));
  return it->second;
}

bool Bundle::transition_declared(ChartId i, ChartId j) const { return spec_.transitions.maps.count({i, j}) > 0; }

ChartChange Bundle::build_phi(ChartId i, ChartId j) const {
  if (!consistent())
    throw CertificateError("bundle '" + name() + "': transition data has no consistency certificate");
  return ChartChange(i, j, transition(i, j));
}

Report check_transition_consistency(const Bundle& b, int d) { return b.check_consistency(d); }

Report Bundle::check_consistency(int d) const {
  Report report;
  const auto& H = spec_.fibre->algebra();
  bool defined = true;
  for (const auto& [key, m] : spec_.cover.restrictions) {
    Report r = m->check();
    defined = defined && r.passed();
    report.append(r);
  }
  for (const auto& [key, m] : spec_.transitions.maps) {
    Report r = m->check();
    defined = defined && r.passed();
    report.append(r);
  }
  if (!defined) return report;

  const auto pairs = overlap_pairs();
  const auto hb = H->basis(d);
  {
    CheckScope s("unitality of transition functions", "tau_ij(1) = 1");
    for (auto [i, j] : pairs) {
      s.expect_equal("tau_" + pair_str(i, j), transition(i, j)->apply(Word{}), Element::one(overlap(i, j)));
    }
    report.add(s.finish("transitions"));
  }
  {
    CheckScope s("centrality of transition images", "tau_ij(h) b = b tau_ij(h) for b a generator of B_ij");
    for (auto [i, j] : pairs) {
      const auto& B = overlap(i, j);
      for (const auto& w : hb) {
        Element t = transition(i, j)->apply(w);
        for (Gen g = 0; g < B->generator_count(); ++g) {
          Element x = Element::word(B, Word{g});
          s.expect_equal("tau_" + pair_str(i, j) + "(" + H->word_str(w) + ") against " + B->generators()[g], t * x,
                         x * t);
        }
      }
    }
    s.set_detail("H monomials of degree <= " + std::to_string(d));
    report.add(s.finish());
  }
  {
    CheckScope s("transition symmetry", "tau_ji(h) = tau_ij(S(h))");
    for (const auto& [key, alg] : spec_.cover.overlap_algebras) {
      auto [i, j] = key;
      for (const auto& w : hb) {
        s.expect_equal("tau_" + pair_str(j, i) + "(" + H->word_str(w) + ")", transition(j, i)->apply(w),
                       transition(i, j)->apply(spec_.fibre->antipode(w)));
      }
    }
    report.add(s.finish());
  }
  {
    CheckScope s("chart changes are mutually inverse", "phi_ij(phi_ji(b (x) h)) = b (x) h");
    for (auto [i, j] : pairs) {
      ChartChange fwd(i, j, transition(i, j)), bwd(j, i, transition(j, i));
      const auto& B = overlap(i, j);
      for (const auto& bw : B->basis(d)) {
        for (const auto& hw : hb) {
          if (static_cast<int>(bw.size() + hw.size()) > d) continue;
          TensorElement t({B, H});
          t.add_normal({bw, hw}, Scalar(1L));
          s.expect_equal("phi_" + pair_str(i, j) + " on " + t.str(), fwd.apply(bwd.apply(t)), t);
        }
      }
    }
    s.set_detail("monomials of B_ij (x) H of degree <= " + std::to_string(d));
    report.add(s.finish());
  }
  {
    CheckScope s("restrictions reach the overlap generators", "g = pi^i_j(f) for some f, every generator g of B_ij");
    for (auto [i, j] : pairs) {
      const auto& m = restriction(i, j);
      const auto& B = overlap(i, j);
      for (Gen g = 0; g < B->generator_count(); ++g) {
        Element target = Element::word(B, Word{g});
        auto pre = solve_preimage(*m, target, std::max(d, 1));
        if (pre) {
          s.pass();
        } else {
          s.fail("pi^" + std::to_string(i) + "_" + std::to_string(j) + " onto " + B->generators()[g], "no preimage",
                 target.str());
        }
      }
    }
    s.set_detail("preimages searched up to degree " + std::to_string(std::max(d, 1)));
    report.add(s.finish());
  }
  return report;
}

std::optional<Witness> Bundle::gluing_violation(const TotalElement& f) const {
  for (ChartId i : charts()) {
    auto it = f.locals.find(i);
    if (it == f.locals.end()) return Witness{"chart " + std::to_string(i), "missing", "local component"};
    const auto& t = it->second;
    if (t.rank() < 2 || t.slots()[0] != chart_algebra(i))
      throw MismatchError("local component for chart " + std::to_string(i) + " is not in B_i (x) H");
    for (std::size_t s = 1; s < t.rank(); ++s) {
      if (t.slots()[s] != fibre_algebra()) throw MismatchError("local component has a leg outside H");
    }
  }
  for (const auto& [key, alg] : spec_.cover.overlap_algebras) {
    auto [i, j] = key;
    TensorElement lhs = map_slot(f.locals.at(i), 0, *restriction(i, j));
    TensorElement rhs = build_phi(i, j).apply(map_slot(f.locals.at(j), 0, *restriction(j, i)));
    if (!(lhs == rhs)) return Witness{"overlap " + pair_str(i, j), lhs.str(), rhs.str()};
  }
  return std::nullopt;
}

TotalElement Bundle::glue_element(std::map<ChartId, TensorElement> locals) const {
  TotalElement f{std::move(locals)};
  if (auto w = gluing_violation(f)) {
    throw WitnessError("gluing violated on " + w->where, w->where, w->lhs, w->rhs);
  }
  return f;
}

std::optional<Witness> Bundle::base_violation(const BaseElement& b) const {
  for (ChartId i : charts()) {
    auto it = b.parts.find(i);
    if (it == b.parts.end()) return Witness{"chart " + std::to_string(i), "missing", "component"};
    if (it->second.presentation() != chart_algebra(i))
      throw MismatchError("base component for chart " + std::to_string(i) + " is not in B_i");
  }
  for (const auto& [key, alg] : spec_.cover.overlap_algebras) {
    auto [i, j] = key;
    Element l = restriction(i, j)->apply(b.parts.at(i));
    Element r = restriction(j, i)->apply(b.parts.at(j));
    if (!(l == r)) return Witness{"overlap " + pair_str(i, j), l.str(), r.str()};
  }
  return std::nullopt;
}

BaseElement Bundle::base_element(std::map<ChartId, Element> parts) const {
  BaseElement b{std::move(parts)};
  if (auto w = base_violation(b)) throw WitnessError("invalid base element on " + w->where, w->where, w->lhs, w->rhs);
  return b;
}

BaseElement Bundle::base_multiply(const BaseElement& a, const BaseElement& b) const {
  BaseElement out;
  for (ChartId i : charts()) out.parts.emplace(i, a.parts.at(i) * b.parts.at(i));
  return out;
}

TotalElement Bundle::base_embed(const BaseElement& b) const {
  if (auto w = base_violation(b)) throw WitnessError("invalid base element on " + w->where, w->where, w->lhs, w->rhs);
  TotalElement f;
  for (ChartId i : charts()) {
    f.locals.emplace(i, TensorElement::product_of({b.parts.at(i), Element::one(fibre_algebra())}));
  }
  return f;
}

TotalElement Bundle::zero() const {
  TotalElement f;
  for (ChartId i : charts()) f.locals.emplace(i, TensorElement({chart_algebra(i), fibre_algebra()}));
  return f;
}

TotalElement Bundle::one() const {
  TotalElement f;
  for (ChartId i : charts()) f.locals.emplace(i, TensorElement::unit({chart_algebra(i), fibre_algebra()}));
  return f;
}

TotalElement Bundle::coaction(const TotalElement& f) const {
  TotalElement out;
  for (const auto& [i, t] : f.locals) {
    out.locals.emplace(i, t.expand_slot(t.rank() - 1, [&](const Word& w) { return spec_.fibre->coproduct(w); }));
  }
  return out;
}

TotalElement Bundle::counit_leg(const TotalElement& f) const {
  TotalElement out;
  for (const auto& [i, t] : f.locals) {
    std::vector<PresentationPtr> slots(t.slots().begin(), t.slots().end() - 1);
    TensorElement r(slots);
    for (const auto& [k, c] : t.terms()) {
      TensorElement::Key nk(k.begin(), k.end() - 1);
      r.add_normal(nk, c * spec_.fibre->counit(k.back()));
    }
    out.locals.emplace(i, std::move(r));
  }
  return out;
}

// ------------------------------------------------------ linear solving

std::optional<Element> solve_preimage(const Morphism& m, const Element& target, int max_degree) {
  if (target.presentation() != m.target()) throw MismatchError("preimage target outside '" + m.target()->name() + "'");
  if (target.is_zero()) return Element(m.source());
  for (int deg = std::max(target.degree(), 0); deg <= max_degree; ++deg) {
    const auto basis = m.source()->basis(deg);
    std::map<Word, std::size_t, DegLex> rows;
    auto row = [&](const Word& w) { return rows.emplace(w, rows.size()).first->second; };
    std::vector<SparseVector> cols;
    for (const auto& w : basis) {
      SparseVector col;
      for (const auto& [tw, c] : m.apply_word(w).terms()) col[row(tw)] = c;
      cols.push_back(std::move(col));
    }
    SparseVector rhs;
    for (const auto& [tw, c] : target.terms()) rhs[row(tw)] = c;
    UnitPivotSystem sys(std::move(cols), rows.size());
    SolveResult r = sys.solve(rhs);
    if (r.status != SolveStatus::Solved) continue;
    Element out(m.source());
    for (std::size_t c = 0; c < basis.size(); ++c) {
      if (!r.x[c].is_zero()) out += Element::word(m.source(), basis[c], r.x[c]);
    }
    if (m.apply(out) == target) return out;
  }
  return std::nullopt;
}

std::vector<Element> morphism_kernel(const Morphism& m, int d, bool* complete) {
  const auto basis = m.source()->basis(d);
  std::map<Word, std::size_t, DegLex> rows;
  std::vector<SparseVector> cols;
  for (const auto& w : basis) {
    SparseVector col;
    for (const auto& [tw, c] : m.apply_word(w).terms()) col[rows.emplace(tw, rows.size()).first->second] = c;
    cols.push_back(std::move(col));
  }
  UnitPivotSystem sys(std::move(cols), rows.size());
  std::vector<Element> out;
  for (const auto& x : sys.kernel(complete)) {
    Element e(m.source());
    for (std::size_t c = 0; c < basis.size(); ++c) {
      if (!x[c].is_zero()) e += Element::word(m.source(), basis[c], x[c]);
    }
    out.push_back(std::move(e));
  }
  return out;
}

// ------------------------------------------------------ spanning sets

std::optional<Element> Bundle::lift_base(ChartId src, ChartId dst, const Element& b) const {
  Element image = restriction(src, dst)->apply(b);
  return solve_preimage(*restriction(dst, src), image, std::max(image.degree(), 0) + 2);
}

TotalElement Bundle::lift_from(ChartId src, const TensorElement& local, bool* ok) const {
  TotalElement f;
  f.locals.emplace(src, local);
  for (ChartId dst : charts()) {
    if (dst == src) continue;
    TensorElement over = build_phi(dst, src).apply(map_slot(local, 0, *restriction(src, dst)));
    TensorElement lifted({chart_algebra(dst), fibre_algebra()});
    for (const auto& [k, c] : over.terms()) {
      auto pre = solve_preimage(*restriction(dst, src), Element::word(overlap(dst, src), k[0]),
                                static_cast<int>(k[0].size()) + 2);
      if (!pre) {
        *ok = false;
        continue;
      }
      lifted.add_product({*pre, Element::word(fibre_algebra(), k[1])}, c);
    }
    f.locals.emplace(dst, std::move(lifted));
  }
  return f;
}

namespace {

void require_two_charts(const Bundle& b) {
  if (b.charts().size() != 2 || b.cover().overlap_algebras.size() != 1)
    throw Error("bundle '" + b.name() + "': spanning sets are implemented for two-chart covers");
}

}  // namespace

std::vector<TotalElement> Bundle::spanning_set(int d, bool* complete) const {
  require_two_charts(*this);
  const ChartId c1 = charts()[0], c2 = charts()[1];
  const auto& H = fibre_algebra();
  bool ok = true;
  std::vector<std::pair<int, TotalElement>> items;
  for (const auto& bw : chart_algebra(c2)->basis(d)) {
    for (const auto& hw : H->basis(d - static_cast<int>(bw.size()))) {
      TensorElement local({chart_algebra(c2), H});
      local.add_normal({bw, hw}, Scalar(1L));
      bool lifted = true;
      TotalElement f = lift_from(c2, local, &lifted);
      if (!lifted || gluing_violation(f)) {
        ok = false;
        continue;
      }
      items.emplace_back(static_cast<int>(bw.size() + hw.size()), std::move(f));
    }
  }
  bool kernel_ok = true;
  auto kernel = kernel_elements(c2, d, &kernel_ok);
  ok = ok && kernel_ok;
  for (auto& f : kernel) {
    // Degree of the generating monomial pair: the local is k (x) h.
    int deg = 0;
    for (const auto& [k, c] : f.locals.at(c1).terms()) deg = std::max(deg, static_cast<int>(k[0].size() + k[1].size()));
    items.emplace_back(deg, std::move(f));
  }
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (complete) *complete = ok;
  std::vector<TotalElement> out;
  out.reserve(items.size());
  for (auto& [deg, f] : items) out.push_back(std::move(f));
  return out;
}

std::vector<TotalElement> Bundle::kernel_elements(ChartId i, int d, bool* complete) const {
  require_two_charts(*this);
  const ChartId j = charts()[0] == i ? charts()[1] : charts()[0];
  const auto& H = fibre_algebra();
  std::vector<TotalElement> out;
  for (const auto& k : morphism_kernel(*restriction(j, i), d, complete)) {
    for (const auto& hw : H->basis(d - k.degree())) {
      TotalElement f = zero();
      f.locals.at(j) = TensorElement::product_of({k, Element::word(H, hw)});
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<BaseElement> Bundle::base_spanning_set(int d, bool* complete) const {
  require_two_charts(*this);
  const ChartId c1 = charts()[0], c2 = charts()[1];
  bool ok = true;
  std::vector<std::pair<int, BaseElement>> items;
  for (const auto& w : chart_algebra(c2)->basis(d)) {
    Element b2 = Element::word(chart_algebra(c2), w);
    auto b1 = lift_base(c2, c1, b2);
    if (!b1) {
      ok = false;
      continue;
    }
    items.emplace_back(static_cast<int>(w.size()), BaseElement{{{c1, *b1}, {c2, b2}}});
  }
  bool kernel_ok = true;
  for (const auto& k : morphism_kernel(*restriction(c1, c2), d, &kernel_ok)) {
    items.emplace_back(k.degree(), BaseElement{{{c1, k}, {c2, Element(chart_algebra(c2))}}});
  }
  ok = ok && kernel_ok;
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (complete) *complete = ok;
  std::vector<BaseElement> out;
  for (auto& [deg, b] : items) out.push_back(std::move(b));
  return out;
}

}  // namespace qpfb
