#include "qpfb/calculus.hpp"

#include <sstream>

#include "qpfb/error.hpp"
#include "qpfb/linalg.hpp"

namespace qpfb {

namespace {

struct SignedCoeff {
  bool neg = false;
  std::string text;
};

SignedCoeff split_sign(const Scalar& c) {
  SignedCoeff s;
  if (c.is_unit()) {
    s.neg = c.terms().begin()->second < 0;
    s.text = (s.neg ? -c : c).str();
  } else {
    s.text = c.str();
  }
  return s;
}

void emit_term(std::ostringstream& os, bool first, const Scalar& c, const std::string& body) {
  SignedCoeff s = split_sign(c);
  if (first) {
    if (s.neg) os << '-';
  } else {
    os << (s.neg ? " - " : " + ");
  }
  if (body.empty()) {
    os << s.text;
  } else {
    if (s.text != "1") os << s.text << ' ';
    os << body;
  }
}

UnivForm single_term(const PresentationPtr& p, const TensorElement::Key& k, const Scalar& c) {
  UnivForm f(p, static_cast<int>(k.size()) - 1);
  f.add_term(k, c);
  return f;
}

UnivForm rmul(const UnivForm& w, const Element& b);

UnivForm rmul_term(const PresentationPtr& p, const TensorElement::Key& k, const Scalar& c, const Element& b) {
  if (k.size() == 1) return UnivForm::from_element(c * (Element::word(p, k[0]) * b));
  TensorElement::Key head(k.begin(), k.end() - 1);
  UnivForm prev = single_term(p, head, c);
  Element an = Element::word(p, k.back());
  // (w' da_n) b = w' d(a_n b) - (w' a_n) db
  return prev.append_d(an * b) - rmul(prev, an).append_d(b);
}

UnivForm rmul(const UnivForm& w, const Element& b) {
  UnivForm out(w.base(), w.degree());
  for (const auto& [k, c] : w.terms().terms()) out += rmul_term(w.base(), k, c, b);
  return out;
}

}  // namespace

UnivForm::UnivForm(PresentationPtr base, int degree)
    : base_(base), degree_(degree), terms_(std::vector<PresentationPtr>(static_cast<std::size_t>(degree) + 1, base)) {
  if (degree < 0) throw Error("form degree must be nonnegative");
}

UnivForm UnivForm::from_element(const Element& a) {
  UnivForm f(a.presentation(), 0);
  for (const auto& [w, c] : a.terms()) f.add_term({w}, c);
  return f;
}

UnivForm UnivForm::differential(const Element& a) {
  UnivForm f(a.presentation(), 1);
  for (const auto& [w, c] : a.terms()) f.add_term({Word{}, w}, c);
  return f;
}

void UnivForm::add_term(const std::vector<Word>& slots, const Scalar& c) {
  if (slots.size() != static_cast<std::size_t>(degree_) + 1) throw MismatchError("form term has the wrong degree");
  for (std::size_t i = 1; i < slots.size(); ++i) {
    if (slots[i].empty()) return;
  }
  terms_.add_normal(slots, c);
}

UnivForm UnivForm::append_d(const Element& x) const {
  if (x.presentation() != base_) throw MismatchError("differential of an element outside the form algebra");
  UnivForm out(base_, degree_ + 1);
  for (const auto& [k, c] : terms_.terms()) {
    for (const auto& [w, cx] : x.terms()) {
      if (w.empty()) continue;
      TensorElement::Key nk = k;
      nk.push_back(w);
      out.add_term(nk, c * cx);
    }
  }
  return out;
}

void UnivForm::require_same(const UnivForm& o) const {
  if (base_ != o.base_ || degree_ != o.degree_) throw MismatchError("forms of different degree or algebra");
}

UnivForm& UnivForm::operator+=(const UnivForm& o) {
  require_same(o);
  terms_ += o.terms_;
  return *this;
}

UnivForm& UnivForm::operator-=(const UnivForm& o) {
  require_same(o);
  terms_ -= o.terms_;
  return *this;
}

UnivForm& UnivForm::operator*=(const Scalar& s) {
  terms_ *= s;
  return *this;
}

std::string UnivForm::str() const {
  if (terms_.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  const auto& t = terms_.terms();
  for (auto it = t.rbegin(); it != t.rend(); ++it) {
    const auto& [k, c] = *it;
    std::string body;
    if (!k[0].empty()) body = base_->word_str(k[0]);
    for (std::size_t i = 1; i < k.size(); ++i) {
      if (!body.empty()) body += ' ';
      body += "d(" + base_->word_str(k[i]) + ")";
    }
    emit_term(os, first, c, body);
    first = false;
  }
  return os.str();
}

UnivForm d(const UnivForm& w) {
  UnivForm out(w.base(), w.degree() + 1);
  for (const auto& [k, c] : w.terms().terms()) {
    if (k[0].empty()) continue;
    TensorElement::Key nk;
    nk.reserve(k.size() + 1);
    nk.emplace_back();
    nk.insert(nk.end(), k.begin(), k.end());
    out.add_term(nk, c);
  }
  return out;
}

UnivForm form_multiply(const UnivForm& w, const UnivForm& v) {
  if (w.base() != v.base()) throw MismatchError("forms over different algebras");
  const PresentationPtr& p = w.base();
  UnivForm out(p, w.degree() + v.degree());
  for (const auto& [k, c] : v.terms().terms()) {
    UnivForm part = rmul(w, Element::word(p, k[0]));
    for (std::size_t i = 1; i < k.size(); ++i) part = part.append_d(Element::word(p, k[i]));
    part *= c;
    out += part;
  }
  return out;
}

UnivForm operator*(const Element& a, const UnivForm& w) {
  if (a.presentation() != w.base()) throw MismatchError("element and form over different algebras");
  UnivForm out(w.base(), w.degree());
  for (const auto& [k, c] : w.terms().terms()) {
    Element head = a * Element::word(w.base(), k[0]);
    for (const auto& [hw, hc] : head.terms()) {
      TensorElement::Key nk = k;
      nk[0] = hw;
      out.add_term(nk, c * hc);
    }
  }
  return out;
}

UnivForm operator*(const UnivForm& w, const Element& a) {
  if (a.presentation() != w.base()) throw MismatchError("element and form over different algebras");
  return rmul(w, a);
}

// Kaehler forms

namespace {

/// Partner g' with g g' -> 1 (or g' g -> 1) for each generator, if any.
std::map<Gen, Gen> laurent_partners(const Presentation& p) {
  std::map<Gen, Gen> partner;
  for (const auto& r : p.rules()) {
    if (r.lhs.size() != 2 || r.rhs.size() != 1) continue;
    if (!r.rhs[0].first.empty() || !r.rhs[0].second.is_one()) continue;
    partner[r.lhs[0]] = r.lhs[1];
    partner[r.lhs[1]] = r.lhs[0];
  }
  return partner;
}

}  // namespace

bool KahlerForm::supported(const Presentation& p) {
  if (!p.is_commutative()) return false;
  auto partner = laurent_partners(p);
  for (Gen g = 0; g < p.generator_count(); ++g) {
    auto it = partner.find(g);
    if (it == partner.end() || it->second == g) return false;
  }
  return true;
}

void KahlerForm::add(Gen g, const Element& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = coeffs_.try_emplace(g, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

KahlerForm KahlerForm::differential(const Element& a) {
  const PresentationPtr& p = a.presentation();
  if (!supported(*p)) throw Error("Kaehler forms need a commutative algebra of Laurent generators");
  auto partner = laurent_partners(*p);
  KahlerForm out(p);
  for (const auto& [w, c] : a.terms()) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      Word rest = w;
      rest.erase(rest.begin() + static_cast<long>(i));
      Gen g = w[i];
      Gen h = partner.at(g);
      if (g < h) {
        out.add(g, Element::word(p, rest, c));
      } else {
        // d(g^-1) = -g^-2 dg with g^-1 the later generator of the pair
        out.add(h, Element::word(p, rest, -c) * Element::word(p, Word{g, g}));
      }
    }
  }
  return out;
}

KahlerForm KahlerForm::project(const UnivForm& w) {
  if (w.degree() != 1) throw Error("only 1-forms project to Kaehler forms here");
  KahlerForm out(w.base());
  for (const auto& [k, c] : w.terms().terms()) {
    out += Element::word(w.base(), k[0], c) * differential(Element::word(w.base(), k[1]));
  }
  return out;
}

KahlerForm& KahlerForm::operator+=(const KahlerForm& o) {
  if (!base_) base_ = o.base_;
  for (const auto& [g, c] : o.coeffs_) add(g, c);
  return *this;
}

KahlerForm operator*(const Element& a, const KahlerForm& w) {
  KahlerForm out(a.presentation());
  for (const auto& [g, c] : w.coeffs_) out.add(g, a * c);
  return out;
}

std::string KahlerForm::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, c] : coeffs_) {
    if (!first) os << " + ";
    os << '(' << c.str() << ") d(" << base_->generators()[g] << ')';
    first = false;
  }
  return os.str();
}

// Form-valued maps and connections

FormMap::FormMap(HopfPtr source, PresentationPtr base, int degree, Fn fn, std::string description)
    : source_(std::move(source)),
      base_(std::move(base)),
      degree_(degree),
      fn_(std::move(fn)),
      description_(std::move(description)) {}

UnivForm FormMap::apply(const Word& h) const {
  {
    std::lock_guard lock(memo_mutex_);
    auto it = memo_.find(h);
    if (it != memo_.end()) return it->second;
  }
  UnivForm v = fn_(h);
  std::lock_guard lock(memo_mutex_);
  memo_.emplace(h, v);
  return v;
}

UnivForm FormMap::apply(const Element& h) const {
  if (h.presentation() != source_->algebra()) throw MismatchError("form map applied outside '" + source_->name() + "'");
  UnivForm out(base_, degree_);
  for (const auto& [w, c] : h.terms()) {
    UnivForm v = apply(w);
    v *= c;
    out += v;
  }
  return out;
}

ConnectionForm connection_from_table(std::string name, Side side, HopfPtr h, PresentationPtr base,
                                     std::map<Word, UnivForm, DegLex> values) {
  const auto& alg = *h->algebra();
  for (const auto& [w, v] : values) {
    if (w.empty() && !v.is_zero()) throw Error("connection '" + name + "' must vanish on 1");
    if (!alg.is_irreducible(w)) throw Error("connection '" + name + "' given on a reducible word " + alg.word_str(w));
    if (v.base() != base || v.degree() != 1)
      throw MismatchError("connection '" + name + "' values must be 1-forms over '" + base->name() + "'");
  }
  ConnectionForm c;
  c.name = name;
  c.side = side;
  c.values = values;
  auto table = std::make_shared<const std::map<Word, UnivForm, DegLex>>(std::move(values));
  c.A = std::make_shared<FormMap>(
      h, base, 1,
      [table, base](const Word& w) {
        auto it = table->find(w);
        return it == table->end() ? UnivForm(base, 1) : it->second;
      },
      name);
  return c;
}

// Horizontal forms

void LocalHorizontal::add(const Word& h, const UnivForm& w) {
  if (w.is_zero()) return;
  if (w.degree() != degree || w.base() != base) throw MismatchError("horizontal form of a different degree");
  auto [it, inserted] = parts.try_emplace(h, w);
  if (!inserted) {
    it->second += w;
    if (it->second.is_zero()) parts.erase(it);
  }
}

LocalHorizontal& LocalHorizontal::operator+=(const LocalHorizontal& o) {
  for (const auto& [h, w] : o.parts) add(h, w);
  return *this;
}

LocalHorizontal& LocalHorizontal::operator-=(const LocalHorizontal& o) {
  for (const auto& [h, w] : o.parts) add(h, Scalar(-1L) * w);
  return *this;
}

std::string LocalHorizontal::str() const {
  if (parts.empty()) return "0";
  std::string out;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += "(" + it->second.str() + ") (x) " + (it->first.empty() ? std::string("1") : fibre->word_str(it->first));
  }
  return out;
}

LocalHorizontal horizontal(const UnivForm& w, const PresentationPtr& fibre, const Word& h) {
  LocalHorizontal e{w.base(), fibre, w.degree(), {}};
  e.add(h, w);
  return e;
}

LocalHorizontal local_covariant_derivative(const ConnectionForm& A, const LocalHorizontal& e) {
  const HopfAlgebra& H = *A.A->source();
  LocalHorizontal out{e.base, e.fibre, e.degree + 1, {}};
  Scalar sign = (e.degree % 2 == 0) ? Scalar(-1L) : Scalar(1L);
  for (const auto& [h, w] : e.parts) {
    out.add(h, d(w));
    for (const auto& [k, c] : H.coproduct(h).terms()) {
      UnivForm a = A.A->apply(k[0]);
      if (a.is_zero()) continue;
      if (A.side == Side::Left) {
        out.add(k[1], (c * sign) * form_multiply(w, a));
      } else {
        out.add(k[1], (-c) * form_multiply(a, w));
      }
    }
  }
  return out;
}

LocalHorizontal act_on_forms(const LinMap& tau, Side side, const LocalHorizontal& e) {
  const HopfAlgebra& H = *tau.source();
  LocalHorizontal out{e.base, e.fibre, e.degree, {}};
  for (const auto& [h, w] : e.parts) {
    for (const auto& [k, c] : H.coproduct(h).terms()) {
      Element t = tau.apply(k[0]);
      out.add(k[1], c * (side == Side::Left ? w * t : t * w));
    }
  }
  return out;
}

namespace {

void require_chart(const ConnectionForm& A, const LinMapPtr& tau, const LinMapPtr& tau_inv) {
  if (!tau || !tau_inv) throw Error("gauge transformation of a connection needs tau and its inverse");
  if (tau->target() != A.A->base() || tau_inv->target() != A.A->base())
    throw MismatchError("transition maps and connection live over different chart algebras");
  if (tau->source() != A.A->source() || tau_inv->source() != A.A->source())
    throw MismatchError("transition maps and connection have different structure Hopf algebras");
}

/// Left: sum tau^-1(h_1) w(h_2) tau(h_3); right: sum tau(h_3) w(h_2) tau^-1(h_1).
UnivForm conjugate(const FormMap& w, const LinMap& tau, const LinMap& tau_inv, Side side, const Word& h) {
  const HopfAlgebra& H = *w.source();
  UnivForm out(w.base(), w.degree());
  TensorElement t = H.coproduct_iterated(Element::word(H.algebra(), h), 2);
  for (const auto& [k, c] : t.terms()) {
    UnivForm mid = w.apply(k[1]);
    if (mid.is_zero()) continue;
    if (side == Side::Left) {
      out += c * (tau_inv.apply(k[0]) * mid * tau.apply(k[2]));
    } else {
      out += c * (tau.apply(k[2]) * mid * tau_inv.apply(k[0]));
    }
  }
  return out;
}

}  // namespace

ConnectionForm gauge_transform_connection(const ConnectionForm& A, const LinMapPtr& tau, const LinMapPtr& tau_inv) {
  require_chart(A, tau, tau_inv);
  ConnectionForm out;
  out.name = A.name + "'";
  out.side = A.side;
  FormMapPtr a = A.A;
  Side side = A.side;
  out.A = std::make_shared<FormMap>(
      a->source(), a->base(), 1,
      [a, tau, tau_inv, side](const Word& h) {
        const HopfAlgebra& H = *a->source();
        UnivForm v = conjugate(*a, *tau, *tau_inv, side, h);
        for (const auto& [k, c] : H.coproduct(h).terms()) {
          if (side == Side::Left) {
            v += c * (tau_inv->apply(k[0]) * UnivForm::differential(tau->apply(k[1])));
          } else {
            v -= c * (tau->apply(k[1]) * UnivForm::differential(tau_inv->apply(k[0])));
          }
        }
        return v;
      },
      a->description() + " transformed by " + tau->describe());
  return out;
}

FormMapPtr curvature(const ConnectionForm& A) {
  FormMapPtr a = A.A;
  Side side = A.side;
  return std::make_shared<FormMap>(
      a->source(), a->base(), 2,
      [a, side](const Word& h) {
        const HopfAlgebra& H = *a->source();
        UnivForm v = d(a->apply(h));
        for (const auto& [k, c] : H.coproduct(h).terms()) {
          UnivForm a1 = a->apply(k[0]);
          UnivForm a2 = a->apply(k[1]);
          if (a1.is_zero() || a2.is_zero()) continue;
          if (side == Side::Left) {
            v += c * form_multiply(a1, a2);
          } else {
            v -= c * form_multiply(a2, a1);
          }
        }
        return v;
      },
      "curvature of " + A.name);
}

Report check_curvature_covariance(const ConnectionForm& A, const LinMapPtr& tau, const LinMapPtr& tau_inv, int d) {
  require_chart(A, tau, tau_inv);
  Report report;
  const HopfAlgebra& H = *A.A->source();
  const PresentationPtr& base = A.A->base();
  const PresentationPtr& fib = H.algebra();
  const std::string bound = "degree <= " + std::to_string(d);
  ConnectionForm At = gauge_transform_connection(A, tau, tau_inv);
  FormMapPtr F = curvature(A);
  FormMapPtr Ft = curvature(At);

  {
    CheckScope s("normalization of the transformed connection " + At.name, "A'(1) = 0");
    s.expect_equal("1", At.A->apply(Word{}), UnivForm(base, 1));
    report.add(s.finish());
  }
  {
    CheckScope s(A.side == Side::Left ? "curvature covariance of " + A.name : "right curvature covariance of " + A.name,
                 A.side == Side::Left ? "F_A'(h) = sum tau^-1(h_1) F_A(h_2) tau(h_3)"
                                      : "F_A'(h) = sum tau(h_3) F_A(h_2) tau^-1(h_1)");
    for (const auto& w : fib->basis(d)) {
      s.expect_equal(fib->word_str(w).empty() ? "1" : fib->word_str(w), Ft->apply(w),
                     conjugate(*F, *tau, *tau_inv, A.side, w));
    }
    s.set_detail(bound);
    report.add(s.finish("monomials"));
  }
  {
    CheckScope s1("covariant derivative intertwines the gauge action for " + A.name, "D'(alpha(b (x) h)) = alpha(D(b (x) h))");
    CheckScope s2("square of the covariant derivative for " + A.name, "D'^2(alpha(b (x) h)) = alpha(D^2(b (x) h))");
    for (const auto& hb : fib->basis(d)) {
      for (const auto& bb : base->basis(d - static_cast<int>(hb.size()))) {
        LocalHorizontal e = horizontal(UnivForm::from_element(Element::word(base, bb)), fib, hb);
        LocalHorizontal ae = act_on_forms(*tau, A.side, e);
        LocalHorizontal De = local_covariant_derivative(A, e);
        LocalHorizontal Dtae = local_covariant_derivative(At, ae);
        std::string where = (bb.empty() ? std::string("1") : base->word_str(bb)) + " (x) " +
                            (hb.empty() ? std::string("1") : fib->word_str(hb));
        s1.expect_equal(where, Dtae, act_on_forms(*tau, A.side, De));
        s2.expect_equal(where, local_covariant_derivative(At, Dtae),
                        act_on_forms(*tau, A.side, local_covariant_derivative(A, De)));
      }
    }
    s1.set_detail(bound);
    s2.set_detail(bound);
    report.add(s1.finish("chart monomials"));
    report.add(s2.finish("chart monomials"));
  }
  return report;
}

// Ideal conditions

namespace {

/// Is e a scalar combination of the generators? Undetermined counts as no.
bool in_span(const std::vector<Element>& gens, const Element& e) {
  if (e.is_zero()) return true;
  std::map<Word, std::size_t, DegLex> rows;
  auto row = [&](const Word& w) { return rows.try_emplace(w, rows.size()).first->second; };
  std::vector<SparseVector> cols;
  for (const auto& g : gens) {
    SparseVector v;
    for (const auto& [w, c] : g.terms()) v[row(w)] = c;
    cols.push_back(std::move(v));
  }
  SparseVector rhs;
  for (const auto& [w, c] : e.terms()) rhs[row(w)] = c;
  UnitPivotSystem sys(std::move(cols), rows.size());
  return sys.solve(rhs).status == SolveStatus::Solved;
}

struct EitherForm {
  bool kahler;
  UnivForm u;
  KahlerForm k;
  bool operator==(const EitherForm& o) const { return kahler ? k == o.k : u == o.u; }
  std::string str() const { return kahler ? k.str() : u.str(); }
};

}  // namespace

Report check_ideal_conditions(const IdealSpec& spec, int d) {
  if (!spec.tau || !spec.tau_inv) throw Error("ideal '" + spec.name + "' needs tau and its inverse");
  Report report;
  const HopfAlgebra& H = *spec.tau->source();
  const PresentationPtr& P = spec.tau->target();
  const PresentationPtr& fib = H.algebra();
  const bool kahler = KahlerForm::supported(*P);
  const std::string bound = "degree <= " + std::to_string(d);
  report.note(std::string("forms on ") + P->name() + ": " +
              (kahler ? "Kaehler (commutative Laurent chart)" : "universal"));
  for (const auto& r : spec.generators) {
    if (r.presentation() != fib) throw MismatchError("ideal generator outside '" + fib->name() + "'");
  }
  const bool empty = spec.generators.empty();
  auto vacuous = [&](CheckScope& s) {
    s.mark_vacuous();
    s.set_detail("no generators: universal calculus");
  };
  auto to_form = [&](const UnivForm& u) {
    return kahler ? EitherForm{true, UnivForm(P, 1), KahlerForm::project(u)} : EitherForm{false, u, KahlerForm(P)};
  };
  const EitherForm zero = to_form(UnivForm(P, 1));
  auto rstr = [](const Element& r) { return r.str(); };

  // One record per chart generator a: (da) tau(h) = tau(h) (da).
  for (Gen g = 0; g < P->generator_count(); ++g) {
    const std::string& gname = P->generators()[g];
    CheckScope s("centrality of d(" + gname + ") against tau(H) for " + spec.name,
                 "(d" + gname + ") tau(h) = tau(h) (d" + gname + ")");
    if (empty) {
      vacuous(s);
    } else if (kahler) {
      s.pass();
      s.set_detail("Kaehler forms of a commutative algebra form a symmetric bimodule");
    } else {
      UnivForm dg = UnivForm::differential(Element::word(P, Word{g}));
      for (const auto& w : fib->basis(d)) {
        Element t = spec.tau->apply(w);
        s.expect_equal("tau(" + (w.empty() ? std::string("1") : fib->word_str(w)) + ")", dg * t, t * dg);
      }
      s.set_detail(bound);
    }
    report.add(s.finish());
  }
  {
    CheckScope s("inhomogeneous term annihilates " + spec.name,
                 spec.side == Side::Left ? "sum tau^-1(r_1) d tau(r_2) = 0" : "sum tau(r_2) d tau^-1(r_1) = 0");
    if (empty) vacuous(s);
    for (const auto& r : spec.generators) {
      UnivForm v(P, 1);
      for (const auto& [k, c] : H.coproduct(r).terms()) {
        if (spec.side == Side::Left) {
          v += c * (spec.tau_inv->apply(k[0]) * UnivForm::differential(spec.tau->apply(k[1])));
        } else {
          v += c * (spec.tau->apply(k[1]) * UnivForm::differential(spec.tau_inv->apply(k[0])));
        }
      }
      s.expect_equal(rstr(r), to_form(v), zero);
    }
    report.add(s.finish("generators"));
  }
  {
    CheckScope s("Ad-invariance of " + spec.name, "sum r_2 (x) S(r_1) r_3 in span(R) (x) H");
    if (empty) vacuous(s);
    for (const auto& r : spec.generators) {
      std::map<Word, Element, DegLex> groups;
      for (const auto& [k, c] : H.coproduct_iterated(r, 2).terms()) {
        Element right = H.antipode(k[0]) * Element::word(fib, k[2]);
        for (const auto& [w, cw] : right.terms()) {
          auto it = groups.try_emplace(w, Element(fib)).first;
          it->second += Element::word(fib, k[1], c * cw);
        }
      }
      bool ok = true;
      for (const auto& [w, e] : groups) {
        if (!in_span(spec.generators, e)) {
          s.fail(rstr(r), e.str() + " (x) " + (w.empty() ? std::string("1") : fib->word_str(w)), "span(R) (x) H");
          ok = false;
          break;
        }
      }
      if (ok) s.pass();
    }
    report.add(s.finish("generators"));
  }
  if (spec.connection) {
    CheckScope s("transformed connection vanishes on " + spec.name, "A'(r) = 0");
    ConnectionForm At = gauge_transform_connection(*spec.connection, spec.tau, spec.tau_inv);
    if (empty) vacuous(s);
    for (const auto& r : spec.generators) s.expect_equal(rstr(r), to_form(At.A->apply(r)), zero);
    report.add(s.finish("generators"));
  }
  return report;
}

}  // namespace qpfb
