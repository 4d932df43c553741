#include "qpfb/gauge.hpp"

#include <algorithm>

#include "qpfb/error.hpp"
#include "qpfb/linalg.hpp"

namespace qpfb {

namespace {

std::string chart_str(ChartId i) { return std::to_string(i); }
std::string pair_str(ChartId i, ChartId j) { return chart_str(i) + chart_str(j); }

const LinMapPtr& tau_of(const GaugeFamily& fam, ChartId i, bool inverse) {
  const auto& m = inverse ? fam.tau_invs : fam.taus;
  auto it = m.find(i);
  if (it == m.end())
    throw Error("gauge family '" + fam.name + "' has no " + (inverse ? "inverse " : "") + "map for chart " +
                chart_str(i));
  return it->second;
}

void validate_family(const GaugeFamily& fam) {
  if (!fam.bundle) throw Error("gauge family '" + fam.name + "' has no bundle");
  for (ChartId i : fam.bundle->charts()) {
    for (bool inv : {false, true}) {
      const auto& t = tau_of(fam, i, inv);
      if (t->source() != fam.bundle->fibre() || t->target() != fam.bundle->chart_algebra(i))
        throw MismatchError("gauge family '" + fam.name + "': chart " + chart_str(i) + " map must go from H to B_" +
                            chart_str(i));
    }
  }
}

}  // namespace

Element compatibility_rhs(const GaugeFamily& fam, ChartId i, ChartId j, const Word& h, CompatOrder order) {
  const auto& b = *fam.bundle;
  const auto& H = b.fibre();
  const auto& B = b.overlap(i, j);
  const LinMap& tij = *b.transition(i, j);
  const LinMap& tji = *b.transition(j, i);
  const Morphism& pji = *b.restriction(j, i);
  const LinMap& tau_j = *tau_of(fam, j, false);
  Element out(B);
  for (const auto& [k, c] : H->coproduct_iterated(Element::word(H->algebra(), h), 2).terms()) {
    Element mid = pji.apply(tau_j.apply(k[1]));
    if (mid.is_zero()) continue;
    Element first(B), last(B);
    if (order == CompatOrder::Printed) {
      first = tij.apply(k[0]);
      last = tji.apply(k[2]);
    } else if (fam.side == Side::Left) {
      first = tji.apply(k[0]);
      last = tij.apply(k[2]);
    } else {
      first = tij.apply(H->antipode_inv(k[0]));
      last = tij.apply(k[2]);
    }
    out += c * (first * mid * last);
  }
  return out;
}

Report check_family(const GaugeFamily& fam, int d) {
  validate_family(fam);
  Report report;
  const auto& b = *fam.bundle;
  const auto& H = b.fibre_algebra();
  {
    CheckScope s("unitality of " + fam.name, "tau_i(1) = 1");
    for (ChartId i : b.charts()) {
      s.expect_equal("tau_" + chart_str(i), tau_of(fam, i, false)->apply(Word{}), Element::one(b.chart_algebra(i)));
    }
    report.add(s.finish("charts"));
  }
  {
    const std::string anchor = fam.side == Side::Left
                                   ? "pi^i_j(tau_i(h)) = sum tau_ji(h_1) pi^j_i(tau_j(h_2)) tau_ij(h_3)"
                                   : "pi^i_j(tau_i(h)) = sum tau_ij(Sinv(h_1)) pi^j_i(tau_j(h_2)) tau_ij(h_3)";
    CheckScope s("overlap compatibility of " + fam.name, anchor);
    for (auto [i, j] : b.overlap_pairs()) {
      for (const auto& w : H->basis(d)) {
        Element lhs = b.restriction(i, j)->apply(tau_of(fam, i, false)->apply(w));
        s.expect_equal(H->word_str(w) + " on overlap " + pair_str(i, j), lhs, compatibility_rhs(fam, i, j, w));
      }
    }
    s.set_detail("monomials of degree <= " + std::to_string(d));
    report.add(s.finish("monomials"));
  }
  for (ChartId i : b.charts()) {
    report.append(check_conv_inverse(*tau_of(fam, i, false), *tau_of(fam, i, true), d, InverseSide::Both,
                                     fam.side == Side::Right, fam.name + " on chart " + chart_str(i)));
  }
  return report;
}

// ------------------------------------------------------------ transformation

GaugeTransformation::GaugeTransformation(GaugeFamily fam) {
  validate_family(fam);
  auto impl = std::make_shared<Impl>();
  impl->family = std::move(fam);
  impl_ = std::move(impl);
}

GaugeTransformation GaugeTransformation::unchecked(GaugeFamily fam) { return GaugeTransformation(std::move(fam)); }

GaugeTransformation GaugeTransformation::from_family(GaugeFamily fam, int d) {
  Report r = check_family(fam, d);
  if (const Record* f = r.first_failure()) {
    throw WitnessError("gauge family '" + fam.name + "' rejected: " + f->name, f->witness->where, f->witness->lhs,
                       f->witness->rhs);
  }
  GaugeTransformation t(std::move(fam));
  const auto& H = t.bundle()->fibre_algebra();
  for (bool inv : {false, true}) {
    for (const auto& w : H->basis(d)) {
      if (auto v = t.bundle()->gluing_violation(t.g(w, inv))) {
        throw WitnessError("chart g-maps of '" + t.name() + "' do not glue at " + H->word_str(w),
                           H->word_str(w) + (inv ? " (inverse)" : "") + " on " + v->where, v->lhs, v->rhs);
      }
    }
  }
  return t;
}

GaugeTransformation GaugeTransformation::identity(const BundlePtr& b, Side side) {
  GaugeFamily fam;
  fam.name = "identity";
  fam.side = side;
  fam.bundle = b;
  for (ChartId i : b->charts()) {
    auto u = LinMap::unit(b->fibre(), b->chart_algebra(i));
    fam.taus[i] = u;
    fam.tau_invs[i] = u;
  }
  return GaugeTransformation(std::move(fam));
}

TensorElement GaugeTransformation::chart_g(ChartId i, const Word& h, bool inverse) const {
  auto key = std::make_tuple(i, h, inverse);
  {
    std::lock_guard lock(impl_->mutex);
    auto it = impl_->memo.find(key);
    if (it != impl_->memo.end()) return it->second;
  }
  const auto& fam = impl_->family;
  const auto& Hopf = *fam.bundle->fibre();
  const auto& H = Hopf.algebra();
  const LinMap& tau = *tau_of(fam, i, inverse);
  TensorElement out({fam.bundle->chart_algebra(i), H});
  for (const auto& [k, c] : Hopf.coproduct_iterated(Element::word(H, h), 2).terms()) {
    Element t = tau.apply(k[1]);
    if (t.is_zero()) continue;
    Element leg = fam.side == Side::Left ? Hopf.antipode(k[0]) * Element::word(H, k[2])
                                         : Element::word(H, k[2]) * Hopf.antipode_inv(k[0]);
    out.add_product({t, leg}, c);
  }
  std::lock_guard lock(impl_->mutex);
  impl_->memo.emplace(key, out);
  return out;
}

TotalElement GaugeTransformation::g(const Word& h, bool inverse) const {
  TotalElement f;
  for (ChartId i : bundle()->charts()) f.locals.emplace(i, chart_g(i, h, inverse));
  return f;
}

TotalElement GaugeTransformation::g(const Element& h, bool inverse) const {
  TotalElement f = bundle()->zero();
  for (const auto& [w, c] : h.terms()) f += c * g(w, inverse);
  return f;
}

TotalElement GaugeTransformation::apply(const TotalElement& f) const {
  const auto& Hopf = *bundle()->fibre();
  const auto& H = Hopf.algebra();
  TotalElement out;
  for (const auto& [i, t] : f.locals) {
    TensorElement r(t.slots());
    const auto rank = t.rank();
    std::vector<Element> rest(rank);
    for (const auto& [k, c] : t.terms()) {
      Element b = Element::word(t.slots()[0], k[0]);
      for (std::size_t s = 2; s < rank; ++s) rest[s] = Element::word(t.slots()[s], k[s]);
      for (const auto& [dk, dc] : Hopf.coproduct(k[1]).terms()) {
        TensorElement left = TensorElement::product_of({b, Element::word(H, dk[0])});
        TensorElement gv = chart_g(i, dk[1]);
        TensorElement prod = side() == Side::Left ? left * gv : gv * left;
        for (const auto& [pk, pc] : prod.terms()) {
          rest[0] = Element::word(t.slots()[0], pk[0]);
          rest[1] = Element::word(H, pk[1]);
          r.add_product(rest, c * dc * pc);
        }
      }
    }
    out.locals.emplace(i, std::move(r));
  }
  return out;
}

GaugeTransformation compose(const GaugeTransformation& s, const GaugeTransformation& t) {
  if (s.side() != t.side()) throw Error("cannot compose a left and a right gauge transformation");
  if (s.bundle() != t.bundle()) throw MismatchError("gauge transformations over different bundles");
  GaugeFamily fam;
  fam.name = s.name() + "." + t.name();
  fam.side = s.side();
  fam.bundle = s.bundle();
  for (ChartId i : fam.bundle->charts()) {
    const auto& fs = s.family();
    const auto& ft = t.family();
    if (fam.side == Side::Left) {
      fam.taus[i] = LinMap::convolve(ft.taus.at(i), fs.taus.at(i));
      fam.tau_invs[i] = LinMap::convolve(fs.tau_invs.at(i), ft.tau_invs.at(i));
    } else {
      fam.taus[i] = LinMap::twisted_convolve(fs.taus.at(i), ft.taus.at(i));
      fam.tau_invs[i] = LinMap::twisted_convolve(ft.tau_invs.at(i), fs.tau_invs.at(i));
    }
  }
  return GaugeTransformation::unchecked(std::move(fam));
}

GaugeTransformation invert(const GaugeTransformation& t) {
  GaugeFamily fam = t.family();
  fam.name = t.name() + "^-1";
  std::swap(fam.taus, fam.tau_invs);
  return GaugeTransformation::unchecked(std::move(fam));
}

GaugeTransformation left_to_right(const GaugeTransformation& t) {
  if (t.side() != Side::Left) throw Error("left_to_right expects a left gauge transformation");
  if (!t.bundle()->fibre()->has_antipode_inv())
    throw Error("left_to_right needs a declared inverse antipode on '" + t.bundle()->fibre()->name() + "'");
  GaugeFamily fam = t.family();
  fam.name = t.name() + "_r";
  fam.side = Side::Right;
  for (auto& [i, m] : fam.taus) m = LinMap::precompose_Sinv(m);
  for (auto& [i, m] : fam.tau_invs) m = LinMap::precompose_Sinv(m);
  return GaugeTransformation::unchecked(std::move(fam));
}

GaugeTransformation right_to_left(const GaugeTransformation& t) {
  if (t.side() != Side::Right) throw Error("right_to_left expects a right gauge transformation");
  GaugeFamily fam = t.family();
  fam.name = t.name() + "_l";
  fam.side = Side::Left;
  for (auto& [i, m] : fam.taus) m = LinMap::precompose_S(m);
  for (auto& [i, m] : fam.tau_invs) m = LinMap::precompose_S(m);
  return GaugeTransformation::unchecked(std::move(fam));
}

// ---------------------------------------------------------------- verify

Report verify_gauge(const GaugeTransformation& t, int d) {
  Report report;
  const auto& b = *t.bundle();
  const auto& Hopf = *b.fibre();
  const auto& H = Hopf.algebra();
  const bool left = t.side() == Side::Left;
  const auto hb = H->basis(d);
  const std::string bound = "monomials of degree <= " + std::to_string(d);

  {
    CheckScope s("gluing of the chart g-maps", "(pi^i_j (x) id) g_i(h) = phi_ij((pi^j_i (x) id) g_j(h))");
    for (bool inv : {false, true}) {
      for (const auto& w : hb) {
        if (auto v = b.gluing_violation(t.g(w, inv))) {
          s.fail((inv ? "g^-1(" : "g(") + H->word_str(w) + ") on " + v->where, v->lhs, v->rhs);
        } else {
          s.pass();
        }
      }
    }
    s.set_detail("g and g^-1 on " + bound);
    report.add(s.finish());
    if (s.failed()) {
      report.note("gluing failed; axiom checks skipped");
      return report;
    }
  }
  {
    CheckScope s("unitality of g", "g(1) = 1");
    s.expect_equal("1", t.g(Word{}), b.one());
    s.expect_equal("1 (inverse)", t.g(Word{}, true), b.one());
    report.add(s.finish());
  }
  {
    std::string anchor = left ? "Delta_P(g(h)) = sum g(h_2) (x) S(h_1) h_3" : "Delta_P(g(h)) = sum g(h_2) (x) h_3 Sinv(h_1)";
    CheckScope s(std::string("coaction of g (") + (left ? "left" : "right") + ")", anchor);
    for (const auto& w : hb) {
      TotalElement lhs = b.coaction(t.g(w));
      TotalElement rhs;
      for (ChartId i : b.charts()) rhs.locals.emplace(i, TensorElement({b.chart_algebra(i), H, H}));
      for (const auto& [k, c] : Hopf.coproduct_iterated(Element::word(H, w), 2).terms()) {
        Element leg = left ? Hopf.antipode(k[0]) * Element::word(H, k[2])
                           : Element::word(H, k[2]) * Hopf.antipode_inv(k[0]);
        for (ChartId i : b.charts()) {
          TensorElement gi = t.chart_g(i, k[1]);
          for (const auto& [gk, gc] : gi.terms()) {
            rhs.locals.at(i).add_product(
                {Element::word(b.chart_algebra(i), gk[0]), Element::word(H, gk[1]), leg}, c * gc);
          }
        }
      }
      s.expect_equal(H->word_str(w), lhs, rhs);
    }
    s.set_detail(bound);
    report.add(s.finish("monomials"));
  }
  {
    std::string anchor = left ? "sum g(h_1) g^-1(h_2) = eps(h) 1 = sum g^-1(h_1) g(h_2)"
                              : "sum g(h_2) g^-1(h_1) = eps(h) 1 = sum g^-1(h_2) g(h_1)";
    CheckScope s("convolution inverse of g in P", anchor);
    for (const auto& w : hb) {
      TotalElement a = b.zero(), c2 = b.zero();
      for (const auto& [k, c] : Hopf.coproduct(w).terms()) {
        const Word& first = left ? k[0] : k[1];
        const Word& second = left ? k[1] : k[0];
        a += c * (t.g(first) * t.g(second, true));
        c2 += c * (t.g(first, true) * t.g(second));
      }
      TotalElement eps = Hopf.counit(w) * b.one();
      s.expect_equal(H->word_str(w) + " (g, g^-1)", a, eps);
      s.expect_equal(H->word_str(w) + " (g^-1, g)", c2, eps);
    }
    s.set_detail(bound);
    report.add(s.finish("cases"));
  }

  bool complete = true;
  const auto span = b.spanning_set(d, &complete);
  const std::string span_detail = std::to_string(span.size()) + " spanning elements of P up to degree " +
                                  std::to_string(d) + (complete ? "" : " (spanning set incomplete at this bound)");
  {
    std::string anchor = left ? "alpha(b (x) h) = sum b tau_i(h_1) (x) h_2" : "alpha(b (x) h) = sum tau_i(h_1) b (x) h_2";
    CheckScope s("chart formula of the action", anchor);
    for (const auto& f : span) {
      TotalElement got = t.apply(f);
      for (ChartId i : b.charts()) {
        const auto& loc = f.locals.at(i);
        TensorElement want(loc.slots());
        const LinMap& tau = *t.family().taus.at(i);
        for (const auto& [k, c] : loc.terms()) {
          Element x = Element::word(loc.slots()[0], k[0]);
          for (const auto& [dk, dc] : Hopf.coproduct(k[1]).terms()) {
            Element v = left ? x * tau.apply(dk[0]) : tau.apply(dk[0]) * x;
            want.add_product({v, Element::word(H, dk[1])}, c * dc);
          }
        }
        s.expect_equal("chart " + chart_str(i) + " of " + f.str(), got.locals.at(i), want);
      }
    }
    s.set_detail(span_detail);
    report.add(s.finish());
  }
  {
    CheckScope s("equivariance of the action", "Delta_P(alpha(f)) = (alpha (x) id) Delta_P(f)");
    for (const auto& f : span) {
      s.expect_equal(f.str(), b.coaction(t.apply(f)), t.apply(b.coaction(f)));
    }
    s.set_detail(span_detail);
    report.add(s.finish());
  }
  bool base_complete = true;
  const auto base = b.base_spanning_set(d, &base_complete);
  {
    CheckScope s("action fixes iota(B)", "alpha(iota(b)) = iota(b)");
    for (const auto& x : base) {
      TotalElement e = b.base_embed(x);
      s.expect_equal(x.str(), t.apply(e), e);
    }
    report.add(s.finish());
  }
  {
    std::string anchor = left ? "alpha(iota(b) f) = iota(b) alpha(f)" : "alpha(f iota(b)) = alpha(f) iota(b)";
    CheckScope s(std::string(left ? "left" : "right") + " iota(B)-linearity of the action", anchor);
    for (const auto& x : base) {
      TotalElement e = b.base_embed(x);
      for (const auto& f : span) {
        if (std::max(0, x.parts.begin()->second.degree()) + std::max(0, f.degree()) > 2 * d) continue;
        if (left) {
          s.expect_equal(x.str() + " . " + f.str(), t.apply(e * f), e * t.apply(f));
        } else {
          s.expect_equal(f.str() + " . " + x.str(), t.apply(f * e), t.apply(f) * e);
        }
      }
    }
    s.set_detail(std::to_string(base.size()) + " base elements against the spanning set of P");
    report.add(s.finish());
  }
  {
    CheckScope s("kernel preservation", "chi_i(f) = 0 implies chi_i(alpha(f)) = 0");
    for (ChartId i : b.charts()) {
      bool kc = true;
      for (const auto& f : b.kernel_elements(i, d, &kc)) {
        TotalElement a = t.apply(f);
        if (a.locals.at(i).is_zero()) {
          s.pass();
        } else {
          s.fail("chart " + chart_str(i) + " of " + f.str(), a.locals.at(i).str(), "0");
        }
      }
    }
    report.add(s.finish());
  }
  report.note("reconstructed chart-change convention: phi_ij(b (x) h) = sum b tau_ij(h_1) (x) h_2");
  if (!left) report.note("right transformations are related to left ones by g_right = g_left o S^-1");
  return report;
}

// ------------------------------------------------------- witness search

std::optional<NonAutomorphismWitness> find_non_automorphism_witness(const GaugeTransformation& t, int d,
                                                                     std::size_t* pairs_checked) {
  const auto& b = *t.bundle();
  const auto span = b.spanning_set(d);
  std::vector<int> deg;
  deg.reserve(span.size());
  // Generating degree of a spanning element: that of its last-chart local, or
  // of the first chart for kernel elements.
  for (const auto& f : span) {
    int g = -1;
    for (auto it = f.locals.rbegin(); it != f.locals.rend() && g < 0; ++it) g = it->second.degree();
    deg.push_back(std::max(g, 0));
  }
  std::size_t checked = 0;
  std::optional<NonAutomorphismWitness> first;
  for (int total = 0; total <= d; ++total) {
    for (std::size_t a = 0; a < span.size(); ++a) {
      for (std::size_t c = 0; c < span.size(); ++c) {
        if (deg[a] + deg[c] != total) continue;
        ++checked;
        TotalElement lhs = t.apply(span[a] * span[c]);
        TotalElement rhs = t.apply(span[a]) * t.apply(span[c]);
        if (lhs == rhs) continue;
        NonAutomorphismWitness w{span[a].str(), span[c].str(), span[a], span[c], lhs, rhs, std::nullopt};
        // rhs = factor * lhs?
        for (const auto& [i, loc] : lhs.locals) {
          if (loc.is_zero()) continue;
          const auto& [k, c0] = *loc.terms().begin();
          auto it = rhs.locals.at(i).terms().find(k);
          if (it != rhs.locals.at(i).terms().end() && c0.is_unit()) {
            Scalar f = it->second * c0.unit_inverse();
            if (f * lhs == rhs) w.factor = f;
          }
          break;
        }
        if (w.factor) {
          if (pairs_checked) *pairs_checked = checked;
          return w;
        }
        if (!first) first = std::move(w);
      }
    }
    if (first) break;
  }
  if (pairs_checked) *pairs_checked = checked;
  return first;
}

// ------------------------------------------------------------ matrices

std::optional<ElementMatrix> matrix_inverse(const ElementMatrix& b, int d) {
  const std::size_t n = b.size();
  if (n == 0) return ElementMatrix{};
  for (const auto& row : b) {
    if (row.size() != n) throw Error("matrix_inverse needs a square matrix");
  }
  const auto& A = b[0][0].presentation();
  const auto basis = A->basis(d);
  const std::size_t nb = basis.size();
  std::map<std::tuple<int, std::size_t, std::size_t, Word>, std::size_t> rows;
  auto row = [&](int side, std::size_t k, std::size_t l, const Word& w) {
    return rows.emplace(std::make_tuple(side, k, l, w), rows.size()).first->second;
  };
  std::vector<SparseVector> cols(n * n * nb);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t wi = 0; wi < nb; ++wi) {
        auto& col = cols[(r * n + c) * nb + wi];
        Element x = Element::word(A, basis[wi]);
        for (std::size_t k = 0; k < n; ++k) {
          for (const auto& [w, s] : (b[k][r] * x).terms()) col[row(0, k, c, w)] += s;
        }
        for (std::size_t l = 0; l < n; ++l) {
          for (const auto& [w, s] : (x * b[c][l]).terms()) col[row(1, r, l, w)] += s;
        }
      }
    }
  }
  SparseVector rhs;
  for (std::size_t k = 0; k < n; ++k) {
    rhs[row(0, k, k, Word{})] = Scalar(1L);
    rhs[row(1, k, k, Word{})] = Scalar(1L);
  }
  for (auto& col : cols) {
    for (auto it = col.begin(); it != col.end();) it = it->second.is_zero() ? col.erase(it) : std::next(it);
  }
  UnitPivotSystem sys(std::move(cols), rows.size());
  SolveResult res = sys.solve(rhs);
  if (res.status != SolveStatus::Solved) return std::nullopt;
  ElementMatrix inv(n, std::vector<Element>(n, Element(A)));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t wi = 0; wi < nb; ++wi) {
        const Scalar& s = res.x[(r * n + c) * nb + wi];
        if (!s.is_zero()) inv[r][c] += Element::word(A, basis[wi], s);
      }
    }
  }
  // Re-verify both products exactly.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      Element p(A), q(A);
      for (std::size_t m = 0; m < n; ++m) {
        p += b[k][m] * inv[m][l];
        q += inv[k][m] * b[m][l];
      }
      Element id = k == l ? Element::one(A) : Element(A);
      if (!(p == id) || !(q == id)) return std::nullopt;
    }
  }
  return inv;
}

CorepMatrices corep_matrix_check(const GaugeFamily& fam, const ElementMatrix& u, int d, Report& report,
                                 CompatOrder order) {
  validate_family(fam);
  const auto& b = *fam.bundle;
  const auto& Hopf = *b.fibre();
  const std::size_t n = u.size();
  CorepMatrices out;
  out.corep = u;
  {
    CheckScope s("corepresentation property", "Delta(u_kl) = sum_m u_km (x) u_ml");
    for (std::size_t k = 0; k < n; ++k) {
      if (u[k].size() != n) throw Error("corepresentation matrix must be square");
      for (std::size_t l = 0; l < n; ++l) {
        TensorElement want({Hopf.algebra(), Hopf.algebra()});
        for (std::size_t m = 0; m < n; ++m) want += TensorElement::product_of({u[k][m], u[m][l]});
        s.expect_equal("u_" + std::to_string(k + 1) + std::to_string(l + 1), Hopf.coproduct(u[k][l]), want);
      }
    }
    report.add(s.finish("entries"));
  }
  for (ChartId i : b.charts()) {
    ElementMatrix bi(n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = 0; l < n; ++l) bi[k].push_back(fam.taus.at(i)->apply(u[k][l]));
    }
    out.per_chart[i] = bi;
    CheckScope s("invertibility of b_" + chart_str(i), "b_i b_i^-1 = 1 = b_i^-1 b_i");
    auto inv = matrix_inverse(bi, d);
    if (inv) {
      s.pass();
      out.inverses[i] = *inv;
      std::string txt;
      for (std::size_t k = 0; k < n; ++k) {
        txt += k ? "; [" : "[";
        for (std::size_t l = 0; l < n; ++l) txt += (l ? ", " : "") + (*inv)[k][l].str();
        txt += "]";
      }
      s.set_detail("inverse " + txt);
    } else {
      std::string first_row;
      for (std::size_t l = 0; l < n; ++l) first_row += (l ? ", " : "") + bi[0][l].str();
      s.fail("chart " + chart_str(i) + " row 1: [" + first_row + "]", "not invertible at bound " + std::to_string(d),
             "identity matrix");
    }
    report.add(s.finish());
  }
  {
    const bool printed = order == CompatOrder::Printed;
    std::string anchor = printed ? "pi^i_j(b_i,kl) = sum tau_ij(u_km) pi^j_i(b_j,mn) tau_ji(u_nl)"
                                 : "pi^i_j(b_i,kl) = sum tau_ji(u_km) pi^j_i(b_j,mn) tau_ij(u_nl)";
    CheckScope s(std::string("matrix overlap relation") + (printed ? " (printed order)" : ""), anchor);
    for (auto [i, j] : b.overlap_pairs()) {
      const auto& Bij = b.overlap(i, j);
      const LinMap& tij = *b.transition(i, j);
      const LinMap& tji = *b.transition(j, i);
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          Element lhs = b.restriction(i, j)->apply(out.per_chart[i][k][l]);
          Element rhs(Bij);
          for (std::size_t m = 0; m < n; ++m) {
            for (std::size_t q = 0; q < n; ++q) {
              Element mid = b.restriction(j, i)->apply(out.per_chart[j][m][q]);
              Element first(Bij), last(Bij);
              if (printed) {
                first = tij.apply(u[k][m]);
                last = tji.apply(u[q][l]);
              } else if (fam.side == Side::Left) {
                first = tji.apply(u[k][m]);
                last = tij.apply(u[q][l]);
              } else {
                first = tij.apply(Hopf.antipode_inv(u[k][m]));
                last = tij.apply(u[q][l]);
              }
              rhs += first * mid * last;
            }
          }
          s.expect_equal("entry " + std::to_string(k + 1) + std::to_string(l + 1) + " on overlap " + pair_str(i, j),
                         lhs, rhs);
        }
      }
    }
    report.add(s.finish("entries"));
  }
  return out;
}

}  // namespace qpfb
