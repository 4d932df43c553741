#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qpfb/hopf.hpp"
#include "qpfb/linmap.hpp"
#include "qpfb/report.hpp"
#include "qpfb/tensor.hpp"

namespace qpfb {

/// Universal n-form a_0 da_1 ... da_n stored as a_0 (x) a_1 (x) ... (x) a_n
/// with every barred slot a nonempty word (the unit component projected out).
class UnivForm {
 public:
  UnivForm() = default;
  UnivForm(PresentationPtr base, int degree);

  static UnivForm from_element(const Element& a);
  /// da
  static UnivForm differential(const Element& a);

  const PresentationPtr& base() const { return base_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.is_zero(); }
  const TensorElement& terms() const& { return terms_; }
  TensorElement terms() && { return std::move(terms_); }

  /// Adds c a_0 da_1 ... da_n; terms with an empty barred slot vanish.
  void add_term(const std::vector<Word>& slots, const Scalar& c);
  /// omega . dx
  UnivForm append_d(const Element& x) const;

  UnivForm& operator+=(const UnivForm& o);
  UnivForm& operator-=(const UnivForm& o);
  UnivForm& operator*=(const Scalar& s);
  friend UnivForm operator+(UnivForm a, const UnivForm& b) { return a += b; }
  friend UnivForm operator-(UnivForm a, const UnivForm& b) { return a -= b; }
  friend UnivForm operator*(const Scalar& s, UnivForm a) { return a *= s; }
  friend bool operator==(const UnivForm& a, const UnivForm& b) {
    return a.base_ == b.base_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

  /// e.g. "x* d(x) - q d(x) d(y)"; parseable by the presentation-file reader.
  std::string str() const;

 private:
  void require_same(const UnivForm& o) const;

  PresentationPtr base_;
  int degree_ = 0;
  TensorElement terms_;
};

UnivForm d(const UnivForm& w);
/// Product in the universal differential algebra.
UnivForm form_multiply(const UnivForm& w, const UnivForm& v);
UnivForm operator*(const Element& a, const UnivForm& w);
UnivForm operator*(const UnivForm& w, const Element& a);

/// Kaehler 1-forms of a commutative algebra generated by Laurent pairs
/// (g g' = 1): the free module on dg over the pair representatives g, with
/// dg' = -g'^2 dg.
class KahlerForm {
 public:
  KahlerForm() = default;
  explicit KahlerForm(PresentationPtr base) : base_(std::move(base)) {}

  /// True if the algebra is commutative and every generator sits in a Laurent pair.
  static bool supported(const Presentation& p);
  static KahlerForm differential(const Element& a);
  /// a_0 da_1 -> a_0 d_K(a_1) on 1-forms.
  static KahlerForm project(const UnivForm& w);

  bool is_zero() const { return coeffs_.empty(); }
  KahlerForm& operator+=(const KahlerForm& o);
  friend KahlerForm operator*(const Element& a, const KahlerForm& w);
  friend bool operator==(const KahlerForm& a, const KahlerForm& b) { return a.coeffs_ == b.coeffs_; }
  std::string str() const;

 private:
  void add(Gen g, const Element& c);
  PresentationPtr base_;
  std::map<Gen, Element> coeffs_;
};

/// Linear map H -> forms of a fixed degree over a chart algebra, evaluated
/// on monomials of H and memoized.
class FormMap {
 public:
  using Fn = std::function<UnivForm(const Word&)>;
  FormMap(HopfPtr source, PresentationPtr base, int degree, Fn fn, std::string description);

  const HopfPtr& source() const { return source_; }
  const PresentationPtr& base() const { return base_; }
  int degree() const { return degree_; }
  const std::string& description() const { return description_; }

  UnivForm apply(const Word& h) const;
  UnivForm apply(const Element& h) const;

 private:
  HopfPtr source_;
  PresentationPtr base_;
  int degree_;
  Fn fn_;
  std::string description_;
  mutable std::mutex memo_mutex_;
  mutable std::map<Word, UnivForm, DegLex> memo_;
};
using FormMapPtr = std::shared_ptr<const FormMap>;

/// Local connection form A : H -> Omega^1(B_i) with A(1) = 0.
struct ConnectionForm {
  std::string name;
  Side side = Side::Left;
  FormMapPtr A;
  /// Defining values on monomials when the connection was given as a table.
  std::map<Word, UnivForm, DegLex> values;
};

/// Connection from values on normal monomials of H (all others map to 0);
/// throws Error if a value is given on 1 or has the wrong degree or base.
ConnectionForm connection_from_table(std::string name, Side side, HopfPtr h, PresentationPtr base,
                                     std::map<Word, UnivForm, DegLex> values);

/// Chart-local element of Omega(B_i) (x) H: sum omega_w (x) w.
struct LocalHorizontal {
  PresentationPtr base;
  PresentationPtr fibre;
  int degree = 0;
  std::map<Word, UnivForm, DegLex> parts;

  void add(const Word& h, const UnivForm& w);
  LocalHorizontal& operator+=(const LocalHorizontal& o);
  LocalHorizontal& operator-=(const LocalHorizontal& o);
  friend bool operator==(const LocalHorizontal& a, const LocalHorizontal& b) {
    return a.degree == b.degree && a.parts == b.parts;
  }
  std::string str() const;
};

LocalHorizontal horizontal(const UnivForm& w, const PresentationPtr& fibre, const Word& h);

/// Left: D(w (x) h) = dw (x) h - (-1)^|w| sum w A(h_1) (x) h_2.
/// Right: D(w (x) h) = dw (x) h - sum A(h_1) w (x) h_2.
LocalHorizontal local_covariant_derivative(const ConnectionForm& A, const LocalHorizontal& e);

/// Chart action on horizontal forms: left sum w tau(h_1) (x) h_2, right sum tau(h_1) w (x) h_2.
LocalHorizontal act_on_forms(const LinMap& tau, Side side, const LocalHorizontal& e);

/// Left: A'(h) = sum tau^-1(h_1) A(h_2) tau(h_3) + sum tau^-1(h_1) d tau(h_2).
/// Right: A'(h) = sum tau(h_3) A(h_2) tau^-1(h_1) - sum tau(h_2) d tau^-1(h_1).
ConnectionForm gauge_transform_connection(const ConnectionForm& A, const LinMapPtr& tau, const LinMapPtr& tau_inv);

/// Left: F(h) = dA(h) + sum A(h_1) A(h_2). Right: F(h) = dA(h) - sum A(h_2) A(h_1).
FormMapPtr curvature(const ConnectionForm& A);

/// A'(1) = 0, F_A'(h) = sum tau^-1(h_1) F_A(h_2) tau(h_3) (right: sum tau(h_3)
/// F_A(h_2) tau^-1(h_1)), D' alpha = alpha D and D'^2 alpha = alpha D^2 on
/// chart monomials, all up to degree d.
Report check_curvature_covariance(const ConnectionForm& A, const LinMapPtr& tau, const LinMapPtr& tau_inv, int d);

struct IdealSpec {
  std::string name;
  Side side = Side::Left;
  LinMapPtr tau;
  LinMapPtr tau_inv;
  /// Generators r of the Ad-invariant right ideal R of H.
  std::vector<Element> generators;
  std::optional<ConnectionForm> connection;
};

/// Conditions under which a gauge transformation maps connections of the
/// calculus defined by R to connections: centrality of d(B_i) against
/// tau(H), annihilation of R by the inhomogeneous term, Ad-invariance of
/// the generators, and A'(r) = 0 for a supplied connection. The Kaehler
/// calculus is used for commutative Laurent charts, the universal one otherwise.
Report check_ideal_conditions(const IdealSpec& spec, int d);

}  // namespace qpfb
