#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpfb/hopf.hpp"
#include "qpfb/linmap.hpp"
#include "qpfb/morphism.hpp"
#include "qpfb/report.hpp"
#include "qpfb/tensor.hpp"

namespace qpfb {

using ChartId = int;
using ChartPair = std::pair<ChartId, ChartId>;

/// Charts B_i, overlaps B_ij = B_ji and restrictions pi^i_j : B_i -> B_ij.
struct Cover {
  std::vector<ChartId> charts;
  std::map<ChartId, PresentationPtr> chart_algebras;
  /// Keyed by the ordered pair (i, j) with i < j.
  std::map<ChartPair, PresentationPtr> overlap_algebras;
  /// Keyed by (i, j): pi^i_j.
  std::map<ChartPair, MorphismPtr> restrictions;
};

/// Transition functions tau_ij : H -> B_ij. Only one direction of each pair
/// needs to be declared; the other is tau_ij o S.
struct TransitionData {
  HopfPtr fibre;
  std::map<ChartPair, MorphismPtr> maps;
};

/// Tuple (f_i) of chart elements agreeing on overlaps.
struct BaseElement {
  std::map<ChartId, Element> parts;
  std::string str() const;
  friend bool operator==(const BaseElement& a, const BaseElement& b) { return a.parts == b.parts; }
};

/// Element of P stored through all of its chart images chi_i(f) in B_i (x) H.
/// Higher-rank locals carry extra passive H legs (values of the coaction).
struct TotalElement {
  std::map<ChartId, TensorElement> locals;

  TotalElement& operator+=(const TotalElement& o);
  TotalElement& operator-=(const TotalElement& o);
  friend TotalElement operator+(TotalElement a, const TotalElement& b) { return a += b; }
  friend TotalElement operator-(TotalElement a, const TotalElement& b) { return a -= b; }
  friend TotalElement operator*(const TotalElement& a, const TotalElement& b);
  friend TotalElement operator*(const Scalar& s, TotalElement a);
  friend bool operator==(const TotalElement& a, const TotalElement& b) { return a.locals == b.locals; }
  bool is_zero() const;
  int degree() const;
  std::string str() const;
};

/// phi_ij(b (x) h (x) ...) = sum b tau_ij(h_1) (x) h_2 (x) ... on B_ij (x) H (x) ...
class ChartChange {
 public:
  ChartChange(ChartId i, ChartId j, LinMapPtr tau) : i_(i), j_(j), tau_(std::move(tau)) {}
  ChartId from() const { return j_; }
  ChartId to() const { return i_; }
  const LinMapPtr& tau() const { return tau_; }
  TensorElement apply(const TensorElement& t) const;

 private:
  ChartId i_, j_;
  LinMapPtr tau_;
};

class Bundle;
using BundlePtr = std::shared_ptr<const Bundle>;

class Bundle {
 public:
  struct Spec {
    std::string name;
    HopfPtr fibre;
    Cover cover;
    TransitionData transitions;
  };

  /// Validates the shape and runs the transition consistency check at
  /// `degree`; the result is kept as the bundle's consistency certificate.
  static BundlePtr create(Spec spec, int degree = 2);

  const std::string& name() const { return spec_.name; }
  const HopfPtr& fibre() const { return spec_.fibre; }
  const PresentationPtr& fibre_algebra() const { return spec_.fibre->algebra(); }
  const Cover& cover() const { return spec_.cover; }
  const std::vector<ChartId>& charts() const { return spec_.cover.charts; }
  const PresentationPtr& chart_algebra(ChartId i) const;
  const PresentationPtr& overlap(ChartId i, ChartId j) const;
  const MorphismPtr& restriction(ChartId i, ChartId j) const;
  /// Ordered pairs (i, j), i != j, for which an overlap exists.
  std::vector<ChartPair> overlap_pairs() const;
  /// tau_ij as a linear map H -> B_ij (declared, or derived as tau_ji o S).
  const LinMapPtr& transition(ChartId i, ChartId j) const;
  bool transition_declared(ChartId i, ChartId j) const;
  const std::map<ChartPair, MorphismPtr>& declared_transitions() const { return spec_.transitions.maps; }

  bool consistent() const { return consistency_.passed(); }
  const Report& consistency_report() const { return consistency_; }

  /// phi_ij; throws CertificateError if the transition data failed its check.
  ChartChange build_phi(ChartId i, ChartId j) const;

  /// First violated overlap (where, lhs, rhs) or nothing.
  std::optional<Witness> gluing_violation(const TotalElement& f) const;
  /// Validated total element; throws WitnessError on a gluing violation.
  TotalElement glue_element(std::map<ChartId, TensorElement> locals) const;
  std::optional<Witness> base_violation(const BaseElement& b) const;
  /// Throws WitnessError if the tuple does not agree on overlaps.
  BaseElement base_element(std::map<ChartId, Element> parts) const;
  BaseElement base_multiply(const BaseElement& a, const BaseElement& b) const;
  TotalElement base_embed(const BaseElement& b) const;
  TotalElement zero() const;
  TotalElement one() const;

  /// Chart-wise (id (x) Delta) on the last leg.
  TotalElement coaction(const TotalElement& f) const;
  /// Chart-wise (id (x) eps) on the last leg.
  TotalElement counit_leg(const TotalElement& f) const;

  /// Spanning set of P up to degree d (two-chart covers): lifts of chart
  /// monomials of the last chart plus kernel elements of the first chart.
  /// `complete` is cleared when some lift or kernel was undetermined.
  std::vector<TotalElement> spanning_set(int d, bool* complete = nullptr) const;
  /// Spanning set of the glued base algebra B (two-chart covers).
  std::vector<BaseElement> base_spanning_set(int d, bool* complete = nullptr) const;
  /// Elements f of the spanning family with chi_i(f) = 0.
  std::vector<TotalElement> kernel_elements(ChartId i, int d, bool* complete = nullptr) const;

 private:
  explicit Bundle(Spec spec) : spec_(std::move(spec)) {}
  Report check_consistency(int d) const;
  TotalElement lift_from(ChartId src, const TensorElement& local, bool* ok) const;
  std::optional<Element> lift_base(ChartId src, ChartId dst, const Element& b) const;

  Spec spec_;
  std::map<ChartPair, LinMapPtr> taus_;
  Report consistency_;

  friend Report check_transition_consistency(const Bundle& b, int d);
};

/// Well-definedness of every tau_ij, tau_ij(1) = 1, centrality of the images
/// in B_ij, tau_ji = tau_ij o S, phi_ij o phi_ji = id, and surjectivity of the
/// restrictions onto the overlap generators; all up to degree d.
Report check_transition_consistency(const Bundle& b, int d);

/// Some f in the source of m with m(f) = target, searching normal monomials
/// up to `max_degree`; nothing if none exists or elimination was undetermined.
std::optional<Element> solve_preimage(const Morphism& m, const Element& target, int max_degree);
/// Kernel of m restricted to normal monomials of degree <= d.
std::vector<Element> morphism_kernel(const Morphism& m, int d, bool* complete = nullptr);

/// Apply a linear map on slot i of a tensor.
TensorElement map_slot(const TensorElement& t, std::size_t i, const Morphism& m);

}  // namespace qpfb
