#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qpfb/bundle.hpp"
#include "qpfb/linmap.hpp"
#include "qpfb/report.hpp"

namespace qpfb {

/// Chart maps tau_i : H -> B_i together with their convolution inverses
/// (twisted for right transformations).
struct GaugeFamily {
  std::string name;
  Side side = Side::Left;
  BundlePtr bundle;
  std::map<ChartId, LinMapPtr> taus;
  std::map<ChartId, LinMapPtr> tau_invs;
};

/// Which order the transition factors take in the overlap compatibility
/// identity. Gluing: the order forced by gluing the chart g-maps through
/// phi_ij. Printed: tau_ij(h_1) ... tau_ji(h_3). They agree when the
/// transition images commute with the restricted chart values.
enum class CompatOrder { Gluing, Printed };

/// Right-hand side of the overlap compatibility identity on a monomial h of H.
Element compatibility_rhs(const GaugeFamily& fam, ChartId i, ChartId j, const Word& h,
                          CompatOrder order = CompatOrder::Gluing);

/// tau_i(1) = 1, overlap compatibility and the convolution-inverse identities,
/// on monomials of degree <= d.
Report check_family(const GaugeFamily& fam, int d);

class GaugeTransformation {
 public:
  /// Runs check_family and the gluing of the chart g-maps; throws WitnessError
  /// on the first failure (in that order).
  static GaugeTransformation from_family(GaugeFamily fam, int d);
  /// No checks; verify_gauge reports what fails.
  static GaugeTransformation unchecked(GaugeFamily fam);
  static GaugeTransformation identity(const BundlePtr& b, Side side);

  Side side() const { return impl_->family.side; }
  const GaugeFamily& family() const { return impl_->family; }
  const BundlePtr& bundle() const { return impl_->family.bundle; }
  const std::string& name() const { return impl_->family.name; }

  /// Chart g-map: left sum tau_i(h_2) (x) S(h_1) h_3, right sum tau_i(h_2) (x) h_3 S^-1(h_1).
  TensorElement chart_g(ChartId i, const Word& h, bool inverse = false) const;
  /// Glued g(h) (no validation; see verify_gauge).
  TotalElement g(const Word& h, bool inverse = false) const;
  TotalElement g(const Element& h, bool inverse = false) const;

  /// Left: sum f_0 g(f_1); right: sum g(f_1) f_0. Locals may carry extra
  /// passive H legs after the first two slots.
  TotalElement apply(const TotalElement& f) const;

 private:
  struct Impl {
    GaugeFamily family;
    mutable std::mutex mutex;
    mutable std::map<std::tuple<ChartId, Word, bool>, TensorElement> memo;
  };
  explicit GaugeTransformation(GaugeFamily fam);
  std::shared_ptr<const Impl> impl_;
};

/// (s o t)(f) = s(t(f)).
GaugeTransformation compose(const GaugeTransformation& s, const GaugeTransformation& t);
GaugeTransformation invert(const GaugeTransformation& t);
/// tau_r = tau_l o S^-1 chart-wise (so g_right = g_left o S^-1).
GaugeTransformation left_to_right(const GaugeTransformation& t);
/// tau_l = tau_r o S chart-wise.
GaugeTransformation right_to_left(const GaugeTransformation& t);

/// Gluing, g(1) = 1, coaction property, convolution inverses in P, chart
/// formula, equivariance, module linearity, fixing iota(B), kernel preservation.
Report verify_gauge(const GaugeTransformation& t, int d);

struct NonAutomorphismWitness {
  std::string f_label;
  std::string g_label;
  TotalElement f, g;
  /// alpha(f g) and alpha(f) alpha(g).
  TotalElement lhs, rhs;
  /// rhs = factor * lhs when the two sides are proportional.
  std::optional<Scalar> factor;
};

/// Searches pairs of spanning elements of P with total degree <= d, in
/// degree-then-index order. Among failing pairs of the lowest failing degree
/// the first one whose sides differ by a scalar factor is preferred.
std::optional<NonAutomorphismWitness> find_non_automorphism_witness(const GaugeTransformation& t, int d,
                                                                     std::size_t* pairs_checked = nullptr);

using ElementMatrix = std::vector<std::vector<Element>>;

struct CorepMatrices {
  ElementMatrix corep;
  std::map<ChartId, ElementMatrix> per_chart;
  std::map<ChartId, ElementMatrix> inverses;
};

/// Verifies that u is a corepresentation, extracts b_i = tau_i(u), solves for
/// exact inverses over normal monomials of B_i up to degree d, and checks the
/// matrix form of the overlap compatibility.
CorepMatrices corep_matrix_check(const GaugeFamily& fam, const ElementMatrix& u, int d, Report& report,
                                 CompatOrder order = CompatOrder::Gluing);

/// Exact two-sided inverse of a square matrix over a presented algebra,
/// searching entries among normal monomials of degree <= d.
std::optional<ElementMatrix> matrix_inverse(const ElementMatrix& b, int d);

}  // namespace qpfb
