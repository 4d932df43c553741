#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qpfb/presentation.hpp"
#include "qpfb/report.hpp"
#include "qpfb/tensor.hpp"

namespace qpfb {

class HopfAlgebra;
using HopfPtr = std::shared_ptr<const HopfAlgebra>;

enum class StructureKind { Counit, Antipode, AntipodeInv };

/// Hopf structure on a presented algebra, given on generators. Delta and eps
/// extend multiplicatively, S and S^-1 antimultiplicatively; whether those
/// extensions respect the relations is part of check_hopf_axioms.
class HopfAlgebra {
 public:
  struct Spec {
    PresentationPtr algebra;
    /// One rank-2 tensor per generator.
    std::vector<TensorElement> coproduct;
    std::vector<Scalar> counit;
    std::vector<Element> antipode;
    std::optional<std::vector<Element>> antipode_inv;
  };

  /// Validates shapes only; run check_hopf_axioms for the axioms.
  static HopfPtr create(Spec spec);

  const PresentationPtr& algebra() const { return spec_.algebra; }
  const std::string& name() const { return spec_.algebra->name(); }
  const Spec& spec() const { return spec_; }
  bool has_antipode_inv() const { return spec_.antipode_inv.has_value(); }

  TensorElement coproduct(const Word& w) const;
  TensorElement coproduct(const Element& h) const;
  /// (Delta (x) id (x) ...) applied k times: k = 0 gives h as a rank-1 tensor.
  TensorElement coproduct_iterated(const Element& h, int k) const;
  /// Same legs via the other parenthesization (Delta applied to the last slot).
  TensorElement coproduct_iterated_right(const Element& h, int k) const;

  Scalar counit(const Word& w) const;
  Scalar counit(const Element& h) const;
  Element antipode(const Word& w) const;
  Element antipode(const Element& h) const;
  /// Throws Error if no inverse antipode is declared.
  Element antipode_inv(const Word& w) const;
  Element antipode_inv(const Element& h) const;

  /// Counit values are returned as scalar multiples of 1.
  Element structure_map(StructureKind kind, const Element& h) const;

 private:
  explicit HopfAlgebra(Spec spec) : spec_(std::move(spec)) {}
  Element anti_extend(const std::vector<Element>& images, const Word& w) const;

  Spec spec_;
  mutable std::mutex memo_mutex_;
  mutable std::map<Word, TensorElement, DegLex> delta_memo_;
};

/// Coassociativity, counit, both antipode identities, Delta and eps as algebra
/// maps, S and S^-1 respecting the relations, S^-1 S = S S^-1 = id; on every
/// normal monomial of degree <= d (pairs of total degree <= d for products).
Report check_hopf_axioms(const HopfAlgebra& h, int d);

}  // namespace qpfb
